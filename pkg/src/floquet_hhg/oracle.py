"""Brute-force ground truth: direct integration of the driven emitter
coupled to a box-discretized photon continuum.

The excitation-number-conserving Hamiltonian closes on the single
excitation sector (emitter amplitude plus one amplitude per retained
photon mode), so the exact dynamics reduces to a linear ODE with the
time-dependent diagonal eps_d + A*sin(omega*t), integrated here by
classical fixed-step RK4.  Every spectral-analysis result is validated
against this integrator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .model import TWO_PI, Grid1D, ModelParams

#: Acceptable total norm drift over a full run.
NORM_DRIFT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class DiscretizedSystem:
    """Box-normalized single-excitation system: modes k_j = 2*pi*j/L for
    j in [-N/2, N/2] without 0, retaining |k_j| <= k_c; couplings
    V_j = sqrt(4*pi*|k_j|/L) vanish beyond the cutoff."""

    params: ModelParams
    box_length: float
    n_modes: int
    k: np.ndarray
    V: np.ndarray

    @property
    def delta_k(self) -> float:
        return TWO_PI / self.box_length

    @property
    def n_retained(self) -> int:
        return int(self.k.size)


@dataclass(frozen=True, eq=False)
class SectorState:
    """Amplitudes of the single-excitation sector at one instant."""

    psi_d: complex
    psi_k: np.ndarray
    t: float

    @property
    def norm_sq(self) -> float:
        return abs(self.psi_d) ** 2 + float(np.sum(np.abs(self.psi_k) ** 2))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled evolution: dense (t, psi_d) series plus the final state."""

    times: np.ndarray
    psi_d: np.ndarray
    final: SectorState
    system: DiscretizedSystem
    dt: float
    norm_drift: float


def discretize(params: ModelParams, box_length: float = 400.0,
               n_modes: int = 8192) -> DiscretizedSystem:
    """Build the box-normalized mode grid and couplings."""
    if box_length <= 0.0:
        raise ValueError("box_length must be positive")
    if n_modes < 64:
        raise ValueError("n_modes must be at least 64")
    if n_modes % 2:
        raise ValueError("n_modes must be even")
    if math.pi * n_modes / box_length < params.k_c:
        raise ValueError(
            f"n_modes={n_modes} too small to cover (-k_c, k_c) at "
            f"box_length={box_length}")
    j = np.arange(-n_modes // 2, n_modes // 2 + 1)
    j = j[j != 0]
    k = TWO_PI * j / box_length
    keep = np.abs(k) <= params.k_c
    k = k[keep]
    V = np.sqrt(4.0 * math.pi * np.abs(k) / box_length)
    return DiscretizedSystem(params=params, box_length=float(box_length),
                             n_modes=int(n_modes), k=k, V=V)


def evolve(system: DiscretizedSystem, psi0: SectorState | None = None,
           t_end: float = 20.0, dt: float = 1e-3,
           sample_stride: int = 10) -> Trajectory:
    """RK4 integration of the sector ODE up to t_end.

    The drive is evaluated exactly inside the right-hand side (no
    stroboscopic approximation).  Norm drift beyond ``NORM_DRIFT_TOL``
    aborts the run; halve dt in that case.
    """
    if t_end <= 0.0 or dt <= 0.0:
        raise ValueError("t_end and dt must be positive")
    if sample_stride < 1:
        raise ValueError("sample_stride must be at least 1")
    params = system.params
    n_steps = max(1, int(round(t_end / dt)))
    h = t_end / n_steps

    k = system.k
    V = system.V
    lam = params.lambda_
    eps_d = params.epsilon_d
    A = params.A
    omega = params.omega
    eps_k = np.abs(k)

    if psi0 is None:
        pd = 1.0 + 0.0j
        pk = np.zeros(k.shape, dtype=complex)
    else:
        pd = complex(psi0.psi_d)
        pk = np.array(psi0.psi_k, dtype=complex)
        if pk.shape != k.shape:
            raise ValueError("psi0 does not match the retained mode grid")
    norm0 = abs(pd) ** 2 + float(np.sum(np.abs(pk) ** 2))

    def rhs(t: float, yd: complex, yk: np.ndarray):
        drive = eps_d + A * math.sin(omega * t)
        dd = -1j * (drive * yd + lam * np.sum(V * yk))
        dk = -1j * (eps_k * yk + (lam * yd) * V)
        return dd, dk

    times = [0.0]
    series = [pd]
    t = 0.0
    for step in range(1, n_steps + 1):
        d1, k1 = rhs(t, pd, pk)
        d2, k2 = rhs(t + 0.5 * h, pd + 0.5 * h * d1, pk + 0.5 * h * k1)
        d3, k3 = rhs(t + 0.5 * h, pd + 0.5 * h * d2, pk + 0.5 * h * k2)
        d4, k4 = rhs(t + h, pd + h * d3, pk + h * k3)
        pd = pd + (h / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4)
        pk = pk + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = step * h
        if step % sample_stride == 0 or step == n_steps:
            times.append(t)
            series.append(pd)
    norm1 = abs(pd) ** 2 + float(np.sum(np.abs(pk) ** 2))
    drift = abs(norm1 - norm0)
    if drift > NORM_DRIFT_TOL:
        raise ConvergenceError(
            f"norm drift {drift:.3e} exceeds {NORM_DRIFT_TOL:.1e} over "
            f"t_end={t_end}; decrease dt={dt}")
    final = SectorState(psi_d=pd, psi_k=pk, t=t)
    return Trajectory(times=np.array(times), psi_d=np.array(series),
                      final=final, system=system, dt=h, norm_drift=drift)


def survival_probability(trajectory: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """Series (t, |psi_d|^2); quantum beats allowed, no monotonicity."""
    return trajectory.times, np.abs(trajectory.psi_d) ** 2


def photon_spectrum(system: DiscretizedSystem, state: SectorState
                    ) -> tuple[np.ndarray, np.ndarray, str | None]:
    """Density-normalized photon spectrum (k_j, |psi_k|^2 * L / 2*pi).

    Comparable with the continuum spectrum once the excited state has
    decayed; a warning string is returned if called too early.
    """
    warning = None
    survival = abs(state.psi_d) ** 2
    if survival >= 1e-3:
        warning = (f"photon spectrum sampled before decay: survival "
                   f"{survival:.3e} >= 1e-3")
    spec = np.abs(state.psi_k) ** 2 * system.box_length / TWO_PI
    return system.k.copy(), spec, warning


def spatial_field(system: DiscretizedSystem, state: SectorState, xgrid
                  ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Position-space photon field f(x) = (1/sqrt(L)) sum_j e^{i k_j x}
    psi_j and its intensity |f|^2; x must stay inside the box."""
    if isinstance(xgrid, Grid1D):
        if xgrid.kind != "position-x":
            raise ValueError(f"expected a position-x grid, got {xgrid.kind}")
        x = xgrid.points
    else:
        x = np.asarray(xgrid, dtype=float)
    half = 0.5 * system.box_length
    if np.any(np.abs(x) >= half):
        raise ValueError(f"position grid must stay inside (-{half}, {half})")
    phases = np.exp(1j * np.outer(x, system.k))
    f = np.sum(phases * state.psi_k[None, :], axis=1) / math.sqrt(
        system.box_length)
    return x, f, np.abs(f) ** 2
