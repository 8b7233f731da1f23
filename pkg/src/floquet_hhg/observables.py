"""Emission observables assembled from the resonance pole state.

All three observables share the same ingredients: the pole z_d, the ladder
coefficients R[n]/L[n], the normalization N_d, and the emission prefactor
N_d * sum_n L[n].  Writing zeta_n = z_d - n*omega for the shifted pole of
channel n:

* photon line spectrum (continuum density normalization, no free scale):
      S(k) = lambda^2 * v_k^2 * | sum_n Kem * R[n] / (zeta_n - eps_k) |^2,
  with v_k^2 = 2|k| and Kem = N_d * sum L; each open channel contributes a
  Lorentzian line at eps_k = Re z_d - n*omega with half-width |Im z_d|.

* resonance part of the spatial field, kept as the sum of outgoing pole
  waves (pole term of the momentum integral per open channel):
      f(x, t) = -i*sqrt(2*pi) * lambda * Kem
                * sum_n R[n] * sqrt(2*zeta_n) * exp(-i*zeta_n*(t - |x|)).
  Each mode's intensity grows toward the light front at rate 2*|Im z_d|;
  cross terms between modes beat in (t - |x|) at multiples of omega.  The
  index pairing printed elsewhere (time pole of mode l against the space
  pole of mode -l) is available behind ``pairing="printed"``; the default
  outgoing pairing is the one the time-domain integrator confirms.

* survival amplitude of the bare excited state,
      c(t) = Kem * sum_n R[n] * exp(i*n*omega*t) * exp(-i*z_d*t),
  which at lambda = 0 collapses to the exact driven-level phase.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .model import TWO_PI, Grid1D
from .self_energy import Sheet
from .solver import ResonanceState

#: Default half-width of the emission-mode window.  The coherent spectrum
#: converges in the coefficient amplitudes (not their squares), which at
#: A/omega = 2 need |n| ~ 12 to reach the 1e-8 doubling bar.
DEFAULT_MODE_WINDOW = 12


@dataclass(frozen=True, eq=False)
class SpectrumDataset:
    """Photon spectrum on a momentum grid: coherent total plus the
    per-mode Lorentzian components labeled by emission mode m."""

    kgrid: np.ndarray
    total: np.ndarray
    lorentzians: dict[int, np.ndarray]
    mode_window: int

    @property
    def lorentzian_sum(self) -> np.ndarray:
        out = np.zeros_like(self.total)
        for m in sorted(self.lorentzians):
            out = out + self.lorentzians[m]
        return out


@dataclass(frozen=True, eq=False)
class SpatialFieldDataset:
    """Resonance field on a position grid at fixed time, with its exact
    diagonal/interference split: sum(diagonal) + interference == |field|^2
    pointwise."""

    xgrid: np.ndarray
    t: float
    field: np.ndarray
    diagonal: dict[int, np.ndarray]
    interference: np.ndarray
    pairing: str
    mode_window: int

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.field) ** 2

    @property
    def diagonal_sum(self) -> np.ndarray:
        out = np.zeros(self.xgrid.shape)
        for m in sorted(self.diagonal):
            out = out + self.diagonal[m]
        return out


def _as_points(grid, kind: str) -> np.ndarray:
    if isinstance(grid, Grid1D):
        if grid.kind != kind:
            raise ValueError(f"expected a {kind} grid, got {grid.kind}")
        return grid.points
    return np.asarray(grid, dtype=float)


def _mode_range(state: ResonanceState, mode_window: int) -> range:
    if mode_window < 1:
        raise ValueError("mode window must be at least 1")
    if mode_window > state.window:
        raise ValueError(
            f"mode window {mode_window} exceeds solver window {state.window}")
    return range(-mode_window, mode_window + 1)


def _spectrum_amplitudes(state: ResonanceState, k: np.ndarray,
                         mode_window: int) -> dict[int, np.ndarray]:
    """Per-channel complex amplitude of the long-time photon state."""
    params = state.params
    eps_k = np.abs(k)
    kem = state.emission_constant
    v_k = np.sqrt(2.0 * eps_k)
    out: dict[int, np.ndarray] = {}
    for n in _mode_range(state, mode_window):
        zeta_n = state.z_d - n * params.omega
        out[n] = kem * state.R[n] * params.lambda_ * v_k / (zeta_n - eps_k)
    return out


def hhg_spectrum(state: ResonanceState, kgrid,
                 mode_window: int = DEFAULT_MODE_WINDOW) -> SpectrumDataset:
    """Long-time photon spectrum: coherent channel sum plus the per-mode
    Lorentzian components, keyed by emission mode m = -n.

    The grid must lie inside (-k_c, k_c); the spectrum is even in k.  The
    mode window is convergence-checked by doubling (when the solver window
    allows) and rejected if the peak values still move.
    """
    k = _as_points(kgrid, "momentum-k")
    if np.any(np.abs(k) >= state.params.k_c):
        raise ValueError("momentum grid must lie inside (-k_c, k_c)")

    def total_of(window: int) -> np.ndarray:
        amps = _spectrum_amplitudes(state, k, window)
        coherent = np.zeros(k.shape, dtype=complex)
        for n in sorted(amps):
            coherent += amps[n]
        return np.abs(coherent) ** 2

    total = total_of(mode_window)
    check_window = min(2 * mode_window, state.window)
    if check_window > mode_window:
        wide = total_of(check_window)
        peaks = np.where((total[1:-1] > total[:-2])
                         & (total[1:-1] >= total[2:]))[0] + 1
        if peaks.size and float(np.max(total[peaks])) > 0.0:
            drift = float(np.max(np.abs(wide[peaks] - total[peaks])
                                 / total[peaks]))
            if drift > 1e-8:
                raise ConvergenceError(
                    f"mode window {mode_window} not converged for the "
                    f"spectrum: doubling moves peaks by {drift:.3e}")
    amps = _spectrum_amplitudes(state, k, mode_window)
    lorentzians = {-n: np.abs(a) ** 2 for n, a in amps.items()
                   if np.max(np.abs(a)) > 0.0}
    return SpectrumDataset(kgrid=k, total=total, lorentzians=lorentzians,
                           mode_window=mode_window)


def _field_mode_amplitudes(state: ResonanceState, x: np.ndarray, t: float,
                           mode_window: int, pairing: str) -> dict[int, np.ndarray]:
    """Outgoing pole wave of each open channel at time t.

    Only channels on the second sheet carry a pole, so closed channels
    contribute nothing; at lambda = 0 there are no open channels and the
    field vanishes identically.
    """
    if pairing not in ("outgoing", "printed"):
        raise ValueError(f"unknown pairing {pairing!r}")
    params = state.params
    absx = np.abs(x)
    pref = -1j * np.sqrt(TWO_PI) * params.lambda_ * state.emission_constant
    out: dict[int, np.ndarray] = {}
    for n in _mode_range(state, mode_window):
        if state.sheet(n) is not Sheet.SECOND:
            continue
        zeta_n = state.z_d - n * params.omega
        residue = np.sqrt(2.0 * zeta_n)
        if pairing == "outgoing":
            wave = np.exp(-1j * zeta_n * (t - absx))
        else:
            zeta_mirror = state.z_d + n * params.omega
            wave = np.exp(-1j * zeta_n * t) * np.exp(1j * zeta_mirror * absx)
        out[n] = pref * state.R[n] * residue * wave
    return out


def resonance_spatial_field(state: ResonanceState, xgrid, t: float,
                            mode_window: int = DEFAULT_MODE_WINDOW,
                            pairing: str = "outgoing") -> SpatialFieldDataset:
    """Resonance-pole part of the emitted field at time t > 0, decomposed
    into per-mode diagonal intensities and the interference remainder.

    The diagonal term of emission mode m = -n is |amplitude_n|^2 and grows
    monotonically toward the light front with rate 2*|Im z_d|; the
    interference term oscillates in (t - |x|) with fundamental period
    2*pi/omega.  The split is algebraically exact.
    """
    if t <= 0.0:
        raise ValueError("t must be positive")
    x = _as_points(xgrid, "position-x")

    def field_of(window: int) -> np.ndarray:
        amps = _field_mode_amplitudes(state, x, t, window, pairing)
        total = np.zeros(x.shape, dtype=complex)
        for n in sorted(amps):
            total += amps[n]
        return total

    field = field_of(mode_window)
    check_window = min(2 * mode_window, state.window)
    if check_window > mode_window:
        wide = field_of(check_window)
        scale = float(np.max(np.abs(wide) ** 2))
        if scale > 0.0:
            drift = float(np.max(np.abs(np.abs(wide) ** 2
                                        - np.abs(field) ** 2))) / scale
            if drift > 1e-8:
                raise ConvergenceError(
                    f"mode window {mode_window} not converged for the "
                    f"spatial field: doubling moves it by {drift:.3e}")
    amps = _field_mode_amplitudes(state, x, t, mode_window, pairing)
    diagonal = {-n: np.abs(a) ** 2 for n, a in amps.items()}
    interference = np.abs(field) ** 2
    for m in diagonal:
        interference = interference - diagonal[m]
    return SpatialFieldDataset(xgrid=x, t=float(t), field=field,
                               diagonal=diagonal, interference=interference,
                               pairing=pairing, mode_window=mode_window)


def interference_decomposition(state: ResonanceState, xgrid, t: float,
                               mode_window: int = DEFAULT_MODE_WINDOW,
                               pairing: str = "outgoing") -> SpatialFieldDataset:
    """Diagonal/interference split of the resonance field; identical
    dataset to ``resonance_spatial_field`` (the split is always carried)."""
    return resonance_spatial_field(state, xgrid, t, mode_window=mode_window,
                                   pairing=pairing)


def survival_amplitude_floquet(state: ResonanceState, t):
    """Pole-subspace amplitude of the bare excited state at time(s) t.

    At t = 0 this is the pole-subspace overlap, close to but below 1; the
    continuum carries the small remainder.  For lambda = 0 the modulus is
    exactly 1 and the phase is the exact driven-level phase.
    """
    times = np.asarray(t, dtype=float)
    scalar = times.ndim == 0
    times = np.atleast_1d(times)
    params = state.params
    phases = np.zeros(times.shape, dtype=complex)
    for n in sorted(state.R):
        phases += state.R[n] * np.exp(1j * n * params.omega * times)
    out = state.emission_constant * phases * np.exp(-1j * state.z_d * times)
    if scalar:
        return complex(out[0])
    return out
