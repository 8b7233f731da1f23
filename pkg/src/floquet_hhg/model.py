"""Physical parameters, grids, and Floquet-channel bookkeeping.

Units: hbar = c = 1.  The photon dispersion is eps_k = |k| with a sharp
coupling cutoff at |k| = k_c, and the drive enters only through the
instantaneous level energy eps_d + A*sin(omega*t).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np

TWO_PI = 2.0 * math.pi

#: Default half-width of the Floquet ladder window [-N, N].
DEFAULT_WINDOW = 32

GridKind = Literal["momentum-k", "position-x", "time-t"]


@dataclass(frozen=True)
class ModelParams:
    """Driven-emitter parameter bundle.

    ``epsilon_d`` is the bare excited-level energy, ``A`` and ``omega`` the
    drive amplitude and frequency, ``lambda_`` the emitter-continuum
    coupling, and ``k_c`` the momentum cutoff of the coupling.
    """

    epsilon_d: float
    A: float
    omega: float
    lambda_: float
    k_c: float = TWO_PI

    def __post_init__(self) -> None:
        for name in ("epsilon_d", "A", "omega", "lambda_", "k_c"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ValueError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.omega <= 0.0:
            raise ValueError("omega must be positive")
        if self.k_c <= 0.0:
            raise ValueError("k_c must be positive")
        if self.lambda_ < 0.0:
            raise ValueError("lambda_ must be nonnegative")

    @property
    def period(self) -> float:
        """Drive period 2*pi/omega (always derived, never stored)."""
        return TWO_PI / self.omega

    @property
    def a_over_omega(self) -> float:
        return self.A / self.omega


def make_model(epsilon_d: float, A: float, omega: float, lambda_: float,
               k_c: float = TWO_PI) -> ModelParams:
    """Validate and bundle the five physical numbers of the model."""
    return ModelParams(epsilon_d=epsilon_d, A=A, omega=omega,
                       lambda_=lambda_, k_c=k_c)


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Strictly increasing 1D grid, tagged by which axis it discretizes."""

    points: np.ndarray
    kind: GridKind

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("grid needs at least two points in one dimension")
        if not np.all(np.diff(pts) > 0.0):
            raise ValueError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)
        if self.kind not in ("momentum-k", "position-x", "time-t"):
            raise ValueError(f"unknown grid kind {self.kind!r}")

    @classmethod
    def uniform(cls, lo: float, hi: float, count: int, kind: GridKind) -> "Grid1D":
        if count < 2:
            raise ValueError("count must be at least 2")
        if not hi > lo:
            raise ValueError("grid max must exceed grid min")
        return cls(points=np.linspace(lo, hi, count), kind=kind)

    @property
    def spacing(self) -> float:
        return float(self.points[1] - self.points[0])

    def __len__(self) -> int:
        return int(self.points.size)


@dataclass(frozen=True)
class ChannelSet:
    """Floquet channels n whose shifted energy eps_d - n*omega lies inside
    the continuum (0, k_c); these are the decay channels."""

    channels: tuple[int, ...]

    def __contains__(self, n: int) -> bool:
        return n in self.channels

    def __iter__(self) -> Iterator[int]:
        return iter(self.channels)

    def __len__(self) -> int:
        return len(self.channels)


def open_channels(params: ModelParams,
                  window: tuple[int, int] = (-DEFAULT_WINDOW, DEFAULT_WINDOW)) -> ChannelSet:
    """Enumerate the open decay channels inside an integer window.

    A channel n is open when 0 < eps_d - n*omega < k_c.  The window must be
    a finite integer range containing 0; channels depend only on eps_d,
    omega and k_c, never on the coupling or drive amplitude.
    """
    lo, hi = int(window[0]), int(window[1])
    if lo > 0 or hi < 0:
        raise ValueError("channel window must contain 0")
    chans = tuple(n for n in range(lo, hi + 1)
                  if 0.0 < params.epsilon_d - n * params.omega < params.k_c)
    return ChannelSet(channels=chans)
