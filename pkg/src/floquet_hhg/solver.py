"""Nonlinear complex eigenvalue solver for the driven-emitter Floquet ladder.

After projecting the photon continuum into channel self-energies, the
remaining problem is an infinite tridiagonal ladder in the Floquet index n
with diagonal d_n(z) = eps_d + n*omega + lambda^2 * Sigma(n, z) and
off-diagonals -A/2i above / +A/2i below the diagonal (their product is
+A^2/4).  Folding the semi-infinite wings onto the n = 0 row turns the
eigenvalue problem into a scalar dispersion relation

    D(z) = z - eps_d - lambda^2*Sigma(0, z) - C_up(z) - C_down(z) = 0,

where C_up/C_down are continued fractions built from the wing rows,

    C(z) = (A^2/4) / (z - d_1 - (A^2/4) / (z - d_2 - ...)),

truncated with a zero tail at an adaptively chosen depth.  The eigenvalue
dependence of the self-energies makes the problem nonlinear; the root is
found by Newton iteration with the analytic derivative (Muller fallback),
seeded by the perturbative eigenvalue, with the Riemann sheet of every
channel frozen per run and re-checked once after convergence.

The pole's right/left ladder coefficients follow from the same continued
fractions (the left ladder is the transpose: drive sign flipped), and the
bilinear c-product normalization evaluates the continuum part of each
channel analytically through the self-energy derivative.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import ConvergenceError
from .model import DEFAULT_WINDOW, TWO_PI, ModelParams
from .perturbation import perturbative_eigenvalue
from .self_energy import Sheet, select_sheet, sigma, sigma_prime

SheetFn = Callable[[int], Sheet]


@dataclass(frozen=True)
class SolverOptions:
    """Knobs of the resonance solve; defaults suit weak coupling."""

    window: int = DEFAULT_WINDOW
    cf_depth: int = 64
    cf_max_depth: int = 8192
    cf_tol: float = 1e-13
    root_tol: float = 1e-12
    max_iterations: int = 60
    initial_guess: complex | None = None
    sheet_policy: str = "auto"  # "auto" | "first" (validation/debug only)

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError("window must be at least 1")
        if self.root_tol <= 0.0 or self.cf_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.sheet_policy not in ("auto", "first"):
            raise ValueError(f"unknown sheet policy {self.sheet_policy!r}")
        # the fraction must reach at least as deep as the coefficient window
        if self.cf_depth < self.window:
            object.__setattr__(self, "cf_depth", self.window)
        if self.cf_max_depth < self.cf_depth:
            object.__setattr__(self, "cf_max_depth", self.cf_depth)


@dataclass(frozen=True)
class ResonanceState:
    """Converged resonance pole of the principal Floquet mode.

    ``R``/``L`` map the ladder index n to right/left eigenvector
    coefficients (R[0] = 1 before normalization); ``N_d`` fixes the
    bilinear c-product to 1; ``K_d`` is the emission constant
    N_d/(2*pi) * sum_n R[n]; ``sheets`` records the per-channel Riemann
    sheet frozen during the solve.
    """

    params: ModelParams
    z_d: complex
    R: dict[int, complex]
    L: dict[int, complex]
    N_d: complex
    K_d: complex
    window: int
    sheets: dict[int, Sheet]
    mode: int = 0
    residual: float = 0.0
    iterations: int = 0
    cf_depth_used: int = 0

    def sheet(self, n: int) -> Sheet:
        return self.sheets.get(n, Sheet.FIRST)

    @property
    def r_sum(self) -> complex:
        return sum(self.R[n] for n in sorted(self.R))

    @property
    def l_sum(self) -> complex:
        return sum(self.L[n] for n in sorted(self.L))

    @property
    def emission_constant(self) -> complex:
        """Prefactor of the long-time photon amplitude, N_d * sum_n L[n];
        agrees with 2*pi*K_d in modulus to second order in the coupling."""
        return self.N_d * self.l_sum

    def open_modes(self) -> list[int]:
        """Emission mode labels m = -n of channels on the second sheet."""
        return sorted(-n for n, s in self.sheets.items() if s is Sheet.SECOND)


def frozen_sheets(params: ModelParams, re_z: float, span: int,
                  policy: str = "auto") -> dict[int, Sheet]:
    """Per-channel sheet choice frozen from the real part of the seed.

    Channels whose shifted energy re_z - n*omega falls inside (0, k_c) are
    classified open (second sheet) since the root is sought below the real
    axis; freezing avoids sheet flapping during Newton iteration.
    """
    out: dict[int, Sheet] = {}
    for n in range(-span, span + 1):
        zeta_re = re_z - n * params.omega
        if policy == "auto" and 0.0 < zeta_re < params.k_c:
            out[n] = Sheet.SECOND
        else:
            out[n] = Sheet.FIRST
    return out


def _sheet_fn(params: ModelParams, re_z: float, policy: str = "auto") -> SheetFn:
    def fn(n: int) -> Sheet:
        if policy == "auto" and 0.0 < re_z - n * params.omega < params.k_c:
            return Sheet.SECOND
        return Sheet.FIRST
    return fn


def _diag(params: ModelParams, z: complex, n: int, sheet_of: SheetFn,
          z_sigma: complex | None = None) -> complex:
    """Ladder diagonal d_n = eps_d + n*omega + lambda^2 * Sigma(n, .).

    ``z_sigma`` lets validation code freeze the self-energy argument
    independently of the resolvent argument.
    """
    zs = z if z_sigma is None else z_sigma
    term = 0.0 + 0.0j
    if params.lambda_ != 0.0:
        term = params.lambda_ ** 2 * sigma(params, n, zs, sheet_of(n))
    return params.epsilon_d + n * params.omega + term


def _chain(params: ModelParams, z: complex, direction: int, depth: int,
           sheet_of: SheetFn, z_sigma: complex | None = None,
           keep_levels: int = 0):
    """One wing continued fraction evaluated bottom-up at fixed depth.

    Returns (C, C', T) where T[m] for m = 1..keep_levels are the partial
    denominators T_m = z - d_{direction*m} - (A^2/4)/T_{m+1}; the
    eigenvector ratios along the wing are (+-A/2i) / T_m.
    """
    a2 = 0.25 * params.A * params.A
    zs = z_sigma
    levels: dict[int, complex] = {}
    if a2 == 0.0 and keep_levels == 0:
        return 0.0 + 0.0j, 0.0 + 0.0j, levels
    lam2 = params.lambda_ ** 2
    T = None
    Tp = None
    for m in range(depth, 0, -1):
        n = direction * m
        d_n = _diag(params, z, n, sheet_of, zs)
        dp_n = 0.0 + 0.0j
        if lam2 != 0.0 and zs is None:
            dp_n = lam2 * sigma_prime(params, n, z, sheet_of(n))
        if T is None:
            T_new = z - d_n
            Tp_new = 1.0 - dp_n
        else:
            if T == 0.0:
                raise ConvergenceError(
                    f"continued fraction hit a truncated-ladder resonance at "
                    f"level {direction * (m + 1)}")
            T_new = z - d_n - a2 / T
            Tp_new = 1.0 - dp_n + a2 * Tp / (T * T)
        T, Tp = T_new, Tp_new
        if m <= keep_levels:
            levels[m] = T
    if T == 0.0:
        raise ConvergenceError(
            "continued fraction hit a truncated-ladder resonance at level "
            f"{direction}")
    C = a2 / T
    Cp = -a2 * Tp / (T * T)
    return C, Cp, levels


def _chain_adaptive(params: ModelParams, z: complex, direction: int,
                    options: SolverOptions, sheet_of: SheetFn,
                    keep_levels: int = 0):
    """Double the truncation depth until the folded value is stable."""
    depth = max(options.cf_depth, keep_levels)
    if params.A == 0.0:
        C, Cp, levels = _chain(params, z, direction, depth, sheet_of,
                               keep_levels=keep_levels)
        return C, Cp, levels, depth
    prev = _chain(params, z, direction, depth, sheet_of,
                  keep_levels=keep_levels)
    while True:
        depth *= 2
        if depth > options.cf_max_depth:
            raise ConvergenceError(
                f"continued fraction not converged at depth {depth // 2} "
                f"(direction {direction:+d}, z={z})")
        cur = _chain(params, z, direction, depth, sheet_of,
                     keep_levels=keep_levels)
        if abs(cur[0] - prev[0]) <= max(options.cf_tol,
                                        options.cf_tol * abs(cur[0])):
            return cur[0], cur[1], cur[2], depth
        prev = cur


def continued_fraction(params: ModelParams, z: complex, direction: str,
                       depth: int | None = None,
                       options: SolverOptions | None = None,
                       sheets: SheetFn | None = None) -> complex:
    """Folded influence C_+(z) or C_-(z) of one wing of the ladder.

    ``direction`` is "up" (n >= 1 rows) or "down" (n <= -1).  With a
    ``depth`` the fraction is truncated there exactly; otherwise the depth
    is doubled adaptively until stable to the solver tolerance.
    """
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    sgn = 1 if direction == "up" else -1
    opts = options or SolverOptions()
    sheet_of = sheets or _sheet_fn(params, complex(z).real, opts.sheet_policy)
    if depth is not None:
        C, _, _ = _chain(params, complex(z), sgn, depth, sheet_of)
        return C
    C, _, _, _ = _chain_adaptive(params, complex(z), sgn, opts, sheet_of)
    return C


def _dispersion_core(params: ModelParams, z: complex, options: SolverOptions,
                     sheet_of: SheetFn):
    lam2 = params.lambda_ ** 2
    s0 = sigma(params, 0, z, sheet_of(0)) if lam2 != 0.0 else 0.0
    s0p = sigma_prime(params, 0, z, sheet_of(0)) if lam2 != 0.0 else 0.0
    cu, cup, _, d_up = _chain_adaptive(params, z, +1, options, sheet_of)
    cd, cdp, _, d_dn = _chain_adaptive(params, z, -1, options, sheet_of)
    D = z - params.epsilon_d - lam2 * s0 - cu - cd
    Dp = 1.0 - lam2 * s0p - cup - cdp
    return D, Dp, max(d_up, d_dn)


def dispersion(params: ModelParams, z: complex,
               options: SolverOptions | None = None,
               sheets: SheetFn | None = None) -> complex:
    """Scalar dispersion function D(z); zero exactly at quasi-energy poles.

    Sheets default to ``select_sheet`` at z itself.
    """
    opts = options or SolverOptions()
    z = complex(z)
    sheet_of = sheets
    if sheet_of is None:
        if opts.sheet_policy == "first":
            sheet_of = lambda n: Sheet.FIRST  # noqa: E731
        else:
            sheet_of = lambda n: select_sheet(params, n, z)  # noqa: E731
    D, _, _ = _dispersion_core(params, z, opts, sheet_of)
    return D


def _newton_muller(params: ModelParams, seed: complex, options: SolverOptions,
                   sheet_of: SheetFn):
    """Newton iteration on D with a Muller fallback on stagnation."""
    z = complex(seed)
    D, Dp, depth = _dispersion_core(params, z, options, sheet_of)
    best = (abs(D), z, depth, 0)
    history: list[tuple[complex, complex]] = [(z, D)]
    increases = 0
    for it in range(1, options.max_iterations + 1):
        if abs(D) < options.root_tol:
            return z, abs(D), depth, it - 1
        bad_slope = Dp == 0.0 or not cmath.isfinite(Dp)
        if (increases >= 3 or bad_slope) and len(history) >= 3:
            (z0, f0), (z1, f1), (z2, f2) = history[-3:]
            q = (z2 - z1) / (z1 - z0) if z1 != z0 else 0.5
            a = q * f2 - q * (1 + q) * f1 + q * q * f0
            b = (2 * q + 1) * f2 - (1 + q) ** 2 * f1 + q * q * f0
            c = (1 + q) * f2
            disc = cmath.sqrt(b * b - 4 * a * c)
            den = b + disc if abs(b + disc) > abs(b - disc) else b - disc
            if den == 0.0:
                z_new = z * (1.0 + 1e-9) + 1e-9j
            else:
                z_new = z2 - (z2 - z1) * 2 * c / den
            increases = 0
        elif bad_slope:
            z_new = z * (1.0 + 1e-9) + 1e-9j
        else:
            z_new = z - D / Dp
        if not cmath.isfinite(z_new):
            raise ConvergenceError(
                f"root iteration produced a non-finite step at iteration {it}")
        D_new, Dp_new, depth = _dispersion_core(params, z_new, options,
                                                sheet_of)
        if abs(D_new) >= abs(D):
            increases += 1
        else:
            increases = 0
        z, D, Dp = z_new, D_new, Dp_new
        history.append((z, D))
        if abs(D) < best[0]:
            best = (abs(D), z, depth, it)
    if best[0] < options.root_tol:
        return best[1], best[0], best[2], best[3]
    raise ConvergenceError(
        f"dispersion root not converged after {options.max_iterations} "
        f"iterations; best residual {best[0]:.3e} at z={best[1]}")


def right_coefficients(params: ModelParams, z_d: complex,
                       options: SolverOptions | None = None,
                       sheets: SheetFn | None = None) -> dict[int, complex]:
    """Right ladder coefficients R[n] on [-window, window], R[0] = 1.

    The wing ratios are R[n+1]/R[n] = (A/2i)/T_{n+1} upward and
    R[-(n+1)]/R[-n] = (-A/2i)/T_{-(n+1)} downward, with T the partial
    denominators of the converged continued fractions.
    """
    return _ladder_coefficients(params, z_d, options, sheets, drive_sign=+1.0)


def left_coefficients(params: ModelParams, z_d: complex,
                      options: SolverOptions | None = None,
                      sheets: SheetFn | None = None) -> dict[int, complex]:
    """Left ladder coefficients L[n]; solves the transposed recurrence.

    Transposition flips the sign of the drive off-diagonals, so the wing
    ratios acquire the opposite sign while the partial denominators are
    unchanged (they depend only on A^2).
    """
    return _ladder_coefficients(params, z_d, options, sheets, drive_sign=-1.0)


def _ladder_coefficients(params: ModelParams, z_d: complex,
                         options: SolverOptions | None, sheets: SheetFn | None,
                         drive_sign: float) -> dict[int, complex]:
    opts = options or SolverOptions()
    z_d = complex(z_d)
    sheet_of = sheets or _sheet_fn(params, z_d.real, opts.sheet_policy)
    N = opts.window
    coeffs: dict[int, complex] = {0: 1.0 + 0.0j}
    if params.A == 0.0:
        for n in range(-N, N + 1):
            coeffs.setdefault(n, 0.0 + 0.0j)
        return coeffs
    # A/2i with the transposition sign folded in
    up_num = drive_sign * complex(0.0, -0.5 * params.A)
    dn_num = -up_num
    _, _, t_up, _ = _chain_adaptive(params, z_d, +1, opts, sheet_of,
                                    keep_levels=N)
    _, _, t_dn, _ = _chain_adaptive(params, z_d, -1, opts, sheet_of,
                                    keep_levels=N)
    for m in range(1, N + 1):
        coeffs[m] = coeffs[m - 1] * up_num / t_up[m]
        coeffs[-m] = coeffs[-(m - 1)] * dn_num / t_dn[m]
    edge = max(abs(coeffs[N]), abs(coeffs[-N])) / abs(coeffs[0])
    if edge >= 1e-10:
        raise ConvergenceError(
            f"coefficient window {N} too small: edge magnitude {edge:.3e}")
    return coeffs


def _normalization(params: ModelParams, z_d: complex, R: dict[int, complex],
                   L: dict[int, complex], sheets: dict[int, Sheet]) -> complex:
    """Bilinear norm constant: the continuum part of channel n contributes
    -lambda^2 * Sigma'(n, z_d) on that channel's sheet."""
    lam2 = params.lambda_ ** 2
    total = 0.0 + 0.0j
    for n in sorted(R):
        w = L[n] * R[n]
        if w == 0.0:
            continue
        q_part = 0.0 + 0.0j
        if lam2 != 0.0:
            q_part = -lam2 * sigma_prime(params, n, z_d,
                                         sheets.get(n, Sheet.FIRST))
        total += w * (1.0 + q_part)
    if total == 0.0:
        raise ConvergenceError(
            "vanishing biorthonormal norm (exceptional point); not regularized")
    return 1.0 / total


def normalize(state: ResonanceState) -> ResonanceState:
    """Fix the eigenvector scale and the norm constant.

    The right/left ladders are rescaled jointly so their bilinear ladder
    product sums to 1 (all observables are invariant under the joint
    rescale), the overall phase is rotated so R[0] has positive real
    part, and N_d then captures the continuum dressing alone: with no
    coupling N_d = 1, and the full-space c-product equals 1 exactly.
    """
    ladder_product = sum(state.L[n] * state.R[n] for n in sorted(state.R))
    if ladder_product == 0.0:
        raise ConvergenceError(
            "vanishing ladder c-product (exceptional point); not regularized")
    scale = cmath.sqrt(ladder_product)
    R = {n: v / scale for n, v in state.R.items()}
    L = {n: v / scale for n, v in state.L.items()}
    if R[0].real < 0.0:
        R = {n: -v for n, v in R.items()}
        L = {n: -v for n, v in L.items()}
    N_d = _normalization(state.params, state.z_d, R, L, state.sheets)
    r_sum = sum(R[n] for n in sorted(R))
    K_d = N_d / TWO_PI * r_sum
    return replace(state, R=R, L=L, N_d=N_d, K_d=K_d)


def solve_resonance(params: ModelParams,
                    options: SolverOptions | None = None) -> ResonanceState:
    """Locate the principal resonance pole and build its normalized state.

    Newton iteration on D(z) from the perturbative seed with per-channel
    sheets frozen from the seed; if the converged root reclassifies any
    channel, the solve is repeated once from the new freeze.  The root
    must satisfy Im z_d <= 0 (up to roundoff), otherwise the sheet
    selection is faulty.
    """
    opts = options or SolverOptions()
    seed = opts.initial_guess
    if seed is None:
        seed = perturbative_eigenvalue(params, window=opts.window)
    z_seed = complex(seed)

    for attempt in range(2):
        sheet_of = _sheet_fn(params, z_seed.real, opts.sheet_policy)
        z_root, residual, depth, iters = _newton_muller(params, z_seed, opts,
                                                        sheet_of)
        if opts.sheet_policy == "first":
            break
        before = frozen_sheets(params, z_seed.real, opts.window, "auto")
        after = frozen_sheets(params, z_root.real, opts.window, "auto")
        if before == after or attempt == 1:
            break
        z_seed = z_root  # channel classification changed: refreeze once

    if z_root.imag > 1e-12:
        raise ConvergenceError(
            f"root {z_root} has positive imaginary part: sheet selection "
            "fault")
    if z_root.imag > 0.0:
        z_root = complex(z_root.real, 0.0)

    # the freeze that produced the root, reused for the ladder coefficients
    solve_sheet_of = _sheet_fn(params, z_seed.real, opts.sheet_policy)
    R = right_coefficients(params, z_root, opts, solve_sheet_of)
    L = left_coefficients(params, z_root, opts, solve_sheet_of)
    sheet_map = {n: select_sheet(params, n, z_root)
                 for n in range(-opts.window, opts.window + 1)}
    if opts.sheet_policy == "first":
        sheet_map = frozen_sheets(params, z_seed.real, opts.window, "first")
    state = ResonanceState(
        params=params, z_d=z_root, R=R, L=L, N_d=1.0 + 0.0j, K_d=0.0j,
        window=opts.window, sheets=sheet_map, residual=residual,
        iterations=iters, cf_depth_used=depth)
    return normalize(state)


def shift_mode(state: ResonanceState, m: int) -> ResonanceState:
    """Floquet copy of the pole: z -> z + m*omega and R[n] -> R[n - m].

    Mode shifting is exact; the normalization constant is mode
    independent, and the per-channel sheet map shifts with the ladder.
    """
    m = int(m)
    if m == 0:
        return state
    params = state.params
    z_new = state.z_d + m * params.omega
    R_new = {n + m: v for n, v in state.R.items()}
    L_new = {n + m: v for n, v in state.L.items()}
    sheets_new = {n: select_sheet(params, n, z_new)
                  for n in range(min(R_new), max(R_new) + 1)}
    return replace(state, z_d=z_new, R=R_new, L=L_new, sheets=sheets_new,
                   mode=state.mode + m)


def floquet_c_product(state: ResonanceState, m: int, mprime: int) -> complex:
    """Bilinear c-product between Floquet copies m and m' of the pole state.

    The ladder parts pair slot by slot; the continuum part of each slot is
    a partial-fraction combination of channel self-energies, collapsing to
    -Sigma' on the diagonal.  Equals delta_{m,m'} for a normalized state.
    """
    params = state.params
    lam2 = params.lambda_ ** 2
    delta = m - mprime
    z = state.z_d
    total = 0.0 + 0.0j
    for n in sorted(state.L):
        npd = n + delta
        if npd not in state.R:
            continue
        w = state.L[n] * state.R[npd]
        if w == 0.0:
            continue
        q = 0.0 + 0.0j
        if lam2 != 0.0:
            if delta == 0:
                q = -lam2 * sigma_prime(params, n, z, state.sheet(n))
            else:
                s_a = sigma(params, n, z, state.sheet(n))
                s_b = sigma(params, npd, z, state.sheet(npd))
                q = lam2 * (s_a - s_b) / (-delta * params.omega)
        total += w * (1.0 + q)
    return state.N_d * total


# ---------------------------------------------------------------------------
# dense truncated validation helpers (test support)
# ---------------------------------------------------------------------------

def dense_effective_matrix(params: ModelParams, z: complex, n_tr: int,
                           sheets: SheetFn | None = None,
                           gauge: str = "ladder") -> np.ndarray:
    """Dense (2*n_tr+1)^2 ladder matrix at frozen self-energy argument z.

    ``gauge`` chooses the drive off-diagonals: "ladder" uses -A/2i above
    and +A/2i below the diagonal; "symmetric" uses A/2 on both, related by
    the diagonal similarity d_n -> i^n d_n (identical spectrum).
    """
    if gauge not in ("ladder", "symmetric"):
        raise ValueError(f"unknown gauge {gauge!r}")
    z = complex(z)
    sheet_of = sheets or (lambda n: select_sheet(params, n, z))
    dim = 2 * n_tr + 1
    H = np.zeros((dim, dim), dtype=complex)
    for i, n in enumerate(range(-n_tr, n_tr + 1)):
        H[i, i] = _diag(params, z, n, sheet_of)
    if gauge == "ladder":
        above, below = complex(0.0, 0.5 * params.A), complex(0.0, -0.5 * params.A)
    else:
        above = below = complex(0.5 * params.A, 0.0)
    for i in range(dim - 1):
        H[i, i + 1] = above
        H[i + 1, i] = below
    return H


@dataclass(frozen=True)
class DenseCheck:
    """Agreement report between the dense truncated ladder and the folded
    continued-fraction form at a frozen self-energy argument."""

    z_dense: complex
    z_folded: complex
    eigvec_cos_distance: float

    @property
    def eigenvalue_gap(self) -> float:
        return abs(self.z_dense - self.z_folded)


def dense_truncated_check(params: ModelParams, z_fixed: complex,
                          n_tr: int) -> DenseCheck:
    """Compare the dense truncated eigenpair nearest eps_d against the
    continued-fraction fold with self-energies frozen at z_fixed."""
    if n_tr < 4:
        raise ValueError("n_tr must be at least 4")
    z_fixed = complex(z_fixed)
    sheet_of: SheetFn = lambda n: select_sheet(params, n, z_fixed)  # noqa: E731
    H = dense_effective_matrix(params, z_fixed, n_tr, sheet_of)
    vals, vecs = np.linalg.eig(H)
    idx = int(np.argmin(np.abs(vals - params.epsilon_d)))
    z_dense = complex(vals[idx])
    v_dense = vecs[:, idx]

    # fold the frozen matrix onto the center row and Newton the scalar
    def folded(zp: complex):
        cu, cup, _ = _chain(params, zp, +1, n_tr, sheet_of, z_sigma=z_fixed)
        cd, cdp, _ = _chain(params, zp, -1, n_tr, sheet_of, z_sigma=z_fixed)
        d0 = _diag(params, zp, 0, sheet_of, z_sigma=z_fixed)
        return zp - d0 - cu - cd, 1.0 - cup - cdp

    zp = z_dense  # seed at the dense answer; Newton polishes the fold
    for _ in range(80):
        Dv, Dpv = folded(zp)
        step = Dv / Dpv
        zp = zp - step
        if abs(step) < 1e-15 * max(1.0, abs(zp)):
            break

    # eigenvector from the frozen wing ratios at the folded eigenvalue
    _, _, t_up = _chain(params, zp, +1, n_tr, sheet_of, z_sigma=z_fixed,
                        keep_levels=n_tr)
    _, _, t_dn = _chain(params, zp, -1, n_tr, sheet_of, z_sigma=z_fixed,
                        keep_levels=n_tr)
    coeffs = {0: 1.0 + 0.0j}
    up_num = complex(0.0, -0.5 * params.A)
    for mm in range(1, n_tr + 1):
        coeffs[mm] = coeffs[mm - 1] * up_num / t_up[mm]
        coeffs[-mm] = coeffs[-(mm - 1)] * (-up_num) / t_dn[mm]
    v_cf = np.array([coeffs[n] for n in range(-n_tr, n_tr + 1)])
    overlap = abs(np.vdot(v_dense, v_cf))
    denom = float(np.linalg.norm(v_dense) * np.linalg.norm(v_cf))
    cos_dist = 1.0 - overlap / denom
    return DenseCheck(z_dense=z_dense, z_folded=complex(zp),
                      eigvec_cos_distance=float(cos_dist))


def dense_gauge_gap(params: ModelParams, z_fixed: complex, n_tr: int) -> float:
    """Largest eigenvalue discrepancy between the two drive gauges of the
    dense truncated ladder (zero up to roundoff by similarity)."""
    z_fixed = complex(z_fixed)
    sheet_of: SheetFn = lambda n: select_sheet(params, n, z_fixed)  # noqa: E731
    H_ladder = dense_effective_matrix(params, z_fixed, n_tr, sheet_of,
                                      gauge="ladder")
    H_symm = dense_effective_matrix(params, z_fixed, n_tr, sheet_of,
                                    gauge="symmetric")
    ev_a = np.sort_complex(np.linalg.eigvals(H_ladder))
    ev_b = np.sort_complex(np.linalg.eigvals(H_symm))
    return float(np.max(np.abs(ev_a - ev_b)))
