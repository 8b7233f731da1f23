"""Channel self-energies of the 1D photon continuum on both Riemann sheets.

Folding the +-k branches of the coupling onto energy gives the density
rho(eps) = 4*eps on (0, k_c), so each Floquet channel n sees the Cauchy
transform

    Sigma(n, z) = integral_0^{k_c} rho(eps) / (z - n*omega - eps) d eps.

With zeta = z - n*omega the first-sheet closed form is

    Sigma_I(zeta) = 4 * (-k_c + zeta * (Log(zeta) - Log(zeta - k_c))),

where both logarithms are principal.  Their cuts on the negative axis
cancel, leaving the physical branch cut exactly on [0, k_c]; real
arguments are handled as limits from the upper half-plane.  Continuing
through the cut from above (the second sheet, where decaying resonance
poles live) subtracts the density term analytically continued in zeta:

    Sigma_II(zeta) = Sigma_I(zeta) - 2*pi*i * 4*zeta.

``quadrature_reference`` provides an independent slow evaluation of the
first-sheet integral for validation; it never calls the closed form.
"""
from __future__ import annotations

import cmath
import enum

from scipy import integrate

from .model import TWO_PI, ModelParams


class Sheet(enum.Enum):
    FIRST = "first"
    SECOND = "second"


#: Below this |Im zeta| the reference quadrature switches to an explicit
#: principal-value + boundary-term decomposition.
QUADRATURE_IM_FLOOR = 1e-6


def spectral_density(epsilon: float, k_c: float = TWO_PI) -> float:
    """Coupling density rho(eps) = 4*eps inside (0, k_c), zero outside.

    The endpoints are assigned 0 (a measure-zero choice).
    """
    if 0.0 < epsilon < k_c:
        return 4.0 * epsilon
    return 0.0


def _continued_density(zeta: complex) -> complex:
    """Analytic continuation of rho off the real axis: 4*zeta."""
    return 4.0 * zeta


def _as_upper_boundary(zeta: complex) -> complex:
    """Real arguments are limits from above; normalize -0.0 imaginary parts
    so the principal logs pick the upper side of their cuts."""
    if zeta.imag == 0.0:
        return complex(zeta.real, 0.0)
    return zeta


def _check_not_branch_point(zeta: complex, k_c: float) -> None:
    if zeta == 0.0 or zeta == k_c:
        raise ValueError(f"self-energy argument {zeta} sits on a branch point")


def _check_second_sheet_region(zeta: complex, k_c: float) -> None:
    if not (0.0 < zeta.real < k_c):
        raise ValueError(
            f"second sheet undefined for Re(zeta)={zeta.real}; continuation "
            f"region is (0, {k_c})")


def _sigma_first(zeta: complex, k_c: float) -> complex:
    zeta = _as_upper_boundary(zeta)
    return 4.0 * (-k_c + zeta * (cmath.log(zeta) - cmath.log(zeta - k_c)))


def _sigma_prime_first(zeta: complex, k_c: float) -> complex:
    zeta = _as_upper_boundary(zeta)
    return 4.0 * (cmath.log(zeta) - cmath.log(zeta - k_c) - k_c / (zeta - k_c))


def sigma(params: ModelParams, n: int, z: complex,
          sheet: Sheet = Sheet.FIRST) -> complex:
    """Channel-n self-energy at complex energy z on the requested sheet.

    Exactly shift-covariant: sigma(n, z) == sigma(0, z - n*omega).
    Raises at the branch points zeta in {0, k_c} and when the second sheet
    is requested outside its continuation region Re(zeta) in (0, k_c).
    """
    zeta = complex(z) - n * params.omega
    k_c = params.k_c
    _check_not_branch_point(zeta, k_c)
    if sheet is Sheet.SECOND:
        _check_second_sheet_region(zeta, k_c)
        return _sigma_first(zeta, k_c) - TWO_PI * 1j * _continued_density(zeta)
    return _sigma_first(zeta, k_c)


def sigma_prime(params: ModelParams, n: int, z: complex,
                sheet: Sheet = Sheet.FIRST) -> complex:
    """Analytic z-derivative of ``sigma`` on the requested sheet."""
    zeta = complex(z) - n * params.omega
    k_c = params.k_c
    _check_not_branch_point(zeta, k_c)
    if sheet is Sheet.SECOND:
        _check_second_sheet_region(zeta, k_c)
        return _sigma_prime_first(zeta, k_c) - TWO_PI * 4.0j
    return _sigma_prime_first(zeta, k_c)


def select_sheet(params: ModelParams, n: int, z: complex) -> Sheet:
    """Sheet on which channel n must be evaluated when searching for
    resonance poles in the lower half-plane.

    Second sheet iff Re(z) - n*omega lies inside the continuum (0, k_c)
    and Im(z) < 0; the real axis itself uses the first sheet (limit from
    above).
    """
    z = complex(z)
    zeta_re = z.real - n * params.omega
    if z.imag < 0.0 and 0.0 < zeta_re < params.k_c:
        return Sheet.SECOND
    return Sheet.FIRST


def quadrature_reference(params: ModelParams, n: int, z: complex) -> complex:
    """First-sheet self-energy by adaptive quadrature of the defining
    integral; the independent check against the closed form.

    For |Im zeta| below ``QUADRATURE_IM_FLOOR`` the integral is evaluated
    as principal value plus the -i*pi*rho boundary term (upper side).
    """
    zeta = complex(z) - n * params.omega
    k_c = params.k_c
    _check_not_branch_point(zeta, k_c)
    zr, zi = zeta.real, zeta.imag

    if abs(zi) < QUADRATURE_IM_FLOOR:
        if not (0.0 < zr < k_c):
            val, _ = integrate.quad(lambda e: 4.0 * e / (zr - e), 0.0, k_c,
                                    epsabs=1e-12, epsrel=1e-11, limit=400)
            return complex(val, 0.0)
        # principal value across the cut plus the upper-boundary term
        pv, _ = integrate.quad(lambda e: -4.0 * e, 0.0, k_c,
                               weight="cauchy", wvar=zr,
                               epsabs=1e-12, epsrel=1e-11, limit=400)
        boundary = -1j if zi >= 0.0 else 1j
        return pv + boundary * cmath.pi * spectral_density(zr, k_c)

    points = [zr] if 0.0 < zr < k_c else None
    re, _ = integrate.quad(
        lambda e: (4.0 * e * (zr - e)) / ((zr - e) ** 2 + zi ** 2),
        0.0, k_c, points=points, epsabs=1e-12, epsrel=1e-11, limit=400)
    im, _ = integrate.quad(
        lambda e: (-4.0 * e * zi) / ((zr - e) ** 2 + zi ** 2),
        0.0, k_c, points=points, epsabs=1e-12, epsrel=1e-11, limit=400)
    return complex(re, im)
