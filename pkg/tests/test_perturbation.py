from __future__ import annotations

import math
from fractions import Fraction

import pytest

from floquet_hhg import bessel_j, bessel_weight_table, make_model, \
    open_channels, perturbative_eigenvalue, sigma, spectral_density


def bessel_series_exact(n: int, x: Fraction) -> float:
    """Defining power series summed in exact rational arithmetic.

    Immune to the catastrophic cancellation that breaks a float series at
    large argument, so it certifies absolute errors down to 1e-15.
    """
    half = x / 2
    term = half ** n / math.factorial(n)
    total = term
    m = 1
    while True:
        term *= -(half * half)
        term /= m * (n + m)
        total += term
        if abs(term) < Fraction(1, 10 ** 40):
            return float(total)
        m += 1


class TestBesselJ:
    def test_origin(self):
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(3, 0.0) == 0.0

    def test_reference_value(self):
        assert bessel_j(0, 2.0) == pytest.approx(0.22389077914123567, abs=1e-14)

    def test_parity(self):
        assert bessel_j(-1, 2.0) == -bessel_j(1, 2.0)
        assert bessel_j(-2, 2.0) == bessel_j(2, 2.0)

    @pytest.mark.parametrize("n", [0, 1, 2, 5, 9, 17, 33, 64])
    @pytest.mark.parametrize("x", ["1/2", "2", "73/10", "13", "20"])
    def test_against_exact_series(self, n, x):
        xf = Fraction(x)
        assert abs(bessel_j(n, float(xf)) - bessel_series_exact(n, xf)) < 1e-12

    def test_negative_argument_rejected(self):
        with pytest.raises(ValueError):
            bessel_j(0, -1.0)


class TestWeightTable:
    def test_closure(self):
        # sum of squared weights reaches 1 once the window clears x + 40
        assert abs(bessel_weight_table(2.0, 42).total - 1.0) < 1e-12
        assert abs(bessel_weight_table(13.0, 53).total - 1.0) < 1e-12

    def test_symmetric_in_order(self):
        table = bessel_weight_table(2.0, 8)
        for n in range(1, 9):
            assert table.weights[-n] == table.weights[n]


class TestPerturbativeEigenvalue:
    def test_zero_coupling(self):
        p = make_model(1.0, 2.4, 1.2, 0.0)
        assert perturbative_eigenvalue(p) == complex(1.0)

    def test_no_drive_reduces_to_single_channel(self):
        p = make_model(1.0, 0.0, 1.2, 0.1)
        expect = p.epsilon_d + p.lambda_ ** 2 * sigma(p, 0, complex(1.0, 0.0))
        got = perturbative_eigenvalue(p)
        assert got == pytest.approx(expect, rel=1e-10)

    def test_reference_imaginary_part_from_channel_sum(self):
        # decay rate must equal the open-channel density sum assembled
        # independently from the density and the squared Bessel weights
        p = make_model(1.0, 2.4, 1.2, 0.1)
        z = perturbative_eigenvalue(p)
        expect = -p.lambda_ ** 2 * math.pi * sum(
            spectral_density(p.epsilon_d - n * p.omega, p.k_c)
            * bessel_j(n, 2.0) ** 2 for n in open_channels(p))
        assert z.imag == pytest.approx(expect, rel=1e-10)
        assert z.imag == pytest.approx(-0.16189620450782505, abs=1e-12)
        assert z.real == pytest.approx(0.7572299899736703, abs=1e-12)

    def test_window_doubling_converged(self):
        p = make_model(1.0, 2.4, 1.2, 0.1)
        assert abs(perturbative_eigenvalue(p, 32)
                   - perturbative_eigenvalue(p, 64)) < 1e-12

    def test_decay_sign(self, rng):
        for _ in range(20):
            p = make_model(rng.uniform(-2, 7), rng.uniform(0, 4),
                           rng.uniform(0.5, 3), rng.uniform(0, 0.2))
            z = perturbative_eigenvalue(p)
            assert z.imag <= 1e-15
            if len(open_channels(p)) and p.lambda_ > 0:
                assert z.imag < 0.0

    def test_branch_point_collision_rejected(self):
        # the channel n = 2 shift lands exactly on the continuum edge
        p = make_model(2.4, 2.4, 1.2, 0.1)
        with pytest.raises(ValueError, match="branch point"):
            perturbative_eigenvalue(p)
