from __future__ import annotations

import math

import numpy as np
import pytest

from floquet_hhg import ConvergenceError, Grid1D, \
    discretize, evolve, hhg_spectrum, interference_decomposition, make_model, \
    resonance_spatial_field, solve_resonance, spatial_field, \
    survival_amplitude_floquet, survival_probability


@pytest.fixture(scope="module")
def weak_state():
    return solve_resonance(make_model(1.0, 2.4, 1.2, 0.05))


class TestSpectrum:
    def test_even_in_k(self, ref_state):
        half = np.linspace(0.1, 6.0, 240)
        k = np.concatenate([-half[::-1], half])  # exactly mirrored grid
        spec = hhg_spectrum(ref_state, k)
        assert np.array_equal(spec.total, spec.total[::-1])

    def test_nonnegative_and_lorentzian_form(self, ref_state, weak_state):
        k = np.linspace(-6.0, 6.0, 481)
        spec = hhg_spectrum(ref_state, k)
        assert np.all(spec.total >= 0.0)
        assert np.all(spec.lorentzian_sum >= 0.0)
        # the incoherent line sum drops cross terms between overlapping
        # tails; at weak coupling the lines separate and the forms agree
        k = np.linspace(0.05, 6.2, 2401)
        spec = hhg_spectrum(weak_state, k)
        for m in range(4):
            j = int(np.argmin(np.abs(
                k - (weak_state.z_d.real + m * weak_state.params.omega))))
            assert spec.lorentzian_sum[j] == pytest.approx(spec.total[j],
                                                           rel=0.25)

    def test_no_drive_single_lorentzian(self):
        p = make_model(1.0, 0.0, 1.2, 0.1)
        state = solve_resonance(p)
        k = np.linspace(0.05, 6.2, 4096)
        spec = hhg_spectrum(state, k)
        assert set(spec.lorentzians) == {0}
        # density-normalized line peaks at the pole with half-width |Im z|
        norm = spec.total / (2 * k)
        i = int(np.argmax(norm))
        assert abs(k[i] - state.z_d.real) < 0.01
        half = norm[i] / 2
        above = k[norm >= half]
        fwhm = above.max() - above.min()
        assert fwhm == pytest.approx(2 * abs(state.z_d.imag), rel=0.15)

    def test_grid_must_stay_inside_cutoff(self, ref_state):
        with pytest.raises(ValueError, match="k_c"):
            hhg_spectrum(ref_state, np.linspace(-7.0, 7.0, 64))

    def test_mode_window_capped_by_solver_window(self, ref_state):
        with pytest.raises(ValueError, match="window"):
            hhg_spectrum(ref_state, np.linspace(-6, 6, 64), mode_window=64)

    def test_peak_centers_pinned_by_poles_at_weak_coupling(self, weak_state):
        # density-normalized peak centers sit within a tenth of the width
        p = weak_state.params
        k = np.linspace(0.05, 6.2, 24601)
        norm = hhg_spectrum(weak_state, k).total / (2 * k)
        gamma = abs(weak_state.z_d.imag)
        for m in range(4):
            target = weak_state.z_d.real + m * p.omega
            sel = (k >= target - 0.5) & (k <= target + 0.5)
            i = int(np.argmax(np.where(sel, norm, -np.inf)))
            assert abs(k[i] - target) < gamma / 10

    def test_accepts_grid1d(self, ref_state):
        g = Grid1D.uniform(-6.0, 6.0, 129, "momentum-k")
        spec = hhg_spectrum(ref_state, g)
        assert spec.kgrid.shape == (129,)
        with pytest.raises(ValueError, match="momentum"):
            hhg_spectrum(ref_state, Grid1D.uniform(-6, 6, 16, "position-x"))


class TestSpatialField:
    def test_zero_coupling_field_vanishes(self):
        state = solve_resonance(make_model(1.0, 2.4, 1.2, 0.0))
        field = resonance_spatial_field(state, np.linspace(-25, 25, 501), 20.0)
        assert np.all(field.intensity == 0.0)

    def test_no_drive_pure_exponential_profile(self):
        p = make_model(1.0, 0.0, 1.2, 0.1)
        state = solve_resonance(p)
        x = np.linspace(0.5, 18.0, 351)
        field = resonance_spatial_field(state, x, 20.0)
        expect = np.exp(2 * state.z_d.imag * (20.0 - x))
        ratio = field.intensity / expect
        assert np.max(np.abs(ratio / ratio[0] - 1.0)) < 1e-12
        assert np.max(np.abs(field.interference)) == 0.0

    def test_decomposition_identity(self, ref_state):
        x = np.linspace(-25, 25, 501)
        field = interference_decomposition(ref_state, x, 20.0)
        resid = field.diagonal_sum + field.interference - field.intensity
        assert np.max(np.abs(resid)) < 1e-12 * field.intensity.max()

    def test_diagonal_envelope_rate(self, ref_state):
        x = np.linspace(2.0, 18.0, 321)
        field = resonance_spatial_field(ref_state, x, 20.0)
        target = 2 * abs(ref_state.z_d.imag)
        for m, vals in field.diagonal.items():
            slope = np.polyfit(x, np.log(vals), 1)[0]
            assert slope == pytest.approx(target, rel=1e-6)

    def test_interference_beats_at_drive_frequency(self, ref_state):
        p = ref_state.params
        x = np.linspace(2.0, 18.0, 512)
        field = resonance_spatial_field(ref_state, x, 20.0)
        ys = field.interference / np.exp(
            2 * ref_state.z_d.imag * (20.0 - x))
        ys = (ys - ys.mean()) * np.hanning(ys.size)
        amps = np.abs(np.fft.rfft(ys))
        freqs = 2 * math.pi * np.fft.rfftfreq(ys.size, d=x[1] - x[0])
        amps[0] = 0.0
        peak = freqs[int(np.argmax(amps))]
        assert abs(peak - p.omega) <= freqs[1] - freqs[0]

    def test_open_modes_only(self, ref_state):
        x = np.linspace(-10, 10, 101)
        field = resonance_spatial_field(ref_state, x, 20.0)
        assert set(field.diagonal) == {0, 1, 2, 3, 4}

    def test_narrow_mode_window_rejected(self, ref_state):
        with pytest.raises(ConvergenceError, match="mode window"):
            resonance_spatial_field(ref_state, np.linspace(-10, 10, 101),
                                    20.0, mode_window=1)

    def test_pairing_variants_differ(self, ref_state):
        x = np.linspace(1.0, 18.0, 301)
        a = resonance_spatial_field(ref_state, x, 20.0, pairing="outgoing")
        b = resonance_spatial_field(ref_state, x, 20.0, pairing="printed")
        assert np.max(np.abs(a.intensity - b.intensity)) > 0.0
        with pytest.raises(ValueError, match="pairing"):
            resonance_spatial_field(ref_state, x, 20.0, pairing="other")

    def test_integrator_arbitrates_outgoing_pairing(self, ref_state):
        # the shipped default pairs each mode's time and space exponents on
        # the same pole (outgoing traveling waves); the mirrored variant
        # must fit the true field strictly worse
        p = ref_state.params
        system = discretize(p, box_length=200.0, n_modes=4096)
        t = 20.0
        traj = evolve(system, t_end=t, dt=1e-3, sample_stride=100)
        xg = np.linspace(-28.0, 28.0, 1121)
        x, _, f_true = spatial_field(system, traj.final, xg)
        devs = {}
        for pairing in ("outgoing", "printed"):
            field = resonance_spatial_field(ref_state, xg, t,
                                            pairing=pairing)
            res = field.intensity
            inside = np.abs(x) <= 0.9 * t
            ref = int(np.argmax(np.where(inside, res, -np.inf)))
            cal = res * (f_true[ref] / res[ref])
            peaks = np.where((cal[1:-1] > cal[:-2])
                             & (cal[1:-1] >= cal[2:]))[0] + 1
            peaks = peaks[np.abs(x[peaks]) <= 0.9 * t]
            peaks = peaks[cal[peaks] >= 0.02 * cal[peaks].max()]
            devs[pairing] = float(np.max(
                np.abs(cal[peaks] - f_true[peaks]) / f_true[peaks]))
        assert devs["outgoing"] < devs["printed"]
        assert devs["outgoing"] < 0.10

    def test_time_must_be_positive(self, ref_state):
        with pytest.raises(ValueError, match="t must be positive"):
            resonance_spatial_field(ref_state, np.linspace(-1, 1, 16), 0.0)


class TestSurvivalAmplitude:
    def test_zero_coupling_exact_driven_phase(self):
        p = make_model(1.0, 2.4, 1.2, 0.0)
        state = solve_resonance(p)
        t = np.linspace(0.0, 20.0, 81)
        got = survival_amplitude_floquet(state, t)
        x = p.a_over_omega
        exact = np.exp(-1j * p.epsilon_d * t) \
            * np.exp(1j * x * (np.cos(p.omega * t) - 1.0))
        assert np.max(np.abs(got - exact)) < 1e-12
        assert np.max(np.abs(np.abs(got) - 1.0)) < 1e-13

    def test_initial_overlap_bounds(self, ref_state):
        lam = ref_state.params.lambda_
        c0 = survival_amplitude_floquet(ref_state, 0.0)
        assert 1.0 - 10 * lam ** 2 <= abs(c0) <= 1.0

    def test_scalar_and_array_forms(self, ref_state):
        single = survival_amplitude_floquet(ref_state, 2.5)
        array = survival_amplitude_floquet(ref_state, np.array([2.5]))
        assert isinstance(single, complex)
        assert single == array[0]

    def test_matches_integrator_beyond_transient(self, ref_state):
        # period-averaged decay with drive-phase ripples; the continuum
        # background contributes at the percent scale here
        p = ref_state.params
        system = discretize(p, box_length=100.0, n_modes=2048)
        traj = evolve(system, t_end=10.0, dt=1e-3, sample_stride=50)
        t, P_o = survival_probability(traj)
        P_f = np.abs(survival_amplitude_floquet(ref_state, t)) ** 2
        mask = (t >= 2.0)
        assert np.max(np.abs(P_f[mask] - P_o[mask]) / P_o[mask]) < 0.05
