import math

import numpy as np
import pytest

from backflow import contwave as cw
from backflow import oracle
from backflow.errors import SingularPoint, SpecViolation

SQRT_2PI = math.sqrt(2 * math.pi)


def example_one(a: complex) -> cw.LineWaveFunction:
    """psi = N (x - a) / (x + i)^2."""
    spec = cw.RationalSpec(zeros=(cw.Root(a),), poles=(cw.Root(-1j, 2),))
    return cw.make_line_wavefunction(spec)


def example_one_norm(a: complex) -> float:
    return (math.pi * (abs(a) ** 2 + 1) / 2) ** -0.5


def example_one_spectrum(a: complex, N: float, p: float) -> complex:
    return -1j * N * SQRT_2PI * (1 + (1j * a - 1) * p) * math.exp(-p)


class TestConstruction:
    def test_norm_matches_closed_form(self):
        a = -0.25j
        wf = example_one(a)
        assert wf.norm_constant == pytest.approx(example_one_norm(a), rel=1e-9)

    def test_norm_single_simple_pole(self):
        spec = cw.RationalSpec(poles=(cw.Root(-1j, 1),))
        wf = cw.make_line_wavefunction(spec)
        assert wf.norm_constant == pytest.approx(1 / math.sqrt(math.pi), rel=1e-9)

    def test_norm_two_simple_poles(self):
        # 1/((x^2+1)(x^2+4)) integrates to pi/6
        spec = cw.RationalSpec(poles=(cw.Root(-1j), cw.Root(-2j)))
        wf = cw.make_line_wavefunction(spec)
        assert wf.norm_constant == pytest.approx(math.sqrt(6 / math.pi), rel=1e-9)

    def test_zero_pole_collision_rejected(self):
        with pytest.raises(SpecViolation):
            cw.RationalSpec(zeros=(cw.Root(-1j),), poles=(cw.Root(-1j, 2),))

    def test_m_ge_n_rejected(self):
        with pytest.raises(SpecViolation):
            cw.make_line_wavefunction(
                cw.RationalSpec(zeros=(cw.Root(1j), cw.Root(2j)), poles=(cw.Root(-1j),))
            )

    def test_upper_half_plane_pole_rejected(self):
        with pytest.raises(SpecViolation):
            cw.make_line_wavefunction(cw.RationalSpec(poles=(cw.Root(1j),)))

    def test_duplicate_roots_merge(self):
        spec = cw.RationalSpec(poles=(cw.Root(-1j), cw.Root(-1j + 1e-12)))
        assert len(spec.poles) == 1
        assert spec.poles[0].multiplicity == 2


class TestEvalPsi:
    def test_value_at_origin(self):
        a = -0.25j
        wf = example_one(a)
        # f(0) = (-a)/(i)^2 = a
        assert complex(wf(0.0)) == pytest.approx(wf.norm_constant * a, rel=1e-12)
        dens = abs(wf(0.0)) ** 2
        assert dens == pytest.approx(2 / (17 * math.pi), rel=1e-9)

    def test_asymptotic_decay(self):
        wf = example_one(-0.25j)
        x = 1e6
        expect = wf.norm_constant**2 * x ** (2 * (1 - 2))
        assert abs(wf(x)) ** 2 == pytest.approx(expect, rel=1e-4)

    def test_real_zero(self):
        spec = cw.RationalSpec(zeros=(cw.Root(1.0),), poles=(cw.Root(-1j, 2),))
        wf = cw.make_line_wavefunction(spec)
        assert wf(1.0) == 0

    def test_array_evaluation(self):
        wf = example_one(-0.25j)
        xs = np.linspace(-2, 2, 7)
        vals = wf(xs)
        assert vals.shape == xs.shape
        assert complex(vals[3]) == pytest.approx(complex(wf(0.0)))


class TestMomentumSpectrum:
    def test_example_one_closed_form(self):
        a = 0.7 - 1.3j
        wf = example_one(a)
        sp = cw.momentum_spectrum(wf)
        assert len(sp.terms) == 1
        assert len(sp.terms[0].coeffs) == 2
        for p in (0.3, 1.0, 2.7, 8.9):
            expect = example_one_spectrum(a, wf.norm_constant, p)
            got = cw.eval_spectrum(sp, p)
            assert got == pytest.approx(expect, rel=1e-12)

    def test_single_simple_pole_spectrum(self):
        spec = cw.RationalSpec(poles=(cw.Root(-1j),))
        wf = cw.make_line_wavefunction(spec)
        sp = cw.momentum_spectrum(wf)
        (term,) = sp.terms
        assert term.coeffs == pytest.approx((-1j * wf.norm_constant * SQRT_2PI,))
        assert cw.eval_spectrum(sp, 2.0) == pytest.approx(
            -1j * wf.norm_constant * SQRT_2PI * math.exp(-2.0), rel=1e-12
        )

    def test_two_pole_spectrum_against_oracle(self):
        spec = cw.RationalSpec(poles=(cw.Root(-1j), cw.Root(-2j)))
        wf = cw.make_line_wavefunction(spec)
        sp = cw.momentum_spectrum(wf)
        for p in (0.5, 1.0, 2.0):
            got = cw.eval_spectrum(sp, p)
            ref = oracle.fourier_quadrature(wf, p, tol=1e-9).value
            assert got == pytest.approx(ref, abs=1e-7)

    def test_negative_p_is_zero(self):
        sp = cw.momentum_spectrum(example_one(-0.25j))
        assert cw.eval_spectrum(sp, -1.0) == 0

    def test_principal_value_at_zero(self):
        a = -0.25j
        wf = example_one(a)
        sp = cw.momentum_spectrum(wf)
        # decay exponent 1: half of the p -> 0+ limit, i.e. -i N sqrt(pi/2)
        assert cw.eval_spectrum(sp, 0.0) == pytest.approx(
            -1j * wf.norm_constant * math.sqrt(math.pi / 2), rel=1e-12
        )

    def test_value_at_p_one(self):
        a = -0.25j
        wf = example_one(a)
        sp = cw.momentum_spectrum(wf)
        expect = -1j * wf.norm_constant * SQRT_2PI * 0.25 * math.exp(-1.0)
        assert cw.eval_spectrum(sp, 1.0) == pytest.approx(expect, rel=1e-12)


class TestLocalWavenumber:
    def test_example_one_at_origin(self):
        wf = example_one(-0.25j)
        assert cw.local_wavenumber(wf, 0.0) == pytest.approx(-2.0, rel=1e-12)

    def test_zero_crossings(self):
        wf = example_one(-0.25j)
        edge = 1 / math.sqrt(14)
        assert cw.local_wavenumber(wf, edge) == pytest.approx(0.0, abs=1e-12)
        assert cw.local_wavenumber(wf, -edge) == pytest.approx(0.0, abs=1e-12)

    def test_upper_half_plane_zeros_keep_k_positive(self):
        rng = np.random.default_rng(7)
        spec = cw.RationalSpec(
            zeros=(cw.Root(0.4 + 0.8j), cw.Root(-1.1 + 0.3j)),
            poles=(cw.Root(-0.2 - 1.0j, 2), cw.Root(1.0 - 0.7j)),
        )
        wf = cw.make_line_wavefunction(spec)
        for x in rng.uniform(-8, 8, size=100):
            assert cw.local_wavenumber(wf, float(x)) > 0

    def test_singular_at_real_zero(self):
        spec = cw.RationalSpec(zeros=(cw.Root(1.0),), poles=(cw.Root(-1j, 2),))
        wf = cw.make_line_wavefunction(spec)
        with pytest.raises(SingularPoint):
            cw.local_wavenumber(wf, 1.0)


class TestProbabilityCurrent:
    def test_example_one_at_origin(self):
        a = -0.25j
        wf = example_one(a)
        expect = (2 / math.pi) * (-0.25 + 2 * 0.0625) / (1 + 0.0625)
        assert cw.probability_current(wf, 0.0) == pytest.approx(expect, rel=1e-9)
        # same thing via |psi(0)|^2 * k(0) = (2/(17 pi)) * (-2)
        assert expect == pytest.approx(-4 / (17 * math.pi))

    def test_extremal_current(self):
        a = 1j * (2 - math.sqrt(5))
        wf = example_one(a)
        assert cw.probability_current(wf, 0.0) == pytest.approx(
            (2 - math.sqrt(5)) / math.pi, abs=1e-10
        )

    def test_zero_at_real_zero(self):
        spec = cw.RationalSpec(zeros=(cw.Root(1.0),), poles=(cw.Root(-1j, 2),))
        wf = cw.make_line_wavefunction(spec)
        assert cw.probability_current(wf, 1.0) == 0.0


class TestBackflowIntervals:
    def test_finite_interval(self):
        wf = example_one(-0.25j)
        report = cw.backflow_intervals(wf)
        edge = 1 / math.sqrt(14)
        assert len(report.intervals) == 1
        lo, hi = report.intervals[0]
        assert lo == pytest.approx(-edge, abs=1e-10)
        assert hi == pytest.approx(edge, abs=1e-10)
        assert abs(cw.local_wavenumber(wf, lo)) < 1e-10
        assert abs(cw.local_wavenumber(wf, hi)) < 1e-10
        mid = 0.5 * (lo + hi)
        assert cw.local_wavenumber(wf, mid) < 0
        assert cw.probability_current(wf, mid) < 0
        assert report.min_wavenumber == pytest.approx(-2.0, rel=1e-9)
        assert report.min_current < 0

    def test_half_infinite_intervals(self):
        wf = example_one(-3j)
        report = cw.backflow_intervals(wf)
        # k = -3/(x^2+9) + 2/(x^2+1) < 0 for |x| > sqrt(15)
        assert len(report.intervals) == 2
        (lo1, hi1), (lo2, hi2) = report.intervals
        assert lo1 == -math.inf
        assert hi1 == pytest.approx(-math.sqrt(15), abs=1e-10)
        assert lo2 == pytest.approx(math.sqrt(15), abs=1e-10)
        assert hi2 == math.inf

    def test_no_backflow_inside_circle(self):
        # |a + 5i/4| <= 3/4 suppresses backflow; avoid a = -i (pole collision)
        wf = example_one(-0.8j)
        report = cw.backflow_intervals(wf)
        assert report.intervals == ()
        xs = np.linspace(-30, 30, 1501)
        assert all(cw.local_wavenumber(wf, float(x)) >= 0 for x in xs)

    def test_tangency_is_flagged_not_reported(self):
        # a = -i/2 sits on the excluded-circle boundary: k >= 0 with a double
        # root at the origin, reported as a tangency rather than an interval
        wf = example_one(-0.5j)
        report = cw.backflow_intervals(wf)
        assert report.intervals == ()
        assert len(report.tangencies) == 1
        assert report.tangencies[0] == pytest.approx(0.0, abs=1e-6)

    def test_boundary_im_minus_two_single_half_infinite(self):
        # a2 = -2 with a1 > 0: k = 0 once, backflow on x > x1 only
        wf = example_one(1.0 - 2.0j)
        report = cw.backflow_intervals(wf)
        assert len(report.intervals) == 1
        lo, hi = report.intervals[0]
        assert hi == math.inf
        assert math.isfinite(lo)
        assert cw.local_wavenumber(wf, lo + 1.0) < 0
        assert cw.local_wavenumber(wf, lo - 1.0) > 0


class TestProperties:
    """Invariant suite on seeded random wave functions."""

    def _random_spec(self, rng) -> cw.RationalSpec:
        n_poles = rng.integers(1, 3)
        poles = []
        for _ in range(n_poles):
            poles.append(
                cw.Root(
                    complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.8, -0.4)),
                    int(rng.integers(1, 3)),
                )
            )
        n = sum(p.multiplicity for p in poles)
        zeros = []
        m_total = int(rng.integers(0, n))
        while sum(z.multiplicity for z in zeros) < m_total:
            im = rng.uniform(0.2, 1.5) * rng.choice([-1.0, 1.0])
            cand = complex(rng.uniform(-1.5, 1.5), im)
            if all(abs(cand - p.position) > 1e-2 for p in poles):
                zeros.append(cw.Root(cand, 1))
        return cw.RationalSpec(zeros=tuple(zeros), poles=tuple(poles))

    def test_normalization_and_positivity(self):
        rng = np.random.default_rng(11)
        for _ in range(4):
            wf = cw.make_line_wavefunction(self._random_spec(rng))
            total = oracle.norm_quadrature(wf, "line", 1e-10).value.real
            assert total == pytest.approx(1.0, abs=1e-8)
            sp = cw.momentum_spectrum(wf)
            peak = max(abs(cw.eval_spectrum(sp, p)) for p in np.linspace(0.05, 10, 120))
            for p in rng.uniform(-10, -0.1, size=3):
                neg = oracle.fourier_quadrature(wf, float(p), tol=1e-9).value
                assert abs(neg) < 1e-6 * peak

    def test_analytic_numeric_agreement(self):
        rng = np.random.default_rng(13)
        for _ in range(3):
            wf = cw.make_line_wavefunction(self._random_spec(rng))
            sp = cw.momentum_spectrum(wf)
            for p in rng.uniform(0.1, 10, size=5):
                got = cw.eval_spectrum(sp, float(p))
                ref = oracle.fourier_quadrature(wf, float(p), tol=1e-9).value
                assert abs(got - ref) < 1e-6 * max(1.0, abs(got))

    def test_phase_gradient_consistency(self):
        rng = np.random.default_rng(17)
        for _ in range(3):
            wf = cw.make_line_wavefunction(self._random_spec(rng))
            checked = 0
            while checked < 30:
                x = float(rng.uniform(-4, 4))
                try:
                    k = cw.local_wavenumber(wf, x)
                    fd = oracle.phase_gradient_fd(wf, x, 1e-5)
                except SingularPoint:
                    continue
                assert fd == pytest.approx(k, abs=1e-4)
                checked += 1

    def test_gauge_invariance(self):
        wf = example_one(0.3 - 0.9j)
        rotated = cw.with_phase(wf, -0.6 + 2.2j)
        for x in (-1.7, 0.1, 2.3):
            assert abs(rotated(x)) ** 2 == pytest.approx(abs(wf(x)) ** 2, rel=1e-10)
            assert cw.local_wavenumber(rotated, x) == cw.local_wavenumber(wf, x)
            assert cw.probability_current(rotated, x) == pytest.approx(
                cw.probability_current(wf, x), rel=1e-10
            )

    def test_translation_covariance(self):
        a, shift = 0.4 - 1.1j, 2.5
        spec = cw.RationalSpec(zeros=(cw.Root(a),), poles=(cw.Root(-1j, 2),))
        moved = cw.RationalSpec(
            zeros=(cw.Root(a + shift),), poles=(cw.Root(-1j + shift, 2),)
        )
        wf = cw.LineWaveFunction(spec, 1.0)
        wf_moved = cw.LineWaveFunction(moved, 1.0)
        for x in (-3.0, -0.2, 1.9):
            assert cw.local_wavenumber(wf_moved, x + shift) == pytest.approx(
                cw.local_wavenumber(wf, x), abs=1e-10
            )

    def test_backflow_sign_structure(self):
        rng = np.random.default_rng(19)
        found_intervals = 0
        for _ in range(6):
            spec = self._random_spec(rng)
            if not any(z.position.imag < 0 for z in spec.zeros):
                continue
            wf = cw.make_line_wavefunction(spec)
            report = cw.backflow_intervals(wf)
            for lo, hi in report.intervals:
                mid = (
                    0.5 * (lo + hi)
                    if math.isfinite(lo) and math.isfinite(hi)
                    else (hi - 1.0 if math.isfinite(hi) else lo + 1.0)
                )
                assert cw.local_wavenumber(wf, mid) < 0
                assert cw.probability_current(wf, mid) < 0
                found_intervals += 1
            for x in rng.uniform(-6, 6, size=40):
                x = float(x)
                if any(lo < x < hi for lo, hi in report.intervals):
                    continue
                try:
                    assert cw.local_wavenumber(wf, x) >= -1e-12
                except SingularPoint:
                    pass
        assert found_intervals > 0

    def test_smoothness_at_p_zero(self):
        # n - m = 4: spectrum is twice continuously differentiable at p = 0,
        # so one-sided derivative estimates from the right must vanish like
        # the identically-zero left side.
        spec = cw.RationalSpec(poles=(cw.Root(-1j, 2), cw.Root(-2j, 2)))
        wf = cw.make_line_wavefunction(spec)
        sp = cw.momentum_spectrum(wf)
        h = 0.02
        npts = 7
        samples = np.array([cw.eval_spectrum(sp, i * h) for i in range(npts)])
        # one-sided stencil weights from the Vandermonde system
        vander = np.vander(np.arange(npts, dtype=float), increasing=True).T
        for deriv, tol in [(0, 1e-6), (1, 1e-4), (2, 1e-3)]:
            rhs = np.zeros(npts)
            rhs[deriv] = math.factorial(deriv)
            weights = np.linalg.solve(vander, rhs)
            onesided = np.dot(weights, samples) / h**deriv
            assert abs(onesided) < tol
