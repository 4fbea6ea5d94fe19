import math

import numpy as np
import pytest

from backflow import contwave as cw
from backflow import padegen as pg
from backflow.contwave import Root
from backflow.errors import SpecViolation
from backflow.polyring import poly_from_roots, series_from_poly, series_quotient


def exp_design_problem(m: int, b: float, x0: float) -> pg.PadeProblem:
    return pg.PadeProblem(
        profile_coeffs=pg.exp_profile_coeffs(-1.0),
        numerator_degree=m,
        poles=(Root(-1j * b, m + 1),),
        half_width=x0,
    )


class TestPadeNumerator:
    def test_exp_profile_closed_form(self):
        # single pole of order m+1 at -ib: alpha_k = sum_l C(m+1,l) (ib)^(m+1-l) (-i)^(k-l)/(k-l)!
        m, b = 8, 3 * math.pi
        alpha = pg.pade_numerator(exp_design_problem(m, b, math.pi)).coeffs
        for k in range(m + 1):
            expect = sum(
                math.comb(m + 1, l)
                * (1j * b) ** (m + 1 - l)
                * (-1j) ** (k - l)
                / math.factorial(k - l)
                for l in range(k + 1)
            )
            assert alpha[k] == pytest.approx(expect, rel=1e-13)

    def test_constant_profile_truncates_denominator(self):
        # p(x) = 1: the convolution returns beta itself, truncated at m
        problem = pg.PadeProblem(
            profile_coeffs=(1.0, 0.0, 0.0),
            numerator_degree=1,
            poles=(Root(-1j, 2),),
            half_width=1.0,
        )
        alpha = pg.pade_numerator(problem).coeffs
        assert alpha[0] == pytest.approx(-1 + 0j)
        assert alpha[1] == pytest.approx(2j)

    def test_degree_zero(self):
        problem = pg.PadeProblem(
            profile_coeffs=(2.0 + 1j,),
            numerator_degree=0,
            poles=(Root(-2j, 3),),
            half_width=0.5,
        )
        alpha = pg.pade_numerator(problem).coeffs
        beta0 = poly_from_roots(problem.poles).coeffs[0]
        assert alpha == (pytest.approx(beta0 * (2.0 + 1j)),)

    def test_m_not_below_n_rejected(self):
        with pytest.raises(SpecViolation):
            pg.pade_numerator(
                pg.PadeProblem(
                    profile_coeffs=tuple([1.0] * 6),
                    numerator_degree=3,
                    poles=(Root(-1j, 3),),
                    half_width=1.0,
                )
            )

    def test_upper_pole_rejected(self):
        with pytest.raises(SpecViolation):
            pg.pade_numerator(
                pg.PadeProblem(
                    profile_coeffs=(1.0, 1.0),
                    numerator_degree=0,
                    poles=(Root(1j, 2),),
                    half_width=1.0,
                )
            )


class TestDesign:
    def test_taylor_match_random_poles(self):
        rng = np.random.default_rng(23)
        x0 = 1.0
        for _ in range(5):
            m = int(rng.integers(2, 6))
            poles = []
            total = 0
            while total <= m:
                mult = int(rng.integers(1, 4))
                poles.append(
                    Root(
                        complex(rng.uniform(-3, 3), rng.uniform(-6, -1.5 * x0)),
                        mult,
                    )
                )
                total += mult
            coeffs = tuple(
                complex(u, v)
                for u, v in rng.uniform(-1, 1, size=(m + 1, 2))
            )
            problem = pg.PadeProblem(coeffs, m, tuple(poles), x0)
            report = pg.design_wavefunction(problem)
            A = report.numerator
            B = poly_from_roots(poles)
            q = series_quotient(
                series_from_poly(A, 0j, m + 1), series_from_poly(B, 0j, m + 1), m + 1
            )
            scale = max(abs(c) for c in coeffs)
            for got, want in zip(q.coeffs, coeffs):
                assert abs(got - want) <= 1e-10 * scale

    def test_reconstruction_matches_convolution(self):
        report = pg.design_wavefunction(exp_design_problem(8, 3 * math.pi, math.pi))
        A = report.numerator
        recon = poly_from_roots(report.wavefunction.spec.zeros)
        lead = A.coeffs[-1]
        for rc, ac in zip(recon.coeffs, A.coeffs):
            assert abs(lead * rc - ac) <= 1e-8 * abs(ac)

    def test_error_decreases_with_pole_distance(self):
        errs = [
            pg.design_wavefunction(exp_design_problem(8, b, math.pi)).max_error_on_interval
            for b in (3 * math.pi, 6 * math.pi, 12 * math.pi, 15 * math.pi)
        ]
        assert all(a > b for a, b in zip(errs, errs[1:]))

    def test_amplitude_ratio_comparison(self):
        rep3 = pg.design_wavefunction(exp_design_problem(8, 3 * math.pi, math.pi))
        rep15 = pg.design_wavefunction(exp_design_problem(8, 15 * math.pi, math.pi))
        assert rep15.max_error_on_interval < rep3.max_error_on_interval
        assert 1e4 < rep15.amplitude_ratio / rep3.amplitude_ratio < 1e6
        assert rep3.amplitude_ratio >= 1
        assert rep15.amplitude_ratio >= 1

    def test_designed_state_tracks_profile(self):
        report = pg.design_wavefunction(exp_design_problem(8, 15 * math.pi, math.pi))
        wf = report.wavefunction
        scale = wf.norm_constant / abs(report.numerator.coeffs[-1])
        for x in (-1.5, -0.4, 0.0, 0.8, 2.0):
            got = complex(wf(x))
            want = scale * complex(math.cos(x), -math.sin(x))
            assert got == pytest.approx(want, rel=2e-3)

    def test_designed_state_backflows_across_interval(self):
        report = pg.design_wavefunction(exp_design_problem(8, 15 * math.pi, math.pi))
        intervals = cw.backflow_intervals(report.wavefunction).intervals
        covered = sum(
            max(0.0, min(hi, math.pi) - max(lo, -math.pi)) for lo, hi in intervals
        )
        assert covered >= 0.9 * 2 * math.pi

    def test_spectrum_positivity_inherited(self):
        from backflow import oracle

        report = pg.design_wavefunction(exp_design_problem(4, 8.0, 1.0))
        wf = report.wavefunction
        sp = cw.momentum_spectrum(wf)
        peak = max(abs(cw.eval_spectrum(sp, p)) for p in np.linspace(0.05, 12, 150))
        for p in (-0.5, -2.0, -7.0):
            neg = oracle.fourier_quadrature(wf, p, tol=1e-9).value
            assert abs(neg) < 1e-6 * peak


class TestScalingProbe:
    def test_slope_near_m(self):
        m = 8
        pairs = pg.amplitude_scaling_probe(m, [3 * math.pi, 6 * math.pi, 12 * math.pi], math.pi)
        slope = np.polyfit(
            np.log([b for b, _ in pairs]), np.log([r for _, r in pairs]), 1
        )[0]
        assert slope == pytest.approx(m, rel=0.2)

    def test_small_case_against_direct_bound(self):
        m, x0 = 2, 1.0
        ((b, ratio),) = pg.amplitude_scaling_probe(m, [10.0], x0)
        expect = b**m / math.factorial(m)
        assert ratio == pytest.approx(expect, rel=4.0)
        assert expect / 5 < ratio < expect * 5

    def test_single_value(self):
        pairs = pg.amplitude_scaling_probe(3, [12.0], 1.0)
        assert len(pairs) == 1
        assert pairs[0][0] == 12.0

    def test_b_below_half_width_rejected(self):
        with pytest.raises(SpecViolation):
            pg.amplitude_scaling_probe(3, [0.5], 1.0)
