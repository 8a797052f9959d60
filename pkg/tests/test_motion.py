import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from meanmotion.core import ExpPolynomial
from meanmotion.errors import DegenerateInputError, DependenceError
from meanmotion.lattice import group_basis
from meanmotion.motion import (
    BoxSpec,
    MeanMotionEstimate,
    SkippedLine,
    WindowSchedule,
    box_mean_motion,
    compare_estimators,
    direct_mean_motion,
    torus_mean,
    weyl_average,
    windowed_increment,
    windowed_increment_pair,
)
from conftest import random_poly

PI = math.pi


def pure_exp(lam):
    return ExpPolynomial.from_pairs(1, [(1.0, [lam])])


class TestWindowedIncrement:
    def test_pure_exponential(self):
        P = pure_exp("5/2")
        got = windowed_increment(P, [0.0], [0.3], "plus")
        assert got == pytest.approx(2.5, abs=1e-9)

    def test_sin_window_with_zero(self, sin_poly):
        tp, tm = windowed_increment_pair(sin_poly, [0.0], [0.1])
        assert tp == pytest.approx(-PI, abs=1e-9)
        assert tm == pytest.approx(PI, abs=1e-9)

    def test_sin_window_without_zero(self, sin_poly):
        tp, tm = windowed_increment_pair(sin_poly, [0.0], [PI / 2])
        assert tp == pytest.approx(0.0, abs=1e-9)
        assert tp == tm

    def test_identically_zero_line_skipped(self):
        P = ExpPolynomial.from_pairs(
            2, [(1.0, ["1", "0"]), (-1.0, ["1", "1"])]
        )
        with pytest.raises(SkippedLine):
            windowed_increment_pair(P, [0.0, 0.0], [0.2, 0.0])

    def test_modulation_shift(self, rng=np.random.default_rng(4)):
        # multiplying by e^{i g0 s} shifts every unit-window increment by
        # exactly g0, for either convention
        for _ in range(5):
            P = random_poly(rng, 1, 3)
            g0 = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
            shifted = ExpPolynomial.from_pairs(
                1,
                [
                    (t.coefficient, [t.exponent[0] + g0])
                    for t in P.terms
                ],
            )
            x = [float(rng.uniform(-5, 5))]
            y = [float(rng.uniform(-1, 1))]
            try:
                tp, tm = windowed_increment_pair(P, y, x)
                sp, sm = windowed_increment_pair(shifted, y, x)
            except SkippedLine:
                continue
            assert sp - tp == pytest.approx(float(g0), abs=1e-9)
            assert sm - tm == pytest.approx(float(g0), abs=1e-9)


class TestDirectMeanMotion:
    def test_pure_exponential_exact(self):
        P = pure_exp("3")
        box = BoxSpec((0.0,), (100.0,))
        assert direct_mean_motion(P, [0.0], box, "plus") == pytest.approx(
            3.0, abs=1e-9
        )

    def test_sin_long_interval(self, sin_poly):
        box = BoxSpec((0.0,), (100 * PI,))
        plus = direct_mean_motion(sin_poly, [0.0], box, "plus")
        minus = direct_mean_motion(sin_poly, [0.0], box, "minus")
        assert plus == pytest.approx(-1.0, abs=1e-9)
        assert minus == pytest.approx(1.0, abs=1e-9)

    def test_bad_convention(self, sin_poly):
        with pytest.raises(ValueError):
            direct_mean_motion(sin_poly, [0.0], BoxSpec((0,), (1,)), "up")

    def test_box_dimension_mismatch(self, sin_poly):
        with pytest.raises(ValueError):
            direct_mean_motion(
                sin_poly, [0.0], BoxSpec((0, 0), (1, 1)), "plus"
            )


class TestBoxMeanMotion:
    def test_sin_converges(self, sin_poly):
        sched = WindowSchedule(sizes=(50.0, 100.0, 200.0), lines_per_box=256)
        est = box_mean_motion(sin_poly, [0.0], sched, "plus")
        assert isinstance(est, MeanMotionEstimate)
        # jump indicator has std ~ pi * 0.47; 256 lines -> stderr ~ 0.09
        assert est.value == pytest.approx(-1.0, abs=0.3)
        assert est.reliable
        assert len(est.per_window) == 3

    def test_deterministic(self, sin_poly):
        sched = WindowSchedule(sizes=(25.0, 50.0), lines_per_box=32, seed=7)
        a = box_mean_motion(sin_poly, [0.0], sched, "minus")
        b = box_mean_motion(sin_poly, [0.0], sched, "minus")
        assert a == b

    def test_deep_strip_dominant_term(self, sin_poly):
        # at y = 3 the frequency -1 term dominates; no zeros on the line
        sched = WindowSchedule(sizes=(25.0, 50.0), lines_per_box=32)
        est_p = box_mean_motion(sin_poly, [3.0], sched, "plus")
        est_m = box_mean_motion(sin_poly, [3.0], sched, "minus")
        # subdominant term is e^{-6}-small; residual wiggle ~ 5e-3
        assert est_p.value == pytest.approx(-1.0, abs=0.01)
        assert est_m.value == pytest.approx(-1.0, abs=0.01)

    def test_schedule_validation(self):
        with pytest.raises(ValueError):
            WindowSchedule(sizes=(50.0, 25.0))
        with pytest.raises(ValueError):
            WindowSchedule(lines_per_box=4)
        with pytest.raises(ValueError):
            WindowSchedule(sizes=())


class TestTorusMean:
    def test_sin_grid(self, sin_poly):
        basis = group_basis(sin_poly.exponents)
        got = torus_mean(
            sin_poly, [0.0], basis, "plus", samples=4000, method="grid"
        )
        assert got == pytest.approx(-1.0, abs=0.01)

    def test_sin_minus_grid(self, sin_poly):
        basis = group_basis(sin_poly.exponents)
        got = torus_mean(
            sin_poly, [0.0], basis, "minus", samples=4000, method="grid"
        )
        assert got == pytest.approx(1.0, abs=0.01)

    def test_pure_exponential(self):
        P = pure_exp("-3")
        basis = group_basis(P.exponents)
        got = torus_mean(P, [0.0], basis, "plus", samples=64)
        assert got == pytest.approx(-3.0, abs=1e-9)

    def test_random_matches_grid(self, sin_poly):
        basis = group_basis(sin_poly.exponents)
        r = torus_mean(sin_poly, [0.0], basis, "plus", samples=3000, seed=2)
        g = torus_mean(
            sin_poly, [0.0], basis, "plus", samples=3000, method="grid"
        )
        assert r == pytest.approx(g, abs=0.05)

    def test_deterministic(self, sin_poly):
        basis = group_basis(sin_poly.exponents)
        a = torus_mean(sin_poly, [0.0], basis, "minus", samples=500, seed=9)
        b = torus_mean(sin_poly, [0.0], basis, "minus", samples=500, seed=9)
        assert a == b

    def test_deep_strip(self, sin_poly):
        basis = group_basis(sin_poly.exponents)
        got = torus_mean(sin_poly, [3.0], basis, "plus", samples=200)
        assert got == pytest.approx(-1.0, abs=0.01)


class TestWeylAverage:
    def test_trivial_character(self):
        sched = WindowSchedule(sizes=(25.0, 50.0))
        val = weyl_average(lambda u: np.ones_like(u), [[1.0]], sched)
        assert val == pytest.approx(1.0, abs=1e-12)

    def test_nontrivial_character_decays(self):
        sched = WindowSchedule(sizes=(50.0, 100.0))
        val = weyl_average(lambda u: np.exp(1j * u), [[1.0]], sched)
        assert abs(val) <= 4.0 / 100.0

    def test_irrational_pair_character(self):
        # k = (1, -1) against mu = {1, sqrt 2}: never resonant
        sched = WindowSchedule(sizes=(100.0, 200.0))
        val = weyl_average(
            lambda u1, u2: np.exp(1j * (u1 - u2)),
            [[1.0], [math.sqrt(2)]],
            sched,
        )
        assert abs(val) <= 4.0 / 200.0

    def test_dependent_rejected(self):
        with pytest.raises(DependenceError):
            weyl_average(lambda u1, u2: u1, [[1.0], [2.0]], WindowSchedule())

    def test_scalar_fallback(self):
        sched = WindowSchedule(sizes=(25.0,))
        val = weyl_average(
            lambda u: float(np.cos(u)) ** 2, [[1.0]], sched, points_per_axis=512
        )
        assert val == pytest.approx(0.5, abs=0.01)


class TestCompareEstimators:
    def test_sin_passes(self, sin_poly):
        sched = WindowSchedule(sizes=(50.0, 100.0), lines_per_box=64)
        report = compare_estimators(sin_poly, [0.0], sched, samples=600)
        assert report["pass"]
        for conv in ("plus", "minus"):
            assert report["diff"][conv] <= report["tolerance"][conv]

    def test_two_dim_random(self):
        rng = np.random.default_rng(31)
        P = random_poly(rng, 2, 3)
        sched = WindowSchedule(sizes=(25.0, 50.0), lines_per_box=32)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report = compare_estimators(P, [0.2, -0.1], sched, samples=400)
        assert report["pass"]

    def test_report_shape(self, sin_poly):
        sched = WindowSchedule(sizes=(25.0, 50.0), lines_per_box=32)
        report = compare_estimators(sin_poly, [0.0], sched, samples=200)
        assert set(report) == {"y", "box", "torus", "diff", "tolerance", "pass"}
        assert report["box"]["plus"]["total_lines"] == 64
