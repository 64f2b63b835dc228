import math
from fractions import Fraction

import numpy as np
import pytest

from gapkit import bcz, farey, hall, lattice, stats
from gapkit.core import Ball, Mat2, shear
from gapkit.lattice import (UnimodularLattice, ZSQUARED, has_vertical_vector,
                            poisson_baseline, seeded_lattice, slope_gaps_fast,
                            strip_vectors, to_transversal)
from gapkit.pointcloud import gaps, slopes_in_strip


class TestConstruction:
    def test_rejects_wrong_determinant(self):
        with pytest.raises(ValueError):
            UnimodularLattice(Mat2(1.0, 0.0, 0.0, 1.01))
        with pytest.raises(ValueError):
            UnimodularLattice(Mat2(2, 0, 0, 1))

    def test_seeded_lattice_is_exactly_unimodular(self):
        for seed in range(5):
            lat = seeded_lattice(seed)
            assert lat.is_exact()
            assert lat.basis.det() == 1
            assert not has_vertical_vector(lat, 1000)

    def test_minkowski_constant_declared(self):
        assert ZSQUARED.minkowski_constant == 4.0


class TestStripVectors:
    def test_integer_lattice(self):
        vecs = strip_vectors(ZSQUARED, 1, 3)
        assert [(v.x, v.y) for v in vecs] == [(1, 0), (1, 1), (1, 2)]

    def test_skew_basis_stays_in_strip(self):
        lat = UnimodularLattice(Mat2(1.0, 0.3, 0.0, 1.0))
        for v in strip_vectors(lat, 1, 40):
            assert 0 < v.x <= 1 and v.y >= 0

    def test_only_primitive_vectors(self):
        # (2, 0) is in the eta=2 strip but is twice (1, 0)
        vecs = strip_vectors(ZSQUARED, 2, 4)
        assert (2, 0) not in {(v.x, v.y) for v in vecs}

    def test_membership_consistent_under_group_action(self):
        # strip vectors of g.L pull back to integer coefficient pairs of L
        import numpy as np
        from gapkit.core import diag_flow, rotation
        gen = np.random.default_rng(13)
        lat = seeded_lattice(6).to_float()
        for _ in range(100):
            g = rotation(gen.uniform(0, 2 * math.pi)) \
                @ diag_flow(gen.uniform(-0.5, 0.5))
            moved = lat.act(g)
            inv = moved.basis.inverse()
            for v in strip_vectors(moved, 1, 10):
                c = inv @ v
                assert abs(c.x - round(c.x)) < 1e-6
                assert abs(c.y - round(c.y)) < 1e-6


class TestTransversal:
    def test_integer_lattice(self):
        point, first = to_transversal(ZSQUARED, 1)
        assert (point.a, point.b) == (1, 1)
        assert first == 0

    def test_integer_lattice_wide(self):
        point, _ = to_transversal(ZSQUARED, 4)
        assert (point.a, point.b) == (1, 4)

    def test_round_trip_from_transversal_basis(self):
        # the lattice with columns (a, 0), (b, 1/a) has coordinates (a, b)
        a, b = Fraction(1, 4), Fraction(1)
        lat = UnimodularLattice(Mat2(a, b, 0, 4))
        point, first = to_transversal(lat, 1)
        assert (point.a, point.b) == (a, b)
        assert first == 0

    def test_vertical_lattice_raises(self):
        from gapkit.errors import ExceptionalLatticeError
        lat = UnimodularLattice(Mat2(0, -1, 1, Fraction(1, 2)))
        with pytest.raises(ExceptionalLatticeError):
            to_transversal(lat, Fraction(1, 2))

    def test_orbit_roofs_equal_enumerated_gaps(self, seeded_lattices):
        lat = seeded_lattices[2]
        direct = gaps(slopes_in_strip(lat.to_float(), 1, 1001)).floats()
        fast = slope_gaps_fast(lat, 1, 1000).floats()
        assert np.allclose(fast, direct, atol=1e-9)


class TestFastGaps:
    def test_integer_lattice_all_ones(self):
        seq = slope_gaps_fast(ZSQUARED, 1, 20, exact=True)
        assert all(g == 1 for g in seq.gaps)

    def test_wide_strip_matches_farey_after_rescale(self):
        seq = slope_gaps_fast(ZSQUARED, 4, 6, exact=True)
        pairs = list(farey.farey_pairs(4))
        expected = [Fraction(1, q0 * q1) for (_, q0), (_, q1) in zip(pairs, pairs[1:])]
        assert list(seq.gaps) == expected
        orb = bcz.orbit(bcz.rescale(to_transversal(ZSQUARED, 4)[0], 1), 6)
        assert [g * 16 for g in seq.gaps] == list(orb.returns)

    def test_exact_fast_path_equals_exact_enumeration(self):
        lat = seeded_lattice(3)
        fast = slope_gaps_fast(lat, 1, 400, exact=True).gaps
        slopes = slopes_in_strip(lat, 1, 401).slopes  # exact Fractions
        direct = [t - s for s, t in zip(slopes, slopes[1:])]
        assert list(fast) == direct

    def test_oracle_equivalence_twenty_lattices(self):
        # return-map route == enumeration route, exactly, 20 x 10^4 gaps
        for seed in range(20):
            lat = seeded_lattice(seed)
            fast = slope_gaps_fast(lat, 1, 10 ** 4, exact=True).gaps
            slopes = slopes_in_strip(lat, 1, 10 ** 4 + 1).slopes
            direct = [t - s for s, t in zip(slopes, slopes[1:])]
            assert list(fast) == direct

    def test_golden_shear_lattice_converges_to_hall(self):
        basis = Mat2(Fraction(1), Fraction((1 + math.sqrt(5)) / 2), Fraction(0), Fraction(1))
        lat = UnimodularLattice(basis, tag="golden shear")
        sample = slope_gaps_fast(lat, 1, 10 ** 5).floats()
        ks = stats.ks_distance(stats.ecdf(sample),
                               lambda t: hall.hall_cdf(t, "unnormalized"))
        assert ks <= 0.02

    def test_eta_independence_after_rescaling(self):
        # eta^2-rescaled gap distributions agree across strip widths
        lat = seeded_lattice(1)
        narrow = slope_gaps_fast(lat, 1, 10 ** 5).floats()
        wide = slope_gaps_fast(lat, 2, 10 ** 5).floats() * 4.0
        ks = stats.ks_two_sample(stats.ecdf(narrow), stats.ecdf(wide))
        assert ks <= 0.01


class TestVerticalVectors:
    def test_explicit_vertical_basis(self):
        assert has_vertical_vector(UnimodularLattice(Mat2(0.0, -1.0, 1.0, 0.5)), 10)

    def test_integer_lattice(self):
        assert has_vertical_vector(ZSQUARED, 1)

    def test_irrational_horizontal_shear(self):
        lat = UnimodularLattice(Mat2(1.0, math.sqrt(2), 0.0, 1.0))
        assert not has_vertical_vector(lat, 1000)

    def test_exact_detection_with_bound(self):
        # minimal vertical coefficient pair is (-355, 113)
        lat = UnimodularLattice(Mat2(1, Fraction(355, 113), 0, 1))
        assert has_vertical_vector(lat, 355)
        assert not has_vertical_vector(lat, 354)


class TestPoissonBaseline:
    def test_mean_near_one(self):
        n = 10 ** 5
        seq = poisson_baseline(n, seed=1)
        assert float(np.mean(seq.floats())) == pytest.approx(1.0, abs=3 / math.sqrt(n))

    def test_exponential_law(self):
        seq = poisson_baseline(10 ** 5, seed=2)
        ks = stats.ks_distance(stats.ecdf(seq.floats()),
                               lambda t: 1.0 - np.exp(-np.asarray(t)))
        assert ks <= 0.01

    def test_deterministic(self):
        a = poisson_baseline(1000, seed=9).floats()
        b = poisson_baseline(1000, seed=9).floats()
        assert np.array_equal(a, b)


class TestMinkowski:
    def test_centered_squares_catch_a_point(self):
        # area 4 + eps centered square always contains a nonzero point
        side = math.sqrt(4.01)
        gen = np.random.default_rng(31)
        for _ in range(1000):
            lat = seeded_lattice(int(gen.integers(0, 10 ** 6))).to_float()
            pts = lat.enumerate_points(Ball(side))  # covers the square
            hits = [v for v in pts
                    if abs(v.x) <= side / 2 and abs(v.y) <= side / 2]
            assert hits


class TestEnumerationBudget:
    def test_budget_error(self):
        from gapkit.errors import ResourceLimitError
        with pytest.raises(ResourceLimitError):
            ZSQUARED.enumerate_points(Ball(4000.0), limit=10)
