import math
from fractions import Fraction

import numpy as np
import pytest

from gapkit import lattice, pointcloud, surface
from gapkit.core import Ball, Mat2, diag_flow, rotation, shear
from gapkit.errors import UnsupportedQueryError
from gapkit.lattice import UnimodularLattice, ZSQUARED
from gapkit.pointcloud import (SlopeSequence, gaps,
                               hitting_times, is_exceptional,
                               is_horizontally_short, is_vertically_short,
                               slopes_in_strip)


def random_group_element(gen):
    """Random determinant-1 matrix with entries in [-2, 2]."""
    while True:
        g = rotation(gen.uniform(0, 2 * math.pi)) \
            @ diag_flow(gen.uniform(-0.8, 0.8)) \
            @ rotation(gen.uniform(0, 2 * math.pi))
        if max(abs(e) for e in g.to_float().entries()) <= 2.0:
            return g


class TestSlopesInStrip:
    def test_integer_lattice_unit_strip(self):
        seq = slopes_in_strip(ZSQUARED, 1, 5)
        assert list(seq.slopes) == [0, 1, 2, 3, 4]

    def test_integer_lattice_wide_strip_is_farey(self):
        seq = slopes_in_strip(ZSQUARED, 4, 7)
        expected = [Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2),
                    Fraction(2, 3), Fraction(3, 4), Fraction(1)]
        assert list(seq.slopes) == expected

    def test_zero_count(self):
        assert len(slopes_in_strip(ZSQUARED, 1, 0)) == 0

    def test_exhaustion_carries_partial(self):
        # the x-projection of this vertical lattice is Z: nothing ever lands
        # in a strip of width 1/2, so the height doubling runs out
        from gapkit.errors import ExhaustionError
        lat = UnimodularLattice(Mat2(0, -1, 1, Fraction(1, 2)))
        with pytest.raises(ExhaustionError) as err:
            slopes_in_strip(lat, Fraction(1, 2), 5, height_budget=1024.0)
        assert len(err.value.partial) == 0

    def test_unbounded_strip_enumeration_rejected(self):
        from gapkit.core import VerticalStrip
        with pytest.raises(ValueError):
            ZSQUARED.enumerate_points(VerticalStrip(1.0))

    def test_sequence_validates_monotone(self):
        with pytest.raises(ValueError):
            SlopeSequence(1.0, (1.0, 1.0))


class TestGaps:
    def test_arithmetic_progression(self):
        seq = SlopeSequence(1.0, (0.0, 1.0, 2.0, 3.0))
        assert list(gaps(seq).gaps) == [1.0, 1.0, 1.0]

    def test_farey_level_four_diffs(self):
        seq = slopes_in_strip(ZSQUARED, 4, 7)
        expected = [Fraction(1, 4), Fraction(1, 12), Fraction(1, 6),
                    Fraction(1, 6), Fraction(1, 12), Fraction(1, 4)]
        assert list(gaps(seq).gaps) == expected

    def test_golden_surface_gaps_positive(self, golden_surface):
        seq = slopes_in_strip(golden_surface, 1, 4)
        for g in gaps(seq).gaps:
            assert g.sign() > 0 if hasattr(g, "sign") else g > 0

    def test_needs_two_slopes(self):
        with pytest.raises(ValueError):
            gaps(SlopeSequence(1.0, (1.0,)))


class TestShortness:
    def test_integer_lattice_horizontal(self):
        assert is_horizontally_short(ZSQUARED, 1)

    def test_vertical_basis(self):
        lat = UnimodularLattice(Mat2(0.0, 1.0, -1.0, 0.3))
        assert is_vertically_short(lat, 1)

    def test_horizontal_shear_has_no_short_vertical(self):
        # columns (1,0), (1/2,1): the shortest vertical vector is (0, 2)
        lat = UnimodularLattice(Mat2(1, Fraction(1, 2), 0, 1))
        assert not is_vertically_short(lat, 1)
        assert is_vertically_short(lat, 2)

    def test_exceptional_threshold(self):
        # Z^2 has vertical vector (0,1); the threshold is eta/16
        assert not is_exceptional(ZSQUARED, 1)
        assert is_exceptional(ZSQUARED, 17)

    def test_exceptional_needs_constant(self, golden_surface):
        with pytest.raises(UnsupportedQueryError):
            is_exceptional(golden_surface, 1)


class TestHittingTimes:
    def test_integer_lattice(self):
        times = hitting_times(ZSQUARED, 1, 5)
        assert times == [0, 1, 2, 3, 4]

    def test_empty(self):
        assert hitting_times(ZSQUARED, 1, 0) == []

    def test_matches_slopes_random_lattices(self, seeded_lattices):
        for lat in seeded_lattices[:5]:
            flat = lat.to_float()
            slopes = slopes_in_strip(flat, 1, 60).slopes
            times = hitting_times(flat, 1, 60)
            assert len(times) == 60
            assert np.allclose(times, slopes, atol=1e-9)


class TestEquivariance:
    @pytest.mark.parametrize("region", [Ball(3.0), Ball(1.4)])
    def test_lattice_systems(self, region, seeded_lattices):
        gen = np.random.default_rng(21)
        systems = [ZSQUARED.to_float()] + [l.to_float() for l in seeded_lattices[:3]]
        for sysm in systems:
            for _ in range(25):
                g = random_group_element(gen)
                mapped_region = region.transform(g)
                direct = {(round(float(v.x), 8), round(float(v.y), 8))
                          for v in sysm.act(g).enumerate_points(mapped_region)}
                pushed = {(round(float((g @ v).x), 8), round(float((g @ v).y), 8))
                          for v in sysm.enumerate_points(region)}
                assert direct == pushed

    def test_surface_system(self, golden_surface):
        g = shear(Fraction(1, 2))  # exact parameter keeps the surface exact
        region = Ball(2.0)
        direct = {(round(float(v.x), 8), round(float(v.y), 8))
                  for v in golden_surface.act(g).enumerate_points(region.transform(g))}
        pushed = {(round(float((g @ v).x), 8), round(float((g @ v).y), 8))
                  for v in golden_surface.enumerate_points(region)}
        assert direct == pushed


class TestCentralSymmetry:
    def test_lattice_ball(self, seeded_lattices):
        lat = seeded_lattices[0].to_float()
        pts = {(round(float(v.x), 9), round(float(v.y), 9))
               for v in lat.enumerate_points(Ball(4.0))}
        assert pts == {(-x, -y) for x, y in pts}

    def test_surface_holonomies(self, golden_surface):
        pts = {(v.x, v.y) for v in golden_surface.enumerate_points(Ball(3.0))}
        assert pts == {(-x, -y) for x, y in pts}


class TestShearInvariance:
    def test_gap_sequences_coincide_beyond_shear(self, seeded_lattices):
        lat = seeded_lattices[1]
        n = 120
        base = slopes_in_strip(lat, 1, n).slopes
        s = base[10]  # shear by an actual slope so the tail aligns exactly
        sheared = lat.act(shear(s))
        moved = slopes_in_strip(sheared, 1, n - 10).slopes
        expected = [x - s for x in base[10:]]
        assert np.allclose([float(x) for x in moved],
                           [float(x) for x in expected], atol=1e-9)
        g1 = gaps(SlopeSequence(1, tuple(moved))).floats()
        g2 = gaps(SlopeSequence(1, tuple(base))).floats()[10:]
        assert np.allclose(g1, g2, atol=1e-9)
