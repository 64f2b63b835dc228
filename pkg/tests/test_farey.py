import math
from fractions import Fraction

import pytest
import sympy

from gapkit import farey, stats
from gapkit.errors import ResourceLimitError


class TestSequence:
    def test_level_one(self):
        level = farey.farey_sequence(1)
        assert list(level.fractions) == [Fraction(0), Fraction(1)]

    def test_level_four(self):
        level = farey.farey_sequence(4)
        expected = [Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2),
                    Fraction(2, 3), Fraction(3, 4), Fraction(1)]
        assert list(level.fractions) == expected

    def test_unimodular_neighbors_level_100(self):
        pairs = list(farey.farey_pairs(100))
        for (p0, q0), (p1, q1) in zip(pairs, pairs[1:]):
            assert q0 * p1 - p0 * q1 == 1

    def test_streaming_matches_list(self):
        fracs = [Fraction(p, q) for p, q in farey.farey_pairs(30)]
        assert fracs == list(farey.farey_sequence(30).fractions)

    def test_denominator_bound_and_sorted(self):
        level = farey.farey_sequence(17)
        assert all(f.denominator <= 17 for f in level.fractions)
        assert sorted(level.fractions) == list(level.fractions)

    def test_budget(self):
        with pytest.raises(ResourceLimitError):
            farey.farey_sequence(100, term_budget=10)

    def test_bad_level(self):
        with pytest.raises(ValueError):
            farey.farey_sequence(0)


class TestSize:
    def test_small_values(self):
        assert farey.farey_size(1) == 1
        assert farey.farey_size(4) == 6

    @pytest.mark.parametrize("q", [2, 7, 10, 37, 100, 211])
    def test_against_totients(self, q):
        assert farey.farey_size(q) == sum(sympy.totient(i) for i in range(1, q + 1))

    def test_matches_sequence_length(self):
        for q in (1, 5, 23):
            assert farey.farey_size(q) == len(farey.farey_sequence(q)) - 1

    def test_density_limit(self):
        # N(Q)/Q^2 -> 3/pi^2
        assert farey.farey_size(2000) / 2000 ** 2 == pytest.approx(
            3 / math.pi ** 2, abs=0.01)


class TestGaps:
    def test_level_four_exact(self):
        expected = [Fraction(3, 2), Fraction(1, 2), Fraction(1), Fraction(1),
                    Fraction(1, 2), Fraction(3, 2)]
        assert farey.farey_gaps(4) == expected

    def test_unnormalized_gaps_telescope(self):
        for q in (3, 11, 40):
            n = farey.farey_size(q)
            assert sum(farey.farey_gaps(q)) == n  # i.e. raw gaps sum to 1

    def test_mean_normalized_gap_is_one(self):
        gaps = farey.farey_gaps(25)
        assert sum(gaps) / len(gaps) == 1

    @pytest.mark.parametrize("q", [5, 12, 50])
    def test_min_gap_from_adjacent_max_denominators(self, q):
        gaps = farey.farey_gaps(q)
        assert min(gaps) == Fraction(farey.farey_size(q), q * (q - 1))

    def test_min_gap_above_support_floor(self):
        # below the limiting support infimum 3/pi^2 nothing survives
        gaps = farey.farey_gaps(500)
        assert float(min(gaps)) > 0.30

    def test_equidistribution_discrepancy(self):
        vals = [p / q for p, q in farey.farey_pairs(1000)]
        assert stats.discrepancy(stats.ecdf(vals)) <= 0.01
