from fractions import Fraction

import pytest

import betaforge as bf
from oracles import group_by_value, root_bracket, zint_interval

GOLDEN_POLY = [-1, -1, 1]
SQRT2_POLY = [-2, 0, 1]
CBRT2_POLY = [-2, 0, 0, 1]


def min_gap_lower_bound(minpoly, iso, n, bits=120):
    """Certified lower bound on the smallest gap between distinct values of
    length-n words, from the independent integer-coordinate oracle."""
    lo, hi = root_bracket(minpoly, Fraction(iso[0]), Fraction(iso[1]), bits)
    reps = list(group_by_value(minpoly, n).keys())
    scale_lo, scale_hi = zint_interval(_power_coords(minpoly, n), lo, hi)
    intervals = sorted(zint_interval(list(c), lo, hi) for c in reps)
    best = None
    for (alo, ahi), (blo, bhi) in zip(intervals, intervals[1:]):
        gap_lo = blo - ahi
        assert gap_lo > 0, "oracle bracket too coarse"
        best = gap_lo if best is None else min(best, gap_lo)
    # values are scaled by root^n; divide by an upper bound of the scale
    return best / scale_hi


def _power_coords(minpoly, n):
    from oracles import zint_mul_by_root

    d = len(minpoly) - 1
    coords = [0] * d
    coords[0] = 1
    for _ in range(n):
        coords = zint_mul_by_root(coords, minpoly)
    return coords


class TestSeparation:
    def test_golden_length_three(self, golden):
        bound = bf.separation_bound(golden.data, golden.bounds, 3)
        assert bound <= min_gap_lower_bound(GOLDEN_POLY, ("3/2", "5/3"), 3)
        assert float(bound) < 0.0898  # 0.38 / bplus^3

    def test_sqrt2_length_two(self, sqrt2):
        bound = bf.separation_bound(sqrt2.data, sqrt2.bounds, 2)
        assert bound == Fraction(1, 10)
        assert bound <= min_gap_lower_bound(SQRT2_POLY, ("7/5", "3/2"), 2)

    def test_golden_length_one(self, golden):
        bound = bf.separation_bound(golden.data, golden.bounds, 1)
        assert bound == Fraction(38, 100) / golden.bounds.bplus_upper
        # the only nonzero length-1 gap is 1/G ~ 0.618
        assert float(bound) < 0.618

    def test_sound_for_small_lengths(self, golden, sqrt2):
        for preset, poly, iso in [(golden, GOLDEN_POLY, ("3/2", "5/3")), (sqrt2, SQRT2_POLY, ("7/5", "3/2"))]:
            for n in range(1, 9):
                bound = bf.separation_bound(preset.data, preset.bounds, n)
                assert bound <= min_gap_lower_bound(poly, iso, n)

    def test_rejects_zero_length(self, golden):
        with pytest.raises(bf.DomainError):
            bf.separation_bound(golden.data, golden.bounds, 0)


class TestEquiv:
    def test_golden_collision(self, golden):
        assert bf.equiv(golden.beta, "011", "100")

    def test_golden_non_collision(self, golden):
        assert not bf.equiv(golden.beta, "01", "10")

    def test_sqrt2_no_collisions(self, sqrt2, rng):
        for _ in range(60):
            n = rng.randrange(1, 11)
            x = format(rng.getrandbits(n), f"0{n}b")
            y = format(rng.getrandbits(n), f"0{n}b")
            assert bf.equiv(sqrt2.beta, x, y) == (x == y)

    def test_length_mismatch(self, golden):
        with pytest.raises(bf.DomainError):
            bf.equiv(golden.beta, "01", "011")

    def test_rational_base(self):
        spec = bf.RationalBeta(Fraction(3, 2))
        assert bf.equiv(spec, "10", "10")
        assert not bf.equiv(spec, "10", "01")


class TestEquivClass:
    def test_golden_examples(self, golden):
        assert bf.equiv_class(golden.beta, "100") == ["011", "100"]
        assert bf.equiv_class(golden.beta, "0000") == ["0000"]
        assert bf.equiv_class(golden.beta, "1100") == ["1011", "1100"]

    def test_matches_bruteforce_grouping(self, golden, sqrt2, tribonacci, rng):
        for preset, poly in [(golden, GOLDEN_POLY), (sqrt2, SQRT2_POLY), (tribonacci, [-1, -1, -1, 1])]:
            for n in (5, 8):
                groups = group_by_value(poly, n)
                for members in groups.values():
                    got = bf.equiv_class(preset.beta, members[0])
                    assert got == sorted(members)
        # length 12: exhaustive grouping, sampled class checks
        groups = group_by_value(GOLDEN_POLY, 12)
        sampled = rng.sample(sorted(groups), 150)
        for key in sampled:
            members = groups[key]
            assert bf.equiv_class(golden.beta, members[0]) == sorted(members)

    def test_members_share_exact_value(self, golden, rng):
        for _ in range(25):
            n = rng.randrange(2, 11)
            x = format(rng.getrandbits(n), f"0{n}b")
            cls = bf.equiv_class(golden.beta, x)
            assert x in cls
            base = bf.delta_finite(golden.beta, x)
            for y in cls:
                assert (bf.delta_finite(golden.beta, y) - base).sign() == 0

    def test_class_c_singletons(self, sqrt2, cbrt2):
        for preset in (sqrt2, cbrt2):
            assert bf.is_generalized_garsia(preset.data)
            for n in range(1, 13):
                groups = group_by_value(list(preset.data.coefficients), n)
                assert all(len(ws) == 1 for ws in groups.values())


class TestGarsiaPredicate:
    def test_sqrt2(self):
        assert bf.is_generalized_garsia(bf.MinPolyData((-2, 0, 1)))

    def test_golden(self):
        assert not bf.is_generalized_garsia(bf.MinPolyData((-1, -1, 1)))

    def test_cbrt2(self):
        assert bf.is_generalized_garsia(bf.MinPolyData((-2, 0, 0, 1)))

    def test_non_monic(self):
        assert not bf.is_generalized_garsia(bf.MinPolyData((-3, 0, 2)))


class TestPartition:
    def test_values_strictly_increase(self, golden, rng):
        words = [format(k, "06b") for k in range(64)]
        part = bf.partition_words(golden.beta, words)
        for a, b in zip(part.classes, part.classes[1:]):
            assert bf.exact_cmp(a.value, b.value) < 0
        assert sum(len(c.members) for c in part.classes) == 64

    def test_index_of(self, golden):
        words = [format(k, "04b") for k in range(16)]
        part = bf.partition_words(golden.beta, words)
        k = part.index_of("1100")
        assert "1011" in part.classes[k - 1].members

    def test_presets_available(self):
        names = sorted(bf.builtin_presets())
        assert names == ["cbrt2", "golden", "sqrt2", "tribonacci"]
        with pytest.raises(bf.DomainError):
            bf.get_preset("nope")

    def test_preset_bounds_certified(self, golden, sqrt2, cbrt2, tribonacci):
        # pi_lower must underestimate prod |1 - |z|| (monic presets), checked
        # against independently bracketed conjugate moduli
        checks = {
            "golden": (Fraction(38, 100), Fraction(381, 1000), Fraction(382, 1000)),
            "sqrt2": (Fraction(2, 5), Fraction(414, 1000), Fraction(415, 1000)),
        }
        for preset in (golden, sqrt2):
            pi_lo, true_lo, true_hi = checks[preset.name]
            assert pi_lo <= true_lo
        # bplus_upper at least beta for the Pisot presets (their outside
        # product is empty), and exactly 2 for the square/cube roots of 2
        assert golden.bounds.bplus_upper >= Fraction(1618, 1000)
        assert sqrt2.bounds.bplus_upper == 2
        assert cbrt2.bounds.bplus_upper == 2
        assert tribonacci.bounds.bplus_upper >= Fraction(1839, 1000)
