"""Incidence geometry: direction classification, pair counts, line covers,
affine maps, and the point-set file format."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from galdir import (
    AffineMap,
    PointSet,
    PointSetFormatError,
    Prime,
    classify_direction,
    determined_directions,
    is_collinear,
    is_covered_by_n_lines,
    pair_count,
    plane_stats,
)
from galdir.plane import (
    GENERIC,
    RICH,
    direction_label,
    line_points,
    line_through,
    pair_direction,
    pair_counts_by_enumeration,
    top_line_counts_reject,
)

PRIMES = st.sampled_from([2, 3, 5, 7])


@st.composite
def point_sets(draw, primes=PRIMES, max_size=None):
    p = draw(primes)
    prime = Prime(p)
    all_points = [divmod(i, p) for i in range(p * p)]
    hi = max_size or p * p
    pts = draw(
        st.lists(st.sampled_from(all_points), min_size=1, max_size=hi, unique=True)
    )
    return PointSet(prime, pts)


class TestPointSet:
    def test_parameters(self, p5):
        U = PointSet(p5, [(0, 0), (1, 2), (4, 4), (2, 2), (3, 0), (0, 1), (1, 1)])
        assert (U.N, U.n, U.r) == (7, 2, 3)
        assert U.theta == pytest.approx(7 / 5) and U.theta * 5 == 7

    def test_rejects_bad_points(self, p3):
        with pytest.raises(ValueError):
            PointSet(p3, [(0, 0), (0, 0)])
        with pytest.raises(ValueError):
            PointSet(p3, [(3, 0)])
        with pytest.raises(ValueError):
            PointSet(p3, [])

    def test_canonical_order(self, p3):
        a = PointSet(p3, [(2, 1), (0, 0)])
        b = PointSet(p3, [(0, 0), (2, 1)])
        assert a == b and hash(a) == hash(b)

    def test_file_roundtrip(self, tmp_path, p5):
        U = PointSet(p5, [(0, 3), (4, 1), (2, 2)])
        path = tmp_path / "u.txt"
        U.save(path)
        assert PointSet.load(path) == U

    def test_parse_errors_name_lines(self):
        with pytest.raises(PointSetFormatError) as exc:
            PointSet.loads("p 3\n0 0\n5 1\n")
        assert exc.value.line_number == 3
        with pytest.raises(PointSetFormatError):
            PointSet.loads("q 3\n0 0\n")
        with pytest.raises(PointSetFormatError) as exc:
            PointSet.loads("p 3\n1 1\n1 1\n")
        assert "duplicate" in str(exc.value)

    def test_comments_and_blanks(self):
        U = PointSet.loads("# demo\np 3\n\n0 0  # origin\n1 2\n")
        assert U.points == ((0, 0), (1, 2))

    def test_from_bitmask(self, p3):
        # bits 0..8 are row-major points (0,0),(0,1),...,(2,2)
        U = PointSet.from_bitmask(p3, 0b000000101)
        assert U.points == ((0, 0), (0, 2))


class TestClassification:
    def test_triangle_profile(self, p3):
        # {(0,0),(1,0),(0,1)}: slopes of its pairs are 0, inf, 2
        U = PointSet(p3, [(0, 0), (1, 0), (0, 1)])
        stats = plane_stats(U)
        assert stats.special_count == 3
        assert stats.rich_count == 3
        assert sorted(determined_directions(U)) == [0, 2, 3]
        assert stats.profile(1).classification == GENERIC

    def test_full_plane_has_no_special(self, p3):
        U = PointSet.from_bitmask(p3, (1 << 9) - 1)
        stats = plane_stats(U)
        assert stats.special_count == 0
        assert stats.rich_line_count == 0

    def test_single_full_line(self, p5):
        U = PointSet(p5, [(u, (2 * u + 1) % 5) for u in range(5)])
        for d in range(6):
            profile = classify_direction(U, d)
            if d == 2:
                assert profile.classification == RICH
                assert profile.rich_line_count == 1
            else:
                # every other direction meets the line once per parallel line
                assert profile.histogram == (1, 1, 1, 1, 1)

    @given(point_sets())
    def test_rich_poor_thresholds_are_exact(self, U):
        p = U.prime.p
        N = U.N
        for d in range(p + 1):
            profile = classify_direction(U, d)
            mx, mn = max(profile.histogram), min(profile.histogram)
            rich = mx * p >= N + p
            poor = mn * p <= N - p
            assert (profile.classification == RICH) == rich
            assert (profile.classification == GENERIC) == (not rich and not poor)

    @given(point_sets())
    def test_pair_count_methods_agree(self, U):
        enumerated = pair_counts_by_enumeration(U)
        total = 0
        for d in range(U.prime.p + 1):
            c = pair_count(U, d)
            assert c == enumerated[d]
            total += c
        assert total == U.N * (U.N - 1) // 2

    @given(point_sets())
    def test_determined_subset_of_special_when_theta_le_1(self, U):
        # for N <= p the determined directions are exactly the special ones
        if U.N > U.prime.p or U.N < 2:
            return
        stats = plane_stats(U)
        assert sorted(determined_directions(U)) == sorted(stats.special_directions())


class TestLines:
    @given(st.data())
    def test_line_through_contains_point(self, data):
        p = data.draw(PRIMES)
        prime = Prime(p)
        a = data.draw(st.integers(0, p - 1))
        b = data.draw(st.integers(0, p - 1))
        for d in range(p + 1):
            line = line_through(p, (a, b), d)
            assert (a, b) in line_points(p, line)
            assert len(line_points(p, line)) == p

    def test_pair_direction_convention(self, p5):
        # (0,1) and (1,3) differ by slope 2; vertical pairs map to p
        assert pair_direction(p5, (0, 1), (1, 3)) == 2
        assert pair_direction(p5, (2, 0), (2, 4)) == 5
        assert direction_label(5, 5) == "inf"


class TestCover:
    def brute_force_coverable(self, U, n):
        p = U.prime.p
        lines = [(d, k) for d in range(p + 1) for k in range(p)]
        pts = set(U.points)
        for combo in itertools.combinations(lines, n):
            covered = set()
            for line in combo:
                covered.update(line_points(p, line))
            if pts <= covered:
                return True
        return False

    @given(point_sets(primes=st.sampled_from([2, 3]), max_size=6))
    @settings(max_examples=40)
    def test_cover_matches_brute_force(self, U):
        for n in (1, 2):
            witness = is_covered_by_n_lines(U, n)
            assert (witness is not None) == self.brute_force_coverable(U, n)

    @given(point_sets())
    def test_cover_witness_covers(self, U):
        witness = is_covered_by_n_lines(U, U.n)
        if witness is None:
            return
        p = U.prime.p
        covered = set()
        for line in witness:
            covered.update(line_points(p, line))
        assert set(U.points) <= covered
        assert len(witness) <= U.n

    @given(point_sets())
    def test_fast_reject_is_sound(self, U):
        if top_line_counts_reject(U, U.n):
            assert is_covered_by_n_lines(U, U.n) is None

    def test_union_of_lines_is_covered(self, p5):
        pts = [(u, u % 5) for u in range(5)] + [(u, (u + 2) % 5) for u in range(5)]
        U = PointSet(p5, pts)
        assert is_covered_by_n_lines(U, 2) is not None

    def test_collinear(self, p5):
        assert is_collinear(PointSet(p5, [(0, 0), (1, 2), (2, 4)]))
        assert not is_collinear(PointSet(p5, [(0, 0), (1, 2), (2, 3)]))


class TestAffineMaps:
    @given(point_sets(), st.data())
    def test_classification_is_affine_invariant(self, U, data):
        prime = U.prime
        p = prime.p
        entries = data.draw(
            st.tuples(*[st.integers(0, p - 1) for _ in range(4)]).filter(
                lambda t: (t[0] * t[3] - t[1] * t[2]) % p != 0
            )
        )
        t0 = data.draw(st.integers(0, p - 1))
        t1 = data.draw(st.integers(0, p - 1))
        phi = AffineMap(prime, *entries, t0, t1)
        V = phi.apply(U)
        sU, sV = plane_stats(U), plane_stats(V)
        assert sU.special_count == sV.special_count
        assert sU.rich_count == sV.rich_count
        assert sU.rich_line_count == sV.rich_line_count
        # profiles transport along the direction image
        for d in range(p + 1):
            image = phi.direction_image(d)
            pu, pv = sU.profile(d), sV.profile(image)
            assert sorted(pu.histogram) == sorted(pv.histogram)
            assert pu.classification == pv.classification
            assert pu.pair_count == pv.pair_count

    def test_direction_to_vertical(self, p7):
        for d in range(7):
            phi = AffineMap.direction_to_vertical(p7, d)
            assert phi.direction_image(d) == 7

    @given(point_sets(), st.integers(0, 7))
    def test_inverse_roundtrip(self, U, d):
        prime = U.prime
        p = prime.p
        d = d % (p + 1)
        phi = AffineMap.swap(prime) if d == p else AffineMap.direction_to_vertical(
            prime, d
        )
        assert phi.inverse().apply(phi.apply(U)) == U

    def test_line_image(self, p5):
        phi = AffineMap.direction_to_vertical(p5, 2)
        line = (2, 3)  # slope 2, intercept 3
        image = phi.line_image(line)
        src = set(phi.apply_point(pt) for pt in line_points(5, line))
        assert src == set(line_points(5, image))
