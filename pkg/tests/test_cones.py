"""Cone engine tests.

Frozen small examples plus randomized cross-checks against an oracle that
is independent of the production double-description code: candidate rays
are enumerated as kernel lines of inequality subsets using Fraction
Gaussian elimination, then filtered by feasibility.
"""

import random
from fractions import Fraction
from math import gcd

import pytest

from toricgit.cones import BoundExceededError, Cone, hilbert_basis, monoid_generators
from toricgit.intlat import IntMatrix, dot


def frac_kernel_basis(rows, d):
    """Basis of {x in Q^d : r.x = 0 for all r in rows} by row reduction."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(d):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    basis = []
    for fc in (c for c in range(d) if c not in pivots):
        v = [Fraction(0)] * d
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def frac_rank(rows, d):
    return d - len(frac_kernel_basis(rows, d))


def integer_direction(frac_vec):
    den = 1
    for x in frac_vec:
        den = den * x.denominator // gcd(den, x.denominator)
    v = [int(x * den) for x in frac_vec]
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return tuple(x // g for x in v)


def oracle_extreme_rays(ineqs, d):
    """All extreme rays of {x : a.x >= 0}, assuming the cone is pointed.

    A feasible nonzero direction spanning the kernel of a rank d-1 subset
    of the inequalities is extreme, and every extreme ray arises this way.
    """
    from itertools import combinations

    ineqs = [tuple(a) for a in ineqs if any(a)]
    found = set()
    subsets = [()] if d == 1 else combinations(ineqs, d - 1)
    for sub in subsets:
        ker = frac_kernel_basis(sub, d)
        if len(ker) != 1:
            continue
        v = integer_direction(ker[0])
        for cand in (v, tuple(-x for x in v)):
            if all(dot(a, cand) >= 0 for a in ineqs):
                found.add(cand)
    return tuple(sorted(found))


def random_vectors(rng, count, d, lo=-4, hi=4):
    return [tuple(rng.randint(lo, hi) for _ in range(d)) for _ in range(count)]


QUADRANT = Cone.from_generators([(1, 0), (0, 1)], 2)


class TestDual:
    def test_quadrant_self_dual(self):
        assert QUADRANT.dual() == QUADRANT

    def test_single_ray_gives_half_plane(self):
        ray = Cone.from_generators([(1, 0)], 2)
        dual = ray.dual()
        assert set(dual.generators) == {(1, 0), (0, 1), (0, -1)}
        assert dual.lineality_rank == 1

    def test_zero_cone_gives_full_space(self):
        assert Cone.zero(2).dual() == Cone.full(2)
        assert Cone.full(2).dual() == Cone.zero(2)

    def test_involution_random_sweep(self):
        rng = random.Random(20260817)
        for _ in range(300):
            d = rng.randint(1, 4)
            gens = random_vectors(rng, rng.randint(0, 6), d)
            c = Cone.from_generators(gens, d)
            assert c.dual().dual() == c

    def test_extreme_rays_match_subset_kernel_oracle(self):
        rng = random.Random(424242)
        pointed_seen = 0
        for _ in range(250):
            d = rng.randint(2, 3)
            ineqs = random_vectors(rng, rng.randint(2, 6), d, -3, 3)
            c = Cone.from_inequalities(ineqs, d)
            ker = frac_kernel_basis([a for a in ineqs if any(a)], d)
            assert len(ker) == c.lineality_rank
            if c.lineality_rank == 0:
                pointed_seen += 1
                assert c.generators == oracle_extreme_rays(ineqs, d)
        assert pointed_seen > 50

    def test_facets_match_oracle_on_full_dimensional_cones(self):
        rng = random.Random(97531)
        for _ in range(200):
            d = rng.randint(2, 3)
            gens = random_vectors(rng, rng.randint(d, 6), d, -3, 3)
            if frac_rank(gens, d) < d:
                continue
            c = Cone.from_generators(gens, d)
            assert c.facets == oracle_extreme_rays(gens, d)


class TestIntersect:
    def test_quadrant_with_left_half_plane(self):
        half = Cone.from_inequalities([(-1, 0)], 2)
        assert QUADRANT.intersect(half).generators == ((0, 1),)

    def test_idempotent(self):
        assert QUADRANT.intersect(QUADRANT) == QUADRANT

    def test_with_full_space(self):
        assert QUADRANT.intersect(Cone.full(2)) == QUADRANT

    def test_membership_sampling(self):
        rng = random.Random(1111)
        for _ in range(40):
            d = rng.randint(2, 3)
            a = Cone.from_generators(random_vectors(rng, rng.randint(1, 5), d), d)
            b = Cone.from_generators(random_vectors(rng, rng.randint(1, 5), d), d)
            c = a.intersect(b)
            pts = random_vectors(rng, 100, d, -6, 6)
            for p in pts:
                if c.contains(p):
                    assert a.contains(p) and b.contains(p)
            # points assembled inside the intersection must lie in both
            basis = list(c.generators)
            if basis:
                for _ in range(10):
                    coeffs = [Fraction(rng.randint(0, 5), rng.randint(1, 4)) for _ in basis]
                    p = tuple(sum(q * g[i] for q, g in zip(coeffs, basis)) for i in range(d))
                    assert a.contains(p) and b.contains(p)


class TestFaces:
    def test_quadrant_face_lattice(self):
        gens = {f.generators for f in QUADRANT.faces()}
        assert gens == {(), ((1, 0),), ((0, 1),), ((0, 1), (1, 0))}

    def test_zero_cone(self):
        z = Cone.zero(2)
        assert [f.generators for f in z.faces()] == [()]

    def test_half_plane(self):
        half = Cone.from_inequalities([(1, 0)], 2)
        gens = {f.generators for f in half.faces()}
        assert gens == {((0, -1), (0, 1)), ((0, -1), (0, 1), (1, 0))}

    def test_is_face_of(self):
        ray = Cone.from_generators([(1, 0)], 2)
        diag = Cone.from_generators([(1, 1)], 2)
        assert ray.is_face_of(QUADRANT)
        assert not diag.is_face_of(QUADRANT)
        assert QUADRANT.is_face_of(QUADRANT)
        assert Cone.zero(2).is_face_of(QUADRANT)

    def test_simplicial_face_count_random(self):
        rng = random.Random(3333)
        for _ in range(60):
            d = rng.randint(1, 4)
            basis = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
            for _ in range(8):
                i, j = rng.randrange(d), rng.randrange(d)
                if i != j:
                    m = rng.randint(-2, 2)
                    basis[i] = [a + m * b for a, b in zip(basis[i], basis[j])]
            k = rng.randint(0, d)
            c = Cone.from_generators([tuple(r) for r in basis[:k]], d)
            assert c.is_simplicial()
            assert len(c.faces()) == 2 ** k


class TestImageAndQueries:
    def test_image_of_quadrant_under_difference_map(self):
        pi = IntMatrix(((1, -1),))
        img = QUADRANT.image(pi)
        assert img == Cone.full(1)
        assert img.lineality_rank == 1

    def test_image_of_ray(self):
        pi = IntMatrix(((1, -1),))
        assert Cone.from_generators([(1, 0)], 2).image(pi).generators == ((1,),)

    def test_image_of_zero_cone(self):
        pi = IntMatrix(((1, -1),))
        assert Cone.zero(2).image(pi) == Cone.zero(1)

    def test_contains(self):
        assert QUADRANT.contains((1, 1))
        assert QUADRANT.contains((0, 0))
        assert not QUADRANT.contains((-1, 2))
        assert QUADRANT.contains((Fraction(1, 2), Fraction(3, 7)))

    def test_relative_interior(self):
        assert QUADRANT.contains_in_relative_interior((1, 1))
        assert not QUADRANT.contains_in_relative_interior((1, 0))
        assert Cone.zero(2).contains_in_relative_interior((0, 0))

    def test_is_simplicial(self):
        # a redundant generating list still describes the (simplicial) quadrant
        redundant = Cone.from_generators([(1, 0), (0, 1), (1, 1)], 2)
        assert redundant == QUADRANT
        assert redundant.is_simplicial()
        half = Cone.from_inequalities([(1, 0)], 2)
        assert not half.is_simplicial()
        square = Cone.from_generators(
            [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], 3
        )
        assert not square.is_simplicial()
        assert Cone.zero(3).is_simplicial()


class TestHilbertBasis:
    def test_quadrant(self):
        assert set(hilbert_basis(QUADRANT, bound=5)) == {(1, 0), (0, 1)}

    def test_width_two_cone(self):
        c = Cone.from_generators([(1, 0), (1, 2)], 2)
        assert set(hilbert_basis(c, bound=5)) == {(1, 0), (1, 1), (1, 2)}

    def test_width_three_cone(self):
        c = Cone.from_generators([(1, 0), (1, 3)], 2)
        assert set(hilbert_basis(c, bound=5)) == {(1, 0), (1, 1), (1, 2), (1, 3)}

    def test_bound_exceeded_is_explicit(self):
        c = Cone.from_generators([(1, 0), (1, 3)], 2)
        with pytest.raises(BoundExceededError) as exc:
            hilbert_basis(c, bound=2)
        assert exc.value.needed == 3
        assert set(hilbert_basis(c, bound=exc.value.needed)) == set(
            hilbert_basis(c, bound=None)
        )

    def test_non_pointed_rejected(self):
        half = Cone.from_inequalities([(1, 0)], 2)
        with pytest.raises(ValueError):
            hilbert_basis(half, bound=5)

    def test_dual_pairing_nonnegative_sweep(self):
        rng = random.Random(555)
        checked = 0
        while checked < 30:
            d = rng.randint(2, 3)
            gens = random_vectors(rng, rng.randint(d, 4), d, -2, 2)
            if frac_rank(gens, d) < d:
                continue
            c = Cone.from_generators(gens, d)
            for m in hilbert_basis(c.dual()):
                assert all(dot(m, v) >= 0 for v in c.generators)
            checked += 1

    def test_monoid_generators_of_half_plane(self):
        half = Cone.from_inequalities([(1, 0)], 2)
        assert set(monoid_generators(half)) == {(0, 1), (0, -1), (1, 0)}

    def test_hilbert_basis_is_minimal_and_generates(self):
        rng = random.Random(777)
        checked = 0
        while checked < 20:
            gens = random_vectors(rng, 2, 2, 0, 4)
            c = Cone.from_generators(gens, 2)
            if not c.is_pointed() or c.dim() != 2:
                continue
            hb = hilbert_basis(c)
            for i, h in enumerate(hb):
                others = [x for j, x in enumerate(hb) if j != i]
                assert not _in_monoid(h, others, c)
            for p in random_vectors(rng, 30, 2, 0, 6):
                if c.contains(p):
                    assert _in_monoid(p, list(hb), c)
            checked += 1


def _in_monoid(p, gens, cone):
    """Exhaustive monoid membership for small nonnegative instances."""
    if all(x == 0 for x in p):
        return True
    return any(
        cone.contains(tuple(a - b for a, b in zip(p, g)))
        and _in_monoid(tuple(a - b for a, b in zip(p, g)), gens, cone)
        for g in gens
    )
