"""Exact convex rational polyhedral cones via double description.

A cone is stored with both minimal generator and facet-normal lists, each in a
canonical form (primitive vectors, rays reduced modulo the lineality lattice,
lexicographically sorted), so structural equality is cone equality and
dualizing is literally swapping the two lists.
"""
from __future__ import annotations

from .intlat import (
    IntMatrix,
    Sublattice,
    dot,
    kernel_lattice,
    matrix_rank,
    primitive,
    quotient_lattice_map,
    right_inverse_of_surjection,
    saturate,
    vneg,
    vscale,
    vsub,
)


class BoundExceededError(Exception):
    """Hilbert basis box certificate failed; carries the bound that suffices."""

    def __init__(self, needed):
        super().__init__("enumeration box too small; bound %d suffices" % needed)
        self.needed = needed


def dd_solve(ineqs, ambient):
    """Minimal generators of {x : a.x >= 0 for all a in ineqs}.

    Incremental double description with the combinatorial adjacency test.
    Returns (lineality basis rows, extreme rays); rays are primitive and the
    two lists together generate the solution cone.
    """
    lin = [tuple(1 if i == j else 0 for j in range(ambient)) for i in range(ambient)]
    rays = []
    processed = []
    for raw in ineqs:
        a = primitive(raw)
        if not any(a):
            continue
        lin_pairing = [dot(a, b) for b in lin]
        if any(lin_pairing):
            # the constraint cuts the lineality space: peel one direction off
            i0 = next(i for i, v in enumerate(lin_pairing) if v != 0)
            b0 = lin[i0] if lin_pairing[i0] > 0 else vneg(lin[i0])
            ab0 = abs(lin_pairing[i0])
            new_lin = []
            for i, (b, ab) in enumerate(zip(lin, lin_pairing)):
                if i == i0:
                    continue
                new_lin.append(b if ab == 0 else primitive(vsub(vscale(ab0, b), vscale(ab, b0))))
            new_rays = []
            for r in rays:
                ar = dot(a, r)
                new_rays.append(r if ar == 0 else primitive(vsub(vscale(ab0, r), vscale(ar, b0))))
            new_rays.append(b0)
            lin = new_lin
            rays = list(dict.fromkeys(new_rays))
        else:
            plus = [r for r in rays if dot(a, r) > 0]
            zero = [r for r in rays if dot(a, r) == 0]
            minus = [r for r in rays if dot(a, r) < 0]
            if minus:
                tight = {
                    r: frozenset(j for j, aj in enumerate(processed) if dot(aj, r) == 0)
                    for r in rays
                }
                combos = []
                for p in plus:
                    for m in minus:
                        t = tight[p] & tight[m]
                        if any(r is not p and r is not m and t <= tight[r] for r in rays):
                            continue  # not adjacent
                        w = primitive(vsub(vscale(dot(a, p), m), vscale(dot(a, m), p)))
                        if any(w):
                            combos.append(w)
                rays = list(dict.fromkeys(plus + zero + combos))
        processed.append(a)
    return lin, rays


def _canonical_generators(lin_rows, rays, ambient):
    """Canonical generator tuple: saturated lineality basis as +- pairs plus
    extreme rays reduced modulo the lineality lattice."""
    lat = saturate(Sublattice.from_rows(ambient, lin_rows))
    gens = set()
    if lat.rank:
        q = quotient_lattice_map(lat)
        s = right_inverse_of_surjection(q)
        for b in lat.basis.entries:
            gens.add(tuple(b))
            gens.add(vneg(b))
        for r in rays:
            w = primitive(q.matvec(r))
            if any(w):
                gens.add(s.matvec(w))
    else:
        for r in rays:
            if any(r):
                gens.add(primitive(r))
    return tuple(sorted(gens))


class Cone:
    """Rational polyhedral cone with synchronized generator/facet lists."""

    __slots__ = ("ambient", "generators", "facets", "_faces", "_lin")

    def __init__(self, ambient, generators, facets):
        # internal: inputs must already be canonical (use the classmethods)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "facets", facets)
        object.__setattr__(self, "_faces", None)
        object.__setattr__(self, "_lin", None)

    def __setattr__(self, name, value):
        raise AttributeError("Cone is immutable")

    @classmethod
    def from_generators(cls, vectors, ambient):
        vectors = [tuple(int(x) for x in v) for v in vectors if any(v)]
        dual_lin, dual_rays = dd_solve(vectors, ambient)
        facets = _canonical_generators(dual_lin, dual_rays, ambient)
        prim_lin, prim_rays = dd_solve(facets, ambient)
        generators = _canonical_generators(prim_lin, prim_rays, ambient)
        return cls(ambient, generators, facets)

    @classmethod
    def from_inequalities(cls, ineqs, ambient):
        ineqs = [tuple(int(x) for x in a) for a in ineqs if any(a)]
        prim_lin, prim_rays = dd_solve(ineqs, ambient)
        generators = _canonical_generators(prim_lin, prim_rays, ambient)
        dual_lin, dual_rays = dd_solve(generators, ambient)
        facets = _canonical_generators(dual_lin, dual_rays, ambient)
        return cls(ambient, generators, facets)

    @classmethod
    def zero(cls, ambient):
        return cls.from_generators([], ambient)

    @classmethod
    def full(cls, ambient):
        return cls.from_inequalities([], ambient)

    def __eq__(self, other):
        return (
            isinstance(other, Cone)
            and self.ambient == other.ambient
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.ambient, self.generators))

    def __repr__(self):
        return "Cone(ambient=%d, generators=%r)" % (self.ambient, list(self.generators))

    def dual(self):
        """Swap the two canonical lists; an exact involution."""
        return Cone(self.ambient, self.facets, self.generators)

    def lineality_lattice(self):
        if self._lin is None:
            lat = kernel_lattice(IntMatrix(self.facets, cols=self.ambient))
            object.__setattr__(self, "_lin", lat)
        return self._lin

    @property
    def lineality_rank(self):
        return self.lineality_lattice().rank

    def dim(self):
        return matrix_rank(self.generators, self.ambient)

    def is_pointed(self):
        return self.lineality_rank == 0

    def is_simplicial(self):
        return len(self.generators) == self.dim()

    def contains(self, v):
        """Point membership; accepts integer or Fraction coordinates."""
        return all(dot(f, v) >= 0 for f in self.facets)

    def contains_cone(self, other):
        return all(self.contains(g) for g in other.generators)

    def intersect(self, other):
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        return Cone.from_inequalities(self.facets + other.facets, self.ambient)

    def image(self, pi):
        """Image cone under an integer matrix Z^ambient -> Z^rows."""
        if pi.cols != self.ambient:
            raise ValueError("projection shape mismatch")
        return Cone.from_generators([pi.matvec(g) for g in self.generators], pi.rows)

    def relative_interior_point(self):
        """Sum of the canonical generators; the origin for the zero cone."""
        p = (0,) * self.ambient
        for g in self.generators:
            p = tuple(a + b for a, b in zip(p, g))
        return p

    def faces(self):
        """All faces, self and the minimal (lineality) face included."""
        if self._faces is not None:
            return self._faces
        seen = {self}
        frontier = [self]
        while frontier:
            nxt = []
            for c in frontier:
                for phi in c.facets:
                    cut = Cone.from_inequalities(c.facets + (vneg(phi),), self.ambient)
                    if cut not in seen:
                        seen.add(cut)
                        nxt.append(cut)
            frontier = nxt
        out = tuple(sorted(seen, key=lambda c: (c.dim(), c.generators)))
        object.__setattr__(self, "_faces", out)
        return out

    def is_face_of(self, other):
        """True iff self is a face of other (self = other meets a supporting
        hyperplane through the facets tight on self)."""
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        if not other.contains_cone(self):
            return False
        tight = [
            phi
            for phi in other.facets
            if all(dot(phi, g) == 0 for g in self.generators)
        ]
        extra = tuple(vneg(phi) for phi in tight)
        cut = Cone.from_inequalities(other.facets + extra, self.ambient)
        return cut == self

    def contains_in_relative_interior(self, v):
        """True iff v lies strictly inside every facet not vanishing on the cone."""
        for phi in self.facets:
            val = dot(phi, v)
            if val < 0:
                return False
            if val == 0 and any(dot(phi, g) != 0 for g in self.generators):
                return False
        return True


def hilbert_basis(cone, bound=None):
    """Minimal generating set of the monoid cone ∩ Z^d, for pointed cones.

    Enumerates lattice points in the box [-bound, bound]^d.  A sum of the
    absolute coordinates of the extreme rays certifies the box (every
    irreducible element is a subconvex combination of at most d extreme rays);
    bound=None uses that certificate, a smaller explicit bound raises
    BoundExceededError carrying the certified value.
    """
    if cone.lineality_rank:
        raise ValueError("Hilbert basis requires a pointed cone")
    d = cone.ambient
    if d == 0 or not cone.generators:
        return ()
    need = max(
        sum(abs(g[j]) for g in cone.generators) for j in range(d)
    )
    if bound is None:
        bound = need
    elif need > bound:
        raise BoundExceededError(need)
    weight = cone.dual().relative_interior_point()
    points = []
    stack = [()]
    for _ in range(d):
        stack = [p + (x,) for p in stack for x in range(-bound, bound + 1)]
    for p in stack:
        if any(p) and cone.contains(p):
            points.append(p)
    points.sort(key=lambda p: (dot(weight, p), p))
    basis = []
    for p in points:
        if not any(cone.contains(vsub(p, h)) for h in basis):
            basis.append(p)
    return tuple(sorted(basis))


def monoid_generators(cone, bound=None):
    """Generators of cone ∩ Z^d for arbitrary cones: the saturated lineality
    basis as +- pairs plus a section-lifted Hilbert basis of the pointed part."""
    lat = cone.lineality_lattice()
    if lat.rank == 0:
        return hilbert_basis(cone, bound)
    q = quotient_lattice_map(lat)
    s = right_inverse_of_surjection(q)
    img = cone.image(q)
    lifted = [s.matvec(h) for h in hilbert_basis(img, bound)]
    gens = []
    for b in lat.basis.entries:
        gens.append(tuple(b))
        gens.append(vneg(b))
    gens.extend(lifted)
    return tuple(sorted(gens))
