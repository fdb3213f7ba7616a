"""Fans as toric varieties.

A fan is stored as primitive ray vectors plus maximal cones given by
ray-index sets.  Cones of the fan are addressed by the frozenset of ray
indices they contain, the zero cone by the empty frozenset.  Invariant
open subsets correspond to face-closed cone selections, closed invariant
sets to up-closed ones; both directions of the orbit-cone dictionary
(orbit of tau lies in the closure of the orbit of sigma iff sigma is a
face of tau) are surfaced through key inclusion.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .cones import Cone
from .intlat import IntMatrix, primitive, smith_normal_form, solve_rational

ConeKey = frozenset


class SizeGuardError(ValueError):
    """Enumeration would exceed the configured subset guard."""


@dataclass(frozen=True)
class FanValidation:
    valid: bool
    problems: tuple
    witness: tuple | None


class Fan:
    """Finite fan in Z^rank; empty max-cone list encodes the bare torus."""

    __slots__ = ("rank", "rays", "max_cones", "_cones", "_keys")

    def __init__(self, rank, rays, max_cones):
        rank = int(rank)
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        if any(len(r) != rank for r in rays):
            raise ValueError("ray length differs from lattice rank")
        if any(not any(r) for r in rays):
            raise ValueError("zero vector listed as a ray")
        if any(primitive(r) != r for r in rays):
            raise ValueError("rays must be primitive")
        if len(set(rays)) != len(rays):
            raise ValueError("duplicate rays")
        cones = {frozenset(int(i) for i in c) for c in max_cones}
        cones.discard(frozenset())
        for c in cones:
            if any(i < 0 or i >= len(rays) for i in c):
                raise ValueError("ray index out of range")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", tuple(sorted(cones, key=sorted)))
        object.__setattr__(self, "_cones", {})
        object.__setattr__(self, "_keys", None)

    def __setattr__(self, name, value):
        raise AttributeError("Fan is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, Fan)
            and self.rank == other.rank
            and self.rays == other.rays
            and self.max_cones == other.max_cones
        )

    def __hash__(self):
        return hash((self.rank, self.rays, self.max_cones))

    def __repr__(self):
        return f"Fan(rank={self.rank}, rays={len(self.rays)}, max_cones={len(self.max_cones)})"

    def cone(self, key):
        key = frozenset(key)
        got = self._cones.get(key)
        if got is None:
            got = Cone.from_generators([self.rays[i] for i in sorted(key)], self.rank)
            self._cones[key] = got
        return got

    def cone_keys(self):
        """All cones of the fan as ray-index keys, sorted by (dim, indices)."""
        if self._keys is None:
            found = {frozenset()}
            for top in self.max_cones:
                for face in self.cone(top).faces():
                    found.add(frozenset(i for i in top if face.contains(self.rays[i])))
            keys = tuple(sorted(found, key=lambda k: (self.cone(k).dim(), sorted(k))))
            object.__setattr__(self, "_keys", keys)
        return self._keys

    def has_cone(self, key):
        return frozenset(key) in set(self.cone_keys())

    def faces_of(self, key):
        """Keys of all faces of a fan cone (valid fans: key inclusion)."""
        key = frozenset(key)
        return tuple(k for k in self.cone_keys() if k <= key)

    def selection(self, keys):
        return SubfanSelection(self, keys)

    def full_selection(self):
        return SubfanSelection(self, self.cone_keys())

    def empty_selection(self):
        return SubfanSelection(self, ())


def validate_fan(fan):
    """Check fan invariants; reports violations instead of raising."""
    problems = []
    witness = None
    cones = [fan.cone(k) for k in fan.max_cones]
    for key, c in zip(fan.max_cones, cones):
        if not c.is_pointed():
            problems.append(f"cone {sorted(key)} is not strongly convex")
        for i in key:
            ray = Cone.from_generators([fan.rays[i]], fan.rank)
            if not ray.is_face_of(c):
                problems.append(f"ray {i} is interior to cone {sorted(key)}")
    used = set().union(*fan.max_cones) if fan.max_cones else set()
    for i in range(len(fan.rays)):
        if i not in used:
            problems.append(f"ray {i} occurs in no maximal cone")
    for (ka, a), (kb, b) in combinations(zip(fan.max_cones, cones), 2):
        if a.contains_cone(b) or b.contains_cone(a):
            problems.append(f"maximal cone contains another: {sorted(ka)}, {sorted(kb)}")
            witness = witness or (ka, kb)
            continue
        meet = a.intersect(b)
        if not (meet.is_face_of(a) and meet.is_face_of(b)):
            problems.append(
                f"cones {sorted(ka)} and {sorted(kb)} intersect in a non-face"
            )
            witness = witness or (ka, kb)
    return FanValidation(not problems, tuple(problems), witness)


class SubfanSelection:
    """Face-closed set of fan cones: a torus-invariant open subset."""

    __slots__ = ("fan", "keys")

    def __init__(self, fan, keys):
        keys = frozenset(frozenset(k) for k in keys)
        all_keys = set(fan.cone_keys())
        for k in keys:
            if k not in all_keys:
                raise ValueError(f"{sorted(k)} is not a cone of the fan")
        for k in keys:
            for f in fan.faces_of(k):
                if f not in keys:
                    raise ValueError(
                        f"selection not face-closed: {sorted(k)} without {sorted(f)}"
                    )
        object.__setattr__(self, "fan", fan)
        object.__setattr__(self, "keys", keys)

    def __setattr__(self, name, value):
        raise AttributeError("SubfanSelection is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, SubfanSelection)
            and self.fan == other.fan
            and self.keys == other.keys
        )

    def __hash__(self):
        return hash((self.fan, self.keys))

    def __contains__(self, key):
        return frozenset(key) in self.keys

    def __len__(self):
        return len(self.keys)

    def __le__(self, other):
        return self.keys <= other.keys

    def __repr__(self):
        return f"SubfanSelection({sorted(sorted(k) for k in self.keys)})"

    def sorted_keys(self):
        return sorted(self.keys, key=lambda k: (len(k), sorted(k)))

    def union(self, other):
        return SubfanSelection(self.fan, self.keys | other.keys)

    def intersection(self, other):
        return SubfanSelection(self.fan, self.keys & other.keys)


def is_complete(fan):
    """Support equals the whole space: pure, ridge-paired, ridge-connected."""
    if fan.rank == 0:
        return True
    if not fan.max_cones:
        return False
    tops = list(fan.max_cones)
    if any(fan.cone(t).dim() != fan.rank for t in tops):
        return False
    ridge_owners = {}
    for t in tops:
        for k in fan.faces_of(t):
            if fan.cone(k).dim() == fan.rank - 1:
                ridge_owners.setdefault(k, []).append(t)
    if not ridge_owners or any(len(v) != 2 for v in ridge_owners.values()):
        return False
    seen = {tops[0]}
    frontier = [tops[0]]
    while frontier:
        t = frontier.pop()
        for owners in ridge_owners.values():
            if t in owners:
                for o in owners:
                    if o not in seen:
                        seen.add(o)
                        frontier.append(o)
    return len(seen) == len(tops)


def is_simplicial(fan):
    return all(fan.cone(t).is_simplicial() for t in fan.max_cones)


def is_smooth(fan):
    """Every cone is spanned by part of a lattice basis."""
    for t in fan.max_cones:
        c = fan.cone(t)
        if not c.is_simplicial():
            return False
        rows = IntMatrix(tuple(fan.rays[i] for i in sorted(t)), cols=fan.rank)
        if any(x != 1 for x in smith_normal_form(rows).diag):
            return False
    return True


def enumerate_open_subsets(fan, limit=2 ** 20):
    """All face-closed selections, i.e. order ideals of the cone poset."""
    keys = fan.cone_keys()
    ideals = [frozenset()]
    for k in keys:
        below = frozenset(f for f in fan.cone_keys() if f < k)
        grown = [ideal | {k} for ideal in ideals if below <= ideal]
        ideals = ideals + grown
        if len(ideals) > limit:
            raise SizeGuardError(f"more than {limit} open subsets")
    return [SubfanSelection(fan, ideal) for ideal in ideals]


def orbit_poset(fan):
    """Pairs (sigma, tau): the orbit of tau lies in the orbit closure of sigma."""
    keys = fan.cone_keys()
    return tuple(
        (a, b)
        for a in keys
        for b in keys
        if a <= b
    )


def limit_of_generic_point(fan, v):
    """Key of the cone holding v in its relative interior; None if outside."""
    v = tuple(v)
    for k in fan.cone_keys():
        if fan.cone(k).contains_in_relative_interior(v):
            return k
    return None


class FanAutomorphism:
    """Unimodular lattice map permuting the rays and the cone set."""

    __slots__ = ("fan", "matrix", "ray_perm")

    def __init__(self, fan, matrix):
        if matrix.rows != fan.rank or matrix.cols != fan.rank:
            raise ValueError("matrix shape differs from lattice rank")
        if not matrix.is_unimodular():
            raise ValueError("matrix is not unimodular")
        images = [tuple(matrix.matvec(r)) for r in fan.rays]
        index = {r: i for i, r in enumerate(fan.rays)}
        if any(img not in index for img in images):
            raise ValueError("matrix does not permute the rays")
        perm = tuple(index[img] for img in images)
        if len(set(perm)) != len(perm):
            raise ValueError("matrix does not permute the rays")
        mapped = {frozenset(perm[i] for i in t) for t in fan.max_cones}
        if mapped != set(fan.max_cones):
            raise ValueError("matrix does not preserve the cone set")
        object.__setattr__(self, "fan", fan)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "ray_perm", perm)

    def __setattr__(self, name, value):
        raise AttributeError("FanAutomorphism is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, FanAutomorphism)
            and self.fan == other.fan
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.fan, self.matrix))

    def __repr__(self):
        return f"FanAutomorphism({self.matrix.entries})"

    def apply_key(self, key):
        return frozenset(self.ray_perm[i] for i in key)

    def compose(self, other):
        """self after other."""
        return FanAutomorphism(self.fan, self.matrix @ other.matrix)

    def inverse(self):
        from .intlat import unimodular_inverse

        return FanAutomorphism(self.fan, unimodular_inverse(self.matrix))

    def is_identity(self):
        return self.matrix == IntMatrix.identity(self.fan.rank)


def fan_automorphisms(fan):
    """All lattice automorphisms preserving the fan, found by lifting
    assignments of a spanning ray subset to candidate image rays."""
    d = fan.rank
    n = len(fan.rays)
    if d == 0:
        return (FanAutomorphism(fan, IntMatrix.identity(0)),)
    basis_idx = None
    for cand in combinations(range(n), d):
        rows = IntMatrix(tuple(fan.rays[i] for i in cand), cols=d)
        if rows.rank() == d:
            basis_idx = cand
            break
    if basis_idx is None:
        raise ValueError("rays do not span the ambient space")
    source = IntMatrix.from_columns([fan.rays[i] for i in basis_idx], rows=d)
    source_t = source.transpose()
    found = []
    for targets in permutations(range(n), d):
        target = IntMatrix.from_columns([fan.rays[i] for i in targets], rows=d)
        rows = []
        ok = True
        for i in range(d):
            sol = solve_rational(source_t, target.row(i))
            if sol is None or any(x.denominator != 1 for x in sol):
                ok = False
                break
            rows.append(tuple(int(x) for x in sol))
        if not ok:
            continue
        m = IntMatrix(tuple(rows), cols=d)
        if not m.is_unimodular():
            continue
        try:
            found.append(FanAutomorphism(fan, m))
        except ValueError:
            continue
    found.sort(key=lambda a: a.matrix.entries)
    return tuple(found)
