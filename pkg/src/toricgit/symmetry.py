"""W-sets under fan symmetries and the associated conclusion checkers.

The acting group is generated by a subtorus of the big torus together
with a finite group of fan automorphisms normalizing it.  The W-set of
an open selection is the intersection of its symmetry translates.  The
checkers report, honestly and with caveats where the finite part makes
the group disconnected: existence of a good quotient of the W-set,
torus-saturation inside the input, the induced finite action on the
quotient fan, a sweep over all torus-maximal subsets of a complete
simplicial fan, and the fan-level identity relating W-sets before and
after removing a closed invariant piece.
"""

from dataclasses import dataclass

from .fans import (
    FanAutomorphism,
    SubfanSelection,
    is_complete,
    is_simplicial,
)
from .intlat import IntMatrix, right_inverse_of_surjection
from .quotients import (
    Obstruction,
    QuotientFan,
    enumerate_good_subsets,
    good_quotient,
    is_saturated,
    max_saturated_inside,
    t_maximal_subsets,
)


def _sorted_keys(keys):
    return tuple(sorted((tuple(sorted(k)) for k in keys)))


class SymmetryGroup:
    """Finite group of fan automorphisms; group axioms are validated."""

    __slots__ = ("fan", "elements")

    def __init__(self, fan, elements):
        elements = tuple(elements)
        for e in elements:
            if e.fan != fan:
                raise ValueError("element acts on a different fan")
        by_matrix = {e.matrix: e for e in elements}
        if len(by_matrix) != len(elements):
            raise ValueError("duplicate group elements")
        if IntMatrix.identity(fan.rank) not in by_matrix:
            raise ValueError("identity element missing")
        for a in elements:
            if a.inverse().matrix not in by_matrix:
                raise ValueError("group not closed under inverse")
            for b in elements:
                if a.compose(b).matrix not in by_matrix:
                    raise ValueError("group not closed under composition")
        object.__setattr__(self, "fan", fan)
        object.__setattr__(
            self, "elements", tuple(sorted(elements, key=lambda e: e.matrix.entries))
        )

    def __setattr__(self, name, value):
        raise AttributeError("SymmetryGroup is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, SymmetryGroup)
            and self.fan == other.fan
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash((self.fan, self.elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def is_trivial(self):
        return len(self.elements) == 1

    @classmethod
    def trivial(cls, fan):
        return cls(fan, [FanAutomorphism(fan, IntMatrix.identity(fan.rank))])


def generate_symmetry_group(fan, matrices, limit=4096):
    """Close a list of fan-preserving matrices into a SymmetryGroup."""
    elements = {IntMatrix.identity(fan.rank): FanAutomorphism(
        fan, IntMatrix.identity(fan.rank)
    )}
    frontier = []
    for m in matrices:
        auto = FanAutomorphism(fan, IntMatrix(tuple(tuple(r) for r in m), cols=fan.rank))
        if auto.matrix not in elements:
            elements[auto.matrix] = auto
            frontier.append(auto)
    while frontier:
        fresh = []
        for a in list(elements.values()):
            for b in frontier:
                for c in (a.compose(b), b.compose(a), b.inverse()):
                    if c.matrix not in elements:
                        elements[c.matrix] = c
                        fresh.append(c)
                        if len(elements) > limit:
                            raise ValueError("symmetry group exceeds the size limit")
        frontier = fresh
    return SymmetryGroup(fan, elements.values())


@dataclass(frozen=True)
class GroupActionData:
    """Subtorus action plus a compatible finite symmetry group."""

    act: object
    sym: SymmetryGroup

    def __post_init__(self):
        if self.act.fan != self.sym.fan:
            raise ValueError("subtorus action and symmetries live on different fans")
        for gamma in self.sym:
            for b in self.act.cochar.basis.entries:
                if not self.act.cochar.contains(gamma.matrix.matvec(b)):
                    raise ValueError(
                        "symmetry does not preserve the subtorus cocharacters"
                    )


def translate(gamma, selection):
    """Image of an open selection under a fan symmetry."""
    if gamma.fan != selection.fan:
        raise ValueError("symmetry acts on a different fan")
    return SubfanSelection(
        selection.fan, [gamma.apply_key(k) for k in selection.keys]
    )


def w_set(selection, data):
    """Intersection of all symmetry translates of the selection."""
    if selection.fan != data.sym.fan:
        raise ValueError("selection lives on a different fan")
    keys = set(selection.keys)
    for gamma in data.sym:
        keys &= {gamma.apply_key(k) for k in selection.keys}
    return SubfanSelection(selection.fan, keys)


def _invariant(data, keys):
    return all(
        {gamma.apply_key(k) for k in keys} == set(keys) for gamma in data.sym
    )


def induced_symmetry(q, gamma):
    """Automorphism of the quotient fan induced by a symmetry permuting
    the source selection and preserving the subtorus."""
    section = right_inverse_of_surjection(q.proj_full)
    return FanAutomorphism(q.fan, (q.proj_full @ gamma.matrix) @ section)


def composite_fiber_classes(q, data):
    """Fiber class of each source cone under the composite quotient: the
    symmetry orbit of its subtorus orbit-image."""
    induced = [induced_symmetry(q, gamma) for gamma in data.sym]
    return {
        t: frozenset(g.apply_key(q.orbit_map[t]) for g in induced)
        for t in q.source.keys
    }


def _composite_saturation(q, data, subset):
    classes = composite_fiber_classes(q, data)
    hit = {classes[t] for t in subset}
    return {t for t in q.source.keys if classes[t] in hit}


def _orbit_partition(keys, automorphisms):
    seen = set()
    orbits = []
    for k in sorted(keys, key=lambda k: (len(k), sorted(k))):
        if k in seen:
            continue
        orbit = {g.apply_key(k) for g in automorphisms}
        seen |= orbit
        orbits.append(_sorted_keys(orbit))
    return tuple(sorted(orbits))


_DISCONNECTED_CAVEAT = (
    "the finite symmetry part makes the acting group disconnected, so the "
    "theorem's connectedness hypothesis is not met; verdicts are checks, "
    "not guaranteed conclusions"
)


@dataclass(frozen=True)
class TheoremReport:
    refused: bool
    diagnosis: str
    w_keys: tuple | None
    open_in_source: bool
    quotient_exists: bool
    quotient_detail: str
    saturated_in_input: bool | None
    orbit_classes: tuple | None
    caveat: str

    def conclusions_hold(self):
        return (
            not self.refused and self.quotient_exists and bool(self.saturated_in_input)
        )


def verify_theorem_conclusions(selection, data, limit=2 ** 20):
    """Check the quotient and saturation conclusions on W = w_set(selection).

    The input must be torus-maximal for the subtorus action; anything
    else is refused with a diagnosis.  The report also carries the
    induced finite action on the quotient fan as an orbit partition,
    modelling the composite quotient, and a caveat when the symmetry
    part is nontrivial.
    """
    fan = selection.fan
    act = data.act
    if fan != act.fan:
        raise ValueError("selection lives on a different fan")
    maximal = {u.keys for u in t_maximal_subsets(fan, act, k=2, limit=limit)}
    if selection.keys not in maximal:
        q = good_quotient(selection, act)
        if isinstance(q, Obstruction):
            diagnosis = f"selection admits no good quotient: {q.detail}"
        else:
            larger = next(
                v
                for v in enumerate_good_subsets(fan, act, limit)
                if selection.keys < v.keys and is_saturated(selection, v, act)
            )
            diagnosis = (
                "selection is properly saturated inside the larger good subset "
                f"{sorted(sorted(k) for k in larger.keys)}"
            )
        return TheoremReport(
            refused=True,
            diagnosis=diagnosis,
            w_keys=None,
            open_in_source=False,
            quotient_exists=False,
            quotient_detail="",
            saturated_in_input=None,
            orbit_classes=None,
            caveat="" if data.sym.is_trivial() else _DISCONNECTED_CAVEAT,
        )
    w = w_set(selection, data)
    q = good_quotient(w, act)
    exists = isinstance(q, QuotientFan)
    detail = "good quotient exists" if exists else f"obstructed: {q.detail}"
    saturated = is_saturated(w, selection, act)
    orbit_classes = None
    if exists:
        induced = [induced_symmetry(q, gamma) for gamma in data.sym]
        orbit_classes = _orbit_partition(q.fan.cone_keys(), induced)
    return TheoremReport(
        refused=False,
        diagnosis="",
        w_keys=_sorted_keys(w.keys),
        open_in_source=True,
        quotient_exists=exists,
        quotient_detail=detail,
        saturated_in_input=saturated,
        orbit_classes=orbit_classes,
        caveat="" if data.sym.is_trivial() else _DISCONNECTED_CAVEAT,
    )


@dataclass(frozen=True)
class CorollaryReport:
    maximal_reports: tuple  # (sorted U keys, TheoremReport) pairs
    invariant_reports: tuple  # (sorted V keys, sorted U keys or None, saturated)
    all_pass: bool


def verify_corollary(fan, data, limit=2 ** 20):
    """Sweep of both corollary statements over a complete simplicial fan.

    (i) every torus-maximal subset gets the theorem verdicts on its
    W-set; (ii) every symmetry-invariant good subset must sit inside
    some W-set and be saturated there for the composite fibers, i.e. for
    symmetry orbits of subtorus fibers.
    """
    act = data.act
    if fan != act.fan or fan != data.sym.fan:
        raise ValueError("group data lives on a different fan")
    if not is_complete(fan):
        raise ValueError("fan is not complete")
    if not is_simplicial(fan):
        raise ValueError("fan is not simplicial")
    maximal = t_maximal_subsets(fan, act, k=2, limit=limit)
    maximal_reports = tuple(
        (_sorted_keys(u.keys), verify_theorem_conclusions(u, data, limit=limit))
        for u in maximal
    )
    invariant_reports = []
    for v in enumerate_good_subsets(fan, act, limit):
        if not _invariant(data, v.keys):
            continue
        hosts = [u for u in maximal if v.keys <= w_set(u, data).keys]
        if not hosts:
            invariant_reports.append((_sorted_keys(v.keys), None, False))
            continue
        host = hosts[0]
        w = w_set(host, data)
        q = good_quotient(w, act)
        saturated = isinstance(q, QuotientFan) and (
            _composite_saturation(q, data, v.keys) == set(v.keys)
        )
        invariant_reports.append(
            (_sorted_keys(v.keys), _sorted_keys(host.keys), saturated)
        )
    all_pass = all(r.conclusions_hold() for _, r in maximal_reports) and all(
        found is not None and saturated
        for _, found, saturated in invariant_reports
    )
    return CorollaryReport(
        maximal_reports=maximal_reports,
        invariant_reports=tuple(invariant_reports),
        all_pass=all_pass,
    )


@dataclass(frozen=True)
class Eq1Report:
    hypothesis_ok: bool
    diagnosis: str
    u_keys: tuple | None
    left: tuple | None
    right: tuple | None
    equal: bool | None
    witness: tuple | None

    def holds(self):
        return bool(self.hypothesis_ok and self.equal)


def eq1_crosscheck(xprime, x, data):
    """Fan-level identity: the W-set of the largest saturated subset
    inside x equals the W-set of xprime minus the composite-fiber
    saturation of the W-set of the removed closed piece."""
    act = data.act
    if xprime.fan != act.fan:
        raise ValueError("selection lives on a different fan")
    if not x.keys <= xprime.keys:
        return Eq1Report(
            False, "inner selection is not contained in the outer one",
            None, None, None, None, None,
        )
    q = good_quotient(xprime, act)
    if isinstance(q, Obstruction):
        return Eq1Report(
            False, f"outer selection admits no good quotient: {q.detail}",
            None, None, None, None, None,
        )
    if not _invariant(data, xprime.keys) or not _invariant(data, x.keys):
        return Eq1Report(
            False, "selections are not symmetry-invariant",
            None, None, None, None, None,
        )
    u = max_saturated_inside(xprime, x, act)
    left = set(w_set(u, data).keys)
    w_outer = set(w_set(xprime, data).keys)
    removed = set(xprime.keys) - set(x.keys)
    w_removed = set(removed)
    for gamma in data.sym:
        w_removed &= {gamma.apply_key(k) for k in removed}
    right = w_outer - _composite_saturation(q, data, w_removed)
    difference = left ^ right
    witness = None
    if difference:
        witness = tuple(sorted(min(difference, key=lambda k: (len(k), sorted(k)))))
    return Eq1Report(
        hypothesis_ok=True,
        diagnosis="",
        u_keys=_sorted_keys(u.keys),
        left=_sorted_keys(left),
        right=_sorted_keys(right),
        equal=not difference,
        witness=witness,
    )
