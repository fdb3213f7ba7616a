"""Quasitorus presentation of a toric variety from its fan.

The variety is exhibited as a good quotient of an open invariant subset
of affine n-space (n = number of rays) by the quasitorus dual to the
divisor class group.  The grading of the coordinate ring by that group
is the cokernel of the ray-pairing map; the open subset upstairs is the
union of coordinate charts indexed by the cones of the fan.  Monomials
are the canonical sections of effective invariant divisors; polynomial
sections are supported for witness checking but verified only by seeded
point sampling, since their zero sets are not unions of orbits.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import chain, combinations

from .cones import Cone
from .fans import Fan, SubfanSelection, limit_of_generic_point
from .intlat import (
    IntMatrix,
    Sublattice,
    cokernel_diagnostics,
    dot,
    kernel_lattice,
    matrix_rank,
    quotient_lattice_map,
    right_inverse_of_surjection,
    saturate,
    smith_normal_form,
)
from .quotients import Obstruction, SubtorusAction, good_quotient


def _subsets(key):
    items = sorted(key)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


@dataclass(frozen=True)
class CoxPresentation:
    fan: Fan
    orthant_fan: Fan
    ray_matrix: IntMatrix  # rows are the rays: the pairing map M -> Z^n
    ray_map: IntMatrix  # columns are the rays: Z^n -> N
    free_rows: IntMatrix  # free part of the grading, canonical form
    torsion_rows: tuple  # (modulus, row) pairs for the torsion part
    class_rank: int
    torsion_factors: tuple
    relevant: SubfanSelection
    h_cochar: Sublattice  # cocharacters of the quasitorus torus part

    def degree(self, exponents):
        """Divisor class of a monomial: free part plus torsion residues."""
        exponents = tuple(exponents)
        free = tuple(self.free_rows.matvec(exponents))
        torsion = tuple(dot(row, exponents) % mod for mod, row in self.torsion_rows)
        return (free, torsion)

    def weights(self):
        """Free-part degree of each coordinate, one column per ray."""
        return tuple(
            tuple(self.free_rows.column(i)) for i in range(len(self.fan.rays))
        )


@dataclass(frozen=True)
class MonomialSection:
    exponents: tuple
    degree: tuple

    def support(self):
        return frozenset(i for i, a in enumerate(self.exponents) if a)

    def evaluate(self, point):
        value = Fraction(1)
        for a, x in zip(self.exponents, point):
            if a:
                value *= Fraction(x) ** a
        return value


@dataclass(frozen=True)
class PolynomialSection:
    terms: tuple  # (coefficient, exponent tuple) pairs
    declared_weight: tuple | None = None

    def evaluate(self, point):
        total = Fraction(0)
        for coeff, exponents in self.terms:
            value = Fraction(coeff)
            for a, x in zip(exponents, point):
                if a:
                    value *= Fraction(x) ** a
            total += value
        return total


def cox_presentation(fan):
    """Grading, relevant open subset, and quasitorus data of a fan."""
    n, d = len(fan.rays), fan.rank
    if matrix_rank(fan.rays, d) != d:
        raise ValueError("rays do not span the ambient space")
    ray_matrix = IntMatrix(fan.rays, cols=d)
    ray_map = ray_matrix.transpose()
    image = Sublattice.from_rows(n, [ray_matrix.column(j) for j in range(d)])
    free_rows = quotient_lattice_map(saturate(image))
    snf = smith_normal_form(ray_matrix)
    torsion_rows = tuple(
        (snf.diag[i], snf.left.row(i)) for i in range(len(snf.diag)) if snf.diag[i] > 1
    )
    class_rank, torsion_factors = cokernel_diagnostics(ray_matrix)
    orthant = Fan(
        n,
        [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)],
        [frozenset(range(n))] if n else [],
    )
    relevant_keys = {
        frozenset(s) for top in fan.max_cones for s in _subsets(top)
    } | {frozenset()}
    return CoxPresentation(
        fan=fan,
        orthant_fan=orthant,
        ray_matrix=ray_matrix,
        ray_map=ray_map,
        free_rows=free_rows,
        torsion_rows=torsion_rows,
        class_rank=class_rank,
        torsion_factors=torsion_factors,
        relevant=SubfanSelection(orthant, relevant_keys),
        h_cochar=kernel_lattice(ray_map),
    )


def quasitorus_action(pres):
    """Torus part of the quasitorus acting on affine n-space."""
    return SubtorusAction(
        pres.orthant_fan, pres.h_cochar, quotient_lattice_map(pres.h_cochar)
    )


def lift_open(pres, selection):
    """Preimage upstairs of an open selection: all coordinate faces lying
    inside the coordinate cone of some selected cone."""
    if selection.fan != pres.fan:
        raise ValueError("selection does not live on the presentation's fan")
    keys = set()
    for key in selection.keys:
        keys.update(frozenset(s) for s in _subsets(key))
    return SubfanSelection(pres.orthant_fan, keys)


def canonical_section(pres, exponents):
    exponents = tuple(int(a) for a in exponents)
    if len(exponents) != len(pres.fan.rays):
        raise ValueError("one exponent per ray required")
    if any(a < 0 for a in exponents):
        raise ValueError("exponents must be nonnegative")
    return MonomialSection(exponents, pres.degree(exponents))


def upstairs_zero_set(pres, section, within=None):
    """Coordinate faces of the open set upstairs on which the monomial
    vanishes identically."""
    within = pres.relevant if within is None else within
    supp = section.support()
    return frozenset(key for key in within.keys if key & supp)


def image_zero_set(pres, section):
    """Downstairs cones in the support of the divisor: the union of orbit
    closures of the supported rays."""
    supp = section.support()
    return frozenset(key for key in pres.fan.cone_keys() if key & supp)


def zero_set_identity_holds(pres, section):
    """The monomial's zero set upstairs equals the preimage of the
    divisor support.  The minimal downstairs cone over a coordinate face
    is located by a relative-interior point."""
    supp = section.support()
    down = image_zero_set(pres, section)
    for key in pres.relevant.keys:
        v = tuple(
            sum(pres.fan.rays[i][j] for i in key) for j in range(pres.fan.rank)
        )
        sigma = limit_of_generic_point(pres.fan, v)
        if bool(key & supp) != (sigma in down):
            return False
    return True


def isotropy_at(pres, key):
    """Quasitorus isotropy of the distinguished point of a coordinate
    face: (free rank, torsion factors); finite iff the free rank is 0."""
    key = frozenset(key)
    if key not in pres.relevant.keys:
        raise ValueError("coordinate face is not in the relevant selection")
    n, d = len(pres.fan.rays), pres.fan.rank
    columns = [pres.ray_matrix.column(j) for j in range(d)]
    columns += [
        tuple(1 if j == i else 0 for j in range(n)) for i in range(n) if i not in key
    ]
    return cokernel_diagnostics(IntMatrix.from_columns(columns, rows=n))


@dataclass(frozen=True)
class RoundTrip:
    ok: bool
    geometric: bool
    detail: str


def round_trip(pres, selection):
    """Quotient of the lift by the quasitorus torus part, compared with
    the selection itself under the canonical identification."""
    lifted = lift_open(pres, selection)
    q = good_quotient(lifted, quasitorus_action(pres))
    if isinstance(q, Obstruction):
        return RoundTrip(False, False, f"lift has no good quotient: {q.detail}")
    if not selection.keys:
        return RoundTrip(True, q.geometric, "empty selection")
    if kernel_lattice(q.proj_full).basis != pres.h_cochar.basis:
        return RoundTrip(
            False, q.geometric, "projection kernel differs from the quasitorus part"
        )
    phi = pres.ray_map @ right_inverse_of_surjection(q.proj_full)
    if not phi.is_unimodular():
        return RoundTrip(
            False,
            q.geometric,
            "no unimodular identification: the rays span a proper sublattice",
        )
    ray_index = {r: i for i, r in enumerate(pres.fan.rays)}
    recovered = set()
    for top, chart in q.chart_map.items():
        gens = [tuple(phi.matvec(q.fan.rays[i])) for i in sorted(top)]
        if any(g not in ray_index for g in gens):
            return RoundTrip(False, q.geometric, "recovered ray is not a fan ray")
        key = frozenset(ray_index[g] for g in gens)
        if frozenset(chart) != key:
            return RoundTrip(
                False,
                q.geometric,
                f"chart of {sorted(key)} is not its own coordinate face",
            )
        recovered.add(key)
    maximal = {
        k
        for k in selection.keys
        if not any(k < other for other in selection.keys)
    }
    if recovered != maximal:
        return RoundTrip(False, q.geometric, "maximal cones are not recovered")
    return RoundTrip(True, q.geometric, "selection recovered")


@dataclass(frozen=True)
class SectionVerdict:
    section: object
    homogeneous: bool
    affine: bool | None  # None: not combinatorially decidable (polynomial)
    contained: bool
    detail: str


@dataclass(frozen=True)
class WitnessReport:
    members: tuple
    coverage: bool
    coverage_witness: tuple | None
    sampled: bool
    witness_family: bool


def _lift_section(pres):
    return right_inverse_of_surjection(pres.ray_map)


def _orbit_point(key, n, rng):
    return tuple(
        Fraction(0)
        if i in key
        else Fraction(rng.choice([x for x in range(-5, 6) if x]), rng.randint(1, 4))
        for i in range(n)
    )


def verify_globally_defined(
    pres, lifted, family, subtorus_generators=(), seed=20260817, samples=100
):
    """Witness-family report: per section, homogeneity for the subtorus,
    affineness of its nonvanishing locus, and containment in the open
    set; plus coverage of point pairs by common members.  Monomial
    families are decided combinatorially; any polynomial member switches
    coverage and containment to seeded rational sampling."""
    if lifted.fan != pres.orthant_fan:
        raise ValueError("the open set must be a selection on the coordinate fan")
    n = len(pres.fan.rays)
    lat = saturate(Sublattice.from_rows(pres.fan.rank, subtorus_generators))
    section_of_quotient = _lift_section(pres)
    lifts = [section_of_quotient.matvec(b) for b in lat.basis.entries]

    def weight(exponents):
        return tuple(dot(exponents, v) for v in lifts)

    rng = random.Random(seed)
    members = []
    all_monomial = True
    for section in family:
        if isinstance(section, MonomialSection):
            supp = section.support()
            nonzero = frozenset(k for k in lifted.keys if not k & supp)
            hull = frozenset(chain.from_iterable(nonzero)) if nonzero else frozenset()
            affine = bool(nonzero) and hull in nonzero
            contained = all(
                k in lifted.keys for k in pres.relevant.keys if not k & supp
            )
            members.append(
                SectionVerdict(
                    section,
                    homogeneous=True,
                    affine=affine,
                    contained=contained,
                    detail="combinatorial",
                )
            )
        elif isinstance(section, PolynomialSection):
            all_monomial = False
            weights = {weight(e) for _, e in section.terms}
            homogeneous = len(weights) <= 1 and (
                section.declared_weight is None
                or set(weights) <= {tuple(section.declared_weight)}
            )
            contained = True
            for key in sorted(pres.relevant.keys - lifted.keys, key=sorted):
                points = [_orbit_point(key, n, rng) for _ in range(3)]
                points.append(
                    tuple(Fraction(0 if i in key else 1) for i in range(n))
                )
                if any(section.evaluate(p) != 0 for p in points):
                    contained = False
                    break
            members.append(
                SectionVerdict(
                    section,
                    homogeneous=homogeneous,
                    affine=None,
                    contained=contained,
                    detail="not combinatorially decidable; sampled",
                )
            )
        else:
            raise ValueError("family members must be sections")

    coverage_witness = None
    if all_monomial:
        keys = sorted(lifted.keys, key=sorted)
        coverage = True
        for a in keys:
            for b in keys:
                if not any(
                    not (a & m.section.support()) and not (b & m.section.support())
                    for m in members
                ):
                    coverage = False
                    coverage_witness = (a, b)
                    break
            if not coverage:
                break
    else:
        coverage = True
        keys = sorted(lifted.keys, key=sorted)
        if keys:
            for _ in range(samples):
                ka, kb = rng.choice(keys), rng.choice(keys)
                pa, pb = _orbit_point(ka, n, rng), _orbit_point(kb, n, rng)
                if not any(
                    _value(m.section, pa) != 0 and _value(m.section, pb) != 0
                    for m in members
                ):
                    coverage = False
                    coverage_witness = (ka, kb)
                    break
    witness = (
        coverage
        and all(m.homogeneous for m in members)
        and all(m.affine is not False for m in members)
        and all(m.contained for m in members)
    )
    return WitnessReport(
        members=tuple(members),
        coverage=coverage,
        coverage_witness=coverage_witness,
        sampled=not all_monomial,
        witness_family=witness,
    )


def _value(section, point):
    return section.evaluate(point)
