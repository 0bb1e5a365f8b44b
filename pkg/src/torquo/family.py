"""Covering quasi-unsplit families on toric varieties and their quotients.

A family is encoded by its numerical class, a relation
``m_1 x_1 + ... + m_h x_h = 0`` among ray generators with every ``m_i``
strictly positive. Such a family has a flat geometric quotient exactly
when, for every cone ``tau`` avoiding the support, each
``tau + <x_1, ..., x_i omitted, ..., x_h>`` is again a cone of the fan.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import lattice
from .classes import (
    ClassNotInCone,
    CurveClass,
    ExtremalityCertificate,
    _check_relation,
    is_geometric_extremal,
    is_interior,
    mori_cone,
    pairing,
)
from .errors import (
    ConditionBFailed,
    InductionMismatch,
    InternalConsistencyError,
    NotACircuit,
    NotPositive,
    QuotientNotValid,
    TorquoError,
)
from .fan import Fan, divisor_fan, validate

@dataclass(frozen=True)
class FamilyRelation:
    support: tuple[int, ...]
    coeffs: tuple[int, ...]

    @property
    def h(self) -> int:
        return len(self.support)

    def curve_class(self, n_rays: int) -> CurveClass:
        full = [0] * n_rays
        for i, m in zip(self.support, self.coeffs):
            full[i] = m
        return CurveClass(full)

    def to_json(self) -> dict:
        return {"support": list(self.support), "coeffs": [str(m) for m in self.coeffs]}


def _as_class(gamma) -> CurveClass:
    return gamma if isinstance(gamma, CurveClass) else CurveClass(tuple(gamma))


def make_family(fan: Fan, gamma) -> FamilyRelation:
    gamma = _as_class(gamma)
    _check_relation(fan, gamma)
    if gamma.is_zero():
        raise ValueError("the zero class does not define a family")
    prim = gamma.primitive()
    negative = [i for i, c in enumerate(prim) if c < 0]
    if negative:
        raise NotPositive(
            f"relation has negative coefficients at rays {negative}; "
            "it cannot be the class of a covering quasi-unsplit family",
            negative,
        )
    support = tuple(i for i, c in enumerate(prim) if c)
    vecs = [fan.rays[i] for i in support]
    h = len(support)
    if lattice.rank(vecs) != h - 1 or any(
        lattice.rank(list(sub)) != h - 1 for sub in itertools.combinations(vecs, h - 1)
    ):
        raise NotACircuit(f"support {list(support)} is not a circuit")
    return FamilyRelation(support, tuple(prim[i] for i in support))


def zero_divisors(fan: Fan, V: FamilyRelation) -> list[int]:
    """Rays whose invariant divisor has intersection zero with the family."""
    out = [i for i in range(fan.n_rays) if i not in V.support]
    if fan.rho > 1 and not out:
        raise InternalConsistencyError("Picard number > 1 but every divisor meets the family")
    return out


@dataclass(frozen=True)
class ConditionBViolation:
    tau: tuple[int, ...]
    missing_index: int  # position in the family support
    attempted_cone: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "tau": list(self.tau),
            "missing_index": self.missing_index,
            "attempted_cone": list(self.attempted_cone),
        }


def _scan(fan: Fan, V: FamilyRelation, taus) -> ConditionBViolation | None:
    supp = set(V.support)
    for tau in taus:
        for i, x in enumerate(V.support):
            attempt = tuple(sorted(set(tau) | (supp - {x})))
            if not fan.has_cone(attempt):
                return ConditionBViolation(tuple(tau), i, attempt)
    return None


def check_condition_b(fan: Fan, V: FamilyRelation) -> ConditionBViolation | None:
    """First violation in (dimension, lexicographic) cone order, or None.

    The scan runs over every cone avoiding the support, the zero cone
    included, and is cross-checked against the scan over maximal such cones.
    """
    supp = set(V.support)
    taus = [c for c in fan.sorted_cones() if not supp & set(c)]
    full = _scan(fan, V, taus)
    tau_sets = [set(t) for t in taus]
    maximal = [t for t, s in zip(taus, tau_sets) if not any(s < o for o in tau_sets)]
    if (full is None) != (_scan(fan, V, maximal) is None):
        raise InternalConsistencyError("condition (b) differs between all and maximal cones")
    return full


@dataclass(frozen=True)
class FlatnessEntry:
    cone: int  # index into the source fan's max_cones
    image: int  # index into the quotient fan's max_cones
    omitted: int  # support ray missing from the cone


@dataclass(frozen=True)
class ContractionResult:
    quotient_fan: Fan
    projection: lattice.LatticeProjection
    ray_map: dict  # source ray (off the support) -> quotient ray
    cone_map: dict  # source max cone index -> quotient max cone index
    fiber_dim: int
    rho_drop: int
    flatness: tuple[FlatnessEntry, ...] = field(repr=False)

    def preimage_counts(self) -> list[int]:
        counts = [0] * len(self.quotient_fan.max_cones)
        for v in self.cone_map.values():
            counts[v] += 1
        return counts

    def to_json(self) -> dict:
        return {
            "quotient_fan": self.quotient_fan.to_dict(),
            "projection": [list(r) for r in self.projection.matrix],
            "ray_map": {str(k): v for k, v in sorted(self.ray_map.items())},
            "cone_map": {str(k): v for k, v in sorted(self.cone_map.items())},
            "fiber_dim": self.fiber_dim,
            "rho_drop": self.rho_drop,
        }


def build_quotient(fan: Fan, V: FamilyRelation) -> ContractionResult:
    """The toric morphism contracting exactly the curves of class ``[V]``."""
    violation = check_condition_b(fan, V)
    if violation is not None:
        raise ConditionBFailed(f"condition (b) fails at {violation}", violation)
    supp = set(V.support)
    n = fan.rank
    proj = lattice.quotient_projection(n, [fan.rays[i] for i in V.support])

    def dump(msg):
        return QuotientNotValid(f"{msg}; fan={fan.to_dict()}, family={V.to_json()}")

    rays: list[tuple[int, ...]] = []
    ray_map = {}
    for i in range(fan.n_rays):
        if i in supp:
            continue
        img = proj(fan.rays[i])
        if not any(img):
            raise dump(f"ray {i} lies in the span of the family support")
        img = lattice.primitivize(img)
        if img not in rays:
            rays.append(img)
        ray_map[i] = rays.index(img)

    images = []
    entries = []
    for k, c in enumerate(fan.max_cones):
        omitted = supp - set(c)
        if len(omitted) != 1:
            raise dump(f"maximal cone {list(c)} omits {len(omitted)} support rays")
        image = tuple(sorted({ray_map[i] for i in c if i not in supp}))
        if len(image) != proj.target_rank:
            raise dump(f"maximal cone {list(c)} does not map onto a full-dimensional cone")
        images.append(image)
        entries.append((k, image, omitted.pop()))
    qfan = Fan(proj.target_rank, rays, sorted(set(images)))
    report = validate(qfan)
    if not report.ok:
        raise dump(f"quotient fan is invalid: {report.witness}")
    pos = {c: j for j, c in enumerate(qfan.max_cones)}
    cone_map = {k: pos[image] for k, image, _ in entries}
    flat = tuple(FlatnessEntry(k, pos[image], om) for k, image, om in entries)

    for c in fan.cones:
        img = frozenset(ray_map[i] for i in c if i not in supp)
        if not qfan.has_cone(img):
            raise dump(f"cone {sorted(c)} does not map onto a cone of the quotient")
    fiber_dim = lattice.rank([fan.rays[i] for i in V.support])
    result = ContractionResult(qfan, proj, ray_map, cone_map, fiber_dim, fan.rho - qfan.rho, flat)
    if result.rho_drop != 1:
        raise dump(f"Picard number drops by {result.rho_drop}, expected 1")
    if fiber_dim != V.h - 1 or any(
        len(fan.max_cones[e.cone]) != proj.target_rank + fiber_dim for e in flat
    ):
        raise dump("fibers are not equidimensional of dimension h - 1")
    if min(result.preimage_counts()) < 1:
        raise dump("a quotient cone has no preimage")
    return result


# inductive verification -------------------------------------------------------


@dataclass
class InductionBranch:
    y: int  # ray of the parent fan whose divisor we restrict to
    child: "InductionNode | None"
    lam: Fraction | None = None  # child coeffs = lam * (m_i * index of x_i image)
    reason: str | None = None  # why no child exists


@dataclass
class InductionNode:
    fan: Fan
    family: FamilyRelation
    rho: int
    condition_b: bool
    branches: list[InductionBranch] = field(default_factory=list)
    terminal: bool = False

    def walk(self):
        yield self
        for b in self.branches:
            if b.child is not None:
                yield from b.child.walk()

    def to_json(self) -> dict:
        return {
            "fan": self.fan.to_dict(),
            "family": self.family.to_json(),
            "rho": self.rho,
            "condition_b": self.condition_b,
            "terminal": self.terminal,
            "branches": [
                {
                    "y": b.y,
                    "lambda": None if b.lam is None else str(b.lam),
                    "reason": b.reason,
                    "child": None if b.child is None else b.child.to_json(),
                }
                for b in self.branches
            ],
        }


InductionTrace = InductionNode


def restrict_family(fan: Fan, V: FamilyRelation, y: int):
    """Restrict the family to the divisor of ``y``.

    Returns ``(divisor_fan, child_family, lam)``; raises ``ValueError``
    with a reason when some support ray is not adjacent to ``y``.
    """
    dfan, proj, corr = divisor_fan(fan, y)
    where = {old: new for new, old in enumerate(corr)}
    missing = [x for x in V.support if x not in where]
    if missing:
        raise ValueError(f"support rays {missing} are not adjacent to ray {y}")
    coeffs = [0] * dfan.n_rays
    raw = []
    for x, m in zip(V.support, V.coeffs):
        img = proj(fan.rays[x])
        prim = dfan.rays[where[x]]
        j = next(t for t, v in enumerate(prim) if v)
        mult = Fraction(img[j], prim[j])  # image = mult * primitive generator
        coeffs[where[x]] = m * mult
        raw.append(m * mult)
    child = make_family(dfan, CurveClass(coeffs))
    first = dict(zip(child.support, child.coeffs))[where[V.support[0]]]
    lam = Fraction(first) / raw[0]
    return dfan, child, lam


def verify_inductively(fan: Fan, V: FamilyRelation) -> InductionNode:
    """Rebuild condition (b) from the divisors meeting the family trivially.

    At each node the family is restricted to every zero divisor. Condition
    (b) at the node must hold exactly when every restriction exists and
    satisfies condition (b) itself; any disagreement raises
    ``InductionMismatch``.
    """
    holds = check_condition_b(fan, V) is None
    node = InductionNode(fan, V, fan.rho, holds)
    if fan.rho <= 1:
        node.terminal = True
        if not holds:
            raise InductionMismatch(f"condition (b) fails on a Picard number one fan {fan.to_dict()}")
        return node
    for y in zero_divisors(fan, V):
        if pairing_with_prime(fan, V, y) != 0:
            raise InductionMismatch(f"divisor of ray {y} meets the family")
        try:
            dfan, child, lam = restrict_family(fan, V, y)
        except (ValueError, NotACircuit, NotPositive) as exc:
            node.branches.append(InductionBranch(y, None, reason=str(exc)))
            continue
        if any(c <= 0 for c in child.coeffs):
            raise InductionMismatch(f"restriction to ray {y} is not strictly positive")
        node.branches.append(InductionBranch(y, verify_inductively(dfan, child), lam))
    implied = all(b.child is not None and b.child.condition_b for b in node.branches)
    if implied != holds:
        raise InductionMismatch(
            f"condition (b) is {holds} on the fan but the restrictions imply {implied}"
        )
    return node


def pairing_with_prime(fan: Fan, V: FamilyRelation, y: int) -> int:
    return dict(zip(V.support, V.coeffs)).get(y, 0)


# reports --------------------------------------------------------------------

OK = "ok"
NOT_A_RELATION = "not_a_relation"
NOT_POSITIVE = "not_positive"
NOT_A_CIRCUIT = "not_a_circuit"
CONDITION_B_FAILED = "condition_b_failed"
NOT_IN_CONE = "not_in_cone"


@dataclass
class FamilyReport:
    status: str
    message: str = ""
    family: FamilyRelation | None = None
    violation: ConditionBViolation | None = None
    certificate: ExtremalityCertificate | None = None
    in_cone: bool | None = None
    interior: bool | None = None
    contraction: ContractionResult | None = None
    contracted_walls_ok: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def rho(self) -> tuple[int, int] | None:
        if self.contraction is None:
            return None
        q = self.contraction.quotient_fan
        return q.rho + self.contraction.rho_drop, q.rho

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "message": self.message,
            "family": None if self.family is None else self.family.to_json(),
            "condition_b": None if self.family is None or self.status == NOT_A_CIRCUIT else self.violation is None,
            "violation": None if self.violation is None else self.violation.to_json(),
            "in_cone": self.in_cone,
            "interior": self.interior,
            "extremal": None if self.in_cone is None else self.certificate is not None,
            "contracted_walls_ok": self.contracted_walls_ok,
            "notes": list(self.notes),
            "certificates": {
                "nef_divisor": None if self.certificate is None else self.certificate.nef_divisor.to_json(),
                "zero_set": None if self.certificate is None else list(self.certificate.zero_set),
                "quotient_fan": None if self.contraction is None else self.contraction.quotient_fan.to_dict(),
            },
            "quotient": None,
        }
        if self.contraction is not None:
            c = self.contraction
            rho_x, rho_y = self.rho
            out["quotient"] = {
                "rho_source": rho_x,
                "rho_target": rho_y,
                "fiber_dim": c.fiber_dim,
                "rank": c.quotient_fan.rank,
                "n_rays": c.quotient_fan.n_rays,
                "n_max_cones": len(c.quotient_fan.max_cones),
            }
        return out


def _cone_facts(fan: Fan, gamma: CurveClass, rep: FamilyReport):
    try:
        rep.certificate = is_geometric_extremal(fan, gamma)
        rep.in_cone = True
        rep.interior = is_interior(fan, gamma)
    except ClassNotInCone:
        rep.in_cone = False
    if rep.interior:
        rep.notes.append("the class lies in the interior of NE(X); only the constant map contracts it")


def full_report(fan: Fan, gamma) -> FamilyReport:
    """Run every check on a candidate family class.

    The correspondence between positive relations and actual covering
    quasi-unsplit families goes one way: such a family always has a
    positive class. Statements in the report are about the relation.
    """
    gamma = _as_class(gamma)
    try:
        _check_relation(fan, gamma)
    except TorquoError as exc:
        return FamilyReport(NOT_A_RELATION, str(exc))
    try:
        V = make_family(fan, gamma)
    except NotPositive as exc:
        rep = FamilyReport(NOT_POSITIVE, str(exc))
        _cone_facts(fan, gamma, rep)
        return rep
    except NotACircuit as exc:
        rep = FamilyReport(NOT_A_CIRCUIT, str(exc))
        _cone_facts(fan, gamma, rep)
        return rep
    except ValueError as exc:
        return FamilyReport(NOT_A_RELATION, str(exc))
    rep = FamilyReport(OK, family=V)
    rep.violation = check_condition_b(fan, V)
    if rep.violation is not None:
        rep.status = CONDITION_B_FAILED
        rep.message = (
            f"cone {list(rep.violation.tau)} extended by the support without ray "
            f"{V.support[rep.violation.missing_index]} is not a cone: {list(rep.violation.attempted_cone)}"
        )
        _cone_facts(fan, gamma, rep)
        rep.notes.append("the positive relation is not the class of a quasi-unsplit family with a flat quotient")
        return rep
    _cone_facts(fan, gamma, rep)
    if not rep.in_cone:
        rep.status = NOT_IN_CONE
        rep.message = "class is not in the Mori cone"
        raise InternalConsistencyError(f"condition (b) holds but the class is outside NE(X): {fan.to_dict()}")
    if rep.certificate is None:
        raise InternalConsistencyError(f"condition (b) holds but the class is not extremal: {fan.to_dict()}")
    rep.contraction = build_quotient(fan, V)
    cone = mori_cone(fan)
    target = gamma.primitive()
    rep.contracted_walls_ok = all(
        (pairing(rep.certificate.nef_divisor, g) == 0) == (g.primitive() == target) for g in cone.wall_classes
    )
    if not rep.contracted_walls_ok:
        raise InternalConsistencyError("contracted wall classes are not exactly the multiples of the family")
    rep.message = "geometric extremal ray with flat geometric quotient"
    return rep


def positive_circuits(fan: Fan) -> list[CurveClass]:
    """All strictly positive circuit relations among the rays, deterministic order."""
    out = []
    for h in range(2, fan.rank + 2):
        for support in itertools.combinations(range(fan.n_rays), h):
            vecs = [fan.rays[i] for i in support]
            ker = lattice.kernel_basis(lattice.transpose(vecs), ncols=h)
            if len(ker) != 1 or not all(c > 0 for c in ker[0]):
                continue
            full = [0] * fan.n_rays
            for i, c in zip(support, ker[0]):
                full[i] = c
            out.append(CurveClass(full))
    return out
