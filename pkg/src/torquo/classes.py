"""Curve classes as ray relations, the toric Mori cone, and extremality.

For a complete simplicial fan, a curve class is identified with the linear
relation ``sum_x (gamma . D_x) x = 0`` among the ray generators. The Mori
cone is generated by the classes of the walls.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

from . import lattice
from .errors import ClassNotInCone, DimensionMismatch, InternalConsistencyError, NotARelation
from .fan import Fan, Wall, wall_relation, walls
from .lp import OPTIMAL, linprog


def _fractions(values) -> tuple[Fraction, ...]:
    return tuple(v if isinstance(v, Fraction) else Fraction(v) for v in values)


@dataclass(frozen=True)
class CurveClass:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _fractions(self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    def is_relation(self, fan: Fan) -> bool:
        if len(self.coeffs) != fan.n_rays:
            return False
        return all(
            sum(c * r[j] for c, r in zip(self.coeffs, fan.rays)) == 0 for j in range(fan.rank)
        )

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def primitive(self) -> tuple[int, ...]:
        """Integer primitive multiple, obtained by *positive* scaling only."""
        return lattice.primitivize(self.coeffs)

    def canonical(self) -> "CurveClass":
        return CurveClass(self.primitive())

    def to_json(self) -> dict:
        return {"coeffs": [_fmt(c) for c in self.coeffs]}


@dataclass(frozen=True)
class DivisorClass:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _fractions(self.coeffs))

    @classmethod
    def prime(cls, n_rays: int, i: int) -> "DivisorClass":
        return cls(tuple(int(j == i) for j in range(n_rays)))

    @classmethod
    def anticanonical(cls, n_rays: int) -> "DivisorClass":
        return cls((1,) * n_rays)

    def to_json(self) -> dict:
        return {"coeffs": [_fmt(c) for c in self.coeffs]}


def _fmt(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def pairing(D: DivisorClass, gamma: CurveClass) -> Fraction:
    if len(D.coeffs) != len(gamma.coeffs):
        raise DimensionMismatch(f"divisor has {len(D.coeffs)} coefficients, class has {len(gamma.coeffs)}")
    return sum((a * c for a, c in zip(D.coeffs, gamma.coeffs)), Fraction(0))


def class_space(fan: Fan) -> list[CurveClass]:
    """Basis of the relations among the rays; its size is the Picard number."""
    M = lattice.transpose(fan.rays) if fan.rank else []
    return [CurveClass(k) for k in lattice.kernel_basis(M, ncols=fan.n_rays)]


def wall_class(fan: Fan, w: Wall) -> CurveClass:
    return CurveClass(wall_relation(fan, w))


@dataclass(frozen=True)
class MoriCone:
    """The cone of curves of a complete simplicial fan.

    ``wall_classes`` lists every wall class once (up to positive scaling);
    ``generators`` is the minimal generating subset, one class per
    extremal ray.
    """

    generators: tuple[CurveClass, ...]
    ambient_dim: int
    wall_classes: tuple[CurveClass, ...]
    wall_index: tuple[int, ...]  # wall -> position in wall_classes

    def full_dimensional(self) -> bool:
        if self.ambient_dim == 0:
            return True
        return lattice.rank([g.coeffs for g in self.generators]) == self.ambient_dim


@lru_cache(maxsize=256)
def mori_cone(fan: Fan) -> MoriCone:
    rels = sorted({wall_relation(fan, w) for w in walls(fan)})
    pos = {r: i for i, r in enumerate(rels)}
    classes = tuple(CurveClass(r) for r in rels)
    gens = tuple(g for g in classes if _supporting_divisor(classes, g) is not None)
    return MoriCone(gens, fan.rho, classes, tuple(pos[wall_relation(fan, w)] for w in walls(fan)))


def _supporting_divisor(gens: Sequence[CurveClass], gamma: CurveClass) -> DivisorClass | None:
    """Divisor vanishing on ``gamma`` and >= 1 on generators not proportional to it."""
    target = gamma.primitive()
    others = [g for g in gens if g.primitive() != target]
    k = len(gamma)
    res = linprog(
        [sum(g.coeffs[i] for g in others) for i in range(k)],
        A_ub=[[-c for c in g.coeffs] for g in others],
        b_ub=[-1] * len(others),
        A_eq=[list(gamma.coeffs)],
        b_eq=[0],
        free=True,
    )
    if res.status != OPTIMAL:
        return None
    s = lcm(*(x.denominator for x in res.x))
    return DivisorClass(tuple(x * s for x in res.x))


@dataclass(frozen=True)
class ExtremalityCertificate:
    nef_divisor: DivisorClass
    zero_set: tuple[int, ...]  # generators pairing to zero with the divisor

    def verify(self, cone: MoriCone, gamma: CurveClass) -> bool:
        if pairing(self.nef_divisor, gamma) != 0:
            return False
        target = gamma.primitive()
        for i, g in enumerate(cone.generators):
            p = pairing(self.nef_divisor, g)
            if p < 0:
                return False
            if p == 0 and (i not in self.zero_set or g.primitive() != target):
                return False
        return True

    def to_json(self) -> dict:
        return {"nef_divisor": self.nef_divisor.to_json(), "zero_set": list(self.zero_set)}


def _check_relation(fan: Fan, gamma: CurveClass):
    if len(gamma.coeffs) != fan.n_rays:
        raise DimensionMismatch(f"class has {len(gamma.coeffs)} coefficients, fan has {fan.n_rays} rays")
    if not gamma.is_relation(fan):
        raise NotARelation("coefficients do not define a relation among the rays")


def cone_decomposition(cone: MoriCone, gamma: CurveClass) -> tuple[Fraction, ...] | None:
    """Nonnegative multipliers writing ``gamma`` in the generators, if any."""
    gens = cone.generators
    if not gens:
        return None if not gamma.is_zero() else ()
    A_eq = [[g.coeffs[j] for g in gens] for j in range(len(gamma))]
    res = linprog([0] * len(gens), A_eq=A_eq, b_eq=gamma.coeffs)
    return res.x if res.status == OPTIMAL else None


def in_cone(fan: Fan, gamma: CurveClass) -> bool:
    _check_relation(fan, gamma)
    return cone_decomposition(mori_cone(fan), gamma) is not None


def is_geometric_extremal(fan: Fan, gamma: CurveClass) -> ExtremalityCertificate | None:
    """Decide whether ``gamma`` spans an extremal ray of the Mori cone.

    Returns a nef divisor vanishing on ``gamma`` and strictly positive on
    every generator not proportional to it, or ``None`` when ``gamma``
    lies in the cone but is not extremal. The LP minimizes the total
    pairing so the divisor found is small; the certificate is re-checked
    by direct pairing before it is returned.
    """
    _check_relation(fan, gamma)
    cone = mori_cone(fan)
    if cone_decomposition(cone, gamma) is None:
        raise ClassNotInCone("class is not a nonnegative combination of wall classes")
    if gamma.is_zero():
        return None
    D = _supporting_divisor(cone.generators, gamma)
    if D is None:
        return None
    zero = tuple(i for i, g in enumerate(cone.generators) if pairing(D, g) == 0)
    cert = ExtremalityCertificate(D, zero)
    if not cert.verify(cone, gamma) or not zero:
        raise InternalConsistencyError("extremality certificate failed direct verification")
    return cert


def is_interior(fan: Fan, gamma: CurveClass) -> bool:
    """Whether ``gamma`` is a strictly positive combination of all generators.

    Solves ``max t`` subject to ``gamma = sum lambda_g g`` with every
    ``lambda_g >= t``; for a pointed cone the optimum is finite.
    """
    _check_relation(fan, gamma)
    cone = mori_cone(fan)
    if cone_decomposition(cone, gamma) is None:
        raise ClassNotInCone("class is not a nonnegative combination of wall classes")
    if not cone.full_dimensional():
        return False
    gens = cone.generators
    m = len(gens)
    # variables: mu_g = lambda_g - t >= 0 (m of them), then t >= 0
    A_eq = [[g.coeffs[j] for g in gens] + [sum(g.coeffs[j] for g in gens)] for j in range(len(gamma))]
    res = linprog([0] * m + [-1], A_eq=A_eq, b_eq=gamma.coeffs)
    if res.status != OPTIMAL:
        raise InternalConsistencyError(f"interiority LP ended with status {res.status}")
    return res.x[-1] > 0


def extremal_generators(fan: Fan) -> list[int]:
    """Indices of Mori cone generators that span extremal rays."""
    cone = mori_cone(fan)
    return [i for i, g in enumerate(cone.generators) if is_geometric_extremal(fan, g) is not None]
