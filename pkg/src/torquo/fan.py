"""Complete simplicial fans: validation, walls, support functions and surgery.

A :class:`Fan` is an immutable record of a rank, an ordered list of
primitive ray generators and a list of maximal cones given as sorted
tuples of ray indices. Constructing a ``Fan`` performs no geometric
checks; call :func:`validate` (or :func:`ensure_valid`) for that.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm
from typing import Iterable, Sequence

from . import lattice
from .errors import (
    ConeNotInFan,
    FanNotComplete,
    InvalidFan,
    NotACircuit,
    WrongLocalStructure,
)
from .lp import feasible_point, linprog, OPTIMAL


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(sorted(tuple(sorted(int(i) for i in c)) for c in self.max_cones))
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    @property
    def rho(self) -> int:
        """Picard number of the variety; valid for complete simplicial fans."""
        return self.n_rays - self.rank

    @cached_property
    def cones(self) -> frozenset[frozenset[int]]:
        """Every cone of the fan (faces of maximal cones), as ray-index sets."""
        out = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                out.update(frozenset(s) for s in itertools.combinations(c, k))
        return frozenset(out)

    def has_cone(self, rays: Iterable[int]) -> bool:
        return frozenset(rays) in self.cones

    def sorted_cones(self) -> list[tuple[int, ...]]:
        return sorted((tuple(sorted(c)) for c in self.cones), key=lambda c: (len(c), c))

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Fan":
        return cls(data["rank"], data["rays"], data["max_cones"])

    def __repr__(self):
        return f"Fan(rank={self.rank}, rays={len(self.rays)}, max_cones={len(self.max_cones)})"


def point_fan() -> Fan:
    return Fan(0, (), ((),))


@dataclass(frozen=True)
class Cone:
    fan: Fan = field(repr=False)
    ray_indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ray_indices", tuple(sorted(self.ray_indices)))
        if not self.fan.has_cone(self.ray_indices):
            raise ConeNotInFan(f"{list(self.ray_indices)} is not a cone of the fan")

    @property
    def dim(self) -> int:
        return len(self.ray_indices)


@dataclass(frozen=True)
class Wall:
    ray_indices: tuple[int, ...]
    adjacent: tuple[int, int]  # indices into fan.max_cones
    opposite: tuple[int, int]  # ray of each adjacent cone not on the wall


@dataclass(frozen=True)
class PLFunction:
    """Piecewise linear function given by one covector per maximal cone."""

    functionals: tuple[tuple[Fraction, ...], ...]

    def value(self, fan: Fan, ray: int) -> Fraction:
        for c, l in zip(fan.max_cones, self.functionals):
            if ray in c:
                return lattice.dot(l, fan.rays[ray])
        raise ValueError(f"ray {ray} lies in no maximal cone")


@dataclass
class ValidationReport:
    well_formed: bool = False
    simplicial: bool = False
    complete: bool = False
    faces_ok: bool = False
    smooth: bool = False
    projective: bool = False
    witness: str | None = None
    witness_vector: tuple[int, ...] | None = None
    certificate: PLFunction | None = None

    @property
    def ok(self) -> bool:
        return self.well_formed and self.simplicial and self.complete and self.faces_ok and self.projective

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "well_formed": self.well_formed,
            "simplicial": self.simplicial,
            "complete": self.complete,
            "faces_ok": self.faces_ok,
            "smooth": self.smooth,
            "projective": self.projective,
            "witness": self.witness,
            "witness_vector": list(self.witness_vector) if self.witness_vector is not None else None,
        }


# validation -----------------------------------------------------------------


def _structure_problem(fan: Fan) -> str | None:
    n = fan.rank
    if n < 0:
        return "negative rank"
    seen = {}
    for i, r in enumerate(fan.rays):
        if len(r) != n:
            return f"ray {i} has length {len(r)}, expected {n}"
        if not lattice.is_primitive(r):
            return f"ray {i} is not a primitive nonzero vector"
        if r in seen:
            return f"duplicate ray index {i} (same as ray {seen[r]})"
        seen[r] = i
    if not fan.max_cones:
        return "no maximal cones"
    for c in fan.max_cones:
        if len(set(c)) != len(c):
            return f"cone {list(c)} repeats a ray"
        if any(not 0 <= i < fan.n_rays for i in c):
            return f"cone {list(c)} has an invalid ray index"
        if len(c) != n:
            return f"maximal cone {list(c)} has {len(c)} rays, expected {n}"
    for a, b in zip(fan.max_cones, fan.max_cones[1:]):
        if a == b:
            return f"duplicate maximal cone {list(a)}"
    used = {i for c in fan.max_cones for i in c}
    unused = [i for i in range(fan.n_rays) if i not in used]
    if unused:
        return f"ray index {unused[0]} lies in no maximal cone"
    return None


def _in_simplicial_cone(fan: Fan, cone: Sequence[int], v: Sequence[int]) -> bool:
    M = lattice.transpose([fan.rays[i] for i in cone])
    x = lattice.solve(M, v)
    return x is not None and all(t >= 0 for t in x)


def _facets(fan: Fan) -> dict[tuple[int, ...], list[int]]:
    facets = defaultdict(list)
    for k, c in enumerate(fan.max_cones):
        for f in itertools.combinations(c, len(c) - 1):
            facets[f].append(k)
    return facets


def _side(fan: Fan, facet: Sequence[int], v: Sequence[int]) -> int:
    """Sign of ``v`` relative to the hyperplane spanned by ``facet``."""
    M = [fan.rays[i] for i in facet] + [v]
    d = lattice.det(M)
    return (d > 0) - (d < 0)


def _uncovered_witness(fan: Fan, facet, cone) -> tuple[int, ...] | None:
    """A lattice point just past an unpaired facet that no cone contains.

    ``None`` when other (overlapping) cones cover that side; the unpaired
    facet is then the witness on its own.
    """
    opp = next(i for i in fan.max_cones[cone] if i not in facet)
    base = [sum(fan.rays[i][j] for i in facet) for j in range(fan.rank)]
    k = 1
    while k <= 2**20:
        p = tuple(k * b - o for b, o in zip(base, fan.rays[opp]))
        if any(p) and not any(_in_simplicial_cone(fan, c, p) for c in fan.max_cones):
            return p
        k *= 2
    return None


def _separable(fan: Fan, c1: Sequence[int], c2: Sequence[int]) -> bool:
    """Is there a hyperplane meeting both cones exactly in their common face?"""
    common = set(c1) & set(c2)
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for i in c1:
        if i in common:
            A_eq.append(fan.rays[i])
            b_eq.append(0)
        else:
            A_ub.append([-x for x in fan.rays[i]])
            b_ub.append(-1)
    for i in c2:
        if i not in common:
            A_ub.append(list(fan.rays[i]))
            b_ub.append(-1)
    return feasible_point(fan.rank, A_ub, b_ub, A_eq, b_eq, free=True) is not None


def validate(fan: Fan, check_projective: bool = True) -> ValidationReport:
    """Check the fan axioms and report the first failure with a witness.

    Completeness is certified by facet pairing: every facet of a maximal
    cone must lie in exactly two maximal cones on opposite sides of it, and
    the adjacency graph must be connected. Any two maximal cones must be
    separated by a hyperplane cutting out their common face.
    """
    rep = ValidationReport()
    problem = _structure_problem(fan)
    if problem:
        rep.witness = problem
        return rep
    rep.well_formed = True
    n = fan.rank
    dets = {}
    for c in fan.max_cones:
        d = lattice.det([fan.rays[i] for i in c])
        if d == 0:
            rep.witness = f"maximal cone {list(c)} is not simplicial"
            return rep
        dets[c] = d
    rep.simplicial = True

    if n == 0:
        rep.complete = rep.faces_ok = rep.smooth = rep.projective = len(fan.max_cones) == 1
        rep.certificate = PLFunction(((),))
        return rep

    facets = _facets(fan)
    for f, owners in sorted(facets.items()):
        if len(owners) == 1:
            rep.witness = f"facet {list(f)} lies in only one maximal cone"
            rep.witness_vector = _uncovered_witness(fan, f, owners[0])
            return rep
        if len(owners) > 2:
            rep.witness = f"facet {list(f)} lies in {len(owners)} maximal cones"
            return rep
        o1, o2 = (next(i for i in fan.max_cones[k] if i not in f) for k in owners)
        if _side(fan, f, fan.rays[o1]) == _side(fan, f, fan.rays[o2]):
            rep.witness = (
                f"maximal cones {list(fan.max_cones[owners[0]])} and "
                f"{list(fan.max_cones[owners[1]])} lie on the same side of facet {list(f)}"
            )
            return rep
    # adjacency connectivity
    adj = defaultdict(set)
    for owners in facets.values():
        a, b = owners
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        for k in adj[stack.pop()]:
            if k not in seen:
                seen.add(k)
                stack.append(k)
    if len(seen) != len(fan.max_cones):
        rep.witness = "maximal cones do not form a connected facet graph"
        return rep
    rep.complete = True

    adjacent = {tuple(sorted(o)) for o in facets.values()}
    for a, b in itertools.combinations(range(len(fan.max_cones)), 2):
        if (a, b) in adjacent:
            continue  # already separated by their common wall
        if not _separable(fan, fan.max_cones[a], fan.max_cones[b]):
            rep.witness = (
                f"maximal cones {list(fan.max_cones[a])} and {list(fan.max_cones[b])} "
                "do not meet in a common face"
            )
            return rep
    rep.faces_ok = True
    rep.smooth = all(abs(d) == 1 for d in dets.values())
    if check_projective:
        cert = is_projective(fan)
        rep.projective = cert is not None
        if cert is None:
            rep.witness = "no strictly convex support function exists"
        rep.certificate = cert
    return rep


def ensure_valid(fan: Fan, check_projective: bool = True) -> ValidationReport:
    rep = validate(fan, check_projective=check_projective)
    good = rep.ok if check_projective else (rep.well_formed and rep.simplicial and rep.complete and rep.faces_ok)
    if not good:
        raise InvalidFan(f"invalid fan: {rep.witness}", rep)
    return rep


def is_smooth(fan: Fan) -> bool:
    return all(abs(lattice.det([fan.rays[i] for i in c])) == 1 for c in fan.max_cones)


# walls and support functions -----------------------------------------------


@lru_cache(maxsize=256)
def walls(fan: Fan) -> tuple[Wall, ...]:
    out = []
    for f, owners in sorted(_facets(fan).items()):
        if len(owners) != 2:
            raise FanNotComplete(f"facet {list(f)} has {len(owners)} adjacent maximal cones")
        a, b = sorted(owners)
        opp = tuple(next(i for i in fan.max_cones[k] if i not in f) for k in (a, b))
        out.append(Wall(f, (a, b), opp))
    return tuple(out)


def wall_relation(fan: Fan, wall: Wall) -> tuple[int, ...]:
    """Primitive integer relation on the rays of a wall's two cones.

    Extended by zeros to all rays, positive on the two opposite rays.
    """
    idx = list(wall.ray_indices) + list(wall.opposite)
    M = lattice.transpose([fan.rays[i] for i in idx])
    ker = lattice.kernel_basis(M, ncols=len(idx))
    if len(ker) != 1:
        raise InvalidFan(f"wall {list(wall.ray_indices)} does not carry a unique relation")
    k = ker[0]
    if k[-1] < 0:
        k = tuple(-x for x in k)
    coeffs = [0] * fan.n_rays
    for i, c in zip(idx, k):
        coeffs[i] = c
    return tuple(coeffs)


def support_function(fan: Fan, values: Sequence) -> PLFunction:
    """The PL function taking ``values[i]`` on ray ``i``, linear on each cone."""
    funcs = []
    for c in fan.max_cones:
        if not c:
            funcs.append(())
            continue
        M = [fan.rays[i] for i in c]
        l = lattice.solve(M, [values[i] for i in c])
        funcs.append(tuple(l))
    return PLFunction(tuple(funcs))


def convexity_margins(fan: Fan, plf: PLFunction) -> list[Fraction] | None:
    """Per-wall margins ``l_sigma(v') - l_sigma'(v')``, or None if discontinuous.

    For every wall between cones sigma and sigma', ``v'`` is the ray of
    sigma' off the wall; the margin is taken in both directions and the
    smaller one recorded.
    """
    out = []
    for w in walls(fan):
        la, lb = plf.functionals[w.adjacent[0]], plf.functionals[w.adjacent[1]]
        for i in w.ray_indices:
            if lattice.dot(la, fan.rays[i]) != lattice.dot(lb, fan.rays[i]):
                return None
        va, vb = fan.rays[w.opposite[0]], fan.rays[w.opposite[1]]
        m1 = lattice.dot(la, vb) - lattice.dot(lb, vb)
        m2 = lattice.dot(lb, va) - lattice.dot(la, va)
        out.append(min(m1, m2))
    return out


def is_strictly_convex(fan: Fan, plf: PLFunction) -> bool:
    margins = convexity_margins(fan, plf)
    return margins is not None and all(m > 0 for m in margins)


def _integral(plf: PLFunction) -> PLFunction:
    dens = [Fraction(x).denominator for l in plf.functionals for x in l]
    s = lcm(*dens) if dens else 1
    return PLFunction(tuple(tuple(Fraction(x) * s for x in l) for l in plf.functionals))


def is_projective(fan: Fan) -> PLFunction | None:
    """Certificate of projectivity: a strictly convex support function.

    The unknowns are the values of the function on the rays, which fix the
    covector on every simplicial cone and make continuity automatic. The
    strict wall inequalities become ``>= 1`` on the wall relations. The
    returned covectors are scaled to be integral, so every margin is a
    positive integer.
    """
    if fan.rank == 0:
        return PLFunction(((),))
    rels = sorted({wall_relation(fan, w) for w in walls(fan)})
    # sum_x c_x d_x >= 1 for each wall relation; values psi = -d
    res = linprog(
        [sum(r[i] for r in rels) for i in range(fan.n_rays)],
        A_ub=[[-c for c in r] for r in rels],
        b_ub=[-1] * len(rels),
        free=True,
    )
    if res.status != OPTIMAL:
        return None
    plf = _integral(support_function(fan, [-d for d in res.x]))
    margins = convexity_margins(fan, plf)
    if margins is None or any(m < 1 for m in margins):
        raise AssertionError("projectivity certificate failed exact re-verification")
    return plf


def anticanonical_function(fan: Fan) -> PLFunction:
    return support_function(fan, [-1] * fan.n_rays)


def is_fano(fan: Fan) -> bool:
    """Whether the anticanonical support function is strictly convex."""
    return is_strictly_convex(fan, anticanonical_function(fan))


# derived fans ---------------------------------------------------------------


@dataclass(frozen=True)
class DivisorFan:
    fan: Fan
    projection: lattice.LatticeProjection
    rays: tuple[int, ...]  # new ray index -> ray index in the big fan

    def __iter__(self):  # allows ``fan, proj, corr = divisor_fan(...)``
        return iter((self.fan, self.projection, self.rays))


def divisor_fan(fan: Fan, y: int) -> DivisorFan:
    """Fan of the invariant divisor of ray ``y`` in ``N / Z y``."""
    proj = lattice.quotient_projection(fan.rank, [fan.rays[y]])
    star = [c for c in fan.max_cones if y in c]
    neighbours = sorted({i for c in star for i in c if i != y})
    new_index = {}
    rays = []
    for i in neighbours:
        img = lattice.primitivize(proj(fan.rays[i]))
        if img in rays:
            raise InvalidFan(f"rays adjacent to {y} project onto the same ray")
        new_index[i] = len(rays)
        rays.append(img)
    cones = [tuple(new_index[i] for i in c if i != y) for c in star]
    return DivisorFan(Fan(fan.rank - 1, rays, cones), proj, tuple(neighbours))


def product(f1: Fan, f2: Fan) -> Fan:
    n1, n2 = f1.rank, f2.rank
    rays = [tuple(r) + (0,) * n2 for r in f1.rays] + [(0,) * n1 + tuple(r) for r in f2.rays]
    off = f1.n_rays
    cones = [tuple(a) + tuple(off + j for j in b) for a in f1.max_cones for b in f2.max_cones]
    return Fan(n1 + n2, rays, cones)


def _indices(cone) -> tuple[int, ...]:
    if isinstance(cone, Cone):
        return cone.ray_indices
    return tuple(sorted(int(i) for i in cone))


def star_subdivision(fan: Fan, cone, validate_result: bool = True) -> Fan:
    """Insert the ray through the sum of the cone's generators.

    The new ray is appended as the last ray. Every maximal cone containing
    ``cone`` is replaced by the cones obtained by swapping one generator of
    ``cone`` for the new ray.
    """
    S = _indices(cone)
    if not fan.has_cone(S):
        raise ConeNotInFan(f"{list(S)} is not a cone of the fan")
    if len(S) < 2:
        raise ValueError("star subdivision needs a cone of dimension at least 2")
    u = lattice.primitivize([sum(fan.rays[i][j] for i in S) for j in range(fan.rank)])
    new = fan.n_rays
    cones = []
    for c in fan.max_cones:
        if set(S) <= set(c):
            cones.extend(tuple(new if i == s else i for i in c) for s in S)
        else:
            cones.append(c)
    out = Fan(fan.rank, fan.rays + (u,), cones)
    if validate_result:
        ensure_valid(out, check_projective=False)
    return out


def find_circuit(fan: Fan, negative_side: Sequence[int]) -> tuple[int, ...]:
    """Relation of the circuit whose negative rays are ``negative_side``.

    The relation is read off a wall whose two adjacent maximal cones both
    contain the negative side.
    """
    neg = set(negative_side)
    for w in walls(fan):
        if not all(neg <= set(fan.max_cones[k]) for k in w.adjacent):
            continue
        rel = wall_relation(fan, w)
        if {i for i, c in enumerate(rel) if c < 0} == neg:
            support = [i for i, c in enumerate(rel) if c]
            if lattice.rank([fan.rays[i] for i in support]) != len(support) - 1:
                continue
            return rel
    raise NotACircuit(f"no circuit in the fan has negative side {sorted(neg)}")


def flip(fan: Fan, negative_side: Sequence[int], validate_result: bool = True) -> Fan:
    """Bistellar exchange across a circuit ``sum a_i v_i = 0``.

    The fan must contain the cones ``(Z minus z) + link`` for every ray
    ``z`` of the positive side and every link cone; these are replaced by
    ``(Z minus z) + link`` for ``z`` on the negative side.
    """
    rel = find_circuit(fan, negative_side)
    Z = {i for i, c in enumerate(rel) if c}
    pos = sorted(i for i in Z if rel[i] > 0)
    neg = sorted(i for i in Z if rel[i] < 0)
    links = defaultdict(set)
    for c in fan.max_cones:
        if set(neg) <= set(c):
            missing = Z - set(c)
            if len(missing) != 1 or not missing <= set(pos):
                raise WrongLocalStructure(
                    f"maximal cone {list(c)} contains the negative side but is not of the form (Z - z) + link"
                )
            links[tuple(sorted(set(c) - Z))].add(missing.pop())
    for lk, zs in links.items():
        if zs != set(pos):
            raise WrongLocalStructure(f"link {list(lk)} is not joined to every positive-side facet")
    if any(set(pos) <= set(c) for c in fan.max_cones):
        raise WrongLocalStructure("the positive side already spans a cone")
    old = {tuple(sorted((Z - {z}) | set(lk))) for lk in links for z in pos}
    new = [tuple(sorted((Z - {z}) | set(lk))) for lk in links for z in neg]
    cones = [c for c in fan.max_cones if c not in old] + new
    out = Fan(fan.rank, fan.rays, cones)
    if validate_result:
        ensure_valid(out, check_projective=False)
    return out
