"""Named toric varieties: projective spaces, surfaces, threefolds and Z2.

``build_z2`` reconstructs the smooth Fano fourfold obtained from
P2 x P2 by blowing up two invariant lines lying over distinct points of
the second factor and flipping the strict transform of the line joining
them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .classes import CurveClass, is_interior, wall_class
from .errors import InvalidFan
from .fan import (
    Fan,
    flip,
    is_fano,
    product,
    star_subdivision,
    validate,
    walls,
)


@dataclass(frozen=True)
class NamedVariety:
    name: str
    fan: Fan
    expected: dict = field(default_factory=dict)
    classes: dict = field(default_factory=dict)  # named curve classes

    def __post_init__(self):
        problems = check_expected(self.fan, self.expected)
        if problems:
            raise InvalidFan(f"{self.name}: " + "; ".join(problems))


def check_expected(fan: Fan, expected: dict) -> list[str]:
    problems = []
    rep = validate(fan)
    if not rep.ok:
        problems.append(f"validation failed: {rep.witness}")
        return problems
    actual = {"smooth": rep.smooth, "rho": fan.rho, "dim": fan.rank}
    if "fano" in expected:
        actual["fano"] = is_fano(fan)
    for key, want in expected.items():
        if actual.get(key) != want:
            problems.append(f"{key} is {actual.get(key)!r}, expected {want!r}")
    return problems


def projective_space(n: int) -> Fan:
    if n < 1:
        raise ValueError("n must be at least 1")
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [(-1,) * n]
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return Fan(n, rays, cones)


def weighted_projective_plane(w0: int, w1: int) -> Fan:
    """P(w0, w1, 1): rays e1, e2 and -(w0 e1 + w1 e2), with gcd(w0, w1) = 1."""
    return Fan(2, [(1, 0), (0, 1), (-w0, -w1)], [(0, 1), (1, 2), (0, 2)])


def hirzebruch(a: int) -> Fan:
    """Hirzebruch surface F_a, ruled over P1 by the first coordinate."""
    return Fan(2, [(1, 0), (0, 1), (-1, a), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)])


def blowup_p2(k: int) -> Fan:
    """P2 blown up in ``k <= 3`` torus fixed points."""
    fan = projective_space(2)
    centres = [(0, 1), (1, 2), (0, 2)]
    for c in centres[:k]:
        fan = star_subdivision(fan, c)
    return fan


# Z2 -----------------------------------------------------------------------

# Ray order of P2 x P2: a1, a2, a0 (first factor), b1, b2, b0 (second).
# x and y are the points <b1, b2> and <b2, b0>, so L = V(b2); z = <a1, a2>.
R_X = (0, 3, 4)  # a1, b1, b2: a line of P2 x {x}
R_Y = (1, 4, 5)  # a2, b2, b0: a line of P2 x {y}
L_PRIME = (0, 1, 4)  # a1, a2, b2: z x L


def _flipping_curve(fan: Fan) -> tuple[int, ...]:
    """Negative side of the unique wall curve with normal bundle O(-1)^3."""
    found = set()
    for w in walls(fan):
        c = wall_class(fan, w).primitive()
        nz = sorted(x for x in c if x)
        if nz == [-1, -1, -1, 1, 1]:
            found.add(tuple(i for i, x in enumerate(c) if x < 0))
    if len(found) != 1:
        raise InvalidFan(f"expected one O(-1)^3 curve, found {sorted(found)}")
    return found.pop()


def build_z2(stages: dict | None = None) -> NamedVariety:
    """Z2 with its general-line family class.

    ``stages``, if given, receives the intermediate fans.
    """
    stages = {} if stages is None else stages
    p2 = projective_space(2)
    stages["P2xP2"] = base = product(p2, p2)
    stages["blowup R_x"] = w1 = star_subdivision(base, R_X)
    stages["W"] = w2 = star_subdivision(w1, R_Y)
    neg = _flipping_curve(w2)
    if neg != L_PRIME:
        raise InvalidFan(f"flipping curve is {neg}, expected the strict transform of L' {L_PRIME}")
    stages["X"] = x = flip(w2, neg)
    # A general line in a fibre of the second projection avoids both
    # blown-up lines and the flipped locus, so its class keeps the P2 line
    # relation a1 + a2 + a0 = 0 and pairs to zero with the new divisors.
    line = CurveClass((1, 1, 1, 0, 0, 0, 0, 0))
    return NamedVariety(
        "Z2",
        x,
        {"smooth": True, "fano": True, "rho": 4, "dim": 4},
        {"line": line},
    )


def z2_line_class_is_interior(z2: NamedVariety) -> bool:
    return is_interior(z2.fan, z2.classes["line"])


# corpus ---------------------------------------------------------------------


def _p3_blowups() -> list[tuple[str, Fan]]:
    p3 = projective_space(3)
    b1 = star_subdivision(p3, (0, 1, 2))  # a point
    b2 = star_subdivision(b1, (1, 2))  # a line through it
    b3 = star_subdivision(p3, (0, 1))  # a line
    b4 = star_subdivision(b3, (2, 3))  # a disjoint line
    b5 = star_subdivision(b1, (0, 1, 3))  # a second point
    return [("Bl_pt P3", b1), ("Bl_pt,line P3", b2), ("Bl_line P3", b3), ("Bl_2lines P3", b4), ("Bl_2pts P3", b5)]


def enumerate_test_fans(max_dim: int = 3, max_rays: int = 8) -> list[NamedVariety]:
    """Deterministic desk-scale corpus of complete projective fans."""
    return list(_corpus(max_dim, max_rays))


@lru_cache(maxsize=8)
def _corpus(max_dim: int, max_rays: int) -> tuple[NamedVariety, ...]:
    p1, p2, p3 = projective_space(1), projective_space(2), projective_space(3)
    entries: list[tuple[str, Fan, dict]] = [
        ("P1", p1, {"smooth": True, "rho": 1}),
        ("P2", p2, {"smooth": True, "rho": 1}),
        ("P3", p3, {"smooth": True, "rho": 1}),
        ("P(1,1,2)", weighted_projective_plane(1, 2), {"smooth": False, "rho": 1}),
        ("F0", hirzebruch(0), {"smooth": True, "rho": 2}),
        ("F1", hirzebruch(1), {"smooth": True, "rho": 2}),
        ("F2", hirzebruch(2), {"smooth": True, "rho": 2}),
        ("F3", hirzebruch(3), {"smooth": True, "rho": 2}),
        ("Bl1 P2", blowup_p2(1), {"smooth": True, "rho": 2}),
        ("Bl2 P2", blowup_p2(2), {"smooth": True, "rho": 3}),
        ("Bl3 P2", blowup_p2(3), {"smooth": True, "rho": 4}),
        ("P1xP2", product(p1, p2), {"smooth": True, "rho": 2}),
        ("P2xP1", product(p2, p1), {"smooth": True, "rho": 2}),
        ("P1xP1xP1", product(product(p1, p1), p1), {"smooth": True, "rho": 3}),
        ("P1xF1", product(p1, hirzebruch(1)), {"smooth": True, "rho": 3}),
        ("Bl_section P1xP2", star_subdivision(product(p1, p2), (2, 3)), {"smooth": True, "rho": 3}),
        ("Bl_curve P2xP1", star_subdivision(product(p2, p1), (0, 3)), {"smooth": True, "rho": 3}),
        ("Bl_pt P2xP1", star_subdivision(product(p2, p1), (0, 1, 3)), {"smooth": True, "rho": 3}),
    ]
    for name, f in _p3_blowups():
        entries.append((name, f, {"smooth": True, "rho": f.rho}))
    out = []
    for name, f, exp in entries:
        if f.rank <= max_dim and f.n_rays <= max_rays:
            out.append(NamedVariety(name, f, {**exp, "dim": f.rank}))
    return tuple(out)


@lru_cache(maxsize=1)
def _z2_fan() -> Fan:
    return build_z2().fan


def gallery() -> dict[str, Callable[[], Fan]]:
    """Names accepted by ``torquo gallery emit``, mapped to builders."""
    table = {v.name: (lambda f=v.fan: f) for v in enumerate_test_fans()}
    p2 = projective_space(2)
    table["P4"] = lambda: projective_space(4)
    table["P2xP2"] = lambda: product(p2, p2)
    table["W"] = lambda: star_subdivision(star_subdivision(product(p2, p2), R_X), R_Y)
    table["Z2"] = _z2_fan
    return table
