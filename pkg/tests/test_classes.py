from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import nullspace, rank as oracle_rank
from torquo.classes import (
    CurveClass,
    DivisorClass,
    class_space,
    cone_decomposition,
    in_cone,
    is_geometric_extremal,
    is_interior,
    mori_cone,
    pairing,
    wall_class,
)
from torquo.errors import ClassNotInCone, DimensionMismatch, NotARelation
from torquo.fan import walls
from torquo.gallery import blowup_p2, hirzebruch, product, projective_space

P1 = projective_space(1)
P2 = projective_space(2)
P1P1 = product(P1, P1)  # rays e1, -e1, e2, -e2
BL1 = blowup_p2(1)  # rays e1, e2, -e1-e2, e1+e2


def test_class_space_p2():
    basis = class_space(P2)
    assert [b.coeffs for b in basis] == [(1, 1, 1)]


def test_class_space_ranks(z2):
    assert len(class_space(P1P1)) == 2
    assert len(class_space(z2.fan)) == 4


def test_class_space_matches_oracle(full_suite):
    for name, fan in full_suite:
        basis = class_space(fan)
        assert len(basis) == len(nullspace([list(r) for r in zip(*fan.rays)], fan.n_rays)), name
        assert all(b.is_relation(fan) for b in basis)
        assert oracle_rank([list(b.coeffs) for b in basis]) == len(basis)


def test_pairing_examples():
    line = CurveClass((1, 1, 1))
    assert pairing(DivisorClass.prime(3, 0), line) == 1
    assert pairing(DivisorClass((0, 0, 0)), line) == 0
    assert pairing(DivisorClass.anticanonical(3), line) == 3
    with pytest.raises(DimensionMismatch):
        pairing(DivisorClass((1, 0)), line)


def test_pairing_is_exact():
    assert pairing(DivisorClass(("1/3", 0, 0)), CurveClass((1, 1, 1))) == Fraction(1, 3)


def test_wall_class_p2_every_wall():
    assert {wall_class(P2, w).coeffs for w in walls(P2)} == {(1, 1, 1)}


def test_wall_class_p1xp1():
    w = next(w for w in walls(P1P1) if w.ray_indices == (2,))
    assert {P1P1.max_cones[k] for k in w.adjacent} == {(0, 2), (1, 2)}
    assert wall_class(P1P1, w).coeffs == (1, 1, 0, 0)


def test_wall_class_exceptional_curve():
    w = next(w for w in walls(BL1) if w.ray_indices == (3,))
    assert wall_class(BL1, w).coeffs == (1, 1, 0, -1)


def test_every_wall_class_is_a_relation(full_suite):
    for name, fan in full_suite:
        for w in walls(fan):
            c = wall_class(fan, w)
            assert c.is_relation(fan), name
            # positive on the two rays opposite the wall
            assert all(c.coeffs[i] > 0 for i in w.opposite)


def test_mori_cone_generator_counts():
    assert len(mori_cone(P2).generators) == 1
    assert len(mori_cone(P1P1).generators) == 2
    cone = mori_cone(BL1)
    assert {g.coeffs for g in cone.generators} == {(0, 0, 1, 1), (1, 1, 0, -1)}
    # the line class is a wall class but not an extremal ray
    assert (1, 1, 1, 0) in {g.coeffs for g in cone.wall_classes}


def test_mori_cone_full_dimensional(full_suite):
    for name, fan in full_suite:
        assert mori_cone(fan).full_dimensional(), name


def test_extremal_certificate_p1xp1():
    cert = is_geometric_extremal(P1P1, CurveClass((1, 1, 0, 0)))
    assert cert is not None
    D = cert.nef_divisor
    assert pairing(D, CurveClass((1, 1, 0, 0))) == 0
    assert pairing(D, CurveClass((0, 0, 1, 1))) > 0
    # on P1 x P1 this is a positive multiple of D_{e2} up to linear equivalence
    assert D.coeffs[0] + D.coeffs[1] == 0


def test_sum_of_rulings_not_extremal():
    gamma = CurveClass((1, 1, 1, 1))
    assert is_geometric_extremal(P1P1, gamma) is None
    assert is_interior(P1P1, gamma)


def test_not_in_cone():
    with pytest.raises(ClassNotInCone):
        is_geometric_extremal(P1P1, CurveClass((-1, -1, 1, 1)))
    assert not in_cone(BL1, CurveClass((-1, -1, 0, 1)))


def test_not_a_relation():
    with pytest.raises(NotARelation):
        is_geometric_extremal(P2, CurveClass((1, 1, 0)))
    with pytest.raises(DimensionMismatch):
        is_interior(P2, CurveClass((1, 1)))


def test_is_interior_examples(z2):
    assert is_interior(P2, CurveClass((1, 1, 1)))
    assert not is_interior(P1P1, CurveClass((1, 1, 0, 0)))
    assert is_interior(z2.fan, z2.classes["line"])
    assert is_geometric_extremal(z2.fan, z2.classes["line"]) is None


def test_hirzebruch_extremal_rays():
    f1 = hirzebruch(1)
    fibre, section = CurveClass((0, 1, 0, 1)), CurveClass((1, -1, 1, 0))
    assert is_geometric_extremal(f1, fibre) is not None
    assert is_geometric_extremal(f1, section) is not None
    assert is_geometric_extremal(f1, CurveClass((1, 0, 1, 1))) is None


def test_certificates_verify(full_suite):
    for name, fan in full_suite:
        cone = mori_cone(fan)
        for g in cone.generators:
            cert = is_geometric_extremal(fan, g)
            assert cert is not None and cert.verify(cone, g), name
            # nef on every wall class, not only the minimal generators
            assert all(pairing(cert.nef_divisor, w) >= 0 for w in cone.wall_classes)


def test_projective_space_curve_degree():
    for n in range(1, 5):
        pn = projective_space(n)
        (g,) = mori_cone(pn).generators
        assert pairing(DivisorClass.anticanonical(pn.n_rays), g) == n + 1


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_nonnegative_wall_combinations_in_cone(mults):
    fan = blowup_p2(2)
    cone = mori_cone(fan)
    ws = cone.wall_classes
    coeffs = [sum(m * w.coeffs[j] for m, w in zip(mults, ws)) for j in range(fan.n_rays)]
    gamma = CurveClass(coeffs)
    lam = cone_decomposition(cone, gamma)
    assert lam is not None and all(x >= 0 for x in lam)
    back = [sum(x * g.coeffs[j] for x, g in zip(lam, cone.generators)) for j in range(fan.n_rays)]
    assert tuple(back) == gamma.coeffs


def test_canonical_keeps_sign():
    assert CurveClass((-2, -2, 0)).canonical().coeffs == (-1, -1, 0)
    assert CurveClass(("1/2", "1/2", 1)).canonical().coeffs == (1, 1, 2)
