import pytest

from torquo.classes import is_interior
from torquo.errors import InvalidFan
from torquo.fan import is_fano, validate
from torquo.gallery import (
    L_PRIME,
    NamedVariety,
    build_z2,
    enumerate_test_fans,
    gallery,
    hirzebruch,
    projective_space,
    weighted_projective_plane,
    z2_line_class_is_interior,
)


def test_projective_space_small():
    p1 = projective_space(1)
    assert sorted(p1.rays) == [(-1,), (1,)]
    p2 = projective_space(2)
    assert p2.n_rays == 3 and len(p2.max_cones) == 3 and validate(p2).ok


def test_p4():
    p4 = projective_space(4)
    assert p4.n_rays == 5 and len(p4.max_cones) == 5 and validate(p4).smooth


def test_projective_space_rejects_zero():
    with pytest.raises(ValueError):
        projective_space(0)


def test_z2_stages():
    stages = {}
    z2 = build_z2(stages)
    assert list(stages) == ["P2xP2", "blowup R_x", "W", "X"]
    assert [stages[k].n_rays for k in stages] == [6, 7, 8, 8]
    assert [stages[k].rho for k in stages] == [2, 3, 4, 4]
    assert stages["X"] is z2.fan
    # the flip removes the cone of the flipped curve and nothing else of that size
    assert stages["W"].has_cone(L_PRIME) and not z2.fan.has_cone(L_PRIME)


def test_z2_expectations(z2):
    rep = validate(z2.fan)
    assert rep.ok and rep.smooth and rep.projective
    assert z2.fan.rank == 4 and z2.fan.rho == 4
    assert is_fano(z2.fan)
    assert len(z2.fan.max_cones) == 18


def test_z2_line_class(z2):
    line = z2.classes["line"]
    assert line.is_relation(z2.fan)
    assert z2_line_class_is_interior(z2)
    assert is_interior(z2.fan, line)


def test_corpus(corpus):
    names = [v.name for v in corpus]
    assert len(corpus) >= 12
    assert len(set(names)) == len(names)
    for required in ("P1", "P2", "P3", "F0", "F1", "F2", "Bl1 P2", "Bl2 P2", "Bl3 P2", "P1xP2"):
        assert required in names
    assert any("P3" in n and n.startswith("Bl") for n in names)
    for v in corpus:
        rep = validate(v.fan)
        assert rep.ok and rep.certificate is not None, v.name
        assert v.fan.rank <= 3 and v.fan.n_rays <= 8


def test_corpus_is_deterministic(corpus):
    again = enumerate_test_fans()
    assert [(v.name, v.fan) for v in again] == [(v.name, v.fan) for v in corpus]


def test_corpus_bounds():
    small = enumerate_test_fans(max_dim=2, max_rays=4)
    assert small and all(v.fan.rank <= 2 and v.fan.n_rays <= 4 for v in small)


def test_f1():
    f1 = hirzebruch(1)
    assert f1.n_rays == 4 and f1.rho == 2 and validate(f1).smooth


def test_expectations_enforced():
    with pytest.raises(InvalidFan):
        NamedVariety("wrong", weighted_projective_plane(1, 2), {"smooth": True})


def test_gallery_builders_validate():
    table = gallery()
    for name in ("P2", "P4", "P2xP2", "W", "Z2"):
        assert validate(table[name]()).ok, name
