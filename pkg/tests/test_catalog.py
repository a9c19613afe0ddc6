import pytest

from apq.catalog import (
    Catalog,
    FMember,
    GMember,
    Homog,
    Inj,
    Proj,
    RegInf,
    RegZero,
    Simple,
    TauInj,
    TauProj,
    F_system,
    G_system,
    check_descriptor,
    descriptor_dim,
    normalize,
    parse_descriptor,
    parse_sequence,
    realize,
    tau_desc,
    tau_power_set,
)
from apq.errors import DescriptorSyntaxError, UsageError, VanishesUnderTau
from apq.homcalc import coxeter_apply, end_dim, ext1_dim, is_isomorphic
from apq.quiverrep import build_quiver, sincere, supp, validate


def test_realize_examples(q23):
    p4, cert = realize(Proj(4), q23, 0)
    assert p4.dims == (2, 1, 1, 1, 1)
    assert cert.end_dim == 1 and cert.self_ext == 0
    e2, _ = realize(RegInf(2), q23, 0)
    assert e2.dims == (1, 0, 1, 1, 1)
    assert all(e2.maps[k].tolist() == [[1]] for k in (2, 3, 4))
    h, _ = realize(Homog(1), q23, 0)
    assert h.dims == (1,) * 5
    assert all(m.tolist() == [[1]] for m in h.maps)
    h3, _ = realize(Homog(3), q23, 0)
    assert h3.maps[1].tolist() == [[3]]
    assert [m.tolist() for k, m in enumerate(h3.maps) if k != 1] == [[[1]]] * 4


def test_homog_lambda_on_single_top_arrow():
    q = build_quiver(1, 2)
    h, _ = realize(Homog(5), q, 0)
    assert h.maps[0].tolist() == [[5]]


def test_descriptor_dim_examples(q23):
    assert descriptor_dim(Simple(3), q23) == (0, 0, 0, 1, 0)
    d = descriptor_dim(TauProj(1, 0), q23)
    assert d == coxeter_apply(q23, (1, 0, 0, 0, 0), -1) and min(d) >= 0
    assert descriptor_dim(Homog(2), q23) == (1,) * 5


def test_tau_desc_examples(q23):
    assert tau_desc(RegInf(2), 1, q23) == RegInf(1)
    assert tau_desc(RegInf(1), 1, q23) == RegInf(2)
    assert tau_desc(RegZero(1), -1, q23) == RegZero(2)
    with pytest.raises(VanishesUnderTau):
        tau_desc(Proj(3), 1, q23)
    with pytest.raises(VanishesUnderTau):
        tau_desc(Inj(3), -1, q23)
    assert tau_desc(Homog(2), 5, q23) == Homog(2)
    assert tau_desc(Proj(2), -3, q23) == TauProj(3, 2)
    assert tau_desc(TauProj(3, 2), 3, q23) == Proj(2)
    assert tau_desc(TauInj(2, 1), -2, q23) == Inj(1)


def test_F_and_G(q23):
    assert [normalize(d, q23) for d in F_system(q23)] == [RegInf(1)]
    assert [normalize(d, q23) for d in G_system(q23)] == [RegZero(2), RegZero(1)]
    assert [normalize(Simple(v), q23) for v in (1, 3, 2)] == [RegInf(1), RegZero(2), RegZero(1)]
    q12 = build_quiver(1, 2)
    assert F_system(q12) == () and G_system(q12) == (GMember(1),)
    q33 = build_quiver(3, 3)
    assert len(F_system(q33)) == 2 and len(G_system(q33)) == 2


def test_tau_power_set():
    q3 = build_quiver(3, 4)
    F = frozenset(normalize(d, q3) for d in F_system(q3))
    assert tau_power_set("F", 3, q3) == F
    assert tau_power_set("F", 1, q3) == {normalize(FMember(2), q3), RegInf(3)}
    q33 = build_quiver(3, 3)
    assert tau_power_set("G", -1, q33) == {normalize(GMember(1), q33), RegZero(3)}
    with pytest.raises(UsageError):
        tau_power_set("F", 1, build_quiver(1, 2))


def test_parse():
    assert parse_descriptor("tP(3,1)") == TauProj(3, 1)
    assert parse_descriptor("Ehom(-2/4)") == Homog(-0.5)
    assert str(parse_descriptor("Ehom(6/4)")) == "Ehom(3/2)"
    for d in [Proj(1), Inj(2), Simple(0), TauInj(5, 4), RegInf(2), RegZero(3), FMember(1), GMember(2)]:
        assert parse_descriptor(str(d)) == d
    with pytest.raises(DescriptorSyntaxError) as info:
        parse_descriptor("tP(3,1")
    assert info.value.position == 0
    with pytest.raises(DescriptorSyntaxError) as info:
        parse_descriptor("P(1)x")
    assert info.value.position == 4


def test_parse_sequence(q23):
    seq = parse_sequence("S(4),F*,G*,P(0)", q23)
    assert seq == [Simple(4), FMember(1), GMember(1), GMember(2), Proj(0)]
    with pytest.raises(DescriptorSyntaxError) as info:
        parse_sequence("P(0),,P(1)", q23)
    assert info.value.position == 5


@pytest.mark.parametrize(
    "desc", [Proj(5), TauProj(0, 1), RegInf(3), RegZero(4), Homog(0), FMember(2), GMember(3)], ids=str
)
def test_check_descriptor_rejects(q23, desc):
    with pytest.raises(UsageError):
        check_descriptor(desc, q23)


def test_realizations_match_dims_and_validate(q34, cat34):
    descs = [Simple(v) for v in q34.vertices]
    descs += [RegInf(i) for i in (1, 2, 3)] + [RegZero(j) for j in (1, 2, 3, 4)] + [Homog(2)]
    for t in range(0, 7):
        for v in q34.vertices:
            descs += [TauProj(t, v) if t else Proj(v), TauInj(t, v) if t else Inj(v)]
    for d in descs:
        rep, cert = cat34.realize_certified(d)
        assert validate(rep) == []
        assert rep.dims == descriptor_dim(d, q34)
        if not isinstance(d, Homog):
            assert cert.end_dim == 1 and cert.self_ext == 0


def test_symbolic_tau_agrees_with_coxeter(q34):
    descs = [RegInf(2), RegZero(4), Homog(1), Proj(3), TauProj(4, 6), Inj(2), TauInj(3, 0)]
    for d in descs:
        for k in range(-4, 5):
            try:
                shifted = tau_desc(d, k, q34)
            except VanishesUnderTau:
                continue
            assert descriptor_dim(shifted, q34) == coxeter_apply(q34, descriptor_dim(d, q34), k)


def test_cross_seed_isomorphic(q34):
    a, b = Catalog(q34, 3), Catalog(q34, 11)
    for d in [TauProj(5, 2), TauInj(4, 6), TauProj(2, 0)]:
        assert is_isomorphic(a.realize(d), b.realize(d))


def test_realization_is_deterministic(q34):
    x, _ = realize(TauProj(6, 3), q34, 4)
    y, _ = realize(TauProj(6, 3), q34, 4)
    assert all(m == n for m, n in zip(x.maps, y.maps))


def test_composition_factor_windows(q34, cat34):
    p = q34.p
    for i in range(p):
        for k in range(0, p - i):
            got = supp(cat34.realize(TauProj(k, i) if k else Proj(i)))
            assert got <= set(range(0, i + k + 1)) | set(range(p, p + k))
        assert sincere(cat34.realize(TauProj(p - i, i)))


def test_regular_quasi_simples(q23, cat23):
    for d in [RegInf(1), RegInf(2), RegZero(1), RegZero(2), RegZero(3)]:
        x = cat23.realize(d)
        assert end_dim(x) == 1 and ext1_dim(x, x) == 0
