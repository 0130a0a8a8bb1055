import pytest

from gkmchow import catalog, oracle
from gkmchow.errors import IncompleteFan, NonSimplicial
from gkmchow.gkmgraph import product, strata_by_subtorus, validate
from gkmchow.polyalg import Polynomial
from gkmchow.ppmodule import (first_violation, freeness_certificate, generators, hilbert, membership,
                              mod_delta_dims, weyl_invariants)


def test_every_entry_validates(entries):
    assert len(entries) == len(catalog.STANDARD)
    for e in entries:
        assert validate(e.graph).ok, e.name
        assert e.expected is not None, e.name


def test_goldens_carry_sources(entries):
    for e in entries:
        for key, val in e.expected.items():
            if isinstance(val, dict):
                assert val["source"] in ("oracle", "oracle+hand"), (e.name, key)


def test_goldens_match_main_solver(entries):
    for e in entries:
        D = e.expected["max_degree"]
        assert list(hilbert(e.graph, D).dims) == e.golden_value("hilbert"), e.name
        assert mod_delta_dims(e.graph, D) == e.golden_value("mod_delta"), e.name
        assert generators(e.graph, D).generator_degrees == e.golden_value("generator_degrees"), e.name
        if e.graph.weyl is not None:
            assert list(weyl_invariants(e.graph, D).dims) == e.golden_value("weyl_invariants"), e.name


def test_projective_space():
    p1 = catalog.projective_space(1).graph
    assert p1.torus_rank == 1 and len(p1.vertices) == 2 and [e.character for e in p1.edges] == [(1,)]
    p2 = catalog.projective_space(2).graph
    assert len(p2.vertices) == 3 and len(p2.edges) == 3
    assert sorted(e.character for e in p2.edges) == [(-1, 1), (0, 1), (1, 0)]
    with pytest.raises(ValueError):
        catalog.projective_space(0)


def test_projective_space_hilbert():
    # S-rank n+1 with generators in degrees 0..n
    want = {1: [1, 2, 2, 2], 2: [1, 3, 6, 9], 3: [1, 4, 10, 20]}
    for n, dims in want.items():
        assert list(hilbert(catalog.projective_space(n).graph, 3).dims) == dims


def test_hirzebruch_independent_of_n():
    tables = []
    for n in (0, 1, 2, 5):
        g = catalog.hirzebruch(n).graph
        tables.append((hilbert(g, 6).dims, generators(g, 6).generator_degrees, mod_delta_dims(g, 6)))
    assert all(tab == tables[0] for tab in tables)
    assert list(tables[0][0][:4]) == [1, 3, 4, 4]
    with pytest.raises(ValueError):
        catalog.hirzebruch(-1)


def test_hirzebruch_certificate():
    cert = freeness_certificate(catalog.hirzebruch(1).graph)
    assert cert.status == "certified" and cert.generator_count == 4


def test_weighted_plane_matches_plane_sl2():
    ref = catalog.plane_sl2().graph
    for n in (1, 2, 3, 7):
        g = catalog.weighted_plane(n).graph
        assert hilbert(g, 5).dims == hilbert(ref, 5).dims
        assert generators(g, 5).generator_degrees == generators(ref, 5).generator_degrees == [0, 1, 2]
        assert mod_delta_dims(g, 5) == mod_delta_dims(ref, 5)
    with pytest.raises(ValueError):
        catalog.weighted_plane(0)


def test_fan_p1xp1_is_the_product():
    fan = catalog.fan_p1xp1().graph
    p1 = catalog.projective_space(1).graph
    prod = product(p1, p1)
    assert len(fan.vertices) == 4 and len(fan.edges) == 4
    lines = sorted(tuple(abs(c) for c in e.character) for e in fan.edges)
    assert lines == sorted(tuple(abs(c) for c in e.character) for e in prod.edges)
    assert hilbert(fan, 5).dims == hilbert(prod, 5).dims


def test_fan_p2_matches_projective_space():
    fan = catalog.fan_p2().graph
    assert len(fan.vertices) == 3 and len(fan.edges) == 3
    assert hilbert(fan, 5).dims == hilbert(catalog.projective_space(2).graph, 5).dims


def test_fan_errors():
    with pytest.raises(IncompleteFan):
        # upper half-plane only
        catalog.toric_from_fan_2d([(1, 0), (0, 1), (-1, 0)], [(0, 1), (1, 2)])
    with pytest.raises(NonSimplicial):
        catalog.toric_from_fan_2d([(1, 0), (-1, 0), (0, 1)], [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(ValueError):
        catalog.toric_from_fan_2d([(2, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 0)])


def test_fan_double_winding():
    rays = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    twice = rays + rays
    cones = [(i, (i + 1) % 8) for i in range(8)]
    with pytest.raises(IncompleteFan):
        catalog.toric_from_fan_2d(twice, cones)


def test_fan_hirzebruch_is_free():
    g = catalog.fan_hirzebruch(1).graph
    cert = freeness_certificate(g)
    assert cert.status == "certified" and cert.rank_equals_fixed_points
    assert list(hilbert(g, 3).dims) == [1, 4, 8, 12]


def test_flag_sl3():
    entry = catalog.flag_sl3()
    g = entry.graph
    assert g.torus_rank == 2 and len(g.vertices) == 6 and len(g.edges) == 9
    pres = generators(g)
    assert pres.generator_degrees == [0, 1, 1, 2, 2, 3]
    assert pres.free == "certified" and len(pres.generators) == 6
    assert list(weyl_invariants(g).dims) == entry.golden_value("weyl_invariants")


def test_spherical_demo():
    g = catalog.spherical_demo().graph
    kinds = sorted(s.kind for s in g.surface_relations)
    assert kinds == ["quad_ruled", "triple_plane"] and g.two_ended
    assert len(strata_by_subtorus(g)) >= 2
    # every congruence holds except f_d - 2 f_e + f_f = y being divisible by y^2
    x, y = Polynomial(2, {(1, 0): 1}), Polynomial(2, {(0, 1): 1})
    zero = Polynomial.zero(2)
    comps = [-x, zero, x, zero, zero, y]
    assert not membership(g, comps)
    assert first_violation(g, comps).startswith("triple_plane")


def test_build_and_families():
    assert catalog.build("hirzebruch", 3).name == "hirzebruch_3"
    assert catalog.build("flag_sl3").name == "flag_sl3"
    with pytest.raises(KeyError):
        catalog.build("grassmannian")
    with pytest.raises(ValueError):
        catalog.build("projective_space")


def test_oracle_check_passes(capsys):
    assert oracle.main(["--check"]) == 0
    out = capsys.readouterr().out
    assert "DIFF" not in out and out.count("ok") == len(catalog.STANDARD)


def test_oracle_rejects_wrong_hand_value(monkeypatch):
    entry = catalog.projective_space(1)
    monkeypatch.setitem(catalog.HAND_VALUES, entry.name, {"hilbert": [1, 2, 3]})
    with pytest.raises(AssertionError):
        oracle.golden_payload(entry)
