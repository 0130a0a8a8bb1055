import json

import pytest

from gkmchow import catalog
from gkmchow.cli import parse_class_literal, run
from gkmchow.errors import NotMember
from gkmchow.gkmgraph import parse, serialize
from gkmchow.ppmodule import PPClass

from conftest import t


def gkm(capsys, *argv):
    code = run(list(map(str, argv)))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def hirz_file(tmp_path, capsys):
    path = tmp_path / "graph.json"
    assert gkm(capsys, "catalog", "hirzebruch", "--n", 2, "--emit", path)[0] == 0
    return path


@pytest.fixture
def p1_file(tmp_path):
    path = tmp_path / "p1.json"
    path.write_text(serialize(catalog.projective_space(1).graph))
    return path


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return path


def test_catalog_then_hilbert(capsys, hirz_file):
    code, out, _ = gkm(capsys, "hilbert", hirz_file, "--max-degree", 3)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "max_degree 3"
    assert lines[2].split()[1:] == ["1", "3", "4", "4"]
    golden = hirz_file.with_name("graph.golden.json")
    assert json.loads(golden.read_text())["hilbert"]["value"][:4] == [1, 3, 4, 4]


def test_missing_file(capsys):
    code, out, err = gkm(capsys, "hilbert", "missing.json")
    assert code == 1 and "file not found" in err and out == ""


def test_invalid_graph_exits_1(capsys, tmp_path):
    bad = write_json(tmp_path / "bad.json", {"torus_rank": 2, "vertices": ["a", "b"],
                                             "edges": [{"ends": ["a", "b"], "character": [1]}]})
    code, _, err = gkm(capsys, "hilbert", bad)
    assert code == 1 and "character" in err
    broken = tmp_path / "broken.json"
    broken.write_text("{\n  \"torus_rank\": 1,\n")
    code, _, err = gkm(capsys, "generators", broken)
    assert code == 1 and "line" in err


def test_verify_all(capsys):
    code, out, _ = gkm(capsys, "verify", "--all")
    assert code == 0 and "FAIL" not in out
    assert out.splitlines()[-1].endswith("checks passed")


def test_verify_deterministic(capsys):
    first = gkm(capsys, "verify", "--all")
    second = gkm(capsys, "verify", "--all")
    assert first == second


def test_json_outputs(capsys, hirz_file):
    code, out, _ = gkm(capsys, "hilbert", hirz_file, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["max_degree"] == 7 and doc["dims"][:4] == [1, 3, 4, 4]
    _, out, _ = gkm(capsys, "generators", hirz_file, "--format", "json")
    doc = json.loads(out)
    assert doc["generator_degrees"] == [0, 1, 1, 2] and doc["free"] == "certified"
    assert doc["rank_equals_fixed_points"] is True
    _, out, _ = gkm(capsys, "freeness", hirz_file, "--format", "json")
    assert json.loads(out)["free"] == "certified"
    _, out, _ = gkm(capsys, "mod-delta", hirz_file, "--format", "json", "--max-degree", 4)
    assert json.loads(out) == {"max_degree": 4, "dims": [1, 2, 1, 0, 0]}
    _, out, _ = gkm(capsys, "invariants", hirz_file, "--format", "json", "--max-degree", 3)
    assert json.loads(out)["max_degree"] == 3


def test_table_echoes_default_degree(capsys, hirz_file):
    for verb in ["hilbert", "generators", "mod-delta", "invariants"]:
        code, out, _ = gkm(capsys, verb, hirz_file)
        assert code == 0 and out.startswith("max_degree 7"), verb
    code, out, _ = gkm(capsys, "freeness", hirz_file)
    assert code == 0 and "max_degree" in out and "certified" in out


def test_generator_json_round_trips_through_membership(capsys, tmp_path, hirz_file):
    _, out, _ = gkm(capsys, "generators", hirz_file, "--format", "json", "--max-degree", 4)
    doc = json.loads(out)
    g = parse(hirz_file.read_text())
    for k, comps in enumerate(doc["generators"]):
        lit = write_json(tmp_path / f"gen{k}.json", dict(zip(g.vertices, comps)))
        code, out, _ = gkm(capsys, "membership", hirz_file, "--class", lit, "--format", "json")
        assert code == 0 and json.loads(out) == {"member": True, "violated": None}


def test_cup_round_trip(capsys, tmp_path, p1_file):
    lit = write_json(tmp_path / "a.json", {"e0": 0, "e1": [{"exp": [1], "num": "1", "den": "1"}]})
    code, out, _ = gkm(capsys, "cup", p1_file, "--class", lit, "--class", lit, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["e1"] == [{"exp": [2], "num": "1", "den": "1"}] and doc["e0"] == []
    # feed the product back in as an operand
    prod = write_json(tmp_path / "b.json", doc)
    code, out2, _ = gkm(capsys, "cup", p1_file, "--class", prod, "--class", lit, "--format", "json")
    assert code == 0 and json.loads(out2)["e1"][0]["exp"] == [3]


def test_cup_rejects_non_member(capsys, tmp_path, p1_file):
    bad = write_json(tmp_path / "bad.json", {"e0": 1, "e1": 0})
    code, _, err = gkm(capsys, "cup", p1_file, "--class", bad, "--class", bad)
    assert code == 1 and "edge 0 {e0, e1}" in err
    code, _, err = gkm(capsys, "cup", p1_file, "--class", bad)
    assert code == 1 and "expected 2" in err


def test_membership_false(capsys, tmp_path, hirz_file):
    a = [{"exp": [1], "num": "1", "den": "1"}]
    lit = write_json(tmp_path / "c.json", {"x": a, "y": a, "z": a, "t": 0})
    code, out, _ = gkm(capsys, "membership", hirz_file, "--class", lit)
    assert code == 0 and out.startswith("false") and "quad_ruled" in out


def test_product_and_strata(capsys, tmp_path, p1_file):
    out_path = tmp_path / "prod.json"
    code, _, _ = gkm(capsys, "product", p1_file, p1_file, "--emit", out_path)
    assert code == 0
    code, out, _ = gkm(capsys, "hilbert", out_path, "--max-degree", 4, "--format", "json")
    assert json.loads(out)["dims"] == [1, 4, 8, 12, 16]
    code, out, _ = gkm(capsys, "strata", out_path, "--format", "json")
    dirs = sorted(tuple(s["direction"]) for s in json.loads(out)["strata"])
    assert dirs == [(0, 1), (1, 0)]
    code, out, _ = gkm(capsys, "product", p1_file)
    assert code == 1


def test_product_stdout_reparses(capsys, p1_file):
    code, out, _ = gkm(capsys, "product", p1_file, p1_file)
    assert code == 0 and len(parse(out).vertices) == 4


def test_product_surface_relations_rejected(capsys, p1_file, hirz_file):
    code, _, err = gkm(capsys, "product", p1_file, hirz_file)
    assert code == 1 and err


def test_catalog_listing_and_errors(capsys):
    code, out, _ = gkm(capsys, "catalog")
    assert code == 0 and "hirzebruch --n <int>" in out and "flag_sl3" in out
    assert gkm(capsys, "catalog", "nope")[0] == 1
    assert gkm(capsys, "catalog", "hirzebruch")[0] == 1
    code, out, _ = gkm(capsys, "catalog", "flag_sl3")
    assert code == 0 and len(parse(out).vertices) == 6


def test_internal_check_exits_2(capsys, monkeypatch):
    from gkmchow import verify
    monkeypatch.setattr(verify, "run", lambda all_checks=False: [("fake", False, "boom")])
    code, out, err = gkm(capsys, "verify")
    assert code == 2 and "FAIL fake" in out and "internal check failed" in err


def test_parse_class_literal(p1):
    c = parse_class_literal('{"e0": 0, "e1": [{"exp":[1],"num":"1","den":"1"}]}', p1)
    assert isinstance(c, PPClass) and c["e1"] == t() and c["e0"].is_zero()
    with pytest.raises(NotMember) as info:
        parse_class_literal('{"e0": 1, "e1": 0}', p1)
    assert "edge" in str(info.value)


def test_parse_class_literal_names_quad_relation(hirz):
    a = '[{"exp":[1],"num":"1","den":"1"}]'
    with pytest.raises(NotMember) as info:
        parse_class_literal(f'{{"x": {a}, "y": {a}, "z": {a}, "t": 0}}', hirz)
    assert "quad_ruled" in info.value.constraint
