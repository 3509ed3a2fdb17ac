import json

import pytest

from voronoi_bounds.cache import Cache, cache_key
from voronoi_bounds.cli import bounds_main, cyclo_main, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_voronoi_enumerate_n4(capsys, tmp_path):
    code, out, _ = run(capsys, "voronoi", "enumerate", "--n", "4", "--cache-dir", str(tmp_path))
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 2 and data["provenance"] == "exact"
    assert sorted(c["pair_count"] for c in data["classes"]) == [10, 12]


def test_cache_hit_is_byte_identical(capsys, tmp_path):
    args = ("voronoi", "enumerate", "--n", "3", "--cache-dir", str(tmp_path))
    _, first, _ = run(capsys, *args)
    entries = list(tmp_path.rglob("*.json"))
    assert len(entries) == 1
    _, second, _ = run(capsys, *args)
    _, third, _ = run(capsys, *args[:-2], "--no-cache")
    assert first == second == third


def test_corrupt_cache_entry_is_recomputed(capsys, tmp_path):
    args = ("voronoi", "enumerate", "--n", "2", "--cache-dir", str(tmp_path))
    _, first, _ = run(capsys, *args)
    entry = next(tmp_path.rglob("*.json"))
    entry.write_text("{not json")
    code, second, _ = run(capsys, *args)
    assert code == 0 and first == second
    assert json.loads(entry.read_text())["payload"]


def test_cache_object(tmp_path):
    calls = []
    c = Cache(tmp_path)

    def produce():
        calls.append(1)
        return "payload"

    assert c.get_or_compute("k", {"a": 1}, produce) == "payload"
    assert c.get_or_compute("k", {"a": 1}, produce) == "payload"
    assert len(calls) == 1 and c.hits == 1
    off = Cache(tmp_path, enabled=False)
    off.get_or_compute("k", {"a": 1}, produce)
    assert len(calls) == 2
    assert cache_key("k", {"a": 1}) != cache_key("k", {"a": 2})


def test_bounds_v5(capsys):
    code, out, _ = run(capsys, "bounds", "v", "--n", "5")
    assert code == 0
    data = json.loads(out)
    assert data["provenance"] == "certified-precision"
    assert abs(float(data["lnln"]) / 1.4e5 - 1) < 0.1


def test_bounds_examples(capsys):
    assert json.loads(run(capsys, "bounds", "a", "--n", "3")[1])["a"] == "21"
    assert json.loads(run(capsys, "bounds", "c", "--k", "1", "--n", "2")[1])["c"] == "288"
    assert json.loads(run(capsys, "bounds", "f", "--k", "2", "--n", "4")[1])["f"] == "105"
    code, out, _ = run(capsys, "bounds", "lemma2", "--m", "6", "--check")
    assert code == 0 and json.loads(out)["ok"]


def test_cyclo_bernoulli(capsys):
    code, out, _ = run(capsys, "cyclo", "bernoulli", "--n", "3")
    assert code == 0 and json.loads(out)["B_n"] == "0"
    code, out, _ = run(capsys, "cyclo", "bernoulli", "--n", "12", "--check")
    data = json.loads(out)
    assert code == 0 and data["N_n"] == "691" and data["ok"]


def test_cyclo_other_ops(capsys, tmp_path):
    data = json.loads(run(capsys, "cyclo", "irregular", "--max-p", "200", "--threads", "2")[1])
    assert data["pairs"][0] == [37, 32]
    store = tmp_path / "c.jsonl"
    code, out, _ = run(capsys, "cyclo", "vandiver", "--p", "37", "--k", "32", "--store", str(store))
    assert code == 0 and json.loads(out)["certificates"][0]["verdict"] == "component_zero"
    assert json.loads(store.read_text().splitlines()[0])["p"] == 37
    assert json.loads(run(capsys, "cyclo", "kurihara", "--p", "37", "--n", "5")[1])["component"] == "possibly_nonzero"
    assert json.loads(run(capsys, "cyclo", "l0", "--p", "37", "--n", "5")[1])["l0_mod_p"] == 0
    assert json.loads(run(capsys, "cyclo", "h2", "--p", "691", "--n", "12")[1])["order"] == "691"


def test_exit_codes(capsys):
    assert run(capsys, "bogus")[0] == 64
    assert run(capsys)[0] == 64
    assert run(capsys, "voronoi", "enumerate")[0] == 64
    assert run(capsys, "bounds", "v", "--n", "5", "--digits", "10")[0] == 64
    assert run(capsys, "cyclo", "irregular", "--p", "91")[0] == 1
    assert run(capsys, "voronoi", "enumerate", "--n", "9", "--no-cache")[0] == 1
    assert run(capsys, "bounds", "lemma2", "--m", "3")[0] == 1


def test_text_format(capsys):
    code, out, _ = run(capsys, "cyclo", "h2", "--p", "691", "--n", "12", "--format", "text")
    assert code == 0 and "order: 691" in out


def test_complex_and_torsion_bound(capsys, tmp_path):
    path = tmp_path / "c3.json"
    code, _, _ = run(capsys, "voronoi", "complex", "--n", "3", "--group", "sl", "--out", str(path))
    assert code == 0
    code, out, _ = run(capsys, "torsion", "bound", "--complex", str(path), "--k", "5", "--check")
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["homology"]["betti"] == 1
    code, out, _ = run(capsys, "voronoi", "complex", "--n", "2", "--format", "text")
    assert code == 0 and out.split()[0] == "2"


def test_torsion_snf(capsys, tmp_path):
    f = tmp_path / "m.mtx"
    f.write_text("2 2 4\n1 1 2\n1 2 4\n2 1 6\n2 2 8\n")
    code, out, _ = run(capsys, "torsion", "snf", str(f), "--check", "--seed", "7")
    data = json.loads(out)
    assert code == 0 and data["invariant_factors"] == ["2", "4"] and data["ok"]
    g = tmp_path / "m.json"
    g.write_text("[[2, 4], [6, 8]]")
    assert json.loads(run(capsys, "torsion", "snf", str(g))[1])["torsion_order"] == "8"


def test_voronoi_check_mode(capsys):
    code, out, _ = run(capsys, "voronoi", "enumerate", "--n", "3", "--check")
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["check"]["neighbor_symmetric"]


def test_seed_determinism(capsys, tmp_path):
    f = tmp_path / "m.json"
    f.write_text("[[3, 1], [0, 6]]")
    a = run(capsys, "torsion", "snf", str(f), "--check", "--seed", "11")[1]
    b = run(capsys, "torsion", "snf", str(f), "--check", "--seed", "11")[1]
    assert a == b


def test_prefixed_entry_points(capsys):
    assert bounds_main(["s", "--n", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["s"] == 15
    assert cyclo_main(["bernoulli", "--n", "2"]) == 0


@pytest.mark.parametrize("sub", ["voronoi", "torsion", "cyclo"])
def test_missing_operation_is_usage_error(capsys, sub):
    assert run(capsys, sub)[0] == 64
