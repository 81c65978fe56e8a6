import json

import pytest

from tms import catalog, cli, io
from tms.cli import run

from builders import swapped_pair

DATA = catalog.DATA_DIR


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_mcmullen_six_lines(capsys):
    code, out, _ = call(capsys, "validate", DATA / "mcmullen.tms")
    assert code == 0
    lines = out.strip().splitlines()
    assert [ln.split()[0] for ln in lines] == ["i", "ii", "iii", "iv", "v", "vi"]
    assert all(ln.split()[1] == "pass" for ln in lines)


def test_validate_irreducible_flag(capsys):
    code, out, _ = call(capsys, "validate", DATA / "mcmullen.tms", "--irreducible")
    assert code == 0
    assert len(out.strip().splitlines()) > 6


def test_validate_failure_exit_1(tmp_path, capsys):
    path = tmp_path / "bad.tms"
    io.save(swapped_pair(), path)
    code, out, _ = call(capsys, "validate", path, "--json")
    assert code == 1
    data = json.loads(out)
    assert data["ok"] is False
    failed = [c["condition"] for c in data["checks"] if c["status"] == "fail"]
    assert failed == ["vi"]


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["validate", "no/such/file.tms"],
    ["census", "x.tms", "--max-period", "0"],
    ["render", "mcmullen", "--size", "12by12", "-o", "x.ppm"],
    ["rescale", "mcmullen", "--check", "nope"],
    ["rescale", "nonexistent", "--check", "fixed"],
    ["surgery", "--tower", "cantor", "-o", "x.tms"],
])
def test_usage_errors_exit_2(argv, capsys):
    code = run(argv)
    capsys.readouterr()
    assert code == 2


def test_parse_error_exit_2(tmp_path, capsys):
    path = tmp_path / "broken.tms"
    path.write_text("{ not json")
    code, _, err = call(capsys, "validate", path)
    assert code == 2 and "broken.tms" in err


def test_internal_error_exit_3(monkeypatch, capsys):
    def boom(*a, **k):
        raise RuntimeError("kaboom")
    monkeypatch.setattr(cli, "check_hpcf", boom)
    code, _, err = call(capsys, "validate", DATA / "mcmullen.tms")
    assert code == 3 and "kaboom" in err


def test_bound_surgery_k1(capsys):
    code, out, _ = call(capsys, "bound", DATA / "surgery-k1.tms", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["holds"] is True and data["slack"] >= 0
    code, out, _ = call(capsys, "bound", DATA / "surgery-k1.tms")
    assert "slack" in out and "holds" in out


def test_rescale_surgery_k1_column(capsys):
    code, out, _ = call(capsys, "rescale", "surgery-k1", "--check", "fixed",
                        "--n-list", "1e4,1e6,1e8", "--json")
    assert code == 0
    data = json.loads(out)
    col = [r["sup_distance"] for r in data["rows"] if r["region"] == 0]
    assert col == sorted(col, reverse=True)
    assert col[-1] < 1e-3


def test_rescale_extended(capsys):
    code, out, _ = call(capsys, "rescale", "mcmullen", "--check", "fixed",
                        "--n-list", "1e10,1e12,1e14", "--extended", "--json")
    assert code == 0 and json.loads(out)["ok"]


def test_rescale_tight_bound_fails(capsys):
    code, out, _ = call(capsys, "rescale", "surgery-k1", "--check", "fixed",
                        "--n-list", "1e3", "--bound", "1e-9")
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize("argv", [
    ["validate", DATA / "godillon-3.tms"],
    ["periodic", DATA / "cantor-z3.tms", "--max-period", "3"],
    ["census", DATA / "buried-sierpinski.tms", "--max-period", "3"],
    ["bound", DATA / "quadruply.tms"],
    ["rescale", "mcmullen", "--check", "fixed", "--n-list", "1e4,1e6"],
    ["catalog", "list"],
])
def test_json_and_determinism(argv, capsys):
    code1, out1, _ = call(capsys, *argv, "--json")
    code2, out2, _ = call(capsys, *argv, "--json")
    assert code1 == code2 == 0
    json.loads(out1)
    assert out1 == out2


def test_periodic_tent_fixed_points(capsys):
    code, out, _ = call(capsys, "periodic", DATA / "cantor-z3.tms", "--max-period", "2", "--json")
    assert code == 0
    data = json.loads(out)
    assert [len(r["orbits"]) for r in data["periods"]] == [1, 1]


def test_reduce_writes_scheme(tmp_path, capsys):
    out_path = tmp_path / "r.tms"
    code, out, _ = call(capsys, "reduce", DATA / "mcmullen.tms", "-o", out_path, "--json")
    assert code == 0
    assert json.loads(out)["changed"] is False
    assert io.load(out_path) == catalog.get("mcmullen").scheme


def test_surgery_writes_level(tmp_path, capsys):
    out_path = tmp_path / "k2.tms"
    code, out, _ = call(capsys, "surgery", "--tower", "cantor", "--level", "2", "-o", out_path, "--json")
    assert code == 0
    data = json.loads(out)
    assert data["complex_type_count"] == 2
    code, _, _ = call(capsys, "validate", out_path)
    assert code == 0


def test_surgery_godillon(tmp_path, capsys):
    out_path = tmp_path / "g4.tms"
    code, _, _ = call(capsys, "surgery", "--tower", "godillon", "--degree", "4", "-o", out_path)
    assert code == 0 and out_path.exists()


def test_report_outputs(tmp_path, capsys):
    rep = tmp_path / "rep"
    code, _, _ = call(capsys, "rescale", "surgery-k1", "--check", "fixed",
                      "--n-list", "1e4,1e6,1e8", "--report", rep)
    assert code == 0
    for name in ("errors.csv", "errors.json", "convergence.png"):
        assert (rep / name).stat().st_size > 0
    code, _, _ = call(capsys, "validate", DATA / "mcmullen.tms", "--report", rep)
    assert (rep / "validation.json").exists() and (rep / "tree.png").exists()
    code, _, _ = call(capsys, "census", DATA / "mcmullen.tms", "--max-period", "2", "--report", rep)
    assert (rep / "census.csv").exists()


def test_report_bytes_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        call(capsys, "rescale", "mcmullen", "--check", "fixed", "--n-list", "1e4,1e6", "--report", d)
    assert (a / "errors.csv").read_bytes() == (b / "errors.csv").read_bytes()
    assert (a / "errors.json").read_bytes() == (b / "errors.json").read_bytes()


def test_render_small(tmp_path, capsys):
    img = tmp_path / "m.ppm"
    code, out, _ = call(capsys, "render", "mcmullen", "--size", "64x64", "-o", img, "--json")
    assert code == 0
    data = json.loads(out)
    assert 0 <= data["julia_fraction"] <= 1
    assert img.read_bytes().startswith(b"P6")


def test_render_map_file(tmp_path, capsys):
    mp = tmp_path / "sq.json"
    mp.write_text(json.dumps({"numerator": [0, 0, 1], "denominator": [1]}))
    code, _, _ = call(capsys, "render", mp, "--size", "32x32", "-o", tmp_path / "sq.ppm")
    assert code == 0


def test_scientific_n(tmp_path, capsys):
    code, _, _ = call(capsys, "render", "mcmullen", "--n", "1e6", "--size", "16x16",
                      "-o", tmp_path / "x.ppm")
    assert code == 0
