import json

import pytest

from dptangle import catalog, cli, fileformat, moves
from dptangle.directions import InvariantReport


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_report_summary_line(capsys):
    code, out, _ = run(capsys, "report", "E5")
    assert code == 0
    assert out.splitlines()[0] == "class: cover; subclass: full-polycatenane; type: ∞"


def test_structured_report_parses(capsys):
    code, out, _ = run(capsys, "report", "IC-a", "--format", "structured", "--policy", "crossing")
    assert code == 0
    r = InvariantReport.from_json(out)
    assert r.name == "IC-a" and r.policy == "crossing"


def test_transform_then_report(capsys, tmp_path):
    path = tmp_path / "twisted.json"
    assert run(capsys, "transform", "E1", "--rebase", "1 0 1 1", "-o", str(path))[0] == 0
    code, out, _ = run(capsys, "report", str(path), "--format", "structured")
    data = json.loads(out)
    assert data["directions"] == ["(1,1)"] and data["direction_count"] == 1


E1_STRAND = sorted(catalog.get("E1").edge_map or catalog.get("E1").loop_map)[0]


@pytest.mark.parametrize("name, flag, value, crossings", [
    ("E1", "--cover", "2 0 0 1", 0),
    ("E4", "--gauge", "c1=1,0", 4),
    ("E1", "--move", f"R1+:{E1_STRAND}:+1:over", 1),
])
def test_transforms_write_valid_files(capsys, name, flag, value, crossings):
    code, out, _ = run(capsys, "transform", name, flag, value)
    assert code == 0
    assert len(fileformat.loads(out).diagram.crossings) == crossings


def test_transform_errors(capsys):
    assert run(capsys, "transform", "E1", "--cover", "1 2 2 4")[0] == 3
    assert run(capsys, "transform", "E1", "--rebase", "0 1 1 0")[0] == 3
    assert run(capsys, "transform", "E1", "--rebase", "0 1 1 0", "--allow-reflection")[0] == 0
    assert run(capsys, "transform", "E3", "--move", "R2-:c1,c2")[0] == 3
    assert run(capsys, "transform", "E1", "--rebase", "1 2 3")[0] == 1
    assert run(capsys, "transform", "E1", "--move", "nonsense")[0] == 1
    assert run(capsys, "transform", "E4", "--gauge", "c1")[0] == 1


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["transform", "E1", "--rebase", "1 0 0 1", "--cover", "1 0 0 1"])
    assert exc.value.code == 1


def test_input_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": ')
    code, _, err = run(capsys, "report", str(bad))
    assert code == 2 and "line 1" in err
    code, _, err = run(capsys, "report", "no-such-motif")
    assert code == 2 and "no-such-motif" in err


def test_validate(capsys, tmp_path):
    assert run(capsys, "validate", "E4") == (0, "E4: ok\n", "")
    d = json.loads(fileformat.dumps(catalog.get("E4")))
    d["edges"] = d["edges"][1:]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(d))
    code, _, err = run(capsys, "validate", str(path))
    assert code == 2 and "unbound port" in err


def test_axis(capsys, tmp_path):
    code, out, _ = run(capsys, "axis", "IC-a")
    assert (code, out) == (0, "(3,0)-torus link, 2 trivial knots\n")
    path = tmp_path / "a.svg"
    assert run(capsys, "axis", "IC-a", "--svg", str(path))[0] == 0
    assert path.read_text().startswith("<?xml")
    code, out, _ = run(capsys, "axis", "IC-a", "--svg", "-")
    assert out == path.read_text()


def test_catalog_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "list")
    lines = out.splitlines()
    assert lines[0] == f"catalog version {catalog.CATALOG_VERSION}"
    assert len(lines) == 1 + len(catalog.names())
    code, out, _ = run(capsys, "catalog", "show", "E4")
    assert fileformat.loads(out).name == "E4"
    assert run(capsys, "catalog", "show", "nope")[0] == 2
    assert run(capsys, "catalog", "show")[0] == 1
    assert run(capsys, "catalog", "export", str(tmp_path))[0] == 0
    assert sorted(p.stem for p in tmp_path.glob("*.json")) == sorted(catalog.names())
    assert (tmp_path / "E4.json").read_text() == fileformat.dumps(catalog.get("E4"), catalog.source("E4"))


def test_fuzz_passes(capsys):
    code, out, _ = run(capsys, "fuzz", "E4", "--walks", "3", "--length", "5", "--seed", "7")
    assert code == 0
    assert out.splitlines() == ["E4: 3/3 walks passed", "total: 3/3 walks passed"]
    assert run(capsys, "fuzz", "E4", "--walks", "0")[0] == 1


def test_fuzz_failure_prints_a_reproducer(capsys, monkeypatch):
    def broken(diagram, length, seed, policy="linking"):
        return moves.FuzzResult(diagram, seed != 8, seed, length, failures=["step 0 (x): changed"])

    monkeypatch.setattr(cli, "fuzz_walk", broken)
    code, out, _ = run(capsys, "fuzz", "E4", "--walks", "2", "--length", "4", "--seed", "7")
    assert code == 4
    assert "E4: 1/2 walks passed" in out
    assert "reproduce: dptangle fuzz E4 --walks 1 --length 4 --seed 8 --policy linking" in out
