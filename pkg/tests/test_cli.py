import json
import subprocess
import sys

import pytest

from modaltopo.cli import main
from modaltopo.glue import assignment_to_json, default_assignment
from modaltopo.kripke import Frame, cluster_frame
from modaltopo.topo import indiscrete, sierpinski


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_frame_commands(files, capsys):
    f = files("c2.json", cluster_frame(2).to_json())
    code, out, _ = run(capsys, "frame", "check", "--file", f, "--n", "1")
    assert code == 1 and "countermodel" in out
    code, out, _ = run(capsys, "frame", "check", "--file", f, "--n", "2")
    assert code == 0 and out.startswith("valid")
    code, out, _ = run(capsys, "frame", "check", "--file", f, "--axiom", "4", "--json")
    assert code == 0 and json.loads(out)["valid"] is True
    code, out, _ = run(capsys, "frame", "classify", "--file", f, "--json")
    data = json.loads(out)
    assert code == 0 and data["circumference"] == 2
    assert data["clusters"] == [{"members": [0, 1], "kind": "nondegenerate-proper", "final": True}]
    code, out, _ = run(capsys, "frame", "validate", "--file", f)
    assert code == 0 and "transitive=True" in out


def test_frame_input_errors(files, capsys):
    dup = files("dup.json", {"points": 2, "edges": [[0, 1], [0, 1]]})
    code, _, err = run(capsys, "frame", "validate", "--file", dup)
    assert code == 2 and "duplicate" in err
    code, _, err = run(capsys, "frame", "validate", "--file", "/nonexistent.json")
    assert code == 2
    ok = files("ok.json", {"points": 1, "edges": []})
    code, _, err = run(capsys, "frame", "check", "--file", ok, "--formula", "p &")
    assert code == 2 and "position" in err
    code, _, _ = run(capsys, "frame", "check", "--file", ok, "--axiom", "S5")
    assert code == 2
    code, _, _ = run(capsys, "frame", "bogus")
    assert code == 2
    nontrans = files("nt.json", {"points": 3, "edges": [[0, 1], [1, 2]]})
    code, _, err = run(capsys, "frame", "classify", "--file", nontrans)
    assert code == 0


def test_space_commands(files, capsys):
    s = files("ind.json", indiscrete(2).to_json())
    code, out, _ = run(capsys, "space", "check", "--file", s, "--axiom", "4")
    assert code == 1
    code, out, _ = run(capsys, "space", "check", "--file", s, "--axiom", "4", "--semantics", "c")
    assert code == 0
    code, out, _ = run(capsys, "space", "check", "--file", s, "--axiom", "M", "--json")
    assert code == 0 and json.loads(out)["valid"]
    code, out, _ = run(capsys, "space", "classify", "--file", s, "--json")
    data = json.loads(out)
    assert data["is_crowded"] and not data["is_TD"] and not data["OI"] and data["HI3"]
    bad = files("bad.json", {"points": 3, "opens": [[0], [1]], "complete": False})
    code, _, err = run(capsys, "space", "validate", "--file", bad)
    assert code == 2
    code, out, _ = run(capsys, "space", "validate", "--file", files("s.json", sierpinski().to_json()))
    assert code == 0 and "3 open sets" in out


def test_glue_command(files, capsys):
    frame = Frame.from_edges(2, [(0, 0), (0, 1), (1, 1)])
    f = files("f.json", frame.to_json())
    code, out, _ = run(capsys, "glue", "--file", f, "--json")
    data = json.loads(out)
    assert code == 0 and data["d_morphism"] and data["points"] == 4
    a = files("a.json", assignment_to_json(default_assignment(frame, 3)))
    code, out, _ = run(capsys, "glue", "--file", f, "--assignment", a)
    assert code == 0 and "6 points" in out
    code, _, err = run(capsys, "glue", "--file", f, "--assignment", "default:1")
    assert code == 2


def test_countermodel_command(capsys):
    code, out, _ = run(capsys, "countermodel", "--axiom", "Loeb", "--n", "1", "--max-size", "1")
    assert code == 1 and "countermodel on 1 points" in out
    code, out, _ = run(capsys, "countermodel", "--axiom", "C1", "--n", "1", "--max-size", "4")
    assert code == 0 and "no countermodel up to 4 points" in out
    code, out, _ = run(capsys, "countermodel", "--axiom", "4", "--mode", "d", "--max-size", "3",
                       "--json")
    assert code == 1 and json.loads(out)["structure"]["points"] == 2
    code, _, err = run(capsys, "countermodel", "--axiom", "4", "--max-size", "9")
    assert code == 3 and "cap" in err


def test_census_command(capsys):
    code, out, _ = run(capsys, "census", "--max-size", "2")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 1 + 5
    code, out, _ = run(capsys, "census", "--max-size", "2", "--json")
    assert len(json.loads(out)) == 5
    code, _, _ = run(capsys, "census", "--max-size", "5")
    assert code == 3


def test_suite_command(capsys):
    code, out, _ = run(capsys, "suite", "list")
    assert code == 0 and "esakia-td" in out.split()
    code, out, _ = run(capsys, "suite", "run", "crowded-td-identities", "--max-size", "4")
    assert code == 0 and "VACUOUS" in out
    code, out, _ = run(capsys, "suite", "run", "esakia-td", "--json", "--seed", "5")
    data = json.loads(out)
    assert code == 0 and data[0]["verdict"] == "PASS" and data[0]["seed"] == 5
    code, _, _ = run(capsys, "suite", "run", "unknown")
    assert code == 2


def test_entry_point():
    out = subprocess.run([sys.executable, "-m", "modaltopo.cli", "suite", "list"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "gluing-shape" in out.stdout
