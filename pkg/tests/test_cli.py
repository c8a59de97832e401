import io
import subprocess
import sys

import pytest

from chipfire.cli import main
from chipfire.firing import ChipConfig
from chipfire.line import reproduce_counterexample
from chipfire.notation import parse_graph
from chipfire.posets import verify_join_theorem


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("graph 4\nedge 0 1 1\nedge 1 2 1\nedge 2 3 1\nedge 0 2 1\nsink 3\n")
    return str(path)


def test_stabilize_line():
    code, out = run("stabilize", "--line", "--config", "0:5")
    assert code == 0
    assert out.splitlines() == ["final: 11_1_11", "odometer: -1:1 0:3 1:1", "moves: 5"]


def test_stabilize_policies_agree():
    outs = {run("stabilize", "--line", "--config", "_8_", "--policy", p, "--seed", "3")[1]
            for p in ("lowest", "highest", "random")}
    assert len(outs) == 1


def test_stabilize_graph(graph_file):
    code, out = run("stabilize", "--graph", graph_file, "--config", "0:4 1:1")
    assert code == 0 and out.startswith("final: ")


def test_step_cap_exit(tmp_path):
    path = tmp_path / "tri.txt"
    path.write_text("graph 3\nedge 0 1 1\nedge 1 2 1\nedge 0 2 1\n")
    code, _ = run("stabilize", "--graph", str(path), "--config", "0:4", "--step-cap", "100")
    assert code == 1


def test_config_poset_output(capsys):
    code, out = run("config-poset", "--line", "--config", "0:5")
    assert code == 0
    assert out.startswith("# configurations: 9 elements, 11 covers")
    assert "configurations: 9, covers: 11" in capsys.readouterr().err


def test_config_poset_dot_is_stable():
    a = run("config-poset", "--line", "--config", "0:6", "--format", "dot")[1]
    b = run("config-poset", "--line", "--config", "0:6", "--format", "dot")[1]
    assert a == b and a.startswith('digraph "configurations"')


def test_move_poset_oracle(capsys, graph_file):
    code, out = run("move-poset", "--line", "--config", "0:6", "--oracle")
    assert code == 0
    assert out.startswith("# moves: 14 elements")
    assert "oracle: agree" in capsys.readouterr().err
    code, _ = run("move-poset", "--graph", graph_file, "--config", "0:3 2:2", "--oracle")
    assert code == 0


def test_join_irreducibles_cmd():
    code, out = run("join-irreducibles", "--line", "--config", "0:5")
    assert code == 0
    assert sorted(out.split()) == sorted(["_5_", "1_3_1", "10_3_01", "11_0_3", "3_0_11"])


def test_check_distributive():
    code, out = run("check", "--distributive", "--line", "--config", "0:6")
    assert (code, out) == (0, "distributive: true\n")
    code, out = run("check", "--distributive", "--lattice", "--uld", "--line", "--config", "0:5")
    assert code == 1
    assert out.splitlines()[0] == "lattice: true"
    assert out.splitlines()[1] == "distributive: false"
    assert out.splitlines()[2].startswith("witness: x=")
    assert "uld: true" in out


def test_check_upper_orientation():
    code, out = run("check", "--uld", "--uld-orientation", "upper", "--line", "--config", "0:5")
    assert code == 1 and out.startswith("uld: false")


def test_verify_join_theorem(graph_file):
    code, out = run("verify", "join-theorem", "--line", "--config", "0:6")
    assert code == 0 and out.splitlines()[-1] == "join-theorem: pass"
    code, out = run("verify", "join-theorem", "--graph", graph_file, "--config", "0:5")
    with open(graph_file) as fh:
        report = verify_join_theorem(parse_graph(fh.read()), ChipConfig({0: 5}))
    assert code == (0 if report.passed else 1)


def test_verify_endgame():
    code, out = run("verify", "endgame", "--m-max", "4")
    assert code == 0
    assert out.splitlines()[-1] == "endgame: pass"
    assert "m=4 (n=8): 70 configurations, 16 moves, 70 ideals" in out


def test_repro_counterexample():
    code, out = run("repro", "counterexample", "--n", "5")
    assert code == 0
    t = reproduce_counterexample(5)
    assert out.splitlines() == t.lines()
    assert "x ∧ (y ∨ z) = 10_3_01" in out
    code, out = run("repro", "counterexample", "--n", "8")
    assert code == 0 and "(x ∧ y) ∨ (x ∧ z) = 21_1_31" in out


def test_repro_invalid_extension():
    code, out = run("repro", "invalid-extension", "--n", "5")
    assert code == 0
    assert "invalid extension: (0,0,0,1,-1) fails at index 2" in out


def test_labeled_run():
    code, out = run("labeled-run", "--n", "6", "--seed", "2")
    assert code == 0 and out.splitlines()[-1] == "sorted: true"
    assert run("labeled-run", "--n", "6", "--seed", "2") == (code, out)


@pytest.mark.parametrize("argv", [
    [],
    ["stabilize", "--line"],
    ["stabilize", "--line", "--config", "0:-1"],
    ["stabilize", "--line", "--config", "oops"],
    ["stabilize", "--graph", "/nonexistent/file", "--config", "0:1"],
    ["check", "--line", "--config", "0:5"],
    ["verify", "join-theorem"],
    ["verify", "endgame"],
    ["repro", "counterexample", "--n", "6"],
    ["labeled-run", "--n", "5"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_bad_graph_config(graph_file):
    assert run("stabilize", "--graph", graph_file, "--config", "7:1")[0] == 2
    assert run("stabilize", "--graph", graph_file, "--config", "_3_")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "chipfire", "stabilize", "--line", "--config", "_6_"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("final: 111_0_111")
