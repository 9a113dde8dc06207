import subprocess
import sys

import pytest

from pdresilience.cli import main


@pytest.fixture
def game(tmp_path, capsys):
    def make(*args):
        out = tmp_path / (args[0] + "-".join(args[1:]) + ".game")
        assert main(["generate", *args, "--out", str(out)]) == 0
        capsys.readouterr()
        return str(out)
    return make


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_fig1(capsys):
    code, out, _ = run(capsys, "generate", "fig1")
    assert code == 0
    assert out.splitlines()[0] == "game onecounter"
    assert sum(line.startswith("state ") for line in out.splitlines()) == 3


def test_resilience_fig1(capsys, game):
    code, out, _ = run(capsys, "resilience", game("fig1"))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "omega+1!exact"
    assert lines[1].startswith("h(P): ")


def test_resilience_primorial(capsys, game):
    code, out, _ = run(capsys, "resilience", game("primorial-ocs", "2"))
    assert code == 0 and out.split("!")[0] == "6"


def test_resilience_k_cap_unknown(capsys, game):
    code, out, _ = run(capsys, "resilience", game("primorial-ocs", "2"), "--k-cap", "3")
    assert code == 3 and out.startswith("unknown")


@pytest.mark.parametrize("alpha,answer", [("3", "yes"), ("omega+1", "yes"), ("omega", "yes")])
def test_check_fig1(capsys, game, alpha, answer):
    code, out, _ = run(capsys, "check", game("fig1"), "--alpha", alpha)
    assert code == 0 and out.startswith(answer + "!")


def test_check_primorial_no(capsys, game):
    code, out, _ = run(capsys, "check", game("primorial-ocs", "2"), "--alpha", "7")
    assert (code, out.strip()) == (0, "no!exact")


def test_check_bad_alpha(capsys, game):
    code, _, err = run(capsys, "check", game("fig1"), "--alpha", "many")
    assert code == 2 and "alpha" in err


def test_strategy_and_simulate(capsys, game, tmp_path):
    g = game("fig1")
    sfile = tmp_path / "s.txt"
    code, _, err = run(capsys, "strategy", g, "--height", "4", "--out", str(sfile))
    assert code == 0 and "omega+1" in err
    text = sfile.read_text()
    assert "q_I _ -> q_I A._" in text
    code, out, _ = run(capsys, "simulate", g, str(sfile), "--disturbances", "2", "--runs", "20",
                       "--steps", "3")
    assert code == 0
    wins, losses = int(out.split()[1]), int(out.split()[3])
    assert losses == 0 and wins == 20


def test_strategy_graph_and_verify(capsys, game, tmp_path):
    g = game("primorial-ocs", "1")
    gfile = tmp_path / "graph.txt"
    code, out, _ = run(capsys, "strategy-graph", g, "--k", "3", "--out", str(gfile))
    assert code == 0 and out.strip() == "exists!exact"
    code, out, _ = run(capsys, "strategy-graph", g, "--k", "3", "--verify", str(gfile))
    assert code == 0 and out.strip() == "valid"
    broken = gfile.read_text() + "i _ 9 0\n"  # mu_r out of range at the root
    gfile.write_text(broken)
    code, out, _ = run(capsys, "strategy-graph", g, "--k", "3", "--verify", str(gfile))
    assert code == 2 and "invalid" in out


def test_strategy_graph_none(capsys, game):
    code, out, _ = run(capsys, "strategy-graph", game("primorial-ocs", "1"), "--k", "2")
    assert code == 0 and out.startswith("none!")


def test_strategy_graph_needs_one_counter(capsys, game):
    code, _, err = run(capsys, "strategy-graph", game("binary-pds", "1"), "--k", "2")
    assert code == 2 and "one-counter" in err


def test_reach_optimal(capsys, game):
    code, out, _ = run(capsys, "reach-optimal", game("fig1"))
    assert code == 2
    code, out, err = run(capsys, "reach-optimal", game("fig3"))
    assert code == 2 and "disturbance" in err


def test_reach_optimal_value(capsys, tmp_path):
    p = tmp_path / "r.game"
    p.write_text("game onecounter reach\nstack A\nstate a owner=0 initial\nstate b owner=0 target\n"
                 "edge a _ -> b eps\nedge a A -> b A\nedge b _ -> b eps\nedge b A -> b A\n")
    code, out, _ = run(capsys, "reach-optimal", str(p))
    assert code == 0 and out.strip() == "1!exact"


def test_oracle_dump(capsys, game):
    code, out, _ = run(capsys, "oracle", game("fig1"), "--truncate", "3", "--budget", "2")
    assert code == 0
    rows = dict((" ".join(line.split()[:2]), line.split()[2]) for line in out.splitlines())
    assert rows["q_1 A._"] == "1" and rows["q_2 _"] == "0"
    assert rows["q_1 A.A.A._"] == ">2" and rows["q_I _"] == "omega+1"


def test_random_family(capsys):
    code, out, _ = run(capsys, "generate", "random", "7", "3", "--pushdown")
    assert code == 0 and out.startswith("game pushdown")


@pytest.mark.parametrize("argv", [
    ["generate", "nonsense"],
    ["generate", "primorial-ocs"],
    ["generate", "random", "1"],
    ["resilience", "/nonexistent/file.game"],
    ["strategy", "x.game", "--height", "-1"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error")


def test_bad_file_reports_line(capsys, tmp_path):
    p = tmp_path / "bad.game"
    p.write_text("game pushdown\nstack A\nstate p owner=1 initial\nedge p _ -> p eps\n"
                 "edge p A -> p A\ndedge p A -> p eps\n")
    code, _, err = run(capsys, "resilience", str(p))
    assert code == 2 and "line 6" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pdresilience", "generate", "fig1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("game onecounter")
