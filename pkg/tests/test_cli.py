import csv

import pytest

from helpers import E1_TEXT
from muca.cli import main
from muca.model import parse_instance, read_instance


@pytest.fixture
def e1(tmp_path):
    path = tmp_path / "e1.muca"
    path.write_text(E1_TEXT)
    return str(path)


def lines(capsys):
    return capsys.readouterr().out.splitlines()


def test_solve(e1, capsys):
    assert main(["solve", e1]) == 0
    out = dict(line.split(" ", 1) for line in lines(capsys))
    assert out["VALUE"] == "9"
    assert out["WINNERS"] == "1 3"
    assert out["OPTIMAL"] == "true"
    assert set(out) == {
        "VALUE",
        "WINNERS",
        "OPTIMAL",
        "NODES",
        "NODE_FRACTION",
        "TIME_MS",
        "TIME_TO_BEST_MS",
        "NODES_TO_BEST",
    }


def test_solve_with_every_bound_and_no_seed(e1, capsys):
    assert main(["solve", "--bounds", "avg,proj,lp", "--no-seed", "--criterion", "euclid-norm", e1]) == 0
    assert "VALUE 9" in lines(capsys)


def test_solve_node_limit_exit_code(tmp_path, capsys):
    path = tmp_path / "big.muca"
    assert main(["gen", "--goods", "6", "--bids", "25", "--seed", "3", "-o", str(path)]) == 0
    assert main(["solve", "--bounds", "none", "--node-limit", "10", str(path)]) == 2
    assert "OPTIMAL false" in lines(capsys)


def test_greedy_explain(e1, capsys):
    assert main(["greedy", "--explain", e1]) == 0
    out = lines(capsys)
    assert out[:2] == ["VALUE 9", "WINNERS 1 3"]
    assert [line.split()[1] for line in out[2:]] == ["1", "0", "3", "2"]


def test_bound(e1, capsys):
    assert main(["bound", "--explain", e1]) == 0
    out = lines(capsys)
    assert out[0] == "avg 9.0"
    assert out[1:3] == ["proj[0] 10.0", "proj[1] 13.0"]
    assert out[3].startswith("lp 9.0") and out[3].endswith("integral=true")
    assert out[4] == "lp_x 0 1 0 1"
    assert out[-1] == "min 9.0"


def test_oracle(e1, capsys):
    assert main(["oracle", e1]) == 0
    assert lines(capsys) == ["VALUE 9", "WINNERS 1 3"]


def test_gen_random_is_reproducible(tmp_path):
    a, b = tmp_path / "a.muca", tmp_path / "b.muca"
    for p in (a, b):
        assert main(["gen", "--goods", "4", "--bids", "8", "--seed", "11", "--cap", "2:3", "-o", str(p)]) == 0
    assert a.read_text() == b.read_text()
    inst = read_instance(a)
    assert inst.n == 4 and len(inst.bids) == 8 and all(2 <= k <= 3 for k in inst.caps)


def test_gen_special_kinds(tmp_path, capsys):
    edges = tmp_path / "k3.txt"
    edges.write_text("0 1\n1 2\n0 2\n")
    out = tmp_path / "k3.muca"
    assert main(["gen", "graph", "--edges", str(edges), "-o", str(out)]) == 0
    assert len(read_instance(out).bids) == 3

    prefix = tmp_path / "adv"
    assert main(["gen", "adversarial", "--caps", "2,2", "-o", str(prefix)]) == 0
    assert len(read_instance(f"{prefix}-II.muca").bids) == 5

    assert main(["gen", "counterexample", "--k", "4"]) == 0
    inst = parse_instance(capsys.readouterr().out)
    assert inst.caps == (4, 1)


def test_bench(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--goods", "3", "--bids", "5,6", "--trials", "2", "-o", str(out)]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 1 + 4 + 2


def test_usage_errors_exit_1(tmp_path, e1, capsys):
    bad = tmp_path / "bad.muca"
    bad.write_text("MUCA 1\nGOODS 1\nCAPS 1\nBIDS 1\nBID 2 1\n")
    assert main(["solve", str(bad)]) == 1
    assert "line 5" in capsys.readouterr().err
    assert main(["solve", str(tmp_path / "missing.muca")]) == 1
    with pytest.raises(SystemExit) as err:
        main(["solve", "--criterion", "nope", e1])
    assert err.value.code == 1
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 1
    assert main(["gen"]) == 1


def test_help_exits_zero(capsys):
    with pytest.raises(SystemExit) as err:
        main(["solve", "--help"])
    assert err.value.code == 0
