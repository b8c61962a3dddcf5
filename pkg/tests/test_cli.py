import filecmp
import subprocess
import sys

import pytest
import yaml

from dresg.cli import main
from dresg.config import CONFIG_DIR_ENV
from dresg.results import read_csv


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--rings", "7")
    assert code == 0 and out.strip() == "5040"
    code, out, _ = run_cli(capsys, "enumerate", "--rings", "3", "--list")
    assert out.split("\n")[:3] == ["6", "(1 1 1)", "(1 1 2)"]


def test_enumerate_capacity(capsys):
    code, _, err = run_cli(capsys, "enumerate", "--rings", "11")
    assert code == 2 and "rings" in err


def test_evaluate_single_hop(capsys):
    code, out, _ = run_cli(capsys, "evaluate", "--scenario", "E", "--action", "(1 2 3 4)")
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()]
    assert rows[0] == ["action", "ring", "e_tx", "e_rx", "e", "bottleneck_ring", "e_b"]
    assert len(rows) == 5
    assert all(float(r[3]) == 0.0 for r in rows[1:])


@pytest.mark.parametrize(
    "argv",
    [
        ["evaluate", "--scenario", "E", "--action", "(1 x 3)"],
        ["evaluate", "--scenario", "E", "--action", "(1 3 3 4)"],
        ["evaluate", "--scenario", "E", "--action", "(1 1 1)"],
        ["evaluate", "--scenario", "nowhere", "--action", "(1)"],
        ["oracle", "--scenario", "nowhere"],
        ["learn", "--scenario", "A", "--policy", "eps:1", "--out", "x"],
        ["learn", "--scenario", "A", "--out", "x"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["evaluate", "--scenario", "E"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["compare", "--scenario", "A", "--policy-a", "dec:1"])
    assert info.value.code == 2


def stretched_config(tmp_path, factor):
    data = {
        "network": {"rings": 3, "children_ratio": 2, "max_distance": 1218.72 * factor},
        "policy": {"algorithm": "egreedy", "epsilon_initial": 1.0, "epsilon_schedule": "constant"},
        "run": {"iterations": 8, "repetitions": 3},
    }
    path = tmp_path / "stretched.yaml"
    path.write_text(yaml.safe_dump(data))
    return str(path)


def test_infeasible_exit_3(capsys, tmp_path):
    path = stretched_config(tmp_path, 1.3)
    code, _, err = run_cli(capsys, "evaluate", "--scenario", path, "--action", "(1 2 3)")
    assert code == 3 and "infeasible" in err
    far = stretched_config(tmp_path, 50)
    assert run_cli(capsys, "oracle", "--scenario", far)[0] == 3
    assert run_cli(capsys, "learn", "--config", far, "--out", str(tmp_path / "o"))[0] == 3


def test_oracle(capsys):
    code, out, _ = run_cli(capsys, "oracle", "--scenario", "A")
    assert code == 0
    assert out.splitlines()[0] == "action (1 1 1)"


def test_learn_outputs_and_determinism(capsys, tmp_path):
    argv = ["learn", "--scenario", "A", "--policy", "dec:0.5", "--iterations", "20", "--reps", "15", "--seed", "4"]
    assert run_cli(capsys, *argv, "--out", str(tmp_path / "a"), "--json")[0] == 0
    assert run_cli(capsys, *argv, "--out", str(tmp_path / "b"))[0] == 0
    for name in ("aggregate.csv", "optimal_iteration_cdf.csv", "all_explored_cdf.csv", "repetitions.csv", "manifest.json"):
        assert filecmp.cmp(tmp_path / "a" / name, tmp_path / "b" / name, shallow=False)
    assert (tmp_path / "a" / "aggregate.json").exists()
    reps = read_csv(tmp_path / "a" / "repetitions.csv")
    assert [r["seed"] for r in reps] == list(range(4, 19))


def test_learn_from_config_with_seed_override(capsys, tmp_path, monkeypatch):
    path = stretched_config(tmp_path, 1.0)
    monkeypatch.setenv(CONFIG_DIR_ENV, str(tmp_path))
    code, out, _ = run_cli(capsys, "learn", "--config", "stretched.yaml", "--seed", "100", "--out", str(tmp_path / "o"))
    assert code == 0
    reps = read_csv(tmp_path / "o" / "repetitions.csv")
    assert [r["seed"] for r in reps] == [100, 101, 102]
    assert all(r["all_explored_iteration"] == 6 for r in reps)
    saved = yaml.safe_load((tmp_path / "o" / "config.yaml").read_text())
    assert saved["run"]["seed_base"] == 100


def test_compare(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys, "compare", "--scenario", "A", "--policy-a", "dec:1", "--policy-b", "dec:1/dec:1@definition",
        "--iterations", "12", "--reps", "20", "--out", str(tmp_path),
    )
    assert code == 0
    rows = read_csv(tmp_path / "similarity_ratio.csv")
    assert len(rows) == 12
    assert all(r["ratio"] > 0 for r in rows)


def test_help_documents_flags():
    out = subprocess.run([sys.executable, "-m", "dresg.cli", "learn", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for flag in ("--scenario", "--config", "--policy", "--iterations", "--reps", "--seed", "--out", "--workers", "--json"):
        assert flag in out.stdout


def test_module_exit_code():
    out = subprocess.run([sys.executable, "-m", "dresg.cli", "evaluate", "--scenario", "A", "--action", "((("], capture_output=True, text=True)
    assert out.returncode == 2
