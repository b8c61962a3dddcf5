import filecmp
import json

import numpy as np
import pytest

from dresg.actions import HopsCombination
from dresg.bandit import PolicyConfig
from dresg.config import preset_scenario
from dresg.energy import evaluate_action
from dresg.harness import ExperimentConfig, run_experiment
from dresg.results import (
    AGGREGATE_COLUMNS,
    CDF_COLUMNS,
    REPETITION_COLUMNS,
    REPORT_COLUMNS,
    read_csv,
    report_csv,
    write_experiment,
    write_ratio,
)
from make_golden import CASES, GOLDEN, build


@pytest.fixture(scope="module")
def fresh(tmp_path_factory):
    out = tmp_path_factory.mktemp("golden")
    build(out)
    return out


@pytest.mark.parametrize(
    "rel",
    sorted(str(p.relative_to(GOLDEN)) for p in GOLDEN.rglob("*") if p.is_file()),
)
def test_matches_golden(fresh, rel):
    assert filecmp.cmp(fresh / rel, GOLDEN / rel, shallow=False), rel


@pytest.mark.parametrize("case", sorted(CASES))
def test_golden_csvs_parse(case):
    agg = read_csv(GOLDEN / case / "aggregate.csv")
    assert list(agg[0]) == AGGREGATE_COLUMNS
    assert [row["iteration"] for row in agg] == list(range(1, CASES[case][2] + 1))
    for name in ("optimal_iteration_cdf", "all_explored_cdf"):
        rows = read_csv(GOLDEN / case / f"{name}.csv")
        if rows:
            assert list(rows[0]) == CDF_COLUMNS
            fractions = [r["fraction"] for r in rows]
            assert fractions == sorted(fractions) and fractions[-1] <= 1.0
    reps = read_csv(GOLDEN / case / "repetitions.csv")
    assert list(reps[0]) == REPETITION_COLUMNS
    for r in reps:
        assert r["all_explored_iteration"] == "never" or isinstance(r["all_explored_iteration"], int)
        HopsCombination.parse(r["best_action"])
    manifest = json.loads((GOLDEN / case / "manifest.json").read_text())
    assert manifest["seeds"] == [r["seed"] for r in reps]


def test_report_csv_parses_and_has_enough_digits():
    rows = read_csv(GOLDEN / "report_E_1134.csv")
    assert list(rows[0]) == REPORT_COLUMNS
    assert [r["ring"] for r in rows] == [1, 2, 3, 4]
    s = preset_scenario("E")
    rep = evaluate_action(s.network, HopsCombination.parse("(1 1 3 4)"), s.profile, s.link, s.packet)
    for row, tx, rx in zip(rows, rep.e_tx, rep.e_rx):
        assert row["e_tx"] == pytest.approx(tx, rel=1e-11)
        assert row["e_rx"] == pytest.approx(rx, rel=1e-11)
        assert row["e_b"] == pytest.approx(rep.e_b, rel=1e-11)
        assert row["action"] == "(1 1 3 4)"


def test_single_hop_report_has_zero_rx():
    s = preset_scenario("R5c3")
    rep = evaluate_action(s.network, HopsCombination.parse("(1 2 3 4 5)"), s.profile, s.link, s.packet)
    rows = [line.split(",") for line in report_csv(rep).splitlines()[1:]]
    assert all(float(r[3]) == 0.0 for r in rows)


def test_written_values_match_log(tmp_path):
    cfg = ExperimentConfig(preset_scenario("A"), PolicyConfig.parse("dec:0.5"), 25, 30, 1)
    log = run_experiment(cfg)
    files = write_experiment(log, tmp_path, json_mirror=True)
    agg = read_csv(files["aggregate"])
    np.testing.assert_allclose([r["mean_historic"] for r in agg], log.mean_historic(), rtol=1e-12)
    np.testing.assert_allclose([r["std_historic"] for r in agg], log.historic.std(axis=0, ddof=1), rtol=1e-12)
    mirror = json.loads(files["aggregate_json"].read_text())
    assert mirror["mean_e_b"] == log.mean_e_b().tolist()
    reps = read_csv(files["repetitions"])
    assert [r["optimal_iteration"] for r in reps] == log.optimal_iteration.tolist()


def test_ratio_csv(tmp_path):
    s = preset_scenario("A")
    plain = run_experiment(ExperimentConfig(s, PolicyConfig.parse("dec:1"), 10, 5))
    sim = run_experiment(ExperimentConfig(s, PolicyConfig.parse("dec:1/dec:0"), 10, 5))
    ratio = plain.mean_historic() / sim.mean_historic()
    rows = read_csv(write_ratio(plain, sim, ratio, tmp_path / "sub" / "ratio.csv"))
    np.testing.assert_allclose([r["ratio"] for r in rows], ratio, rtol=1e-12)
