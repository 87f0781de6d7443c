import json
from fractions import Fraction

import pytest

from lightchaos.harness import cli
from lightchaos.harness.config import RunConfig, load_config
from lightchaos.harness.registry import REGISTRY, get_experiment, list_experiments
from lightchaos.harness.report import (
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_UNKNOWN,
    parse_report,
    render_report,
    run_experiment,
    verify_claims,
)


def test_registry_listing_is_sorted():
    names = [s.name for s in list_experiments()]
    assert names == sorted(REGISTRY) and "ex3_4" in names


def test_unknown_experiment():
    with pytest.raises(KeyError):
        get_experiment("nope")
    assert cli.main(["reproduce", "nope"]) == 64


def test_json_round_trip():
    rep = run_experiment("ex3_4", RunConfig(seed=3))
    data = render_report(rep)
    back = parse_report(data)
    assert render_report(back) == data
    assert json.loads(data)["seed"] == 3


def test_markdown_banner_for_flagged():
    md = render_report(run_experiment("ex3_7"), "md").decode()
    assert "DISCREPANCY" in md and "Example 3.7" in md


def test_exit_code_contract():
    rep = run_experiment("ex3_4")
    assert verify_claims([rep]) == EXIT_OK
    rep.checks[0] = dict(rep.checks[0], expected="FAILS", match=False)
    assert verify_claims([rep]) == EXIT_MISMATCH
    small = run_experiment("ex3_5", RunConfig().with_overrides(k_max=1))
    assert verify_claims([small]) == EXIT_UNKNOWN


def test_config_file_and_overrides(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("seed: 5\nk_max: 8\ndelta: 1/4\n")
    cfg = load_config(p, seed=9)
    assert cfg.seed == 9 and cfg.budget.k_max == 8 and cfg.delta == Fraction(1, 4)
    with pytest.raises(KeyError):
        RunConfig().with_overrides(bogus=1)


def test_cli_check_and_list(capsys):
    assert cli.main(["list"]) == 0
    assert "thm4_2_forward" in capsys.readouterr().out
    assert cli.main(["check", "--system", "f37", "--property", "transitivity"]) == 0
    assert json.loads(capsys.readouterr().out)["status"] == "FAILS"


def test_reproduce_writes_atomic_bundle(tmp_path):
    assert cli.main(["reproduce", "ex3_4", "--out", str(tmp_path)]) == 0
    (d,) = list(tmp_path.iterdir())
    names = sorted(p.name for p in d.iterdir())
    assert names == ["ex3_4.json", "ex3_4.meta.json", "ex3_4.replay.json"]
    assert "wall_clock_seconds" not in (d / "ex3_4.json").read_text()
    assert "wall_clock_seconds" in (d / "ex3_4.meta.json").read_text()
