"""One test per acceptance criterion; each prints a PASS/FAIL line and must finish in under 10 s."""

import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from lightchaos import envelope as env
from lightchaos.harness.config import RunConfig
from lightchaos.harness.registry import closed_form_bound_holds
from lightchaos.harness.report import run_experiment, verify_claims
from lightchaos.maps import Contraction

from conftest import ACCEPTANCE

LIMIT = 10.0
TESTS = Path(__file__).parent


@contextmanager
def criterion(n: int, title: str):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < LIMIT
        line = f"criterion {n} {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s): {title}"
        ACCEPTANCE.append(line)
        print(line)
    assert elapsed < LIMIT, f"criterion {n} took {elapsed:.1f}s"


def checks(name, cfg=None):
    rep = run_experiment(name, cfg)
    return rep, {c["name"]: c for c in rep.checks}


def all_match(rep):
    return all(c["match"] for c in rep.checks)


def test_criterion_01_forward_witnesses():
    with criterion(1, "tent envelope: witnesses for all co_set pairs (k <= 64) and members (period <= 16)"):
        rep, c = checks("thm4_2_forward")
        t, p = c["transitivity_witness_all"], c["periodic_witness_all"]
        assert t["status"] == "HOLDS" and p["status"] == "HOLDS"
        assert t["result"]["pairs"] >= 40 * 40 and p["result"]["co_sets"] >= 40
        assert t["result"]["k_max_used"] <= 64 and p["result"]["max_period"] <= 16


def test_criterion_02_converse():
    with criterion(2, "point-open envelope witnesses recover the direct base witnesses"):
        rep, c = checks("thm4_2_converse")
        m = c["converse_witnesses_match"]
        assert all_match(rep) and m["result"]["triples"] >= 20 and m["result"]["matched"] == m["result"]["triples"]


def test_criterion_03_contrapositive():
    with criterion(3, "rotation envelope has no periodic witness; f37 pairs below 1/2 fail by range bound"):
        rep, c = checks("rem4_1")
        w = c["envelope_periodic_witness_all"]
        assert w["status"] == "FAILS" and w["result"]["first"]["certificate"]["reason"] == "no_periodic"
        rep2, c2 = checks("thm4_2_forward")
        assert c2["contrapositive_f37_range_bound"]["status"] == "FAILS"
        assert c2["contrapositive_f37_range_bound"]["result"]["pairs"] > 0


def test_criterion_04_negation():
    with criterion(4, "negation over half lines: k=2 same side, k=1 opposite side, periods <= 2"):
        rep, c = checks("ex3_4")
        assert all_match(rep)
        assert c["light_transitivity"]["status"] == "HOLDS" and c["exponent_pattern"]["status"] == "HOLDS"
        assert c["light_periodic_density"]["status"] == "HOLDS" and c["periods_at_most_2"]["status"] == "HOLDS"


def test_criterion_05_absolute_value():
    with criterion(5, "|x|: both light properties fail with absorbing-set and periodic-set certificates"):
        rep, c = checks("abs_example")
        lt, lp = c["light_transitivity"], c["light_periodic_density"]
        assert lt["status"] == "FAILS" and lt["result"]["replayed"]
        assert lt["result"]["certificate"]["kind"] == "absorbing_set" and lt["result"]["certificate"]["J"] == "[0, inf)"
        assert lp["status"] == "FAILS" and lp["result"]["replayed"]
        assert lp["result"]["certificate"]["kind"] == "periodic_set_characterization"


def test_criterion_06_shift():
    with criterion(6, "shift: light periodic density and light transitivity hold, full periodic density fails"):
        rep, c = checks("ex3_5")
        assert all_match(rep)
        assert c["periodic_density"]["result"]["certificate"]["kind"] == "periodic_set_characterization"
        assert c["stream_exponents_le_4096"]["status"] == "HOLDS"


def test_criterion_07_contraction():
    with criterion(7, "contraction: light sensitivity fails at x = 0 for every delta <= 1/2"):
        rep, c = checks("ex3_6")
        assert all_match(rep)
        for d in ("1/2", "1/4", "1/16", "1/1024"):
            cert = c[f"light_sensitivity_delta_{d}"]["result"]["certificate"]
            assert cert["kind"] == "pointwise_bound" and cert["x"] == "0" and cert["detail"] == "closed_form"
        ys = [Fraction(i - 50, 51) for i in range(101)]
        assert closed_form_bound_holds([y for y in ys if y != 0], 64)
        f = Contraction()
        assert f.iterate(64, Fraction(0)) == 0


def test_criterion_08_f37_flagged():
    with criterion(8, "f37: plateau and range certificates, FLAGGED with the stated claim"):
        rep, c = checks("ex3_7")
        assert all_match(rep)
        sens = c["sensitivity"]["result"]["certificate"]
        assert sens["x"] == "1/2" and sens["bound"] == "0"
        assert c["transitivity"]["result"]["certificate"]["image"] == "[1/2, 1]"
        assert rep.experiment["expected"] == "FLAGGED" and rep.flags
        assert any("Example 3.7" in fl["claim"] for fl in rep.flags)
        assert {fl["computed"] for fl in rep.flags if fl["check"]} == {"FAILS"}


def test_criterion_09_glissorotation():
    with criterion(9, "glissorotation: periodic points of period dividing 2q in >= 50 half-spaces"):
        rep, c = checks("ex3_8")
        assert all_match(rep)
        for p, q in ((1, 3), (2, 5)):
            assert c[f"periods_divide_{2 * q}"]["status"] == "HOLDS" and c[f"periods_divide_{2 * q}"]["result"]["sets"] >= 50
            cert = c[f"light_sensitivity_{p}_{q}"]["result"]["certificate"]
            assert cert["evidence"] and cert["x"]["t"] == "0"


def test_criterion_10_no_dense_orbit():
    with criterion(10, "tent envelope: 100 elements each with a replayed structural obstruction"):
        rep, c = checks("thm4_6_ii")
        r = c["no_dense_orbit_all"]
        assert r["status"] == "HOLDS" and r["result"]["elements"] == 100 and r["result"]["replay_n"] == 256


def test_criterion_11_contraction_scan():
    with criterion(11, "contraction envelope: only constant 0 is periodic among >= 500 elements; G has none"):
        rep, c = checks("thm4_6_i")
        assert all_match(rep) and c["only_constant_zero_periodic"]["result"]["family"] >= 500


def test_criterion_12_envelope_sensitivity():
    with criterion(12, "tent envelope: sensitivity probe with delta = 1/4 for >= 20 elements"):
        rep, c = checks("ex4_7")
        r = c["sensitivity_probe_all"]
        assert r["status"] == "HOLDS" and r["result"]["elements"] >= 20 and r["result"]["max_n"] <= 64


def test_criterion_13_invariants():
    with criterion(13, "module invariant property suites"):
        files = sorted(str(p) for p in TESTS.glob("test_*.py") if p.name != "test_acceptance.py")
        proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *files], capture_output=True, text=True)
        assert proc.returncode == 0, proc.stdout[-2000:]


def test_criterion_14_determinism(tmp_path):
    with criterion(14, "reproduce all --seed 7 twice gives byte-identical reports; exit 0"):
        dirs = []
        for name in ("a", "b"):
            proc = subprocess.run(
                [sys.executable, "-m", "lightchaos", "reproduce", "all", "--seed", "7", "--out", str(tmp_path / name)],
                capture_output=True,
                text=True,
            )
            assert proc.returncode == 0, proc.stdout + proc.stderr
            (d,) = list((tmp_path / name).iterdir())
            dirs.append(d)
        a = {p.name: p.read_bytes() for p in dirs[0].iterdir() if not p.name.endswith(".meta.json")}
        b = {p.name: p.read_bytes() for p in dirs[1].iterdir() if not p.name.endswith(".meta.json")}
        assert a and a == b
        assert verify_claims([run_experiment("ex3_4", RunConfig(seed=7))]) == 0
