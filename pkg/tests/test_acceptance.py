"""The ten acceptance criteria, run at exact arithmetic with their instance counts.

Each test records a PASS/FAIL line that the terminal summary prints.  Time
limits apply to the default ring Z@5 except where a criterion names both
rings.
"""

import json
import time
from contextlib import contextmanager

import pytest
from conftest import ACCEPTANCE

from gersten_lab import cli, k0, suites
from gersten_lab.rings import make_ring
from gersten_lab.serialize import dumps

BOTH = ["Z@5", "Q[t]@t"]


@contextmanager
def criterion(n: int, title: str):
    start = time.perf_counter()
    note = {}
    ACCEPTANCE[n] = (title, False, "did not finish")
    try:
        yield note
    except BaseException as e:
        ACCEPTANCE[n] = (title, False, f"{type(e).__name__}: {str(e).splitlines()[0] if str(e) else ''}")
        raise
    ACCEPTANCE[n] = (title, True, note.get("text", f"{time.perf_counter() - start:.2f} s"))


def run(ring: str, plan: dict[str, int]) -> tuple[list[dict], float]:
    cfg = suites.SuiteConfig(ring=ring, counts=plan, only=tuple(plan))
    start = time.perf_counter()
    rep = suites.run_suites(cfg)
    return rep["checks"], time.perf_counter() - start


def assert_passed(checks: list[dict], plan: dict[str, int]):
    for c in checks:
        assert c["instances"] == plan[c["anchor"]]
        assert c["passed"], f"{c['anchor']}: {c['counterexample']['reason']}"


def test_composition_oracle():
    with criterion(1, "composition oracle, 500 pairs on Z@5 and Q[t]@t") as note:
        plan = {"category.composition": 500}
        times = []
        for ring in BOTH:
            checks, secs = run(ring, plan)
            assert_passed(checks, plan)
            times.append(secs)
        assert sum(times) < 5, times
        note["text"] = " + ".join(f"{t:.2f} s" for t in times)


def test_triangulation():
    with criterion(2, "triangulation on 300 isomorphisms"):
        plan = {"category.triangulation": 300}
        checks, secs = run("Z@5", plan)
        assert_passed(checks, plan)
        assert secs < 5, secs


def test_involution_and_block_invertibility():
    with criterion(3, "upside-down involution on 300 pairs, diagonal blocks of isomorphisms"):
        plan = {"category.upside-down": 300, "category.iso-diagonal-blocks": 300}
        assert_passed(run("Z@5", plan)[0], plan)


def test_classification():
    with criterion(4, "classification of 200 planted complexes, exponent 2 rejected"):
        plan = {"category.classify-roundtrip": 200, "category.classify-rejects": 200}
        checks, secs = run("Z@5", plan)
        assert_passed(checks, plan)
        assert secs < 10, secs


def test_homotopy_calculus():
    with criterion(5, "homotopy round trips, cone contraction, star contract and associativity"):
        plan = {
            "chain.homotopy-roundtrip": 200,
            "chain.cone-contraction": 100,
            "chain.star-contract": 200,
            "homotopy-nat.star-associative": 200,
        }
        assert_passed(run("Z@5", plan)[0], plan)


def test_delta_suite():
    with criterion(6, "delta equivalence and naturality witness, mu data equality"):
        plan = {
            "zero-map.delta-equivalence": 200,
            "zero-map.delta-naturality": 200,
            "zero-map.mu-data": 200,
        }
        assert_passed(run("Z@5", plan)[0], plan)


def test_cylinder():
    with criterion(7, "cylinder of 100 coherent transformations, negative control"):
        plan = {
            "homotopy-nat.cylinder": 100,
            "homotopy-nat.quasi-isomorphisms": 100,
            "homotopy-nat.coherence-negative-control": 20,
        }
        assert_passed(run("Z@5", plan)[0], plan)


def test_rectification():
    with criterion(8, "rectification of 100 iso chains"):
        plan = {"zero-map.rectification": 100}
        assert_passed(run("Z@5", plan)[0], plan)


def test_k0_desk_check():
    with criterion(9, "50 telescopes, cyclic decomposition for a <= 5"):
        plan = {"k0.telescope": 50}
        assert_passed(run("Z@5", plan)[0], plan)
        R = make_ring("Z@5")
        for a in range(1, 6):
            d = k0.generator_decompose(k0.cyclic(R, a))
            assert d.is_valid() and d.formal_sum() == {"R/g": a}
            assert len(d.chains[0]) == a - 1


def test_determinism_and_sabotage(tmp_path, capsys):
    with criterion(10, "byte-identical reports, sabotage fails with replayable counterexamples"):
        args = ["verify", "--count", "3", "--level", "1"]
        outs = []
        for k in range(2):
            path = tmp_path / f"run{k}.json"
            assert cli.main([*args, "-o", str(path)]) == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]
        for flag in sorted(suites.SABOTAGE):
            path = tmp_path / f"{flag}.json"
            assert cli.main([*args, "--count", "10", "--sabotage", flag, "-o", str(path)]) == 1, flag
            rep = json.loads(path.read_text(encoding="utf-8"))
            assert not rep["passed"]
            capsys.readouterr()
            assert cli.main(["replay", str(path)]) == 1, flag
            replayed = json.loads(capsys.readouterr().out)["replayed"]
            assert replayed and all(r["reproduced"] for r in replayed), flag
        assert dumps(json.loads(outs[0])) == outs[0].decode("utf-8")


@pytest.mark.slow
def test_default_config_passes():
    """The default verify run (Z@5, seed 42, 200 instances) passes."""
    rep = suites.run_suites(suites.SuiteConfig())
    assert rep["passed"], [c["anchor"] for c in rep["checks"] if not c["passed"]]
