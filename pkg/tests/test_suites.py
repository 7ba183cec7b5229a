import pytest

from gersten_lab import suites
from gersten_lab.errors import ConfigInvalid
from gersten_lab.serialize import dumps

TARGETS = {
    "compose-g": ["category.composition", "category.upside-down"],
    "ut-sign": ["category.triangulation"],
    "star-sign": ["chain.star-contract", "homotopy-nat.star-associative"],
    "delta-sign": ["zero-map.delta-naturality"],
    "coherence": ["homotopy-nat.cylinder"],
    "k0-rank": ["k0.telescope"],
}


def test_every_sabotage_flag_has_a_target():
    assert set(TARGETS) == set(suites.SABOTAGE)
    anchors = {c.anchor for c in suites.CHECKS}
    assert all(a in anchors for targets in TARGETS.values() for a in targets)


def test_anchor_names_unique_and_modules_covered():
    anchors = [c.anchor for c in suites.CHECKS]
    assert len(anchors) == len(set(anchors))
    assert {c.module for c in suites.CHECKS} == {
        "exact-algebra", "chain-calculus", "category-c", "zero-map-engine", "homotopy-nat", "k0-checker",
    }


@pytest.mark.parametrize("ring", ["Z@5", "Q[t]@t"])
def test_all_checks_pass_small(ring):
    cfg = suites.SuiteConfig(ring=ring, count=4, max_dim=3, max_val=2, level=1)
    rep = suites.run_suites(cfg)
    failing = [c["anchor"] for c in rep["checks"] if not c["passed"]]
    assert not failing, [c["counterexample"]["reason"] for c in rep["checks"] if not c["passed"]]
    assert [c["anchor"] for c in rep["checks"]] == sorted(c["anchor"] for c in rep["checks"])


@pytest.mark.parametrize("flag", sorted(TARGETS))
def test_sabotage_fails_and_replays(flag):
    cfg = suites.SuiteConfig(count=20, sabotage=(flag,), only=tuple(TARGETS[flag]), level=1)
    rep = suites.run_suites(cfg)
    for entry in rep["checks"]:
        assert not entry["passed"], entry["anchor"]
        cx = entry["counterexample"]
        assert suites.replay(entry["anchor"], cx, cfg) == cx["reason"]
        # the same input passes once the sabotage is lifted
        clean = suites.SuiteConfig(count=20, only=cfg.only, level=1)
        if flag != "coherence":
            assert suites.replay(entry["anchor"], cx, clean) is None


def test_report_is_deterministic():
    cfg = suites.SuiteConfig(count=3, only=("category.composition", "k0.additivity"))
    assert dumps(suites.run_suites(cfg)) == dumps(suites.run_suites(cfg))
    other = suites.SuiteConfig(count=3, seed=7, only=cfg.only)
    assert suites.run_suites(other)["config"]["seed"] == 7


def test_instance_count_scaling():
    chk = suites.find_check("homotopy-nat.simplicial-levels")
    assert suites.instance_count(chk, suites.SuiteConfig(count=200)) == 2
    assert suites.instance_count(chk, suites.SuiteConfig(counts={chk.anchor: 7})) == 7
    assert suites.instance_count(suites.find_check("k0.telescope"), suites.SuiteConfig(count=5)) == 5


@pytest.mark.parametrize("bad", [
    {"count": 0}, {"ring": "Z@6"}, {"ring": "F@2"}, {"max_dim": 0}, {"level": 4},
    {"sabotage": ("nope",)}, {"only": ("no.such",)}, {"format": "xml"},
])
def test_config_invalid(bad):
    with pytest.raises(ConfigInvalid):
        suites.SuiteConfig(**bad).validate()


def test_markdown_report():
    rep = suites.run_suites(suites.SuiteConfig(count=2, only=("algebra.valuation",)))
    md = suites.to_markdown(rep)
    assert "| algebra.valuation | exact-algebra | 2 | pass |" in md
