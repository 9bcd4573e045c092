import json
import math
from fractions import Fraction

import pytest

from whitneyext import Scenario, SpaceParams, run_bound_experiment, \
    run_term_split, verify_all
from whitneyext.harness import (
    build_scenario, generate_sites, summarize, term_I_direct)


def _scenario_1d(**over):
    base = dict(
        name="canonical-1d",
        params=SpaceParams(n=1, s=1.5, p=4.0),
        sites_spec={"kind": "explicit", "points": [["0"]]},
        function_spec={"name": "gaussian", "width": 4.0},
        domain_exp=5,
        max_depth=8,
        budgets={"seminorm": 2000, "split": 600, "whole": 4000,
                 "lemma7": 1024, "lemma12": 128},
        seed=11,
    )
    base.update(over)
    return Scenario(**base)


def test_scenario_json_round_trip():
    sc = _scenario_1d()
    back = Scenario.from_json(sc.to_json())
    assert back == sc


def test_scenario_schema_guard():
    data = _scenario_1d().to_json()
    data["schema"] = 99
    with pytest.raises(ValueError, match="schema"):
        Scenario.from_json(data)


def test_generate_sites_explicit_and_random():
    pts = generate_sites({"kind": "explicit", "points": [["1/2", "-1/4"]]},
                         2, 3)
    assert pts == [(Fraction(1, 2), Fraction(-1, 4))]
    rnd = generate_sites({"kind": "random", "count": 12, "resolution": 5,
                          "seed": 4}, 2, 4)
    assert len(rnd) == 12
    assert len(set(rnd)) == 12
    again = generate_sites({"kind": "random", "count": 12, "resolution": 5,
                            "seed": 4}, 2, 4)
    assert rnd == again
    for pt in rnd:
        for c in pt:
            assert c.denominator <= 2 ** 5
            assert abs(c) <= 8


def test_generate_sites_grid():
    pts = generate_sites({"kind": "grid", "per_axis": 3, "extent": 2}, 2, 3)
    assert len(pts) == 9
    assert (Fraction(0), Fraction(0)) in pts
    assert (Fraction(-2), Fraction(2)) in pts


def test_generate_sites_cantor():
    pts = generate_sites({"kind": "cantor", "stage": 2}, 1, 2)
    want = [Fraction(0), Fraction(1, 16), Fraction(3, 16), Fraction(1, 4),
            Fraction(3, 4), Fraction(13, 16), Fraction(15, 16), Fraction(1)]
    assert [p[0] for p in pts] == want
    with pytest.raises(ValueError, match="one-dimensional"):
        generate_sites({"kind": "cantor", "stage": 1}, 2, 3)


def test_unknown_site_generator():
    with pytest.raises(ValueError, match="unknown site generator"):
        generate_sites({"kind": "poisson"}, 1, 3)


def test_build_scenario_components(Tf1):
    W, F, jets, Tf = build_scenario(_scenario_1d())
    assert list(W.sites) == [(Fraction(0),)]
    assert set(jets.entries) == {(Fraction(0),)}
    assert Tf.eval((3.0,)) == pytest.approx(Tf1.eval((3.0,)), rel=1e-12)


def test_bound_experiment_reproducible_and_finite():
    sc = _scenario_1d()
    a = run_bound_experiment(sc)
    b = run_bound_experiment(sc)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["rho"] is None or math.isfinite(a["rho"])
    assert 0.0 <= a["fallback_fraction"] <= 1.0


def test_bound_experiment_degenerate_note():
    # a degree-1 polynomial has zero seminorm and extends to itself
    sc = _scenario_1d(function_spec={"name": "polynomial",
                                    "coeffs": {"0": 0.25, "1": 1.5}})
    rep = run_bound_experiment(sc)
    assert rep["rho"] is None
    assert rep["note"] == "degenerate: both vanish"


def test_term_split_consistency():
    sc = _scenario_1d()
    rep = run_term_split(sc)
    assert set(rep["terms"]) == {"I", "II", "III", "IV"}
    assert rep["sum_consistent"], rep
    assert rep["term_I_bounded"], rep
    for t in rep["terms"].values():
        assert t["value"] >= 0.0


def test_term_I_direct_agrees_with_split():
    # shallow decomposition: large fringe so term I is exercised
    sc = _scenario_1d(max_depth=2, budgets={"split": 3000, "whole": 3000})
    rep = run_term_split(sc)
    direct = term_I_direct(sc, budget=3000)
    tol = rep["terms"]["I"]["error"] + direct["error_p"] + 1e-9
    assert abs(rep["terms"]["I"]["value"] - direct["value_p"]) <= max(
        tol, 0.5 * max(rep["terms"]["I"]["value"], direct["value_p"]))


def test_verify_all_canonical_passes():
    rep = verify_all(_scenario_1d(), path_corpus=12, pou_points=150)
    assert rep["passed"], summarize(rep)
    names = {c["name"] for c in rep["checks"]}
    for expected in ("decomposition/bounds", "partition/sum-to-one",
                     "extension/polynomial-reproduction", "paths/claim2",
                     "seminorm/lemma7-far", "paths/lemma12-finite"):
        assert expected in names
    text = summarize(rep)
    assert "PASS" in text and "[ok]" in text
