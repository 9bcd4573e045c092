import json
from fractions import Fraction

import pytest

from whitneyext import SpaceParams, build, jets_from_function
from whitneyext.cli import main
from whitneyext.functions import gaussian_bump
from whitneyext.geometry import DyadicCube
from whitneyext.io import (
    dump_json, load_decomposition, load_jetfield, load_json,
    render_decomposition_svg, save_decomposition, save_jetfield)


def test_decomposition_round_trip(W2, tmp_path):
    f = tmp_path / "cubes.json"
    save_decomposition(W2, f)
    back = load_decomposition(f)
    assert back.params == W2.params
    assert list(back.sites) == list(W2.sites)
    assert {c.key() for c in back.cubes()} == {c.key() for c in W2.cubes()}
    assert ({c.key() for c in back.fringe_cubes()}
            == {c.key() for c in W2.fringe_cubes()})
    cube = next(iter(W2.cubes()))
    assert back.anchor(cube) == W2.anchor(cube)


def test_jetfield_round_trip(W1, params1, gauss1, tmp_path):
    jets = jets_from_function(gauss1, W1.sites, params1)
    f = tmp_path / "jets.json"
    save_jetfield(jets, f)
    back = load_jetfield(f)
    site = (Fraction(0),)
    assert back.jet(site).coeffs == jets.jet(site).coeffs


def test_json_output_is_stable(W1, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_decomposition(W1, a)
    save_decomposition(W1, b)
    assert a.read_bytes() == b.read_bytes()


def test_render_svg(W2, tmp_path):
    out = tmp_path / "decomp.svg"
    render_decomposition_svg(W2, out)
    text = out.read_text()
    assert text.startswith("<svg")
    assert text.rstrip().endswith("</svg>")
    assert "circle" in text


def test_render_requires_planar(W1, tmp_path):
    with pytest.raises(ValueError, match="n = 2"):
        render_decomposition_svg(W1, tmp_path / "x.svg")


@pytest.fixture()
def cli_dir(tmp_path, params1, gauss1):
    sites = tmp_path / "sites.json"
    dump_json({"points": [["0"]]}, sites)
    assert main(["decompose", "--sites", str(sites), "--domain-exp", "5",
                 "--max-depth", "7", "--out", str(tmp_path / "cubes.json")]) == 0
    W = load_decomposition(tmp_path / "cubes.json")
    jets = jets_from_function(gauss1, W.sites, params1)
    save_jetfield(jets, tmp_path / "jets.json")
    return tmp_path


def test_cli_pou_check(cli_dir):
    rc = main(["pou-check", "--cubes", str(cli_dir / "cubes.json"),
               "--samples", "50", "--out", str(cli_dir / "pou.json")])
    assert rc == 0
    rep = load_json(cli_dir / "pou.json")
    assert rep["passed"] and rep["samples"] == 50


def test_cli_extend(cli_dir):
    queries = cli_dir / "q.csv"
    queries.write_text("3.0\n-7.5\n")
    rc = main(["extend", "--cubes", str(cli_dir / "cubes.json"),
               "--jets", str(cli_dir / "jets.json"),
               "--queries", str(queries),
               "--out", str(cli_dir / "values.csv")])
    assert rc == 0
    rows = (cli_dir / "values.csv").read_text().strip().splitlines()
    assert len(rows) == 2
    x, v = rows[0].split(",")
    assert float(x) == 3.0
    assert abs(float(v)) < 10.0


def test_cli_paths(cli_dir):
    rc = main(["paths", "--cubes", str(cli_dir / "cubes.json"),
               "--cube-id", "0:10", "--samples", "4",
               "--out", str(cli_dir / "paths.json")])
    assert rc == 0
    rep = load_json(cli_dir / "paths.json")
    assert rep["passed"]
    assert rep["decay"]["a"] < 1.0


def test_cli_seminorm(cli_dir):
    dump_json({"lo": [0.0], "hi": [1.0]}, cli_dir / "box.json")
    rc = main(["seminorm", "--field", "analytic:gaussian",
               "--region", str(cli_dir / "box.json"),
               "--n", "1", "--s", "1.5", "--p", "4.0",
               "--method", "tensor-quad", "--budget", "2000",
               "--out", str(cli_dir / "est.json")])
    assert rc == 0
    est = load_json(cli_dir / "est.json")
    assert est["value"] > 0


def test_cli_verify_and_reports(cli_dir):
    from whitneyext import Scenario

    sc = Scenario(
        name="cli-verify",
        params=SpaceParams(n=1, s=1.5, p=4.0),
        sites_spec={"kind": "explicit", "points": [["0"]]},
        function_spec={"name": "gaussian", "width": 4.0},
        domain_exp=4, max_depth=6,
        budgets={"seminorm": 800, "split": 300, "whole": 800,
                 "lemma7": 512, "lemma12": 64},
        seed=2)
    cfg = cli_dir / "scenario.json"
    dump_json(sc.to_json(), cfg)
    assert main(["bound", "--config", str(cfg),
                 "--out", str(cli_dir / "bound.json")]) == 0
    assert main(["split", "--config", str(cfg),
                 "--out", str(cli_dir / "split.json")]) == 0
    assert main(["verify", "--config", str(cfg),
                 "--out", str(cli_dir / "verify.json")]) == 0
    rep = load_json(cli_dir / "verify.json")
    assert rep["passed"]


def test_cli_render_2d(tmp_path):
    sites = tmp_path / "sites.json"
    dump_json({"points": [["1/4", "-3/8"]]}, sites)
    assert main(["decompose", "--sites", str(sites), "--domain-exp", "1",
                 "--max-depth", "4", "--p", "6.0",
                 "--out", str(tmp_path / "cubes.json")]) == 0
    assert main(["render", "--cubes", str(tmp_path / "cubes.json"),
                 "--out", str(tmp_path / "d.svg")]) == 0
    assert (tmp_path / "d.svg").read_text().startswith("<svg")
