"""End-to-end runs of the published Sz(2) and Sz(8) results through the CLI."""
import json

import pytest

from gelfand_scope.cli import parse_group_input, run


def run_json(capsys, *argv):
    assert run([*argv, "--no-timings"]) == 0
    return json.loads(capsys.readouterr().out)


def test_sz2_has_exactly_four_strong_gelfand_classes(capsys):
    report = run_json(capsys, "sgp", "scan", "--suzuki-m", "1")
    orders = sorted(entry["order"] for entry in report["subgroups"] if entry["verdict"] == "yes")
    assert orders == [4, 5, 10, 20]
    assert report["audit"]["monotone"]


def test_subfield_formula_matches_the_bound(capsys):
    payload = run_json(capsys, "formula", "sz-total", "--q0", "8", "--r", "3")
    assert payload["total_degree"] == 484
    assert payload["bound_holds"]


@pytest.mark.slow
def test_sz8_perm_form_round_trip(capsys, tmp_path):
    payload = run_json(capsys, "suzuki", "build", "--m", "3", "--perm")
    certificate = payload["certificate"]
    assert certificate["order"] == 29120 and certificate["class_count"] == 11
    assert certificate["ovoid"] == {"degree": 65, "faithful": True, "pair_orbit": 4160, "two_transitive": True}
    path = tmp_path / "sz8.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    assert parse_group_input(str(path), cap=100_000).order == 29120


@pytest.mark.slow
@pytest.mark.parametrize("which, order", [("borel", 448), ("dihedral", 14), ("torus+", 52), ("torus-", 20)])
def test_sz8_maximal_subgroup_certificates(capsys, which, order):
    payload = run_json(capsys, "suzuki", "subgroup", "--m", "3", "--which", which)
    assert payload["certificate"]["order"] == order
    assert payload["certificate"]["order_ok"]


@pytest.mark.slow
def test_sz8_consolidated_report(capsys):
    report = run_json(capsys, "sgp", "scan", "--suzuki-m", "3")
    assert report["no_strong_gelfand_maximal"] is True
    assert report["group_total_degree"] == 484
    assert report["total_degrees"] == {"borel": 42, "dihedral": 8, "torus+": 16, "torus-": 8}
    assert report["borel_discrepancy"] is True
    assert report["strong_gelfand_classes"] == 0
    for entry in report["subgroups"]:
        assert entry["filter_fires"] and entry["method"] == "full"
        assert entry["max_multiplicity"] >= 2 and entry["witness"]
