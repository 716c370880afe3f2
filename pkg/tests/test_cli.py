import json

import pytest

from eiscoh import cli
from eiscoh.config import CONFIG_ENV_VAR, REPORT_SCHEMA
from eiscoh.errors import InvariantViolation, NonCriticalAtomError, NotRationalSquare
from eiscoh.lchar import FormalLRatio


def run_json(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_weyl_lists_coset_reps(capsys):
    code, doc = run_json(capsys, "weyl", "--n", "3")
    assert code == 0
    assert doc["schema"] == REPORT_SCHEMA
    assert doc["subcommand"] == "weyl"
    assert [row["length"] for row in doc["coset_reps"]] == [2, 1, 0]
    assert [row["w"] for row in doc["coset_reps"]] == [[2, 3, 1], [1, 3, 2], [1, 2, 3]]


def test_weyl_census_and_longest(capsys):
    code, doc = run_json(capsys, "weyl", "--n", "4", "--census", "--longest")
    assert code == 0
    assert doc["length_generating_function"] == [1, 3, 5, 6, 5, 3, 1]
    assert doc["longest_element"]["length"] == 6


def test_kostant_single_k(capsys):
    code, doc = run_json(capsys, "kostant", "--n", "3", "--eta", "0,3", "--k", "2")
    assert code == 0
    [report] = doc["unique_match"]
    assert report["match_count"] == 1
    assert report["status"] == "PASS"


def test_constant_term_text_table(capsys):
    code = cli.run(["constant-term", "--n", "3", "--s-at-zero", "--format", "text"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("eiscoh constant-term: PASS")
    assert "coefficient" in out


def test_intertwine_tensor_grid(capsys):
    code, doc = run_json(
        capsys, "intertwine", "--n", "2", "--k", "1", "--eta-hi", "2", "--method", "tensor-grid", "--tol", "1e-6"
    )
    assert code == 0
    assert doc["numeric"]["method"] == "tensor-grid"
    assert doc["discrepancy"] <= 1e-6


def test_intertwine_vanishing_beta(capsys):
    code, doc = run_json(capsys, "intertwine", "--n", "2", "--eta-hi", "3", "--beta", "1,2")
    assert code == 0
    assert doc["closed_form"] == cli.intertwine_closed_form(
        1, 2, cli.local_data_from_pair(0, 3, 2), cli.Composition((1, 2))
    ).to_dict()


def test_field_root_1pi(capsys):
    code, doc = run_json(capsys, "field", "--field", "gauss-root-1pi")
    assert code == 0
    assert doc["matches_preset_invariants"] is True
    assert doc["discriminant_relation"]["abs_disc"] == "512"


def test_field_output_is_reproducible(capsys):
    first = run_json(capsys, "field", "--field", "zeta5")
    second = run_json(capsys, "field", "--field", "zeta5")
    assert first == second


def test_diagram_gauss_conj(capsys):
    code, doc = run_json(capsys, "diagram", "--field", "gauss", "--n", "2", "--sigma", "conj")
    assert code == 0
    assert doc["verdict"] == "PASS"
    assert doc["constant_term_diagram"]["records"][0]["sigma"] == "conj"


@pytest.mark.parametrize(
    "argv",
    [
        ["kostant", "--n", "3", "--eta", "0,2"],  # unbalanced
        ["field", "--field", "zeta7"],
        ["kostant", "--n", "3", "--eta", "0,x"],
        ["intertwine", "--n", "3", "--k", "5"],
        ["intertwine", "--n", "2", "--method", "simpson"],
        ["diagram", "--field", "gauss-root-1pi", "--n", "3", "--eta", "0,3,3,0"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert cli.run(argv) == 2


def test_failed_verdict_exits_1(capsys, monkeypatch):
    monkeypatch.setitem(cli.HANDLERS, "weyl", lambda cfg: ({"verdict": "FAIL"}, []))
    assert cli.run(["weyl"]) == 1


def test_config_file_from_environment(capsys, monkeypatch, tmp_path):
    path = tmp_path / "eiscoh.ini"
    path.write_text("[defaults]\nn = 4\n\n[weyl]\nformat = json\n")
    monkeypatch.setenv(CONFIG_ENV_VAR, str(path))

    code, doc = run_json(capsys, "weyl")
    assert code == 0
    assert doc["n"] == 4

    code, doc = run_json(capsys, "weyl", "--n", "2")
    assert code == 0
    assert doc["n"] == 2


def test_config_file_rejects_unknown_keys(capsys, monkeypatch, tmp_path):
    path = tmp_path / "eiscoh.ini"
    path.write_text("[weyl]\ncolour = blue\n")
    monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
    assert cli.run(["weyl"]) == 2


def test_missing_config_file(capsys, tmp_path):
    assert cli.run(["weyl", "--config", str(tmp_path / "absent.ini")]) == 2


@pytest.mark.parametrize("subcommand", ["weyl", "kostant", "constant-term", "intertwine", "field"])
def test_self_test(capsys, subcommand):
    code, doc = run_json(capsys, subcommand, "--self-test")
    assert code == 0
    assert doc["verdict"] == "PASS"
    assert all(doc["self_test"].values())


@pytest.mark.slow
def test_diagram_self_test(capsys):
    code, doc = run_json(capsys, "diagram", "--self-test")
    assert code == 0
    assert len(doc["self_test"]) >= 10


def test_invariant_violation_renders_fail_document(capsys, monkeypatch):
    def broken(cfg):
        raise InvariantViolation("length of w_2 is 0, expected 1")

    monkeypatch.setitem(cli.HANDLERS, "weyl", broken)
    code, doc = run_json(capsys, "weyl")
    assert code == 1
    assert doc["verdict"] == "FAIL"
    assert doc["error"]["type"] == "InvariantViolation"
    assert "expected 1" in doc["error"]["message"]


def test_failed_verification_errors_exit_1(capsys, monkeypatch):
    def non_critical(cfg):
        raise NonCriticalAtomError("L(1, eta) lies outside the critical strip")

    def not_square(cfg):
        raise NotRationalSquare("not rational square: c^2 = 3")

    monkeypatch.setitem(cli.HANDLERS, "constant-term", non_critical)
    monkeypatch.setitem(cli.HANDLERS, "field", not_square)
    assert run_json(capsys, "constant-term", "--n", "3")[0] == 1
    assert run_json(capsys, "field", "--field", "gauss")[0] == 1


def test_constant_term_verdict_follows_telescoping(capsys, monkeypatch):
    code, doc = run_json(capsys, "constant-term", "--n", "4")
    assert code == 0
    assert [entry["status"] for entry in doc["gk_products"]] == ["PASS"] * 4
    assert doc["top_coefficient_is_one"] is True

    def skewed(k, n, chi):
        return FormalLRatio.one()

    monkeypatch.setattr(cli, "gk_product", skewed)
    code, doc = run_json(capsys, "constant-term", "--n", "4")
    assert code == 1
    assert doc["verdict"] == "FAIL"
    assert [entry["status"] for entry in doc["gk_products"]] == ["FAIL", "FAIL", "FAIL", "PASS"]
