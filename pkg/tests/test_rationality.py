import pytest
import sympy

from eiscoh.cmfield import verify_discriminant_relation
from eiscoh.config import REPORT_SCHEMA
from eiscoh.errors import ConfigError, NonCriticalAtomError, UnbalancedInfinityTypeError
from eiscoh.lchar import NABLA, PeriodMonomial, constant_term_coefficients, harder_block
from eiscoh.rationality import (
    FAIL,
    PASS,
    ScenarioConfig,
    VerificationReport,
    _split_coefficient,
    axiom_ledger,
    check_constant_term_diagram,
    check_intertwine_equivariance,
    dump_json,
    run_scenario,
)
from eiscoh.scenarios import CURATED, NUMERIC, curated_scenarios, scenario_by_name


@pytest.mark.parametrize("name", sorted(CURATED))
def test_curated_scenario_passes(name):
    document = run_scenario(scenario_by_name(name))
    assert document["verdict"] == PASS
    assert document["schema"] == REPORT_SCHEMA


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(NUMERIC))
def test_numeric_scenario_passes(name):
    document = run_scenario(scenario_by_name(name))
    assert document["verdict"] == PASS
    records = document["intertwine_equivariance"]["records"]
    assert any("numeric" in place for r in records for place in r["archimedean"])


def test_suite_is_sorted_and_shares_towers():
    scenarios = curated_scenarios()
    assert [s.name for s in scenarios] == sorted(CURATED)
    gauss = [s for s in scenarios if s.field == "gauss"]
    assert all(s.tower is gauss[0].tower for s in gauss)
    with pytest.raises(ConfigError, match="unknown scenario"):
        scenario_by_name("nope")


def test_report_is_byte_reproducible(gauss):
    cfg = ScenarioConfig("repro", "gauss", 2, (0, 2), tower=gauss)
    assert dump_json(run_scenario(cfg)) == dump_json(run_scenario(cfg))


def test_infinity_type_must_be_fiber_constant(root_1pi):
    cfg = ScenarioConfig("split", "gauss-root-1pi", 3, (0, 3, 3, 0), tower=root_1pi)
    with pytest.raises(UnbalancedInfinityTypeError, match="constant on the fiber"):
        cfg.infinity_type()


def test_infinity_type_length_checked(root_1pi):
    cfg = ScenarioConfig("short", "gauss-root-1pi", 3, (0, 3), tower=root_1pi)
    with pytest.raises(UnbalancedInfinityTypeError, match="exponents"):
        cfg.infinity_type()


def test_scenario_rejects_small_n():
    with pytest.raises(ValueError):
        ScenarioConfig("tiny", "gauss", 1, (0, 1))


def test_constant_term_records_gauss_conj(gauss):
    cfg = ScenarioConfig("gauss-conj", "gauss", 3, (0, 3), ("conj",), tower=gauss)
    report = check_constant_term_diagram(cfg)
    assert report.verdict == PASS
    assert [r["k"] for r in report.records] == [1, 2, 3]
    first = report.records[0]
    assert first["sigma"] == "conj"
    assert first["axiom"] == "harder"
    assert first["path_a"] == first["path_b"]
    assert report.records[-1]["axiom"] is None
    flags = {f["name"]: f["value"] for f in report.convention_flags}
    assert flags["sign_of_c"] == "-1"


def test_sign_flips_for_root_1pi(root_1pi):
    cfg = ScenarioConfig("a3", "gauss-root-1pi", 2, (4, -1, 4, -1), ("a3",), tower=root_1pi)
    report = check_constant_term_diagram(cfg)
    assert report.verdict == PASS
    k1 = report.records[0]
    assert k1["nabla_sign"] == k1["epsilon_sign"] == -1

    equivariance = check_intertwine_equivariance(cfg)
    assert equivariance.verdict == PASS
    assert equivariance.records[0]["epsilon_power"] == -1
    assert equivariance.records[1]["epsilon_power"] == 1


def test_axiom_ledger():
    cfg_chi = ScenarioConfig("ledger", "gauss", 3, (0, 3)).character()
    ledger = axiom_ledger(cfg_chi, 3)
    assert [entry["axiom"] for entry in ledger] == ["harder", "harder", "waldspurger"]
    assert [entry.get("k") for entry in ledger[:2]] == [1, 2]


def test_split_refuses_foreign_atoms(gauss):
    cfg = ScenarioConfig("split", "gauss", 3, (0, 3), tower=gauss)
    chi = cfg.character()
    witness = verify_discriminant_relation(gauss)
    c, p_squared = witness.c, witness.period.square()
    coefficient = constant_term_coefficients(3, chi, s_at_zero=True)[0]
    rational, block = _split_coefficient(coefficient, chi, 1, 3, c, p_squared)
    assert rational == sympy.Rational(1, 16)
    assert block == harder_block(chi, 1, 3)
    with pytest.raises(NonCriticalAtomError):
        _split_coefficient(coefficient * PeriodMonomial.atom(NABLA, 1), chi, 1, 3, c, p_squared)


def test_report_verdict_aggregates():
    report = VerificationReport("demo", {}, records=[{"verdict": PASS}, {"verdict": FAIL}])
    assert report.verdict == FAIL
    assert report.to_dict()["schema"] == REPORT_SCHEMA
    assert VerificationReport("empty", {}).verdict == PASS
