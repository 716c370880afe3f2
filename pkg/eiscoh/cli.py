"""
Command-line front end.

Usage:
    eiscoh weyl --n 3 --list-coset-reps
    eiscoh kostant --n 3 --eta 0,3 [--k 2] [--exhaustive] [--census] [--profile]
    eiscoh constant-term --n 4 [--eta 0,4] [--s-at-zero]
    eiscoh intertwine --n 2 --k 1 --eta-hi 2 --method tensor-grid --tol 1e-6
    eiscoh field --field gauss-root-1pi [--sigma a3,a5]
    eiscoh diagram --field gauss --n 2 --eta 0,2 --sigma conj
    eiscoh <subcommand> --self-test

Exit codes: 0 every check passed, 1 a verification failed, 2 usage or config error.
Reports go to stdout (JSON by default, --format text for tables), logs to stderr.
"""

import argparse
import logging
import math
import sys
from pathlib import Path

import pandas as pd
import sympy

from . import __version__
from .cmfield import (
    FieldTower,
    permutation_signature,
    sigma_decompose,
    verify_discriminant_relation,
    verify_sign_identity,
)
from .config import (
    CONFIG_ENV_VAR,
    QUADRATURE_METHODS,
    REPORT_SCHEMA,
    SUBCOMMANDS,
    QuadratureConfig,
    RunConfig,
    build_run_config,
    config_path_from_env,
    load_config_file,
    parse_int_list,
    setup_logging,
)
from .errors import EiscohError, InvariantViolation, NonCriticalAtomError, VerificationFailure
from .intertwine import (
    ONE,
    Composition,
    closed_form_telescoping,
    compositions,
    intertwine_closed_form,
    intertwine_numeric,
    local_data_from_pair,
    normalized_value,
)
from .kostant import (
    InfinityType,
    Weight,
    bottom_degree_profile,
    dot_action_doubled,
    kostant_census,
    kostant_weight,
    verify_unique_match,
)
from .lchar import (
    Affine,
    FormalLRatio,
    HARDER_PERIOD,
    HeckeCharSymbol,
    LSymbol,
    PeriodMonomial,
    constant_term_coefficients,
    constant_term_expansion,
    gk_product,
    harder_block,
    l_ratio,
    sigma_on_ratio,
)
from .presets import PRESET_INVARIANTS, PRESETS, load_tower
from .rationality import PASS, FAIL, ScenarioConfig, dump_json, run_scenario
from .scenarios import curated_scenarios
from .weyl import (
    Permutation,
    WeylElement,
    all_permutations,
    coset_reps_P,
    length_generating_function,
    longest_element,
    q_integer_product,
)

logger = logging.getLogger(__name__)

CHARACTER_NAME = "eta"


def verdict_of(passed: bool) -> str:
    return PASS if passed else FAIL


def _default_eta(n: int, places: int = 1) -> tuple[int, ...]:
    """(0, n) at every place: the smallest balanced choice."""
    return (0, n) * places


def _generic_infinity_type(cfg: RunConfig, n: int) -> InfinityType:
    eta = InfinityType.from_values(cfg.eta or _default_eta(n))
    eta.validate(n)
    return eta


def _require_n(cfg: RunConfig, default: int | None = None) -> int:
    if cfg.n is None and default is None:
        raise EiscohError(f"{cfg.subcommand} needs --n")
    return cfg.n if cfg.n is not None else default


def _tower(cfg: RunConfig) -> FieldTower:
    return load_tower(cfg.field, cfg.poly)


# =============================================================================
# SUBCOMMANDS
# =============================================================================

def run_weyl(cfg: RunConfig) -> tuple[dict, list[dict]]:
    n = _require_n(cfg, 3)
    reps = coset_reps_P(n)
    rows = [{"k": k, "w": w.one_line(), "length": w.length()} for k, w in enumerate(reps, start=1)]
    document = {"n": n, "coset_reps": rows}

    passed = True
    if cfg.has_option("census"):
        counted = length_generating_function(n)
        predicted = q_integer_product(n)
        document["length_generating_function"] = counted
        document["q_integer_product"] = predicted
        passed = counted == predicted
    if cfg.has_option("longest"):
        w0 = longest_element(n)
        document["longest_element"] = {"w": w0.one_line(), "length": w0.length()}
        passed = passed and w0.length() == n * (n - 1) // 2
    document["verdict"] = verdict_of(passed)
    return document, rows


def run_kostant(cfg: RunConfig) -> tuple[dict, list[dict]]:
    n = _require_n(cfg)
    eta = _generic_infinity_type(cfg, n)
    ks = [cfg.k] if cfg.k is not None else list(range(1, n + 1))

    reports = [
        verify_unique_match(eta, k, n, cap=cfg.enumeration_cap, threads=cfg.threads,
                            exhaustive=cfg.has_option("exhaustive"))
        for k in ks
    ]
    rows = [
        {
            "k": r["k"],
            "matches": r["match_count"],
            "w_k": r["find_wk"],
            "min_length": r["min_length"],
            "c_n": r["c_n"],
            "status": r["status"],
        }
        for r in reports
    ]
    document = {"n": n, "eta": eta.to_dict(), "unique_match": reports}
    passed = all(r["status"] == PASS for r in reports)

    if cfg.has_option("profile"):
        document["profile"] = {
            str(k): {str(q): c for q, c in bottom_degree_profile(eta, k, n, cfg.enumeration_cap).items()}
            for k in ks
        }
    if cfg.has_option("census"):
        census = kostant_census(n, eta.degree)
        document["census"] = census
        passed = passed and census["status"] == PASS

    document["verdict"] = verdict_of(passed)
    return document, rows


def run_constant_term(cfg: RunConfig) -> tuple[dict, list[dict]]:
    n = _require_n(cfg)
    eta = _generic_infinity_type(cfg, n)
    chi = HeckeCharSymbol(CHARACTER_NAME, eta)
    s_at_zero = cfg.has_option("s-at-zero")

    expansion = constant_term_expansion(n, chi, s_at_zero)
    telescoped = []
    for k in range(1, n + 1):
        try:
            product = gk_product(k, n, chi)
            expected = FormalLRatio.one() if k == n else l_ratio(Affine(k - n, 1), Affine(0, 1), chi)
            status = verdict_of(product == expected)
            text = str(product)
        except InvariantViolation as e:
            logger.error(f"k={k}: {e}")
            status, text = FAIL, None
        telescoped.append({"k": k, "product": text, "status": status})

    top = constant_term_coefficients(n, chi, s_at_zero=True)[-1]
    passed = all(entry["status"] == PASS for entry in telescoped) and top.is_one()
    rows = [
        {"k": term["k"], "w_k": term["w_k"], "coefficient": term["coefficient_text"]}
        for term in expansion
    ]
    document = {
        "n": n,
        "eta": eta.to_dict(),
        "s_at_zero": s_at_zero,
        "expansion": expansion,
        "gk_products": telescoped,
        "top_coefficient_is_one": top.is_one(),
        "verdict": verdict_of(passed),
    }
    return document, rows


def _local_data(cfg: RunConfig, n: int):
    if cfg.eta_hi is not None:
        return local_data_from_pair(cfg.eta_lo if cfg.eta_lo is not None else 0, cfg.eta_hi, n)
    if cfg.eta is not None:
        if len(cfg.eta) != 2:
            raise EiscohError("intertwine takes one place: --eta a,b or --eta-hi/--eta-lo")
        return local_data_from_pair(cfg.eta[0], cfg.eta[1], n)
    return local_data_from_pair(0, n, n)


def run_intertwine(cfg: RunConfig) -> tuple[dict, list[dict]]:
    n = _require_n(cfg)
    k = cfg.k if cfg.k is not None else 1
    data = _local_data(cfg, n)
    beta = Composition(cfg.beta) if cfg.beta is not None else data.beta0()
    if beta.n != n or beta.total != data.gap:
        raise EiscohError(f"beta {beta} is not a composition of {data.gap} into {n} parts")

    closed = intertwine_closed_form(k, n, data, beta)
    normalized = normalized_value(k, n, data)
    estimate = intertwine_numeric(k, n, data, beta, cfg.quad)
    tol = cfg.quad.resolved_tol

    if beta == data.beta0():
        target = float(closed)
        discrepancy = abs(estimate.value - target) / abs(target)
    else:
        discrepancy = abs(estimate.value) / (2 * math.pi) ** (n - k)
    passed = discrepancy <= tol and normalized == ONE

    document = {
        "n": n,
        "k": k,
        "eta_lo": data.eta_lo,
        "eta_hi": data.eta_hi,
        "beta": list(beta.beta),
        "closed_form": closed.to_dict(),
        "normalized_value": normalized.to_dict(),
        "numeric": estimate.to_dict(),
        "discrepancy": discrepancy,
        "tolerance": tol,
        "verdict": verdict_of(passed),
    }
    rows = [{
        "beta": str(beta),
        "closed_form": str(closed),
        "numeric": f"{estimate.value.real:.12g}",
        "error_bound": f"{estimate.error:.2e}",
        "discrepancy": f"{discrepancy:.2e}",
    }]
    return document, rows


def run_field(cfg: RunConfig) -> tuple[dict, list[dict]]:
    tower = _tower(cfg)
    witness = verify_discriminant_relation(tower)
    sigmas = [tower.parse_sigma(s) for s in cfg.sigma] if cfg.sigma else tower.sigma_set()
    signs = [verify_sign_identity(tower, sigma) for sigma in sigmas]

    passed = witness.status == PASS and all(s["status"] == PASS for s in signs)
    document = {
        "tower": tower.describe(),
        "discriminant_relation": witness.to_dict(),
        "sign_identities": signs,
    }
    if cfg.poly is None and tower.name in PRESET_INVARIANTS:
        abs_disc, p_squared, c_squared = PRESET_INVARIANTS[tower.name]
        expected = (
            witness.abs_disc == abs_disc
            and witness.period.square() == p_squared
            and witness.c_squared == c_squared
        )
        document["matches_preset_invariants"] = expected
        passed = passed and expected
    document["verdict"] = verdict_of(passed)

    rows = [
        {"sigma": s["sigma"], "epsilon": s["epsilon"], "chi": s["chi"], "d": s["d"], "status": s["status"]}
        for s in signs
    ]
    return document, rows


def run_diagram(cfg: RunConfig) -> tuple[dict, list[dict]]:
    tower = _tower(cfg)
    n = _require_n(cfg, 2)
    eta = cfg.eta or _default_eta(n, len(tower.places()))
    scenario = ScenarioConfig(
        name="cli",
        field=tower.name,
        n=n,
        eta_values=eta,
        sigmas=cfg.sigma,
        poly=cfg.poly,
        quad=cfg.quad if cfg.has_option("numeric") else None,
        tower=tower,
    )
    document = run_scenario(scenario)
    rows = [
        {"check": check, "k": r["k"], "sigma": r["sigma"], "verdict": r["verdict"]}
        for check in ("intertwine_equivariance", "constant_term_diagram")
        for r in document[check]["records"]
    ]
    return document, rows


HANDLERS = {
    "weyl": run_weyl,
    "kostant": run_kostant,
    "constant-term": run_constant_term,
    "intertwine": run_intertwine,
    "field": run_field,
    "diagram": run_diagram,
}


# =============================================================================
# SELF-TESTS
# =============================================================================

def self_test_weyl() -> dict[str, bool]:
    checks = {}
    checks["coset_reps_are_cycles_n2_to_8"] = all(
        [w.length() for w in coset_reps_P(n)] == list(range(n - 1, -1, -1)) for n in range(2, 9)
    )
    checks["matrix_round_trip_s4"] = all(
        Permutation.from_matrix(w.matrix()) == w for w in all_permutations(4)
    )
    checks["matrix_composition_s3"] = all(
        ((w * u).matrix() == w.matrix() @ u.matrix()).all()
        for w in all_permutations(3) for u in all_permutations(3)
    )
    checks["length_census_n2_to_5"] = all(
        length_generating_function(n) == q_integer_product(n) for n in range(2, 6)
    )
    checks["sign_multiplicative_s4"] = all(
        (w * u).sign() == w.sign() * u.sign() for w in all_permutations(4) for u in all_permutations(4)
    )
    return checks


def self_test_kostant() -> dict[str, bool]:
    checks = {}
    dot_ok = True
    for n in range(2, 5):
        for mu_vec in [(0,) * n, tuple(range(n, 0, -1)), (3,) + (0,) * (n - 1)]:
            mu = Weight({"iota": mu_vec})
            for w in all_permutations(n):
                element = WeylElement({"iota": w})
                if kostant_weight(element, mu).scaled(2) != dot_action_doubled(element, mu):
                    dot_ok = False
    checks["dot_action_identity_n2_to_4"] = dot_ok
    checks["census_n2_to_4"] = all(
        kostant_census(n, degree)["status"] == PASS for n in range(2, 5) for degree in (2, 4)
    )
    unique = True
    for n, values in [(2, (0, 2)), (3, (-1, 3)), (3, (0, 3, 4, -2)), (4, (5, 0))]:
        eta = InfinityType.from_values(values)
        for k in range(1, n + 1):
            unique = unique and verify_unique_match(eta, k, n)["status"] == PASS
    checks["unique_bottom_degree_match"] = unique
    return checks


def self_test_constant_term() -> dict[str, bool]:
    checks = {}
    telescoping = True
    for n in range(2, 11):
        chi = HeckeCharSymbol(CHARACTER_NAME, InfinityType.from_values(_default_eta(n)))
        try:
            for k in range(1, n + 1):
                gk_product(k, n, chi)
        except InvariantViolation:
            telescoping = False
    checks["gk_telescoping_n2_to_10"] = telescoping

    chi = HeckeCharSymbol(CHARACTER_NAME, InfinityType.from_values((0, 3)))
    coefficients = constant_term_coefficients(3, chi, s_at_zero=True)
    checks["k_equals_n_coefficient_is_one"] = coefficients[-1].is_one()

    tower = load_tower("gauss")
    conj = tower.conjugation()
    labels = tower.embeddings.labels
    chi = HeckeCharSymbol(CHARACTER_NAME, InfinityType(dict(zip(labels, (0, 3))), tower.places()))
    block = harder_block(chi, 1, 3)
    checks["sigma_identity_fixes_harder_block"] = sigma_on_ratio(block, tower.identity(), 3) == block
    twisted = sigma_on_ratio(block, conj, 3)
    checks["sigma_conj_swaps_infinity_type"] = all(
        sym.character.infinity_type[label] == chi.infinity_type[conj.preimage(label)]
        for sym in twisted.numerator
        for label in labels
    ) and twisted != block
    bad = FormalLRatio([LSymbol(Affine(1), chi)], [LSymbol(Affine(0), chi)])
    try:
        sigma_on_ratio(bad, conj, 3)
        checks["non_critical_atom_refused"] = False
    except NonCriticalAtomError:
        checks["non_critical_atom_refused"] = True
    checks["harder_period_power"] = block.scalar == PeriodMonomial.atom(HARDER_PERIOD, 2)
    return checks


def self_test_intertwine() -> dict[str, bool]:
    checks = {}
    normalized = True
    telescoping = True
    vanishing = True
    for n in range(2, 5):
        for eta_hi in range(n, n + 4):
            data = local_data_from_pair(0, eta_hi, n)
            for k in range(1, n + 1):
                normalized = normalized and normalized_value(k, n, data) == ONE
                if k < n:
                    ratio = closed_form_telescoping(k, n, data)
                    telescoping = telescoping and ratio.two_pi_power == 1 and ratio.coefficient == sympy.Rational(1, eta_hi - (n - k))
                beta0 = data.beta0()
                vanishing = vanishing and all(
                    intertwine_closed_form(k, n, data, beta).is_zero
                    for beta in compositions(n, data.gap) if beta != beta0
                )
    checks["normalized_value_is_one"] = normalized
    checks["closed_form_telescoping"] = telescoping
    checks["closed_form_vanishing"] = vanishing

    data = local_data_from_pair(0, 2, 2)
    estimate = intertwine_numeric(1, 2, data, data.beta0(), QuadratureConfig(method="radial-iterated"))
    checks["radial_oracle_n2_k1"] = abs(estimate.value - 2 * math.pi) <= 1e-8 * 2 * math.pi
    return checks


def self_test_field() -> dict[str, bool]:
    checks = {}
    for name in PRESETS:
        tower = load_tower(name)
        witness = verify_discriminant_relation(tower)
        abs_disc, p_squared, c_squared = PRESET_INVARIANTS[name]
        checks[f"{name}_discriminant_relation"] = (
            witness.status == PASS
            and witness.abs_disc == abs_disc
            and witness.period.square() == p_squared
            and witness.c_squared == c_squared
        )
        signs_ok = True
        for sigma in tower.sigma_set():
            sigma1, sigma2, epsilon = sigma_decompose(sigma, tower.embeddings)
            composed = {label: sigma2.image(sigma1.image(label)) for label in tower.embeddings.labels}
            signs_ok = signs_ok and composed == sigma.images
            signs_ok = signs_ok and verify_sign_identity(tower, sigma)["status"] == PASS
            signs_ok = signs_ok and epsilon == permutation_signature(sigma2.images, tower.embeddings.labels)
        checks[f"{name}_sign_identities"] = signs_ok
    checks["gauss_c_is_minus_one"] = verify_discriminant_relation(load_tower("gauss")).c == -1
    return checks


def self_test_diagram() -> dict[str, bool]:
    return {scenario.name: run_scenario(scenario)["verdict"] == PASS for scenario in curated_scenarios()}


SELF_TESTS = {
    "weyl": self_test_weyl,
    "kostant": self_test_kostant,
    "constant-term": self_test_constant_term,
    "intertwine": self_test_intertwine,
    "field": self_test_field,
    "diagram": self_test_diagram,
}


def run_self_test(subcommand: str) -> tuple[dict, list[dict]]:
    logger.info(f"Running {subcommand} self-test")
    checks = SELF_TESTS[subcommand]()
    document = {"self_test": dict(sorted(checks.items())), "verdict": verdict_of(all(checks.values()))}
    rows = [{"check": name, "passed": ok} for name, ok in sorted(checks.items())]
    return document, rows


# =============================================================================
# OUTPUT
# =============================================================================

def render(subcommand: str, document: dict, rows: list[dict], output_format: str) -> str:
    document = {"schema": REPORT_SCHEMA, "subcommand": subcommand, **document}
    if output_format == "json":
        return dump_json(document)
    table = pd.DataFrame([{key: str(value) for key, value in row.items()} for row in rows])
    lines = [f"eiscoh {subcommand}: {document['verdict']}", ""]
    lines.append(table.to_string(index=False) if not table.empty else "(no records)")
    return "\n".join(lines)


# =============================================================================
# ARGUMENT PARSING
# =============================================================================

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help=f"INI config file (default: ${CONFIG_ENV_VAR})")
    parser.add_argument("--format", choices=("json", "text"), help="Report format (default: json)")
    parser.add_argument("--threads", type=int, help="Worker cap (default: 1)")
    parser.add_argument("--self-test", action="store_true", help="Run this module's invariant suite")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="Warnings only")


def _add_problem(parser: argparse.ArgumentParser, k: bool = True, eta: bool = True) -> None:
    parser.add_argument("--n", type=int, help="Rank n of GL_n")
    if k:
        parser.add_argument("--k", type=int, help="Coset index 1..n")
    if eta:
        parser.add_argument("--eta", type=parse_int_list, help="Infinity type, comma list in embedding order")


def _add_field(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--field", help=f"Tower preset ({', '.join(PRESETS)})")
    parser.add_argument("--poly", help="Custom tower 'k0 | k1 | k', coefficients from the leading term")
    parser.add_argument("--sigma", type=lambda s: tuple(p.strip() for p in s.split(",") if p.strip()),
                        help="Galois elements: names, cyclotomic integers or 'id', comma separated")


def _add_quadrature(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--method", choices=QUADRATURE_METHODS, help="Quadrature method")
    parser.add_argument("--nodes", type=int, help="Nodes per side of the step grid")
    parser.add_argument("--samples", type=int, help="Monte-carlo sample count")
    parser.add_argument("--seed", type=int, help="Monte-carlo seed")
    parser.add_argument("--tol", type=float, help="Relative tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eiscoh",
        description="Verification toolkit for rationality of Eisenstein cohomology on GL_n over CM fields",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="{" + ",".join(SUBCOMMANDS) + "}")

    weyl = sub.add_parser("weyl", help="Coset representatives and length census")
    _add_common(weyl)
    _add_problem(weyl, k=False, eta=False)
    weyl.add_argument("--list-coset-reps", action="store_true", help="List W_n / W_P representatives (default)")
    weyl.add_argument("--census", action="store_true", help="Length generating function of S_n")
    weyl.add_argument("--longest", action="store_true", help="Include the longest element")

    kostant = sub.add_parser("kostant", help="Unique Kostant match and bottom degree")
    _add_common(kostant)
    _add_problem(kostant)
    kostant.add_argument("--exhaustive", action="store_true", help="Walk the full product W_{n,inf}")
    kostant.add_argument("--census", action="store_true", help="Length distribution over W_{n,inf}")
    kostant.add_argument("--profile", action="store_true", help="Matches per degree q")
    kostant.add_argument("--enumeration-cap", type=int, help="Refuse enumerations above this size")

    constant = sub.add_parser("constant-term", help="Constant-term coefficients")
    _add_common(constant)
    _add_problem(constant, k=False)
    constant.add_argument("--s-at-zero", action="store_true", help="Specialise at s = 0")

    intertwine = sub.add_parser("intertwine", help="Archimedean intertwining values")
    _add_common(intertwine)
    _add_problem(intertwine)
    intertwine.add_argument("--eta-hi", type=int, help="eta at the upper embedding (>= n)")
    intertwine.add_argument("--eta-lo", type=int, help="eta at the lower embedding (<= 0, default 0)")
    intertwine.add_argument("--beta", type=parse_int_list, help="Composition beta (default beta_0)")
    _add_quadrature(intertwine)

    field = sub.add_parser("field", help="Tower invariants and sign identities")
    _add_common(field)
    _add_field(field)

    diagram = sub.add_parser("diagram", help="Both rationality-diagram checks")
    _add_common(diagram)
    _add_problem(diagram, k=False)
    _add_field(diagram)
    _add_quadrature(diagram)
    diagram.add_argument("--numeric", action="store_true", help="Also run the quadrature oracle")

    return parser


_OPTION_FLAGS = ("list_coset_reps", "census", "longest", "exhaustive", "profile", "s_at_zero", "numeric")
_VALUE_KEYS = (
    "field", "poly", "n", "k", "eta", "eta_hi", "eta_lo", "beta", "sigma",
    "method", "nodes", "samples", "seed", "tol", "format", "threads", "enumeration_cap",
)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Defaults < config file < flags."""
    path = args.config or config_path_from_env()
    file_values = load_config_file(path, args.subcommand)
    cli_values = {key: getattr(args, key, None) for key in _VALUE_KEYS}
    options = tuple(flag.replace("_", "-") for flag in _OPTION_FLAGS if getattr(args, flag, False))
    cli_values["options"] = options or None
    cli_values["self_test"] = args.self_test or None
    return build_run_config(args.subcommand, file_values, cli_values)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    setup_logging(level)

    try:
        cfg = config_from_args(args)
        try:
            if cfg.self_test:
                document, rows = run_self_test(cfg.subcommand)
            else:
                document, rows = HANDLERS[cfg.subcommand](cfg)
        except VerificationFailure as e:
            document = {"verdict": FAIL, "error": {"type": type(e).__name__, "message": str(e)}}
            rows = [{"error": type(e).__name__, "message": str(e)}]
        print(render(cfg.subcommand, document, rows, cfg.output_format))
        if document["verdict"] != PASS:
            raise VerificationFailure(f"{cfg.subcommand}: verification failed")
    except EiscohError as e:
        logger.error(str(e))
        return e.exit_code
    except ValueError as e:
        logger.error(f"invalid input: {e}")
        return 2
    return 0


def main() -> None:
    sys.exit(run())
