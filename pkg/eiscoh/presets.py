"""
Built-in CM towers and the parser for custom ones.

Presets (t = zeta + 1/zeta, k1 = k0[zeta] / (zeta^2 - t zeta + 1)):
- gauss:           k = k1 = Q(i), k0 = Q
- zeta5:           k = k1 = Q(zeta_5), k0 = Q(t), t^2 + t - 1
- zeta8:           k = k1 = Q(zeta_8), k0 = Q(t), t^2 - 2
- zeta12:          k = k1 = Q(zeta_12), k0 = Q(t), t^2 - 3
- gauss-root-1pi:  k = Q(i)[theta] / (theta^2 - (1 + i)), k1 = Q(i), k0 = Q

The last one has [k:k1] = 2 and Nabla_k = 4 sqrt(2), so sigma(Nabla)/Nabla
takes both signs; its Galois elements are (a mod 8, lift bit b).
"""

import logging
import re

import mpmath
import sympy

from .cmfield import FieldLayer, FieldTower, GaloisGenerator, kronecker_character
from .config import MP_DIGITS
from .errors import ConfigError

logger = logging.getLogger(__name__)


# Expected invariants: |delta_k|, P^2, c^2
PRESET_INVARIANTS = {
    "gauss": (4, 4, 1),
    "zeta5": (125, 5, 25),
    "zeta8": (256, 4, 64),
    "zeta12": (144, 1, 144),
    "gauss-root-1pi": (512, 16, 1),
}

# Minimal polynomial of t = zeta + 1/zeta, constant term first
_REAL_SUBFIELDS = {
    "zeta5": (5, [-1, 1, 1]),
    "zeta8": (8, [-2, 0, 1]),
    "zeta12": (12, [-3, 0, 1]),
}


def _units(m: int) -> list[int]:
    return [a for a in range(2, m) if sympy.gcd(a, m) == 1]


def cyclotomic_action(a: int, rational_k0: bool):
    """sigma_a: zeta -> zeta^a on the chain (t, zeta, k-value)."""

    def act(chain: tuple) -> tuple:
        t, zeta, top = chain
        image = zeta**a
        return (t if rational_k0 else image + 1 / image, image, top)

    return act


def cyclotomic_generators(m: int, rational_k0: bool) -> list[GaloisGenerator]:
    generators = []
    for a in _units(m):
        name = "conj" if a == m - 1 else f"a{a}"
        generators.append(
            GaloisGenerator(name, cyclotomic_action(a, rational_k0), (a, m), is_conjugation=a == m - 1)
        )
    return generators


def root_1pi_action(a: int, b: int):
    """
    sigma_(a, b) on Q(i, sqrt(1+i), sqrt(1-i)).

    sigma(i) = i^a, sigma(sqrt 2) = chi_8(a) sqrt 2, sigma(r) = (-1)^b r or
    (-1)^b rbar as a = 1 or 3 mod 4, and sigma(rbar) = sigma(sqrt 2) / sigma(r).
    """

    def act(chain: tuple) -> tuple:
        t, i_value, theta = chain
        r = mpmath.sqrt(mpmath.mpc(1, 1))
        rbar = mpmath.conj(r)
        image_r = (-1) ** b * (r if a % 4 == 1 else rbar)
        image_rbar = kronecker_character(8, a) * mpmath.sqrt(2) / image_r
        table = [(r, image_r), (-r, -image_r), (rbar, image_rbar), (-rbar, -image_rbar)]
        _, image = min(table, key=lambda pair: abs(pair[0] - theta))
        return (t, i_value**a, image)

    return act


def root_1pi_generators() -> list[GaloisGenerator]:
    generators = [GaloisGenerator("flip", root_1pi_action(1, 1), (1, 8))]
    for a in (3, 5, 7):
        name = "conj" if a == 7 else f"a{a}"
        generators.append(GaloisGenerator(name, root_1pi_action(a, 0), (a, 8), is_conjugation=a == 7))
        generators.append(GaloisGenerator(f"a{a}'", root_1pi_action(a, 1), (a, 8)))
    return generators


def gauss_tower(digits: int = MP_DIGITS) -> FieldTower:
    k0 = FieldLayer("k0", [0, 1])
    k1 = FieldLayer("k1", [1, 0, 1], k0)
    k = FieldLayer("k", [0, 1], k1)
    return FieldTower("gauss", k0, k1, k, cyclotomic_modulus=4,
                      generators=cyclotomic_generators(4, True), digits=digits)


def cyclotomic_tower(name: str, digits: int = MP_DIGITS) -> FieldTower:
    m, t_modulus = _REAL_SUBFIELDS[name]
    k0 = FieldLayer("k0", t_modulus)
    k1 = FieldLayer("k1", [1, [0, -1], 1], k0)
    k = FieldLayer("k", [0, 1], k1)
    return FieldTower(name, k0, k1, k, cyclotomic_modulus=m,
                      generators=cyclotomic_generators(m, False), digits=digits)


def root_1pi_tower(digits: int = MP_DIGITS) -> FieldTower:
    k0 = FieldLayer("k0", [0, 1])
    k1 = FieldLayer("k1", [1, 0, 1], k0)
    k = FieldLayer("k", [[-1, -1], 0, 1], k1)
    return FieldTower("gauss-root-1pi", k0, k1, k, cyclotomic_modulus=8,
                      generators=root_1pi_generators(), digits=digits)


PRESETS = {
    "gauss": gauss_tower,
    "zeta5": lambda digits=MP_DIGITS: cyclotomic_tower("zeta5", digits),
    "zeta8": lambda digits=MP_DIGITS: cyclotomic_tower("zeta8", digits),
    "zeta12": lambda digits=MP_DIGITS: cyclotomic_tower("zeta12", digits),
    "gauss-root-1pi": root_1pi_tower,
}


# =============================================================================
# CUSTOM TOWERS
# =============================================================================

def _split_top_level(text: str, separator: str) -> list[str]:
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ConfigError(f"unbalanced brackets in {text!r}")
        if ch == separator and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise ConfigError(f"unbalanced brackets in {text!r}")
    parts.append("".join(current))
    return [p.strip() for p in parts]


def parse_coefficient(token: str):
    """A rational, or [c0; c1; ...] for an element of the layer below (constant first)."""
    token = token.strip()
    if token.startswith("[") and token.endswith("]"):
        return [parse_coefficient(part) for part in _split_top_level(token[1:-1], ";")]
    if not re.fullmatch(r"[-+]?\d+(/\d+)?", token):
        raise ConfigError(f"bad coefficient {token!r}")
    return sympy.Rational(token)


def parse_layer(text: str) -> list:
    """Coefficients written from the leading term down; returned constant term first."""
    coefficients = [parse_coefficient(tok) for tok in _split_top_level(text, ",") if tok]
    if len(coefficients) < 2:
        raise ConfigError(f"layer {text!r} needs at least two coefficients")
    return list(reversed(coefficients))


def parse_poly_tower(spec: str, digits: int = MP_DIGITS) -> FieldTower:
    """
    Build a tower from 'k0 | k1 | k'.

    Example: '1,0,-2 | 1,[0;-1],1 | 1,0' is k0 = Q(sqrt 2), k1 = k0(zeta_8), k = k1.
    """
    layers = [part.strip() for part in spec.split("|")]
    if len(layers) != 3:
        raise ConfigError(f"--poly needs three layers 'k0 | k1 | k', got {len(layers)}")
    k0_modulus = parse_layer(layers[0])
    x = sympy.Symbol("x")
    if not sympy.Poly(list(reversed(k0_modulus)), x).is_irreducible:
        raise ConfigError(f"k0 modulus {layers[0]!r} is reducible over Q")
    try:
        k0 = FieldLayer("k0", k0_modulus)
        k1 = FieldLayer("k1", parse_layer(layers[1]), k0)
        k = FieldLayer("k", parse_layer(layers[2]), k1)
    except ValueError as e:
        raise ConfigError(f"malformed tower {spec!r}: {e}") from e
    return FieldTower("custom", k0, k1, k, digits=digits)


def load_tower(name: str | None = None, poly: str | None = None, digits: int = MP_DIGITS) -> FieldTower:
    """Preset by name, or a custom tower when `poly` is given."""
    if poly:
        logger.info(f"Building custom tower from {poly!r}")
        return parse_poly_tower(poly, digits)
    if name not in PRESETS:
        raise ConfigError(f"unknown field preset {name!r}; choose from {', '.join(PRESETS)}")
    return PRESETS[name](digits)
