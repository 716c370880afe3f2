"""
Torus characters, co-root pairings and formal L-ratios.

Features:
- Affine exponents a + b*s in a formal variable s, specialised on demand
- Lambda^(k)_{eta,s} as per-coordinate (eta-power, |.|-power) data
- Co-root pairings and the Langlands recipe L(0, chi)/L(1, chi) per inverted root
- FormalLRatio: multisets of L-symbols times a monomial in period atoms
- Constant-term coefficients |delta_k|^{(k-n)/2} L(s-n+k, eta)/L(s, eta)
- The critical-value rewrite rule eta -> ^sigma eta on well-formed ratios

L-values are never evaluated; every L-symbol stays formal.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Mapping

import sympy

from .errors import InvariantViolation, NonCriticalAtomError, ShapeMismatchError
from .kostant import InfinityType, Weight, sigma_on_infinity_type
from .weyl import Root, cycle

logger = logging.getLogger(__name__)

UNNORMALIZED = "unnormalized"
NORMALIZED = "normalized"

# Formal period atoms
ABS_DISC_SQRT = "abs_disc_sqrt"  # |delta_k|^(1/2)
DELTA = "Delta"
NABLA = "Nabla"
HARDER_PERIOD = "P"  # i^([k:Q]/2) * Delta_k
TWO_PI = "two_pi"
IMAGINARY_UNIT = "i"
PERIOD_ATOMS = (ABS_DISC_SQRT, DELTA, NABLA, HARDER_PERIOD, TWO_PI)


@dataclass(frozen=True, order=True)
class Affine:
    """The exponent a + b*s."""

    a: int
    b: int = 0

    def __add__(self, other: "Affine | int") -> "Affine":
        if isinstance(other, int):
            return Affine(self.a + other, self.b)
        return Affine(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Affine | int") -> "Affine":
        if isinstance(other, int):
            return Affine(self.a - other, self.b)
        return Affine(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "Affine":
        return Affine(-self.a, -self.b)

    @property
    def is_constant(self) -> bool:
        return self.b == 0

    def specialize(self, s: int = 0) -> "Affine":
        return Affine(self.a + self.b * s, 0)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        s_part = {1: "s", -1: "-s"}.get(self.b, f"{self.b}s")
        if self.a == 0:
            return s_part
        return f"{s_part}{self.a:+d}"


class HeckeCharSymbol:
    """An algebraic Hecke character: opaque finite part, explicit infinity type."""

    __slots__ = ("name", "infinity_type", "field", "twist")

    def __init__(self, name: str, infinity_type: InfinityType, field: str | None = None, twist=None):
        self.name = name
        self.infinity_type = infinity_type
        self.field = field
        self.twist = twist

    def _key(self) -> tuple:
        twist_key = None if self.twist is None else self.twist.key()
        return (self.name, self.field, frozenset(self.infinity_type.eta.items()), twist_key)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeCharSymbol):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    @property
    def label(self) -> str:
        if self.twist is None:
            return self.name
        return f"^{self.twist.name}{self.name}"

    def __repr__(self) -> str:
        return f"HeckeCharSymbol({self.label}, {self.infinity_type.values()})"


def sigma_character(chi: HeckeCharSymbol, sigma) -> HeckeCharSymbol:
    """^sigma chi: infinity type re-indexed by sigma^-1, twist composed on the left."""
    twist = sigma if chi.twist is None else sigma * chi.twist
    if twist.is_identity():
        twist = None
    return HeckeCharSymbol(chi.name, sigma_on_infinity_type(chi.infinity_type, sigma), chi.field, twist)


@dataclass(frozen=True)
class TorusCharacter:
    """Exponent data of a character of diag(t_1, ..., t_n)."""

    hecke_power: tuple[int, ...]
    abs_power: tuple[Affine, ...]
    induction: str = UNNORMALIZED

    def __post_init__(self):
        if len(self.hecke_power) != len(self.abs_power):
            raise ShapeMismatchError("hecke and |.| exponent vectors differ in length")
        if self.induction not in (UNNORMALIZED, NORMALIZED):
            raise ValueError(f"unknown induction convention {self.induction!r}")

    @property
    def n(self) -> int:
        return len(self.hecke_power)

    @classmethod
    def trivial(cls, n: int) -> "TorusCharacter":
        return cls((0,) * n, (Affine(0),) * n, NORMALIZED)

    def specialize(self, s: int = 0) -> "TorusCharacter":
        return TorusCharacter(self.hecke_power, tuple(a.specialize(s) for a in self.abs_power), self.induction)

    def inverse(self) -> "TorusCharacter":
        return TorusCharacter(tuple(-h for h in self.hecke_power), tuple(-a for a in self.abs_power), self.induction)

    def to_dict(self) -> dict:
        return {
            "hecke_power": list(self.hecke_power),
            "abs_power": [str(a) for a in self.abs_power],
            "induction": self.induction,
        }


@dataclass(frozen=True)
class GL1Character:
    """chi^hecke_power * |.|^abs_power on GL_1."""

    hecke_power: int
    abs_power: Affine

    @property
    def is_trivial(self) -> bool:
        return self.hecke_power == 0 and self.abs_power == Affine(0)

    def __str__(self) -> str:
        parts = []
        if self.hecke_power:
            parts.append("eta" if self.hecke_power == 1 else f"eta^{self.hecke_power}")
        if self.abs_power != Affine(0):
            parts.append(f"|.|^({self.abs_power})")
        return "*".join(parts) or "1"


def lambda_k(eta: HeckeCharSymbol | None, k: int, n: int) -> TorusCharacter:
    """eta^-1(t_k) |t_k|^(-s-k+n) |t_{k+1}|^-1 ... |t_n|^-1."""
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    hecke = [0] * n
    hecke[k - 1] = -1
    powers = [Affine(0)] * n
    powers[k - 1] = Affine(n - k, -1)
    for j in range(k + 1, n + 1):
        powers[j - 1] = Affine(-1)
    return TorusCharacter(tuple(hecke), tuple(powers))


def coroot_pairing(lam: TorusCharacter, alpha: Root) -> GL1Character:
    """
    Lambda o alpha^vee for alpha = e_i - e_j.

    Unnormalized characters are shifted by -<rho, alpha^vee> = i - j so that
    Lambda_{eta,s} o (e_i - e_n)^vee = eta |.|^(s-n+i).
    """
    i, j = alpha.i, alpha.j
    if max(i, j) > lam.n:
        raise ShapeMismatchError(f"root {alpha} outside GL_{lam.n}")
    hecke = lam.hecke_power[i - 1] - lam.hecke_power[j - 1]
    power = lam.abs_power[i - 1] - lam.abs_power[j - 1]
    if lam.induction == UNNORMALIZED:
        power = power + (i - j)
    return GL1Character(hecke, power)


def target_weight(eta: InfinityType, k: int, n: int) -> Weight:
    """
    Algebraic weight of (Lambda^(k)_{eta,inf})^-1 at each embedding.

    With |z|_v = z zbar every |.|-power lands on both embeddings of a place,
    giving eta_iota - (n-k) at k, +1 after k and 0 before k.
    """
    lam = lambda_k(None, k, n).specialize(0)
    return Weight({
        label: tuple(-h * value - a.a for h, a in zip(lam.hecke_power, lam.abs_power))
        for label, value in eta.eta.items()
    })


# =============================================================================
# FORMAL ALGEBRA
# =============================================================================

def _normalize_coefficient(value):
    return sympy.expand_complex(sympy.sympify(value))


class PeriodMonomial:
    """coefficient * prod(atom^exponent) with coefficient in Q(i) and integer exponents."""

    __slots__ = ("coefficient", "atoms")

    def __init__(self, coefficient=1, atoms: Mapping[str, int] | None = None):
        coefficient = sympy.sympify(coefficient)
        clean: dict[str, int] = {}
        for name, exponent in (atoms or {}).items():
            exponent = int(exponent)
            if name == IMAGINARY_UNIT:
                coefficient = coefficient * sympy.I**exponent
                continue
            if name not in PERIOD_ATOMS:
                raise ValueError(f"unknown period atom {name!r}")
            if exponent:
                clean[name] = exponent
        self.coefficient = _normalize_coefficient(coefficient)
        self.atoms = tuple(sorted(clean.items()))

    @classmethod
    def atom(cls, name: str, exponent: int = 1) -> "PeriodMonomial":
        return cls(1, {name: exponent})

    def exponent(self, name: str) -> int:
        return dict(self.atoms).get(name, 0)

    def __mul__(self, other: "PeriodMonomial") -> "PeriodMonomial":
        atoms = Counter(dict(self.atoms))
        atoms.update(dict(other.atoms))
        return PeriodMonomial(self.coefficient * other.coefficient, atoms)

    def __pow__(self, exponent: int) -> "PeriodMonomial":
        return PeriodMonomial(
            self.coefficient**exponent,
            {name: e * exponent for name, e in self.atoms},
        )

    def inverse(self) -> "PeriodMonomial":
        return self ** -1

    def __truediv__(self, other: "PeriodMonomial") -> "PeriodMonomial":
        return self * other.inverse()

    def substitute(self, name: str, replacement: "PeriodMonomial") -> "PeriodMonomial":
        """Replace atom^e by replacement^e."""
        exponent = self.exponent(name)
        if not exponent:
            return self
        rest = PeriodMonomial(self.coefficient, {a: e for a, e in self.atoms if a != name})
        return rest * replacement**exponent

    @property
    def is_rational(self) -> bool:
        return not self.atoms and self.coefficient.is_rational

    def is_one(self) -> bool:
        return not self.atoms and self.coefficient == 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, PeriodMonomial):
            return NotImplemented
        return self.atoms == other.atoms and sympy.expand(self.coefficient - other.coefficient) == 0

    def __hash__(self) -> int:
        return hash((str(self.coefficient), self.atoms))

    def __str__(self) -> str:
        parts = [] if self.coefficient == 1 and self.atoms else [f"({self.coefficient})"]
        parts += [name if e == 1 else f"{name}^{e}" for name, e in self.atoms]
        return "*".join(parts)

    def to_dict(self) -> dict:
        return {"coefficient": str(self.coefficient), "atoms": {name: e for name, e in self.atoms}}


@dataclass(frozen=True)
class LSymbol:
    """L(offset, chi^power); power 0 stands for the trivial character."""

    offset: Affine
    character: HeckeCharSymbol | None
    power: int = 1

    def specialize(self, s: int = 0) -> "LSymbol":
        return LSymbol(self.offset.specialize(s), self.character, self.power)

    def __str__(self) -> str:
        if self.character is None or self.power == 0:
            name = "1"
        else:
            name = self.character.label if self.power == 1 else f"{self.character.label}^{self.power}"
        return f"L({self.offset}, {name})"


class FormalLRatio:
    """scalar * prod(numerator L-symbols) / prod(denominator L-symbols), kept cancelled."""

    __slots__ = ("numerator", "denominator", "scalar")

    def __init__(self, numerator=(), denominator=(), scalar: PeriodMonomial | None = None):
        num = Counter(numerator)
        den = Counter(denominator)
        common = num & den
        self.numerator = num - common
        self.denominator = den - common
        self.scalar = scalar if scalar is not None else PeriodMonomial()

    @classmethod
    def one(cls) -> "FormalLRatio":
        return cls()

    @classmethod
    def from_scalar(cls, scalar: PeriodMonomial) -> "FormalLRatio":
        return cls((), (), scalar)

    def __mul__(self, other: "FormalLRatio | PeriodMonomial") -> "FormalLRatio":
        if isinstance(other, PeriodMonomial):
            other = FormalLRatio.from_scalar(other)
        return FormalLRatio(
            self.numerator + other.numerator,
            self.denominator + other.denominator,
            self.scalar * other.scalar,
        )

    def inverse(self) -> "FormalLRatio":
        return FormalLRatio(self.denominator, self.numerator, self.scalar.inverse())

    def __truediv__(self, other: "FormalLRatio") -> "FormalLRatio":
        return self * other.inverse()

    def specialize(self, s: int = 0) -> "FormalLRatio":
        num: Counter = Counter()
        den: Counter = Counter()
        for sym, m in self.numerator.items():
            num[sym.specialize(s)] += m
        for sym, m in self.denominator.items():
            den[sym.specialize(s)] += m
        return FormalLRatio(num, den, self.scalar)

    def l_ratio_part(self) -> "FormalLRatio":
        return FormalLRatio(self.numerator, self.denominator)

    def is_one(self) -> bool:
        return not self.numerator and not self.denominator and self.scalar.is_one()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalLRatio):
            return NotImplemented
        return (
            +self.numerator == +other.numerator
            and +self.denominator == +other.denominator
            and self.scalar == other.scalar
        )

    def __hash__(self) -> int:
        return hash((frozenset((+self.numerator).items()), frozenset((+self.denominator).items()), self.scalar))

    @staticmethod
    def _render(symbols: Counter) -> list[str]:
        return sorted(str(sym) for sym, m in symbols.items() for _ in range(m))

    def __str__(self) -> str:
        num = "*".join(self._render(self.numerator)) or "1"
        den = "*".join(self._render(self.denominator))
        body = num if not den else f"{num}/({den})"
        return body if self.scalar.is_one() else f"{self.scalar}*{body}"

    def to_dict(self) -> dict:
        return {
            "numerator": self._render(self.numerator),
            "denominator": self._render(self.denominator),
            "scalar": self.scalar.to_dict(),
        }


def l_ratio(top: Affine, bottom: Affine, chi: HeckeCharSymbol) -> FormalLRatio:
    """L(top, chi) / L(bottom, chi)."""
    return FormalLRatio([LSymbol(top, chi)], [LSymbol(bottom, chi)])


def langlands_factor(pairing: GL1Character, chi: HeckeCharSymbol) -> FormalLRatio:
    """L(0, chi^h |.|^m) / L(1, chi^h |.|^m) = L(m, chi^h) / L(m+1, chi^h)."""
    character = chi if pairing.hecke_power else None
    return FormalLRatio(
        [LSymbol(pairing.abs_power, character, pairing.hecke_power)],
        [LSymbol(pairing.abs_power + 1, character, pairing.hecke_power)],
    )


def gk_product(k: int, n: int, eta: HeckeCharSymbol) -> FormalLRatio:
    """
    Product of Langlands factors over the inversion roots of w_k.

    Asserts the telescoped form L(s-n+k, eta)/L(s, eta).
    """
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    lam = lambda_k(eta, n, n)
    ratio = FormalLRatio.one()
    for i, j in sorted(cycle(k, n).inversion_set()):
        ratio = ratio * langlands_factor(coroot_pairing(lam, Root(i, j)), eta)

    expected = FormalLRatio.one() if k == n else l_ratio(Affine(k - n, 1), Affine(0, 1), eta)
    if ratio != expected:
        raise InvariantViolation(f"Gindikin-Karpelevich product {ratio} does not telescope to {expected}")
    return ratio


def constant_term_coefficients(n: int, eta: HeckeCharSymbol, s_at_zero: bool = False) -> list[FormalLRatio]:
    """|delta_k|^((k-n)/2) L(s-n+k, eta)/L(s, eta) for k = 1..n."""
    coefficients = []
    for k in range(1, n + 1):
        scalar = PeriodMonomial.atom(ABS_DISC_SQRT, k - n)
        coefficient = gk_product(k, n, eta) * scalar
        coefficients.append(coefficient.specialize(0) if s_at_zero else coefficient)
    return coefficients


def constant_term_expansion(n: int, eta: HeckeCharSymbol, s_at_zero: bool = False) -> list[dict]:
    """(w_k, Lambda^(k), coefficient_k) for every coset representative."""
    coefficients = constant_term_coefficients(n, eta, s_at_zero)
    terms = []
    for k, coefficient in enumerate(coefficients, start=1):
        lam = lambda_k(eta, k, n)
        terms.append({
            "k": k,
            "w_k": cycle(k, n).one_line(),
            "lambda_k": (lam.specialize(0) if s_at_zero else lam).to_dict(),
            "coefficient": coefficient.to_dict(),
            "coefficient_text": str(coefficient),
        })
    return terms


def critical_offsets(n: int) -> list[int]:
    """0, -1, ..., -n."""
    return list(range(0, -n - 1, -1))


def harder_block(eta: HeckeCharSymbol, k: int, n: int) -> FormalLRatio:
    """P^(n-k) L(k-n, eta)/L(0, eta) with P = i^([k:Q]/2) Delta_k."""
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    if k == n:
        return FormalLRatio.one()
    return l_ratio(Affine(k - n), Affine(0), eta) * PeriodMonomial.atom(HARDER_PERIOD, n - k)


def _check_critical(r: FormalLRatio, n: int | None) -> None:
    scalar = r.scalar
    foreign = [name for name, _ in scalar.atoms if name != HARDER_PERIOD]
    if foreign:
        raise NonCriticalAtomError(f"period atoms {foreign} have no critical-value rule")
    if not scalar.coefficient.is_rational:
        raise NonCriticalAtomError(f"coefficient {scalar.coefficient} is not rational")

    depth: Counter = Counter()
    lows = set(critical_offsets(n)) if n is not None else None
    for symbol, multiplicity in r.numerator.items():
        if symbol.character is None or symbol.power != 1:
            raise NonCriticalAtomError(f"{symbol} is not an L-value of a Hecke character")
        if not symbol.offset.is_constant or symbol.offset.a > 0:
            raise NonCriticalAtomError(f"{symbol} is not at a critical point")
        if lows is not None and symbol.offset.a not in lows:
            raise NonCriticalAtomError(f"{symbol} lies outside the critical strip for n = {n}")
        depth[symbol.character] += multiplicity
    for symbol, multiplicity in r.denominator.items():
        if symbol.character is None or symbol.power != 1 or symbol.offset != Affine(0):
            raise NonCriticalAtomError(f"denominator {symbol} is not L(0, chi)")
        depth[symbol.character] -= multiplicity

    unpaired = [chi.label for chi, count in depth.items() if count != 0]
    if unpaired:
        raise NonCriticalAtomError(f"unpaired L-symbols for {unpaired}")

    shift = sum(-symbol.offset.a * m for symbol, m in r.numerator.items())
    if shift != scalar.exponent(HARDER_PERIOD):
        raise NonCriticalAtomError(
            f"L-ratio needs period power P^{shift}, found P^{scalar.exponent(HARDER_PERIOD)}"
        )


def sigma_on_ratio(r: FormalLRatio, sigma, n: int | None = None) -> FormalLRatio:
    """
    Apply sigma to a product of Harder blocks P^m L(-m, chi)/L(0, chi).

    Offsets and the period power are fixed; every character chi becomes
    ^sigma chi. Anything else is refused as a non-critical atom.
    """
    _check_critical(r, n)

    def twist(symbols: Counter) -> Counter:
        return Counter({
            LSymbol(sym.offset, sigma_character(sym.character, sigma), sym.power): m
            for sym, m in symbols.items()
        })

    return FormalLRatio(twist(r.numerator), twist(r.denominator), r.scalar)
