"""
Archimedean intertwining values on the minimal K-type.

Features:
- LocalCharData (eta_lo <= 0, eta_hi >= n) and compositions beta of the gap
- K-type sections phi_beta evaluated on last rows or full matrices
- Closed-form values of M(w_k) phi_beta at w_k as exact (2 pi)-power multiples
- Normalisation by the archimedean L-ratio, identically 1
- Numerical oracle over the (n-k)-fold complex last-row space
  (see eiscoh.quadrature for the three methods)

The self-dual measure on C is twice Lebesgue measure on R^2.
"""

import itertools
import logging
from dataclasses import dataclass
from math import prod
from typing import Iterator, Sequence

import numpy as np
import sympy
from scipy.special import comb

from .config import QuadratureConfig
from .errors import (
    InvariantViolation,
    NonConvergentConfiguration,
    ShapeMismatchError,
    UnbalancedInfinityTypeError,
)

logger = logging.getLogger(__name__)

# Self-dual measure on C relative to dx dy
MEASURE_FACTOR = 2


@dataclass(frozen=True)
class LocalCharData:
    """Infinity type at one complex place, ordered so that eta_lo <= 0 < n <= eta_hi."""

    eta_lo: int
    eta_hi: int
    n: int

    def __post_init__(self):
        if self.eta_lo > 0 or self.eta_hi < self.n:
            raise UnbalancedInfinityTypeError(
                f"local exponents ({self.eta_lo}, {self.eta_hi}) are not balanced for n = {self.n}"
            )

    @property
    def gap(self) -> int:
        return self.eta_hi - self.eta_lo

    def beta0(self) -> "Composition":
        return Composition((0,) * (self.n - 1) + (self.gap,))


def local_data_from_pair(eta_a: int, eta_b: int, n: int) -> LocalCharData:
    """Order a conjugate pair of exponents into (eta_lo, eta_hi)."""
    return LocalCharData(min(eta_a, eta_b), max(eta_a, eta_b), n)


@dataclass(frozen=True)
class Composition:
    """n nonnegative integers beta_1, ..., beta_n."""

    beta: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(int(b) for b in self.beta))
        if any(b < 0 for b in self.beta):
            raise ValueError(f"composition entries must be nonnegative: {self.beta}")

    @property
    def n(self) -> int:
        return len(self.beta)

    @property
    def total(self) -> int:
        return sum(self.beta)

    def __str__(self) -> str:
        return "(" + ",".join(str(b) for b in self.beta) + ")"


def compositions(n: int, g: int) -> Iterator[Composition]:
    """Every beta with n parts summing to g (the index set of the K-type basis)."""
    for bars in itertools.combinations(range(g + n - 1), n - 1):
        edges = (-1,) + bars + (g + n - 1,)
        yield Composition(tuple(edges[i + 1] - edges[i] - 1 for i in range(n)))


def composition_count(n: int, g: int) -> int:
    return int(comb(g + n - 1, n - 1, exact=True))


class KTypeFunction:
    """phi_beta(g) = prod iota(g_nj)^beta_j / (sum |g_nj|_v)^eta_hi, with |z|_v = z zbar."""

    __slots__ = ("beta", "data")

    def __init__(self, beta: Composition, data: LocalCharData):
        if beta.n != data.n:
            raise ShapeMismatchError(f"composition of length {beta.n} for n = {data.n}")
        if beta.total != data.gap:
            raise ValueError(f"beta sums to {beta.total}, expected eta_hi - eta_lo = {data.gap}")
        self.beta = beta
        self.data = data

    @property
    def is_lowest(self) -> bool:
        return self.beta == self.data.beta0()

    def __call__(self, g) -> complex:
        matrix = np.asarray(g, dtype=complex)
        if matrix.shape != (self.data.n, self.data.n):
            raise ShapeMismatchError(f"expected an {self.data.n}x{self.data.n} matrix")
        return phi_eval(self, list(matrix[-1]))

    def integrand(self, k: int) -> "LastRowIntegrand":
        """phi_beta on rows (0, ..., 0, u_k, ..., u_{n-1}, 1)."""
        return LastRowIntegrand(self.beta.beta[k - 1:self.data.n - 1], self.data.eta_hi)


def phi_eval(f: KTypeFunction, last_row: Sequence[complex]) -> complex:
    if len(last_row) != f.data.n:
        raise ShapeMismatchError(f"row of length {len(last_row)} for n = {f.data.n}")
    row = [complex(u) for u in last_row]
    if all(u == 0 for u in row):
        raise ValueError("phi_beta is undefined on the zero row")
    numerator = prod(u**b for u, b in zip(row, f.beta.beta) if b)
    norm = sum((u * u.conjugate()).real for u in row)
    return complex(numerator / norm**f.data.eta_hi)


@dataclass(frozen=True)
class LastRowIntegrand:
    """Vectorised phi_beta on rows (0, ..., 0, u_1, ..., u_m, 1)."""

    exponents: tuple[int, ...]
    eta_hi: int

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def is_absolutely_convergent(self) -> bool:
        return 2 * self.eta_hi > self.degree + 2 * self.dimension

    def __call__(self, u: np.ndarray) -> np.ndarray:
        """u has shape (points, m); returns complex values of shape (points,)."""
        u = np.asarray(u, dtype=complex)
        radius2 = np.sum(u.real**2 + u.imag**2, axis=1)
        log_value = -self.eta_hi * np.log1p(radius2)
        phase = np.zeros_like(radius2)
        with np.errstate(divide="ignore"):
            for j, b in enumerate(self.exponents):
                if b:
                    log_value = log_value + b * np.log(np.abs(u[:, j]))
                    phase = phase + b * np.angle(u[:, j])
        return np.exp(log_value) * np.exp(1j * phase)


@dataclass(frozen=True)
class PiPowerValue:
    """coefficient * (2 pi)^two_pi_power with an exact rational coefficient."""

    coefficient: sympy.Rational
    two_pi_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coefficient", sympy.Rational(self.coefficient))
        if self.coefficient == 0:
            object.__setattr__(self, "two_pi_power", 0)

    @property
    def is_zero(self) -> bool:
        return self.coefficient == 0

    def __mul__(self, other: "PiPowerValue") -> "PiPowerValue":
        return PiPowerValue(self.coefficient * other.coefficient, self.two_pi_power + other.two_pi_power)

    def __truediv__(self, other: "PiPowerValue") -> "PiPowerValue":
        if other.is_zero:
            raise ZeroDivisionError("division by an exact zero")
        return PiPowerValue(self.coefficient / other.coefficient, self.two_pi_power - other.two_pi_power)

    def to_sympy(self):
        return self.coefficient * (2 * sympy.pi) ** self.two_pi_power

    def __float__(self) -> float:
        return float(self.coefficient) * (2 * np.pi) ** self.two_pi_power

    def to_dict(self) -> dict:
        return {
            "coefficient": str(self.coefficient),
            "two_pi_power": self.two_pi_power,
            "value": float(self),
        }

    def __str__(self) -> str:
        if self.is_zero or self.two_pi_power == 0:
            return str(self.coefficient)
        return f"{self.coefficient}*(2*pi)^{self.two_pi_power}"


ONE = PiPowerValue(1)
ZERO = PiPowerValue(0)


def _check_range(k: int, n: int, data: LocalCharData) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    if data.n != n:
        raise ShapeMismatchError(f"local data built for n = {data.n}, used with n = {n}")


def _falling_product(eta_hi: int, depth: int) -> int:
    """(eta_hi - 1)(eta_hi - 2)...(eta_hi - depth)."""
    return prod(eta_hi - j for j in range(1, depth + 1))


def intertwine_closed_form(k: int, n: int, data: LocalCharData, beta: Composition) -> PiPowerValue:
    """(M(w_k) phi_beta)(w_k): (2 pi)^(n-k) / prod_{j=1}^{n-k} (eta_hi - j) for beta_0, else 0."""
    _check_range(k, n, data)
    if beta != data.beta0():
        return ZERO
    return PiPowerValue(sympy.Rational(1, _falling_product(data.eta_hi, n - k)), n - k)


def local_l_ratio(k: int, n: int, data: LocalCharData) -> PiPowerValue:
    """L(k-n, eta_v)/L(0, eta_v) through the Gamma recursion."""
    _check_range(k, n, data)
    return PiPowerValue(sympy.Rational(1, _falling_product(data.eta_hi, n - k)), n - k)


def normalized_value(k: int, n: int, data: LocalCharData) -> PiPowerValue:
    """(N(w_k) phi_beta0)(w_k); exactly 1."""
    value = intertwine_closed_form(k, n, data, data.beta0()) / local_l_ratio(k, n, data)
    if value != ONE:
        raise InvariantViolation(f"normalized intertwining value is {value}, expected 1")
    return value


def closed_form_telescoping(k: int, n: int, data: LocalCharData) -> PiPowerValue:
    """closed_form(k) / closed_form(k+1); equals 2 pi / (eta_hi - (n-k))."""
    if not 1 <= k < n:
        raise ValueError(f"telescoping needs 1 <= k < n, got k={k}, n={n}")
    beta0 = data.beta0()
    return intertwine_closed_form(k, n, data, beta0) / intertwine_closed_form(k + 1, n, data, beta0)


@dataclass(frozen=True)
class NumericEstimate:
    value: complex
    error: float
    method: str
    points: int

    def to_dict(self) -> dict:
        return {
            "value": [float(self.value.real), float(self.value.imag)],
            "error_bound": float(self.error),
            "method": self.method,
            "points": self.points,
        }


def intertwine_numeric(
    k: int,
    n: int,
    data: LocalCharData,
    beta: Composition,
    quad: QuadratureConfig | None = None,
) -> NumericEstimate:
    """
    Integrate phi_beta over the rows (0, ..., 0, u_k, ..., u_{n-1}, 1).

    Rows with a nonzero exponent before position k vanish identically.
    """
    from .quadrature import create_method

    _check_range(k, n, data)
    quad = quad or QuadratureConfig()
    f = KTypeFunction(beta, data)

    if data.eta_hi <= n - k:
        raise NonConvergentConfiguration(f"eta_hi = {data.eta_hi} must exceed n - k = {n - k}")

    if k == n:
        return NumericEstimate(phi_eval(f, [0] * (n - 1) + [1]), 0.0, quad.method, 1)
    if any(beta.beta[: k - 1]):
        return NumericEstimate(0j, 0.0, quad.method, 0)

    integrand = f.integrand(k)
    if not integrand.is_absolutely_convergent():
        raise NonConvergentConfiguration(
            f"phi_{beta} is not integrable over C^{integrand.dimension}: "
            f"need 2*eta_hi > {integrand.degree + 2 * integrand.dimension}"
        )

    method = create_method(quad)
    result = method.integrate(integrand)
    logger.debug(
        f"intertwine_numeric k={k} n={n} beta={beta} via {method.method_name}: "
        f"{result.value:.12g} +/- {result.error:.2e} ({result.points} points)"
    )
    return NumericEstimate(result.value, result.error, method.method_name, result.points)
