"""
Exact arithmetic for CM towers k > k1 > k0.

Features:
- Layered number fields: each layer is a monic polynomial over the layer below,
  elements are coefficient tuples, the bottom is Q (sympy Rationals)
- Relative traces, norms (Leibniz determinants, no division) and trace-form
  discriminants; absolute discriminants through sympy Matrix determinants
- Embeddings as chains of generator values from mpmath polyroots, with working
  precision raised until every root is isolated; labels tau_i_j / taubar_i_j
  and the total order tau_1_1, taubar_1_1, tau_1_2, ...
- QuadSurd values q*sqrt(d) on the principal branch for Delta_k, Nabla_k, |delta_k|^(1/2)
- Galois elements as permutations of embedding labels, the sigma = sigma2 o sigma1
  decomposition and its signature, quadratic characters from Jacobi symbols
"""

import logging
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Callable, Sequence

import mpmath
import sympy
from sympy import factorint, jacobi_symbol

from .config import MP_DIGITS, NUMERIC_CHECK_TOLERANCE
from .errors import (
    ConfigError,
    EmbeddingMismatchError,
    IncompatibleSigmaError,
    InvariantViolation,
    MissingCyclotomicData,
    NotRationalSquare,
    SingularBasisError,
)
from .weyl import Permutation, all_permutations

logger = logging.getLogger(__name__)

MAX_LAYER_DEGREE = 6
MAX_ISOLATION_DIGITS = 480

_precision_lock = threading.RLock()


@contextmanager
def working_precision(dps: int):
    """mpmath precision is process-global; hold the lock while it is raised."""
    with _precision_lock, mpmath.workdps(dps):
        yield


# =============================================================================
# LAYERED FIELDS
# =============================================================================

class RationalField:
    """Q as the bottom layer; elements are sympy Rationals."""

    name = "Q"
    degree = 1
    absolute_degree = 1
    base = None

    def coerce(self, x) -> sympy.Rational:
        if isinstance(x, (list, tuple)):
            if len(x) != 1:
                raise ValueError(f"cannot read {x!r} as a rational number")
            x = x[0]
        return sympy.Rational(x)

    def zero(self):
        return sympy.Integer(0)

    def one(self):
        return sympy.Integer(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a) -> bool:
        return a == 0

    def from_rational(self, q):
        return sympy.Rational(q)

    def absolute_norm(self, a):
        return a

    def absolute_trace(self, a):
        return a

    def evaluate(self, a, chain=()):
        return mpmath.mpf(int(a.p)) / int(a.q)

    def layers(self) -> list:
        return []

    def __repr__(self) -> str:
        return "Q"


QQ = RationalField()


class FieldLayer:
    """base[x] / (modulus), modulus monic and given from the constant term up."""

    def __init__(self, name: str, modulus: Sequence, base=QQ):
        self.name = name
        self.base = base
        coefficients = tuple(base.coerce(c) for c in modulus)
        if len(coefficients) < 2:
            raise ConfigError(f"layer {name}: modulus must have degree at least 1")
        if coefficients[-1] != base.one():
            raise ConfigError(f"layer {name}: modulus must be monic")
        self.modulus = coefficients
        self.degree = len(coefficients) - 1
        if self.degree > MAX_LAYER_DEGREE:
            raise ConfigError(f"layer {name}: relative degree {self.degree} exceeds {MAX_LAYER_DEGREE}")
        self.absolute_degree = self.degree * base.absolute_degree

    def __repr__(self) -> str:
        return f"FieldLayer({self.name}, degree {self.degree} over {self.base.name})"

    def layers(self) -> list:
        return self.base.layers() + [self]

    # -- construction ---------------------------------------------------------

    def coerce(self, x) -> tuple:
        if isinstance(x, (list, tuple)):
            if len(x) > self.degree:
                raise ValueError(f"{self.name}: {len(x)} coefficients for degree {self.degree}")
            coeffs = [self.base.coerce(c) for c in x]
            coeffs += [self.base.zero()] * (self.degree - len(coeffs))
            return tuple(coeffs)
        return self.lift(self.base.coerce(x))

    def element(self, *coefficients) -> tuple:
        return self.coerce(list(coefficients))

    def zero(self) -> tuple:
        return (self.base.zero(),) * self.degree

    def one(self) -> tuple:
        return self.lift(self.base.one())

    def lift(self, b) -> tuple:
        return (b,) + (self.base.zero(),) * (self.degree - 1)

    def gen(self) -> tuple:
        if self.degree == 1:
            return (self.base.neg(self.modulus[0]),)
        return (self.base.zero(), self.base.one()) + (self.base.zero(),) * (self.degree - 2)

    def from_rational(self, q) -> tuple:
        return self.lift(self.base.from_rational(q))

    # -- arithmetic -----------------------------------------------------------

    def add(self, a, b) -> tuple:
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b) -> tuple:
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a) -> tuple:
        return tuple(self.base.neg(x) for x in a)

    def is_zero(self, a) -> bool:
        return all(self.base.is_zero(x) for x in a)

    def mul(self, a, b) -> tuple:
        base = self.base
        d = self.degree
        product = [base.zero()] * (2 * d - 1)
        for i, x in enumerate(a):
            if base.is_zero(x):
                continue
            for j, y in enumerate(b):
                product[i + j] = base.add(product[i + j], base.mul(x, y))
        for top in range(2 * d - 2, d - 1, -1):
            c = product[top]
            if base.is_zero(c):
                continue
            for i, m in enumerate(self.modulus):
                product[top - d + i] = base.sub(product[top - d + i], base.mul(c, m))
        return tuple(product[:d])

    def power(self, a, exponent: int) -> tuple:
        if exponent < 0:
            raise ValueError("negative powers are not supported in layered arithmetic")
        result = self.one()
        for _ in range(exponent):
            result = self.mul(result, a)
        return result

    # -- relative invariants --------------------------------------------------

    def multiplication_matrix(self, a) -> list[list]:
        """Matrix over the base: column j holds the coordinates of a * x^j."""
        columns = []
        basis_vector = self.one()
        x = self.gen() if self.degree > 1 else None
        for _ in range(self.degree):
            columns.append(self.mul(a, basis_vector))
            if x is not None:
                basis_vector = self.mul(basis_vector, x)
        return [[columns[j][i] for j in range(self.degree)] for i in range(self.degree)]

    def trace(self, a):
        m = self.multiplication_matrix(a)
        total = self.base.zero()
        for i in range(self.degree):
            total = self.base.add(total, m[i][i])
        return total

    def norm(self, a):
        return determinant(self.base, self.multiplication_matrix(a))

    def absolute_trace(self, a) -> sympy.Rational:
        return self.base.absolute_trace(self.trace(a))

    def absolute_norm(self, a) -> sympy.Rational:
        return self.base.absolute_norm(self.norm(a))

    # -- numerics -------------------------------------------------------------

    def evaluate(self, a, chain):
        """Image of a under the embedding whose generator values are `chain`."""
        gen_value = chain[-1]
        lower = chain[:-1]
        total = mpmath.mpc(0)
        for j, c in enumerate(a):
            total += self.base.evaluate(c, lower) * gen_value**j
        return total

    def numeric_roots(self, base_chain, digits: int) -> list:
        """Roots of the modulus under one embedding of the base, isolated at `digits`."""
        dps = digits + 10
        while dps <= MAX_ISOLATION_DIGITS:
            with working_precision(dps):
                coeffs = [self.base.evaluate(c, base_chain) for c in reversed(self.modulus)]
                if self.degree == 1:
                    return [mpmath.mpc(-coeffs[1] / coeffs[0])]
                roots, err = mpmath.polyroots(coeffs, maxsteps=200, extraprec=2 * dps, error=True)
                separation = min(
                    abs(roots[a] - roots[b])
                    for a in range(len(roots))
                    for b in range(a + 1, len(roots))
                )
                if err * 4 < separation and err < mpmath.mpf(10) ** (-digits - 5):
                    return [mpmath.mpc(r) for r in roots]
            logger.debug(f"{self.name}: roots not isolated at {dps} digits, raising precision")
            dps *= 2
        raise ConfigError(f"layer {self.name}: could not isolate the roots of the modulus")


def determinant(ring, matrix: list[list]):
    """Leibniz expansion over any layer (division free)."""
    n = len(matrix)
    if n == 0:
        return ring.one()
    total = ring.zero()
    for perm in all_permutations(n):
        term = ring.one()
        for row in range(n):
            term = ring.mul(term, matrix[row][perm(row + 1) - 1])
            if ring.is_zero(term):
                break
        if ring.is_zero(term):
            continue
        total = ring.add(total, term) if perm.sign() > 0 else ring.sub(total, term)
    return total


def relative_trace(upper, lower, a):
    """tr_{upper/lower}(a) through the chain of layers in between."""
    value, layer = a, upper
    while layer is not lower:
        if layer is QQ or layer is None:
            raise ValueError(f"{lower!r} is not below {upper!r}")
        value, layer = layer.trace(value), layer.base
    return value


def relative_norm(upper, lower, a):
    value, layer = a, upper
    while layer is not lower:
        if layer is QQ or layer is None:
            raise ValueError(f"{lower!r} is not below {upper!r}")
        value, layer = layer.norm(value), layer.base
    return value


def relative_discriminant(upper, lower, basis: Sequence):
    """det[tr_{upper/lower}(x_i x_j)], an element of `lower`."""
    relative_degree = upper.absolute_degree // lower.absolute_degree
    if len(basis) != relative_degree:
        raise SingularBasisError(f"basis of size {len(basis)} for a relative degree {relative_degree} extension")
    form = [
        [relative_trace(upper, lower, upper.mul(x, y)) for y in basis]
        for x in basis
    ]
    disc = determinant(lower, form)
    if lower.is_zero(disc):
        raise SingularBasisError(f"basis of {upper.name} over {lower.name} is linearly dependent")
    return disc


# =============================================================================
# QUADRATIC SURDS
# =============================================================================

def squarefree_split(value: int) -> tuple[int, int]:
    """value = f^2 * d with d square-free (sign kept in d)."""
    if value == 0:
        return 0, 1
    f, d = 1, -1 if value < 0 else 1
    for prime, exponent in factorint(abs(value)).items():
        f *= prime ** (exponent // 2)
        if exponent % 2:
            d *= prime
    return f, d


@dataclass(frozen=True)
class QuadSurd:
    """q * sqrt(d), q rational, d square-free, sqrt on the principal branch."""

    q: sympy.Rational
    d: int = 1

    def __post_init__(self):
        q = sympy.Rational(self.q)
        d = int(self.d)
        if q == 0:
            d = 1
        else:
            f, d = squarefree_split(d)
            q = q * f
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)

    @classmethod
    def sqrt(cls, radicand) -> "QuadSurd":
        """Principal square root of a rational."""
        r = sympy.Rational(radicand)
        return cls(sympy.Rational(1, r.q), int(r.p * r.q))

    @classmethod
    def imaginary_unit(cls) -> "QuadSurd":
        return cls(1, -1)

    @property
    def is_rational(self) -> bool:
        return self.d == 1

    def __mul__(self, other: "QuadSurd") -> "QuadSurd":
        sign = -1 if self.d < 0 and other.d < 0 else 1
        product = self.d * other.d
        return QuadSurd(sign * self.q * other.q, abs(product) if sign < 0 else product)

    def __pow__(self, exponent: int) -> "QuadSurd":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = QuadSurd(1)
        for _ in range(exponent):
            result = result * self
        return result

    def inverse(self) -> "QuadSurd":
        if self.q == 0:
            raise ZeroDivisionError("inverse of zero surd")
        return QuadSurd(1 / (self.q * self.d), self.d)

    def square(self) -> sympy.Rational:
        return self.q**2 * self.d

    def value(self):
        root = mpmath.sqrt(mpmath.mpf(self.d)) if self.d > 0 else mpmath.mpc(0, 1) * mpmath.sqrt(-self.d)
        return mpmath.mpf(int(self.q.p)) / int(self.q.q) * root

    def to_dict(self) -> dict:
        return {"q": str(self.q), "d": self.d, "text": str(self)}

    def __str__(self) -> str:
        if self.d == 1:
            return str(self.q)
        return f"{self.q}*sqrt({self.d})"


# =============================================================================
# EMBEDDINGS
# =============================================================================

@dataclass(frozen=True)
class Embedding:
    """One complex embedding of k, with the generator value of every layer."""

    label: str
    i: int
    j: int
    bar: bool
    chain: tuple = field(compare=False, repr=False)

    @property
    def k1_label(self) -> str:
        return f"{'taubar' if self.bar else 'tau'}_{self.i}"


class EmbeddingSet:
    """E_k with conjugation pairing, restriction to E_k1 and the fixed total order."""

    def __init__(self, embeddings: Sequence[Embedding], r1: int, r2: int, tolerance):
        self.embeddings = {e.label: e for e in embeddings}
        self.labels = tuple(e.label for e in embeddings)
        self.r1 = r1
        self.r2 = r2
        self.tolerance = tolerance

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, label: str) -> Embedding:
        return self.embeddings[label]

    @property
    def k1_labels(self) -> tuple[str, ...]:
        out = []
        for i in range(1, self.r1 + 1):
            out += [f"tau_{i}", f"taubar_{i}"]
        return tuple(out)

    def restriction(self, label: str) -> str:
        return self.embeddings[label].k1_label

    def restriction_map(self) -> dict[str, str]:
        return {label: self.restriction(label) for label in self.labels}

    def conjugate(self, label: str) -> str:
        e = self.embeddings[label]
        return f"{'tau' if e.bar else 'taubar'}_{e.i}_{e.j}"

    def conjugate_k1(self, label: str) -> str:
        kind, i = label.split("_")
        return f"{'tau' if kind == 'taubar' else 'taubar'}_{i}"

    def places(self) -> list[tuple[str, str]]:
        return [(label, self.conjugate(label)) for label in self.labels if not self.embeddings[label].bar]

    def fiber(self, k1_label: str) -> list[str]:
        return [label for label in self.labels if self.restriction(label) == k1_label]

    def position(self, label: str) -> int:
        return self.labels.index(label)

    def locate(self, chain) -> str:
        """Label of the embedding with the given generator values."""
        best, distance = None, None
        for label, e in self.embeddings.items():
            gap = max(abs(a - b) for a, b in zip(e.chain, chain))
            if distance is None or gap < distance:
                best, distance = label, gap
        if distance is None or distance > self.tolerance:
            raise IncompatibleSigmaError(f"no embedding matches the generator values (closest gap {distance})")
        return best


# =============================================================================
# GALOIS ELEMENTS
# =============================================================================

class GaloisElement:
    """
    sigma in Aut(C) seen through its action sigma o iota on the embeddings of k.

    images[iota] is the label of sigma o iota; restriction maps each label to
    its k1 embedding. `cyclotomic` holds (a, m) when sigma restricted to
    Q(zeta_m) is zeta -> zeta^a.
    """

    __slots__ = ("name", "images", "restriction", "cyclotomic", "is_conjugation", "_k1_images")

    def __init__(
        self,
        name: str,
        images: dict[str, str],
        restriction: dict[str, str] | None = None,
        cyclotomic: tuple[int, int] | None = None,
        is_conjugation: bool = False,
    ):
        if sorted(images.values()) != sorted(images):
            raise IncompatibleSigmaError(f"{name} does not permute the embedding labels")
        self.name = name
        self.images = dict(images)
        self.restriction = restriction
        self.cyclotomic = None if cyclotomic is None else (cyclotomic[0] % cyclotomic[1], cyclotomic[1])
        self.is_conjugation = is_conjugation
        self._k1_images = None if restriction is None else self._descend()

    def _descend(self) -> dict[str, str]:
        induced: dict[str, str] = {}
        for label, target in self.images.items():
            source_k1 = self.restriction[label]
            target_k1 = self.restriction[target]
            if induced.setdefault(source_k1, target_k1) != target_k1:
                raise IncompatibleSigmaError(f"{self.name} does not descend to the maximal CM subfield")
        return induced

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.images)

    def image(self, label: str) -> str:
        return self.images[label]

    def preimage(self, label: str) -> str:
        for source, target in self.images.items():
            if target == label:
                return source
        raise EmbeddingMismatchError(f"{label} is not an embedding label of {self.name}")

    @property
    def k1_images(self) -> dict[str, str]:
        """Induced permutation of E_k1."""
        if self._k1_images is None:
            raise IncompatibleSigmaError(f"{self.name} carries no restriction data")
        return dict(self._k1_images)

    def __mul__(self, other: "GaloisElement") -> "GaloisElement":
        """(self o other) o iota = self o (other o iota)."""
        if set(other.images) != set(self.images):
            raise EmbeddingMismatchError("Galois elements act on different embedding sets")
        images = {label: self.images[other.images[label]] for label in other.images}
        cyclotomic = None
        if self.cyclotomic and other.cyclotomic and self.cyclotomic[1] == other.cyclotomic[1]:
            cyclotomic = (self.cyclotomic[0] * other.cyclotomic[0], self.cyclotomic[1])
        return GaloisElement(
            f"{self.name}*{other.name}", images, self.restriction or other.restriction, cyclotomic
        )

    def inverse(self) -> "GaloisElement":
        images = {target: source for source, target in self.images.items()}
        cyclotomic = None
        if self.cyclotomic:
            a, m = self.cyclotomic
            cyclotomic = (pow(a, -1, m), m)
        return GaloisElement(f"{self.name}^-1", images, self.restriction, cyclotomic, self.is_conjugation)

    def is_identity(self) -> bool:
        if any(source != target for source, target in self.images.items()):
            return False
        return self.cyclotomic is None or self.cyclotomic[0] % self.cyclotomic[1] == 1

    def key(self) -> tuple:
        return (tuple(sorted(self.images.items())), self.cyclotomic)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaloisElement):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "images": dict(sorted(self.images.items())),
            "cyclotomic": list(self.cyclotomic) if self.cyclotomic else None,
        }

    def __repr__(self) -> str:
        return f"GaloisElement({self.name})"


def identity_element(embeddings: EmbeddingSet, cyclotomic_modulus: int | None = None) -> GaloisElement:
    cyclotomic = (1, cyclotomic_modulus) if cyclotomic_modulus else None
    return GaloisElement("id", {label: label for label in embeddings.labels}, embeddings.restriction_map(), cyclotomic)


def complex_conjugation(embeddings: EmbeddingSet, cyclotomic_modulus: int | None = None) -> GaloisElement:
    images = {label: embeddings.conjugate(label) for label in embeddings.labels}
    cyclotomic = (-1, cyclotomic_modulus) if cyclotomic_modulus else None
    return GaloisElement("conj", images, embeddings.restriction_map(), cyclotomic, is_conjugation=True)


def permutation_signature(images: dict[str, str], order: Sequence[str]) -> int:
    """Signature of a label permutation read in the given total order."""
    position = {label: index for index, label in enumerate(order, start=1)}
    return Permutation(tuple(position[images[label]] for label in order)).sign()


def sigma_decompose(sigma: GaloisElement, e: EmbeddingSet) -> tuple[GaloisElement, GaloisElement, int]:
    """
    sigma = sigma2 o sigma1 with sigma1 keeping the j-index and sigma2 keeping (i, bar).

    sigma1(tau_{i,j}) is the embedding over (sigma o tau_{i,j})|k1 with the same j.
    """
    if set(sigma.labels) != set(e.labels):
        raise EmbeddingMismatchError("sigma and the embedding set disagree")
    induced = sigma.k1_images

    sigma1_images = {}
    for label in e.labels:
        emb = e[label]
        target_k1 = induced[emb.k1_label]
        kind, i = target_k1.split("_")
        sigma1_images[label] = f"{kind}_{i}_{emb.j}"
    sigma1 = GaloisElement(f"{sigma.name}_1", sigma1_images, e.restriction_map())

    inverse1 = {target: source for source, target in sigma1_images.items()}
    sigma2_images = {label: sigma.image(inverse1[label]) for label in e.labels}
    sigma2 = GaloisElement(f"{sigma.name}_2", sigma2_images, e.restriction_map())

    for label in e.labels:
        if e.restriction(sigma2_images[label]) != e.restriction(label):
            raise IncompatibleSigmaError(f"sigma2 moves {label} out of its fiber")
        if sigma2.image(sigma1.image(label)) != sigma.image(label):
            raise InvariantViolation(f"sigma2 o sigma1 differs from sigma at {label}")

    epsilon = permutation_signature(sigma2_images, e.labels)
    return sigma1, sigma2, epsilon


def fundamental_discriminant(d: int) -> int:
    """Discriminant of Q(sqrt d) for square-free d != 1."""
    return d if d % 4 == 1 else 4 * d


def kronecker_character(D: int, a: int) -> int:
    """(D / a) for a fundamental discriminant D and a coprime to D, via Jacobi symbols."""
    modulus = abs(D)
    if gcd(a, modulus) != 1:
        raise ValueError(f"{a} is not coprime to the discriminant {D}")
    a = a % modulus
    if a % 2 == 0:
        # D odd here; shift to an odd positive representative of the same class
        a += modulus
    return int(jacobi_symbol(D % a, a))


# =============================================================================
# TOWERS
# =============================================================================

GaloisAction = Callable[[tuple], tuple]


@dataclass
class GaloisGenerator:
    """A named sigma given by its action on embedding generator values."""

    name: str
    action: GaloisAction
    cyclotomic: tuple[int, int] | None = None
    is_conjugation: bool = False


class FieldTower:
    """k > k1 > k0 with chosen relative bases and Galois generators."""

    def __init__(
        self,
        name: str,
        k0: FieldLayer,
        k1: FieldLayer,
        k: FieldLayer,
        k1_basis: Sequence | None = None,
        k_basis: Sequence | None = None,
        cyclotomic_modulus: int | None = None,
        generators: Sequence[GaloisGenerator] = (),
        digits: int = MP_DIGITS,
    ):
        if k0.base is not QQ or k1.base is not k0 or k.base is not k1:
            raise ConfigError(f"tower {name}: layers must be stacked Q < k0 < k1 < k")
        if k1.degree != 2:
            raise ConfigError(f"tower {name}: [k1:k0] must be 2, got {k1.degree}")
        self.name = name
        self.k0, self.k1, self.k = k0, k1, k
        self.k1_basis = list(k1_basis) if k1_basis is not None else power_basis(k1)
        self.k_basis = list(k_basis) if k_basis is not None else power_basis(k)
        self.cyclotomic_modulus = cyclotomic_modulus
        self.generators = list(generators)
        self.digits = digits

    @property
    def r1(self) -> int:
        return self.k0.absolute_degree

    @property
    def r2(self) -> int:
        return self.k.degree

    @property
    def degree(self) -> int:
        return self.k.absolute_degree

    # -- embeddings -----------------------------------------------------------

    @cached_property
    def embeddings(self) -> EmbeddingSet:
        digits = self.digits
        tolerance = mpmath.mpf(10) ** (-(digits // 2))
        with working_precision(digits + 10):
            k0_chains = [(r,) for r in self.k0.numeric_roots((), digits)]
            for (t,) in k0_chains:
                if abs(mpmath.im(t)) > tolerance:
                    raise ConfigError(f"tower {self.name}: k0 has a non-real embedding")
            k0_chains.sort(key=lambda c: float(mpmath.re(c[0])))
            k0_chains = [(mpmath.mpf(mpmath.re(c[0])),) for c in k0_chains]

            embeddings = []
            for i, base in enumerate(k0_chains, start=1):
                k1_roots = self.k1.numeric_roots(base, digits)
                if any(abs(mpmath.im(z)) <= tolerance for z in k1_roots):
                    raise ConfigError(f"tower {self.name}: k1 is not totally imaginary, so not CM")
                upper = max(k1_roots, key=lambda z: mpmath.im(z))
                k1_chain = base + (upper,)

                fiber = [k1_chain + (w,) for w in self.k.numeric_roots(k1_chain, digits)]
                fiber.sort(key=lambda c: (round(float(mpmath.re(c[-1])), 12), round(float(mpmath.im(c[-1])), 12)))
                for j, chain in enumerate(fiber, start=1):
                    conjugate = tuple(mpmath.conj(v) for v in chain)
                    embeddings.append(Embedding(f"tau_{i}_{j}", i, j, False, chain))
                    embeddings.append(Embedding(f"taubar_{i}_{j}", i, j, True, conjugate))

        e = EmbeddingSet(embeddings, self.r1, self.r2, tolerance)
        if len(e) != self.degree:
            raise ConfigError(f"tower {self.name}: found {len(e)} embeddings for degree {self.degree}")
        logger.debug(f"tower {self.name}: embeddings {list(e.labels)}")
        return e

    def evaluate(self, element, label: str):
        """Numerical image of an element of k."""
        with working_precision(self.digits + 10):
            return self.k.evaluate(element, self.embeddings[label].chain)

    def places(self) -> list[tuple[str, str]]:
        return self.embeddings.places()

    # -- Galois data ----------------------------------------------------------

    def galois_element(self, generator: GaloisGenerator) -> GaloisElement:
        e = self.embeddings
        with working_precision(self.digits + 10):
            images = {label: e.locate(generator.action(e[label].chain)) for label in e.labels}
        return GaloisElement(generator.name, images, e.restriction_map(), generator.cyclotomic, generator.is_conjugation)

    def galois_generators(self) -> list[GaloisElement]:
        return [self.galois_element(g) for g in self.generators]

    def identity(self) -> GaloisElement:
        return identity_element(self.embeddings, self.cyclotomic_modulus)

    def conjugation(self) -> GaloisElement:
        return complex_conjugation(self.embeddings, self.cyclotomic_modulus)

    def parse_sigma(self, spec: str) -> GaloisElement:
        """'id', 'conj', a generator name, or a cyclotomic integer parameter."""
        spec = spec.strip()
        if spec == "id":
            return self.identity()
        if spec == "conj":
            return self.conjugation()
        for g in self.generators:
            if g.name == spec:
                return self.galois_element(g)
        try:
            a = int(spec)
        except ValueError:
            raise ConfigError(f"unknown sigma {spec!r} for tower {self.name}") from None
        m = self.cyclotomic_modulus
        if m is None:
            raise ConfigError(f"tower {self.name} has no cyclotomic parameterisation of sigma")
        if a % m == 1:
            return self.identity()
        if a % m == m - 1:
            return self.conjugation()
        for g in self.generators:
            if g.cyclotomic and g.cyclotomic[0] % m == a % m:
                return self.galois_element(g)
        raise ConfigError(f"no generator with cyclotomic parameter {a} for tower {self.name}")

    def sigma_set(self) -> list[GaloisElement]:
        """Identity, conjugation and the named generators, without repeats."""
        out: list[GaloisElement] = []
        for sigma in [self.identity(), self.conjugation()] + self.galois_generators():
            if sigma not in out:
                out.append(sigma)
        return out

    # -- discriminants --------------------------------------------------------

    def absolute_basis(self) -> list[tuple]:
        k0_basis = power_basis(self.k0)
        basis = []
        for b0 in k0_basis:
            for b1 in self.k1_basis:
                lifted = self.k.lift(self.k1.mul(self.k1.lift(b0), b1))
                for b2 in self.k_basis:
                    basis.append(self.k.mul(lifted, b2))
        return basis

    def describe(self) -> dict:
        return {
            "name": self.name,
            "k0_modulus": _render(self.k0.modulus),
            "k1_modulus": _render(self.k1.modulus),
            "k_modulus": _render(self.k.modulus),
            "k1_basis": [_render(b) for b in self.k1_basis],
            "k_basis": [_render(b) for b in self.k_basis],
            "r1": self.r1,
            "r2": self.r2,
            "degree": self.degree,
            "embeddings": list(self.embeddings.labels),
        }


def power_basis(layer) -> list[tuple]:
    basis, x = [layer.one()], layer.gen()
    for _ in range(layer.degree - 1):
        basis.append(layer.mul(basis[-1], x))
    return basis


def embedding_values(tower: FieldTower, element) -> dict[str, mpmath.mpc]:
    """Images of an element of k under every embedding, in embedding order."""
    element = tower.k.coerce(element)
    return {label: tower.evaluate(element, label) for label in tower.embeddings.labels}


def _render(value):
    if isinstance(value, tuple):
        return [_render(v) for v in value]
    return str(value)


def absolute_discriminant(tower: FieldTower) -> sympy.Rational:
    """Trace-form determinant of the product Q-basis of k."""
    basis = tower.absolute_basis()
    k = tower.k
    form = sympy.Matrix(len(basis), len(basis), lambda a, b: k.absolute_trace(k.mul(basis[a], basis[b])))
    disc = sympy.Rational(form.det())
    if disc == 0:
        raise SingularBasisError(f"tower {tower.name}: absolute basis is degenerate")
    return disc


def relative_discriminants(tower: FieldTower) -> tuple:
    """(delta_{k1/k0} in k0, delta_{k/k1} in k1) for the configured bases."""
    return (
        relative_discriminant(tower.k1, tower.k0, tower.k1_basis),
        relative_discriminant(tower.k, tower.k1, tower.k_basis),
    )


def period_constants(t: FieldTower) -> tuple[QuadSurd, QuadSurd]:
    """Delta_k = sqrt(N_{k0/Q} delta_{k1/k0})^[k:k1], Nabla_k = sqrt(N_{k1/Q} delta_{k/k1})."""
    delta_k1, delta_k = relative_discriminants(t)
    delta = QuadSurd.sqrt(t.k0.absolute_norm(delta_k1)) ** t.r2
    nabla = QuadSurd.sqrt(t.k1.absolute_norm(delta_k))
    return delta, nabla


def harder_period(t: FieldTower) -> QuadSurd:
    """P = i^([k:Q]/2) Delta_k."""
    delta, _ = period_constants(t)
    return QuadSurd.imaginary_unit() ** (t.degree // 2) * delta


@dataclass
class DiscriminantWitness:
    tower: str
    abs_disc: sympy.Rational
    delta: QuadSurd
    nabla: QuadSurd
    period: QuadSurd
    c_squared: sympy.Rational
    c: sympy.Rational
    numeric_relative_error: float
    status: str

    def to_dict(self) -> dict:
        return {
            "tower": self.tower,
            "abs_disc": str(self.abs_disc),
            "Delta": self.delta.to_dict(),
            "Nabla": self.nabla.to_dict(),
            "P": self.period.to_dict(),
            "c_squared": str(self.c_squared),
            "c": str(self.c),
            "numeric_relative_error": float(self.numeric_relative_error),
            "status": self.status,
        }


def rational_sqrt(value: sympy.Rational) -> sympy.Rational | None:
    value = sympy.Rational(value)
    if value <= 0:
        return None
    p_root, p_exact = sympy.integer_nthroot(int(value.p), 2)
    q_root, q_exact = sympy.integer_nthroot(int(value.q), 2)
    if not (p_exact and q_exact):
        return None
    return sympy.Rational(p_root, q_root)


def numeric_discriminant_check(t: FieldTower, c: sympy.Rational):
    """|delta_k|^(1/2) against c P Nabla, every quantity rebuilt from embeddings."""
    e = t.embeddings
    with working_precision(t.digits + 10):
        basis = t.absolute_basis()
        images = mpmath.matrix([[t.evaluate(b, label) for b in basis] for label in e.labels])
        disc = mpmath.det(images) ** 2

        delta_k1, delta_k = relative_discriminants(t)
        k0_chains = {}
        k1_chains = {}
        for label in e.labels:
            k0_chains.setdefault(e[label].i, e[label].chain[:1])
            k1_chains.setdefault(e.restriction(label), e[label].chain[:2])
        norm_k1 = mpmath.fprod(t.k0.evaluate(delta_k1, chain) for chain in k0_chains.values())
        norm_k = mpmath.fprod(t.k1.evaluate(delta_k, chain) for chain in k1_chains.values())

        period = mpmath.mpc(0, 1) ** (t.degree // 2) * mpmath.sqrt(mpmath.mpc(mpmath.re(norm_k1))) ** t.r2
        nabla = mpmath.sqrt(mpmath.re(norm_k))
        lhs = mpmath.sqrt(abs(mpmath.re(disc)))
        rhs = mpmath.mpf(int(c.p)) / int(c.q) * period * nabla
        return lhs, rhs, abs(lhs - rhs) / abs(lhs)


def verify_discriminant_relation(t: FieldTower) -> DiscriminantWitness:
    """
    |delta_k|^(1/2) = c * i^([k:Q]/2) * Delta_k * Nabla_k with c rational.

    c^2 is computed exactly; its sign comes from evaluating both sides.
    """
    abs_disc = abs(absolute_discriminant(t))
    delta, nabla = period_constants(t)
    period = QuadSurd.imaginary_unit() ** (t.degree // 2) * delta
    denominator = (period * nabla) * (period * nabla)
    if not denominator.is_rational:
        raise NotRationalSquare(f"|delta_k| / ({denominator})")
    c_squared = abs_disc / denominator.q
    magnitude = rational_sqrt(c_squared)
    if magnitude is None:
        raise NotRationalSquare(c_squared)

    with working_precision(t.digits + 10):
        lhs = mpmath.sqrt(mpmath.mpf(int(abs_disc.p)) / int(abs_disc.q))
        ratio = lhs / (period.value() * nabla.value())
        if abs(mpmath.im(ratio)) > abs(ratio) * mpmath.mpf(10) ** (-t.digits // 2):
            raise NotRationalSquare(f"c = {ratio} is not real")
        c = magnitude if mpmath.re(ratio) > 0 else -magnitude

    _, _, relative_error = numeric_discriminant_check(t, c)
    status = "PASS" if relative_error < NUMERIC_CHECK_TOLERANCE else "FAIL"
    if status == "FAIL":
        logger.warning(f"tower {t.name}: numerical discriminant check off by {float(relative_error):.3e}")

    return DiscriminantWitness(
        t.name, abs_disc, delta, nabla, period, c_squared, c, float(relative_error), status
    )


def verify_sign_identity(t: FieldTower, sigma: GaloisElement) -> dict:
    """eps(sigma2) against sigma(Nabla)/Nabla = chi_D(a)."""
    _, nabla = period_constants(t)
    _, _, epsilon = sigma_decompose(sigma, t.embeddings)

    d = nabla.d
    if d == 1:
        chi, discriminant, a = 1, None, None
    elif sigma.is_conjugation and d > 0:
        chi, discriminant, a = 1, fundamental_discriminant(d), None
    else:
        if sigma.cyclotomic is None:
            raise MissingCyclotomicData(f"{sigma.name} has no cyclotomic parameter to act on sqrt({d})")
        a, m = sigma.cyclotomic
        discriminant = fundamental_discriminant(d)
        if m % discriminant:
            raise MissingCyclotomicData(
                f"{sigma.name} is known on Q(zeta_{m}), which does not contain sqrt({d})"
            )
        chi = kronecker_character(discriminant, a)

    return {
        "tower": t.name,
        "sigma": sigma.name,
        "nabla": nabla.to_dict(),
        "d": d,
        "discriminant": discriminant,
        "a": a,
        "epsilon": epsilon,
        "chi": chi,
        "status": "PASS" if epsilon == chi else "FAIL",
    }
