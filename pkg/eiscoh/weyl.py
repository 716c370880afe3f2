"""
Permutation and root-system combinatorics for GL_n.

Features:
- Permutation in 1-based one-line notation; composition is (w*u)(i) = w(u(i))
- Permutation matrices with a 1 at (w(j), j), and the reverse conversion
- Lengths, inversion sets and signs
- Coset representatives of W_n / W_{P_n} for the (n-1, 1) parabolic,
  cross-checked against the closed-form cycles w_k
- WeylElement: one permutation per field embedding (W_{n,inf}) with the
  Galois re-indexing action (^sigma w)^iota = w^(sigma^-1 o iota)
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Mapping, Protocol

import numpy as np

from .errors import EmbeddingMismatchError, InvariantViolation, ShapeMismatchError

logger = logging.getLogger(__name__)


class EmbeddingPermutation(Protocol):
    """What the Weyl and weight actions need from a Galois element."""

    labels: tuple[str, ...]

    def preimage(self, label: str) -> str: ...


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1, ..., n}; images[j-1] is w(j)."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {list(images)}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.n != self.n:
            raise ShapeMismatchError(f"cannot compose S_{self.n} with S_{other.n}")
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, image in enumerate(self.images, start=1):
            inv[image - 1] = j
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(image == j for j, image in enumerate(self.images, start=1))

    def inversion_set(self) -> frozenset[tuple[int, int]]:
        """Pairs (i, j) with i < j and w(i) > w(j)."""
        return frozenset(
            (i, j)
            for i, j in itertools.combinations(range(1, self.n + 1), 2)
            if self(i) > self(j)
        )

    def length(self) -> int:
        return sum(
            1
            for i, j in itertools.combinations(range(self.n), 2)
            if self.images[i] > self.images[j]
        )

    def sign(self) -> int:
        return -1 if self.length() % 2 else 1

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=int)
        for j, image in enumerate(self.images):
            m[image - 1, j] = 1
        return m

    @classmethod
    def from_matrix(cls, matrix) -> "Permutation":
        """Read w back from a permutation matrix: w(j) = i whenever m[i, j] = 1."""
        m = np.asarray(matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeMismatchError(f"expected a square matrix, got shape {m.shape}")
        if not (np.isin(m, (0, 1)).all() and (m.sum(axis=0) == 1).all() and (m.sum(axis=1) == 1).all()):
            raise ValueError("not a permutation matrix")
        return cls(tuple(int(np.flatnonzero(m[:, j])[0]) + 1 for j in range(m.shape[1])))

    def one_line(self) -> list[int]:
        return list(self.images)

    def __str__(self) -> str:
        return "[" + ",".join(str(x) for x in self.images) + "]"


@dataclass(frozen=True)
class Root:
    """The root e_i - e_j of GL_n."""

    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError(f"e_{self.i} - e_{self.j} is not a root")
        if self.i < 1 or self.j < 1:
            raise ValueError("root indices are 1-based")

    @property
    def is_positive(self) -> bool:
        return self.i < self.j

    def vector(self, n: int) -> tuple[int, ...]:
        if max(self.i, self.j) > n:
            raise ShapeMismatchError(f"root e_{self.i} - e_{self.j} does not live in GL_{n}")
        v = [0] * n
        v[self.i - 1] = 1
        v[self.j - 1] = -1
        return tuple(v)

    def __str__(self) -> str:
        return f"e{self.i}-e{self.j}"


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def longest_element(n: int) -> Permutation:
    return Permutation(tuple(range(n, 0, -1)))


def cycle(k: int, n: int) -> Permutation:
    """The cycle (k k+1 ... n): j -> j+1 for k <= j < n, n -> k."""
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    images = list(range(1, n + 1))
    for j in range(k, n):
        images[j - 1] = j + 1
    images[n - 1] = k
    return Permutation(tuple(images))


def initial_cycle(k: int, n: int) -> Permutation:
    """The cycle (1 2 ... k) inside S_n."""
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    images = list(range(1, n + 1))
    for j in range(1, k):
        images[j - 1] = j + 1
    images[k - 1] = 1
    return Permutation(tuple(images))


def all_permutations(n: int) -> Iterator[Permutation]:
    for images in itertools.permutations(range(1, n + 1)):
        yield Permutation(images)


def length(w: Permutation) -> int:
    return w.length()


def inversion_set(w: Permutation) -> frozenset[tuple[int, int]]:
    return w.inversion_set()


def coset_reps_P(n: int) -> list[Permutation]:
    """
    Representatives w with w(alpha_i) > 0 for the simple roots alpha_1..alpha_{n-2}.

    Returned in order k = 1..n where k = w(n); each is checked against the
    closed form cycle(k, n) and the length n - k.
    """
    if n < 2:
        raise ValueError(f"coset representatives need n >= 2, got {n}")

    reps = [
        w for w in all_permutations(n)
        if all(w(i) < w(i + 1) for i in range(1, n - 1))
    ]
    reps.sort(key=lambda w: w(n))

    if len(reps) != n:
        raise InvariantViolation(f"expected {n} coset representatives, enumerated {len(reps)}")
    for k, w in enumerate(reps, start=1):
        expected = cycle(k, n)
        if w != expected:
            raise InvariantViolation(f"representative {w} for k={k} differs from the cycle {expected}")
        if w.length() != n - k:
            raise InvariantViolation(f"length of w_{k} is {w.length()}, expected {n - k}")

    logger.debug(f"coset_reps_P({n}): {[str(w) for w in reps]}")
    return reps


def q_integer_product(n: int, copies: int = 1) -> list[int]:
    """Coefficients of prod_{i=1}^{n} (1 + q + ... + q^{i-1}), raised to `copies`."""
    poly = [1]
    for _ in range(copies):
        for i in range(1, n + 1):
            poly = multiply_polynomials(poly, [1] * i)
    return poly


def multiply_polynomials(a: list[int], b: list[int]) -> list[int]:
    """Exact product of integer coefficient lists (constant term first)."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def length_generating_function(n: int) -> list[int]:
    """Coefficients of sum over S_n of q^{length(w)}."""
    counts = [0] * (n * (n - 1) // 2 + 1)
    for w in all_permutations(n):
        counts[w.length()] += 1
    return counts


class WeylElement:
    """An element of W_{n,inf}: one permutation per embedding label."""

    __slots__ = ("_items",)

    def __init__(self, per_embedding: Mapping[str, Permutation]):
        items = tuple(per_embedding.items())
        if not items:
            raise ValueError("a Weyl element needs at least one embedding")
        sizes = {w.n for _, w in items}
        if len(sizes) != 1:
            raise ShapeMismatchError(f"permutations of different sizes: {sorted(sizes)}")
        self._items = items

    @classmethod
    def constant(cls, labels, w: Permutation) -> "WeylElement":
        return cls({label: w for label in labels})

    @property
    def per_embedding(self) -> dict[str, Permutation]:
        return dict(self._items)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self._items)

    @property
    def n(self) -> int:
        return self._items[0][1].n

    def __getitem__(self, label: str) -> Permutation:
        return self.per_embedding[label]

    def length(self) -> int:
        return sum(w.length() for _, w in self._items)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.per_embedding == other.per_embedding

    def __hash__(self) -> int:
        return hash(frozenset(self._items))

    def sort_key(self) -> tuple:
        return tuple(w.images for _, w in self._items)

    def to_dict(self) -> dict[str, list[int]]:
        return {label: w.one_line() for label, w in self._items}

    def __repr__(self) -> str:
        body = ", ".join(f"{label}: {w}" for label, w in self._items)
        return f"WeylElement({{{body}}})"


def weyl_sigma_action(w: WeylElement, sigma: EmbeddingPermutation) -> WeylElement:
    """(^sigma w)^iota = w^(sigma^-1 o iota)."""
    if set(sigma.labels) != set(w.labels):
        raise EmbeddingMismatchError(
            f"sigma permutes {sorted(sigma.labels)} but w is indexed by {sorted(w.labels)}"
        )
    components = w.per_embedding
    return WeylElement({label: components[sigma.preimage(label)] for label in w.labels})
