"""
Highest weights, Kostant representatives and bottom-degree bookkeeping.

Features:
- InfinityType with regularity and balanced checks per conjugate pair
- Highest weight mu(eta) and the Kostant weight w.mu - sum of inverted roots
- The distinguished elements w^(k) and the bottom degree c_n
- Exhaustive (or factorized) search over W_{n,inf} for the unique weight match
- Degree census of W_{n,inf} against the product of q-integers

Weights are acted on from the right: (w.mu)_i = mu_{w(i)}. With this action
2*kostant_weight(w, mu) = w(2mu + 2rho) - 2rho holds for every w, and
rho is only ever stored doubled.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from math import factorial
from typing import Mapping, Sequence

import numpy as np
from tqdm import tqdm

from .config import CENSUS_CAP, ENUMERATION_CAP
from .errors import (
    EmbeddingMismatchError,
    EnumerationCapExceeded,
    InvariantViolation,
    ShapeMismatchError,
    UnbalancedInfinityTypeError,
)
from .weyl import (
    EmbeddingPermutation,
    Permutation,
    WeylElement,
    cycle,
    initial_cycle,
    q_integer_product,
    weyl_sigma_action,
)

logger = logging.getLogger(__name__)

# Exhaustive walks at least this long get a progress bar
PROGRESS_THRESHOLD = 10**5


class InfinityType:
    """Integer exponents eta_iota for every embedding, with the conjugation pairing."""

    __slots__ = ("_eta", "_places")

    def __init__(self, eta: Mapping[str, int], places: Sequence[tuple[str, str]]):
        self._eta = tuple((label, int(value)) for label, value in eta.items())
        self._places = tuple((a, b) for a, b in places)

        paired = [label for place in self._places for label in place]
        if sorted(paired) != sorted(self.labels) or len(set(paired)) != len(paired):
            raise EmbeddingMismatchError(
                f"places {self._places} do not pair up the embeddings {self.labels}"
            )

    @classmethod
    def from_values(cls, values: Sequence[int], labels: Sequence[str] | None = None) -> "InfinityType":
        """Values in the fixed order; consecutive labels form conjugate pairs."""
        if len(values) % 2:
            raise ShapeMismatchError(f"an infinity type needs an even number of entries, got {len(values)}")
        if labels is None:
            labels = []
            for place in range(1, len(values) // 2 + 1):
                labels += [f"iota_{place}", f"iotabar_{place}"]
        if len(labels) != len(values):
            raise ShapeMismatchError(f"{len(values)} values for {len(labels)} embeddings")
        places = [(labels[i], labels[i + 1]) for i in range(0, len(labels), 2)]
        return cls(dict(zip(labels, values)), places)

    @property
    def eta(self) -> dict[str, int]:
        return dict(self._eta)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self._eta)

    @property
    def places(self) -> tuple[tuple[str, str], ...]:
        return self._places

    @property
    def degree(self) -> int:
        """[k:Q] = number of embeddings."""
        return len(self._eta)

    def __getitem__(self, label: str) -> int:
        return self.eta[label]

    def values(self) -> list[int]:
        return [value for _, value in self._eta]

    def is_regular(self, n: int) -> bool:
        return all(value * (value - n) >= 0 for value in self.values())

    def is_balanced(self, n: int) -> bool:
        eta = self.eta
        return all(
            min(eta[a], eta[b]) <= 0 and max(eta[a], eta[b]) >= n
            for a, b in self._places
        )

    def validate(self, n: int) -> None:
        eta = self.eta
        for label, value in self._eta:
            if 0 < value < n:
                raise UnbalancedInfinityTypeError(
                    f"eta_{label} = {value} lies strictly between 0 and n = {n}"
                )
        for a, b in self._places:
            if not (min(eta[a], eta[b]) <= 0 and max(eta[a], eta[b]) >= n):
                raise UnbalancedInfinityTypeError(
                    f"place ({a}, {b}) with exponents ({eta[a]}, {eta[b]}) is not balanced for n = {n}"
                )

    def __eq__(self, other) -> bool:
        if not isinstance(other, InfinityType):
            return NotImplemented
        return self.eta == other.eta and set(map(frozenset, self._places)) == set(map(frozenset, other._places))

    def __hash__(self) -> int:
        return hash(frozenset(self._eta))

    def to_dict(self) -> dict[str, int]:
        return dict(self._eta)

    def __repr__(self) -> str:
        return f"InfinityType({dict(self._eta)})"


class Weight:
    """Integer vectors of common length n indexed by embedding labels."""

    __slots__ = ("_items",)

    def __init__(self, per_embedding: Mapping[str, Sequence[int]]):
        self._items = tuple((label, tuple(int(x) for x in vec)) for label, vec in per_embedding.items())
        sizes = {len(vec) for _, vec in self._items}
        if len(sizes) > 1:
            raise ShapeMismatchError(f"weight vectors of different lengths: {sorted(sizes)}")

    @property
    def per_embedding(self) -> dict[str, tuple[int, ...]]:
        return dict(self._items)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self._items)

    @property
    def n(self) -> int:
        return len(self._items[0][1])

    def __getitem__(self, label: str) -> tuple[int, ...]:
        return self.per_embedding[label]

    def _combine(self, other: "Weight", op) -> "Weight":
        if set(other.labels) != set(self.labels):
            raise EmbeddingMismatchError("weights indexed by different embeddings")
        theirs = other.per_embedding
        return Weight({
            label: tuple(op(a, b) for a, b in zip(vec, theirs[label]))
            for label, vec in self._items
        })

    def __add__(self, other: "Weight") -> "Weight":
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "Weight") -> "Weight":
        return self._combine(other, lambda a, b: a - b)

    def scaled(self, factor: int) -> "Weight":
        return Weight({label: tuple(factor * x for x in vec) for label, vec in self._items})

    def is_dominant(self) -> bool:
        return all(
            all(vec[i] >= vec[i + 1] for i in range(len(vec) - 1))
            for _, vec in self._items
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Weight):
            return NotImplemented
        return self.per_embedding == other.per_embedding

    def __hash__(self) -> int:
        return hash(frozenset(self._items))

    def to_dict(self) -> dict[str, list[int]]:
        return {label: list(vec) for label, vec in self._items}

    def __repr__(self) -> str:
        return f"Weight({self.to_dict()})"


class KostantDatum:
    """w, its degree l(w) and the torus weight of wedge^{l(w)} n_w^* (x) C w.v."""

    __slots__ = ("w", "degree", "weight")

    def __init__(self, w: WeylElement, mu: Weight):
        self.w = w
        self.degree = w.length()
        self.weight = kostant_weight(w, mu)

    def to_dict(self) -> dict:
        return {"w": self.w.to_dict(), "degree": self.degree, "weight": self.weight.to_dict()}


def doubled_rho(n: int) -> tuple[int, ...]:
    """2rho = (n-1, n-3, ..., 1-n)."""
    return tuple(n + 1 - 2 * i for i in range(1, n + 1))


def bottom_degree(n: int, degree: int) -> int:
    """c_n = ([k:Q]/2)(n-1)."""
    return degree * (n - 1) // 2


def act(w: Permutation, vec: Sequence[int]) -> tuple[int, ...]:
    """(w.v)_i = v_{w(i)}."""
    if len(vec) != w.n:
        raise ShapeMismatchError(f"vector of length {len(vec)} for S_{w.n}")
    return tuple(vec[w(i) - 1] for i in range(1, w.n + 1))


def act_weight(w: WeylElement, mu: Weight) -> Weight:
    _check_shapes(w, mu)
    components = w.per_embedding
    return Weight({label: act(components[label], vec) for label, vec in mu.per_embedding.items()})


def _check_shapes(w: WeylElement, mu: Weight) -> None:
    if set(w.labels) != set(mu.labels):
        raise EmbeddingMismatchError(f"w indexed by {sorted(w.labels)}, mu by {sorted(mu.labels)}")
    if w.n != mu.n:
        raise ShapeMismatchError(f"w in S_{w.n} but mu has length {mu.n}")


def highest_weight_component(eta_value: int, n: int) -> tuple[int, ...]:
    if eta_value <= 0:
        return (0,) * (n - 1) + (eta_value,)
    if eta_value >= n:
        return (eta_value - n + 1,) + (1,) * (n - 1)
    raise UnbalancedInfinityTypeError(f"eta = {eta_value} lies strictly between 0 and n = {n}")


def highest_weight_from_eta(eta: InfinityType, n: int) -> Weight:
    """mu^iota = (0,...,0,eta) for eta <= 0 and (eta-n+1,1,...,1) for eta >= n."""
    return Weight({label: highest_weight_component(value, n) for label, value in eta.eta.items()})


def kostant_weight_component(w: Permutation, vec: Sequence[int]) -> tuple[int, ...]:
    weight = list(act(w, vec))
    for i, j in w.inversion_set():
        weight[i - 1] -= 1
        weight[j - 1] += 1
    return tuple(weight)


def kostant_weight(w: WeylElement, mu: Weight) -> Weight:
    """Per embedding: w.mu - sum over (i, j) in Inv(w) of (e_i - e_j)."""
    _check_shapes(w, mu)
    components = w.per_embedding
    return Weight({
        label: kostant_weight_component(components[label], vec)
        for label, vec in mu.per_embedding.items()
    })


def dot_action_doubled(w: WeylElement, mu: Weight) -> Weight:
    """w(2mu + 2rho) - 2rho."""
    rho2 = Weight({label: doubled_rho(mu.n) for label in mu.labels})
    return act_weight(w, mu.scaled(2) + rho2) - rho2


def sigma_on_infinity_type(eta: InfinityType, sigma: EmbeddingPermutation) -> InfinityType:
    """(^sigma eta)_iota = eta_(sigma^-1 o iota); the conjugation pairing is unchanged."""
    if set(sigma.labels) != set(eta.labels):
        raise EmbeddingMismatchError(f"sigma permutes {sorted(sigma.labels)}, eta uses {sorted(eta.labels)}")
    values = eta.eta
    return InfinityType({label: values[sigma.preimage(label)] for label in eta.labels}, eta.places)


def max_balanced_n(eta: InfinityType) -> int | None:
    """Largest n >= 2 for which eta is balanced, or None."""
    values = eta.eta
    highs = []
    for a, b in eta.places:
        if min(values[a], values[b]) > 0:
            return None
        highs.append(max(values[a], values[b]))
    n = min(highs)
    return n if n >= 2 else None


def find_wk_component(eta_value: int, k: int, n: int) -> Permutation:
    if eta_value <= 0:
        return cycle(k, n).inverse()
    if eta_value >= n:
        return initial_cycle(k, n)
    raise UnbalancedInfinityTypeError(f"eta = {eta_value} lies strictly between 0 and n = {n}")


def find_wk(
    eta: InfinityType,
    k: int,
    n: int,
    check_sigmas: Sequence[EmbeddingPermutation] = (),
) -> WeylElement:
    """
    The unique w^(k) in W_{n,inf} whose Kostant weight matches (Lambda^(k))^-1.

    (k ... n)^-1 where eta_iota <= 0 and (1 ... k) where eta_iota >= n. Its
    length is asserted to be c_n, and for every sigma in check_sigmas the
    element is asserted to be sigma-equivariant.
    """
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    eta.validate(n)

    w = WeylElement({label: find_wk_component(value, k, n) for label, value in eta.eta.items()})

    c_n = bottom_degree(n, eta.degree)
    if w.length() != c_n:
        raise InvariantViolation(f"length of w^({k}) is {w.length()}, expected c_n = {c_n}")

    for sigma in check_sigmas:
        twisted = find_wk(sigma_on_infinity_type(eta, sigma), k, n)
        if twisted != weyl_sigma_action(w, sigma):
            raise InvariantViolation(f"w^({k}) is not equivariant under {sigma}")
    return w


# =============================================================================
# ENUMERATION OVER W_{n,inf}
# =============================================================================

def _permutation_table(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int64)


def _weight_table(perms: np.ndarray, vec: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Kostant weights and lengths of every row of `perms` against one mu-vector."""
    n = perms.shape[1]
    mu = np.asarray(vec, dtype=np.int64)
    weights = mu[perms - 1]
    lengths = np.zeros(perms.shape[0], dtype=np.int64)
    for a, b in itertools.combinations(range(n), 2):
        inverted = (perms[:, a] > perms[:, b]).astype(np.int64)
        weights[:, a] -= inverted
        weights[:, b] += inverted
        lengths += inverted
    return weights, lengths


def enumeration_size(n: int, degree: int) -> int:
    return factorial(n) ** degree


def verify_unique_match(
    eta: InfinityType,
    k: int,
    n: int,
    cap: int = ENUMERATION_CAP,
    threads: int = 1,
    exhaustive: bool = False,
) -> dict:
    """
    Search W_{n,inf} for every w whose Kostant weight equals the algebraic
    weight of (Lambda^(k)_{eta,inf})^-1.

    The weight of w is computed per embedding, so the match set is the
    product of per-embedding match sets. exhaustive=True walks the full
    product instead; both strategies are bounded by `cap`.
    """
    from .lchar import target_weight

    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    eta.validate(n)

    size = enumeration_size(n, eta.degree)
    if size > cap:
        raise EnumerationCapExceeded(f"|W_{{{n},inf}}| = {size} exceeds the enumeration cap {cap}")

    mu = highest_weight_from_eta(eta, n)
    target = target_weight(eta, k, n)
    perms = _permutation_table(n)
    labels = eta.labels

    def embedding_matches(label: str) -> tuple[np.ndarray, np.ndarray]:
        weights, lengths = _weight_table(perms, mu[label])
        hits = np.all(weights == np.asarray(target[label], dtype=np.int64), axis=1)
        return hits, lengths

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            tables = dict(zip(labels, executor.map(embedding_matches, labels)))
    else:
        tables = {label: embedding_matches(label) for label in labels}

    if exhaustive:
        matches = []
        walk = itertools.product(range(len(perms)), repeat=len(labels))
        for combo in tqdm(walk, total=size, desc=f"W_{n},inf", leave=False, disable=size < PROGRESS_THRESHOLD):
            if all(tables[label][0][idx] for label, idx in zip(labels, combo)):
                matches.append(combo)
    else:
        per_label = [np.flatnonzero(tables[label][0]).tolist() for label in labels]
        matches = list(itertools.product(*per_label))

    elements = []
    for combo in matches:
        w = WeylElement({label: Permutation(tuple(perms[idx])) for label, idx in zip(labels, combo)})
        elements.append(w)
    elements.sort(key=lambda w: w.sort_key())

    profile: dict[int, int] = {}
    for w in elements:
        profile[w.length()] = profile.get(w.length(), 0) + 1

    expected = find_wk(eta, k, n)
    c_n = bottom_degree(n, eta.degree)
    min_length = min(profile) if profile else None
    unique = len(elements) == 1
    equals_find_wk = unique and elements[0] == expected

    passed = unique and equals_find_wk and min_length == c_n and profile.get(c_n, 0) == 1
    logger.debug(f"verify_unique_match(k={k}, n={n}, eta={eta.values()}): {len(elements)} match(es)")

    return {
        "n": n,
        "k": k,
        "eta": eta.to_dict(),
        "enumerated": size,
        "strategy": "exhaustive" if exhaustive else "factorized",
        "target_weight": target.to_dict(),
        "matches": [w.to_dict() for w in elements],
        "match_count": len(elements),
        "find_wk": expected.to_dict(),
        "unique": unique,
        "equals_find_wk": equals_find_wk,
        "min_length": min_length,
        "c_n": c_n,
        "multiplicity_at_c_n": profile.get(c_n, 0),
        "profile": {str(degree): count for degree, count in sorted(profile.items())},
        "status": "PASS" if passed else "FAIL",
    }


def bottom_degree_profile(eta: InfinityType, k: int, n: int, cap: int = ENUMERATION_CAP) -> dict[int, int]:
    """Number of matching Kostant representatives per degree q."""
    report = verify_unique_match(eta, k, n, cap=cap)
    return {int(q): count for q, count in report["profile"].items()}


def kostant_census(n: int, degree: int, cap: int = CENSUS_CAP) -> dict:
    """
    Length distribution over W_{n,inf} with `degree` embeddings, against the q-integer product.

    Every tuple of permutations is visited: lengths of the first degree-1
    embeddings are summed on an outer grid and the last embedding is swept
    over it, one histogram per permutation.
    """
    if degree < 1:
        raise ValueError(f"degree must be positive, got {degree}")
    size = enumeration_size(n, degree)
    if size > cap:
        raise EnumerationCapExceeded(f"|W_{{{n},inf}}| = {size} exceeds the census cap {cap}")

    _, lengths = _weight_table(_permutation_table(n), [0] * n)
    partial = np.zeros(1, dtype=np.int64)
    for _ in range(degree - 1):
        partial = np.add.outer(partial, lengths).ravel()

    top = degree * n * (n - 1) // 2
    histogram = np.zeros(top + 1, dtype=np.int64)
    for length in tqdm(lengths, desc=f"census W_{n},inf", leave=False, disable=size < PROGRESS_THRESHOLD):
        histogram += np.bincount(partial + length, minlength=top + 1)

    counted = [int(c) for c in histogram]
    predicted = q_integer_product(n, copies=degree)
    logger.debug(f"census n={n} degree={degree}: {size} elements")
    return {
        "n": n,
        "embeddings": degree,
        "counted": counted,
        "predicted": predicted,
        "total": size,
        "status": "PASS" if counted == predicted else "FAIL",
    }
