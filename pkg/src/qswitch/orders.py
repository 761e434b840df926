"""Causal orders, their combinations and the local/global pair classification.

Channels are numbered 1..N. A causal order is stored as the sequence of
channels in the order they act on the target (first -> last). Labels
1..N! enumerate the compositions ``N_a o N_b o ...`` in lexicographic order,
so for three channels

    k=1: N1 o N2 o N3  -> sequence (3, 2, 1)
    k=2: N1 o N3 o N2  -> sequence (2, 3, 1)
    ...
    k=6: N3 o N2 o N1  -> sequence (1, 2, 3)
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

WEIGHT_TOL = 1e-12


@lru_cache(maxsize=None)
def _sequences(n: int) -> tuple:
    if n < 1:
        raise ValueError(f"channel count must be positive, got {n}")
    return tuple(tuple(reversed(p)) for p in itertools.permutations(range(1, n + 1)))


@dataclass(frozen=True, order=True)
class CausalOrder:
    label: int
    sequence: tuple

    @property
    def n(self) -> int:
        return len(self.sequence)

    def composition(self) -> str:
        """Human readable composition, last-applied channel leftmost."""
        return " o ".join(f"N{c}" for c in reversed(self.sequence))


def order_from_label(k: int, n: int) -> CausalOrder:
    seqs = _sequences(n)
    if not 1 <= k <= len(seqs):
        raise ValueError(f"label {k} out of range 1..{len(seqs)} for N={n}")
    return CausalOrder(int(k), seqs[k - 1])


def label_from_order(sequence: Sequence[int]) -> int:
    seq = tuple(int(c) for c in sequence)
    try:
        return _sequences(len(seq)).index(seq) + 1
    except ValueError:
        raise ValueError(f"{seq} is not a permutation of 1..{len(seq)}") from None


def all_orders(n: int) -> list[CausalOrder]:
    return [CausalOrder(k + 1, s) for k, s in enumerate(_sequences(n))]


@dataclass(frozen=True)
class OrderCombination:
    """Control-state specification: distinct orders with probabilities."""

    n: int
    orders: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.orders) == 0:
            raise ValueError("a combination needs at least one order")
        if len(self.orders) != len(self.weights):
            raise ValueError("need one weight per order")
        labels = [o.label for o in self.orders]
        if len(set(labels)) != len(labels):
            raise ValueError(f"orders must be distinct, got labels {labels}")
        if any(o.n != self.n for o in self.orders):
            raise ValueError(f"all orders must act on {self.n} channels")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")
        if abs(sum(self.weights) - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights sum to {sum(self.weights)!r}, not 1")

    @classmethod
    def from_labels(cls, labels: Iterable[int], n: int, weights=None) -> "OrderCombination":
        labels = [int(k) for k in labels]
        orders = tuple(order_from_label(k, n) for k in labels)
        if weights is None:
            weights = [1.0 / len(labels)] * len(labels)
        return cls(n, orders, tuple(float(w) for w in weights))

    @property
    def m(self) -> int:
        return len(self.orders)

    @property
    def labels(self) -> tuple:
        return tuple(o.label for o in self.orders)

    def sorted(self) -> "OrderCombination":
        """Same combination with orders (and weights) in ascending label order."""
        pairs = sorted(zip(self.orders, self.weights), key=lambda p: p[0].label)
        return OrderCombination(self.n, tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @property
    def is_uniform(self) -> bool:
        return all(abs(w - 1.0 / self.m) <= WEIGHT_TOL for w in self.weights)

    def key(self) -> str:
        return ",".join(str(k) for k in sorted(self.labels))


def parse_labels(text: str) -> list[int]:
    """Parse the comma-separated label syntax, e.g. ``"1,4,5"``."""
    try:
        labels = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"malformed order labels {text!r}") from None
    if not labels:
        raise ValueError("no order labels given")
    return labels


def enumerate_combinations(n: int, m: int) -> list[OrderCombination]:
    total = math.factorial(n)
    if not 1 <= m <= total:
        raise ValueError(f"m={m} out of range 1..{total}")
    return [OrderCombination.from_labels(c, n)
            for c in itertools.combinations(range(1, total + 1), m)]


class PairKind(enum.Enum):
    LOCAL = "Local"
    GLOBAL = "Global"


@dataclass(frozen=True)
class PairClass:
    kind: PairKind
    fixed_points: frozenset

    @property
    def is_global(self) -> bool:
        return self.kind is PairKind.GLOBAL


def classify_pair(a: CausalOrder, b: CausalOrder) -> PairClass:
    """Positions (0-based, first-applied = 0) where both orders use the same channel."""
    if a.n != b.n:
        raise ValueError("orders act on different numbers of channels")
    if a.sequence == b.sequence:
        raise ValueError(f"cannot classify order {a.label} against itself")
    fixed = frozenset(i for i, (x, y) in enumerate(zip(a.sequence, b.sequence)) if x == y)
    return PairClass(PairKind.LOCAL if fixed else PairKind.GLOBAL, fixed)


def global_pair_count(c: OrderCombination) -> tuple[int, int]:
    if c.m < 2:
        raise ValueError("pair counting needs at least two orders")
    pairs = list(itertools.combinations(c.orders, 2))
    n_global = sum(classify_pair(a, b).is_global for a, b in pairs)
    return n_global, len(pairs)


class Prediction(enum.Enum):
    MAX = "Max"
    MIN = "Min"
    SINGLE = "Single"


@lru_cache(maxsize=None)
def _global_counts(n: int, m: int) -> frozenset:
    return frozenset(global_pair_count(c)[0] for c in enumerate_combinations(n, m))


def predict_class(c: OrderCombination) -> Prediction:
    """Predict whether a uniform three-channel combination reaches the high or low chi.

    A combination is ``MAX`` when it has the largest number of globally
    switching pairs attainable with ``m`` orders and ``MIN`` otherwise.
    Sizes where every combination has the same count (m = 1, 5, 6) are
    ``SINGLE``.
    """
    if c.n != 3:
        raise ValueError("class prediction is only established for N=3")
    if not c.is_uniform:
        raise ValueError("class prediction is undefined for non-uniform weights")
    if c.m < 2:
        return Prediction.SINGLE
    counts = _global_counts(c.n, c.m)
    if len(counts) == 1:
        return Prediction.SINGLE
    return Prediction.MAX if global_pair_count(c)[0] == max(counts) else Prediction.MIN
