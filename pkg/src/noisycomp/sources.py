"""Finite sources (iid / first-order Markov), block extensions, typicality.

Blocks are tuples of symbol indices.  Exact enumeration is limited by
ENUMERATION_CAP; beyond it callers must fall back to sampling with
``sample`` and the shared membership predicate ``is_typical``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EnumerationLimitError, ValidationError
from .probability import Dist, JointTable, entropy

ENUMERATION_CAP = 1 << 20

BlockT = tuple[int, ...]


def _check_rows(matrix: tuple[tuple[float, ...], ...]) -> None:
    k = len(matrix)
    for row in matrix:
        if len(row) != k:
            raise ValidationError("transition matrix must be square")
        Dist(tuple(row))  # validates mass and signs


@dataclass(frozen=True)
class Source:
    """An iid or first-order Markov source over the alphabet 0..k-1."""

    kind: str  # "iid" | "markov"
    base: Dist  # iid marginal, or Markov initial law
    transition: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        if self.kind not in ("iid", "markov"):
            raise ValidationError(f"unknown source kind {self.kind!r}")
        if self.kind == "markov":
            if self.transition is None:
                raise ValidationError("markov source requires a transition matrix")
            if len(self.transition) != self.base.alphabet_size:
                raise ValidationError("transition size does not match initial law")
            _check_rows(self.transition)
        elif self.transition is not None:
            raise ValidationError("iid source must not carry a transition matrix")

    @classmethod
    def iid(cls, probs) -> "Source":
        return cls("iid", Dist(tuple(probs)))

    @classmethod
    def markov(cls, initial, transition) -> "Source":
        rows = tuple(tuple(row) for row in transition)
        for i, row in enumerate(rows):
            try:
                Dist(row)
            except ValidationError as exc:
                raise ValidationError(f"transition row {i}: {exc}")
        return cls("markov", Dist(tuple(initial)), rows)

    @property
    def alphabet_size(self) -> int:
        return self.base.alphabet_size

    def _is_irreducible(self) -> bool:
        k = self.alphabet_size
        adj = [[j for j in range(k) if self.transition[i][j] > 0] for i in range(k)]

        def reaches(start: int) -> set[int]:
            seen = {start}
            stack = [start]
            while stack:
                for j in adj[stack.pop()]:
                    if j not in seen:
                        seen.add(j)
                        stack.append(j)
            return seen

        return all(len(reaches(i)) == k for i in range(k))

    def stationary(self) -> Dist:
        """Stationary law of an irreducible Markov chain by power iteration."""
        if self.kind != "markov":
            return self.base
        if not self._is_irreducible():
            raise ValidationError("reducible Markov chain has no unique stationary law")
        t = np.array(self.transition)
        pi = np.full(self.alphabet_size, 1.0 / self.alphabet_size)
        for _ in range(100_000):
            nxt = pi @ t
            nxt /= nxt.sum()
            if np.abs(nxt - pi).max() < 1e-12:
                pi = nxt
                break
            pi = nxt
        return Dist.normalized(pi.tolist())

    def entropy_rate(self) -> float:
        """Analytic entropy rate in nats (exact for both supported families)."""
        if self.kind == "iid":
            return entropy(self.base)
        pi = self.stationary()
        rate = 0.0
        for i, w in enumerate(pi.probs):
            if w > 0:
                rate += w * entropy(Dist(self.transition[i]))
        return rate

    def log_prob(self, block: BlockT) -> float:
        """ln P(block); -inf off the support."""
        if not block:
            raise DomainError("empty block")
        p = self.base[block[0]]
        if p == 0:
            return -math.inf
        total = math.log(p)
        if self.kind == "iid":
            for a in block[1:]:
                p = self.base[a]
                if p == 0:
                    return -math.inf
                total += math.log(p)
        else:
            for prev, a in zip(block, block[1:]):
                p = self.transition[prev][a]
                if p == 0:
                    return -math.inf
                total += math.log(p)
        return total


def extend(source: Source, n: int, cap: int = ENUMERATION_CAP) -> dict[BlockT, float]:
    """Explicit law of length-n blocks, keyed in lexicographic order."""
    if n < 1:
        raise ValidationError("block length must be >= 1")
    k = source.alphabet_size
    if k ** n > cap:
        raise EnumerationLimitError(
            f"{k}^{n} blocks exceed enumeration cap {cap}; use sample()")
    out: dict[BlockT, float] = {}
    for block in itertools.product(range(k), repeat=n):
        lp = source.log_prob(block)
        out[block] = math.exp(lp) if lp > -math.inf else 0.0
    return out


def sample(source: Source, n: int, rng_seed) -> BlockT:
    """Draw one length-n block; deterministic in the seed."""
    if n < 1:
        raise ValidationError("block length must be >= 1")
    rng = np.random.default_rng(rng_seed)
    k = source.alphabet_size
    first = int(rng.choice(k, p=np.array(source.base.probs)))
    block = [first]
    if source.kind == "iid":
        rest = rng.choice(k, size=n - 1, p=np.array(source.base.probs))
        block.extend(int(a) for a in rest)
    else:
        t = [np.array(row) for row in source.transition]
        for _ in range(n - 1):
            block.append(int(rng.choice(k, p=t[block[-1]])))
    return tuple(block)


@dataclass(frozen=True)
class TypicalSet:
    n: int
    epsilon: float
    members: frozenset[BlockT]
    target_rate: float

    @property
    def size(self) -> int:
        return len(self.members)


def is_typical(source: Source, block: BlockT, epsilon: float) -> bool:
    """Membership predicate: |-ln P(block)/n - entropy_rate| < epsilon."""
    lp = source.log_prob(block)
    if lp == -math.inf:
        return False
    return abs(-lp / len(block) - source.entropy_rate()) < epsilon


def typical_set(source: Source, n: int, epsilon: float,
                cap: int = ENUMERATION_CAP) -> TypicalSet:
    """Enumerate the epsilon-typical length-n blocks of the source."""
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    rate = source.entropy_rate()
    members = []
    for block, p in extend(source, n, cap).items():
        if p > 0 and abs(-math.log(p) / n - rate) < epsilon:
            members.append(block)
    return TypicalSet(n=n, epsilon=epsilon, members=frozenset(members),
                      target_rate=rate)


def _block_len(block) -> int:
    return len(block) if isinstance(block, tuple) else 1


def cond_typical_set(joint: JointTable, epsilon: float, y_block,
                     target: float) -> frozenset:
    """Row blocks x with |-ln P(x|y)/n - target| < epsilon for the given column y."""
    p_y = joint.col_marginal().get(y_block, 0.0)
    if p_y <= 0:
        raise DomainError(f"column block {y_block!r} has zero mass")
    members = []
    for (x, y), p in joint.entries.items():
        if y != y_block:
            continue
        cost = -math.log(p / p_y) / _block_len(x)
        if abs(cost - target) < epsilon:
            members.append(x)
    return frozenset(members)
