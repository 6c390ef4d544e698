"""Exact finite probability: distributions, joint tables, entropy functionals.

All information quantities are in nats.  Zero-mass entries are never stored
and 0*ln(0) is taken to be 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from .errors import DomainError, ValidationError

#: tolerance on total probability mass; inputs inside it are renormalized,
#: anything further off is rejected.
MASS_TOL = 1e-12

Block = Hashable


def _validate_masses(values: Iterable[float], what: str) -> float:
    total = 0.0
    for v in values:
        if not math.isfinite(v):
            raise ValidationError(f"{what}: non-finite probability {v!r}")
        if v < 0:
            raise ValidationError(f"{what}: negative probability {v!r}")
        total += v
    if abs(total - 1.0) > MASS_TOL:
        raise ValidationError(f"{what}: mass {total!r} not within {MASS_TOL} of 1")
    return total


@dataclass(frozen=True)
class Dist:
    """Probability vector over a finite alphabet indexed 0..k-1."""

    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.probs) == 0:
            raise ValidationError("empty distribution")
        total = _validate_masses(self.probs, "Dist")
        if total != 1.0:
            object.__setattr__(self, "probs", tuple(p / total for p in self.probs))

    @classmethod
    def normalized(cls, weights: Iterable[float]) -> "Dist":
        """Build a Dist from nonnegative weights, normalizing whatever their sum."""
        w = list(weights)
        total = sum(w)
        if total <= 0:
            raise ValidationError("weights must have positive sum")
        return cls(tuple(x / total for x in w))

    @property
    def alphabet_size(self) -> int:
        return len(self.probs)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.probs) if p > 0)

    def __getitem__(self, i: int) -> float:
        return self.probs[i]


@dataclass(frozen=True)
class JointTable:
    """Sparse joint law over (row_block, col_block) pairs.

    Blocks may be plain symbols or tuples of symbols; only positive entries
    are stored.
    """

    entries: Mapping[tuple[Block, Block], float] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for key, p in self.entries.items():
            if not (isinstance(key, tuple) and len(key) == 2):
                raise ValidationError(f"JointTable key {key!r} is not a (row, col) pair")
            if not math.isfinite(p) or p < 0:
                raise ValidationError(f"JointTable: bad probability {p!r} at {key!r}")
            if p > 0:
                cleaned[key] = p
        if not cleaned:
            raise ValidationError("JointTable has no positive entries")
        total = sum(cleaned.values())
        if abs(total - 1.0) > MASS_TOL:
            raise ValidationError(f"JointTable: mass {total!r} not within {MASS_TOL} of 1")
        if total != 1.0:
            cleaned = {k: p / total for k, p in cleaned.items()}
        object.__setattr__(self, "entries", cleaned)

    def row_marginal(self) -> dict[Block, float]:
        out: dict[Block, float] = {}
        for (r, _), p in self.entries.items():
            out[r] = out.get(r, 0.0) + p
        return out

    def col_marginal(self) -> dict[Block, float]:
        out: dict[Block, float] = {}
        for (_, c), p in self.entries.items():
            out[c] = out.get(c, 0.0) + p
        return out

    def prob(self, row: Block, col: Block) -> float:
        return self.entries.get((row, col), 0.0)

    @classmethod
    def from_product(cls, row_marg: Mapping[Block, float],
                     col_marg: Mapping[Block, float]) -> "JointTable":
        """Independent coupling of two marginal laws."""
        return cls({(r, c): pr * pc
                    for r, pr in row_marg.items() if pr > 0
                    for c, pc in col_marg.items() if pc > 0})


def entropy_of_masses(masses: Iterable[float]) -> float:
    """-sum p ln p over an iterable of probabilities (nats)."""
    return -sum(p * math.log(p) for p in masses if p > 0)


def entropy(d: Dist) -> float:
    """Shannon entropy of a distribution in nats."""
    return entropy_of_masses(d.probs)


def joint_entropy(j: JointTable) -> float:
    return entropy_of_masses(j.entries.values())


def mutual_info(j: JointTable) -> float:
    """I(row; col) = sum p(r,c) ln[p(r,c) / (p(r) p(c))], in nats."""
    pr = j.row_marginal()
    pc = j.col_marginal()
    total = 0.0
    for (r, c), p in j.entries.items():
        total += p * math.log(p / (pr[r] * pc[c]))
    return max(total, 0.0)


def cond_entropy(j: JointTable) -> float:
    """H(row | col) = H(joint) - H(col marginal), in nats."""
    return max(joint_entropy(j) - entropy_of_masses(j.col_marginal().values()), 0.0)


def info_density(j: JointTable, row_block: Block, col_block: Block) -> float:
    """ln[p(r,c) / (p(r) p(c))] at one support point of the joint table."""
    p = j.entries.get((row_block, col_block))
    if p is None:
        raise DomainError(f"({row_block!r}, {col_block!r}) has zero joint mass")
    return math.log(p / (j.row_marginal()[row_block] * j.col_marginal()[col_block]))
