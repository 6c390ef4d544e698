"""Constructive block codes for noisy computations.

A code is a list of entries (y_i, A_i, Gamma_i): a function output block,
a subset of its input fiber carrying most of the conditional mass, and a
decoding region of channel-output blocks.  Regions are pairwise disjoint,
every x in A_i lands in Gamma_i except with probability <= epsilon, and
A_i covers its fiber's conditional mass up to lambda.

The greedy constructor scans candidate y blocks in decreasing probability
and carves decoding regions by information-density thresholding; it runs
either on a fully enumerated hookup or on the lazy product hookup (iid
source, per-symbol computation whose kernel factors through f).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .blocks import BlockT, all_blocks
from .channels import Hookup, ProductHookup
from .errors import (CapacityExceededError, DomainError, ValidationError)

#: constructor feasibility margin so verify()'s exact checks never flip on
#: floating-point dust
_FEAS_MARGIN = 1e-12


# ---------------------------------------------------------------------------
# data model

@dataclass(frozen=True)
class InputSet:
    """Input blocks of one code entry.

    Either an explicit mass-descending tuple of blocks, or an entire f-fiber
    kept implicit (product hookups, where fibers can be astronomically big
    but carry conditional mass 1 by construction).
    """

    kind: str  # "explicit" | "fiber"
    blocks: tuple[BlockT, ...] = ()
    y: BlockT | None = None

    def size(self, hk) -> int:
        if self.kind == "explicit":
            return len(self.blocks)
        return hk.fiber_size(self.y)

    def contains(self, x: BlockT, hk) -> bool:
        if self.kind == "explicit":
            return x in set(self.blocks)
        return hk.fiber_contains(self.y, x)

    def top(self, m: int, hk) -> list[BlockT]:
        """Up to m member blocks in conditional-mass-descending order."""
        if self.kind == "explicit":
            return list(self.blocks[:m])
        return hk.fiber_top(self.y, m)


@dataclass(frozen=True)
class CodeEntry:
    y: BlockT
    a: InputSet
    gamma: frozenset[BlockT]


@dataclass(frozen=True)
class FeinsteinCode:
    n: int
    epsilon: float
    lam: float
    entries: tuple[CodeEntry, ...]

    def __post_init__(self):
        if not (0 < self.epsilon < 0.5 and 0 < self.lam < 0.5):
            raise ValidationError("epsilon and lambda must lie in (0, 1/2)")
        seen: set[BlockT] = set()
        for e in self.entries:
            if seen & e.gamma:
                raise ValidationError("decoding regions overlap")
            seen |= e.gamma

    @property
    def m(self) -> int:
        return len(self.entries)


# ---------------------------------------------------------------------------
# greedy construction

def greedy_construct(hk, epsilon: float, lam: float, *, expand: bool = False,
                     max_entries: int | None = None) -> FeinsteinCode:
    """Build a code by greedy exhaustion over output blocks.

    Candidate y blocks are visited in decreasing probability (lexicographic
    ties).  For each candidate, A is the smallest conditional-mass-descending
    fiber prefix exceeding mass 1-lambda (the whole fiber on product
    hookups), and the decoding region collects still-unused output blocks in
    decreasing information density until every x in A is covered except with
    probability epsilon; infeasible candidates are skipped.  If nothing is
    feasible the trivial single-entry code (top-mass y, its full fiber, the
    entire output space) is returned.

    ``expand`` post-assigns every remaining output block to the entry that
    explains it best, which only increases coverage and never invalidates
    the construction; simulations use it as the maximum-coverage decoder.
    """
    if not (0 < epsilon < 0.5 and 0 < lam < 0.5):
        raise ValidationError("epsilon and lambda must lie in (0, 1/2)")
    if isinstance(hk, ProductHookup):
        if not hk.factors_through_f():
            raise ValidationError(
                "product-hookup construction needs a kernel that factors "
                "through f; enumerate the hookup instead")
        entries, used = _greedy_product(hk, epsilon, lam, max_entries)
    else:
        entries, used = _greedy_explicit(hk, epsilon, lam, max_entries)
    if not entries:
        entries = [_trivial_entry(hk)]
        used = None  # the trivial region is everything; nothing to expand
    elif expand:
        entries = _expand_regions(hk, entries, used)
    return FeinsteinCode(n=hk.n, epsilon=epsilon, lam=lam,
                         entries=tuple(entries))


def _y_candidates(p_y: np.ndarray, block_of_y) -> list[int]:
    order = [yi for yi in range(len(p_y)) if p_y[yi] > 0]
    # index order is lexicographic, so a stable sort on -p_y breaks ties
    # right; round the key so accumulation noise cannot reorder exact ties
    order.sort(key=lambda yi: -round(float(p_y[yi]), 12))
    return order


def _greedy_explicit(hk: Hookup, epsilon: float, lam: float,
                     max_entries: int | None):
    fibers = hk.fibers()
    used = np.zeros(hk.joint_yz.shape[1], dtype=bool)
    entries: list[CodeEntry] = []
    factoring = hk.factors_through_f()
    for yi in _y_candidates(hk.p_y, hk.y_block):
        if max_entries is not None and len(entries) >= max_entries:
            break
        xs = sorted(fibers[yi], key=lambda x: (-hk.p_x[x], x))
        acc_mass, a_idx = 0.0, []
        for x in xs:
            a_idx.append(x)
            acc_mass += hk.p_x[x] / hk.p_y[yi]
            if acc_mass > 1 - lam + _FEAS_MARGIN:
                break
        if not acc_mass > 1 - lam:
            continue
        if factoring:
            rows = hk.kernel_row(a_idx[0])[None, :]
        else:
            rows = np.stack([hk.kernel_row(x) for x in a_idx])
        avail = np.nonzero((hk.joint_yz[yi] > 0) & ~used)[0]
        if avail.size == 0:
            continue
        dens = np.round(hk.joint_yz[yi, avail] / hk.p_z[avail], 12)
        order = avail[np.argsort(-dens, kind="stable")]
        cover = np.zeros(rows.shape[0])
        gamma_idx: list[int] = []
        for zi in order:
            gamma_idx.append(int(zi))
            cover += rows[:, zi]
            if cover.min() >= 1 - epsilon + _FEAS_MARGIN:
                break
        if cover.min() < 1 - epsilon + _FEAS_MARGIN:
            continue
        entries.append(CodeEntry(
            y=hk.y_block(yi),
            a=InputSet("explicit", tuple(hk.x_block(x) for x in a_idx)),
            gamma=frozenset(hk.z_block(z) for z in gamma_idx)))
        used[gamma_idx] = True
    return entries, used


def _greedy_product(hk: ProductHookup, epsilon: float, lam: float,
                    max_entries: int | None):
    used = np.zeros(len(hk.p_z), dtype=bool)
    entries: list[CodeEntry] = []
    for yi in _y_candidates(hk.p_y, hk.y_block):
        if max_entries is not None and len(entries) >= max_entries:
            break
        y = hk.y_block(yi)
        cond = hk.cond_z_given_y(y)
        avail = np.nonzero((cond > 0) & ~used)[0]
        if avail.size == 0 or cond[avail].sum() < 1 - epsilon + _FEAS_MARGIN:
            continue
        dens = np.round(cond[avail] / hk.p_z[avail], 12)
        order = avail[np.argsort(-dens, kind="stable")]
        csum = np.cumsum(cond[order])
        cut = int(np.searchsorted(csum, 1 - epsilon + _FEAS_MARGIN)) + 1
        gamma_idx = order[:cut]
        entries.append(CodeEntry(
            y=y, a=InputSet("fiber", y=y),
            gamma=frozenset(hk.z_block(int(z)) for z in gamma_idx)))
        used[gamma_idx] = True
    return entries, used


def _trivial_entry(hk) -> CodeEntry:
    yi = int(np.argmax(hk.p_y))
    y = hk.y_block(yi)
    gamma = frozenset(all_blocks(hk.z_size, hk.n))
    if isinstance(hk, ProductHookup):
        return CodeEntry(y=y, a=InputSet("fiber", y=y), gamma=gamma)
    xs = sorted(hk.fibers()[yi], key=lambda x: (-hk.p_x[x], x))
    return CodeEntry(y=y, a=InputSet("explicit",
                                     tuple(hk.x_block(x) for x in xs)),
                     gamma=gamma)


def _expand_regions(hk, entries: list[CodeEntry], used: np.ndarray):
    """Assign leftover output blocks to the best-explaining entry."""
    conds = np.stack([_cond_given_y(hk, e.y) for e in entries])
    extras: dict[int, list[BlockT]] = {}
    for zi in np.nonzero(~used)[0]:
        probs = conds[:, zi]
        best = int(np.argmax(probs))
        if probs[best] > 0:
            extras.setdefault(best, []).append(hk.z_block(int(zi)))
    return [CodeEntry(e.y, e.a, e.gamma | frozenset(extras.get(i, ())))
            for i, e in enumerate(entries)]


def _cond_given_y(hk, y: BlockT) -> np.ndarray:
    if isinstance(hk, ProductHookup):
        return hk.cond_z_given_y(y)
    yi = hk.y_index(y)
    return hk.joint_yz[yi] / hk.p_y[yi]


# ---------------------------------------------------------------------------
# verification and maximality diagnostics

@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    violations: tuple[str, ...]
    entry_slacks: tuple[tuple[float, float], ...]  # (epsilon slack, lambda slack)


def verify(code: FeinsteinCode, hk) -> VerifyReport:
    """Check disjointness, coverage and fiber-mass conditions exactly."""
    if code.n != hk.n:
        raise ValidationError("code and hookup block lengths differ")
    violations: list[str] = []
    slacks: list[tuple[float, float]] = []
    seen: set[BlockT] = set()
    for i, e in enumerate(code.entries):
        if seen & e.gamma:
            violations.append(f"entry {i}: decoding region overlaps an earlier one")
        seen |= e.gamma
        eps_slack = code.epsilon - _worst_miss(hk, e)
        lam_slack = _a_mass(hk, e) - (1 - code.lam)
        slacks.append((eps_slack, lam_slack))
        if eps_slack < 0:
            violations.append(f"entry {i}: miss probability exceeds epsilon "
                              f"by {-eps_slack:.3g}")
        if lam_slack <= 0:
            violations.append(f"entry {i}: fiber subset mass not above 1-lambda")
        if not _a_in_fiber(hk, e):
            violations.append(f"entry {i}: input set leaves the fiber of y")
    return VerifyReport(ok=not violations, violations=tuple(violations),
                        entry_slacks=tuple(slacks))


def _gamma_indices(hk, gamma) -> np.ndarray:
    return np.fromiter((hk.z_index(z) for z in gamma), dtype=np.int64,
                       count=len(gamma))


def _worst_miss(hk, e: CodeEntry) -> float:
    """max over x in A of P(output outside Gamma | x)."""
    idx = _gamma_indices(hk, e.gamma)
    if isinstance(hk, ProductHookup) or e.a.kind == "fiber":
        # kernel factors through f on these paths: constant over the fiber
        if not hk.factors_through_f():
            raise ValidationError("implicit input set on a non-factoring kernel")
        return 1.0 - float(_cond_given_y(hk, e.y)[idx].sum())
    worst = 0.0
    for x in e.a.blocks:
        row = hk.kernel_row(int(np.int64(_x_index(hk, x))))
        worst = max(worst, 1.0 - float(row[idx].sum()))
    return worst


def _x_index(hk: Hookup, x: BlockT) -> int:
    from .blocks import index_of
    return index_of(x, hk.in_size)


def _a_mass(hk, e: CodeEntry) -> float:
    """P(A | y) under the conditional input law of the fiber."""
    if e.a.kind == "fiber":
        return 1.0
    yi = hk.y_index(e.y)
    return float(sum(hk.p_x[_x_index(hk, x)] for x in e.a.blocks) / hk.p_y[yi])


def _a_in_fiber(hk, e: CodeEntry) -> bool:
    if e.a.kind == "fiber":
        return e.a.y == e.y
    return all(hk.y_block(int(hk.y_of_x[_x_index(hk, x)])) == e.y
               for x in e.a.blocks)


@dataclass(frozen=True)
class MaximalityReport:
    extensible: bool
    witness_y: BlockT | None
    statement1_ok: bool  # every unused y sees the used regions with mass > lam*eps
    statement2_ok: bool  # used regions carry mass > min((1-l)(1-e), l*e) * P(reachable)
    statement3_ok: bool  # nonempty output space implies at least one entry
    union_mass: float


def maximality_check(code: FeinsteinCode, hk) -> MaximalityReport:
    """Exhaustively try to extend the code; if impossible, check the
    guaranteed coverage bounds of maximal families numerically."""
    used_idx = set()
    for e in code.entries:
        used_idx.update(int(i) for i in _gamma_indices(hk, e.gamma))
    used = np.zeros(len(hk.p_z), dtype=bool)
    used[list(used_idx)] = True
    used_entries_y = {e.y for e in code.entries}

    extensible, witness = False, None
    for yi in _y_candidates(hk.p_y, hk.y_block):
        y = hk.y_block(yi)
        if y in used_entries_y:
            continue
        if _extension_feasible(hk, yi, used, code.epsilon, code.lam):
            extensible, witness = True, y
            break

    union_mass = float(hk.p_z[used].sum())
    stmt1 = True
    if not extensible:
        for yi in _y_candidates(hk.p_y, hk.y_block):
            if hk.y_block(yi) in used_entries_y:
                continue
            seen_mass = float(_cond_given_y(hk, hk.y_block(yi))[used].sum())
            if not seen_mass > code.lam * code.epsilon:
                stmt1 = False
                break
    reachable = float(hk.p_y[hk.p_y > 0].sum())
    bound = min((1 - code.lam) * (1 - code.epsilon),
                code.lam * code.epsilon) * reachable
    stmt2 = extensible or union_mass > bound
    stmt3 = (reachable <= 0) or code.m >= 1
    return MaximalityReport(extensible=extensible, witness_y=witness,
                            statement1_ok=stmt1, statement2_ok=stmt2,
                            statement3_ok=stmt3, union_mass=union_mass)


def _extension_feasible(hk, yi: int, used: np.ndarray, epsilon: float,
                        lam: float) -> bool:
    """Can (y, A, Gamma) be added with Gamma disjoint from used regions?

    Taking Gamma as large as possible (everything unused) is optimal, so the
    test reduces to whether enough of the fiber sees that region.
    """
    y = hk.y_block(yi)
    cond = _cond_given_y(hk, y)
    avail_mass_given_y = float(cond[~used].sum())
    if isinstance(hk, ProductHookup) or hk.factors_through_f():
        return avail_mass_given_y >= 1 - epsilon  # A = full fiber, mass 1
    good_mass = 0.0
    for x in hk.fibers()[yi]:
        row = hk.kernel_row(x)
        if float(row[~used].sum()) >= 1 - epsilon:
            good_mass += hk.p_x[x] / hk.p_y[yi]
    return good_mass > 1 - lam


# ---------------------------------------------------------------------------
# size target and serialization

def feinstein_rate_size(hk, rate_nats: float) -> int:
    """Target code size floor(exp(n R - H(X^n | f(X^n)))) for a feasible rate."""
    if isinstance(hk, ProductHookup):
        from .probability import entropy_of_masses
        h_x = hk.n * entropy_of_masses(hk.p_x_sym)
        h_y = hk.n * entropy_of_masses(hk.p_y_sym)
        b_n = _product_rate(hk)
    else:
        from .capacity import _H
        h_x, h_y = _H(hk.p_x), _H(hk.p_y)
        b_n = (h_x - (_H(hk.joint_yz.ravel()) - _H(hk.p_z))) / hk.n
    if rate_nats >= b_n:
        raise CapacityExceededError(
            f"rate {rate_nats:.6g} is not below the typical input rate {b_n:.6g}")
    h_x_given_y = h_x - h_y  # f deterministic
    return int(math.floor(math.exp(hk.n * rate_nats - h_x_given_y)))


def _product_rate(hk: ProductHookup) -> float:
    from .capacity import _H
    return (_H(hk.p_x_sym) - (_H(hk.base.joint_yz.ravel()) - _H(hk.base.p_z)))


def code_to_json(code: FeinsteinCode) -> str:
    def ints(block):
        return [int(v) for v in block]

    def enc_a(a: InputSet):
        if a.kind == "fiber":
            return {"fiber_of": ints(a.y)}
        return {"blocks": [ints(b) for b in a.blocks]}

    return json.dumps({
        "n": code.n, "epsilon": code.epsilon, "lambda": code.lam,
        "entries": [{"y": ints(e.y), "a": enc_a(e.a),
                     "gamma": sorted(ints(z) for z in e.gamma)}
                    for e in code.entries],
    }, indent=2)


def code_from_json(text: str) -> FeinsteinCode:
    doc = json.loads(text)
    entries = []
    for e in doc["entries"]:
        a = e["a"]
        if "fiber_of" in a:
            inset = InputSet("fiber", y=tuple(a["fiber_of"]))
        else:
            inset = InputSet("explicit", tuple(tuple(b) for b in a["blocks"]))
        entries.append(CodeEntry(y=tuple(e["y"]), a=inset,
                                 gamma=frozenset(tuple(z) for z in e["gamma"])))
    return FeinsteinCode(n=doc["n"], epsilon=doc["epsilon"], lam=doc["lambda"],
                         entries=tuple(entries))
