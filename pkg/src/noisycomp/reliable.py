"""Encoder / noisy-device / decoder pipeline and its error experiments.

A codec pairs an injective encoding U of typical k-blocks of a logical
source into codewords of a block code with a decoding V from code outputs
back to logical results, compatible in the sense that codewords sharing an
f-image always decode to the same logical output.  Monte Carlo simulation
estimates the end-to-end failure probability; the rate sweep exhibits the
threshold behaviour around capacity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .blocks import BlockT
from .channels import (BlockFn, Hookup, NoisyComputation, ProductHookup)
from .errors import CapacityExceededError, ValidationError
from .feinstein import FeinsteinCode, greedy_construct
from .sources import Source, is_typical, typical_set


@dataclass(frozen=True)
class ReliableInstance:
    """Everything the pipeline needs: the logical source and function
    (X', g), the physical noisy computation (f, F), and the code-side input
    source X0 (ideally a capacity-achieving law for the computation)."""

    xprime: Source
    g: BlockFn  # per-symbol logical function
    nc: NoisyComputation  # per-symbol physical computation
    code_source: Source

    def g_at(self, k: int) -> BlockFn:
        return self.g.extended(k) if self.g.block_len_in != k else self.g


@dataclass(frozen=True)
class Codec:
    k: int
    n: int
    eps_typical: float
    encode: dict[BlockT, BlockT]  # typical logical block -> codeword
    decode: dict[BlockT, BlockT]  # code output y_i -> logical output block
    region_of: dict[BlockT, BlockT]  # channel-output block -> y_i
    injective_decoding: bool
    rate_nats: float
    uncovered_typical_mass: float = 0.0
    uncovered_fibers: tuple[BlockT, ...] = ()


@dataclass(frozen=True)
class ErrorEstimate:
    trials: int
    failures: int
    p_hat: float
    wilson_interval: tuple[float, float]


def wilson_interval(failures: int, trials: int, z: float = 1.959964) -> tuple[float, float]:
    """95% score interval for a binomial proportion."""
    if trials == 0:
        return (0.0, 1.0)
    p = failures / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return (max(center - half, 0.0), min(center + half, 1.0))


def build_codec(instance: ReliableInstance, k: int, code: FeinsteinCode, hk, *,
                eps_typical: float = 0.1, margin: float = 0.0,
                best_effort: bool = False) -> Codec:
    """Assign typical logical blocks to codewords, fiber by fiber.

    Each g-fiber of the typical set consumes whole code entries (an entry's
    decoding output is single-valued, so entries are never shared between
    fibers).  Fibers are served in decreasing probability.  Running out of
    entries raises unless ``best_effort``, in which case the remaining
    fibers stay uncovered and count as failures in simulation.
    """
    n = code.n
    rate = k * instance.xprime.entropy_rate() / n
    b_limit = _input_rate_of(hk)
    if not best_effort and rate >= b_limit - margin:
        raise CapacityExceededError(
            f"rate {rate:.6g} not below the typical input rate {b_limit:.6g}")
    fibers = _logical_fibers(instance, k, eps_typical)

    encode: dict[BlockT, BlockT] = {}
    decode: dict[BlockT, BlockT] = {}
    cursor = 0
    uncovered: list[BlockT] = []
    fiber_entry_count: dict[BlockT, int] = {}
    for z in fibers.order:
        remaining = fibers.count(z)
        members = fibers.members(z)
        consumed = 0
        staged: list[tuple[BlockT, BlockT, BlockT]] = []  # (x', codeword, y)
        while remaining and cursor + consumed < code.m:
            entry = code.entries[cursor + consumed]
            take = entry.a.top(remaining, hk)
            for word, xp in zip(take, members):
                staged.append((xp, word, entry.y))
            remaining -= len(take)
            consumed += 1
        if remaining:  # ran out of entries for this fiber
            if not best_effort:
                raise CapacityExceededError(
                    f"code has {code.m} entries; fiber {z!r} still needs "
                    f"{remaining} more codewords after entry {cursor + consumed}")
            uncovered.append(z)
            continue
        for xp, word, y in staged:
            encode[xp] = word
            decode[y] = z
        cursor += consumed
        fiber_entry_count[z] = consumed
    if not best_effort and uncovered:
        raise CapacityExceededError("insufficient code entries")

    total_mass = fibers.total_mass
    lost = sum(fibers.mass(z) for z in uncovered)
    region_of = {zb: e.y for e in code.entries for zb in e.gamma}
    injective = all(c == 1 for c in fiber_entry_count.values()) and bool(fiber_entry_count)
    return Codec(k=k, n=n, eps_typical=eps_typical, encode=encode,
                 decode=decode, region_of=region_of,
                 injective_decoding=injective, rate_nats=rate,
                 uncovered_typical_mass=(lost / total_mass if total_mass else 0.0),
                 uncovered_fibers=tuple(uncovered))


class _LogicalFibers:
    """Typical logical k-blocks grouped by their g-image.

    ``order`` lists images by decreasing fiber probability; ``members``
    yields a fiber's blocks deterministically.  Built either by explicit
    enumeration or, for uniform iid sources with per-symbol g (where every
    block is typical), lazily from the product structure.
    """

    def __init__(self, order, count_fn, members_fn, mass_fn, total_mass):
        self.order = order
        self.count = count_fn
        self.members = members_fn
        self.mass = mass_fn
        self.total_mass = total_mass


def _logical_fibers(instance: ReliableInstance, k: int,
                    eps_typical: float) -> _LogicalFibers:
    from .sources import ENUMERATION_CAP
    s = instance.xprime
    g_k = instance.g_at(k)
    if s.alphabet_size ** k <= ENUMERATION_CAP:
        typ = typical_set(s, k, eps_typical)
        fibers: dict[BlockT, list[BlockT]] = {}
        for x in sorted(typ.members):
            fibers.setdefault(g_k(x), []).append(x)
        masses = {z: sum(math.exp(s.log_prob(x)) for x in xs)
                  for z, xs in fibers.items()}
        order = sorted(fibers, key=lambda z: (-masses[z], z))
        return _LogicalFibers(order, lambda z: len(fibers[z]),
                              lambda z: iter(fibers[z]),
                              lambda z: masses[z], sum(masses.values()))
    if not (s.kind == "iid" and len(set(s.base.probs)) == 1
            and instance.g.per_symbol):
        raise ValidationError(
            "logical side too large to enumerate and not uniform-iid with "
            "a per-symbol function; reduce k")
    # uniform source: every block is typical, fibers factorize per symbol
    import itertools
    gmap = instance.g.symbol_map
    sym_fibers: dict[int, list[int]] = {}
    for a, b in enumerate(gmap):
        sym_fibers.setdefault(b, []).append(a)
    p_sym = s.base.probs[0]
    images = [z for z in itertools.product(sorted(sym_fibers), repeat=k)]
    mass = {z: math.prod(len(sym_fibers[b]) * p_sym for b in z) for z in images}
    order = sorted(images, key=lambda z: (-mass[z], z))

    def members(z):
        return itertools.product(*(sym_fibers[b] for b in z))

    def count(z):
        return math.prod(len(sym_fibers[b]) for b in z)

    return _LogicalFibers(order, count,
                          lambda z: iter(tuple(x) for x in members(z)),
                          lambda z: mass[z], 1.0)


def _input_rate_of(hk) -> float:
    from .capacity import _H
    if isinstance(hk, ProductHookup):
        return (_H(hk.p_x_sym)
                - (_H(hk.base.joint_yz.ravel()) - _H(hk.base.p_z)))
    return (_H(hk.p_x) - (_H(hk.joint_yz.ravel()) - _H(hk.p_z))) / hk.n


def is_compatible(codec: Codec, g_k: BlockFn, f_n: BlockFn):
    """Exhaustive deterministic-decoding check over the encoder domain.

    Same f-image must force the same logical output; injective codecs must
    additionally satisfy the converse.  Returns (ok, witness_pair_or_None).
    """
    by_image: dict[BlockT, BlockT] = {}
    rep: dict[BlockT, BlockT] = {}
    for xp, word in codec.encode.items():
        img = f_n(word)
        z = g_k(xp)
        if img in by_image:
            if by_image[img] != z:
                return False, (rep[img], xp)
        else:
            by_image[img] = z
            rep[img] = xp
    if codec.injective_decoding:
        by_output: dict[BlockT, BlockT] = {}
        orep: dict[BlockT, BlockT] = {}
        for xp, word in codec.encode.items():
            img, z = f_n(word), g_k(xp)
            if z in by_output:
                if by_output[z] != img:
                    return False, (orep[z], xp)
            else:
                by_output[z] = img
                orep[z] = xp
    return True, None


def _sample_block(source: Source, n: int, rng: np.random.Generator) -> BlockT:
    k = source.alphabet_size
    base = np.array(source.base.probs)
    if source.kind == "iid":
        return tuple(int(a) for a in rng.choice(k, size=n, p=base))
    block = [int(rng.choice(k, p=base))]
    rows = [np.array(r) for r in source.transition]
    for _ in range(n - 1):
        block.append(int(rng.choice(k, p=rows[block[-1]])))
    return tuple(block)


def simulate(codec: Codec, instance: ReliableInstance, trials: int,
             rng_seed) -> ErrorEstimate:
    """Monte Carlo failure estimate of the full pipeline.

    Per trial: rejection-sample a typical logical block, encode, push the
    codeword through the noisy kernel, decode by decoding-region lookup
    (a miss counts as failure), compare with the true logical output.
    Per-trial RNG streams derive from (seed, trial), so results do not
    depend on execution order or worker count.
    """
    if trials <= 0:
        raise ValidationError("trials must be positive")
    g_k = instance.g_at(codec.k)
    kernel = instance.nc.kernel
    kernel_n = kernel.extended(codec.n) if kernel.block_len != codec.n else kernel
    seed_list = list(np.atleast_1d(np.asarray(rng_seed, dtype=np.uint64)))
    failures = 0
    for t in range(trials):
        rng = np.random.default_rng([*seed_list, t])
        for _ in range(100_000):
            xp = _sample_block(instance.xprime, codec.k, rng)
            if is_typical(instance.xprime, xp, codec.eps_typical):
                break
        else:
            failures += 1
            continue
        word = codec.encode.get(xp)
        if word is None:
            failures += 1
            continue
        z = kernel_n.sample(word, rng)
        y = codec.region_of.get(z)
        if y is None or codec.decode.get(y) != g_k(xp):
            failures += 1
    return ErrorEstimate(trials=trials, failures=failures,
                         p_hat=failures / trials,
                         wilson_interval=wilson_interval(failures, trials))


def default_eps_schedule(n: int) -> float:
    """Code tolerance shrinking with block length (used by rate sweeps)."""
    return min(0.45, max(0.05, 0.1 + 1.8 / n))


def rate_sweep(instance: ReliableInstance, rates, ns, trials: int, seed: int,
               eps_schedule=default_eps_schedule, eps_typical: float = 0.1,
               expand: bool = True) -> list[dict]:
    """Error probability across a (rate, block length) grid.

    Rates below capacity should show failure probabilities decaying in n;
    rates above should stay bounded away from zero.  Codecs are built
    best-effort so that the converse regime is observable rather than an
    error; uncovered mass is reported.
    """
    h_logical = instance.xprime.entropy_rate()
    rows: list[dict] = []
    for i_n, n in enumerate(ns):
        hk = _hookup_for(instance, n)
        eps = eps_schedule(n)
        code = greedy_construct(hk, eps, eps, expand=expand)
        for i_r, rate in enumerate(rates):
            k = max(1, math.floor(rate * n / h_logical + 1e-9))
            codec = build_codec(instance, k, code, hk,
                                eps_typical=eps_typical, best_effort=True)
            est = simulate(codec, instance, trials, (seed, i_n, i_r))
            rows.append({
                "R_target": rate, "R_nats": codec.rate_nats, "k": k, "n": n,
                "epsilon": eps, "m_entries": code.m,
                "trials": est.trials, "failures": est.failures,
                "p_hat": est.p_hat, "ci_lo": est.wilson_interval[0],
                "ci_hi": est.wilson_interval[1], "seed": seed,
                "uncovered_mass": codec.uncovered_typical_mass,
            })
    return rows


def _hookup_for(instance: ReliableInstance, n: int):
    try:
        return ProductHookup(instance.code_source, instance.nc, n)
    except ValidationError:
        return Hookup(instance.code_source, instance.nc, n)
