"""Block channels and functions: memoryless kernels, deterministic channels,
cascades, the pairing of a function with a noisy channel, hookups with a
source, and lifting of partial string functions to fixed-length blocks.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .blocks import BlockT, all_blocks, block_of, index_of
from .errors import (BlockOverflowError, DomainError, EnumerationLimitError,
                     ValidationError)
from .probability import Dist, JointTable
from .sources import ENUMERATION_CAP, Source, extend


# ---------------------------------------------------------------------------
# deterministic block functions

@dataclass(frozen=True)
class BlockFn:
    """Total function from input blocks to output blocks.

    ``symbol_map`` is set for per-symbol functions (the block image is the
    coordinatewise image), which is what makes length extension and
    single-letter shortcuts possible downstream.  ``horizon`` records the
    causality horizon in symbols.
    """

    in_size: int
    out_size: int
    block_len_in: int
    block_len_out: int
    fn: Callable[[BlockT], BlockT]
    symbol_map: tuple[int, ...] | None = None
    horizon: int = 1
    name: str = ""

    def __call__(self, block: BlockT) -> BlockT:
        out = self.fn(block)
        if len(out) != self.block_len_out:
            raise ValidationError(
                f"{self.name or 'block function'} emitted length {len(out)}, "
                f"expected {self.block_len_out}")
        return out

    @property
    def per_symbol(self) -> bool:
        return self.symbol_map is not None

    def extended(self, n: int) -> "BlockFn":
        """Length-n coordinatewise extension of a per-symbol function."""
        if not self.per_symbol:
            raise ValidationError("only per-symbol functions extend to other lengths")
        sm = self.symbol_map
        return BlockFn(self.in_size, self.out_size, n, n,
                       lambda x, sm=sm: tuple(sm[a] for a in x),
                       symbol_map=sm, horizon=self.horizon,
                       name=f"{self.name}^{n}" if self.name else "")


def per_symbol_fn(symbol_map, out_size: int, name: str = "") -> BlockFn:
    sm = tuple(symbol_map)
    if any(not (0 <= v < out_size) for v in sm):
        raise ValidationError("symbol map value outside output alphabet")
    return BlockFn(len(sm), out_size, 1, 1, lambda x: tuple(sm[a] for a in x),
                   symbol_map=sm, name=name)


def identity_fn(size: int) -> BlockFn:
    return per_symbol_fn(range(size), size, name="identity")


def table_fn(mapping: dict[BlockT, BlockT], in_size: int, out_size: int,
             block_len_in: int, block_len_out: int, name: str = "") -> BlockFn:
    """Block function given by an explicit (total) truth table."""
    if len(mapping) != in_size ** block_len_in:
        raise ValidationError("truth table is not total on the input blocks")
    return BlockFn(in_size, out_size, block_len_in, block_len_out,
                   lambda x: mapping[x], horizon=block_len_in, name=name)


def _pair_bits(sym: int) -> tuple[int, int]:
    return sym >> 1, sym & 1


def and_pairs() -> BlockFn:
    """AND of the two bits packed in each 4-ary symbol."""
    return per_symbol_fn([a & b for a, b in map(_pair_bits, range(4))], 2, "and")


def or_pairs() -> BlockFn:
    return per_symbol_fn([a | b for a, b in map(_pair_bits, range(4))], 2, "or")


def xor_pairs() -> BlockFn:
    return per_symbol_fn([a ^ b for a, b in map(_pair_bits, range(4))], 2, "xor")


def increment_fn(n: int) -> BlockFn:
    """Big-endian binary increment (mod 2^n) on length-n bit blocks."""
    def inc(x: BlockT) -> BlockT:
        v = (index_of(x, 2) + 1) % (2 ** len(x))
        return block_of(v, 2, len(x))
    return BlockFn(2, 2, n, n, inc, horizon=n, name="increment")


BUILTIN_FNS: dict[str, Callable[..., BlockFn]] = {
    "identity": identity_fn,
    "and": lambda size=4: and_pairs(),
    "or": lambda size=4: or_pairs(),
    "xor": lambda size=4: xor_pairs(),
    "increment": lambda size=2, n=1: increment_fn(n),
}


# ---------------------------------------------------------------------------
# kernels

class BlockKernel:
    """Conditional law from input blocks to output blocks."""

    input_size: int
    output_size: int
    block_len: int

    def law(self, x: BlockT) -> dict[BlockT, float]:
        raise NotImplementedError

    def law_vector(self, x: BlockT) -> np.ndarray:
        """Dense conditional law over output-block indices."""
        v = np.zeros(self.output_size ** self.block_len)
        for z, p in self.law(x).items():
            v[index_of(z, self.output_size)] = p
        return v

    def sample(self, x: BlockT, rng: np.random.Generator) -> BlockT:
        items = list(self.law(x).items())
        probs = np.array([p for _, p in items])
        return items[int(rng.choice(len(items), p=probs / probs.sum()))][0]

    def extended(self, n: int) -> "BlockKernel":
        raise ValidationError("this kernel has a fixed block length")


class MemorylessKernel(BlockKernel):
    """Per-symbol stochastic matrix applied independently at each position."""

    def __init__(self, matrix, block_len: int = 1):
        rows = [Dist(tuple(row)).probs for row in matrix]
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValidationError("matrix rows have unequal lengths")
        self.matrix = tuple(rows)
        self.input_size = len(rows)
        self.output_size = width
        self.block_len = block_len
        self._np = np.array(self.matrix)
        self._cache: dict[BlockT, dict[BlockT, float]] = {}
        self._lock = threading.Lock()

    def law(self, x: BlockT) -> dict[BlockT, float]:
        cached = self._cache.get(x)
        if cached is not None:
            return cached
        vec = self.law_vector(x)
        out = {block_of(i, self.output_size, len(x)): p
               for i, p in enumerate(vec) if p > 0}
        with self._lock:
            self._cache.setdefault(x, out)
        return self._cache[x]

    def law_vector(self, x: BlockT) -> np.ndarray:
        vec = np.ones(1)
        for a in x:
            vec = np.kron(vec, self._np[a])
        return vec

    def sample(self, x: BlockT, rng: np.random.Generator) -> BlockT:
        return tuple(int(rng.choice(self.output_size, p=self._np[a])) for a in x)

    def extended(self, n: int) -> "MemorylessKernel":
        return MemorylessKernel(self.matrix, block_len=n)


class TableKernel(BlockKernel):
    """Explicit conditional table; rows validated as distributions."""

    def __init__(self, table: dict[BlockT, dict[BlockT, float]],
                 input_size: int, output_size: int, block_len: int):
        self.input_size = input_size
        self.output_size = output_size
        self.block_len = block_len
        self.table = {}
        for x, row in table.items():
            Dist.normalized(row.values())  # sign/mass check
            total = sum(row.values())
            if abs(total - 1.0) > 1e-12:
                raise ValidationError(f"row of {x!r} has mass {total!r}")
            self.table[x] = {z: p / total for z, p in row.items() if p > 0}

    def law(self, x: BlockT) -> dict[BlockT, float]:
        try:
            return self.table[x]
        except KeyError:
            raise DomainError(f"kernel row missing for {x!r}") from None


class DeterministicKernel(BlockKernel):
    """Point-mass kernel at f(x)."""

    def __init__(self, f: BlockFn):
        self.f = f
        self.input_size = f.in_size
        self.output_size = f.out_size
        self.block_len = f.block_len_in

    def law(self, x: BlockT) -> dict[BlockT, float]:
        return {self.f(x): 1.0}

    def sample(self, x: BlockT, rng: np.random.Generator) -> BlockT:
        return self.f(x)

    def extended(self, n: int) -> "DeterministicKernel":
        return DeterministicKernel(self.f.extended(n))


class ThroughFnKernel(BlockKernel):
    """Deterministic function followed by noise: law(x) = noise.law(f(x)).

    The conditional law depends on x only through f(x), which is exactly the
    decomposable-module structure and what the fast constructive paths key on.
    """

    def __init__(self, f: BlockFn, noise: BlockKernel):
        if f.out_size != noise.input_size:
            raise ValidationError("function output alphabet != noise input alphabet")
        self.f = f
        self.noise = noise
        self.input_size = f.in_size
        self.output_size = noise.output_size
        self.block_len = f.block_len_in

    def law(self, x: BlockT) -> dict[BlockT, float]:
        return self.noise.law(self.f(x))

    def law_vector(self, x: BlockT) -> np.ndarray:
        return self.noise.law_vector(self.f(x))

    def sample(self, x: BlockT, rng: np.random.Generator) -> BlockT:
        return self.noise.sample(self.f(x), rng)

    def extended(self, n: int) -> "ThroughFnKernel":
        return ThroughFnKernel(self.f.extended(n), self.noise.extended(n))


class CascadeKernel(BlockKernel):
    """Generic composition law(x)(z) = sum_y k1(x)(y) k2(y)(z)."""

    def __init__(self, first: BlockKernel, second: BlockKernel):
        self.first = first
        self.second = second
        self.input_size = first.input_size
        self.output_size = second.output_size
        self.block_len = first.block_len

    def law(self, x: BlockT) -> dict[BlockT, float]:
        out: dict[BlockT, float] = {}
        for y, py in self.first.law(x).items():
            for z, pz in self.second.law(y).items():
                out[z] = out.get(z, 0.0) + py * pz
        return out

    def sample(self, x: BlockT, rng: np.random.Generator) -> BlockT:
        return self.second.sample(self.first.sample(x, rng), rng)


def memoryless(matrix) -> MemorylessKernel:
    return MemorylessKernel(matrix)


def deterministic(f: BlockFn) -> DeterministicKernel:
    return DeterministicKernel(f)


def bsc(flip: float) -> MemorylessKernel:
    return MemorylessKernel([[1 - flip, flip], [flip, 1 - flip]])


def cascade(k1: BlockKernel, k2: BlockKernel) -> BlockKernel:
    """Compose two kernels, keeping as much structure as possible."""
    if k1.output_size != k2.input_size:
        raise ValidationError("cascade alphabet mismatch")
    if k1.block_len != k2.block_len:
        raise ValidationError("cascade block-length mismatch")
    if isinstance(k1, MemorylessKernel) and isinstance(k2, MemorylessKernel):
        return MemorylessKernel((np.array(k1.matrix) @ np.array(k2.matrix)).tolist(),
                                block_len=k1.block_len)
    if (isinstance(k1, MemorylessKernel) and isinstance(k2, DeterministicKernel)
            and k2.f.per_symbol):
        agg = np.zeros((k1.input_size, k2.f.out_size))
        for y, z in enumerate(k2.f.symbol_map):
            agg[:, z] += np.array(k1.matrix)[:, y]
        return MemorylessKernel(agg.tolist(), block_len=k1.block_len)
    if isinstance(k1, DeterministicKernel):
        if isinstance(k2, DeterministicKernel):
            f, g = k1.f, k2.f
            composed = BlockFn(f.in_size, g.out_size, f.block_len_in,
                               g.block_len_out, lambda x: g(f(x)),
                               symbol_map=(tuple(g.symbol_map[v] for v in f.symbol_map)
                                           if f.per_symbol and g.per_symbol else None),
                               horizon=max(f.horizon, g.horizon))
            return DeterministicKernel(composed)
        return ThroughFnKernel(k1.f, k2)
    return CascadeKernel(k1, k2)


# ---------------------------------------------------------------------------
# noisy computation: a function paired with a noisy channel on one input

@dataclass(frozen=True)
class NoisyComputation:
    f: BlockFn
    kernel: BlockKernel

    def __post_init__(self):
        if self.f.in_size != self.kernel.input_size:
            raise ValidationError("function and kernel input alphabets differ")
        if self.f.block_len_in != self.kernel.block_len:
            raise ValidationError("function and kernel block lengths differ")

    @property
    def single_letter(self) -> bool:
        """True when both parts act per symbol, so rates single-letterize."""
        return (self.f.per_symbol and self.f.block_len_in == 1
                and isinstance(self.kernel, (MemorylessKernel, ThroughFnKernel,
                                             DeterministicKernel))
                and self.kernel.block_len == 1
                and _per_symbol_kernel(self.kernel))

    def extended(self, n: int) -> "NoisyComputation":
        return NoisyComputation(self.f.extended(n), self.kernel.extended(n))


def _per_symbol_kernel(k: BlockKernel) -> bool:
    if isinstance(k, MemorylessKernel):
        return True
    if isinstance(k, DeterministicKernel):
        return k.f.per_symbol
    if isinstance(k, ThroughFnKernel):
        return k.f.per_symbol and _per_symbol_kernel(k.noise)
    return False


def product(f: BlockFn, kernel: BlockKernel) -> NoisyComputation:
    """Pair a deterministic function with a noisy kernel on the same input."""
    return NoisyComputation(f, kernel)


def _same_fn(a: BlockFn, b: BlockFn) -> bool:
    if a is b:
        return True
    return (a.per_symbol and b.per_symbol and a.symbol_map == b.symbol_map
            and a.in_size == b.in_size and a.out_size == b.out_size)


def _kernel_factors_through(kernel: BlockKernel, f: BlockFn) -> bool:
    """True when kernel law(x) depends on x only through f(x) by structure."""
    if isinstance(kernel, ThroughFnKernel):
        return _same_fn(kernel.f, f)
    if isinstance(kernel, DeterministicKernel):
        return _same_fn(kernel.f, f)
    if isinstance(kernel, MemorylessKernel):
        # rows equal within each f-fiber would also qualify; check directly
        mat = kernel.matrix
        fibers: dict[int, tuple] = {}
        for a in range(kernel.input_size):
            y = f.symbol_map[a] if f.per_symbol else None
            if y is None:
                return False
            if fibers.setdefault(y, mat[a]) != mat[a]:
                return False
        return True
    return False


# ---------------------------------------------------------------------------
# hookup of a source with a noisy computation

class Hookup:
    """Exact finite-n law of (X^n, f(X^n), kernel output) as dense arrays.

    Indices are lexicographic block indices; ``joint_yz`` is the
    (f-output, kernel-output) joint matrix.
    """

    def __init__(self, source: Source, nc: NoisyComputation, n: int,
                 cap: int = ENUMERATION_CAP):
        if source.alphabet_size != nc.f.in_size:
            raise ValidationError("source and computation alphabets differ")
        nc_n = nc.extended(n) if nc.f.block_len_in != n else nc
        if nc_n.f.block_len_in != n:
            raise ValidationError(f"computation has block length "
                                  f"{nc.f.block_len_in}, requested n={n}")
        self.source, self.nc, self.n = source, nc_n, n
        self.in_size = source.alphabet_size
        self.f_size = nc_n.f.out_size
        self.z_size = nc_n.kernel.output_size
        ny, nz = self.f_size ** n, self.z_size ** n
        if ny * nz > cap * 16:
            raise EnumerationLimitError("output joint too large to enumerate")

        law = extend(source, n, cap)
        self.p_x = np.array(list(law.values()))
        self.y_of_x = np.fromiter(
            (index_of(nc_n.f(x), self.f_size) for x in law), dtype=np.int64,
            count=len(law))
        self.joint_yz = np.zeros((ny, nz))
        self._through = _kernel_factors_through(nc_n.kernel, nc_n.f)
        if self._through:
            # law depends on x only through y: one kernel row per reachable y
            self._rows_by_y: dict[int, np.ndarray] = {}
            for xi, px in enumerate(self.p_x):
                if px == 0:
                    continue
                yi = int(self.y_of_x[xi])
                if yi not in self._rows_by_y:
                    self._rows_by_y[yi] = self.nc.kernel.law_vector(
                        block_of(xi, self.in_size, n))
                self.joint_yz[yi] += px * self._rows_by_y[yi]
        else:
            for xi, px in enumerate(self.p_x):
                if px == 0:
                    continue
                row = self.nc.kernel.law_vector(block_of(xi, self.in_size, n))
                self.joint_yz[int(self.y_of_x[xi])] += px * row
        self.p_y = self.joint_yz.sum(axis=1)
        self.p_z = self.joint_yz.sum(axis=0)

    # -- block/index helpers -------------------------------------------------
    def x_block(self, i: int) -> BlockT:
        return block_of(i, self.in_size, self.n)

    def y_block(self, i: int) -> BlockT:
        return block_of(i, self.f_size, self.n)

    def z_block(self, i: int) -> BlockT:
        return block_of(i, self.z_size, self.n)

    def y_index(self, block: BlockT) -> int:
        return index_of(block, self.f_size)

    def z_index(self, block: BlockT) -> int:
        return index_of(block, self.z_size)

    # -- probabilistic accessors --------------------------------------------
    def fibers(self) -> dict[int, np.ndarray]:
        """Positive-mass input indices grouped by f-output index."""
        out: dict[int, list[int]] = {}
        for xi, px in enumerate(self.p_x):
            if px > 0:
                out.setdefault(int(self.y_of_x[xi]), []).append(xi)
        return {y: np.array(xs) for y, xs in out.items()}

    def kernel_row(self, x_index: int) -> np.ndarray:
        if self._through:
            return self._rows_by_y[int(self.y_of_x[x_index])]
        return self.nc.kernel.law_vector(self.x_block(x_index))

    def factors_through_f(self) -> bool:
        return self._through

    def joint_table(self) -> JointTable:
        """The (f-output, kernel-output) joint as a sparse JointTable."""
        entries = {}
        ny, nz = self.joint_yz.shape
        for yi in range(ny):
            for zi in range(nz):
                p = self.joint_yz[yi, zi]
                if p > 0:
                    entries[(self.y_block(yi), self.z_block(zi))] = p
        return JointTable(entries)

    def triple(self) -> dict[tuple[BlockT, BlockT, BlockT], float]:
        """Full joint over (x, f(x), kernel output); for small instances."""
        out = {}
        for xi, px in enumerate(self.p_x):
            if px == 0:
                continue
            x = self.x_block(xi)
            y = self.y_block(int(self.y_of_x[xi]))
            for zi, pz in enumerate(self.kernel_row(xi)):
                if pz > 0:
                    out[(x, y, self.z_block(zi))] = px * pz
        return out

    def xy_table(self) -> JointTable:
        """Joint over (input block, f-output block)."""
        return JointTable({(self.x_block(xi), self.y_block(int(self.y_of_x[xi]))): p
                           for xi, p in enumerate(self.p_x) if p > 0})


def hookup(source: Source, nc: NoisyComputation, n: int,
           cap: int = ENUMERATION_CAP) -> Hookup:
    return Hookup(source, nc, n, cap)


class ProductHookup:
    """Lazy length-n hookup for iid sources with per-symbol computations.

    Never enumerates input blocks: all block-level laws are products of the
    single-symbol hookup, so the output spaces (|B|^n, |C|^n) set the cost.
    Used by the code constructor when |A|^n is out of enumeration reach.
    """

    def __init__(self, source: Source, nc: NoisyComputation, n: int,
                 cap: int = ENUMERATION_CAP):
        if source.kind != "iid":
            raise ValidationError("product hookup requires an iid source")
        if not nc.single_letter:
            raise ValidationError("product hookup requires a per-symbol computation")
        self.source, self.n = source, n
        self.nc = nc.extended(n)
        self.base = Hookup(source, nc, 1)
        self.in_size = self.base.in_size
        self.f_size = self.base.f_size
        self.z_size = self.base.z_size
        if self.f_size ** n > cap or self.z_size ** n > cap:
            raise EnumerationLimitError("output block space exceeds enumeration cap")
        self.p_x_sym = self.base.p_x
        self.y_of_sym = self.base.y_of_x
        self.p_y_sym = self.base.p_y
        self.fibers_sym = {y: [int(a) for a in xs]
                           for y, xs in self.base.fibers().items()}
        self._factors = self.base.factors_through_f()
        if self._factors:
            self.cond_sym = np.zeros((self.f_size, self.z_size))
            for y in range(self.f_size):
                if self.p_y_sym[y] > 0:
                    self.cond_sym[y] = self.base.joint_yz[y] / self.p_y_sym[y]
        else:
            self.cond_sym = None
        # dense output-side vectors (|B|^n and |C|^n)
        self.p_y = _kron_power(self.p_y_sym, n)
        self.p_z = _kron_power(self.base.p_z, n)

    def factors_through_f(self) -> bool:
        return self._factors

    def y_block(self, i: int) -> BlockT:
        return block_of(i, self.f_size, self.n)

    def z_block(self, i: int) -> BlockT:
        return block_of(i, self.z_size, self.n)

    def z_index(self, block: BlockT) -> int:
        return index_of(block, self.z_size)

    def cond_z_given_y(self, y: BlockT) -> np.ndarray:
        """P(z-block | y-block) over all output indices (factoring kernels)."""
        if not self._factors:
            raise ValidationError("kernel does not factor through f")
        vec = np.ones(1)
        for sym in y:
            vec = np.kron(vec, self.cond_sym[sym])
        return vec

    def fiber_size(self, y: BlockT) -> int:
        size = 1
        for sym in y:
            size *= len(self.fibers_sym.get(sym, ()))
        return size

    def fiber_contains(self, y: BlockT, x: BlockT) -> bool:
        return all(int(self.y_of_sym[a]) == sym for a, sym in zip(x, y))

    def fiber_top(self, y: BlockT, m: int) -> list[BlockT]:
        """The m conditionally-likeliest fiber members, mass-descending."""
        import itertools
        per_pos = []
        flat = True
        for sym in y:
            cands = sorted(self.fibers_sym.get(sym, []),
                           key=lambda a: (-self.p_x_sym[a], a))
            if not cands:
                return []
            flat = flat and len({self.p_x_sym[a] for a in cands}) == 1
            per_pos.append(cands)
        if flat:  # equal masses: lexicographic product enumeration suffices
            return list(itertools.islice(itertools.product(*per_pos), m))
        return _top_products(per_pos, [np.log(self.p_x_sym[np.array(c)])
                                       for c in per_pos], m)

    def log_p_x(self, x: BlockT) -> float:
        return float(sum(math.log(self.p_x_sym[a]) if self.p_x_sym[a] > 0
                         else -math.inf for a in x))


def _kron_power(vec: np.ndarray, n: int) -> np.ndarray:
    out = np.ones(1)
    for _ in range(n):
        out = np.kron(out, vec)
    return out


def _top_products(per_pos: list[list[int]], log_w: list[np.ndarray],
                  m: int) -> list[BlockT]:
    """Top-m tuples of a product distribution given per-position candidates
    sorted by descending weight (best-first search over index vectors)."""
    import heapq
    n = len(per_pos)
    start = (0,) * n
    best = -sum(float(w[0]) for w in log_w)
    heap = [(best, start)]
    seen = {start}
    out: list[BlockT] = []
    while heap and len(out) < m:
        neg, idx = heapq.heappop(heap)
        out.append(tuple(per_pos[i][j] for i, j in enumerate(idx)))
        for i in range(n):
            if idx[i] + 1 < len(per_pos[i]):
                nxt = idx[:i] + (idx[i] + 1,) + idx[i + 1:]
                if nxt not in seen:
                    seen.add(nxt)
                    delta = float(log_w[i][idx[i] + 1] - log_w[i][idx[i]])
                    heapq.heappush(heap, (neg - delta, nxt))
    return out


# ---------------------------------------------------------------------------
# lifting of partial string functions to fixed-length blocks

@dataclass(frozen=True)
class LiftedFunction:
    """Blank-padded block version of a partial function on finite strings.

    ``inner`` maps symbol tuples (never ending in the input blank) to symbol
    tuples, returning None outside its domain.
    """

    inner: Callable[[BlockT], BlockT | None]
    blank_in: int
    blank_out: int
    n: int
    in_size: int
    out_size: int

    def strip(self, block: BlockT) -> BlockT:
        """Drop the trailing run of input blanks."""
        end = len(block)
        while end > 0 and block[end - 1] == self.blank_in:
            end -= 1
        return block[:end]

    def __call__(self, block: BlockT) -> BlockT:
        content = self.strip(block)
        if content:
            result = self.inner(content)
        else:
            result = ()  # f(empty) = empty by convention
        if result is None:  # outside the inner domain: emit all blanks
            result = ()
        if len(result) > self.n:
            raise BlockOverflowError(
                f"inner output length {len(result)} exceeds block length {self.n}")
        return tuple(result) + (self.blank_out,) * (self.n - len(result))


def lift_finite_fn(inner: Callable[[BlockT], BlockT | None], blank_in: int,
                   blank_out: int, n: int, in_size: int = 2,
                   out_size: int = 2) -> BlockFn:
    """Lift a partial string function to a total length-n block function."""
    lifted = LiftedFunction(inner, blank_in, blank_out, n, in_size, out_size)
    return BlockFn(in_size, out_size, n, n, lifted, horizon=n, name="lifted")


def unpad(block: BlockT, blank: int) -> BlockT | None:
    """Inverse of blank-padding: the content prefix, or None if the block is
    not of the form (content not ending in blank) + blank padding."""
    end = len(block)
    while end > 0 and block[end - 1] == blank:
        end -= 1
    content = block[:end]
    return content if all(a != blank for a in content[-1:]) else None
