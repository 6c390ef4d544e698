"""Noisy boolean circuits as memoryless kernels, design-error channels,
and redundancy blow-up accounting.

Each gate output flips independently with probability xi per evaluation;
fault patterns are enumerated exactly for small circuits or sampled.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .blocks import block_of, index_of
from .channels import BlockFn, MemorylessKernel, NoisyComputation, deterministic
from .errors import DomainError, EnumerationLimitError, ValidationError

_GATE_ARITY = {"AND": 2, "OR": 2, "XOR": 2, "NAND": 2, "NOT": 1}

_GATE_EVAL = {
    "AND": lambda a, b=0: a & b,
    "OR": lambda a, b=0: a | b,
    "XOR": lambda a, b=0: a ^ b,
    "NAND": lambda a, b=0: 1 - (a & b),
    "NOT": lambda a: 1 - a,
}

EXACT_GATE_CAP = 20


@dataclass(frozen=True)
class Gate:
    kind: str
    inputs: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in _GATE_ARITY:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        if len(self.inputs) != _GATE_ARITY[self.kind]:
            raise ValidationError(f"{self.kind} takes {_GATE_ARITY[self.kind]} inputs")


@dataclass(frozen=True)
class CircuitSpec:
    """Feed-forward circuit: wires 0..n_inputs-1 are the inputs, gate j
    drives wire n_inputs + j and may only read earlier wires."""

    n_inputs: int
    gates: tuple[Gate, ...]
    outputs: tuple[int, ...]
    flip_prob: float = 0.0

    def __post_init__(self):
        if self.n_inputs < 1:
            raise ValidationError("circuit needs at least one input")
        if not (0 <= self.flip_prob < 0.5):
            raise ValidationError("gate flip probability must lie in [0, 1/2)")
        for j, gate in enumerate(self.gates):
            wire = self.n_inputs + j
            if any(not (0 <= w < wire) for w in gate.inputs):
                raise ValidationError(f"gate {j} reads a wire not yet driven")
        n_wires = self.n_inputs + len(self.gates)
        if not self.outputs:
            raise ValidationError("circuit needs at least one output")
        if any(not (0 <= w < n_wires) for w in self.outputs):
            raise ValidationError("output reads an undriven wire")

    def eval(self, bits: tuple[int, ...],
             flips: tuple[int, ...] = ()) -> tuple[int, ...]:
        """Evaluate under a fault pattern (one flip bit per gate)."""
        if len(bits) != self.n_inputs:
            raise ValidationError("wrong input width")
        flips = flips or (0,) * len(self.gates)
        wires = list(bits)
        for gate, flip in zip(self.gates, flips):
            out = _GATE_EVAL[gate.kind](*(wires[w] for w in gate.inputs))
            wires.append(out ^ flip)
        return tuple(wires[w] for w in self.outputs)

    def truth_table_fn(self) -> BlockFn:
        """The intended (noise-free) function, one 2^k-ary symbol per block."""
        k, kp = self.n_inputs, len(self.outputs)
        table = tuple(index_of(self.eval(block_of(v, 2, k)), 2)
                      for v in range(2 ** k))
        return BlockFn(2 ** k, 2 ** kp, 1, 1,
                       lambda x: tuple(table[a] for a in x),
                       symbol_map=table, name="circuit")


def circuit_to_kernel(circuit: CircuitSpec, mode: str = "exact",
                      rng_seed: int = 0, samples: int = 100_000) -> MemorylessKernel:
    """Conditional law of the circuit's noisy output symbol given its input
    symbol (symbols pack the bit vectors, lexicographic/big-endian)."""
    k, kp, g = circuit.n_inputs, len(circuit.outputs), len(circuit.gates)
    xi = circuit.flip_prob
    matrix = np.zeros((2 ** k, 2 ** kp))
    if mode == "exact":
        if g > EXACT_GATE_CAP:
            raise EnumerationLimitError(
                f"{g} gates exceed the exact cap of {EXACT_GATE_CAP}; "
                "use monte_carlo mode")
        patterns = ([(0,) * g] if xi == 0
                    else list(itertools.product((0, 1), repeat=g)))
        for v in range(2 ** k):
            bits = block_of(v, 2, k)
            for flips in patterns:
                w = math.prod(xi if f else 1 - xi for f in flips)
                if w > 0:
                    matrix[v, index_of(circuit.eval(bits, flips), 2)] += w
    elif mode == "monte_carlo":
        rng = np.random.default_rng(rng_seed)
        for v in range(2 ** k):
            bits = block_of(v, 2, k)
            flips = (rng.random((samples, g)) < xi).astype(int)
            for row in flips:
                matrix[v, index_of(circuit.eval(bits, tuple(row)), 2)] += 1
            matrix[v] /= samples
    else:
        raise ValidationError(f"unknown mode {mode!r}")
    return MemorylessKernel(matrix.tolist())


def design_error_channel(f_intended: BlockFn, g_built: BlockFn) -> NoisyComputation:
    """The computation actually implemented when the device realizes g
    instead of f: a noiseless but wrong deterministic channel."""
    if (f_intended.in_size != g_built.in_size
            or f_intended.block_len_in != g_built.block_len_in):
        raise ValidationError("intended and built functions take different inputs")
    return NoisyComputation(f_intended, deterministic(g_built))


@dataclass(frozen=True)
class BlowupReport:
    k: int
    n: int
    lam: float  # n / k
    bounds: tuple[float, float]
    note: str = "encoder/decoder sizes excluded from the ratio"


def blowup(capacity_nats: float, source_entropy_nats: float, epsilon: float,
           max_denominator: int = 16) -> BlowupReport:
    """Minimal rational block-length ratio n/k within the redundancy bracket
    (H/C, H/(C-eps)] forced by running the logical rate within eps of capacity."""
    if not (0 < epsilon < capacity_nats):
        raise DomainError("bracket undefined unless 0 < epsilon < capacity")
    if source_entropy_nats <= 0:
        raise DomainError("source entropy must be positive")
    lower = source_entropy_nats / capacity_nats
    upper = source_entropy_nats / (capacity_nats - epsilon)
    best: tuple[Fraction, int, int] | None = None
    for k in range(1, max_denominator + 1):
        n = math.floor(lower * k) + 1  # smallest integer with n/k > lower
        while n / k <= lower:
            n += 1
        lam = Fraction(n, k)
        if n / k <= upper and (best is None or lam < best[0]):
            best = (lam, k, n)
    if best is None:
        raise DomainError(
            f"no ratio with denominator <= {max_denominator} inside "
            f"({lower:.6g}, {upper:.6g}]")
    lam, k, n = best
    return BlowupReport(k=k, n=n, lam=float(lam), bounds=(lower, upper))


# ---------------------------------------------------------------------------
# JSON netlists

def circuit_from_json(text: str) -> CircuitSpec:
    doc = json.loads(text)
    return CircuitSpec(
        n_inputs=doc["inputs"],
        gates=tuple(Gate(g["kind"].upper(), tuple(g["in"])) for g in doc["gates"]),
        outputs=tuple(doc["outputs"]),
        flip_prob=doc.get("xi", 0.0))


def circuit_to_json(circuit: CircuitSpec) -> str:
    return json.dumps({
        "inputs": circuit.n_inputs,
        "gates": [{"kind": g.kind, "in": list(g.inputs)} for g in circuit.gates],
        "outputs": list(circuit.outputs),
        "xi": circuit.flip_prob,
    }, indent=2)


def majority3(xi: float = 0.05) -> CircuitSpec:
    """Majority of three bits: (a AND b) OR ((a OR b) AND c)."""
    return CircuitSpec(
        n_inputs=3,
        gates=(Gate("AND", (0, 1)), Gate("OR", (0, 1)),
               Gate("AND", (4, 2)), Gate("OR", (3, 5))),
        outputs=(6,),
        flip_prob=xi)
