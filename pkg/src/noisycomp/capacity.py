"""Typical input rate and capacity of noisy computations.

The capacity search optimizes the single-letter objective
H(X) - H(f(X)|F(X)) over iid input laws on the probability simplex
(multi-start projected gradient ascent, cross-checked by a grid oracle).
The paper-level supremum ranges over a larger source class, so reported
values are labeled as iid lower bounds.  Classical channel capacity uses
alternating maximization.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .channels import (BlockFn, BlockKernel, MemorylessKernel, NoisyComputation,
                       Hookup, cascade, deterministic, hookup, product)
from .errors import ValidationError
from .probability import Dist
from .sources import ENUMERATION_CAP, Source


def _H(v: np.ndarray) -> float:
    v = v[v > 0]
    return float(-(v * np.log(v)).sum())


@dataclass(frozen=True)
class RateReport:
    """Typical input rate at block length n (n=None marks the limit value)."""

    n: int | None
    rate_nats: float
    components: tuple[float, float]  # (H(X^n)/n, H(f(X)|F(X))^n/n)

    def __post_init__(self):
        if abs(self.rate_nats - (self.components[0] - self.components[1])) > 1e-12:
            raise ValidationError("rate does not match its components")


def _rate_from_hookup(hk: Hookup) -> tuple[float, float]:
    h_input = _H(hk.p_x) / hk.n
    h_cond = (_H(hk.joint_yz.ravel()) - _H(hk.p_z)) / hk.n
    return h_input, max(h_cond, 0.0)


def typical_input_rate_n(source: Source, nc: NoisyComputation, n: int,
                         cap: int = ENUMERATION_CAP) -> RateReport:
    """Exact (1/n)[H(X^n) - H(f(X^n)|F-output)] from enumerated tables."""
    h_input, h_cond = _rate_from_hookup(hookup(source, nc, n, cap))
    return RateReport(n=n, rate_nats=h_input - h_cond,
                      components=(h_input, h_cond))


def typical_input_rate(source: Source, nc: NoisyComputation,
                       extrapolation_n: int = 10,
                       cap: int = ENUMERATION_CAP) -> RateReport:
    """Limit rate H-bar(X) - H-bar(f(X)|F(X)).

    Exact single-letter value for iid sources with per-symbol computations;
    otherwise estimated from first differences of the finite-n sequence at
    ``extrapolation_n`` (block entropies of Markov hookups converge
    geometrically, so differences are a much better limit estimate than the
    Cesaro values themselves).
    """
    if source.kind == "iid" and nc.single_letter:
        r = typical_input_rate_n(source, nc, 1, cap)
        return RateReport(n=None, rate_nats=r.rate_nats, components=r.components)
    if extrapolation_n < 2:
        raise ValidationError("extrapolation needs block length >= 2")
    hk_prev = hookup(source, nc, extrapolation_n - 1, cap)
    hk = hookup(source, nc, extrapolation_n, cap)
    h_in = _H(hk.p_x) - _H(hk_prev.p_x)
    h_cond = ((_H(hk.joint_yz.ravel()) - _H(hk.p_z))
              - (_H(hk_prev.joint_yz.ravel()) - _H(hk_prev.p_z)))
    h_cond = max(h_cond, 0.0)
    return RateReport(n=None, rate_nats=h_in - h_cond,
                      components=(h_in, h_cond))


# ---------------------------------------------------------------------------
# capacity over iid input laws

@dataclass(frozen=True)
class CapacityOptions:
    seed: int = 0
    restarts: int = 20
    max_iters: int = 500
    fd_step: float = 1e-5
    grid_resolution: float = 0.01
    use_grid: bool | None = None  # None: automatic (alphabet <= 4)
    grid_alphabet_limit: int = 6
    markov_n: int = 6


@dataclass(frozen=True)
class CapacityReport:
    value_nats: float
    argmax: Dist
    method: str  # grid | gradient | both | alternating
    family: str  # iid | markov1
    bracket: tuple[float, float]
    label: str = "iid-capacity (lower bound)"
    warning: str = ""


class _SingleLetterObjective:
    """H(p) - H(Y|Z) for per-symbol f and kernel, vectorized over batches."""

    def __init__(self, nc: NoisyComputation):
        if not nc.single_letter:
            raise ValidationError("capacity search needs a per-symbol instance")
        s, b = nc.f.in_size, nc.f.out_size
        self.k = np.array([nc.kernel.law_vector((a,)) for a in range(s)])
        c = self.k.shape[1]
        self.y_of = np.array([nc.f((a,))[0] for a in range(s)])
        # T[a] = (indicator of y_a) x (kernel row of a), flattened over (y,z)
        self.t = np.zeros((s, b * c))
        for a in range(s):
            self.t[a, self.y_of[a] * c: (self.y_of[a] + 1) * c] = self.k[a]
        self.s, self.b, self.c = s, b, c

    def batch(self, p: np.ndarray) -> np.ndarray:
        """Objective for each row of a (batch, s) matrix of input laws."""
        j = p @ self.t  # (batch, b*c)
        z = j.reshape(-1, self.b, self.c).sum(axis=1)

        def ent(m):
            return -np.where(m > 0, m * np.log(np.maximum(m, 1e-300)), 0.0).sum(axis=1)

        return ent(p) - (ent(j) - ent(z))

    def __call__(self, p: np.ndarray) -> float:
        return float(self.batch(p[None, :])[0])


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    rho = np.nonzero(u - css / np.arange(1, len(v) + 1) > 0)[0][-1]
    return np.maximum(v - css[rho] / (rho + 1), 0.0)


def _fd_gradient(obj, p: np.ndarray, h: float) -> np.ndarray:
    g = np.zeros_like(p)
    for i in range(len(p)):
        lo, hi = p.copy(), p.copy()
        hi[i] += h
        lo[i] = max(lo[i] - h, 0.0)
        g[i] = (obj(hi) - obj(lo)) / (hi[i] - lo[i])
    return g


def _ascend(obj, p0: np.ndarray, max_iters: int, h: float) -> tuple[np.ndarray, float]:
    p = _project_simplex(p0)
    val = obj(p)
    step = 0.5
    for _ in range(max_iters):
        g = _fd_gradient(obj, p, h)
        improved = False
        t = step
        for _ in range(30):
            cand = _project_simplex(p + t * g)
            cval = obj(cand)
            if cval > val + 1e-14:
                p, val, improved = cand, cval, True
                step = min(t * 2.0, 1.0)
                break
            t *= 0.5
        if not improved:
            break
    return p, val


def _grid_points(s: int, resolution: float):
    levels = round(1.0 / resolution)
    for combo in itertools.combinations_with_replacement(range(s), levels):
        counts = [0] * s
        for i in combo:
            counts[i] += 1
        yield counts


def _grid_best(obj: _SingleLetterObjective, resolution: float,
               chunk: int = 20000) -> tuple[float, np.ndarray]:
    levels = round(1.0 / resolution)
    best_val, best_p = -np.inf, None
    batch = []
    for counts in _grid_points(obj.s, resolution):
        batch.append(counts)
        if len(batch) == chunk:
            best_val, best_p = _grid_scan(obj, batch, levels, best_val, best_p)
            batch = []
    if batch:
        best_val, best_p = _grid_scan(obj, batch, levels, best_val, best_p)
    return best_val, best_p


def _grid_scan(obj, batch, levels, best_val, best_p):
    arr = np.array(batch, dtype=float) / levels
    vals = obj.batch(arr)
    i = int(np.argmax(vals))
    if vals[i] > best_val + 1e-12:  # first hit wins ties: lexicographic order
        return float(vals[i]), arr[i]
    return best_val, best_p


def capacity(nc: NoisyComputation, family: str = "iid",
             opts: CapacityOptions = CapacityOptions()) -> CapacityReport:
    """Capacity of the computation over the chosen input-law family.

    The true supremum ranges over a broader source class than we can search;
    the result is therefore a certified lower bound for the instance.
    """
    if family == "markov1":
        return _capacity_markov1(nc, opts)
    if family != "iid":
        raise ValidationError(f"unknown input family {family!r}")
    obj = _SingleLetterObjective(nc)
    rng_master = np.random.default_rng(opts.seed)
    best_p, best_val = None, -np.inf
    for r in range(opts.restarts):
        rng = np.random.default_rng((opts.seed, r))
        p0 = (np.full(obj.s, 1.0 / obj.s) if r == 0
              else rng.dirichlet(np.ones(obj.s)))
        p, val = _ascend(obj, p0, opts.max_iters, opts.fd_step)
        if val > best_val:
            best_p, best_val = p, val
    del rng_master
    use_grid = (opts.use_grid if opts.use_grid is not None
                else obj.s <= 4)
    if use_grid and obj.s > opts.grid_alphabet_limit:
        raise ValidationError(
            f"grid oracle limited to alphabets of size {opts.grid_alphabet_limit}")
    warning = ""
    if use_grid:
        grid_val, grid_p = _grid_best(obj, opts.grid_resolution)
        if best_val < grid_val - opts.grid_resolution:
            warning = "gradient search fell below grid oracle by more than one step"
        if grid_val > best_val:
            best_val, best_p = grid_val, grid_p
        method = "both"
        bracket = (best_val, best_val + opts.grid_resolution)
    else:
        method = "gradient"
        bracket = (best_val, best_val)
    return CapacityReport(value_nats=best_val,
                          argmax=Dist.normalized(np.maximum(best_p, 0.0)),
                          method=method, family="iid", bracket=bracket,
                          warning=warning)


def _capacity_markov1(nc: NoisyComputation, opts: CapacityOptions) -> CapacityReport:
    """Coarse search over order-1 Markov input laws via finite-n rates."""
    from scipy.optimize import minimize

    s = nc.f.in_size
    n_eval = opts.markov_n

    def rate_of(theta: np.ndarray) -> float:
        rows = np.exp(theta.reshape(s, s))
        rows /= rows.sum(axis=1, keepdims=True)
        src = Source.markov(rows.mean(axis=0), rows.tolist())
        try:
            return typical_input_rate(src, nc, extrapolation_n=n_eval).rate_nats
        except ValidationError:
            return -np.inf

    best_val, best_theta = -np.inf, None
    for r in range(max(opts.restarts // 4, 1)):
        rng = np.random.default_rng((opts.seed, r))
        theta0 = np.zeros(s * s) if r == 0 else rng.normal(size=s * s)
        res = minimize(lambda t: -rate_of(t), theta0, method="Nelder-Mead",
                       options={"maxiter": 400, "xatol": 1e-4, "fatol": 1e-7})
        if -res.fun > best_val:
            best_val, best_theta = -res.fun, res.x
    rows = np.exp(best_theta.reshape(s, s))
    rows /= rows.sum(axis=1, keepdims=True)
    stat = Source.markov(rows.mean(axis=0), rows.tolist()).stationary()
    return CapacityReport(value_nats=best_val, argmax=stat, method="gradient",
                          family="markov1", bracket=(best_val, best_val),
                          label="markov1-capacity (lower bound, coarse)")


# ---------------------------------------------------------------------------
# classical channel capacity (alternating maximization)

def channel_capacity(kernel: BlockKernel, tol: float = 1e-9,
                     max_iters: int = 200_000) -> CapacityReport:
    """max_p I(X; F(X)) for a memoryless kernel, in nats."""
    if not isinstance(kernel, MemorylessKernel):
        raise ValidationError("channel capacity requires a memoryless kernel")
    k = np.array(kernel.matrix)
    m = k.shape[0]
    r = np.full(m, 1.0 / m)
    lb = 0.0
    for _ in range(max_iters):
        q = r @ k
        with np.errstate(divide="ignore", invalid="ignore"):
            logratio = np.where(k > 0, np.log(np.maximum(k, 1e-300))
                                - np.log(np.maximum(q, 1e-300)), 0.0)
        d = (k * logratio).sum(axis=1)
        ub = float(d.max())
        lb = float(np.log((r * np.exp(d)).sum()))
        if ub - lb < tol:
            break
        r = r * np.exp(d)
        r /= r.sum()
    return CapacityReport(value_nats=max(lb, 0.0), argmax=Dist.normalized(r),
                          method="alternating", family="iid",
                          bracket=(max(lb, 0.0), max(ub, 0.0)),
                          label="channel capacity")


def compare_noisy_input(nu: MemorylessKernel, f: BlockFn,
                        opts: CapacityOptions = CapacityOptions(),
                        tolerance: float = 1e-6) -> tuple[CapacityReport,
                                                          CapacityReport]:
    """Capacities of the noisy channel alone vs computing f on its noisy output.

    Returns (C of nu, C_f of the composed computation); the latter should
    dominate the former up to optimizer tolerance.
    """
    composed = product(f, cascade(nu, deterministic(f)))
    c_nu = channel_capacity(nu)
    c_f = capacity(composed, "iid", opts)
    slack = opts.grid_resolution if c_f.method == "both" else 0.0
    if c_nu.value_nats > c_f.value_nats + tolerance + slack:
        raise ValidationError(
            f"noisy-input comparison violated: {c_nu.value_nats} > "
            f"{c_f.value_nats}")
    return c_nu, c_f
