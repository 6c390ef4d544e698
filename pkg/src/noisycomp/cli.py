"""Config-driven experiment runner.

Subcommands: capacity, feinstein, simulate, sweep, circuit.  Configs and
reports are JSON; tabular results are CSV with the config hash and seed in
a header comment.  Same config + seed + thread count gives byte-identical
outputs.  Exit codes: 2 for config/schema problems (with the offending
field path), 3 when exact enumeration limits are hit.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

from importlib import import_module

# `from . import capacity` would resolve to the function of the same name
# re-exported by the package root, so load the submodules explicitly
cap_mod = import_module("noisycomp.capacity")
circ_mod = import_module("noisycomp.circuits")
fein_mod = import_module("noisycomp.feinstein")
rel_mod = import_module("noisycomp.reliable")
from .channels import (BlockFn, BUILTIN_FNS, Hookup, MemorylessKernel,
                       NoisyComputation, ProductHookup, ThroughFnKernel,
                       cascade, deterministic, per_symbol_fn)
from .errors import EnumerationLimitError, ValidationError
from .sources import Source

LN2 = math.log(2.0)


class SchemaError(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _get(doc, path: str, typ=None, required: bool = True, default=None):
    node = doc
    walked = []
    for part in path.split("."):
        walked.append(part)
        if not isinstance(node, dict) or part not in node:
            if required:
                raise SchemaError(".".join(walked), "missing required field")
            return default
        node = node[part]
    if typ is not None and not isinstance(node, typ):
        raise SchemaError(path, f"expected {getattr(typ, '__name__', typ)}")
    return node


def _fmt(x) -> str:
    return format(float(x), ".9g")


def _round9(x: float) -> float:
    return float(_fmt(x))


def _jsonable(obj):
    if isinstance(obj, float):
        return _round9(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# instance construction from config

def _load_source(doc, path: str) -> Source:
    kind = _get(doc, "kind", str)
    try:
        if kind == "iid":
            return Source.iid(_get(doc, "probs", list))
        if kind == "markov":
            return Source.markov(_get(doc, "initial", list),
                                 _get(doc, "transition", list))
    except ValidationError as exc:
        raise SchemaError(path, str(exc))
    raise SchemaError(f"{path}.kind", f"unknown source kind {kind!r}")


def _load_fn(doc, path: str) -> BlockFn:
    if "builtin" in doc:
        name = doc["builtin"]
        if name not in BUILTIN_FNS:
            raise SchemaError(f"{path}.builtin", f"unknown builtin {name!r}")
        kwargs = {k: doc[k] for k in ("size", "n") if k in doc}
        return BUILTIN_FNS[name](**kwargs)
    if "symbol_map" in doc:
        try:
            return per_symbol_fn(doc["symbol_map"], _get(doc, "out_size", int))
        except ValidationError as exc:
            raise SchemaError(path, str(exc))
    raise SchemaError(path, "function needs 'builtin' or 'symbol_map'")


def _load_kernel(doc, path: str, f: BlockFn):
    try:
        if "matrix" in doc:
            return MemorylessKernel(doc["matrix"])
        if "noise_matrix" in doc:  # noise applied after f: decomposable module
            return cascade(deterministic(f), MemorylessKernel(doc["noise_matrix"]))
        if "deterministic" in doc:
            return deterministic(_load_fn(doc["deterministic"],
                                          f"{path}.deterministic"))
        if "circuit" in doc:
            spec = circ_mod.circuit_from_json(json.dumps(doc["circuit"]))
            return circ_mod.circuit_to_kernel(spec)
    except ValidationError as exc:
        raise SchemaError(path, str(exc))
    raise SchemaError(path, "kernel needs 'matrix', 'noise_matrix', "
                            "'deterministic' or 'circuit'")


def _load_instance(cfg) -> tuple[Source, NoisyComputation]:
    _get(cfg, "instance", dict)
    source = _load_source(_get(cfg, "instance.source", dict), "instance.source")
    f = _load_fn(_get(cfg, "instance.f", dict), "instance.f")
    kernel = _load_kernel(_get(cfg, "instance.kernel", dict),
                          "instance.kernel", f)
    try:
        return source, NoisyComputation(f, kernel)
    except ValidationError as exc:
        raise SchemaError("instance", str(exc))


def _hookup_for(source: Source, nc: NoisyComputation, n: int):
    try:
        return ProductHookup(source, nc, n)
    except ValidationError:
        return Hookup(source, nc, n)


# ---------------------------------------------------------------------------
# output plumbing

def _config_hash(cfg) -> str:
    return hashlib.sha256(
        json.dumps(cfg, sort_keys=True).encode()).hexdigest()[:16]


def _write_json(out_dir: Path, name: str, payload: dict, cfg, seed) -> Path:
    payload = dict(payload)
    payload["config_sha256"] = _config_hash(cfg)
    payload["seed"] = seed
    path = out_dir / name
    path.write_text(json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n")
    return path


def _write_csv(out_dir: Path, name: str, header: list[str],
               rows: list[list], cfg, seed) -> Path:
    lines = [f"# config_sha256={_config_hash(cfg)} seed={seed}",
             ",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v)
                              for v in row))
    path = out_dir / name
    path.write_text("\n".join(lines) + "\n")
    return path


def _capacity_payload(report: cap_mod.CapacityReport, bits: bool) -> dict:
    payload = {
        "value_nats": report.value_nats,
        "argmax": list(report.argmax.probs),
        "method": report.method,
        "family": report.family,
        "bracket": list(report.bracket),
        "label": report.label,
        "warning": report.warning,
    }
    if bits:
        payload["value_bits"] = report.value_nats / LN2
    return payload


# ---------------------------------------------------------------------------
# subcommands

def _run_capacity(cfg, seed: int, out_dir: Path, bits: bool) -> None:
    source, nc = _load_instance(cfg)
    del source
    sub = _get(cfg, "capacity", dict, required=False, default={})
    opts = cap_mod.CapacityOptions(
        seed=seed,
        restarts=int(sub.get("restarts", 20)),
        grid_resolution=float(sub.get("grid_resolution", 0.01)),
        use_grid=sub.get("use_grid"))
    report = cap_mod.capacity(nc, sub.get("family", "iid"), opts)
    payload = _capacity_payload(report, bits)
    if isinstance(nc.kernel, MemorylessKernel):
        payload["channel_capacity_nats"] = cap_mod.channel_capacity(
            nc.kernel).value_nats
    _write_json(out_dir, "capacity_report.json", payload, cfg, seed)
    _write_csv(out_dir, "capacity_report.csv",
               ["value_nats", "lower", "upper", "method", "family"],
               [[report.value_nats, report.bracket[0], report.bracket[1],
                 report.method, report.family]], cfg, seed)


def _run_feinstein(cfg, seed: int, out_dir: Path, bits: bool) -> None:
    source, nc = _load_instance(cfg)
    sub = _get(cfg, "feinstein", dict)
    n = _get(sub, "n", int)
    if n < 1:
        raise SchemaError("feinstein.n", "block length must be >= 1")
    hk = _hookup_for(source, nc, n)
    code = fein_mod.greedy_construct(
        hk, float(_get(sub, "epsilon", (int, float))),
        float(_get(sub, "lambda", (int, float))),
        expand=bool(sub.get("expand", False)))
    report = fein_mod.verify(code, hk)
    (out_dir / "feinstein_code.json").write_text(fein_mod.code_to_json(code) + "\n")
    _write_json(out_dir, "feinstein_report.json", {
        "m": code.m, "n": code.n, "epsilon": code.epsilon, "lambda": code.lam,
        "verified": report.ok, "violations": list(report.violations),
        "entry_slacks": [list(s) for s in report.entry_slacks],
    }, cfg, seed)


def _reliable_instance(cfg, source: Source, nc: NoisyComputation):
    _get(cfg, "logical", dict)
    xprime = _load_source(_get(cfg, "logical.source", dict), "logical.source")
    g = _load_fn(_get(cfg, "logical.f", dict), "logical.f")
    return rel_mod.ReliableInstance(xprime=xprime, g=g, nc=nc,
                                    code_source=source)


def _run_simulate(cfg, seed: int, out_dir: Path, bits: bool) -> None:
    source, nc = _load_instance(cfg)
    sub = _get(cfg, "simulate", dict)
    trials = _get(sub, "trials", int)
    if trials <= 0:
        raise SchemaError("simulate.trials", "must be a positive integer")
    k, n = _get(sub, "k", int), _get(sub, "n", int)
    if k < 1 or n < 1:
        raise SchemaError("simulate.k", "block lengths must be >= 1")
    instance = _reliable_instance(cfg, source, nc)
    hk = _hookup_for(source, nc, n)
    code = fein_mod.greedy_construct(
        hk, float(sub.get("epsilon", 0.25)), float(sub.get("lambda", 0.25)),
        expand=bool(sub.get("expand", True)))
    codec = rel_mod.build_codec(
        instance, k, code, hk, eps_typical=float(sub.get("eps_typical", 0.1)),
        best_effort=bool(sub.get("best_effort", False)))
    est = rel_mod.simulate(codec, instance, trials, seed)
    header = ["R_nats", "k", "n", "trials", "failures", "p_hat",
              "ci_lo", "ci_hi", "seed"]
    row = [codec.rate_nats, k, n, est.trials, est.failures, est.p_hat,
           est.wilson_interval[0], est.wilson_interval[1], seed]
    if bits:
        header.append("R_bits")
        row.append(codec.rate_nats / LN2)
    _write_csv(out_dir, "simulate_report.csv", header, [row], cfg, seed)
    _write_json(out_dir, "simulate_report.json", {
        "rate_nats": codec.rate_nats, "k": k, "n": n,
        "injective_decoding": codec.injective_decoding,
        "uncovered_typical_mass": codec.uncovered_typical_mass,
        "trials": est.trials, "failures": est.failures, "p_hat": est.p_hat,
        "ci": list(est.wilson_interval),
        "no_region_policy": "channel outputs outside every decoding region "
                            "are counted as failures",
    }, cfg, seed)


def _run_sweep(cfg, seed: int, out_dir: Path, bits: bool) -> None:
    source, nc = _load_instance(cfg)
    sub = _get(cfg, "sweep", dict)
    trials = _get(sub, "trials", int)
    if trials <= 0:
        raise SchemaError("sweep.trials", "must be a positive integer")
    ns = _get(sub, "ns", list)
    instance = _reliable_instance(cfg, source, nc)
    if "rates" in sub:
        rates = [float(r) for r in sub["rates"]]
    else:
        rel = _get(sub, "rates_relative", list)
        c = cap_mod.capacity(nc, "iid",
                             cap_mod.CapacityOptions(seed=seed)).value_nats
        rates = [float(r) * c for r in rel]
    rows = rel_mod.rate_sweep(instance, rates, [int(n) for n in ns],
                              trials, seed,
                              eps_typical=float(sub.get("eps_typical", 0.1)))
    header = ["R_target", "R_nats", "k", "n", "epsilon", "m_entries",
              "trials", "failures", "p_hat", "ci_lo", "ci_hi", "seed",
              "uncovered_mass"]
    _write_csv(out_dir, "sweep_report.csv", header,
               [[r[h] for h in header] for r in rows], cfg, seed)


def _run_circuit(cfg, seed: int, out_dir: Path, bits: bool) -> None:
    sub = _get(cfg, "circuit", dict)
    spec = circ_mod.circuit_from_json(json.dumps(_get(sub, "netlist", dict)))
    mode = sub.get("mode", "exact")
    kernel = circ_mod.circuit_to_kernel(spec, mode=mode, rng_seed=seed,
                                        samples=int(sub.get("samples", 100_000)))
    f = spec.truth_table_fn()
    nc = NoisyComputation(f, kernel)
    report = cap_mod.capacity(
        nc, "iid", cap_mod.CapacityOptions(seed=seed, use_grid=False))
    eps = float(sub.get("epsilon", 0.1))
    h_logical = float(sub.get("logical_entropy_nats",
                              spec.n_inputs * LN2))
    payload = {
        "kernel_matrix": [list(row) for row in kernel.matrix],
        "capacity_nats": report.value_nats,
        "capacity_method": report.method,
    }
    if report.value_nats > eps:
        blow = circ_mod.blowup(report.value_nats, h_logical, eps)
        payload["blowup"] = {"k": blow.k, "n": blow.n, "lambda": blow.lam,
                             "bounds": list(blow.bounds), "note": blow.note}
    else:
        payload["blowup"] = None
        payload["blowup_note"] = "capacity below epsilon; bracket undefined"
    if bits:
        payload["capacity_bits"] = report.value_nats / LN2
    _write_json(out_dir, "circuit_report.json", payload, cfg, seed)


_SUBCOMMANDS = {
    "capacity": _run_capacity,
    "feinstein": _run_feinstein,
    "simulate": _run_simulate,
    "sweep": _run_sweep,
    "circuit": _run_circuit,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="noisycomp",
        description="Finite-alphabet noisy-computation experiments")
    parser.add_argument("subcommand", choices=sorted(_SUBCOMMANDS))
    parser.add_argument("--config", required=True, help="JSON config path")
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed (overrides config)")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker count (results are thread-count independent)")
    parser.add_argument("--bits", action="store_true",
                        help="add bits-converted columns to outputs")
    args = parser.parse_args(argv)

    try:
        cfg = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config: {exc}", file=sys.stderr)
        return 2
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        _SUBCOMMANDS[args.subcommand](cfg, seed, out_dir, args.bits)
    except SchemaError as exc:
        print(f"config error at {exc}", file=sys.stderr)
        return 2
    except EnumerationLimitError as exc:
        print(f"enumeration limit: {exc}; switch to sampling/monte_carlo "
              "modes or reduce n", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
