"""Command-line front end: materialize schemes from JSON configs, run witness
constructions and analyses, and emit machine-readable reports.

Exit codes: 0 success, 1 usage/configuration error, 2 verification failure
(a claimed bound did not reproduce).  All randomness flows from the single
64-bit seed recorded in the report; LETHARGY_THREADS caps level parallelism.
"""

from __future__ import annotations

import argparse
import copy
import hashlib
import json
import sys
import time
from typing import Optional

import numpy as np

from . import analyze, witness as wit
from .scheme import Scheme, SchemeError, build_scheme, list_schemes, validate_scheme
from .seq import NullSequence
from .solve import error_profile
from .space import SpaceError, norm

REPORT_VERSION = "1.0"
TASKS = ("validate", "profile", "witness", "density", "shapiro", "audit", "slowdecay")


class UsageError(ValueError):
    pass


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode()).hexdigest()


def _apply_override(config: dict, key: str, raw: str) -> None:
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = config
    parts = key.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
    node[parts[-1]] = value


def make_element(space, desc, rng: np.random.Generator) -> np.ndarray:
    if isinstance(desc, dict) and "values" in desc:
        return np.asarray(desc["values"], dtype=float).reshape(space.shape)
    name = desc["probe"] if isinstance(desc, dict) else desc
    if space.carrier == "grid":
        g = space.grid
        t = (g.nodes - g.a) / (g.b - g.a)
        if name == "abs-kink":
            return np.abs(t - 0.5)
        if name == "runge":
            return 1.0 / (1.0 + 25.0 * (2.0 * t - 1.0) ** 2)
        if name == "smooth-mix":
            return np.sin(3.0 * t) + t * t
        if name == "random":
            return rng.standard_normal(space.shape)
        raise UsageError(f"unknown grid probe {name!r}")
    if space.carrier == "coords":
        if name == "decay":
            return 1.0 / (np.arange(space.dim) + 1.0)
        if name == "flat":
            return np.ones(space.dim)
        if name == "random":
            return rng.standard_normal(space.shape)
        raise UsageError(f"unknown coordinate probe {name!r}")
    if name == "identity":
        return np.eye(space.dim) / space.dim
    if name == "random":
        return rng.standard_normal(space.shape)
    raise UsageError(f"unknown matrix probe {name!r}")


def witness_from_config(op: str, params: dict, seed: int) -> wit.Witness:
    if op == "c0":
        eps = NullSequence(np.asarray(params["eps"], dtype=float))
        return wit.witness_c0(eps, cap=params.get("cap"))
    if op == "quantizer":
        return wit.witness_quantizer(int(params["m"]))
    if op == "haar-bumps":
        return wit.witness_haar_bumps(int(params["n"]), float(params.get("p", 1.0)),
                                      family=params.get("family", "poly"),
                                      n_attempts=int(params.get("attempts", 100)),
                                      seed=seed)
    if op == "bv":
        return wit.witness_bv(int(params["n"]), seed=seed,
                              n_attempts=int(params.get("attempts", 100)))
    if op == "ridge":
        return wit.witness_ridge(int(params["n"]), seed=seed,
                                 n_starts=int(params.get("starts", 100)))
    if op == "orthonormal":
        return wit.witness_orthonormal_nterm(int(params["n"]), int(params.get("dim", 12)))
    if op == "wavelet":
        return wit.witness_wavelet(int(params["n"]), seed=seed,
                                   n_attempts=int(params.get("attempts", 100)))
    if op == "translates":
        return wit.witness_translates(int(params["n"]), int(params["m"]),
                                      float(params.get("p", 1.0)), seed=seed,
                                      n_trials=int(params.get("trials", 1000)))
    if op == "tensor":
        return wit.witness_tensor(int(params["n"]), params.get("norm", "hs"))
    raise UsageError(f"unknown witness op {op!r}")


def _witness_payload(w: wit.Witness, op: str, params: dict) -> dict:
    payload = w.to_json()
    payload["constructor"] = {"op": op, "params": params}
    if len(payload.get("element", [])) > 100_000:
        payload["element"] = "omitted (rebuild via constructor)"
    return payload


def run_task(config: dict) -> dict:
    task = config.get("task")
    if task not in TASKS:
        raise UsageError(f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
    seed = int(config.get("seed", 0))
    params = dict(config.get("params", {}))
    rng = np.random.default_rng(seed)
    payload: dict
    verified = True

    if task == "validate":
        s = build_scheme(config["scheme"])
        report = validate_scheme(s, trials=int(params.get("trials", 200)), rng_seed=seed)
        payload = report.to_json()
        verified = report.passed

    elif task == "profile":
        s = build_scheme(config["scheme"])
        if "n_max" not in params:
            raise UsageError("profile task needs params.n_max")
        x = make_element(s.space, params.get("element", "random"), rng)
        profile = error_profile(s.space, x, s, int(params["n_max"]), seed=seed)
        payload = profile.to_json()
        vals = profile.values()
        verified = bool(np.all(np.diff(vals) <= 1e-9)) if vals.size else True
        if config.get("csv"):
            profile.dump_csv(config["csv"])
        if config.get("plot_data"):
            profile.dump_plot_data(config["plot_data"])

    elif task == "witness":
        op = params.get("op")
        if not op:
            raise UsageError("witness task needs params.op")
        w = witness_from_config(op, params, seed)
        verified = wit.verify_witness(w, seed=seed)
        payload = _witness_payload(w, op, params)

    elif task == "density":
        s = build_scheme(config["scheme"])
        levels = params.get("levels") or list(range(s.n_max + 1))
        certs = [analyze.density_lower_bound(s, int(n), rng_seed=seed + 17 * int(n))
                 for n in levels]
        payload = {"schema": analyze.REPORT_SCHEMA, "scheme": s.label, "levels": levels,
                   "certificates": [c.to_json(with_element=s.space.carrier != "grid")
                                    for c in certs]}
        verified = all(c.solver_value >= c.bound - 1e-9 for c in certs)
        if config.get("csv"):
            with open(config["csv"], "w") as fh:
                fh.write("n,bound,status\n")
                for c in certs:
                    fh.write(f"{c.level},{c.bound!r},{c.status}\n")

    elif task == "shapiro":
        s = build_scheme(config["scheme"])
        verdict = analyze.shapiro_check(s, probe_budget=int(params.get("probes", 8)),
                                        rng_seed=seed, levels=params.get("levels"))
        payload = verdict.to_json()
        verified = verdict.verdict != "inconclusive"
        if config.get("csv") and verdict.envelope:
            with open(config["csv"], "w") as fh:
                fh.write("n,envelope\n")
                for n, v in zip(verdict.envelope["levels"], verdict.envelope["values"]):
                    fh.write(f"{n},{v!r}\n")

    elif task == "audit":
        which = params.get("audit", "dolzhenko")
        if which == "dolzhenko":
            payload = analyze.dolzhenko_variation_audit(
                n_samples=int(params.get("samples", 1000)),
                max_degree=int(params.get("max_degree", 5)), rng_seed=seed)
            verified = payload["passed"]
        elif which == "jackson":
            s = build_scheme(config["scheme"])
            payload = analyze.jackson_audit(s, params.get("seminorm", {"kind": "lipschitz"}),
                                            rng_seed=seed)
        elif which == "bernstein":
            s = build_scheme(config["scheme"])
            payload = analyze.bernstein_audit(s, params.get("seminorm", {"kind": "deriv-sup"}),
                                              budget=int(params.get("budget", 200)),
                                              rng_seed=seed)
        else:
            raise UsageError(f"unknown audit {which!r}")

    elif task == "slowdecay":
        s = build_scheme(config["scheme"])
        eps_vals = params.get("eps")
        if eps_vals is None:
            window = int(params.get("i_max", 8)) + 4
            eps = NullSequence.harmonic(window)
        else:
            eps = NullSequence(np.asarray(eps_vals, dtype=float))
        w = wit.construct_slow_decay(s, eps, int(params.get("i_max", 8)), rng_seed=seed)
        verified = wit.verify_slow_decay(w, seed=seed)
        payload = _witness_payload(w, "slowdecay", params)

    return {"version": REPORT_VERSION, "task": task, "config": config,
            "config_hash": config_hash(config), "seed": seed,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
            "payload": payload, "verified": verified}


def replay_report(report: dict) -> bool:
    """Re-execute the verification backing a report; True iff it reproduces."""
    version = report.get("version")
    if version != REPORT_VERSION:
        raise UsageError(f"report version {version!r} is incompatible with {REPORT_VERSION}")
    config = report["config"]
    if config_hash(config) != report.get("config_hash"):
        raise UsageError("config hash mismatch; report was edited")
    task = report["task"]
    payload = report["payload"]
    seed = int(report["seed"])

    if task in ("witness", "slowdecay"):
        ctor = payload.get("constructor")
        if not ctor:
            raise UsageError("witness report lacks constructor metadata")
        if task == "witness":
            w = witness_from_config(ctor["op"], ctor["params"], seed)
            ok = wit.verify_witness(w, seed=seed)
        else:
            s = build_scheme(config["scheme"])
            eps_vals = ctor["params"].get("eps")
            eps = (NullSequence(np.asarray(eps_vals, dtype=float)) if eps_vals
                   else NullSequence.harmonic(int(ctor["params"].get("i_max", 8)) + 4))
            w = wit.construct_slow_decay(s, eps, int(ctor["params"].get("i_max", 8)),
                                         rng_seed=seed)
            ok = wit.verify_slow_decay(w, seed=seed)
        stored = payload.get("claims", [])
        fresh = [c.to_json() for c in w.claims]
        if canonical_json(stored) != canonical_json(fresh):
            return False
        return ok and bool(payload.get("verifications"))

    rerun = run_task(copy.deepcopy(config))
    if task == "profile":
        old = payload["entries"]
        new = rerun["payload"]["entries"]
        if len(old) != len(new):
            return False
        for a, b in zip(old, new):
            if a["status"] != b["status"]:
                return False
            if a["status"] != "error" and abs(a["value"] - b["value"]) > 1e-9 * max(1.0, abs(b["value"])):
                return False
        return True
    if task == "density":
        old = payload["certificates"]
        new = rerun["payload"]["certificates"]
        return all(abs(a["solver_value"] - b["solver_value"]) <= 1e-9 * max(1.0, abs(b["solver_value"]))
                   and a["status"] == b["status"] for a, b in zip(old, new))
    if task == "shapiro":
        return payload["verdict"] == rerun["payload"]["verdict"]
    if task == "validate":
        return payload["passed"] == rerun["payload"]["passed"] and rerun["verified"]
    if task == "audit":
        return canonical_json(payload.get("violations", [])) == \
            canonical_json(rerun["payload"].get("violations", []))
    raise UsageError(f"replay does not support task {task!r}")


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(prog="lethargy",
                                     description="approximation-scheme laboratory")
    sub = parser.add_subparsers(dest="command")

    p_run = sub.add_parser("run", help="run a task from a JSON config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config entry (dot paths, JSON values)")
    p_run.add_argument("--out", default=None, help="report path (default: stdout)")

    p_replay = sub.add_parser("replay", help="re-verify a report")
    p_replay.add_argument("report")

    sub.add_parser("list-schemes", help="print registered scheme names")

    args = parser.parse_args(argv)
    if args.command == "list-schemes":
        for name in list_schemes():
            print(name)
        return 0

    if args.command == "run":
        try:
            with open(args.config) as fh:
                config = json.load(fh)
            for item in args.set:
                if "=" not in item:
                    raise UsageError(f"--set needs KEY=VALUE, got {item!r}")
                key, raw = item.split("=", 1)
                _apply_override(config, key, raw)
            report = run_task(config)
        except (UsageError, SchemeError, SpaceError, KeyError, OSError,
                json.JSONDecodeError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        text = json.dumps(report, indent=2, sort_keys=True)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        if not report["verified"]:
            print("verification failure", file=sys.stderr)
            return 2
        return 0

    if args.command == "replay":
        try:
            with open(args.report) as fh:
                report = json.load(fh)
            ok = replay_report(report)
        except (UsageError, SchemeError, SpaceError, KeyError, OSError,
                json.JSONDecodeError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        if not ok:
            print("replay: verification did not reproduce", file=sys.stderr)
            return 2
        print("replay: all claims reproduced")
        return 0

    parser.print_help()
    return 1


if __name__ == "__main__":
    sys.exit(main())
