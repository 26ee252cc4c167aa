"""Command line entry point.

Exit codes: 0 success, 1 vacuous bound or warning, 2 configuration or
domain error, 3 numerical failure.  Results go to stdout as JSON;
``--out`` additionally writes CSV (``*.csv``) or JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import bounds, divergences, framework, subgaussian
from .divergences import classical_kl, classical_renyi, quantum_divergence, smooth_max_divergence
from .errors import ConfigurationError, NumericalError, QgbError
from .jsonio import dumps, load_instance, load_json, parse_matrix
from .measured import OptimizerConfig, measured_renyi

EXIT_OK, EXIT_WARN, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

DIVERGENCE_CHOICES = ("classical", "kl", "smooth_max", "petz", "sandwiched", "reverse_sandwiched",
                      "modified_sandwiched", "measured", "relative_entropy")

# name -> list of (module, attribute) holding the same tolerance
TOLERANCES = {
    "sound_tol": [(bounds, "SOUND_TOL")],
    "hoeffding_tol": [(subgaussian, "HOEFFDING_TOL"), (bounds, "HOEFFDING_TOL")],
    "spectrum_tol": [(subgaussian, "SPECTRUM_TOL")],
    "containment_tol": [(divergences, "CONTAINMENT_TOL")],
    "alpha_one_tol": [(divergences, "ALPHA_ONE_TOL")],
    "drop_tol": [(framework, "DROP_TOL")],
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


def _floats(text: str, name: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigurationError(f"--{name}: expected comma-separated numbers, got {text!r}") from None


def apply_tolerance_overrides(text: str | None) -> dict:
    """Parse ``name=value,...`` and patch the module constants; returns the applied map."""
    applied = {}
    if not text:
        return applied
    for item in text.split(","):
        if not item.strip():
            continue
        name, sep, val = item.partition("=")
        name = name.strip()
        if not sep or name not in TOLERANCES:
            raise ConfigurationError(f"--tolerance-overrides: unknown entry {item!r}; "
                                     f"known names {sorted(TOLERANCES)}")
        try:
            v = float(val)
        except ValueError:
            raise ConfigurationError(f"--tolerance-overrides: {name} needs a number") from None
        if not v >= 0:
            raise ConfigurationError(f"--tolerance-overrides: {name} must be nonnegative")
        for mod, attr in TOLERANCES[name]:
            setattr(mod, attr, v)
        applied[name] = v
    return applied


def resolve_threads(flag: int | None) -> int:
    env = os.environ.get("QGB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigurationError(f"QGB_THREADS must be an integer, got {env!r}") from None
    else:
        n = 1 if flag is None else flag
    if n < 1:
        raise ConfigurationError(f"thread count must be positive, got {n}")
    return n


def _state_arg(text: str, name: str, classical: bool):
    obj = load_json(text)
    if isinstance(obj, list) and obj and all(isinstance(x, (int, float)) for x in obj):
        vec = np.array(obj, dtype=float)
        return vec if classical else np.diag(vec)
    m = parse_matrix(obj, f"--{name}")
    return np.real(np.diag(m)) if classical else m


def _write_csv(path: str, header, rows):
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for r in rows:
        wr.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def _write_out(path: str | None, payload: dict, header=None, rows=None):
    if not path:
        return
    if path.endswith(".csv"):
        if header is None:
            raise ConfigurationError("this command has no CSV form; use a .json path")
        _write_csv(path, header, rows)
    else:
        Path(path).write_text(dumps(payload) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands


def cmd_divergence(args, ctx) -> tuple[dict, int]:
    kind = args.kind
    classical = kind in ("classical", "kl", "smooth_max")
    rho = _state_arg(args.rho, "rho", classical)
    sigma = _state_arg(args.sigma, "sigma", classical)
    if kind == "classical":
        v = classical_renyi(rho, sigma, _need(args.alpha, "alpha"))
    elif kind == "kl":
        v = classical_kl(rho, sigma)
    elif kind == "smooth_max":
        v = smooth_max_divergence(rho, sigma, _need(args.epsilon, "epsilon"))
    elif kind == "measured":
        cfg = OptimizerConfig(restarts=args.restarts, seed=ctx["seed"])
        v = measured_renyi(rho, sigma, _need(args.alpha, "alpha"), cfg)
    elif kind == "relative_entropy":
        v = quantum_divergence(kind, rho, sigma)
    else:
        v = quantum_divergence(kind, rho, sigma, _need(args.alpha, "alpha"))
    out = v.to_json()
    code = EXIT_OK
    if v.diagnostics and v.diagnostics.get("warning"):
        code = EXIT_WARN
    return out, code


def _need(x, name):
    if x is None:
        raise ConfigurationError(f"--{name} is required for this kind")
    return x


def cmd_hoeffding(args, ctx) -> tuple[dict, int]:
    obs = _state_arg(args.observable, "observable", False)
    state = _state_arg(args.state, "state", False)
    if args.lambda_steps < 2:
        raise ConfigurationError("--lambda-steps must be at least 2")
    grid = np.linspace(args.lambda_min, args.lambda_max, args.lambda_steps)
    a, b = subgaussian.spectral_range(obs)
    holds, worst = subgaussian.check_quantum_hoeffding(obs, state, a, b, grid)
    out = {"holds": holds, "worst_slack": worst, "a": a, "b": b,
           "lambda_min": args.lambda_min, "lambda_max": args.lambda_max,
           "lambda_steps": args.lambda_steps}
    return out, EXIT_OK if holds else EXIT_WARN


def cmd_bound(args, ctx) -> tuple[dict, int]:
    inst = load_instance(args.instance)
    j = framework.induce(inst)
    ag = _floats(args.alpha_grid, "alpha-grid") if args.alpha_grid else None
    gg = _floats(args.gamma_grid, "gamma-grid") if args.gamma_grid else None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = bounds.evaluate(args.kind, j, inst, ag, gg, args.p)
    out = rep.to_json()
    out["warnings"] = sorted({str(w.message) for w in caught})
    _write_out(args.out, out, ("kind", "param", "value", "optimum", "realized_abs_gen", "sound"),
               [tuple(str(x) if isinstance(x, tuple) else x for x in r) for r in rep.csv_rows()])
    code = EXIT_WARN if rep.vacuous or out["warnings"] else EXIT_OK
    return out, code


def cmd_tail(args, ctx) -> tuple[dict, int]:
    from .tails import verify_coverage

    inst = load_instance(args.instance)
    j = framework.induce(inst)
    params = {"delta": args.delta, "gamma": args.gamma}
    if args.nu is not None:
        params["nu"] = args.nu
    if args.alpha_grid:
        params["alpha_grid"] = _floats(args.alpha_grid, "alpha-grid")
    seed = ctx["seed"] if args.tail_seed is None else args.tail_seed
    rep = verify_coverage(j, inst, args.kind, params, args.draws, seed)
    out = rep.to_json()
    header = ("kind", "delta", "epsilon", "nu", "gamma", "alpha", "empirical_coverage",
              "exact_coverage", "draws", "threshold", "passed")
    row = tuple("" if out[k] is None else out[k] for k in
                ("kind", "delta", "epsilon", "nu", "gamma", "alpha", "empirical_coverage",
                 "exact_coverage", "draws", "threshold", "passed"))
    _write_out(args.out, out, header, [row])
    code = EXIT_WARN if rep.vacuous or not rep.passed else EXIT_OK
    return out, code


def cmd_reproduce(args, ctx) -> tuple[dict, int]:
    from .fig2 import reproduce

    which = ("p", "alpha") if args.which == "both" else (args.which,)
    results = {}
    for w in which:
        r = reproduce(w, args.out_dir, threads=ctx["threads"])
        rows = r["rows"]
        results[w] = {"files": r["files"], "header": list(r["header"]),
                      "rows": [list(x) for x in rows],
                      "mod_le_petz": all(x[2] <= x[3] + 1e-9 for x in rows),
                      "mod_le_kl": all(x[2] <= x[1] + 1e-9 for x in rows) if w == "p" else None}
    return results, EXIT_OK


def cmd_selftest(args, ctx) -> tuple[dict, int]:
    from .selftest import run_selftest

    res = run_selftest(seed=ctx["seed"], docs_dir=args.docs_dir, stream=sys.stderr)
    return res, EXIT_OK if res["failed"] == 0 else EXIT_WARN


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qgenbound", description="Quantum divergences and generalization bounds.")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--tolerance-overrides", default=None, metavar="NAME=VALUE,...")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("divergence", help="evaluate one divergence")
    d.add_argument("--kind", required=True, choices=DIVERGENCE_CHOICES)
    d.add_argument("--alpha", type=float)
    d.add_argument("--rho", required=True, help="matrix JSON (inline or path); a list is a diagonal")
    d.add_argument("--sigma", required=True)
    d.add_argument("--epsilon", type=float)
    d.add_argument("--restarts", type=int, default=8)
    d.set_defaults(func=cmd_divergence)

    h = sub.add_parser("hoeffding", help="check the quantum Hoeffding inequality on a grid")
    h.add_argument("--observable", required=True, help="matrix JSON; a list is a diagonal")
    h.add_argument("--state", required=True, help="matrix JSON; a list is a diagonal")
    h.add_argument("--lambda-min", type=float, default=-10.0)
    h.add_argument("--lambda-max", type=float, default=10.0)
    h.add_argument("--lambda-steps", type=int, default=101)
    h.set_defaults(func=cmd_hoeffding)

    b = sub.add_parser("bound", help="evaluate an expectation bound on an instance")
    b.add_argument("--instance", required=True)
    b.add_argument("--kind", required=True, choices=bounds.KINDS)
    b.add_argument("--alpha-grid")
    b.add_argument("--gamma-grid")
    b.add_argument("--p", type=float, default=2.0, help="norm order for --kind lp")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bound)

    t = sub.add_parser("tail", help="tail radius and Monte-Carlo coverage")
    t.add_argument("--instance", required=True)
    t.add_argument("--kind", required=True,
                   choices=("classical-renyi", "classical-smooth-max", "quantum-renyi",
                            "quantum-smooth-max"))
    t.add_argument("--delta", type=float, default=0.1)
    t.add_argument("--nu", type=float)
    t.add_argument("--gamma", type=float, default=2.0)
    t.add_argument("--alpha-grid")
    t.add_argument("--draws", type=int, default=10_000)
    t.add_argument("--seed", type=int, dest="tail_seed", default=None, help="overrides the global seed")
    t.add_argument("--out")
    t.set_defaults(func=cmd_tail)

    r = sub.add_parser("reproduce-fig2", help="p-sweep and alpha-sweep of the worked example")
    r.add_argument("--which", choices=("p", "alpha", "both"), default="both")
    r.add_argument("--out-dir", default=".")
    r.set_defaults(func=cmd_reproduce)

    s = sub.add_parser("selftest", help="run the built-in property checks")
    s.add_argument("--docs-dir", default=None, help="directory of example instance JSON files")
    s.set_defaults(func=cmd_selftest)
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        ctx = {"seed": args.seed, "threads": resolve_threads(args.threads),
               "tolerances": apply_tolerance_overrides(args.tolerance_overrides)}
        out, code = args.func(args, ctx)
    except ConfigurationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except QgbError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (ValueError, KeyError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, np.linalg.LinAlgError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    stdout.write(dumps(out) + "\n")
    return code


def main() -> None:
    sys.exit(run())
