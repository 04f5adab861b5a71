"""Batch command-line front end.

Every command builds a :class:`RunReport` and prints it as JSON (default) or as
a long-format CSV table with columns ``index,field,re,im``. Exit status is 0
when every certification in the run passes, 2 on bad flags and 3 on a domain
error or a failed certification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .askey import AskeyRequest, askey_expand, max_circle
from .electro import (
    EnergyConfig,
    minimize_energy,
    para_poly,
    roots_on_circle,
    stationarity_residual,
)
from .errors import BiorthoError, DomainError, PoleError
from .expansion import ExpansionRequest, expand_P
from .hyp import Params, eval_P, eval_P_unit, eval_Q
from .quad import biorthogonality_constant, inner_product

SCHEMA = 1
CSV_COLUMNS = ("index", "field", "re", "im")
DEFAULT_PAIRS = (Params(1, 0.25), Params(0.75, 0.6j))
EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 2, 3


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """``"re,im"`` or a bare real number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"cannot parse complex value {text!r}; expected 're,im'")


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse integer list {text!r}") from None


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


def _parse_complex_list(text: str) -> list[complex]:
    return [parse_complex(v) for v in text.split(";") if v.strip()]


def encode(value: Any) -> Any:
    """JSON-ready form: complex numbers become {re, im}."""
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, Params):
        return {"alpha": encode(value.alpha), "beta": encode(value.beta)}
    if isinstance(value, dict):
        return {k: encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    return value


@dataclass
class RunReport:
    command: str
    inputs: dict[str, Any]
    outputs: list[dict[str, Any]] = field(default_factory=list)
    bounds: dict[str, Any] | None = None
    passed: bool | None = None
    timing_ms: int = 0

    def to_dict(self, with_timing: bool = False) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": encode(self.inputs),
            "outputs": encode(self.outputs),
        }
        if self.bounds is not None:
            doc["bounds"] = encode(self.bounds)
        if self.passed is not None:
            doc["pass"] = bool(self.passed)
        if with_timing:
            doc["timing_ms"] = self.timing_ms
        return doc

    def to_json(self, with_timing: bool = False) -> str:
        return json.dumps(self.to_dict(with_timing), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for i, rec in enumerate(encode(self.outputs)):
            for key in sorted(rec):
                for name, val in _flatten(key, rec[key]):
                    writer.writerow((i, name) + _cells(val))
        return buf.getvalue()


def _flatten(prefix: str, value: Any):
    if isinstance(value, dict) and not (set(value) == {"re", "im"}):
        for k in sorted(value):
            yield from _flatten(f"{prefix}.{k}", value[k])
    elif isinstance(value, (list, tuple)):
        for j, v in enumerate(value):
            yield from _flatten(f"{prefix}[{j}]", v)
    else:
        yield prefix, value


def _cells(value: Any) -> tuple[str, str]:
    if isinstance(value, (complex, np.complexfloating)):
        return repr(float(value.real)), repr(float(value.imag))
    if isinstance(value, dict):
        return repr(float(value["re"])), repr(float(value["im"]))
    if isinstance(value, bool) or value is None:
        return str(value).lower() if value is not None else "", ""
    if isinstance(value, (int, np.integer)):
        return str(int(value)), ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value)), ""
    return str(value), ""


def _pairs(args) -> list[Params]:
    if args.alpha is None and args.beta is None:
        return list(DEFAULT_PAIRS)
    alpha = parse_complex(args.alpha) if args.alpha is not None else 1 + 0j
    beta = parse_complex(args.beta) if args.beta is not None else 0j
    return [Params(alpha, beta)]


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args) -> RunReport:
    params = Params(parse_complex(args.alpha or "1,0"), parse_complex(args.beta or "0.25,0"))
    points = [parse_complex(z) for z in (args.z or ["0,0"])]
    fn = eval_P if args.which == "P" else eval_Q
    report = RunReport("eval", {"n": args.n, "which": args.which, "params": params, "z": points})
    for z in points:
        report.outputs.append({"z": z, "value": fn(args.n, z, params)})
    return report


def cmd_certify_expansion(args) -> RunReport:
    ns = _parse_int_list(args.n_list)
    zs = _parse_complex_list(args.z_list)
    pairs = _pairs(args)
    report = RunReport(
        "certify-expansion",
        {"n": ns, "z": zs, "p1": args.p1, "p2": args.p2, "params": pairs},
    )
    ok = True
    worst = 0.0
    for params in pairs:
        for n in ns:
            for z in zs:
                rec: dict[str, Any] = {"params": params, "n": n, "z": z}
                try:
                    res = expand_P(ExpansionRequest(n, z, params, args.p1, args.p2))
                    exact = eval_P(n, z, params)
                except (BiorthoError, ValueError, OverflowError) as exc:
                    rec.update(error_message=f"{type(exc).__name__}: {exc}", passed=False)
                    ok = False
                else:
                    err = abs(exact - res.value)
                    good = err <= res.total_error_bound
                    ok &= good
                    if res.total_error_bound > 0:
                        worst = max(worst, err / res.total_error_bound)
                    rec.update(
                        exact=exact,
                        value=res.value,
                        error=err,
                        bound=res.total_error_bound,
                        bound_xi1=res.bound_xi1,
                        bound_xi2=res.bound_xi2,
                        passed=good,
                    )
                report.outputs.append(rec)
    report.bounds = {"worst_error_over_bound": worst}
    report.passed = ok
    return report


def cmd_askey(args) -> RunReport:
    ns = _parse_int_list(args.n)
    thetas = _parse_float_list(args.theta)
    pairs = _pairs(args)
    report = RunReport("askey", {"n": ns, "theta": thetas, "k": args.k, "params": pairs})
    ok = True
    circles = []
    for params in pairs:
        circle = max_circle(params)
        circles.append(circle)
        for n in ns:
            for th in thetas:
                rec: dict[str, Any] = {"params": params, "n": n, "theta": th, "k": args.k}
                try:
                    res = askey_expand(AskeyRequest(n, th, args.k, params))
                except (BiorthoError, ValueError) as exc:
                    rec.update(error_message=f"{type(exc).__name__}: {exc}", passed=False)
                    ok = False
                else:
                    exact = eval_P_unit(n, th / n, params)
                    err = abs(exact - res.value)
                    good = err <= res.certified_bound
                    ok &= good
                    rec.update(
                        exact=exact,
                        value=res.value,
                        error=err,
                        remainder_bound=res.remainder_bound,
                        roundoff_bound=res.roundoff_bound,
                        passed=good,
                    )
                report.outputs.append(rec)
    report.bounds = {"max_circle": circles}
    report.passed = ok
    return report


def cmd_electro(args) -> RunReport:
    cfg = EnergyConfig(args.n, args.p, args.q)
    report = RunReport(
        "electro",
        {"n": args.n, "p": args.p, "q": args.q, "starts": args.starts, "seed": args.seed},
    )
    roots = roots_on_circle(para_poly(cfg.n, cfg.params))
    ref = roots.as_array()
    residual = stationarity_residual(roots, cfg)
    rng = np.random.default_rng(args.seed)
    seeds = rng.integers(0, 2**31 - 1, size=args.starts)
    deviation = 0.0
    minimizers = []
    for s in seeds:
        found = minimize_energy(cfg, seed=int(s)).as_array()
        deviation = max(deviation, float(np.max(np.abs(found - ref))))
        minimizers.append(list(found))
    report.outputs.append(
        {
            "root_angles": list(ref),
            "minimizer_angles": minimizers,
            "max_deviation": deviation,
            "stationarity_residual": residual,
        }
    )
    report.bounds = {"deviation_tol": 1e-6, "residual_tol": 1e-8}
    report.passed = bool(deviation < 1e-6 and residual < 1e-8)
    return report


def cmd_biorth(args) -> RunReport:
    pairs = _pairs(args)
    report = RunReport("biorth", {"nmax": args.nmax, "params": pairs})
    ok = True
    for params in pairs:
        off = 0.0
        diag = 0.0
        for n in range(args.nmax + 1):
            expected = biorthogonality_constant(n, params)
            for m in range(args.nmax + 1):
                val = inner_product(n, m, params)
                target = expected if n == m else 0.0
                err = abs(val - target)
                if n == m:
                    diag = max(diag, err)
                else:
                    off = max(off, abs(val))
                report.outputs.append({"params": params, "n": n, "m": m, "value": val, "expected": target})
        report.outputs.append(
            {"params": params, "max_off_diagonal": off, "max_diagonal_error": diag}
        )
        ok &= off < 1e-8 and diag < 1e-8
    report.passed = ok
    return report


COMMANDS: dict[str, Callable] = {
    "eval": cmd_eval,
    "certify-expansion": cmd_certify_expansion,
    "askey": cmd_askey,
    "electro": cmd_electro,
    "biorth": cmd_biorth,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biortho", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--timing", action="store_true", help="include timing_ms (breaks byte-identical output)")
    sub = parser.add_subparsers(dest="command", required=True)

    def params_flags(p, alpha=None, beta=None):
        p.add_argument("--alpha", default=alpha, help="'re,im'")
        p.add_argument("--beta", default=beta, help="'re,im'")

    p = sub.add_parser("eval", parents=[common], help="evaluate P_n or Q_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z", action="append", help="'re,im'; repeat for several points")
    p.add_argument("--which", choices=("P", "Q"), default="P")
    params_flags(p)

    p = sub.add_parser("certify-expansion", parents=[common], help="check the large-n expansion bound on a grid")
    p.add_argument("--n-list", default="5,10,20,40")
    p.add_argument("--z-list", default="-2,0;-0.5,0.5;3,0;0.2,1.5;-1.5,2")
    p.add_argument("--p1", type=int, default=3)
    p.add_argument("--p2", type=int, default=3)
    params_flags(p)

    p = sub.add_parser("askey", parents=[common], help="expansion of P_n(e^{i theta/n})")
    p.add_argument("--n", default="1000", help="comma-separated list")
    p.add_argument("--theta", default=repr(math.pi / 2), help="comma-separated list")
    p.add_argument("--k", type=int, default=0)
    params_flags(p)

    p = sub.add_parser("electro", parents=[common], help="charge equilibrium versus zeros of B_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, default=0.0)
    p.add_argument("--starts", type=int, default=5)

    p = sub.add_parser("biorth", parents=[common], help="inner-product matrix on the circle")
    p.add_argument("--nmax", type=int, default=8)
    params_flags(p)
    return parser


_VALUE_FLAGS = ("--z", "--alpha", "--beta", "--z-list", "--theta", "--q", "--p")


def _attach_values(argv: list[str]) -> list[str]:
    """Glue values such as ``-2,0`` to their flag so argparse does not read
    them as options."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Run a command; returns (exit code, rendered report or error text)."""
    parser = build_parser()
    args = parser.parse_args(_attach_values(sys.argv[1:] if argv is None else list(argv)))
    start = time.perf_counter()
    try:
        report = COMMANDS[args.command](args)
    except UsageError as exc:
        return EXIT_USAGE, f"biortho: error: {exc}\n"
    except (DomainError, PoleError, BiorthoError, ValueError, ArithmeticError) as exc:
        return EXIT_FAIL, f"biortho: {type(exc).__name__}: {exc}\n"
    report.timing_ms = int(round(1000 * (time.perf_counter() - start)))
    text = report.to_csv() if args.format == "csv" else report.to_json(args.timing)
    code = EXIT_OK if report.passed in (None, True) else EXIT_FAIL
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        return code, ""
    return code, text


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    (sys.stderr if text.startswith("biortho:") else sys.stdout).write(text)
    return code


__all__ = [
    "RunReport",
    "parse_complex",
    "encode",
    "build_parser",
    "run",
    "main",
    "cmd_eval",
    "cmd_certify_expansion",
    "cmd_askey",
    "cmd_electro",
    "cmd_biorth",
]
