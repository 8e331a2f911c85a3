"""Command-line front end.

    lpcompact analyze-sequence --input seq.json [--p 2] [--eps 0.5,0.3,0.2]
    lpcompact numrange         --input tuple.json [--count 256]
    lpcompact cfun             --input fseq.json
    lpcompact verify           [--input fixture-or-directory]

Reports go to --out (default ./lpcompact-out) as JSON plus CSV profiles.
Exit codes: 0 success, 1 verification failures, 2 parse error,
3 dimension mismatch, 4 tail premise fails (report written first).
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .cfun_case import GridFunctionSeq, analyze
from .compactness import Family, kolmogorov_certificate
from .diagonal_operator import (
    DEFAULT_EPS_GRID,
    OperatorSeq,
    c0_decay_check,
    classify,
    dual_pair_residual,
    operator_norm,
    triple_norm,
)
from .errors import DimensionMismatch, NoCertificate, ParseError
from .hilbert_case import (
    OperatorTuple,
    numerical_range_sample,
    pairing_residual,
    polarization_check,
    polarization_scale,
    radius_duality_check,
    single_numerical_radius,
    tail_comparison,
)
from .instances import harmonic_basis, random_sequence, random_tuple, unit_basis
from .seq_core import Exponent, holder_extremizer, holder_pair, p_norm
from .target_space import OptimizerOptions

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DIM, EXIT_NOCERT = 0, 1, 2, 3, 4

CFUN_EPS = (0.5, 0.25, 0.1)

STATEMENTS = {
    "analyze-sequence": [
        "operator norm of the diagonal operator equals the dual-shadow norm",
        "diagonal operator is compact iff the dual shadow is totally bounded in l^p",
        "tail criterion for total boundedness in l^p",
        "strong l^p(A) sits inside the compact class, which sits inside the bounded class",
        "p = 1: bounded operator on c_0",
        "p = inf: compact iff the terms form a totally bounded set",
    ],
    "numrange": [
        "half the tuple norm <= joint numerical radius <= tuple norm",
        "joint numerical radius equals the sup of w(T beta) over the unit q-ball",
        "pairing identity beta-hat <Tx, y> = <(T beta) x, y>",
        "polarization identity for <Tx, y>",
        "half the operator norm <= numerical radius <= operator norm",
    ],
    "cfun": [
        "F is continuous iff F(Omega) is totally bounded in l^p",
        "neighbourhood bound (1 + 2^(p+1)) eps^p under the tail premise",
        "p = inf: equicontinuity and total boundedness of {f_1, f_2, ...}",
    ],
}


# -- serialization ---------------------------------------------------------


def _num(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _plain(obj):
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, Exponent):
        return obj.to_json()
    return obj


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats at 17 significant digits and non-finite values as strings."""
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(_plain(v), (int, float, bool, str)) or _plain(v) is None for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write_json(path: Path, obj) -> None:
    path.write_text(dumps(obj) + "\n", encoding="utf-8")


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_num(float(v)).strip('"') if isinstance(v, (float, np.floating)) else v for v in row])


# -- config ----------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[str]
    p: Optional[str]
    eps: tuple
    seed: int
    restarts: int
    iters: int
    samples: int
    out: str
    count: int = 256

    @property
    def opts(self) -> OptimizerOptions:
        return OptimizerOptions(restarts=self.restarts, iters=self.iters, samples=self.samples, seed=self.seed)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "input": self.input,
            "p": self.p,
            "eps": list(self.eps),
            "seed": self.seed,
            "count": self.count,
            "budgets": self.opts.to_json(),
        }


def _envelope(cfg: RunConfig, result: dict) -> dict:
    return {
        "tool": "lpcompact",
        "version": __version__,
        "seed": cfg.seed,
        "config": cfg.to_json(),
        "statements": STATEMENTS.get(cfg.command, []),
        "result": result,
    }


class InputError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(EXIT_PARSE, f"{path}: cannot read input ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(EXIT_PARSE, f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _parse(path: str, builder, p_override: Optional[str]):
    data = _load_json(path)
    if p_override is not None and isinstance(data, dict):
        data = dict(data, p=p_override)
    try:
        return builder(data)
    except DimensionMismatch as exc:
        raise InputError(EXIT_DIM, f"{path}: dimension mismatch: {exc}") from None
    except ParseError as exc:
        where = ""
        if exc.line is not None:
            where = f":{exc.line}" + (f":{exc.column}" if exc.column is not None else "")
        raise InputError(EXIT_PARSE, f"{path}{where}: {exc}") from None
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(EXIT_PARSE, f"{path}: malformed input: {exc}") from None


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# -- commands --------------------------------------------------------------


def cmd_analyze_sequence(cfg: RunConfig) -> int:
    a = _parse(cfg.input, OperatorSeq.from_json, cfg.p)
    report = classify(a, cfg.eps, cfg.opts)
    result = report.to_json()
    if a.p == 1:
        result["c0_decay"] = c0_decay_check(a, cfg.eps).to_json()
    out = _outdir(cfg)
    _write_json(out / "report.json", _envelope(cfg, result))
    if a.p.is_inf:
        _write_csv(
            out / "nets.csv",
            ["epsilon", "net_size", "covering_radius"],
            [(n.epsilon, n.size, n.covering_radius) for n in report.nets],
        )
    else:
        strong = [0.0] + report.strong_partial_sums
        _write_csv(
            out / "tails.csv",
            ["m", "shadow_sup_tail", "strong_partial_norm"],
            [(m, v, strong[m]) for m, v in report.shadow_tail_profile],
        )
    print(
        f"N={report.N} p={report.p} |||a|||={report.triple_norm:.6g} "
        f"||Lambda_a||={report.operator_norm:.6g} in_lp={report.in_lp} in_lpc={report.in_lpc}"
    )
    return EXIT_OK


def cmd_numrange(cfg: RunConfig) -> int:
    T = _parse(cfg.input, OperatorTuple.from_json, cfg.p)
    sample = numerical_range_sample(T, cfg.count, cfg.seed)
    rep = radius_duality_check(T, cfg.opts, candidates=list(sample.witnesses))
    norms = sample.norms(T.p)
    result = rep.to_json()
    result["range_sample"] = {
        "count": cfg.count,
        "max_p_norm": float(norms.max()),
        "below_omega": bool(norms.max() <= rep.omega * (1 + 1e-12)),
    }
    result["single_numerical_radius"] = [
        {"w": w, "norm": n, "ratio": (w / n if n else 0.0)} for w, n in zip(rep.single_radii, rep.single_norms)
    ]
    result["tail_comparison"] = tail_comparison(T, cfg.eps, count=cfg.count, seed=cfg.seed)
    out = _outdir(cfg)
    _write_json(out / "radius.json", _envelope(cfg, result))
    header, rows = sample.csv_rows()
    _write_csv(out / "range.csv", header, rows)
    print(
        f"omega={rep.omega:.10g} ||T||={rep.tuple_norm:.10g} sup_w={rep.dual_sup:.10g} "
        f"sandwich={'ok' if rep.sandwich_holds else 'FAIL'}"
    )
    return EXIT_OK


def cmd_cfun(cfg: RunConfig) -> int:
    F = _parse(cfg.input, GridFunctionSeq.from_json, cfg.p)
    rep = analyze(F, cfg.eps)
    result = rep.to_json()
    out = _outdir(cfg)
    _write_json(out / "cfun.json", _envelope(cfg, result))
    _write_csv(out / "modulus.csv", ["delta", "omega"], rep.modulus)
    if rep.tail_profile:
        _write_csv(out / "tails.csv", ["m", "sup_tail"], rep.tail_profile)
    print(f"{rep.label}; finest delta {rep.finest_delta:.6g}; bounds hold: {result['all_bounds_hold']}")
    if rep.premise_failures:
        eps = ", ".join(format(e, "g") for e in rep.premise_failures)
        print(f"tail premise fails at epsilon = {eps}", file=sys.stderr)
        return EXIT_NOCERT
    return EXIT_OK


# -- verify ----------------------------------------------------------------


def _check(name: str, ok: bool, detail: str) -> dict:
    return {"property": name, "pass": bool(ok), "detail": detail}


def _suite(cfg: RunConfig) -> list[dict]:
    opts = cfg.opts
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 100]))
    rows = []

    gap = 0.0
    for kind in ("cn", "cgrid", "mat"):
        for k, p in enumerate(("4/3", "2", "3", "inf")):
            a = random_sequence(rng, kind, p)
            t, _ = triple_norm(a, opts)
            o, _ = operator_norm(a, opts)
            gap = max(gap, abs(t - o) / max(1.0, t))
    rows.append(_check("norm equality", gap <= 1e-3, f"max relative gap {gap:.3e} (tol 1e-3)"))

    res = 0.0
    for k in range(200):
        a = random_sequence(rng, ("cn", "cgrid", "mat")[k % 3], "2")
        phi = a.space.sample_dual_ball(3, rng)[-1]
        beta = rng.standard_normal(a.N) + 1j * rng.standard_normal(a.N)
        res = max(res, dual_pair_residual(a, phi, beta))
    rows.append(_check("dual pair", res <= 1e-12, f"max residual {res:.3e} (tol 1e-12)"))

    lo_margin, dgap, pair_res, pol = math.inf, 0.0, 0.0, 0.0
    tuples = [random_tuple(rng, d=int(rng.integers(1, 5)), N=int(rng.integers(1, 5))) for _ in range(12)]
    for T in tuples:
        rep = radius_duality_check(T, opts)
        scale = max(1.0, rep.tuple_norm)
        lo_margin = min(lo_margin, rep.lower_margin / scale, rep.upper_margin / scale)
        dgap = max(dgap, rep.duality_gap)
        for _ in range(10):
            x = rng.standard_normal(T.d) + 1j * rng.standard_normal(T.d)
            y = rng.standard_normal(T.d) + 1j * rng.standard_normal(T.d)
            beta = rng.standard_normal(T.N) + 1j * rng.standard_normal(T.N)
            pair_res = max(pair_res, pairing_residual(T, x, y, beta))
            pol = max(pol, polarization_check(T, x, y) / polarization_scale(T, x, y))
    rows.append(_check("sandwich", lo_margin >= -1e-3, f"min relative margin {lo_margin:.3e} (tol -1e-3)"))
    rows.append(_check("radius duality", dgap <= 2e-3, f"max relative gap {dgap:.3e} (tol 2e-3)"))
    rows.append(_check("pairing identity", pair_res <= 1e-12, f"max residual {pair_res:.3e} (tol 1e-12)"))
    rows.append(_check("polarization", pol <= 1e-10, f"max scaled residual {pol:.3e} (tol 1e-10)"))

    w_nil = single_numerical_radius(np.array([[0, 1], [0, 0]]))[0]
    rows.append(_check("numerical radius", abs(w_nil - 0.5) <= 1e-6, f"w(nilpotent) = {w_nil:.12f}"))

    worst = 0.0
    for k in range(200):
        n = int(rng.integers(1, 9))
        p = Exponent(("4/3", "2", "3", "inf", "1")[k % 5])
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        bound = p_norm(x, p) * p_norm(y, p.conjugate())
        worst = max(worst, (abs(holder_pair(x, y)) - bound) / bound)
        e = holder_extremizer(x, p)
        worst = max(worst, abs(holder_pair(e, x) - p_norm(x, p)) / p_norm(x, p))
        worst = max(worst, abs(p_norm(e, p.conjugate()) - 1.0))
    rows.append(_check("hoelder", worst <= 1e-12, f"max violation {worst:.3e} (tol 1e-12)"))

    a = harmonic_basis(100)
    rep = classify(a, (0.2,), opts, shadow_samples=64)
    m = rep.shadow_certificates[0].cutoff_m
    b = unit_basis(20)
    cert_b = kolmogorov_certificate(Family(list(b.terms)), "2", 0.5)
    ok = m == 25 and cert_b.cutoff_m == 20 and abs(rep.triple_norm - 1.0) <= 1e-3
    rows.append(_check("certificates", ok, f"harmonic basis m(0.2) = {m}; unit basis m(0.5) = {cert_b.cutoff_m}"))
    return rows


def _fixture_paths(cfg: RunConfig) -> list[Path]:
    if cfg.input is None:
        root = resources.files("lpcompact") / "fixtures"
        return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".json"))
    path = Path(cfg.input)
    if path.is_dir():
        return sorted(path.glob("*.json"))
    return [path]


def _fixture_checks(cfg: RunConfig) -> list[dict]:
    rows = []
    opts = cfg.opts
    for path in _fixture_paths(cfg):
        data = _load_json(str(path))
        keys = set(data) if isinstance(data, dict) else set()
        if "terms" in keys:
            a = _parse(str(path), OperatorSeq.from_json, None)
            t, _ = triple_norm(a, opts)
            o, _ = operator_norm(a, opts)
            gap = abs(t - o) / max(1.0, t)
            rows.append(_check(f"fixture {path.name}", gap <= 1e-3, f"norm gap {gap:.3e}"))
        elif "operators" in keys:
            T = _parse(str(path), OperatorTuple.from_json, None)
            rep = radius_duality_check(T, opts)
            rows.append(_check(f"fixture {path.name}", rep.sandwich_holds and rep.duality_gap <= 2e-3,
                               f"sandwich margins {rep.lower_margin:.3e}/{rep.upper_margin:.3e}, duality gap {rep.duality_gap:.3e}"))
        elif "components" in keys:
            F = _parse(str(path), GridFunctionSeq.from_json, None)
            rep = analyze(F)
            ok = all(b.holds for b in rep.bound_checks)
            rows.append(_check(f"fixture {path.name}", ok, f"{rep.label}, {len(rep.bound_checks)} bound checks"))
        else:
            raise InputError(EXIT_PARSE, f"{path}: not a sequence, tuple or function-sequence file")
    return rows


def cmd_verify(cfg: RunConfig) -> int:
    fixture_rows = _fixture_checks(cfg)
    rows = _suite(cfg) + fixture_rows
    out = _outdir(cfg)
    failing = [r["property"] for r in rows if not r["pass"]]
    _write_json(out / "verify.json", _envelope(cfg, {"checks": rows, "all_pass": not failing}))
    width = max(len(r["property"]) for r in rows)
    for r in rows:
        print(f"{r['property']:<{width}}  {'pass' if r['pass'] else 'FAIL'}  {r['detail']}")
    if failing:
        print("failing: " + ", ".join(failing), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# -- entry point -----------------------------------------------------------


def _eps_list(text: str) -> tuple:
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad epsilon list {text!r}") from None
    if not vals or any(not v > 0 for v in vals):
        raise argparse.ArgumentTypeError("epsilons must be positive")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpcompact", description="Compactness diagnostics for diagonal operators.")
    parser.add_argument("--version", action="version", version=f"lpcompact {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "analyze-sequence": ("membership report for an A-valued sequence", True, DEFAULT_EPS_GRID),
        "numrange": ("joint numerical radius, tuple norm and range sample", True, DEFAULT_EPS_GRID),
        "cfun": ("continuity and tail report for a function sequence on a grid", True, CFUN_EPS),
        "verify": ("seeded property suites plus fixture checks", False, DEFAULT_EPS_GRID),
    }
    for name, (help_text, needs_input, eps) in specs.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--input", required=needs_input, help="instance JSON file" + ("" if needs_input else " or directory (default: shipped fixtures)"))
        sp.add_argument("--p", default=None, help="exponent override, e.g. 2, 4/3, inf (default: from input)")
        sp.add_argument("--eps", type=_eps_list, default=eps, help=f"comma list of tolerances (default: {','.join(map(str, eps))})")
        sp.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
        sp.add_argument("--restarts", type=int, default=32, help="ascent restarts (default: 32)")
        sp.add_argument("--iters", type=int, default=200, help="iterations per restart (default: 200)")
        sp.add_argument("--samples", type=int, default=256, help="screened candidates (default: 256)")
        sp.add_argument("--out", default="lpcompact-out", help="output directory (default: lpcompact-out)")
        if name == "numrange":
            sp.add_argument("--count", type=int, default=256, help="range sample size (default: 256)")
    return parser


COMMANDS = {
    "analyze-sequence": cmd_analyze_sequence,
    "numrange": cmd_numrange,
    "cfun": cmd_cfun,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.restarts < 0 or args.iters < 0 or args.samples < 1:
        print("error: budgets must be nonnegative and --samples at least 1", file=sys.stderr)
        return EXIT_PARSE
    cfg = RunConfig(
        command=args.command,
        input=args.input,
        p=args.p,
        eps=tuple(args.eps),
        seed=args.seed,
        restarts=args.restarts,
        iters=args.iters,
        samples=args.samples,
        out=args.out,
        count=getattr(args, "count", 256),
    )
    if cfg.p is not None:
        try:
            Exponent(cfg.p)
        except (TypeError, ValueError) as exc:
            print(f"error: bad --p: {exc}", file=sys.stderr)
            return EXIT_PARSE
    if cfg.command == "numrange" and cfg.count < 1:
        print("error: --count must be at least 1", file=sys.stderr)
        return EXIT_PARSE
    try:
        return COMMANDS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NoCertificate as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOCERT


if __name__ == "__main__":
    sys.exit(main())
