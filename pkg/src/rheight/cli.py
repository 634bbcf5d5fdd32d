"""Command line front end.

``rheight classify FILE...`` writes one JSON report per input polynomial.
``rheight verify --suite {classify,decay,lemmas,all}`` runs the numerical suites.
``rheight family-grid`` writes the (A, B, n) table.

Exit codes: 0 pass, 1 assertion failure, 2 input error, 3 inconclusive.  When several
apply, input errors win over failures, and failures over inconclusive results.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import platform
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__
from .cutoff import CutoffSpec
from .exponents import (
    classify,
    exponent_lemmas,
    exponent_table,
    family_member,
    hr_closed_form,
    report_to_dict,
)
from .io import SCHEMA_VERSION, write_csv, write_json
from .lemmas import (
    LemmaConfig,
    check_as1,
    check_as2,
    check_counterexample,
    check_duistermaat_uniform,
    check_dyadic_sum_lemma,
    check_osc_sum,
    check_simple_int,
    counterexample_geometry,
    geometric_case,
    linear_case,
    smooth2_case,
)
from .poly import PolySyntaxError, parse_poly
from .quadrature import (
    DEFAULT,
    OscIntegralSpec,
    PhaseDescriptor,
    QuadratureBudgetExceeded,
    decay_fit,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3
SUITES = ("classify", "decay", "lemmas", "all")
LEMMA_NAMES = ("as1", "as2", "duistermaat_B3", "duistermaat_B4", "simple_int", "osc_sum", "dyadic_sum")


@dataclass
class RunConfig:
    input_paths: list[Path] = field(default_factory=list)
    suite: str = "all"
    lambda_min_exp: int = 8
    lambda_max_exp: int = 16
    tol: float = DEFAULT.tol
    seed: int = 0
    output_dir: Path = Path("rheight-out")
    only: tuple[str, ...] = ()

    def __post_init__(self):
        if self.lambda_min_exp >= self.lambda_max_exp:
            raise ValueError("lambda_min must be below lambda_max")
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}")
        bad = [n for n in self.only if n not in LEMMA_NAMES]
        if bad:
            raise ValueError(f"unknown lemma check(s): {', '.join(bad)}")


@dataclass
class Outcome:
    code: int = EXIT_PASS
    written: list[Path] = field(default_factory=list)

    def note(self, code: int) -> None:
        rank = {EXIT_PASS: 0, EXIT_INCONCLUSIVE: 1, EXIT_FAIL: 2, EXIT_INPUT: 3}
        if rank[code] > rank[self.code]:
            self.code = code


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

class InputError(ValueError):
    pass


def read_input(path: Path) -> tuple[str, dict]:
    """A polynomial file: ``#`` comments, optional ``key: value`` lines (m, n1, psi), the rest is the expression."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    opts: dict = {}
    expr = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition(":")
        if sep and key.strip() in ("m", "n1", "psi"):
            opts[key.strip()] = val.strip()
        else:
            expr.append(line)
    if not expr:
        raise InputError(f"{path}: no polynomial found")
    return " ".join(expr), opts


def classify_text(expr: str, opts: dict) -> dict:
    try:
        p = parse_poly(expr)
    except PolySyntaxError as exc:
        raise InputError(str(exc)) from exc
    try:
        m = Fraction(opts.get("m", "2"))
        n1 = int(opts["n1"]) if "n1" in opts and opts["n1"] != "flat" else None
        psi = Fraction(opts.get("psi", "1"))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad option value: {exc}") from exc
    rep = classify(p, m=m, n1=n1, psi_coeff=psi)
    inv = rep.invariants()
    lem = exponent_lemmas(rep) if rep.H is not None and rep.B is not None else []
    ok = all(inv.values()) and all(c.holds for c in lem)
    return {
        "input": expr,
        "report": report_to_dict(rep),
        "complete": rep.complete,
        "invariants": inv,
        "exponent_lemmas": [{"name": c.name, "holds": c.holds, "detail": c.detail} for c in lem],
        "passed": ok,
    }


def run_classify(paths: Sequence[Path], out_dir: Path) -> Outcome:
    out = Outcome()
    if not paths:
        print("classify: no input files", file=sys.stderr)
        out.note(EXIT_INPUT)
        return out

    def work(path: Path):
        try:
            expr, opts = read_input(path)
            return path, classify_text(expr, opts), None
        except InputError as exc:
            return path, None, str(exc)

    stems: dict[str, int] = {}
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(work, paths))
    for path, payload, err in results:
        stem = Path(path).stem or "input"
        stems[stem] = stems.get(stem, 0) + 1
        if stems[stem] > 1:
            stem = f"{stem}-{stems[stem]}"
        if err is not None:
            print(f"error: {err}", file=sys.stderr)
            out.written.append(write_json(out_dir / f"{stem}.error.json", {"input_path": str(path), "error": err}))
            out.note(EXIT_INPUT)
            continue
        out.written.append(write_json(out_dir / f"{stem}.report.json", payload))
        rep = payload["report"]
        print(f"{path}: p_c' = {_fmt(rep.get('p_c_prime'))}, h^r = {_fmt(rep.get('hr'))}, "
              f"{'complete' if payload['complete'] else 'partial'}, {'ok' if payload['passed'] else 'FAILED'}")
        if not payload["passed"]:
            out.note(EXIT_FAIL)
    return out


def _fmt(v) -> str:
    return "n/a" if v is None else str(v)


def family_grid_rows(Bs=(3, 4, 5), n_span: int = 8, c0s=(0,)) -> list[dict]:
    rows = []
    for B in Bs:
        for A in range(0, B - 2):
            for n in range(2 * B + 1, 2 * B + 1 + n_span):
                for c0 in c0s:
                    rep = classify(family_member(A, B, n, c0=c0))
                    cf = hr_closed_form(A, B, n)
                    rows.append({"A": A, "B": B, "n": n, "c0": Fraction(c0), "hr": rep.hr,
                                 "p_c_prime": rep.p_c_prime, "hr_closed_form": cf, "match": rep.hr == cf})
    return rows


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------

def _check(name: str, passed: bool, **detail) -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def suite_classify(cfg: RunConfig, out: Outcome) -> dict:
    checks = [_check(c.name, c.holds, **c.detail) for c in exponent_table()]
    rows = family_grid_rows()
    out.written.append(write_csv(cfg.output_dir / "family_grid.csv", rows))
    checks.append(_check("family grid matches closed form", all(r["match"] for r in rows), n=len(rows)))
    r = classify(parse_poly("x2^3 + x1^9"))
    checks.append(_check("x2^3 + x1^9 gives p_c' = 6", r.p_c_prime == 6, p_c_prime=r.p_c_prime))
    r = classify(family_member(0, 5, 11))
    checks.append(_check("(A,B,n) = (0,5,11) gives theta_c = 8/35", r.theta_c == Fraction(8, 35), theta_c=r.theta_c))
    z_ok = True
    for n in range(8, 14):
        r = classify(family_member(1, 3, n))
        z_ok &= r.hr == r.d == Fraction(7, 3) and (r.kappa.k1, r.kappa.k2) == (Fraction(1, 7), Fraction(2, 7))
    checks.append(_check("two-edge B = 3 family gives h^r = d = 7/3, kappa = (1/7, 2/7)", z_ok, n=[8, 13]))
    geo = counterexample_geometry()
    checks.append(_check(
        "counterexample geometry",
        geo["face"] == ((0, 4), (2, 1)) and (geo["kappa"].k1, geo["kappa"].k2) == (Fraction(3, 8), Fraction(1, 4))
        and geo["d"] == Fraction(8, 5),
        face=geo["face"], kappa=geo["kappa"], d=geo["d"],
    ))
    passed = all(c["passed"] for c in checks)
    out.note(EXIT_PASS if passed else EXIT_FAIL)
    return {"suite": "classify", "passed": passed, "checks": checks}


def decay_specs(cfg: RunConfig) -> list[tuple[str, OscIntegralSpec, float, float]]:
    """``(name, spec, target slope, tolerance)``."""
    grid = tuple(2.0**k for k in range(cfg.lambda_min_exp, cfg.lambda_max_exp + 1))
    unit = CutoffSpec("bump", 0.0, 1.0)
    out = [("quadratic", OscIntegralSpec(PhaseDescriptor.monomial(2), unit, None, grid), -0.5, 0.05),
           ("airy", OscIntegralSpec(PhaseDescriptor.airy(0.0), unit, None, grid), -1 / 3, 0.05)]
    for B in (3, 4, 5):
        out.append((f"monomial_B{B}", OscIntegralSpec(PhaseDescriptor.monomial(B), unit, None, grid), -1 / B, 0.05))
    for B in (3, 4, 5):
        out.append((f"product_B{B}", OscIntegralSpec(PhaseDescriptor.product(B), unit, unit, grid),
                    -(1 / 3 + 1 / B), 0.05))
    return out


def suite_decay(cfg: RunConfig, out: Outcome) -> dict:
    qc = replace(DEFAULT, tol=cfg.tol)
    entries = []
    for name, spec, target, tol in decay_specs(cfg):
        try:
            fit = decay_fit(spec, qc)
        except QuadratureBudgetExceeded as exc:
            entries.append({"name": name, "status": "inconclusive", "error": str(exc)})
            out.note(EXIT_INCONCLUSIVE)
            continue
        ok = abs(fit.slope - target) <= tol
        rows = [dict(r, fitted_slope=fit.slope) for r in fit.rows()]
        out.written.append(write_csv(cfg.output_dir / f"decay_{name}.csv", rows))
        entries.append({"name": name, "status": "pass" if ok else "fail", "slope": fit.slope, "target": target,
                        "tolerance": tol, "intercept": fit.intercept, "max_residual": fit.max_residual,
                        "lambda_range": list(fit.lambda_range)})
        out.note(EXIT_PASS if ok else EXIT_FAIL)
    try:
        (res,) = check_counterexample((0.1,), cfg.lambda_min_exp, cfg.lambda_max_exp, cfg=qc)
    except QuadratureBudgetExceeded as exc:
        entries.append({"name": "d4_counterexample", "status": "inconclusive", "error": str(exc)})
        out.note(EXIT_INCONCLUSIVE)
    else:
        rows = [dict(r, fitted_slope=res.fit.slope) for r in res.fit.rows()]
        out.written.append(write_csv(cfg.output_dir / "decay_d4_counterexample.csv", rows))
        entries.append({"name": "d4_counterexample", "status": "pass" if res.passed else "fail",
                        "slope": res.fit.slope, "target": -5 / 8, "tolerance": 0.05,
                        "violates_two_thirds": res.violates_two_thirds, "max_residual": res.fit.max_residual,
                        "lambda_range": list(res.fit.lambda_range), "delta": res.delta})
        out.note(EXIT_PASS if res.passed else EXIT_FAIL)
    return {"suite": "decay", "passed": all(e["status"] == "pass" for e in entries), "fits": entries}


def _lemma_runners(cfg: RunConfig) -> dict[str, Callable]:
    lc = LemmaConfig(quad=replace(DEFAULT, tol=cfg.tol))
    return {
        "as1": lambda: [check_as1(lc)],
        "as2": lambda: [check_as2(lc)],
        "duistermaat_B3": lambda: [check_duistermaat_uniform(3, lc)],
        "duistermaat_B4": lambda: [check_duistermaat_uniform(4, lc)],
        "simple_int": lambda: [check_simple_int()],
        "osc_sum": lambda: [check_osc_sum(geometric_case(), lemma_id="osc_sum_geometric"),
                            check_osc_sum(linear_case(), lemma_id="osc_sum_linear"),
                            check_osc_sum(smooth2_case(), lemma_id="osc_sum_smooth2")],
        "dyadic_sum": lambda: [check_dyadic_sum_lemma(seed=cfg.seed)[0]],
    }


def suite_lemmas(cfg: RunConfig, out: Outcome) -> dict:
    runners = _lemma_runners(cfg)
    names = cfg.only or LEMMA_NAMES
    entries = []
    for name in names:
        try:
            checks = runners[name]()
        except QuadratureBudgetExceeded as exc:
            entries.append({"lemma_id": name, "verdict": "inconclusive", "error": str(exc)})
            out.note(EXIT_INCONCLUSIVE)
            continue
        for chk in checks:
            summary = chk.summary()
            if chk.lemma_id == "osc_sum_geometric":
                # H = 1 is a plain geometric sum: |F(t)| |2^(i alpha t) - 1| <= 2 exactly
                summary["closed_form_ok"] = chk.ratio_sup <= 2.0 + 1e-12
                if not summary["closed_form_ok"]:
                    out.note(EXIT_FAIL)
            entries.append(summary)
            out.written.append(write_csv(cfg.output_dir / f"lemma_{chk.lemma_id}.csv", chk.rows()))
            if chk.verdict == "inconclusive":
                out.note(EXIT_INCONCLUSIVE)
            elif chk.verdict != "stable":
                out.note(EXIT_FAIL)
    passed = all(e.get("verdict") == "stable" and e.get("closed_form_ok", True) for e in entries)
    return {"suite": "lemmas", "passed": passed, "checks": entries}


def run_verify(cfg: RunConfig) -> Outcome:
    out = Outcome()
    t0 = time.time()
    suites = ("classify", "decay", "lemmas") if cfg.suite == "all" else (cfg.suite,)
    fns = {"classify": suite_classify, "decay": suite_decay, "lemmas": suite_lemmas}
    results = {}
    for s in suites:
        results[s] = fns[s](cfg, out)
        out.written.append(write_json(cfg.output_dir / f"verify_{s}.json", {
            "config": _config_dict(cfg), **results[s]}))
    meta = cfg.output_dir / "metadata.json"
    write_json(meta, {
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "elapsed_seconds": round(time.time() - t0, 3),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "rheight": __version__,
        "argv": sys.argv,
    })
    artifacts = [{"path": p.name, "sha256": hashlib.sha256(p.read_bytes()).hexdigest()} for p in out.written]
    manifest = write_json(cfg.output_dir / "manifest.json", {
        "suite": cfg.suite, "exit_code": out.code, "artifacts": artifacts, "metadata": meta.name})
    out.written += [meta, manifest]
    return out


def _config_dict(cfg: RunConfig) -> dict:
    return {"suite": cfg.suite, "lambda_min_exp": cfg.lambda_min_exp, "lambda_max_exp": cfg.lambda_max_exp,
            "tol": cfg.tol, "seed": cfg.seed, "only": list(cfg.only), "schema_version": SCHEMA_VERSION}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rheight", description="r-height classification and numerical checks")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify polynomials read from files")
    c.add_argument("files", nargs="*", type=Path)
    c.add_argument("--out", type=Path, default=Path("rheight-out"))

    g = sub.add_parser("family-grid", help="write the (A, B, n) table as CSV")
    g.add_argument("--out", type=Path, default=Path("rheight-out"))

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--lambda-min-exp", type=int, default=8)
    v.add_argument("--lambda-max-exp", type=int, default=16)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=DEFAULT.tol)
    v.add_argument("--out", type=Path, default=Path("rheight-out"))
    v.add_argument("--only", default="", help=f"comma-separated subset of lemma checks: {', '.join(LEMMA_NAMES)}")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    if args.command == "classify":
        return run_classify(args.files, args.out).code
    if args.command == "family-grid":
        rows = family_grid_rows()
        path = write_csv(args.out / "family_grid.csv", rows)
        print(path)
        return EXIT_PASS if all(r["match"] for r in rows) else EXIT_FAIL
    try:
        only = tuple(s for s in args.only.split(",") if s)
        cfg = RunConfig(suite=args.suite, lambda_min_exp=args.lambda_min_exp, lambda_max_exp=args.lambda_max_exp,
                        tol=args.tol, seed=args.seed, output_dir=args.out, only=only)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = run_verify(cfg)
    for p in out.written:
        print(p)
    return out.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
