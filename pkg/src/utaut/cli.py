"""Command-line front end.

Exit codes: 0 success/PASS, 1 verification FAIL, 2 invalid parameters,
3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass

from . import __version__
from ._backend import set_threads
from .conjugacy import camina_is_degenerate, class_table, is_camina
from .enumeration import (autc_formula, burnside_generators, cb_question, construct_thm27,
                          enumerate_autc_brute, enumerate_autc_generated,
                          enumerate_autc_structured, outc_formula, verify_theorem_a,
                          verify_theorem_b)
from .errors import BadParams, CapExceeded, CertificationError, ExtensionFailed, UtautError
from .field import field_create
from .group import GroupCtx, center_codes, group_create, lower_central_series
from .morphisms import closure, inner_automorphisms, table_set
from .report import Report, emit_report

COMMANDS = ("info", "classes", "autc", "verify-a", "verify-b", "thm27", "burnside", "report")
METHODS = ("brute", "structured", "generated", "all")

EXIT_OK, EXIT_FAIL, EXIT_PARAMS, EXIT_CAP = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    p: int = 2
    m: int = 1
    n: int = 3
    k: int = 3
    method: str = "all"
    c: str = "1"
    out_path: str | None = None
    csv: bool = False
    max_order: int = 1 << 24
    max_candidates: int = 1 << 24
    threads: int = 1
    timings: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise BadParams(f"unknown command {self.command!r}")
        if self.method not in METHODS:
            raise BadParams(f"unknown method {self.method!r}")
        if self.m < 1:
            raise BadParams("--m must be positive")
        if self.n < 3 or not 2 <= self.k <= self.n:
            raise BadParams(f"need n >= 3 and 2 <= k <= n, got n={self.n}, k={self.k}")
        if self.max_order < 1 or self.max_candidates < 1 or self.threads < 1:
            raise BadParams("caps and thread count must be positive")
        if self.csv and not self.out_path:
            raise BadParams("--csv writes next to the JSON report; give --out too")

    def params(self) -> dict:
        return {"p": self.p, "m": self.m, "n": self.n, "k": self.k}


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw else default


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="characteristic")
    common.add_argument("--m", type=int, default=None, help="extension degree (default 1; 2 for thm27/burnside)")
    common.add_argument("--n", type=int, default=3, help="matrix degree")
    common.add_argument("--k", type=int, default=None, help="truncation index (default 3, capped at n)")
    common.add_argument("--method", choices=METHODS, default="all")
    common.add_argument("--c", default="1", help="field literal, base-p digits low power first: 0,1 is theta")
    common.add_argument("--out", dest="out_path", default=None, help="JSON report path")
    common.add_argument("--csv", action="store_true", help="also write the class-size histogram CSV")
    common.add_argument("--max-order", type=int, default=None)
    common.add_argument("--max-candidates", type=int, default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--timings", action="store_true", help="include phase timings in the JSON")

    ap = argparse.ArgumentParser(prog="utaut", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    helps = {
        "info": "group order, center and lower central series",
        "classes": "conjugacy class table",
        "autc": "enumerate class-preserving automorphisms",
        "verify-a": "prime field: Aut_c equals Inn",
        "verify-b": "k = 3: order and structure of Aut_c and Out_c",
        "thm27": "non-inner class-preserving automorphism over a non-prime field",
        "burnside": "elementary generators and the group they generate with Inn",
        "report": "everything applicable to the given group",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return ap


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    ns = _parser().parse_args(argv)
    m = ns.m if ns.m is not None else (2 if ns.command in ("thm27", "burnside") else 1)
    k = ns.k if ns.k is not None else min(3, ns.n)
    cfg = RunConfig(
        command=ns.command, p=ns.p, m=m, n=ns.n, k=k, method=ns.method, c=ns.c,
        out_path=ns.out_path, csv=ns.csv,
        max_order=ns.max_order if ns.max_order is not None else _env_int("UTAUT_MAX_ORDER", 1 << 24),
        max_candidates=(ns.max_candidates if ns.max_candidates is not None
                        else _env_int("UTAUT_MAX_CANDIDATES", 1 << 24)),
        threads=ns.threads if ns.threads is not None else _env_int("UTAUT_THREADS", os.cpu_count() or 1),
        timings=ns.timings,
    )
    return cfg


# ---------------------------------------------------------------------------
# commands

def _group(cfg: RunConfig) -> GroupCtx:
    return group_create(field_create(cfg.p, cfg.m), cfg.n, cfg.k, max_order=cfg.max_order)


def _fill_group(rep: Report, ctx: GroupCtx) -> None:
    z = center_codes(ctx)
    rep.group_order = ctx.order
    rep.center_order = int(z.size)
    rep.checks["center_order_formula"] = z.size == ctx.q ** (ctx.n - ctx.k + 1)


def _fill_classes(rep: Report, ctx: GroupCtx) -> None:
    tab = class_table(ctx)
    rep.class_count = tab.class_count
    rep.class_size_histogram = [[s, c] for s, c in tab.histogram()]
    rep.checks["class_sizes_sum"] = sum(tab.class_sizes) == ctx.order
    rep.checks["class_sizes_divide_order"] = all(ctx.order % s == 0 for s in tab.class_sizes)
    if ctx.has_table():
        rep.details["camina"] = is_camina(tab)
        rep.details["camina_degenerate"] = camina_is_degenerate(ctx)


def _cmd_info(cfg, ctx, rep):
    _fill_group(rep, ctx)
    rep.details["band_positions"] = ctx.nb
    rep.details["generators"] = len(ctx.generators)
    if ctx.has_table():
        series = lower_central_series(ctx)
        rep.details["lower_central_series"] = [int(s.size) for s in series]
        rep.details["nilpotency_class"] = len(series) - 1
        rep.checks["nilpotency_class"] = len(series) - 1 == ctx.k - 1


def _cmd_classes(cfg, ctx, rep):
    _fill_group(rep, ctx)
    _fill_classes(rep, ctx)


def _formulas(rep: Report, ctx: GroupCtx) -> None:
    if ctx.k == 3:
        rep.formula_autc = autc_formula(ctx.field.p, ctx.field.m, ctx.n)
        rep.formula_outc = outc_formula(ctx.field.p, ctx.field.m)


def _cmd_autc(cfg, ctx, rep):
    _fill_group(rep, ctx)
    _fill_classes(rep, ctx)
    _formulas(rep, ctx)
    methods = ["brute", "structured", "generated"] if cfg.method == "all" else [cfg.method]
    if ctx.k != 3:
        if any(mt != "brute" for mt in methods) and cfg.method != "all":
            raise BadParams(f"method {cfg.method!r} needs k = 3")
        methods = ["brute"]
    results = {}
    for meth in methods:
        if meth == "brute":
            results[meth] = enumerate_autc_brute(ctx, cap=cfg.max_candidates)
        elif meth == "structured":
            results[meth] = enumerate_autc_structured(ctx)
        else:
            results[meth] = enumerate_autc_generated(ctx)
    first = results[methods[0]]
    rep.autc_order = first.autc_order
    rep.inn_order = first.inn_order
    rep.outc_order = first.outc_order
    if "brute" in results:
        rep.cb_order = results["brute"].cb_order
    for meth in methods[1:]:
        rep.checks[f"sets_equal_{methods[0]}_{meth}"] = results[meth].keys() == first.keys()
    if rep.formula_autc is not None:
        rep.checks["autc_order_formula"] = first.autc_order == rep.formula_autc
        rep.checks["outc_order_formula"] = first.outc_order == rep.formula_outc
    if ctx.field.m == 1:
        rep.checks["autc_equals_inn"] = first.keys() == table_set(first.inn)
    rep.details["methods"] = methods
    _timing(rep, {f"{mt}.{k}": v for mt, r in results.items() for k, v in r.timings.items()})


def _timing(rep: Report, t: dict) -> None:
    rep.timings = {**(rep.timings or {}), **t}


def _cmd_verify_a(cfg, ctx, rep):
    if ctx.field.m != 1:
        raise BadParams("verify-a is the prime-field statement; use --m 1")
    _fill_group(rep, ctx)
    v = verify_theorem_a(ctx, cap=cfg.max_candidates)
    rep.autc_order = v.values["autc_order"]
    rep.inn_order = v.values["inn_order"]
    rep.cb_order = v.values["cb_order"]
    rep.outc_order = rep.autc_order // rep.inn_order
    rep.checks.update(v.checks)
    _timing(rep, v.results["brute"].timings)


def _cmd_verify_b(cfg, ctx, rep):
    if ctx.k != 3:
        raise BadParams("verify-b concerns the class-2 quotient; use --k 3")
    _fill_group(rep, ctx)
    methods = ("brute", "structured", "generated") if cfg.method == "all" else (cfg.method,)
    v = verify_theorem_b(ctx, methods, cap=cfg.max_candidates)
    rep.formula_autc = v.values["formula_autc"]
    rep.formula_outc = v.values["formula_outc"]
    rep.autc_order = v.values[f"autc_order_{methods[0]}"]
    rep.inn_order = v.values["inn_order"]
    rep.outc_order = v.values["outc_order"]
    rep.cb_order = v.values.get("cb_order")
    rep.details["methods"] = list(methods)
    rep.checks.update(v.checks)
    _timing(rep, {f"{mt}.{k}": x for mt, r in v.results.items() for k, x in r.timings.items()})


def _cmd_thm27(cfg, ctx, rep):
    _fill_group(rep, ctx)
    c = ctx.field.parse(cfg.c)
    try:
        cert = construct_thm27(ctx, c)
    except CertificationError as exc:
        rep.checks["certified"] = False
        rep.details["error"] = str(exc)
        return
    rep.checks["central"] = cert.central
    rep.checks["class_preserving"] = cert.class_preserving
    rep.checks["conjugator_for_every_element"] = cert.conjugators.size == ctx.order
    rep.checks["not_inner"] = not cert.inner
    rep.details["c"] = list(c.coeffs)
    rep.certificates.append({"automorphism": cert.automorphism.serialize()})


def _cmd_burnside(cfg, ctx, rep):
    if ctx.k != 3:
        raise BadParams("burnside needs --k 3")
    _fill_group(rep, ctx)
    _formulas(rep, ctx)
    t0 = time.perf_counter()
    bg = burnside_generators(ctx)
    inn = inner_automorphisms(ctx)
    t1 = time.perf_counter()
    gen = closure(bg.a1 + bg.a2 + inn)
    t2 = time.perf_counter()
    p, m = ctx.field.p, ctx.field.m
    a1, a2 = table_set(bg.a1), table_set(bg.a2)
    ident = {gen[0].key}
    rep.details["a1_order"] = len(a1)
    rep.details["a2_order"] = len(a2)
    rep.details["finn_count"] = len(bg.finn)
    rep.checks["a1_order"] = len(a1) == p ** (m * m)
    rep.checks["a2_order"] = len(a2) == p ** (m * m)
    rep.checks["a1_a2_trivial_intersection"] = (a1 & a2) == ident
    rep.checks["finn_closure_order"] = len(closure(bg.finn or [gen[0]])) == p ** ((ctx.n - 3) * m)
    rep.autc_order = len(gen)
    rep.inn_order = len(inn)
    rep.outc_order = len(gen) // len(inn)
    rep.checks["autc_order_formula"] = rep.autc_order == rep.formula_autc
    rep.checks["outc_order_formula"] = rep.outc_order == rep.formula_outc
    rep.certificates = [{"phi": a.serialize()} for a in bg.phi] + [{"psi": a.serialize()} for a in bg.psi]
    _timing(rep, {"generators": t1 - t0, "closure": t2 - t1})


def _cmd_report(cfg, ctx, rep):
    _fill_group(rep, ctx)
    _fill_classes(rep, ctx)
    _formulas(rep, ctx)
    brute = enumerate_autc_brute(ctx, cap=cfg.max_candidates)
    rep.autc_order = brute.autc_order
    rep.inn_order = brute.inn_order
    rep.outc_order = brute.outc_order
    rep.cb_order = brute.cb_order
    _timing(rep, {f"brute.{k}": v for k, v in brute.timings.items()})
    if ctx.field.m == 1:
        v = verify_theorem_a(ctx, result=brute)
        rep.checks.update({f"a.{k}": x for k, x in v.checks.items()})
    if ctx.k == 3:
        v = verify_theorem_b(ctx, results={"brute": brute})
        rep.checks.update({f"b.{k}": x for k, x in v.checks.items()})
    if ctx.field.m >= 2 and ctx.k >= 3:
        cert = construct_thm27(ctx, ctx.field.one)
        rep.checks["thm27.certified"] = cert.central and cert.class_preserving and not cert.inner
    rep.details["cb_question"] = cb_question(ctx, brute)


HANDLERS = {
    "info": _cmd_info, "classes": _cmd_classes, "autc": _cmd_autc, "verify-a": _cmd_verify_a,
    "verify-b": _cmd_verify_b, "thm27": _cmd_thm27, "burnside": _cmd_burnside, "report": _cmd_report,
}


def run(cfg: RunConfig, stdout=None) -> tuple[int, Report | None]:
    stdout = stdout or sys.stdout
    try:
        cfg.validate()
        set_threads(cfg.threads)
        rep = Report(cfg.command, cfg.params())
        ctx = _group(cfg)
        t0 = time.perf_counter()
        HANDLERS[cfg.command](cfg, ctx, rep)
        _timing(rep, {"total": time.perf_counter() - t0})
        rep.set_verdict_from_checks()
    except (BadParams, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS, None
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP, None
    except (ExtensionFailed, UtautError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL, None
    stdout.write(rep.to_text())
    if cfg.out_path:
        try:
            emit_report(rep, cfg.out_path, csv_too=cfg.csv, with_timings=cfg.timings)
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_PARAMS, rep
    return (EXIT_FAIL if rep.verdict == "FAIL" else EXIT_OK), rep


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:  # argparse: usage errors exit 2, --help exits 0
        return int(exc.code or 0)
    code, _ = run(cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
