"""Command-line front end.

Exit codes: 0 success, 1 a proven property failed to hold, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

from . import butterfly, lemma_oracle, search, vbf
from .errors import ButterflyError
from .gf2k import make_field

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2
SUBCOMMANDS = ("analyze", "sweep", "apn-search", "perm-scan", "export-lut", "verify-lemmas")


class UsageError(Exception):
    def __init__(self, flag, message):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


def hex_int(s: str) -> int:
    try:
        return int(s, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hexadecimal value: {s!r}")


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("BUTTERFLY_WORKERS", "1")))
    except ValueError:
        return 1


@dataclass
class CliConfig:
    subcommand: str
    k: list = field(default_factory=list)
    i: int | None = None
    t: int = 0
    e: int | None = None
    alpha: int | None = None
    modulus: int | None = None
    variant: str = "closed"
    analyses: str = "delta,walsh,degree,bijectivity"
    exponents: str = "gold"
    alphas: str = "strict"
    fmt: str = "text"
    workers: int = 1
    out: str | None = None
    csv: str | None = None
    seed: int = 0
    allow_nonstrict: bool = False

    def to_argv(self) -> list[str]:
        argv = [self.subcommand, "--k", *map(str, self.k)]
        opt = {"--i": self.i, "--e": self.e, "--out": self.out, "--csv": self.csv,
               "--alpha": None if self.alpha is None else f"{self.alpha:#x}",
               "--modulus": None if self.modulus is None else f"{self.modulus:#x}"}
        for flag, v in opt.items():
            if v is not None:
                argv += [flag, str(v)]
        argv += ["--t", str(self.t), "--variant", self.variant, "--analyses", self.analyses,
                 "--exponents", self.exponents, "--alphas", self.alphas, "--format", self.fmt,
                 "--workers", str(self.workers), "--seed", str(self.seed)]
        if self.allow_nonstrict:
            argv.append("--allow-nonstrict")
        return argv

    @classmethod
    def from_namespace(cls, ns) -> "CliConfig":
        return cls(subcommand=ns.command, k=list(ns.k), i=ns.i, t=ns.t, e=ns.e, alpha=ns.alpha,
                   modulus=ns.modulus, variant=ns.variant, analyses=ns.analyses,
                   exponents=ns.exponents, alphas=ns.alphas, fmt=ns.format, workers=ns.workers,
                   out=ns.out, csv=ns.csv, seed=ns.seed, allow_nonstrict=ns.allow_nonstrict)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, nargs="+", required=True, help="branch size(s)")
    common.add_argument("--i", type=int, help="Gold parameter, e = (2^i+1) 2^t")
    common.add_argument("--t", type=int, default=0, help="twist exponent")
    common.add_argument("--e", type=int, help="raw exponent (non-strict)")
    common.add_argument("--alpha", type=hex_int, help="coefficient, hexadecimal")
    common.add_argument("--modulus", type=hex_int, help="field modulus, hexadecimal")
    common.add_argument("--variant", default="closed", choices=["open", "closed", "both"])
    common.add_argument("--analyses", default="delta,walsh,degree,bijectivity")
    common.add_argument("--exponents", default="gold", choices=["gold", "all"])
    common.add_argument("--alphas", default="strict",
                        help="'strict', 'all', or comma-separated hex values")
    common.add_argument("--format", default="text", choices=["text", "binary"])
    common.add_argument("--workers", type=int, default=_default_workers())
    common.add_argument("--out")
    common.add_argument("--csv", help="CSV summary path (sweep)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--allow-nonstrict", action="store_true",
                        help="permit even k, gcd(i,k) > 1, alpha in {0,1}, raw exponents")

    parser = argparse.ArgumentParser(prog="butterfly-sbox", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _single_k(cfg: CliConfig) -> int:
    if len(cfg.k) != 1:
        raise UsageError("--k", f"{cfg.subcommand} takes a single value")
    return cfg.k[0]


def _analyses(cfg: CliConfig) -> frozenset:
    got = frozenset(s.strip() for s in cfg.analyses.split(",") if s.strip())
    unknown = got - vbf.ALL_ANALYSES
    if unknown:
        raise UsageError("--analyses", f"unknown analyses {sorted(unknown)}")
    return got


def _strict_problem(k, i, alpha) -> tuple[str, str] | None:
    if k % 2 == 0:
        return "--k", f"k={k} is even"
    if i is not None and math.gcd(i, k) != 1:
        return "--i", f"gcd(i={i}, k={k}) != 1"
    if alpha is not None and alpha in (0, 1):
        return "--alpha", f"alpha={alpha:#x} is trivial"
    return None


def _params(cfg: CliConfig) -> butterfly.ButterflyParams:
    k = _single_k(cfg)
    if cfg.alpha is None:
        raise UsageError("--alpha", "required")
    if cfg.variant == "both":
        raise UsageError("--variant", "choose open or closed")
    if (cfg.i is None) == (cfg.e is None):
        raise UsageError("--i", "give exactly one of --i or --e")
    if not cfg.allow_nonstrict:
        if cfg.e is not None:
            raise UsageError("--e", "raw exponents need --allow-nonstrict")
        problem = _strict_problem(k, cfg.i, cfg.alpha)
        if problem:
            raise UsageError(problem[0], problem[1] + " (use --allow-nonstrict)")
    f = make_field(k, cfg.modulus)
    if cfg.e is not None:
        return butterfly.ButterflyParams.from_exponent(f, cfg.e, cfg.alpha, cfg.variant)
    return butterfly.ButterflyParams.gold(f, cfg.i, cfg.t, cfg.alpha, cfg.variant)


def _emit(cfg: CliConfig, doc) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_claims(claims) -> bool:
    ok = True
    for name, passed in claims:
        print(f"{'PASS' if passed else 'FAIL'}  {name}", file=sys.stderr)
        ok &= passed
    return ok


def cmd_analyze(cfg: CliConfig) -> int:
    p = _params(cfg)
    rep = search.analyze_params(p, _analyses(cfg), cfg.workers)
    _emit(cfg, rep.to_dict())
    return EXIT_OK if _report_claims(search.expected_claims(p, rep)) else EXIT_CHECK_FAILED


def _alpha_source(cfg: CliConfig):
    if cfg.alphas in ("strict", "all"):
        if cfg.alphas == "all" and not cfg.allow_nonstrict:
            raise UsageError("--alphas", "'all' includes 0 and 1; needs --allow-nonstrict")
        return cfg.alphas
    try:
        vals = [int(s, 16) for s in cfg.alphas.split(",") if s.strip()]
    except ValueError:
        raise UsageError("--alphas", f"cannot parse {cfg.alphas!r}")
    if not cfg.allow_nonstrict and any(a in (0, 1) for a in vals):
        raise UsageError("--alphas", "0 and 1 need --allow-nonstrict")
    return vals


def cmd_sweep(cfg: CliConfig) -> int:
    if not cfg.allow_nonstrict:
        for k in cfg.k:
            if k % 2 == 0:
                raise UsageError("--k", f"k={k} is even (use --allow-nonstrict)")
        if cfg.exponents == "all":
            raise UsageError("--exponents", "'all' includes non-Gold exponents; needs --allow-nonstrict")
    mod = {cfg.k[0]: cfg.modulus} if cfg.modulus is not None else {}
    if mod and len(cfg.k) > 1:
        raise UsageError("--modulus", "only valid with a single --k")
    spec = search.SweepSpec(tuple(cfg.k), cfg.exponents, _alpha_source(cfg), cfg.variant,
                            _analyses(cfg), cfg.out, mod)
    rows = search.expand(spec)
    reports = search.sweep(spec, cfg.workers)
    if cfg.out is None:
        for r in reports:
            sys.stdout.write(r.to_json() + "\n")
    if cfg.csv:
        search.write_csv_summary(reports, cfg.csv)
    ok = True
    for p, r in zip(rows, reports):
        for name, passed in search.expected_claims(p, r):
            if not passed:
                print(f"FAIL  k={p.k} e={p.e} alpha={p.alpha:#x} {p.variant}: {name}", file=sys.stderr)
                ok = False
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_apn_search(cfg: CliConfig) -> int:
    k = _single_k(cfg)
    variant = "open" if cfg.variant == "both" else cfg.variant
    t0 = time.perf_counter()
    hits = search.apn_search(k, cfg.exponents, cfg.modulus, cfg.allow_nonstrict, variant)
    f = make_field(k, cfg.modulus)
    _emit(cfg, {"k": k, "modulus_hex": f.modulus_hex, "exponents": cfg.exponents,
                "variant": variant,
                "hits": [{"e": e, "alpha_hex": f"{a:#x}"} for e, a in hits],
                "runtime_ms": round((time.perf_counter() - t0) * 1e3, 3)})
    return EXIT_OK


def cmd_perm_scan(cfg: CliConfig) -> int:
    k = _single_k(cfg)
    if cfg.e is None and cfg.i is None:
        raise UsageError("--e", "give --e or --i/--t")
    e = cfg.e if cfg.e is not None else butterfly.gold_exponent(cfg.i, cfg.t, k)
    f = make_field(k, cfg.modulus)
    t0 = time.perf_counter()
    alphas = search.permutation_scan(k, e, cfg.modulus)
    _emit(cfg, {"k": k, "e": e, "modulus_hex": f.modulus_hex,
                "alphas_hex": [f"{a:#x}" for a in alphas],
                "runtime_ms": round((time.perf_counter() - t0) * 1e3, 3)})
    return EXIT_OK


def cmd_export_lut(cfg: CliConfig) -> int:
    if not cfg.out:
        raise UsageError("--out", "required for export-lut")
    p = _params(cfg)
    F = butterfly.materialize_lut(p)
    if cfg.fmt == "binary":
        butterfly.export_binary(p, F, cfg.out)
    else:
        butterfly.export_text(p, F, cfg.out)
    return EXIT_OK


def cmd_verify_lemmas(cfg: CliConfig) -> int:
    k = _single_k(cfg)
    f = make_field(k, cfg.modulus)
    t0 = time.perf_counter()
    ii = [cfg.i] if cfg.i is not None else [i for i in range(1, k) if math.gcd(i, k) == 1]
    results = []
    for i in ii:
        results += lemma_oracle.verify_all(f, i, seed=cfg.seed)
    passed = all(results)
    _emit(cfg, {"k": k, "i": ii, "modulus_hex": f.modulus_hex, "seed": cfg.seed,
                "passed": passed, "lemmas": [r.to_dict() for r in results],
                "runtime_ms": round((time.perf_counter() - t0) * 1e3, 3)})
    for r in results:
        if not r:
            print(f"FAIL  {r.name} {r.params}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


COMMANDS = {"analyze": cmd_analyze, "sweep": cmd_sweep, "apn-search": cmd_apn_search,
            "perm-scan": cmd_perm_scan, "export-lut": cmd_export_lut,
            "verify-lemmas": cmd_verify_lemmas}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = CliConfig.from_namespace(ns)
    if cfg.workers < 1:
        print("butterfly-sbox: --workers: must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        print(f"butterfly-sbox: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ButterflyError as exc:
        print(f"butterfly-sbox: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
