"""Parameter sweeps, APN hunting and the closed-butterfly permutation scan."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from . import vbf
from .butterfly import CLOSED, OPEN, ButterflyParams, gold_exponent, materialize_lut
from .errors import BadHypotheses, BudgetExceeded, TooLarge
from .gf2k import FieldSpec, make_field

DEFAULT_BUDGET = 1 << 34
MAX_SEARCH_K = 7


@dataclass(frozen=True)
class SweepSpec:
    ks: tuple[int, ...]
    exponents: object = "gold"      # "gold", "all", or an explicit list of (i, t) pairs
    alphas: object = "strict"       # "all", "strict" (alpha not in {0, 1}), or a list
    variant: str = CLOSED           # "open", "closed" or "both"
    analyses: frozenset = vbf.ALL_ANALYSES
    output: str | None = None
    modulus: dict = field(default_factory=dict)   # k -> modulus override


def exponent_choices(k: int, source="gold") -> list[tuple[int | None, int, int]]:
    """(i, t, e) triples with gcd(e, 2^k - 1) = 1, one per distinct e mod 2^k - 1.

    Exponents with a Gold decomposition e = (2^i + 1) 2^t carry their (i, t)
    (smallest i first); others get i = None.
    """
    q1 = (1 << k) - 1
    gold: dict[int, tuple[int, int]] = {}
    for i in range(1, k):
        for t in range(k):
            e = gold_exponent(i, t, k)
            if math.gcd(e, q1) == 1:
                gold.setdefault(e, (i, t))
    if source == "gold":
        return [(i, t, e) for e, (i, t) in sorted(gold.items())]
    if source == "all":
        out = []
        for e in range(1, q1):
            if math.gcd(e, q1) == 1:
                i, t = gold.get(e, (None, 0))
                out.append((i, t, e))
        return out
    out = []
    for i, t in source:
        e = gold_exponent(i, t, k)
        if math.gcd(e, q1) != 1:
            raise BadHypotheses(f"(i={i}, t={t}) gives e={e} not coprime to {q1}")
        out.append((i, t, e))
    return sorted(out, key=lambda r: r[2])


def alpha_choices(f: FieldSpec, source="strict") -> list[int]:
    if source == "all":
        return list(range(f.order))
    if source == "strict":
        return list(range(2, f.order))
    return sorted(int(a) for a in source)


def make_params(f: FieldSpec, i, t, e, alpha, variant) -> ButterflyParams:
    if i is None:
        return ButterflyParams.from_exponent(f, e, alpha, variant)
    return ButterflyParams.gold(f, i, t, alpha, variant)


def row_cost(k: int, analyses) -> int:
    """Rough count of elementary table operations for one analysed butterfly."""
    n = 2 * k
    size = 1 << n
    cost = size
    if "delta" in analyses:
        cost += size * size
    if "walsh" in analyses:
        cost += n * size * size
    if "degree" in analyses:
        cost += n * size
    if "bijectivity" in analyses:
        cost += size
    return cost


def _variants(v):
    return (OPEN, CLOSED) if v == "both" else (v,)


def expand(spec: SweepSpec) -> list[ButterflyParams]:
    """Rows in deterministic order: k, then e, then alpha, then variant."""
    rows = []
    for k in spec.ks:
        f = make_field(k, spec.modulus.get(k))
        for i, t, e in exponent_choices(k, spec.exponents):
            for alpha in alpha_choices(f, spec.alphas):
                for variant in _variants(spec.variant):
                    rows.append(make_params(f, i, t, e, alpha, variant))
    return rows


def analyze_params(p: ButterflyParams, analyses=vbf.ALL_ANALYSES, workers: int = 1) -> vbf.AnalysisReport:
    F = materialize_lut(p)
    return vbf.analyze(F, analyses, branch_bits=p.k, params=p.echo(), workers=workers)


def sweep(spec: SweepSpec, workers: int = 1, budget: int = DEFAULT_BUDGET) -> list[vbf.AnalysisReport]:
    rows = expand(spec)
    total = sum(row_cost(p.k, spec.analyses) for p in rows)
    if total > budget:
        raise BudgetExceeded(f"sweep needs ~{total:.3g} table operations, budget is {budget:.3g}")
    reports = [analyze_params(p, spec.analyses, workers) for p in rows]
    if spec.output:
        write_jsonl(reports, spec.output)
    return reports


def write_jsonl(reports, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in reports:
            fh.write(r.to_json() + "\n")


def read_jsonl(path) -> list[vbf.AnalysisReport]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [vbf.AnalysisReport.from_dict(json.loads(s)) for s in lines if s.strip()]


CSV_COLUMNS = ["k", "e", "alpha_hex", "variant", "delta", "nl", "deg_total", "is_perm"]


def write_csv_summary(reports, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in reports:
            p = r.params_echo
            w.writerow([p.get("k"), p.get("e"), p.get("alpha_hex"), p.get("variant"),
                        r.delta, r.nonlinearity, r.degree_total, r.is_permutation])


def _check_search_k(k: int, allow_nonstrict: bool):
    if k > MAX_SEARCH_K:
        raise TooLarge(f"exhaustive alpha search limited to k <= {MAX_SEARCH_K}")
    if k % 2 == 0 and not allow_nonstrict:
        raise BadHypotheses(f"k={k} is even; pass allow_nonstrict to explore anyway")


def apn_search(k: int, exponents="gold", modulus: int | None = None,
               allow_nonstrict: bool = False, variant: str = OPEN) -> list[tuple[int, int]]:
    """All (e, alpha) whose butterfly is APN (delta = 2); may be empty."""
    _check_search_k(k, allow_nonstrict)
    f = make_field(k, modulus)
    hits = []
    for i, t, e in exponent_choices(k, exponents):
        for alpha in range(f.order):
            F = materialize_lut(make_params(f, i, t, e, alpha, variant))
            if vbf.is_apn(F):
                hits.append((e, alpha))
    return hits


def permutation_scan(k: int, e: int, modulus: int | None = None) -> list[int]:
    """Every alpha for which the closed butterfly with exponent e is bijective."""
    if k > MAX_SEARCH_K:
        raise TooLarge(f"exhaustive alpha scan limited to k <= {MAX_SEARCH_K}")
    f = make_field(k, modulus)
    found = []
    for alpha in range(f.order):
        F = materialize_lut(ButterflyParams.from_exponent(f, e, alpha, CLOSED))
        if vbf.is_permutation(F):
            found.append(alpha)
    return found


# -- theorem checks ----------------------------------------------------------

def expected_claims(p: ButterflyParams, rep: vbf.AnalysisReport) -> list[tuple[str, bool]]:
    """Proven properties that apply to these parameters, each paired with its outcome.

    Only claims whose inputs were computed are listed.
    """
    k = p.k
    out = []

    def claim(name, value, pred):
        if value is not None:
            out.append((name, bool(pred(value))))

    nl_opt = (1 << (2 * k - 1)) - (1 << k)
    if p.variant == OPEN:
        claim("open butterfly is a permutation", rep.is_permutation, lambda v: v)
        claim("open butterfly is an involution", rep.is_involution, lambda v: v)
    if rep.degree_bound is not None and rep.degree_total is not None:
        out.append(("degree <= Walsh divisibility bound", rep.degree_total <= rep.degree_bound))

    if p.strict:
        claim("delta <= 4", rep.delta, lambda v: v <= 4)
        claim(f"NL = {nl_opt}", rep.nonlinearity, lambda v: v == nl_opt)
        want = {0, 1 << k, -(1 << k), 1 << (k + 1), -(1 << (k + 1))}
        claim("Walsh values {0, +-2^k, +-2^(k+1)}", rep.walsh_spectrum, lambda s: set(s) == want)
        if p.variant == CLOSED:
            claim("closed degree = 2", rep.degree_total, lambda v: v == 2)
        else:
            claim(f"open left degree = {k + 1}", rep.degree_left, lambda v: v == k + 1)
            claim(f"open right degree = {k}", rep.degree_right, lambda v: v == k)
    elif p.gold_hypotheses and p.alpha == 1:
        claim("delta = 4", rep.delta, lambda v: v == 4)
        claim("differential values within {0, 4}", rep.diff_spectrum, lambda s: set(s) <= {0, 4})
        claim(f"NL = {nl_opt}", rep.nonlinearity, lambda v: v == nl_opt)
        want = {0, 1 << (k + 1), -(1 << (k + 1))}
        claim("Walsh values {0, +-2^(k+1)}", rep.walsh_spectrum, lambda s: set(s) == want)
        claim("permutation", rep.is_permutation, lambda v: v)
        if p.variant == CLOSED:
            claim("closed degree = 2", rep.degree_total, lambda v: v == 2)
        else:
            claim(f"open degree = {k}", rep.degree_total, lambda v: v == k)
    return out
