"""Command-line front end.

Exit codes: 0 success, 1 a verify suite failed, 2 unreadable input or bad flags,
3 a mathematical refusal (unsplit pair, excluded complex, size cap), 4 an
internal invariant violation (the report on stderr carries the job config).
Identical arguments give identical bytes on stdout; timings are printed only
when ``--timings`` is passed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Callable

from .chains import InvariantViolation, complex_homology
from .complexes import (ComplexError, SimplicialComplex, alexander_dual, complex_to_json,
                        composition_complex, format_complex, index_pairs, pairs_of, parse_complex,
                        parse_complexes, polyhedral_join)
from .decomposition import NotSplitError, decompose, parse_pair
from .duality import gamma_certificate
from .ideals import MonomialIdeal, hochster_check, taylor_tor
from .linalg import Coeffs
from .rings import ProductFamily, polyhedral_ring, total_cohomology_ring
from .subsets import fmt, full
from .total import total_homology
from .verify import SUITES, SuiteConfig, run_suite

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_REFUSED, EXIT_INVARIANT = 0, 1, 2, 3, 4


class InputError(ValueError):
    """Raised while reading files or flags; maps to exit code 2."""


@dataclass
class JobConfig:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    coeffs: str = "z"
    universe: str | None = None
    family: str = "universal"
    flavor: str = "product"
    pairs: list[str] = field(default_factory=list)
    seed: int = 0
    fmt: str = "table"
    options: dict = field(default_factory=dict)


@dataclass
class Report:
    """What a subcommand produced: a main table plus extra JSON-only fields."""

    columns: list[str]
    rows: list[dict]
    extra: dict = field(default_factory=dict)
    status: int = EXIT_OK
    preamble: list[str] = field(default_factory=list)


# input helpers -------------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _complex(path: str) -> SimplicialComplex:
    try:
        return parse_complex(_read(path))
    except ComplexError as exc:
        raise InputError(f"{path}: {exc}") from None


def _coeffs(text: str) -> Coeffs:
    try:
        return Coeffs.parse(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _pair(spec: str) -> tuple[SimplicialComplex, SimplicialComplex]:
    """A catalog name or a file holding ``X`` then ``A``."""
    if os.path.exists(spec):
        try:
            cs = parse_complexes(_read(spec))
        except ComplexError as exc:
            raise InputError(f"{spec}: {exc}") from None
        if len(cs) != 2:
            raise InputError(f"{spec}: a pair file holds exactly two complexes, found {len(cs)}")
        return cs[0], cs[1]
    try:
        return parse_pair(spec)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _pairs(specs: list[str], m: int) -> list[tuple[SimplicialComplex, SimplicialComplex]]:
    if len(specs) == 1:
        specs = specs * m
    if len(specs) != m:
        raise InputError(f"need one pair or {m} pairs, got {len(specs)}")
    return [_pair(s) for s in specs]


def _family(text: str) -> ProductFamily:
    try:
        return ProductFamily.parse(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _ideal(text: str) -> MonomialIdeal:
    gens = []
    for line in text.splitlines():
        line = line.split("#")[0].strip()
        if not line:
            continue
        try:
            gens.append(tuple(int(v) for v in line.replace(",", " ").split()))
        except ValueError:
            raise InputError(f"bad exponent vector {line!r}") from None
    if not gens:
        raise InputError("ideal file has no generators")
    n = len(gens[0])
    try:
        return MonomialIdeal(n, tuple(gens))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise InputError(f"bad integer list {text!r}") from None


def _need_input(cfg: JobConfig) -> SimplicialComplex:
    if not cfg.inputs:
        raise InputError(f"{cfg.subcommand} needs --in")
    return _complex(cfg.inputs[0])


def _summary_rows(h, **extra) -> list[dict]:
    return [dict(extra, degree=d, free_rank=r, torsion=list(t)) for d, r, t in h.groups]


# subcommands ---------------------------------------------------------------------------


def cmd_homology(cfg: JobConfig) -> Report:
    K = _need_input(cfg)
    F = _coeffs(cfg.coeffs)
    variant = cfg.options.get("variant", "plain")
    h = complex_homology(K, variant, F)
    return Report(["degree", "free_rank", "torsion"], _summary_rows(h),
                  {"complex": complex_to_json(K), "variant": variant, "coefficients": F.name})


def cmd_total(cfg: JobConfig) -> Report:
    K = _need_input(cfg)
    F = _coeffs(cfg.coeffs)
    universe = cfg.universe or "xm"
    if universe not in ("xm", "rm", "lm"):
        raise InputError(f"unknown universe {universe!r}")
    H = total_homology(K, universe, F)
    return Report(["sigma", "omega", "degree", "free_rank", "torsion"], H.rows(),
                  {"complex": complex_to_json(K), "universe": universe, "coefficients": F.name,
                   "total": H.total().to_json()})


def cmd_decompose(cfg: JobConfig) -> Report:
    K = _need_input(cfg)
    F = _coeffs(cfg.coeffs)
    if cfg.flavor not in ("product", "join"):
        raise InputError(f"unknown flavor {cfg.flavor!r}")
    pairs = _pairs(cfg.pairs or ["disk1"], K.m)
    res = decompose(K, pairs_of(pairs), cfg.flavor, F)
    total = res.total
    return Report(["sigma", "omega", "degree", "free_rank", "torsion"], res.rows(),
                  {"flavor": cfg.flavor, "coefficients": F.name, "pairs": cfg.pairs or ["disk1"],
                   "total": total.to_json(), "betti": total.betti()},
                  preamble=[f"total: {total}"])


def cmd_join(cfg: JobConfig) -> Report:
    """Polyhedral join with catalog pairs, or a composition complex with ``--compose`` files."""
    K = _need_input(cfg)
    F = _coeffs(cfg.coeffs)
    compose = cfg.options.get("compose") or []
    if compose:
        Ls = [_complex(p) for p in compose]
        if len(Ls) == 1:
            Ls = Ls * K.m
        if len(Ls) != K.m:
            raise InputError(f"need one or {K.m} complexes for --compose")
        Z = composition_complex(K, Ls)
    else:
        Z = polyhedral_join(K, pairs_of(_pairs(cfg.pairs or ["disk1"], K.m)))
    h = complex_homology(Z, "suspended", F)
    return Report(["degree", "free_rank", "torsion"], _summary_rows(h),
                  {"complex": complex_to_json(Z), "coefficients": F.name, "variant": "suspended"},
                  preamble=format_complex(Z).strip().splitlines())


def cmd_ring(cfg: JobConfig) -> Report:
    K = _need_input(cfg)
    F = _coeffs(cfg.coeffs if cfg.coeffs != "z" else "q")
    if not F.field:
        raise InputError("ring tables need field coefficients")
    kind = cfg.options.get("pair")
    if kind:
        R = polyhedral_ring(K, kind, F)
    else:
        fam = _family(cfg.family)
        universe = cfg.universe or fam.default_universe
        if universe not in ("xm", "rm", "lm"):
            raise InputError(f"unknown universe {universe!r}")
        R = total_cohomology_ring(K, fam, universe, F)
    data = R.to_json()
    rows = [{"i": i, "j": j, "coeff": c, "k": k} for i, j, c, k in data["constants"]]
    basis = [f"{b['index']}: {b['label']} deg {b['degree']}" for b in data["basis"]]
    return Report(["i", "j", "coeff", "k"], rows, {"ring": data}, preamble=basis)


def cmd_hochster(cfg: JobConfig) -> Report:
    F = _coeffs(cfg.coeffs if cfg.coeffs != "z" else "f2")
    if not F.field:
        raise InputError("Tor over the residue field needs field coefficients")
    ideal_path = cfg.options.get("ideal")
    if ideal_path:
        I = _ideal(_read(ideal_path))
        T = taylor_tor(I, cfg.options.get("module", "ideal"), F)
        return Report(["i", "multidegree", "dim"], T.rows(),
                      {"ideal": str(I), "module": T.module, "totals": T.total_list()})
    K = _need_input(cfg)
    r = _int_list(cfg.options["r"]) if cfg.options.get("r") else None
    rep = hochster_check(K, r, F)
    rows = []
    keys = sorted(set(rep.left.entries) | set(rep.right.entries))
    for key in keys:
        rows.append({"i": key[0], "multidegree": list(key[1]), "taylor": rep.left.entries.get(key, 0),
                     "hochster": rep.right.entries.get(key, 0)})
    status = EXIT_OK if rep.match else EXIT_FAILED
    return Report(["i", "multidegree", "taylor", "hochster"], rows,
                  {"match": rep.match, "coefficients": F.name, "totals": rep.left.total_list()},
                  status=status, preamble=[f"match: {rep.match}"])


def cmd_dual(cfg: JobConfig) -> Report:
    K = _need_input(cfg)
    Kd = alexander_dual(K, full(K.m)) if not K.void else SimplicialComplex.simplex(K.m)
    extra = {"dual": complex_to_json(Kd)}
    pre = format_complex(Kd).strip().splitlines()
    if not cfg.options.get("verify"):
        return Report([], [], extra, preamble=pre)
    F = _coeffs(cfg.coeffs)
    rows = []
    matrices = {}
    ok = True
    for p in index_pairs(K.m):
        if not p.omega:
            continue
        c = gamma_certificate(K, p, F)
        ok &= c.matched
        rows.append({"sigma": fmt(p.sigma), "omega": fmt(p.omega), "sigma_dual": fmt(p.complement(K.m)),
                     "left": str(c.left), "right": str(c.right), "matched": c.matched})
        if c.matrices:
            matrices[f"{fmt(p.sigma)}|{fmt(p.omega)}"] = c.to_json()["matrices"]
    extra.update({"coefficients": F.name, "all_matched": ok, "matrices": matrices,
                  "sign_rule": "(-1)^{sum_{j in eta} #{i in omega : i < j}}"})
    return Report(["sigma", "omega", "sigma_dual", "left", "right", "matched"], rows, extra,
                  status=EXIT_OK if ok else EXIT_FAILED, preamble=pre)


def _suite_job(args: tuple[str, int, int | None, int | None]):
    name, seed, n, m = args
    return run_suite(name, SuiteConfig(seed, n, m))


def cmd_verify(cfg: JobConfig) -> Report:
    names = cfg.options.get("suites") or ["all"]
    if names == ["all"]:
        names = list(SUITES)
    for name in names:
        if name not in SUITES:
            raise InputError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    jobs = [(name, cfg.seed, cfg.options.get("n"), cfg.options.get("m")) for name in names]
    threads = int(os.environ.get("POLYPROD_THREADS", "1") or 1)
    if threads > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(threads) as pool:
            results = list(pool.map(_suite_job, jobs))
    else:
        results = [_suite_job(j) for j in jobs]
    timings = cfg.options.get("timings")
    rows = []
    for r in results:
        row = {"criterion": r.criterion, "suite": r.name, "status": "PASS" if r.passed else "FAIL",
               "cases": r.cases, "failures": r.failures}
        if timings:
            row["seconds"] = round(r.seconds, 2)
        rows.append(row)
    cols = ["criterion", "suite", "status", "cases", "failures"] + (["seconds"] if timings else [])
    ok = all(r.passed for r in results)
    return Report(cols, rows, {"seed": cfg.seed, "suites": [r.to_json() for r in results]},
                  status=EXIT_OK if ok else EXIT_FAILED)


COMMANDS: dict[str, Callable[[JobConfig], Report]] = {
    "homology": cmd_homology,
    "total": cmd_total,
    "decompose": cmd_decompose,
    "join": cmd_join,
    "ring": cmd_ring,
    "hochster": cmd_hochster,
    "dual": cmd_dual,
    "verify": cmd_verify,
}


# output ---------------------------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, list):
        return "[" + ",".join(str(x) for x in v) + "]"
    return str(v)


def render(report: Report, fmt_name: str, cfg: JobConfig) -> str:
    if fmt_name == "json":
        payload = {"command": cfg.subcommand, "rows": report.rows}
        payload.update(report.extra)
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if report.columns:
            w.writerow(report.columns)
        for row in report.rows:
            w.writerow([_cell(row.get(c, "")) for c in report.columns])
        return buf.getvalue()
    lines = list(report.preamble)
    if report.columns:
        cells = [[_cell(row.get(c, "")) for c in report.columns] for row in report.rows]
        widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(report.columns)]
        lines.append("  ".join(c.ljust(w) for c, w in zip(report.columns, widths)).rstrip())
        for r in cells:
            lines.append("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + ("\n" if lines else "")


def run(cfg: JobConfig) -> tuple[int, str]:
    """Dispatch one job; returns the exit status and the stdout text."""
    if cfg.subcommand not in COMMANDS:
        raise InputError(f"unknown subcommand {cfg.subcommand!r}")
    if cfg.fmt not in ("table", "json", "csv"):
        raise InputError(f"unknown format {cfg.fmt!r}")
    report = COMMANDS[cfg.subcommand](cfg)
    return report.status, render(report, cfg.fmt, cfg)


# argument parsing ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyprod", description="Homology, rings and duality of polyhedral products.")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(p, coeffs="z"):
        p.add_argument("--in", dest="inputs", action="append", default=[], help="complex file (text or JSON)")
        p.add_argument("--coeffs", "--field", dest="coeffs", default=coeffs, help="z, q, f2, f<p>")
        p.add_argument("--format", dest="fmt", default="table", choices=("table", "json", "csv"))
        return p

    p = common(sub.add_parser("homology", help="simplicial homology"))
    p.add_argument("--variant", default="plain", choices=("plain", "reduced", "suspended"))
    p = common(sub.add_parser("total", help="total homology per (sigma, omega) block"))
    p.add_argument("--universe", choices=("xm", "rm", "lm"))
    p = common(sub.add_parser("decompose", help="decomposition of a polyhedral product or join"))
    p.add_argument("--flavor", default="product", choices=("product", "join"))
    p.add_argument("--pair", dest="pairs", action="append", default=[], help="catalog name or pair file; repeat per vertex")
    p = common(sub.add_parser("join", help="polyhedral join or composition complex and its homology"))
    p.add_argument("--pair", dest="pairs", action="append", default=[])
    p.add_argument("--compose", action="append", default=[], help="complex file L_k; repeat per vertex")
    p = common(sub.add_parser("ring", help="total cohomology ring structure constants"), coeffs="q")
    p.add_argument("--family", default="universal")
    p.add_argument("--universe", choices=("xm", "rm", "lm"))
    p.add_argument("--pair", help="polyhedral product ring for a catalog pair instead of a total ring")
    p = common(sub.add_parser("hochster", help="Tor of a face ideal against the Hochster sum"), coeffs="f2")
    p.add_argument("--r", help="exponent vector, e.g. 1,2,1")
    p.add_argument("--ideal", help="file with one exponent vector per line")
    p.add_argument("--module", default="ideal", choices=("ideal", "quotient"))
    p = common(sub.add_parser("dual", help="Alexander dual and duality certificates"))
    p.add_argument("--verify", action="store_true")
    p = sub.add_parser("verify", help="run the cross-oracle suites")
    p.add_argument("--suite", dest="suites", action="append", default=[], help=f"one of {', '.join(SUITES)} or all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--format", dest="fmt", default="table", choices=("table", "json", "csv"))
    return ap


def config_from_args(ns: argparse.Namespace) -> JobConfig:
    d = vars(ns).copy()
    cfg = JobConfig(d.pop("subcommand"))
    for key in ("inputs", "coeffs", "universe", "family", "flavor", "pairs", "seed", "fmt"):
        if key in d:
            setattr(cfg, key, d.pop(key))
    cfg.options = {k: v for k, v in d.items() if v not in (None, [], False)}
    return cfg


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    try:
        status, text = run(cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        print(json.dumps({"reproduce": asdict(cfg)}, sort_keys=True), file=sys.stderr)
        return EXIT_INVARIANT
    except (NotSplitError, ComplexError, NotImplementedError, ValueError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
