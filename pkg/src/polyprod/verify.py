"""Cross-oracle suites, one per acceptance criterion.

Every suite draws its inputs from a seeded generator, compares two independent
computations exactly and returns a ``SuiteResult``.  Failures keep a few
witnesses so a run can be reproduced from the report alone.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .chains import complex_homology
from .complexes import (IndexPair, SimplicialComplex, all_complexes, composition_complex, format_complex,
                        index_pairs, local_complex, pairs_of, polyhedral_product_complex)
from .decomposition import decompose, disk_pair, disk_pair_closed_form, parse_pair
from .duality import (composition_dual_identity, composition_law, dual_local_identity, gamma_certificate)
from .ideals import composition_tor_check, composition_ideal_identity, hochster_check
from .linalg import F2, QQ, ZZ
from .rings import (ATOM_COPRODUCTS, UNIVERSAL, ProductFamily, local_product, polygon_expected_corrected,
                    polygon_expected_literal, polygon_ring, polyhedral_ring_oracle, total_cohomology_ring)
from .sampling import random_complex, random_exponents, random_proper_complex
from .subsets import fmt, full
from .total import boundary_simplex_expected, local_homology, simplex_expected


@dataclass
class SuiteConfig:
    seed: int = 0
    n: int | None = None  # number of random instances, suite default when None
    m: int | None = None  # largest ground set, suite default when None


@dataclass
class SuiteResult:
    name: str
    criterion: int
    cases: int = 0
    failures: int = 0
    seconds: float = 0.0
    note: str = ""
    witnesses: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and self.failures == 0

    def fail(self, witness: str):
        self.failures += 1
        if len(self.witnesses) < 5:
            self.witnesses.append(witness)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.criterion} {self.name}: {self.cases - self.failures}/{self.cases} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {"name": self.name, "criterion": self.criterion, "passed": self.passed, "cases": self.cases,
                "failures": self.failures, "note": self.note, "witnesses": self.witnesses}


def _one_line(K: SimplicialComplex) -> str:
    return format_complex(K).strip().replace("\n", "; ")


# 1 -------------------------------------------------------------------------------------


def suite_decomposition(cfg: SuiteConfig) -> SuiteResult:
    """Staircase model of ``Z(K; D^1, S^0)`` against ``⊕_ω H̃_{*-1}(K|_ω)``."""
    res = SuiteResult("decomposition", 1)
    rng = random.Random(cfg.seed)
    top = cfg.m or 4
    ms = [m for m in (3, 4) if m <= top] or [top]
    X, A = disk_pair(1)
    for _ in range(cfg.n or 200):
        K = random_complex(rng.choice(ms), rng)
        direct = complex_homology(polyhedral_product_complex(K, pairs_of([(X, A)] * K.m)), "plain", ZZ)
        res.cases += 1
        if direct != disk_pair_closed_form(K, 1, ZZ).total:
            res.fail(_one_line(K))
    return res


# 2 -------------------------------------------------------------------------------------


def suite_join(cfg: SuiteConfig) -> SuiteResult:
    """Suspended homology of composition complexes against the join decomposition."""
    res = SuiteResult("join", 2)
    rng = random.Random(cfg.seed)
    top = min(cfg.m or 2, 2)
    for _ in range(cfg.n or 100):
        m = rng.randint(1, top)
        K = random_complex(m, rng)
        Ls = [random_proper_complex(rng.randint(1, 3), rng) for _ in range(m)]
        Z = composition_complex(K, Ls)
        direct = complex_homology(Z, "suspended", ZZ)
        expected = decompose(K, pairs_of((SimplicialComplex.simplex(L.m), L) for L in Ls), "join", ZZ).total
        res.cases += 1
        if direct != expected:
            res.fail(_one_line(K) + " | " + " | ".join(_one_line(L) for L in Ls))
    return res


# 3 -------------------------------------------------------------------------------------


def suite_hochster(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("hochster", 3)
    rng = random.Random(cfg.seed)
    top = cfg.m or 5
    for i in range(cfg.n or 200):
        m = rng.randint(1, top)
        K = random_complex(m, rng)
        if K.faces == SimplicialComplex.simplex(m).faces:
            K = SimplicialComplex.simplex_boundary(m) if m > 1 else SimplicialComplex.empty(1)
        r = (1,) * m if i % 2 == 0 else random_exponents(m, rng)
        for F in (QQ, F2):
            res.cases += 1
            if not hochster_check(K, r, F).match:
                res.fail(f"{_one_line(K)} r={r} {F.name}")
    return res


# 4 -------------------------------------------------------------------------------------


def suite_duality(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("duality", 4)
    rng = random.Random(cfg.seed)
    top = cfg.m or 5
    for _ in range(cfg.n or 200):
        K = random_complex(rng.randint(1, top), rng)
        for p in index_pairs(K.m):
            if not p.omega:
                continue
            res.cases += 1
            if not dual_local_identity(K, p) or not gamma_certificate(K, p, ZZ, explicit=False).matched:
                res.fail(f"{_one_line(K)} sigma={fmt(p.sigma)} omega={fmt(p.omega)}")
    return res


# 5 -------------------------------------------------------------------------------------


def suite_composition(cfg: SuiteConfig) -> SuiteResult:
    """Dual of a composition complex and the composition law for polyhedral joins."""
    res = SuiteResult("composition", 5)
    rng = random.Random(cfg.seed)
    top = cfg.m or 3
    for _ in range(cfg.n or 100):
        m = rng.randint(1, top)
        K = random_complex(m, rng)
        Ls = [random_proper_complex(rng.randint(1, 3), rng) for _ in range(m)]
        res.cases += 1
        if not composition_dual_identity(K, Ls):
            res.fail("dual " + _one_line(K) + " | " + " | ".join(_one_line(L) for L in Ls))
        pairs = []
        inner = []
        for _ in range(m):
            n = rng.randint(1, 3)
            X = random_complex(n, rng)
            A = SimplicialComplex.from_masks(n, [f for f in X.sorted_faces if rng.random() < 0.5])
            pairs.append((X, A))
            UC = []
            for _ in range(n):
                U = random_complex(rng.randint(1, 2), rng, allow_void=True)
                C = U if U.void else SimplicialComplex.from_masks(U.m, [f for f in U.sorted_faces if rng.random() < 0.5])
                UC.append((U, C))
            inner.append(UC)
        res.cases += 1
        if not composition_law(K, pairs, inner):
            res.fail("law " + _one_line(K))
    return res


# 6 -------------------------------------------------------------------------------------


def _polygon_suite(cfg: SuiteConfig, expected: Callable, name: str, criterion: int) -> SuiteResult:
    res = SuiteResult(name, criterion)
    top = cfg.m or 8
    for m in range(4, max(top, 4) + 1):
        R = polygon_ring(m)
        T = R.table
        for (w1, i), x in sorted(R.h.items()):
            for (w2, j), y in sorted(R.h.items()):
                coeff, other = R.product_in_kappa(x, y)
                res.cases += 1
                if other or coeff != expected(m, w1, i, w2, j):
                    res.fail(f"m={m} h{fmt(w1)},{i} * h{fmt(w2)},{j} = {coeff} kappa, expected {expected(m, w1, i, w2, j)}")
        for x in list(R.h.values()) + [R.kappa]:
            res.cases += 2
            if T.product(x, R.kappa):
                res.fail(f"m={m} {T.basis[x].label} * kappa != 0")
            if T.product(R.kappa, x):
                res.fail(f"m={m} kappa * {T.basis[x].label} != 0")
    return res


def suite_polygon(cfg: SuiteConfig) -> SuiteResult:
    """The printed m-gon products in the component basis."""
    res = _polygon_suite(cfg, polygon_expected_literal, "polygon", 6)
    res.note = "printed formula; see polygon-corrected for the values forced by the local product"
    return res


def suite_polygon_corrected(cfg: SuiteConfig) -> SuiteResult:
    return _polygon_suite(cfg, polygon_expected_corrected, "polygon-corrected", 6)


# 7 -------------------------------------------------------------------------------------


def suite_ring_oracle(cfg: SuiteConfig) -> SuiteResult:
    """Strictly normal right ring against the Alexander-Whitney ring of the staircase model."""
    res = SuiteResult("ring-oracle", 7)
    top = cfg.m or 3
    fam = ProductFamily("strictly_normal", True)
    for m in range(1, top + 1):
        for K in all_complexes(m, include_void=False):
            for F in (F2, QQ):
                A = total_cohomology_ring(K, fam, "rm", F)
                B = polyhedral_ring_oracle(K, "disk:1", F)
                res.cases += 1
                if A.betti() != B.betti() or A.rank_profile() != B.rank_profile():
                    res.fail(f"{_one_line(K)} {F.name}")
    return res


# 8 -------------------------------------------------------------------------------------


def suite_tables(cfg: SuiteConfig) -> SuiteResult:
    """Partiality of every product table and the algebra laws of two families."""
    res = SuiteResult("tables", 8)
    top = cfg.m or 3
    fams = [ProductFamily(n, r) for n in ATOM_COPRODUCTS for r in (False, True)]
    for m in range(1, top + 1):
        P = index_pairs(m, "xm")
        for K in all_complexes(m, include_void=False):
            live = [p for p in P if p.sigma in K.faces]
            for p in live:
                for p1 in live:
                    for p2 in live:
                        U = local_product(K, p1, p2, p, UNIVERSAL)
                        for f in fams:
                            if f.right and (p.sigma or p1.sigma or p2.sigma):
                                continue
                            res.cases += 1
                            L = local_product(K, p1, p2, p, f)
                            if L and L != U:
                                res.fail(f"{f.label} {_one_line(K)} {p1!r} {p2!r} {p!r}")
            for name in ("strictly_normal", "special"):
                for right in (False, True):
                    f = ProductFamily(name, right)
                    R = total_cohomology_ring(K, f, f.default_universe, QQ)
                    res.cases += 1
                    if not (R.is_associative() and R.is_graded_commutative() and R.is_unital()):
                        res.fail(f"laws {f.label} {_one_line(K)}")
    return res


# 9 -------------------------------------------------------------------------------------


def suite_closed_forms(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("closed-forms", 9)
    top = cfg.m or 4
    for m in range(1, top + 1):
        for S in range(1, full(m) + 1):
            B = SimplicialComplex.simplex_boundary(m, S)
            D = SimplicialComplex.simplex(m, S)
            for p in index_pairs(m):
                res.cases += 2
                if local_homology(B, p, ZZ) != boundary_simplex_expected(m, S, p):
                    res.fail(f"boundary S={fmt(S)} {p!r}")
                if local_homology(D, p, ZZ) != simplex_expected(m, S, p):
                    res.fail(f"simplex S={fmt(S)} {p!r}")
        E = SimplicialComplex.empty(m)
        for p in index_pairs(m):
            if p.sigma:
                continue
            res.cases += 1
            if local_homology(E, p, ZZ).betti() != {0: 1}:
                res.fail(f"empty complex {p!r}")
    from .rings import polygon
    K = polygon(4)
    expected = [1, 0, 0, 2, 0, 0, 1]
    for label, h in (("closed form", disk_pair_closed_form(K, 2, ZZ).total),
                     ("decomposition", decompose(K, pairs_of([parse_pair("disk:2")] * 4), "product", ZZ).total)):
        res.cases += 1
        if h.betti_list(0, 6) != expected or any(h.torsion(d) for d in range(7)):
            res.fail(f"4-gon disk:2 {label} gives {h.betti_list(0, 6)}")
    return res


# 10 ------------------------------------------------------------------------------------


def suite_ideals(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("ideals", 10)
    rng = random.Random(cfg.seed)
    top = cfg.m or 2
    for _ in range(cfg.n or 50):
        m = rng.randint(1, top)
        K = random_proper_complex(m, rng)  # K = Δ would make the right side the ideal of { }
        Ls = [random_proper_complex(rng.randint(1, 3), rng) for _ in range(m)]
        rs = [random_exponents(L.m, rng, 2) for L in Ls]
        res.cases += 1
        rep = composition_ideal_identity(K, Ls, rs)
        if not rep.equal:
            res.fail(f"ideal {_one_line(K)} r={rs}")
            continue
        res.cases += 1
        left, right = composition_tor_check(K, Ls, rs, F2)
        if left != right:
            res.fail(f"tor {_one_line(K)} r={rs}")
    return res


SUITES: dict[str, Callable[[SuiteConfig], SuiteResult]] = {
    "decomposition": suite_decomposition,
    "join": suite_join,
    "hochster": suite_hochster,
    "duality": suite_duality,
    "composition": suite_composition,
    "polygon": suite_polygon,
    "polygon-corrected": suite_polygon_corrected,
    "ring-oracle": suite_ring_oracle,
    "tables": suite_tables,
    "closed-forms": suite_closed_forms,
    "ideals": suite_ideals,
}


def run_suite(name: str, cfg: SuiteConfig | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cfg = cfg or SuiteConfig()
    t0 = time.perf_counter()
    res = SUITES[name](cfg)
    res.seconds = time.perf_counter() - t0
    return res
