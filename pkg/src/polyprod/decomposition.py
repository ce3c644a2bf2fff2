"""Homology split pairs and the diagonal-tensor decompositions of polyhedral products and joins.

For a pair ``(X, A)`` let ``θ: H(A) → H(X)`` be induced by inclusion.  The three
parts are ``e = coker θ``, ``n = ker θ`` and ``i = coim θ``.  In the decomposition,
coordinate ``k`` of block ``(σ, ω)`` uses the ``e`` part when ``k ∈ σ``, the ``n``
part when ``k ∈ ω`` and the ``i`` part otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .chains import ChainComplex, HomologySummary, complex_homology, reduced_homology, simplicial_chain
from .complexes import (IndexPair, PairSequence, SimplicialComplex, index_pairs, local_complex, local_pairs,
                        make_complex, polyhedral_join)
from .linalg import (Coeffs, ZZ, field_span_rank, integer_kernel, lattice_basis, lattice_intersection,
                     lattice_quotient, nullspace, to_field)
from .subsets import bits, full, submasks
from .total import IndexedHomology, local_homology, total_homology


class NotSplitError(ValueError):
    """A pair whose θ has a non-free kernel, cokernel or coimage."""


@dataclass
class SplitPairSummary:
    """Parts of ``θ: H(A) → H(X)`` for one pair and one chain variant."""

    variant: str
    coeffs: Coeffs
    e_part: HomologySummary
    n_part: HomologySummary
    i_part: HomologySummary
    theta_matrices: dict[int, list[list[int]]]
    split: bool

    @property
    def support(self) -> frozenset[str]:
        return frozenset(s for s, h in (("e", self.e_part), ("n", self.n_part), ("i", self.i_part))
                         if not h.is_zero())

    def part(self, symbol: str) -> HomologySummary:
        return {"e": self.e_part, "n": self.n_part, "i": self.i_part}[symbol]

    def is_epi(self) -> bool:
        return self.e_part.is_zero()


def _dense_columns(C: ChainComplex, d: int) -> list[list[int]]:
    """Boundary ``∂_d`` as a dense matrix (rows: degree d-1, columns: degree d)."""
    rows = C.rank_in(d - 1)
    M = [[0] * C.rank_in(d) for _ in range(rows)]
    for j, col in enumerate(C.boundary.get(d, [])):
        for i, v in col.items():
            M[i][j] = v
    return M


def _embed(vec: Sequence[int], src: list, dst_index: dict) -> list[int]:
    out = [0] * len(dst_index)
    for i, v in enumerate(vec):
        if v:
            out[dst_index[src[i]]] = v
    return out


def _cycles_and_boundaries(C: ChainComplex, d: int):
    n = C.rank_in(d)
    Z = integer_kernel(_dense_columns(C, d), n) if d - 1 in C.basis else [
        [1 if i == j else 0 for i in range(n)] for j in range(n)]
    B = [[col.get(i, 0) for i in range(n)] for col in C.boundary.get(d + 1, [])]
    return Z, B


def _integral_parts(X: ChainComplex, A: ChainComplex):
    e, nn, ii, thetas = {}, {}, {}, {}
    for d in sorted(set(X.degrees) | set(A.degrees)):
        N = X.rank_in(d)
        idx = X.index(d)
        ZX, BX = _cycles_and_boundaries(X, d) if d in X.basis else ([], [])
        if d in A.basis:
            ZA0, BA0 = _cycles_and_boundaries(A, d)
            ZA = [_embed(v, A.basis[d], idx) for v in ZA0]
            BA = [_embed(v, A.basis[d], idx) for v in BA0]
        else:
            ZA, BA = [], []
        e[d] = lattice_quotient(ZX, BX + ZA, N) if N else (0, [])
        nn[d] = lattice_quotient(lattice_intersection(ZA, BX, N) + BA, BA, N) if N else (0, [])
        ii[d] = lattice_quotient(ZA + BX, BX, N) if N else (0, [])
        # θ in cycle-basis coordinates: columns are images of Z_A basis vectors in a basis of Z_X
        if ZX and ZA:
            LB = lattice_basis(ZX, N)
            thetas[d] = [LB.coordinates(v) for v in ZA]
        else:
            thetas[d] = []
    return e, nn, ii, thetas


def _field_parts(X: ChainComplex, A: ChainComplex, F: Coeffs):
    e, nn, ii = {}, {}, {}
    for d in sorted(set(X.degrees) | set(A.degrees)):
        N = X.rank_in(d)
        if not N:
            continue
        idx = X.index(d)
        ZX = nullspace(_dense_columns(X, d), F, N) if d - 1 in X.basis else [
            [F.convert(1 if i == j else 0) for i in range(N)] for j in range(N)]
        BX = [[F.convert(col.get(i, 0)) for i in range(N)] for col in X.boundary.get(d + 1, [])]
        ZA, BA = [], []
        if d in A.basis:
            nA = A.rank_in(d)
            ZA0 = nullspace(_dense_columns(A, d), F, nA) if d - 1 in A.basis else [
                [F.convert(1 if i == j else 0) for i in range(nA)] for j in range(nA)]
            ZA = [_embed(v, A.basis[d], idx) for v in ZA0]
            BA = [[F.convert(x) for x in _embed([col.get(i, 0) for i in range(nA)], A.basis[d], idx)]
                  for col in A.boundary.get(d + 1, [])]
        zx, bx = field_span_rank(ZX, F), field_span_rank(BX, F)
        za, ba = field_span_rank(ZA, F), field_span_rank(BA, F)
        s = field_span_rank(ZA + BX, F)
        e[d] = (zx - s, [])
        ii[d] = (s - bx, [])
        nn[d] = (za + bx - s - ba, [])
    return e, nn, ii


@lru_cache(maxsize=50_000)
def _split_cached(xf: frozenset, xv: bool, af: frozenset, av: bool, m: int, variant: str, coeffs: Coeffs):
    X = SimplicialComplex(m, xf, xv)
    A = SimplicialComplex(m, af, av)
    CX = simplicial_chain(X, variant, coeffs)
    CA = simplicial_chain(A, variant, coeffs)
    if coeffs.field:
        e, nn, ii = _field_parts(CX, CA, coeffs)
        thetas = {}
    else:
        e, nn, ii, thetas = _integral_parts(CX, CA)
    es = HomologySummary.from_dict(e, coeffs)
    ns = HomologySummary.from_dict(nn, coeffs)
    is_ = HomologySummary.from_dict(ii, coeffs)
    split = all(not t for s in (es, ns, is_) for _, _, t in s.groups)
    return SplitPairSummary(variant, coeffs, es, ns, is_, thetas, split)


def split_summary(X: SimplicialComplex, A: SimplicialComplex, variant: str = "plain",
                  coeffs: Coeffs = ZZ) -> SplitPairSummary:
    """θ and its three parts for the simplicial pair ``(X, A)`` in the given chain variant."""
    if A.m != X.m or not A.faces <= X.faces:
        raise ValueError("A must be a subcomplex of X on the same ground set")
    return _split_cached(X.faces, X.void, A.faces, A.void, X.m, variant, coeffs)


# tensor products of summaries -------------------------------------------------


def tensor_summaries(a: HomologySummary, b: HomologySummary) -> HomologySummary:
    """``a ⊗ b`` for groups where at most one factor has torsion (no Tor terms arise)."""
    acc: dict[int, tuple[int, list[int]]] = {}
    for d1, r1, t1 in a.groups:
        for d2, r2, t2 in b.groups:
            if t1 and t2:
                raise NotSplitError("tensor of two groups with torsion would need Tor terms")
            d = d1 + d2
            r0, tor = acc.get(d, (0, []))
            r0 += r1 * r2
            tor = tor + list(t1) * r2 + list(t2) * r1
            acc[d] = (r0, tor)
    return HomologySummary.from_dict(acc, a.coeffs)


def unit_summary(coeffs: Coeffs) -> HomologySummary:
    return HomologySummary.from_dict({0: (1, ())}, coeffs)


@dataclass
class DecompositionResult:
    """Summands ``H^{σ,ω}(K) ⊗ H_1 ⊗ ... ⊗ H_m`` per block plus their total."""

    flavor: str
    coeffs: Coeffs
    blocks: dict[IndexPair, HomologySummary] = field(default_factory=dict)

    @property
    def total(self) -> HomologySummary:
        acc = HomologySummary.zero(self.coeffs)
        for h in self.blocks.values():
            acc = acc + h
        return acc

    def rows(self) -> list[dict]:
        from .subsets import fmt, lex_key
        out = []
        for p in sorted(self.blocks, key=lambda q: (lex_key(q.omega), lex_key(q.sigma))):
            for d, r, t in self.blocks[p].groups:
                out.append({"sigma": fmt(p.sigma), "omega": fmt(p.omega), "degree": d,
                            "free_rank": r, "torsion": list(t)})
        return out


def support_pairs(m: int, supports: Sequence[frozenset[str]]) -> list[IndexPair]:
    """The product of supports as index pairs: ``e`` ↦ σ, ``n`` ↦ ω, ``i`` ↦ neither."""
    out = []
    for choice in itertools.product(*[sorted(s) for s in supports]):
        sigma = omega = 0
        for k, s in enumerate(choice):
            if s == "e":
                sigma |= 1 << k
            elif s == "n":
                omega |= 1 << k
        out.append(IndexPair(sigma, omega))
    return out


def _symbol(p: IndexPair, k: int) -> str:
    if p.sigma >> k & 1:
        return "e"
    if p.omega >> k & 1:
        return "n"
    return "i"


def decompose(K: SimplicialComplex, pairs: PairSequence, flavor: str = "product", coeffs: Coeffs = ZZ,
              universe: Iterable[IndexPair] | str | None = None) -> DecompositionResult:
    """Right side of the decomposition theorem.

    ``product`` uses plain homology of the pairs and matches the plain homology of the
    staircase polyhedral product.  ``join`` uses suspended reduced chains and matches
    the suspended reduced homology of the polyhedral join (degree ``d`` ↔ ``H̃_{d-1}``).
    """
    if flavor not in ("product", "join"):
        raise ValueError(f"unknown flavor {flavor!r}")
    if K.m != pairs.m:
        raise ValueError(f"K lives on [{K.m}] but {pairs.m} pairs were given")
    variant = "plain" if flavor == "product" else "suspended"
    parts = [split_summary(X, A, variant, coeffs) for X, A in pairs.entries]
    for k, s in enumerate(parts):
        if not s.split:
            raise NotSplitError(f"pair {k + 1} is not homology split")
    result = DecompositionResult(flavor, coeffs)
    if K.void:
        return result
    if universe is None:
        D = support_pairs(K.m, [s.support for s in parts])
    elif isinstance(universe, str):
        D = index_pairs(K.m, universe)
    else:
        D = list(universe)
    for p in D:
        if p.sigma not in K.faces:
            continue
        h = local_homology(K, p, coeffs)
        if h.is_zero():
            continue
        for k, s in enumerate(parts):
            h = tensor_summaries(h, s.part(_symbol(p, k)))
            if h.is_zero():
                break
        if not h.is_zero():
            result.blocks[p] = h
    return result


# closed forms -----------------------------------------------------------------


def disk_pair_closed_form(K: SimplicialComplex, n: int, coeffs: Coeffs = ZZ) -> DecompositionResult:
    """``H_d(Z(K; D^n, S^{n-1})) = ⊕_{ω⊆[m]} H̃_{d-(n-1)|ω|-1}(K|_ω)`` (full ω-sum)."""
    if n < 1:
        raise ValueError("disk dimension must be at least 1")
    res = DecompositionResult("product", coeffs)
    if K.void:
        return res
    for omega in submasks(full(K.m)):
        h = reduced_homology(K.restrict(omega), coeffs)
        if not h.is_zero():
            res.blocks[IndexPair(0, omega)] = h.shift((n - 1) * omega.bit_count() + 1)
    return res


def sphere_pair_closed_form(K: SimplicialComplex, r: int, p: int, flavor: str = "product",
                            coeffs: Coeffs = ZZ) -> DecompositionResult:
    """Closed forms for ``(S^r, S^p)``, ``0 ≤ p < r``.

    ``product``: ``H_d = ⊕_{(σ,ω)} H̃_{d-r|σ|-p|ω|-1}(K_{σ,ω})``.
    ``join``: ``H̃_d(Z*) = ⊕_{σ∈K} H̃_{d-r|σ|-p(m-|σ|)-m}(link σ)`` (reduced degrees).
    """
    if not 0 <= p < r:
        raise ValueError("need 0 <= p < r")
    res = DecompositionResult(flavor, coeffs)
    if K.void:
        return res
    m = K.m
    if flavor == "product":
        for q in index_pairs(m):
            L = local_complex(K, q)
            if L.void:
                continue
            h = reduced_homology(L, coeffs)
            if not h.is_zero():
                res.blocks[q] = h.shift(r * q.sigma.bit_count() + p * q.omega.bit_count() + 1)
    elif flavor == "join":
        for sigma in K.faces:
            h = reduced_homology(K.link(sigma), coeffs)
            s = sigma.bit_count()
            if not h.is_zero():
                res.blocks[IndexPair(sigma, full(m) & ~sigma)] = h.shift(r * s + p * (m - s) + m)
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    return res


# pair catalog -----------------------------------------------------------------


def simplex_pair(n: int) -> tuple[SimplicialComplex, SimplicialComplex]:
    """``(Δ^{[n]}, ∂Δ^{[n]})``."""
    return SimplicialComplex.simplex(n), SimplicialComplex.simplex_boundary(n)


def disk_pair(n: int) -> tuple[SimplicialComplex, SimplicialComplex]:
    """``(D^n, S^{n-1}) = (Δ^{[n+1]}, ∂Δ^{[n+1]})``."""
    return simplex_pair(n + 1)


def sphere_pair(r: int, p: int) -> tuple[SimplicialComplex, SimplicialComplex]:
    """``S^r = ∂Δ^{[r+2]}`` containing ``S^p = ∂Δ^{[p+2]}`` on its first ``p+2`` vertices."""
    if not 0 <= p < r:
        raise ValueError("need 0 <= p < r")
    X = SimplicialComplex.simplex_boundary(r + 2)
    A = SimplicialComplex(r + 2, SimplicialComplex.simplex_boundary(r + 2, full(p + 2)).faces)
    return X, A


def cone_pair(L: SimplicialComplex) -> tuple[SimplicialComplex, SimplicialComplex]:
    """``(cone L, L)`` with apex ``m + 1``."""
    m = L.m + 1
    apex = 1 << L.m
    base = SimplicialComplex(m, L.faces, L.void)
    if L.void:
        return SimplicialComplex.from_masks(m, [apex]), base
    return SimplicialComplex(m, frozenset(L.faces | {f | apex for f in L.faces})), base


def parse_pair(name: str) -> tuple[SimplicialComplex, SimplicialComplex]:
    """Catalog names: ``disk1``, ``disk:n``, ``sphere:r:p``, ``simplex-boundary:n``."""
    parts = name.split(":")
    try:
        if parts[0] == "disk1" and len(parts) == 1:
            return disk_pair(1)
        if parts[0] == "disk" and len(parts) == 2:
            return disk_pair(int(parts[1]))
        if parts[0] == "sphere" and len(parts) == 3:
            return sphere_pair(int(parts[1]), int(parts[2]))
        if parts[0] == "simplex-boundary" and len(parts) == 2:
            return simplex_pair(int(parts[1]))
    except ValueError as exc:
        raise ValueError(f"bad pair {name!r}: {exc}") from None
    raise ValueError(f"unknown pair {name!r}")


# dense (total) version for polyhedral joins ----------------------------------------


def join_local_block(K: SimplicialComplex, pairs: PairSequence, p: IndexPair, coeffs: Coeffs = ZZ) -> HomologySummary:
    """``H^{σ̃,ω̃}(Z*(K; X, A))`` via the join decomposition of the local pairs."""
    return decompose(K, local_pairs(pairs, p), "join", coeffs).total


def join_total_homology(K: SimplicialComplex, pairs: PairSequence, universe: str | Iterable[IndexPair] = "xm",
                        coeffs: Coeffs = ZZ) -> IndexedHomology:
    """Total homology of the polyhedral join, assembled block by block from the pieces."""
    n = pairs.n
    pts = index_pairs(n, universe) if isinstance(universe, str) else list(universe)
    entries = {}
    for p in pts:
        h = join_local_block(K, pairs, p, coeffs)
        if not h.is_zero():
            entries[p] = h
    return IndexedHomology(n, entries, universe if isinstance(universe, str) else "custom", coeffs)


def composition_block_expected(K: SimplicialComplex, Ls: Sequence[SimplicialComplex], pairs: PairSequence,
                               p: IndexPair, coeffs: Coeffs = ZZ) -> HomologySummary:
    """Block of ``Z*(K; L)`` from the composition classification of each coordinate.

    ``ω_k ≠ ∅`` puts ``k`` in ω (part ``H^{σ_k,ω_k}(L_k)``); otherwise ``k ∈ σ`` when
    ``σ_k ∉ L_k`` and ``k`` is of ``i``-type when ``σ_k ∈ L_k``.
    """
    sig = pairs.split(p.sigma)
    om = pairs.split(p.omega)
    sigma = omega = 0
    h = None
    factors = []
    for k, (L, s, w) in enumerate(zip(Ls, sig, om)):
        if w:
            omega |= 1 << k
            factors.append(local_homology(L, IndexPair(s, w), coeffs))
        elif s not in L.faces:
            sigma |= 1 << k
    if K.void or sigma not in K.faces:
        return HomologySummary.zero(coeffs)
    h = local_homology(K, IndexPair(sigma, omega), coeffs)
    for f in factors:
        h = tensor_summaries(h, f)
    return h
