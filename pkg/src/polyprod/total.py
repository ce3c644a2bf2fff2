"""Total (co)chain complexes of a simplicial complex and its local homology groups.

Every vertex ``k`` of ``[m]`` carries one of four atom symbols ``e, n̄, n, i``
(``|n̄| = 1``, the rest degree 0, ``d n̄ = n``).  A generator of the total complex
is a partition ``[m] = E ⊔ N̄ ⊔ N ⊔ I`` and lives in block ``(σ, ω) = (E, N̄ ∪ N)``.
It belongs to ``T(K)`` exactly when ``E ∪ N̄ ∈ K``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .chains import ChainComplex, HomologySummary, InvariantViolation, chain_map_check, complex_homology, homology, simplicial_chain
from .complexes import IndexPair, SimplicialComplex, in_universe, index_pairs, local_complex
from .linalg import Coeffs, ZZ
from .subsets import bits, fmt, full, lex_key, submasks

ATOMS = ("e", "nbar", "n", "i")
ATOM_DEGREE = {"e": 0, "nbar": 1, "n": 0, "i": 0}


@dataclass(frozen=True, order=True)
class TotalGenerator:
    E: int
    Nbar: int
    N: int
    I: int

    @property
    def degree(self) -> int:
        return self.Nbar.bit_count()

    @property
    def pair(self) -> IndexPair:
        return IndexPair(self.E, self.Nbar | self.N)

    def atom(self, k: int) -> str:
        """Symbol at 0-based position ``k``."""
        b = 1 << k
        if self.E & b:
            return "e"
        if self.Nbar & b:
            return "nbar"
        if self.N & b:
            return "n"
        return "i"

    def word(self, m: int) -> str:
        short = {"e": "e", "nbar": "N", "n": "n", "i": "i"}
        return "".join(short[self.atom(k)] for k in range(m))

    def __repr__(self) -> str:
        return f"t(E={fmt(self.E)}, N̄={fmt(self.Nbar)}, N={fmt(self.N)}, I={fmt(self.I)})"


def generator(m: int, sigma: int, nbar: int, omega: int) -> TotalGenerator:
    return TotalGenerator(sigma, nbar, omega & ~nbar, full(m) & ~(sigma | omega))


def block_generators(K: SimplicialComplex, p: IndexPair) -> list[TotalGenerator]:
    """Generators of ``T^{σ,ω}(K)`` ordered by ``N̄`` (size, then lexicographic)."""
    if K.void or p.sigma not in K.faces:
        return []
    out = []
    for nbar in sorted(submasks(p.omega), key=lex_key):
        if p.sigma | nbar in K.faces:
            out.append(generator(K.m, p.sigma, nbar, p.omega))
    return out


def total_differential(t: TotalGenerator) -> dict[TotalGenerator, int]:
    """``d t`` from the atom tensor: position ``k ∈ N̄`` contributes ``(-1)^{#{j<k : j ∈ N̄}}``."""
    out = {}
    for pos, k in enumerate(bits(t.Nbar)):
        b = 1 << k
        out[TotalGenerator(t.E, t.Nbar & ~b, t.N | b, t.I)] = -1 if pos & 1 else 1
    return out


def block_chain(K: SimplicialComplex, p: IndexPair, coeffs: Coeffs = ZZ) -> ChainComplex:
    """The local chain complex ``T^{σ,ω}(K)`` built directly from generators."""
    gens = block_generators(K, p)
    basis: dict[int, list[TotalGenerator]] = {}
    for g in gens:
        basis.setdefault(g.degree, []).append(g)
    index = {g: i for lst in basis.values() for i, g in enumerate(lst)}
    boundary = {d: [{index[h]: s for h, s in total_differential(g).items()} for g in lst]
                for d, lst in basis.items()}
    return ChainComplex(basis, boundary, coeffs)


@dataclass
class TotalComplex:
    """``T^𝒟(K)`` as a single chain complex whose basis labels are ``TotalGenerator``s."""

    K: SimplicialComplex
    universe: str
    chain: ChainComplex
    blocks: dict[IndexPair, list[TotalGenerator]] = field(default_factory=dict)


def total_chain(K: SimplicialComplex, universe: str = "xm", coeffs: Coeffs = ZZ,
                pairs: Iterable[IndexPair] | None = None) -> TotalComplex:
    """Total chain complex on the index set (``xm``, ``rm``, ``lm`` or an explicit pair list)."""
    if pairs is None:
        pairs = index_pairs(K.m, universe)
    blocks = {}
    basis: dict[int, list[TotalGenerator]] = {}
    for p in pairs:
        gens = block_generators(K, p)
        if gens:
            blocks[p] = gens
            for g in gens:
                basis.setdefault(g.degree, []).append(g)
    index = {g: i for lst in basis.values() for i, g in enumerate(lst)}
    boundary = {d: [{index[h]: s for h, s in total_differential(g).items()} for g in lst]
                for d, lst in basis.items()}
    return TotalComplex(K, universe, ChainComplex(basis, boundary, coeffs), blocks)


def epsilon(K: SimplicialComplex, p: IndexPair) -> dict[int, TotalGenerator]:
    """``ε``: face ``N̄`` of ``K_{σ,ω}`` ↦ ``t_{σ, N̄, ω∖N̄, σ'}``."""
    L = local_complex(K, p)
    if L.void:
        return {}
    return {f: generator(K.m, p.sigma, f, p.omega) for f in L.faces}


def local_iso_to_suspension(K: SimplicialComplex, p: IndexPair, coeffs: Coeffs = ZZ) -> dict[int, TotalGenerator]:
    """The basis bijection ``ΣC̃(K_{σ,ω}) → T^{σ,ω}(K)``, checked to be a chain isomorphism."""
    eps = epsilon(K, p)
    src = simplicial_chain(local_complex(K, p), "suspended", coeffs)
    dst = block_chain(K, p, coeffs)
    if set(eps.values()) != {g for lst in dst.basis.values() for g in lst}:
        raise InvariantViolation(f"ε is not onto the block {p!r}")
    fmap = {}
    for d, lst in src.basis.items():
        idx = dst.index(d)
        fmap[d] = [{idx[eps[f]]: 1} for f in lst]
    chain_map_check(src, dst, fmap)
    return eps


@dataclass
class IndexedHomology:
    """Map ``IndexPair → HomologySummary``; absent entries are zero groups."""

    m: int
    entries: dict[IndexPair, HomologySummary]
    universe: str = "xm"
    coeffs: Coeffs = ZZ

    def __getitem__(self, p: IndexPair) -> HomologySummary:
        return self.entries.get(p, HomologySummary.zero(self.coeffs))

    def __iter__(self) -> Iterator[IndexPair]:
        return iter(sorted(self.entries, key=lambda q: (lex_key(q.omega), lex_key(q.sigma))))

    def support(self) -> list[IndexPair]:
        return list(self)

    def total(self) -> HomologySummary:
        acc = HomologySummary.zero(self.coeffs)
        for s in self.entries.values():
            acc = acc + s
        return acc

    def rows(self) -> list[dict]:
        out = []
        for p in self:
            for d, r, t in self.entries[p].groups:
                out.append({"sigma": fmt(p.sigma), "omega": fmt(p.omega), "degree": d,
                            "free_rank": r, "torsion": list(t)})
        return out


def local_homology(K: SimplicialComplex, p: IndexPair, coeffs: Coeffs = ZZ) -> HomologySummary:
    """``H^{σ,ω}(K) ≅ H̃_{*-1}(K_{σ,ω})``, via the suspended chains of the local complex."""
    return complex_homology(local_complex(K, p), "suspended", coeffs)


def local_homology_direct(K: SimplicialComplex, p: IndexPair, coeffs: Coeffs = ZZ) -> HomologySummary:
    return homology(block_chain(K, p, coeffs), coeffs)


def total_homology(K: SimplicialComplex, universe: str = "xm", coeffs: Coeffs = ZZ,
                   pairs: Iterable[IndexPair] | None = None, spot_check: int = 0) -> IndexedHomology:
    """Per-block total homology.  ``spot_check`` recomputes that many blocks from generators."""
    if pairs is None:
        pairs = index_pairs(K.m, universe)
    entries = {}
    checked = 0
    for p in pairs:
        if K.void or p.sigma not in K.faces:
            continue
        h = local_homology(K, p, coeffs)
        if checked < spot_check:
            checked += 1
            if local_homology_direct(K, p, coeffs) != h:
                raise InvariantViolation(f"block {p!r}: direct and suspended homology differ")
        if not h.is_zero():
            entries[p] = h
    return IndexedHomology(K.m, entries, universe, coeffs)


def restrict_universe(H: IndexedHomology, universe: str) -> IndexedHomology:
    return IndexedHomology(H.m, {p: h for p, h in H.entries.items() if in_universe(p, universe)},
                           universe, H.coeffs)


def boundary_simplex_expected(m: int, S: int, p: IndexPair) -> HomologySummary:
    """Closed form for ``H^{σ,ω}(∂Δ^S)``."""
    sigma, omega = p.sigma, p.omega
    if sigma & ~S or sigma == S:
        return HomologySummary.zero()
    if not omega & S:
        return HomologySummary.from_dict({0: (1, ())})
    if not (S & ~sigma) & ~omega:
        return HomologySummary.from_dict({S.bit_count() - sigma.bit_count() - 1: (1, ())})
    return HomologySummary.zero()


def simplex_expected(m: int, S: int, p: IndexPair) -> HomologySummary:
    """Closed form for ``H^{σ,ω}(Δ^S)``."""
    if not p.sigma & ~S and not p.omega & S:
        return HomologySummary.from_dict({0: (1, ())})
    return HomologySummary.zero()
