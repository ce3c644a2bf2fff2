"""Chain complexes with exact boundary matrices and their (co)homology."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Sequence

from .complexes import SimplicialComplex
from .linalg import Coeffs, ZZ, invariant_factors, rank, sparse_elimination, sparse_transpose
from .subsets import bits, lex_key


class InvariantViolation(AssertionError):
    """An internal consistency check failed (d∘d ≠ 0, a map is not a chain map, ...)."""


VARIANTS = ("plain", "reduced", "suspended")


@dataclass
class ChainComplex:
    """Graded free module with a differential of degree ``-1``.

    ``basis[d]`` lists the labels in degree ``d``.  ``boundary[d]`` has one sparse
    column per basis element of degree ``d``: ``{row index in degree d-1: coeff}``.
    Coefficients only matter when taking homology; the matrices are integral.
    """

    basis: dict[int, list[Hashable]]
    boundary: dict[int, list[dict[int, int]]]
    coeffs: Coeffs = ZZ
    check: bool = True
    _index: dict[int, dict[Hashable, int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.basis = {d: list(b) for d, b in self.basis.items() if b}
        for d in self.basis:
            self.boundary.setdefault(d, [dict() for _ in self.basis[d]])
        self.boundary = {d: cols for d, cols in self.boundary.items() if d in self.basis}
        if self.check:
            self.assert_dd_zero()

    @property
    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def rank_in(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    def index(self, d: int) -> dict[Hashable, int]:
        if d not in self._index:
            self._index[d] = {b: i for i, b in enumerate(self.basis.get(d, ()))}
        return self._index[d]

    def differential(self, d: int, x: dict[int, int]) -> dict[int, int]:
        """Apply ``∂_d`` to a sparse vector in degree ``d``."""
        out: dict[int, int] = {}
        cols = self.boundary.get(d, [])
        for i, a in x.items():
            for j, b in cols[i].items():
                v = out.get(j, 0) + a * b
                if v:
                    out[j] = v
                else:
                    out.pop(j, None)
        return out

    def assert_dd_zero(self):
        for d in self.degrees:
            if d - 1 not in self.basis:
                continue
            for i in range(self.rank_in(d)):
                img = self.differential(d - 1, self.boundary[d][i])
                if any(v for v in img.values()):
                    raise InvariantViolation(f"d∘d ≠ 0 on {self.basis[d][i]!r} in degree {d}")

    def is_zero(self) -> bool:
        return not self.basis

    def euler_characteristic(self) -> int:
        return sum((-1) ** (d % 2) * len(b) for d, b in self.basis.items())

    def with_coeffs(self, coeffs: Coeffs) -> "ChainComplex":
        return ChainComplex(self.basis, self.boundary, coeffs, check=False)

    def shift(self, k: int) -> "ChainComplex":
        return ChainComplex(
            {d + k: b for d, b in self.basis.items()},
            {d + k: cols for d, cols in self.boundary.items()},
            self.coeffs,
            check=False,
        )


@dataclass(frozen=True)
class HomologySummary:
    """Per-degree ``(free_rank, torsion)``; over a field the torsion lists are empty."""

    groups: tuple[tuple[int, int, tuple[int, ...]], ...]
    coeffs: Coeffs = ZZ

    @classmethod
    def from_dict(cls, data: dict[int, tuple[int, Sequence[int]]], coeffs: Coeffs = ZZ) -> "HomologySummary":
        items = []
        for d in sorted(data):
            r, t = data[d]
            t = tuple(sorted(t))
            if r or t:
                items.append((d, r, t))
        return cls(tuple(items), coeffs)

    @classmethod
    def zero(cls, coeffs: Coeffs = ZZ) -> "HomologySummary":
        return cls((), coeffs)

    def as_dict(self) -> dict[int, tuple[int, tuple[int, ...]]]:
        return {d: (r, t) for d, r, t in self.groups}

    def free_rank(self, d: int) -> int:
        return self.as_dict().get(d, (0, ()))[0]

    def torsion(self, d: int) -> tuple[int, ...]:
        return self.as_dict().get(d, (0, ()))[1]

    def invariant_factors(self, d: int) -> tuple[int, ...]:
        """Torsion factors followed by one ``0`` per free summand."""
        r, t = self.as_dict().get(d, (0, ()))
        return tuple(t) + (0,) * r

    def betti(self) -> dict[int, int]:
        return {d: r for d, r, _ in self.groups if r}

    def betti_list(self, lo: int = 0, hi: int | None = None) -> list[int]:
        b = self.betti()
        if hi is None:
            hi = max(b, default=lo - 1)
        return [b.get(d, 0) for d in range(lo, hi + 1)]

    def is_zero(self) -> bool:
        return not self.groups

    def total_rank(self) -> int:
        return sum(r for _, r, _ in self.groups)

    def shift(self, k: int) -> "HomologySummary":
        return HomologySummary(tuple((d + k, r, t) for d, r, t in self.groups), self.coeffs)

    def reflect(self, n: int) -> "HomologySummary":
        """Re-index degree ``d`` as ``n - d``."""
        return HomologySummary.from_dict({n - d: (r, t) for d, r, t in self.groups}, self.coeffs)

    def __add__(self, other: "HomologySummary") -> "HomologySummary":
        acc: dict[int, tuple[int, list[int]]] = {}
        for s in (self, other):
            for d, r, t in s.groups:
                r0, t0 = acc.get(d, (0, []))
                acc[d] = (r0 + r, t0 + list(t))
        return HomologySummary.from_dict(acc, self.coeffs)

    def to_json(self) -> list[dict]:
        return [{"degree": d, "free_rank": r, "torsion": list(t)} for d, r, t in self.groups]

    def __str__(self) -> str:
        if not self.groups:
            return "0"
        parts = []
        for d, r, t in self.groups:
            pieces = []
            if r:
                ring = {"z": "Z", "q": "Q"}.get(self.coeffs.name, f"F{self.coeffs.p}")
                pieces.append(ring if r == 1 else f"{ring}^{r}")
            pieces += [f"Z/{x}" for x in t]
            parts.append(f"{d}:" + "+".join(pieces))
        return " ".join(parts)


def _boundary_rows(C: ChainComplex, d: int) -> list[dict[int, int]]:
    # columns of ∂_d, fed to the eliminator as rows (invariant factors of M and Mᵀ agree)
    return C.boundary.get(d, [])


def homology(C: ChainComplex, coeffs: Coeffs | None = None) -> HomologySummary:
    coeffs = C.coeffs if coeffs is None else coeffs
    out = {}
    if coeffs.field:
        ranks = {d: rank(_boundary_rows(C, d), coeffs) for d in C.degrees}
        for d in C.degrees:
            out[d] = (C.rank_in(d) - ranks.get(d, 0) - ranks.get(d + 1, 0), ())
        return HomologySummary.from_dict(out, coeffs)
    facs = {d: invariant_factors(_boundary_rows(C, d)) for d in C.degrees}
    for d in C.degrees:
        nxt = facs.get(d + 1, [])
        out[d] = (C.rank_in(d) - len(facs.get(d, [])) - len(nxt), [f for f in nxt if f > 1])
    return HomologySummary.from_dict(out, coeffs)


def cohomology(C: ChainComplex, coeffs: Coeffs | None = None) -> HomologySummary:
    """Cohomology of ``Hom(C, R)`` computed from the transposed boundaries."""
    coeffs = C.coeffs if coeffs is None else coeffs
    # δ^{d-1}: C^{d-1} → C^d is the transpose of ∂_d; as rows we pass ∂_d's transpose columns
    cob = {d: sparse_transpose(_boundary_rows(C, d), C.rank_in(d - 1)) for d in C.degrees}
    out = {}
    if coeffs.field:
        ranks = {d: rank(cob[d], coeffs) for d in C.degrees}
        for d in C.degrees:
            out[d] = (C.rank_in(d) - ranks.get(d, 0) - ranks.get(d + 1, 0), ())
        return HomologySummary.from_dict(out, coeffs)
    facs = {d: invariant_factors(cob[d]) for d in C.degrees}
    for d in C.degrees:
        # H^d = ker δ^d / im δ^{d-1}; im δ^{d-1} comes from ∂_d
        out[d] = (C.rank_in(d) - len(facs.get(d, [])) - len(facs.get(d + 1, [])),
                  [f for f in facs.get(d, []) if f > 1])
    return HomologySummary.from_dict(out, coeffs)


# simplicial chains -----------------------------------------------------------


def face_chain(faces: Sequence[int], offset: int, coeffs: Coeffs = ZZ, check: bool = False) -> ChainComplex:
    """Chains on a downward-closed face list; face ``τ`` sits in degree ``|τ| + offset``.

    The boundary is ``∂τ = Σ_j (-1)^j (τ ∖ v_j)`` over the ascending vertices ``v_j``.
    """
    by_deg: dict[int, list[int]] = {}
    for f in sorted(faces, key=lex_key):
        by_deg.setdefault(f.bit_count() + offset, []).append(f)
    index = {f: i for fs in by_deg.values() for i, f in enumerate(fs)}
    boundary: dict[int, list[dict[int, int]]] = {}
    for d, fs in by_deg.items():
        cols = []
        has_lower = d - 1 in by_deg
        for f in fs:
            col: dict[int, int] = {}
            if has_lower:
                for j, b in enumerate(bits(f)):
                    g = f & ~(1 << b)
                    if g in index and g.bit_count() + offset == d - 1:
                        col[index[g]] = -1 if j & 1 else 1
            cols.append(col)
        boundary[d] = cols
    return ChainComplex(by_deg, boundary, coeffs, check=check)


def simplicial_chain(K: SimplicialComplex, variant: str = "plain", coeffs: Coeffs = ZZ) -> ChainComplex:
    """``plain``: face τ in degree ``|τ|-1`` without ∅; ``reduced``: with ∅ in degree -1;
    ``suspended``: the reduced complex shifted up by one, so τ sits in degree ``|τ|``."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown chain variant {variant!r}")
    if K.void:
        return ChainComplex({}, {}, coeffs)
    faces = [f for f in K.faces if f or variant != "plain"]
    return face_chain(faces, 0 if variant == "suspended" else -1, coeffs)


@lru_cache(maxsize=200_000)
def _cached_face_homology(faces: frozenset[int], offset: int, coeffs: Coeffs) -> HomologySummary:
    return homology(face_chain(list(faces), offset, coeffs), coeffs)


def complex_homology(K: SimplicialComplex, variant: str = "plain", coeffs: Coeffs = ZZ) -> HomologySummary:
    """Memoized homology of a simplicial complex (keyed by its face set)."""
    if K.void:
        return HomologySummary.zero(coeffs)
    if variant == "plain":
        faces = frozenset(f for f in K.faces if f)
        return _cached_face_homology(faces, -1, coeffs)
    offset = 0 if variant == "suspended" else -1
    return _cached_face_homology(K.faces, offset, coeffs)


def reduced_homology(K: SimplicialComplex, coeffs: Coeffs = ZZ) -> HomologySummary:
    return complex_homology(K, "reduced", coeffs)


def reduced_cohomology(K: SimplicialComplex, coeffs: Coeffs = ZZ) -> HomologySummary:
    if K.void:
        return HomologySummary.zero(coeffs)
    return cohomology(face_chain(list(K.faces), -1, coeffs), coeffs)


# tensor products ---------------------------------------------------------------


def tensor(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    """``C ⊗ D`` with ``d(a⊗b) = da⊗b + (-1)^{|a|} a⊗db``; labels are pairs."""
    if C.coeffs != D.coeffs:
        raise ValueError("tensor factors have different coefficients")
    basis: dict[int, list] = {}
    pos: dict[tuple, tuple[int, int]] = {}
    for p in C.degrees:
        for q in D.degrees:
            for i, a in enumerate(C.basis[p]):
                for j, b in enumerate(D.basis[q]):
                    lst = basis.setdefault(p + q, [])
                    pos[(p, i, q, j)] = (p + q, len(lst))
                    lst.append((a, b))
    boundary: dict[int, list[dict[int, int]]] = {d: [dict() for _ in lst] for d, lst in basis.items()}
    for (p, i, q, j), (d, k) in pos.items():
        col = boundary[d][k]
        for i2, v in C.boundary[p][i].items():
            _, k2 = pos[(p - 1, i2, q, j)]
            col[k2] = col.get(k2, 0) + v
        sign = -1 if p & 1 else 1
        for j2, v in D.boundary[q][j].items():
            _, k2 = pos[(p, i, q - 1, j2)]
            col[k2] = col.get(k2, 0) + sign * v
        for k2 in [k2 for k2, v in col.items() if not v]:
            del col[k2]
    return ChainComplex(basis, boundary, C.coeffs)


def chain_map_check(C: ChainComplex, D: ChainComplex, f: dict[int, list[dict[int, int]]], degree: int = 0):
    """Assert that ``f`` (sparse columns per degree) commutes with the differentials."""
    for d in C.degrees:
        fd = f.get(d, [dict() for _ in C.basis[d]])
        fd1 = f.get(d - 1, [dict() for _ in C.basis.get(d - 1, ())])
        for i in range(C.rank_in(d)):
            lhs = D.differential(d + degree, fd[i]) if d + degree in D.basis else {}
            rhs: dict[int, int] = {}
            for j, a in C.boundary[d][i].items():
                for k, b in fd1[j].items():
                    rhs[k] = rhs.get(k, 0) + a * b
            lhs = {k: v for k, v in lhs.items() if v}
            rhs = {k: v for k, v in rhs.items() if v}
            if lhs != rhs:
                raise InvariantViolation(f"map is not a chain map on {C.basis[d][i]!r}")


def betti_convolution(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def field_rank_of_columns(cols: list[dict[int, int]], coeffs: Coeffs) -> int:
    return len(sparse_elimination(cols, coeffs.p)) if coeffs.p else rank(cols, coeffs)
