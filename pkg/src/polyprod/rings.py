"""Products on total cohomology and an Alexander-Whitney oracle.

Each product family is given by an atom coproduct ``ψ`` on the four symbols
``e, n̄, n, i``.  The coproduct of a total generator is the tensor power
``ψ^{⊗m}`` with the Koszul sign ``(-1)^{#{j<k : t''_j = n̄, t'_k = n̄}}``, which is
the shuffle sign ``⟨N̄', N̄''⟩``.  Products of cochains are its transpose.

For a fixed triple of blocks every atom coproduct restricts to at most one
term per coordinate, so the local coproduct of a generator is a single
signed tensor or zero.  ``local_coproduct`` computes it coordinate by
coordinate; ``coproduct_terms`` expands the full tensor power and is kept as
the brute-force reference.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .chains import ChainComplex, InvariantViolation, simplicial_chain
from .complexes import (IndexPair, SimplicialComplex, composition_complex, in_universe, index_pairs,
                        polyhedral_product_complex, pairs_of)
from .linalg import Coeffs, QQ, nullspace, rref
from .subsets import bits, fmt, full, lex_key, shuffle_sign
from .total import TotalGenerator, block_chain, block_generators

FAMILIES = ("universal", "normal", "strictly_normal", "special", "weakly_special")

_I, _N, _B, _E = "i", "n", "nbar", "e"

ATOM_COPRODUCTS: dict[str, dict[str, tuple[tuple[str, str], ...]]] = {
    "universal": {
        _I: ((_I, _I), (_I, _N), (_N, _I), (_N, _N)),
        _N: ((_N, _N), (_N, _I), (_I, _N)),
        _B: ((_B, _N), (_B, _I), (_I, _B), (_E, _E), (_E, _I), (_I, _E), (_I, _I)),
        _E: ((_E, _E), (_E, _I), (_I, _E), (_I, _I)),
    },
    "normal": {
        _I: ((_I, _I), (_I, _N), (_N, _I), (_N, _N)),
        _N: ((_N, _N), (_N, _I), (_I, _N)),
        _B: ((_B, _N), (_B, _I), (_I, _B)),
        _E: ((_E, _E), (_E, _I), (_I, _E), (_I, _I)),
    },
    "strictly_normal": {
        _I: ((_I, _I),),
        _N: ((_N, _N), (_N, _I), (_I, _N)),
        _B: ((_B, _N), (_B, _I), (_I, _B)),
        _E: ((_E, _E), (_E, _I), (_I, _E)),
    },
    "special": {
        _I: ((_I, _I),),
        _N: ((_N, _I), (_I, _N)),
        _B: ((_B, _I), (_I, _B)),
        _E: ((_E, _I), (_I, _E)),
    },
    "weakly_special": {
        _I: ((_I, _I),),
        _N: ((_N, _I), (_I, _N)),
        _B: ((_B, _I), (_I, _B), (_I, _I)),
        _E: ((_E, _I), (_I, _E)),
    },
    # strictly normal on i, n, n̄ with a primitive e: the atom coproduct of (S^2, S^0),
    # where e is the top class of S^2 and cannot split as e⊗e
    "strictly_normal_primitive": {
        _I: ((_I, _I),),
        _N: ((_N, _N), (_N, _I), (_I, _N)),
        _B: ((_B, _N), (_B, _I), (_I, _B)),
        _E: ((_E, _I), (_I, _E)),
    },
}

_CLASS = {_E: "e", _B: "w", _N: "w", _I: "i"}


@dataclass(frozen=True)
class ProductFamily:
    """One of the five atom coproducts, optionally in its right variant (``ψ'(e) = 0``)."""

    name: str
    right: bool = False

    def __post_init__(self):
        if self.name not in ATOM_COPRODUCTS:
            raise ValueError(f"unknown product family {self.name!r}")

    @classmethod
    def parse(cls, text: str) -> "ProductFamily":
        """``universal``, ``right_universal``, ``strictly-normal``, ``special'`` and so on."""
        t = text.strip().lower().replace("-", "_")
        right = False
        if t.startswith("right_"):
            right, t = True, t[len("right_"):]
        if t.endswith("'"):
            right, t = True, t[:-1]
        return cls(t, right)

    @property
    def label(self) -> str:
        return ("right_" if self.right else "") + self.name

    def terms(self, atom: str) -> tuple[tuple[str, str], ...]:
        out = ATOM_COPRODUCTS[self.name][atom]
        if self.right:
            if atom == _E:
                return ()
            out = tuple(t for t in out if _E not in t)
        return out

    @property
    def default_universe(self) -> str:
        return "rm" if self.right else "xm"

    @property
    def degree_preserving(self) -> bool:
        return all(sum(a == _B for a in t) == (atom == _B) for atom in (_I, _N, _B, _E) for t in self.terms(atom))


UNIVERSAL = ProductFamily("universal")


def _term_table(family: ProductFamily) -> dict[tuple[str, str, str], tuple[str, str]]:
    """``(atom, class', class'') → (atom', atom'')``; raises if a class triple is ambiguous."""
    table = {}
    for atom in (_I, _N, _B, _E):
        for a1, a2 in family.terms(atom):
            key = (atom, _CLASS[a1], _CLASS[a2])
            if key in table:
                raise InvariantViolation(f"{family.label}: {key} is not a base inclusion")
            table[key] = (a1, a2)
    return table


_TABLES: dict[ProductFamily, dict] = {}


def term_table(family: ProductFamily) -> dict[tuple[str, str, str], tuple[str, str]]:
    if family not in _TABLES:
        _TABLES[family] = _term_table(family)
    return _TABLES[family]


def _pair_class(p: IndexPair, k: int) -> str:
    if p.sigma >> k & 1:
        return "e"
    if p.omega >> k & 1:
        return "w"
    return "i"


def _make_generator(m: int, atoms: Sequence[str]) -> TotalGenerator:
    E = B = N = I = 0
    for k, a in enumerate(atoms):
        b = 1 << k
        if a == _E:
            E |= b
        elif a == _B:
            B |= b
        elif a == _N:
            N |= b
        else:
            I |= b
    return TotalGenerator(E, B, N, I)


# brute force: the full tensor power ------------------------------------------------


def coproduct_terms(t: TotalGenerator, m: int, family: ProductFamily) -> dict[tuple[TotalGenerator, TotalGenerator], int]:
    """``ψ^{⊗m}(t)`` expanded term by term, with the Koszul sign."""
    choices = [family.terms(t.atom(k)) for k in range(m)]
    out: dict[tuple[TotalGenerator, TotalGenerator], int] = {}
    for combo in itertools.product(*choices):
        t1 = _make_generator(m, [c[0] for c in combo])
        t2 = _make_generator(m, [c[1] for c in combo])
        # (-1)^{#{j<k : t''_j = n̄, t'_k = n̄}}
        s = 0
        seen2 = 0
        for c in combo:
            if c[0] == _B:
                s += seen2
            if c[1] == _B:
                seen2 += 1
        key = (t1, t2)
        out[key] = out.get(key, 0) + (-1 if s & 1 else 1)
    return {k: v for k, v in out.items() if v}


# local coproducts --------------------------------------------------------------------


def class_admissible(family: ProductFamily, p1: IndexPair, p2: IndexPair, p: IndexPair, m: int) -> bool:
    """True when every coordinate's class triple occurs in the family's atom table.

    This is necessary for a nonzero local coproduct; membership conditions in
    ``K`` are checked generator by generator.
    """
    table = term_table(family)
    allowed = _class_triples(family)
    top = full(m)
    cls_masks = lambda q: {"e": q.sigma, "w": q.omega, "i": top & ~(q.sigma | q.omega)}
    a, a1, a2 = cls_masks(p), cls_masks(p1), cls_masks(p2)
    for c in "ewi":
        for c1 in "ewi":
            for c2 in "ewi":
                if (c, c1, c2) not in allowed and a[c] & a1[c1] & a2[c2]:
                    return False
    del table
    return True


_ALLOWED: dict[ProductFamily, frozenset] = {}


def _class_triples(family: ProductFamily) -> frozenset:
    if family not in _ALLOWED:
        _ALLOWED[family] = frozenset((_CLASS[atom], c1, c2) for atom, c1, c2 in term_table(family))
    return _ALLOWED[family]


def local_coproduct(K: SimplicialComplex, p: IndexPair, p1: IndexPair, p2: IndexPair,
                    family: ProductFamily = UNIVERSAL,
                    gens: Sequence[TotalGenerator] | None = None) -> list[tuple[TotalGenerator, TotalGenerator, TotalGenerator, int]]:
    """``(ψ_K)^{p}_{p1,p2}`` as a list of ``(t, t', t'', sign)`` with ``ψ(t) ∋ sign · t' ⊗ t''``.

    ``gens`` may pass the generators of block ``p`` when they are already known.
    """
    m = K.m
    if not class_admissible(family, p1, p2, p, m):
        return []
    table = term_table(family)
    c1 = [_pair_class(p1, k) for k in range(m)]
    c2 = [_pair_class(p2, k) for k in range(m)]
    out = []
    for t in block_generators(K, p) if gens is None else gens:
        a1, a2 = [], []
        for k in range(m):
            hit = table.get((t.atom(k), c1[k], c2[k]))
            if hit is None:
                break
            a1.append(hit[0])
            a2.append(hit[1])
        else:
            t1 = _make_generator(m, a1)
            t2 = _make_generator(m, a2)
            if (t1.E | t1.Nbar) not in K.faces or (t2.E | t2.Nbar) not in K.faces:
                raise InvariantViolation("coproduct left T(K)")
            out.append((t, t1, t2, shuffle_sign(t1.Nbar, t2.Nbar)))
    return out


def local_product(K: SimplicialComplex, p1: IndexPair, p2: IndexPair, p: IndexPair,
                  family: ProductFamily = UNIVERSAL) -> dict[tuple[int, int], dict[int, int]]:
    """Local product ``T*_{p1} ⊗ T*_{p2} → T*_p`` on faces of the local complexes.

    Keys are ``(τ', τ'')`` (the ``N̄`` masks of the source generators) and values map
    ``τ`` to the coefficient.  This is the transpose of ``local_coproduct``.
    """
    for q in (p1, p2, p):
        if family.right and q.sigma:
            raise ValueError(f"{q!r} is outside the right universe of {family.label}")
    out: dict[tuple[int, int], dict[int, int]] = {}
    for t, t1, t2, s in local_coproduct(K, p, p1, p2, family):
        out.setdefault((t1.Nbar, t2.Nbar), {})[t.Nbar] = s
    return out


def local_product_formula(K: SimplicialComplex, p1: IndexPair, p2: IndexPair, p: IndexPair,
                          strict: bool = True) -> dict[tuple[int, int], dict[int, int]]:
    """The closed formula for the universal local product.

    If ``(σ'∪σ'')∖σ ⊆ ω∖(ω'∪ω'') ∈ K`` then ``τ' ⊗ τ'' ↦ ⟨τ',τ''⟩ Σ τ`` over the faces
    ``τ`` of ``K_{σ,ω}`` with ``τ' = τ ∩ (ω'∖(σ'∪σ''))`` and
    ``τ'' = τ ∩ ((ω''∖ω')∖(σ'∪σ''))``.  With ``strict`` two conditions forced by the
    atoms are added: ``σ ∩ (ω'∪ω'') = ∅`` (``e`` never splits off an ``n``) and
    ``τ ⊇ ω∖(ω'∪ω'')`` (``n`` never splits as ``i⊗i``).  Without ``strict`` the
    formula is taken literally.
    """
    sigma, omega = p.sigma, p.omega
    s1, w1, s2, w2 = p1.sigma, p1.omega, p2.sigma, p2.omega
    rest = omega & ~(w1 | w2)
    if (s1 | s2) & ~sigma & ~rest or rest not in K.faces:
        return {}
    if strict and sigma & (w1 | w2):
        return {}
    if K.void or sigma not in K.faces:
        return {}
    L1 = {f for f in block_faces(K, p1)}
    L2 = {f for f in block_faces(K, p2)}
    out: dict[tuple[int, int], dict[int, int]] = {}
    c1 = w1 & ~(s1 | s2)
    c2 = (w2 & ~w1) & ~(s1 | s2)
    for tau in block_faces(K, p):
        if strict and rest & ~tau:
            continue
        a, b = tau & c1, tau & c2
        if a in L1 and b in L2:
            out.setdefault((a, b), {})[tau] = shuffle_sign(a, b)
    return out


def block_faces(K: SimplicialComplex, p: IndexPair) -> list[int]:
    return [t.Nbar for t in block_generators(K, p)]


# admissibility tables as printed, and as derived from the atoms ------------------------


def table_condition(family: ProductFamily, p1: IndexPair, p2: IndexPair, p: IndexPair, K: SimplicialComplex,
                    corrected: bool = False) -> bool:
    """When the family's local product equals the universal one (otherwise it is zero).

    The rows are the printed ones.  ``corrected`` adds ``ω'∪ω'' ⊆ ω`` to the
    weakly special row, which its atom table (``i ↦ i⊗i`` only) requires.
    """
    s, w, s1, w1, s2, w2 = p.sigma, p.omega, p1.sigma, p1.omega, p2.sigma, p2.omega
    name = family.name
    if name == "universal":
        rest = w & ~(w1 | w2)
        return not ((s1 | s2) & ~s & ~rest) and rest in K.faces
    if name == "normal":
        return not ((s1 | s2) & ~s) and not (w & ~(w1 | w2))
    if name == "strictly_normal":
        return (s1 | s2) == s and w == (w1 | w2)
    if name == "special":
        return (s1 | s2) == s and not (s1 & s2) and w == (w1 | w2) and not (w1 & w2)
    if name == "weakly_special":
        ok = (s1 | s2) == s and not (s1 & s2) and (w & ~(w1 | w2)) in K.faces and not (w1 & w2)
        if corrected:
            ok = ok and not ((w1 | w2) & ~w)
        return ok
    raise ValueError(name)


# cohomology bases --------------------------------------------------------------------


def _dense_boundary(C: ChainComplex, d: int, F: Coeffs) -> list[list]:
    rows = C.rank_in(d - 1)
    cols = C.rank_in(d)
    M = [[F.convert(0)] * cols for _ in range(rows)]
    for j, col in enumerate(C.boundary.get(d, [])):
        for i, v in col.items():
            M[i][j] = F.convert(v)
    return M


@dataclass
class CohomologyBasis:
    """Deterministic cocycle representatives of ``H^d`` for one cochain complex.

    Coboundaries are put in reduced row echelon form; cocycles are reduced modulo
    them and the survivors put in reduced row echelon form again.  Coordinates of
    a cocycle are read off at the pivot columns of the representatives.
    """

    degree: int
    size: int
    coeffs: Coeffs
    reps: list[list]
    b_rows: list[list]
    b_pivots: list[int]
    h_pivots: list[int]

    def _reduce(self, z: Sequence) -> list:
        F = self.coeffs
        v = [F.convert(a) for a in z]
        for row, pc in zip(self.b_rows, self.b_pivots):
            f = v[pc]
            if f:
                v = [F.reduce(a - f * b) for a, b in zip(v, row)]
        return v

    def coordinates(self, z: Sequence) -> list:
        v = self._reduce(z)
        coords = [v[pc] for pc in self.h_pivots]
        F = self.coeffs
        check = [F.convert(0)] * self.size
        for c, r in zip(coords, self.reps):
            if c:
                check = [F.reduce(a + c * b) for a, b in zip(check, r)]
        if check != v:
            raise InvariantViolation("vector is not a cocycle in the span of the basis")
        return coords


def cohomology_bases(C: ChainComplex, F: Coeffs) -> dict[int, CohomologyBasis]:
    if not F.field:
        raise ValueError("class arithmetic needs field coefficients")
    out = {}
    for d in C.degrees:
        n = C.rank_in(d)
        if d + 1 in C.basis:
            up = _dense_boundary(C, d + 1, F)  # rows: degree d, cols: degree d+1
            upT = [[up[i][j] for i in range(n)] for j in range(len(up[0]) if up else 0)]
            Z = nullspace(upT, F, n)
        else:
            Z = [[F.convert(1 if i == j else 0) for i in range(n)] for j in range(n)]
        if d - 1 in C.basis:
            Brows, Bp = rref(_dense_boundary(C, d, F), F, n)
        else:
            Brows, Bp = [], []
        basis = CohomologyBasis(d, n, F, [], Brows, Bp, [])
        red = [basis._reduce(z) for z in Z]
        red = [v for v in red if any(v)]
        H, Hp = rref(red, F, n) if red else ([], [])
        basis.reps, basis.h_pivots = H, Hp
        if H:
            out[d] = basis
    return out


def homology_bases(C: ChainComplex, F: Coeffs) -> dict[int, CohomologyBasis]:
    """Cycle representatives of ``H_d``, built like ``cohomology_bases`` with the roles of
    ``∂_d`` and ``∂_{d+1}`` exchanged."""
    if not F.field:
        raise ValueError("class arithmetic needs field coefficients")
    out = {}
    for d in C.degrees:
        n = C.rank_in(d)
        if d - 1 in C.basis:
            Z = nullspace(_dense_boundary(C, d, F), F, n)
        else:
            Z = [[F.convert(1 if i == j else 0) for i in range(n)] for j in range(n)]
        if d + 1 in C.basis:
            up = _dense_boundary(C, d + 1, F)
            upT = [[up[i][j] for i in range(n)] for j in range(len(up[0]) if up else 0)]
            Brows, Bp = rref(upT, F, n)
        else:
            Brows, Bp = [], []
        basis = CohomologyBasis(d, n, F, [], Brows, Bp, [])
        red = [v for v in (basis._reduce(z) for z in Z) if any(v)]
        H, Hp = rref(red, F, n) if red else ([], [])
        basis.reps, basis.h_pivots = H, Hp
        if H:
            out[d] = basis
    return out


# ring tables -------------------------------------------------------------------------


@dataclass
class BasisClass:
    pair: IndexPair | None
    degree: int
    label: str
    rep: dict[Hashable, object]


@dataclass
class RingTable:
    """Structure constants ``b_i · b_j = Σ_k c_k b_k`` on a list of basis classes."""

    basis: list[BasisClass]
    constants: dict[tuple[int, int], dict[int, object]]
    coeffs: Coeffs
    name: str = ""
    universe: str = ""

    def __len__(self) -> int:
        return len(self.basis)

    def product(self, i: int, j: int) -> dict[int, object]:
        return self.constants.get((i, j), {})

    def multiply(self, x: dict[int, object], y: dict[int, object]) -> dict[int, object]:
        F = self.coeffs
        out: dict[int, object] = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.product(i, j).items():
                    out[k] = F.reduce(out.get(k, 0) + a * b * c)
        return {k: v for k, v in out.items() if v}

    def degrees(self) -> list[int]:
        return sorted({b.degree for b in self.basis})

    def in_degree(self, d: int) -> list[int]:
        return [i for i, b in enumerate(self.basis) if b.degree == d]

    def multiplication_rank(self, d1: int, d2: int) -> int:
        """Dimension of the span of all products ``x · y`` with ``|x| = d1`` and ``|y| = d2``."""
        F = self.coeffs
        n = len(self.basis)
        rows = []
        for i in self.in_degree(d1):
            for j in self.in_degree(d2):
                v = self.product(i, j)
                if v:
                    row = [F.convert(0)] * n
                    for k, c in v.items():
                        row[k] = F.convert(c)
                    rows.append(row)
        return len(rref(rows, F, n)[1]) if rows else 0

    def rank_profile(self) -> dict[tuple[int, int], int]:
        ds = self.degrees()
        return {(a, b): r for a in ds for b in ds if (r := self.multiplication_rank(a, b))}

    def betti(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for b in self.basis:
            out[b.degree] = out.get(b.degree, 0) + 1
        return out

    # algebra laws
    def is_associative(self) -> bool:
        n = len(self.basis)
        for i in range(n):
            for j in range(n):
                ij = self.product(i, j)
                for k in range(n):
                    left = self.multiply(ij, {k: 1}) if ij else {}
                    jk = self.product(j, k)
                    right = self.multiply({i: 1}, jk) if jk else {}
                    if left != right:
                        return False
        return True

    def is_graded_commutative(self) -> bool:
        F = self.coeffs
        for i, a in enumerate(self.basis):
            for j in range(i, len(self.basis)):
                b = self.basis[j]
                sign = -1 if (a.degree * b.degree) & 1 else 1
                lhs = self.product(i, j)
                rhs = {k: F.reduce(sign * v) for k, v in self.product(j, i).items()}
                if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
                    return False
        return True

    def unit_index(self) -> int | None:
        """Index of a basis class acting as a two-sided unit, if any."""
        F = self.coeffs
        for u, b in enumerate(self.basis):
            if b.degree != 0:
                continue
            if all(self.product(u, i) == {i: F.convert(1)} and self.product(i, u) == {i: F.convert(1)}
                   for i in range(len(self.basis))):
                return u
        return None

    def is_unital(self) -> bool:
        return self.unit_index() is not None

    def degree_additive(self) -> bool:
        for (i, j), v in self.constants.items():
            for k in v:
                if self.basis[k].degree != self.basis[i].degree + self.basis[j].degree:
                    return False
        return True

    def supports(self) -> set[tuple[IndexPair, IndexPair, IndexPair]]:
        return {(self.basis[i].pair, self.basis[j].pair, self.basis[k].pair)
                for (i, j), v in self.constants.items() for k in v}

    def twisted(self, sign: Callable[[BasisClass, BasisClass], int], name: str | None = None) -> "RingTable":
        F = self.coeffs
        consts = {}
        for (i, j), v in self.constants.items():
            s = sign(self.basis[i], self.basis[j])
            consts[(i, j)] = {k: F.reduce(s * c) for k, c in v.items()}
        return RingTable(self.basis, consts, F, name or self.name, self.universe)

    def regraded(self, degree: Callable[[BasisClass], int], name: str | None = None) -> "RingTable":
        basis = [BasisClass(b.pair, degree(b), b.label, b.rep) for b in self.basis]
        return RingTable(basis, self.constants, self.coeffs, name or self.name, self.universe)

    def triples(self) -> list[tuple[int, int, object, int]]:
        """Nonzero constants as ``(i, j, coeff, k)`` sorted by indices."""
        return [(i, j, c, k) for (i, j) in sorted(self.constants) for k, c in sorted(self.constants[(i, j)].items())]

    def to_json(self) -> dict:
        def num(c):
            return str(c) if not isinstance(c, int) else c
        return {
            "name": self.name,
            "coefficients": self.coeffs.name,
            "universe": self.universe,
            "basis": [{"index": i, "label": b.label, "degree": b.degree,
                       "sigma": fmt(b.pair.sigma) if b.pair else None,
                       "omega": fmt(b.pair.omega) if b.pair else None}
                      for i, b in enumerate(self.basis)],
            "constants": [[i, j, num(c), k] for i, j, c, k in self.triples()],
        }


def _vector(rep: dict, order: list) -> list:
    return [rep.get(g, 0) for g in order]


def _blocks_with_bases(K: SimplicialComplex, pairs: Iterable[IndexPair], F: Coeffs):
    blocks = {}
    for p in pairs:
        if K.void or p.sigma not in K.faces:
            continue
        C = block_chain(K, p, F)
        hb = cohomology_bases(C, F)
        if hb:
            blocks[p] = (C, hb)
    return blocks


def total_cohomology_ring(K: SimplicialComplex, family: ProductFamily | str = UNIVERSAL,
                          universe: str | Sequence[IndexPair] | None = None, coeffs: Coeffs = QQ) -> RingTable:
    """Total cohomology algebra of ``K`` for one product family, as structure constants.

    Products of representatives are formed in the total cochain complex and then
    projected to each destination block, whose components are again cocycles.
    """
    if isinstance(family, str):
        family = ProductFamily.parse(family)
    if not coeffs.field:
        raise ValueError("class arithmetic needs field coefficients")
    if universe is None:
        universe = family.default_universe
    if isinstance(universe, str):
        pairs = index_pairs(K.m, universe)
        uname = universe
    else:
        pairs = list(universe)
        uname = "custom"
    if family.right and any(p.sigma for p in pairs):
        raise ValueError(f"{family.label} only lives on the right universe")
    F = coeffs
    blocks = _blocks_with_bases(K, pairs, F)
    basis: list[BasisClass] = []
    where: dict[IndexPair, dict[int, list[int]]] = {}
    for p, (C, hb) in blocks.items():
        for d, B in sorted(hb.items()):
            for r, vec in enumerate(B.reps):
                rep = {C.basis[d][i]: v for i, v in enumerate(vec) if v}
                where.setdefault(p, {}).setdefault(d, []).append(len(basis))
                basis.append(BasisClass(p, d, f"{fmt(p.sigma)}|{fmt(p.omega)}:{d}.{r + 1}", rep))
    gens = {p: [g for lst in C.basis.values() for g in lst] for p, (C, _) in blocks.items()}
    maxdeg = {p: max(hb) for p, (_, hb) in blocks.items()}
    mindeg = {p: min(hb) for p, (_, hb) in blocks.items()}
    constants: dict[tuple[int, int], dict[int, object]] = {}
    order = list(blocks)
    for p1 in order:
        for p2 in order:
            lo = mindeg[p1] + mindeg[p2]
            for p in order:
                if maxdeg[p] < lo:
                    continue
                if not class_admissible(family, p1, p2, p, K.m):
                    continue
                C, hb = blocks[p]
                terms = local_coproduct(K, p, p1, p2, family, gens[p])
                if not terms:
                    continue
                for i in (i for lst in where[p1].values() for i in lst):
                    f1 = basis[i].rep
                    for j in (j for lst in where[p2].values() for j in lst):
                        f2 = basis[j].rep
                        d = basis[i].degree + basis[j].degree
                        acc: dict[TotalGenerator, object] = {}
                        for t, t1, t2, s in terms:
                            a = f1.get(t1)
                            if not a:
                                continue
                            b = f2.get(t2)
                            if not b:
                                continue
                            acc[t] = F.reduce(acc.get(t, 0) + s * a * b)
                        acc = {t: v for t, v in acc.items() if v}
                        if not acc:
                            continue
                        by_deg: dict[int, dict] = {}
                        for t, v in acc.items():
                            by_deg.setdefault(t.degree, {})[t] = v
                        out = constants.setdefault((i, j), {})
                        for dd, part in by_deg.items():
                            if dd not in hb:
                                continue
                            coords = hb[dd].coordinates(_vector(part, C.basis[dd]))
                            for r, c in enumerate(coords):
                                if c:
                                    k = where[p][dd][r]
                                    out[k] = F.reduce(out.get(k, 0) + c)
                        if not any(out.values()):
                            del constants[(i, j)]
                        del d
    constants = {ij: {k: c for k, c in v.items() if c} for ij, v in constants.items()}
    constants = {ij: v for ij, v in constants.items() if v}
    return RingTable(basis, constants, F, family.label, uname)


def restricted_coproduct_matrix(K: SimplicialComplex, family: ProductFamily, universe: str = "xm"):
    """Every local coproduct of ``K`` as ``{(p, p1, p2): terms}``; only for small ``m``."""
    pairs = [p for p in index_pairs(K.m, universe) if not K.void and p.sigma in K.faces]
    out = {}
    for p in pairs:
        for p1 in pairs:
            for p2 in pairs:
                terms = local_coproduct(K, p, p1, p2, family)
                if terms:
                    out[(p, p1, p2)] = terms
    return out


# Alexander-Whitney oracle ------------------------------------------------------------


def aw_cup_product(L: SimplicialComplex, coeffs: Coeffs = QQ) -> RingTable:
    """Cup product on ``H^*(L)`` from front and back faces of ordered simplices."""
    if L.void:
        raise ValueError("the void complex has no cohomology ring")
    if not coeffs.field:
        raise ValueError("class arithmetic needs field coefficients")
    F = coeffs
    C = simplicial_chain(L, "plain", F)
    hb = cohomology_bases(C, F)
    basis: list[BasisClass] = []
    where: dict[int, list[int]] = {}
    for d, B in sorted(hb.items()):
        for r, vec in enumerate(B.reps):
            rep = {C.basis[d][i]: v for i, v in enumerate(vec) if v}
            where.setdefault(d, []).append(len(basis))
            basis.append(BasisClass(None, d, f"H{d}.{r + 1}", rep))
    # front and back faces of every simplex, per split point
    splits: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    for d in C.degrees:
        for face in C.basis[d]:
            vs = bits(face)
            for pdeg in range(d + 1):
                front = sum(1 << v for v in vs[:pdeg + 1])
                back = sum(1 << v for v in vs[pdeg:])
                splits.setdefault((pdeg, d - pdeg), []).append((face, front, back))
    constants: dict[tuple[int, int], dict[int, object]] = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            d = a.degree + b.degree
            if d not in hb:
                continue
            acc = {}
            for face, front, back in splits.get((a.degree, b.degree), ()):
                x = a.rep.get(front)
                y = b.rep.get(back)
                if x and y:
                    acc[face] = F.reduce(acc.get(face, 0) + x * y)
            if not any(acc.values()):
                continue
            coords = hb[d].coordinates(_vector(acc, C.basis[d]))
            v = {where[d][r]: c for r, c in enumerate(coords) if c}
            if v:
                constants[(i, j)] = v
    return RingTable(basis, constants, F, "alexander_whitney", "")


# algebra constructions -------------------------------------------------------------------


def tensor_rings(A: RingTable, B: RingTable, index: Callable[[BasisClass, BasisClass], IndexPair | None] | None = None,
                 name: str = "") -> RingTable:
    """``A ⊗ B`` with ``(a'⊗b')(a''⊗b'') = (-1)^{|b'||a''|} a'a'' ⊗ b'b''``."""
    F = A.coeffs
    basis = []
    pos = {}
    for i, a in enumerate(A.basis):
        for j, b in enumerate(B.basis):
            pos[(i, j)] = len(basis)
            pair = index(a, b) if index else None
            rep = {(x, y): u * v for x, u in a.rep.items() for y, v in b.rep.items()}
            basis.append(BasisClass(pair, a.degree + b.degree, f"{a.label}*{b.label}", rep))
    constants = {}
    for (i1, i2), va in A.constants.items():
        for (j1, j2), vb in B.constants.items():
            s = -1 if (B.basis[j1].degree * A.basis[i2].degree) & 1 else 1
            out = constants.setdefault((pos[(i1, j1)], pos[(i2, j2)]), {})
            for k, c in va.items():
                for l, e in vb.items():
                    q = pos[(k, l)]
                    out[q] = F.reduce(out.get(q, 0) + s * c * e)
    constants = {ij: {k: c for k, c in v.items() if c} for ij, v in constants.items()}
    return RingTable(basis, {ij: v for ij, v in constants.items() if v}, F, name, "")


def diagonal_tensor_algebra(A: RingTable, B: RingTable, index_a: Callable[[BasisClass], IndexPair] | None = None,
                            index_b: Callable[[BasisClass], IndexPair] | None = None, name: str = "") -> RingTable:
    """``A ⊗̂ B``: only ``a ⊗ b`` with equal diagonal indices survive.

    Products follow ``(a'⊗̂b')(a''⊗̂b'') = (-1)^{|a''||b'|} Σ (a'a'')_s ⊗̂ (b'b'')_s`` where
    ``s`` runs over the shared index set.
    """
    if A.coeffs != B.coeffs:
        raise ValueError("coefficient mismatch")
    ia = index_a or (lambda b: b.pair)
    ib = index_b or (lambda b: b.pair)
    F = A.coeffs
    basis = []
    pos = {}
    for i, a in enumerate(A.basis):
        for j, b in enumerate(B.basis):
            if ia(a) == ib(b):
                pos[(i, j)] = len(basis)
                rep = {(x, y): u * v for x, u in a.rep.items() for y, v in b.rep.items()}
                basis.append(BasisClass(ia(a), a.degree + b.degree, f"{a.label}*{b.label}", rep))
    constants = {}
    for (x1, y1), u in pos.items():
        for (x2, y2), v in pos.items():
            va = A.product(x1, x2)
            vb = B.product(y1, y2)
            if not va or not vb:
                continue
            s = -1 if (A.basis[x2].degree * B.basis[y1].degree) & 1 else 1
            out = {}
            for k, c in va.items():
                for l, e in vb.items():
                    q = pos.get((k, l))
                    if q is not None:
                        out[q] = F.reduce(out.get(q, 0) + s * c * e)
            out = {k: c for k, c in out.items() if c}
            if out:
                constants[(u, v)] = out
    if A.universe and B.universe and A.universe != B.universe:
        raise ValueError(f"universe mismatch: {A.universe} vs {B.universe}")
    return RingTable(basis, constants, F, name or f"{A.name}⊗̂{B.name}", A.universe or B.universe)


# rings of polyhedral products ------------------------------------------------------------


def geometric_degree(kind: str, b: BasisClass, r: int = 0, p: int = 0, n: int = 0) -> int:
    sigma = b.pair.sigma.bit_count()
    omega = b.pair.omega.bit_count()
    if kind == "disk":
        return b.degree + n * omega
    return b.degree + r * sigma + p * omega


def cell_sign(odd_a: int, odd_b: int) -> int:
    """Koszul sign ``(-1)^{#{j<k : j∈odd_b, k∈odd_a}}`` for moving cells of ``b`` past cells of ``a``."""
    return shuffle_sign(odd_a, odd_b)


def polyhedral_ring(K: SimplicialComplex, kind: str, coeffs: Coeffs = QQ) -> RingTable:
    """Cohomology ring of ``Z(K; X, A)`` for a disk or sphere pair, on the decomposition basis.

    ``disk:1`` gives the right strictly normal ring.  ``disk:n`` for ``n ≥ 2`` gives the
    right special ring twisted by ``(-1)^{t(n-1)|ω'|}``.  ``sphere:2:0`` gives the
    strictly normal ring with primitive ``e``.  ``sphere:r:p`` with ``p > 0`` gives the
    special ring twisted by ``(-1)^{t(r|σ'|+p|ω'|)}``.  Here ``t`` is the degree of the
    right factor.  Every twist also carries the Koszul sign of the odd-dimensional
    cells, without which odd spheres would commute.  Degrees are the geometric ones.
    """
    parts = kind.split(":")
    if parts[0] == "disk1":
        parts = ["disk", "1"]
    if parts[0] == "disk" and len(parts) == 2:
        dim = int(parts[1])
        if dim < 1:
            raise ValueError("disk dimension must be at least 1")
        if dim == 1:
            T = total_cohomology_ring(K, ProductFamily("strictly_normal", True), "rm", coeffs)
            return T.regraded(lambda b: b.degree, "disk:1")
        n = dim - 1

        def twist(a: BasisClass, b: BasisClass) -> int:
            if not n & 1:
                return 1
            s = -1 if (b.degree * a.pair.omega.bit_count()) & 1 else 1
            return s * cell_sign(a.pair.omega, b.pair.omega)

        T = total_cohomology_ring(K, ProductFamily("special", True), "rm", coeffs).twisted(twist)
        return T.regraded(lambda b: geometric_degree("disk", b, n=n), kind)
    if parts[0] == "sphere" and len(parts) == 3:
        r, p = int(parts[1]), int(parts[2])
        if not 0 <= p < r:
            raise ValueError("need 0 <= p < r")
        if p == 0:
            if r != 2:
                raise NotImplementedError("only (S^2, S^0) is covered among sphere pairs with p = 0")
            T = total_cohomology_ring(K, ProductFamily("strictly_normal_primitive"), "xm", coeffs)
            return T.regraded(lambda b: geometric_degree("sphere", b, r=2, p=0), kind)

        def odd(c: BasisClass) -> int:
            return (c.pair.sigma if r & 1 else 0) | (c.pair.omega if p & 1 else 0)

        def twist(a: BasisClass, b: BasisClass) -> int:
            e = b.degree * (r * a.pair.sigma.bit_count() + p * a.pair.omega.bit_count())
            return (-1 if e & 1 else 1) * cell_sign(odd(a), odd(b))

        T = total_cohomology_ring(K, ProductFamily("special"), "xm", coeffs).twisted(twist)
        return T.regraded(lambda b: geometric_degree("sphere", b, r=r, p=p), kind)
    raise ValueError(f"unknown pair kind {kind!r}")


def polyhedral_ring_printed(K: SimplicialComplex, kind: str, coeffs: Coeffs = QQ) -> RingTable:
    """The recipe taken at face value: strictly normal for ``(S^2, S^0)`` and twists
    without the cell sign.  Kept for comparison with ``polyhedral_ring``."""
    parts = kind.split(":")
    if parts[0] == "disk" and len(parts) == 2 and int(parts[1]) >= 2:
        n = int(parts[1]) - 1
        T = total_cohomology_ring(K, ProductFamily("special", True), "rm", coeffs)
        T = T.twisted(lambda a, b: -1 if (b.degree * n * a.pair.omega.bit_count()) & 1 else 1)
        return T.regraded(lambda b: geometric_degree("disk", b, n=n), kind)
    if parts[0] == "sphere" and len(parts) == 3:
        r, p = int(parts[1]), int(parts[2])
        if p == 0 and r == 2:
            T = total_cohomology_ring(K, ProductFamily("strictly_normal"), "xm", coeffs)
            return T.regraded(lambda b: geometric_degree("sphere", b, r=2, p=0), kind)
        if 0 < p < r:
            T = total_cohomology_ring(K, ProductFamily("special"), "xm", coeffs)
            T = T.twisted(lambda a, b: -1 if (b.degree * (r * a.pair.sigma.bit_count()
                                                           + p * a.pair.omega.bit_count())) & 1 else 1)
            return T.regraded(lambda b: geometric_degree("sphere", b, r=r, p=p), kind)
    return polyhedral_ring(K, kind, coeffs)


def polyhedral_ring_oracle(K: SimplicialComplex, kind: str, coeffs: Coeffs = QQ) -> RingTable:
    """AW cup ring of the staircase model of ``Z(K; X, A)`` for the same pair kind."""
    from .decomposition import parse_pair
    X, A = parse_pair(kind if kind != "disk1" else "disk:1")
    model = polyhedral_product_complex(K, pairs_of([(X, A)] * K.m))
    return aw_cup_product(model, coeffs)


# composition complexes ---------------------------------------------------------------------


def _right_index(b: BasisClass) -> IndexPair:
    return IndexPair(0, 1 if b.pair.omega else 0)


def composition_ring(K: SimplicialComplex, Ls: Sequence[SimplicialComplex], coeffs: Coeffs = QQ,
                     family: ProductFamily | None = None) -> RingTable:
    """Right total cohomology ring of ``Z*(K; L)`` as ``H_ℛ(K) ⊗̂ (⊗_k H_ℛ(L_k))``.

    ``K`` carries the right normal product and each ``L_k`` its right universal one.
    A basis class of the result sits in the block of ``[n]`` obtained by gluing the
    blocks of its factors.
    """
    if len(Ls) != K.m:
        raise ValueError(f"K lives on [{K.m}] but {len(Ls)} complexes were given")
    family = family or ProductFamily("normal", True)
    A = total_cohomology_ring(K, family, "rm", coeffs)
    offsets = []
    off = 0
    for L in Ls:
        offsets.append(off)
        off += L.m
    B = None
    for k, L in enumerate(Ls):
        R = total_cohomology_ring(L, ProductFamily("universal", True), "rm", coeffs)
        R = RingTable([BasisClass(IndexPair(0, b.pair.omega << offsets[k]), b.degree, f"L{k + 1}[{b.label}]", b.rep)
                       for b in R.basis], R.constants, R.coeffs, R.name, "rm")
        if B is None:
            B = R
        else:
            B = tensor_rings(B, R, index=lambda a, b: IndexPair(0, a.pair.omega | b.pair.omega))
    if B is None:
        raise ValueError("need at least one factor")

    def diag_b(b: BasisClass) -> IndexPair:
        w = 0
        for k, L in enumerate(Ls):
            if b.pair.omega >> offsets[k] & full(L.m):
                w |= 1 << k
        return IndexPair(0, w)

    D = diagonal_tensor_algebra(A, B, lambda a: a.pair, diag_b, "composition")
    for bc, (x, y) in zip(D.basis, ((x, y) for x in range(len(A.basis)) for y in range(len(B.basis))
                                    if A.basis[x].pair == diag_b(B.basis[y]))):
        bc.pair = IndexPair(0, B.basis[y].pair.omega)
    D.universe = "rm"
    return D


def composition_ring_direct(K: SimplicialComplex, Ls: Sequence[SimplicialComplex], coeffs: Coeffs = QQ) -> RingTable:
    """Right universal ring of the composition complex computed from scratch."""
    return total_cohomology_ring(composition_complex(K, Ls), ProductFamily("universal", True), "rm", coeffs)


def rank_profiles_equal(A: RingTable, B: RingTable) -> bool:
    return A.betti() == B.betti() and A.rank_profile() == B.rank_profile()


# the m-gon -------------------------------------------------------------------------------


def cycle_components(m: int, omega: int) -> list[int]:
    """Connected components of ``ω`` in the cycle ``Z_m``, ordered by their smallest vertex."""
    seen = 0
    comps = []
    for v in bits(omega):
        if seen >> v & 1:
            continue
        comp = 0
        stack = [v]
        while stack:
            u = stack.pop()
            if comp >> u & 1:
                continue
            comp |= 1 << u
            for w in ((u + 1) % m, (u - 1) % m):
                if omega >> w & 1 and not comp >> w & 1:
                    stack.append(w)
        seen |= comp
        comps.append(comp)
    return sorted(comps, key=lambda c: bits(c)[0])


def polygon(m: int) -> SimplicialComplex:
    return SimplicialComplex.from_masks(m, [(1 << i) | (1 << ((i + 1) % m)) for i in range(m)])


def cyclic_sign(m: int, a: int, b: int) -> int:
    """``A * B = Σ_{i∈A, j∈B} i*j`` with ``i*j = ±1`` when ``j ≡ i ± 1`` mod ``m``."""
    total = 0
    for i in bits(a):
        for j in bits(b):
            if j == (i + 1) % m:
                total += 1
            elif j == (i - 1) % m:
                total -= 1
    return total


@dataclass
class PolygonRing:
    """The right universal ring of the m-gon in the component basis ``h_{ω,s}`` and ``κ``."""

    m: int
    table: RingTable
    h: dict[tuple[int, int], int] = field(default_factory=dict)
    kappa: int = -1
    unit: int = -1

    def product_in_kappa(self, x: int, y: int):
        """Coefficient of ``κ`` in ``x · y`` plus whether anything else appeared."""
        v = self.table.product(x, y)
        other = any(k != self.kappa for k in v)
        return v.get(self.kappa, 0), other


def polygon_ring(m: int, family: ProductFamily | None = None, coeffs: Coeffs = QQ) -> PolygonRing:
    """Re-express the total ring of the m-gon in the basis of component indicators.

    ``h_{ω,s}`` is the class of ``Σ_{u∈ω_s} {u}`` for ``s = 1..k-1`` and ``κ`` is the
    class of the edge ``{1,2}``.
    """
    family = family or ProductFamily("universal", True)
    K = polygon(m)
    T = total_cohomology_ring(K, family, "rm", coeffs)
    F = coeffs
    new_basis: list[BasisClass] = []
    h = {}
    # coordinate change block by block
    by_block: dict[tuple[IndexPair, int], list[int]] = {}
    for i, b in enumerate(T.basis):
        by_block.setdefault((b.pair, b.degree), []).append(i)
    change: dict[int, dict[int, object]] = {}  # new index -> old coordinates
    kappa = unit = -1
    for (p, d), olds in sorted(by_block.items(), key=lambda kv: (lex_key(kv[0][0].omega), kv[0][1])):
        C = block_chain(K, p, F)
        hb = cohomology_bases(C, F)[d]
        if d == 1:
            comps = cycle_components(m, p.omega)
            reps = []
            for comp in comps[:-1]:
                rep = {}
                for g in C.basis[1]:
                    if g.Nbar & comp:
                        rep[g] = F.convert(1)
                reps.append(rep)
        elif d == 2:
            reps = [{g: F.convert(1) for g in C.basis[2] if g.Nbar == 0b11}]
        else:
            reps = [{g: F.convert(1) for g in C.basis[0]}]
        for s, rep in enumerate(reps):
            coords = hb.coordinates(_vector(rep, C.basis[d]))
            idx = len(new_basis)
            new_basis.append(BasisClass(p, d, f"h{fmt(p.omega)},{s + 1}" if d == 1 else ("kappa" if d == 2 else "1"), rep))
            change[idx] = {olds[r]: c for r, c in enumerate(coords) if c}
            if d == 1:
                h[(p.omega, s + 1)] = idx
            elif d == 2:
                kappa = idx
            else:
                unit = idx
    # inverse change on each block (square blocks)
    inv: dict[int, dict[int, object]] = {}
    for (p, d), olds in by_block.items():
        news = [i for i, b in enumerate(new_basis) if b.pair == p and b.degree == d]
        M = [[change[nw].get(o, F.convert(0)) for o in olds] for nw in news]  # rows: new in old coords
        n = len(olds)
        aug = [[M[r][c] for r in range(n)] + [F.convert(1 if c == e else 0) for e in range(n)] for c in range(n)]
        R, piv = rref(aug, F, 2 * n)
        if piv[:n] != list(range(n)):
            raise InvariantViolation("component classes do not form a basis")
        # aug = [M^T | I] reduces to [I | (M^T)^{-1}]; old_c = Σ_r ((M^T)^{-1})[c][r] new_r
        for c, o in enumerate(olds):
            inv[o] = {news[r]: R[c][n + r] for r in range(n) if R[c][n + r]}
    consts = {}
    for x in range(len(new_basis)):
        for y in range(len(new_basis)):
            acc: dict[int, object] = {}
            for i, a in change[x].items():
                for j, b in change[y].items():
                    for k, c in T.product(i, j).items():
                        for q, e in inv[k].items():
                            acc[q] = F.reduce(acc.get(q, 0) + a * b * c * e)
            acc = {k: v for k, v in acc.items() if v}
            if acc:
                consts[(x, y)] = acc
    table = RingTable(new_basis, consts, F, f"{family.label} m-gon", "rm")
    return PolygonRing(m, table, h, kappa, unit)


def polygon_expected_literal(m: int, w1: int, i: int, w2: int, j: int) -> int:
    """Printed value: ``h_{ω',i} ∪ h_{ω'',j} = (ω'_i * ω''_j) κ``."""
    return cyclic_sign(m, cycle_components(m, w1)[i - 1], cycle_components(m, w2)[j - 1])


def polygon_expected_corrected(m: int, w1: int, i: int, w2: int, j: int) -> int:
    """Value forced by the local product: zero unless ``ω'∪ω'' = [m]``, and only
    ``y ∈ ω''_j ∖ ω'`` contributes."""
    if (w1 | w2) != full(m):
        return 0
    return cyclic_sign(m, cycle_components(m, w1)[i - 1], cycle_components(m, w2)[j - 1] & ~w1)
