"""Exact linear algebra over Z, Q and F_p.

Sparse matrices are lists of ``{column: value}`` dicts (one per row).  Dense
matrices are lists of lists.  Everything uses Python integers or ``Fraction``,
so there is no rounding anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

SparseRow = dict[int, int]


# coefficient rings ------------------------------------------------------------


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Coeffs:
    """``Z`` (``p=0, field=False``), ``Q`` (``p=0, field=True``) or ``F_p``."""

    p: int = 0
    field: bool = False

    def __post_init__(self):
        if self.p:
            if not _is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")
            object.__setattr__(self, "field", True)

    @classmethod
    def parse(cls, text: str) -> "Coeffs":
        t = text.strip().lower()
        if t in ("z", "zz", "int", "integers"):
            return ZZ
        if t in ("q", "qq", "rationals"):
            return QQ
        if t.startswith("f") or t.startswith("gf"):
            p = int(t.lstrip("gf"))
            return cls(p)
        raise ValueError(f"unknown coefficients {text!r}")

    @property
    def name(self) -> str:
        if self.p:
            return f"f{self.p}"
        return "q" if self.field else "z"

    def __str__(self) -> str:
        return self.name

    # field arithmetic; only valid when self.field
    def convert(self, a):
        if self.p:
            if isinstance(a, Fraction):
                return a.numerator * pow(a.denominator, -1, self.p) % self.p
            return a % self.p
        return Fraction(a)

    def inv(self, a):
        if self.p:
            return pow(a, -1, self.p)
        return 1 / Fraction(a)

    def reduce(self, a):
        return a % self.p if self.p else a


ZZ = Coeffs(0, False)
QQ = Coeffs(0, True)
F2 = Coeffs(2)


# sparse integer elimination -----------------------------------------------------


def _normalize_diagonal(diag: list[int]) -> list[int]:
    """Invariant factors of a diagonal matrix with the given nonzero entries."""
    ds = sorted(abs(d) for d in diag if d)
    ones = [d for d in ds if d == 1]
    rest = [d for d in ds if d != 1]
    n = len(rest)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = rest[i], rest[j]
            g = gcd(a, b)
            rest[i], rest[j] = g, a // g * b
    rest.sort()
    return ones + rest


def _copy_rows(rows: Sequence[SparseRow], p: int = 0) -> list[SparseRow]:
    out = []
    for r in rows:
        if p:
            nr = {c: v % p for c, v in r.items() if v % p}
        else:
            nr = {c: v for c, v in r.items() if v}
        out.append(nr)
    return out


def _column_index(rows: list[SparseRow]) -> dict[int, set[int]]:
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            cols.setdefault(c, set()).add(i)
    return cols


def _row_axpy(rows, cols, target: int, src: int, q: int, p: int):
    """``rows[target] -= q * rows[src]`` keeping the column index in sync."""
    t = rows[target]
    for c, v in rows[src].items():
        nv = t.get(c, 0) - q * v
        if p:
            nv %= p
        if nv:
            if c not in t:
                cols.setdefault(c, set()).add(target)
            t[c] = nv
        elif c in t:
            del t[c]
            cols[c].discard(target)


def _drop(rows, cols, r: int, c: int):
    for cc in rows[r]:
        if cc != c:
            cols[cc].discard(r)
    rows[r] = {}
    cols.pop(c, None)


def _pick_unit(rows, active, p):
    best = None
    for i in active:
        r = rows[i]
        if not r:
            continue
        for c, v in r.items():
            if v == 1 or v == -1 or p:
                key = len(r)
                if best is None or key < best[0]:
                    best = (key, i, c)
                break
        if best is not None and best[0] <= 2:
            break
    return best


def sparse_elimination(rows: Sequence[SparseRow], p: int = 0) -> list[int]:
    """Diagonal entries reached by unimodular row/column operations.

    Over ``F_p`` (``p > 0``) every nonzero entry is a pivot and the returned
    list has one entry per rank.  Over Z the entries still need normalizing.
    """
    rows = _copy_rows(rows, p)
    cols = _column_index(rows)
    active = {i for i, r in enumerate(rows) if r}
    diag: list[int] = []
    while active:
        active = {i for i in active if rows[i]}
        if not active:
            break
        pick = _pick_unit(rows, active, p)
        if pick is not None:
            _, r, c = pick
            pv = rows[r][c]
            inv = pow(pv, -1, p) if p else pv  # pv = ±1 over Z, so pv is its own inverse
            for other in list(cols.get(c, ())):
                if other == r:
                    continue
                q = rows[other][c] * inv
                if p:
                    q %= p
                _row_axpy(rows, cols, other, r, q, p)
            diag.append(pv)
            _drop(rows, cols, r, c)
            active.discard(r)
            continue
        # integer case without a unit: smallest entry, Euclid on its row and column
        r, c, pv = min(
            ((i, cc, v) for i in active for cc, v in rows[i].items()), key=lambda t: (abs(t[2]), t[0], t[1])
        )
        changed = False
        for other in list(cols.get(c, ())):
            if other == r:
                continue
            q = rows[other][c] // pv
            if q:
                _row_axpy(rows, cols, other, r, q, 0)
            if rows[other].get(c, 0):
                changed = True
        if changed:
            continue
        row = rows[r]
        for cc in list(row):
            if cc == c:
                continue
            v = row[cc] - (row[cc] // pv) * pv
            if v:
                row[cc] = v
                changed = True
            else:
                del row[cc]
                cols[cc].discard(r)
        if changed:
            continue
        diag.append(pv)
        _drop(rows, cols, r, c)
        active.discard(r)
    return diag


def invariant_factors(rows: Sequence[SparseRow]) -> list[int]:
    """Nonzero invariant factors of an integer matrix, ascending and dividing in turn."""
    return _normalize_diagonal(sparse_elimination(rows, 0))


def rank(rows: Sequence[SparseRow], coeffs: Coeffs = QQ) -> int:
    if coeffs.p:
        return len(sparse_elimination(rows, coeffs.p))
    # over Q and Z the rank is the number of nonzero diagonal entries of the integer form
    rows = [{c: _clear_denominator(v, r) for c, v in r.items()} for r in rows] if _has_fractions(rows) else rows
    return len(sparse_elimination(rows, 0))


def _has_fractions(rows) -> bool:
    return any(isinstance(v, Fraction) and v.denominator != 1 for r in rows for v in r.values())


def _clear_denominator(v, row):
    den = 1
    for w in row.values():
        if isinstance(w, Fraction):
            den = den * w.denominator // gcd(den, w.denominator)
    return int(v * den)


def dense_to_sparse(M: Sequence[Sequence[int]]) -> list[SparseRow]:
    return [{j: v for j, v in enumerate(row) if v} for row in M]


def sparse_transpose(rows: Sequence[SparseRow], ncols: int) -> list[SparseRow]:
    out: list[SparseRow] = [dict() for _ in range(ncols)]
    for i, r in enumerate(rows):
        for c, v in r.items():
            out[c][i] = v
    return out


# dense Smith form with transforms --------------------------------------------


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    n = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * n
        for k, a in enumerate(row):
            if a:
                for j, b in enumerate(B[k]):
                    if b:
                        acc[j] += a * b
        out.append(acc)
    return out


@dataclass
class SmithForm:
    """``U · M · V = D`` with ``U, V`` unimodular; ``Uinv``, ``Vinv`` are their inverses."""

    D: list[list[int]]
    U: list[list[int]]
    V: list[list[int]]
    Uinv: list[list[int]]
    Vinv: list[list[int]]

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_form(M: Sequence[Sequence[int]], nrows: int | None = None, ncols: int | None = None) -> SmithForm:
    """Smith normal form with transforms; diagonal entries are nonnegative and divide in turn."""
    A = [list(map(int, r)) for r in M]
    m = len(A) if nrows is None else nrows
    n = (len(A[0]) if A else 0) if ncols is None else ncols
    if not A:
        A = [[0] * n for _ in range(m)]
    U, Uinv = identity(m), identity(m)
    V, Vinv = identity(n), identity(n)

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in Uinv:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def row_add(t, s, q):  # row_t += q row_s
        if not q:
            return
        A[t] = [a + q * b for a, b in zip(A[t], A[s])]
        U[t] = [a + q * b for a, b in zip(U[t], U[s])]
        for r in Uinv:  # Uinv := Uinv · E^{-1}: col_s -= q col_t
            r[s] -= q * r[t]

    def col_add(t, s, q):  # col_t += q col_s
        if not q:
            return
        for r in A:
            r[t] += q * r[s]
        for r in V:
            r[t] += q * r[s]
        Vinv[s] = [a - q * b for a, b in zip(Vinv[s], Vinv[t])]

    def row_neg(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for r in Uinv:
            r[i] = -r[i]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        row_swap(t, i)
        col_swap(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    row_add(i, t, -q)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_add(j, t, -q)
                    if A[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % A[t][t]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_add(t, bad, 1)
                continue
            nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n)
                  if A[i][j] and (i == t or j == t)]
            _, i, j = min(nz)
            row_swap(t, i)
            col_swap(t, j)
        if A[t][t] < 0:
            row_neg(t)
        t += 1
    return SmithForm(A, U, V, Uinv, Vinv)


# field linear algebra ---------------------------------------------------------


def to_field(M, F: Coeffs):
    return [[F.convert(v) for v in row] for row in M]


def rref(M, F: Coeffs, ncols: int | None = None):
    """Reduced row echelon form over a field.  Returns ``(R, pivot_columns)``."""
    A = [list(r) for r in M]
    n = (len(A[0]) if A else 0) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, len(A)):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.reduce(v * inv) for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [F.reduce(a - f * b) for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def field_rank(M, F: Coeffs) -> int:
    return len(rref(to_field(M, F), F)[1])


def nullspace(M, F: Coeffs, ncols: int) -> list[list]:
    """Basis of ``{x : M x = 0}`` in reduced form (one vector per free column)."""
    R, pivots = rref(to_field(M, F), F, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [F.convert(0)] * ncols
        v[f] = F.convert(1)
        for row, pc in zip(R, pivots):
            v[pc] = F.reduce(-row[f])
        basis.append(v)
    return basis


def solve(M, b, F: Coeffs, ncols: int):
    """One solution of ``M x = b`` over a field, or ``None``."""
    aug = [list(F.convert(v) for v in row) + [F.convert(bi)] for row, bi in zip(M, b)]
    R, pivots = rref(aug, F, ncols + 1)
    if ncols in pivots:
        return None
    x = [F.convert(0)] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    return x


def row_space_coordinates(basis_rows, vec, F: Coeffs):
    """Coordinates of ``vec`` in the span of ``basis_rows`` (rows), or ``None``."""
    if not basis_rows:
        return [] if all(not v for v in vec) else None
    k = len(basis_rows)
    n = len(vec)
    M = [[basis_rows[j][i] for j in range(k)] for i in range(n)]
    return solve(M, vec, F, k)


# integer lattices ---------------------------------------------------------------
# A lattice is given by generator vectors (lists of ints) in Z^N.


def _columns_to_matrix(gens: Sequence[Sequence[int]], N: int) -> list[list[int]]:
    return [[g[i] for g in gens] for i in range(N)]


def integer_kernel(M: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis of ``{x ∈ Z^n : M x = 0}``."""
    if not M or ncols == 0:
        return identity(ncols)
    S = smith_form(M, len(M), ncols)
    r = S.rank
    return [[S.V[i][j] for i in range(ncols)] for j in range(r, ncols)]


@dataclass
class LatticeBasis:
    """Basis ``b_i = d_i · Uinv[:, i]`` of the span of some generators; ``U`` gives coordinates."""

    N: int
    U: list[list[int]]
    Uinv: list[list[int]]
    d: list[int]

    @property
    def rank(self) -> int:
        return len(self.d)

    def vectors(self) -> list[list[int]]:
        return [[self.Uinv[i][j] * self.d[j] for i in range(self.N)] for j in range(self.rank)]

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        w = [sum(self.U[i][k] * v[k] for k in range(self.N) if v[k]) for i in range(self.N)]
        if any(w[i] for i in range(self.rank, self.N)):
            return None
        out = []
        for i in range(self.rank):
            if w[i] % self.d[i]:
                return None
            out.append(w[i] // self.d[i])
        return out


def lattice_basis(gens: Sequence[Sequence[int]], N: int) -> LatticeBasis:
    gens = [list(g) for g in gens if any(g)]
    if not gens:
        return LatticeBasis(N, identity(N), identity(N), [])
    S = smith_form(_columns_to_matrix(gens, N), N, len(gens))
    d = [x for x in S.diagonal if x]
    return LatticeBasis(N, S.U, S.Uinv, d)


def lattice_quotient(big: Sequence[Sequence[int]], small: Sequence[Sequence[int]], N: int) -> tuple[int, list[int]]:
    """``(free rank, torsion)`` of ``span(big) / span(small)``; requires ``small ⊆ span(big)``."""
    B = lattice_basis(big, N)
    coords = []
    for v in small:
        c = B.coordinates(v)
        if c is None:
            raise ValueError("sub-lattice is not contained in the lattice")
        if any(c):
            coords.append(c)
    if B.rank == 0:
        return 0, []
    facs = invariant_factors([{j: x for j, x in enumerate(c) if x} for c in coords]) if coords else []
    return B.rank - len(facs), [f for f in facs if f > 1]


def lattice_intersection(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], N: int) -> list[list[int]]:
    """Generators of ``span(A) ∩ span(B)``."""
    A = [list(a) for a in A if any(a)]
    B = [list(b) for b in B if any(b)]
    if not A or not B:
        return []
    M = [[a[i] for a in A] + [-b[i] for b in B] for i in range(N)]
    out = []
    for x in integer_kernel(M, len(A) + len(B)):
        v = [sum(x[j] * A[j][i] for j in range(len(A))) for i in range(N)]
        if any(v):
            out.append(v)
    return out


def field_span_rank(vectors: Sequence[Sequence], F: Coeffs) -> int:
    vs = [list(v) for v in vectors if any(v)]
    if not vs:
        return 0
    return field_rank(vs, F)
