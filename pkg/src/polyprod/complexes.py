"""Finite simplicial complexes on a ground set ``[m]`` and the constructions built from them.

Faces are bitmasks.  The void complex ``{ }`` (no faces at all) and the empty
complex ``{∅}`` are different objects: the first carries ``void=True``.
Vertices of ``[m]`` that are not faces are allowed (ghost vertices).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .subsets import bits, fmt, full, lex_key, mask_of, submasks

MAX_GROUND = 32


class ComplexError(ValueError):
    """Malformed complex input."""


@dataclass(frozen=True)
class SimplicialComplex:
    m: int
    faces: frozenset[int]
    void: bool = False

    def __post_init__(self):
        if self.m < 0 or self.m > MAX_GROUND:
            raise ComplexError(f"ground size {self.m} outside 0..{MAX_GROUND}")
        if self.void:
            if self.faces:
                raise ComplexError("void complex cannot carry faces")
            return
        if 0 not in self.faces:
            raise ComplexError("non-void complex must contain the empty face")
        top = full(self.m)
        for f in self.faces:
            if f & ~top:
                raise ComplexError(f"face {fmt(f)} not inside [{self.m}]")
            g = f
            while g:
                low = g & -g
                if f & ~low not in self.faces:
                    raise ComplexError(f"face {fmt(f)} has missing subface {fmt(f & ~low)}")
                g ^= low

    # construction -----------------------------------------------------------

    @classmethod
    def from_masks(cls, m: int, facets: Iterable[int], void: bool = False) -> "SimplicialComplex":
        facets = list(facets)
        if void:
            if facets:
                raise ComplexError("void flag given together with facets")
            return cls(m, frozenset(), True)
        top = full(m)
        faces: set[int] = set()
        for f in facets:
            if f & ~top:
                raise ComplexError(f"facet {fmt(f)} has a vertex beyond {m}")
            if f in faces:
                continue
            faces.update(submasks(f))
        faces.add(0)
        return cls(m, frozenset(faces), False)

    @classmethod
    def simplex(cls, m: int, s: int | None = None) -> "SimplicialComplex":
        s = full(m) if s is None else s
        return cls(m, frozenset(submasks(s)))

    @classmethod
    def simplex_boundary(cls, m: int, s: int | None = None) -> "SimplicialComplex":
        s = full(m) if s is None else s
        return cls(m, frozenset(f for f in submasks(s) if f != s))

    @classmethod
    def empty(cls, m: int) -> "SimplicialComplex":
        """The complex ``{∅}``."""
        return cls(m, frozenset([0]))

    @classmethod
    def void_complex(cls, m: int) -> "SimplicialComplex":
        """The complex ``{ }``."""
        return cls(m, frozenset(), True)

    # queries ----------------------------------------------------------------

    def __contains__(self, face: int) -> bool:
        return face in self.faces

    def __len__(self) -> int:
        return len(self.faces)

    @cached_property
    def sorted_faces(self) -> tuple[int, ...]:
        return tuple(sorted(self.faces, key=lex_key))

    @cached_property
    def vertex_mask(self) -> int:
        out = 0
        for f in self.faces:
            out |= f
        return out

    @cached_property
    def facets(self) -> tuple[int, ...]:
        out = []
        for f in self.sorted_faces:
            maximal = True
            for v in bits(~f & full(self.m)):
                if f | (1 << v) in self.faces:
                    maximal = False
                    break
            if maximal:
                out.append(f)
        return tuple(out)

    @property
    def dim(self) -> int:
        """Dimension; ``-1`` for ``{∅}`` and ``-2`` for the void complex."""
        if self.void:
            return -2
        return max(f.bit_count() for f in self.faces) - 1

    def faces_of_size(self, k: int) -> list[int]:
        return [f for f in self.sorted_faces if f.bit_count() == k]

    def is_simplex(self) -> bool:
        return not self.void and self.vertex_mask in self.faces

    def restrict(self, omega: int) -> "SimplicialComplex":
        """Full subcomplex ``K|_ω`` (same ground set)."""
        if self.void:
            return self
        return SimplicialComplex(self.m, frozenset(f for f in self.faces if not f & ~omega))

    def link(self, sigma: int) -> "SimplicialComplex":
        """``{τ : τ∩σ = ∅, τ∪σ ∈ K}``, void when ``σ ∉ K``."""
        if sigma not in self.faces:
            return SimplicialComplex.void_complex(self.m)
        return SimplicialComplex(
            self.m, frozenset(f for f in self.faces if not f & sigma and f | sigma in self.faces)
        )

    def minimal_nonfaces(self) -> list[int]:
        top = full(self.m)
        if self.void:
            return [0]
        out = []
        for s in sorted(submasks(top), key=lex_key):
            if s in self.faces:
                continue
            if all(s & ~(1 << v) in self.faces for v in bits(s)):
                out.append(s)
        return out

    def facet_lists(self) -> list[list[int]]:
        """Facets as sorted 1-based vertex lists."""
        return [[b + 1 for b in bits(f)] for f in self.facets]

    def __repr__(self) -> str:
        if self.void:
            return f"SimplicialComplex(m={self.m}, void)"
        return f"SimplicialComplex(m={self.m}, facets=[{', '.join(fmt(f) for f in self.facets)}])"


def make_complex(m: int, facets: Sequence[Iterable[int]], void: bool = False) -> SimplicialComplex:
    """Downward closure of ``facets`` (1-based vertex lists) on ``[m]``."""
    masks = []
    for f in facets:
        f = list(f)
        for v in f:
            if v < 1 or v > m:
                raise ComplexError(f"vertex {v} outside [1, {m}]")
        masks.append(mask_of(f))
    return SimplicialComplex.from_masks(m, masks, void=void)


# text and JSON formats ------------------------------------------------------------


def parse_complex(text: str) -> SimplicialComplex:
    """Read ``m=<int>`` / ``facets=1 2,2 3`` / optional ``void=true``, or the same keys as JSON.

    An empty ``facets=`` line gives ``{∅}``.
    """
    text = text.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ComplexError(f"bad JSON complex: {exc}") from None
        if not isinstance(data, dict) or "m" not in data:
            raise ComplexError("JSON complex needs an 'm' key")
        m = data["m"]
        facets = data.get("facets", [])
        void = bool(data.get("void", False))
        if not isinstance(m, int) or not isinstance(facets, list):
            raise ComplexError("JSON complex: 'm' must be an int and 'facets' a list")
        if void:
            return SimplicialComplex.void_complex(m)
        return make_complex(m, [list(f) for f in facets])
    fields: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ComplexError(f"expected key=value, got {line!r}")
        key = key.strip()
        if key not in ("m", "facets", "void"):
            raise ComplexError(f"unknown key {key!r}")
        fields[key] = value.strip()
    if "m" not in fields:
        raise ComplexError("missing m= line")
    try:
        m = int(fields["m"])
    except ValueError:
        raise ComplexError(f"bad m value {fields['m']!r}") from None
    if fields.get("void", "false").lower() in ("true", "1", "yes"):
        return SimplicialComplex.void_complex(m)
    facets = []
    raw = fields.get("facets", "")
    if raw:
        for chunk in raw.split(","):
            try:
                facets.append([int(v) for v in chunk.split()])
            except ValueError:
                raise ComplexError(f"bad facet {chunk.strip()!r}") from None
    return make_complex(m, facets)


def format_complex(K: SimplicialComplex) -> str:
    lines = [f"m={K.m}"]
    if K.void:
        lines.append("void=true")
    else:
        lines.append("facets=" + ",".join(" ".join(map(str, f)) for f in K.facet_lists() if f))
    return "\n".join(lines) + "\n"


def complex_to_json(K: SimplicialComplex) -> dict:
    return {"m": K.m, "facets": [] if K.void else [f for f in K.facet_lists() if f], "void": K.void}


def parse_complexes(text: str) -> list[SimplicialComplex]:
    """Several complexes separated by lines of ``---`` (or a JSON list)."""
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ComplexError(f"bad JSON list: {exc}") from None
        return [parse_complex(json.dumps(d)) for d in data]
    chunks, cur = [], []
    for line in text.splitlines():
        if line.strip() == "---":
            chunks.append("\n".join(cur))
            cur = []
        else:
            cur.append(line)
    chunks.append("\n".join(cur))
    return [parse_complex(c) for c in chunks if c.strip()]


@dataclass(frozen=True)
class IndexPair:
    sigma: int
    omega: int

    def __post_init__(self):
        if self.sigma & self.omega:
            raise ComplexError(f"index pair ({fmt(self.sigma)}, {fmt(self.omega)}) is not disjoint")

    def complement(self, m: int) -> int:
        """``σ' = [m] ∖ (σ ∪ ω)``."""
        return full(m) & ~(self.sigma | self.omega)

    def is_right(self) -> bool:
        return self.sigma == 0

    def is_left(self) -> bool:
        return self.omega != 0

    def __repr__(self) -> str:
        return f"({fmt(self.sigma)}, {fmt(self.omega)})"


def index_pairs(m: int, universe: str = "xm") -> list[IndexPair]:
    """All pairs in ``𝒳_m`` (``xm``), ``ℛ_m`` (``rm``) or ``ℒ_m`` (``lm``), in a fixed order."""
    out = []
    top = full(m)
    for omega in sorted(submasks(top), key=lex_key):
        for sigma in sorted(submasks(top & ~omega), key=lex_key):
            p = IndexPair(sigma, omega)
            if universe == "rm" and sigma:
                continue
            if universe == "lm" and not omega:
                continue
            out.append(p)
    if universe not in ("xm", "rm", "lm"):
        raise ValueError(f"unknown universe {universe!r}")
    return out


def in_universe(p: IndexPair, universe: str) -> bool:
    if universe == "xm":
        return True
    if universe == "rm":
        return p.sigma == 0
    if universe == "lm":
        return p.omega != 0
    raise ValueError(f"unknown universe {universe!r}")


def local_complex(K: SimplicialComplex, p: IndexPair) -> SimplicialComplex:
    """``K_{σ,ω} = {τ ⊆ ω : τ ∪ σ ∈ K}``; void when ``σ ∉ K``."""
    if p.sigma not in K.faces:
        return SimplicialComplex.void_complex(K.m)
    sigma, omega = p.sigma, p.omega
    return SimplicialComplex(
        K.m, frozenset(f for f in submasks(omega) if f | sigma in K.faces)
    )


def alexander_dual(K: SimplicialComplex, s: int) -> SimplicialComplex:
    """``K° = {S∖σ : σ ⊆ S, σ ∉ K}`` relative to ``S``."""
    if s == 0:
        raise ComplexError("the dual needs a nonempty ground set S")
    if K.vertex_mask & ~s:
        raise ComplexError("vertex set of K is not inside S")
    faces = frozenset(s & ~f for f in submasks(s) if f not in K.faces)
    if not faces:
        return SimplicialComplex.void_complex(K.m)
    return SimplicialComplex(K.m, faces)


def union(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    if K.void:
        return L
    if L.void:
        return K
    return SimplicialComplex(max(K.m, L.m), K.faces | L.faces)


def intersection(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    if K.void or L.void:
        return SimplicialComplex.void_complex(max(K.m, L.m))
    return SimplicialComplex(max(K.m, L.m), K.faces & L.faces)


def shift_faces(faces: Iterable[int], offset: int) -> list[int]:
    return [f << offset for f in faces]


def _join_face_sets(parts: Sequence[tuple[Iterable[int], int]]) -> set[int]:
    """All unions ``f_1 | ... | f_k`` with ``f_i`` from the i-th (faces, offset) entry."""
    acc = {0}
    for faces, offset in parts:
        shifted = [f << offset for f in faces]
        acc = {a | b for a in acc for b in shifted}
    return acc


def join(X: SimplicialComplex, Y: SimplicialComplex) -> SimplicialComplex:
    """``X * Y`` on the disjoint union ``[m_X] ⊔ [m_Y]`` (Y shifted by ``m_X``)."""
    m = X.m + Y.m
    if X.void or Y.void:
        return SimplicialComplex.void_complex(m)
    faces = _join_face_sets([(X.faces, 0), (Y.faces, X.m)])
    return SimplicialComplex(m, frozenset(faces))


def product_complex(factors: Sequence[SimplicialComplex]) -> SimplicialComplex:
    """Staircase product of several non-void complexes.

    The vertex ``(v_1, ..., v_k)`` (0-based) is numbered in mixed radix, so for two
    factors on ``[s]`` and ``[t]`` the vertex ``(i, j)`` becomes ``i*t + j``.
    Faces are chains in the coordinatewise order whose projections are faces.
    """
    for F in factors:
        if F.void:
            raise ComplexError("staircase product of a void complex is undefined")
    sizes = [F.m for F in factors]
    ground = 1
    for s in sizes:
        ground *= s
    if not factors:
        return SimplicialComplex.empty(0)
    if ground > MAX_GROUND:
        raise ComplexError(f"product ground set of size {ground} exceeds {MAX_GROUND}")
    verts = [[v for v in range(F.m) if (1 << v) in F.faces] for F in factors]
    if any(not vs for vs in verts):
        return SimplicialComplex.empty(ground)
    points = sorted(itertools.product(*verts))
    index = {}
    for pt in points:
        n = 0
        for v, s in zip(pt, sizes):
            n = n * s + v
        index[pt] = n
    faces = {0}
    k = len(factors)

    def extend(start: int, last: tuple[int, ...], proj: list[int], face: int):
        for i in range(start, len(points)):
            pt = points[i]
            if any(pt[j] < last[j] for j in range(k)):
                continue
            new_proj = [proj[j] | (1 << pt[j]) for j in range(k)]
            if all(new_proj[j] in factors[j].faces for j in range(k)):
                new_face = face | (1 << index[pt])
                faces.add(new_face)
                extend(i + 1, pt, new_proj, new_face)

    for i, pt in enumerate(points):
        proj = [1 << pt[j] for j in range(k)]
        f = 1 << index[pt]
        faces.add(f)
        extend(i + 1, pt, proj, f)
    return SimplicialComplex(ground, frozenset(faces))


def staircase_product(X: SimplicialComplex, Y: SimplicialComplex) -> SimplicialComplex:
    if X.void or Y.void:
        raise ComplexError("staircase product of a void complex is undefined")
    return product_complex([X, Y])


@dataclass(frozen=True)
class PairSequence:
    """Pairs ``(X_k, A_k)`` with ``A_k ⊆ X_k`` on ``[n_k]``, glued as ``[n_1] ⊔ ... ⊔ [n_m]``."""

    entries: tuple[tuple[SimplicialComplex, SimplicialComplex], ...]
    offsets: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        entries = tuple((X, A) for X, A in self.entries)
        object.__setattr__(self, "entries", entries)
        offs = []
        total = 0
        for X, A in entries:
            if X.m != A.m:
                raise ComplexError("pair members must share a ground set")
            if not A.faces <= X.faces:
                raise ComplexError("A_k is not a subcomplex of X_k")
            offs.append(total)
            total += X.m
        object.__setattr__(self, "offsets", tuple(offs))

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return sum(X.m for X, _ in self.entries)

    def block_mask(self, k: int) -> int:
        return full(self.entries[k][0].m) << self.offsets[k]

    def split(self, mask: int) -> list[int]:
        """Split a subset of ``[n]`` into its pieces on each ``[n_k]``."""
        return [(mask >> off) & full(X.m) for (X, _), off in zip(self.entries, self.offsets)]

    def glue(self, pieces: Sequence[int]) -> int:
        out = 0
        for p, off in zip(pieces, self.offsets):
            out |= p << off
        return out


def pairs_of(entries: Iterable[tuple[SimplicialComplex, SimplicialComplex]]) -> PairSequence:
    return PairSequence(tuple(entries))


def polyhedral_join(K: SimplicialComplex, pairs: PairSequence) -> SimplicialComplex:
    """``∪_{τ∈K} Y_1 * ... * Y_m`` with ``Y_k = X_k`` for ``k ∈ τ`` and ``A_k`` otherwise."""
    if K.m != pairs.m:
        raise ComplexError(f"K lives on [{K.m}] but {pairs.m} pairs were given")
    n = pairs.n
    if K.void:
        return SimplicialComplex.void_complex(n)
    faces: set[int] = set()
    for tau in K.facets:
        parts = []
        dead = False
        for k, ((X, A), off) in enumerate(zip(pairs.entries, pairs.offsets)):
            Y = X if tau >> k & 1 else A
            if Y.void:
                dead = True
                break
            parts.append((Y.faces, off))
        if dead:
            continue
        faces |= _join_face_sets(parts)
    if not faces:
        return SimplicialComplex.void_complex(n)
    return SimplicialComplex(n, frozenset(faces))


def polyhedral_product_complex(K: SimplicialComplex, pairs: PairSequence) -> SimplicialComplex:
    """``∪_{τ∈K} D(τ)`` with ``D(τ)`` the staircase product of the ``Y_k``."""
    if K.m != pairs.m:
        raise ComplexError(f"K lives on [{K.m}] but {pairs.m} pairs were given")
    for X, A in pairs.entries:
        if X.void or A.void:
            raise ComplexError("polyhedral product needs non-void X_k and A_k")
    ground = 1
    for X, _ in pairs.entries:
        ground *= X.m
    if K.void:
        return SimplicialComplex.empty(ground)
    faces: set[int] = set()
    for tau in K.facets:
        factors = [X if tau >> k & 1 else A for k, (X, A) in enumerate(pairs.entries)]
        faces |= product_complex(factors).faces
    return SimplicialComplex(ground, frozenset(faces))


def composition_pairs(Ls: Sequence[SimplicialComplex]) -> PairSequence:
    entries = []
    for L in Ls:
        if L.void:
            raise ComplexError("composition factor L_k must not be the void complex")
        if L.faces == SimplicialComplex.simplex(L.m).faces:
            raise ComplexError("composition factor L_k must not be the full simplex")
        entries.append((SimplicialComplex.simplex(L.m), L))
    return PairSequence(tuple(entries))


def composition_complex(K: SimplicialComplex, Ls: Sequence[SimplicialComplex]) -> SimplicialComplex:
    """``Z*(K; L_1, ..., L_m)``: polyhedral join with the pairs ``(Δ^{[n_k]}, L_k)``."""
    return polyhedral_join(K, composition_pairs(Ls))


def local_pairs(pairs: PairSequence, p: IndexPair) -> PairSequence:
    """Pairs of local complexes ``((X_k)_{σ_k,ω_k}, (A_k)_{σ_k,ω_k})`` on the pieces of ``p``."""
    sig = pairs.split(p.sigma)
    om = pairs.split(p.omega)
    entries = []
    for (X, A), s, w in zip(pairs.entries, sig, om):
        q = IndexPair(s, w)
        entries.append((local_complex(X, q), local_complex(A, q)))
    return PairSequence(tuple(entries))


def embed(K: SimplicialComplex, m: int, offset: int = 0) -> SimplicialComplex:
    """Copy of ``K`` on a larger ground set ``[m]``, shifted by ``offset``."""
    if K.void:
        return SimplicialComplex.void_complex(m)
    return SimplicialComplex(m, frozenset(f << offset for f in K.faces))


def reindex(K: SimplicialComplex, keep: int) -> SimplicialComplex:
    """Compress the ground set to the vertices in ``keep`` (in order)."""
    order = bits(keep)
    pos = {b: i for i, b in enumerate(order)}
    m = len(order)
    if K.void:
        return SimplicialComplex.void_complex(m)
    faces = set()
    for f in K.faces:
        if f & ~keep:
            raise ComplexError("face leaves the kept vertex set")
        faces.add(sum(1 << pos[b] for b in bits(f)))
    return SimplicialComplex(m, frozenset(faces))


def all_complexes(m: int, include_void: bool = True) -> list[SimplicialComplex]:
    """Every simplicial complex on ``[m]`` (ghost vertices allowed); only sensible for m ≤ 4."""
    top = full(m)
    nonempty = sorted((s for s in submasks(top) if s), key=lex_key)
    seen: set[frozenset[int]] = set()
    out = []
    if include_void:
        out.append(SimplicialComplex.void_complex(m))

    # Enumerate antichains of nonempty sets; each gives a distinct downward closure.
    def rec(i: int, chosen: list[int]):
        if i == len(nonempty):
            K = SimplicialComplex.from_masks(m, chosen)
            if K.faces not in seen:
                seen.add(K.faces)
                out.append(K)
            return
        s = nonempty[i]
        rec(i + 1, chosen)
        if all(not (c & s == c or c & s == s) for c in chosen):
            rec(i + 1, chosen + [s])

    rec(0, [])
    return out
