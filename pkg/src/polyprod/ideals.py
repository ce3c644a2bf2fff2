"""Monomial ideals from simplicial complexes, Taylor-complex Tor, and the Hochster identity.

Homological degrees follow the ideal: ``Tor_i(I, k) = Tor_{i+1}(R/I, k)``, so a
principal ideal has ``Tor_0 = k`` only.  Multidegrees are exponent vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .chains import InvariantViolation, reduced_cohomology
from .complexes import (ComplexError, SimplicialComplex, alexander_dual, composition_complex, index_pairs)
from .linalg import Coeffs, F2, rank
from .subsets import bits, full
from .total import local_homology
from .complexes import IndexPair

MAX_TAYLOR_GENERATORS = 20

Exponent = tuple[int, ...]


def divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass(frozen=True)
class MonomialIdeal:
    """Ideal of ``k[x_1..x_n]`` given by a minimal, sorted list of exponent vectors."""

    num_vars: int
    generators: tuple[Exponent, ...]

    def __post_init__(self):
        for g in self.generators:
            if len(g) != self.num_vars or any(e < 0 for e in g):
                raise ValueError(f"bad exponent vector {g}")
        object.__setattr__(self, "generators", minimalize(self.generators))

    @classmethod
    def from_monomials(cls, n: int, gens: Iterable[Sequence[int]]) -> "MonomialIdeal":
        return cls(n, tuple(tuple(g) for g in gens))

    def is_zero(self) -> bool:
        return not self.generators

    def contains(self, mono: Exponent) -> bool:
        return any(divides(g, mono) for g in self.generators)

    def __mul__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        if self.num_vars != other.num_vars:
            raise ValueError("ideals live in different rings")
        return MonomialIdeal(self.num_vars, tuple(tuple(x + y for x, y in zip(a, b))
                                                  for a in self.generators for b in other.generators))

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        if self.num_vars != other.num_vars:
            raise ValueError("ideals live in different rings")
        return MonomialIdeal(self.num_vars, self.generators + other.generators)

    def embed(self, n: int, offset: int) -> "MonomialIdeal":
        """The same generators in ``k[x_1..x_n]`` with variables shifted by ``offset``."""
        pad = lambda g: (0,) * offset + g + (0,) * (n - offset - self.num_vars)
        return MonomialIdeal(n, tuple(pad(g) for g in self.generators))

    def __str__(self) -> str:
        def mono(g):
            parts = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(g) if e]
            return "*".join(parts) or "1"
        return "(" + ", ".join(mono(g) for g in self.generators) + ")"


def minimalize(gens: Iterable[Exponent]) -> tuple[Exponent, ...]:
    uniq = sorted(set(gens), key=lambda g: (sum(g), g))
    out: list[Exponent] = []
    for g in uniq:
        if not any(divides(h, g) for h in out):
            out.append(g)
    return tuple(sorted(out, key=lambda g: tuple(-e for e in g)))


def unit_ideal(n: int) -> MonomialIdeal:
    return MonomialIdeal(n, ((0,) * n,))


def stanley_reisner(K: SimplicialComplex, r: Sequence[int] | None = None) -> MonomialIdeal:
    """``I_{(K; r)}``: generated by ``Π_{i∈ω} x_i^{r_i}`` over the minimal non-faces ``ω``."""
    m = K.m
    r = tuple(r) if r is not None else (1,) * m
    if len(r) != m or any(e < 1 for e in r):
        raise ValueError("r must be a vector of positive integers of length m")
    if K.void:
        raise ComplexError("the void complex has no face ideal here")
    if full(m) in K.faces:
        raise ComplexError("K is the full simplex, whose face ideal is zero")
    gens = []
    for w in K.minimal_nonfaces():
        gens.append(tuple(r[i] if w >> i & 1 else 0 for i in range(m)))
    return MonomialIdeal(m, tuple(gens))


@dataclass
class BettiTable:
    """``(i, multidegree) → dimension``; ``module`` records whether ``i`` counts for ``I`` or ``R/I``."""

    entries: dict[tuple[int, Exponent], int] = field(default_factory=dict)
    module: str = "ideal"

    def add(self, i: int, deg: Exponent, dim: int):
        if dim:
            self.entries[(i, deg)] = self.entries.get((i, deg), 0) + dim

    def totals(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (i, _), v in self.entries.items():
            out[i] = out.get(i, 0) + v
        return dict(sorted(out.items()))

    def total_list(self) -> list[int]:
        t = self.totals()
        return [t.get(i, 0) for i in range(max(t) + 1)] if t else []

    def __eq__(self, other) -> bool:
        return isinstance(other, BettiTable) and self.entries == other.entries

    def rows(self) -> list[dict]:
        return [{"i": i, "multidegree": list(d), "dim": v} for (i, d), v in sorted(self.entries.items())]

    def shifted(self, k: int, module: str) -> "BettiTable":
        return BettiTable({(i + k, d): v for (i, d), v in self.entries.items()}, module)


def taylor_tor(I: MonomialIdeal, module: str = "ideal", coeffs: Coeffs = F2) -> BettiTable:
    """Multigraded ``Tor(I, k)`` or ``Tor(R/I, k)`` from the Taylor complex.

    The Taylor complex has one basis element per subset ``S`` of the generators,
    in multidegree ``lcm(S)``.  After tensoring with ``k`` only the faces of ``S``
    with the same ``lcm`` survive in the differential, so each multidegree is a
    separate finite complex.
    """
    if module not in ("ideal", "quotient"):
        raise ValueError("module is 'ideal' or 'quotient'")
    if not coeffs.field:
        raise ValueError("Tor over the residue field needs field coefficients")
    gens = list(I.generators)
    r = len(gens)
    if r > MAX_TAYLOR_GENERATORS:
        raise ValueError(f"{r} generators exceed the Taylor cap of {MAX_TAYLOR_GENERATORS}")
    n = I.num_vars
    table = BettiTable(module=module)
    if module == "quotient":
        table.add(0, (0,) * n, 1)
    if r == 0:
        return table
    lcms: list[Exponent] = [(0,) * n] * (1 << r)
    groups: dict[Exponent, list[int]] = {}
    for S in range(1, 1 << r):
        low = S & -S
        lcms[S] = lcm(lcms[S ^ low], gens[low.bit_length() - 1])
        groups.setdefault(lcms[S], []).append(S)
    shift = 0 if module == "quotient" else -1
    for deg, subsets in groups.items():
        by_size: dict[int, list[int]] = {}
        for S in subsets:
            by_size.setdefault(S.bit_count(), []).append(S)
        index = {s: {S: j for j, S in enumerate(lst)} for s, lst in by_size.items()}
        ranks = {}
        for s, lst in by_size.items():
            if s - 1 not in index:
                ranks[s] = 0
                continue
            rows = []
            below = index[s - 1]
            for S in lst:
                row = {}
                for pos, j in enumerate(bits(S)):
                    T = S & ~(1 << j)
                    if T in below:
                        row[below[T]] = -1 if pos & 1 else 1
                if row:
                    rows.append(row)
            ranks[s] = rank(rows, coeffs) if rows else 0
        for s, lst in by_size.items():
            dim = len(lst) - ranks[s] - ranks.get(s + 1, 0)
            table.add(s + shift, deg, dim)
    return table


def hochster_side(K: SimplicialComplex, r: Sequence[int] | None = None, coeffs: Coeffs = F2) -> BettiTable:
    """``⊕_{ω∉K} H̃^{|ω|-i-2}(K|_ω)`` placed at ``(i, Σ_{k∈ω} r_k e_k)``."""
    m = K.m
    r = tuple(r) if r is not None else (1,) * m
    table = BettiTable(module="ideal")
    for w in range(1, 1 << m):
        if w in K.faces:
            continue
        deg = tuple(r[k] if w >> k & 1 else 0 for k in range(m))
        h = reduced_cohomology(K.restrict(w), coeffs)
        for d, b in h.betti().items():
            table.add(w.bit_count() - d - 2, deg, b)
    return table


@dataclass
class HochsterReport:
    left: BettiTable
    right: BettiTable

    @property
    def match(self) -> bool:
        return self.left == self.right


def hochster_check(K: SimplicialComplex, r: Sequence[int] | None = None, coeffs: Coeffs = F2) -> HochsterReport:
    return HochsterReport(taylor_tor(stanley_reisner(K, r), "ideal", coeffs), hochster_side(K, r, coeffs))


# composition ideals --------------------------------------------------------------


def composition_ideal(K: SimplicialComplex, ideals: Sequence[MonomialIdeal]) -> MonomialIdeal:
    """``Z^⊗(K; I_1..I_m) = Σ_{τ∈K} Π_{k∉τ} I_k`` in the concatenated polynomial ring."""
    if len(ideals) != K.m:
        raise ValueError(f"K lives on [{K.m}] but {len(ideals)} ideals were given")
    sizes = [I.num_vars for I in ideals]
    n = sum(sizes)
    offsets = list(itertools.accumulate([0] + sizes[:-1]))
    if K.void:
        return MonomialIdeal(n, ())
    lifted = [I.embed(n, off) for I, off in zip(ideals, offsets)]
    gens: list[Exponent] = []
    for tau in K.facets:
        acc = unit_ideal(n)
        for k in range(K.m):
            if not tau >> k & 1:
                acc = acc * lifted[k]
        gens.extend(acc.generators)
    return MonomialIdeal(n, tuple(gens))


@dataclass
class CompositionIdealReport:
    lhs: MonomialIdeal
    rhs: MonomialIdeal

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def composition_ideal_identity(K: SimplicialComplex, Ls: Sequence[SimplicialComplex],
                               rs: Sequence[Sequence[int]] | None = None) -> CompositionIdealReport:
    """Both sides of ``Z^⊗(K; I_{(L_k; r_k)}) = I_{(Z*(K°; L); (r_1..r_m))}``."""
    if rs is None:
        rs = [(1,) * L.m for L in Ls]
    lhs = composition_ideal(K, [stanley_reisner(L, r) for L, r in zip(Ls, rs)])
    Kd = alexander_dual(K, full(K.m))
    Z = composition_complex(Kd, Ls)
    rhs = stanley_reisner(Z, tuple(e for r in rs for e in r))
    return CompositionIdealReport(lhs, rhs)


def composition_tor_formula(K: SimplicialComplex, Ls: Sequence[SimplicialComplex],
                            rs: Sequence[Sequence[int]] | None = None, coeffs: Coeffs = F2) -> BettiTable:
    """``⊕_{σ∈K} H^{σ,[m]∖σ}(K) ⊗ (⊗_{k∉σ} Tor(I_{(L_k; r_k)}, k))`` with multidegrees.

    The factor for ``L_k`` is taken from the Hochster side, so this never touches a
    resolution of the composition ideal itself.
    """
    m = K.m
    if rs is None:
        rs = [(1,) * L.m for L in Ls]
    tors = [hochster_side(L, r, coeffs) for L, r in zip(Ls, rs)]
    sizes = [L.m for L in Ls]
    table = BettiTable(module="ideal")
    if K.void:
        return table
    for sigma in sorted(K.faces):
        h = local_homology(K, IndexPair(sigma, full(m) & ~sigma), coeffs)
        if h.is_zero():
            continue
        factors = []
        for k in range(m):
            if sigma >> k & 1:
                factors.append([(0, (0,) * sizes[k], 1)])
            else:
                factors.append([(i, d, v) for (i, d), v in tors[k].entries.items()])
        for d, b in h.betti().items():
            for combo in itertools.product(*factors):
                i = d + sum(c[0] for c in combo)
                deg = tuple(e for c in combo for e in c[1])
                dim = b
                for c in combo:
                    dim *= c[2]
                table.add(i, deg, dim)
    return table


def composition_tor_check(K: SimplicialComplex, Ls: Sequence[SimplicialComplex],
                          rs: Sequence[Sequence[int]] | None = None, coeffs: Coeffs = F2):
    """Taylor Tor of the composition ideal against the double-sum formula."""
    rep = composition_ideal_identity(K, Ls, rs)
    if not rep.equal:
        raise InvariantViolation("composition ideal identity fails")
    left = taylor_tor(rep.lhs, "ideal", coeffs)
    right = composition_tor_formula(K, Ls, rs, coeffs)
    return left, right
