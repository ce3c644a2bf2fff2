"""Alexander duality for local complexes and the maps ``γ`` between local groups.

``γ_{K,σ,ω}`` is the composite of the inverse boundary isomorphism
``H̃_{*-1}(K_{σ,ω}) ≅ H_*(Δ^ω, K_{σ,ω})`` with the complementation ``η ↦ ω∖η``
from relative chains to cochains of the dual complex.  Complementation commutes
with the differentials once it carries the sign
``ε_ω(η) = (-1)^{Σ_{j∈η} #{i∈ω : i<j}}``; no sign depending only on ``|η|`` and
``|ω|`` does, which ``degree_only_sign_exists`` confirms on small cases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .chains import HomologySummary, InvariantViolation, cohomology
from .complexes import (IndexPair, SimplicialComplex, alexander_dual, composition_complex,
                        composition_pairs, local_complex, polyhedral_join, pairs_of)
from .linalg import Coeffs, QQ, ZZ, solve
from .rings import cohomology_bases, homology_bases
from .subsets import bits, count_below, full, submasks
from .total import block_chain, local_homology


def complement_sign(eta: int, omega: int) -> int:
    """``ε_ω(η)``, making ``η ↦ ε_ω(η) (ω∖η)`` a chain map ``C_*(Δ^ω, L) → C̃^*(L°)``."""
    e = 0
    for j in bits(eta):
        e += count_below(omega, j)
    return -1 if e & 1 else 1


def dual_relative(L: SimplicialComplex, omega: int) -> SimplicialComplex:
    """Dual of ``L`` relative to ``ω`` (``L`` may be void)."""
    if L.void:
        return SimplicialComplex(L.m, frozenset(submasks(omega)))
    return alexander_dual(L, omega)


def dual_local_identity(K: SimplicialComplex, p: IndexPair) -> bool:
    """``(K_{σ,ω})° = (K°)_{σ',ω}`` with the left dual taken relative to ``ω``."""
    if not p.omega:
        raise ValueError("ω must be nonempty")
    m = K.m
    left = dual_relative(local_complex(K, p), p.omega)
    Kd = dual_relative(K, full(m))
    right = local_complex(Kd, IndexPair(p.complement(m), p.omega))
    return left.void == right.void and left.faces == right.faces


# the complementation chain map -------------------------------------------------------


def _boundary(face: int) -> dict[int, int]:
    return {face & ~(1 << j): (-1 if pos & 1 else 1) for pos, j in enumerate(bits(face))}


def _coboundary(face: int, ground: int) -> dict[int, int]:
    """``δ ζ = Σ_{j∈ground∖ζ} (-1)^{#{i∈ζ : i<j}} (ζ ∪ j)``."""
    return {face | (1 << j): (-1 if count_below(face, j) & 1 else 1) for j in bits(ground & ~face)}


def check_complementation(L: SimplicialComplex, omega: int,
                          sign=complement_sign) -> bool:
    """Verify ``ψ ∂ = δ ψ`` on every generator of ``C_*(Δ^ω, L)``."""
    nonfaces = [eta for eta in submasks(omega) if L.void or eta not in L.faces]
    live = set(nonfaces)
    for eta in nonfaces:
        lhs: dict[int, int] = {}
        for f, c in _boundary(eta).items():
            if f in live:
                z = omega & ~f
                lhs[z] = lhs.get(z, 0) + c * sign(f, omega)
        rhs: dict[int, int] = {}
        z0 = omega & ~eta
        for g, c in _coboundary(z0, omega).items():
            f = omega & ~g
            if f in live:
                rhs[g] = rhs.get(g, 0) + c * sign(eta, omega)
        if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
            return False
    return True


def degree_only_sign_exists(L: SimplicialComplex, omega: int) -> bool:
    """Search all signs ``(-1)^{f(|η|)}`` for one making complementation a chain map."""
    size = omega.bit_count()
    for pattern in itertools.product((1, -1), repeat=size + 1):
        if check_complementation(L, omega, lambda eta, w, pat=pattern: pat[eta.bit_count()]):
            return True
    return False


# certificates ---------------------------------------------------------------------------


@dataclass
class DualityCertificate:
    K: SimplicialComplex
    pair: IndexPair
    left: HomologySummary
    right: HomologySummary
    matched: bool
    chain_map: bool
    matrices: dict[int, list[list]] = field(default_factory=dict)
    sign_rule: str = "(-1)^{sum_{j in eta} #{i in omega : i < j}}"

    def to_json(self) -> dict:
        from .subsets import fmt
        return {"sigma": fmt(self.pair.sigma), "omega": fmt(self.pair.omega),
                "left": self.left.to_json(), "right": self.right.to_json(),
                "matched": self.matched, "chain_map": self.chain_map, "sign_rule": self.sign_rule,
                "matrices": {str(d): [[str(x) for x in row] for row in M] for d, M in self.matrices.items()}}


def _reflected_match(left: HomologySummary, right: HomologySummary, size: int) -> bool:
    degs = set(left.betti()) | {size - 1 - d for d in right.betti()}
    for d in degs | {d for d, _, _ in left.groups} | {size - 1 - d for d, _, _ in right.groups}:
        e = size - 1 - d
        if left.free_rank(d) != right.free_rank(e) or left.torsion(d) != right.torsion(e):
            return False
    return True


def lift_through_boundary(z: dict[int, object], omega: int, F: Coeffs) -> dict[int, object]:
    """A chain ``c`` on ``Δ^ω`` with ``∂c = z`` for a reduced cycle ``z`` (faces of equal size)."""
    if not z:
        return {}
    size = next(iter(z)).bit_count()
    cols = [f for f in submasks(omega) if f.bit_count() == size + 1]
    rows = [f for f in submasks(omega) if f.bit_count() == size]
    ridx = {f: i for i, f in enumerate(rows)}
    M = [[0] * len(cols) for _ in rows]
    for j, c in enumerate(cols):
        for f, s in _boundary(c).items():
            M[ridx[f]][j] = s
    b = [z.get(f, 0) for f in rows]
    x = solve(M, b, F, len(cols))
    if x is None:
        raise InvariantViolation("cycle does not bound in the simplex")
    return {c: v for c, v in zip(cols, x) if v}


def gamma_chain(z: dict[int, object], L: SimplicialComplex, omega: int, F: Coeffs) -> dict[int, object]:
    """``γ`` at chain level: lift ``z`` to ``Δ^ω``, keep non-faces of ``L``, complement."""
    c = lift_through_boundary(z, omega, F)
    out = {}
    for eta, v in c.items():
        if L.void or eta not in L.faces:
            out[omega & ~eta] = F.reduce(v * complement_sign(eta, omega))
    return {k: v for k, v in out.items() if v}


def gamma_certificate(K: SimplicialComplex, p: IndexPair, coeffs: Coeffs = ZZ,
                      explicit: bool = True) -> DualityCertificate:
    """Compare ``H^{σ,ω}_*(K)`` with ``H^{|ω|-*-1}_{σ',ω}(K°)`` and, over a field, build ``γ``."""
    if not p.omega:
        raise ValueError("ω must be nonempty")
    m = K.m
    omega = p.omega
    L = local_complex(K, p)
    if not dual_local_identity(K, p):
        raise InvariantViolation("local dual identity fails")
    chain_ok = check_complementation(L, omega)
    if not chain_ok:
        raise InvariantViolation("complementation is not a chain map")
    Kd = dual_relative(K, full(m))
    q = IndexPair(p.complement(m), omega)
    left = local_homology(K, p, coeffs)
    right = cohomology(block_chain(Kd, q, coeffs), coeffs) if not Kd.void and q.sigma in Kd.faces \
        else HomologySummary.zero(coeffs)
    size = omega.bit_count()
    matched = _reflected_match(left, right, size)
    cert = DualityCertificate(K, p, left, right, matched, chain_ok)
    if coeffs.field and explicit and not left.is_zero():
        cert.matrices = gamma_matrices(K, p, coeffs)
        for d, M in cert.matrices.items():
            if len(M) != left.free_rank(d) or any(len(r) != len(M) for r in M):
                raise InvariantViolation("γ is not square")
            from .linalg import rref
            if len(rref(M, coeffs, len(M))[1]) != len(M):
                raise InvariantViolation("γ is not invertible")
    return cert


def gamma_matrices(K: SimplicialComplex, p: IndexPair, F: Coeffs) -> dict[int, list[list]]:
    """Matrix of ``γ`` per source degree: rows are source classes, columns target classes."""
    m = K.m
    omega = p.omega
    L = local_complex(K, p)
    Kd = dual_relative(K, full(m))
    q = IndexPair(p.complement(m), omega)
    src = block_chain(K, p, F)
    tgt = block_chain(Kd, q, F)
    hsrc = homology_bases(src, F)
    htgt = cohomology_bases(tgt, F)
    out = {}
    for d, B in hsrc.items():
        e = omega.bit_count() - d - 1
        rows = []
        for rep in B.reps:
            z = {g.Nbar: v for g, v in zip(src.basis[d], rep) if v}
            w = gamma_chain(z, L, omega, F)
            vec = [w.get(g.Nbar, 0) for g in tgt.basis.get(e, [])]
            if e not in htgt:
                raise InvariantViolation("γ lands in a zero group")
            rows.append(htgt[e].coordinates(vec))
        out[d] = rows
    return out


def involution_check(K: SimplicialComplex, p: IndexPair, coeffs: Coeffs = ZZ) -> bool:
    """``(K°)° = K``, the dual pair of ``(σ', ω)`` is ``(σ, ω)`` and both certificates match."""
    m = K.m
    Kd = dual_relative(K, full(m))
    Kdd = dual_relative(Kd, full(m))
    if Kdd.void != K.void or Kdd.faces != K.faces:
        return False
    q = IndexPair(p.complement(m), p.omega)
    if q.complement(m) != p.sigma:
        return False
    a = gamma_certificate(K, p, coeffs, explicit=False)
    b = gamma_certificate(Kd, q, coeffs, explicit=False)
    return a.matched and b.matched


# composition complexes ---------------------------------------------------------------------


def composition_dual_identity(K: SimplicialComplex, Ls: Sequence[SimplicialComplex]) -> bool:
    """``Z*(K; L)° = Z*(K°; L°)``, duals relative to ``[n]``, ``[m]`` and ``[n_k]``."""
    Z = composition_complex(K, Ls)
    left = dual_relative(Z, full(Z.m))
    right = composition_complex(dual_relative(K, full(K.m)), [dual_relative(L, full(L.m)) for L in Ls])
    return left.void == right.void and left.faces == right.faces


def composition_law(K: SimplicialComplex, pairs: Sequence[tuple[SimplicialComplex, SimplicialComplex]],
                    inner: Sequence[Sequence[tuple[SimplicialComplex, SimplicialComplex]]]) -> bool:
    """``Z*(K; Z*(X_k; U_k, C_k), Z*(A_k; U_k, C_k)) = Z*(Z*(K; X, A); U, C)``.

    ``inner[k]`` lists one pair ``(U, C)`` per vertex of ``X_k``.
    """
    outer = []
    for (X, A), UC in zip(pairs, inner):
        P = pairs_of(UC)
        outer.append((polyhedral_join(X, P), polyhedral_join(A, P)))
    left = polyhedral_join(K, pairs_of(outer))
    right = polyhedral_join(polyhedral_join(K, pairs_of(pairs)), pairs_of([uc for UC in inner for uc in UC]))
    return left.void == right.void and left.faces == right.faces


# tensor compatibility of γ -------------------------------------------------------------------


def _compress(mask: int, ground: int) -> int:
    """Re-index the bits of ``mask`` inside ``ground`` to ``0..|ground|-1``."""
    out = 0
    for i, v in enumerate(bits(ground)):
        if mask >> v & 1:
            out |= 1 << i
    return out


def _compress_complex(L: SimplicialComplex, ground: int) -> SimplicialComplex:
    n = ground.bit_count()
    if L.void:
        return SimplicialComplex.void_complex(n)
    return SimplicialComplex(n, frozenset(_compress(f, ground) for f in L.faces))


def _suspended_cycles(L: SimplicialComplex, F: Coeffs) -> dict[int, list[dict[int, object]]]:
    """Basis cycles of ``ΣC̃(L)`` per degree ``|τ|``, as dicts face → coefficient."""
    from .chains import simplicial_chain
    C = simplicial_chain(L, "suspended", F)
    hb = homology_bases(C, F)
    return {d: [{f: v for f, v in zip(C.basis[d], rep) if v} for rep in B.reps] for d, B in hb.items()}


def _tensor_chain(parts: Sequence[dict[int, object]], offsets: Sequence[int], F: Coeffs) -> dict[int, object]:
    acc = {0: F.convert(1)}
    for part, off in zip(parts, offsets):
        nxt = {}
        for f, a in acc.items():
            for g, b in part.items():
                nxt[f | (g << off)] = F.reduce(a * b)
        acc = nxt
    return {k: v for k, v in acc.items() if v}


def _phi(total_cycle: dict[int, object], factor_cycles: Sequence[dict[int, object]], factor_lifts: Sequence[dict[int, object]],
         degrees: Sequence[int], offsets: Sequence[int], F: Coeffs) -> dict[int, object]:
    """Künneth map ``T^{∅,[r]}(K') ⊗ ⊗_k H(L'_k) → ΣC̃(Z*(K'; L'))``.

    A generator with ``N̄`` sends coordinate ``k`` to the lift ``c_k`` when ``k ∈ N̄`` and
    to the cycle ``z_k`` otherwise, with sign ``(-1)^{Σ_{k∈N̄} Σ_{j<k} |z_j|}``.
    """
    out: dict[int, object] = {}
    for nbar, a in total_cycle.items():
        s = 0
        for k in bits(nbar):
            s += sum(degrees[:k])
        parts = [factor_lifts[k] if nbar >> k & 1 else factor_cycles[k] for k in range(len(degrees))]
        for f, v in _tensor_chain(parts, offsets, F).items():
            out[f] = F.reduce(out.get(f, 0) + (-a if s & 1 else a) * v)
    return {k: v for k, v in out.items() if v}


def _pair(cochain: dict[int, object], chain: dict[int, object], F: Coeffs):
    return F.reduce(sum((cochain.get(f, 0) * v for f, v in chain.items()), F.convert(0)))


@dataclass
class TensorCompatReport:
    block: IndexPair
    vacuous: bool
    compatible: bool
    signs: dict[tuple, int] = field(default_factory=dict)
    size: int = 0


def _local_data(K: SimplicialComplex, Ls: Sequence[SimplicialComplex], block: IndexPair):
    """Split a block of ``[n]`` into ``(σ, ω)`` on ``[m]`` and the factor blocks."""
    pairs = composition_pairs(Ls)
    sig = pairs.split(block.sigma)
    om = pairs.split(block.omega)
    sigma = 0
    omega = 0
    for k, (L, s, w) in enumerate(zip(Ls, sig, om)):
        if s not in L.faces:
            sigma |= 1 << k
        if w:
            omega |= 1 << k
    return pairs, sig, om, sigma, omega


def _side(Kp: SimplicialComplex, Lp: Sequence[SimplicialComplex], F: Coeffs):
    """Cycle bases and Künneth images for ``Z*(K'; L')`` with ``K'`` on ``[r]``."""
    r = Kp.m
    Ksus = block_chain(Kp, IndexPair(0, full(r)), F)
    kh = homology_bases(Ksus, F)
    k_cycles = [(d, {g.Nbar: v for g, v in zip(Ksus.basis[d], rep) if v}) for d, B in sorted(kh.items()) for rep in B.reps]
    l_cycles = [[(d, z) for d, zs in sorted(_suspended_cycles(L, F).items()) for z in zs] for L in Lp]
    return k_cycles, l_cycles


def gamma_tensor_compat(K: SimplicialComplex, Ls: Sequence[SimplicialComplex], block: IndexPair,
                        coeffs: Coeffs = QQ) -> TensorCompatReport:
    """Check ``γ_{Z*,σ̃,ω̃} = γ_{K,σ,ω} ⊗ (⊗_k γ_{L_k,σ_k,ω_k})`` on one block.

    Both sides are compared as bilinear forms: source classes are pushed into the
    block through the Künneth map ``Φ`` and paired against the Künneth images of
    the dual side.  The identity is accepted when the two pairing matrices agree
    up to one sign per tuple of factor degrees, which is the unit recorded by the
    two decomposition isomorphisms.
    """
    F = coeffs
    if not F.field:
        raise ValueError("explicit γ needs field coefficients")
    if not block.omega:
        raise ValueError("ω̃ must be nonempty")
    pairs, sig, om, sigma, omega = _local_data(K, Ls, block)
    rep = TensorCompatReport(block, True, True)
    if sigma & omega or sigma not in K.faces:
        return rep
    Kp_full = local_complex(K, IndexPair(sigma, omega))
    ks = [k for k in range(K.m) if omega >> k & 1]
    Kp = _compress_complex(Kp_full, omega)
    Lp = [_compress_complex(local_complex(Ls[k], IndexPair(sig[k], om[k])), om[k]) for k in ks]
    if any(L.void or full(L.m) in L.faces for L in Lp):
        return rep
    Kpd = dual_relative(Kp, full(Kp.m))
    Lpd = [dual_relative(L, full(L.m)) for L in Lp]
    if Kpd.void or any(L.void or full(L.m) in L.faces for L in Lpd):
        return rep
    # the local complexes on both sides
    Zp = composition_complex(Kp, Lp)
    Zpd = composition_complex(Kpd, Lpd)
    if dual_relative(Zp, full(Zp.m)).faces != Zpd.faces:
        raise InvariantViolation("local composition duality fails")
    offsets = list(itertools.accumulate([0] + [L.m for L in Lp[:-1]]))
    k_cyc, l_cyc = _side(Kp, Lp, F)
    kd_cyc, ld_cyc = _side(Kpd, Lpd, F)
    if not k_cyc or any(not c for c in l_cyc):
        return rep
    rep.vacuous = False

    def lifts(cycles, Ls_):
        return [[lift_through_boundary(z, full(L.m), F) for _, z in cyc] for cyc, L in zip(cycles, Ls_)]

    l_lift = lifts(l_cyc, Lp)
    ld_lift = lifts(ld_cyc, Lpd)

    # factor pairings B_K and B_{L_k}
    def factor_form(cycles, dual_cycles, L):
        ground = full(L.m)
        return [[_pair(gamma_chain(z, L, ground, F), zd, F) for _, zd in dual_cycles] for _, z in cycles]

    BK = [[_pair(gamma_chain(z, Kp, full(Kp.m), F), zd, F) for _, zd in kd_cyc] for _, z in k_cyc]
    BL = [factor_form(c, cd, L) for c, cd, L in zip(l_cyc, ld_cyc, Lp)]

    src = []
    for a, (da, za) in enumerate(k_cyc):
        for combo in itertools.product(*[range(len(c)) for c in l_cyc]):
            degs = [l_cyc[k][i][0] for k, i in enumerate(combo)]
            chain = _phi(za, [l_cyc[k][i][1] for k, i in enumerate(combo)],
                         [l_lift[k][i] for k, i in enumerate(combo)], degs, offsets, F)
            src.append(((a,) + combo, (da,) + tuple(degs), chain))
    tgt = []
    for a, (da, za) in enumerate(kd_cyc):
        for combo in itertools.product(*[range(len(c)) for c in ld_cyc]):
            degs = [ld_cyc[k][i][0] for k, i in enumerate(combo)]
            chain = _phi(za, [ld_cyc[k][i][1] for k, i in enumerate(combo)],
                         [ld_lift[k][i] for k, i in enumerate(combo)], degs, offsets, F)
            tgt.append(((a,) + combo, chain))
    ground = full(Zp.m)
    ok = True
    signs: dict[tuple, int] = {}
    for idx, degs, chain in src:
        g = gamma_chain(chain, Zp, ground, F)
        for jdx, tchain in tgt:
            lhs = _pair(g, tchain, F)
            rhs = F.convert(BK[idx[0]][jdx[0]])
            for k in range(len(Lp)):
                rhs = F.reduce(rhs * BL[k][idx[k + 1]][jdx[k + 1]])
            if not lhs and not rhs:
                continue
            if lhs == rhs:
                s = 1
            elif F.reduce(lhs + rhs) == 0:
                s = -1
            else:
                ok = False
                continue
            if signs.setdefault(degs, s) != s:
                ok = False
    rep.compatible = ok
    rep.signs = signs
    rep.size = len(src)
    return rep
