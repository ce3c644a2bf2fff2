import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import complexes, complexes_on, index_pair, proper_complexes
from polyprod.complexes import (
    IndexPair, SimplicialComplex, alexander_dual, composition_complex, make_complex, local_complex,
)
from polyprod.duality import (
    check_complementation, complement_sign, composition_dual_identity, composition_law, degree_only_sign_exists,
    dual_local_identity, dual_relative, gamma_certificate, gamma_matrices, gamma_tensor_compat, involution_check,
)
from polyprod.linalg import F2, QQ, ZZ, Coeffs, rref
from polyprod.rings import polygon
from polyprod.subsets import full, submasks
from polyprod.total import boundary_simplex_expected, local_homology

B2 = SimplicialComplex.simplex_boundary(2)
TWO_EDGES = make_complex(4, [{1, 3}, {2, 4}])


def _fs(mask):
    return frozenset(v + 1 for v in range(mask.bit_length()) if mask >> v & 1)


# complementation ------------------------------------------------------------------------------


def test_complement_sign_values():
    # ω = {1,2,3}; sign counts vertices of ω below each element of η
    w = 0b111
    assert complement_sign(0, w) == 1
    assert complement_sign(0b001, w) == 1
    assert complement_sign(0b010, w) == -1
    assert complement_sign(0b100, w) == 1
    assert complement_sign(0b110, w) == -1
    assert complement_sign(0b111, w) == -1


@given(proper_complexes(max_n=4))
def test_complementation_is_chain_map(L):
    assert check_complementation(L, full(L.m))


@given(complexes(max_m=4, allow_void=True))
def test_complementation_on_any_complex(L):
    assert check_complementation(L, full(L.m))


def test_unsigned_complementation_fails():
    assert check_complementation(B2, full(2), sign=lambda eta, w: 1)  # too small to notice
    assert not check_complementation(SimplicialComplex.empty(2), full(2), sign=lambda eta, w: 1)
    assert not check_complementation(make_complex(3, [{1, 2}]), full(3), sign=lambda eta, w: 1)


def test_no_degree_only_sign_for_two_edges():
    assert not degree_only_sign_exists(TWO_EDGES, full(4))


def test_degree_only_sign_exists_on_tiny_case():
    # on one vertex every sign pattern works up to overall scaling
    assert degree_only_sign_exists(SimplicialComplex.empty(1), 1)


# local dual identity ------------------------------------------------------------------------


def test_dual_relative_of_void_is_full_simplex():
    D = dual_relative(SimplicialComplex.void_complex(3), 0b101)
    assert set(D.faces) == {0, 0b001, 0b100, 0b101}


def test_local_identity_outside_complex():
    # σ ∉ K: the local complex is void, its dual is Δ^ω, and so is the right side
    K = make_complex(3, [{1}, {2}])
    p = IndexPair(0b011, 0b100)
    assert local_complex(K, p).void
    assert dual_relative(local_complex(K, p), p.omega).faces == frozenset(submasks(0b100))
    assert dual_local_identity(K, p)


def test_square_dual_is_two_edges():
    K = polygon(4)
    assert alexander_dual(K, full(4)) == TWO_EDGES
    assert dual_local_identity(K, IndexPair(0, full(4)))


def test_local_identity_needs_nonempty_omega():
    with pytest.raises(ValueError):
        dual_local_identity(B2, IndexPair(0, 0))


@given(st.data())
def test_local_identity_property(data):
    m = data.draw(st.integers(1, 4))
    K = data.draw(complexes_on(m))
    sigma, omega = data.draw(index_pair(m))
    if not omega:
        omega, sigma = 1 << (m - 1), sigma & ~(1 << (m - 1))
    p = IndexPair(sigma, omega)
    assert dual_local_identity(K, p)
    # cross-check the left side against the oracle
    L = oracles.local_complex(oracles.faces_of(K), _fs(sigma), _fs(omega))
    left = dual_relative(local_complex(K, p), omega)
    expect = oracles.alexander_dual(L, _fs(omega)) if L is not None else {frozenset(s) for s in oracles.subsets(_fs(omega))}
    got = None if left.void else {_fs(f) for f in left.faces}
    assert got == expect


# γ certificates ---------------------------------------------------------------------------------


@pytest.mark.parametrize("F", [ZZ, QQ, F2])
def test_square_certificate(F):
    cert = gamma_certificate(polygon(4), IndexPair(0, full(4)), F)
    assert cert.matched and cert.chain_map
    assert cert.left.as_dict() == {2: (1, ())}
    # H^1 of the suspended two edges, reflected: |ω| - 2 - 1 = 1
    assert cert.right.free_rank(1) == 1
    if F.field:
        assert len(cert.matrices[2]) == 1 and cert.matrices[2][0][0] != 0


def test_projective_plane_torsion_matches():
    from test_homology_engine import RP2
    cert = gamma_certificate(RP2, IndexPair(0, full(6)), ZZ)
    assert cert.matched
    assert cert.left.torsion(2) == (2,)
    # H~_1(K) ≅ H~^2(K°), suspended degree 3 = 6 - 2 - 1
    assert cert.right.torsion(3) == (2,)
    assert cert.right.as_dict() == {3: (0, (2,))}


def test_projective_plane_explicit_over_f2():
    from test_homology_engine import RP2
    cert = gamma_certificate(RP2, IndexPair(0, full(6)), F2)
    assert cert.matched and set(cert.matrices) == {2, 3}


@pytest.mark.parametrize("F", [QQ, F2, Coeffs(3)])
@given(data=st.data())
def test_gamma_invertible_property(F, data):
    m = data.draw(st.integers(1, 4))
    K = data.draw(complexes_on(m))
    sigma, omega = data.draw(index_pair(m))
    if not omega:
        return
    p = IndexPair(sigma, omega)
    cert = gamma_certificate(K, p, F)
    assert cert.matched
    h = local_homology(K, p, F)
    for d, M in gamma_matrices(K, p, F).items():
        n = h.free_rank(d)
        assert len(M) == n and all(len(r) == n for r in M)
        assert len(rref(M, F, n)[1]) == n


@given(st.data())
def test_certificate_over_integers_property(data):
    m = data.draw(st.integers(1, 4))
    K = data.draw(complexes_on(m))
    sigma, omega = data.draw(index_pair(m))
    if omega:
        assert gamma_certificate(K, IndexPair(sigma, omega), ZZ).matched


def test_certificate_json():
    cert = gamma_certificate(polygon(4), IndexPair(0, full(4)), QQ)
    js = cert.to_json()
    assert js["sigma"] == "{}" and js["matched"] is True
    assert set(js["matrices"]) == {"2"}


def test_certificate_rejects_empty_omega():
    with pytest.raises(ValueError):
        gamma_certificate(B2, IndexPair(0, 0))


@given(st.data())
def test_involution(data):
    m = data.draw(st.integers(1, 4))
    K = data.draw(complexes_on(m))
    sigma, omega = data.draw(index_pair(m))
    if omega:
        assert involution_check(K, IndexPair(sigma, omega))


@pytest.mark.parametrize("S", range(1, 16))
def test_boundary_blocks_against_dual(S):
    """(∂Δ^S)° on [4] is {∅} on S joined with nothing outside, so blocks reflect."""
    K = SimplicialComplex.simplex_boundary(4, S)
    for sigma in submasks(full(4)):
        for omega in submasks(full(4) & ~sigma):
            if not omega:
                continue
            p = IndexPair(sigma, omega)
            cert = gamma_certificate(K, p, ZZ, explicit=False)
            assert cert.matched
            assert cert.left == boundary_simplex_expected(4, S, p)


def test_simplex_base_case():
    # Δ^S has void dual relative to S; every local group with ω ⊆ S vanishes
    S = 0b0111
    K = SimplicialComplex.simplex(4, S)
    for omega in submasks(S):
        if omega:
            cert = gamma_certificate(K, IndexPair(0, omega), ZZ)
            assert cert.left.is_zero() and cert.right.is_zero()


# composition complexes --------------------------------------------------------------------------


def test_composition_dual_example():
    # (∂Δ^[4])° = {∅} and Z*({∅}; {∅}, {∅}) = {∅}
    Z = composition_complex(B2, [B2, B2])
    assert Z == SimplicialComplex.simplex_boundary(4)
    assert dual_relative(Z, full(4)) == SimplicialComplex.empty(4)
    E = SimplicialComplex.empty(2)
    assert composition_complex(dual_relative(B2, full(2)), [E, E]) == SimplicialComplex.empty(4)
    assert composition_dual_identity(B2, [B2, B2])


@given(st.data())
def test_composition_dual_property(data):
    m = data.draw(st.integers(1, 3))
    K = data.draw(complexes(min_m=m, max_m=m))
    Ls = [data.draw(proper_complexes(max_n=3)) for _ in range(m)]
    assert composition_dual_identity(K, Ls)


def _self_dual_catalog():
    from polyprod.sampling import _catalog
    return [K for m in (1, 2, 3) for K in _catalog(m) if dual_relative(K, full(m)) == K]


SELF_DUAL = _self_dual_catalog()


def test_self_dual_catalog_nonempty():
    assert SimplicialComplex.empty(1) in SELF_DUAL
    assert make_complex(2, [{1}]) in SELF_DUAL and make_complex(3, [{1, 2}]) in SELF_DUAL
    assert B2 not in SELF_DUAL


@given(st.data())
def test_self_dual_inputs_give_self_dual_output(data):
    K = data.draw(st.sampled_from(SELF_DUAL))
    Ls = [data.draw(st.sampled_from(SELF_DUAL)) for _ in range(K.m)]
    if sum(L.m for L in Ls) > 7:
        Ls = [SELF_DUAL[0]] * K.m
    Z = composition_complex(K, Ls)
    assert dual_relative(Z, full(Z.m)) == Z


@st.composite
def nested_pairs(draw, max_n=2):
    """A pair (X, A) with A ⊆ X, both on the same vertex set."""
    X = draw(complexes(max_m=max_n))
    keep = draw(st.lists(st.sampled_from(sorted(X.faces)), max_size=3))
    return X, SimplicialComplex.from_masks(X.m, keep)


@given(st.data())
def test_composition_law(data):
    m = data.draw(st.integers(1, 2))
    K = data.draw(complexes(min_m=m, max_m=m))
    pairs = [data.draw(nested_pairs()) for _ in range(m)]
    inner = [[data.draw(nested_pairs(1)) for _ in range(X.m)] for X, _ in pairs]
    assert composition_law(K, pairs, inner)


# tensor compatibility of γ -----------------------------------------------------------------------


def test_tensor_compat_top_block():
    rep = gamma_tensor_compat(B2, [B2, B2], IndexPair(0, full(4)))
    assert not rep.vacuous and rep.compatible
    assert rep.size == 1


@given(st.data())
def test_tensor_compat_property(data):
    m = data.draw(st.integers(1, 2))
    K = data.draw(complexes(min_m=m, max_m=m))
    Ls = [data.draw(proper_complexes(max_n=2)) for _ in range(m)]
    n = sum(L.m for L in Ls)
    sigma, omega = data.draw(index_pair(n))
    if not omega:
        return
    rep = gamma_tensor_compat(K, Ls, IndexPair(sigma, omega))
    assert rep.compatible


def test_tensor_compat_needs_field():
    with pytest.raises(ValueError):
        gamma_tensor_compat(B2, [B2, B2], IndexPair(0, full(4)), ZZ)
