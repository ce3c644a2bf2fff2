import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import complexes
from polyprod.complexes import IndexPair, SimplicialComplex, all_complexes, index_pairs, make_complex
from polyprod.linalg import F2, QQ, Coeffs
from polyprod.rings import (
    ATOM_COPRODUCTS, FAMILIES, UNIVERSAL, ProductFamily, aw_cup_product, composition_ring,
    composition_ring_direct, coproduct_terms, cycle_components, cyclic_sign, diagonal_tensor_algebra,
    local_coproduct, local_product, local_product_formula, polygon, polygon_expected_corrected,
    polygon_expected_literal, polygon_ring, polyhedral_ring, polyhedral_ring_oracle, polyhedral_ring_printed,
    rank_profiles_equal, table_condition, tensor_rings, total_cohomology_ring,
)
from polyprod.subsets import full, shuffle_sign
from polyprod.total import block_generators

ALL_FAMILIES = [ProductFamily(n, r) for n in FAMILIES for r in (False, True)]
SMALL = [K for m in (1, 2) for K in all_complexes(m, include_void=False)]
UP_TO_3 = [K for m in (1, 2, 3) for K in all_complexes(m, include_void=False)]


def _fs(mask):
    return [v + 1 for v in range(mask.bit_length()) if mask >> v & 1]


# signs and families -----------------------------------------------------------------------------


def test_shuffle_sign_example():
    assert shuffle_sign(0b101, 0b010) == -1


@given(st.integers(0, 63), st.integers(0, 63))
def test_shuffle_sign_matches_inversions(a, b):
    b &= ~a
    assert shuffle_sign(a, b) == oracles.shuffle_sign(_fs(a), _fs(b))


def test_family_parsing():
    assert ProductFamily.parse("right_universal") == ProductFamily("universal", True)
    assert ProductFamily.parse("strictly-normal'") == ProductFamily("strictly_normal", True)
    assert ProductFamily.parse("special").default_universe == "xm"
    with pytest.raises(ValueError):
        ProductFamily.parse("abnormal")


def test_right_variant_kills_e():
    f = ProductFamily("universal", True)
    assert f.terms("e") == ()
    assert all("e" not in t for atom in ("i", "n", "nbar") for t in f.terms(atom))


@pytest.mark.parametrize("name", list(ATOM_COPRODUCTS))
def test_atom_coproducts_are_chain_maps(name):
    """ψ(d n̄) = (d⊗1 + 1⊗d) ψ(n̄) on the four-atom complex, with the Koszul sign."""
    fam = ProductFamily(name)
    lhs = {}
    for t in fam.terms("n"):
        lhs[t] = lhs.get(t, 0) + 1
    rhs = {}
    for a, b in fam.terms("nbar"):
        if a == "nbar":
            rhs[("n", b)] = rhs.get(("n", b), 0) + 1
        if b == "nbar":
            s = -1 if a == "nbar" else 1
            rhs[(a, "n")] = rhs.get((a, "n"), 0) + s
    assert {k: v for k, v in lhs.items() if v} == {k: v for k, v in rhs.items() if v}


# local coproducts -------------------------------------------------------------------------------


@pytest.mark.parametrize("fam", ALL_FAMILIES, ids=lambda f: f.label)
def test_local_coproduct_is_a_slice_of_the_tensor_power(fam):
    for K in SMALL:
        m = K.m
        live = [p for p in index_pairs(m) if p.sigma in K.faces]
        for p in live:
            for t in block_generators(K, p):
                expand = coproduct_terms(t, m, fam)
                for p1 in live:
                    for p2 in live:
                        want = {(t1, t2): s for (t1, t2), s in expand.items() if t1.pair == p1 and t2.pair == p2}
                        got = {(t1, t2): s for tt, t1, t2, s in local_coproduct(K, p, p1, p2, fam) if tt == t}
                        assert got == want


@pytest.mark.parametrize("fam", ALL_FAMILIES, ids=lambda f: f.label)
def test_partiality_small(fam):
    """Every family's local product is the universal one or zero."""
    for K in SMALL:
        live = [p for p in index_pairs(K.m) if p.sigma in K.faces and not (fam.right and p.sigma)]
        for p, p1, p2 in itertools.product(live, repeat=3):
            L = local_product(K, p1, p2, p, fam)
            assert not L or L == local_product(K, p1, p2, p, UNIVERSAL)


def test_right_family_refuses_left_pairs():
    K = SimplicialComplex.simplex(2)
    with pytest.raises(ValueError):
        local_product(K, IndexPair(1, 0), IndexPair(0, 0), IndexPair(1, 0), ProductFamily("universal", True))


def test_universal_formula_strict_is_exact():
    for K in SMALL:
        live = [p for p in index_pairs(K.m) if p.sigma in K.faces]
        for p, p1, p2 in itertools.product(live, repeat=3):
            assert local_product_formula(K, p1, p2, p, strict=True) == local_product(K, p1, p2, p)


def test_universal_formula_literal_has_a_witness():
    # e never splits off an n, so σ must miss ω'∪ω''; the literal formula misses that
    K = SimplicialComplex.simplex(1)
    p0, p1, q = IndexPair(0, 0), IndexPair(0, 1), IndexPair(1, 0)
    assert local_product(K, p0, p1, q) == {}
    assert local_product_formula(K, p0, p1, q, strict=False) == {(0, 0): {0: 1}}


@pytest.mark.parametrize("name", ["normal", "strictly_normal", "special"])
def test_table_rows_are_exact(name):
    fam = ProductFamily(name)
    for K in SMALL:
        live = [p for p in index_pairs(K.m) if p.sigma in K.faces]
        for p, p1, p2 in itertools.product(live, repeat=3):
            U = local_product(K, p1, p2, p)
            if not U:
                continue
            L = local_product(K, p1, p2, p, fam)
            assert bool(L) == table_condition(fam, p1, p2, p, K)


def test_weakly_special_row_needs_the_extra_condition():
    fam = ProductFamily("weakly_special")
    literal_misses = 0
    for K in SMALL:
        live = [p for p in index_pairs(K.m) if p.sigma in K.faces]
        for p, p1, p2 in itertools.product(live, repeat=3):
            U = local_product(K, p1, p2, p)
            if not U:
                continue
            L = local_product(K, p1, p2, p, fam)
            assert bool(L) == table_condition(fam, p1, p2, p, K, corrected=True)
            literal_misses += bool(L) != table_condition(fam, p1, p2, p, K)
    assert literal_misses > 0


def test_special_and_weakly_special_differ_locally():
    K = SimplicialComplex.simplex(1)
    p0, p1 = IndexPair(0, 0), IndexPair(0, 1)
    assert local_product(K, p0, p0, p1, ProductFamily("special")) == {}
    assert local_product(K, p0, p0, p1, ProductFamily("weakly_special")) == {(0, 0): {1: 1}}


def test_special_and_weakly_special_agree_on_the_empty_complex():
    """On {∅} every local complex is {∅}; no n̄ ever occurs, so the tables coincide."""
    for m in (1, 2, 3):
        K = SimplicialComplex.empty(m)
        live = index_pairs(m, "rm")
        for p, p1, p2 in itertools.product(live, repeat=3):
            assert local_product(K, p1, p2, p, ProductFamily("special")) == \
                local_product(K, p1, p2, p, ProductFamily("weakly_special"))


@pytest.mark.parametrize("right", [False, True])
def test_special_and_weakly_special_rings_coincide(right):
    for K in UP_TO_3:
        A = total_cohomology_ring(K, ProductFamily("special", right), coeffs=QQ)
        B = total_cohomology_ring(K, ProductFamily("weakly_special", right), coeffs=QQ)
        assert A.constants == B.constants


# products on a full simplex ------------------------------------------------------------------------


def _simplex_law(name, a, b, S, m):
    out = {}
    for p in index_pairs(m):
        s, w = p.sigma, p.omega
        if s & ~S or w & S:
            continue
        s1, w1, s2, w2 = a.sigma, a.omega, b.sigma, b.omega
        if name in ("universal", "normal"):
            ok = not (s1 | s2) & ~s and not w & ~(w1 | w2)
        elif name == "strictly_normal":
            ok = s == s1 | s2 and w == w1 | w2
        else:  # special and weakly special
            ok = s == s1 | s2 and w == w1 | w2 and not s1 & s2 and not w1 & w2
        if ok:
            out[p] = 1
    return out


@pytest.mark.parametrize("name", FAMILIES)
def test_simplex_product_laws(name):
    for m in (1, 2, 3):
        for S in range(1, full(m) + 1):
            R = total_cohomology_ring(SimplicialComplex.simplex(m, S), name, "xm", QQ)
            assert all(b.degree == 0 for b in R.basis)
            for i, a in enumerate(R.basis):
                for j, b in enumerate(R.basis):
                    got = {R.basis[k].pair: c for k, c in R.product(i, j).items()}
                    assert got == _simplex_law(name, a.pair, b.pair, S, m)


def test_full_simplex_disjoint_supports():
    """On Δ^[m] two classes with disjoint supports multiply to the class on the union
    (strictly normal), and the universal sum runs over σ ⊇ σ'∪σ''."""
    m = 3
    K = SimplicialComplex.simplex(m)
    R = total_cohomology_ring(K, "universal", "xm", QQ)
    idx = {b.pair: i for i, b in enumerate(R.basis)}
    got = {R.basis[k].pair for k in R.product(idx[IndexPair(1, 0)], idx[IndexPair(2, 0)])}
    assert got == {IndexPair(3, 0), IndexPair(7, 0)}
    S = total_cohomology_ring(K, "strictly_normal", "xm", QQ)
    idx = {b.pair: i for i, b in enumerate(S.basis)}
    assert {S.basis[k].pair for k in S.product(idx[IndexPair(1, 0)], idx[IndexPair(2, 0)])} == {IndexPair(3, 0)}


# algebra laws -------------------------------------------------------------------------------------


@pytest.mark.parametrize("fam", [ProductFamily(n, r) for n in ("strictly_normal", "special", "weakly_special")
                                 for r in (False, True)], ids=lambda f: f.label)
def test_algebra_laws(fam):
    for K in SMALL:
        for F in (QQ, F2):
            R = total_cohomology_ring(K, fam, coeffs=F)
            assert R.is_associative() and R.is_graded_commutative() and R.is_unital()
            assert R.degree_additive()


@pytest.mark.parametrize("name", ["right_universal", "right_normal"])
def test_universal_and_normal_are_not_always_associative(name):
    assoc = sum(total_cohomology_ring(K, name, coeffs=QQ).is_associative() for K in UP_TO_3)
    assert (assoc, len(UP_TO_3)) == (8, 26)


def test_ring_needs_a_field():
    with pytest.raises(ValueError):
        total_cohomology_ring(SimplicialComplex.simplex(1), "universal", coeffs=Coeffs(0, False))


# Alexander-Whitney and polyhedral rings --------------------------------------------------------------


def test_projective_plane_square_over_f2():
    from test_homology_engine import RP2
    R = aw_cup_product(RP2, F2)
    x, = R.in_degree(1)
    y, = R.in_degree(2)
    assert R.product(x, x) == {y: 1}
    assert aw_cup_product(RP2, QQ).betti() == {0: 1}


def test_torus_cup_product():
    # cyclic 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7
    tri = [{i % 7 + 1, (i + a) % 7 + 1, (i + 3) % 7 + 1} for i in range(7) for a in (1, 2)]
    T = make_complex(7, tri)
    R = aw_cup_product(T, QQ)
    assert R.betti() == {0: 1, 1: 2, 2: 1}
    assert R.multiplication_rank(1, 1) == 1
    assert R.is_associative() and R.is_graded_commutative()


@pytest.mark.parametrize("F", [QQ, F2])
def test_disk1_ring_matches_staircase_model(F):
    for K in SMALL + [SimplicialComplex.simplex_boundary(3), make_complex(3, [{1, 2}, {3}])]:
        A = polyhedral_ring(K, "disk:1", F)
        B = polyhedral_ring_oracle(K, "disk:1", F)
        assert rank_profiles_equal(A, B)


@pytest.mark.parametrize("kind", ["disk:2", "disk:3", "sphere:2:1", "sphere:2:0"])
def test_other_pairs_match_staircase_model(kind):
    extra = [] if kind == "disk:3" else [SimplicialComplex.simplex_boundary(2), SimplicialComplex.empty(2)]
    for K in all_complexes(1, include_void=False) + extra:
        A = polyhedral_ring(K, kind, QQ)
        B = polyhedral_ring_oracle(K, kind, QQ)
        assert rank_profiles_equal(A, B), (kind, K)
        assert A.is_associative() and A.is_graded_commutative()


def test_printed_twist_is_not_commutative():
    K = SimplicialComplex.empty(2)
    assert not polyhedral_ring_printed(K, "disk:2", QQ).is_graded_commutative()
    assert polyhedral_ring(K, "disk:2", QQ).is_graded_commutative()


def test_sphere_with_point_pair_needs_primitive_top_class():
    K = SimplicialComplex.simplex(1)  # Z(K; S^2, S^0) = S^2, and e·e must vanish
    printed = polyhedral_ring_printed(K, "sphere:2:0", QQ)
    fixed = polyhedral_ring(K, "sphere:2:0", QQ)
    oracle = polyhedral_ring_oracle(K, "sphere:2:0", QQ)
    assert rank_profiles_equal(fixed, oracle)
    assert not rank_profiles_equal(printed, oracle)


def test_unknown_pair_kinds():
    K = SimplicialComplex.empty(1)
    with pytest.raises(ValueError):
        polyhedral_ring(K, "torus", QQ)
    with pytest.raises(NotImplementedError):
        polyhedral_ring(K, "sphere:3:0", QQ)


# composition rings --------------------------------------------------------------------------------------


def _shifted(K, fam, n):
    R = total_cohomology_ring(K, ProductFamily(fam, True), "rm", QQ)
    return R.regraded(lambda b: b.degree + (n - 1) * b.pair.omega.bit_count())


def test_two_point_links_give_right_special():
    B2 = SimplicialComplex.simplex_boundary(2)
    for K in UP_TO_3:
        D = composition_ring_direct(K, [B2] * K.m)
        assert rank_profiles_equal(_shifted(K, "special", 2), D)


def test_two_point_links_do_not_give_strictly_normal():
    B2 = SimplicialComplex.simplex_boundary(2)
    K = SimplicialComplex.empty(1)
    D = composition_ring_direct(K, [B2])
    assert not rank_profiles_equal(_shifted(K, "strictly_normal", 2), D)
    agree = sum(rank_profiles_equal(_shifted(K, "strictly_normal", 2), composition_ring_direct(K, [B2] * K.m))
                for K in UP_TO_3)
    assert agree == 12


def test_circle_links_give_right_special():
    B3 = SimplicialComplex.simplex_boundary(3)
    for K in SMALL:
        assert rank_profiles_equal(_shifted(K, "special", 3), composition_ring_direct(K, [B3] * K.m))


def test_composition_ring_matches_direct():
    Ls = [SimplicialComplex.simplex_boundary(2), make_complex(3, [{1, 2}, {3}]), SimplicialComplex.empty(2)]
    for K in SMALL:
        for combo in itertools.product(Ls, repeat=K.m):
            assert rank_profiles_equal(composition_ring(K, list(combo)), composition_ring_direct(K, list(combo)))


# tensor constructions ------------------------------------------------------------------------------------


def test_tensor_rings_associative_up_to_relabelling():
    A = aw_cup_product(SimplicialComplex.simplex_boundary(3), QQ)
    B = aw_cup_product(make_complex(2, [{1}, {2}]), QQ)
    C = total_cohomology_ring(SimplicialComplex.empty(1), "strictly_normal", coeffs=QQ)
    left = tensor_rings(tensor_rings(A, B), C)
    right = tensor_rings(A, tensor_rings(B, C))
    assert left.constants == right.constants
    assert [b.degree for b in left.basis] == [b.degree for b in right.basis]
    assert left.is_associative() and left.is_graded_commutative()


def test_diagonal_tensor_keeps_matching_blocks():
    K = SimplicialComplex.simplex_boundary(2)
    A = total_cohomology_ring(K, "right_strictly_normal", coeffs=QQ)
    D = diagonal_tensor_algebra(A, A)
    assert len(D) == len(A)
    assert all(b.degree == 2 * a.degree for a, b in zip(A.basis, D.basis))
    assert D.is_associative()


# the m-gon ------------------------------------------------------------------------------------------------


def test_cycle_components_and_cyclic_sign():
    assert cycle_components(5, 0b01101) == [0b00001, 0b01100]
    assert cycle_components(6, 0b110011) == [0b110011]
    assert cycle_components(6, 0b010101) == [1, 4, 16]
    assert cyclic_sign(5, 0b00001, 0b00010) == 1
    assert cyclic_sign(5, 0b00010, 0b00001) == -1
    assert cyclic_sign(5, 0b00001, 0b10000) == -1


def _polygon_mismatches(m, expected):
    P = polygon_ring(m)
    bad = 0
    for (w1, i), x in P.h.items():
        for (w2, j), y in P.h.items():
            c, other = P.product_in_kappa(x, y)
            bad += other or c != expected(m, w1, i, w2, j)
    return bad, len(P.h) ** 2


@pytest.mark.parametrize("m", [4, 5, 6])
def test_polygon_corrected_formula(m):
    assert _polygon_mismatches(m, polygon_expected_corrected)[0] == 0


@pytest.mark.parametrize("m,correct,total", [(4, 4, 4), (5, 46, 100), (6, 474, 1156)])
def test_polygon_printed_formula_counts(m, correct, total):
    bad, n = _polygon_mismatches(m, polygon_expected_literal)
    assert (n - bad, n) == (correct, total)


@pytest.mark.parametrize("m", [4, 5, 6])
def test_polygon_kappa_annihilates(m):
    P = polygon_ring(m)
    assert P.table.product(P.kappa, P.kappa) == {}
    for x in P.h.values():
        assert P.table.product(x, P.kappa) == {} and P.table.product(P.kappa, x) == {}
    assert P.table.product(P.unit, P.kappa) == {P.kappa: 1}


def test_polygon_witness():
    """ω'={1,3}, ω''={2,4} on the 5-gon: the block product is zero, the printed value is not."""
    m, w1, w2 = 5, 0b00101, 0b01010
    P = polygon_ring(m)
    assert P.product_in_kappa(P.h[(w1, 1)], P.h[(w2, 1)]) == (0, False)
    assert polygon_expected_literal(m, w1, 1, w2, 1) != 0
    T = P.table
    src1 = [i for i, b in enumerate(T.basis) if b.pair == IndexPair(0, w1)]
    src2 = [i for i, b in enumerate(T.basis) if b.pair == IndexPair(0, w2)]
    assert src1 and src2
    assert all(not T.product(i, j) for i in src1 for j in src2)
