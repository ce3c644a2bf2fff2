import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import complexes, proper_complexes
from polyprod.chains import HomologySummary, complex_homology
from polyprod.complexes import (
    IndexPair, SimplicialComplex, composition_complex, composition_pairs, make_complex, pairs_of,
    polyhedral_join, polyhedral_product_complex,
)
from polyprod.decomposition import (
    NotSplitError, composition_block_expected, cone_pair, decompose, disk_pair, disk_pair_closed_form,
    join_total_homology, parse_pair, sphere_pair, sphere_pair_closed_form, split_summary, tensor_summaries,
)
from polyprod.linalg import F2, QQ, ZZ
from polyprod.rings import polygon
from polyprod.sampling import random_complex, random_proper_complex
from polyprod.total import total_homology

D2, S0 = SimplicialComplex.simplex(2), SimplicialComplex.simplex_boundary(2)


# split pairs ---------------------------------------------------------------------------------------


def test_disk_one_parts():
    s = split_summary(D2, S0)
    assert s.i_part.as_dict() == {0: (1, ())}
    assert s.n_part.as_dict() == {0: (1, ())}
    assert s.e_part.is_zero()
    assert s.support == frozenset("in")


def test_simplex_pair_suspended_parts():
    # ∂Δ^[n] is an (n-2)-sphere, so its suspended class sits in degree n-1
    for n in (2, 3, 4):
        s = split_summary(*disk_pair(n - 1), "suspended")
        assert s.n_part.as_dict() == {n - 1: (1, ())}
        assert s.i_part.is_zero() and s.e_part.is_zero()


def test_sphere_pair_parts():
    X, A = sphere_pair(2, 1)
    s = split_summary(X, A)
    assert s.e_part.as_dict() == {2: (1, ())}
    assert s.n_part.as_dict() == {1: (1, ())}
    assert s.i_part.as_dict() == {0: (1, ())}


def test_cone_on_projective_plane_is_not_split():
    from test_homology_engine import RP2
    s = split_summary(*cone_pair(RP2))
    assert not s.split
    assert s.n_part.torsion(1) == (2,)
    with pytest.raises(NotSplitError):
        decompose(SimplicialComplex.empty(1), pairs_of([cone_pair(RP2)]))


def test_pair_must_be_nested():
    with pytest.raises(ValueError):
        split_summary(S0, D2)


@given(proper_complexes(max_n=4), st.sampled_from(["plain", "suspended"]))
def test_parts_add_up(L, variant):
    """Over a field, rank H(X) = e + i and rank H(A) = n + i."""
    X = SimplicialComplex.simplex(L.m)
    s = split_summary(X, L, variant, QQ)
    hx, ha = complex_homology(X, variant, QQ), complex_homology(L, variant, QQ)
    for d in range(-1, L.m + 1):
        assert hx.free_rank(d) == s.e_part.free_rank(d) + s.i_part.free_rank(d)
        assert ha.free_rank(d) == s.n_part.free_rank(d) + s.i_part.free_rank(d)


def test_tensor_summaries_refuses_double_torsion():
    t = HomologySummary.from_dict({1: (0, (2,))})
    with pytest.raises(NotSplitError):
        tensor_summaries(t, t)
    assert tensor_summaries(t, HomologySummary.from_dict({2: (3, ())})).as_dict() == {3: (0, (2, 2, 2))}


def test_pair_catalog():
    assert parse_pair("disk1") == (D2, S0)
    assert parse_pair("disk:2") == disk_pair(2)
    assert parse_pair("sphere:3:1") == sphere_pair(3, 1)
    assert parse_pair("simplex-boundary:3") == (SimplicialComplex.simplex(3), SimplicialComplex.simplex_boundary(3))
    for bad in ("disk", "sphere:1:1", "ball:2", "disk:x"):
        with pytest.raises(ValueError):
            parse_pair(bad)


# product flavor ------------------------------------------------------------------------------------


def test_boundary_of_square():
    K = SimplicialComplex.simplex_boundary(2)
    res = decompose(K, pairs_of([(D2, S0), (D2, S0)]))
    assert res.total.betti() == {0: 1, 1: 1}


def test_void_gives_zero():
    assert decompose(SimplicialComplex.void_complex(2), pairs_of([(D2, S0)] * 2)).total.is_zero()


@pytest.mark.parametrize("m", [1, 2, 3])
def test_empty_complex_is_tensor_of_subspaces(m):
    pair = sphere_pair(2, 1)
    res = decompose(SimplicialComplex.empty(m), pairs_of([pair] * m))
    A = complex_homology(pair[1])
    expect = HomologySummary.from_dict({0: (1, ())})
    for _ in range(m):
        expect = tensor_summaries(expect, A)
    assert res.total == expect


def test_product_matches_direct_on_seeded_complexes():
    rng = random.Random(11)
    for _ in range(25):
        m = rng.randint(1, 3)
        K = random_complex(m, rng)
        entries = [rng.choice([disk_pair(1), sphere_pair(1, 0), cone_pair(random_proper_complex(2, rng))])
                   for _ in range(m)]
        pairs = pairs_of(entries)
        direct = complex_homology(polyhedral_product_complex(K, pairs))
        assert decompose(K, pairs).total == direct


@given(complexes(max_m=4))
def test_disk1_full_sum(K):
    res = disk_pair_closed_form(K, 1)
    P = polyhedral_product_complex(K, pairs_of([(D2, S0)] * K.m))
    assert res.total.as_dict() == oracles.homology(oracles.faces_of(P))
    assert decompose(K, pairs_of([(D2, S0)] * K.m)).total == res.total


def test_square_disk2_betti():
    res = disk_pair_closed_form(polygon(4), 2)
    assert res.total.betti_list(0, 6) == [1, 0, 0, 2, 0, 0, 1]
    D3, S1 = disk_pair(2)
    assert decompose(polygon(4), pairs_of([(D3, S1)] * 4)).total == res.total


@given(complexes(max_m=2))
def test_sphere_closed_form_product(K):
    pairs = pairs_of([sphere_pair(2, 1)] * K.m)
    assert sphere_pair_closed_form(K, 2, 1).total == decompose(K, pairs).total


# join flavor ----------------------------------------------------------------------------------------


def test_join_sphere_example():
    K = SimplicialComplex.simplex_boundary(2)
    pairs = pairs_of([sphere_pair(2, 1)] * 2)
    direct = complex_homology(polyhedral_join(K, pairs), "suspended")
    assert decompose(K, pairs, "join").total == direct
    assert sphere_pair_closed_form(K, 2, 1, "join").total.shift(1) == direct


@given(complexes(max_m=2))
def test_sphere_closed_form_join(K):
    pairs = pairs_of([sphere_pair(2, 0)] * K.m)
    direct = complex_homology(polyhedral_join(K, pairs), "suspended")
    assert sphere_pair_closed_form(K, 2, 0, "join").total.shift(1) == direct


@given(st.data())
def test_join_matches_direct(data):
    m = data.draw(st.integers(1, 2))
    K = data.draw(complexes(min_m=m, max_m=m))
    Ls = [data.draw(proper_complexes(max_n=3)) for _ in range(m)]
    pairs = composition_pairs(Ls)
    Z = composition_complex(K, Ls)
    direct = oracles.homology(oracles.faces_of(Z), "suspended")
    assert decompose(K, pairs, "join").total.as_dict() == direct


def test_composition_top_block():
    B2 = SimplicialComplex.simplex_boundary(2)
    pairs = composition_pairs([B2, B2])
    top = IndexPair(0, 0b1111)
    h = join_total_homology(B2, pairs, [top])[top]
    assert h.as_dict() == {3: (1, ())}  # H̃_2 of the 2-sphere ∂Δ^[4], suspended
    assert composition_block_expected(B2, [B2, B2], pairs, top) == h


@given(st.data())
def test_join_blocks_match_direct_blocks(data):
    m = data.draw(st.integers(1, 2))
    K = data.draw(complexes(min_m=m, max_m=m))
    Ls = [data.draw(proper_complexes(max_n=2)) for _ in range(m)]
    pairs = composition_pairs(Ls)
    Z = composition_complex(K, Ls)
    direct = total_homology(Z)
    assembled = join_total_homology(K, pairs)
    assert assembled.entries == direct.entries
    for p in direct:
        assert composition_block_expected(K, Ls, pairs, p) == direct[p]


def test_reduction_to_tensor_of_reduced_homologies():
    """For composition complexes the suspended homology is the tensor of the suspended pieces."""
    rng = random.Random(3)
    for _ in range(20):
        m = rng.randint(1, 2)
        K = random_complex(m, rng)
        Ls = [random_proper_complex(rng.randint(1, 3), rng) for _ in range(m)]
        h = complex_homology(K, "suspended")
        for L in Ls:
            h = tensor_summaries(h, complex_homology(L, "suspended"))
        assert complex_homology(composition_complex(K, Ls), "suspended") == h


@pytest.mark.parametrize("F", [QQ, F2])
def test_field_coefficients(F):
    K = make_complex(3, [{1, 2}, {2, 3}])
    pairs = pairs_of([sphere_pair(1, 0)] * 3)
    assert decompose(K, pairs, coeffs=F).total.betti() == complex_homology(
        polyhedral_product_complex(K, pairs), coeffs=F).betti()
