import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import complexes, complexes_on, index_pair
from polyprod.complexes import (
    ComplexError, IndexPair, SimplicialComplex, alexander_dual, all_complexes, composition_complex,
    composition_pairs, format_complex, intersection, join, local_complex, local_pairs, make_complex,
    pairs_of, parse_complex, parse_complexes, polyhedral_join, polyhedral_product_complex,
    staircase_product, union,
)
from polyprod.chains import complex_homology
from polyprod.subsets import full, mask_of


def closed(K):
    return all((f & ~(1 << v)) in K.faces for f in K.faces for v in range(K.m) if f >> v & 1)


# construction ---------------------------------------------------------------------------


def test_boundary_triangle_has_seven_faces():
    K = make_complex(3, [{1, 2}, {2, 3}, {1, 3}])
    assert len(K) == 7
    assert 0 in K.faces
    assert K == SimplicialComplex.simplex_boundary(3)


def test_void_and_empty_are_distinct():
    V = make_complex(2, [], void=True)
    E = make_complex(4, [set()])
    assert V.void and len(V) == 0
    assert not E.void and E.faces == frozenset({0})
    assert V != SimplicialComplex.empty(2)


def test_vertex_out_of_range_is_rejected():
    with pytest.raises(ComplexError):
        make_complex(2, [{1, 3}])


@given(complexes(allow_void=True))
def test_downward_closed(K):
    assert closed(K)


def test_catalog_sizes():
    # down-sets of the Boolean lattice, void included: Dedekind numbers
    assert [len(all_complexes(m)) for m in range(5)] == [2, 3, 6, 20, 168]


# parsing ---------------------------------------------------------------------------------


@given(complexes(allow_void=True))
def test_format_parse_round_trip(K):
    assert parse_complex(format_complex(K)) == K


def test_parse_json_and_text_agree():
    a = parse_complex("m=4\nfacets=1 2,2 3,3 4,1 4\n")
    b = parse_complex('{"m": 4, "facets": [[1,2],[2,3],[3,4],[1,4]]}')
    assert a == b
    assert parse_complex("m=3\nfacets=\n") == SimplicialComplex.empty(3)
    assert parse_complex("m=3\nvoid=true\n").void


def test_parse_several():
    Ks = parse_complexes("m=2\nfacets=1 2\n---\nm=1\nfacets=\n")
    assert Ks == [SimplicialComplex.simplex(2), SimplicialComplex.empty(1)]


@pytest.mark.parametrize("text", ["facets=1 2", "m=x\nfacets=1", "m=2\nfacets=1 5", "{bad json"])
def test_parse_errors(text):
    with pytest.raises(ComplexError):
        parse_complex(text)


# local complexes ---------------------------------------------------------------------------


def test_local_complex_example():
    K = SimplicialComplex.simplex_boundary(3)
    L = local_complex(K, IndexPair(mask_of([1]), mask_of([2, 3])))
    assert oracles.faces_of(L) == {frozenset(), frozenset({2}), frozenset({3})}


def test_local_complex_of_nonface_is_void():
    K = SimplicialComplex.simplex_boundary(3)
    assert local_complex(K, IndexPair(full(3), 0)).void


def test_local_complex_trivial_pair():
    K = SimplicialComplex.simplex_boundary(3)
    assert local_complex(K, IndexPair(0, 0)) == SimplicialComplex.empty(3)


@given(st.data())
def test_local_complex_matches_oracle(data):
    m = data.draw(st.integers(1, 4))
    K = data.draw(complexes_on(m))
    sigma, omega = data.draw(index_pair(m))
    L = local_complex(K, IndexPair(sigma, omega))
    expect = oracles.local_complex(oracles.faces_of(K), _fs(sigma), _fs(omega))
    if expect is None:
        assert L.void
    else:
        assert oracles.faces_of(L) == expect


def _fs(mask):
    return frozenset(v + 1 for v in range(mask.bit_length()) if mask >> v & 1)


# Alexander duality ---------------------------------------------------------------------------


def test_dual_of_simplex_is_void():
    assert alexander_dual(SimplicialComplex.simplex(3), full(3)).void


def test_dual_of_boundary_is_empty_complex():
    assert alexander_dual(SimplicialComplex.simplex_boundary(3), full(3)) == SimplicialComplex.empty(3)


def test_dual_of_square():
    sq = make_complex(4, [{1, 2}, {2, 3}, {3, 4}, {1, 4}])
    assert alexander_dual(sq, full(4)) == make_complex(4, [{1, 3}, {2, 4}])


def test_dual_needs_nonempty_ground():
    with pytest.raises(ComplexError):
        alexander_dual(SimplicialComplex.empty(2), 0)


@given(complexes(allow_void=True))
def test_dual_is_involution(K):
    S = full(K.m)
    assert alexander_dual(alexander_dual(K, S), S) == K


@given(complexes(allow_void=True))
def test_dual_matches_oracle(K):
    D = alexander_dual(K, full(K.m))
    expect = oracles.alexander_dual(oracles.faces_of(K) if not K.void else None, frozenset(range(1, K.m + 1)))
    assert (D.void and expect is None) or oracles.faces_of(D) == expect


@given(st.data())
def test_de_morgan(data):
    m = data.draw(st.integers(1, 4))
    K1, K2 = data.draw(complexes_on(m)), data.draw(complexes_on(m))
    S = full(m)
    assert alexander_dual(union(K1, K2), S) == intersection(alexander_dual(K1, S), alexander_dual(K2, S))
    assert alexander_dual(intersection(K1, K2), S) == union(alexander_dual(K1, S), alexander_dual(K2, S))


# joins and products ------------------------------------------------------------------------


def test_join_of_two_point_pairs_is_square():
    S0 = SimplicialComplex.simplex_boundary(2)
    assert join(S0, S0) == make_complex(4, [{1, 3}, {1, 4}, {2, 3}, {2, 4}])


def test_join_with_void_and_empty():
    K = SimplicialComplex.simplex_boundary(3)
    assert join(SimplicialComplex.void_complex(1), K).void
    assert join(SimplicialComplex.empty(0), K) == K


def test_staircase_square():
    X = SimplicialComplex.simplex(2)
    P = staircase_product(X, X)
    # vertices (i,j) numbered i*2+j: (1,1)=1 (1,2)=2 (2,1)=3 (2,2)=4
    assert sorted(P.facet_lists()) == [[1, 2, 4], [1, 3, 4]]


def test_staircase_point_and_empty():
    pt = SimplicialComplex.simplex(1)
    assert staircase_product(pt, pt) == SimplicialComplex.simplex(1)
    assert staircase_product(SimplicialComplex.empty(1), SimplicialComplex.simplex_boundary(3)).faces == frozenset({0})
    with pytest.raises(ComplexError):
        staircase_product(SimplicialComplex.void_complex(1), pt)


def test_polyhedral_join_examples():
    D2, S0 = SimplicialComplex.simplex(2), SimplicialComplex.simplex_boundary(2)
    K = SimplicialComplex.simplex_boundary(2)
    assert polyhedral_join(K, pairs_of([(D2, S0), (D2, S0)])) == SimplicialComplex.simplex_boundary(4)
    assert polyhedral_join(SimplicialComplex.void_complex(2), pairs_of([(D2, S0), (D2, S0)])).void
    full_join = polyhedral_join(SimplicialComplex.simplex(2), pairs_of([(K, S0), (S0, S0)]))
    assert full_join == join(K, S0)


@given(st.data())
def test_polyhedral_join_matches_oracle(data):
    m = data.draw(st.integers(1, 2))
    K = data.draw(complexes_on(m))
    entries, raw, sizes = [], [], []
    for _ in range(m):
        n = data.draw(st.integers(1, 3))
        X = data.draw(complexes_on(n))
        A = intersection(X, data.draw(complexes_on(n)))
        entries.append((X, A))
        raw.append((oracles.faces_of(X), oracles.faces_of(A)))
        sizes.append(n)
    got = polyhedral_join(K, pairs_of(entries))
    expect = oracles.polyhedral_join(oracles.faces_of(K), raw, sizes)
    assert (got.void and expect is None) or oracles.faces_of(got) == expect


def test_polyhedral_product_examples():
    D2, S0 = SimplicialComplex.simplex(2), SimplicialComplex.simplex_boundary(2)
    P = polyhedral_product_complex(SimplicialComplex.empty(2), pairs_of([(D2, S0), (D2, S0)]))
    assert P.faces == frozenset({0} | {1 << v for v in range(4)})
    P = polyhedral_product_complex(SimplicialComplex.simplex_boundary(2), pairs_of([(D2, S0), (D2, S0)]))
    assert complex_homology(P).betti() == {0: 1, 1: 1}
    Pv = polyhedral_product_complex(SimplicialComplex.void_complex(2), pairs_of([(D2, S0), (D2, S0)]))
    assert Pv.faces == frozenset({0})


def test_composition_examples():
    B2 = SimplicialComplex.simplex_boundary(2)
    assert composition_complex(B2, [B2, B2]) == SimplicialComplex.simplex_boundary(4)
    K = make_complex(3, [{1, 2}, {3}])
    E1 = SimplicialComplex.empty(1)
    assert composition_complex(K, [E1, E1, E1]) == K
    assert composition_complex(SimplicialComplex.simplex(2), [B2, E1]) == SimplicialComplex.simplex(3)
    with pytest.raises(ComplexError):
        composition_pairs([SimplicialComplex.simplex(2)])
    with pytest.raises(ComplexError):
        composition_pairs([SimplicialComplex.void_complex(2)])


# local pairs and factorization ---------------------------------------------------------------


def _small_pair_instances():
    B2, D2, E1 = SimplicialComplex.simplex_boundary(2), SimplicialComplex.simplex(2), SimplicialComplex.empty(1)
    path = make_complex(3, [{1, 2}, {2, 3}])
    return [
        (SimplicialComplex.simplex_boundary(2), [(D2, B2), (D2, B2)]),
        (make_complex(2, [{1}]), [(path, make_complex(3, [{1}, {3}])), (D2, SimplicialComplex.empty(2))]),
        (make_complex(3, [{1, 2}, {3}]), [(B2, SimplicialComplex.empty(2)), (SimplicialComplex.simplex(1), E1), (path, path)]),
    ]


@pytest.mark.parametrize("K,entries", _small_pair_instances())
def test_local_commutes_with_polyhedral_join(K, entries):
    pairs = pairs_of(entries)
    Z = polyhedral_join(K, pairs)
    n = pairs.n
    for sigma in range(1 << n):
        rest = full(n) & ~sigma
        for omega in [w for w in range(1 << n) if not w & ~rest]:
            p = IndexPair(sigma, omega)
            lhs = local_complex(Z, p)
            rhs = polyhedral_join(K, local_pairs(pairs, p))
            assert lhs == rhs, (sigma, omega)


@given(st.data())
def test_factorization_through_void_pairs(data):
    m = data.draw(st.integers(1, 3))
    K = data.draw(complexes_on(m))
    entries = []
    S = 0
    for k in range(m):
        X = data.draw(complexes_on(2))
        if data.draw(st.booleans()):
            entries.append((X, SimplicialComplex.void_complex(2)))
            S |= 1 << k
        else:
            entries.append((X, intersection(X, data.draw(complexes_on(2)))))
    lhs = polyhedral_join(K, pairs_of(entries))
    if S not in K.faces:
        assert lhs.void
        return
    keep = [k for k in range(m) if not S >> k & 1]
    link = K.link(S)
    link_kept = SimplicialComplex.from_masks(
        len(keep), [sum(1 << i for i, k in enumerate(keep) if f >> k & 1) for f in link.faces])
    inner = polyhedral_join(link_kept, pairs_of([entries[k] for k in keep])) if keep else SimplicialComplex.empty(0)
    outer = SimplicialComplex.empty(0)
    for k in range(m):
        if S >> k & 1:
            outer = join(outer, entries[k][0])
    # reorder the blocks of lhs to (kept blocks, void blocks) before comparing
    offs = [0]
    for k in range(m):
        offs.append(offs[-1] + 2)
    order = keep + [k for k in range(m) if S >> k & 1]
    perm = {}
    pos = 0
    for k in order:
        for j in range(2):
            perm[offs[k] + j] = pos
            pos += 1
    moved = SimplicialComplex.from_masks(2 * m, [sum(1 << perm[v] for v in range(2 * m) if f >> v & 1) for f in lhs.faces])
    assert moved == join(inner, outer)
