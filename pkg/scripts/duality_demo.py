"""Alexander duality on a few named complexes.

Prints the dual, the local groups on both sides of each block, and the matrix of
γ over Q for the top block.

    python3 scripts/duality_demo.py
"""

from polyprod.complexes import IndexPair, format_complex, index_pairs, make_complex
from polyprod.duality import dual_relative, gamma_certificate, gamma_tensor_compat
from polyprod.linalg import QQ, ZZ
from polyprod.rings import polygon
from polyprod.subsets import fmt, full

RP2 = make_complex(6, [
    {1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}, {1, 2, 6},
    {2, 3, 5}, {2, 4, 5}, {2, 4, 6}, {3, 4, 6}, {3, 5, 6},
])


def show(name, K, all_blocks=False):
    print(f"== {name}")
    print("dual:", format_complex(dual_relative(K, full(K.m))).strip().replace("\n", "; "))
    blocks = [p for p in index_pairs(K.m) if p.omega] if all_blocks else [IndexPair(0, full(K.m))]
    for p in blocks:
        c = gamma_certificate(K, p, ZZ, explicit=False)
        if c.left.is_zero() and c.right.is_zero():
            continue
        print(f"  ({fmt(p.sigma)}, {fmt(p.omega)}): H = {c.left}   H^ dual = {c.right}   matched={c.matched}")
    top = IndexPair(0, full(K.m))
    c = gamma_certificate(K, top, QQ)
    for d, M in c.matrices.items():
        print(f"  gamma over Q, degree {d}: {[[str(x) for x in row] for row in M]}")


def main():
    show("4-gon", polygon(4), all_blocks=True)
    show("5-gon", polygon(5))
    show("projective plane", RP2)
    B2 = make_complex(2, [{1}, {2}])
    rep = gamma_tensor_compat(B2, [B2, B2], IndexPair(0, full(4)))
    print("== composition Z*(S^0; S^0, S^0), block ({}, [4])")
    print(f"  vacuous={rep.vacuous} compatible={rep.compatible} signs={rep.signs}")


if __name__ == "__main__":
    main()
