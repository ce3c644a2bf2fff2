"""Compare the m-gon ring against the printed product rule and the corrected one.

For each m, count the pairs (h_{ω',i}, h_{ω'',j}) where each rule matches the
computed coefficient of κ, and list a few disagreements.

    python3 scripts/polygon_report.py [--max-m 7] [--show 5]
"""

import argparse

from polyprod.rings import polygon_expected_corrected, polygon_expected_literal, polygon_ring
from polyprod.subsets import fmt


def report(m: int, show: int) -> None:
    R = polygon_ring(m)
    total = literal = corrected = 0
    bad = []
    for (w1, i), x in sorted(R.h.items()):
        for (w2, j), y in sorted(R.h.items()):
            got, other = R.product_in_kappa(x, y)
            assert not other, "product left the span of kappa"
            a = polygon_expected_literal(m, w1, i, w2, j)
            b = polygon_expected_corrected(m, w1, i, w2, j)
            total += 1
            literal += got == a
            corrected += got == b
            if got != a and len(bad) < show:
                bad.append(f"  h{fmt(w1)},{i} * h{fmt(w2)},{j}: computed {got}, printed rule {a}, corrected {b}")
    print(f"m={m}: {total} products, printed rule right on {literal}, corrected rule right on {corrected}")
    for line in bad:
        print(line)


def main() -> None:
    ap = argparse.ArgumentParser(description="m-gon ring versus the two product rules")
    ap.add_argument("--max-m", type=int, default=7)
    ap.add_argument("--show", type=int, default=3)
    args = ap.parse_args()
    for m in range(4, args.max_m + 1):
        report(m, args.show)


if __name__ == "__main__":
    main()
