"""Window-relative Hochschild rank growth on order balls.

Builds the windows W_k spanned by the monomials x^a D^b with a + b <= k and
computes the exact rank of the degree-1 boundary b on each.  The images are
commutators of order at most 2k - 2, so the ball is closed only for k <= 2;
past that the overflow itself is the finding and is reported as such.  The
numbers are window truncation data, not homology of the full algebra; the
final line re-checks that 1 lies in [A, A] via the span test.

Usage: python scripts/window_ranks.py [--kmax 4]
"""

import argparse

from expweyl.algebra import WeylAlgebra
from expweyl.errors import WindowOverflow
from expweyl.homology import Window, commutator_span_check, window_rank


def order_ball(A, k):
    mons = []
    for a in range(k + 1):
        for b in range(k + 1 - a):
            e = A.x(1, a) * A.D(1, b)
            mons.extend(e.terms)
    return Window(A, mons)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kmax", type=int, default=4)
    args = ap.parse_args()

    A = WeylAlgebra(n=1, rank=1, p=(2,), t=((0,),))
    print("degree-1 boundary rank on the ball x^a D^b, a+b <= k")
    for k in range(1, args.kmax + 1):
        try:
            rep = window_rank(order_ball(A, k), 1)
        except WindowOverflow:
            print(f"  k={k}: boundary leaves the ball (commutator order up to {2 * k - 2})")
            continue
        print(f"  k={k}: {rep.as_text()}")

    res = commutator_span_check(A.one, [(A.D(1), A.x(1))])
    verdict = "inside" if res.inside else "outside"
    print(f"1 relative to the span of [D, x]: {verdict}")


if __name__ == "__main__":
    main()
