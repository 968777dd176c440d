"""Strict-drop survey for the exponential-order filtration.

Sweeps small signatures and a generator set, runs the pairwise filtration
diagnostic, and prints every refutation with its witness monomial.  The
polynomial pairs always confirm the strict commutator drop; switching on
the exponential symbol E with p >= 2 produces genuine refutations, which
is why the kernel treats the drop as a diagnostic and never assumes it.

Usage: python scripts/filtration_report.py [--pmax 3]
"""

import argparse
from itertools import product

from expweyl.algebra import WeylAlgebra
from expweyl.expr import format_element
from expweyl.grading import filtration_diagnostic


def generator_set(A):
    gens = {
        "x": A.x(1),
        "D": A.D(1),
        "exp(x)": A.exp_sym(1, 1),
        "x^2": A.x(1, 2),
        "E": A.E(1),
    }
    return gens


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pmax", type=int, default=3, help="largest exponent p to sweep")
    args = ap.parse_args()

    confirmed = refuted = 0
    for pval, tval in product(range(1, args.pmax + 1), (0, 1)):
        A = WeylAlgebra(n=1, rank=1, p=(pval,), t=((tval,),))
        gens = generator_set(A)
        print(f"signature p={pval}, t={tval}")
        for (na, P), (nb, Q) in product(gens.items(), repeat=2):
            rep = filtration_diagnostic(P, Q)
            if rep.strict_drop:
                confirmed += 1
                continue
            refuted += 1
            witness = format_element(A.from_term(rep.witness, A.field.one))
            print(
                f"  refuted on ({na}, {nb}): ord [P,Q] = {rep.ord_comm} "
                f"= ord P + ord Q = {rep.ord_p + rep.ord_q}, witness {witness}"
            )
    print(f"pairs confirmed: {confirmed}, refuted: {refuted}")


if __name__ == "__main__":
    main()
