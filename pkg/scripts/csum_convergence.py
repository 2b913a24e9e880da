"""Convergence of the c-sum for phi*(n, s) as the largest modulus doubles,
next to the Fourier-extraction value of the same coefficient.

    python3 scripts/csum_convergence.py --n -1 --s 3
"""

import argparse

from shiftconv.chars import make_character
from shiftconv.cli import parse_complex
from shiftconv.eisenstein import phi_star, phi_star_constant, phi_star_extract


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--n", type=int, default=-1)
    ap.add_argument("--s", type=parse_complex, default=3)
    ap.add_argument("--no-extract", action="store_true", help="skip the slow extraction route")
    args = ap.parse_args()

    chi = make_character(11, 2)
    prev = None
    for c_max in (110, 220, 440, 880, 1760):
        r = (phi_star(args.n, args.s, chi, c_max=c_max) if args.n
             else phi_star_constant(args.s, chi, c_max=c_max))
        step = "" if prev is None else f"  change {abs(r.value - prev):.3e}"
        print(f"c_max {c_max:5d}: {r.value:.12e}  err_est {r.err_est:.2e}{step}")
        prev = r.value
    if args.n and not args.no_extract:
        ex = phi_star_extract(args.n, args.s, chi, 0.5, 64, 1100)
        print(f"extraction   : {ex.value:.12e}  |diff| {abs(ex.value - prev):.3e}")


if __name__ == "__main__":
    main()
