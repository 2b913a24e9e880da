"""Compare the plain partial sum of the double Dirichlet series with the
smoothed direct route and the c-sum, for growing cutoffs.

    python3 scripts/smoothing_study.py --n -1 --s 2.5 --t 1.8
"""

import argparse

from shiftconv.chars import make_character
from shiftconv.cli import parse_complex
from shiftconv.convolution import ConvolutionQuery, dds_csum, dds_direct, dds_partial_sum


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--n", type=int, default=-1)
    ap.add_argument("--s", type=parse_complex, default=2.5)
    ap.add_argument("--t", type=parse_complex, default=1.8)
    ap.add_argument("--max-log2", type=int, default=18)
    args = ap.parse_args()

    chi = make_character(11, 2)
    q = ConvolutionQuery(args.n, args.s, args.t)
    ref = dds_csum(q, chi=chi, detailed=True)
    print(f"c-sum reference: {ref.value:.15g}  (err_est {ref.err_est:.2e})")
    print(f"{'log2 M':>6}  {'|plain - ref|':>14}  {'|smooth - ref|':>14}  {'smooth err_est':>14}")
    for k in range(10, args.max_log2 + 1, 2):
        M = 1 << k
        plain = dds_partial_sum(q, chi=chi, L=M)
        sm = dds_direct(q, chi=chi, M=M // 4, detailed=True)
        print(f"{k:6d}  {abs(plain - ref.value):14.3e}  {abs(sm.value - ref.value):14.3e}  {sm.err_est:14.3e}")


if __name__ == "__main__":
    main()
