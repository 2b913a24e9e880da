"""Run every verification suite and print a one-line summary per suite,
with timings. Exit status 1 if any identity fails."""

import sys
import time

from shiftconv.verify import SUITES, run_suite


def main():
    bad = 0
    for name in SUITES:
        t0 = time.perf_counter()
        reports = run_suite(name)
        ok = sum(r.passed for r in reports)
        bad += len(reports) - ok
        print(f"{name:20s} {ok:3d}/{len(reports):<3d} {time.perf_counter() - t0:7.1f} s")
        for r in reports:
            if not r.passed:
                print(f"    FAIL {r.identity_id}: |diff| {r.abs_diff:.3e} > {r.tolerance:.3e}")
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
