#!/usr/bin/env python3
"""Profile the leading-term structure of the invariant-ring self-map.

For each prime, expand f(ptilde^k) in the basis e_l = ptilde^l(ptilde-p)
and print the leading index, its coefficient, and any coordinates above
it.  At p = 3 the picture is exactly triangular (leading coefficient 1
at index 4k-1, nothing above); from p = 5 on the sum sum_u q^[u](p+1)
is no longer a ptilde-polynomial and unit-sized residuals appear above
the leading index -- run this to see the profile.

    python scripts/leading_term_profile.py [p ...]
"""

import sys

from qprism.descent import build_context, f_on_powers, to_e_coords, wcart_h1_structure


def profile(p: int, K: int = 4, N: int = 8):
    print(f"\n=== p = {p}  (K = {K}, N = {N}) ===")
    ctx = build_context(p, N, K)
    for name, ok in ctx.checks.items():
        print(f"  [{'ok' if ok else 'XX'}] {name}")
    if ctx.w_poly_residuals:
        print(f"  nonzero ptilde-digits of f(ptilde) above degree p+1 at: "
              f"{ctx.w_poly_residuals}")
    rep = wcart_h1_structure(ctx)
    rows = K * (p + 1) + 2
    fs = f_on_powers(ctx, K)
    for k in range(1, K + 1):
        coords, _ = to_e_coords(ctx, fs[k], rows)
        lead = k * (p + 1) - 1
        shown = {l: c for l, c in enumerate(coords) if c and l <= lead + 3}
        print(f"  f(ptilde^{k}): leading index {lead}, "
              f"coefficient {coords[lead]}")
        print(f"    coords (truncated): {shown}")
        if rep.residuals[k]:
            print(f"    residuals above: {rep.residuals[k][:6]} ...")
    print(f"  free cokernel indices <= {K * (p + 1) - 1}: {rep.free_indices}")
    print(f"  kernel = constants: "
          f"{rep.checks['kernel = constants (columns independent with unit pivots)']}")


if __name__ == "__main__":
    primes = [int(a) for a in sys.argv[1:]] or [3, 5]
    for p in primes:
        profile(p)
