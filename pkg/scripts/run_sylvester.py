"""Toric period of the 3-adic newform for the curves x^3 + y^3 = p.

Usage: python scripts/run_sylvester.py [--primes 7 13 31 43 ...] [--limit N]
"""

import argparse
import time

from sympy import primerange

from waldperiods.sylvester import SylvesterParams, beta3_newform


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="*", help="primes = 4, 7 mod 9 (default: all below --limit)")
    ap.add_argument("--limit", type=int, default=200)
    ap.add_argument("--precision", type=int, default=14)
    args = ap.parse_args()
    primes = args.primes or [p for p in primerange(5, args.limit) if p % 9 in (4, 7)]
    print(f"{'p':>5} {'p%9':>4} {'beta':>6} {'conj':>6} {'ratio':>6} {'9|a exactly':>12} {'c=-1 mod 9':>11} {'ok':>4} {'sec':>6}")
    for p in primes:
        t = time.perf_counter()
        rep = beta3_newform(p, args.precision)
        inv = SylvesterParams.for_prime(p).invariants()
        print(f"{p:>5} {rep.p_mod_9:>4} {str(rep.beta.to_rational()):>6} {str(rep.beta_conjugated.to_rational()):>6}"
              f" {str(rep.ratio):>6} {str(inv['a_exact_valuation']):>12} {str(inv['c_mod_9']):>11}"
              f" {str(rep.ok):>4} {time.perf_counter() - t:>6.2f}")


if __name__ == "__main__":
    main()
