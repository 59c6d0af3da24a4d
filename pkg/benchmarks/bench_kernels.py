"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel and size with the best time per call for each
backend, the speedup, and whether the outputs agree.
"""

from __future__ import annotations

import argparse
import random
import sys
import timeit
from fractions import Fraction

import numpy as np

from charcoords import _kernels_py as py

try:
    from charcoords import _kernels as cy
except ImportError:
    cy = None


def _word_case(n: int, length: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    gens = rng.standard_normal((2, n, n)) + 1j * rng.standard_normal((2, n, n))
    inv = np.linalg.inv(gens)
    letters = rng.integers(0, 2, size=length)
    inverted = rng.integers(0, 2, size=length).astype(np.uint8)
    return gens, inv, letters, inverted


def _convolve_case(size: int, seed: int = 0):
    rng = random.Random(seed)
    def draw():
        return [Fraction(rng.randint(-50, 50), rng.randint(1, 12)) for _ in range(size)]
    return draw(), draw()


def _best(fn, repeat: int) -> float:
    number = max(1, int(0.05 / max(timeit.timeit(fn, number=1), 1e-7)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if cy is None:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1
    print(f"{'kernel':<20}{'size':>12}{'compiled':>14}{'python':>14}{'speedup':>10}  agree")
    ok = True
    for n, length in ((2, 10), (3, 10), (4, 16), (6, 24)):
        case = _word_case(n, length)
        Wc, dWc = cy.word_jacobian(*case)
        Wp, dWp = py.word_jacobian(*case)
        agree = np.allclose(Wc, Wp, rtol=1e-12, atol=1e-12) and np.allclose(dWc, dWp, rtol=1e-12, atol=1e-12)
        ok &= agree
        tc = _best(lambda: cy.word_jacobian(*case), args.repeat)
        tp = _best(lambda: py.word_jacobian(*case), args.repeat)
        print(f"{'word_jacobian':<20}{f'n={n},L={length}':>12}{tc * 1e6:>12.1f}us{tp * 1e6:>12.1f}us{tp / tc:>9.2f}x  {agree}")
    for size in (8, 32, 128):
        a, b = _convolve_case(size)
        agree = cy.rational_convolve(a, b) == py.rational_convolve(a, b)
        ok &= agree
        tc = _best(lambda: cy.rational_convolve(a, b), args.repeat)
        tp = _best(lambda: py.rational_convolve(a, b), args.repeat)
        print(f"{'rational_convolve':<20}{f'len={size}':>12}{tc * 1e6:>12.1f}us{tp * 1e6:>12.1f}us{tp / tc:>9.2f}x  {agree}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
