"""Pure-Python/numpy versions of the hot kernels.

Used when the compiled ``_kernels`` extension is not built.  The compiled
module exposes the same functions with the same semantics.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np


def _scaled(coeffs):
    den = 1
    for c in coeffs:
        if type(c) is not int:
            den = lcm(den, c.denominator)
    if den == 1:
        return [int(c) for c in coeffs], 1
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def rational_convolve(a, b) -> list:
    """Product of two coefficient lists of ints/Fractions."""
    na, da = _scaled(a)
    nb, db = _scaled(b)
    out = [0] * (len(na) + len(nb) - 1)
    for i, x in enumerate(na):
        if x:
            for j, y in enumerate(nb):
                if y:
                    out[i + j] += x * y
    den = da * db
    if den == 1:
        return out
    return [Fraction(s, den) for s in out]


def word_jacobian(gens: np.ndarray, inv_gens: np.ndarray, letters: np.ndarray, inverted: np.ndarray):
    """Product of a word in the generators and its derivative in the generator entries.

    ``gens`` has shape ``(G, n, n)``; ``letters[k]`` is the generator index of
    the k-th letter and ``inverted[k]`` flags an inverse letter.  Returns
    ``W`` of shape ``(n, n)`` and ``dW`` of shape ``(n, n, G, n, n)`` with
    ``dW[i, j, g, r, c] = d W[i, j] / d gens[g, r, c]``.
    """
    G, n, _ = gens.shape
    L = len(letters)
    mats = [inv_gens[g] if inv else gens[g] for g, inv in zip(letters, inverted)]
    prefix = [np.eye(n, dtype=complex)]
    for M in mats:
        prefix.append(prefix[-1] @ M)
    suffix = [np.eye(n, dtype=complex)]
    for M in reversed(mats):
        suffix.append(M @ suffix[-1])
    suffix.reverse()
    dW = np.zeros((n, n, G, n, n), dtype=complex)
    for k in range(L):
        P, S = prefix[k], suffix[k + 1]
        g = letters[k]
        if inverted[k]:
            H = inv_gens[g]
            P = -(P @ H)
            S = H @ S
        dW[:, :, g] += np.einsum("ir,cj->ijrc", P, S)
    return prefix[-1], dW
