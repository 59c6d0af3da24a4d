"""The irreducible representation Sym^(n-1) of SL(2) and its Lie algebra.

Basis of Sym^(n-1)(C^2): ``b_j = x^(n-1-j) y^j`` for ``j = 0..n-1``, where
``A = (a b; c d)`` sends ``x -> a x + c y`` and ``y -> b x + d y``.  With this
convention the image of the upper nilpotent ``f`` has entry ``j`` at
``(j, j+1)`` (1-based) and the image of ``g`` has ``n-1, ..., 1`` on the
subdiagonal, with no rescaling of the basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .exact import Matrix, _fast_convolve, det

#: sl(2) basis
SL2_E = Matrix([[1, 0], [0, -1]])
SL2_F = Matrix([[0, 1], [0, 0]])
SL2_G = Matrix([[0, 0], [1, 0]])


@dataclass(frozen=True)
class SL2Matrix:
    """An SL(2) matrix together with the sign of the lift.

    The element represented is ``sign * matrix``; ``matrix`` itself must have
    determinant one.
    """

    matrix: Matrix
    sign: int = 1

    def __post_init__(self):
        if self.matrix.n != 2:
            raise ValueError("SL2Matrix needs a 2x2 matrix")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if det(self.matrix) != 1:
            raise ValueError("determinant is not 1")

    @classmethod
    def of(cls, a, b, c, d, sign: int = 1) -> "SL2Matrix":
        return cls(Matrix([[a, b], [c, d]]), sign)

    @property
    def value(self) -> Matrix:
        return self.matrix if self.sign == 1 else -self.matrix

    def inverse(self) -> "SL2Matrix":
        (a, b), (c, d) = self.matrix.rows
        return SL2Matrix(Matrix([[d, -b], [-c, a]]), self.sign)

    def __matmul__(self, other: "SL2Matrix") -> "SL2Matrix":
        return SL2Matrix(self.matrix @ other.matrix, self.sign * other.sign)


def upper_unipotent(beta, sign: int = 1) -> SL2Matrix:
    return SL2Matrix.of(1, beta, 0, 1, sign)


def lower_unipotent(beta, sign: int = 1) -> SL2Matrix:
    return SL2Matrix.of(1, 0, beta, 1, sign)


def _conv(p: list, q: list) -> list:
    fast = _fast_convolve(p, q)
    if fast is not None:
        return fast
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] = out[i + j] + a * b
    return out


def _linear_powers(u, v, k: int) -> list[list]:
    """Coefficient lists of ``(u + v*t)^e`` for ``e = 0..k``."""
    out = [[1]]
    for _ in range(k):
        out.append(_conv(out[-1], [u, v]))
    return out


def gl2_sym_power(A: Matrix, n: int) -> Matrix:
    """Degree ``n-1`` action of any 2x2 ``A`` on binary forms (no determinant check)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    (a, b), (c, d) = A.rows
    xs = _linear_powers(a, c, n - 1)
    ys = _linear_powers(b, d, n - 1)
    cols = []
    for j in range(n):
        # image of x^(n-1-j) y^j, as a polynomial in t = y/x
        col = _conv(xs[n - 1 - j], ys[j])
        cols.append(col + [0] * (n - len(col)))
    return Matrix(zip(*cols))


def sym_power(A, n: int) -> Matrix:
    """Image of ``A`` (an :class:`SL2Matrix` or a 2x2 :class:`Matrix`) under Sym^(n-1)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if isinstance(A, Matrix):
        A = SL2Matrix(A)
    M = gl2_sym_power(A.matrix, n)
    if A.sign == -1 and n % 2 == 0:
        M = -M
    return M


def sym_power_lie(X: Matrix, n: int) -> Matrix:
    """Derivative of :func:`sym_power` at the identity, applied to traceless ``X``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if X.n != 2 or X.trace() != 0:
        raise ValueError("X must be a traceless 2x2 matrix")
    (a, b), (c, d) = X.rows
    rows = [[0] * n for _ in range(n)]
    for j in range(n):
        rows[j][j] = (n - 1 - j) * a + j * d
        if j + 1 < n:
            rows[j + 1][j] = (n - 1 - j) * c
        if j > 0:
            rows[j - 1][j] = j * b
    return Matrix(rows)


def h_plus(n: int) -> Matrix:
    return sym_power_lie(SL2_F, n)


def h_minus(n: int) -> Matrix:
    return sym_power_lie(SL2_G, n)


def _check_index(n: int, i: int):
    if not 1 <= i <= n - 1:
        raise ValueError(f"power {i} out of range 1..{n - 1}")


def h_plus_power(n: int, i: int) -> Matrix:
    _check_index(n, i)
    return h_plus(n) ** i


def h_minus_power(n: int, i: int) -> Matrix:
    _check_index(n, i)
    return h_minus(n) ** i


def nilpotent_exp(M: Matrix, beta=1) -> Matrix:
    """``exp(beta*M)`` for nilpotent ``M`` as a finite sum."""
    n = M.n
    term = Matrix.identity(n)
    total = term
    for k in range(1, n):
        term = term @ M
        if term.is_zero():
            break
        total = total + term * (beta**k * Fraction(1, factorial(k)))
    else:
        if not (term @ M).is_zero():
            raise ValueError("matrix is not nilpotent")
    return total


def random_sl2(rng, field=None, height: int = 5) -> SL2Matrix:
    """Random element of SL(2) over ``field`` (default Q) with small coefficients.

    ``rng`` is a :class:`random.Random`.  Entries ``a, b, c`` are drawn and
    ``d = (1 + b c) / a`` is solved for.
    """

    def draw():
        if field is None:
            return Fraction(rng.randint(-height, height), rng.randint(1, height))
        return field([Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(field.degree)])

    a = draw()
    while not a:
        a = draw()
    b, c = draw(), draw()
    d = (1 + b * c) / a
    return SL2Matrix.of(a, b, c, d)
