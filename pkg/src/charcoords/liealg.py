"""Trace pairing on sl(n), the SL(2) adjoint action and parabolic invariants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Matrix, Poly, nullspace, rank
from .rep import SL2_E, SL2Matrix, gl2_sym_power, h_minus_power, h_plus, h_plus_power, sym_power, sym_power_lie


def trace_form(v: Matrix, w: Matrix):
    """``trace(v w)``, the invariant pairing used throughout."""
    if v.n != w.n:
        raise ValueError(f"dimension mismatch: {v.n} vs {w.n}")
    # trace(v w) without forming the product
    acc = 0
    for i, row in enumerate(v.rows):
        for k, a in enumerate(row):
            if a:
                b = w.rows[k][i]
                if b:
                    acc = acc + a * b
    return acc


def adjoint_action(A, v: Matrix) -> Matrix:
    """``Sym(A) v Sym(A)^-1`` for ``A`` in SL(2)."""
    if not isinstance(A, SL2Matrix):
        A = SL2Matrix(A)
    n = v.n
    return sym_power(A, n) @ v @ sym_power(A.inverse(), n)


@dataclass(frozen=True)
class PairingConstants:
    n: int
    c: tuple

    def __post_init__(self):
        if any(ci == 0 for ci in self.c):
            raise ValueError("pairing constant vanishes")


def pairing_constants(n: int) -> PairingConstants:
    """``c_i = trace(h_-^i h_+^i)`` for ``i = 1..n-1``."""
    return PairingConstants(n, tuple(trace_form(h_minus_power(n, i), h_plus_power(n, i)) for i in range(1, n)))


def sl_basis(n: int) -> list[Matrix]:
    """Off-diagonal units followed by ``E_ii - E_nn``."""
    basis = [Matrix.unit(n, i, j) for i in range(n) for j in range(n) if i != j]
    last = Matrix.unit(n, n - 1, n - 1)
    basis += [Matrix.unit(n, i, i) - last for i in range(n - 1)]
    return basis


def gram_matrix(n: int) -> list[list]:
    basis = sl_basis(n)
    return [[trace_form(u, v) for v in basis] for u in basis]


def _coords(M: Matrix, basis: list[Matrix]) -> list:
    # coordinates of a traceless matrix in sl_basis order
    n = M.n
    off = [M[i, j] for i in range(n) for j in range(n) if i != j]
    return off + [M[i, i] for i in range(n - 1)]


def parabolic_invariants(n: int) -> list[Matrix]:
    """Basis of ``{v in sl(n) : [h_+, v] = 0}``.

    Raises ``AssertionError`` if the kernel is not spanned by the powers of
    ``h_+``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    hp = h_plus(n)
    basis = sl_basis(n)
    images = [hp.commutator(b).vec() for b in basis]
    system = [list(col) for col in zip(*images)]
    kernel = [sum((b * c for b, c in zip(basis, vec) if c), Matrix.zero(n)) for vec in nullspace(system)]
    powers = [h_plus_power(n, i) for i in range(1, n)]
    assert len(kernel) == n - 1, f"kernel has dimension {len(kernel)}"
    joint = [_coords(M, basis) for M in kernel + powers]
    assert rank(joint) == n - 1, "kernel differs from the span of h_+ powers"
    return kernel


def clebsch_gordan_dims(n: int) -> list[int]:
    """Dimensions of the irreducible SL(2)-summands of sl(n), largest first.

    Found from the weights of ``ad(Sym(e))``: a summand of highest weight
    ``w`` exists once for every drop in multiplicity between ``w`` and
    ``w + 2``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    H = sym_power_lie(SL2_E, n)
    weights = {}
    for b in sl_basis(n):
        image = H.commutator(b)
        # ad(H) is diagonal on the units; read the eigenvalue off any nonzero entry
        i, j = next((i, j) for i in range(n) for j in range(n) if b[i, j])
        w = image[i, j] / b[i, j] if i != j else Fraction(0)
        weights[w] = weights.get(w, 0) + 1
    dims = []
    for w in sorted((w for w in weights if w >= 0), reverse=True):
        count = weights[w] - weights.get(w + 2, 0)
        dims += [int(w) + 1] * count
    return dims


def fixed_by_translation(v: Matrix, beta) -> bool:
    """Whether ``v`` is fixed by the adjoint action of ``(1 beta; 0 1)``."""
    return adjoint_action(SL2Matrix.of(1, beta, 0, 1), v) == v


def diagonal_scaling_holds(n: int, i: int) -> bool:
    """``Ad diag(lam, 1/lam)`` scales ``h_+^i`` by ``lam^(2i)``, with ``lam`` formal.

    ``diag(lam^2, 1) = lam diag(lam, 1/lam)`` and scalars drop out of the
    adjoint action, so with ``S`` its degree ``n-1`` image the claim is the
    polynomial identity ``S h_+^i = lam^(2i) h_+^i S``.
    """
    lam = Poly.gen("lam")
    S = gl2_sym_power(Matrix([[lam * lam, 0], [0, 1]]), n)
    H = h_plus_power(n, i)
    return S @ H == H @ S * lam ** (2 * i)
