"""First-order deformations along cusp cocycles and the sigma-Jacobian certificate.

For a peripheral class ``gamma = m^p l^q`` and the cocycle of ``omega_i``,
``X_i = d(gamma) rho(gamma)`` and ``A = lam Id - rho(gamma)``.  The polynomial
``Q_i = det(A) trace(A^-1 X_i)`` is computed by a closed Neumann sum.  Since

    det(lam Id - (Id + eps d) rho) = det(A - eps X_i) = det(A) - eps Q_i + O(eps^2),

the first-order part of the characteristic polynomial is ``-Q_i``; the dual
number determinant computes that part directly and must equal ``-Q_i``.  The
``lam^(n-j)`` coefficient of the first-order part is the derivative of
``(-1)^j sigma_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cusp import (
    CuspShape,
    Cocycle,
    cocycle_from_form,
    const,
    integrate_form,
    omega,
    torus_images,
    word_of_class,
)
from .exact import (
    Dual,
    Matrix,
    Poly,
    char_poly,
    det,
    linear_factor_divide,
    matrix_inverse_unipotent_shifted,
    serialize,
    shifted_power,
    valuation_at,
)


@dataclass(frozen=True)
class FirstOrderRep:
    """``g -> (Id + eps d(g)) rho(g)`` truncated at first order."""

    cocycle: Cocycle

    def evaluate(self, word: str) -> tuple[Matrix, Matrix]:
        """``(rho(word), eps-part)`` where the eps-part is ``d(word) rho(word)``."""
        rho = self.cocycle.image(word)
        return rho, self.cocycle.evaluate(word) @ rho

    def product(self, w1: str, w2: str) -> tuple[Matrix, Matrix]:
        """First-order product of the deformed images of ``w1`` and ``w2``."""
        r1, x1 = self.evaluate(w1)
        r2, x2 = self.evaluate(w2)
        return r1 @ r2, x1 @ r2 + r1 @ x2


def weil_deform(cocycle: Cocycle, word: str) -> tuple[Matrix, Matrix]:
    return FirstOrderRep(cocycle).evaluate(word)


@dataclass(frozen=True)
class QPolynomial:
    i: int
    pq: tuple
    Q: Poly
    eigenvalue: int
    traces: tuple  # trace(N^k X_i), k = 0..n-1
    v0: int
    v1: int

    @property
    def n(self) -> int:
        return len(self.traces)

    @property
    def first_order(self) -> Poly:
        """eps-coefficient of the deformed characteristic polynomial."""
        return -self.Q


def _setup(i: int, n: int, cusp: CuspShape, pq) -> tuple[Matrix, Matrix, int]:
    if pq == (0, 0):
        raise ValueError("peripheral class must be nontrivial")
    if not 1 <= i <= n - 1:
        raise ValueError(f"index {i} out of range 1..{n - 1}")
    rho = cusp.rho(n, pq)
    c = cusp.eigenvalue(n, pq)
    X = integrate_form(omega(i), pq, n, cusp) @ rho
    return rho, X, c


def peripheral_nilpotent(rho: Matrix, c: int) -> Matrix:
    """``N = c rho - Id`` for ``rho`` with single eigenvalue ``c``; raises unless nilpotent."""
    N = rho * c - Matrix.identity(rho.n)
    if not N.is_nilpotent():
        raise ValueError("peripheral image is not unipotent up to sign")
    return N


def _valuations(Q: Poly, c: int) -> tuple[int, int]:
    if not Q:
        raise ArithmeticError("Q vanishes identically")
    return valuation_at(Q, 0), valuation_at(Q, c)


def q_polynomial(i: int, n: int, cusp: CuspShape = CuspShape(), pq=(1, 0)) -> QPolynomial:
    """``Q_i = sum_k c^k (lam - c)^(n-k-1) trace(N^k X_i)``.

    Here ``rho(gamma) = c (Id + N)`` with ``c = +-1`` and ``N`` nilpotent, so
    ``A^-1 = sum_k c^k N^k / (lam - c)^(k+1)``.
    """
    rho, X, c = _setup(i, n, cusp, pq)
    N = peripheral_nilpotent(rho, c)
    traces = []
    Nk = Matrix.identity(n)
    Q = Poly((), "lam")
    for k in range(n):
        t = (Nk @ X).trace()
        traces.append(t)
        if t:
            Q = Q + shifted_power("lam", c, n - k - 1) * (t * c**k)
        Nk = Nk @ N
    v0, v1 = _valuations(Q, c)
    return QPolynomial(i, tuple(pq), Q, c, tuple(traces), v0, v1)


def q_polynomial_oracle(i: int, n: int, cusp: CuspShape = CuspShape(), pq=(1, 0)) -> tuple[Poly, Poly]:
    """``det(lam Id - (Id + eps d) rho)`` over the dual numbers.

    Returns ``(eps^0 part, eps^1 part)`` of the characteristic polynomial.
    """
    rho, X, _ = _setup(i, n, cusp, pq)
    deformed = Matrix([[Dual(r, x) for r, x in zip(rr, xr)] for rr, xr in zip(rho.rows, X.rows)])
    P = char_poly(deformed)
    base = Poly([c.re if isinstance(c, Dual) else c for c in P.coeffs], "lam")
    first = Poly([c.eps if isinstance(c, Dual) else 0 for c in P.coeffs], "lam")
    return base, first


def q_polynomial_inverse_route(i: int, n: int, cusp: CuspShape = CuspShape(), pq=(1, 0)) -> Poly:
    """``det(A) trace(A^-1 X_i)`` with ``A = lam Id - rho`` inverted by a Neumann sum."""
    rho, X, c = _setup(i, n, cusp, pq)
    N = peripheral_nilpotent(rho, c)
    # A = (lam - c) Id - c N
    num, den = matrix_inverse_unipotent_shifted(N * c, shift=c)
    detA = shifted_power("lam", c, n)
    scaled = (num @ X).trace() * detA
    quotient = scaled / den
    return quotient


def _const_derivative_zero(j: int, n: int, cusp: CuspShape, pq) -> bool:
    """Whether every sigma derivative along ``dx h_+^j`` vanishes at ``gamma``."""
    rho = cusp.rho(n, pq)
    d = integrate_form(const(1, 0, j), pq, n, cusp)
    if d.is_zero():
        d = integrate_form(const(0, 1, j), pq, n, cusp)
    X = d @ rho
    deformed = Matrix([[Dual(r, x) for r, x in zip(rr, xr)] for rr, xr in zip(rho.rows, X.rows)])
    P = char_poly(deformed)
    return all(not (c.eps if isinstance(c, Dual) else 0) for c in P.coeffs)


@dataclass
class JacobianCertificate:
    n: int
    pq: tuple
    word: str
    qs: list
    J: list  # J[i][j] = d((-1)^j sigma_j)/d omega_i, i, j = 1..n-1 (stored 0-based)
    sigma_derivatives: list  # d(sigma_j)/d omega_i = (-1)^j J[i][j]
    det: object
    leading_product: object
    const_rows_zero: list
    oracle_agrees: bool
    basis: dict
    verdict: str
    notes: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "gamma": {"class": list(self.pq), "word": self.word},
            "Q": [
                {
                    "i": q.i,
                    "coeffs": [serialize(c) for c in q.Q.coeffs],
                    "first_order_coeffs": [serialize(c) for c in q.first_order.coeffs],
                    "valuation_at_0": q.v0,
                    "valuation_at_eigenvalue": q.v1,
                    "expected_valuation_at_eigenvalue": self.n - q.i - 1,
                    "eigenvalue": q.eigenvalue,
                    "traces_N^k_X": [serialize(t) for t in q.traces],
                }
                for q in self.qs
            ],
            "J": [[serialize(e) for e in row] for row in self.J],
            "sigma_derivatives": [[serialize(e) for e in row] for row in self.sigma_derivatives],
            "det_J": serialize(self.det),
            "leading_product": serialize(self.leading_product),
            "const_directions_zero": self.const_rows_zero,
            "oracle_agrees": self.oracle_agrees,
            "basis_check": self.basis,
            "notes": self.notes,
            "verdict": self.verdict,
        }


def basis_certificate(qs: list[QPolynomial]) -> dict:
    """Check that the ``Q_i`` form a basis of ``lam * (polys of degree <= n-2)``.

    Independence follows from the strictly decreasing valuations at the
    eigenvalue; membership from ``Q_i(0) = 0`` and the degree bound.
    """
    indices = [q.i for q in qs]
    if len(set(indices)) != len(indices):
        raise ValueError("duplicate indices")
    if not qs:
        return {"ok": False, "reason": "empty list"}
    n = qs[0].n
    if sorted(indices) != list(range(1, n)):
        return {"ok": False, "reason": f"indices {sorted(indices)} do not cover 1..{n - 1}"}
    vals = {q.i: q.v1 for q in qs}
    ok_vals = all(vals[i] == n - i - 1 for i in vals)
    distinct = len(set(vals.values())) == len(vals)
    multiples = all(q.v0 >= 1 for q in qs)
    degrees = all(q.Q.degree <= n - 1 for q in qs)
    ok = ok_vals and distinct and multiples and degrees
    return {
        "ok": ok,
        "valuations": [vals[i] for i in sorted(vals)],
        "distinct": distinct,
        "multiples_of_lam": multiples,
        "degree_bound": degrees,
        "span_dimension": len(qs) if ok else None,
    }


def _jacobian(qs: list[QPolynomial], n: int) -> list[list]:
    return [[q.first_order.coeff(n - j) for j in range(1, n)] for q in sorted(qs, key=lambda q: q.i)]


def _leading_product(qs: list[QPolynomial]):
    """Product over ``i`` of the lowest ``(lam - c)``-adic coefficient of ``Q_i / lam``."""
    prod = 1
    for q in qs:
        R, r = linear_factor_divide(q.Q, 0)
        assert not r
        for _ in range(q.v1):
            R, r = linear_factor_divide(R, q.eigenvalue)
        prod = prod * R(q.eigenvalue)
    return prod


def _exceptional_note(d, cusp: CuspShape, pq) -> list[str]:
    """Describe where a polynomial-in-tau determinant can vanish."""
    if not isinstance(d, Poly) or d.var != "tau" or d.degree <= 0:
        return []
    s = cusp.translation(pq)
    if not isinstance(s, Poly):
        return [f"det J is a nonconstant polynomial in tau: {d}"]
    k = 0
    rest = d
    while True:
        quot, rem = _divmod(rest, s)
        if rem:
            break
        rest, k = quot, k + 1
    if rest.degree <= 0:
        return [f"det J = {rest} * ({s})^{k}; it vanishes only where p + q*tau = 0, which needs real tau"]
    return [f"det J has the non-translation factor {rest}; check specializations"]


def _divmod(p: Poly, q: Poly):
    from .exact import poly_divide

    return poly_divide(p, q)


def sigma_derivative_matrix(n: int, cusp: CuspShape = CuspShape(), pq=(1, 0), check_oracle: bool = True) -> JacobianCertificate:
    """Assemble and certify the Jacobian of ``(sigma_1..sigma_(n-1))`` at ``gamma``."""
    qs = [q_polynomial(i, n, cusp, pq) for i in range(1, n)]
    J = _jacobian(qs, n)
    sig = [[(-1) ** (j + 1) * e for j, e in enumerate(row)] for row in J]
    d = det(Matrix(J))
    lead = _leading_product(qs)
    const_zero = [_const_derivative_zero(j, n, cusp, pq) for j in range(1, n)]
    oracle_ok = True
    if check_oracle:
        for q in qs:
            base, first = q_polynomial_oracle(q.i, n, cusp, pq)
            if first != q.first_order or base != shifted_power("lam", q.eigenvalue, n):
                oracle_ok = False
    basis = basis_certificate(qs)
    notes = _exceptional_note(d, cusp, pq)
    lead_matches = d == lead or d == -lead
    if not lead_matches:
        notes.append("det J differs from the product of leading terms")
    ok = bool(d) and all(const_zero) and oracle_ok and basis["ok"] and lead_matches
    return JacobianCertificate(
        n=n,
        pq=tuple(pq),
        word=word_of_class(pq),
        qs=qs,
        J=J,
        sigma_derivatives=sig,
        det=d,
        leading_product=lead,
        const_rows_zero=const_zero,
        oracle_agrees=oracle_ok,
        basis=basis,
        verdict="certified" if ok else "failed",
        notes=notes,
    )


def sigma_derivatives_of_cocycle(cocycle: Cocycle, word: str) -> list:
    """First-order change of ``(sigma_1..sigma_(n-1))`` of ``word`` along ``cocycle``."""
    rho, X = weil_deform(cocycle, word)
    n = rho.n
    deformed = Matrix([[Dual(r, x) for r, x in zip(rr, xr)] for rr, xr in zip(rho.rows, X.rows)])
    P = char_poly(deformed)
    out = []
    for j in range(1, n):
        c = P.coeff(n - j)
        out.append((-1) ** j * (c.eps if isinstance(c, Dual) else 0))
    return out


def omega_cocycle(i: int, n: int, cusp: CuspShape = CuspShape()) -> Cocycle:
    return cocycle_from_form(omega(i), n, cusp)


def torus_coboundary(v: Matrix, n: int, cusp: CuspShape = CuspShape()) -> Cocycle:
    images, inverses = torus_images(n, cusp)
    return Cocycle.coboundary(v, images, inverses)
