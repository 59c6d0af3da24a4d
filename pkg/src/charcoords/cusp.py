"""Closed sl(n)-valued 1-forms on the cusp torus and their cocycles.

The torus is ``R^2/Z^2`` with ``m: (x, y) -> (x + 1, y)`` and
``l: (x, y) -> (x, y + 1)``; their holonomies are ``+-(1 1; 0 1)`` and
``+-(1 tau; 0 1)``.  Two families of forms are modelled symbolically:

* ``omega(i)``: ``d(x + tau y)`` tensor ``(1 z; 0 1) h_-^i`` with ``z = x + tau y``,
* ``const(a, b, j)``: ``(a dx + b dy)`` tensor ``h_+^j``.

Torus words use ``m``/``l`` and ``M``/``L`` for inverses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .exact import Matrix, Poly, det, exact_div
from .liealg import trace_form
from .rep import h_minus_power, h_plus, h_plus_power, nilpotent_exp

TAU = Poly.gen("tau")


@dataclass(frozen=True)
class CuspShape:
    """Holonomy data of one cusp: ``m -> sign_m (1 1; 0 1)``, ``l -> sign_l (1 tau; 0 1)``."""

    tau: object = TAU
    sign_m: int = 1
    sign_l: int = 1

    def __post_init__(self):
        if self.sign_m not in (1, -1) or self.sign_l not in (1, -1):
            raise ValueError("signs must be +1 or -1")
        if isinstance(self.tau, (int, Fraction)):
            raise ValueError("tau must not be real")

    def translation(self, pq) -> object:
        p, q = pq
        return p + q * self.tau if q else p

    def sign(self, pq) -> int:
        p, q = pq
        return self.sign_m ** (p % 2) * self.sign_l ** (q % 2)

    def rho(self, n: int, pq) -> Matrix:
        """Image of ``m^p l^q`` in SL(n)."""
        U = nilpotent_exp(h_plus(n), self.translation(pq))
        return -U if self.sign(pq) == -1 and n % 2 == 0 else U

    def eigenvalue(self, n: int, pq) -> int:
        """The single eigenvalue of :meth:`rho`."""
        return -1 if self.sign(pq) == -1 and n % 2 == 0 else 1

    def images(self, n: int) -> dict[str, Matrix]:
        return {"m": self.rho(n, (1, 0)), "l": self.rho(n, (0, 1))}


def word_of_class(pq) -> str:
    p, q = pq
    return ("m" * p if p >= 0 else "M" * -p) + ("l" * q if q >= 0 else "L" * -q)


@dataclass(frozen=True)
class TorusForm:
    kind: str
    index: int
    a: object = 0
    b: object = 0

    def __post_init__(self):
        if self.kind not in ("omega", "const"):
            raise ValueError(f"unknown form kind {self.kind!r}")

    def check(self, n: int):
        if not 1 <= self.index <= n - 1:
            raise ValueError(f"form index {self.index} out of range 1..{n - 1}")

    def __str__(self):
        if self.kind == "omega":
            return f"omega_{self.index}"
        return f"({self.a} dx + {self.b} dy)*h+^{self.index}"


def omega(i: int) -> TorusForm:
    return TorusForm("omega", i)


def const(a, b, j: int) -> TorusForm:
    return TorusForm("const", j, a, b)


def _conjugated_terms(n: int, i: int):
    """Terms of ``exp(z h_+) h_-^i exp(-z h_+) = sum_m z^m C_m``, as ``{m: C_m}``."""
    hp = h_plus(n)
    hm = h_minus_power(n, i)
    left = [Matrix.identity(n)]
    while not (left[-1] @ hp).is_zero():
        left.append(left[-1] @ hp)
    out: dict[int, Matrix] = {}
    for a, La in enumerate(left):
        LaH = La @ hm
        for b, Rb in enumerate(left):
            term = LaH @ Rb
            if term.is_zero():
                continue
            scale = Fraction((-1) ** b, factorial(a) * factorial(b))
            out[a + b] = out.get(a + b, Matrix.zero(n)) + term * scale
    return out


def omega_coefficient(n: int, i: int, z) -> Matrix:
    """Value of the matrix part of ``omega(i)`` at the point ``z = x + tau y``."""
    total = Matrix.zero(n)
    for m, C in _conjugated_terms(n, i).items():
        total = total + C * z**m
    return total


def integrate_form(form: TorusForm, pq, n: int, cusp: CuspShape = CuspShape()) -> Matrix:
    """Integral of ``form`` along the straight segment from ``(0, 0)`` to ``(p, q)``."""
    form.check(n)
    p, q = pq
    if form.kind == "const":
        return h_plus_power(n, form.index) * (form.a * p + form.b * q)
    s = cusp.translation(pq)
    if not s:
        return Matrix.zero(n)
    # along z = t s: integral of s (t s)^m dt over [0, 1] is s^(m+1) / (m+1)
    total = Matrix.zero(n)
    for m, C in _conjugated_terms(n, form.index).items():
        total = total + C * exact_div(s ** (m + 1), m + 1)
    return total


def _invert_word(word: str) -> str:
    return word[::-1].swapcase()


class Cocycle:
    """Twisted 1-cocycle ``d(gh) = d(g) + Ad_rho(g) d(h)`` given on generators.

    ``images`` maps each lowercase generator to its matrix; inverses are
    handled through ``d(g^-1) = -Ad_rho(g)^-1 d(g)``.
    """

    def __init__(self, values: dict[str, Matrix], images: dict[str, Matrix], inverses: dict[str, Matrix] | None = None):
        self.values = dict(values)
        self.images = dict(images)
        if inverses is None:
            from .exact import inverse

            inverses = {g: inverse(M) for g, M in images.items()}
        self.inverses = dict(inverses)
        self.n = next(iter(images.values())).n

    def _letter(self, ch: str) -> tuple[Matrix, Matrix, Matrix]:
        g = ch.lower()
        if g not in self.values:
            raise KeyError(f"generator {g!r} is not defined for this cocycle")
        if ch == g:
            return self.images[g], self.inverses[g], self.values[g]
        Ri = self.inverses[g]
        return Ri, self.images[g], -(Ri @ self.values[g] @ self.images[g])

    def evaluate(self, word: str) -> Matrix:
        """``d(word)`` by the twisted product rule."""
        total = Matrix.zero(self.n)
        prefix = Matrix.identity(self.n)
        prefix_inv = Matrix.identity(self.n)
        for ch in word:
            R, Rinv, d = self._letter(ch)
            total = total + prefix @ d @ prefix_inv
            prefix = prefix @ R
            prefix_inv = Rinv @ prefix_inv
        return total

    def image(self, word: str) -> Matrix:
        M = Matrix.identity(self.n)
        for ch in word:
            M = M @ self._letter(ch)[0]
        return M

    def relator_defect(self, relator: str) -> Matrix:
        return self.evaluate(relator)

    def __add__(self, other: "Cocycle") -> "Cocycle":
        return Cocycle({g: v + other.values[g] for g, v in self.values.items()}, self.images, self.inverses)

    @classmethod
    def coboundary(cls, v: Matrix, images: dict[str, Matrix], inverses=None) -> "Cocycle":
        """``g -> v - Ad_rho(g) v``."""
        if inverses is None:
            from .exact import inverse

            inverses = {g: inverse(M) for g, M in images.items()}
        values = {g: v - M @ v @ inverses[g] for g, M in images.items()}
        return cls(values, images, inverses)


TORUS_RELATOR = "mlML"


def torus_images(n: int, cusp: CuspShape) -> tuple[dict, dict]:
    images = cusp.images(n)
    inverses = {
        "m": cusp.rho(n, (-1, 0)),
        "l": cusp.rho(n, (0, -1)),
    }
    return images, inverses


def cocycle_from_form(form: TorusForm, n: int, cusp: CuspShape = CuspShape()) -> Cocycle:
    """Cocycle on the torus group; checks the commutator relator exactly."""
    form.check(n)
    images, inverses = torus_images(n, cusp)
    values = {"m": integrate_form(form, (1, 0), n, cusp), "l": integrate_form(form, (0, 1), n, cusp)}
    cocycle = Cocycle(values, images, inverses)
    if not cocycle.relator_defect(TORUS_RELATOR).is_zero():
        raise ArithmeticError(f"{form} does not give a cocycle on the torus")
    return cocycle


def _square_integral(m: int, tau) -> object:
    """Integral of ``(x + tau y)^m`` over the unit square."""
    return sum(
        (comb(m, k) * Fraction(1, (m - k + 1) * (k + 1)) * tau**k for k in range(m + 1)),
        0,
    )


def _one_form(form: TorusForm, tau) -> tuple:
    if form.kind == "omega":
        return 1, tau
    return form.a, form.b


def _coefficient_poly(form: TorusForm, n: int) -> dict[int, Matrix]:
    if form.kind == "omega":
        return _conjugated_terms(n, form.index)
    return {0: h_plus_power(n, form.index)}


def cup_pairing(f: TorusForm, g: TorusForm, n: int, cusp: CuspShape = CuspShape()):
    """Coefficient of ``dx^dy`` in ``f ^ g`` with the trace pairing, integrated over the torus."""
    f.check(n)
    g.check(n)
    fx, fy = _one_form(f, cusp.tau)
    gx, gy = _one_form(g, cusp.tau)
    wedge = fx * gy - fy * gx
    if not wedge:
        return 0
    total = 0
    for m1, C1 in _coefficient_poly(f, n).items():
        for m2, C2 in _coefficient_poly(g, n).items():
            t = trace_form(C1, C2)
            if t:
                total = total + t * _square_integral(m1 + m2, cusp.tau)
    return total * wedge


def growth_exponent(form: TorusForm, n: int) -> int:
    """Exponent ``k`` with ``|form|^2 dvol ~ e^(k t)`` up the cusp.

    The isometry moving the base point up to height ``t`` acts on the
    coefficient as ``diag(e^(-t/2), e^(t/2))``, which scales a weight-``w``
    vector by ``e^(-w t / 2)``.  The 1-form contributes ``e^t``, the volume
    ``e^(-2t)``, so the exponent is ``2(1 - w/2) - 2 = -w``.
    """
    form.check(n)
    from .liealg import adjoint_action
    from .rep import SL2Matrix

    coeff = h_plus_power(n, form.index) if form.kind == "const" else h_minus_power(n, form.index)
    probe = adjoint_action(SL2Matrix.of(2, 0, 0, Fraction(1, 2)), coeff)
    i, j = next((i, j) for i in range(n) for j in range(n) if coeff[i, j])
    ratio = Fraction(probe[i, j]) / coeff[i, j]
    if ratio.numerator == 1:
        weight = -(ratio.denominator.bit_length() - 1)
    else:
        weight = ratio.numerator.bit_length() - 1
    return -weight


def is_square_integrable(form: TorusForm, n: int) -> bool:
    return growth_exponent(form, n) < 0


def cohomology_basis(n: int, a=1, b=0, cusp: CuspShape = CuspShape()) -> list[TorusForm]:
    """``omega_1..omega_(n-1)`` followed by ``(a dx + b dy) h_+^j``; requires ``b != a tau``."""
    if not (b - a * cusp.tau):
        raise ValueError("degenerate choice: b = a*tau")
    forms = [omega(i) for i in range(1, n)] + [const(a, b, j) for j in range(1, n)]
    P = pairing_matrix(forms, n, cusp)
    if not det(P):
        raise ArithmeticError("cup pairing is degenerate on the proposed basis")
    return forms


def pairing_matrix(forms: list[TorusForm], n: int, cusp: CuspShape = CuspShape()) -> Matrix:
    return Matrix([[cup_pairing(f, g, n, cusp) for g in forms] for f in forms])
