"""Exact scalars, univariate polynomials and dense matrices.

Rationals are plain :class:`fractions.Fraction` objects.  Algebraic numbers
live in :class:`NumberField` (``Q[x]/(m(x))``), polynomials in :class:`Poly`,
and first-order infinitesimals in :class:`Dual` (the ring ``R[eps]/(eps^2)``).

All of these can be nested.  Polynomial variables have a fixed nesting order
(see ``VAR_ORDER``) so that a polynomial in ``lam`` may carry coefficients that
are polynomials in ``tau`` and never the other way round.  A :class:`Dual` is
always outermost.  Every object is immutable.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, lcm
from typing import Callable, Iterable, Sequence

Rational = Fraction

#: Nesting order for polynomial variables: a later variable may have
#: coefficients that are polynomials in an earlier one.
VAR_ORDER = ("tau", "beta", "z", "t", "lam")

_SCALARS = (int, Fraction)


def _rank(var: str) -> int:
    try:
        return VAR_ORDER.index(var)
    except ValueError:
        raise ValueError(f"unknown polynomial variable {var!r}") from None


def as_rational(value) -> Fraction:
    """Parse ``"p/q"``, an int or a Fraction into a Fraction."""
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def is_zero(x) -> bool:
    return x == 0


def exact_div(x, y):
    """``x / y`` that keeps integers exact."""
    if isinstance(x, int) and isinstance(y, int):
        return Fraction(x, y)
    return x / y


# ---------------------------------------------------------------------------
# number fields


class NumberField:
    """``Q[x]/(m(x))`` for a monic irreducible ``m`` of degree >= 2.

    ``minpoly`` lists the coefficients of ``m`` lowest degree first.  The
    complex embedding used for numerics is the root closest to ``embedding``;
    by default the root with the largest imaginary part.
    """

    def __init__(self, minpoly: Sequence, name: str = "x", embedding: complex | None = None):
        coeffs = tuple(as_rational(c) for c in minpoly)
        if len(coeffs) < 3:
            raise ValueError("use Fraction for Q; number fields need degree >= 2")
        if coeffs[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.minpoly = coeffs
        self.degree = len(coeffs) - 1
        self.name = name
        d = self.degree
        # x^k reduced mod m, for k < 2d - 1
        powers = [tuple(Fraction(int(j == k)) for j in range(d)) for k in range(d)]
        for _ in range(d, 2 * d - 1):
            prev = powers[-1]
            top = prev[-1]
            shifted = (Fraction(0),) + prev[:-1]
            powers.append(tuple(s - top * m for s, m in zip(shifted, coeffs[:-1])))
        self._powers = powers
        self._embedding_hint = embedding
        self._root: complex | None = None

    def __repr__(self):
        return f"NumberField({[str(c) for c in self.minpoly]}, name={self.name!r})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __call__(self, coeffs) -> "FieldElement":
        if isinstance(coeffs, FieldElement):
            if coeffs.field != self:
                raise ValueError("element belongs to a different number field")
            return coeffs
        if isinstance(coeffs, _SCALARS) or isinstance(coeffs, str):
            coeffs = [coeffs]
        coeffs = [as_rational(c) for c in coeffs]
        if len(coeffs) > self.degree:
            raise ValueError(f"expected at most {self.degree} coefficients")
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    @property
    def gen(self) -> "FieldElement":
        return self([0, 1])

    def _reduce(self, prod: Sequence[Fraction]) -> tuple:
        out = [Fraction(0)] * self.degree
        for k, c in enumerate(prod):
            if c:
                for j, p in enumerate(self._powers[k]):
                    if p:
                        out[j] += c * p
        return tuple(out)

    @property
    def root(self) -> complex:
        """Complex embedding of the generator."""
        if self._root is None:
            import numpy as np

            roots = np.roots([float(c) for c in reversed(self.minpoly)])
            if self._embedding_hint is None:
                roots = sorted(roots, key=lambda r: (r.imag, r.real))
                self._root = complex(roots[-1])
            else:
                self._root = complex(min(roots, key=lambda r: abs(r - self._embedding_hint)))
        return self._root


class FieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("cannot combine elements of different number fields")
            return other.coeffs
        if isinstance(other, _SCALARS):
            return (Fraction(other),) + (Fraction(0),) * (self.field.degree - 1)
        return None

    def __add__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, oc)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, oc)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return FieldElement(self.field, tuple(a * other for a in self.coeffs))
        oc = self._coerce(other)
        if oc is None:
            return NotImplemented
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(oc):
                    if b:
                        prod[i + j] += a * b
        return FieldElement(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero in a number field")
        d = self.field.degree
        # columns: self * x^k
        basis = [self.field([0] * k + [1]) for k in range(d)]
        cols = [(self * b).coeffs for b in basis]
        rows = [[cols[k][r] for k in range(d)] for r in range(d)]
        sol = solve(rows, [Fraction(int(r == 0)) for r in range(d)])
        return FieldElement(self.field, tuple(sol))

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            return FieldElement(self.field, tuple(a / other for a in self.coeffs))
        if isinstance(other, FieldElement):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _SCALARS):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        return _power(self, k)

    def __eq__(self, other):
        oc = self._coerce(other) if isinstance(other, (FieldElement, int, Fraction)) else None
        if oc is None:
            return NotImplemented
        return self.coeffs == tuple(oc)

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __complex__(self):
        r = self.field.root
        return complex(sum(float(c) * r**k for k, c in enumerate(self.coeffs)))

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else f"{c}*{self.field.name}^{k}")
        return "(" + (" + ".join(terms) or "0") + ")"


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "lam"):
        _rank(var)
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def gen(cls, var: str = "lam") -> "Poly":
        return cls((0, 1), var)

    @classmethod
    def constant(cls, c, var: str = "lam") -> "Poly":
        return cls((c,), var)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def _scalar(self, other) -> bool:
        """True when ``other`` acts as a coefficient of this polynomial."""
        if isinstance(other, Poly):
            return _rank(other.var) < _rank(self.var)
        return not isinstance(other, Dual)

    def _outer(self, other) -> bool:
        # Python never tries the reflected method between two Poly instances
        return isinstance(other, Poly) and _rank(other.var) > _rank(self.var)

    def __add__(self, other):
        if self._outer(other):
            return other.__add__(self)
        if isinstance(other, Poly) and other.var == self.var:
            a, b = self.coeffs, other.coeffs
            if len(a) < len(b):
                a, b = b, a
            return Poly([x + y for x, y in zip(a, b)] + list(a[len(b):]), self.var)
        if not self._scalar(other):
            return NotImplemented
        if not self.coeffs:
            return Poly((other,), self.var)
        return Poly((self.coeffs[0] + other,) + self.coeffs[1:], self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        if isinstance(other, Poly) and other.var == self.var or self._outer(other):
            return self + (-other)
        if not self._scalar(other):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if self._outer(other):
            return other.__mul__(self)
        if isinstance(other, Poly) and other.var == self.var:
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Poly((), self.var)
            fast = _fast_convolve(a, b)
            if fast is not None:
                return Poly(fast, self.var)
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        if y:
                            out[i + j] = out[i + j] + x * y
            return Poly(out, self.var)
        if not self._scalar(other):
            return NotImplemented
        if not other:
            return Poly((), self.var)
        return Poly([c * other for c in self.coeffs], self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if other.var == self.var:
                q, r = poly_divide(self, other)
                if r:
                    raise ArithmeticError("inexact polynomial division")
                return q
            if other.degree > 0 or not self._scalar(other):
                return NotImplemented
            other = other.coeff(0)
        elif isinstance(other, Dual):
            return NotImplemented
        return Poly([exact_div(c, other) for c in self.coeffs], self.var)

    def __pow__(self, k: int):
        return _power(self, k)

    def __eq__(self, other):
        if isinstance(other, Poly) and other.var == self.var:
            return self.coeffs == other.coeffs
        if isinstance(other, Dual):
            return NotImplemented
        if isinstance(other, Poly) and not self._scalar(other):
            return other == self
        if len(self.coeffs) > 1:
            return False
        return self.coeff(0) == other

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeff(0))
        return hash((self.var, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __call__(self, x):
        """Evaluate by Horner's rule."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def map_coeffs(self, f: Callable) -> "Poly":
        return Poly([f(c) for c in self.coeffs], self.var)

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:], self.var)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
                terms.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(terms)


def _coeff_kind(cs):
    """Classify a coefficient list: ``("Q",)``, ``("F", field)``, ``("P", var)`` or None."""
    field = None
    var = None
    for c in cs:
        t = type(c)
        if t is int or t is Fraction:
            continue
        if t is FieldElement:
            if field is not None and c.field != field:
                return None
            field = c.field
        elif t is Poly:
            if var is not None and c.var != var:
                return None
            if any(type(e) is not int and type(e) is not Fraction for e in c.coeffs):
                return None
            var = c.var
        else:
            return None
    if field is not None and var is not None:
        return None
    if field is not None:
        return ("F", field)
    if var is not None:
        return ("P", var)
    return ("Q",)


def _fast_convolve(a, b):
    """Exact product of coefficient lists through integer convolution, or None."""
    from .kernels import rational_convolve

    ka, kb = _coeff_kind(a), _coeff_kind(b)
    if ka is None or kb is None:
        return None
    if ka == ("Q",) and kb == ("Q",):
        return rational_convolve(a, b)
    if ka[0] == "P" or kb[0] == "P":
        if ka[0] == "F" or kb[0] == "F" or (ka[0] == kb[0] == "P" and ka[1] != kb[1]):
            return None
        var = ka[1] if ka[0] == "P" else kb[1]
        # Kronecker substitution: lam^i var^j -> x^(i*stride + j)
        da = max((c.degree if type(c) is Poly else 0) for c in a)
        db = max((c.degree if type(c) is Poly else 0) for c in b)
        stride = max(da, 0) + max(db, 0) + 1

        def pack(cs):
            flat = [0] * (len(cs) * stride)
            for i, c in enumerate(cs):
                if type(c) is Poly:
                    flat[i * stride : i * stride + len(c.coeffs)] = c.coeffs
                else:
                    flat[i * stride] = c
            return flat

        flat = rational_convolve(pack(a), pack(b))
        n_out = len(a) + len(b) - 1
        flat += [0] * (n_out * stride - len(flat))
        return [Poly(flat[i * stride : (i + 1) * stride], var) for i in range(n_out)]
    field = ka[1] if ka[0] == "F" else kb[1]
    d = field.degree

    def split(cs):
        comps = [[0] * len(cs) for _ in range(d)]
        for i, c in enumerate(cs):
            if type(c) is FieldElement:
                for k, x in enumerate(c.coeffs):
                    comps[k][i] = x
            else:
                comps[0][i] = c
        return comps

    A, B = split(a), split(b)
    n_out = len(a) + len(b) - 1
    by_power = [[0] * n_out for _ in range(2 * d - 1)]
    for k, Ak in enumerate(A):
        if not any(Ak):
            continue
        for l, Bl in enumerate(B):
            if not any(Bl):
                continue
            prod = rational_convolve(Ak, Bl)
            row = by_power[k + l]
            for i, x in enumerate(prod):
                if x:
                    row[i] += x
    out = []
    for i in range(n_out):
        vec = [Fraction(0)] * d
        for k in range(2 * d - 1):
            x = by_power[k][i]
            if x:
                for j, p in enumerate(field._powers[k]):
                    if p:
                        vec[j] += x * p
        out.append(FieldElement(field, tuple(vec)))
    return out


def poly_divide(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Long division ``p = quotient*q + remainder`` with ``deg(remainder) < deg(q)``."""
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    if p.var != q.var:
        raise ValueError("polynomials in different variables")
    lead = q.leading
    if lead == 1:
        inv = None
    elif isinstance(lead, Poly):
        if lead.degree > 0:
            raise ArithmeticError("leading coefficient is not invertible")
        inv = 1 / lead.coeff(0) if not isinstance(lead.coeff(0), FieldElement) else lead.coeff(0).inverse()
    else:
        inv = lead.inverse() if isinstance(lead, FieldElement) else Fraction(1) / lead
    rem = list(p.coeffs)
    dq = q.degree
    quot = [0] * max(len(rem) - dq, 0)
    for k in range(len(rem) - 1, dq - 1, -1):
        c = rem[k]
        if not c:
            continue
        if inv is not None:
            c = c * inv
        quot[k - dq] = c
        for j, b in enumerate(q.coeffs):
            if b:
                rem[k - dq + j] = rem[k - dq + j] - c * b
    return Poly(quot, p.var), Poly(rem[:dq], p.var)


def linear_factor_divide(p: Poly, root) -> tuple[Poly, object]:
    """Synthetic division by ``(var - root)``; returns ``(quotient, remainder)``."""
    cs = p.coeffs
    if not cs:
        return Poly((), p.var), 0
    out = [0] * (len(cs) - 1)
    acc = cs[-1]
    for k in range(len(cs) - 2, -1, -1):
        out[k] = acc
        acc = cs[k] + acc * root
    return Poly(out, p.var), acc


def valuation_at(p: Poly, root) -> int:
    """Multiplicity of ``root`` as a root of ``p``."""
    if not p:
        raise ValueError("valuation of the zero polynomial is undefined")
    k = 0
    while True:
        q, r = linear_factor_divide(p, root)
        if r:
            return k
        p, k = q, k + 1


def shifted_power(var: str, shift, k: int) -> Poly:
    """``(var - shift)^k`` expanded."""
    return Poly([comb(k, j) * (-shift) ** (k - j) for j in range(k + 1)], var)


# ---------------------------------------------------------------------------
# dual numbers


class Dual:
    """``re + eps*eps_part`` with ``eps^2 = 0``."""

    __slots__ = ("re", "eps")

    def __init__(self, re, eps=0):
        self.re = re
        self.eps = eps

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.re + other.re, self.eps + other.eps)
        return Dual(self.re + other, self.eps)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.re, -self.eps)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.re * other.re, self.re * other.eps + self.eps * other.re)
        return Dual(self.re * other, self.eps * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv_re = exact_div(1, other.re)
            return Dual(self.re * inv_re, (self.eps * other.re - self.re * other.eps) * inv_re * inv_re)
        return Dual(exact_div(self.re, other), exact_div(self.eps, other))

    def __eq__(self, other):
        if isinstance(other, Dual):
            return self.re == other.re and self.eps == other.eps
        return self.re == other and self.eps == 0

    def __hash__(self):
        return hash((self.re, self.eps))

    def __bool__(self):
        return bool(self.re) or bool(self.eps)

    def __repr__(self):
        return f"Dual({self.re!r}, {self.eps!r})"


# ---------------------------------------------------------------------------
# generic helpers


def _power(x, k: int):
    if k < 0:
        raise ValueError("negative exponent")
    result = 1
    base = x
    while k:
        if k & 1:
            result = base * result if not isinstance(result, int) else base
        k >>= 1
        if k:
            base = base * base
    return result


def specialize(obj, var: str, value):
    """Substitute ``value`` for the polynomial variable ``var`` throughout ``obj``."""
    if isinstance(obj, Poly):
        if obj.var == var:
            return _horner([specialize(c, var, value) for c in obj.coeffs], value)
        return Poly([specialize(c, var, value) for c in obj.coeffs], obj.var)
    if isinstance(obj, Dual):
        return Dual(specialize(obj.re, var, value), specialize(obj.eps, var, value))
    if isinstance(obj, Matrix):
        return obj.map(lambda e: specialize(e, var, value))
    if isinstance(obj, (list, tuple)):
        return type(obj)(specialize(e, var, value) for e in obj)
    return obj


def _horner(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def to_complex(x) -> complex:
    if isinstance(x, (int, Fraction)):
        return complex(float(x))
    if isinstance(x, FieldElement):
        return complex(x)
    raise TypeError(f"cannot embed {type(x).__name__} numerically")


def serialize(x):
    """Lossless JSON-friendly form; rationals become ``"p/q"`` strings."""
    if isinstance(x, bool):
        return x
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    if isinstance(x, FieldElement):
        if x.is_rational():
            return str(x.coeffs[0])
        return {"field": [str(c) for c in x.field.minpoly], "coeffs": [str(c) for c in x.coeffs]}
    if isinstance(x, Poly):
        return {"var": x.var, "coeffs": [serialize(c) for c in x.coeffs]}
    if isinstance(x, Dual):
        return {"re": serialize(x.re), "eps": serialize(x.eps)}
    if isinstance(x, Matrix):
        return [[serialize(e) for e in row] for row in x.rows]
    raise TypeError(f"cannot serialize {type(x).__name__}")


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Dense square matrix over any of the rings above."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.rows = rows

    @classmethod
    def identity(cls, n: int, one=1) -> "Matrix":
        return cls([[one if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int) -> "Matrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "Matrix":
        return cls([[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def map(self, f: Callable) -> "Matrix":
        return Matrix([[f(e) for e in row] for row in self.rows])

    def _check(self, other: "Matrix"):
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(lambda e: -e)

    def __mul__(self, scalar):
        if isinstance(scalar, Matrix):
            return NotImplemented
        if not scalar:
            return Matrix.zero(self.n)
        return self.map(lambda e: e * scalar if e else 0)

    def __rmul__(self, scalar):
        if not scalar:
            return Matrix.zero(self.n)
        return self.map(lambda e: scalar * e if e else 0)

    def __truediv__(self, scalar):
        return self.map(lambda e: exact_div(e, scalar) if e else 0)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        n = self.n
        fast = _field_matmul(self.rows, other.rows)
        if fast is not None:
            return Matrix(fast)
        cols = other.rows
        out = []
        for row in self.rows:
            acc = [0] * n
            for k, a in enumerate(row):
                if not a:
                    continue
                for j, b in enumerate(cols[k]):
                    if b:
                        acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix(out)

    def __pow__(self, k: int) -> "Matrix":
        result = Matrix.identity(self.n)
        for _ in range(k):
            result = result @ self
        return result

    def __eq__(self, other):
        if isinstance(other, Matrix):
            return self.rows == other.rows
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(self.rows)

    def is_zero(self) -> bool:
        return not any(e for row in self.rows for e in row)

    def trace(self):
        acc = 0
        for i, row in enumerate(self.rows):
            acc = acc + row[i]
        return acc

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self.rows))

    def commutator(self, other: "Matrix") -> "Matrix":
        return self @ other - other @ self

    def is_nilpotent(self) -> bool:
        return (self ** self.n).is_zero()

    def vec(self) -> list:
        return [e for row in self.rows for e in row]

    def __repr__(self):
        return "Matrix(" + repr([list(r) for r in self.rows]) + ")"


def _field_components(rows, field_holder: list):
    """Integer coefficient rows and a common denominator, or ``None``."""
    coeffs = []
    den = 1
    for row in rows:
        out = []
        for e in row:
            if isinstance(e, FieldElement):
                if field_holder[0] is None:
                    field_holder[0] = e.field
                elif e.field != field_holder[0]:
                    return None
                cs = e.coeffs
            elif isinstance(e, _SCALARS):
                cs = (e,)
            else:
                return None
            out.append(cs)
            for c in cs:
                if type(c) is not int:
                    den = lcm(den, c.denominator)
        coeffs.append(out)
    ints = [[[int(c * den) for c in cs] for cs in row] for row in coeffs]
    return ints, den


def _field_matmul(A, B):
    """Product of matrices over one number field with integer accumulation.

    Returns ``None`` unless every entry is rational or lies in a single
    field and at least one entry is a field element.
    """
    holder = [None]
    a = _field_components(A, holder)
    if a is None:
        return None
    b = _field_components(B, holder)
    if b is None or holder[0] is None:
        return None
    field = holder[0]
    (ai, da), (bi, db) = a, b
    n = len(A)
    m = len(B[0])
    width = 2 * field.degree - 1
    den = da * db
    out = []
    for row in ai:
        out_row = []
        for j in range(m):
            acc = [0] * width
            hit = False
            for k, x in enumerate(row):
                if not any(x):
                    continue
                y = bi[k][j]
                for p, xp in enumerate(x):
                    if xp:
                        for q, yq in enumerate(y):
                            if yq:
                                acc[p + q] += xp * yq
                                hit = True
            if not hit or not any(acc):
                out_row.append(0)
                continue
            red = field._reduce(acc)
            out_row.append(FieldElement(field, tuple(Fraction(c) / den for c in red)))
        out.append(out_row)
    assert len(out) == n
    return out


def char_poly_with_adjugates(M: Matrix) -> tuple[Poly, list[Matrix]]:
    """Faddeev-LeVerrier: ``det(lam*Id - M)`` and the matrices ``B_k`` with
    ``adj(lam*Id - M) = sum_k B_k lam^(n-k)``, k = 1..n.

    Only divisions by the integers 1..n occur.
    """
    n = M.n
    c = [0] * (n + 1)
    c[n] = 1
    ident = Matrix.identity(n)
    Mk = Matrix.zero(n)
    adj = []
    for k in range(1, n + 1):
        Mk = M @ Mk + ident * c[n - k + 1]
        adj.append(Mk)
        c[n - k] = -exact_div((M @ Mk).trace(), k)
    return Poly(c, "lam"), adj


def char_poly(M: Matrix) -> Poly:
    return char_poly_with_adjugates(M)[0]


def elementary_symmetric(M: Matrix, i: int):
    """``sigma_i`` of the eigenvalues: ``(-1)^i`` times the ``lam^(n-i)`` coefficient."""
    n = M.n
    if not 1 <= i <= n:
        raise ValueError(f"index {i} out of range 1..{n}")
    return (-1) ** i * char_poly(M).coeff(n - i)


def det(M: Matrix):
    """Determinant over any commutative ring containing Q."""
    return (-1) ** M.n * char_poly(M).coeff(0)


def nilpotency_index(N: Matrix) -> int:
    """Smallest ``m`` with ``N^m = 0``; raises if ``N^n != 0``."""
    P = Matrix.identity(N.n)
    for m in range(N.n + 1):
        if P.is_zero():
            return m
        P = P @ N
    raise ValueError("matrix is not nilpotent")


def matrix_inverse_unipotent_shifted(N: Matrix, shift=1) -> tuple[Matrix, Poly]:
    """Inverse of ``A = (lam - shift)*Id - N`` for nilpotent ``N``.

    Returns ``(numerator, denominator)`` with ``A^{-1} = numerator/denominator``,
    ``denominator = (lam - shift)^m`` and ``m`` the nilpotency index of ``N``
    (at least 1).  The numerator is the finite Neumann sum
    ``sum_k (lam - shift)^(m-1-k) N^k``.
    """
    m = max(nilpotency_index(N), 1)
    n = N.n
    num = Matrix.zero(n)
    Nk = Matrix.identity(n)
    for k in range(m):
        num = num + Nk * shifted_power("lam", shift, m - 1 - k)
        Nk = Nk @ N
    return num, shifted_power("lam", shift, m)


# ---------------------------------------------------------------------------
# linear algebra over a field (Fraction or FieldElement entries)


def _inv(x):
    return x.inverse() if isinstance(x, FieldElement) else Fraction(1) / x


def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of a (not necessarily square) matrix."""
    A = [list(r) for r in rows]
    if not A:
        return A, []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(A)) if A[k][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = _inv(A[r][c])
        A[r] = [e * inv if e else 0 for e in A[r]]
        for k in range(len(A)):
            if k != r and A[k][c]:
                f = A[k][c]
                A[k] = [a - f * b if b else a for a, b in zip(A[k], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence]) -> list[list]:
    """Basis of ``{v : A v = 0}``, one vector per free column."""
    R, pivots = rref(rows)
    ncols = len(rows[0]) if rows else 0
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, p in enumerate(pivots):
            if R[r][f]:
                v[p] = -R[r][f]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list:
    """Solve a square nonsingular system."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [R[i][n] for i in range(n)]


def inverse(M: Matrix) -> Matrix:
    n = M.n
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(M.rows)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return Matrix([row[n:] for row in R])
