"""Group presentations with SL(2) holonomy lifts over number fields.

Words are strings of single-letter generators; an uppercase letter is the
inverse of its lowercase generator.

Presentation file format (one directive per line, ``#`` starts a comment)::

    name: fig8
    field: 1,-1,1            # minimal polynomial, lowest degree first (omit for Q)
    gens: a b
    rel: AbaBabABaB
    cusp: a bABaaBAb         # meridian word, longitude word
    mat a: 1 1 0 1           # entries a11 a12 a21 a22
    mat b: 1 0 0,1 1         # a field element is a comma list of coefficients
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .cusp import CuspShape
from .exact import FieldElement, Matrix, NumberField, as_rational, det
from .rep import sym_power


class ManifoldParseError(ValueError):
    def __init__(self, lineno: int, message: str, source: str = "<string>"):
        super().__init__(f"{source}:{lineno}: {message}")
        self.lineno = lineno


class LiftError(ArithmeticError):
    """The holonomy data violates a required identity."""


def free_reduce(word: str) -> str:
    out: list[str] = []
    for ch in word:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def invert_word(word: str) -> str:
    return word[::-1].swapcase()


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple = ()
    cusps: tuple = ()  # (meridian word, longitude word) per cusp

    def __post_init__(self):
        for w in self.relators + tuple(x for pair in self.cusps for x in pair):
            self.check_word(w)

    def check_word(self, word: str):
        for ch in word:
            if ch.lower() not in self.generators:
                raise KeyError(f"letter {ch!r} in {word!r} is not a generator")


@dataclass(frozen=True)
class HolonomyLift:
    matrices: dict
    field: NumberField | None = None

    def __post_init__(self):
        for g, M in self.matrices.items():
            if M.n != 2 or det(M) != 1:
                raise LiftError(f"image of {g} is not in SL(2)")

    def image(self, word: str) -> Matrix:
        M = Matrix.identity(2)
        for ch in word:
            M = M @ self._letter(ch)
        return M

    def _letter(self, ch: str) -> Matrix:
        g = ch.lower()
        if g not in self.matrices:
            raise KeyError(f"generator {g!r} has no image")
        M = self.matrices[g]
        if ch == g:
            return M
        (a, b), (c, d) = M.rows
        return Matrix([[d, -b], [-c, a]])

    def conjugate(self, P: Matrix) -> "HolonomyLift":
        """``g -> P^-1 g P`` for an invertible 2x2 ``P``."""
        Pinv = _inverse2(P)
        return HolonomyLift({g: Pinv @ M @ P for g, M in self.matrices.items()}, self.field)


@dataclass(frozen=True)
class Manifold:
    name: str
    presentation: Presentation
    lift: HolonomyLift


def _inverse2(P: Matrix) -> Matrix:
    (a, b), (c, d) = P.rows
    D = a * d - b * c
    if not D:
        raise ZeroDivisionError("singular conjugator")
    inv = D.inverse() if isinstance(D, FieldElement) else Fraction(1) / D
    return Matrix([[d * inv, -b * inv], [-c * inv, a * inv]])


# ---------------------------------------------------------------------------
# parsing


def _parse_entry(token: str, fld: NumberField | None, lineno: int, source: str):
    try:
        parts = [as_rational(p) for p in token.split(",")]
    except (ValueError, ZeroDivisionError):
        raise ManifoldParseError(lineno, f"bad number {token!r}", source) from None
    if fld is None:
        if len(parts) != 1:
            raise ManifoldParseError(lineno, f"{token!r} needs a 'field:' declaration", source)
        return parts[0]
    if len(parts) > fld.degree:
        raise ManifoldParseError(lineno, f"{token!r} has more than {fld.degree} coefficients", source)
    return fld(parts)


def parse_manifold(text: str, source: str = "<string>") -> Manifold:
    name = source
    fld = None
    gens = None
    rels: list[str] = []
    cusps: list[tuple[str, str]] = []
    mats: dict[str, Matrix] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ManifoldParseError(lineno, f"expected 'key: value', got {line!r}", source)
        key, value = (s.strip() for s in line.split(":", 1))
        if key == "name":
            name = value
        elif key == "field":
            if gens is not None or mats:
                raise ManifoldParseError(lineno, "'field:' must precede generators and matrices", source)
            try:
                fld = NumberField([as_rational(c) for c in value.split(",")], "w")
            except (ValueError, ZeroDivisionError) as exc:
                raise ManifoldParseError(lineno, f"bad minimal polynomial: {exc}", source) from None
        elif key == "gens":
            names = value.split()
            if not names or any(len(g) != 1 or not g.islower() for g in names):
                raise ManifoldParseError(lineno, "generators must be single lowercase letters", source)
            if len(set(names)) != len(names):
                raise ManifoldParseError(lineno, "duplicate generator", source)
            gens = tuple(names)
        elif key in ("rel", "cusp"):
            if gens is None:
                raise ManifoldParseError(lineno, f"'{key}:' before 'gens:'", source)
            words = value.split()
            expected = 1 if key == "rel" else 2
            if len(words) != expected:
                raise ManifoldParseError(lineno, f"'{key}:' takes {expected} word(s)", source)
            for w in words:
                bad = [ch for ch in w if ch.lower() not in gens]
                if bad:
                    raise ManifoldParseError(lineno, f"unknown generator {bad[0]!r} in {w!r}", source)
            if key == "rel":
                rels.append(free_reduce(words[0]))
            else:
                cusps.append((words[0], words[1]))
        elif key.startswith("mat"):
            g = key[3:].strip()
            if gens is None:
                raise ManifoldParseError(lineno, "'mat' before 'gens:'", source)
            if g not in gens:
                raise ManifoldParseError(lineno, f"matrix for unknown generator {g!r}", source)
            tokens = value.split()
            if len(tokens) != 4:
                raise ManifoldParseError(lineno, f"expected 4 entries, got {len(tokens)}", source)
            a, b, c, d = (_parse_entry(t, fld, lineno, source) for t in tokens)
            M = Matrix([[a, b], [c, d]])
            if det(M) != 1:
                raise ManifoldParseError(lineno, f"matrix for {g!r} has determinant {det(M)}, not 1", source)
            mats[g] = M
        else:
            raise ManifoldParseError(lineno, f"unknown directive {key!r}", source)
    last = len(text.splitlines()) or 1
    if gens is None:
        raise ManifoldParseError(last, "missing 'gens:'", source)
    missing = [g for g in gens if g not in mats]
    if missing:
        raise ManifoldParseError(last, f"no matrix for generator(s) {' '.join(missing)}", source)
    return Manifold(name, Presentation(gens, tuple(rels), tuple(cusps)), HolonomyLift(mats, fld))


def load_manifold(path) -> Manifold:
    with open(path, encoding="utf-8") as fh:
        return parse_manifold(fh.read(), str(path))


BUILTINS = {"fig8": "fig8.txt"}


def load_builtin(name: str) -> Manifold:
    if name not in BUILTINS:
        raise KeyError(f"unknown builtin manifold {name!r}; choose from {sorted(BUILTINS)}")
    text = resources.files("charcoords").joinpath("data").joinpath(BUILTINS[name]).read_text(encoding="utf-8")
    return parse_manifold(text, name)


# ---------------------------------------------------------------------------
# checks


def check_relators(pres: Presentation, lift: HolonomyLift) -> list[tuple[str, int]]:
    """Sign (+1 or -1) of every relator image; raises :class:`LiftError` otherwise."""
    report = []
    ident = Matrix.identity(2)
    for rel in pres.relators:
        R = lift.image(rel)
        if R == ident:
            report.append((rel, 1))
        elif R == -ident:
            report.append((rel, -1))
        else:
            raise LiftError(f"relator {rel!r} evaluates to {R}, not +-Id")
    return report


@dataclass(frozen=True)
class PeripheralReport:
    meridian: str
    longitude: str
    meridian_trace: object
    longitude_trace: object
    fixed_point: tuple
    conjugator: Matrix
    lift: HolonomyLift  # conjugated so that the meridian is sign_m (1 1; 0 1)
    cusp: CuspShape

    @property
    def tau(self):
        return self.cusp.tau


def peripheral_parabolic_check(pres: Presentation, lift: HolonomyLift, cusp_index: int = 0) -> PeripheralReport:
    """Verify the peripheral pair is commuting parabolic and normalize the meridian."""
    if not pres.cusps:
        raise LiftError("presentation has no cusp data")
    mer, lon = pres.cusps[cusp_index]
    M = lift.image(mer)
    L = lift.image(lon)
    tm, tl = M.trace(), L.trace()
    for word, t, X in ((mer, tm, M), (lon, tl, L)):
        if t not in (2, -2):
            raise LiftError(f"{word!r} has trace {t}, not +-2")
        if X == Matrix.identity(2) * (t / 2):
            raise LiftError(f"{word!r} maps to +-Id")
    if M @ L != L @ M:
        raise LiftError("meridian and longitude images do not commute")
    sign_m = 1 if tm == 2 else -1
    N0 = M * sign_m - Matrix.identity(2)
    w = (0, 1) if (N0[0, 1] or N0[1, 1]) else (1, 0)
    v = (N0[0, 0] * w[0] + N0[0, 1] * w[1], N0[1, 0] * w[0] + N0[1, 1] * w[1])
    P = Matrix([[v[0], w[0]], [v[1], w[1]]])
    normalized = lift.conjugate(P)
    Mn = normalized.image(mer) * sign_m
    assert Mn == Matrix([[1, 1], [0, 1]]), Mn
    Ln = normalized.image(lon)
    if Ln[1, 0] or Ln[0, 0] != Ln[1, 1]:
        raise LiftError("longitude does not fix the meridian's fixed point")
    sign_l = 1 if Ln[0, 0] == 1 else -1
    tau = Ln[0, 1] * sign_l
    if isinstance(tau, (int, Fraction)) or (isinstance(tau, FieldElement) and tau.is_rational()):
        raise LiftError(f"cusp shape {tau} is real; the peripheral pair is degenerate")
    return PeripheralReport(mer, lon, tm, tl, v, P, normalized, CuspShape(tau, sign_m, sign_l))


def rho_n_of_word(lift: HolonomyLift, n: int, word: str) -> Matrix:
    """Image of ``word`` under the composite of the lift with Sym^(n-1)."""
    M = Matrix.identity(n)
    for ch in word:
        M = M @ sym_power(lift._letter(ch), n)
    return M


def peripheral_word(pres: Presentation, pq, cusp_index: int = 0) -> str:
    """Word of ``meridian^p longitude^q`` for one cusp."""
    mer, lon = pres.cusps[cusp_index]
    p, q = pq
    w = (mer if p >= 0 else invert_word(mer)) * abs(p) + (lon if q >= 0 else invert_word(lon)) * abs(q)
    return free_reduce(w)
