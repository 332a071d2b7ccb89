"""Exact check that the length-2 part of the correlator class on the four-punctured sphere is the KZ connection.

Setting: punctures ``S* = {0, 1, inf}`` and the moving point ``z`` as base point.
Free-Lie elements live in degree <= 2 on the Lyndon basis ``X0, X1, [X0, X1]``
after eliminating ``X_inf = -X0 - X1``.  Derivations are recorded by their values
on ``X0, X1, X_inf``.  Rational functions of ``z`` are reduced fractions of
integer polynomials.  Coefficients carry a ``(2 pi i)^-1`` tag.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Sequence

# ---------------------------------------------------------------------------
# Polynomials and rational functions over Q


Poly = tuple[Fraction, ...]  # coefficients, constant term first, no trailing zeros


def _trim(c: Iterable) -> Poly:
    c = [Fraction(x) for x in c]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def p_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def p_neg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def p_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def p_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        a = list(_trim(a))
    return _trim(q), _trim(a)


def p_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, p_divmod(a, b)[1]
    if not a:
        return ()
    return tuple(x / a[-1] for x in a)


def _integer_content(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Scale to integer coefficients with positive leading denominator coefficient."""
    coeffs = list(num) + list(den)
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    g = g or 1
    if den[-1] < 0:
        g = -g
    return tuple(Fraction(int(c * lcm), g) for c in num), tuple(Fraction(int(c * lcm), g) for c in den)


@dataclass(frozen=True)
class RationalFunction:
    """Reduced ``num / den`` in ``z``.

    >>> (RationalFunction.pole(0) + RationalFunction.pole(1)).num
    (Fraction(-1, 1), Fraction(2, 1))
    """

    num: Poly
    den: Poly = (Fraction(1),)

    def __post_init__(self) -> None:
        num, den = _trim(self.num), _trim(self.den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            object.__setattr__(self, "num", ())
            object.__setattr__(self, "den", (Fraction(1),))
            return
        g = p_gcd(num, den)
        num, den = p_divmod(num, g)[0], p_divmod(den, g)[0]
        num, den = _integer_content(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def const(cls, c: Fraction | int) -> "RationalFunction":
        return cls((Fraction(c),))

    @classmethod
    def pole(cls, a: Fraction | int) -> "RationalFunction":
        """``1 / (z - a)``."""
        return cls((Fraction(1),), (Fraction(-a), Fraction(1)))

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(p_add(p_mul(self.num, other.den), p_mul(other.num, self.den)), p_mul(self.den, other.den))

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(p_neg(self.num), self.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction | Fraction | int") -> "RationalFunction":
        if not isinstance(other, RationalFunction):
            other = RationalFunction.const(other)
        return RationalFunction(p_mul(self.num, other.num), p_mul(self.den, other.den))

    __rmul__ = __mul__

    def conj(self) -> "RationalFunction":
        # rational coefficients: conjugation only renames z to zbar
        return self

    def __call__(self, z: complex) -> complex:
        def ev(p: Poly) -> complex:
            return sum(complex(c) * z**i for i, c in enumerate(p))

        return ev(self.num) / ev(self.den)

    def __str__(self) -> str:
        def fmt(p: Poly) -> str:
            terms = [f"{c}*z^{i}" if i else f"{c}" for i, c in enumerate(p) if c]
            return " + ".join(terms) or "0"

        return f"({fmt(self.num)})/({fmt(self.den)})"


ZERO = RationalFunction(())

# ---------------------------------------------------------------------------
# Free Lie algebra in degree <= 2

GENERATORS = ("0", "1", "inf")


@dataclass(frozen=True)
class LieElement:
    """``a X0 + b X1 + c [X0, X1]``; higher degrees are outside the truncation."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(0)

    @classmethod
    def gen(cls, s: str) -> "LieElement":
        if s == "0":
            return cls(Fraction(1))
        if s == "1":
            return cls(Fraction(0), Fraction(1))
        if s == "inf":
            return cls(Fraction(-1), Fraction(-1))
        raise KeyError(s)

    def __add__(self, o: "LieElement") -> "LieElement":
        return LieElement(self.a + o.a, self.b + o.b, self.c + o.c)

    def __neg__(self) -> "LieElement":
        return LieElement(-self.a, -self.b, -self.c)

    def __sub__(self, o: "LieElement") -> "LieElement":
        return self + (-o)

    def scale(self, k: Fraction | int) -> "LieElement":
        return LieElement(self.a * k, self.b * k, self.c * k)

    def degree_one(self) -> bool:
        return self.c == 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0

    def __str__(self) -> str:
        parts = [f"{v}*{n}" for v, n in ((self.a, "X0"), (self.b, "X1"), (self.c, "[X0,X1]")) if v]
        return " + ".join(parts) or "0"


def bracket(x: LieElement, y: LieElement) -> LieElement:
    """Lie bracket truncated at degree 2: only degree-1 parts contribute."""
    if x.c or y.c:
        raise ValueError("bracket leaves the degree <= 2 truncation")
    return LieElement(c=x.a * y.b - x.b * y.a)


# ---------------------------------------------------------------------------
# Cyclic words and special derivations


@dataclass(frozen=True)
class Derivation:
    """Values on ``X0, X1, X_inf``."""

    images: tuple[LieElement, LieElement, LieElement]

    def on(self, s: str) -> LieElement:
        return self.images[GENERATORS.index(s)]

    def __add__(self, o: "Derivation") -> "Derivation":
        return Derivation(tuple(a + b for a, b in zip(self.images, o.images)))

    def scale(self, k: Fraction | int) -> "Derivation":
        return Derivation(tuple(a.scale(k) for a in self.images))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.images)

    def respects_relation(self) -> bool:
        """``X0 + X1 + X_inf = 0`` is preserved."""
        return (self.images[0] + self.images[1] + self.images[2]).is_zero()

    def raises_degree(self) -> bool:
        """Every generator image lies in degree 2, as for ``X_s -> [X_s, ...]``."""
        return all(x.a == 0 and x.b == 0 for x in self.images)

    def __str__(self) -> str:
        return "{" + ", ".join(f"X{s} -> {x}" for s, x in zip(GENERATORS, self.images)) + "}"


ZERO_DER = Derivation((LieElement(), LieElement(), LieElement()))


def ad(y: LieElement) -> Derivation:
    """Inner derivation ``X -> [X, y]``."""
    return Derivation(tuple(bracket(LieElement.gen(s), y) for s in GENERATORS))


CyclicWord2 = tuple[str, str]


def cyclic_derivative(word: Sequence[str], s: str) -> list[tuple[str, ...]]:
    """``dF/dX_s``: for each occurrence of ``s``, the rest of the word read cyclically after it."""
    n = len(word)
    return [tuple(word[(i + k) % n] for k in range(1, n)) for i in range(n) if word[i] == s]


def special_derivation(words: Iterable[tuple[Fraction, Sequence[str]]]) -> Derivation:
    """``X_s -> [X_s, dF/dX_s]`` for ``F = sum c * C(word)`` with words of length 2.

    >>> special_derivation([(Fraction(1), ("0", "1"))]).on("0")
    LieElement(a=Fraction(0, 1), b=Fraction(0, 1), c=Fraction(1, 1))
    """
    images = []
    for s in GENERATORS:
        deriv = LieElement()
        for c, w in words:
            if len(w) != 2:
                raise ValueError("only length-2 cyclic words enter the degree-1 truncation")
            for rest in cyclic_derivative(w, s):
                deriv = deriv + LieElement.gen(rest[0]).scale(c)
        images.append(bracket(LieElement.gen(s), deriv))
    return Derivation(tuple(images))


def contributing_words() -> list[CyclicWord2]:
    """Length-2 cyclic words on distinct punctures; repeated letters have zero correlator."""
    return list(itertools.combinations(GENERATORS, 2))


# ---------------------------------------------------------------------------
# Derivation-valued 1-forms

Marker = Literal["dz", "dzbar"]


@dataclass
class DerivationForm:
    """``sum f_i(z) d(z or zbar) (x) D_i`` with a ``(2 pi i)^-pi_power`` tag, stored per generator image."""

    terms: list[tuple[RationalFunction, Marker, Derivation]]
    pi_power: int = 1

    def normal_form(self) -> dict[tuple[Marker, str, str], RationalFunction]:
        """Coefficient of ``marker (x) (X_s -> basis element)`` for each generator and Lyndon basis element."""
        out: dict[tuple[Marker, str, str], RationalFunction] = {}
        for f, m, D in self.terms:
            for s, img in zip(GENERATORS, D.images):
                for name, k in (("X0", img.a), ("X1", img.b), ("[X0,X1]", img.c)):
                    if k:
                        key = (m, s, name)
                        out[key] = out.get(key, ZERO) + f * k
        return {k: v for k, v in out.items() if not v.is_zero()}

    def is_zero(self) -> bool:
        return not self.normal_form()

    def __add__(self, other: "DerivationForm") -> "DerivationForm":
        if self.pi_power != other.pi_power:
            raise ValueError("tags differ")
        return DerivationForm(self.terms + other.terms, self.pi_power)

    def scale(self, k: Fraction | int) -> "DerivationForm":
        return DerivationForm([(f, m, D.scale(k)) for f, m, D in self.terms], self.pi_power)

    def coefficient(self, marker: Marker, derivation: Derivation, z: complex) -> complex:
        """Value at ``z`` of the coefficient multiplying ``derivation`` when it is one of the summands."""
        return sum((f(z) for f, m, D in self.terms if m == marker and D == derivation), 0j)

    def report(self) -> str:
        lines = []
        for (m, s, name), f in sorted(self.normal_form().items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
            lines.append(f"(2 pi i)^-{self.pi_power} * {f} {m} (x) [X{s} -> {name}]")
        return "\n".join(lines) or "0"


# The moving point z is the base point; (2 pi i) G(x, y) = log|x - y| - log|z - x| - log|z - y| + C(z).
# A Green function is recorded as integer multiples of log|z - a| for finite punctures a.


def green_log_terms(x: str, y: str) -> list[tuple[int, int]]:
    """``(coefficient, a)`` with ``(2 pi i) G(x, y) = sum c log|z - a| + (z-independent) + C(z)``.

    Terms containing the puncture at infinity cancel in pairs.
    """
    out = []
    for p in (x, y):
        if p != "inf":
            out.append((-1, int(p)))
    return out


LogRule = Literal["full", "half"]


def _d_log(a: int, marker: Marker, rule: LogRule) -> RationalFunction:
    # "half" is the literal d log|z - a| = dz / (2 (z - a)); "full" drops the 1/2 and matches the KZ normalization
    f = RationalFunction.pole(a)
    return f * Fraction(1, 2) if rule == "half" else f


def g11_derivation_form(marker: Marker = "dz", rule: LogRule = "full") -> DerivationForm:
    """``d G_{1,1}`` (``dbar`` for ``dzbar``) as a derivation-valued form, tag ``(2 pi i)^-1``.

    Each contributing word ``C(X_s X_t)`` is paired with ``d G(s, t)`` and sent to its
    special derivation.  The regular part ``dC (x) sum_words`` is included and
    cancels because that sum maps to the zero derivation.
    """
    terms: list[tuple[RationalFunction, Marker, Derivation]] = []
    for s, t in contributing_words():
        D = special_derivation([(Fraction(1), (s, t))])
        for c, a in green_log_terms(s, t):
            terms.append((_d_log(a, marker, rule) * c, marker, D))
    regular = special_derivation([(Fraction(1), w) for w in contributing_words()])
    if not regular.is_zero():
        raise ArithmeticError("the regular part should act by zero")
    # placeholder coefficient 1 stands for dC(z, v_z), which is not modelled
    terms.append((RationalFunction.const(1), marker, regular))
    return DerivationForm(terms, 1)


def kz_form(marker: Marker = "dz") -> DerivationForm:
    """``(Id (x) ad) omega_KZ``; the ``dzbar`` version is the complex conjugate, whose tag flips sign."""
    sign = 1 if marker == "dz" else -1
    terms = [
        (RationalFunction.pole(0) * sign, marker, ad(LieElement.gen("0"))),
        (RationalFunction.pole(1) * sign, marker, ad(LieElement.gen("1"))),
    ]
    return DerivationForm(terms, 1)


def twistor_restriction(u: Literal[0, 1], rule: LogRule = "full") -> DerivationForm:
    """The class on the twistor line at ``u = 1`` (``d G_{1,1}``) or ``u = 0`` (``-dbar G_{1,1}``)."""
    if u == 1:
        return g11_derivation_form("dz", rule)
    if u == 0:
        return g11_derivation_form("dzbar", rule).scale(-1)
    raise ValueError("u must be 0 or 1")


def kz_compare(u: Literal[0, 1] = 1, rule: LogRule = "full") -> DerivationForm:
    """Residual ``G'|_u + (Id (x) ad) omega``; zero means the identity holds exactly."""
    return twistor_restriction(u, rule) + kz_form("dz" if u == 1 else "dzbar")
