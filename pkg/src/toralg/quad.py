"""Exact arithmetic on real quadratic irrationals.

A number is stored as ``(u + v*sqrt(D)) / w`` with ``D`` squarefree, ``w > 0``
and ``gcd(u, v, w) == 1``; equal values therefore have identical fields.
Nothing in this module touches floating point except ``__float__``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Union

from .errors import DomainError, NonQuadraticError, ParseError

Rational = Union[int, Fraction]


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def square_part(n: int) -> tuple[int, int]:
    """Split ``n > 0`` as ``s*s*D`` with ``D`` squarefree; returns ``(s, D)``."""
    if n <= 0:
        raise DomainError(f"radicand must be positive, got {n}")
    s, D, rest = 1, 1, n
    p = 2
    # once p**3 > rest the cofactor has at most two prime factors
    while p * p * p <= rest:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            D *= p
        p += 1 if p == 2 else 2
    r = isqrt(rest)
    if r * r == rest:
        s *= r
    else:
        D *= rest
    return s, D


def _sign_surd(a: int, b: int, D: int) -> int:
    """Exact sign of ``a + b*sqrt(D)`` for squarefree ``D >= 2``."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    diff = a * a - b * b * D
    return ((diff > 0) - (diff < 0)) * (1 if a > 0 else -1)


def _as_fraction(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, eq=False)
class QuadNumber:
    """An element ``(u + v*sqrt(D))/w`` of the real quadratic field Q(sqrt(D)).

    ``v`` may be zero, in which case the number is rational and ``D`` only
    records which field it was computed in.
    """

    u: int
    v: int
    w: int
    D: int

    @staticmethod
    def make(u: int, v: int, w: int, D: int) -> "QuadNumber":
        if w == 0:
            raise ZeroDivisionError("zero denominator")
        if w < 0:
            u, v, w = -u, -v, -w
        g = gcd(gcd(u, v), w)
        u, v, w = u // g, v // g, w // g
        if v == 0:
            return QuadNumber(u, 0, w, D)
        return QuadraticIrrational(u, v, w, D)

    @classmethod
    def rational(cls, x: Rational, D: int) -> "QuadNumber":
        x = _as_fraction(x)
        return QuadNumber(x.numerator, 0, x.denominator, D)

    @property
    def is_rational(self) -> bool:
        return self.v == 0

    def as_fraction(self) -> Fraction:
        if self.v:
            raise DomainError(f"{self} is irrational")
        return Fraction(self.u, self.w)

    def _key(self) -> tuple:
        return (self.u, self.w) if self.v == 0 else (self.u, self.v, self.w, self.D)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and Fraction(self.u, self.w) == other
        if isinstance(other, QuadNumber):
            return self._key() == other._key()
        return NotImplemented

    def __hash__(self) -> int:
        if self.v == 0:
            return hash(Fraction(self.u, self.w))
        return hash(self._key())

    def _coerce(self, other) -> "QuadNumber":
        if isinstance(other, QuadNumber):
            if other.v and self.v and other.D != self.D:
                raise DomainError(f"{self} and {other} lie in different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNumber.rational(other, self.D)
        raise TypeError(type(other).__name__)

    def _field(self, other: "QuadNumber") -> int:
        return self.D if self.v else other.D

    def __add__(self, other) -> "QuadNumber":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        D = self._field(o)
        return QuadNumber.make(
            self.u * o.w + o.u * self.w, self.v * o.w + o.v * self.w, self.w * o.w, D
        )

    __radd__ = __add__

    def __neg__(self) -> "QuadNumber":
        return QuadNumber.make(-self.u, -self.v, self.w, self.D)

    def __sub__(self, other) -> "QuadNumber":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "QuadNumber":
        return (-self) + other

    def __mul__(self, other) -> "QuadNumber":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        D = self._field(o)
        return QuadNumber.make(
            self.u * o.u + self.v * o.v * D,
            self.u * o.v + self.v * o.u,
            self.w * o.w,
            D,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadNumber":
        # 1/((u + v r)/w) = w (u - v r) / (u^2 - v^2 D); the norm is nonzero
        # for irrationals and for nonzero rationals.
        den = self.u * self.u - self.v * self.v * self.D
        if den == 0:
            raise ZeroDivisionError("division by zero")
        return QuadNumber.make(self.w * self.u, -self.w * self.v, den, self.D)

    def __truediv__(self, other) -> "QuadNumber":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> "QuadNumber":
        return self.inverse() * other

    def __pow__(self, k: int) -> "QuadNumber":
        if k < 0:
            return self.inverse() ** (-k)
        out: QuadNumber = QuadNumber.rational(1, self.D)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "QuadNumber":
        return QuadNumber.make(self.u, -self.v, self.w, self.D)

    def norm(self) -> Fraction:
        return Fraction(self.u * self.u - self.v * self.v * self.D, self.w * self.w)

    def trace(self) -> Fraction:
        return Fraction(2 * self.u, self.w)

    def sign(self) -> int:
        return _sign_surd(self.u, self.v, self.D)

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def __floor__(self) -> int:
        return floor_surd(self.u, self.v, self.w, self.D)

    def __float__(self) -> float:
        # fine for display and logarithms; never used to decide anything
        from decimal import Decimal, localcontext

        with localcontext() as ctx:
            ctx.prec = 60
            root = Decimal(self.D).sqrt() if self.v else Decimal(0)
            return float((Decimal(self.u) + Decimal(self.v) * root) / Decimal(self.w))

    def render(self) -> str:
        if self.v == 0:
            return str(Fraction(self.u, self.w))
        if self.v == 1:
            rad = f"sqrt({self.D})"
        elif self.v == -1:
            rad = f"-sqrt({self.D})"
        else:
            rad = f"{self.v}*sqrt({self.D})"
        if self.u == 0:
            num = rad
        else:
            num = f"{self.u}{'' if rad.startswith('-') else '+'}{rad}"
        return num if self.w == 1 else f"({num})/{self.w}"

    __str__ = render

    def __repr__(self) -> str:
        return f"{type(self).__name__}(u={self.u}, v={self.v}, w={self.w}, D={self.D})"


@dataclass(frozen=True, eq=False, repr=False)
class QuadraticIrrational(QuadNumber):
    """A QuadNumber with ``v != 0``: an irrational root of an integer quadratic."""

    def __post_init__(self) -> None:
        if self.v == 0 or self.w <= 0 or self.D < 2:
            raise DomainError(f"not a canonical quadratic irrational: {self!r}")


def floor_surd(u: int, v: int, w: int, D: int) -> int:
    """``floor((u + v*sqrt(D))/w)`` using integer arithmetic only."""
    if w < 0:
        u, v, w = -u, -v, -w
    if v == 0:
        return u // w
    # v*sqrt(D) = sign(v) * sqrt(v^2 D); bracket it between integers
    t = v * v * D
    r = isqrt(t)
    if r * r == t:
        return (u + (r if v > 0 else -r)) // w
    lo = u + r if v > 0 else u - r - 1
    # the numerator lies strictly inside (lo, lo + 1), which holds no multiple of w
    return lo // w


def normalize(u: int, v: int, w: int, radicand: int) -> QuadraticIrrational:
    if w == 0:
        raise DomainError("zero denominator")
    if radicand <= 0:
        raise DomainError(f"radicand must be positive, got {radicand}")
    s, D = square_part(radicand)
    if D == 1 or v == 0:
        value = Fraction(u + v * s, w)
        raise DomainError(f"({u}+{v}*sqrt({radicand}))/{w} is the rational number {value}")
    out = QuadNumber.make(u, v * s, w, D)
    assert isinstance(out, QuadraticIrrational)
    return out


def sign_linear(m: int, n: int, alpha: QuadNumber) -> int:
    """Exact sign of ``m + n*alpha``."""
    # (m w + n u + n v sqrt(D)) / w with w > 0
    return _sign_surd(m * alpha.w + n * alpha.u, n * alpha.v, alpha.D)


def _entries(A) -> tuple[int, int, int, int]:
    if hasattr(A, "m1"):
        return A.m1, A.n1, A.m2, A.n2
    (a, b), (c, d) = A
    return a, b, c, d


def eval_quadratic(A, alpha: QuadNumber) -> tuple[int, int]:
    """Residuals of ``n1*alpha^2 + (m1 - n2)*alpha - m2`` for ``A = [[m1, n1], [m2, n2]]``.

    Returns integers ``(r, s)`` with the expression equal to
    ``(r + s*sqrt(D)) / w^2``; it vanishes exactly when both are zero.
    """
    m1, n1, m2, n2 = _entries(A)
    u, v, w, D = alpha.u, alpha.v, alpha.w, alpha.D
    # alpha^2 w^2 = u^2 + v^2 D + 2uv sqrt(D)
    r = n1 * (u * u + v * v * D) + (m1 - n2) * u * w - m2 * w * w
    s = n1 * 2 * u * v + (m1 - n2) * v * w
    return r, s


# ------------------------------------------------------------- standard forms


@dataclass(frozen=True)
class SqrtForm:
    """``sqrt(p/q)`` with ``gcd(p, q) == 1``."""

    p: int
    q: int

    def to_quadratic(self) -> QuadraticIrrational:
        return normalize(0, 1, self.q, self.p * self.q)


@dataclass(frozen=True)
class AffineForm:
    """``r/s + k*sqrt(p/q)``."""

    r: int
    s: int
    k: int
    p: int
    q: int

    def to_quadratic(self) -> QuadraticIrrational:
        # r/s + k sqrt(pq)/q = (r q + k s sqrt(pq)) / (s q)
        return normalize(self.r * self.q, self.k * self.s, self.s * self.q, self.p * self.q)


PaperForm = Union[SqrtForm, AffineForm]


def to_paper_form(alpha: QuadraticIrrational) -> PaperForm:
    """Split alpha as ``sqrt(p/q)`` or ``r/s +- sqrt(p/q)``, the shapes the generator formulas expect."""
    if alpha.sign() <= 0:
        raise DomainError(f"{alpha} is not positive")
    rad = Fraction(alpha.v * alpha.v * alpha.D, alpha.w * alpha.w)
    p, q = rad.numerator, rad.denominator
    if alpha.u == 0:
        return SqrtForm(p, q)
    shift = Fraction(alpha.u, alpha.w)
    return AffineForm(shift.numerator, shift.denominator, 1 if alpha.v > 0 else -1, p, q)


# ---------------------------------------------------------- continued fractions


@dataclass(frozen=True)
class ContinuedFraction:
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def terms(self) -> Iterator[int]:
        yield from self.preperiod
        while True:
            yield from self.period

    def convergents(self) -> Iterator[tuple[int, int]]:
        """Yield ``(p_k, q_k)`` for k = 0, 1, 2, ... indefinitely."""
        p0, q0, p1, q1 = 1, 0, 0, 1
        for a in self.terms():
            p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
            yield p0, q0

    def __str__(self) -> str:
        pre = ", ".join(map(str, self.preperiod))
        per = ", ".join(map(str, self.period))
        return f"[{pre}; ({per})]" if pre else f"[({per})]"


def _surd_state(alpha: QuadNumber) -> tuple[int, int, int]:
    """Write alpha as ``(P + sqrt(d))/Q`` with ``Q | d - P^2``."""
    sgn = 1 if alpha.v > 0 else -1
    P, Q, d = alpha.u * sgn, alpha.w * sgn, alpha.v * alpha.v * alpha.D
    if (d - P * P) % Q:
        aq = abs(Q)
        P, Q, d = P * aq, Q * aq, d * Q * Q
    return P, Q, d


def expansion(alpha: QuadraticIrrational) -> tuple[list[int], list[QuadraticIrrational], int]:
    """Partial quotients and complete quotients up to the first repeat.

    Returns ``(terms, quotients, start)`` where ``quotients[i]`` is the i-th
    complete quotient (``quotients[0] == alpha``), ``terms[i]`` its floor, and
    the periodic part begins at index ``start``.
    """
    P, Q, d = _surd_state(alpha)
    seen: dict[tuple[int, int], int] = {}
    terms: list[int] = []
    quotients: list[QuadraticIrrational] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(terms)
        quotients.append(normalize(P, 1, Q, d))
        a = floor_surd(P, 1, Q, d)
        terms.append(a)
        P = a * Q - P
        Q = (d - P * P) // Q
    return terms, quotients, seen[(P, Q)]


def continued_fraction(alpha: QuadraticIrrational) -> ContinuedFraction:
    terms, _, start = expansion(alpha)
    return ContinuedFraction(tuple(terms[:start]), tuple(terms[start:]))


def cf_fixed_point_check(alpha: QuadraticIrrational, cf: ContinuedFraction, copies: int = 2) -> bool:
    """Fold the expansion back into alpha exactly.

    The periodic tail ``t`` satisfies ``t = M(t)`` for the Mobius map of one
    period; the preperiod maps ``t`` to alpha. Both identities are checked in
    the quadratic field, ``copies`` periods deep.
    """
    def mobius(terms, x):
        p0, q0, p1, q1 = 1, 0, 0, 1
        for a in terms:
            p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
        return (x * p0 + p1) / (x * q0 + q1)

    tail = alpha
    for a in cf.preperiod:
        tail = 1 / (tail - a)
    if mobius(cf.period * copies, tail) != tail:
        return False
    return mobius(cf.preperiod, tail) == alpha if cf.preperiod else tail == alpha


# ------------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt\s*\()|([-+*/()]))")


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[col]!r}", text, col)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("int", m.group(1), start))
        elif m.group(2):
            out.append(("sqrt", "sqrt(", start))
        else:
            out.append((m.group(3), m.group(3), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    # values are (a, b, D): a + b*sqrt(D), D squarefree (D == 1 means b == 0)

    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def integer(self) -> int:
        return int(self.take("int")[1])

    def rational(self) -> Fraction:
        neg = False
        if self.peek()[0] == "-":
            self.i += 1
            neg = True
        num = self.integer()
        den = 1
        if self.peek()[0] == "/" and self.toks[self.i + 1][0] == "int":
            self.i += 1
            tok = self.peek()
            den = self.integer()
            if den == 0:
                raise ParseError("zero denominator", self.text, tok[2])
        value = Fraction(num, den)
        return -value if neg else value

    def radical(self) -> tuple[Fraction, Fraction, int]:
        self.take("sqrt")
        tok = self.peek()
        x = self.rational()
        self.take(")")
        if x < 0:
            raise DomainError(f"negative radicand {x} at position {tok[2]}")
        if x == 0:
            return Fraction(0), Fraction(0), 1
        # sqrt(p/q) = sqrt(p q) / q
        s, D = square_part(x.numerator * x.denominator)
        coeff = Fraction(s, x.denominator)
        if D == 1:
            return coeff, Fraction(0), 1
        return Fraction(0), coeff, D

    def term(self) -> tuple[Fraction, Fraction, int]:
        kind = self.peek()[0]
        if kind == "(":
            self.take("(")
            a, b, D = self.expr()
            self.take(")")
            if self.peek()[0] == "/":
                self.i += 1
                tok = self.peek()
                den = self.integer()
                if den == 0:
                    raise ParseError("zero denominator", self.text, tok[2])
                a, b = a / den, b / den
            return a, b, D
        if kind == "sqrt":
            return self.radical()
        if kind == "-" and self.toks[self.i + 1][0] != "int":
            self.i += 1
            a, b, D = self.term()
            return -a, -b, D
        if kind in ("int", "-"):
            c = self.rational()
            if self.peek()[0] == "*":
                self.i += 1
                a, b, D = self.radical()
                return c * a, c * b, D
            return c, Fraction(0), 1
        tok = self.peek()
        what = "end of input" if kind == "end" else repr(tok[1])
        raise ParseError(f"unexpected {what}", self.text, tok[2])

    def expr(self) -> tuple[Fraction, Fraction, int]:
        a, b, D = self.term()
        while self.peek()[0] in "+-" and self.peek()[0] != "end":
            op = self.take(self.peek()[0])[0]
            a2, b2, D2 = self.term()
            if op == "-":
                a2, b2 = -a2, -b2
            if b and b2 and D != D2:
                # r1 sqrt(D1) + r2 sqrt(D2) + a: degree four over Q
                pos = _sum_sign(a + a2, b, D, b2, D2)
                raise NonQuadraticError(
                    f"sum of sqrt({D}) and sqrt({D2}) is not a quadratic irrational", pos
                )
            if not b:
                D = D2
            a, b = a + a2, b + b2
            if not b:
                D = 1
        return a, b, D


def _sum_sign(a: Fraction, b1: Fraction, D1: int, b2: Fraction, D2: int) -> bool:
    """Whether ``a + b1 sqrt(D1) + b2 sqrt(D2) > 0``, for distinct squarefree D1, D2."""
    # x = b1 sqrt(D1) + b2 sqrt(D2) is irrational and nonzero; compare with t = -a
    if b1 * b2 > 0:
        x_sign = 1 if b1 > 0 else -1
    else:
        diff = b1 * b1 * D1 - b2 * b2 * D2
        x_sign = (1 if diff > 0 else -1) * (1 if b1 > 0 else -1)
    t = -a
    if x_sign > 0 and t < 0:
        return True
    if x_sign < 0 and t >= 0:
        return False
    if x_sign > 0 and t == 0:
        return True
    # same sign: compare squares, x^2 - t^2 = R + S sqrt(D1 D2)
    R = b1 * b1 * D1 + b2 * b2 * D2 - t * t
    S = 2 * b1 * b2
    den = R.denominator * S.denominator
    sq = _sign_surd(int(R * den), int(S * den), D1 * D2)
    return sq > 0 if x_sign > 0 else sq < 0


def parse(text: str) -> QuadraticIrrational:
    """Parse an expression such as ``(1+sqrt(7))/3`` into canonical form."""
    p = _Parser(text)
    a, b, D = p.expr()
    if p.peek()[0] != "end":
        tok = p.peek()
        raise ParseError(f"trailing input {tok[1]!r}", text, tok[2])
    if b == 0:
        raise DomainError(f"{text!r} denotes the rational number {a}")
    # (a.n/a.d) + (b.n/b.d) sqrt(D) over the common denominator
    w = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    alpha = QuadNumber.make(int(a * w), int(b * w), w, D)
    assert isinstance(alpha, QuadraticIrrational)
    if alpha.sign() <= 0:
        raise DomainError(f"{text!r} is not positive")
    return alpha
