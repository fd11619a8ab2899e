"""Automorphism matrices of A_alpha and the semidirect product T^2 x| Z.

A matrix ``A = [[m1, n1], [m2, n2]]`` in GL(2, Z) induces an automorphism of
A_alpha exactly when ``m1 + alpha*n1 > 0`` and
``n1*alpha^2 + (m1 - n2)*alpha - m2 == 0``. For quadratic alpha these
matrices form an infinite cyclic group; :func:`generator` builds its
generator from Pell solutions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, log
from typing import Optional, Union

from . import pell
from .errors import DomainError, InternalError
from .quad import (
    AffineForm,
    QuadNumber,
    QuadraticIrrational,
    SqrtForm,
    eval_quadratic,
    sign_linear,
    to_paper_form,
)


@dataclass(frozen=True)
class GLMatrix:
    """``[[m1, n1], [m2, n2]]`` with determinant +-1."""

    m1: int
    n1: int
    m2: int
    n2: int

    def __post_init__(self) -> None:
        if self.det not in (1, -1):
            raise DomainError(f"{self.rows()} has determinant {self.det}, not +-1")

    @classmethod
    def from_rows(cls, rows) -> "GLMatrix":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def identity(cls) -> "GLMatrix":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> int:
        return self.m1 * self.n2 - self.n1 * self.m2

    @property
    def trace(self) -> int:
        return self.m1 + self.n2

    def rows(self) -> list[list[int]]:
        return [[self.m1, self.n1], [self.m2, self.n2]]

    def __matmul__(self, other: "GLMatrix") -> "GLMatrix":
        return GLMatrix(
            self.m1 * other.m1 + self.n1 * other.m2,
            self.m1 * other.n1 + self.n1 * other.n2,
            self.m2 * other.m1 + self.n2 * other.m2,
            self.m2 * other.n1 + self.n2 * other.n2,
        )

    def __neg__(self) -> "GLMatrix":
        return GLMatrix(-self.m1, -self.n1, -self.m2, -self.n2)

    def inverse(self) -> "GLMatrix":
        d = self.det
        return GLMatrix(d * self.n2, -d * self.n1, -d * self.m2, d * self.m1)

    def __pow__(self, k: int) -> "GLMatrix":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = GLMatrix.identity()
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def __str__(self) -> str:
        return str(self.rows())


# ------------------------------------------------------------ automorphisms


def is_automorphism_matrix(A: GLMatrix, alpha: QuadNumber) -> bool:
    return sign_linear(A.m1, A.n1, alpha) == 1 and eval_quadratic(A, alpha) == (0, 0)


def eigen_check(A: GLMatrix, alpha: QuadNumber) -> QuadNumber:
    """Eigenvalue of ``A`` on ``[1, alpha]``, verified exactly."""
    if not is_automorphism_matrix(A, alpha):
        raise DomainError(f"{A} does not induce an automorphism of A_{alpha}")
    lam = alpha * A.n1 + A.m1
    if alpha * A.n2 + A.m2 != lam * alpha:
        raise InternalError(f"[1, {alpha}] is not an eigenvector of {A}")
    return lam


@dataclass(frozen=True)
class GeneratorInfo:
    matrix: GLMatrix
    form: Union[SqrtForm, AffineForm]
    solution: pell.PellSolution
    d1: Optional[int] = None


def _integral(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise InternalError(f"{what} = {x} is not an integer")
    return x.numerator


def generator_info(alpha: QuadraticIrrational, cache: Optional[pell.PellCache] = None) -> GeneratorInfo:
    """Generator of the automorphism matrices of A_alpha, with its provenance."""
    form = to_paper_form(alpha)
    if isinstance(form, SqrtForm):
        p, q = form.p, form.q
        sol = pell.fundamental(p * q, -1, cache) or pell.fundamental(p * q, 1, cache)
        A = GLMatrix(sol.x, q * sol.y, p * sol.y, sol.x)
        info = GeneratorInfo(A, form, sol)
    else:
        r, s, k, p, q = form.r, form.s, form.k, form.p, form.q
        disc = p * s * s - q * r * r
        d1 = gcd(disc, q * s) if s % 2 else gcd(disc, 2 * q * s)
        # half_step: the d1 does not divide qs branch solves the +-4 equations
        half_step = (q * s) % d1 != 0
        scale = 4 if half_step else 1
        N = _integral(Fraction(scale * p * q * s**4, d1 * d1), "Pell parameter")
        neg = pell.fundamental(N, -scale, cache)
        if neg is not None:
            sol, ell = neg, k * neg.y
        else:
            sol = pell.fundamental(N, scale, cache)
            ell = sol.y
        e = Fraction(q * r * s, d1)
        x = Fraction(sol.x, 2) if half_step else Fraction(sol.x)
        A = GLMatrix(
            _integral(-e * ell + x, "m1"),
            _integral(Fraction(q * s * s, d1) * ell, "n1"),
            _integral(Fraction(disc, d1) * ell, "m2"),
            _integral(e * ell + x, "n2"),
        )
        info = GeneratorInfo(A, form, sol, d1)
    if not is_automorphism_matrix(info.matrix, alpha):
        raise InternalError(f"assembled {info.matrix} fails the automorphism test for {alpha}")
    return info


def generator(alpha: QuadraticIrrational, cache: Optional[pell.PellCache] = None) -> GLMatrix:
    return generator_info(alpha, cache).matrix


def _log(x: QuadNumber) -> float:
    # values below one lose all precision as floats; take the log of the inverse
    return log(float(x)) if x >= 1 else -log(float(x.inverse()))


def power_index(A: GLMatrix, A0: GLMatrix, alpha: QuadNumber) -> Optional[int]:
    """``k`` with ``A == A0**k``, or None. Both must be automorphism matrices."""
    lam, lam0 = eigen_check(A, alpha), eigen_check(A0, alpha)
    k = round(_log(lam) / _log(lam0))
    for cand in (k, k - 1, k + 1):
        if lam0**cand == lam and A0**cand == A:
            return cand
    return None


# ---------------------------------------------------------- torus and group


def _mod1(t: Fraction) -> Fraction:
    return t - (t.numerator // t.denominator)


@dataclass(frozen=True)
class TorusPoint:
    """``(exp(2 pi i t1), exp(2 pi i t2))`` with exact angles in [0, 1)."""

    t1: Fraction = Fraction(0)
    t2: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "t1", _mod1(Fraction(self.t1)))
        object.__setattr__(self, "t2", _mod1(Fraction(self.t2)))

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint(self.t1 + other.t1, self.t2 + other.t2)

    def __neg__(self) -> "TorusPoint":
        return TorusPoint(-self.t1, -self.t2)

    def unimodular(self) -> tuple[complex, complex]:
        from cmath import exp, pi

        return exp(2j * pi * float(self.t1)), exp(2j * pi * float(self.t2))


def psi_action(A: GLMatrix, c: TorusPoint) -> TorusPoint:
    """``(c1^a c2^b, c1^c c2^d)`` in angle coordinates."""
    return TorusPoint(A.m1 * c.t1 + A.n1 * c.t2, A.m2 * c.t1 + A.n2 * c.t2)


@dataclass(frozen=True)
class AutElement:
    """Element ``(c, k)`` of T^2 x|_psi Z with ``(c, m)(d, n) = (c + psi^m(d), m + n)``.

    Acting on functions, ``(c, k)`` is the operator ``pi(c) pi(A0)^(-k)``;
    see :mod:`toralg.fourier` for the realization.
    """

    c: TorusPoint
    k: int
    A0: GLMatrix = field(default_factory=GLMatrix.identity)

    def __mul__(self, other: "AutElement") -> "AutElement":
        if other.A0 != self.A0:
            raise DomainError("elements belong to different semidirect products")
        moved = psi_action(self.A0**self.k, other.c)
        return AutElement(self.c + moved, self.k + other.k, self.A0)

    def inverse(self) -> "AutElement":
        return AutElement(psi_action(self.A0 ** (-self.k), -self.c), -self.k, self.A0)

    @classmethod
    def identity(cls, A0: GLMatrix) -> "AutElement":
        return cls(TorusPoint(), 0, A0)


def conjugation_formula(A0: GLMatrix, k: int, c: TorusPoint) -> TorusPoint:
    """Right-hand side of ``pi(A)^k pi(c) pi(A)^-k = pi(c')`` from the entries of ``A0**k``."""
    Ak = A0**k
    a, b, cc, d, D = Ak.m1, Ak.n1, Ak.m2, Ak.n2, Ak.det
    t1, t2 = c.t1, c.t2
    return TorusPoint(Fraction(d, D) * t1 - Fraction(b, D) * t2, Fraction(-cc, D) * t1 + Fraction(a, D) * t2)


def conjugation_formula_check(A0: GLMatrix, k: int, c: TorusPoint) -> TorusPoint:
    """Evaluate the closed form and assert it matches conjugation in the group.

    ``pi(A0)^k`` is the group element ``(0, -k)``, so the operator conjugate
    is ``g^-1 h g`` with ``g = (0, k)`` and ``h = (c, 0)``.
    """
    closed = conjugation_formula(A0, k, c)
    g = AutElement(TorusPoint(), k, A0)
    h = AutElement(c, 0, A0)
    conj = g.inverse() * h * g
    if conj.k != 0 or conj.c != closed:
        raise InternalError(f"conjugation formula mismatch: {closed} vs {conj.c}")
    return closed


def multiply(g: AutElement, h: AutElement) -> AutElement:
    return g * h
