"""Trigonometric polynomials on T^2 as a model of A_alpha.

A polynomial is a finite map ``(m, n) -> complex`` of Fourier coefficients.
Coefficients are floats, but every membership or annihilation decision is
made on the integer support: ``sign_linear`` for ``m + alpha*n >= 0`` and
``m*q + n*p == 0`` for the circle substitution.
"""

from __future__ import annotations

import cmath
import json
from collections import defaultdict
from math import floor
from typing import Iterable, Mapping, Optional, Union

from .autgroup import AutElement, GLMatrix, TorusPoint
from .quad import QuadNumber, QuadraticIrrational, continued_fraction, sign_linear

PRUNE = 1e-15

Point = tuple[int, int]
Unimodular = Union[TorusPoint, tuple[complex, complex]]


class TrigPoly:
    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Optional[Mapping[Point, complex]] = None):
        self._coeffs: dict[Point, complex] = {}
        for (m, n), c in (coeffs or {}).items():
            c = complex(c)
            if abs(c) >= PRUNE:
                self._coeffs[(int(m), int(n))] = c

    @classmethod
    def chi(cls, m: int, n: int, coef: complex = 1.0) -> "TrigPoly":
        return cls({(m, n): coef})

    @classmethod
    def constant(cls, c: complex = 1.0) -> "TrigPoly":
        return cls({(0, 0): c})

    @property
    def coeffs(self) -> Mapping[Point, complex]:
        return dict(self._coeffs)

    @property
    def support(self) -> frozenset[Point]:
        return frozenset(self._coeffs)

    def __getitem__(self, point: Point) -> complex:
        return self._coeffs.get(point, 0j)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return iter(sorted(self._coeffs.items()))

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        out = defaultdict(complex, self._coeffs)
        for k, c in other._coeffs.items():
            out[k] += c
        return TrigPoly(out)

    def __neg__(self) -> "TrigPoly":
        return TrigPoly({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + (-other)

    def __mul__(self, other: Union["TrigPoly", complex, float, int]) -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            return TrigPoly({k: c * other for k, c in self._coeffs.items()})
        out: dict[Point, complex] = defaultdict(complex)
        for (m1, n1), c1 in self._coeffs.items():
            for (m2, n2), c2 in other._coeffs.items():
                out[(m1 + m2, n1 + n2)] += c1 * c2
        return TrigPoly(out)

    __rmul__ = __mul__

    def close_to(self, other: "TrigPoly", tol: float = 1e-9) -> bool:
        keys = self.support | other.support
        return all(abs(self[k] - other[k]) <= tol for k in keys)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TrigPoly) and self._coeffs == other._coeffs

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {c}" for k, c in self)
        return f"TrigPoly({{{body}}})"

    def evaluate(self, z: complex, w: complex) -> complex:
        return sum(c * z**m * w**n for (m, n), c in self._coeffs.items())

    # text format: one "m n re im" line per coefficient
    def to_text(self) -> str:
        return "".join(f"{m} {n} {c.real!r} {c.imag!r}\n" for (m, n), c in self)

    @classmethod
    def from_text(cls, text: str) -> "TrigPoly":
        coeffs: dict[Point, complex] = defaultdict(complex)
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (3, 4):
                raise ValueError(f"line {lineno}: expected 'm n re [im]', got {line!r}")
            m, n = int(parts[0]), int(parts[1])
            re_, im = float(parts[2]), float(parts[3]) if len(parts) == 4 else 0.0
            coeffs[(m, n)] += complex(re_, im)
        return cls(coeffs)

    def to_json(self) -> list[dict]:
        return [{"m": m, "n": n, "re": c.real, "im": c.imag} for (m, n), c in self]

    @classmethod
    def from_json(cls, data: Union[str, Iterable[Mapping]]) -> "TrigPoly":
        if isinstance(data, str):
            data = json.loads(data)
        coeffs: dict[Point, complex] = defaultdict(complex)
        for rec in data:
            coeffs[(int(rec["m"]), int(rec["n"]))] += complex(float(rec.get("re", 0.0)), float(rec.get("im", 0.0)))
        return cls(coeffs)


def _phases(c: Optional[Unimodular]):
    """``(m, n) -> c1^m c2^n``; exact angles are reduced mod 1 before exponentiating."""
    if c is None:
        return lambda m, n: 1
    if isinstance(c, TorusPoint):
        t1, t2 = c.t1, c.t2

        def phase(m: int, n: int) -> complex:
            t = m * t1 + n * t2
            return cmath.exp(2j * cmath.pi * float(t - floor(t)))

        return phase
    c1, c2 = complex(c[0]), complex(c[1])
    return lambda m, n: _power(c1, m) * _power(c2, n)


def _power(c: complex, k: int) -> complex:
    return c**k if k >= 0 else (1 / c) ** (-k)


def in_algebra(f: TrigPoly, alpha: QuadNumber) -> bool:
    return all(sign_linear(m, n, alpha) >= 0 for m, n in f.support)


def apply_map(f: TrigPoly, A: GLMatrix, c: Optional[Unimodular] = None) -> TrigPoly:
    """``f o phi`` for ``phi(z, w) = (c1 z^m1 w^n1, c2 z^m2 w^n2)``.

    The character at ``(m, n)`` goes to ``(m*m1 + n*m2, m*n1 + n*n2)`` with
    its coefficient scaled by ``c1^m c2^n``.
    """
    phase = _phases(c)
    out: dict[Point, complex] = {}
    for (m, n), coef in f.coeffs.items():
        out[(m * A.m1 + n * A.m2, m * A.n1 + n * A.n2)] = coef * phase(m, n)
    return TrigPoly(out)


def rotation(f: TrigPoly, c: Unimodular) -> TrigPoly:
    """``f(a z, b w)``: support unchanged, coefficient at (m, n) scaled by ``a^m b^n``."""
    phase = _phases(c)
    return TrigPoly({(m, n): coef * phase(m, n) for (m, n), coef in f.coeffs.items()})


def act(g: AutElement, f: TrigPoly) -> TrigPoly:
    """Operator of the group element ``(c, k)``: ``pi(c) pi(A0)^(-k)``."""
    return rotation(apply_map(f, g.A0 ** (-g.k)), g.c)


def cesaro(f: TrigPoly, n: int, m: int) -> TrigPoly:
    """Convolution with the tensor Fejer kernel ``K_n x K_m``."""
    if n < 0 or m < 0:
        raise ValueError("Cesaro degrees must be nonnegative")
    out: dict[Point, complex] = {}
    for (j, k), coef in f.coeffs.items():
        weight = max(0.0, 1 - abs(j) / (n + 1)) * max(0.0, 1 - abs(k) / (m + 1))
        if weight > 0:
            out[(j, k)] = coef * weight
    return TrigPoly(out)


def substitute(f: TrigPoly, p: int, q: int) -> tuple[dict[int, complex], bool]:
    """``F(zeta) = f(zeta^q, zeta^p)`` as ``exponent -> coefficient``, plus injectivity.

    Colliding exponents have their coefficients summed.
    """
    out: dict[int, complex] = defaultdict(complex)
    seen: set[int] = set()
    injective = True
    for (m, n), coef in f.coeffs.items():
        e = m * q + n * p
        if e in seen:
            injective = False
        seen.add(e)
        out[e] += coef
    return dict(out), injective


def measure_pair(f: TrigPoly, p: int, q: int) -> tuple[complex, complex]:
    """``(mu_k(f), mu(f))``: the circle average along ``(zeta^q, zeta^p)`` and the torus average."""
    along = sum((coef for (m, n), coef in f.coeffs.items() if m * q + n * p == 0), 0j)
    return along, f[(0, 0)]


def convergence_threshold(f: TrigPoly, alpha: QuadraticIrrational) -> int:
    """Index K such that every convergent ``p_k/q_k`` with ``k >= K`` gives ``mu_k(f) == mu(f)``.

    ``m*q + n*p == 0`` with ``(m, n) != 0`` needs ``p/q == -m/n``; a reduced
    fraction with ``q > |n|`` cannot equal it.
    """
    widest = max((abs(n) for _, n in f.support if n != 0), default=0)
    for k, (_, q) in enumerate(continued_fraction(alpha).convergents()):
        if q > widest:
            return k
    raise AssertionError("unreachable")


def convergents(alpha: QuadraticIrrational, count: int) -> list[tuple[int, int]]:
    out = []
    for pq in continued_fraction(alpha).convergents():
        if len(out) == count:
            break
        out.append(pq)
    return out

