"""Pell-type equations ``x^2 - n y^2 = c`` for ``c`` in {1, -1, 4, -4}.

Fundamental solutions come from the continued fraction of ``sqrt(n)``; the
``+-4`` equations also admit non-convergent solutions for small ``n`` and are
scanned directly there.
"""

from __future__ import annotations

import os
import tempfile
import threading
from dataclasses import dataclass
from math import gcd, isqrt
from pathlib import Path
from typing import Iterator, Optional

from .errors import DomainError, InternalError, UnsolvableError

RHS_VALUES = (1, -1, 4, -4)


@dataclass(frozen=True)
class PellSolution:
    x: int
    y: int
    n: int
    rhs: int

    def __post_init__(self) -> None:
        if self.x * self.x - self.n * self.y * self.y != self.rhs:
            raise InternalError(f"{self.x}^2 - {self.n}*{self.y}^2 != {self.rhs}")

    def as_dict(self) -> dict:
        return {"n": self.n, "rhs": self.rhs, "x": self.x, "y": self.y}


def _check_args(n: int, rhs: int) -> None:
    if rhs not in RHS_VALUES:
        raise DomainError(f"right-hand side must be one of {RHS_VALUES}, got {rhs}")
    if n < 2 or isqrt(n) ** 2 == n:
        raise DomainError(f"n must be a nonsquare integer >= 2, got {n}")


def sqrt_cf(n: int) -> tuple[int, list[int]]:
    """Continued fraction of ``sqrt(n)`` as ``(a0, period)``."""
    a0 = isqrt(n)
    period: list[int] = []
    P, Q, a = 0, 1, a0
    while True:
        P = a * Q - P
        Q = (n - P * P) // Q
        a = (a0 + P) // Q
        period.append(a)
        if Q == 1:
            return a0, period


def sqrt_convergents(n: int, periods: int = 2) -> Iterator[tuple[int, int]]:
    """Convergents of ``sqrt(n)`` covering ``periods`` full periods."""
    a0, period = sqrt_cf(n)
    p0, q0, p1, q1 = a0, 1, 1, 0
    yield p0, q0
    for a in (period * periods)[:-1]:
        p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
        yield p0, q0


def period_length(n: int) -> int:
    return len(sqrt_cf(n)[1])


def negative_solvable(n: int) -> bool:
    """Whether ``x^2 - n y^2 = -1`` has integer solutions."""
    _check_args(n, -1)
    # -1 must be a square mod 4 and mod every odd prime of n; n = 3 mod 4
    # always hides a prime = 3 mod 4
    if n % 4 in (0, 3):
        return False
    return period_length(n) % 2 == 1


def _from_convergents(n: int, rhs: int, primitive_only: bool = False) -> Optional[tuple[int, int]]:
    for p, q in sqrt_convergents(n):
        if p * p - n * q * q == rhs and (not primitive_only or gcd(p, q) == 1):
            return p, q
    return None


def _scan(n: int, rhs: int, y_max: int) -> Optional[tuple[int, int]]:
    for y in range(1, y_max + 1):
        t = n * y * y + rhs
        if t > 0:
            x = isqrt(t)
            if x * x == t:
                return x, y
    return None


def fundamental(n: int, rhs: int = 1, cache: Optional["PellCache"] = None) -> Optional[PellSolution]:
    """Smallest positive solution of ``x^2 - n y^2 = rhs``, or None if there is none."""
    _check_args(n, rhs)
    if cache is not None:
        hit = cache.lookup(n, rhs)
        if hit is not None:
            return hit
    sol = _fundamental(n, rhs)
    if cache is not None and sol is not None:
        cache.store(sol)
    return sol


def _fundamental(n: int, rhs: int) -> Optional[PellSolution]:
    if rhs in (1, -1):
        if rhs == -1 and not negative_solvable(n):
            return None
        found = _from_convergents(n, rhs)
        if found is None:
            if rhs == 1:
                raise InternalError(f"no Pell solution found for n={n}")
            return None
        return PellSolution(found[0], found[1], n, rhs)

    candidates = []
    unit = _fundamental(n, rhs // 4)
    if unit is not None:
        candidates.append((2 * unit.x, 2 * unit.y))
    if n > 16:
        # 4 < sqrt(n): every primitive solution is a convergent
        found = _from_convergents(n, rhs, primitive_only=True)
        if found is not None:
            candidates.append(found)
    else:
        # small n: bounded by the +4 solution built from the +1 unit
        y_max = 2 * _fundamental(n, 1).y
        found = _scan(n, rhs, y_max)
        if found is not None:
            candidates.append(found)
    if not candidates:
        return None
    x, y = min(candidates)
    return PellSolution(x, y, n, rhs)


def is_solvable(n: int, rhs: int) -> bool:
    return fundamental(n, rhs) is not None


def next_solution(first: PellSolution, current: PellSolution) -> PellSolution:
    """One step of the solution recurrence for ``first.rhs``."""
    n, rhs = first.n, first.rhs
    x1, y1, xk, yk = first.x, first.y, current.x, current.y
    if rhs == 1:
        return PellSolution(x1 * xk + n * y1 * yk, x1 * yk + y1 * xk, n, rhs)
    if rhs == 4:
        return PellSolution(_exact_div(x1 * xk + n * y1 * yk, 2), _exact_div(x1 * yk + y1 * xk, 2), n, rhs)
    # negative equations step by the square of the fundamental solution
    s = x1 * x1 + n * y1 * y1
    x = s * xk + 2 * n * x1 * y1 * yk
    y = s * yk + 2 * x1 * y1 * xk
    if rhs == -4:
        x, y = _exact_div(x, 4), _exact_div(y, 4)
    return PellSolution(x, y, n, rhs)


def _exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise InternalError(f"{a} is not divisible by {b}")
    return q


def enumerate_solution(n: int, rhs: int, k: int) -> PellSolution:
    """The k-th positive solution (k = 1 is the fundamental one)."""
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    first = fundamental(n, rhs)
    if first is None:
        raise UnsolvableError(f"x^2 - {n}y^2 = {rhs} has no integer solutions")
    sol = first
    for _ in range(k - 1):
        sol = next_solution(first, sol)
    return sol


def positive_from_negative(neg: PellSolution) -> PellSolution:
    """The +1 (or +4) fundamental solution derived from the -1 (or -4) one."""
    x, y, n = neg.x, neg.y, neg.n
    if neg.rhs == -1:
        return PellSolution(x * x + n * y * y, 2 * x * y, n, 1)
    if neg.rhs == -4:
        return PellSolution(_exact_div(x * x + n * y * y, 2), x * y, n, 4)
    raise DomainError("expected a solution of a negative equation")


class PellCache:
    """File-backed memo of fundamental solutions.

    One record per line, ``n rhs x y``. Records are re-verified against the
    defining identity on load and malformed or failing lines are dropped.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: Optional[dict[tuple[int, int], tuple[int, int]]] = None

    def _load(self) -> dict[tuple[int, int], tuple[int, int]]:
        if self._entries is not None:
            return self._entries
        entries = {}
        try:
            lines = self.path.read_text().splitlines()
        except (OSError, UnicodeDecodeError):
            lines = []
        for line in lines:
            parts = line.split()
            if len(parts) != 4:
                continue
            try:
                n, rhs, x, y = map(int, parts)
            except ValueError:
                continue
            if rhs in RHS_VALUES and n >= 2 and x > 0 and y > 0 and x * x - n * y * y == rhs:
                entries[(n, rhs)] = (x, y)
        self._entries = entries
        return entries

    def lookup(self, n: int, rhs: int) -> Optional[PellSolution]:
        with self._lock:
            hit = self._load().get((n, rhs))
        return None if hit is None else PellSolution(hit[0], hit[1], n, rhs)

    def store(self, sol: PellSolution) -> None:
        with self._lock:
            entries = self._load()
            entries[(sol.n, sol.rhs)] = (sol.x, sol.y)
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=".pell-", suffix=".tmp")
            try:
                with os.fdopen(fd, "w") as fh:
                    for (n, rhs), (x, y) in sorted(entries.items()):
                        fh.write(f"{n} {rhs} {x} {y}\n")
                os.replace(tmp, self.path)
            except BaseException:
                os.unlink(tmp)
                raise
