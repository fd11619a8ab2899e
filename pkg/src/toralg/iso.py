"""Isomorphism of the algebras A_alpha and of their automorphism groups.

``A_alpha`` and ``A_beta`` are isometrically isomorphic iff some ``A`` in
GL(2, Z) has ``m1 + beta*n1 > 0`` and ``m2 + beta*n2 = alpha*(m1 + beta*n1)``,
i.e. alpha is a Mobius image of beta. For quadratic irrationals that is
decided by comparing continued-fraction tails.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .autgroup import GLMatrix, generator
from .quad import QuadNumber, QuadraticIrrational, continued_fraction, expansion, sign_linear

DEFAULT_BOUND = 100


@dataclass(frozen=True)
class IsoWitness:
    A: GLMatrix
    verified: bool


@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    witness: Optional[IsoWitness] = None

    def __bool__(self) -> bool:
        return self.isomorphic


def witness_holds(A: GLMatrix, alpha: QuadNumber, beta: QuadNumber) -> bool:
    """Exact check of ``m1 + beta n1 > 0`` and ``m2 + beta n2 == alpha (m1 + beta n1)``."""
    if sign_linear(A.m1, A.n1, beta) != 1:
        return False
    return beta * A.n2 + A.m2 == alpha * (beta * A.n1 + A.m1)


def _rotations_match(p: Sequence[int], q: Sequence[int]) -> bool:
    if len(p) != len(q):
        return False
    doubled = tuple(p) * 2
    return any(doubled[i : i + len(q)] == tuple(q) for i in range(len(p)))


def _prefix_matrix(terms: Sequence[int]) -> GLMatrix:
    """Mobius matrix [[p_k, p_{k-1}], [q_k, q_{k-1}]] of a run of partial quotients."""
    M = GLMatrix.identity()
    for a in terms:
        M = M @ GLMatrix(a, 1, 1, 0)
    return M


def _mobius_to_witness(M: GLMatrix, beta: QuadNumber) -> GLMatrix:
    # alpha = (a beta + b)/(c beta + d)  <=>  A = [[d, c], [b, a]]
    A = GLMatrix(M.n2, M.m2, M.n1, M.m1)
    return A if sign_linear(A.m1, A.n1, beta) > 0 else -A


def cf_witness(alpha: QuadraticIrrational, beta: QuadraticIrrational) -> Optional[GLMatrix]:
    """Witness from complete quotients that differ by an integer, or None."""
    ta, qa, _ = expansion(alpha)
    tb, qb, _ = expansion(beta)
    index: dict[QuadNumber, int] = {}
    for i, (a, q) in enumerate(zip(ta, qa)):
        index.setdefault(q - a, i)
    for j, (b, q) in enumerate(zip(tb, qb)):
        i = index.get(q - b)
        if i is not None:
            # alpha_i = beta_j + shift, alpha = Ma(alpha_i), beta = Mb(beta_j)
            shift = GLMatrix(1, ta[i] - b, 0, 1)
            M = _prefix_matrix(ta[:i]) @ shift @ _prefix_matrix(tb[:j]).inverse()
            return _mobius_to_witness(M, beta)
    return None


def search_witness(alpha: QuadNumber, beta: QuadNumber, bound: int) -> Optional[GLMatrix]:
    """Bounded search over ``(m1, n1)``; ``(m2, n2)`` is then forced."""
    for m1 in range(-bound, bound + 1):
        for n1 in range(-bound, bound + 1):
            if sign_linear(m1, n1, beta) != 1:
                continue
            gamma = alpha * (beta * n1 + m1)
            if gamma.v == 0:
                continue
            # gamma = m2 + n2 beta: match the sqrt(D) parts, then the rest
            num, den = gamma.v * beta.w, gamma.w * beta.v
            if num % den:
                continue
            n2 = num // den
            rest = gamma - beta * n2
            if rest.v != 0 or rest.w != 1:
                continue
            m2 = rest.u
            if m1 * n2 - n1 * m2 in (1, -1):
                return GLMatrix(m1, n1, m2, n2)
    return None


def is_isomorphic(alpha: QuadraticIrrational, beta: QuadraticIrrational, fallback_bound: int = DEFAULT_BOUND) -> IsoResult:
    if alpha.D != beta.D:
        return IsoResult(False)
    ca, cb = continued_fraction(alpha), continued_fraction(beta)
    if not _rotations_match(ca.period, cb.period):
        return IsoResult(False)
    A = cf_witness(alpha, beta)
    if A is None or not witness_holds(A, alpha, beta):
        A = search_witness(alpha, beta, fallback_bound)
    if A is None:
        return IsoResult(True, None)
    return IsoResult(True, IsoWitness(A, witness_holds(A, alpha, beta)))


# ---------------------------------------------------------------- conjugacy


@dataclass(frozen=True)
class ConjugacyVerdict:
    """``yes`` carries ``C`` with ``C^-1 A C == B``; ``unknown`` means the bound ran out."""

    verdict: str
    C: Optional[GLMatrix] = None
    reason: str = ""
    bound: Optional[int] = None

    def to_dict(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.C is not None:
            out["conjugator"] = self.C.rows()
        if self.reason:
            out["reason"] = self.reason
        if self.bound is not None:
            out["bound"] = self.bound
        return out


@lru_cache(maxsize=8)
def _box(bound: int) -> tuple[tuple[int, int], ...]:
    vecs = [(x, y) for x in range(-bound, bound + 1) for y in range(-bound, bound + 1) if (x, y) != (0, 0)]
    vecs.sort(key=lambda v: (max(abs(v[0]), abs(v[1])), abs(v[0]) + abs(v[1]), -v[0], -v[1]))
    return tuple(vecs)


def _apply(A: GLMatrix, x: int, y: int) -> tuple[int, int]:
    return A.m1 * x + A.n1 * y, A.m2 * x + A.n2 * y


def _column_search(A: GLMatrix, B: GLMatrix, bound: int, swap: bool) -> Optional[GLMatrix]:
    # CB = AC column-wise: A c1 = b11 c1 + b21 c2, A c2 = b12 c1 + b22 c2.
    # With b21 != 0 the first column fixes the second (swap handles b12 != 0).
    if swap:
        bk, div, bo, mult = B.n2, B.n1, B.m1, B.m2
    else:
        bk, div, bo, mult = B.m1, B.m2, B.n2, B.n1
    for x, y in _box(bound):
        ax, ay = _apply(A, x, y)
        nx, ny = ax - bk * x, ay - bk * y
        if nx % div or ny % div:
            continue
        x2, y2 = nx // div, ny // div
        if abs(x2) > bound or abs(y2) > bound:
            continue
        if x * y2 - y * x2 not in (1, -1):
            continue
        # remaining column equation: A c2 == mult c1 + bo c2
        if _apply(A, x2, y2) != (mult * x + bo * x2, mult * y + bo * y2):
            continue
        return GLMatrix(x2, x, y2, y) if swap else GLMatrix(x, x2, y, y2)
    return None


def _diagonal_search(A: GLMatrix, B: GLMatrix, bound: int) -> Optional[GLMatrix]:
    e1, e2 = B.m1, B.n2
    firsts = [v for v in _box(bound) if _apply(A, *v) == (e1 * v[0], e1 * v[1])]
    seconds = [v for v in _box(bound) if _apply(A, *v) == (e2 * v[0], e2 * v[1])]
    for x, y in firsts:
        for x2, y2 in seconds:
            if x * y2 - y * x2 in (1, -1):
                return GLMatrix(x, x2, y, y2)
    return None


def gl2_conjugate(A: GLMatrix, B: GLMatrix, bound: int = DEFAULT_BOUND) -> ConjugacyVerdict:
    """Search for ``C`` in GL(2, Z), entries bounded by ``bound``, with ``C^-1 A C == B``."""
    if A.det != B.det:
        return ConjugacyVerdict("no", reason=f"determinant {A.det} != {B.det}")
    if A.trace != B.trace:
        return ConjugacyVerdict("no", reason=f"trace {A.trace} != {B.trace}")
    if A == B:
        return ConjugacyVerdict("yes", GLMatrix.identity())
    if B.m2 != 0:
        C = _column_search(A, B, bound, swap=False)
    elif B.n1 != 0:
        C = _column_search(A, B, bound, swap=True)
    elif B.m1 == B.n2:
        # B is scalar and A != B
        return ConjugacyVerdict("no", reason="B is scalar and A differs from it")
    else:
        C = _diagonal_search(A, B, bound)
    if C is None:
        return ConjugacyVerdict("unknown", bound=bound)
    if C.inverse() @ A @ C != B:
        raise AssertionError(f"conjugator {C} failed verification")
    return ConjugacyVerdict("yes", C)


@dataclass(frozen=True)
class AutIsoVerdict:
    verdict: str
    A: GLMatrix
    B: GLMatrix
    against: Optional[str] = None  # "B" or "B^-1" for a yes
    C: Optional[GLMatrix] = None
    reasons: tuple[str, ...] = ()
    bound: Optional[int] = None

    def to_dict(self) -> dict:
        out: dict = {"verdict": self.verdict, "A": self.A.rows(), "B": self.B.rows()}
        if self.C is not None:
            out["conjugator"] = self.C.rows()
            out["target"] = self.against
        if self.reasons:
            out["reasons"] = list(self.reasons)
        if self.bound is not None:
            out["bound"] = self.bound
        return out


def aut_isomorphic(alpha: QuadraticIrrational, beta: QuadraticIrrational, bound: int = DEFAULT_BOUND) -> AutIsoVerdict:
    A, B = generator(alpha), generator(beta)
    direct = gl2_conjugate(A, B, bound)
    if direct.verdict == "yes":
        return AutIsoVerdict("yes", A, B, "B", direct.C)
    inverse = gl2_conjugate(A, B.inverse(), bound)
    if inverse.verdict == "yes":
        return AutIsoVerdict("yes", A, B, "B^-1", inverse.C)
    if direct.verdict == "no" and inverse.verdict == "no":
        return AutIsoVerdict("no", A, B, reasons=(direct.reason, inverse.reason))
    return AutIsoVerdict("unknown", A, B, bound=bound)


# ------------------------------------------------------------ conjecture scan


@dataclass(frozen=True)
class ConjectureEntry:
    alpha: QuadraticIrrational
    generator: GLMatrix
    verdict: ConjugacyVerdict  # verdict "not_applicable" for det -1 generators

    def to_dict(self) -> dict:
        out = {
            "alpha": self.alpha.render(),
            "generator": self.generator.rows(),
            "det": self.generator.det,
            "conjugate_to_inverse": self.verdict.verdict,
        }
        if self.verdict.C is not None:
            out["conjugator"] = self.verdict.C.rows()
        if self.verdict.bound is not None:
            out["bound"] = self.verdict.bound
        return out


def _scan_one(args: tuple[QuadraticIrrational, int]) -> ConjectureEntry:
    alpha, bound = args
    A0 = generator(alpha)
    if A0.det == -1:
        return ConjectureEntry(alpha, A0, ConjugacyVerdict("not_applicable", reason="det -1"))
    return ConjectureEntry(alpha, A0, gl2_conjugate(A0, A0.inverse(), bound))


def conjecture_scan(corpus: Iterable[QuadraticIrrational], bound: int = DEFAULT_BOUND, workers: int = 1) -> list[ConjectureEntry]:
    """Is each SL(2, Z) generator conjugate to its inverse? Results keep input order."""
    jobs = [(alpha, bound) for alpha in corpus]
    if workers <= 1:
        return [_scan_one(job) for job in jobs]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_scan_one, jobs, chunksize=8))


def scan_counts(entries: Iterable[ConjectureEntry]) -> dict[str, int]:
    counts = {"yes": 0, "no": 0, "unknown": 0, "not_applicable": 0}
    for e in entries:
        counts[e.verdict.verdict] += 1
    return counts
