"""Counting quasimorphisms on free groups and circle lifts for SL(2, R).

A quasimorphism is a map ``f`` on a group with uniformly bounded defect
``|f(ab) - f(a) - f(b)|``.  The counting (Brooks) quasimorphisms built here
carry certified defect bounds, which is what turns their values into lower
bounds for stable commutator length through Bavard duality.  The circle-lift
half of the module computes rotation numbers of projective actions with an
explicit error bound; the translation number of a lift is the archetypal
quasimorphism on the lifted matrix group.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Optional, Sequence, Union

from .free_words import (
    ReducedWord,
    WordError,
    count_disjoint_copies,
    count_disjoint_copies_cyclic,
    cyclically_reduce,
    enumerate_reduced_words,
    invert,
    power,
)

__all__ = [
    "BROOKS_DEFECT",
    "HOMOGENEOUS_BROOKS_DEFECT",
    "QuasimorphismHandle",
    "brooks",
    "brooks_homogeneous",
    "brooks_homogeneous_exact",
    "symmetrize",
    "homogenize_estimate",
    "DefectScan",
    "defect_observed",
    "DefectCertificateError",
    "DET_TOL",
    "SUBDIVISIONS",
    "CircleLift",
    "lift_from_matrix",
    "compose",
    "invert_lift",
    "RotationEstimate",
    "rotation_number",
]

Value = Union[int, float, Fraction]

#: Certified defect bound for a plain counting quasimorphism built on
#: disjoint-copy counts.
BROOKS_DEFECT = 3

#: Certified defect bound for its homogenization (at most twice the plain
#: defect).
HOMOGENEOUS_BROOKS_DEFECT = 6


class DefectCertificateError(RuntimeError):
    """An observed defect exceeded a certified bound; the bound is wrong."""


@dataclass(frozen=True)
class QuasimorphismHandle:
    """A quasimorphism as an evaluator plus an optional certified defect.

    ``defect_certificate`` is an upper bound on the defect that holds by
    construction, not an observation; ``None`` means no bound is claimed.
    """

    name: str
    rank: int
    evaluate: Callable[[ReducedWord], Value]
    defect_certificate: Optional[Value] = None

    def __call__(self, a: ReducedWord) -> Value:
        return self.evaluate(a)


def brooks(w: ReducedWord) -> QuasimorphismHandle:
    """Counting quasimorphism of ``w``: disjoint copies of ``w`` minus
    disjoint copies of ``w^-1``.

    Requires ``len(w) >= 2``; single letters give homomorphisms, not
    interesting quasimorphisms, and break the counting convention.
    """
    if len(w) < 2:
        raise WordError(f"brooks pattern must have length >= 2, got {len(w)}")
    wi = invert(w)

    def evaluate(a: ReducedWord) -> int:
        return count_disjoint_copies(w, a) - count_disjoint_copies(wi, a)

    return QuasimorphismHandle(
        name=f"brooks[{w}]", rank=w.rank, evaluate=evaluate,
        defect_certificate=BROOKS_DEFECT)


def brooks_homogeneous_exact(w: ReducedWord, a: ReducedWord) -> Fraction:
    """Exact value of the homogenized counting quasimorphism of ``w`` at ``a``.

    Equals ``lim_n brooks(w)(a^n) / n``, computed as a rational via cyclic
    counting on the cyclic core of ``a``.  Conjugation-invariant by
    construction.
    """
    if len(w) < 2:
        raise WordError(f"brooks pattern must have length >= 2, got {len(w)}")
    core, _ = cyclically_reduce(a)
    if core.length == 0:
        return Fraction(0)
    return (count_disjoint_copies_cyclic(w, core)
            - count_disjoint_copies_cyclic(invert(w), core))


def brooks_homogeneous(w: ReducedWord) -> QuasimorphismHandle:
    """Handle for the homogenized counting quasimorphism of ``w``."""
    if len(w) < 2:
        raise WordError(f"brooks pattern must have length >= 2, got {len(w)}")

    def evaluate(a: ReducedWord) -> Fraction:
        return brooks_homogeneous_exact(w, a)

    return QuasimorphismHandle(
        name=f"brooks_hom[{w}]", rank=w.rank, evaluate=evaluate,
        defect_certificate=HOMOGENEOUS_BROOKS_DEFECT)


def symmetrize(handle: QuasimorphismHandle) -> QuasimorphismHandle:
    """Antisymmetric part ``a -> (f(a) - f(a^-1)) / 2``.

    Does not increase the defect, so the certificate carries over.
    """

    def evaluate(a: ReducedWord) -> Value:
        diff = handle.evaluate(a) - handle.evaluate(invert(a))
        if isinstance(diff, float):
            return diff / 2
        return Fraction(diff, 2)

    return QuasimorphismHandle(
        name=f"sym[{handle.name}]", rank=handle.rank, evaluate=evaluate,
        defect_certificate=handle.defect_certificate)


class HomogenizationEstimate(NamedTuple):
    value: Value
    error_bound: Optional[Value]


def homogenize_estimate(handle: QuasimorphismHandle, a: ReducedWord,
                        n: int) -> HomogenizationEstimate:
    """Estimate the homogenization at ``a`` by ``f(a^n) / n``.

    The true homogenized value differs from the estimate by at most
    ``defect / n`` whenever a defect certificate is available.
    """
    if n < 1:
        raise ValueError(f"power must be >= 1, got {n}")
    raw = handle.evaluate(power(a, n))
    value = raw / n if isinstance(raw, float) else Fraction(raw, n)
    d = handle.defect_certificate
    if d is None:
        error: Optional[Value] = None
    elif isinstance(d, float):
        error = d / n
    else:
        error = Fraction(d, n)
    return HomogenizationEstimate(value, error)


class DefectScan(NamedTuple):
    observed: Value
    mode: str
    pairs_checked: int


def defect_observed(handle: QuasimorphismHandle, max_len: int, *,
                    pairs_threshold: int = 10_000_000,
                    samples: int = 200_000, seed: int = 0) -> DefectScan:
    """Largest defect ``|f(ab) - f(a) - f(b)|`` seen over words up to
    ``max_len``.

    Scans every pair when the pair count stays within ``pairs_threshold``,
    otherwise a seeded random sample.  Raises DefectCertificateError if an
    observation beats the handle's certified bound, since that means the
    certificate (or the evaluator) is wrong.
    """
    words = list(enumerate_reduced_words(handle.rank, max_len))
    values = {u: handle.evaluate(u) for u in words}
    n = len(words)
    best: Value = 0
    evaluate = handle.evaluate
    if n * n <= pairs_threshold:
        mode = "exhaustive"
        pairs = n * n
        for a in words:
            fa = values[a]
            for b in words:
                d = abs(evaluate(a * b) - fa - values[b])
                if d > best:
                    best = d
    else:
        mode = "sampled"
        pairs = samples
        rng = random.Random(seed)
        for _ in range(samples):
            a = words[rng.randrange(n)]
            b = words[rng.randrange(n)]
            d = abs(evaluate(a * b) - values[a] - values[b])
            if d > best:
                best = d
    cert = handle.defect_certificate
    if cert is not None and best > cert:
        raise DefectCertificateError(
            f"observed defect {best} exceeds certified bound {cert} "
            f"for {handle.name}")
    return DefectScan(best, mode, pairs)


# ---------------------------------------------------------------------------
# circle lifts of projective actions

#: How far a determinant may sit from 1 before a matrix is rejected.
DET_TOL = 1e-9

#: Grid resolution used when walking a lift across a fundamental domain.
SUBDIVISIONS = 64

_SNAP = 1e-12


@dataclass(frozen=True)
class CircleLift:
    """A lift to the real line of the circle map induced by an SL(2, R)
    matrix.

    The circle is R/Z with ``t`` naming the projective direction
    ``(cos pi t, sin pi t)``.  The matrix acts on directions; ``base_value``
    pins the branch by fixing the image of 0.  ``evaluate`` extends over all
    of R through the degree-one rule ``f(x + 1) = f(x) + 1``.
    """

    matrix: tuple[float, float, float, float]
    base_value: float

    def principal(self, t: float) -> float:
        """Image of ``t`` under the induced circle map, reduced into [0, 1)."""
        a, b, c, d = self.matrix
        x = math.cos(math.pi * t)
        y = math.sin(math.pi * t)
        return (math.atan2(c * x + d * y, a * x + b * y) / math.pi) % 1.0

    def evaluate(self, x: float) -> float:
        """Value of the lift at ``x``.

        Walks from 0 to the fractional part through a fixed grid, unwrapping
        each step into [0, 1).  The induced circle map is an orientation
        preserving homeomorphism, so its lift is strictly increasing and
        every true sub-step increment lies in (0, 1); the unwrap therefore
        recovers it exactly, up to rounding handled by a snap guard.
        """
        k = math.floor(x)
        frac = x - k
        total = self.base_value + k
        if frac == 0.0:
            return total
        prev = self.principal(0.0)
        for j in range(1, SUBDIVISIONS + 1):
            raw = self.principal(frac * j / SUBDIVISIONS)
            inc = (raw - prev) % 1.0
            if inc > 1.0 - _SNAP:
                inc = 0.0
            total += inc
            prev = raw
        return total


def _flatten_matrix(matrix) -> tuple[float, float, float, float]:
    entries: list[float] = []
    for row in matrix:
        if isinstance(row, (int, float)):
            entries.append(float(row))
        else:
            entries.extend(float(v) for v in row)
    if len(entries) != 4:
        raise ValueError(f"expected a 2x2 matrix, got {len(entries)} entries")
    return (entries[0], entries[1], entries[2], entries[3])


def lift_from_matrix(matrix: Sequence, branch: int = 0) -> CircleLift:
    """Lift of the projective action of an SL(2, R) matrix.

    ``branch`` shifts the lift by an integer; branch 0 places the image of 0
    in [0, 1).  Rejects matrices whose determinant is not 1 within DET_TOL.
    """
    m = _flatten_matrix(matrix)
    det = m[0] * m[3] - m[1] * m[2]
    if abs(det - 1.0) > DET_TOL:
        raise ValueError(f"matrix determinant {det!r} is not 1 within {DET_TOL}")
    probe = CircleLift(m, 0.0)
    return CircleLift(m, probe.principal(0.0) + branch)


def compose(f: CircleLift, g: CircleLift) -> CircleLift:
    """The lift of the composed circle map, ``x -> f(g(x))``."""
    fa, fb, fc, fd = f.matrix
    ga, gb, gc, gd = g.matrix
    m = (fa * ga + fb * gc, fa * gb + fb * gd,
         fc * ga + fd * gc, fc * gb + fd * gd)
    return CircleLift(m, f.evaluate(g.base_value))


def invert_lift(f: CircleLift) -> CircleLift:
    """The inverse lift, satisfying ``f(g(x)) = x``."""
    a, b, c, d = f.matrix
    adj = (d, -b, -c, a)
    y0 = CircleLift(adj, 0.0).principal(0.0)
    # the adjugate sends direction 0 to y0 and f sends y0 back to an integer
    branch = round(f.evaluate(y0))
    return CircleLift(adj, y0 - branch)


class RotationEstimate(NamedTuple):
    value: float
    error_bound: float


def rotation_number(f: CircleLift, n: int) -> RotationEstimate:
    """Estimate the translation number of a lift by ``f^n(0) / n``.

    The translation number is within ``1/n`` of the estimate for any lift of
    a degree-one circle map; no further regularity is needed.
    """
    if n < 1:
        raise ValueError(f"iteration count must be >= 1, got {n}")
    x = 0.0
    for _ in range(n):
        x = f.evaluate(x)
    return RotationEstimate(x / n, 1.0 / n)
