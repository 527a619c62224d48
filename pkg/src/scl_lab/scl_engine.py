"""Two-sided certified bounds for commutator length and its stable version.

Upper bounds are explicit products of commutators found by bounded search
and re-verified letter by letter before they are handed back.  Lower bounds
come from homogeneous counting quasimorphisms through Bavard duality.  Both
sides use exact rational arithmetic, so a report's bracket is a proof about
the word, not an estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .free_words import (
    ReducedWord,
    _codes_up_to,
    _cyclic_split,
    _inv,
    _least_rotation,
    _reduce,
    _word_key,
    abelianization,
    commutator,
    cyclically_reduce,
    enumerate_reduced_words,
    power,
    word_sort_key,
)
from .quasimorphisms import HOMOGENEOUS_BROOKS_DEFECT, brooks_homogeneous_exact

__all__ = [
    "CertificateError",
    "NotInCommutatorSubgroupError",
    "SoundnessError",
    "WitnessError",
    "SearchBudgetError",
    "CommutatorCertificate",
    "InverseConjugacyCertificate",
    "cl_upper",
    "cl_lower",
    "scl_lower_bavard",
    "scl_upper_from_power",
    "default_brooks_dictionary",
    "SclReport",
    "scl_report",
    "scl_zero_by_inverse_conjugacy",
    "DEFAULT_MAX_LEN",
    "DEFAULT_MAX_GENUS",
    "DEFAULT_N_MAX",
    "DEFAULT_PAIR_BUDGET",
]

DEFAULT_MAX_LEN = 6
DEFAULT_MAX_GENUS = 2
DEFAULT_N_MAX = 4
DEFAULT_PAIR_BUDGET = 3_000_000

_PACK_OFFSET = 64  # byte packing supports letter codes in [-63, 63]


class CertificateError(ValueError):
    """A certificate failed its own verification."""


class NotInCommutatorSubgroupError(ValueError):
    """The word has nonzero abelianization, so no commutator product equals it."""


class SoundnessError(RuntimeError):
    """Certified bounds contradict each other or the Duncan-Howie 1/2
    floor; indicates an internal bug, never a property of the input."""


class WitnessError(RuntimeError):
    """A search hit could not be rebuilt into a certificate; internal bug."""


class SearchBudgetError(ValueError):
    """The requested search exceeds the configured pair budget."""


@dataclass(frozen=True)
class CommutatorCertificate:
    """A verified expression of ``word`` as a product of commutators.

    Construction recomputes the product from the pairs and compares it with
    ``word`` letter by letter; instances therefore always witness
    ``cl(word) <= genus``.
    """

    word: ReducedWord
    pairs: tuple[tuple[ReducedWord, ReducedWord], ...]

    def __post_init__(self):
        product = ReducedWord(self.word.rank, (), _trusted=True)
        for u, v in self.pairs:
            if u.rank != self.word.rank or v.rank != self.word.rank:
                raise CertificateError("certificate pair rank mismatch")
            product = product * commutator(u, v)
        if product != self.word:
            raise CertificateError(
                f"commutator product {product} does not equal {self.word}")

    @property
    def genus(self) -> int:
        return len(self.pairs)


# ---------------------------------------------------------------------------
# upper bounds: bounded certificate search

def _primitive_period(codes: tuple[int, ...]) -> int:
    n = len(codes)
    for p in range(1, n + 1):
        if n % p == 0 and codes[p:] + codes[:p] == codes:
            return p
    return n  # pragma: no cover - p = n always matches


def _genus_one_search(a: ReducedWord, max_len: int):
    """First (u, v) in canonical order with [u, v] = a and both lengths
    within ``max_len``, or None.

    For each candidate u this solves the conjugacy equation
    ``v u^-1 v^-1 = u^-1 a`` exactly: conjugate words share a cyclic core up
    to rotation, and all solutions v form one coset of the centralizer of u,
    which is cyclic.  Sweeping that coset finds the shortest solution, so
    the search is complete at this length budget.
    """
    rank = a.rank
    target = a.codes
    for u_codes in _codes_up_to(rank, max_len):
        if not u_codes:
            continue
        u_inv = _inv(u_codes)
        t = _reduce(u_inv + target)
        c1_raw, core_u = _cyclic_split(u_inv)
        c2_raw, core_t = _cyclic_split(t)
        if len(core_u) != len(core_t) or not core_u:
            continue
        canon_u = _least_rotation(core_u)
        if canon_u != _least_rotation(core_t):
            continue
        c1 = list(c1_raw)
        for i in range(len(core_u)):
            if core_u[i:] + core_u[:i] == canon_u:
                c1 += core_u[:i]
                break
        c2 = list(c2_raw)
        for i in range(len(core_t)):
            if core_t[i:] + core_t[:i] == canon_u:
                c2 += core_t[:i]
                break
        # u^-1 = c1 K c1^-1 and t = c2 K c2^-1 for the same core K, so
        # v0 = c2 c1^-1 conjugates u^-1 to t; the full solution set is
        # v0 <root> for the primitive root of u^-1
        c1_t = tuple(c1)
        c2_t = tuple(c2)
        p = _primitive_period(canon_u)
        seed_v = _reduce(c2_t + _inv(c1_t))
        K = max_len + len(seed_v) + 2
        best = None
        for k in range(-K, K + 1):
            mid = canon_u[:p] * k if k >= 0 else _inv(canon_u[:p] * (-k))
            vk = _reduce(c2_t + mid + _inv(c1_t))
            entry = (len(vk), _word_key(vk), k)
            if best is None or entry < best[0]:
                best = (entry, vk)
        if best is not None and best[0][0] <= max_len and best[1]:
            u = ReducedWord(rank, u_codes, _trusted=True)
            v = ReducedWord(rank, best[1], _trusted=True)
            return (u, v)
    return None


def _pack(codes: tuple[int, ...]) -> bytes:
    return bytes(c + _PACK_OFFSET for c in codes)


def _unpack(key: bytes) -> tuple[int, ...]:
    return tuple(b - _PACK_OFFSET for b in key)


def _pack_inverse(key: bytes) -> bytes:
    return bytes(2 * _PACK_OFFSET - b for b in reversed(key))


@lru_cache(maxsize=4)
def _commutator_value_index(rank: int, max_len: int):
    """All values of single commutators with both entries within ``max_len``.

    Returns (sorted key list, key set) with words packed as byte strings.
    The set is closed under inversion because [u, v]^-1 = [v, u].
    """
    vocab = [c for c in _codes_up_to(rank, max_len) if c]
    seen: set[bytes] = set()
    add = seen.add
    for i, u in enumerate(vocab):
        iu = _inv(u)
        for v in vocab[i + 1:]:
            c = _reduce(u + v + iu + _inv(v))
            if c:
                key = _pack(c)
                add(key)
                add(_pack_inverse(key))
    ordered = sorted(seen, key=lambda k: (len(k), k))
    return ordered, seen


def _genus_two_search(a: ReducedWord, max_len: int, pair_budget: int):
    rank = a.rank
    if rank >= _PACK_OFFSET:
        raise SearchBudgetError(
            f"packed genus-2 search supports rank < {_PACK_OFFSET}, got {rank}")
    n = len(_codes_up_to(rank, max_len)) - 1
    pairs = n * (n - 1) // 2
    if pairs > pair_budget:
        raise SearchBudgetError(
            f"genus-2 search at rank {rank}, max_len {max_len} needs "
            f"{pairs} pairs; budget is {pair_budget}")
    ordered, seen = _commutator_value_index(rank, max_len)
    target = a.codes
    for key in ordered:
        first = _unpack(key)
        rest = _reduce(_inv(first) + target)
        if rest and _pack(rest) in seen:
            pair1 = _genus_one_search(
                ReducedWord(rank, first, _trusted=True), max_len)
            pair2 = _genus_one_search(
                ReducedWord(rank, rest, _trusted=True), max_len)
            if pair1 is None or pair2 is None:
                raise WitnessError(
                    "index hit could not be rebuilt into commutator pairs")
            return (pair1, pair2)
    return None


def cl_upper(a: ReducedWord, *, max_genus: int = DEFAULT_MAX_GENUS,
             max_len: int = DEFAULT_MAX_LEN,
             pair_budget: int = DEFAULT_PAIR_BUDGET
             ) -> Optional[CommutatorCertificate]:
    """Smallest-genus commutator certificate found within the budget.

    Searches genus 0 (the identity), genus 1 by conjugacy solving, and
    genus 2 by meeting single-commutator values in the middle; each stage is
    complete for entries up to ``max_len``, so a None return means no
    certificate exists within this length budget, not merely that none was
    found.  Raises NotInCommutatorSubgroupError when no certificate of any
    genus can exist.
    """
    vec = abelianization(a)
    if any(vec):
        raise NotInCommutatorSubgroupError(
            f"{a} has nonzero abelianization {vec}")
    if max_genus < 0:
        raise ValueError(f"max_genus must be >= 0, got {max_genus}")
    if max_genus > 2:
        raise ValueError(
            f"search supports genus at most 2, got max_genus {max_genus}")
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    if a.is_identity():
        return CommutatorCertificate(a, ())
    if max_genus >= 1:
        hit = _genus_one_search(a, max_len)
        if hit is not None:
            return CommutatorCertificate(a, (hit,))
    if max_genus >= 2:
        hit2 = _genus_two_search(a, max_len, pair_budget)
        if hit2 is not None:
            return CommutatorCertificate(a, hit2)
    return None


# ---------------------------------------------------------------------------
# lower bounds: Bavard duality for counting quasimorphisms

def default_brooks_dictionary(a: ReducedWord) -> tuple[ReducedWord, ...]:
    """Counting patterns tried against ``a``: every cyclic subword of its
    core with length 2..6, plus every reduced two-letter word of the rank.

    Returned in canonical order so downstream witness choices are
    deterministic.
    """
    core, _ = cyclically_reduce(a)
    out: list[ReducedWord] = []
    seen: set[tuple[int, ...]] = set()
    L = core.length
    doubled = core.codes * 2
    for ell in range(2, min(6, L) + 1):
        for i in range(L):
            sub = doubled[i:i + ell]
            if sub not in seen:
                seen.add(sub)
                out.append(ReducedWord(a.rank, sub, _trusted=True))
    for u in enumerate_reduced_words(a.rank, 2, min_len=2):
        if u.codes not in seen:
            seen.add(u.codes)
            out.append(u)
    out.sort(key=word_sort_key)
    return tuple(out)


def scl_lower_bavard(a: ReducedWord,
                     dictionary: Optional[tuple[ReducedWord, ...]] = None
                     ) -> tuple[Fraction, Optional[ReducedWord]]:
    """Best Bavard lower bound ``|f(a)| / (2 D)`` over a pattern dictionary.

    Uses homogeneous counting quasimorphisms with certified defect 6, so
    each pattern w contributes ``|fbar_w(a)| / 12``.  Returns the bound and
    the first pattern attaining it (None when every value vanishes).
    """
    if dictionary is None:
        dictionary = default_brooks_dictionary(a)
    best = Fraction(0)
    witness: Optional[ReducedWord] = None
    for pattern in dictionary:
        value = abs(brooks_homogeneous_exact(pattern, a))
        bound = value / (2 * HOMOGENEOUS_BROOKS_DEFECT)
        if bound > best:
            best = bound
            witness = pattern
    return best, witness


def cl_lower(a: ReducedWord,
             dictionary: Optional[tuple[ReducedWord, ...]] = None) -> int:
    """Certified lower bound for commutator length.

    A homogeneous quasimorphism f with defect D forces
    ``cl(a) >= f(a) / (2 D) + 1/2``; the bound below takes the best pattern
    in the dictionary and rounds up.  The identity gives 0 and any other
    word at least 1.
    """
    if a.is_identity():
        return 0
    vec = abelianization(a)
    if any(vec):
        raise NotInCommutatorSubgroupError(
            f"{a} has nonzero abelianization {vec}")
    if dictionary is None:
        dictionary = default_brooks_dictionary(a)
    best = 1
    for pattern in dictionary:
        value = abs(brooks_homogeneous_exact(pattern, a))
        bound = math.ceil((value / HOMOGENEOUS_BROOKS_DEFECT + 1) / 2)
        if bound > best:
            best = bound
    return best


def scl_upper_from_power(a: ReducedWord, n: int,
                         certificate: CommutatorCertificate) -> Fraction:
    """Upper bound for scl(a) from a certificate for the n-th power.

    ``scl(a^n) = n scl(a)`` and a genus-g expression bounds
    ``scl(a^n) <= g - 1/2`` when the power is nontrivial, so
    ``scl(a) <= (2 g - 1) / (2 n)``.
    """
    if n < 1:
        raise ValueError(f"power must be >= 1, got {n}")
    if certificate.word != power(a, n):
        raise CertificateError(
            f"certificate is for {certificate.word}, not for the requested "
            f"power {n} of {a}")
    if certificate.genus == 0:
        return Fraction(0)
    return Fraction(2 * certificate.genus - 1, 2 * n)


# ---------------------------------------------------------------------------
# the combined report

@dataclass(frozen=True)
class SclReport:
    """Certified bracket for the stable commutator length of one word.

    ``lower`` and ``upper`` are exact rationals, with None standing for an
    infinite or unavailable side.  Statuses: ``bounded`` (both sides
    finite), ``not_in_commutator_subgroup`` (scl is infinite), and
    ``inconclusive`` (the search budget ran out before any certificate
    appeared; the lower bound still holds).
    """

    word: ReducedWord
    status: str
    lower: Optional[Fraction]
    upper: Optional[Fraction]
    lower_witness: Optional[ReducedWord] = None
    power: Optional[int] = None
    power_genus: Optional[int] = None
    certificate: Optional[CommutatorCertificate] = None
    flags: tuple[str, ...] = ()
    dictionary_size: int = 0


#: Below this value no nonzero scl of a free-group element can fall; used
#: only to raise a flag, never to inflate a reported bound.
HOMOLOGICAL_MARGULIS_CONSTANT = Fraction(1, 12)

_DUNCAN_HOWIE_FLOOR = Fraction(1, 2)


def scl_report(a: ReducedWord, *, n_max: int = DEFAULT_N_MAX,
               max_genus: int = DEFAULT_MAX_GENUS,
               max_len: int = DEFAULT_MAX_LEN,
               pair_budget: int = DEFAULT_PAIR_BUDGET,
               dictionary: Optional[tuple[ReducedWord, ...]] = None
               ) -> SclReport:
    """Two-sided certified scl bounds for one word.

    The lower bound scans a counting-pattern dictionary through Bavard
    duality.  The upper bound searches powers ``a^n`` for commutator
    certificates, converting genus g at power n into ``(2g - 1) / (2n)``;
    the loop stops as soon as the bound 1/2 is reached, which no nontrivial
    word can beat.  Soundness tripwires raise instead of returning nonsense.
    """
    if a.is_identity():
        return SclReport(
            word=a, status="bounded", lower=Fraction(0), upper=Fraction(0),
            certificate=CommutatorCertificate(a, ()), power=1, power_genus=0)
    vec = abelianization(a)
    if any(vec):
        return SclReport(word=a, status="not_in_commutator_subgroup",
                         lower=None, upper=None)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if dictionary is None:
        dictionary = default_brooks_dictionary(a)
    lower, witness = scl_lower_bavard(a, dictionary)
    flags: list[str] = []
    if lower >= HOMOLOGICAL_MARGULIS_CONSTANT:
        flags.append("above-homological-margulis-constant")

    best_upper: Optional[Fraction] = None
    best_power: Optional[int] = None
    best_genus: Optional[int] = None
    best_cert: Optional[CommutatorCertificate] = None
    budget_hit = False
    for n in range(1, n_max + 1):
        # genus >= 1 for a nontrivial power, so power n cannot possibly
        # improve on a bound at or below 1/(2n)
        if best_upper is not None and Fraction(1, 2 * n) >= best_upper:
            continue
        try:
            cert = cl_upper(power(a, n), max_genus=max_genus,
                            max_len=max_len, pair_budget=pair_budget)
        except SearchBudgetError:
            budget_hit = True
            break
        if cert is None:
            budget_hit = True
            continue
        bound = scl_upper_from_power(a, n, cert)
        if best_upper is None or bound < best_upper:
            best_upper = bound
            best_power = n
            best_genus = cert.genus
            best_cert = cert
        if best_upper == _DUNCAN_HOWIE_FLOOR:
            # nothing in the commutator subgroup beats 1/2, stop early
            break

    if best_upper is None:
        if budget_hit:
            flags.append("budget-exhausted")
        return SclReport(
            word=a, status="inconclusive", lower=lower, upper=None,
            lower_witness=witness, flags=tuple(flags),
            dictionary_size=len(dictionary))

    if best_upper < _DUNCAN_HOWIE_FLOOR:
        raise SoundnessError(
            f"certified upper bound {best_upper} for {a} undercuts the 1/2 "
            f"floor for nontrivial commutator-subgroup elements; this is a "
            f"bug in the certificate search")
    if lower > best_upper:
        raise SoundnessError(
            f"lower bound {lower} exceeds upper bound {best_upper} for {a}; "
            f"one of the two certificates is wrong")
    return SclReport(
        word=a, status="bounded", lower=lower, upper=best_upper,
        lower_witness=witness, power=best_power, power_genus=best_genus,
        certificate=best_cert, flags=tuple(flags),
        dictionary_size=len(dictionary))


# ---------------------------------------------------------------------------
# vanishing certificates from inverse conjugacy

@dataclass(frozen=True)
class InverseConjugacyCertificate:
    """Witness that conjugation by ``conjugator`` inverts ``element``.

    The relation forces ``element^(2k) = [element^k, conjugator]`` for every
    k, so every even power is a single commutator and the stable commutator
    length of ``element`` is 0.  Construction verifies both the relation and
    the displayed power identity exactly.
    """

    element: object
    conjugator: object
    power: int
    kind: str
    matrix: object = None

    def __post_init__(self):
        if self.power < 1:
            raise CertificateError(f"power must be >= 1, got {self.power}")
        if self.kind == "free-group":
            b, c = self.element, self.conjugator
            if not isinstance(b, ReducedWord) or not isinstance(c, ReducedWord):
                raise CertificateError("free-group certificate needs ReducedWord inputs")
            if (c * b * ~c) != ~b:
                raise CertificateError(
                    f"conjugation by {c} does not invert {b}")
            n = self.power
            if power(b, 2 * n) != commutator(power(b, n), c):
                raise CertificateError("power identity failed")  # pragma: no cover
        elif self.kind == "sol-lattice":
            from .sol_geometry import sol_commutator, sol_conjugate, sol_inverse, sol_power
            A = self.matrix
            b, c = self.element, self.conjugator
            if sol_conjugate(A, b, c) != sol_inverse(A, b):
                raise CertificateError(
                    f"conjugation by {c} does not invert {b} over {A}")
            n = self.power
            if sol_power(A, b, 2 * n) != sol_commutator(A, sol_power(A, b, n), c):
                raise CertificateError("power identity failed")  # pragma: no cover
        else:
            raise CertificateError(f"unknown certificate kind {self.kind!r}")

    @property
    def conclusion(self) -> str:
        return "scl(element) = 0"


def scl_zero_by_inverse_conjugacy(b, c, n: int, *, matrix=None
                                  ) -> InverseConjugacyCertificate:
    """Certify scl(b) = 0 from a conjugator that inverts b.

    With no ``matrix`` the inputs are free-group words; with an Anosov
    ``matrix`` they are elements of the corresponding lattice in Sol.  The
    check is exact and raises CertificateError when conjugation by ``c``
    does not send ``b`` to its inverse.  In a free group that rejection is
    guaranteed for nontrivial ``b``: no element is conjugate to its inverse
    there.  The same holds in the lattices handled here, whose fibers are
    scaled by powers of the matrix eigenvalues; the constructor is still
    useful as an exact refuter and for the trivial element.
    """
    if matrix is None:
        return InverseConjugacyCertificate(b, c, n, "free-group")
    return InverseConjugacyCertificate(b, c, n, "sol-lattice", matrix)
