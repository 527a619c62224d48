"""Exact arithmetic for words in finitely generated free groups.

A word is stored as a freely reduced sequence of nonzero signed integer
codes: ``+i`` is the ``i``-th generator and ``-i`` its inverse.  For ranks
up to 26 the generators print as ``a``..``z`` and their inverses as
``A``..``Z``; larger ranks print indexed tokens ``g27``/``G27``.  All values
are immutable and every operation is a pure function, so everything here is
safe to share and to cache.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "MAX_NAMED_RANK",
    "Generator",
    "Letter",
    "ReducedWord",
    "CyclicWord",
    "WordError",
    "WordSyntaxError",
    "RankMismatchError",
    "parse_word",
    "concat",
    "invert",
    "power",
    "conjugate",
    "commutator",
    "cyclically_reduce",
    "abelianization",
    "count_disjoint_copies",
    "count_disjoint_copies_cyclic",
    "enumerate_reduced_words",
    "word_sort_key",
]

MAX_NAMED_RANK = 26


class WordError(ValueError):
    """Invalid word input."""


class WordSyntaxError(WordError):
    """Malformed word text; ``position`` is the offending character index."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


class RankMismatchError(WordError):
    """Operands belong to free groups of different ranks."""


# ---------------------------------------------------------------------------
# raw code-sequence helpers (shared with the search engine)

def _reduce(codes: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    push = out.append
    pop = out.pop
    for c in codes:
        if out and out[-1] == -c:
            pop()
        else:
            push(c)
    return tuple(out)


def _inv(codes: Sequence[int]) -> tuple[int, ...]:
    return tuple(-c for c in reversed(codes))


def _letter_key(code: int) -> int:
    # total order a < A < b < B < ... used for every lexicographic choice
    return 2 * code if code > 0 else 1 - 2 * code


def _word_key(codes: Sequence[int]) -> tuple[int, ...]:
    return tuple(_letter_key(c) for c in codes)


def _cyclic_split(codes: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a reduced word as conjugator + cyclically reduced core."""
    i, j = 0, len(codes)
    while j - i >= 2 and codes[i] == -codes[j - 1]:
        i += 1
        j -= 1
    return tuple(codes[:i]), tuple(codes[i:j])


def _code_str(codes: Sequence[int], rank: int) -> str:
    if rank <= MAX_NAMED_RANK:
        return "".join(chr(96 + c) if c > 0 else chr(64 - c) for c in codes)
    return "".join(f"g{c}" if c > 0 else f"G{-c}" for c in codes)


# ---------------------------------------------------------------------------
# domain types

@dataclass(frozen=True)
class Generator:
    """One free generator, indexed from 1."""

    index: int

    def __post_init__(self):
        if self.index < 1:
            raise WordError(f"generator index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class Letter:
    """A generator or its inverse."""

    generator: Generator
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise WordError(f"letter sign must be +1 or -1, got {self.sign}")

    @property
    def code(self) -> int:
        return self.sign * self.generator.index

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        if code == 0:
            raise WordError("letter code 0 is not a generator")
        return cls(Generator(abs(code)), 1 if code > 0 else -1)


def _coerce_codes(letters: Iterable[Union[int, Letter]], rank: int) -> tuple[int, ...]:
    codes = []
    for item in letters:
        c = item.code if isinstance(item, Letter) else int(item)
        if c == 0 or abs(c) > rank:
            raise WordError(f"letter code {c} outside rank {rank}")
        codes.append(c)
    return tuple(codes)


class ReducedWord:
    """A freely reduced word; the empty word is the group identity.

    Instances are immutable by convention and hashable.  The constructor
    freely reduces its input, so ``ReducedWord(2, [1, -1])`` is the identity.
    """

    __slots__ = ("rank", "codes")

    def __init__(self, rank: int, letters: Iterable[Union[int, Letter]] = (), *,
                 _trusted: bool = False):
        if rank < 1:
            raise WordError(f"rank must be >= 1, got {rank}")
        if _trusted:
            codes = tuple(letters)
        else:
            codes = _reduce(_coerce_codes(letters, rank))
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "codes", codes)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("ReducedWord is immutable")

    @property
    def letters(self) -> tuple[Letter, ...]:
        return tuple(Letter.from_code(c) for c in self.codes)

    def is_identity(self) -> bool:
        return not self.codes

    def __len__(self) -> int:
        return len(self.codes)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ReducedWord)
                and self.rank == other.rank and self.codes == other.codes)

    def __hash__(self) -> int:
        return hash((self.rank, self.codes))

    def __str__(self) -> str:
        return _code_str(self.codes, self.rank)

    def __repr__(self) -> str:
        return f"ReducedWord(rank={self.rank}, {str(self)!r})"

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return concat(self, other)

    def __invert__(self) -> "ReducedWord":
        return invert(self)

    def __pow__(self, n: int) -> "ReducedWord":
        return power(self, n)


class CyclicWord:
    """A cyclically reduced word up to rotation.

    The stored representative is the lexicographically least rotation under
    the letter order a < A < b < B < ...; the constructor freely and
    cyclically reduces its input first.
    """

    __slots__ = ("rank", "codes")

    def __init__(self, rank: int, letters: Iterable[Union[int, Letter]] = (), *,
                 _trusted: bool = False):
        if rank < 1:
            raise WordError(f"rank must be >= 1, got {rank}")
        if _trusted:
            codes = tuple(letters)
        else:
            _, core = _cyclic_split(_reduce(_coerce_codes(letters, rank)))
            codes = _least_rotation(core)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "codes", codes)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("CyclicWord is immutable")

    @property
    def length(self) -> int:
        return len(self.codes)

    def repeat(self, n: int) -> ReducedWord:
        """The reduced word obtained by writing the core ``n`` times."""
        if n < 0:
            raise WordError(f"repeat count must be >= 0, got {n}")
        return ReducedWord(self.rank, self.codes * n, _trusted=True)

    def __len__(self) -> int:
        return len(self.codes)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CyclicWord)
                and self.rank == other.rank and self.codes == other.codes)

    def __hash__(self) -> int:
        return hash((self.rank, self.codes, "cyclic"))

    def __str__(self) -> str:
        return _code_str(self.codes, self.rank)

    def __repr__(self) -> str:
        return f"CyclicWord(rank={self.rank}, {str(self)!r})"


def _least_rotation(codes: tuple[int, ...]) -> tuple[int, ...]:
    if len(codes) < 2:
        return codes
    rotations = (codes[i:] + codes[:i] for i in range(len(codes)))
    return min(rotations, key=_word_key)


# ---------------------------------------------------------------------------
# parsing

_WS = " \t\r\n"


def parse_word(text: str, rank: int) -> ReducedWord:
    """Parse word text into its free reduction.

    Grammar: a word is a sequence of items; an item is a letter, a
    commutator ``[w1,w2]`` (meaning ``w1 w2 w1^-1 w2^-1``), or a
    parenthesized word, optionally followed by ``^`` and a signed integer
    power.  Whitespace separates nothing and is ignored.  For ranks above 26
    the indexed letters ``g<k>``/``G<k>`` are also accepted.
    """
    if rank < 1:
        raise WordError(f"rank must be >= 1, got {rank}")
    codes, pos = _parse_sequence(text, 0, rank, stop="")
    if pos != len(text):
        raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos)
    return ReducedWord(rank, codes)


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i] in _WS:
        i += 1
    return i


def _parse_sequence(text: str, i: int, rank: int, stop: str) -> tuple[list[int], int]:
    out: list[int] = []
    while True:
        i = _skip_ws(text, i)
        if i >= len(text) or text[i] in stop:
            return out, i
        item, i = _parse_item(text, i, rank)
        while True:
            j = _skip_ws(text, i)
            if j < len(text) and text[j] == "^":
                n, i = _parse_int(text, j + 1)
                if n < 0:
                    item = list(_inv(item)) * (-n)
                else:
                    item = item * n
            else:
                break
        out.extend(item)


def _parse_item(text: str, i: int, rank: int) -> tuple[list[int], int]:
    c = text[i]
    if c == "[":
        w1, i = _parse_sequence(text, i + 1, rank, stop=",")
        if i >= len(text):
            raise WordSyntaxError("unterminated commutator, expected ','", i)
        w2, i = _parse_sequence(text, i + 1, rank, stop="]")
        if i >= len(text):
            raise WordSyntaxError("unterminated commutator, expected ']'", i)
        return w1 + w2 + list(_inv(w1)) + list(_inv(w2)), i + 1
    if c == "(":
        w, i = _parse_sequence(text, i + 1, rank, stop=")")
        if i >= len(text):
            raise WordSyntaxError("unterminated group, expected ')'", i)
        return w, i + 1
    if rank > MAX_NAMED_RANK and c in "gG" and i + 1 < len(text) and text[i + 1].isdigit():
        j = i + 1
        while j < len(text) and text[j].isdigit():
            j += 1
        index = int(text[i + 1:j])
        if not 1 <= index <= rank:
            raise WordSyntaxError(f"generator {text[i:j]!r} outside rank {rank}", i)
        return [index if c == "g" else -index], j
    if "a" <= c <= "z":
        index = ord(c) - 96
        if index > rank:
            raise WordSyntaxError(f"generator {c!r} outside rank {rank}", i)
        return [index], i + 1
    if "A" <= c <= "Z":
        index = ord(c) - 64
        if index > rank:
            raise WordSyntaxError(f"generator {c!r} outside rank {rank}", i)
        return [-index], i + 1
    raise WordSyntaxError(f"unexpected character {c!r}", i)


def _parse_int(text: str, i: int) -> tuple[int, int]:
    i = _skip_ws(text, i)
    j = i
    if j < len(text) and text[j] in "+-":
        j += 1
    k = j
    while k < len(text) and text[k].isdigit():
        k += 1
    if k == j:
        raise WordSyntaxError("expected integer exponent after '^'", i)
    return int(text[i:k]), k


# ---------------------------------------------------------------------------
# group operations

def _same_rank(u: ReducedWord, v: ReducedWord) -> int:
    if u.rank != v.rank:
        raise RankMismatchError(f"rank {u.rank} vs rank {v.rank}")
    return u.rank


def concat(u: ReducedWord, v: ReducedWord) -> ReducedWord:
    """Free reduction of ``u`` followed by ``v``."""
    rank = _same_rank(u, v)
    return ReducedWord(rank, _reduce(u.codes + v.codes), _trusted=True)


def invert(u: ReducedWord) -> ReducedWord:
    return ReducedWord(u.rank, _inv(u.codes), _trusted=True)


def power(u: ReducedWord, n: int) -> ReducedWord:
    codes = u.codes if n >= 0 else _inv(u.codes)
    return ReducedWord(u.rank, _reduce(codes * abs(n)), _trusted=True)


def conjugate(u: ReducedWord, c: ReducedWord) -> ReducedWord:
    """``c u c^-1``."""
    rank = _same_rank(u, c)
    return ReducedWord(rank, _reduce(c.codes + u.codes + _inv(c.codes)), _trusted=True)


def commutator(u: ReducedWord, v: ReducedWord) -> ReducedWord:
    """``u v u^-1 v^-1``."""
    rank = _same_rank(u, v)
    return ReducedWord(rank, _reduce(u.codes + v.codes + _inv(u.codes) + _inv(v.codes)),
                       _trusted=True)


def cyclically_reduce(u: ReducedWord) -> tuple[CyclicWord, ReducedWord]:
    """Cyclic core and conjugator, with ``u = conj * core * conj^-1`` exactly.

    The returned core is the canonical (least-rotation) representative; the
    conjugator absorbs the rotation so the displayed identity always holds.
    """
    conj, core = _cyclic_split(u.codes)
    canon = _least_rotation(core)
    if canon != core:
        # core = p q, canon = q p, so core = (conj p) canon (conj p)^-1
        for i in range(1, len(core)):
            if core[i:] + core[:i] == canon:
                conj = conj + core[:i]
                break
    return (CyclicWord(u.rank, canon, _trusted=True),
            ReducedWord(u.rank, conj, _trusted=True))


def abelianization(u: ReducedWord) -> tuple[int, ...]:
    """Image of ``u`` in Z^rank (signed letter counts per generator)."""
    vec = [0] * u.rank
    for c in u.codes:
        vec[abs(c) - 1] += 1 if c > 0 else -1
    return tuple(vec)


# ---------------------------------------------------------------------------
# subword counting

def _greedy_count(w: Sequence[int], a: Sequence[int]) -> int:
    # All occurrences have the same length, so taking the earliest possible
    # endpoint at every step is optimal (exchange argument).
    k = len(w)
    n = len(a)
    w = tuple(w)
    count = 0
    i = 0
    while i + k <= n:
        if a[i:i + k] == w:
            count += 1
            i += k
        else:
            i += 1
    return count


def count_disjoint_copies(w: ReducedWord, a: ReducedWord) -> int:
    """Maximum number of pairwise disjoint copies of ``w`` inside ``a``."""
    _same_rank(w, a)
    if len(w.codes) < 2:
        raise WordError(f"pattern must have length >= 2, got {len(w.codes)}")
    return _greedy_count(w.codes, a.codes)


def count_disjoint_copies_cyclic(w: ReducedWord, a: CyclicWord) -> Fraction:
    """Exact per-period disjoint-copy count of ``w`` in the cyclic word ``a``.

    Returns ``lim_n count(w, a^n) / n`` as a rational.  Counts over growing
    powers have eventually periodic first differences; once the power is long
    enough (``n |a| > 2 |w| + |a|``) and three consecutive difference blocks
    of some period agree, the limit is the mean difference over one block.
    """
    if w.rank != a.rank:
        raise RankMismatchError(f"rank {w.rank} vs rank {a.rank}")
    if len(w.codes) < 2:
        raise WordError(f"pattern must have length >= 2, got {len(w.codes)}")
    if not a.codes:
        raise WordError("cyclic word must be nonempty")
    wc = w.codes
    core = a.codes
    L = len(core)
    k = len(wc)
    n0 = (2 * k + L) // L + 1  # least n with n*L > 2k + L
    p_max = L + k + 2
    max_n = n0 + 4 * p_max + 4
    diffs: list[int] = []
    prev = 0
    for n in range(1, max_n + 1):
        c = _greedy_count(wc, core * n)
        diffs.append(c - prev)
        prev = c
        for p in range(1, min(p_max, len(diffs) // 3) + 1):
            if n - 3 * p < n0:
                continue
            block = diffs[-p:]
            if diffs[-3 * p:] == block * 3:
                return Fraction(sum(block), p)
    raise RuntimeError("difference sequence did not stabilize")  # pragma: no cover


# ---------------------------------------------------------------------------
# enumeration

@lru_cache(maxsize=32)
def _codes_up_to(rank: int, max_len: int) -> tuple[tuple[int, ...], ...]:
    """All reduced code tuples of length <= max_len, by length then lex order."""
    letters = [s * i for i in range(1, rank + 1) for s in (1, -1)]
    out: list[tuple[int, ...]] = [()]
    layer: list[tuple[int, ...]] = [()]
    for _ in range(max_len):
        nxt = []
        for word in layer:
            last = word[-1] if word else 0
            for c in letters:
                if c != -last:
                    nxt.append(word + (c,))
        out.extend(nxt)
        layer = nxt
    return tuple(out)


def enumerate_reduced_words(rank: int, max_len: int, min_len: int = 0) -> Iterator[ReducedWord]:
    """Yield every reduced word with min_len <= length <= max_len.

    Order is canonical: by length, then lexicographic in the letter order
    a < A < b < B < ...
    """
    if rank < 1:
        raise WordError(f"rank must be >= 1, got {rank}")
    if max_len < 0:
        raise WordError(f"max_len must be >= 0, got {max_len}")
    for codes in _codes_up_to(rank, max_len):
        if len(codes) >= min_len:
            yield ReducedWord(rank, codes, _trusted=True)


def word_sort_key(u: ReducedWord):
    """Sort key for the canonical order: length first, then letter order."""
    return (len(u.codes), _word_key(u.codes))
