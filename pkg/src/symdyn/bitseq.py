"""Points of the binary shift space as lazily indexed sequences.

A point of the shift space is never materialized: each :class:`BitStream`
is a small immutable rule answering ``bit(n)`` for any index below
``MAX_INDEX``.  Finite blocks are :class:`Word` values backed by ``bytes``
holding 0/1 symbols.

The metric ``d(x, y) = sum |x_i - y_i| / 2**(i+1)`` is only ever evaluated
as an exact dyadic truncation (:class:`DyadicDistance`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "MAX_INDEX", "DEFAULT_PRECISION",
    "IndexRangeError", "UnsupportedRuleError",
    "Word", "word_complement", "word_concat",
    "BitStream", "Constant", "EventuallyPeriodic", "Champernowne",
    "PrefixThen", "Complemented", "Shifted",
    "stream_bit", "shift", "periodic_form", "is_eventually_zero",
    "DyadicDistance", "truncated_distance",
]

MAX_INDEX = 2**63 - 1
DEFAULT_PRECISION = 64

_FLIP = bytes.maketrans(b"\x00\x01", b"\x01\x00")


class IndexRangeError(IndexError):
    """Raised when a stream index falls outside ``[0, MAX_INDEX)``."""


class UnsupportedRuleError(TypeError):
    """Raised when a question is undecidable for the given stream rule."""


# --------------------------------------------------------------------------
# Words
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Word:
    """Finite binary string; ``bits`` holds raw 0/1 byte values."""

    bits: bytes = b""

    def __post_init__(self):
        if not isinstance(self.bits, bytes):
            object.__setattr__(self, "bits", bytes(self.bits))
        if self.bits.translate(None, b"\x00\x01"):
            raise ValueError("word symbols must be 0 or 1")

    @classmethod
    def from_str(cls, text: str) -> "Word":
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a binary word: {text!r}")
        return cls(text.encode("ascii").translate(bytes.maketrans(b"01", b"\x00\x01")))

    @classmethod
    def repeat(cls, bit: int, count: int) -> "Word":
        return cls(bytes([bit]) * count)

    def __len__(self):
        return len(self.bits)

    @property
    def length(self) -> int:
        return len(self.bits)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.bits[item])
        return self.bits[item]

    def __iter__(self):
        return iter(self.bits)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.bits + other.bits)

    def __mul__(self, count: int) -> "Word":
        return Word(self.bits * count)

    def __str__(self):
        return self.bits.translate(bytes.maketrans(b"\x00\x01", b"01")).decode("ascii")

    def __repr__(self):
        return f"Word('{self}')"

    def complement(self) -> "Word":
        return Word(self.bits.translate(_FLIP))

    def to_int(self) -> int:
        """Value of the word read as a big-endian binary integer."""
        return int(str(self), 2) if self.bits else 0


def word_complement(word: Word) -> Word:
    return word.complement()


def word_concat(parts: Iterable[Word]) -> Word:
    return Word(b"".join(p.bits for p in parts))


def _as_word(w) -> Word:
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return Word.from_str(w)
    return Word(bytes(w))


# --------------------------------------------------------------------------
# Streams
# --------------------------------------------------------------------------

def _check_index(n: int) -> None:
    if n < 0 or n >= MAX_INDEX:
        raise IndexRangeError(f"stream index {n} outside [0, 2**63 - 1)")


class BitStream:
    """Base class for rule-backed infinite binary sequences.

    Subclasses implement ``_bit`` for an already range-checked index.
    """

    __slots__ = ()

    def bit(self, n: int) -> int:
        _check_index(n)
        return self._bit(n)

    def _bit(self, n: int) -> int:  # pragma: no cover - abstract
        raise NotImplementedError

    def bits(self, start: int, count: int) -> Word:
        """The word ``s[start:start+count]``."""
        if count <= 0:
            return Word()
        _check_index(start)
        _check_index(start + count - 1)
        return Word(bytes(self._bit(i) for i in range(start, start + count)))

    def prefix(self, count: int) -> Word:
        return self.bits(0, count)

    def describe(self) -> str:
        return repr(self)


@dataclass(frozen=True)
class Constant(BitStream):
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError("constant stream value must be 0 or 1")

    def _bit(self, n):
        return self.value

    def describe(self):
        return f"const{self.value}"


@dataclass(frozen=True)
class EventuallyPeriodic(BitStream):
    """``preperiod`` followed by ``period`` repeated forever."""

    preperiod: Word
    period: Word

    def __post_init__(self):
        object.__setattr__(self, "preperiod", _as_word(self.preperiod))
        object.__setattr__(self, "period", _as_word(self.period))
        if len(self.period) == 0:
            raise ValueError("period must be nonempty")

    def _bit(self, n):
        lp = len(self.preperiod)
        if n < lp:
            return self.preperiod[n]
        return self.period[(n - lp) % len(self.period)]

    def describe(self):
        return f"ep:{self.preperiod}:{self.period}"


def _champernowne_locate(n: int) -> tuple[int, int, int]:
    """Return ``(length, word_index, bit_offset)`` for Champernowne index n.

    Words of length L occupy ``L * 2**L`` positions; the cumulative count
    through length L is ``(L - 1) * 2**(L + 1) + 2``.
    """
    length = 1
    start = 0
    while True:
        block = length << length
        if n < start + block:
            off = n - start
            return length, off // length, off % length
        start += block
        length += 1


@dataclass(frozen=True)
class Champernowne(BitStream):
    """All binary words in length-lexicographic order, concatenated.

    ``0 1 00 01 10 11 000 ...``; contains every finite word, so it is a
    point with dense shift orbit.
    """

    def _bit(self, n):
        length, index, offset = _champernowne_locate(n)
        return (index >> (length - 1 - offset)) & 1

    def bits(self, start: int, count: int) -> Word:
        # whole words at a time; much faster than per-bit lookups for long reads
        if count <= 0:
            return Word()
        _check_index(start)
        _check_index(start + count - 1)
        length, index, offset = _champernowne_locate(start)
        parts, have = [], -offset
        while have < count:
            n = min((1 << length) - index, -(-(count - have) // length))
            parts.append("".join(format(v, f"0{length}b") for v in range(index, index + n)))
            have += n * length
            length, index = length + 1, 0
        return Word.from_str("".join(parts)[offset:offset + count])

    def describe(self):
        return "champ"


@dataclass(frozen=True)
class PrefixThen(BitStream):
    prefix_word: Word
    tail: BitStream

    def __post_init__(self):
        object.__setattr__(self, "prefix_word", _as_word(self.prefix_word))

    def _bit(self, n):
        lp = len(self.prefix_word)
        if n < lp:
            return self.prefix_word[n]
        return self.tail.bit(n - lp)

    def describe(self):
        return f"pre:{self.prefix_word}:{self.tail.describe()}"


@dataclass(frozen=True)
class Complemented(BitStream):
    inner: BitStream

    def _bit(self, n):
        return 1 - self.inner.bit(n)

    def describe(self):
        return f"not:{self.inner.describe()}"


@dataclass(frozen=True)
class Shifted(BitStream):
    inner: BitStream
    offset: int

    def __post_init__(self):
        if self.offset < 0:
            raise ValueError("shift offset must be nonnegative")

    def _bit(self, n):
        return self.inner.bit(n + self.offset)

    def describe(self):
        return f"shift:{self.offset}:{self.inner.describe()}"


def stream_bit(s: BitStream, n: int) -> int:
    return s.bit(n)


def shift(s: BitStream, n: int = 1) -> BitStream:
    """The shift map applied ``n`` times; nested shifts are collapsed."""
    if n < 0:
        raise ValueError("shift count must be nonnegative")
    if n == 0:
        return s
    if isinstance(s, Constant):
        return s
    if isinstance(s, Shifted):
        return Shifted(s.inner, s.offset + n)
    return Shifted(s, n)


def periodic_form(s: BitStream) -> tuple[Word, Word]:
    """Return ``(preperiod, period)`` for rules that are eventually periodic.

    Raises :class:`UnsupportedRuleError` for rules whose tail is not known
    in closed form (Champernowne, the tau construction, witnesses).
    """
    if isinstance(s, Constant):
        return Word(), Word(bytes([s.value]))
    if isinstance(s, EventuallyPeriodic):
        return s.preperiod, s.period
    if isinstance(s, PrefixThen):
        pre, per = periodic_form(s.tail)
        return s.prefix_word + pre, per
    if isinstance(s, Complemented):
        pre, per = periodic_form(s.inner)
        return pre.complement(), per.complement()
    if isinstance(s, Shifted):
        pre, per = periodic_form(s.inner)
        if s.offset <= len(pre):
            return pre[s.offset:], per
        r = (s.offset - len(pre)) % len(per)
        return Word(), per[r:] + per[:r]
    raise UnsupportedRuleError(f"{type(s).__name__} is not an eventually periodic rule")


def is_eventually_zero(s: BitStream) -> bool:
    """True iff the stream has finitely many 1s (decidable rules only)."""
    _, per = periodic_form(s)
    return not any(per)


# --------------------------------------------------------------------------
# Metric
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DyadicDistance:
    """Truncated shift-space distance ``numerator / 2**precision``.

    The exact distance lies in ``[value, value + 2**-precision]``.
    """

    numerator: int
    precision: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.precision)

    @property
    def error_bound(self) -> Fraction:
        return Fraction(1, 1 << self.precision)

    @property
    def all_differ(self) -> bool:
        return self.numerator == (1 << self.precision) - 1


def _word_xor_int(a: Word, b: Word) -> int:
    n = 0
    for u, v in zip(a.bits, b.bits):
        n = (n << 1) | (u ^ v)
    return n


def truncated_distance(x: BitStream, y: BitStream, precision: int = DEFAULT_PRECISION) -> DyadicDistance:
    if precision < 1:
        raise ValueError("precision must be positive")
    if x is y or x == y:
        return DyadicDistance(0, precision)
    return DyadicDistance(_word_xor_int(x.prefix(precision), y.prefix(precision)), precision)


def xor_bits(x: BitStream, y: BitStream, start: int, count: int) -> Sequence[int]:
    """``|x_i - y_i|`` for ``start <= i < start + count``."""
    a = x.bits(start, count).bits
    b = y.bits(start, count).bits
    return bytes(u ^ v for u, v in zip(a, b))
