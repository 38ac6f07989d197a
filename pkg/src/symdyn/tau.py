"""The scrambled-set generator tau_gamma and its building blocks.

Layout of ``tau`` for parameters ``k, b, gamma, alpha, x_1, x_2, ...``::

    [0, k!)                  prefix word b
    stage m >= k occupies [m!, (m+1)!), length m * m!:
      [m!, 2m!)              alpha_0 ... alpha_{m!-1}
      [2m!, 3m!)             gamma_s repeated (m-1)! times, s = 0..m-1
      [3m!, 4m!)             (0^r 1^r) repeated (m-2)! times, r = 1..m-1
      [4m! + (i-1)m!, ...)   Bhat(x_i, 4m! + (i-1)m!, m-1), i = 1..m-3

Each Bhat block reads its source sequence at the same global indices it is
placed at (up to the one-index overlaps inside B), which is what makes the
tracking times line up.

:func:`tau_bit` resolves a position arithmetically; :func:`tau_prefix`
concatenates the blocks literally and serves as its test oracle.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from math import factorial
from typing import Optional

from .bitseq import (
    BitStream, Champernowne, Constant, IndexRangeError, Shifted, Word,
    _as_word, word_concat,
)

__all__ = [
    "DEFAULT_K", "DEFAULT_MAX_STAGE", "PREFIX_GUARD",
    "block_C", "block_B", "block_Bhat", "block_A",
    "TauParams", "Tau", "SegmentRef", "TauLayout",
    "tau_bit", "tau_segment", "segment_bit", "tau_prefix",
]

DEFAULT_K = 5
DEFAULT_MAX_STAGE = 19
PREFIX_GUARD = 10**7


# --------------------------------------------------------------------------
# Blocks
# --------------------------------------------------------------------------

def block_C(g: BitStream, i: int, j: int) -> Word:
    """``g_i g_{i+1} ... g_j`` (inclusive)."""
    if i > j:
        raise ValueError(f"block_C needs i <= j, got i={i}, j={j}")
    return g.bits(i, j - i + 1)


def block_B(g: BitStream, i: int, j: int) -> Word:
    """j+1 windows of length j!/2 on g; window r starts at source i + r(j!/2 - 1).

    Consecutive windows share one source index, so the last index read is
    ``i + (j+1) j!/2 - j - 1`` and the result has length ``(j+1)!/2``.
    """
    if j < 2:
        raise ValueError(f"block_B needs j >= 2, got {j}")
    h = factorial(j) // 2
    return word_concat(block_C(g, i + r * (h - 1), i + r * (h - 1) + h - 1) for r in range(j + 1))


def block_Bhat(g: BitStream, i: int, j: int) -> Word:
    """``B(g, i, j)`` followed by the complement of ``B(g, i + (j+1)!/2, j)``."""
    half = factorial(j + 1) // 2
    return block_B(g, i, j) + block_B(g, i + half, j).complement()


def block_A(g: BitStream, m: int, alpha: BitStream) -> Word:
    if m < 5:
        raise ValueError(f"block_A needs m >= 5, got {m}")
    fm, f1, f2 = factorial(m), factorial(m - 1), factorial(m - 2)
    parts = [alpha.prefix(fm)]
    parts += [Word.repeat(g.bit(s), f1) for s in range(m)]
    parts += [(Word.repeat(0, r) + Word.repeat(1, r)) * f2 for r in range(1, m)]
    return word_concat(parts)


# --------------------------------------------------------------------------
# Parameters and layout
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TauParams:
    """Parameters of the construction.

    ``family`` lists explicit rules for x_1, x_2, ...; indices past the end
    of the list fall back to Champernowne shifted by i.
    """

    gamma: BitStream
    k: int = DEFAULT_K
    b: Optional[Word] = None
    family: tuple = ()
    alpha: BitStream = field(default_factory=Champernowne)
    max_stage: int = DEFAULT_MAX_STAGE

    def __post_init__(self):
        if self.k < 5:
            raise ValueError(f"k must be >= 5, got {self.k}")
        if not self.k <= self.max_stage <= DEFAULT_MAX_STAGE:
            raise ValueError(f"max_stage must lie in [k, {DEFAULT_MAX_STAGE}]")
        fk = factorial(self.k)
        b = Word.repeat(0, fk) if self.b is None else _as_word(self.b)
        if len(b) != fk:
            raise ValueError(f"prefix b must have length k! = {fk}, got {len(b)}")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "family", tuple(self.family))

    def x(self, i: int) -> BitStream:
        if i < 1:
            raise ValueError("family index starts at 1")
        if i <= len(self.family):
            return self.family[i - 1]
        return Shifted(Champernowne(), i)

    def with_gamma(self, gamma: BitStream) -> "TauParams":
        return TauParams(gamma, self.k, self.b, self.family, self.alpha, self.max_stage)

    @property
    def layout(self) -> "TauLayout":
        return TauLayout(self.k, self.max_stage)

    @property
    def stream(self) -> "Tau":
        return Tau(self)


@dataclass(frozen=True)
class TauLayout:
    k: int
    max_stage: int

    @property
    def factorials(self) -> tuple:
        return tuple(factorial(m) for m in range(self.max_stage + 2))

    @property
    def length(self) -> int:
        """Number of addressable positions, ``(max_stage + 1)!``."""
        return factorial(self.max_stage + 1)

    def stage_of(self, n: int) -> Optional[int]:
        """Stage containing position n, or None inside the prefix."""
        fact = _FACTORIALS
        if n < fact[self.k]:
            return None
        m = bisect.bisect_right(fact, n) - 1
        if m > self.max_stage:
            raise IndexRangeError(f"position {n} beyond stage {self.max_stage}")
        return m

    def stage_length(self, m: int) -> int:
        fm = factorial(m)
        return 3 * fm + (m - 3) * fm

    def cumulative_length(self, m: int) -> int:
        """Length of ``b`` plus stages k..m, summed term by term."""
        return factorial(self.k) + sum(self.stage_length(s) for s in range(self.k, m + 1))


_FACTORIALS = tuple(factorial(m) for m in range(DEFAULT_MAX_STAGE + 2))


# --------------------------------------------------------------------------
# Indexer
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SegmentRef:
    """Where a position of tau comes from.

    ``kind`` is one of ``Prefix``, ``AlphaCopy``, ``GammaRepeat``,
    ``PatternTail``, ``BhatFirstHalf``, ``BhatSecondHalf``.  ``source`` is
    the index read from the underlying sequence (b, alpha, gamma or x_i);
    for ``PatternTail`` it is the offset within the 0^r 1^r pattern.
    """

    kind: str
    source: int
    stage: Optional[int] = None
    s: Optional[int] = None
    r: Optional[int] = None
    i: Optional[int] = None

    def __str__(self):
        fields = [("m", self.stage), ("s", self.s), ("r", self.r), ("i", self.i), ("source", self.source)]
        inner = ", ".join(f"{k}={v}" for k, v in fields if v is not None)
        return f"{self.kind}({inner})"


def _pattern_run(q: int, f2: int) -> tuple[int, int]:
    """Locate tail offset q: return ``(r, within)`` with segment r starting at r(r-1)f2."""
    # largest r with r(r-1) f2 <= q
    r = 1
    while (r + 1) * r * f2 <= q:
        r += 1
    return r, q - r * (r - 1) * f2


def tau_segment(p: TauParams, n: int) -> SegmentRef:
    if n < 0:
        raise IndexRangeError(f"negative position {n}")
    m = p.layout.stage_of(n)
    if m is None:
        return SegmentRef("Prefix", n)
    fm, f1, f2 = _FACTORIALS[m], _FACTORIALS[m - 1], _FACTORIALS[m - 2]
    o = n - fm
    if o < fm:
        return SegmentRef("AlphaCopy", o, stage=m)
    if o < 2 * fm:
        s = (o - fm) // f1
        return SegmentRef("GammaRepeat", s, stage=m, s=s)
    if o < 3 * fm:
        r, within = _pattern_run(o - 2 * fm, f2)
        return SegmentRef("PatternTail", within % (2 * r), stage=m, r=r)
    q = o - 3 * fm
    i = q // fm + 1
    w = q % fm
    start = 4 * fm + (i - 1) * fm       # global position == source start
    h = f1 // 2                          # window length j!/2 with j = m-1
    half = fm // 2
    if w < half:
        kind, base = "BhatFirstHalf", start
    else:
        kind, base, w = "BhatSecondHalf", start + half, w - half
    src = base + (w // h) * (h - 1) + w % h
    return SegmentRef(kind, src, stage=m, i=i)


def segment_bit(p: TauParams, seg: SegmentRef) -> int:
    """Evaluate a :class:`SegmentRef` against the parameters."""
    kind = seg.kind
    if kind == "Prefix":
        return p.b[seg.source]
    if kind == "AlphaCopy":
        return p.alpha.bit(seg.source)
    if kind == "GammaRepeat":
        return p.gamma.bit(seg.source)
    if kind == "PatternTail":
        return 0 if seg.source < seg.r else 1
    if kind == "BhatFirstHalf":
        return p.x(seg.i).bit(seg.source)
    if kind == "BhatSecondHalf":
        return 1 - p.x(seg.i).bit(seg.source)
    raise ValueError(f"unknown segment kind {kind!r}")


def tau_bit(p: TauParams, n: int) -> int:
    return segment_bit(p, tau_segment(p, n))


@dataclass(frozen=True)
class Tau(BitStream):
    """``tau_gamma`` as a random-access stream."""

    params: TauParams

    def _bit(self, n):
        return tau_bit(self.params, n)

    def describe(self):
        return f"tau(k={self.params.k}, gamma={self.params.gamma.describe()})"


# --------------------------------------------------------------------------
# Materialization oracle
# --------------------------------------------------------------------------

def tau_prefix(p: TauParams, length: int) -> Word:
    """First ``length`` bits of tau, built by concatenating blocks in order."""
    if length < 0 or length > PREFIX_GUARD:
        raise IndexRangeError(f"prefix length {length} outside [0, {PREFIX_GUARD}]")
    parts = [p.b]
    total = len(p.b)
    m = p.k
    while total < length:
        if m > p.max_stage:
            raise IndexRangeError(f"prefix length {length} beyond stage {p.max_stage}")
        fm = factorial(m)
        parts.append(block_A(p.gamma, m, p.alpha))
        total += 3 * fm
        for i in range(1, m - 2):
            if total >= length:
                break
            parts.append(block_Bhat(p.x(i), 4 * fm + (i - 1) * fm, m - 1))
            total += fm
        m += 1
    return word_concat(parts)[:length]


def default_params(gamma: BitStream = Constant(0), **kw) -> TauParams:
    return TauParams(gamma, **kw)
