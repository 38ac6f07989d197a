"""Exact interval-map dynamics over the rationals.

Piecewise-linear maps are given by their node table and evaluated by exact
linear interpolation with :class:`fractions.Fraction`.  Nothing here rounds:
the tent map iterated in binary floating point collapses onto 0 after ~53
steps, which would make every orbit look eventually fixed.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional, Sequence

from .bitseq import BitStream, Complemented, Word, shift

__all__ = [
    "DomainError", "EscapeError", "PrecisionError", "NoPointError", "MapSpecError",
    "RationalInterval", "PwlMap", "LogisticMap",
    "make_tent", "make_g", "make_h", "make_identity",
    "pwl_eval", "pwl_iterate", "pwl_compose", "pwl_image",
    "tent_step_stream", "logistic_step_interval", "lambda_membership_depth",
    "Itinerary", "itinerary", "tent_branches", "logistic_branches", "point_from_itinerary",
    "parse_rational", "parse_map",
]

DENOMINATOR_BIT_GUARD = 2**20


class DomainError(ValueError):
    pass


class EscapeError(ValueError):
    """An orbit left the domain; ``index`` is the first step outside."""

    def __init__(self, index: int, value):
        super().__init__(f"orbit escaped the domain at step {index} (value {value})")
        self.index = index
        self.value = value


class PrecisionError(ArithmeticError):
    """Exact arithmetic exceeded the size guard; ``depth`` steps were verified."""

    def __init__(self, depth: int, message: str = ""):
        super().__init__(message or f"denominator guard exceeded after depth {depth}")
        self.depth = depth


class NoPointError(ValueError):
    pass


class MapSpecError(ValueError):
    """Unparseable map description; ``position`` is the offending column."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at column {position})")
        self.position = position


def _q(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _q(self.lo))
        object.__setattr__(self, "hi", _q(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "RationalInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def open_contains(self, x) -> bool:
        return self.lo < x < self.hi

    def intersect(self, other: "RationalInterval") -> Optional["RationalInterval"]:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return RationalInterval(lo, hi) if lo <= hi else None

    def hull(self, other: "RationalInterval") -> "RationalInterval":
        return RationalInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


# --------------------------------------------------------------------------
# Piecewise-linear maps
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PwlMap:
    """Continuous piecewise-linear map through ``nodes`` (x strictly increasing).

    ``factors`` records ``(outer, inner)`` when the map was built by
    :func:`pwl_compose`; it does not take part in equality.
    """

    nodes: tuple
    name: str = ""
    factors: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        nodes = tuple((_q(x), _q(y)) for x, y in self.nodes)
        if len(nodes) < 2:
            raise ValueError("a piecewise-linear map needs at least 2 nodes")
        if any(a[0] >= b[0] for a, b in zip(nodes, nodes[1:])):
            raise ValueError("node x-coordinates must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)
        xs = tuple(x for x, _ in nodes)
        slopes, icepts = [], []
        for (x0, y0), (x1, y1) in zip(nodes, nodes[1:]):
            s = (y1 - y0) / (x1 - x0)
            slopes.append(s)
            icepts.append(y0 - s * x0)
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_slopes", tuple(slopes))
        object.__setattr__(self, "_icepts", tuple(icepts))

    def __eq__(self, other):
        return isinstance(other, PwlMap) and self.normalized().nodes == other.normalized().nodes

    def __hash__(self):
        return hash(self.normalized().nodes)

    @property
    def domain(self) -> RationalInterval:
        return RationalInterval(self._xs[0], self._xs[-1])

    @property
    def codomain(self) -> RationalInterval:
        ys = [y for _, y in self.nodes]
        return RationalInterval(min(ys), max(ys))

    @property
    def segments(self) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
        """``(lo, hi, slope, intercept)`` for each affine piece."""
        xs = self._xs
        return [(xs[i], xs[i + 1], self._slopes[i], self._icepts[i]) for i in range(len(xs) - 1)]

    def segment_index(self, x) -> int:
        """Affine piece containing x; breakpoints resolve to the lower piece."""
        xs = self._xs
        if not xs[0] <= x <= xs[-1]:
            raise DomainError(f"{x} outside domain [{xs[0]}, {xs[-1]}]")
        return max(0, bisect.bisect_left(xs, x) - 1)

    def __call__(self, x) -> Fraction:
        i = self.segment_index(x)
        return self._slopes[i] * x + self._icepts[i]

    def normalized(self) -> "PwlMap":
        """Drop nodes interior to a straight run."""
        keep = [self.nodes[0]]
        for i in range(1, len(self.nodes) - 1):
            if self._slopes[i - 1] != self._slopes[i]:
                keep.append(self.nodes[i])
        keep.append(self.nodes[-1])
        if len(keep) == len(self.nodes):
            return self
        return PwlMap(tuple(keep), self.name)

    def __str__(self):
        return self.name or "pwl: " + " ".join(f"({x},{y})" for x, y in self.nodes)


def make_tent() -> PwlMap:
    return PwlMap(((0, 0), (Fraction(1, 2), 1), (1, 0)), "tent")


def make_g() -> PwlMap:
    return PwlMap(((-1, 0), (Fraction(-1, 2), 1), (0, 0), (1, -1)), "g")


def make_h() -> PwlMap:
    return PwlMap(((Fraction(-1, 2), Fraction(1, 2)), (0, 0), (Fraction(1, 2), 1), (1, 0)), "h")


def make_identity(lo=0, hi=1) -> PwlMap:
    return PwlMap(((lo, lo), (hi, hi)), "identity")


def pwl_eval(m: PwlMap, x) -> Fraction:
    return m(_q(x))


def pwl_iterate(m, x, n: int) -> list[Fraction]:
    """Exact orbit ``[x, m(x), ..., m^n(x)]``; works for any map with a ``domain``."""
    x = _q(x)
    dom = m.domain
    if x not in dom:
        raise DomainError(f"{x} outside domain {dom}")
    orbit = [x]
    for t in range(1, n + 1):
        x = m(x)
        if x not in dom:
            raise EscapeError(t, x)
        orbit.append(x)
    return orbit


def pwl_compose(a: PwlMap, b: PwlMap) -> PwlMap:
    """``a o b``: nodes of b plus the preimages under b of a's interior nodes."""
    if not a.domain.contains_interval(b.codomain):
        raise DomainError(f"range {b.codomain} of inner map not inside domain {a.domain}")
    a_breaks = [x for x, _ in a.nodes[1:-1]]
    xs = set(x for x, _ in b.nodes)
    for lo, hi, s, c in b.segments:
        if s == 0:
            continue
        for t in a_breaks:
            x = (t - c) / s
            if lo < x < hi:
                xs.add(x)
    nodes = tuple((x, a(b(x))) for x in sorted(xs))
    name = f"{a.name}∘{b.name}" if a.name and b.name else ""
    return PwlMap(nodes, name, factors=(a, b))


def pwl_image(m: PwlMap, J: RationalInterval) -> RationalInterval:
    """Exact image of J: extremes over the endpoints and the interior nodes."""
    if not m.domain.contains_interval(J):
        raise DomainError(f"{J} not inside domain {m.domain}")
    values = [m(J.lo), m(J.hi)]
    values += [y for x, y in m.nodes if J.lo < x < J.hi]
    return RationalInterval(min(values), max(values))


def tent_step_stream(s: BitStream) -> BitStream:
    """Tent map acting on the binary expansion ``x = sum s_i 2**-(i+1)``.

    A leading 0 means doubling (shift); a leading 1 means ``2 - 2x``, which
    is shift followed by complement.
    """
    rest = shift(s, 1)
    if s.bit(0) == 0:
        return rest
    if isinstance(rest, Complemented):
        return rest.inner
    return Complemented(rest)


# --------------------------------------------------------------------------
# Logistic family
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LogisticMap:
    """``F(x) = mu x (1 - x)`` on [0, 1] with exact rational evaluation."""

    mu: Fraction
    bit_guard: int = DENOMINATOR_BIT_GUARD

    def __post_init__(self):
        object.__setattr__(self, "mu", _q(self.mu))
        if self.mu <= 0:
            raise ValueError("mu must be positive")

    @property
    def domain(self) -> RationalInterval:
        return RationalInterval(0, 1)

    def __call__(self, x) -> Fraction:
        if x.denominator.bit_length() > self.bit_guard // 2:
            raise PrecisionError(0, f"denominator of {float(x)} too large for another step")
        return self.mu * x * (1 - x)

    def __str__(self):
        return f"logistic:{self.mu}"


def logistic_step_interval(mu, J: RationalInterval) -> RationalInterval:
    mu = _q(mu)
    if mu <= 0:
        raise ValueError("mu must be positive")
    f = lambda v: mu * v * (1 - v)
    values = [f(J.lo), f(J.hi)]
    half = Fraction(1, 2)
    if half in J:
        values.append(f(half))
    return RationalInterval(min(values), max(values))


def lambda_membership_depth(mu, x, n: int, bit_guard: int = DENOMINATOR_BIT_GUARD) -> bool:
    """True iff the first n iterates of x (and x itself) stay in [0, 1].

    Raises :class:`PrecisionError` carrying the last verified depth if the
    denominators outgrow ``bit_guard`` bits before the answer is known.
    """
    mu, x = _q(mu), _q(x)
    if mu < 4:
        raise ValueError("membership in the invariant Cantor set needs mu >= 4")
    for depth in range(n + 1):
        if not 0 <= x <= 1:
            return False
        if depth == n:
            return True
        if x.denominator.bit_length() * 2 > bit_guard:
            raise PrecisionError(depth)
        x = mu * x * (1 - x)
    return True  # pragma: no cover


# --------------------------------------------------------------------------
# Symbolic coding
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Itinerary:
    symbols: tuple
    partition: tuple
    boundary_flags: tuple = ()

    @property
    def word(self) -> Word:
        return Word(bytes(self.symbols))

    def __len__(self):
        return len(self.symbols)

    def __str__(self):
        return "".join(map(str, self.symbols))


def _cell(partition: Sequence[RationalInterval], v) -> tuple[int, bool]:
    hits = [i for i, J in enumerate(partition) if v in J]
    if not hits:
        raise EscapeError(-1, v)
    return hits[0], len(hits) > 1


def itinerary(m, x, n: int, partition: Sequence[RationalInterval]) -> Itinerary:
    """Cells visited by ``x, m(x), ..., m^(n-1)(x)``.

    A point on a shared boundary is coded by the lower cell and its step is
    recorded in ``boundary_flags``.
    """
    orbit = pwl_iterate(m, x, max(n - 1, 0))[:n]
    symbols, flags = [], []
    for t, v in enumerate(orbit):
        c, on_boundary = _cell(partition, v)
        symbols.append(c)
        if on_boundary:
            flags.append(t)
    return Itinerary(tuple(symbols), tuple(partition), tuple(flags))


# Inverse branches take an interval of values and return the interval of
# preimages inside the branch's cell (or None).
Branch = Callable[[RationalInterval], Optional[RationalInterval]]


def tent_branches() -> tuple[Branch, Branch]:
    unit = RationalInterval(0, 1)

    def left(J):
        J = J.intersect(unit)
        return None if J is None else RationalInterval(J.lo / 2, J.hi / 2)

    def right(J):
        J = J.intersect(unit)
        return None if J is None else RationalInterval(1 - J.hi / 2, 1 - J.lo / 2)

    return left, right


def _sqrt_bounds(r: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Dyadic ``lo <= sqrt(r) <= hi`` with ``hi - lo <= 2**-bits``."""
    if r < 0:
        raise ValueError("square root of a negative rational")
    # floor(sqrt(r) 2^bits) = isqrt(p q 4^bits) // q
    a = isqrt(r.numerator * r.denominator << (2 * bits)) // r.denominator
    return Fraction(a, 1 << bits), Fraction(a + 1, 1 << bits)


def logistic_branches(mu, tol: Fraction = Fraction(1, 2**64)) -> tuple[Branch, Branch]:
    """Inverse branches of ``F_mu`` (mu > 4) with outward-rounded square roots."""
    mu = _q(mu)
    if mu <= 4:
        raise ValueError("logistic inverse branches are used for mu > 4")
    bits = max(1, (1 / _q(tol)).__ceil__().bit_length())
    quarter, half = Fraction(1, 4), Fraction(1, 2)
    unit = RationalInterval(0, 1)

    def root_bounds(y):
        return _sqrt_bounds(quarter - y / mu, bits)

    def left(J):
        J = J.intersect(unit)
        if J is None:
            return None
        lo = half - root_bounds(J.lo)[1]
        hi = half - root_bounds(J.hi)[0]
        return RationalInterval(max(lo, Fraction(0)), min(hi, half))

    def right(J):
        J = J.intersect(unit)
        if J is None:
            return None
        lo = half + root_bounds(J.hi)[0]
        hi = half + root_bounds(J.lo)[1]
        return RationalInterval(max(lo, half), min(hi, Fraction(1)))

    return left, right


def point_from_itinerary(branches: Sequence[Branch], w, tol=Fraction(0),
                         start: RationalInterval = RationalInterval(0, 1)) -> RationalInterval:
    """Enclosure of the points whose first ``len(w)`` symbols are ``w``.

    Refines backwards from ``start``: ``J <- branch[w_t](J)`` for t from the
    last symbol down to the first.
    """
    symbols = list(w)
    J = start
    for sym in reversed(symbols):
        J = branches[sym](J)
        if J is None:
            raise NoPointError(f"no point has itinerary {''.join(map(str, symbols))}")
    return J


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

_RATIONAL = re.compile(r"^\s*(-?\d+)(?:/(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL.match(text)
    if not m:
        raise MapSpecError(f"not a rational p/q: {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise MapSpecError(f"zero denominator in {text!r}", text.index("/") + 1)
    return Fraction(num, den)


_NODE = re.compile(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)")


def parse_map(text: str):
    """Parse ``tent | g | h | logistic:mu | pwl: (x0,y0) (x1,y1) ...``."""
    spec = text.strip()
    builtins = {"tent": make_tent, "g": make_g, "h": make_h}
    if spec in builtins:
        return builtins[spec]()
    if spec.startswith("logistic:"):
        return LogisticMap(parse_rational(spec[len("logistic:"):]))
    if spec.startswith("pwl:"):
        body_start = text.index("pwl:") + 4
        body = text[body_start:]
        nodes, pos = [], 0
        for mt in _NODE.finditer(body):
            gap = body[pos:mt.start()]
            if gap.strip():
                raise MapSpecError(f"unexpected text {gap.strip()!r}", body_start + pos)
            try:
                nodes.append((parse_rational(mt.group(1)), parse_rational(mt.group(2))))
            except MapSpecError:
                raise MapSpecError(f"bad node {mt.group(0)!r}", body_start + mt.start()) from None
            pos = mt.end()
        if body[pos:].strip():
            raise MapSpecError(f"unexpected text {body[pos:].strip()!r}", body_start + pos)
        try:
            return PwlMap(tuple(nodes))
        except ValueError as exc:
            raise MapSpecError(str(exc), body_start) from None
    raise MapSpecError(f"unknown map {spec!r}; expected tent, g, h, logistic:mu or pwl: ...", 0)
