"""Finite-horizon evidence for limsup/liminf statements.

The scheduled checks evaluate exact distances at the times where the tau
construction forces agreement or disagreement.  The witness search reports
the sup/inf it has actually observed within a horizon; only when a pair of
rational orbits is seen to cycle does it also report limsup/liminf, which
are then exact.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from decimal import Context, Decimal, ROUND_HALF_EVEN
from fractions import Fraction
from itertools import product
from math import factorial, gcd
from typing import Callable, Optional, Sequence

from .bitseq import (
    DEFAULT_PRECISION, BitStream, EventuallyPeriodic, Word, _as_word,
    shift, truncated_distance, xor_bits,
)
from .interval import (
    EscapeError, PrecisionError, PwlMap, RationalInterval, _q,
)
from .tau import Tau, TauParams

__all__ = [
    "DynSystem", "shift_system", "map_system",
    "DistanceSeries", "distance_series",
    "ScheduleResult", "scheduled_divergence_check", "scheduled_coincidence_check",
    "scheduled_tracking_check",
    "WitnessStream", "construct_witness",
    "WitnessReport", "chaos_witness_search", "li_yorke_search",
    "PairReport", "scrambled_pair_report",
    "decimal_str",
]

SHIFT_DELTA = 1 - Fraction(1, 2**32)
SHIFT_EPSILON = Fraction(1, 2**32)
SHIFT_HORIZON = 2**14
INTERVAL_DELTA = Fraction(1, 2) - Fraction(1, 2**20)
INTERVAL_EPSILON = Fraction(1, 2**20)
INTERVAL_HORIZON = 10**5
ODD_DENOMINATOR_CAP = 2**16


def decimal_str(v: Fraction, digits: int = 30) -> str:
    """Round-to-nearest decimal rendering; for display only."""
    ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)
    return str(ctx.divide(Decimal(v.numerator), Decimal(v.denominator)))


def _frac_str(v) -> str:
    return str(Fraction(v))


# --------------------------------------------------------------------------
# Systems and distance series
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DynSystem:
    """A map together with the metric its orbits are compared in.

    ``kind`` is ``"bitstream"`` (shift on sequences) or ``"rational"``
    (exact iteration of an interval map).
    """

    kind: str
    step: Callable
    dist: Callable
    description: str
    map: object = None

    def iterate(self, state, n: int):
        if self.kind == "bitstream":
            return shift(state, n)
        for _ in range(n):
            state = self.step(state)
        return state


def shift_system() -> DynSystem:
    return DynSystem(
        "bitstream",
        lambda s: shift(s, 1),
        lambda a, b, precision=DEFAULT_PRECISION: truncated_distance(a, b, precision).value,
        "shift",
    )


def map_system(f) -> DynSystem:
    dom = f.domain

    def step(v):
        w = f(v)
        if w not in dom:
            raise EscapeError(1, w)
        return w

    return DynSystem("rational", step, lambda a, b, precision=None: abs(a - b), str(f), f)


@dataclass(frozen=True)
class DistanceSeries:
    entries: tuple
    n_iter: int
    precision: int

    @property
    def values(self) -> list:
        return [d for _, d in self.entries]

    def numerator(self, n: int) -> int:
        """``floor(d_n * 2**precision)``; exact for shift systems."""
        d = self.entries[n][1]
        return (d.numerator << self.precision) // d.denominator

    def argmax(self) -> tuple[int, Fraction]:
        best = max(self.entries, key=lambda e: (e[1], -e[0]))
        return best

    def argmin(self) -> tuple[int, Fraction]:
        return min(self.entries, key=lambda e: (e[1], e[0]))


def _chunks(total: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, -(-total // max(workers, 1)))
    return [(a, min(a + size, total)) for a in range(0, total, size)]


def _bit_chunk(x, y, precision, bounds):
    a, b = bounds
    mask = (1 << precision) - 1
    xs = xor_bits(x, y, a, b - a + precision - 1)
    num = 0
    for bit in xs[:precision - 1]:
        num = (num << 1) | bit
    out = []
    den = 1 << precision
    for k in range(b - a):
        num = ((num << 1) | xs[k + precision - 1]) & mask
        out.append((a + k, Fraction(num, den)))
    return out


class _Cycled(Sequence):
    """Orbit list that repeats ``items[start:]`` forever after it ends."""

    def __init__(self, items, start, total):
        self.items, self.start, self.total = items, start, total

    def __len__(self):
        return self.total

    def __getitem__(self, n):
        if n < len(self.items):
            return self.items[n]
        return self.items[self.start + (n - self.start) % (len(self.items) - self.start)]


def _pair_orbit(sys: DynSystem, x, y, n_iter: int):
    """Exact orbits of x and y; once the state pair repeats, the rest is a copy."""
    xs, ys = [x], [y]
    seen = {(x, y): 0}
    for n in range(1, n_iter):
        a, b = sys.step(xs[-1]), sys.step(ys[-1])
        if (a, b) in seen:
            s = seen[(a, b)]
            return _Cycled(xs, s, n_iter), _Cycled(ys, s, n_iter)
        seen[(a, b)] = n
        xs.append(a)
        ys.append(b)
    return xs, ys


def distance_series(sys: DynSystem, x, y, n_iter: int, precision: int = DEFAULT_PRECISION,
                    workers: int = 1) -> DistanceSeries:
    """Distances ``d(f^n x, f^n y)`` for ``0 <= n < n_iter``.

    For shift systems the n-th entry is the truncated distance of the two
    sequences read from index n, computed with a sliding window over the
    pointwise XOR; no stream is ever stepped.
    """
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")
    chunks = _chunks(n_iter, workers)
    if sys.kind == "bitstream":
        job = lambda c: _bit_chunk(x, y, precision, c)
    else:
        xs, ys = _pair_orbit(sys, x, y, n_iter)
        job = lambda c: [(n, sys.dist(xs[n], ys[n], precision)) for n in range(*c)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(job, chunks))
    else:
        parts = [job(c) for c in chunks]
    return DistanceSeries(tuple(e for part in parts for e in part), n_iter, precision)


# --------------------------------------------------------------------------
# Scheduled-time checks on tau
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ScheduleResult:
    check: str
    m: int
    time: int
    precision: int
    numerator: int
    passed: bool
    parts: tuple = ()
    details: dict = field(default_factory=dict)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.precision)

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "m": self.m,
            "time": self.time,
            "precision": self.precision,
            "numerator": str(self.numerator),
            "value_decimal": decimal_str(self.value),
            "pass": self.passed,
        }
        if self.details:
            out["details"] = dict(self.details)
        if self.parts:
            out["parts"] = [p.to_dict() for p in self.parts]
        return out


def _stage_ok(p: TauParams, m: int) -> None:
    if not p.k <= m <= p.max_stage:
        raise ValueError(f"stage m={m} outside [{p.k}, {p.max_stage}]")


def _same_except_gamma(p: TauParams, q: TauParams) -> None:
    if p.with_gamma(q.gamma) != q:
        raise ValueError("parameter sets must agree except for gamma")


def _dist_at(a: BitStream, b: BitStream, na: int, nb: int, precision: int):
    return truncated_distance(shift(a, na), shift(b, nb), precision)


def scheduled_divergence_check(p: TauParams, q: TauParams, s: int, m: int,
                               precision: int = DEFAULT_PRECISION) -> ScheduleResult:
    """At ``n = 2m! + s(m-1)!`` both sequences read their gamma_s run.

    Passes iff the first ``min(precision, (m-1)!)`` bits all differ.
    """
    _same_except_gamma(p, q)
    _stage_ok(p, m)
    if not 0 <= s <= m - 1:
        raise ValueError(f"symbol index s={s} outside [0, {m - 1}]")
    if p.gamma.bit(s) == q.gamma.bit(s):
        raise ValueError(f"gammas agree at index {s}")
    n = 2 * factorial(m) + s * factorial(m - 1)
    N = min(precision, factorial(m - 1))
    d = _dist_at(Tau(p), Tau(q), n, n, N)
    return ScheduleResult("divergence", m, n, N, d.numerator, d.all_differ, details={"s": s})


def scheduled_coincidence_check(p: TauParams, q: TauParams, i: int, j: int, m: int,
                                precision: int = DEFAULT_PRECISION) -> ScheduleResult:
    """Agreement/disagreement of ``shift^i tau_p`` and ``shift^j tau_q``.

    Sub-checks, all of which must pass:

    * ``equal-shift``: at n = m! both read the alpha copy, so they agree on
      ``min(precision, m!)`` bits.
    * ``pattern-tail`` (i < j): from ``t = 3m! + r(r-1)(m-2)!`` with
      r = j - i, tau_p reads ``(0^r 1^r)...`` in phase and tau_q r bits
      later in the opposite phase; the first ``min(precision, r(2(m-2)! - 1))``
      bits all differ.
    * ``zero-run`` (i < j, r <= m-2): at the first 0^(m-1) run of the tail
      the two still agree on ``min(precision, m-1-r)`` zeros.

    With ``i == j`` only the equal-shift part is run.
    """
    _same_except_gamma(p, q)
    _stage_ok(p, m)
    if not 0 <= i <= j:
        raise ValueError(f"need 0 <= i <= j, got i={i}, j={j}")
    r = j - i
    if r > m - 1:
        raise ValueError(f"j - i = {r} exceeds m - 1 = {m - 1}: no 0^r 1^r run at this stage")
    tp, tq = Tau(p), Tau(q)
    fm, f2 = factorial(m), factorial(m - 2)

    N0 = min(precision, fm)
    d0 = _dist_at(tp, tq, fm, fm, N0)
    equal = ScheduleResult("equal-shift", m, fm, N0, d0.numerator, d0.numerator == 0)
    if r == 0:
        return ScheduleResult("coincidence", m, fm, N0, d0.numerator, equal.passed, (equal,),
                              {"i": i, "j": j})

    t = 3 * fm + r * (r - 1) * f2
    L = min(precision, r * (2 * f2 - 1))
    pattern = EventuallyPeriodic(Word(), Word.repeat(0, r) + Word.repeat(1, r))
    in_phase = all(_dist_at(s, pattern, t, 0, L).numerator == 0 for s in (tp, tq))
    d1 = _dist_at(tq, tp, t, t + r, L)
    tail = ScheduleResult("pattern-tail", m, t - i, L, d1.numerator, d1.all_differ and in_phase,
                          details={"pattern_in_phase": in_phase})

    parts = [equal, tail]
    R = m - 1
    L2 = min(precision, R - r)
    if L2 >= 1:
        start = 3 * fm + R * (R - 1) * f2
        d2 = _dist_at(tq, tp, start, start + r, L2)
        parts.append(ScheduleResult("zero-run", m, start - i, L2, d2.numerator, d2.numerator == 0))
    return ScheduleResult("coincidence", m, tail.time, L, d1.numerator,
                          all(part.passed for part in parts), tuple(parts), {"i": i, "j": j})


def scheduled_tracking_check(p: TauParams, i: int, j: int, m: int,
                             precision: int = DEFAULT_PRECISION,
                             enforce_stage: bool = True) -> ScheduleResult:
    """Compare ``x_i`` with ``shift^j tau`` at ``t = 4m! + (i-1)m! + j(m-1)!/2``.

    At t the two agree on ``L = min(precision, (m-1)!/2 - j)`` bits; at
    ``t + m!/2`` the same L bits are complementary.  ``enforce_stage=False``
    drops the ``m > k + i + j + 3`` requirement (used for small oracle
    cross-checks) but keeps the structural ones.
    """
    _stage_ok(p, m)
    h = factorial(m - 1) // 2
    if i < 1 or j < 0:
        raise ValueError("need i >= 1 and j >= 0")
    if j >= h:
        raise ValueError(f"j={j} must be below (m-1)!/2 = {h}")
    if enforce_stage and not m > p.k + i + j + 3:
        raise ValueError(f"stage m={m} must exceed k+i+j+3 = {p.k + i + j + 3}")
    if i > m - 3 or j > m - 1:
        raise ValueError(f"x_{i} block or window {j} absent at stage {m}")
    fm = factorial(m)
    t = 4 * fm + (i - 1) * fm + j * h
    L = min(precision, h - j)
    tau, xi = Tau(p), p.x(i)
    near = _dist_at(xi, tau, t, t + j, precision)
    far = _dist_at(xi, tau, t + fm // 2, t + fm // 2 + j, precision)
    slack = precision - L
    near_ok = near.numerator < (1 << slack)
    far_ok = far.numerator >= ((1 << L) - 1) << slack
    parts = (
        ScheduleResult("tracking-near", m, t, precision, near.numerator, near_ok, details={"agree_bits": L}),
        ScheduleResult("tracking-far", m, t + fm // 2, precision, far.numerator, far_ok,
                       details={"differ_bits": L}),
    )
    return ScheduleResult("tracking", m, t, precision, near.numerator, near_ok and far_ok, parts,
                          {"i": i, "j": j})


# --------------------------------------------------------------------------
# Constructive witnesses on the shift
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessStream(BitStream):
    """``head`` followed by alternating copy/complement blocks of ``target``.

    Block pair t (lengths 2^t each) starts at ``len(head) + 2^(t+1) - 2``;
    bits are read from ``target`` at the same global index.
    """

    target: BitStream
    head: Word

    def __post_init__(self):
        object.__setattr__(self, "head", _as_word(self.head))

    def _bit(self, n):
        lw = len(self.head)
        if n < lw:
            return self.head[n]
        q = n - lw
        t = (q + 2).bit_length() - 2
        b = self.target.bit(n)
        return b if q - ((1 << (t + 1)) - 2) < (1 << t) else 1 - b

    def copy_start(self, t: int) -> int:
        return len(self.head) + (1 << (t + 1)) - 2

    def complement_start(self, t: int) -> int:
        return self.copy_start(t) + (1 << t)

    def describe(self):
        return f"wit:{self.head}:{self.target.describe()}"


def construct_witness(x: BitStream, w) -> WitnessStream:
    return WitnessStream(x, _as_word(w))


# --------------------------------------------------------------------------
# Reports
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PairReport:
    sup: Fraction
    sup_time: int
    inf: Fraction
    inf_time: int
    delta: Fraction
    epsilon: Fraction
    horizon: int
    precision: int

    @property
    def sup_ok(self) -> bool:
        return self.sup >= self.delta

    @property
    def inf_ok(self) -> bool:
        return self.inf <= self.epsilon

    def to_dict(self) -> dict:
        return {
            "sup": _frac_str(self.sup), "sup_time": self.sup_time,
            "inf": _frac_str(self.inf), "inf_time": self.inf_time,
            "delta": _frac_str(self.delta), "epsilon": _frac_str(self.epsilon),
            "horizon": self.horizon, "precision": self.precision,
            "sup_ok": self.sup_ok, "inf_ok": self.inf_ok,
        }


def scrambled_pair_report(sys: DynSystem, x, y, delta, epsilon, n_iter: int,
                          precision: int = DEFAULT_PRECISION, workers: int = 1) -> PairReport:
    series = distance_series(sys, x, y, n_iter, precision, workers)
    (tmax, dmax), (tmin, dmin) = series.argmax(), series.argmin()
    return PairReport(dmax, tmax, dmin, tmin, _q(delta), _q(epsilon), n_iter, precision)


@dataclass(frozen=True)
class WitnessReport:
    system: str
    x: str
    target: str
    y: Optional[str]
    sup: Optional[Fraction]
    sup_time: Optional[int]
    inf: Optional[Fraction]
    inf_time: Optional[int]
    delta: Fraction
    epsilon: Fraction
    horizon: int
    verdict: str
    candidates_tried: int = 0
    min_over_candidates: Optional[Fraction] = None
    source: str = ""
    limsup: Optional[Fraction] = None
    liminf: Optional[Fraction] = None
    cycle: Optional[tuple] = None

    @property
    def found(self) -> bool:
        return self.verdict == "witness-found"

    def to_dict(self) -> dict:
        out = asdict(self)
        out["cycle"] = None if self.cycle is None else list(self.cycle)
        for key in ("sup", "inf", "delta", "epsilon", "min_over_candidates", "limsup", "liminf"):
            if out[key] is not None:
                out[key] = _frac_str(out[key])
        return out


# --------------------------------------------------------------------------
# Witness search
# --------------------------------------------------------------------------

@dataclass
class _Scan:
    sup: Fraction
    sup_time: int
    inf: Fraction
    inf_time: int
    steps: int
    cycle: Optional[tuple] = None
    note: str = ""

    def meets(self, delta, epsilon) -> bool:
        if self.sup is None or not (self.sup >= delta and self.inf <= epsilon):
            return False
        if self.cycle is None:
            return True
        _, _, hi, lo = self.cycle
        return hi >= delta and lo <= epsilon


def _scan_pair(sys: DynSystem, x, y, horizon, delta=None, epsilon=None) -> _Scan:
    """Exact forward scan of ``|f^n x - f^n y|`` with pair-cycle detection.

    Once the pair state repeats at step n (first seen at n0), every later
    distance repeats one in ``[n0, n)``: the window extremes are final and
    the extremes over ``[n0, n)`` are the exact limsup and liminf, recorded
    as ``cycle = (n0, n, limsup, liminf)``.
    """
    seen = {}
    dists = []
    sup = inf = None
    sup_t = inf_t = 0
    cycle, note = None, ""
    n = 0
    while n < horizon:
        state = (x, y)
        if state in seen:
            n0 = seen[state]
            tail = dists[n0:n]
            cycle = (n0, n, max(tail), min(tail))
            break
        seen[state] = n
        d = abs(x - y)
        dists.append(d)
        if sup is None or d > sup:
            sup, sup_t = d, n
        if inf is None or d < inf:
            inf, inf_t = d, n
        n += 1
        if n == horizon:
            break
        try:
            x, y = sys.step(x), sys.step(y)
        except (EscapeError, PrecisionError) as exc:
            note = type(exc).__name__
            break
    return _Scan(sup, sup_t, inf, inf_t, n, cycle, note)


def _odd_grid(V: RationalInterval, count: int) -> list[Fraction]:
    out = []
    q = 1
    while len(out) < count and q <= ODD_DENOMINATOR_CAP:
        p = (V.lo * q).__floor__() + 1
        while Fraction(p, q) < V.hi and len(out) < count:
            if gcd(p, q) == 1:
                out.append(Fraction(p, q))
            p += 1
        q += 2
    return out


def _odd_random(V: RationalInterval, count: int, seed: int) -> list[Fraction]:
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count and tries < 100 * count:
        tries += 1
        q = 2 * rng.randrange(1, ODD_DENOMINATOR_CAP // 2) + 1
        lo = (V.lo * q).__floor__() + 1
        hi = (V.hi * q).__ceil__() - 1
        if lo > hi:
            continue
        out.append(Fraction(rng.randint(lo, hi), q))
    return out


def _seg_index(f: PwlMap, v) -> int:
    return f.segment_index(v)


def _cylinder(f: PwlMap, word: Sequence[int]) -> Optional[RationalInterval]:
    segs = f.segments
    lo, hi, _, _ = segs[word[-1]]
    J = RationalInterval(lo, hi)
    for sym in reversed(word[:-1]):
        a, b, s, c = segs[sym]
        if s == 0:
            if c not in J:
                return None
            J = RationalInterval(a, b)
            continue
        u, v = sorted(((J.lo - c) / s, (J.hi - c) / s))
        J = RationalInterval(a, b).intersect(RationalInterval(u, v))
        if J is None:
            return None
    return J


def _periodic_point(f: PwlMap, word: Sequence[int]) -> Optional[Fraction]:
    segs = f.segments
    A, B = Fraction(1), Fraction(0)
    for sym in word:
        _, _, s, c = segs[sym]
        A, B = s * A, s * B + c
    if A == 1:
        return None
    y = B / (1 - A)
    v = y
    for sym in word:
        a, b, s, c = segs[sym]
        if not a <= v <= b:
            return None
        v = s * v + c
    return y if v == y else None


def _pull_back(f: PwlMap, word: Sequence[int], y: Fraction) -> Optional[Fraction]:
    segs = f.segments
    for sym in reversed(word):
        a, b, s, c = segs[sym]
        if s == 0:
            return None
        y = (y - c) / s
        if not a <= y <= b:
            return None
    return y


def _segments_at(f: PwlMap, v) -> list[int]:
    """Every affine piece containing v (two at an interior breakpoint)."""
    return [k for k, (lo, hi, _, _) in enumerate(f.segments) if lo <= v <= hi]


def _advance(f: PwlMap, C: RationalInterval, sym: int) -> Optional[RationalInterval]:
    """Image under piece ``sym`` of the part of C inside that piece."""
    lo, hi, s, c = f.segments[sym]
    C = C.intersect(RationalInterval(lo, hi))
    if C is None or C.lo == C.hi:
        return None
    u, v = sorted((s * C.lo + c, s * C.hi + c))
    return RationalInterval(u, v)


def _constructed(f: PwlMap, x: Fraction, V: RationalInterval) -> list[Fraction]:
    """Eventually periodic points in V whose orbit later shadows x's orbit.

    The itinerary is ``u + e + track + r``: u keeps the point inside V, e
    is a short excursion word, track follows x's orbit for K steps (picking
    at breakpoints a piece that keeps the cylinder nondegenerate) and r is
    a short return word.  The periodic part is solved exactly as the fixed
    point of the composed affine pieces, then pulled back through the
    preperiod.
    """
    nseg = len(f.segments)
    u = None
    # anchors with denominator 7 avoid dyadic preimages of breakpoints
    anchors = [V.midpoint] + [V.lo + V.width * k / 7 for k in range(1, 7)]
    for c in anchors:
        orbit = [c]
        for depth in range(1, 49):
            word = [_seg_index(f, v) for v in orbit]
            J = _cylinder(f, word)
            if J is not None and V.lo < J.lo < J.hi < V.hi:
                u = word
                break
            orbit.append(f(orbit[-1]))
        if u is not None:
            break
    if u is None:
        return []
    xo = [x]
    for _ in range(len(u) + 3 + 48):
        xo.append(f(xo[-1]))
    excursions = [list(e) for n in range(4) for e in product(range(nseg), repeat=n)]
    returns = excursions[:1 + nseg + nseg * nseg]
    out, seen = [], set()
    for K in (24, 32, 48):
        for e in excursions:
            C = _cylinder(f, u + e) if e else J
            if C is None:
                continue
            W = u + e
            for sym in W:
                C = _advance(f, C, sym) if C is not None else None
            for t in range(len(W), len(W) + K):
                if C is None:
                    break
                for sym in _segments_at(f, xo[t]):
                    nxt = _advance(f, C, sym)
                    if nxt is not None:
                        W, C = W + [sym], nxt
                        break
                else:
                    C = None
            if C is None:
                continue
            y = _close_loop(f, u, W, V, returns)
            if y is not None and y not in seen:
                seen.add(y)
                out.append(y)
    return out


def _close_loop(f: PwlMap, u, W, V, returns) -> Optional[Fraction]:
    """First point in V with itinerary ``W[:p]`` then ``(W[p:] + r)`` repeated."""
    for r in returns:
        word = W + r
        for p in range(len(u) + 1):
            yp = _periodic_point(f, word[p:])
            if yp is None:
                continue
            y = _pull_back(f, word[:p], yp)
            if y is not None and V.open_contains(y):
                return y
    return None


def _candidates(sys: DynSystem, x, V: RationalInterval, strategy: str, seed: int) -> list[tuple[str, Fraction]]:
    tiers = {
        "grid": lambda: _odd_grid(V, 8),
        "constructed": lambda: _constructed(sys.map, x, V) if isinstance(sys.map, PwlMap) else [],
        "random": lambda: _odd_random(V, 4, seed),
    }
    names = ["grid", "constructed", "random"] if strategy == "auto" else strategy.split(",")
    out = []
    for name in names:
        if name not in tiers:
            raise ValueError(f"unknown strategy {name!r}")
        out.extend((name, y) for y in tiers[name]())
    return out


def _bitstream_search(sys, x, V, delta, epsilon, horizon, precision, workers):
    w = _as_word(V)
    y = construct_witness(x, w)
    rep = scrambled_pair_report(sys, x, y, delta, epsilon, horizon, precision, workers)
    found = rep.sup_ok and rep.inf_ok
    return WitnessReport(
        sys.description, x.describe(), f"cylinder:{w}", y.describe(),
        rep.sup, rep.sup_time, rep.inf, rep.inf_time, _q(delta), _q(epsilon), horizon,
        "witness-found" if found else "inconclusive", 1, rep.inf, "constructed",
    )


def chaos_witness_search(sys: DynSystem, x, V, delta=None, epsilon=None, horizon: int = None,
                         strategy: str = "auto", seed: int = 0,
                         precision: int = DEFAULT_PRECISION, workers: int = 1) -> WitnessReport:
    """Look for y in V with sup d(f^n x, f^n y) >= delta and inf <= epsilon.

    For the shift, V is a cylinder word and y comes from
    :func:`construct_witness`.  For interval maps V is an open rational
    interval; candidates are tried in order (odd-denominator grid,
    itinerary-constructed points, seeded random) and the first one meeting
    both thresholds is returned.  An ``inconclusive`` verdict is not a
    proof that no witness exists.
    """
    if sys.kind == "bitstream":
        delta = SHIFT_DELTA if delta is None else _q(delta)
        epsilon = SHIFT_EPSILON if epsilon is None else _q(epsilon)
        horizon = SHIFT_HORIZON if horizon is None else horizon
        _check_thresholds(delta, epsilon, horizon)
        return _bitstream_search(sys, x, V, delta, epsilon, horizon, precision, workers)

    delta = INTERVAL_DELTA if delta is None else _q(delta)
    epsilon = INTERVAL_EPSILON if epsilon is None else _q(epsilon)
    horizon = INTERVAL_HORIZON if horizon is None else horizon
    _check_thresholds(delta, epsilon, horizon)
    if not isinstance(V, RationalInterval):
        V = RationalInterval(*V)
    if V.lo >= V.hi:
        raise ValueError(f"open set ({V.lo}, {V.hi}) is empty")
    x = _q(x)
    if x not in sys.map.domain:
        raise ValueError(f"x = {x} outside the domain {sys.map.domain}")
    dom = sys.map.domain
    V = RationalInterval(max(V.lo, dom.lo), min(V.hi, dom.hi))
    if V.lo >= V.hi:
        raise ValueError("open set does not meet the domain")
    cands = _candidates(sys, x, V, strategy, seed)
    scan = lambda c: _scan_pair(sys, x, c[1], horizon)

    results: list[_Scan] = []
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(scan, cands))
    else:
        for c in cands:
            results.append(scan(c))
            if results[-1].meets(delta, epsilon):
                break
    winner = next((k for k, r in enumerate(results) if r.meets(delta, epsilon)), None)
    considered = results if winner is None else results[:winner + 1]
    gmin = min((r.inf for r in considered if r.inf is not None), default=None)
    if winner is None:
        if not considered:
            return WitnessReport(sys.description, _frac_str(x), f"open:({V.lo},{V.hi})", None,
                                 None, None, None, None, delta, epsilon, horizon, "inconclusive", 0, None)
        k = min(range(len(considered)), key=lambda k: (not considered[k].sup >= delta, considered[k].inf, k))
        verdict = "inconclusive"
    else:
        k, verdict = winner, "witness-found"
    r = results[k]
    limsup = liminf = cyc = None
    if r.cycle is not None:
        cyc = (r.cycle[0], r.cycle[1] - r.cycle[0])
        limsup, liminf = r.cycle[2], r.cycle[3]
    return WitnessReport(
        sys.description, _frac_str(x), f"open:({V.lo},{V.hi})", _frac_str(cands[k][1]),
        r.sup, r.sup_time, r.inf, r.inf_time, delta, epsilon, horizon, verdict,
        len(considered), gmin, cands[k][0], limsup, liminf, cyc,
    )


def _check_thresholds(delta, epsilon, horizon):
    if delta <= 0 or epsilon <= 0 or horizon < 1:
        raise ValueError("need delta > 0, epsilon > 0 and horizon >= 1")


def li_yorke_search(sys: DynSystem, x, radius, **kw) -> WitnessReport:
    """Witness search restricted to a neighborhood of x.

    For the shift the neighborhood is the cylinder of x's first
    ``ceil(log2(1/radius))`` bits; for interval maps it is
    ``(x - radius, x + radius)``.
    """
    radius = _q(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    if sys.kind == "bitstream":
        depth = 0
        while Fraction(1, 1 << depth) > radius:
            depth += 1
        return chaos_witness_search(sys, x, x.prefix(depth), **kw)
    x = _q(x)
    return chaos_witness_search(sys, x, RationalInterval(x - radius, x + radius), **kw)
