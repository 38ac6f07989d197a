"""Acceptance criteria 1-12, each with its stated tolerance and time limit.

A per-criterion PASS/FAIL line is printed in the terminal summary by
``conftest.py``.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction as F
from math import factorial

import pytest

from symdyn.bitseq import (
    Champernowne, Constant, EventuallyPeriodic, Word, is_eventually_zero,
    periodic_form, shift, truncated_distance,
)
from symdyn.interval import (
    LogisticMap, RationalInterval, itinerary, lambda_membership_depth,
    logistic_branches, logistic_step_interval, make_g, make_h, make_tent,
    point_from_itinerary, pwl_compose, pwl_image,
)
from symdyn.tau import TauLayout, TauParams, block_A, block_B, block_Bhat, tau_bit, tau_prefix
from symdyn.turbulence import TurbulenceCertificate, theorem6_pipeline, turbulence_check
from symdyn.witness import (
    chaos_witness_search, distance_series, map_system, scheduled_coincidence_check,
    scheduled_divergence_check, scheduled_tracking_check, shift_system,
)
from symdyn.tau import Tau

import oracles

TOP64 = 2**64 - 1
ONE, ZERO = TauParams(Constant(1)), TauParams(Constant(0))
I = RationalInterval


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f}s, limit {self.limit}s"


def test_criterion_01_layout_identities():
    with Timer(1.0):
        c = Champernowne()
        for m in range(5, 11):
            assert len(block_A(Constant(1), m, c)) == 3 * factorial(m)
        for j in range(2, 8):
            assert len(block_B(c, 0, j)) == factorial(j + 1) // 2
            assert len(block_Bhat(c, 0, j)) == factorial(j + 1)
        lay = TauLayout(5, 19)
        for m in range(5, 10):
            assert lay.cumulative_length(m) == factorial(m + 1)


def test_criterion_02_indexer_oracle():
    sets = [
        TauParams(Constant(1)),
        TauParams(EventuallyPeriodic(Word.from_str("01"), Word.from_str("110")),
                  b=Word.from_str("01" * 60), family=(Constant(1),)),
    ]
    with Timer(5.0):
        for p in sets:
            ref = tau_prefix(p, 40320)
            assert all(tau_bit(p, n) == ref[n] for n in range(factorial(8)))


def test_criterion_03_divergence():
    with Timer(1.0):
        for m in (6, 7, 8):
            r = scheduled_divergence_check(ONE, ZERO, 0, m, 64)
            assert r.time == 2 * factorial(m)
            assert r.precision == 64 and r.numerator == TOP64 and r.passed


def test_criterion_04_coincidence():
    with Timer(1.0):
        for m in (6, 7, 8):
            r = scheduled_coincidence_check(ONE, ZERO, 0, 0, m, 64)
            assert r.time == factorial(m) and r.precision == 64 and r.numerator == 0
        for m in (6, 7):
            i, j = 0, 1
            L = min(64, (j - i) * (2 * factorial(m - 2) - 1))
            r = scheduled_coincidence_check(ONE, ZERO, i, j, m, 64)
            tail = next(p for p in r.parts if p.check == "pattern-tail")
            assert tail.time == 3 * factorial(m)
            assert tail.precision == L and tail.numerator == 2**L - 1 and tail.passed
            assert r.passed


def test_criterion_05_tracking():
    with Timer(5.0):
        for m in (10, 11):
            r = scheduled_tracking_check(ONE, 1, 0, m, 64)
            near, far = r.parts
            assert near.time == 4 * factorial(m)
            assert near.numerator == 0
            assert far.time == near.time + factorial(m) // 2
            assert F(far.numerator, 2**64) == 1 - F(1, 2**64)
        r = scheduled_tracking_check(ONE, 1, 0, 5, precision=12, enforce_stage=False)
        ref = str(tau_prefix(ONE, factorial(6)))
        x1 = str(ONE.x(1).prefix(factorial(6) + 64))
        near, far = r.parts
        assert near.numerator == oracles.dyadic_numerator(x1[480:], ref[480:], 12) == 0
        assert far.numerator == oracles.dyadic_numerator(x1[540:], ref[540:], 12) == 2**12 - 1


def test_criterion_06_g_negative_bound():
    g = make_g()
    sys_ = map_system(g)
    rng = random.Random(6)
    cands = [F(2 * k + 1, 65) for k in range(32)]                  # odd-denominator grid in (0, 1)
    for _ in range(4):
        q = 2 * rng.randrange(2**10, 2**15) + 1
        cands.append(F(rng.randrange(1, q), q))
    cands += [F(0), F(1), F(1, 2)]
    with Timer(10.0):
        assert len(cands) >= 32 and all(0 <= y <= 1 for y in cands)
        overall = min(
            min(distance_series(sys_, F(-2, 3), y, 10**4 + 1).values)
            for y in cands
        )
        assert overall >= F(2, 3)
        rep = chaos_witness_search(sys_, F(-2, 3), I(F(1, 4), F(3, 4)), epsilon=F(1, 2), horizon=10**4)
        assert rep.verdict == "inconclusive" and rep.min_over_candidates >= F(2, 3)


def test_criterion_07_h_structure():
    h = make_h()
    assert pwl_image(h, I(F(-1, 2), 0)) == I(0, F(1, 2))
    assert pwl_image(h, I(0, 1)) == I(0, 1)
    rep = chaos_witness_search(map_system(h), F(1, 3), I(F(-1, 2), F(-1, 4)), horizon=10**5)
    assert rep.found
    assert rep.sup >= F(1, 2) - F(1, 2**20) and rep.inf <= F(1, 2**20)
    assert F(-1, 2) < F(rep.y) < F(-1, 4)
    (hi, _), (lo, _) = oracles.sup_inf(oracles.h, F(1, 3), F(rep.y), rep.horizon)
    assert (hi, lo) == (rep.sup, rep.inf)


def test_criterion_08_tent_witness():
    rep = chaos_witness_search(map_system(make_tent()), F(0), I(F(3, 10), F(2, 5)), horizon=10**5)
    assert rep.found
    assert rep.sup >= F(1, 2) - F(1, 2**20) and rep.inf <= F(1, 2**20)
    (hi, _), (lo, _) = oracles.sup_inf(oracles.tent, F(0), F(rep.y), rep.horizon)
    assert (hi, lo) == (rep.sup, rep.inf)


def test_criterion_09_turbulence_instances():
    for f in (make_tent(), make_h()):
        with Timer(1.0):
            ff = pwl_compose(f, f)
            cert = turbulence_check(ff)
            assert isinstance(cert, TurbulenceCertificate) and cert.verify(ff)
            hull = cert.I0.hull(cert.I1)
            assert pwl_image(ff, cert.I0).contains_interval(hull)
            assert pwl_image(ff, cert.I1).contains_interval(hull)
        with Timer(1.0):
            rep = theorem6_pipeline(f)
            assert rep.witness.found and rep.implication == "holds"


def test_criterion_10_logistic_desk_checks():
    assert lambda_membership_depth(5, F(1, 2), 1) is False
    halves = [I(0, F(1, 2)), I(F(1, 2), 1)]
    tol = F(1, 2**80)
    br = logistic_branches(5, tol)
    for w in ([0] * 10, [0, 1] * 5):
        J = point_from_itinerary(br, w, tol)
        assert J.lo <= J.hi
        # interval forward iteration must keep meeting [0, 1]
        K = J
        for _ in range(10):
            assert K.intersect(I(0, 1)) is not None
            K = logistic_step_interval(5, K)
        x = J.midpoint
        assert lambda_membership_depth(5, x, 10) is True
        assert list(itinerary(LogisticMap(5), x, 10, halves).symbols) == w


def test_criterion_11_w_model():
    rng = random.Random(11)
    zero = Constant(0)
    for _ in range(100):
        pre = "".join(rng.choice("01") for _ in range(rng.randrange(0, 40)))
        s = EventuallyPeriodic(Word.from_str(pre), Word.from_str("0" * rng.randrange(1, 4)))
        assert is_eventually_zero(s)
        tail = shift(s, len(pre))
        assert tail.prefix(256) == zero.prefix(256)
        assert not any(periodic_form(tail)[1])
        assert truncated_distance(tail, zero, 64).numerator == 0
        series = distance_series(shift_system(), s, zero, len(pre) + 8, 64)
        assert all(series.numerator(n) == 0 for n in range(len(pre), len(pre) + 8))


CLI_RUNS = [
    ["tau", "bit", "--k", "5", "--gamma", "const1", "--n", "360"],
    ["tau", "dump", "--len", "720", "--gamma", "ep:1:0"],
    ["schedule", "coincidence", "--m", "6", "--i", "0", "--j", "1"],
    ["pairscan", "--map", "tent", "--x", "2/7", "--y", "4/7", "--n", "30"],
    ["pairscan", "--x", "champ", "--y", "shift:3:champ", "--n", "200", "--workers", "4"],
    ["witness", "--map", "h", "--x", "1/3", "--V", "-1/2,-1/4", "--seed", "5"],
    ["turbulence", "--map", "h", "--square"],
    ["pipeline", "--map", "tent", "--seed", "2"],
]


def test_criterion_12_reproducibility(tmp_path):
    for k, argv in enumerate(CLI_RUNS):
        outs = []
        for rep in range(2):
            path = tmp_path / f"run{k}_{rep}.out"
            proc = subprocess.run([sys.executable, "-m", "symdyn.cli", *argv, "--output", str(path)],
                                  capture_output=True, text=True)
            assert proc.returncode == 0, (argv, proc.stderr)
            outs.append(path.read_bytes())
        assert outs[0] == outs[1] and outs[0], argv
    x, y = Tau(ONE), Tau(ZERO)
    seq = distance_series(shift_system(), x, y, 6000)
    assert seq == distance_series(shift_system(), x, y, 6000, workers=4)
    T = map_system(make_tent())
    V = I(F(3, 10), F(2, 5))
    assert chaos_witness_search(T, 0, V, workers=1) == chaos_witness_search(T, 0, V, workers=4)
