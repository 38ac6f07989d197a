from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from symdyn.bitseq import Champernowne, Constant, EventuallyPeriodic, IndexRangeError, Word
from symdyn.tau import (
    TauLayout, TauParams, block_A, block_B, block_Bhat, block_C, tau_bit,
    tau_prefix, tau_segment,
)

import oracles


ALT = EventuallyPeriodic(Word(), Word.from_str("01"))


def test_block_C_examples():
    assert str(block_C(ALT, 1, 3)) == "101"
    assert str(block_C(ALT, 4, 4)) == "0"
    assert str(block_C(Champernowne(), 0, 5)) == "010001"


def test_block_B_small_j():
    c = Champernowne()
    s = oracles.champ_string(100)
    i = 7
    assert str(block_B(c, i, 2)) == s[i] * 3
    idx = [0, 1, 2, 2, 3, 4, 4, 5, 6, 6, 7, 8]
    assert str(block_B(c, i, 3)) == "".join(s[i + t] for t in idx)


@pytest.mark.parametrize("j", range(2, 8))
def test_block_lengths(j):
    c = Champernowne()
    assert len(block_B(c, 3, j)) == factorial(j + 1) // 2
    assert len(block_Bhat(c, 3, j)) == factorial(j + 1)


def test_block_B_needs_j_at_least_2():
    with pytest.raises(ValueError):
        block_B(Constant(0), 0, 1)


def test_block_Bhat_constant():
    for i in (0, 5, 100):
        assert str(block_Bhat(Constant(0), i, 2)) == "000111"


@given(st.integers(0, 200), st.integers(2, 5))
def test_block_Bhat_second_half_is_flipped_source(i, j):
    s = oracles.champ_string(2000)
    assert str(block_Bhat(Champernowne(), i, j)) == oracles.Bhat(s, i, j)


def test_block_A_regions():
    A = str(block_A(Constant(1), 5, Champernowne()))
    assert len(A) == 360
    assert set(A[120:240]) == {"1"}
    assert A[240:252] == "01" * 6


@pytest.mark.parametrize("m", range(5, 11))
def test_block_A_region_identity(m):
    fm, f1, f2 = factorial(m), factorial(m - 1), factorial(m - 2)
    assert fm + m * f1 + sum(2 * r * f2 for r in range(1, m)) == 3 * fm
    if m <= 8:
        assert len(block_A(Constant(0), m, Champernowne())) == 3 * fm


def test_block_A_needs_m_at_least_5():
    with pytest.raises(ValueError):
        block_A(Constant(0), 4, Champernowne())


@pytest.mark.parametrize("m", range(5, 10))
def test_cumulative_length_is_next_factorial(m):
    assert TauLayout(5, 19).cumulative_length(m) == factorial(m + 1)


def test_tau_bit_prefix_and_stage_starts():
    b = Word.from_str("10" * 60)
    p = TauParams(Constant(1), b=b)
    assert all(tau_bit(p, n) == b[n] for n in range(120))
    alpha0 = Champernowne().bit(0)
    for m in (5, 6, 7, 8):
        assert tau_bit(p, factorial(m)) == alpha0


@pytest.mark.parametrize("m", [5, 6, 7])
def test_tau_bit_gamma_runs(m):
    gamma = EventuallyPeriodic(Word.from_str("1101"), Word.from_str("001"))
    p = TauParams(gamma)
    for s in range(m):
        n = 2 * factorial(m) + s * factorial(m - 1)
        assert tau_bit(p, n) == gamma.bit(s)
        assert tau_bit(p, n + factorial(m - 1) - 1) == gamma.bit(s)


def test_tau_segment_examples():
    p = TauParams(Constant(1))
    assert tau_segment(p, 100).kind == "Prefix"
    seg = tau_segment(p, 480)
    assert (seg.kind, seg.stage, seg.i, seg.source) == ("BhatFirstHalf", 5, 1, 480)
    seg = tau_segment(p, 360)
    assert (seg.kind, seg.stage, seg.r, seg.source) == ("PatternTail", 5, 1, 0)
    assert str(seg) == "PatternTail(m=5, r=1, source=0)"


def test_tau_prefix_examples():
    p = TauParams(Constant(1))
    assert tau_prefix(p, 120) == p.b
    w = tau_prefix(p, 720)
    assert len(w) == 720
    assert w[120:480] == block_A(Constant(1), 5, Champernowne())
    assert w[480:720] == block_Bhat(p.x(1), 480, 4) + block_Bhat(p.x(2), 600, 4)


@pytest.mark.parametrize("gamma, gstr", [
    (Constant(1), "1" * 20),
    (EventuallyPeriodic(Word.from_str("0"), Word.from_str("011")), "0" + "011" * 7),
])
def test_indexer_agrees_with_string_oracle(gamma, gstr):
    p = TauParams(gamma)
    ref = oracles.tau_string(5, gstr, 40320)
    assert str(tau_prefix(p, 40320)) == ref
    assert "".join(str(tau_bit(p, n)) for n in range(40320)) == ref


def test_custom_family_and_prefix():
    fam = (Constant(1), EventuallyPeriodic(Word(), Word.from_str("10")))
    b = Word.from_str("1" * 120)
    p = TauParams(Constant(0), b=b, family=fam)
    strs = {1: "1" * 50000, 2: "10" * 25000}
    ref = oracles.tau_string(5, "0" * 20, 5040, family=lambda i: strs.get(i) or oracles.champ_string(50000)[i:], b="1" * 120)
    assert str(tau_prefix(p, 5040)) == ref


@settings(max_examples=50)
@given(st.integers(factorial(9), factorial(12) - 1))
def test_indexer_consistent_with_segment_layout(n):
    p = TauParams(Constant(1))
    seg = tau_segment(p, n)
    assert seg.stage is not None and factorial(seg.stage) <= n < factorial(seg.stage + 1)


def test_guards():
    p = TauParams(Constant(0))
    with pytest.raises(IndexRangeError):
        tau_bit(p, factorial(20))
    with pytest.raises(IndexRangeError):
        tau_prefix(p, 10**7 + 1)
    with pytest.raises(ValueError):
        TauParams(Constant(0), k=4)
    with pytest.raises(ValueError):
        TauParams(Constant(0), b=Word.from_str("01"))


def test_far_index_is_fast():
    p = TauParams(Constant(1))
    n = factorial(19) + 5 * factorial(19) + 12345
    assert tau_bit(p, n) in (0, 1)
    assert tau_segment(p, n).kind == "BhatFirstHalf"
