from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from symdyn.interval import PwlMap, RationalInterval, make_g, make_h, make_identity, make_tent, pwl_compose, pwl_image
from symdyn.turbulence import (
    NoCertificate, TurbulenceCertificate, fixed_points, laps, theorem6_pipeline,
    turbulence_check,
)

import oracles

I = RationalInterval


def test_laps_examples():
    ls = laps(make_tent())
    assert [(l.interval, l.direction, l.image) for l in ls] == [
        (I(0, F(1, 2)), "increasing", I(0, 1)),
        (I(F(1, 2), 1), "decreasing", I(0, 1)),
    ]
    TT = pwl_compose(make_tent(), make_tent())
    assert [l.interval for l in laps(TT)] == [I(F(k, 4), F(k + 1, 4)) for k in range(4)]
    assert all(l.image == I(0, 1) for l in laps(TT))
    assert len(laps(PwlMap(((0, 0), (F(1, 3), F(1, 2)), (1, 1))))) == 1


@pytest.mark.parametrize("m", [make_tent(), make_g(), make_h(), pwl_compose(make_h(), make_h())])
def test_laps_tile_domain(m):
    ls = laps(m)
    assert ls[0].interval.lo == m.domain.lo and ls[-1].interval.hi == m.domain.hi
    assert all(a.interval.hi == b.interval.lo for a, b in zip(ls, ls[1:]))
    assert all(a.direction != b.direction for a, b in zip(ls, ls[1:]))


def test_fixed_point_examples():
    assert tuple(fixed_points(make_tent())) == (0, F(2, 3))
    assert tuple(fixed_points(make_g())) == (0,)
    fp = fixed_points(make_identity())
    assert fp.segments == (I(0, 1),)


@pytest.mark.parametrize("m, f", [(make_tent(), oracles.tent), (make_g(), oracles.g), (make_h(), oracles.h)])
def test_fixed_points_grid_crosscheck(m, f):
    fps = fixed_points(m)
    assert all(m(z) == z for z in fps)
    lo, hi = m.domain.lo, m.domain.hi
    grid = [lo + (hi - lo) * F(k, 2**10) for k in range(2**10 + 1)]
    for a, b in zip(grid, grid[1:]):
        da, db = f(a) - a, f(b) - b
        if da == 0 or db == 0 or (da > 0) != (db > 0):
            # a sign change or zero on [a, b] needs a returned fixed point there
            assert any(a <= z <= b for z in fps), (a, b)


def test_turbulence_tent_square():
    TT = pwl_compose(make_tent(), make_tent())
    cert = turbulence_check(TT)
    assert isinstance(cert, TurbulenceCertificate)
    assert (cert.I0, cert.I1) == (I(0, F(1, 2)), I(F(1, 2), 1))
    assert cert.J0 == cert.J1 == I(0, 1) and cert.shared_point == F(1, 2)
    assert cert.verify(TT)


def test_turbulence_h_square_inside_unit():
    hh = pwl_compose(make_h(), make_h())
    cert = turbulence_check(hh)
    assert isinstance(cert, TurbulenceCertificate) and cert.verify(hh)
    assert I(0, 1).contains_interval(cert.I0) and I(0, 1).contains_interval(cert.I1)
    # independent covering check
    hull = cert.I0.hull(cert.I1)
    for J in (cert.I0, cert.I1):
        img = pwl_image(hh, J)
        assert img.lo <= hull.lo and hull.hi <= img.hi


def test_identity_has_no_certificate():
    res = turbulence_check(make_identity())
    assert isinstance(res, NoCertificate) and "not a proof" in res.note


def test_certificate_rejects_tampering():
    TT = pwl_compose(make_tent(), make_tent())
    cert = turbulence_check(TT)
    bad = TurbulenceCertificate(I(0, F(3, 4)), cert.I1, cert.J0, cert.J1, None)
    assert not bad.verify(TT)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=3, max_size=6))
def test_certificates_always_self_verify(ys):
    nodes = tuple((F(k, len(ys) - 1), F(y, 8)) for k, y in enumerate(ys))
    m = PwlMap(nodes)
    for target in (m, pwl_compose(m, m)):
        res = turbulence_check(target)
        if isinstance(res, TurbulenceCertificate):
            assert res.verify(target)
            assert res.I0.intersect(res.I1) is None or res.I0.intersect(res.I1).width == 0


def test_turbulence_deterministic():
    hh = pwl_compose(make_h(), make_h())
    assert turbulence_check(hh) == turbulence_check(hh)


@pytest.mark.parametrize("m", [make_tent(), make_h()])
def test_pipeline_holds(m):
    rep = theorem6_pipeline(m)
    assert rep.witness.found and rep.implication == "holds"
    assert rep.fixed_point == 0 and m(rep.fixed_point) == 0


def test_pipeline_g_from_zero():
    # from the fixed point 0 a witness exists; the non-chaos of g is about -2/3
    V = I(F(1, 4), F(3, 4))
    rep = theorem6_pipeline(make_g(), open_set=V)
    assert rep.witness.found and rep.implication == "holds"
    y = F(rep.witness.y)
    (hi, _), (lo, _) = oracles.sup_inf(oracles.g, F(0), y, rep.witness.horizon)
    assert hi == rep.witness.sup and lo == rep.witness.inf


def test_pipeline_vacuous_for_identity():
    rep = theorem6_pipeline(make_identity(), horizon=200)
    assert rep.implication == "vacuous" and rep.certificate is None
