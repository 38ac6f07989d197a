"""Laps, fixed points and exact turbulence certificates.

A map f is turbulent when there are closed intervals I0, I1 with at most
one common point and f(I0) and f(I1) both containing I0 and I1.  For a
map f of a compact interval that is chaotic in the sense of the witness
module, f o f is turbulent; :func:`theorem6_pipeline` exercises that
implication on concrete maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .interval import PwlMap, RationalInterval, pwl_compose, pwl_image
from .witness import WitnessReport, chaos_witness_search, map_system, _frac_str

__all__ = [
    "Lap", "laps", "FixedPoints", "fixed_points",
    "TurbulenceCertificate", "NoCertificate", "turbulence_check",
    "Theorem6Report", "theorem6_pipeline",
]

SHRINK_ROUNDS = 64


@dataclass(frozen=True)
class Lap:
    interval: RationalInterval
    direction: str          # "increasing" | "decreasing" | "constant"
    image: RationalInterval


def _direction(slope: Fraction) -> str:
    if slope > 0:
        return "increasing"
    if slope < 0:
        return "decreasing"
    return "constant"


def laps(m: PwlMap) -> list[Lap]:
    """Maximal pieces on which m is strictly monotone (or constant)."""
    out = []
    segs = m.segments
    start = 0
    for k in range(1, len(segs) + 1):
        if k == len(segs) or _direction(segs[k][2]) != _direction(segs[start][2]):
            J = RationalInterval(segs[start][0], segs[k - 1][1])
            out.append(Lap(J, _direction(segs[start][2]), pwl_image(m, J)))
            start = k
    return out


@dataclass(frozen=True)
class FixedPoints:
    """Isolated fixed points plus whole segments of fixed points.

    ``points`` also lists the endpoints of every fixed segment.
    """

    points: tuple
    segments: tuple = ()

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def fixed_points(m: PwlMap) -> FixedPoints:
    pts, segs = set(), []
    for lo, hi, s, c in m.segments:
        if s == 1:
            if c == 0:
                if segs and segs[-1].hi == lo:
                    segs[-1] = RationalInterval(segs[-1].lo, hi)
                else:
                    segs.append(RationalInterval(lo, hi))
            continue
        z = c / (1 - s)
        if lo <= z <= hi:
            pts.add(z)
    for J in segs:
        pts.update((J.lo, J.hi))
    return FixedPoints(tuple(sorted(pts)), tuple(segs))


@dataclass(frozen=True)
class TurbulenceCertificate:
    I0: RationalInterval
    I1: RationalInterval
    J0: RationalInterval
    J1: RationalInterval
    shared_point: Optional[Fraction]
    pieces: str = "laps"

    def verify(self, m: PwlMap) -> bool:
        """Recompute both images and the covering with fresh calls."""
        if self.I0.lo >= self.I0.hi or self.I1.lo >= self.I1.hi:
            return False
        common = self.I0.intersect(self.I1)
        if common is not None and common.lo != common.hi:
            return False
        H = self.I0.hull(self.I1)
        J0, J1 = pwl_image(m, self.I0), pwl_image(m, self.I1)
        return J0 == self.J0 and J1 == self.J1 and J0.contains_interval(H) and J1.contains_interval(H)

    def to_dict(self) -> dict:
        iv = lambda J: [str(J.lo), str(J.hi)]
        return {
            "certificate": True,
            "I0": iv(self.I0), "I1": iv(self.I1),
            "J0": iv(self.J0), "J1": iv(self.J1),
            "shared_point": None if self.shared_point is None else str(self.shared_point),
            "pieces": self.pieces,
        }


@dataclass(frozen=True)
class NoCertificate:
    """No certificate among the scanned pairs; not a proof of non-turbulence."""

    pairs_scanned: int
    note: str = "search covers pairs of laps only; absence is not a proof"

    def to_dict(self) -> dict:
        return {"certificate": False, "pairs_scanned": self.pairs_scanned, "note": self.note}


def _try_pair(m: PwlMap, A: RationalInterval, B: RationalInterval) -> Optional[tuple]:
    """Shrink A and B to their parts covered by both images until stable.

    Each round replaces a piece K by ``K cap m(A) cap m(B)``.  At a fixed
    point both pieces lie inside the interval ``m(A) cap m(B)``, so that
    interval contains the hull of the pair.
    """
    for _ in range(SHRINK_ROUNDS):
        if A.lo >= A.hi or B.lo >= B.hi:
            return None
        JA, JB = pwl_image(m, A), pwl_image(m, B)
        H = A.hull(B)
        if JA.contains_interval(H) and JB.contains_interval(H):
            return A, B, JA, JB
        both = JA.intersect(JB)
        if both is None:
            return None
        A2, B2 = A.intersect(both), B.intersect(both)
        if A2 is None or B2 is None or (A2, B2) == (A, B):
            return None
        A, B = A2, B2
    return None


def _scan(m: PwlMap, pieces: list[RationalInterval], label: str):
    count = 0
    for a in range(len(pieces)):
        for b in range(a + 1, len(pieces)):
            count += 1
            hit = _try_pair(m, pieces[a], pieces[b])
            if hit is None:
                continue
            I0, I1, J0, J1 = hit
            common = I0.intersect(I1)
            shared = common.lo if common is not None else None
            cert = TurbulenceCertificate(I0, I1, J0, J1, shared, label)
            if cert.verify(m):
                return cert, count
    return None, count


def turbulence_check(m: PwlMap):
    """Return a :class:`TurbulenceCertificate` or :class:`NoCertificate`.

    Candidate pieces are scanned leftmost pair first.  When m was built as
    ``f o f`` the laps of f are tried before the laps of m itself, which
    gives the coarse certificate the squared map inherits from f.
    """
    piece_sets = []
    if m.factors is not None:
        outer, inner = m.factors
        if outer == inner:
            piece_sets.append(("laps of f", [lap.interval for lap in laps(inner)]))
    piece_sets.append(("laps", [lap.interval for lap in laps(m)]))
    total = 0
    for label, pieces in piece_sets:
        cert, count = _scan(m, pieces, label)
        total += count
        if cert is not None:
            return cert
    return NoCertificate(total)


@dataclass(frozen=True)
class Theorem6Report:
    map: str
    fixed_point: Fraction
    open_set: RationalInterval
    witness: WitnessReport
    certificate: object
    implication: str        # "holds" | "violated" | "vacuous"

    def to_dict(self) -> dict:
        return {
            "map": self.map,
            "fixed_point": _frac_str(self.fixed_point),
            "open_set": [str(self.open_set.lo), str(self.open_set.hi)],
            "witness": self.witness.to_dict(),
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
            "implication": self.implication,
        }


def _sample_open_set(m: PwlMap, seed: int) -> RationalInterval:
    import random

    rng = random.Random(seed)
    dom = m.domain
    width = dom.width / 8
    k = rng.randrange(0, 7 * 64 + 1)
    lo = dom.lo + dom.width * Fraction(k, 8 * 64)
    return RationalInterval(lo, lo + width)


def theorem6_pipeline(m: PwlMap, delta=None, epsilon=None, horizon=None, seed: int = 0,
                      open_set: Optional[RationalInterval] = None) -> Theorem6Report:
    """Chaos witness from a fixed point, then a turbulence certificate for m o m.

    If the search finds a witness, a missing certificate for ``m o m``
    would contradict the implication and is reported as ``violated``;
    an inconclusive search leaves it ``vacuous``.
    """
    fps = fixed_points(m)
    if not fps.points:
        raise RuntimeError(f"no fixed point found for {m}; a continuous self-map must have one")
    z = fps.points[0]
    W = open_set or _sample_open_set(m, seed)
    rep = chaos_witness_search(map_system(m), z, W, delta, epsilon, horizon, seed=seed)
    cert = None
    if rep.found:
        cert = turbulence_check(pwl_compose(m, m))
        implication = "holds" if isinstance(cert, TurbulenceCertificate) else "violated"
    else:
        implication = "vacuous"
    return Theorem6Report(str(m), z, W, rep, cert, implication)
