"""Segments between points of the signed max-plus product space.

Three different segment notions between two vectors:

* geometric: the shortest path under the inner product metric.  Under a
  per-coordinate signed chart the path is a straight chord; pulled back it
  is a broken line with at most one interior breakpoint per coordinate
  (where a coordinate crosses the origin of its tripod).
* traditional: the straight chord between the embedded images, when that
  chord stays inside the embedded tripod product (only same-ray or radial
  coordinates qualify).
* semimodule: the set of combinations ``(lam (*) a) (+) (gam (*) b)`` with
  ``max(lam, gam) = 0``.  Because signed addition is discontinuous, this set
  can be disconnected and non-closed; it is computed symbolically by
  splitting the scaling parameter at the values where a scaled coordinate
  magnitude crosses its partner's.

Segment sets are stored as disjoint pieces: isolated points, and affine arcs
in chart coordinates with explicit open/closed endpoint flags.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .algebra import EPS, SElem, Sign, ZERO, s_oplus, s_otimes, scalar_mul
from .metrics import D1, MetricId, SVector, magnitude, rho

PsiChart = Tuple[Tuple[Sign, Sign], ...]

_TAG_ORDER = (Sign.PLUS, Sign.MINUS, Sign.BALANCED)


class ChartError(ValueError):
    """A coordinate lies on a ray the chart does not map."""


def vec_oplus(x: SVector, y: SVector) -> SVector:
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return SVector(tuple(s_oplus(a, b) for a, b in zip(x, y)))


def vec_otimes(x: SVector, y: SVector) -> SVector:
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return SVector(tuple(s_otimes(a, b) for a, b in zip(x, y)))


def vec_scale(lam, x: SVector) -> SVector:
    return SVector(tuple(scalar_mul(lam, c) for c in x))


def _complement(tag: Sign) -> Sign:
    for t in _TAG_ORDER:
        if t is not tag:
            return t
    raise AssertionError


def chart_for(a: SVector, b: SVector) -> PsiChart:
    """Per-coordinate ordered ray pair covering both endpoints.

    Zero coordinates can sit on any ray; they adopt the partner's ray and a
    deterministic complementary tag (preferring plus, then minus, then
    balanced) so that the chart is reproducible.
    """
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    pairs = []
    for x, y in zip(a, b):
        if x.is_zero and y.is_zero:
            pairs.append((Sign.PLUS, Sign.MINUS))
        elif x.is_zero:
            pairs.append((_complement(y.sign), y.sign))
        elif y.is_zero:
            pairs.append((x.sign, _complement(x.sign)))
        else:
            pairs.append((x.sign, y.sign))
    return tuple(pairs)


def psi(chart: PsiChart, x: SVector) -> Tuple[float, ...]:
    """Signed magnitude coordinates: +m on the first chart ray, -m on the
    second, 0 at the zero element."""
    if len(chart) != len(x):
        raise ValueError(f"dimension mismatch: {len(chart)} vs {len(x)}")
    out = []
    for (u, v), c in zip(chart, x):
        if c.is_zero:
            out.append(0.0)
        elif c.sign is u:
            out.append(magnitude(c))
        elif c.sign is v:
            out.append(-magnitude(c))
        else:
            raise ChartError(f"coordinate {c!r} lies on neither chart ray ({u.value},{v.value})")
    return tuple(out)


def psi_inverse(chart: PsiChart, p: Sequence[float]) -> SVector:
    """Pull chart coordinates back: positive values to the first ray,
    negative to the second, zero to the zero element."""
    if len(chart) != len(p):
        raise ValueError(f"dimension mismatch: {len(chart)} vs {len(p)}")
    coords = []
    for (u, v), s in zip(chart, p):
        if s > 0:
            coords.append(SElem(u, math.log(s)))
        elif s < 0:
            coords.append(SElem(v, math.log(-s)))
        else:
            coords.append(ZERO)
    return SVector(tuple(coords))


def _chart_json(chart: PsiChart) -> list:
    return [[u.value, v.value] for u, v in chart]


def _chart_from_json(data) -> PsiChart:
    return tuple((Sign(u), Sign(v)) for u, v in data)


@dataclass(frozen=True)
class BrokenLine:
    """A geodesic for the inner metric, in chart coordinates.

    ``vertices`` holds the chart images of both endpoints with the interior
    breakpoints in between; ``breakpoint_params`` are the strictly increasing
    chord parameters in (0, 1) at which some coordinate crosses zero.
    """

    chart: PsiChart
    vertices: Tuple[Tuple[float, ...], ...]
    breakpoint_params: Tuple[float, ...]
    length: float

    def endpoint_vectors(self) -> Tuple[SVector, SVector]:
        return psi_inverse(self.chart, self.vertices[0]), psi_inverse(self.chart, self.vertices[-1])

    def to_json(self) -> dict:
        return {
            "chart": _chart_json(self.chart),
            "t": list(self.breakpoint_params),
            "vertices": [list(v) for v in self.vertices],
            "length": self.length,
        }

    @classmethod
    def from_json(cls, data: dict) -> "BrokenLine":
        return cls(
            _chart_from_json(data["chart"]),
            tuple(tuple(v) for v in data["vertices"]),
            tuple(data["t"]),
            data["length"],
        )


def _euclid(p: Sequence[float], q: Sequence[float]) -> float:
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(p, q)))


def geometric_segment(a: SVector, b: SVector) -> BrokenLine:
    """Shortest inner-metric path between two vectors.

    Only coordinates whose chart values have strictly opposite signs generate
    interior breakpoints (a coordinate that is zero at an endpoint crosses
    nowhere in the open chord); equal crossing parameters collapse to one
    vertex.  The length equals the inner product distance of the endpoints.
    """
    chart = chart_for(a, b)
    alpha = psi(chart, a)
    beta = psi(chart, b)
    ts = sorted(
        {
            alpha[j] / (alpha[j] - beta[j])
            for j in range(len(alpha))
            if (alpha[j] > 0.0 > beta[j]) or (alpha[j] < 0.0 < beta[j])
        }
    )
    vertices = [alpha]
    for t in ts:
        vertices.append(tuple((1.0 - t) * alpha[j] + t * beta[j] for j in range(len(alpha))))
    vertices.append(beta)
    length = sum(_euclid(vertices[i], vertices[i + 1]) for i in range(len(vertices) - 1))
    return BrokenLine(chart, tuple(vertices), tuple(ts), length)


def d_segment_contains(x: SVector, y: SVector, z: SVector, mid: MetricId, tol: float = 1e-9) -> bool:
    """Whether ``z`` lies metrically between ``x`` and ``y``: the triangle
    inequality holds with equality within ``tol``."""
    return abs(rho(mid, x, z) + rho(mid, z, y) - rho(mid, x, y)) <= tol


@dataclass(frozen=True)
class PointPiece:
    point: SVector

    def to_json(self) -> dict:
        return {"kind": "point", "point": self.point.to_json()}


@dataclass(frozen=True)
class ArcPiece:
    """An affine arc in chart coordinates, with endpoint inclusion flags.

    The arc is {psi_inverse(chart, (1-t) start + t end) : t in (0,1)} plus
    the endpoints whose flag is set.  Interior points never cross a
    coordinate zero, so the pullback is continuous and injective.
    """

    chart: PsiChart
    start: Tuple[float, ...]
    end: Tuple[float, ...]
    closed_lo: bool
    closed_hi: bool

    def point_at(self, t: float) -> SVector:
        p = tuple((1.0 - t) * s + t * e for s, e in zip(self.start, self.end))
        return psi_inverse(self.chart, p)

    def chord_length(self) -> float:
        return _euclid(self.start, self.end)

    def param_of(self, x: SVector, tol: float = 1e-9) -> Optional[float]:
        """Chord parameter of ``x`` on this arc, or None when off the arc
        (off-chart, inconsistent, outside range, or at an excluded end)."""
        try:
            px = psi(self.chart, x)
        except (ChartError, ValueError):
            return None
        t = None
        for s, e, v in zip(self.start, self.end, px):
            span = e - s
            if abs(span) <= tol:
                if abs(v - s) > tol * max(1.0, abs(s)):
                    return None
            else:
                ti = (v - s) / span
                if t is None:
                    t = ti
                elif abs(ti - t) > 1e-6:
                    return None
        if t is None:
            t = 0.0
        if t < -tol or t > 1.0 + tol:
            return None
        if abs(t) <= tol and not self.closed_lo:
            return None
        if abs(t - 1.0) <= tol and not self.closed_hi:
            return None
        # verify the remaining coordinates agree
        q = self.point_at(min(max(t, 0.0), 1.0))
        if rho(D1, q, x) > 1e-8 * max(1.0, *(abs(c) for c in px)):
            return None
        return min(max(t, 0.0), 1.0)

    def contains(self, x: SVector) -> bool:
        return self.param_of(x) is not None

    def to_json(self) -> dict:
        return {
            "kind": "arc",
            "chart": _chart_json(self.chart),
            "start": list(self.start),
            "end": list(self.end),
            "closed_lo": self.closed_lo,
            "closed_hi": self.closed_hi,
        }


SegmentPiece = "PointPiece | ArcPiece"


def _piece_from_json(data: dict):
    if data["kind"] == "point":
        return PointPiece(SVector.from_json(data["point"]))
    if data["kind"] == "arc":
        return ArcPiece(
            _chart_from_json(data["chart"]),
            tuple(data["start"]),
            tuple(data["end"]),
            data["closed_lo"],
            data["closed_hi"],
        )
    raise ValueError(f"unknown piece kind {data['kind']!r}")


@dataclass(frozen=True)
class SegmentSet:
    """A segment as a finite union of pairwise disjoint pieces."""

    pieces: Tuple[object, ...]

    def contains(self, x: SVector) -> bool:
        for piece in self.pieces:
            if isinstance(piece, PointPiece):
                if piece.point == x or _phi_close(piece.point, x, 1e-9):
                    return True
            elif piece.contains(x):
                return True
        return False

    def has_open_piece(self) -> bool:
        return any(
            isinstance(p, ArcPiece) and not (p.closed_lo and p.closed_hi) for p in self.pieces
        )

    def sample(self, spacing: float) -> List[SVector]:
        """Points covering every piece to within ``spacing`` in chart space."""
        out: List[SVector] = []
        for piece in self.pieces:
            if isinstance(piece, PointPiece):
                out.append(piece.point)
                continue
            n_steps = max(2, int(math.ceil(piece.chord_length() / spacing)) + 1)
            for i in range(n_steps + 1):
                t = i / n_steps
                if (t == 0.0 and not piece.closed_lo) or (t == 1.0 and not piece.closed_hi):
                    t = (0.5 / n_steps) if t == 0.0 else 1.0 - 0.5 / n_steps
                out.append(piece.point_at(t))
        return out

    def to_json(self) -> dict:
        return {"pieces": [p.to_json() for p in self.pieces]}

    @classmethod
    def from_json(cls, data: dict) -> "SegmentSet":
        return cls(tuple(_piece_from_json(p) for p in data["pieces"]))


def _phi_close(x: SVector, y: SVector, tol: float) -> bool:
    return len(x) == len(y) and rho(D1, x, y) <= tol


def as_segment_set(line: BrokenLine) -> SegmentSet:
    """View a broken line as a segment set (half-open pieces at the interior
    vertices so the pieces stay disjoint)."""
    verts = line.vertices
    arcs = []
    for i in range(len(verts) - 1):
        if verts[i] == verts[i + 1]:
            continue
        last = i == len(verts) - 2
        arcs.append(ArcPiece(line.chart, verts[i], verts[i + 1], True, last))
    if not arcs:
        return SegmentSet((PointPiece(psi_inverse(line.chart, verts[0])),))
    return SegmentSet(tuple(arcs))


def traditional_segment(a: SVector, b: SVector) -> Optional[SegmentSet]:
    """The chord between the embedded images, when it stays inside the
    embedded tripod product; None when some coordinate pair sits on two
    distinct rays (such a chord leaves the tripod)."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    for x, y in zip(a, b):
        if not x.is_zero and not y.is_zero and x.sign is not y.sign:
            return None
    if a == b:
        return SegmentSet((PointPiece(a),))
    chart = chart_for(a, b)
    return SegmentSet((ArcPiece(chart, psi(chart, a), psi(chart, b), True, True),))


# ---------------------------------------------------------------------------
# Semimodule segments
# ---------------------------------------------------------------------------
#
# With max(lam, gam) = 0 the segment splits into the two one-parameter
# families {(lam (*) a) (+) b : lam <= 0} and {a (+) (gam (*) b) : gam <= 0}.
# In one family, coordinate i of the scaled copy has magnitude exponent
# lam + |a(i)|, which overtakes the frozen partner's |b(i)| exactly at
# lam = |b(i)| - |a(i)|.  Between consecutive such event values the set of
# "moving" coordinates is constant and the image is an affine arc in chart
# coordinates (parameterized by e**lam); at an event the tying coordinate
# either joins continuously (equal signs) or jumps through a balanced value.


def _scaled_coord(ai: SElem, bi: SElem, lam: float) -> SElem:
    # scaled copy of a's coordinate; at the tie the exponent is taken from
    # the partner so the equality is exact in floats
    if ai.exp is EPS:
        return ZERO
    if bi.exp is not EPS and (bi.exp - ai.exp) == lam:
        return SElem(ai.sign, bi.exp)
    return SElem(ai.sign, lam + ai.exp)


def _family_value(a: SVector, b: SVector, lam) -> SVector:
    if lam is EPS:
        return b
    return SVector(tuple(s_oplus(_scaled_coord(ai, bi, lam), bi) for ai, bi in zip(a, b)))


def _interval_limit(a: SVector, b: SVector, moving: Sequence[bool], lam) -> SVector:
    coords = []
    for i, (ai, bi) in enumerate(zip(a, b)):
        if moving[i]:
            coords.append(ZERO if lam is None else _scaled_coord(ai, bi, lam))
        else:
            coords.append(bi)
    return SVector(tuple(coords))


def _family_atoms(a: SVector, b: SVector):
    """Point atoms and raw open arcs of {(lam (*) a) (+) b : lam in [eps, 0]}."""
    n = len(a)
    exps_a = [c.exp for c in a]
    exps_b = [c.exp for c in b]
    events = sorted(
        {
            exps_b[i] - exps_a[i]
            for i in range(n)
            if exps_a[i] is not EPS and exps_b[i] is not EPS and exps_b[i] - exps_a[i] < 0
        },
        reverse=True,
    )

    points = [_family_value(a, b, 0)]
    points += [_family_value(a, b, e) for e in events]
    points.append(_family_value(a, b, EPS))

    cuts = [0.0] + events
    arcs = []  # (chart, lo_vec, hi_vec)
    for idx, hi in enumerate(cuts):
        lo = cuts[idx + 1] if idx + 1 < len(cuts) else None
        moving = []
        for i in range(n):
            if exps_a[i] is EPS:
                moving.append(False)
            elif exps_b[i] is EPS:
                moving.append(True)
            else:
                ev = exps_b[i] - exps_a[i]
                moving.append(lo is not None and ev <= lo)
        if not any(moving):
            continue
        chart = []
        for i in range(n):
            if moving[i]:
                chart.append((a[i].sign, a[i].sign))
            elif b[i].is_zero:
                chart.append((Sign.PLUS, Sign.PLUS))
            else:
                chart.append((b[i].sign, b[i].sign))
        chart = tuple(chart)
        lo_vec = _interval_limit(a, b, moving, lo)
        hi_vec = _interval_limit(a, b, moving, hi)
        arcs.append((chart, lo_vec, hi_vec))
    return points, arcs


class _RawArc:
    __slots__ = ("chart", "lo_vec", "hi_vec", "closed_lo", "closed_hi")

    def __init__(self, chart, lo_vec, hi_vec):
        self.chart = chart
        self.lo_vec = lo_vec
        self.hi_vec = hi_vec
        self.closed_lo = False
        self.closed_hi = False

    def piece(self) -> ArcPiece:
        return ArcPiece(
            self.chart,
            psi(self.chart, self.lo_vec),
            psi(self.chart, self.hi_vec),
            self.closed_lo,
            self.closed_hi,
        )


def _merge_atoms(points: List[SVector], raw_arcs: List[_RawArc]) -> Tuple[object, ...]:
    uniq: List[SVector] = []
    for p in points:
        if p not in uniq:
            uniq.append(p)

    kept: List[SVector] = []
    for p in uniq:
        placed = False
        for arc in raw_arcs:
            if arc.piece().contains(p):
                placed = True
                break
        if not placed:
            for arc in raw_arcs:
                if not arc.closed_lo and arc.lo_vec == p:
                    arc.closed_lo = True
                    placed = True
                    break
                if not arc.closed_hi and arc.hi_vec == p:
                    arc.closed_hi = True
                    placed = True
                    break
        if not placed:
            kept.append(p)

    # arcs ending at the same closed point keep the point once
    for i, arc in enumerate(raw_arcs):
        for other in raw_arcs[:i]:
            for mine in ("closed_lo", "closed_hi"):
                vec = arc.lo_vec if mine == "closed_lo" else arc.hi_vec
                if not getattr(arc, mine):
                    continue
                if (other.closed_lo and other.lo_vec == vec) or (
                    other.closed_hi and other.hi_vec == vec
                ):
                    setattr(arc, mine, False)

    pieces: List[object] = []
    for arc in raw_arcs:
        if arc.lo_vec == arc.hi_vec:
            if arc.closed_lo or arc.closed_hi:
                pt = arc.lo_vec
                if all(not (isinstance(q, PointPiece) and q.point == pt) for q in pieces):
                    pieces.append(PointPiece(pt))
            continue
        pieces.append(arc.piece())
    pieces.extend(PointPiece(p) for p in kept)
    return tuple(pieces)


def semimodule_segment(a: SVector, b: SVector) -> SegmentSet:
    """The set of max-normalized scaled combinations of the two endpoints,
    as disjoint pieces with explicit endpoint flags."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    points: List[SVector] = []
    raw: List[_RawArc] = []
    for p, q in ((a, b), (b, a)):
        pts, arcs = _family_atoms(p, q)
        points.extend(pts)
        raw.extend(_RawArc(*t) for t in arcs)
    return SegmentSet(_merge_atoms(points, raw))


# ---------------------------------------------------------------------------
# Connectivity of a segment set
# ---------------------------------------------------------------------------


def _closure_points(piece) -> List[SVector]:
    if isinstance(piece, PointPiece):
        return [piece.point]
    return [psi_inverse(piece.chart, piece.start), psi_inverse(piece.chart, piece.end)]


def _piece_member(piece, x: SVector) -> bool:
    if isinstance(piece, PointPiece):
        return piece.point == x or _phi_close(piece.point, x, 1e-9)
    return piece.contains(x)


def _touch(p, q) -> bool:
    # union of two connected sets is connected iff cl(p) meets q or p meets cl(q)
    return any(_piece_member(q, e) for e in _closure_points(p)) or any(
        _piece_member(p, e) for e in _closure_points(q)
    )


def components(seg: SegmentSet) -> List[List[int]]:
    """Indices of the pieces grouped into connected components."""
    n = len(seg.pieces)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if _touch(seg.pieces[i], seg.pieces[j]):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def component_count(seg: SegmentSet) -> int:
    return len(components(seg))


def isolated_points(seg: SegmentSet) -> List[SVector]:
    """Members of singleton components consisting of a single point piece."""
    out = []
    for group in components(seg):
        if len(group) == 1 and isinstance(seg.pieces[group[0]], PointPiece):
            out.append(seg.pieces[group[0]].point)
    return out
