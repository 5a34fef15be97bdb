"""The planar tripod embedding and the metrics built on it.

The signed elements embed into the complex plane as three rays from the
origin at mutual 120-degree angles (plus at 120, minus at 240, balanced along
the positive reals), a point with magnitude exponent ``t`` landing at radius
``e**t``; the zero element is the origin since ``e**-inf = 0``.

Two metrics on elements: the chord (Euclidean) distance between embedded
points, and the inner (path) distance measured along the tripod, through the
origin for points on different rays.  Vectors combine the coordinate
distances by max, Euclidean norm or sum, giving six product metrics.
"""

from __future__ import annotations

import math
import sys
import warnings
from dataclasses import dataclass
from typing import Iterator, Tuple

from .algebra import EPS, SElem, Sign


class MagnitudeRangeWarning(RuntimeWarning):
    """Emitted when e**t overflows the float range and saturates."""


_MAX_EXP_ARG = math.log(sys.float_info.max)

THETA = complex(-0.5, math.sqrt(3.0) / 2.0)

_RAY_DIRECTION = {
    Sign.PLUS: THETA,
    Sign.MINUS: THETA * THETA,
    Sign.BALANCED: complex(1.0, 0.0),
}


def magnitude(a: SElem) -> float:
    """Radial coordinate e**|a| of the embedded point; exactly 0 for the zero
    element, saturating (with a warning) on float overflow."""
    t = a.exp
    if t is EPS:
        return 0.0
    if t > _MAX_EXP_ARG:
        warnings.warn(
            f"magnitude exponent {t} overflows the float range; saturating",
            MagnitudeRangeWarning,
            stacklevel=2,
        )
        return sys.float_info.max
    return math.exp(t)


def phi(a: SElem) -> complex:
    """Embed a signed element into the plane."""
    return _RAY_DIRECTION[a.sign] * magnitude(a)


def d1(a: SElem, b: SElem) -> float:
    """Chord distance between the embedded points.

    Same-ray pairs reduce to |m - m'| on the common ray; distinct rays use
    the law of cosines at 120 degrees, sqrt(m^2 + m'^2 + m m'), which avoids
    the roundoff of complex subtraction.
    """
    m = magnitude(a)
    mp = magnitude(b)
    if a.sign is b.sign:
        return abs(m - mp)
    return math.sqrt(m * m + mp * mp + m * mp)


def d2(a: SElem, b: SElem) -> float:
    """Path distance along the tripod (through the origin across rays)."""
    m = magnitude(a)
    mp = magnitude(b)
    if a.sign is b.sign:
        return abs(m - mp)
    return m + mp


_BASE = {1: d1, 2: d2}


@dataclass(frozen=True)
class SVector:
    """A fixed-length tuple of signed elements."""

    coords: Tuple[SElem, ...]

    def __post_init__(self):
        coords = tuple(self.coords)
        if not coords:
            raise ValueError("vectors must have at least one coordinate")
        if not all(isinstance(c, SElem) for c in coords):
            raise TypeError("vector coordinates must be SElem")
        object.__setattr__(self, "coords", coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[SElem]:
        return iter(self.coords)

    def __getitem__(self, i: int) -> SElem:
        return self.coords[i]

    def __repr__(self) -> str:
        return "(" + ", ".join(repr(c) for c in self.coords) + ")"

    def to_json(self) -> dict:
        return {"coords": [c.to_json() for c in self.coords]}

    @classmethod
    def from_json(cls, data: dict) -> "SVector":
        return cls(tuple(SElem.from_json(c) for c in data["coords"]))


def phi_n(x: SVector) -> Tuple[complex, ...]:
    """Coordinatewise embedding of a vector into C^n."""
    return tuple(phi(c) for c in x)


_COMBINE_BY_K = {0: "max", 1: "euclid", 2: "sum"}
_K_BY_COMBINE = {v: k for k, v in _COMBINE_BY_K.items()}


@dataclass(frozen=True)
class MetricId:
    """One of the six product metrics: a combine rule over a base metric."""

    combine: str  # "max" | "euclid" | "sum"
    base: int  # 1 (chord) | 2 (path)

    def __post_init__(self):
        if self.combine not in _K_BY_COMBINE:
            raise ValueError(f"unknown combine rule {self.combine!r}")
        if self.base not in (1, 2):
            raise ValueError(f"unknown base metric {self.base!r}")

    @property
    def code(self) -> str:
        return f"rho{_K_BY_COMBINE[self.combine]}{self.base}"

    def __repr__(self) -> str:
        return self.code


D1 = MetricId("euclid", 1)
D2 = MetricId("euclid", 2)

_ALIASES = {"d1": D1, "d2": D2}


def parse_metric_id(code: str) -> MetricId:
    """Parse ``rho<k><j>`` codes and the aliases ``D1`` (= rho11), ``D2`` (= rho12)."""
    lowered = code.strip().lower()
    if lowered in _ALIASES:
        return _ALIASES[lowered]
    if len(lowered) == 5 and lowered.startswith("rho"):
        k, j = lowered[3], lowered[4]
        if k in "012" and j in "12":
            return MetricId(_COMBINE_BY_K[int(k)], int(j))
    raise ValueError(f"unknown metric id {code!r}")


def rho(mid: MetricId, x: SVector, y: SVector) -> float:
    """Distance between two vectors under the chosen product metric."""
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    base = _BASE[mid.base]
    ds = [base(a, b) for a, b in zip(x, y)]
    if mid.combine == "max":
        return max(ds)
    if mid.combine == "sum":
        return float(sum(ds))
    return math.sqrt(sum(d * d for d in ds))
