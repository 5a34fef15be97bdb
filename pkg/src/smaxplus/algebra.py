"""Exact arithmetic for the max-plus semiring, its pair algebra, and the
signed (symmetrized) quotient.

Three layers:

* scalars -- the max-plus semiring over the reals extended with a bottom
  element ``EPS``: addition is ``max``, multiplication is ``+``, ``EPS`` is
  the additive zero and absorbs multiplication;
* pairs -- componentwise max with a convolution-style product, a component
  swap (the formal minus) and a balance operator;
* signed elements -- the quotient of the pair algebra, where every class is
  a sign tag (plus / minus / balanced) together with a magnitude exponent.

``EPS`` is a distinct tagged value, never an IEEE ``-inf`` float, so the
semiring laws hold exactly at the zero element.  All values are immutable
and every operation is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Tuple, Union


class _Eps:
    """Bottom element of the scalar semiring; compares below every real."""

    __slots__ = ()
    _instance = None

    def __new__(cls) -> "_Eps":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "eps"

    def __lt__(self, other):
        if other is self:
            return False
        if isinstance(other, (int, float)):
            return True
        return NotImplemented

    def __le__(self, other):
        if other is self or isinstance(other, (int, float)):
            return True
        return NotImplemented

    def __gt__(self, other):
        if other is self or isinstance(other, (int, float)):
            return False
        return NotImplemented

    def __ge__(self, other):
        return other is self if isinstance(other, (int, float, _Eps)) else NotImplemented


EPS = _Eps()

ExtReal = Union[int, float, _Eps]


def is_eps(a: ExtReal) -> bool:
    return a is EPS


def as_ext(value) -> ExtReal:
    """Coerce a raw number into a scalar; IEEE -inf maps to ``EPS``."""
    if value is EPS:
        return EPS
    if isinstance(value, (int, float)):
        if value == float("-inf"):
            return EPS
        if isinstance(value, float) and not math.isfinite(value):
            raise ValueError(f"not a valid magnitude exponent: {value!r}")
        return value
    raise TypeError(f"expected a real number or eps, got {type(value).__name__}")


def ext_oplus(a: ExtReal, b: ExtReal) -> ExtReal:
    """Tropical addition: max, with ``EPS`` neutral."""
    if a is EPS:
        return b
    if b is EPS:
        return a
    return a if a >= b else b


def ext_otimes(a: ExtReal, b: ExtReal) -> ExtReal:
    """Tropical multiplication: ordinary addition, with ``EPS`` absorbing."""
    if a is EPS or b is EPS:
        return EPS
    return a + b


def ext_power(a: ExtReal, k: int) -> ExtReal:
    """Tropical power: ``k``-fold product, i.e. ``k * a``; ``a ** 0`` is the unit 0."""
    if not isinstance(k, int):
        raise TypeError("exponent must be an integer")
    if k == 0:
        return 0
    if a is EPS:
        if k < 0:
            raise ValueError("eps has no multiplicative inverse")
        return EPS
    return k * a


class Pair(NamedTuple):
    """Element of the pair algebra over the extended scalars."""

    first: ExtReal
    second: ExtReal


def pair_oplus(u: Pair, v: Pair) -> Pair:
    return Pair(ext_oplus(u.first, v.first), ext_oplus(u.second, v.second))


def pair_otimes(u: Pair, v: Pair) -> Pair:
    a, b = u
    c, d = v
    return Pair(
        ext_oplus(ext_otimes(a, c), ext_otimes(b, d)),
        ext_oplus(ext_otimes(a, d), ext_otimes(b, c)),
    )


def pair_minus(u: Pair) -> Pair:
    """Formal minus: swap the components (an involution)."""
    return Pair(u.second, u.first)


def pair_norm(u: Pair) -> ExtReal:
    """Max of the two components."""
    return ext_oplus(u.first, u.second)


def pair_balance(u: Pair) -> Pair:
    """Balance operator: both components become the pair norm."""
    n = pair_norm(u)
    return Pair(n, n)


def balance_rel(u: Pair, v: Pair) -> bool:
    """Cross-sum relation ``a + d_max = b + c_max``; reflexive and symmetric
    but not transitive."""
    return ext_oplus(u.first, v.second) == ext_oplus(u.second, v.first)


def equiv_rel(u: Pair, v: Pair) -> bool:
    """The quotient relation: the cross-sum relation restricted to pairs with
    distinct components, identity elsewhere."""
    if u.first != u.second and v.first != v.second:
        return balance_rel(u, v)
    return u == v


class Sign(Enum):
    PLUS = "+"
    MINUS = "-"
    BALANCED = "o"


_SIGN_ORDER = {Sign.PLUS: 0, Sign.MINUS: 1, Sign.BALANCED: 2}


@dataclass(frozen=True)
class SElem:
    """A signed max-plus element: sign tag plus magnitude exponent.

    Normalization is enforced at construction: the zero element (magnitude
    ``EPS``) is always tagged balanced, so structural equality coincides with
    algebraic equality.
    """

    sign: Sign
    exp: ExtReal

    def __post_init__(self):
        if not isinstance(self.sign, Sign):
            raise TypeError("sign must be a Sign")
        exp = as_ext(self.exp)
        object.__setattr__(self, "exp", exp)
        if exp is EPS and self.sign is not Sign.BALANCED:
            object.__setattr__(self, "sign", Sign.BALANCED)

    @classmethod
    def pos(cls, r) -> "SElem":
        return cls(Sign.PLUS, r)

    @classmethod
    def neg(cls, r) -> "SElem":
        return cls(Sign.MINUS, r)

    @classmethod
    def bal(cls, r) -> "SElem":
        return cls(Sign.BALANCED, r)

    @property
    def is_zero(self) -> bool:
        return self.exp is EPS

    def sort_key(self) -> Tuple[int, float]:
        m = self.exp if not self.is_zero else float("-inf")
        return (_SIGN_ORDER[self.sign], m)

    def __repr__(self) -> str:
        if self.is_zero:
            return "eps"
        prefix = {Sign.PLUS: "p", Sign.MINUS: "m", Sign.BALANCED: "b"}[self.sign]
        return f"{prefix}:{self.exp}"

    def to_json(self) -> dict:
        return {"sign": self.sign.value, "exp": "-inf" if self.is_zero else self.exp}

    @classmethod
    def from_json(cls, data: dict) -> "SElem":
        exp = data["exp"]
        if exp == "-inf":
            exp = EPS
        return cls(Sign(data["sign"]), exp)


ZERO = SElem(Sign.BALANCED, EPS)
UNIT = SElem(Sign.PLUS, 0)


def classify(u: Pair) -> SElem:
    """The signed element represented by a pair: the dominant component wins
    the sign, ties are balanced."""
    a, b = u
    if a is EPS and b is EPS:
        return ZERO
    if b is EPS or (a is not EPS and a > b):
        return SElem(Sign.PLUS, a)
    if a is EPS or a < b:
        return SElem(Sign.MINUS, b)
    return SElem(Sign.BALANCED, a)


def lift(a: SElem) -> Pair:
    """A canonical pair representative of a signed element."""
    if a.sign is Sign.PLUS:
        return Pair(a.exp, EPS)
    if a.sign is Sign.MINUS:
        return Pair(EPS, a.exp)
    return Pair(a.exp, a.exp)


def s_oplus(a: SElem, b: SElem) -> SElem:
    """Signed addition: larger magnitude wins; on a tie, equal signs keep the
    sign and distinct signs balance."""
    if a.exp is EPS:
        return b
    if b.exp is EPS:
        return a
    if a.exp > b.exp:
        return a
    if b.exp > a.exp:
        return b
    if a.sign is b.sign:
        return a
    return SElem(Sign.BALANCED, a.exp)


def s_otimes(a: SElem, b: SElem) -> SElem:
    """Signed multiplication: magnitudes add, signs multiply (balanced absorbs)."""
    mag = ext_otimes(a.exp, b.exp)
    if a.sign is Sign.BALANCED or b.sign is Sign.BALANCED:
        sign = Sign.BALANCED
    elif a.sign is b.sign:
        sign = Sign.PLUS
    else:
        sign = Sign.MINUS
    return SElem(sign, mag)


def s_minus(a: SElem) -> SElem:
    """Flip plus and minus; balanced elements are fixed points."""
    if a.sign is Sign.PLUS:
        return SElem(Sign.MINUS, a.exp)
    if a.sign is Sign.MINUS:
        return SElem(Sign.PLUS, a.exp)
    return a


def s_abs(a: SElem) -> ExtReal:
    """Magnitude exponent of a signed element."""
    return a.exp


def parts(a: SElem) -> Tuple[ExtReal, ExtReal]:
    """Positive and negative part exponents; recombining them via signed
    addition reproduces the element."""
    if a.sign is Sign.PLUS:
        return (a.exp, EPS)
    if a.sign is Sign.MINUS:
        return (EPS, a.exp)
    return (a.exp, a.exp)


def scalar_mul(lam: ExtReal, a: SElem) -> SElem:
    """Scalar action of the max-plus semifield: shift the magnitude exponent,
    keep the sign."""
    return SElem(a.sign, ext_otimes(as_ext(lam), a.exp))


def s_power(a: SElem, k: int) -> SElem:
    """k-fold signed product.  ``a ** 0`` is the unit; negative powers invert,
    which balanced elements do not admit."""
    if not isinstance(k, int):
        raise TypeError("exponent must be an integer")
    if k == 0:
        return UNIT
    if a.is_zero:
        if k < 0:
            raise ValueError("the zero element has no multiplicative inverse")
        return ZERO
    if a.sign is Sign.BALANCED:
        if k < 0:
            raise ValueError("balanced elements have no multiplicative inverse")
        sign = Sign.BALANCED
    elif a.sign is Sign.MINUS and k % 2 == 1:
        sign = Sign.MINUS
    else:
        sign = Sign.PLUS
    return SElem(sign, k * a.exp)
