"""Exact arithmetic over the Gaussian rationals Q(i).

Every numeric coefficient in this package is a :class:`GaussianRational`:
a value ``re + im*i`` with exact reduced-fraction parts.  No floating point
is used anywhere; arithmetic never rounds.  The implementation keeps raw
integer numerators/denominators (reduced, denominators positive) because the
Fock oracle multiplies these by the millions.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from math import gcd
from typing import Tuple, Union

Rationalish = Union[int, Fraction, "GaussianRational"]


def _ratio(value) -> Tuple[int, int]:
    if isinstance(value, int):
        return value, 1
    if isinstance(value, Fraction):
        return value.numerator, value.denominator
    raise TypeError(f"cannot use {type(value).__name__} as a rational part")


def _reduce(n: int, d: int) -> Tuple[int, int]:
    if n == 0:
        return 0, 1
    if d < 0:
        n, d = -n, -d
    g = gcd(n, d)
    if g > 1:
        n //= g
        d //= g
    return n, d


class GaussianRational:
    """An exact complex rational ``re + im*i``.

    Values are immutable and hashable.  Mixed arithmetic with ``int`` and
    ``Fraction`` is supported on either side.
    """

    __slots__ = ("rn", "rd", "mn", "md")

    def __init__(self, re: Union[int, Fraction] = 0, im: Union[int, Fraction] = 0):
        rn, rd = _reduce(*_ratio(re))
        mn, md = _reduce(*_ratio(im))
        object.__setattr__(self, "rn", rn)
        object.__setattr__(self, "rd", rd)
        object.__setattr__(self, "mn", mn)
        object.__setattr__(self, "md", md)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @property
    def re(self) -> Fraction:
        return Fraction(self.rn, self.rd)

    @property
    def im(self) -> Fraction:
        return Fraction(self.mn, self.md)

    # -- coercion ------------------------------------------------------

    @staticmethod
    def of(value: Rationalish) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to GaussianRational")

    @staticmethod
    def _raw(rn: int, rd: int, mn: int, md: int) -> "GaussianRational":
        out = object.__new__(GaussianRational)
        object.__setattr__(out, "rn", rn)
        object.__setattr__(out, "rd", rd)
        object.__setattr__(out, "mn", mn)
        object.__setattr__(out, "md", md)
        return out

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: Rationalish) -> "GaussianRational":
        o = other if isinstance(other, GaussianRational) else GaussianRational.of(other)
        rn, rd = _reduce(self.rn * o.rd + o.rn * self.rd, self.rd * o.rd)
        mn, md = _reduce(self.mn * o.md + o.mn * self.md, self.md * o.md)
        return GaussianRational._raw(rn, rd, mn, md)

    __radd__ = __add__

    def __sub__(self, other: Rationalish) -> "GaussianRational":
        o = other if isinstance(other, GaussianRational) else GaussianRational.of(other)
        rn, rd = _reduce(self.rn * o.rd - o.rn * self.rd, self.rd * o.rd)
        mn, md = _reduce(self.mn * o.md - o.mn * self.md, self.md * o.md)
        return GaussianRational._raw(rn, rd, mn, md)

    def __rsub__(self, other: Rationalish) -> "GaussianRational":
        return GaussianRational.of(other) - self

    def __mul__(self, other: Rationalish) -> "GaussianRational":
        o = other if isinstance(other, GaussianRational) else GaussianRational.of(other)
        if self.mn == 0 and o.mn == 0:
            rn, rd = _reduce(self.rn * o.rn, self.rd * o.rd)
            return GaussianRational._raw(rn, rd, 0, 1)
        rn, rd = _reduce(
            self.rn * o.rn * self.md * o.md - self.mn * o.mn * self.rd * o.rd,
            self.rd * o.rd * self.md * o.md)
        mn, md = _reduce(
            self.rn * o.mn * self.md * o.rd + self.mn * o.rn * self.rd * o.md,
            self.rd * o.rd * self.md * o.md)
        return GaussianRational._raw(rn, rd, mn, md)

    __rmul__ = __mul__

    def __truediv__(self, other: Rationalish) -> "GaussianRational":
        o = other if isinstance(other, GaussianRational) else GaussianRational.of(other)
        if o.rn == 0 and o.mn == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return self * o.inverse()

    def __rtruediv__(self, other: Rationalish) -> "GaussianRational":
        return GaussianRational.of(other) / self

    def inverse(self) -> "GaussianRational":
        conj = self.conjugate()
        norm = self * conj  # real and positive
        if norm.rn == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        rn, rd = _reduce(conj.rn * norm.rd, conj.rd * norm.rn)
        mn, md = _reduce(conj.mn * norm.rd, conj.md * norm.rn)
        return GaussianRational._raw(rn, rd, mn, md)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational._raw(-self.rn, self.rd, -self.mn, self.md)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.rn, self.rd, -self.mn, self.md)

    # -- comparison ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return (self.rn == other.rn and self.rd == other.rd
                    and self.mn == other.mn and self.md == other.md)
        if isinstance(other, (int, Fraction)):
            o = GaussianRational(other)
            return self == o
        return NotImplemented

    def __hash__(self):
        return hash((self.rn, self.rd, self.mn, self.md))

    def __bool__(self) -> bool:
        return self.rn != 0 or self.mn != 0

    def is_zero(self) -> bool:
        return self.rn == 0 and self.mn == 0

    # -- textual form --------------------------------------------------

    def render(self) -> str:
        """Canonical text ``[-]p[/q][(+|-)r[/s]i]`` with zero parts suppressed."""
        if self.mn == 0:
            return _render_ratio(self.rn, self.rd)
        real = _render_ratio(self.rn, self.rd)
        imag = _render_ratio(abs(self.mn), self.md)
        sign = "-" if self.mn < 0 else "+"
        return f"{real}{sign}{imag}i"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"GaussianRational({self.render()!r})"


def _render_ratio(n: int, d: int) -> str:
    if d == 1:
        return str(n)
    return f"{n}/{d}"


_SCALAR_RE = _re.compile(
    r"^\s*(?P<re>-?\d+(?:/\d+)?)"
    r"(?:(?P<sign>[+-])(?P<im>\d+(?:/\d+)?)i)?\s*$"
)


def parse_scalar(text: str) -> GaussianRational:
    """Parse the textual grammar ``[-]p[/q][(+|-)r[/s]i]``.

    ``i`` and ``-i`` are accepted as shorthands for ``0+1i`` and ``0-1i``.
    """
    stripped = text.strip()
    if stripped == "i":
        return GaussianRational(0, 1)
    if stripped == "-i":
        return GaussianRational(0, -1)
    match = _SCALAR_RE.match(stripped)
    if match is None:
        raise ValueError(f"not a scalar: {text!r}")
    re_part = Fraction(match.group("re"))
    if match.group("im") is None:
        return GaussianRational(re_part)
    im_part = Fraction(match.group("im"))
    if match.group("sign") == "-":
        im_part = -im_part
    return GaussianRational(re_part, im_part)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
MINUS_ONE = GaussianRational(-1)
I = GaussianRational(0, 1)
HALF = GaussianRational(Fraction(1, 2))
