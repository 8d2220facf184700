"""Angles given either exactly, as rational multiples of pi, or as raw radians.

Text syntax: ``p/qpi`` (``1/4pi``, ``-3/4pi``, ``pi``, ``2pi``) or ``rad:<float>``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidParameter

_PI_RE = re.compile(r"^\s*([+-]?)\s*(\d*)\s*(?:/\s*(\d+))?\s*\*?\s*pi\s*$")


@dataclass(frozen=True)
class Angle:
    """An angle; ``pi_fraction`` is set when the value is an exact rational multiple of pi."""

    radians: float
    pi_fraction: Fraction | None = None

    @classmethod
    def pi(cls, numerator: int | Fraction, denominator: int = 1) -> Angle:
        frac = Fraction(numerator) / denominator
        return cls(float(frac) * math.pi, frac)

    @classmethod
    def rad(cls, value: float) -> Angle:
        return cls(float(value), None)

    @classmethod
    def parse(cls, text: str) -> Angle:
        text = text.strip()
        if text.startswith("rad:"):
            try:
                return cls.rad(float(text[4:]))
            except ValueError as exc:
                raise InvalidParameter(f"bad radian value {text!r}") from exc
        m = _PI_RE.match(text)
        if m is None:
            raise InvalidParameter(f"cannot parse angle {text!r}; use p/qpi or rad:<x>")
        sign, num, den = m.groups()
        frac = Fraction(int(num) if num else 1, int(den) if den else 1)
        if sign == "-":
            frac = -frac
        return cls.pi(frac)

    def __float__(self) -> float:
        return self.radians

    def __neg__(self) -> Angle:
        return Angle(-self.radians, None if self.pi_fraction is None else -self.pi_fraction)

    def scaled(self, k: int | Fraction) -> Angle:
        if self.pi_fraction is not None:
            return Angle.pi(self.pi_fraction * k)
        return Angle.rad(self.radians * float(k))

    def shifted_pi(self, k: int | Fraction) -> Angle:
        """Return ``self + k*pi``."""
        if self.pi_fraction is not None:
            return Angle.pi(self.pi_fraction + k)
        return Angle.rad(self.radians + float(k) * math.pi)

    def principal(self) -> Angle:
        """Representative in (-pi, pi]."""
        if self.pi_fraction is not None:
            f = self.pi_fraction % 2
            if f > 1:
                f -= 2
            return Angle.pi(f)
        r = math.remainder(self.radians, 2 * math.pi)
        if r == -math.pi:
            r = math.pi
        return Angle.rad(r)

    def unit(self) -> complex:
        """exp(i*angle), exact on the axes and diagonals when the fraction is known."""
        if self.pi_fraction is not None:
            f = self.pi_fraction % 2
            exact = {Fraction(0): 1, Fraction(1, 2): 1j, Fraction(1): -1, Fraction(3, 2): -1j}
            if f in exact:
                return complex(exact[f])
        return complex(math.cos(self.radians), math.sin(self.radians))

    def text(self) -> str:
        if self.pi_fraction is None:
            return f"rad:{self.radians!r}"
        f = self.pi_fraction
        if f == 0:
            return "0pi"
        if f.denominator == 1:
            return f"{f.numerator}pi"
        return f"{f.numerator}/{f.denominator}pi"

    def __str__(self) -> str:
        return self.text()


def as_angle(value: Angle | float | int | str) -> Angle:
    if isinstance(value, Angle):
        return value
    if isinstance(value, str):
        return Angle.parse(value)
    return Angle.rad(float(value))
