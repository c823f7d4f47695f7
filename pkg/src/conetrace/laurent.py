"""Laurent data of a meromorphic function at a point (simple poles only)."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["LaurentValue"]


@dataclass(frozen=True)
class LaurentValue:
    r"""Coefficients of :math:`f(s) = \mathrm{res1}/(s-s_0) + \mathrm{res0} + O(s-s_0)`.

    ``pole_order`` is derived: 1 when ``res1 != 0`` and 0 otherwise.
    """

    point: float
    res1: float
    res0: float

    def __post_init__(self):
        if not (math.isfinite(self.res1) and math.isfinite(self.res0)):
            raise ArithmeticError(f"non-finite Laurent data at s={self.point}")

    @property
    def pole_order(self) -> int:
        return 0 if self.res1 == 0.0 else 1

    @classmethod
    def regular(cls, point: float, value: float) -> "LaurentValue":
        return cls(float(point), 0.0, float(value))

    def __add__(self, other: "LaurentValue") -> "LaurentValue":
        if not isinstance(other, LaurentValue):
            return NotImplemented
        if self.point != other.point:
            raise ValueError("cannot add Laurent data at different points")
        return LaurentValue(self.point, self.res1 + other.res1, self.res0 + other.res0)

    def scale(self, c: float) -> "LaurentValue":
        return LaurentValue(self.point, c * self.res1, c * self.res0)

    def to_dict(self) -> dict:
        return {"point": self.point, "res1": self.res1, "res0": self.res0,
                "pole_order": self.pole_order}
