"""Parametrized plane curves: one pair (x(t_i), y(t_i)) per branch."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InsufficientPrecision, NotTransversal, ZeroComponent
from .series import TruncatedSeries, series, series_from_json, series_to_json


@dataclass(frozen=True)
class BranchParam:
    x: TruncatedSeries
    y: TruncatedSeries

    @classmethod
    def of(cls, x, y) -> "BranchParam":
        return cls(series(x), series(y))

    def orders(self) -> tuple:
        return (self.x.order(), self.y.order())

    def to_json(self) -> dict:
        return {"x": series_to_json(self.x), "y": series_to_json(self.y)}

    @classmethod
    def from_json(cls, obj) -> "BranchParam":
        return cls(series_from_json(obj["x"]), series_from_json(obj["y"]))


@dataclass(frozen=True)
class CurveParam:
    branches: tuple

    @classmethod
    def of(cls, *pairs) -> "CurveParam":
        return cls(tuple(p if isinstance(p, BranchParam) else BranchParam.of(*p) for p in pairs))

    @property
    def d(self) -> int:
        return len(self.branches)

    def x_values(self) -> tuple:
        return tuple(_order(b.x) for b in self.branches)

    def y_values(self) -> tuple:
        return tuple(_order(b.y) for b in self.branches)

    def to_json(self) -> dict:
        return {"branches": [b.to_json() for b in self.branches]}

    @classmethod
    def from_json(cls, obj) -> "CurveParam":
        return cls(tuple(BranchParam.from_json(b) for b in obj["branches"]))


def _order(f: TruncatedSeries):
    v = f.order()
    if v is None:
        raise InsufficientPrecision("order beyond precision")
    return v


def value_of(f: Sequence[TruncatedSeries]) -> tuple:
    """Componentwise orders of an element of K[[t_1]] x ... x K[[t_d]]."""
    out = []
    for i, comp in enumerate(f):
        v = series(comp).order()
        if v is None or v == math.inf:
            raise ZeroComponent(f"component {i} vanishes to the known precision", component=i)
        out.append(v)
    return tuple(out)


def blow_up_param(c: CurveParam, work_precision: int | None = None) -> CurveParam:
    """Replace y by y/x on every branch (the ring O[y/x])."""
    out = []
    for i, b in enumerate(c.branches):
        vx, vy = b.x.order(), b.y.order()
        if vx is None or vx == math.inf or vx < 1:
            raise NotTransversal("x must have positive order on every branch", branch=i)
        if vy is not None and vy != math.inf and vy < vx:
            raise NotTransversal("y has smaller order than x; apply a coordinate change first",
                                 branch=i, orders=[vx, vy])
        out.append(BranchParam(b.x, b.y.divide(b.x, work_precision)))
    return CurveParam(tuple(out))


def coordinate_change(c: CurveParam, kind: str, lam=0) -> CurveParam:
    """``swap`` exchanges x and y; ``shear`` maps y to y + lam*x."""
    if kind == "swap":
        return CurveParam(tuple(BranchParam(b.y, b.x) for b in c.branches))
    if kind == "shear":
        lam = Fraction(lam)
        return CurveParam(tuple(BranchParam(b.x, b.y + b.x.scale(lam)) for b in c.branches))
    raise ValueError(f"unknown coordinate change {kind!r}")
