"""Truncated power series in one variable with exact rational coefficients."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InsufficientPrecision

EXACT = None


def default_precision() -> int:
    return int(os.environ.get("GOODSEMI_PRECISION", "64"))


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


def _min_prec(*ps):
    known = [p for p in ps if p is not None]
    return min(known) if known else None


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Sum of c_k t^k known modulo t^precision (``precision=None``: exact).

    Zero coefficients are never stored and no term sits at or above the
    precision.
    """
    terms: tuple  # sorted (exponent, Fraction) pairs
    precision: int | None = None

    @classmethod
    def make(cls, coeffs: Mapping | Iterable, precision: int | None = None) -> "TruncatedSeries":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc = {}
        for k, v in items:
            k = int(k)
            if k < 0:
                raise ValueError("negative exponent in a power series")
            acc[k] = acc.get(k, Fraction(0)) + _frac(v)
        terms = tuple(sorted((k, v) for k, v in acc.items()
                             if v != 0 and (precision is None or k < precision)))
        return cls(terms, precision)

    @classmethod
    def monomial(cls, k: int, c=1, precision: int | None = None) -> "TruncatedSeries":
        return cls.make({k: c}, precision)

    @classmethod
    def zero(cls, precision: int | None = None) -> "TruncatedSeries":
        return cls((), precision)

    @classmethod
    def one(cls) -> "TruncatedSeries":
        return cls.make({0: 1})

    @classmethod
    def from_list(cls, coeffs: Iterable, precision: int | None = None) -> "TruncatedSeries":
        return cls.make(enumerate(coeffs), precision)

    # -- inspection ----------------------------------------------------------

    def as_dict(self) -> dict:
        return dict(self.terms)

    def coeff(self, k: int) -> Fraction:
        if self.precision is not None and k >= self.precision:
            raise InsufficientPrecision(f"coefficient {k} is beyond precision {self.precision}")
        for e, c in self.terms:
            if e == k:
                return c
            if e > k:
                break
        return Fraction(0)

    def order(self):
        """Least exponent with a nonzero coefficient.

        Returns ``math.inf`` for the exact zero series and None when every
        known coefficient vanishes but the series is only truncated.
        """
        if self.terms:
            return self.terms[0][0]
        return math.inf if self.precision is None else None

    def order_or_raise(self) -> int:
        v = self.order()
        if v is None:
            raise InsufficientPrecision("order is beyond the truncation", precision=self.precision)
        if v == math.inf:
            raise InsufficientPrecision("order of the zero series")
        return v

    def is_exact(self) -> bool:
        return self.precision is None

    def is_zero(self) -> bool:
        return not self.terms and self.precision is None

    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.terms == other.terms and self.precision == other.precision

    def __hash__(self):
        return hash((self.terms, self.precision))

    def __repr__(self):
        body = " + ".join(f"{c}*t^{k}" for k, c in self.terms) or "0"
        tail = "" if self.precision is None else f" + O(t^{self.precision})"
        return f"Series({body}{tail})"

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """Equality of the two series up to the smaller precision."""
        p = _min_prec(self.precision, other.precision)
        a = {k: v for k, v in self.terms if p is None or k < p}
        b = {k: v for k, v in other.terms if p is None or k < p}
        return a == b

    # -- arithmetic ------------------------------------------------------------

    def truncate(self, precision: int | None) -> "TruncatedSeries":
        p = _min_prec(self.precision, precision)
        return TruncatedSeries.make(self.terms, p)

    def __neg__(self):
        return TruncatedSeries(tuple((k, -v) for k, v in self.terms), self.precision)

    def __add__(self, other):
        other = _coerce(other)
        p = _min_prec(self.precision, other.precision)
        return TruncatedSeries.make(self.terms + other.terms, p)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        p = _mul_prec(self, other)
        if not self.terms or not other.terms:
            return TruncatedSeries((), p)
        acc = {}
        for k1, v1 in self.terms:
            if p is not None and k1 + other.terms[0][0] >= p:
                break
            for k2, v2 in other.terms:
                k = k1 + k2
                if p is not None and k >= p:
                    break
                acc[k] = acc.get(k, 0) + v1 * v2
        return TruncatedSeries.make(acc, p)

    __rmul__ = __mul__

    def scale(self, c) -> "TruncatedSeries":
        c = _frac(c)
        if c == 0:
            return TruncatedSeries((), self.precision)
        return TruncatedSeries(tuple((k, v * c) for k, v in self.terms), self.precision)

    def shift(self, n: int) -> "TruncatedSeries":
        """Multiply by t^n (n may be negative when the division is exact)."""
        if self.terms and self.terms[0][0] + n < 0:
            raise ValueError("shift would create a negative exponent")
        p = None if self.precision is None else self.precision + n
        if p is not None and p < 0:
            p = 0
        return TruncatedSeries(tuple((k + n, v) for k, v in self.terms), p)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = TruncatedSeries.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse_unit(self, precision: int) -> "TruncatedSeries":
        """Inverse of a unit (nonzero constant term), to the given precision."""
        p = _min_prec(self.precision, precision)
        c0 = self.coeff(0)
        if c0 == 0:
            raise ValueError("not a unit")
        inv = [Fraction(0)] * p
        inv[0] = 1 / c0
        for n in range(1, p):
            s = Fraction(0)
            for k, v in self.terms:
                if k == 0:
                    continue
                if k > n:
                    break
                s += v * inv[n - k]
            inv[n] = -s / c0
        return TruncatedSeries.from_list(inv, p)

    def divide(self, other: "TruncatedSeries", work_precision: int | None = None) -> "TruncatedSeries":
        """Quotient self/other; the result must again be a power series.

        Exact monomial divisors give exact results.  Otherwise the precision
        is the relative precision of the operands, limited by
        ``work_precision`` when both are exact.
        """
        other = _coerce(other)
        v = other.order()
        if v is None or v == math.inf:
            raise InsufficientPrecision("division by a series of unknown order")
        a = self.order()
        if a == math.inf:
            return TruncatedSeries.zero()
        if a is not None and a < v:
            raise ValueError("quotient is not a power series")
        if a is None:
            # self is zero to its precision
            p = self.precision - v
            if p < 0:
                raise InsufficientPrecision("dividend precision below divisor order")
            return TruncatedSeries((), p)
        if len(other.terms) == 1 and other.precision is None:
            k, c = other.terms[0]
            return self.scale(1 / c).shift(-k)
        rel_self = None if self.precision is None else self.precision - a
        rel_other = None if other.precision is None else other.precision - v
        rel = _min_prec(rel_self, rel_other)
        if rel is None:
            rel = work_precision if work_precision is not None else default_precision()
        unit = other.shift(-v)
        inv = unit.inverse_unit(rel)
        num = self.shift(-v)
        out = num * inv
        return out.truncate((a - v) + rel)


def _mul_prec(f: TruncatedSeries, g: TruncatedSeries):
    if f.is_zero() or g.is_zero():
        return None
    low_f = f.order() if f.terms else f.precision
    low_g = g.order() if g.terms else g.precision
    cands = []
    if f.precision is not None:
        cands.append(f.precision + low_g)
    if g.precision is not None:
        cands.append(g.precision + low_f)
    return min(cands) if cands else None


def _coerce(v) -> TruncatedSeries:
    if isinstance(v, TruncatedSeries):
        return v
    return TruncatedSeries.make({0: v})


def series(value) -> TruncatedSeries:
    """Build a series from a dict, a coefficient list or an existing series."""
    if isinstance(value, TruncatedSeries):
        return value
    if isinstance(value, Mapping):
        return TruncatedSeries.make(value)
    return TruncatedSeries.from_list(value)


def format_fraction(v: Fraction) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def parse_fraction(s) -> Fraction:
    return Fraction(str(s))


def series_to_json(f: TruncatedSeries) -> dict:
    return {"precision": None if f.precision is None else f.precision,
            "terms": [[k, format_fraction(v)] for k, v in f.terms]}


def series_from_json(obj) -> TruncatedSeries:
    p = obj.get("precision")
    return TruncatedSeries.make([(int(k), parse_fraction(v)) for k, v in obj["terms"]],
                                None if p in (None, "inf", "exact") else int(p))
