"""Truncated Laurent series in one variable t with field coefficients."""

from __future__ import annotations

from typing import Any, Sequence


class PrecisionLost(ArithmeticError):
    """Every known coefficient vanished; the caller must retry deeper."""


class LaurentSeries:
    """t**val * (c0 + c1 t + ...), exact up to t**(val + len(coeffs))."""

    __slots__ = ("zero", "val", "coeffs")

    def __init__(self, zero: Any, val: int, coeffs: Sequence[Any]):
        coeffs = list(coeffs)
        while coeffs and not coeffs[0]:
            coeffs.pop(0)
            val += 1
        self.zero = zero
        self.val = val
        self.coeffs = coeffs

    @classmethod
    def constant(cls, value, zero, precision: int) -> LaurentSeries:
        return cls(zero, 0, [value] + [zero] * (precision - 1))

    @classmethod
    def variable(cls, zero, one, precision: int) -> LaurentSeries:
        return cls(zero, 1, [one] + [zero] * (precision - 2))

    @property
    def precision(self) -> int:
        """Absolute precision: coefficients of t**k are known for k < precision."""
        return self.val + len(self.coeffs)

    def coeff(self, k: int):
        if k < self.val or k >= self.precision:
            return self.zero
        return self.coeffs[k - self.val]

    def leading(self):
        if not self.coeffs:
            raise PrecisionLost(f"series vanishes to precision {self.precision}")
        return self.coeffs[0]

    def order(self) -> int:
        self.leading()
        return self.val

    def _coerce(self, other) -> LaurentSeries:
        if isinstance(other, LaurentSeries):
            return other
        return LaurentSeries.constant(self.zero + other, self.zero, max(self.precision, 1))

    def __add__(self, other) -> LaurentSeries:
        other = self._coerce(other)
        top = min(self.precision, other.precision)
        low = min(self.val, other.val)
        return LaurentSeries(self.zero, low, [self.coeff(k) + other.coeff(k) for k in range(low, top)])

    __radd__ = __add__

    def __neg__(self) -> LaurentSeries:
        return LaurentSeries(self.zero, self.val, [-c for c in self.coeffs])

    def __sub__(self, other) -> LaurentSeries:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> LaurentSeries:
        return self._coerce(other) - self

    def __mul__(self, other) -> LaurentSeries:
        if not isinstance(other, LaurentSeries):
            return LaurentSeries(self.zero, self.val, [c * other for c in self.coeffs])
        length = min(len(self.coeffs), len(other.coeffs))
        out = []
        for k in range(length):
            acc = self.zero
            for i in range(k + 1):
                acc = acc + self.coeffs[i] * other.coeffs[k - i]
            out.append(acc)
        return LaurentSeries(self.zero, self.val + other.val, out)

    __rmul__ = __mul__

    def inverse(self) -> LaurentSeries:
        a0 = self.leading()
        inv0 = 1 / a0
        out = [inv0]
        for k in range(1, len(self.coeffs)):
            acc = self.zero
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * out[k - j]
            out.append(-acc * inv0)
        return LaurentSeries(self.zero, -self.val, out)

    def __truediv__(self, other) -> LaurentSeries:
        if not isinstance(other, LaurentSeries):
            return LaurentSeries(self.zero, self.val, [c / other for c in self.coeffs])
        return self * other.inverse()

    def __rtruediv__(self, other) -> LaurentSeries:
        return self._coerce(other) * self.inverse()

    def __pow__(self, exp: int) -> LaurentSeries:
        if exp < 0:
            return self.inverse() ** (-exp)
        result = LaurentSeries.constant(self.zero + 1, self.zero, len(self.coeffs) or 1)
        for _ in range(exp):
            result = result * self
        return result

    def __bool__(self) -> bool:
        # only called on genuinely nonzero quantities; a vanishing prefix means
        # the precision was too small to decide
        if not self.coeffs:
            raise PrecisionLost(f"cannot decide zero at precision {self.precision}")
        return True

    def __repr__(self) -> str:
        return f"LaurentSeries(val={self.val}, terms={len(self.coeffs)})"


def sqrt_series(c: Sequence[Any], root0, zero, precision: int) -> LaurentSeries:
    """Power series e with e**2 = sum c_j t**j and e(0) = root0 (c_0 = root0**2 != 0)."""
    e = [root0]
    two_e0 = root0 * 2
    for j in range(1, precision):
        acc = c[j] if j < len(c) else zero
        for i in range(1, j):
            acc = acc - e[i] * e[j - i]
        e.append(acc / two_e0)
    return LaurentSeries(zero, 0, e)
