"""Truncated Laurent series in one parameter t.

Coefficients are exact Fractions or floating (complex) numbers; a series
is tagged exact only while every coefficient is rational.  The field
``truncation_order`` is the first unknown exponent: a series knows its
coefficients for exponents valuation .. truncation_order-1 and prints as
``c_v*t^v + ... + O(t^N)``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SeriesInversionError
from .rings import Polynomial

_EXACT_TYPES = (int, Fraction)


def _is_zero_scalar(c) -> bool:
    return c == 0


class LaurentSeries:
    __slots__ = ("valuation", "coeffs", "truncation_order", "exact")

    def __init__(self, valuation: int, coeffs, truncation_order: int):
        coeffs = list(coeffs)
        if truncation_order - valuation != len(coeffs):
            raise ValueError("coefficient list does not match truncation window")
        # strip leading exact zeros so the valuation is honest
        while coeffs and _is_zero_scalar(coeffs[0]):
            coeffs.pop(0)
            valuation += 1
        exact = all(isinstance(c, _EXACT_TYPES) for c in coeffs)
        if exact:
            coeffs = [Fraction(c) for c in coeffs]
        self.valuation = valuation if coeffs else truncation_order
        self.coeffs = tuple(coeffs)
        self.truncation_order = truncation_order
        self.exact = exact

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, truncation_order: int) -> "LaurentSeries":
        return cls(truncation_order, [], truncation_order)

    @classmethod
    def from_scalar(cls, c, truncation_order: int) -> "LaurentSeries":
        return cls(0, [c] + [0] * (truncation_order - 1), truncation_order) if truncation_order > 0 else cls.zero(truncation_order)

    @classmethod
    def t_power(cls, k: int, truncation_order: int) -> "LaurentSeries":
        if truncation_order <= k:
            return cls.zero(truncation_order)
        return cls(k, [1] + [0] * (truncation_order - k - 1), truncation_order)

    @classmethod
    def from_polynomial(cls, p: Polynomial, truncation_order: int) -> "LaurentSeries":
        """Univariate (Laurent) polynomial in one variable, typically t."""
        if len(p.vars) != 1:
            raise ValueError("series conversion needs a univariate polynomial")
        if p.is_zero:
            return cls.zero(truncation_order)
        val = min(e[0] for e in p.terms)
        coeffs = [Fraction(0)] * (truncation_order - val)
        for (k,), c in p.terms.items():
            if k < truncation_order:
                coeffs[k - val] = c
        return cls(val, coeffs, truncation_order)

    # -- queries ----------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int):
        """Coefficient of t^k; k must be below the truncation order."""
        if k >= self.truncation_order:
            raise IndexError(f"coefficient t^{k} beyond truncation O(t^{self.truncation_order})")
        if k < self.valuation:
            return Fraction(0)
        return self.coeffs[k - self.valuation]

    def leading(self):
        if self.is_zero:
            raise ValueError("zero series has no leading coefficient")
        return self.coeffs[0]

    def __eq__(self, other):
        return (
            isinstance(other, LaurentSeries)
            and self.valuation == other.valuation
            and self.truncation_order == other.truncation_order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.valuation, self.coeffs, self.truncation_order))

    # -- arithmetic ---------------------------------------------------------------

    def truncate(self, order: int) -> "LaurentSeries":
        if order >= self.truncation_order:
            return self
        keep = max(0, order - self.valuation)
        return LaurentSeries(min(self.valuation, order), list(self.coeffs[:keep]), order)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by t^k."""
        return LaurentSeries(self.valuation + k, list(self.coeffs), self.truncation_order + k)

    def __neg__(self):
        return LaurentSeries(self.valuation, [-c for c in self.coeffs], self.truncation_order)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, float, complex)):
            other = LaurentSeries.from_scalar(other, self.truncation_order)
        order = min(self.truncation_order, other.truncation_order)
        if self.is_zero and other.is_zero:
            return LaurentSeries.zero(order)
        val = min(
            [s.valuation for s in (self, other) if not s.is_zero] or [order]
        )
        val = min(val, order)
        coeffs = []
        for k in range(val, order):
            a = self.coeff(k) if k < self.truncation_order else 0
            b = other.coeff(k) if k < other.truncation_order else 0
            coeffs.append(a + b)
        return LaurentSeries(val, coeffs, order)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, float, complex)):
            other = LaurentSeries.from_scalar(other, self.truncation_order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LaurentSeries":
        if _is_zero_scalar(c):
            return LaurentSeries.zero(self.truncation_order)
        return LaurentSeries(self.valuation, [c * x for x in self.coeffs], self.truncation_order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float, complex)):
            return self.scale(other)
        if self.is_zero or other.is_zero:
            # valuation of an (unknown) tail still bounds the product window
            order = min(
                self.truncation_order + other.valuation,
                other.truncation_order + self.valuation,
            )
            return LaurentSeries.zero(order)
        order = min(
            self.truncation_order + other.valuation,
            other.truncation_order + self.valuation,
        )
        val = self.valuation + other.valuation
        n = order - val
        acc = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs):
            if _is_zero_scalar(a):
                continue
            for j, b in enumerate(other.coeffs):
                k = i + j
                if k >= n:
                    break
                acc[k] = acc[k] + a * b
        return LaurentSeries(val, acc, order)

    __rmul__ = __mul__

    def invert(self) -> "LaurentSeries":
        """Multiplicative inverse; requires a nonzero leading coefficient."""
        if self.is_zero:
            raise SeriesInversionError("cannot invert the zero series")
        lead = self.coeffs[0]
        n = len(self.coeffs)
        one = Fraction(1) if self.exact else 1.0
        inv = [one / lead]
        for k in range(1, n):
            s = 0
            for j in range(1, k + 1):
                s = s + self.coeffs[j] * inv[k - j] if j < n else s
            inv.append(-s / lead)
        return LaurentSeries(-self.valuation, inv, -self.valuation + n)

    def __pow__(self, k: int) -> "LaurentSeries":
        if k == 0:
            return LaurentSeries.from_scalar(1, self.truncation_order - self.valuation)
        base = self if k > 0 else self.invert()
        k = abs(k)
        result = base
        for _ in range(k - 1):
            result = result * base
        return result

    # -- printing --------------------------------------------------------------

    def __str__(self):
        if self.is_zero:
            return f"O(t^{self.truncation_order})"
        out = ""
        for i, c in enumerate(self.coeffs):
            if _is_zero_scalar(c):
                continue
            k = self.valuation + i
            body = str(c)
            neg = body.startswith("-")
            if neg:
                body = body[1:]
            if k != 0:
                power = "t" if k == 1 else f"t^{k}"
                body = power if body == "1" else f"{body}*{power}"
            if not out:
                out = f"-{body}" if neg else body
            else:
                out += f" - {body}" if neg else f" + {body}"
        return f"{out} + O(t^{self.truncation_order})"

    def __repr__(self):
        return f"LaurentSeries({self})"


def series_arith(a: LaurentSeries, b: LaurentSeries | None, op: str) -> LaurentSeries:
    """Dispatch add / mul / invert (invert ignores b)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "invert":
        return a.invert()
    raise ValueError(f"unknown series operation {op!r}")


def poly_eval_series(f: Polynomial, env: dict, truncation_order: int) -> LaurentSeries:
    """Evaluate a (Laurent) polynomial at series values for its variables.

    Variables may carry negative exponents; those invert the series value.
    """
    total = LaurentSeries.zero(truncation_order)
    powers = {}
    for e, c in f.terms.items():
        acc = LaurentSeries.from_scalar(c, truncation_order)
        for i, name in enumerate(f.vars):
            if e[i] == 0:
                continue
            key = (name, e[i])
            if key not in powers:
                powers[key] = env[name] ** e[i]
            acc = acc * powers[key]
        total = total + acc
    return total
