"""Exact multivariate (Laurent) polynomials over the rationals.

Monomials are plain int tuples (negative entries allowed for Laurent
monomials).  Polynomials map exponent tuples to nonzero Fractions and are
immutable after construction.  Term orders compare by an optional weight
vector first (max convention, as used by the Groebner engine) and then by
a fixed global tiebreak, degree-then-lexicographic on exponent tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DimensionMismatch, PolyParseError

Mono = tuple  # exponent tuple


def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Mono, b: Mono) -> Mono:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Mono, b: Mono) -> bool:
    """True if the monomial a divides b (all exponents <=)."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: Mono) -> int:
    return sum(a)


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def grlex_key(e: Mono):
    """Sort key for degree-then-lexicographic order (larger key = larger)."""
    return (sum(e), e)


class TermOrder:
    """Monomial order used by the Groebner engine: leading term = max key.

    ``weight`` prepends a weight comparison (max convention); it is only a
    genuine global order on homogeneous input, which is the only place the
    engine uses it.  ``blocks`` gives an elimination order: earlier blocks
    dominate, degree-then-lex within each block.
    """

    __slots__ = ("nvars", "weight", "blocks")

    def __init__(self, nvars, weight=None, blocks=None):
        self.nvars = nvars
        self.weight = tuple(weight) if weight is not None else None
        if blocks is not None:
            blocks = tuple(tuple(b) for b in blocks)
            seen = [i for blk in blocks for i in blk]
            if sorted(seen) != list(range(nvars)):
                raise ValueError("blocks must partition the variables")
        self.blocks = blocks

    def key(self, e: Mono):
        parts = []
        if self.weight is not None:
            parts.append(dot(self.weight, e))
        if self.blocks is None:
            parts.append(sum(e))
            parts.append(e)
        else:
            for blk in self.blocks:
                sub = tuple(e[i] for i in blk)
                parts.append(sum(sub))
                parts.append(sub)
        return tuple(parts)

    def is_global(self) -> bool:
        """True if 1 is the smallest monomial (termination is unconditional)."""
        return self.weight is None or all(w >= 0 for w in self.weight)


def grlex(nvars) -> TermOrder:
    return TermOrder(nvars)


@dataclass(frozen=True)
class WeightOrder:
    """Weight vector with the fixed global tiebreak, min convention.

    Smaller compares as "more initial": first by w-weight of the exponent
    vector, ties broken degree-then-lexicographically.
    """

    weight: tuple
    tiebreak: str = "grlex"


def weight_compare(a: Mono, b: Mono, order: WeightOrder) -> int:
    """-1 if a is more initial than b under ``order``, 0 if equal, else 1."""
    if len(a) != len(b) or len(a) != len(order.weight):
        raise DimensionMismatch(
            f"monomial/weight lengths differ: {len(a)}, {len(b)}, {len(order.weight)}"
        )
    ka = (dot(order.weight, a), grlex_key(a))
    kb = (dot(order.weight, b), grlex_key(b))
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


class Polynomial:
    """Finite map from exponent tuples to nonzero rational coefficients."""

    __slots__ = ("terms", "vars")

    def __init__(self, terms, vars):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for e, c in terms.items():
            if len(e) != n:
                raise DimensionMismatch(
                    f"exponent tuple {e} does not match {n} variables"
                )
            c = _as_fraction(c)
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, vars):
        return cls({}, vars)

    @classmethod
    def constant(cls, c, vars):
        vars = tuple(vars)
        return cls({(0,) * len(vars): _as_fraction(c)}, vars)

    @classmethod
    def variable(cls, name, vars):
        vars = tuple(vars)
        i = vars.index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls({tuple(e): Fraction(1)}, vars)

    # -- basic queries ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def is_term(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def constant_coeff(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def support_vars(self):
        """Indices of variables actually appearing."""
        used = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x != 0:
                    used.add(i)
        return used

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.vars, tuple(sorted(self.terms.items()))))

    def __bool__(self):
        return bool(self.terms)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.vars != other.vars:
            raise DimensionMismatch(
                f"polynomials over different variables: {self.vars} vs {other.vars}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.vars)
        self._check(other)
        res = dict(self.terms)
        for e, c in other.terms.items():
            s = res.get(e, Fraction(0)) + c
            if s:
                res[e] = s
            else:
                res.pop(e, None)
        out = Polynomial.__new__(Polynomial)
        out.terms = res
        out.vars = self.vars
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Polynomial.__new__(Polynomial)
        out.terms = {e: -c for e, c in self.terms.items()}
        out.vars = self.vars
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.vars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return Polynomial.zero(self.vars)
            out = Polynomial.__new__(Polynomial)
            out.terms = {e: k * c for e, k in self.terms.items()}
            out.vars = self.vars
            return out
        self._check(other)
        res = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = mono_mul(e1, e2)
                s = res.get(e, Fraction(0)) + c1 * c2
                if s:
                    res[e] = s
                else:
                    res.pop(e, None)
        out = Polynomial.__new__(Polynomial)
        out.terms = res
        out.vars = self.vars
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial.constant(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def mul_term(self, e: Mono, c) -> "Polynomial":
        c = _as_fraction(c)
        out = Polynomial.__new__(Polynomial)
        out.terms = {mono_mul(m, e): k * c for m, k in self.terms.items()} if c else {}
        out.vars = self.vars
        return out

    # -- leading data --------------------------------------------------------

    def leading(self, order: TermOrder):
        """(monomial, coefficient) of the order-largest term."""
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def monic(self, order: TermOrder) -> "Polynomial":
        _, c = self.leading(order)
        return self * (Fraction(1) / c)

    # -- calculus / substitution ---------------------------------------------

    def derivative(self, var) -> "Polynomial":
        i = self.vars.index(var) if isinstance(var, str) else var
        res = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            d = list(e)
            d[i] -= 1
            res[tuple(d)] = c * e[i]
        return Polynomial(res, self.vars)

    def evaluate(self, values: dict):
        """Evaluate at scalars (Fraction / int / float / complex)."""
        total = 0
        idx = {name: values[name] for name in self.vars if name in values}
        missing = [name for name in self.vars if name not in values]
        for e, c in self.terms.items():
            for i, name in enumerate(self.vars):
                if e[i] != 0 and name in missing:
                    raise KeyError(f"no value for variable {name}")
            val = c if isinstance(c, Fraction) else Fraction(c)
            acc = val
            for i, name in enumerate(self.vars):
                if e[i]:
                    acc = acc * idx[name] ** e[i]
            total = total + acc
        return total

    def subs_polys(self, mapping: dict) -> "Polynomial":
        """Substitute polynomials (over a common ring) for variables.

        Variables not in ``mapping`` must appear in the target ring under
        the same name.
        """
        some = next(iter(mapping.values()))
        tvars = some.vars
        out = Polynomial.zero(tvars)
        for e, c in self.terms.items():
            part = Polynomial.constant(c, tvars)
            for i, name in enumerate(self.vars):
                if e[i] == 0:
                    continue
                if name in mapping:
                    part = part * mapping[name] ** e[i]
                else:
                    part = part * Polynomial.variable(name, tvars) ** e[i]
            out = out + part
        return out

    def rename(self, new_vars) -> "Polynomial":
        new_vars = tuple(new_vars)
        if len(new_vars) != len(self.vars):
            raise DimensionMismatch("rename must preserve variable count")
        return Polynomial(dict(self.terms), new_vars)

    def extend_ring(self, vars) -> "Polynomial":
        """Reinterpret in a larger ring containing all current variables."""
        vars = tuple(vars)
        pos = [vars.index(v) for v in self.vars]
        n = len(vars)
        res = {}
        for e, c in self.terms.items():
            d = [0] * n
            for i, x in enumerate(e):
                d[pos[i]] = x
            res[tuple(d)] = c
        return Polynomial(res, vars)

    def restrict_ring(self, vars) -> "Polynomial":
        """Project to a subring; dropped variables must not appear."""
        vars = tuple(vars)
        pos = {v: i for i, v in enumerate(self.vars)}
        keep = [pos[v] for v in vars]
        dropped = set(range(len(self.vars))) - set(keep)
        res = {}
        for e, c in self.terms.items():
            if any(e[i] for i in dropped):
                raise ValueError("polynomial involves a dropped variable")
            res[tuple(e[i] for i in keep)] = c
        return Polynomial(res, vars)

    # -- Laurent / weight utilities -------------------------------------------

    def laurent_normalize(self) -> "Polynomial":
        """Clear negative exponents by multiplying with a monomial (a unit
        on the torus); returns self when already polynomial."""
        if not self.terms:
            return self
        n = len(self.vars)
        shift = [0] * n
        for e in self.terms:
            for i, x in enumerate(e):
                if x < shift[i]:
                    shift[i] = x
        if all(s == 0 for s in shift):
            return self
        up = tuple(-s for s in shift)
        return Polynomial({mono_mul(e, up): c for e, c in self.terms.items()}, self.vars)

    def weight_initial(self, w) -> "Polynomial":
        """Initial form: the terms of minimal w-weight (min convention)."""
        if not self.terms:
            return self
        m = min(dot(w, e) for e in self.terms)
        return Polynomial(
            {e: c for e, c in self.terms.items() if dot(w, e) == m}, self.vars
        )

    def apply_exponent_map(self, matrix) -> "Polynomial":
        """Monomial change of coordinates: exponent e maps to matrix^T e.

        ``matrix`` is a square integer matrix whose columns give the
        exponent vectors of the old variables in the new ones.  The result
        may be Laurent; callers normalize as needed.
        """
        n = len(self.vars)
        res = {}
        for e, c in self.terms.items():
            d = tuple(sum(matrix[i][j] * e[i] for i in range(n)) for j in range(n))
            s = res.get(d, Fraction(0)) + c
            if s:
                res[d] = s
            else:
                res.pop(d, None)
        return Polynomial(res, self.vars)

    def content(self) -> Fraction:
        """Positive rational c with self/c integral, primitive, sign of lead kept."""
        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    # -- printing -------------------------------------------------------------

    def _term_str(self, e, c):
        parts = []
        for name, x in zip(self.vars, e):
            if x == 1:
                parts.append(name)
            elif x != 0:
                parts.append(f"{name}^{x}")
        mono = "*".join(parts)
        if not mono:
            return str(c)
        if c == 1:
            return mono
        if c == -1:
            return f"-{mono}"
        return f"{c}*{mono}"

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)
        out = self._term_str(*items[0])
        for e, c in items[1:]:
            s = self._term_str(e, c)
            if s.startswith("-"):
                out += " - " + s[1:]
            else:
                out += " + " + s
        return out

    def __repr__(self):
        return f"Polynomial({self})"

    # -- parsing ----------------------------------------------------------------

    @classmethod
    def parse(cls, text: str, vars) -> "Polynomial":
        return _Parser(text, tuple(vars)).parse()


class _Parser:
    """Recursive-descent parser for +, -, *, ^, parentheses and rational
    literals over declared variable names."""

    def __init__(self, text, vars):
        self.text = text
        self.vars = vars
        self.pos = 0

    def error(self, msg):
        raise PolyParseError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Polynomial:
        result = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error(f"unexpected character {self.text[self.pos]!r}")
        return result

    def expr(self) -> Polynomial:
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            result = -self.term()
        elif ch == "+":
            self.pos += 1
            result = self.term()
        else:
            result = self.term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                result = result + self.term()
            elif ch == "-":
                self.pos += 1
                result = result - self.term()
            else:
                return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self.peek() == "*":
            self.pos += 1
            result = result * self.factor()
        return result

    def factor(self) -> Polynomial:
        base = self.base()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            neg = False
            if self.peek() == "-":
                neg = True
                self.pos += 1
            n = self.integer()
            if neg:
                if not base.is_term():
                    self.error("negative exponent on a non-monomial")
                ((e, c),) = base.terms.items()
                if abs(c) != 1:
                    self.error("negative exponent needs unit coefficient")
                return Polynomial({tuple(-n * x for x in e): c**n}, self.vars)
            return base**n
        return base

    def base(self) -> Polynomial:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return inner
        if ch == "-":
            self.pos += 1
            return -self.base()
        if ch.isdigit():
            num = self.integer()
            if self.peek() == "/":
                self.pos += 1
                den = self.integer()
                if den == 0:
                    self.error("zero denominator")
                return Polynomial.constant(Fraction(num, den), self.vars)
            return Polynomial.constant(num, self.vars)
        if ch.isalpha() or ch == "_":
            name = self.name()
            if name not in self.vars:
                self.error(f"undeclared variable {name!r}")
            return Polynomial.variable(name, self.vars)
        self.error("expected a number, variable or '('")

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start : self.pos])

    def name(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start : self.pos]


def poly_parse(text: str, vars) -> Polynomial:
    """Parse an expression into a canonical term map (round-trips through str)."""
    return Polynomial.parse(text, vars)
