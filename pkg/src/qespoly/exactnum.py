"""Exact arithmetic: rationals, one adjoined square root, dense polynomials,
rational functions, and Sturm-sequence real root isolation.

Scalars are either ``fractions.Fraction`` or :class:`QuadExt`.  A
``QuadExt`` whose surd part vanishes is always collapsed back to a
``Fraction`` so that equality between the two kinds is unambiguous.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction


class MixedRadicandError(ValueError):
    """Two operands carry different adjoined square roots."""


def as_rational(value) -> Fraction:
    """Parse an exact rational from an int, Fraction or string like ``"-3/4"``.

    Floats are refused on purpose: every parameter in this package is exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.fullmatch(text):
            raise ValueError(f"not an exact rational: {value!r}")
        try:
            return Fraction(text)
        except ZeroDivisionError as exc:
            raise ValueError(f"zero denominator: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


_RATIONAL_RE = re.compile(r"[+-]?\d+(/\d+)?")


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


class QuadExt:
    """``rat + surd*sqrt(radicand)`` with rational parts and a non-square radicand."""

    __slots__ = ("rat", "surd", "radicand")

    def __init__(self, rat, surd, radicand):
        self.rat = Fraction(rat)
        self.surd = Fraction(surd)
        self.radicand = Fraction(radicand)
        if self.radicand < 0:
            raise ValueError("radicand must be non-negative")

    @staticmethod
    def make(rat, surd, radicand):
        """Normalising constructor: returns a Fraction when the surd vanishes."""
        rat, surd, radicand = Fraction(rat), Fraction(surd), Fraction(radicand)
        if surd == 0:
            return rat
        root = rational_sqrt(radicand)
        if root is not None:
            return rat + surd * root
        return QuadExt(rat, surd, radicand)

    @staticmethod
    def sqrt(radicand):
        """sqrt(radicand) in its natural context."""
        return QuadExt.make(0, 1, radicand)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.radicand != self.radicand:
                raise MixedRadicandError(
                    f"sqrt({self.radicand}) mixed with sqrt({other.radicand})")
            return other.rat, other.surd
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadExt.make(self.rat + c[0], self.surd + c[1], self.radicand)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.rat, -self.surd, self.radicand)

    def __pos__(self):
        return self

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadExt.make(self.rat - c[0], self.surd - c[1], self.radicand)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadExt.make(c[0] - self.rat, c[1] - self.surd, self.radicand)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        return QuadExt.make(self.rat * a + self.surd * b * self.radicand,
                            self.rat * b + self.surd * a, self.radicand)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.rat * self.rat - self.surd * self.surd * self.radicand

    def conjugate(self):
        return QuadExt(self.rat, -self.surd, self.radicand)

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic extension")
        return QuadExt.make(self.rat / n, -self.surd / n, self.radicand)

    def __truediv__(self, other):
        if isinstance(other, QuadExt):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadExt.make(self.rat / other, self.surd / other, self.radicand)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (self.inverse()) ** (-k)
        result: Scalar = Fraction(1)
        base: Scalar = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return (self.rat, self.surd, self.radicand) == (other.rat, other.surd, other.radicand)
        if isinstance(other, (int, Fraction)):
            return False  # normalised values always carry a surd
        return NotImplemented

    def __hash__(self):
        return hash((self.rat, self.surd, self.radicand))

    def __bool__(self):
        return True

    def __float__(self):
        return float(self.rat) + float(self.surd) * math.sqrt(self.radicand)

    def sign(self) -> int:
        """Exact sign of the real number represented."""
        a, b = self.rat, self.surd
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sa == sb or sa == 0:
            return sb
        if sb == 0:
            return sa
        # opposite signs: compare a^2 with b^2 r
        lhs, rhs = a * a, b * b * self.radicand
        return sa if lhs > rhs else sb

    def __lt__(self, other):
        return sign(self - other) < 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __repr__(self):
        return f"QuadExt({self.rat}, {self.surd}, {self.radicand})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, QuadExt]


def sign(x) -> int:
    if isinstance(x, QuadExt):
        return x.sign()
    return (x > 0) - (x < 0)


def to_scalar(x) -> Scalar:
    if isinstance(x, (Fraction, QuadExt)):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def inv(x: Scalar) -> Scalar:
    if isinstance(x, QuadExt):
        return x.inverse()
    if x == 0:
        raise ZeroDivisionError("division by zero")
    return 1 / Fraction(x)


def is_rational(x) -> bool:
    return not isinstance(x, QuadExt)


def format_scalar(x: Scalar) -> str:
    if isinstance(x, QuadExt):
        parts = []
        if x.rat:
            parts.append(str(x.rat))
        s = "" if x.surd == 1 else ("-" if x.surd == -1 else f"{x.surd}*")
        text = f"{s}sqrt({x.radicand})"
        if parts and not text.startswith("-"):
            text = "+" + text
        return "".join(parts) + text
    return str(x)


def sqrt_in_context(value, radicand) -> Scalar:
    """sqrt(value) expressed in Q(sqrt(radicand)); fails if it leaves the field."""
    value, radicand = Fraction(value), Fraction(radicand)
    root = rational_sqrt(value)
    if root is not None:
        return root
    if radicand == 0:
        raise ValueError(f"sqrt({value}) is irrational and no surd is available")
    ratio = rational_sqrt(value / radicand)
    if ratio is None:
        raise MixedRadicandError(f"sqrt({value}) is not in Q(sqrt({radicand}))")
    return QuadExt.make(0, ratio, radicand)


# ---------------------------------------------------------------------------
# dense univariate polynomials

NEG_INF = float("-inf")


class Poly:
    """Immutable dense polynomial; ``coeffs[i]`` multiplies ``var**i``."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_scalar(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)
        self._hash = None

    # constructors ------------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        p = cls([1])
        for r in roots:
            p = p * cls([-to_scalar(r), 1])
        return p

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    # basic properties ---------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self) -> Scalar:
        if len(self.coeffs) > 1:
            raise ValueError("polynomial is not constant")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def is_rational(self) -> bool:
        return all(is_rational(c) for c in self.coeffs)

    def __getitem__(self, i: int) -> Scalar:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    # arithmetic ---------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, QuadExt)) and not isinstance(other, bool):
            return Poly([other])
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([a[i] + b[i] if i < len(b) else a[i] for i in range(len(a))])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, Poly):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Poly()
            out = [Fraction(0)] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if ai == 0:
                    continue
                for j, bj in enumerate(b):
                    out[i + j] = out[i + j] + ai * bj
            return Poly(out)
        if isinstance(other, (int, Fraction, QuadExt)) and not isinstance(other, bool):
            if other == 0:
                return Poly()
            return Poly([c * other for c in self.coeffs])
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result, base = Poly([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, QuadExt)) and not isinstance(other, bool):
            return self * inv(to_scalar(other))
        return NotImplemented

    def __divmod__(self, other: "Poly"):
        if not isinstance(other, Poly):
            other = Poly([other])
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        if len(rem) - 1 < dq:
            return Poly(), self
        inv_lc = inv(other.lc)
        quot = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            c = c * inv_lc
            quot[k - dq] = c
            for i, oc in enumerate(other.coeffs):
                rem[k - dq + i] = rem[k - dq + i] - c * oc
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exquo(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, QuadExt)) and not isinstance(other, bool):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    # calculus / evaluation ---------------------------------------------
    def __call__(self, x):
        acc = 0 * x if isinstance(x, Poly) else None
        if acc is None:
            acc = Fraction(0) if isinstance(x, (int, Fraction, QuadExt)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if not isinstance(x, float) else float(c))
        return acc

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * inv(self.lc)

    def map_coeffs(self, fn) -> "Poly":
        return Poly(fn(c) for c in self.coeffs)

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def format(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = format_scalar(c)
            if isinstance(c, QuadExt):
                cs = f"({cs})"
            if i == 0:
                body = cs
            else:
                mon = var if i == 1 else f"{var}^{i}"
                if c == 1:
                    body = mon
                elif c == -1:
                    body = "-" + mon
                else:
                    body = f"{cs}*{mon}"
            terms.append(body)
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    __str__ = format


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


def poly_arith(a: Poly, b: Poly, kind: str):
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "divmod":
        return divmod(a, b)
    if kind == "gcd":
        return poly_gcd(a, b)
    raise ValueError(f"unknown polynomial operation {kind!r}")


def squarefree_part(p: Poly) -> Poly:
    g = poly_gcd(p, p.derivative())
    return p.exquo(g) if g.degree > 0 else p


# ---------------------------------------------------------------------------
# Sturm sequences and real root isolation

def _require_rational(p: Poly) -> Poly:
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    if not p.is_rational():
        q = p.monic()
        if not q.is_rational():
            raise ValueError("root isolation needs rational coefficients")
        return q
    return p


def sturm_sequence(p: Poly) -> list[Poly]:
    p = _require_rational(p)
    seq = [p, p.derivative()]
    while seq[-1]:
        r = -(seq[-2] % seq[-1])
        if r:
            r = r * (1 / abs(r.lc))  # positive rescaling keeps the sign pattern
        seq.append(r)
    return seq[:-1]


def _sign_changes(seq: Sequence[Poly], x: Fraction) -> int:
    changes, prev = 0, 0
    for q in seq:
        s = sign(q(x))
        if s == 0:
            continue
        if prev and s != prev:
            changes += 1
        prev = s
    return changes


def count_real_roots(p: Poly, lo: Fraction, hi: Fraction, seq=None) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    seq = seq if seq is not None else sturm_sequence(squarefree_part(_require_rational(p)))
    return _sign_changes(seq, Fraction(lo)) - _sign_changes(seq, Fraction(hi))


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: every real root lies in (-B, B)."""
    p = _require_rational(p)
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def real_roots(p: Poly, precision=Fraction(1, 2 ** 20)) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (lo, hi], each holding exactly one distinct real root.

    Intervals are sorted, each of width at most ``precision``; a root
    that is hit exactly is returned as a degenerate interval (r, r).
    """
    # the squarefree part has the same roots, all simple, so sign counts stay
    # exact even when a bisection point lands on a repeated root
    p = squarefree_part(_require_rational(p))
    precision = Fraction(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    if p.degree == 0:
        return []
    seq = sturm_sequence(p)
    bound = root_bound(p)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound, count_real_roots(p, -bound, bound, seq))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1 and hi - lo <= precision:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if n == 1 and p(mid) == 0:
            out.append((mid, mid))
            continue
        left = count_real_roots(p, lo, mid, seq)
        stack.append((mid, hi, n - left))
        stack.append((lo, mid, left))
    return sorted(out)


def root_values(p: Poly, precision=Fraction(1, 2 ** 50)) -> list[float]:
    """Midpoints of isolating intervals as floats."""
    return [float((lo + hi) / 2) for lo, hi in real_roots(p, precision)]


# ---------------------------------------------------------------------------
# rational functions

class RationalFunction:
    """``num/den`` with ``gcd(num, den) = 1`` and monic ``den``."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced: bool = False):
        num = num if isinstance(num, Poly) else Poly([num])
        den = Poly([1]) if den is None else (den if isinstance(den, Poly) else Poly([den]))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly([1])
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num.exquo(g), den.exquo(g)
            c = den.lc
            if c != 1:
                num, den = num * inv(c), den * inv(c)
        self.num, self.den = num, den

    @classmethod
    def poly(cls, p) -> "RationalFunction":
        return cls(p, None, _reduced=True)

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction.poly(other)
        if isinstance(other, (int, Fraction, QuadExt)) and not isinstance(other, bool):
            return RationalFunction.poly(Poly([other]))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise ZeroDivisionError("rational function division by zero")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(1) / (self ** (-k))
        return RationalFunction(self.num ** k, self.den ** k)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def derivative(self) -> "RationalFunction":
        return RationalFunction(self.num.derivative() * self.den - self.num * self.den.derivative(),
                                self.den * self.den)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def laurent(self) -> dict[int, Scalar] | None:
        """Exponent -> coefficient if the denominator is a pure power of x."""
        d = self.den.degree
        if any(c != 0 for c in self.den.coeffs[:-1]):
            return None
        return {i - d: c for i, c in enumerate(self.num.coeffs) if c != 0}

    def __repr__(self):
        return f"RationalFunction({self.num.format()}, {self.den.format()})"

    def format(self, var="x") -> str:
        if self.den.degree == 0:
            return self.num.format(var)
        return f"({self.num.format(var)})/({self.den.format(var)})"


# ---------------------------------------------------------------------------
# small exact linear algebra over commutative rings with exact division

def det(matrix: Sequence[Sequence]) -> object:
    """Fraction-free Bareiss determinant; entries may be scalars or Polys."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    m = [list(row) for row in matrix]
    one = Poly([1]) if any(isinstance(e, Poly) for row in m for e in row) else Fraction(1)
    if isinstance(one, Poly):
        m = [[e if isinstance(e, Poly) else Poly([e]) for e in row] for row in m]
    prev = one
    sgn = 1
    for k in range(n - 1):
        if _is_zero(m[k][k]):
            for i in range(k + 1, n):
                if not _is_zero(m[i][k]):
                    m[k], m[i] = m[i], m[k]
                    sgn = -sgn
                    break
            else:
                return one * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.exquo(prev) if isinstance(num, Poly) else num / prev
        prev = m[k][k]
    return m[n - 1][n - 1] * sgn


def _is_zero(e) -> bool:
    return e.is_zero() if isinstance(e, Poly) else e == 0


def adjugate(matrix: Sequence[Sequence]) -> list[list]:
    n = len(matrix)
    if n == 1:
        e = matrix[0][0]
        return [[Poly([1]) if isinstance(e, Poly) else Fraction(1)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[matrix[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = det(minor)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj


def charpoly(matrix: Sequence[Sequence]) -> Poly:
    """det(E*I - M) as a polynomial in E."""
    n = len(matrix)
    shifted = [[(Poly.x() if i == j else Poly()) - Poly([matrix[i][j]]) for j in range(n)]
               for i in range(n)]
    return det(shifted)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = a[i][0] * b[0][j]
            for k in range(1, inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def solve_linear(a: Sequence[Sequence[Scalar]], b: Sequence) -> list:
    """Solve a square non-singular scalar system; ``b`` entries may be any
    module elements supporting scalar multiplication (e.g. Poly)."""
    n = len(a)
    m = [list(row) for row in a]
    rhs = list(b)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[k], m[piv] = m[piv], m[k]
        rhs[k], rhs[piv] = rhs[piv], rhs[k]
        ik = inv(m[k][k])
        m[k] = [e * ik for e in m[k]]
        rhs[k] = rhs[k] * ik
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                m[i] = [e - f * ek for e, ek in zip(m[i], m[k])]
                rhs[i] = rhs[i] - rhs[k] * f
    return rhs
