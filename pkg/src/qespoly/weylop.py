"""Normal-ordered linear differential operators in one variable.

A term is ``c * x**(q + t*a) * d**k`` where ``d = d/dx``, ``a`` is a single
formal exponent parameter and ``c`` is a polynomial in ``a`` (a
:class:`~qespoly.exactnum.Poly` whose variable is ``a``).  Composition uses
the Leibniz rule

    d^k x^s = sum_i C(k, i) s^(i) x^(s-i) d^(k-i),

with the falling factorial ``s^(i)`` expanded as a polynomial in ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .exactnum import Poly, Scalar, format_scalar, to_scalar

ONE = Poly([1])
A_VAR = Poly([0, 1])


@dataclass(frozen=True, order=True)
class GenExponent:
    """The exponent ``offset + a_count * a``."""

    a_count: int
    offset: Fraction

    def __init__(self, offset=0, a_count: int = 0):
        object.__setattr__(self, "offset", Fraction(offset))
        object.__setattr__(self, "a_count", int(a_count))

    def __add__(self, other):
        if isinstance(other, GenExponent):
            return GenExponent(self.offset + other.offset, self.a_count + other.a_count)
        return GenExponent(self.offset + Fraction(other), self.a_count)

    def __sub__(self, other):
        if isinstance(other, GenExponent):
            return GenExponent(self.offset - other.offset, self.a_count - other.a_count)
        return GenExponent(self.offset - Fraction(other), self.a_count)

    def __neg__(self):
        return GenExponent(-self.offset, -self.a_count)

    def as_poly(self) -> Poly:
        """The exponent as a polynomial in ``a``."""
        return Poly([self.offset, self.a_count])

    def falling(self, k: int) -> Poly:
        """``s (s-1) ... (s-k+1)`` as a polynomial in ``a``."""
        out = ONE
        base = self.as_poly()
        for j in range(k):
            out = out * (base - j)
        return out

    def specialize(self, value) -> "GenExponent":
        return GenExponent(self.offset + self.a_count * Fraction(value), 0)

    def is_formal(self) -> bool:
        return self.a_count != 0

    def format(self) -> str:
        if self.a_count == 0:
            return str(self.offset)
        t = {1: "a", -1: "-a"}.get(self.a_count, f"{self.a_count}*a")
        if self.offset == 0:
            return t
        sign = "+" if self.a_count > 0 else ""
        return f"{self.offset}{sign}{t}"

    def __repr__(self):
        return f"GenExponent({self.format()})"


def as_exponent(s) -> GenExponent:
    if isinstance(s, GenExponent):
        return s
    return GenExponent(to_scalar(s) if not isinstance(s, Fraction) else s, 0)


def _coeff(c) -> Poly:
    if isinstance(c, Poly):
        return c
    return Poly([c])


def format_poly_in_a(c: Poly) -> str:
    if c.is_constant():
        return format_scalar(c.constant_value())
    return f"({c.format('a')})"


class DiffOperator:
    """Immutable normal-ordered differential operator."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[GenExponent, int], Poly] = {}
        for (power, k), c in items:
            key = (as_exponent(power), int(k))
            if key[1] < 0:
                raise ValueError("derivative order must be non-negative")
            acc[key] = acc.get(key, Poly()) + _coeff(c)
        self.terms: dict[tuple[GenExponent, int], Poly] = {
            key: acc[key] for key in sorted(acc, key=lambda kk: (kk[1], kk[0])) if acc[key]
        }
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls) -> "DiffOperator":
        return cls()

    @classmethod
    def const(cls, c) -> "DiffOperator":
        return cls({(GenExponent(0), 0): _coeff(c)})

    @classmethod
    def identity(cls) -> "DiffOperator":
        return cls.const(1)

    @classmethod
    def x(cls, power=1, a_count: int = 0, coeff=1) -> "DiffOperator":
        """``coeff * x**(power + a_count*a)``."""
        return cls({(GenExponent(power, a_count), 0): _coeff(coeff)})

    @classmethod
    def d(cls, k: int = 1) -> "DiffOperator":
        return cls({(GenExponent(0), k): ONE})

    @classmethod
    def D(cls) -> "DiffOperator":
        """Euler operator ``x d/dx``."""
        return cls({(GenExponent(1), 1): ONE})

    @classmethod
    def term(cls, coeff, power, k: int) -> "DiffOperator":
        return cls({(as_exponent(power), k): _coeff(coeff)})

    @classmethod
    def from_D_poly(cls, coeffs: Iterable) -> "DiffOperator":
        """``sum_j c_j D^j`` with ``c_j`` scalars or polynomials in ``a``."""
        out = cls()
        Dop = cls.D()
        power = cls.identity()
        for c in coeffs:
            out = out + power * _coeff(c)
            power = power @ Dop
        return out

    @classmethod
    def D_shifted_product(cls, shifts: Iterable) -> "DiffOperator":
        """``prod_j (D - s_j)``; shifts may be scalars or polynomials in ``a``."""
        out = cls.identity()
        for s in shifts:
            out = out @ (cls.D() - cls.const(_coeff(s)))
        return out

    # inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def order(self) -> int:
        return max((k for _, k in self.terms), default=-1)

    def is_formal(self) -> bool:
        return any(p.is_formal() or c.degree > 0 for (p, _), c in self.terms.items())

    def degree_shifts(self) -> set[GenExponent]:
        """Set of ``power - k`` over terms: how much each term raises a degree."""
        return {p - k for (p, k) in self.terms}

    def coefficient(self, power, k: int) -> Poly:
        return self.terms.get((as_exponent(power), k), Poly())

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return DiffOperator(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self):
        return DiffOperator({key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        """Multiplication by a scalar or by a polynomial in ``a``."""
        if isinstance(scalar, DiffOperator):
            raise TypeError("use @ to compose operators")
        c = _coeff(scalar)
        return DiffOperator({key: v * c for key, v in self.terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return compose(self, other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = DiffOperator.identity()
        for _ in range(k):
            out = out @ self
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self.terms.items()))
        return self._hash

    # action -----------------------------------------------------------
    def apply_to_monomial(self, s) -> list[tuple[GenExponent, Poly]]:
        """Image of ``x**s`` as a sorted list of (exponent, coefficient)."""
        s = as_exponent(s)
        acc: dict[GenExponent, Poly] = {}
        for (p, k), c in self.terms.items():
            f = s.falling(k)
            if not f:
                continue
            e = s + p - k
            acc[e] = acc.get(e, Poly()) + c * f
        return sorted((e, c) for e, c in acc.items() if c)

    def apply(self, element: Mapping) -> dict[GenExponent, Poly]:
        """Apply to a finite combination ``{exponent: coefficient}``."""
        acc: dict[GenExponent, Poly] = {}
        for s, w in element.items():
            for e, c in self.apply_to_monomial(s):
                acc[e] = acc.get(e, Poly()) + c * _coeff(w)
        return {e: c for e, c in sorted(acc.items()) if c}

    def specialize_a(self, value) -> "DiffOperator":
        value = to_scalar(value)
        return DiffOperator([((p.specialize(value), k), Poly([c(value)]))
                             for (p, k), c in self.terms.items()])

    def map_coeffs(self, fn) -> "DiffOperator":
        return DiffOperator({key: fn(c) for key, c in self.terms.items()})

    # serialization ----------------------------------------------------
    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (p, k), c in self.terms.items():
            parts.append(f"{format_poly_in_a(c)} * x^({p.format()}) * d^{k}")
        return " + ".join(parts)

    def term_list(self) -> list[str]:
        return [f"{format_poly_in_a(c)} * x^({p.format()}) * d^{k}"
                for (p, k), c in self.terms.items()]

    __str__ = format

    def __repr__(self):
        return f"DiffOperator({self.format()})"


def compose(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    """Normal-ordered product ``A o B``."""
    out: list = []
    for (p1, k1), c1 in A.terms.items():
        for (p2, k2), c2 in B.terms.items():
            c12 = c1 * c2
            for i in range(k1 + 1):
                f = p2.falling(i)
                if not f:
                    continue
                out.append(((p1 + p2 - i, k1 - i + k2), c12 * f * comb(k1, i)))
    return DiffOperator(out)


def commutator(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    return compose(A, B) - compose(B, A)


def anticommutator(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    return compose(A, B) + compose(B, A)


def power_conjugate(A: DiffOperator, shift: GenExponent) -> DiffOperator:
    """``x**shift o A o x**(-shift)`` computed exactly."""
    return compose(compose(DiffOperator({(shift, 0): ONE}), A),
                   DiffOperator({(-shift, 0): ONE}))


# ---------------------------------------------------------------------------
# Euler-operator polynomials

def _poly_list_add(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else Poly()) + (b[i] if i < len(b) else Poly()) for i in range(n)]


def _poly_list_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Poly()] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return out


def _trim(a: list) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def to_D_poly(op: DiffOperator, shift: GenExponent | None = None) -> list[Poly] | None:
    """Write ``op = x**shift * sum_j c_j D^j`` and return ``[c_0, c_1, ...]``.

    Every term must raise degrees by the same ``shift`` (default 0);
    otherwise None is returned.  Uses ``x^k d^k = D (D-1) ... (D-k+1)``.
    """
    shift = GenExponent(0) if shift is None else shift
    out: list[Poly] = []
    for (p, k), c in op.terms.items():
        if p - k != shift:
            return None
        fall = [ONE]
        for j in range(k):
            fall = _poly_list_mul(fall, [Poly([-j]), ONE])
        out = _poly_list_add(out, [c * f for f in fall])
    return _trim(out)


def taylor_shift(coeffs: list[Poly], c: Poly) -> list[Poly]:
    """Given ``p(D) = sum coeffs[j] D^j`` return ``q`` with ``q(y) = p(y + c)``."""
    out: list[Poly] = []
    for coef in reversed(coeffs):
        out = _poly_list_add(_poly_list_mul(out, [c, ONE]), [coef])
    return _trim(out)


# ---------------------------------------------------------------------------
# 2x2 matrix operators

class MatrixOperator:
    """2x2 array of :class:`DiffOperator` entries, acting on column pairs."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        rows = [[e if isinstance(e, DiffOperator) else DiffOperator.const(e) for e in row]
                for row in entries]
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("matrix operators are 2x2")
        self.entries = (tuple(rows[0]), tuple(rows[1]))

    @classmethod
    def identity(cls) -> "MatrixOperator":
        one, zero = DiffOperator.identity(), DiffOperator()
        return cls([[one, zero], [zero, one]])

    @classmethod
    def zero(cls) -> "MatrixOperator":
        z = DiffOperator()
        return cls([[z, z], [z, z]])

    @classmethod
    def diag(cls, a: DiffOperator, b: DiffOperator) -> "MatrixOperator":
        return cls([[a, DiffOperator()], [DiffOperator(), b]])

    @classmethod
    def scalar(cls, a: DiffOperator) -> "MatrixOperator":
        return cls.diag(a, a)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other):
        if not isinstance(other, MatrixOperator):
            return NotImplemented
        return MatrixOperator([[self[i, j] + other[i, j] for j in range(2)] for i in range(2)])

    def __neg__(self):
        return MatrixOperator([[-self[i, j] for j in range(2)] for i in range(2)])

    def __sub__(self, other):
        if not isinstance(other, MatrixOperator):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        return MatrixOperator([[self[i, j] * scalar for j in range(2)] for i in range(2)])

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, MatrixOperator):
            return NotImplemented
        return MatrixOperator([[compose(self[i, 0], other[0, j]) + compose(self[i, 1], other[1, j])
                                for j in range(2)] for i in range(2)])

    def __eq__(self, other):
        if not isinstance(other, MatrixOperator):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def map_entries(self, fn) -> "MatrixOperator":
        return MatrixOperator([[fn(self[i, j]) for j in range(2)] for i in range(2)])

    def specialize_a(self, value) -> "MatrixOperator":
        return self.map_entries(lambda e: e.specialize_a(value))

    def format(self) -> str:
        return "\n".join(f"[{i + 1}{j + 1}] {self[i, j].format()}" for i in range(2) for j in range(2))

    def as_dict(self) -> dict:
        return {f"{i + 1}{j + 1}": self[i, j].term_list() for i in range(2) for j in range(2)}

    def __repr__(self):
        return f"MatrixOperator({self.as_dict()})"


def matrix_ops(A: MatrixOperator, B: MatrixOperator, kind: str) -> MatrixOperator:
    if kind == "add":
        return A + B
    if kind == "compose":
        return A @ B
    if kind == "commutator":
        return A @ B - B @ A
    raise ValueError(f"unknown matrix operation {kind!r}")


def matrix_commutator(A: MatrixOperator, B: MatrixOperator) -> MatrixOperator:
    return A @ B - B @ A


def scalar_times(c: Scalar, A: DiffOperator) -> DiffOperator:
    return A * c
