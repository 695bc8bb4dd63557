"""Invariant spaces, the f-ring, restriction matrices and the scalar to
matrix correspondence.

Two kinds of space are handled:

* :class:`MonomialSpace` -- ``span{x^0..x^n} + span{x^a..x^(a+m)}`` with a
  formal or specialised exponent ``a``;
* :class:`TwoComponentSpace` -- pairs ``(p, q)`` with ``deg p <= n`` and
  ``deg q <= m``.  With an ``f_case`` the pair stands for the scalar
  function ``p + f q``; without one it is a column vector acted on by a
  :class:`~qespoly.weylop.MatrixOperator`.

Canonical basis order: first sector by ascending degree, then the second.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .exactnum import Poly, RationalFunction, format_scalar, to_scalar
from .transforms import NotPolynomializable, _shifted_derivative_powers
from .weylop import DiffOperator, GenExponent, MatrixOperator, format_poly_in_a


class NotInvariant(ValueError):
    """The operator does not map the space into itself."""


@dataclass
class InvarianceReport:
    invariant: bool
    failures: list[tuple[str, str]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"invariant": self.invariant,
                "failures": [{"basis": b, "term": t} for b, t in self.failures]}


# ---------------------------------------------------------------------------
# monomial spaces

class MonomialSpace:
    """``P_n + x^a P_m``; ``m = -1`` drops the second sector, ``a=None`` is formal."""

    def __init__(self, n: int, m: int = -1, a=None):
        if n < 0 or m < -1:
            raise ValueError("need n >= 0 and m >= -1")
        self.n, self.m = n, m
        self.a = None if a is None else to_scalar(a)
        basis: list[GenExponent] = [GenExponent(i) for i in range(n + 1)]
        for j in range(m + 1):
            e = GenExponent(j, 1) if self.a is None else GenExponent(j + self.a)
            if e not in basis:
                basis.append(e)
        self.basis = basis
        self._index = {e: i for i, e in enumerate(basis)}

    @classmethod
    def from_exponents(cls, exponents) -> "MonomialSpace":
        """Span of an explicit list of monomials (no sector structure)."""
        space = cls(0)
        space.n, space.m = None, None
        space.basis = list(dict.fromkeys(exponents))
        space._index = {e: i for i, e in enumerate(space.basis)}
        return space

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def formal(self) -> bool:
        return self.a is None

    def contains(self, e: GenExponent) -> bool:
        return e in self._index

    def index(self, e: GenExponent) -> int:
        return self._index[e]

    def labels(self) -> list[str]:
        return [f"x^({e.format()})" for e in self.basis]

    def _prepare(self, op: DiffOperator) -> DiffOperator:
        return op if self.a is None else op.specialize_a(self.a)

    def images(self, op: DiffOperator):
        op = self._prepare(op)
        return [(e, op.apply_to_monomial(e)) for e in self.basis]

    def __repr__(self):
        a = "a" if self.a is None else str(self.a)
        return f"MonomialSpace(n={self.n}, m={self.m}, a={a})"


# ---------------------------------------------------------------------------
# f-ring: Q(x)[f] with f^2 = F

class FRing:
    """The ring of expressions ``u + f v`` with ``f^2 = F`` for a rational ``F``."""

    def __init__(self, F: RationalFunction | Poly):
        self.F = F if isinstance(F, RationalFunction) else RationalFunction(F)
        if self.F.is_zero():
            raise ValueError("f^2 must be nonzero")
        # f' = f * F'/(2F)
        self.log_half = self.F.derivative() / (self.F * 2)

    def element(self, plain=0, fpart=0) -> "FElement":
        return FElement(self, _rf(plain), _rf(fpart))

    def f(self) -> "FElement":
        return self.element(0, 1)

    def f_derivatives(self, kmax: int) -> list[RationalFunction]:
        """``r_l`` with ``f^(l) = r_l f`` for ``l = 0..kmax``."""
        out = [RationalFunction(1)]
        for _ in range(kmax):
            r = out[-1]
            out.append(r.derivative() + r * self.log_half)
        return out

    def __eq__(self, other):
        return isinstance(other, FRing) and self.F == other.F

    def __hash__(self):
        return hash(self.F)


def _rf(v) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    if isinstance(v, Poly):
        return RationalFunction.poly(v)
    return RationalFunction(Poly([v]))


class FElement:
    __slots__ = ("ring", "plain", "fpart")

    def __init__(self, ring: FRing, plain: RationalFunction, fpart: RationalFunction):
        self.ring, self.plain, self.fpart = ring, plain, fpart

    def _lift(self, other) -> "FElement":
        if isinstance(other, FElement):
            if other.ring != self.ring:
                raise ValueError("elements of different f-rings")
            return other
        return FElement(self.ring, _rf(other), RationalFunction(0))

    def __add__(self, other):
        o = self._lift(other)
        return FElement(self.ring, self.plain + o.plain, self.fpart + o.fpart)

    __radd__ = __add__

    def __neg__(self):
        return FElement(self.ring, -self.plain, -self.fpart)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        o = self._lift(other)
        F = self.ring.F
        return FElement(self.ring,
                        self.plain * o.plain + F * self.fpart * o.fpart,
                        self.plain * o.fpart + self.fpart * o.plain)

    __rmul__ = __mul__

    def derivative(self) -> "FElement":
        return FElement(self.ring, self.plain.derivative(),
                        self.fpart.derivative() + self.fpart * self.ring.log_half)

    def is_zero(self) -> bool:
        return self.plain.is_zero() and self.fpart.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, FElement):
            return NotImplemented
        return self.ring == other.ring and self.plain == other.plain and self.fpart == other.fpart

    def __hash__(self):
        return hash((self.plain, self.fpart))

    def __repr__(self):
        return f"FElement({self.plain.format()} + f*({self.fpart.format()}))"


class FOperator:
    """``sum_k c_k d^k`` with coefficients in an f-ring."""

    def __init__(self, ring: FRing, coeffs: dict[int, FElement]):
        self.ring = ring
        self.coeffs = {k: c for k, c in sorted(coeffs.items()) if not c.is_zero()}

    @classmethod
    def from_parts(cls, ring: FRing, plain: DiffOperator | None = None,
                   fpart: DiffOperator | None = None) -> "FOperator":
        """``plain + f o fpart`` for polynomial-coefficient operators."""
        coeffs: dict[int, FElement] = {}
        for op, slot in ((plain, 0), (fpart, 1)):
            if op is None:
                continue
            for (p, k), c in op.terms.items():
                if p.a_count or p.offset.denominator != 1 or not c.is_constant():
                    raise ValueError("f-ring operators need integer powers and a-free coefficients")
                e = int(p.offset)
                mono = RationalFunction.poly(Poly.monomial(e, c.constant_value())) if e >= 0 else \
                    RationalFunction(Poly([c.constant_value()]), Poly.monomial(-e))
                piece = ring.element(mono, 0) if slot == 0 else ring.element(0, mono)
                coeffs[k] = coeffs.get(k, ring.element()) + piece
        return cls(ring, coeffs)

    def order(self) -> int:
        return max(self.coeffs, default=-1)

    def apply(self, u: FElement) -> FElement:
        out = self.ring.element()
        deriv = u
        for k in range(self.order() + 1):
            if k in self.coeffs:
                out = out + self.coeffs[k] * deriv
            deriv = deriv.derivative()
        return out

    def __add__(self, other: "FOperator"):
        keys = set(self.coeffs) | set(other.coeffs)
        z = self.ring.element()
        return FOperator(self.ring, {k: self.coeffs.get(k, z) + other.coeffs.get(k, z) for k in keys})

    def __neg__(self):
        return FOperator(self.ring, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return FOperator(self.ring, {k: c * scalar for k, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "FOperator") -> "FOperator":
        out: dict[int, FElement] = {}
        for j, alpha in self.coeffs.items():
            for k, beta in other.coeffs.items():
                der = beta
                for i in range(j + 1):
                    term = alpha * der * comb(j, i)
                    key = j - i + k
                    out[key] = out.get(key, self.ring.element()) + term
                    der = der.derivative()
        return FOperator(self.ring, out)

    def __eq__(self, other):
        if not isinstance(other, FOperator):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def conjugate(self, ell: RationalFunction) -> "FOperator":
        """``g^{-1} o self o g`` for a scalar factor ``g`` with ``g'/g = ell``."""
        powers = _shifted_derivative_powers(ell, max(self.order(), 0))
        out: dict[int, FElement] = {}
        for k, c in self.coeffs.items():
            for j, r in powers[k].items():
                out[j] = out.get(j, self.ring.element()) + c * r
        return FOperator(self.ring, out)

    def change_ring(self, ring: FRing, factor: RationalFunction) -> "FOperator":
        """Re-express over ``ring`` whose generator ``g`` satisfies ``f = factor * g``."""
        return FOperator(ring, {k: FElement(ring, c.plain, c.fpart * factor)
                                for k, c in self.coeffs.items()})

    def format(self) -> str:
        parts = []
        for k, c in self.coeffs.items():
            parts.append(f"[{c.plain.format()} + f*({c.fpart.format()})] * d^{k}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FOperator({self.format()})"


def fop_commutator(A: FOperator, B: FOperator) -> FOperator:
    return A @ B - B @ A


# ---------------------------------------------------------------------------
# two-component spaces

F_CASES = ("sqrtP2", "sqrtRatio")


def p2_poly(lam) -> Poly:
    """``(1 - x)(1 - lam x)``."""
    lam = to_scalar(lam)
    return Poly([1, -1]) * Poly([1, -lam])


class TwoComponentSpace:
    def __init__(self, n: int, m: int, f_case: str | None = None, lam=None):
        if n < 0 or m < -1:
            raise ValueError("need n >= 0 and m >= -1")
        if f_case is not None:
            if f_case not in F_CASES:
                raise ValueError(f"unknown f case {f_case!r}")
            if f_case == "sqrtP2" and m != n - 1:
                raise ValueError("f = sqrt(p2) needs m = n - 1")
            if f_case == "sqrtRatio" and m != n:
                raise ValueError("f = sqrt((1-x)/(1-lam x)) needs m = n")
            if lam is None:
                raise ValueError("f cases need lambda")
        self.n, self.m, self.f_case = n, m, f_case
        self.lam = None if lam is None else to_scalar(lam)

    @property
    def dim(self) -> int:
        return self.n + 1 + self.m + 1

    def ring(self) -> FRing:
        if self.f_case == "sqrtP2":
            return FRing(p2_poly(self.lam))
        if self.f_case == "sqrtRatio":
            return FRing(RationalFunction(Poly([1, -1]), Poly([1, -self.lam])))
        raise ValueError("space without f has no f-ring")

    def basis(self) -> list[tuple[int, int]]:
        """(sector, degree) pairs in canonical order."""
        return [(0, j) for j in range(self.n + 1)] + [(1, j) for j in range(self.m + 1)]

    def labels(self) -> list[str]:
        return [f"(x^{j}, 0)" if s == 0 else f"(0, x^{j})" for s, j in self.basis()]

    def bound(self, sector: int) -> int:
        return self.n if sector == 0 else self.m

    def __repr__(self):
        return f"TwoComponentSpace(n={self.n}, m={self.m}, f={self.f_case}, lam={self.lam})"


def _monomial_images_matrix(A: MatrixOperator, s: int, j: int):
    """Image of the basis vector with x^j in slot s as two lists of (exponent, coeff)."""
    return [A[row, s].apply_to_monomial(GenExponent(j)) for row in range(2)]


def _poly_from_rf(r: RationalFunction) -> Poly | None:
    return r.num if r.is_polynomial() else None


def _two_component_images(A, V: TwoComponentSpace):
    """Yield (basis label, [image sector 0 terms, image sector 1 terms]) where
    terms are lists of (GenExponent, coefficient-Poly-in-a)."""
    labels = V.labels()
    if isinstance(A, MatrixOperator):
        if V.f_case is not None:
            raise ValueError("matrix operators act on plain pairs")
        for (s, j), lab in zip(V.basis(), labels):
            yield lab, _monomial_images_matrix(A, s, j)
        return
    if isinstance(A, DiffOperator):
        A = FOperator.from_parts(V.ring(), A)
    ring = V.ring()
    if A.ring != ring:
        raise ValueError("operator lives in a different f-ring")
    for (s, j), lab in zip(V.basis(), labels):
        mono = Poly.monomial(j)
        u = ring.element(mono, 0) if s == 0 else ring.element(0, mono)
        img = A.apply(u)
        sectors = []
        for r in (img.plain, img.fpart):
            laurent = r.laurent()
            if laurent is None:
                sectors.append(None)
            else:
                sectors.append([(GenExponent(e), Poly([c])) for e, c in sorted(laurent.items())])
        yield lab, sectors


def check_invariance(A, V) -> InvarianceReport:
    failures: list[tuple[str, str]] = []
    if isinstance(V, MonomialSpace):
        for e, image in V.images(A):
            for img_e, c in image:
                if not V.contains(img_e):
                    failures.append((f"x^({e.format()})",
                                     f"{format_poly_in_a(c)} * x^({img_e.format()})"))
        return InvarianceReport(not failures, failures)
    for lab, sectors in _two_component_images(A, V):
        for s, terms in enumerate(sectors):
            if terms is None:
                failures.append((lab, f"sector {s + 1}: non-polynomial coefficient"))
                continue
            for e, c in terms:
                if e.a_count or e.offset.denominator != 1 or not 0 <= e.offset <= V.bound(s):
                    failures.append((lab, f"sector {s + 1}: {format_poly_in_a(c)} * x^({e.format()})"))
    return InvarianceReport(not failures, failures)


def _simplify_entry(c: Poly):
    return c.constant_value() if c.is_constant() else c


def restrict(A, V) -> list[list]:
    """Matrix of ``A`` on the canonical basis of ``V`` (columns = images)."""
    report = check_invariance(A, V)
    if not report.invariant:
        raise NotInvariant(f"operator does not preserve {V!r}: {report.failures[:3]}")
    if isinstance(V, MonomialSpace):
        n = V.dim
        mat = [[Poly() for _ in range(n)] for _ in range(n)]
        for col, (e, image) in enumerate(V.images(A)):
            for img_e, c in image:
                mat[V.index(img_e)][col] = mat[V.index(img_e)][col] + c
    else:
        n = V.dim
        offsets = (0, V.n + 1)
        mat = [[Poly() for _ in range(n)] for _ in range(n)]
        for col, (_lab, sectors) in enumerate(_two_component_images(A, V)):
            for s, terms in enumerate(sectors):
                for e, c in terms:
                    row = offsets[s] + int(e.offset)
                    mat[row][col] = mat[row][col] + c
    return [[_simplify_entry(c) for c in row] for row in mat]


def scalar_to_matrix(A: FOperator, V: TwoComponentSpace) -> MatrixOperator:
    """The 2x2 operator ``M`` with ``A(p + f q) = (M(p,q))_1 + f (M(p,q))_2``."""
    if V.f_case is None:
        raise ValueError("scalar to matrix needs a space with an f case")
    ring = V.ring()
    if isinstance(A, DiffOperator):
        A = FOperator.from_parts(ring, A)
    report = check_invariance(A, V)
    if not report.invariant:
        raise NotInvariant(f"operator does not preserve {V!r}: {report.failures[:3]}")
    r = ring.f_derivatives(max(A.order(), 0))
    entries: dict[tuple[int, int], dict[int, RationalFunction]] = {
        (i, j): {} for i in range(2) for j in range(2)}

    def put(ij, k, val):
        slot = entries[ij]
        slot[k] = slot.get(k, RationalFunction(0)) + val

    for k, c in A.coeffs.items():
        put((0, 0), k, c.plain)
        put((1, 0), k, c.fpart)
        for l in range(k + 1):
            w = r[l] * comb(k, l)
            put((1, 1), k - l, c.plain * w)
            put((0, 1), k - l, c.fpart * w * ring.F)
    ops = [[None, None], [None, None]]
    for (i, j), coeffs in entries.items():
        op = DiffOperator()
        for k, val in coeffs.items():
            if val.is_zero():
                continue
            laurent = val.laurent()
            if laurent is None:
                raise NotPolynomializable(f"entry {i + 1}{j + 1} has coefficient {val.format()}")
            op = op + DiffOperator([((GenExponent(e), k), Poly([cc])) for e, cc in laurent.items()])
        ops[i][j] = op
    return MatrixOperator(ops)


# ---------------------------------------------------------------------------
# export

def format_entry(e) -> str:
    if isinstance(e, Poly):
        return e.format("a")
    return format_scalar(e)


def matrix_to_csv(mat: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in mat:
        writer.writerow([format_entry(e) for e in row])
    return buf.getvalue()


def matrix_to_json(mat: Sequence[Sequence], labels: Sequence[str] | None = None) -> str:
    payload = {"rows": [[format_entry(e) for e in row] for row in mat]}
    if labels is not None:
        payload["basis"] = list(labels)
    return json.dumps(payload, indent=2)


def matrix_is_rational(mat) -> bool:
    return all(isinstance(e, Fraction) for row in mat for e in row)
