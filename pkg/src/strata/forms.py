"""Binary forms over a number field.

A form is kept factored, as a scalar times a product of linear factors
``(beta*x - alpha*y)**m`` over distinct projective roots ``(alpha:beta)``;
the coefficient vector is derived data. Coefficient index ``k`` holds the
coefficient of ``x**k * y**(d-k)``, so setting ``y = 1`` turns the vector into
a univariate polynomial in ``t = x`` with the same constant-first layout.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactalg import (
    QQ,
    FieldElement,
    NumberField,
    exact_det,
    poly_derivative,
    poly_eval,
    poly_trim,
)


class MixedFields(TypeError):
    pass


def _common_field(values) -> NumberField:
    field = QQ
    for v in values:
        if isinstance(v, FieldElement) and v.field != field:
            if field.is_rational:
                field = v.field
            elif not v.field.is_rational:
                raise MixedFields(f"{field!r} vs {v.field!r}")
    return field


@dataclass(frozen=True)
class ProjRoot:
    """A point (alpha:beta) of the projective line, stored canonically."""

    alpha: FieldElement
    beta: FieldElement

    def __post_init__(self):
        field = _common_field([self.alpha, self.beta])
        a, b = field(self.alpha), field(self.beta)
        if b:
            a, b = a / b, field.one
        elif a:
            a = field.one
        else:
            raise ValueError("(0:0) is not a point of the projective line")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def at(cls, value, field: NumberField | None = None) -> "ProjRoot":
        """The affine point ``(value:1)``, i.e. the linear factor ``x - value*y``."""
        if field is None:
            field = value.field if isinstance(value, FieldElement) else QQ
        return cls(field(value), field.one)

    @classmethod
    def infinity(cls, field: NumberField = QQ) -> "ProjRoot":
        return cls(field.one, field.zero)

    @property
    def field(self) -> NumberField:
        return self.alpha.field

    @property
    def is_infinite(self) -> bool:
        return not self.beta

    def linear_factor(self) -> tuple:
        """Coefficients of ``beta*x - alpha*y`` in the form layout."""
        return (-self.alpha, self.beta)

    def to_field(self, field: NumberField) -> "ProjRoot":
        if field == self.field:
            return self
        return ProjRoot(field(self.alpha), field(self.beta))

    def __str__(self):
        if self.is_infinite:
            return "inf"
        return str(self.alpha)

    def to_json(self) -> dict:
        return {"alpha": self.alpha.to_json(), "beta": self.beta.to_json()}


class FactoredForm:
    """``scalar * prod((beta_i x - alpha_i y)**m_i)`` with pairwise distinct roots."""

    __slots__ = ("scalar", "factors", "_expanded")

    def __init__(self, scalar, factors: Iterable[tuple[ProjRoot, int]]):
        factors = tuple((root, int(m)) for root, m in factors)
        field = _common_field([scalar] + [r.alpha for r, _ in factors])
        scalar = field(scalar)
        if not scalar:
            raise ValueError("scalar must be nonzero")
        seen = set()
        normed = []
        for root, m in factors:
            if m <= 0:
                raise ValueError("multiplicities must be positive")
            root = root.to_field(field)
            if root in seen:
                raise ValueError(f"repeated root {root}")
            seen.add(root)
            normed.append((root, m))
        self.scalar = scalar
        self.factors = tuple(normed)
        self._expanded = None

    @classmethod
    def from_roots(cls, pairs: Iterable[tuple], scalar=1, field: NumberField | None = None):
        """Build ``scalar * prod (x - a y)**m``; the root ``None`` stands for infinity
        and contributes ``y**m``. Repeated roots are merged."""
        pairs = list(pairs)
        if field is None:
            field = _common_field([scalar] + [a for a, _ in pairs])
        merged: dict[ProjRoot, int] = {}
        sign = 1
        for a, m in pairs:
            if a is None or (isinstance(a, ProjRoot) and a.is_infinite):
                root = ProjRoot.infinity(field)
            elif isinstance(a, ProjRoot):
                root = a.to_field(field)
            else:
                root = ProjRoot.at(a, field)
            if root.is_infinite and m % 2:
                sign = -sign
            merged[root] = merged.get(root, 0) + m
        return cls(field(scalar) * sign, merged.items())

    @property
    def field(self) -> NumberField:
        return self.scalar.field

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.factors)

    @property
    def roots(self) -> frozenset:
        return frozenset(r for r, _ in self.factors)

    def multiplicities(self) -> tuple[int, ...]:
        return tuple(sorted((m for _, m in self.factors), reverse=True))

    def assignment(self) -> dict:
        return dict(self.factors)

    def to_field(self, field: NumberField) -> "FactoredForm":
        if field == self.field:
            return self
        return FactoredForm(field(self.scalar), [(r.to_field(field), m) for r, m in self.factors])

    def __mul__(self, other):
        if isinstance(other, FactoredForm):
            field = _common_field([self.scalar, other.scalar])
            a, b = self.to_field(field), other.to_field(field)
            merged = dict(a.factors)
            for r, m in b.factors:
                merged[r] = merged.get(r, 0) + m
            return FactoredForm(a.scalar * b.scalar, merged.items())
        if isinstance(other, (int, Fraction, FieldElement)):
            return FactoredForm(self.scalar * other, self.factors)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return FactoredForm(self.scalar**n, [(r, m * n) for r, m in self.factors]) if n else FactoredForm(
            self.field.one, ()
        )

    def divides(self, other: "FactoredForm") -> bool:
        theirs = other.assignment()
        return all(theirs.get(r, 0) >= m for r, m in self.factors)

    def exact_divide(self, other: "FactoredForm") -> "FactoredForm":
        """``self / other`` when ``other`` divides ``self``."""
        if not other.divides(self):
            raise ValueError("divisor does not divide the form")
        left = dict(self.factors)
        for r, m in other.factors:
            left[r] -= m
        return FactoredForm(self.scalar / other.scalar, [(r, m) for r, m in left.items() if m])

    def is_proportional(self, other: "FactoredForm") -> bool:
        # unique factorisation: proportional iff same roots with same multiplicities
        return self.assignment() == other.assignment()

    def __eq__(self, other):
        return (
            isinstance(other, FactoredForm)
            and self.scalar == other.scalar
            and self.assignment() == other.assignment()
        )

    def __hash__(self):
        return hash((self.scalar, frozenset(self.factors)))

    def __repr__(self):
        body = " * ".join(
            f"({'y' if r.is_infinite else 'x - ' + '(' + str(r.alpha) + ')y'})^{m}" for r, m in self.factors
        )
        return f"FactoredForm({self.scalar} * {body or '1'})"

    def to_json(self) -> dict:
        return {
            "scalar": self.scalar.to_json(),
            "factors": [
                {"alpha": r.alpha.to_json(), "beta": r.beta.to_json(), "mult": m} for r, m in self.factors
            ],
        }

    @classmethod
    def from_json(cls, field: NumberField, obj) -> "FactoredForm":
        factors = [
            (
                ProjRoot(FieldElement.from_json(field, f["alpha"]), FieldElement.from_json(field, f["beta"])),
                int(f["mult"]),
            )
            for f in obj["factors"]
        ]
        return cls(FieldElement.from_json(field, obj["scalar"]), factors)


@dataclass(frozen=True)
class BinaryForm:
    """Expanded form: ``coeffs[k]`` multiplies ``x**k y**(degree-k)``."""

    degree: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("need degree+1 coefficients")

    @property
    def field(self) -> NumberField:
        return self.coeffs[0].field

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return BinaryForm(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> "BinaryForm":
        return BinaryForm(self.degree, tuple(c * a for a in self.coeffs))

    def dehomogenize(self) -> tuple:
        """The polynomial in ``t`` obtained by setting ``x = t, y = 1``."""
        return poly_trim(self.coeffs)


def _convolve(p: Sequence, q: Sequence) -> list:
    out = [p[0] * 0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] = out[i + j] + a * b
    return out


def _linear_power(lin: tuple, m: int) -> list:
    # (c0 + c1 x)^m by the binomial theorem
    c0, c1 = lin
    from math import comb

    if not c1:
        return [c0**m] + [c0 * 0] * m
    if not c0:
        return [c1 * 0] * m + [c1**m]
    p0 = [c0 ** (m - k) for k in range(m + 1)]
    p1 = [c1**k for k in range(m + 1)]
    return [comb(m, k) * p0[k] * p1[k] for k in range(m + 1)]


def expand(f: FactoredForm) -> BinaryForm:
    """Coefficient vector of a factored form."""
    if f._expanded is not None:
        return f._expanded
    coeffs = [f.scalar]
    for root, m in f.factors:
        coeffs = _convolve(coeffs, _linear_power(root.linear_factor(), m))
    out = BinaryForm(f.degree, tuple(coeffs))
    f._expanded = out
    return out


def radical(f: FactoredForm) -> FactoredForm:
    """Product of the distinct linear factors, scalar 1."""
    return FactoredForm(f.field.one, [(r, 1) for r, _ in f.factors])


def gcd_forms(fs: Sequence[FactoredForm]) -> FactoredForm:
    """Common divisor with, for each root, the minimum multiplicity across ``fs``."""
    if not fs:
        raise ValueError("gcd of an empty list")
    field = _common_field([f.scalar for f in fs])
    fs = [f.to_field(field) for f in fs]
    common = dict(fs[0].factors)
    for f in fs[1:]:
        a = f.assignment()
        common = {r: min(m, a[r]) for r, m in common.items() if r in a}
    return FactoredForm(field.one, common.items())


def form_sum(terms: Iterable[tuple]) -> BinaryForm:
    """``sum(c * expand(f))`` over ``(c, f)`` pairs of equal degree."""
    total = None
    for c, f in terms:
        v = expand(f).scale(c)
        total = v if total is None else total + v
    return total


# --- Wronskians ------------------------------------------------------------

def wronskian(fs: Sequence[Sequence]):
    """Wronskian of univariate polynomials (constant-term first) in ``t``.

    Evaluates the determinant of derivatives at enough integer points to pin
    down its degree, then interpolates. Returns a trimmed coefficient tuple;
    the zero polynomial is ``()``.
    """
    k = len(fs)
    if k == 0:
        raise ValueError("need at least one polynomial")
    fs = [poly_trim(Fraction(c) if isinstance(c, int) else c for c in f) for f in fs]
    sample = next((c for f in fs for c in f), Fraction(0))
    zero = sample * 0
    if any(not f for f in fs):
        return ()
    derivs = []
    for f in fs:
        col = [f]
        for _ in range(k - 1):
            col.append(poly_derivative(col[-1]))
        derivs.append(col)
    deg_bound = max(sum(len(f) - 1 for f in fs) - k * (k - 1) // 2, 0)
    xs = list(range(deg_bound + 1))
    ys = []
    for x in xs:
        M = [[poly_eval(derivs[j][i], x) + zero for j in range(k)] for i in range(k)]
        ys.append(exact_det(M))
    return poly_trim(_newton_interpolate(xs, ys, zero))


def _newton_interpolate(xs: Sequence[int], ys: Sequence, zero) -> list:
    n = len(xs)
    coef = [y + zero for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # expand Newton form into monomial basis
    poly = [zero] * n
    poly[0] = coef[n - 1]
    deg = 0
    for i in range(n - 2, -1, -1):
        # poly = poly * (t - xs[i]) + coef[i]
        new = [zero] * n
        for d in range(deg + 1):
            new[d + 1] = new[d + 1] + poly[d]
            new[d] = new[d] - poly[d] * xs[i]
        new[0] = new[0] + coef[i]
        poly = new
        deg += 1
    return poly
