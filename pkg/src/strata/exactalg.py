"""Exact arithmetic: rationals, number fields Q[z]/(m(z)) and fraction-free linear algebra.

Rationals are :class:`fractions.Fraction`. A number field is a quotient ring of
Q[z] by a rational polynomial ``min_poly``; irreducibility is never assumed,
and a failed inversion surfaces the factor of ``min_poly`` it discovered as
:class:`ZeroDivisor`.

All polynomials (field moduli and element representatives) are stored
constant-term first.
"""
from __future__ import annotations

import numbers
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


class ZeroDivisor(ArithmeticError):
    """Inversion hit a nontrivial common factor with the modulus.

    ``factor`` is a monic proper divisor of the field's ``min_poly``
    (constant-term first); the computation may be retried in
    ``NumberField(factor)``.
    """

    def __init__(self, factor):
        self.factor = tuple(factor)
        super().__init__(f"modulus has the proper factor {format_poly(self.factor)}")


def to_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, FieldElement) and value.field.degree == 1:
        return value.coeffs[0]
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --- dense univariate polynomials over Q, constant-term first -------------

def poly_trim(p: Sequence) -> tuple:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_add(p, q) -> tuple:
    n = max(len(p), len(q))
    return poly_trim(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def poly_sub(p, q) -> tuple:
    n = max(len(p), len(q))
    return poly_trim(
        (p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)
    )


def poly_mul(p, q) -> tuple:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_trim(out)


def poly_scale(p, c) -> tuple:
    return poly_trim(c * a for a in p)


def poly_divmod(p, q) -> tuple[tuple, tuple]:
    """Quotient and remainder of ``p`` by nonzero ``q`` over a field."""
    q = poly_trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(poly_trim(p))
    if len(rem) < len(q):
        return (), tuple(rem)
    lead = q[-1]
    quot = [0] * (len(rem) - len(q) + 1)
    for shift in range(len(rem) - len(q), -1, -1):
        c = rem[shift + len(q) - 1] / lead
        quot[shift] = c
        if c != 0:
            for j, b in enumerate(q):
                rem[shift + j] -= c * b
    return poly_trim(quot), poly_trim(rem[: len(q) - 1])


def poly_monic(p) -> tuple:
    p = poly_trim(p)
    lead = p[-1]
    return tuple(a / lead for a in p)


def poly_derivative(p) -> tuple:
    return poly_trim(i * p[i] for i in range(1, len(p)))


def poly_eval(p, x):
    acc = 0
    for a in reversed(p):
        acc = acc * x + a
    return acc


def format_poly(p, var: str = "z") -> str:
    terms = []
    for k, c in enumerate(p):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        coef = format_rational(Fraction(c)) if not isinstance(c, FieldElement) else f"({c})"
        if mono and coef == "1":
            terms.append(mono)
        elif mono and coef == "-1":
            terms.append("-" + mono)
        else:
            terms.append(coef + ("*" + mono if mono else ""))
    return " + ".join(reversed(terms)) or "0"


def _xgcd_inverse(a: tuple, m: tuple) -> tuple:
    """Inverse of ``a`` modulo ``m`` over Q, or raise ZeroDivisor with gcd(a, m)."""
    r0, r1 = poly_trim(m), poly_trim(a)
    s0, s1 = (), (Fraction(1),)
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
    # r0 = gcd up to a unit, r0 == s0 * a (mod m)
    if len(r0) > 1:
        raise ZeroDivisor(poly_monic(r0))
    return poly_scale(s0, 1 / r0[0])


# --- number fields ---------------------------------------------------------

class NumberField:
    """The quotient ring Q[z]/(min_poly).

    ``NumberField([0, 1])`` is Q itself and takes a scalar fast path.
    """

    __slots__ = ("min_poly", "degree", "_reducer", "_key")

    def __init__(self, min_poly: Iterable):
        poly = poly_trim(to_rational(c) for c in min_poly)
        if len(poly) < 2:
            raise ValueError("min_poly must have degree >= 1")
        self.min_poly = poly
        self.degree = len(poly) - 1
        monic = poly_monic(poly)
        # z^n = -sum_{k<n} monic[k] z^k
        self._reducer = tuple(-c for c in monic[:-1])
        self._key = monic

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def __eq__(self, other):
        return isinstance(other, NumberField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.is_rational:
            return "QQ"
        return f"NumberField({format_poly(self.min_poly)})"

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field == self:
                return value
            if value.field.degree == 1:
                return self._const(value.coeffs[0])
            raise TypeError(f"cannot coerce element of {value.field!r} into {self!r}")
        if isinstance(value, (list, tuple)):
            return self.from_poly([to_rational(c) for c in value])
        return self._const(to_rational(value))

    def _const(self, q: Fraction) -> "FieldElement":
        if self.is_rational:
            return FieldElement(self, (q,))
        return FieldElement(self, (q,) + (Fraction(0),) * (self.degree - 1))

    def from_poly(self, p: Sequence) -> "FieldElement":
        """Residue class of the rational polynomial ``p`` (constant-term first)."""
        return FieldElement(self, self._reduce(list(p)))

    def _reduce(self, p: list) -> tuple:
        n = self.degree
        p = [to_rational(c) for c in p]
        if self.is_rational:
            if len(p) > 1:
                root = self._reducer[0]
                return (poly_eval(p, root),)
            return (p[0] if p else Fraction(0),)
        red = self._reducer
        for k in range(len(p) - 1, n - 1, -1):
            c = p[k]
            if c:
                base = k - n
                for j in range(n):
                    p[base + j] += c * red[j]
        p = p[:n]
        p.extend([Fraction(0)] * (n - len(p)))
        return tuple(p)

    @property
    def zero(self) -> "FieldElement":
        return self._const(Fraction(0))

    @property
    def one(self) -> "FieldElement":
        return self._const(Fraction(1))

    @property
    def gen(self) -> "FieldElement":
        """The class of z."""
        return self.from_poly([0, 1])

    def to_json(self) -> dict:
        return {"min_poly": [format_rational(c) for c in self.min_poly]}

    @classmethod
    def from_json(cls, obj) -> "NumberField":
        return cls(obj["min_poly"])


QQ = NumberField([0, 1])


def quadratic_field(d: int) -> NumberField:
    """Q(sqrt(d)) as Q[z]/(z^2 - d)."""
    return NumberField([-d, 0, 1])


class FieldElement:
    """Element of a :class:`NumberField`, stored as its reduced representative."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple):
        if len(coeffs) != field.degree:
            raise ValueError("coefficient count must equal the field degree")
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return self, other
            if other.field.degree == 1:
                return self, self.field(other)
            if self.field.degree == 1:
                return other.field(self), other
            raise TypeError(f"mixed fields {self.field!r} and {other.field!r}")
        if isinstance(other, (int, Fraction)):
            return self, self.field._const(Fraction(other))
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return FieldElement(a.field, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return FieldElement(a.field, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(x * other for x in self.coeffs))
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if a.field.degree == 1:
            return FieldElement(a.field, (a.coeffs[0] * b.coeffs[0],))
        return FieldElement(a.field, a.field._reduce(list(_raw_mul(a.coeffs, b.coeffs))))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return nf_inverse(self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.field, tuple(x / other for x in self.coeffs))
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * nf_inverse(b)

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return b * nf_inverse(a)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else nf_inverse(self)
        n = abs(n)
        result = self.field.one
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                try:
                    a, b = self._coerce(other)
                except TypeError:
                    return False
                return a.coeffs == b.coeffs
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        if self.is_rational():
            return format_rational(self.coeffs[0])
        return format_poly(self.coeffs)

    def to_json(self) -> list:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, field: NumberField, obj) -> "FieldElement":
        return field.from_poly([Fraction(s) for s in obj])

    def substitute(self, image: "FieldElement") -> "FieldElement":
        """Evaluate the representative polynomial at ``image`` (same field)."""
        acc = image.field.zero
        for c in reversed(self.coeffs):
            acc = acc * image + c
        return acc


def _raw_mul(p, q) -> list:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] += a * b
    return out


def nf_inverse(x: FieldElement) -> FieldElement:
    """Multiplicative inverse of ``x`` in its quotient ring.

    Raises ZeroDivisionError for ``x == 0`` and :class:`ZeroDivisor` when ``x``
    shares a factor with the modulus.
    """
    if not x:
        raise ZeroDivisionError("inverse of zero")
    field = x.field
    if field.is_rational:
        return FieldElement(field, (1 / x.coeffs[0],))
    inv = _xgcd_inverse(poly_trim(x.coeffs), field.min_poly)
    return field.from_poly(list(inv))


# --- fraction-free linear algebra -------------------------------------------

def _zero_like(x):
    return x * 0


def exact_det(M: Sequence[Sequence]):
    """Determinant by Bareiss fraction-free elimination.

    Entries may be Fractions, ints or FieldElements; the divisions by the
    previous pivot are exact.
    """
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    if any(len(row) != n for row in A):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return _zero_like(A[0][0])
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                v = akk * rowi[j] - aik * rowk[j]
                rowi[j] = v if prev == 1 else v / prev
            rowi[k] = _zero_like(aik)
        prev = akk
    det = A[n - 1][n - 1]
    return det if sign == 1 else -det


def det_int(M: Sequence[Sequence[int]]) -> int:
    """Bareiss determinant of an integer matrix using exact integer division."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def _gauss_jordan(M: Sequence[Sequence], ncols: int):
    """Fraction-free Gauss-Jordan; returns (reduced rows, pivot columns)."""
    A = [list(row) for row in M]
    nrows = len(A)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        rowr = A[r]
        for i in range(nrows):
            if i == r:
                continue
            rowi = A[i]
            aic = rowi[c]
            if aic == 0:
                if prev != 1:
                    A[i] = [v * piv / prev for v in rowi]
                elif piv != 1:
                    A[i] = [v * piv for v in rowi]
                continue
            A[i] = [
                (piv * rowi[j] - aic * rowr[j]) / prev if prev != 1 else piv * rowi[j] - aic * rowr[j]
                for j in range(ncols)
            ]
        prev = piv
        pivots.append(c)
        r += 1
    return A, pivots


def matrix_rank(M: Sequence[Sequence], ncols: int | None = None) -> int:
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M or ncols == 0:
        return 0
    return len(_gauss_jordan(M, ncols)[1])


def _is_rational_entry(x) -> bool:
    return isinstance(x, (int, Fraction)) or (isinstance(x, FieldElement) and x.field.is_rational)


def _primitive(vec: list, free_index: int) -> list:
    """Scale a rational vector to coprime integers with a positive free entry."""
    from math import gcd, lcm

    qs = [to_rational(v) if isinstance(v, FieldElement) else Fraction(v) for v in vec]
    den = 1
    for q in qs:
        den = lcm(den, q.denominator)
    ints = [int(q * den) for q in qs]
    g = 0
    for i in ints:
        g = gcd(g, i)
    g = g or 1
    if ints[free_index] < 0:
        g = -g
    scale = Fraction(den, g)
    return [v * scale for v in vec]


def exact_nullspace(M: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of the right nullspace of ``M`` (rows of entries).

    Each basis vector has one free coordinate set; over Q the vector is
    rescaled to coprime integers with that coordinate positive.
    """
    if ncols is None:
        if not M:
            raise ValueError("ncols is required for an empty matrix")
        ncols = len(M[0])
    sample = next((x for row in M for x in row), 0)
    zero = _zero_like(sample)
    one = zero + 1
    if not M:
        return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]
    A, pivots = _gauss_jordan(M, ncols)
    pivset = set(pivots)
    basis = []
    rational = all(_is_rational_entry(x) for row in M for x in row)
    for free in range(ncols):
        if free in pivset:
            continue
        v = [zero] * ncols
        v[free] = one
        for row_idx, pc in enumerate(pivots):
            v[pc] = -A[row_idx][free] / A[row_idx][pc]
        if rational:
            v = _primitive(v, free)
        basis.append(v)
    return basis


def mat_vec(M: Sequence[Sequence], v: Sequence) -> list:
    return [sum((a * b for a, b in zip(row, v)), _zero_like(v[0]) if v else 0) for row in M]
