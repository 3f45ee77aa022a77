"""Exact arithmetic over Q and Q(sqrt 5) plus exact linear algebra.

Rationals are :class:`fractions.Fraction`.  ``QNum`` is an immutable
``a + b*sqrt5`` with rational parts; ``ExactMatrix`` is a small dense matrix
whose entries are ``QNum``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction, "QNum"]

__all__ = [
    "Rational",
    "QNum",
    "ExactMatrix",
    "SQRT5",
    "TAU",
    "ZERO",
    "ONE",
    "qnum",
    "qnum_sign",
    "phi",
    "phi_matrix",
    "matrix_rank",
    "matrix_det",
    "is_psd",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


@total_ordering
class QNum:
    """An element ``a + b*sqrt5`` of Q(sqrt 5)."""

    __slots__ = ("a", "b", "_hash")

    def __init__(self, a=0, b=0) -> None:
        self.a = _frac(a)
        self.b = _frac(b)
        self._hash = None

    # -- construction / coercion -------------------------------------------
    @classmethod
    def coerce(cls, x) -> QNum:
        if isinstance(x, QNum):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        raise TypeError(f"cannot coerce {x!r} to QNum")

    @classmethod
    def parse(cls, text: str) -> QNum:
        """Parse ``p/q`` or ``p/q+r/s*sqrt5`` (also accepts ``r/s*sqrt5``)."""
        s = text.strip().replace(" ", "")
        m = re.fullmatch(
            r"([+-]?\d+(?:/\d+)?)?(?:([+-]?\d+(?:/\d+)?)\*sqrt5)?", s
        )
        if not s or m is None or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"malformed QNum literal: {text!r}")
        a = Fraction(m.group(1)) if m.group(1) else Fraction(0)
        b = Fraction(m.group(2)) if m.group(2) else Fraction(0)
        return cls(a, b)

    # -- predicates ---------------------------------------------------------
    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, other) -> bool:
        if isinstance(other, QNum):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.a) if self.b == 0 else hash((self.a, self.b))
        return self._hash

    def __lt__(self, other) -> bool:
        try:
            other = QNum.coerce(other)
        except TypeError:
            return NotImplemented
        return qnum_sign(self - other) < 0

    # -- field operations ---------------------------------------------------
    def __add__(self, other) -> QNum:
        if isinstance(other, QNum):
            return QNum(self.a + other.a, self.b + other.b)
        if isinstance(other, (int, Fraction)):
            return QNum(self.a + other, self.b)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> QNum:
        return QNum(-self.a, -self.b)

    def __pos__(self) -> QNum:
        return self

    def __sub__(self, other) -> QNum:
        if isinstance(other, QNum):
            return QNum(self.a - other.a, self.b - other.b)
        if isinstance(other, (int, Fraction)):
            return QNum(self.a - other, self.b)
        return NotImplemented

    def __rsub__(self, other) -> QNum:
        if isinstance(other, (int, Fraction)):
            return QNum(other - self.a, -self.b)
        return NotImplemented

    def __mul__(self, other) -> QNum:
        if isinstance(other, QNum):
            a, b, c, d = self.a, self.b, other.a, other.b
            return QNum(a * c + 5 * b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return QNum(self.a * other, self.b * other)
        return NotImplemented

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``a^2 - 5 b^2``."""
        return self.a * self.a - 5 * self.b * self.b

    def inverse(self) -> QNum:
        if not self:
            raise ZeroDivisionError("QNum division by zero")
        n = self.norm()
        # a^2 = 5 b^2 has no rational solution besides 0
        assert n != 0
        return QNum(self.a / n, -self.b / n)

    def __truediv__(self, other) -> QNum:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("QNum division by zero")
            return QNum(self.a / other, self.b / other)
        if isinstance(other, QNum):
            if other.b == 0:
                return self / other.a
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other) -> QNum:
        if isinstance(other, (int, Fraction)):
            return QNum(other) * self.inverse()
        return NotImplemented

    def __pow__(self, k: int) -> QNum:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> QNum:
        return QNum(self.a, -self.b)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 5 ** 0.5

    def to_mpf(self):
        import mpmath

        return mpmath.mpf(self.a.numerator) / self.a.denominator + (
            mpmath.mpf(self.b.numerator) / self.b.denominator
        ) * mpmath.sqrt(5)

    # -- text form ------------------------------------------------------------
    def __str__(self) -> str:
        def rat(x: Fraction) -> str:
            return f"{x.numerator}/{x.denominator}"

        if self.b == 0:
            return rat(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{rat(self.a)}{sign}{rat(abs(self.b))}*sqrt5"

    def __repr__(self) -> str:
        return f"QNum({str(self)!r})"


def qnum(x) -> QNum:
    """Coerce an int, Fraction, QNum or text literal to ``QNum``."""
    if isinstance(x, str):
        return QNum.parse(x)
    return QNum.coerce(x)


ZERO = QNum(0)
ONE = QNum(1)
SQRT5 = QNum(0, 1)
TAU = QNum(Fraction(1, 2), Fraction(1, 2))


def _sgn(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def qnum_sign(x: Scalar) -> int:
    """Exact sign of ``a + b*sqrt5``."""
    x = QNum.coerce(x)
    sa, sb = _sgn(x.a), _sgn(x.b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with 5 b^2
    cmp = _sgn(x.a * x.a - 5 * x.b * x.b)
    return sa if cmp > 0 else sb


def phi(x: Scalar) -> QNum:
    """Galois conjugation sqrt5 -> -sqrt5."""
    return QNum.coerce(x).conjugate()


# ---------------------------------------------------------------------------
# matrices


class ExactMatrix:
    """Dense matrix over Q(sqrt 5); entries stored as tuples of ``QNum``."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable]) -> None:
        rows = tuple(tuple(QNum.coerce(v) if not isinstance(v, str) else QNum.parse(v) for v in row) for row in data)
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0
        if any(len(r) != self.cols for r in rows):
            raise ValueError("ragged matrix")
        self._data = rows

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> ExactMatrix:
        cols = rows if cols is None else cols
        return cls([[ZERO] * cols for _ in range(rows)])

    @classmethod
    def diag(cls, values: Sequence) -> ExactMatrix:
        n = len(values)
        return cls([[values[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> QNum:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[QNum, ...]:
        return self._data[i]

    def tolist(self) -> list[list[QNum]]:
        return [list(r) for r in self._data]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self._data == other._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols})"

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        d = self._data
        return all(d[i][j] == d[j][i] for i in range(self.rows) for j in range(i))

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(zip(*self._data))

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(
            [[x + y for x, y in zip(r, s)] for r, s in zip(self._data, other._data)]
        )

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(
            [[x - y for x, y in zip(r, s)] for r, s in zip(self._data, other._data)]
        )

    def scale(self, c: Scalar) -> ExactMatrix:
        c = QNum.coerce(c)
        return ExactMatrix([[c * x for x in r] for r in self._data])

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other._data))
        out = []
        for r in self._data:
            row = []
            for c in cols:
                acc = ZERO
                for x, y in zip(r, c):
                    if x and y:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return ExactMatrix(out)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int] | None = None) -> ExactMatrix:
        cols = rows if cols is None else cols
        return ExactMatrix([[self._data[i][j] for j in cols] for i in rows])

    def map(self, fn) -> ExactMatrix:
        return ExactMatrix([[fn(x) for x in r] for r in self._data])

    def to_text(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self._data]

    @classmethod
    def from_text(cls, rows: Sequence[Sequence[str]]) -> ExactMatrix:
        return cls([[QNum.parse(x) for x in r] for r in rows])


def phi_matrix(m: ExactMatrix) -> ExactMatrix:
    """Entrywise Galois conjugation."""
    return m.map(phi)


def _bareiss(rows: list[list[QNum]]) -> tuple[int, QNum, int]:
    """In-place fraction-free elimination.

    Returns ``(rank, last_pivot, swaps)``; for a square full-rank input the
    last pivot is the determinant up to the sign ``(-1)**swaps``.  Pivots are
    chosen as the first nonzero entry in column order.
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    prev = ONE
    r = 0
    swaps = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if rows[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            swaps += 1
        p = rows[r][c]
        for i in range(r + 1, n_rows):
            ri = rows[i]
            f = ri[c]
            rr = rows[r]
            for j in range(c + 1, n_cols):
                v = p * ri[j] - f * rr[j]
                ri[j] = v / prev if prev != ONE else v
            ri[c] = ZERO
        prev = p
        r += 1
    return r, prev, swaps


def matrix_rank(m: ExactMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    rank, _, _ = _bareiss(m.tolist())
    return rank


def matrix_det(m: ExactMatrix) -> QNum:
    if not m.is_square():
        raise ValueError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return ONE
    rank, last, swaps = _bareiss(m.tolist())
    if rank < n:
        return ZERO
    return -last if swaps % 2 else last


def is_psd(m: ExactMatrix) -> bool:
    """Exact positive-semidefiniteness test by symmetric elimination."""
    if not m.is_symmetric():
        raise ValueError("is_psd requires a symmetric matrix")
    a = m.tolist()
    n = m.rows
    alive = list(range(n))
    while alive:
        k = alive[0]
        p = a[k][k]
        s = qnum_sign(p)
        if s < 0:
            return False
        if s == 0:
            # a zero pivot forces the whole row to vanish
            if any(a[k][j] for j in alive):
                return False
            alive.pop(0)
            continue
        rest = alive[1:]
        for i in rest:
            f = a[i][k] / p
            if not f:
                continue
            for j in rest:
                a[i][j] = a[i][j] - f * a[k][j]
        alive = rest
    return True
