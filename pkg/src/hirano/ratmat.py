"""Exact dense matrices over the rationals.

Entries are :class:`fractions.Fraction` values, which are always stored in
lowest terms, so matrix equality is plain structural equality.  Elimination
clears denominators row by row and then runs fraction-free (Bareiss)
elimination over the integers.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NotSquare

_ZERO = Fraction(0)
_ONE = Fraction(1)


def to_fraction(value) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: every value that enters the kernel must be exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational entry")


class Matrix:
    """Immutable dense matrix of Fractions.

    ``Matrix([[1, 2], [3, 4]])`` builds a 2x2 matrix.  Zero-sized matrices are
    rejected by the constructor; the one exception is an ``n x 0`` matrix,
    obtainable only from :meth:`empty_columns`, which basis routines return for
    a trivial subspace.
    """

    __slots__ = ("_rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(to_fraction(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise DimensionMismatch("matrices must have at least one row and one column")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise DimensionMismatch("ragged rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = width
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, nrows: int, ncols: int) -> "Matrix":
        # rows must already be tuples of Fractions
        m = cls.__new__(cls)
        m._rows = rows
        m.nrows = nrows
        m.ncols = ncols
        m._hash = None
        return m

    @classmethod
    def empty_columns(cls, nrows: int) -> "Matrix":
        return cls._raw(tuple(() for _ in range(nrows)), nrows, 0)

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "Matrix":
        ncols = nrows if ncols is None else ncols
        if nrows < 1 or ncols < 1:
            raise DimensionMismatch("matrices must have at least one row and one column")
        row = (_ZERO,) * ncols
        return cls._raw((row,) * nrows, nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        if n < 1:
            raise DimensionMismatch("identity of order < 1")
        return cls._raw(
            tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)), n, n
        )

    @classmethod
    def diag(cls, *values) -> "Matrix":
        n = len(values)
        vals = [to_fraction(v) for v in values]
        return cls._raw(
            tuple(tuple(vals[i] if i == j else _ZERO for j in range(n)) for i in range(n)), n, n
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        if not columns:
            return cls.empty_columns(nrows)
        return cls(zip(*columns))

    # -- inspection -------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def columns(self) -> list[tuple[Fraction, ...]]:
        return list(zip(*self._rows)) if self.ncols else []

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def is_zero(self) -> bool:
        return not any(any(row) for row in self._rows)

    def trace(self) -> Fraction:
        _require_square(self)
        return sum((self._rows[i][i] for i in range(self.nrows)), _ZERO)

    @property
    def T(self) -> "Matrix":
        if self.ncols == 0:
            raise DimensionMismatch("cannot transpose an n x 0 matrix")
        return Matrix._raw(tuple(zip(*self._rows)), self.ncols, self.nrows)

    # -- arithmetic -------------------------------------------------------

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        rows = tuple(
            tuple(x + y for x, y in zip(r, s)) for r, s in zip(self._rows, other._rows)
        )
        return Matrix._raw(rows, self.nrows, self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        rows = tuple(
            tuple(x - y for x, y in zip(r, s)) for r, s in zip(self._rows, other._rows)
        )
        return Matrix._raw(rows, self.nrows, self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-x for x in r) for r in self._rows), self.nrows, self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if other.ncols == 0:
            return Matrix.empty_columns(self.nrows)
        if self.ncols == 0:
            return Matrix.zeros(self.nrows, other.ncols)
        # clear denominators per row of self and per column of other, multiply
        # in plain ints, then rebuild each entry once
        left_dens, left = _scaled_rows(self._rows)
        right_dens, right_cols = _scaled_rows(zip(*other._rows))
        rows = []
        for da, r in zip(left_dens, left):
            out = []
            for db, c in zip(right_dens, right_cols):
                s = 0
                for x, y in zip(r, c):
                    if x and y:
                        s += x * y
                den = da * db
                out.append(_ZERO if not s else Fraction(s) if den == 1 else Fraction(s, den))
            rows.append(tuple(out))
        return Matrix._raw(tuple(rows), self.nrows, other.ncols)

    def scale(self, k) -> "Matrix":
        k = to_fraction(k)
        return Matrix._raw(tuple(tuple(k * x for x in r) for r in self._rows), self.nrows, self.ncols)

    def __mul__(self, k) -> "Matrix":
        if isinstance(k, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(k)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Matrix":
        return power(self, e)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self._rows))
        return self._hash

    # -- rendering --------------------------------------------------------

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self._rows]

    def __repr__(self) -> str:
        return f"Matrix({self.to_strings()!r})"

    def __str__(self) -> str:
        if self.ncols == 0:
            return f"<{self.nrows}x0 matrix>"
        cells = self.to_strings()
        width = max(len(s) for row in cells for s in row)
        return "\n".join("[" + " ".join(s.rjust(width) for s in row) + "]" for row in cells)


def _scaled_rows(rows) -> tuple[list[int], list[list[int]]]:
    """Per-row lcm of denominators and the rows scaled by it to integers."""
    dens, out = [], []
    for row in rows:
        den = 1
        for x in row:
            d = x.denominator
            if d != 1:
                den = lcm(den, d)
        dens.append(den)
        if den == 1:
            out.append([x.numerator for x in row])
        else:
            out.append([x.numerator * (den // x.denominator) for x in row])
    return dens, out


def _require_square(m: Matrix) -> None:
    if not m.is_square:
        raise NotSquare(f"expected a square matrix, got {m.nrows}x{m.ncols}")


def identity_like(m: Matrix) -> Matrix:
    _require_square(m)
    return Matrix.identity(m.nrows)


def add(lhs: Matrix, rhs: Matrix) -> Matrix:
    return lhs + rhs


def sub(lhs: Matrix, rhs: Matrix) -> Matrix:
    return lhs - rhs


def mul(lhs: Matrix, rhs: Matrix) -> Matrix:
    return lhs @ rhs


def commutator(x: Matrix, y: Matrix) -> Matrix:
    return x @ y - y @ x


def power(m: Matrix, e: int) -> Matrix:
    """``m**e`` by repeated squaring; ``power(m, 0)`` is the identity."""
    _require_square(m)
    if e < 0:
        raise ValueError("negative exponent")
    result = Matrix.identity(m.nrows)
    base = m
    first = True
    while e:
        if e & 1:
            result = base if first else result @ base
            first = False
        e >>= 1
        if e:
            base = base @ base
    return result


def hstack(*blocks: Matrix) -> Matrix:
    nrows = blocks[0].nrows
    if any(b.nrows != nrows for b in blocks):
        raise DimensionMismatch("hstack needs equal row counts")
    rows = tuple(tuple(x for b in blocks for x in b.rows[i]) for i in range(nrows))
    return Matrix._raw(rows, nrows, sum(b.ncols for b in blocks))


def vstack(*blocks: Matrix) -> Matrix:
    ncols = blocks[0].ncols
    if any(b.ncols != ncols for b in blocks):
        raise DimensionMismatch("vstack needs equal column counts")
    rows = tuple(r for b in blocks for r in b.rows)
    return Matrix._raw(rows, len(rows), ncols)


def block_assemble(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> Matrix:
    """Assemble the 2x2 block matrix ``[[a, b], [c, d]]``."""
    if a.nrows != b.nrows or c.nrows != d.nrows or a.ncols != c.ncols or b.ncols != d.ncols:
        raise DimensionMismatch(
            f"blocks {a.shape}, {b.shape}, {c.shape}, {d.shape} are not conformable"
        )
    return vstack(hstack(a, b), hstack(c, d))


def block_split(m: Matrix, rowcut: int, colcut: int) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    if not (0 < rowcut < m.nrows and 0 < colcut < m.ncols):
        raise DimensionMismatch(f"cuts ({rowcut}, {colcut}) are not interior to {m.shape}")
    top, bottom = m.rows[:rowcut], m.rows[rowcut:]

    def take(rows, lo, hi):
        return Matrix._raw(tuple(r[lo:hi] for r in rows), len(rows), hi - lo)

    return (
        take(top, 0, colcut),
        take(top, colcut, m.ncols),
        take(bottom, 0, colcut),
        take(bottom, colcut, m.ncols),
    )


# -- elimination --------------------------------------------------------------


def _integer_rows(m: Matrix) -> list[list[int]]:
    """Scale every row by the lcm of its denominators."""
    out = []
    for row in m.rows:
        den = reduce(lcm, (x.denominator for x in row), 1)
        out.append([x.numerator * (den // x.denominator) for x in row])
    return out


def _bareiss_echelon(a: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of an integer matrix (modified in place).

    Returns the nonzero rows and the pivot columns.
    """
    nrows = len(a)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        pivot_row = a[r]
        pv = pivot_row[c]
        for i in range(r + 1, nrows):
            row = a[i]
            f = row[c]
            if f:
                for j in range(c + 1, ncols):
                    row[j] = (pv * row[j] - f * pivot_row[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (pv * row[j]) // prev
            row[c] = 0
        prev = pv
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: Matrix) -> int:
    if m.ncols == 0:
        return 0
    _, pivots = _bareiss_echelon(_integer_rows(m), m.ncols)
    return len(pivots)


def det(m: Matrix) -> Fraction:
    _require_square(m)
    rows = []
    scale = Fraction(1)
    for row in m.rows:
        den = reduce(lcm, (x.denominator for x in row), 1)
        scale *= den
        rows.append([x.numerator * (den // x.denominator) for x in row])
    n = m.nrows
    sign = 1
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if rows[i][k]), None)
        if p is None:
            return _ZERO
        if p != k:
            rows[k], rows[p] = rows[p], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                rows[i][j] = (rows[k][k] * rows[i][j] - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = rows[k][k]
    return Fraction(sign * rows[n - 1][n - 1]) / scale


def _primitive(vec: list[Fraction]) -> tuple[Fraction, ...]:
    """Scale a nonzero rational vector to a primitive integer vector."""
    den = reduce(lcm, (x.denominator for x in vec), 1)
    ints = [x.numerator * (den // x.denominator) for x in vec]
    g = reduce(gcd, ints, 0)
    return tuple(Fraction(v // g) for v in ints)


def null_space_basis(m: Matrix) -> Matrix:
    """Columns form a basis of ``{x : m x = 0}`` (primitive integer vectors)."""
    n = m.ncols
    echelon, pivots = _bareiss_echelon(_integer_rows(m), n)
    # back substitution to reduced echelon form, in rationals
    red = [[Fraction(x) for x in row] for row in echelon]
    for r in range(len(red) - 1, -1, -1):
        c = pivots[r]
        pv = red[r][c]
        red[r] = [x / pv for x in red[r]]
        for i in range(r):
            f = red[i][c]
            if f:
                red[i] = [x - f * y for x, y in zip(red[i], red[r])]
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        vec = [_ZERO] * n
        vec[f] = _ONE
        for r, c in enumerate(pivots):
            vec[c] = -red[r][f]
        basis.append(_primitive(vec))
    return Matrix.from_columns(basis, n)


def col_space_basis(m: Matrix) -> Matrix:
    """The pivot columns of ``m``: a basis of its column space."""
    if m.ncols == 0:
        return Matrix.empty_columns(m.nrows)
    _, pivots = _bareiss_echelon(_integer_rows(m), m.ncols)
    cols = m.columns()
    return Matrix.from_columns([cols[j] for j in pivots], m.nrows)


def left_null_space_basis(m: Matrix) -> Matrix:
    """Columns ``y`` form a basis of ``{y : y^T m = 0}``."""
    return null_space_basis(m.T)


def inverse(m: Matrix) -> Matrix:
    """Exact inverse; raises ZeroDivisionError when ``m`` is singular.

    Fraction-free Gauss-Jordan on the row-scaled integer matrix: every
    division is exact, and at the end the left block is ``det * I``.
    """
    _require_square(m)
    n = m.nrows
    dens, ints = _scaled_rows(m.rows)
    aug = [row + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(ints)]
    width = 2 * n
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if aug[i][k]), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        if p != k:
            aug[k], aug[p] = aug[p], aug[k]
        pivot_row = aug[k]
        pv = pivot_row[k]
        for i in range(n):
            if i == k:
                continue
            row = aug[i]
            f = row[k]
            if f:
                for j in range(width):
                    row[j] = (pv * row[j] - f * pivot_row[j]) // prev
            elif pv != prev:
                for j in range(width):
                    if row[j]:
                        row[j] = pv * row[j] // prev
        prev = pv
    # aug[i][i] == prev (the determinant of the scaled matrix) for every i
    d = prev
    rows = tuple(
        tuple(Fraction(row[n + j] * dens[j], d) if row[n + j] else _ZERO for j in range(n))
        for row in aug
    )
    return Matrix._raw(rows, n, n)


def solve(m: Matrix, rhs: Matrix) -> Matrix | None:
    """One exact solution ``x`` of ``m x = rhs`` (free variables set to zero), or None."""
    if m.nrows != rhs.nrows:
        raise DimensionMismatch("right-hand side has the wrong number of rows")
    n = m.ncols
    aug = [list(r) + list(s) for r, s in zip(m.rows, rhs.rows)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(aug)) if aug[i][c]), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(any(row[n:]) for row in aug[r:]):
        return None
    sol = [[_ZERO] * rhs.ncols for _ in range(n)]
    for i, c in enumerate(pivots):
        sol[c] = aug[i][n:]
    return Matrix(sol)


# -- polynomials ------------------------------------------------------------------


class Poly:
    """Univariate polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        p = cls([1])
        for r in roots:
            p = p * cls([-to_fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Fraction:
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (_ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (_ZERO,) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            k = to_fraction(other)
            return Poly(k * c for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lead()
        quot = [_ZERO] * max(len(rem) - dq, 0)
        for k in range(len(rem) - dq - 1, -1, -1):
            q = rem[k + dq] / lead
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        return self * (1 / self.lead()) if self.coeffs else self

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def __call__(self, m: Matrix) -> Matrix:
        """Evaluate at a square matrix by Horner's rule."""
        _require_square(m)
        n = m.nrows
        acc = Matrix.zeros(n)
        eye = Matrix.identity(n)
        for c in reversed(self.coeffs):
            acc = acc @ m
            if c:
                acc = acc + eye.scale(c)
        return acc

    def evaluate(self, x) -> Fraction:
        x = to_fraction(x)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mag = abs(c)
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            body = str(mag) if (mag != 1 or i == 0) else ""
            if body and mono:
                body += "*"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body + mono))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, t in terms[1:]:
            out += f" {sign} {t}"
        return out


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (Euclid over the rationals)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: Poly) -> Poly:
    return (p // poly_gcd(p, p.derivative())).monic()


def char_poly(m: Matrix) -> Poly:
    """det(xI - m) by the Faddeev-LeVerrier recurrence."""
    _require_square(m)
    n = m.nrows
    coeffs = [_ZERO] * (n + 1)
    coeffs[n] = _ONE
    eye = Matrix.identity(n)
    aux = Matrix.zeros(n)
    for k in range(1, n + 1):
        aux = m @ aux + eye.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(m @ aux).trace() / k
    return Poly(coeffs)
