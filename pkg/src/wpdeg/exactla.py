"""Exact linear algebra over Q and Q(i).

Scalars are :class:`fractions.Fraction` (the rationals) or :class:`Gauss`
(Gaussian rationals).  A :class:`Gauss` whose imaginary part vanishes is
always demoted to a plain ``Fraction`` inside matrices, so purely rational
computations never pay for complex arithmetic.

Row reduction is fraction-free: every row is scaled to (Gaussian) integers
and reduced with a Bareiss-style Gauss-Jordan sweep, dividing only by the
previous pivot.  Rationals appear again only in the final normalisation.

Vectors are plain tuples of scalars and matrices act on column vectors.
Subspaces are stored by their reduced row-echelon basis, which is unique, so
equality of subspaces is equality of bases.
"""

from __future__ import annotations

import math
import operator
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContainmentError, DimensionMismatchError

ExactScalar = Fraction


class Gauss:
    """A Gaussian rational ``re + im*i`` with exact parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Gauss):
            re, im = re.re, re.im + Fraction(im)
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Gauss is immutable")

    @staticmethod
    def _parts(x):
        if isinstance(x, Gauss):
            return x.re, x.im
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return Fraction(x), Fraction(0)
        return None

    def __add__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return Gauss(self.re + o[0], self.im + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return Gauss(self.re - o[0], self.im - o[1])

    def __rsub__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return Gauss(o[0] - self.re, o[1] - self.im)

    def __mul__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = o
        return Gauss(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        c, d = o
        den = c * c + d * d
        if den == 0:
            raise ZeroDivisionError("Gauss division by zero")
        a, b = self.re, self.im
        return Gauss((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return Gauss(*o) / self

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** -k)
        out = Gauss(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "Gauss":
        return Gauss(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __eq__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return self.re == o[0] and self.im == o[1]

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"Gauss({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


I = Gauss(0, 1)


def to_scalar(x):
    """Coerce ``x`` to an exact scalar (``Fraction`` or non-real ``Gauss``).

    Accepts ints, Fractions, ``"p/q"`` strings and Gauss values.  Floats are
    refused: nothing in this package may round.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Gauss):
        return x.re if x.im == 0 else x
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} {x!r} as an exact scalar")


def conj(x):
    if isinstance(x, Gauss):
        return Gauss(x.re, -x.im)
    return x


def _norm(x):
    if isinstance(x, Gauss) and x.im == 0:
        return x.re
    return x


def is_real_scalar(x) -> bool:
    return not isinstance(x, Gauss) or x.im == 0


def real_part(x) -> Fraction:
    return x.re if isinstance(x, Gauss) else Fraction(x)


def imag_part(x) -> Fraction:
    return x.im if isinstance(x, Gauss) else Fraction(0)


def vector(entries: Iterable) -> tuple:
    return tuple(to_scalar(e) for e in entries)


def dot(u: Sequence, v: Sequence):
    """Bilinear (not Hermitian) dot product."""
    return _norm(sum((a * b for a, b in zip(u, v)), Fraction(0)))


def _split_ints(rows: tuple):
    den = 1
    cplx = False
    for r in rows:
        for x in r:
            if isinstance(x, Gauss):
                cplx = True
                for d in (x.re.denominator, x.im.denominator):
                    if d != 1:
                        den = den * d // math.gcd(den, d)
            else:
                d = x.denominator
                if d != 1:
                    den = den * d // math.gcd(den, d)
    if not cplx:
        return [[x.numerator * (den // x.denominator) for x in r] for r in rows], None, den
    re = [[real_part(x).numerator * (den // real_part(x).denominator) for x in r] for r in rows]
    im = [[imag_part(x).numerator * (den // imag_part(x).denominator) for x in r] for r in rows]
    return re, im, den


def _int_matmul(a: list, bcols: list) -> list:
    mul = operator.mul
    return [[sum(map(mul, r, c)) for c in bcols] for r in a]


def _grid_add(a, b):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def _grid_sub(a, b):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def _join_ints(re: list, im: list | None, den: int) -> tuple:
    zero = Fraction(0)

    def frac(x):
        return Fraction(x, den) if x else zero

    if im is None:
        return tuple(tuple(frac(x) for x in r) for r in re)
    return tuple(
        tuple(Gauss(frac(x), frac(y)) if y else frac(x) for x, y in zip(r, s)) for r, s in zip(re, im)
    )


class Matrix:
    """Immutable dense matrix of exact scalars."""

    __slots__ = ("_rows", "nrows", "ncols", "_int_cache")

    def __init__(self, rows: Iterable[Iterable] = (), ncols: int | None = None):
        data = tuple(tuple(to_scalar(x) for x in r) for r in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise DimensionMismatchError("ragged matrix rows")
            if ncols is not None and ncols != width:
                raise DimensionMismatchError(f"expected {ncols} columns, got {width}")
        else:
            width = 0 if ncols is None else ncols
        object.__setattr__(self, "_rows", data)
        object.__setattr__(self, "nrows", len(data))
        object.__setattr__(self, "ncols", width)

    @classmethod
    def _trusted(cls, rows: tuple, ncols: int) -> "Matrix":
        m = object.__new__(cls)
        object.__setattr__(m, "_rows", rows)
        object.__setattr__(m, "nrows", len(rows))
        object.__setattr__(m, "ncols", ncols)
        return m

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._trusted(
            tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        zero = Fraction(0)
        return cls._trusted(tuple((zero,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        if not columns:
            return cls.zeros(nrows or 0, 0)
        return cls(zip(*columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple:
        return self._rows

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._rows)
        return f"Matrix([{body}])"

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def is_real(self) -> bool:
        return all(not isinstance(x, Gauss) for r in self._rows for x in r)

    def is_integral(self) -> bool:
        return self.is_real() and all(x.denominator == 1 for r in self._rows for x in r)

    def _check_same_shape(self, other: "Matrix"):
        if self.shape != other.shape:
            raise DimensionMismatchError(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_shape(other)
        return Matrix._trusted(
            tuple(tuple(_norm(a + b) for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_shape(other)
        return Matrix._trusted(
            tuple(tuple(_norm(a - b) for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __neg__(self):
        return Matrix._trusted(tuple(tuple(-a for a in r) for r in self._rows), self.ncols)

    def scale(self, c) -> "Matrix":
        c = to_scalar(c)
        return Matrix._trusted(tuple(tuple(_norm(c * a) for a in r) for r in self._rows), self.ncols)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def _ints(self):
        """``(re, im, den)`` with integer grids and a common denominator; cached."""
        try:
            return self._int_cache
        except AttributeError:
            pass
        cache = _split_ints(self._rows)
        object.__setattr__(self, "_int_cache", cache)
        return cache

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
            # one integer product per real/imaginary part, one division at the end
            ar, ai, ad = self._ints()
            br, bi, bd = other._ints()
            bcols_r = list(zip(*br)) if br else [()] * other.ncols
            bcols_i = None
            if bi is not None:
                bcols_i = list(zip(*bi)) if bi else [()] * other.ncols
            re = _int_matmul(ar, bcols_r)
            im = None
            if ai is not None or bcols_i is not None:
                im = [[0] * other.ncols for _ in range(self.nrows)]
                if ai is not None:
                    if bcols_i is not None:
                        re = _grid_sub(re, _int_matmul(ai, bcols_i))
                    im = _grid_add(im, _int_matmul(ai, bcols_r))
                if bcols_i is not None:
                    im = _grid_add(im, _int_matmul(ar, bcols_i))
            return Matrix._trusted(_join_ints(re, im, ad * bd), other.ncols)
        return self.apply(other)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.ncols:
            raise DimensionMismatchError(f"vector of length {len(v)} for {self.shape} matrix")
        col = Matrix._trusted(tuple((to_scalar(x),) for x in v), 1)
        return tuple(r[0] for r in (self @ col)._rows)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise DimensionMismatchError("power of a non-square matrix")
        if k < 0:
            return inverse(self) ** (-k)
        out = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    @property
    def T(self) -> "Matrix":
        if not self._rows:
            return Matrix.zeros(self.ncols, 0)
        return Matrix._trusted(tuple(zip(*self._rows)), self.nrows)

    def conj(self) -> "Matrix":
        return Matrix._trusted(tuple(tuple(conj(a) for a in r) for r in self._rows), self.ncols)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise DimensionMismatchError("hstack row mismatch")
        return Matrix._trusted(
            tuple(r + s for r, s in zip(self._rows, other._rows)), self.ncols + other.ncols
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise DimensionMismatchError("vstack column mismatch")
        return Matrix._trusted(self._rows + other._rows, self.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._trusted(tuple(tuple(self._rows[i][j] for j in cols) for i in rows), len(cols))

    def tolist(self) -> list[list]:
        return [list(r) for r in self._rows]


# ---------------------------------------------------------------------------
# fraction-free elimination


def _row_den(row: Sequence) -> int:
    den = 1
    for x in row:
        if isinstance(x, Gauss):
            ds = (x.re.denominator, x.im.denominator)
        else:
            ds = (x.denominator,)
        for d in ds:
            if d != 1:
                den = den * d // math.gcd(den, d)
    return den


def _integer_row(row: Sequence) -> tuple[list, bool]:
    """Scale ``row`` by the lcm of its denominators.

    Real rows become lists of ints, complex rows lists of ``(re, im)`` int
    pairs.  The flag reports whether the row was complex.
    """
    den = _row_den(row)
    if not any(isinstance(x, Gauss) for x in row):
        return [x.numerator * (den // x.denominator) for x in row], False
    out = []
    for x in row:
        re, im = real_part(x), imag_part(x)
        out.append((re.numerator * (den // re.denominator), im.numerator * (den // im.denominator)))
    return out, True


def _ff_gauss_jordan(rows: list[list], ncols: int, complex_mode: bool = False):
    """Fraction-free Gauss-Jordan on an integral matrix (modified in place).

    On exit the first ``rank`` rows are the reduced rows, every pivot entry
    equals the returned common pivot ``d`` and ``rows[:rank] / d`` is the
    reduced row-echelon form.  Divisions by the previous pivot are exact.
    """
    if complex_mode:
        return _ff_gauss_jordan_complex(rows, ncols)
    nr = len(rows)
    prev = 1
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nr:
            break
        piv = None
        for i in range(r, nr):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        p = pr[c]
        for i in range(nr):
            if i == r:
                continue
            ri = rows[i]
            f = ri[c]
            if f == 0:
                if p != prev:
                    rows[i] = [p * a // prev for a in ri]
                continue
            rows[i] = [(p * a - f * b) // prev for a, b in zip(ri, pr)]
        prev = p
        pivots.append(c)
        r += 1
    return rows, pivots, prev, r


def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gdiv_exact(x, q):
    n = q[0] * q[0] + q[1] * q[1]
    return ((x[0] * q[0] + x[1] * q[1]) // n, (x[1] * q[0] - x[0] * q[1]) // n)


def _ff_gauss_jordan_complex(rows: list[list], ncols: int):
    """Same sweep over Gaussian integers stored as ``(re, im)`` pairs."""
    nr = len(rows)
    prev = (1, 0)
    pivots: list[int] = []
    r = 0
    zero = (0, 0)
    for c in range(ncols):
        if r == nr:
            break
        piv = None
        for i in range(r, nr):
            if rows[i][c] != zero:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        p = pr[c]
        p0, p1 = p
        for i in range(nr):
            if i == r:
                continue
            ri = rows[i]
            f = ri[c]
            if f == zero:
                if p != prev:
                    rows[i] = [_gdiv_exact(_gmul(p, a), prev) for a in ri]
                continue
            f0, f1 = f
            new = []
            for a, b in zip(ri, pr):
                x0 = p0 * a[0] - p1 * a[1] - (f0 * b[0] - f1 * b[1])
                x1 = p0 * a[1] + p1 * a[0] - (f0 * b[1] + f1 * b[0])
                new.append(_gdiv_exact((x0, x1), prev) if prev != (1, 0) else (x0, x1))
            rows[i] = new
        prev = p
        pivots.append(c)
        r += 1
    return rows, pivots, prev, r


def _reduce(m: Matrix) -> tuple[tuple, tuple[int, ...]]:
    """Return (nonzero rref rows, pivot columns) for ``m``."""
    if m.nrows == 0 or m.ncols == 0:
        return (), ()
    work = []
    flags = []
    for r in m.rows:
        ir, cplx = _integer_row(r)
        work.append(ir)
        flags.append(cplx)
    complex_mode = any(flags)
    if complex_mode:
        work = [w if f else [(x, 0) for x in w] for w, f in zip(work, flags)]
    work, pivots, d, rank = _ff_gauss_jordan(work, m.ncols, complex_mode)
    if complex_mode:
        # x / d = x * conj(d) / |d|^2
        n = d[0] * d[0] + d[1] * d[1]
        cd = (d[0], -d[1])
        out = []
        for i in range(rank):
            row = []
            for x in work[i]:
                y0, y1 = _gmul(x, cd)
                row.append(Gauss(Fraction(y0, n), Fraction(y1, n)) if y1 else Fraction(y0, n))
            out.append(tuple(row))
        out = tuple(out)
    else:
        out = tuple(tuple(Fraction(x, d) for x in work[i]) for i in range(rank))
    return out, tuple(pivots)


def rref(m: Matrix) -> Matrix:
    """Reduced row-echelon form of ``m`` (zero rows kept at the bottom)."""
    rows, _ = _reduce(m)
    zero = Fraction(0)
    pad = tuple((zero,) * m.ncols for _ in range(m.nrows - len(rows)))
    return Matrix._trusted(rows + pad, m.ncols)


def rank(m: Matrix) -> int:
    return len(_reduce(m)[1])


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise DimensionMismatchError("inverse of non-square matrix")
    n = m.nrows
    rows, pivots = _reduce(m.hstack(Matrix.identity(n)))
    if tuple(pivots[:n]) != tuple(range(n)) or len(rows) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix._trusted(tuple(r[n:] for r in rows), n)


def det(m: Matrix):
    """Determinant by fraction-free elimination (Bareiss)."""
    if not m.is_square():
        raise DimensionMismatchError("determinant of non-square matrix")
    n = m.nrows
    if n == 0:
        return Fraction(1)
    a = [[Gauss(x) if isinstance(x, Gauss) else x for x in r] for r in m.rows]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return _norm(sign * a[n - 1][n - 1])


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A linear subspace of Q^d or Q(i)^d in canonical (rref) form."""

    __slots__ = ("ambient_dim", "_basis", "_pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vecs = [tuple(x if type(x) is Fraction else to_scalar(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise DimensionMismatchError(
                    f"vector of length {len(v)} in ambient dimension {ambient_dim}"
                )
        basis, pivots = _reduce(Matrix._trusted(tuple(vecs), ambient_dim)) if vecs else ((), ())
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "_basis", basis)
        object.__setattr__(self, "_pivots", pivots)

    @classmethod
    def _from_canonical(cls, ambient_dim: int, basis: tuple, pivots: tuple) -> "Subspace":
        s = object.__new__(cls)
        object.__setattr__(s, "ambient_dim", ambient_dim)
        object.__setattr__(s, "_basis", basis)
        object.__setattr__(s, "_pivots", pivots)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def zero(cls, d: int) -> "Subspace":
        return cls._from_canonical(d, (), ())

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls._from_canonical(d, Matrix.identity(d).rows, tuple(range(d)))

    @classmethod
    def span(cls, vectors: Sequence[Sequence], ambient_dim: int | None = None) -> "Subspace":
        if ambient_dim is None:
            if not vectors:
                raise DimensionMismatchError("ambient dimension needed for an empty span")
            ambient_dim = len(vectors[0])
        return cls(ambient_dim, vectors)

    @property
    def dim(self) -> int:
        return len(self._basis)

    @property
    def basis(self) -> Matrix:
        """Canonical basis as the rows of a ``dim x ambient_dim`` matrix."""
        return Matrix._trusted(self._basis, self.ambient_dim)

    @property
    def vectors(self) -> tuple:
        return self._basis

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    def is_real(self) -> bool:
        return all(not isinstance(x, Gauss) for v in self._basis for x in v)

    def conj(self) -> "Subspace":
        if self.is_real():
            return self
        return Subspace(self.ambient_dim, [tuple(conj(x) for x in v) for v in self._basis])

    def reduce(self, v: Sequence) -> tuple:
        """Residue of ``v`` after eliminating the pivot coordinates."""
        w = list(v)
        for b, p in zip(self._basis, self._pivots):
            c = w[p]
            if c != 0:
                w = [_norm(x - c * y) if y else x for x, y in zip(w, b)]
        return tuple(w)

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError("vector length does not match ambient dimension")
        return all(x == 0 for x in self.reduce([to_scalar(x) for x in v]))

    __contains__ = contains

    def issubspace(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(other.contains(v) for v in self._basis)

    __le__ = issubspace

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._basis == other._basis

    def __hash__(self):
        return hash((self.ambient_dim, self._basis))

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"

    def coordinates(self, v: Sequence) -> tuple:
        """Coefficients of ``v`` in the canonical basis (``v`` must lie in the span)."""
        if not self.contains(v):
            raise ContainmentError("vector is not in the subspace")
        return tuple(to_scalar(v[p]) for p in self._pivots)

    def image_under(self, m: Matrix) -> "Subspace":
        if m.ncols != self.ambient_dim:
            raise DimensionMismatchError("map domain does not match ambient dimension")
        return Subspace(m.nrows, [m.apply(v) for v in self._basis])


def _check_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}"
        )


def kernel(m: Matrix) -> Subspace:
    """The subspace ``{v : m v = 0}``."""
    rows, pivots = _reduce(m)
    n = m.ncols
    free = [c for c in range(n) if c not in set(pivots)]
    zero, one = Fraction(0), Fraction(1)
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for r, p in zip(rows, pivots):
            if r[f] != 0:
                v[p] = _norm(-r[f])
        basis.append(tuple(v))
    return Subspace(n, basis)


def image(m: Matrix) -> Subspace:
    """Column space of ``m``."""
    return Subspace(m.nrows, m.T.rows)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if a.dim == 0:
        return b
    if b.dim == 0:
        return a
    return Subspace(a.ambient_dim, a.vectors + b.vectors)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the Zassenhaus block matrix ``[[A, A], [B, 0]]``."""
    _check_ambient(a, b)
    d = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(d)
    if a.dim == d:
        return b
    if b.dim == d:
        return a
    zero_half = (Fraction(0),) * d
    block = Matrix._trusted(
        tuple(v + v for v in a.vectors) + tuple(v + zero_half for v in b.vectors), 2 * d
    )
    rows, pivots = _reduce(block)
    vecs = [r[d:] for r, p in zip(rows, pivots) if p >= d]
    return Subspace(d, vecs)


def annihilator(s: Subspace) -> Subspace:
    """``{u : u . v = 0 for all v in s}`` under the bilinear dot product."""
    if s.dim == 0:
        return Subspace.full(s.ambient_dim)
    return kernel(s.basis)


def preimage(m: Matrix, s: Subspace) -> Subspace:
    """``{v : m v in s}``."""
    if m.nrows != s.ambient_dim:
        raise DimensionMismatchError("map codomain does not match subspace ambient dimension")
    ann = annihilator(s)
    if ann.dim == 0:
        return Subspace.full(m.ncols)
    return kernel(ann.basis @ m)


def _complement_basis(big: Subspace, small: Subspace) -> list[tuple]:
    """Vectors from ``big``'s canonical basis completing ``small`` to ``big``."""
    if small.dim == 0:
        return list(big.vectors)
    if small.dim == big.dim:
        return []
    if big.dim == big.ambient_dim:
        # unit vectors off the pivots of ``small``
        piv = set(small.pivots)
        one, zero = Fraction(1), Fraction(0)
        return [tuple(one if i == c else zero for i in range(big.ambient_dim))
                for c in range(big.ambient_dim) if c not in piv]
    # coordinates of ``small`` in ``big``'s basis are its entries at big's pivots
    coords = Subspace(big.dim, [tuple(v[p] for p in big.pivots) for v in small.vectors])
    piv = set(coords.pivots)
    return [v for i, v in enumerate(big.vectors) if i not in piv]


def _quotient_data(big: Subspace, small: Subspace):
    _check_ambient(big, small)
    if not small.issubspace(big):
        raise ContainmentError("small subspace is not contained in big subspace")
    d = big.ambient_dim
    middle = _complement_basis(big, small)
    outer = _complement_basis(Subspace.full(d), big)
    frame = Matrix.from_columns(list(small.vectors) + middle + outer)
    inv = inverse(frame)
    k = small.dim
    q = len(middle)
    proj = Matrix._trusted(inv.rows[k : k + q], d)
    section = Matrix.from_columns(middle) if middle else Matrix.zeros(d, 0)
    return proj, section


def quotient_map(big: Subspace, small: Subspace) -> tuple[Matrix, int]:
    """A map ``Q^d -> Q^q`` restricting to a surjection ``big -> big/small``.

    Its kernel on ``big`` is exactly ``small``.  Returns the ``q x d`` matrix
    and the quotient dimension ``q``.
    """
    proj, _ = _quotient_data(big, small)
    return proj, proj.nrows


def quotient_section(big: Subspace, small: Subspace) -> tuple[Matrix, Matrix]:
    """Return ``(proj, lift)`` with ``proj @ lift = 1`` and ``lift`` landing in ``big``."""
    return _quotient_data(big, small)
