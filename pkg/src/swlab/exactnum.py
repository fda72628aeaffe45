"""Exact arithmetic in a quadratic field Q(sqrt d) and dense matrices over it.

A :class:`QuadScalar` is ``(a + b*sqrt(d)) / c`` with integer ``a, b, c``.
A :class:`Matrix` is either exact (two rational matrices ``re + ir*sqrt(d)``
held as ``flint.fmpq_mat``) or float (a numpy array).  Ranks and linear
solves over Q(sqrt d) go through the realification

    a + b*sqrt(d)  ->  [[a, d*b], [b, a]]

whose rational rank is twice the rank over the field.
"""
from __future__ import annotations

import math
import os
from fractions import Fraction
from functools import reduce
from numbers import Rational

import flint
import numpy as np

MAX_ENTRIES = 10**8
FLOAT_TOL = float(os.environ.get("SWLAB_TOL", "1e-8"))


class FieldError(ValueError):
    """Operands live in different quadratic fields."""


class DimensionCapError(ValueError):
    pass


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` square-free."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 0
    s, d, f = 1, n, 2
    while f * f <= d:
        while d % (f * f) == 0:
            d //= f * f
            s *= f
        f += 1
    return s, d


def _join_d(d1: int, d2: int) -> int:
    if d1 == d2 or d2 == 0:
        return d1
    if d1 == 0:
        return d2
    raise FieldError(f"incompatible fields Q(sqrt {d1}) and Q(sqrt {d2})")


class QuadScalar:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int = 0, b: int = 0, c: int = 1, d: int = 0):
        if c == 0:
            raise ZeroDivisionError("zero denominator")
        if d < 0:
            raise ValueError("field discriminant must be nonnegative")
        if d:
            s, d = squarefree_split(d)
            b *= s
            if d == 1:
                a, b, d = a + b, 0, 0
        if d == 0:
            b = 0
        if c < 0:
            a, b, c = -a, -b, -c
        g = math.gcd(math.gcd(a, b), c)
        if g > 1:
            a, b, c = a // g, b // g, c // g
        if a == 0 and b == 0:
            c = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d if b else 0)

    def __setattr__(self, name, value):
        raise AttributeError("QuadScalar is immutable")

    @classmethod
    def coerce(cls, x) -> QuadScalar:
        if isinstance(x, QuadScalar):
            return x
        if isinstance(x, bool):
            return cls(int(x))
        if isinstance(x, int):
            return cls(x)
        if isinstance(x, (Fraction, Rational)):
            return cls(int(x.numerator), 0, int(x.denominator))
        if isinstance(x, flint.fmpq):
            return cls(int(x.p), 0, int(x.q))
        if isinstance(x, flint.fmpz):
            return cls(int(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to QuadScalar")

    @classmethod
    def sqrt(cls, n: int) -> QuadScalar:
        """Exact square root of a nonnegative integer."""
        s, d = squarefree_split(n)
        if d == 0:
            return cls(0)
        return cls(0, s, 1, d)

    @classmethod
    def from_parts(cls, re, ir, d: int) -> QuadScalar:
        re, ir = Fraction(re), Fraction(ir)
        c = re.denominator * ir.denominator // math.gcd(re.denominator, ir.denominator)
        return cls(int(re * c), int(ir * c), c, d)

    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.a, self.c)

    @property
    def irrational_part(self) -> Fraction:
        return Fraction(self.b, self.c)

    def is_rational(self) -> bool:
        return self.b == 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def conjugate(self) -> QuadScalar:
        return QuadScalar(self.a, -self.b, self.c, self.d)

    def norm(self) -> Fraction:
        return Fraction(self.a * self.a - self.d * self.b * self.b, self.c * self.c)

    def __add__(self, other):
        try:
            y = QuadScalar.coerce(other)
        except TypeError:
            return NotImplemented
        d = _join_d(self.d, y.d)
        return QuadScalar(self.a * y.c + y.a * self.c, self.b * y.c + y.b * self.c,
                          self.c * y.c, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.c, self.d)

    def __sub__(self, other):
        try:
            y = QuadScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-y)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            y = QuadScalar.coerce(other)
        except TypeError:
            return NotImplemented
        d = _join_d(self.d, y.d)
        return QuadScalar(self.a * y.a + d * self.b * y.b, self.a * y.b + self.b * y.a,
                          self.c * y.c, d)

    __rmul__ = __mul__

    def inverse(self) -> QuadScalar:
        if self.is_zero():
            raise ZeroDivisionError("QuadScalar division by zero")
        # (a + b r)/c  ->  c (a - b r) / (a^2 - d b^2)
        den = self.a * self.a - self.d * self.b * self.b
        return QuadScalar(self.c * self.a, -self.c * self.b, den, self.d)

    def __truediv__(self, other):
        try:
            y = QuadScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * y.inverse()

    def __rtruediv__(self, other):
        return QuadScalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = QuadScalar(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            y = QuadScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (y.a, y.b, y.c, y.d)

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.c))
        return hash((self.a, self.b, self.c, self.d))

    def __float__(self):
        return (self.a + self.b * math.sqrt(self.d)) / self.c

    def sign(self) -> int:
        """Sign of the real number, decided exactly."""
        # sign(a + b sqrt d) with c > 0
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        big = self.a * self.a - self.d * self.b * self.b
        return sa if big > 0 else (sb if big < 0 else 0)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return not self.is_zero()

    def to_json(self) -> list[int]:
        return [self.a, self.b, self.c]

    @classmethod
    def from_json(cls, triple, d: int) -> QuadScalar:
        if isinstance(triple, (int, float)) and float(triple).is_integer():
            return cls(int(triple))
        a, b, c = triple
        return cls(int(a), int(b), int(c), d)

    def __repr__(self):
        return f"QuadScalar({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self):
        if self.b == 0:
            return str(Fraction(self.a, self.c))
        num = f"{self.a}{self.b:+}√{self.d}" if self.a else f"{self.b}√{self.d}"
        return num if self.c == 1 else f"({num})/{self.c}"


def field_op(x, y, op: str):
    """Dispatch one field operation by name (add, sub, mul, div, neg, eq, is_zero)."""
    x = QuadScalar.coerce(x)
    if op == "neg":
        return -x
    if op == "is_zero":
        return x.is_zero()
    y = QuadScalar.coerce(y)
    if op in ("add", "sub", "mul", "div", "eq"):
        _join_d(x.d, y.d)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "eq":
        return x == y
    raise ValueError(f"unknown field op {op!r}")


def _fmpq(x: Fraction) -> flint.fmpq:
    return flint.fmpq(x.numerator, x.denominator)


def _frac(x: flint.fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def _is_zero_mat(m: flint.fmpq_mat) -> bool:
    return m == flint.fmpq_mat(m.nrows(), m.ncols())


class Matrix:
    """Dense matrix over Q(sqrt d) (``mode='exact'``) or over floats.

    Entries are indexed ``A[i, j]``; exact entries come back as QuadScalar.
    """

    __slots__ = ("rows", "cols", "d", "mode", "tol", "re", "ir", "arr")

    def __init__(self, rows, cols, *, re=None, ir=None, d=0, arr=None, tol=None):
        if rows * cols > MAX_ENTRIES:
            raise DimensionCapError(f"{rows}x{cols} exceeds the {MAX_ENTRIES} entry cap")
        self.rows, self.cols = rows, cols
        if arr is not None:
            self.mode = "float"
            self.arr = np.asarray(arr, dtype=float).reshape(rows, cols)
            self.re = self.ir = None
            self.d = 0
            self.tol = FLOAT_TOL if tol is None else tol
            return
        self.mode = "exact"
        self.arr = None
        self.tol = None
        self.re = re if re is not None else flint.fmpq_mat(rows, cols)
        if d and ir is not None and not _is_zero_mat(ir):
            self.ir, self.d = ir, d
        else:
            self.ir, self.d = None, 0

    # construction -----------------------------------------------------------

    @classmethod
    def from_rows(cls, rows, d: int | None = None) -> Matrix:
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        if any(len(r) != nc for r in rows):
            raise ValueError("ragged rows")
        if any(isinstance(x, float) for r in rows for x in r):
            return cls(nr, nc, arr=np.array([[float(x) for x in r] for r in rows]))
        vals = [QuadScalar.coerce(x) for r in rows for x in r]
        field = reduce(_join_d, (v.d for v in vals), d or 0)
        re = flint.fmpq_mat(nr, nc, [flint.fmpq(v.a, v.c) for v in vals])
        ir = flint.fmpq_mat(nr, nc, [flint.fmpq(v.b, v.c) for v in vals]) if field else None
        return cls(nr, nc, re=re, ir=ir, d=field)

    @classmethod
    def from_float(cls, arr, tol=None) -> Matrix:
        arr = np.atleast_2d(np.asarray(arr, dtype=float))
        return cls(arr.shape[0], arr.shape[1], arr=arr, tol=tol)

    @classmethod
    def identity(cls, n: int, mode: str = "exact") -> Matrix:
        if mode == "float":
            return cls(n, n, arr=np.eye(n))
        m = flint.fmpq_mat(n, n)
        for i in range(n):
            m[i, i] = 1
        return cls(n, n, re=m)

    @classmethod
    def zeros(cls, rows: int, cols: int, mode: str = "exact") -> Matrix:
        if mode == "float":
            return cls(rows, cols, arr=np.zeros((rows, cols)))
        return cls(rows, cols)

    @classmethod
    def diag(cls, values) -> Matrix:
        values = list(values)
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, values) -> Matrix:
        return cls.from_rows([[v] for v in values])

    # basic protocol -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_exact(self) -> bool:
        return self.mode == "exact"

    def _ir(self) -> flint.fmpq_mat:
        return self.ir if self.ir is not None else flint.fmpq_mat(self.rows, self.cols)

    def __getitem__(self, key):
        i, j = key
        if not self.is_exact:
            return float(self.arr[i, j])
        re = _frac(self.re[i, j])
        ir = _frac(self.ir[i, j]) if self.ir is not None else 0
        return QuadScalar.from_parts(re, ir, self.d)

    def entries(self) -> list:
        """Row-major entries."""
        if not self.is_exact:
            return [float(x) for x in self.arr.ravel()]
        re = self.re.entries()
        if self.ir is None:
            return [QuadScalar(int(x.p), 0, int(x.q)) for x in re]
        ir = self.ir.entries()
        return [QuadScalar.from_parts(_frac(a), _frac(b), self.d) for a, b in zip(re, ir)]

    def tolist(self) -> list[list]:
        e = self.entries()
        return [e[i * self.cols:(i + 1) * self.cols] for i in range(self.rows)]

    def to_numpy(self) -> np.ndarray:
        if not self.is_exact:
            return self.arr.copy()
        re = np.array([float(x) for x in self.re.entries()], dtype=float)
        if self.ir is not None:
            re = re + math.sqrt(self.d) * np.array([float(x) for x in self.ir.entries()])
        return re.reshape(self.rows, self.cols)

    def to_float(self, tol=None) -> Matrix:
        return Matrix.from_float(self.to_numpy(), tol=tol)

    def __repr__(self):
        tag = f"Q(sqrt {self.d})" if self.d else ("Q" if self.is_exact else "float")
        return f"Matrix({self.rows}x{self.cols}, {tag})"

    # arithmetic ---------------------------------------------------------------

    def _pair(self, other: Matrix):
        if self.is_exact != other.is_exact:
            a = self if not self.is_exact else self.to_float()
            b = other if not other.is_exact else other.to_float()
            return a, b, "float"
        return self, other, self.mode

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        a, b, mode = self._pair(other)
        if mode == "float":
            return Matrix.from_float(a.arr + b.arr, tol=a.tol)
        d = _join_d(a.d, b.d)
        ir = None
        if d:
            ir = a._ir() + b._ir()
        return Matrix(a.rows, a.cols, re=a.re + b.re, ir=ir, d=d)

    def __neg__(self) -> Matrix:
        if not self.is_exact:
            return Matrix.from_float(-self.arr, tol=self.tol)
        return Matrix(self.rows, self.cols, re=-self.re,
                      ir=-self.ir if self.ir is not None else None, d=self.d)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        a, b, mode = self._pair(other)
        if mode == "float":
            return Matrix.from_float(a.arr @ b.arr, tol=a.tol)
        d = _join_d(a.d, b.d)
        re = a.re * b.re
        ir = None
        if a.ir is not None and b.ir is not None:
            re = re + (a.ir * b.ir) * d
        if a.ir is not None or b.ir is not None:
            ir = a._ir() * b.re + a.re * b._ir()
        return Matrix(a.rows, b.cols, re=re, ir=ir, d=d)

    def scale(self, s) -> Matrix:
        if not self.is_exact:
            return Matrix.from_float(self.arr * float(s), tol=self.tol)
        s = QuadScalar.coerce(s)
        d = _join_d(self.d, s.d)
        sa, sb = _fmpq(s.rational_part), _fmpq(s.irrational_part)
        re = self.re * sa
        ir = None
        if self.ir is not None:
            re = re + self.ir * (sb * d)
        if d:
            ir = self._ir() * sa + self.re * sb
        return Matrix(self.rows, self.cols, re=re, ir=ir, d=d)

    def __mul__(self, s) -> Matrix:
        if isinstance(s, Matrix):
            return NotImplemented
        return self.scale(s)

    __rmul__ = __mul__

    @property
    def T(self) -> Matrix:
        if not self.is_exact:
            return Matrix.from_float(self.arr.T, tol=self.tol)
        return Matrix(self.cols, self.rows, re=self.re.transpose(),
                      ir=self.ir.transpose() if self.ir is not None else None, d=self.d)

    def trace(self):
        if not self.is_exact:
            return float(np.trace(self.arr))
        out = QuadScalar(0)
        for i in range(min(self.rows, self.cols)):
            out = out + self[i, i]
        return out

    def is_zero(self, tol=None) -> bool:
        if not self.is_exact:
            tol = self.tol if tol is None else tol
            return bool(np.all(np.abs(self.arr) <= tol))
        return _is_zero_mat(self.re) and (self.ir is None or _is_zero_mat(self.ir))

    def norm(self) -> float:
        """Max-abs entry (float)."""
        if self.rows * self.cols == 0:
            return 0.0
        return float(np.max(np.abs(self.to_numpy())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def submatrix(self, rows, cols) -> Matrix:
        rows, cols = list(rows), list(cols)
        if not self.is_exact:
            return Matrix.from_float(self.arr[np.ix_(rows, cols)], tol=self.tol)

        def pick(m):
            return flint.fmpq_mat(len(rows), len(cols), [m[i, j] for i in rows for j in cols])

        return Matrix(len(rows), len(cols), re=pick(self.re),
                      ir=pick(self.ir) if self.ir is not None else None, d=self.d)

    def col(self, j: int) -> Matrix:
        return self.submatrix(range(self.rows), [j])

    def hstack(self, other: Matrix) -> Matrix:
        return Matrix.block([[self, other]])

    def vstack(self, other: Matrix) -> Matrix:
        return Matrix.block([[self], [other]])

    @staticmethod
    def block(grid) -> Matrix:
        """Assemble a block matrix from a grid of Matrices."""
        heights = [row[0].rows for row in grid]
        widths = [m.cols for m in grid[0]]
        mats = [m for row in grid for m in row]
        if any(not m.is_exact for m in mats):
            return Matrix.from_float(np.block([[m.to_numpy() for m in row] for row in grid]))
        d = reduce(_join_d, (m.d for m in mats), 0)
        R, C = sum(heights), sum(widths)
        re, ir = flint.fmpq_mat(R, C), flint.fmpq_mat(R, C)
        r0 = 0
        for row, h in zip(grid, heights):
            c0 = 0
            for m, w in zip(row, widths):
                if m.shape != (h, w):
                    raise ValueError("block shapes do not line up")
                for i in range(h):
                    for j in range(w):
                        x = m.re[i, j]
                        if x != 0:
                            re[r0 + i, c0 + j] = x
                        if m.ir is not None:
                            y = m.ir[i, j]
                            if y != 0:
                                ir[r0 + i, c0 + j] = y
                c0 += w
            r0 += h
        return Matrix(R, C, re=re, ir=ir, d=d)

    # realification ----------------------------------------------------------------

    def realify(self) -> flint.fmpq_mat:
        """Rational matrix [[re, d*ir], [ir, re]] of the Q-linear map."""
        if self.ir is None:
            return self.re
        return _realify(self.re, self.ir, self.d)


def _realify(re: flint.fmpq_mat, ir: flint.fmpq_mat, d) -> flint.fmpq_mat:
    r, c = re.nrows(), re.ncols()
    out = flint.fmpq_mat(2 * r, 2 * c)
    for i in range(r):
        for j in range(c):
            a, b = re[i, j], ir[i, j]
            if a != 0:
                out[i, j] = a
                out[r + i, c + j] = a
            if b != 0:
                out[i, c + j] = b * d
                out[r + i, j] = b
    return out


def kron(A: Matrix, B: Matrix) -> Matrix:
    """Kronecker product; row index (i, k) -> i*B.rows + k."""
    R, C = A.rows * B.rows, A.cols * B.cols
    if R * C > MAX_ENTRIES:
        raise DimensionCapError(f"kron result {R}x{C} exceeds the entry cap")
    if not (A.is_exact and B.is_exact):
        return Matrix.from_float(np.kron(A.to_numpy(), B.to_numpy()))
    d = _join_d(A.d, B.d)
    ea, eb = A.entries(), B.entries()
    vals = [QuadScalar(0)] * (R * C)
    br, bc = B.rows, B.cols
    for i in range(A.rows):
        for j in range(A.cols):
            a = ea[i * A.cols + j]
            if a.is_zero():
                continue
            for k in range(br):
                base = (i * br + k) * C + j * bc
                for l in range(bc):
                    b = eb[k * bc + l]
                    if not b.is_zero():
                        vals[base + l] = a * b
    re = flint.fmpq_mat(R, C, [flint.fmpq(v.a, v.c) for v in vals])
    ir = flint.fmpq_mat(R, C, [flint.fmpq(v.b, v.c) for v in vals]) if d else None
    return Matrix(R, C, re=re, ir=ir, d=d)


def _float_rank(arr: np.ndarray, tol: float) -> int:
    """Gaussian elimination with partial pivoting; relative pivot threshold."""
    a = np.array(arr, dtype=float, copy=True)
    if a.size == 0:
        return 0
    scale = np.max(np.abs(a))
    if scale == 0:
        return 0
    thresh = tol * scale
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[p, c]) <= thresh:
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r + 1:] -= np.outer(a[r + 1:, c] / a[r, c], a[r])
        r += 1
    return r


def mat_rank(A: Matrix) -> int:
    if A.rows == 0 or A.cols == 0:
        return 0
    if not A.is_exact:
        return _float_rank(A.arr, A.tol)
    if A.ir is None:
        return A.re.rank()
    return A.realify().rank() // 2


def bareiss_rank(rows) -> int:
    """Fraction-free elimination rank over Q(sqrt d), pure Python.

    Entries are cleared to a common denominator and handled as pairs of
    integers ``(x, y)`` meaning ``x + y*sqrt d``.  Independent of the flint
    path; used as a cross-check on small matrices.
    """
    vals = [QuadScalar.coerce(x) for r in rows for x in r]
    if not vals:
        return 0
    d = reduce(_join_d, (v.d for v in vals), 0)
    den = reduce(lambda x, y: x * y // math.gcd(x, y), (v.c for v in vals), 1)
    ncols = len(rows[0])
    m = [[((v.a * den) // v.c, (v.b * den) // v.c)
          for v in (QuadScalar.coerce(x) for x in r)] for r in rows]

    def mul(p, q):
        return (p[0] * q[0] + d * p[1] * q[1], p[0] * q[1] + p[1] * q[0])

    def sub(p, q):
        return (p[0] - q[0], p[1] - q[1])

    def reduce_content(row):
        g = 0
        for x, y in row:
            g = math.gcd(g, math.gcd(x, y))
        if g > 1:
            row[:] = [(x // g, y // g) for x, y in row]

    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != (0, 0)), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][c]
        for i in range(rank + 1, len(m)):
            q = m[i][c]
            if q == (0, 0):
                continue
            # row_i <- p*row_i - q*row_r stays inside Z[sqrt d]
            m[i] = [sub(mul(p, a), mul(q, b)) for a, b in zip(m[i], m[rank])]
            reduce_content(m[i])
        rank += 1
    return rank


class Solution:
    """Affine solution set ``particular + span(kernel)``; ``None`` particular
    means the system is inconsistent."""

    def __init__(self, particular: Matrix | None, kernel: list[Matrix]):
        self.particular = particular
        self.kernel = kernel

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def unique(self) -> bool:
        return self.consistent and not self.kernel

    def __repr__(self):
        state = "inconsistent" if not self.consistent else f"kernel dim {len(self.kernel)}"
        return f"Solution({state})"


def _rref_solve_rational(A: flint.fmpq_mat, B: flint.fmpq_mat):
    """Particular solutions (one per column of B) and a kernel basis of A."""
    rows, cols, k = A.nrows(), A.ncols(), B.ncols()
    aug = flint.fmpq_mat(rows, cols + k)
    for i in range(rows):
        for j in range(cols):
            x = A[i, j]
            if x != 0:
                aug[i, j] = x
        for j in range(k):
            x = B[i, j]
            if x != 0:
                aug[i, cols + j] = x
    R, rank = aug.rref()
    pivots = []
    for i in range(rank):
        j = next(j for j in range(cols + k) if R[i, j] != 0)
        if j >= cols:
            return None, None
        pivots.append(j)
    part = flint.fmpq_mat(cols, k)
    for i, pc in enumerate(pivots):
        for j in range(k):
            part[pc, j] = R[i, cols + j]
    free = [j for j in range(cols) if j not in set(pivots)]
    kern = []
    for f in free:
        vec = flint.fmpq_mat(cols, 1)
        vec[f, 0] = 1
        for i, pc in enumerate(pivots):
            vec[pc, 0] = -R[i, f]
        kern.append(vec)
    return part, kern


def linear_solve(A: Matrix, b: Matrix) -> Solution:
    """Solve ``A x = b`` (b may have several columns) exactly.

    Float matrices are solved by least squares and declared inconsistent when
    the residual exceeds the tolerance.
    """
    if A.rows != b.rows:
        raise ValueError("A.rows must equal b.rows")
    if not (A.is_exact and b.is_exact):
        Af, bf = A.to_numpy(), b.to_numpy()
        tol = A.tol if not A.is_exact else FLOAT_TOL
        x, *_ = np.linalg.lstsq(Af, bf, rcond=None)
        scale = max(1.0, float(np.max(np.abs(Af))) if Af.size else 1.0)
        if Af.size and np.max(np.abs(Af @ x - bf), initial=0.0) > tol * scale * 10:
            return Solution(None, [])
        _, s, vh = np.linalg.svd(Af) if Af.size else (None, np.zeros(0), np.eye(A.cols))
        r = int(np.sum(s > tol * (s[0] if s.size else 1.0)))
        kern = [Matrix.from_float(vh[i].reshape(-1, 1)) for i in range(r, A.cols)]
        return Solution(Matrix.from_float(x), kern)
    d = _join_d(A.d, b.d)
    if not d:
        part, kern = _rref_solve_rational(A.re, b.re)
        if part is None:
            return Solution(None, [])
        return Solution(Matrix(A.cols, b.cols, re=part),
                        [Matrix(A.cols, 1, re=v) for v in kern])
    Ar = _realify(A.re, A._ir(), d)
    bir = b._ir()
    br = flint.fmpq_mat(2 * b.rows, b.cols)
    for i in range(b.rows):
        for j in range(b.cols):
            br[i, j] = b.re[i, j]
            br[b.rows + i, j] = bir[i, j]
    part, kern = _rref_solve_rational(Ar, br)
    if part is None:
        return Solution(None, [])
    n = A.cols

    def unreal(v: flint.fmpq_mat, k: int) -> Matrix:
        re = flint.fmpq_mat(n, k, [v[i, j] for i in range(n) for j in range(k)])
        ir = flint.fmpq_mat(n, k, [v[n + i, j] for i in range(n) for j in range(k)])
        return Matrix(n, k, re=re, ir=ir, d=d)

    particular = unreal(part, b.cols)
    # the realified kernel has twice the field dimension; keep an independent subset
    basis: list[Matrix] = []
    current = None
    for v in kern:
        cand = unreal(v, 1)
        trial = cand if current is None else current.hstack(cand)
        if mat_rank(trial) > len(basis):
            basis.append(cand)
            current = trial
    return Solution(particular, basis)


def inverse(A: Matrix) -> Matrix:
    if A.rows != A.cols:
        raise ValueError("inverse of non-square matrix")
    if not A.is_exact:
        return Matrix.from_float(np.linalg.inv(A.arr), tol=A.tol)
    sol = linear_solve(A, Matrix.identity(A.rows))
    if not sol.unique:
        raise ZeroDivisionError("matrix is singular")
    return sol.particular


def column_space(A: Matrix) -> Matrix:
    """Columns of A forming a basis of its column space (greedy, left to right)."""
    if not A.is_exact:
        q, r = np.linalg.qr(A.arr)
        # pivoted selection keeps actual columns of A
        keep, acc = [], np.zeros((A.rows, 0))
        for j in range(A.cols):
            trial = np.hstack([acc, A.arr[:, [j]]])
            if _float_rank(trial, A.tol) > acc.shape[1]:
                keep.append(j)
                acc = trial
        return A.submatrix(range(A.rows), keep)
    # pivot columns of rref(A) are independent columns of A
    if A.ir is None:
        R, rank = A.re.rref()
    else:
        R, rank = A.realify().rref()
    piv = []
    for i in range(rank):
        j = next(j for j in range(R.ncols()) if R[i, j] != 0)
        piv.append(j)
    if A.ir is None:
        return A.submatrix(range(A.rows), piv)
    # realified pivots come in pairs (j, cols+j); map back to field columns greedily
    keep: list[int] = []
    cand = sorted({j % A.cols for j in piv})
    acc = None
    for j in cand:
        c = A.col(j)
        trial = c if acc is None else acc.hstack(c)
        if mat_rank(trial) > len(keep):
            keep.append(j)
            acc = trial
    # realified pivots may miss columns only dependent over Q; top up over the field
    if len(keep) < mat_rank(A):
        for j in range(A.cols):
            if j in keep:
                continue
            trial = A.col(j) if acc is None else acc.hstack(A.col(j))
            if mat_rank(trial) > len(keep):
                keep.append(j)
                acc = trial
    keep.sort()
    return A.submatrix(range(A.rows), keep)
