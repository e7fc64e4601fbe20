"""Scalar modes and small dense linear algebra over exact rationals or floats.

Every geometric object in this package carries a scalar mode: ``"rational"``
(entries are :class:`fractions.Fraction`, all solves are exact Gaussian
elimination) or ``"float"`` (entries are float64, numpy.linalg does the work).
Matrices are numpy arrays either way; rational matrices use ``dtype=object``.

Squared norms and g-pairings are rational in rational mode; nothing here ever
takes a square root of a Fraction.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

RATIONAL = "rational"
FLOAT = "float"

MODES = (RATIONAL, FLOAT)


class GaussianRational:
    """Complex number with Fraction real/imaginary parts.

    Only the field operations needed by the complexified Chern-connection
    solve are implemented.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        other = _as_gr(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_gr(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_gr(other).__sub__(self)

    def __mul__(self, other):
        other = _as_gr(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_gr(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        other = _as_gr(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm_sq(self):
        return self.re * self.re + self.im * self.im

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __complex__(self):
        return float(self.re) + 1j * float(self.im)


def _as_gr(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, complex):
        raise TypeError("mixing machine complex with GaussianRational")
    return GaussianRational(Fraction(x), 0)


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown scalar mode {mode!r}; expected one of {MODES}")
    return mode


def scalar(x, mode: str):
    """Coerce a number (or 'p/q' string) into the mode's scalar type."""
    if mode == RATIONAL:
        if isinstance(x, float) and not float(x).is_integer():
            # floats that are exact dyadics still convert exactly
            return Fraction(x).limit_denominator(10**12)
        return Fraction(x)
    return float(x)


def zero(mode: str):
    return Fraction(0) if mode == RATIONAL else 0.0


def one(mode: str):
    return Fraction(1) if mode == RATIONAL else 1.0


def to_float(x) -> float:
    if isinstance(x, GaussianRational):
        return float(x.re)
    return float(x)


def _dtype(mode: str):
    return object if mode == RATIONAL else float


def zeros(shape, mode: str) -> np.ndarray:
    if mode == RATIONAL:
        a = np.empty(shape, dtype=object)
        a[...] = Fraction(0)
        return a
    return np.zeros(shape, dtype=float)


def eye(n: int, mode: str) -> np.ndarray:
    a = zeros((n, n), mode)
    for i in range(n):
        a[i, i] = one(mode)
    return a


def matrix(rows, mode: str) -> np.ndarray:
    a = zeros((len(rows), len(rows[0])), mode)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            a[i, j] = scalar(x, mode)
    return a


def mat_to_float(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return np.array([[to_float(x) for x in row] for row in a], dtype=float)
    return np.asarray(a, dtype=float)


def _pivot_size(x):
    if isinstance(x, GaussianRational):
        return x.norm_sq()
    return abs(x)


def gauss_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a x = b by Gaussian elimination with partial pivoting.

    Works over any field whose elements support +,-,*,/ (Fraction,
    GaussianRational, float, complex). ``b`` may be a vector or matrix.
    """
    a = np.array(a, dtype=object)
    vec = b.ndim == 1
    b = np.array(b, dtype=object).reshape(len(b), -1)
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("gauss_solve needs a square matrix")
    for col in range(n):
        piv = max(range(col, n), key=lambda r: _pivot_size(a[r, col]))
        if _pivot_size(a[piv, col]) == 0:
            raise np.linalg.LinAlgError("singular matrix in gauss_solve")
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
        inv_p = a[col, col]
        for r in range(col + 1, n):
            f = a[r, col] / inv_p
            if _pivot_size(f) != 0:
                a[r, col:] = a[r, col:] - f * a[col, col:]
                b[r] = b[r] - f * b[col]
    x = np.empty_like(b)
    for r in range(n - 1, -1, -1):
        acc = b[r]
        if r + 1 < n:
            acc = acc - a[r, r + 1:] @ x[r + 1:]
        x[r] = acc / a[r, r]
    return x[:, 0] if vec else x


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or (b.ndim and np.asarray(b).dtype == object):
        return gauss_solve(a, b)
    return np.linalg.solve(np.asarray(a, float), np.asarray(b, float))


def inv(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return gauss_solve(a, eye(a.shape[0], RATIONAL))
    return np.linalg.inv(np.asarray(a, float))


def det(a: np.ndarray):
    """Determinant; exact (fraction-free not needed at these sizes) for object dtype."""
    if a.dtype != object:
        return np.linalg.det(np.asarray(a, float))
    a = np.array(a, dtype=object)
    n = a.shape[0]
    d = Fraction(1)
    sign = 1
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r, col] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            sign = -sign
        d *= a[col, col]
        for r in range(col + 1, n):
            f = a[r, col] / a[col, col]
            if f != 0:
                a[r, col:] = a[r, col:] - f * a[col, col:]
    return sign * d


def nullspace(a: np.ndarray, tol: float = 1e-12) -> list[np.ndarray]:
    """Basis of the kernel of a (list of vectors). Exact for object dtype."""
    if a.dtype != object:
        a = np.asarray(a, float)
        if a.size == 0:
            return [np.eye(a.shape[1], dtype=float)[i] for i in range(a.shape[1])]
        _, s, vt = np.linalg.svd(a)
        rank = int(np.sum(s > tol * max(a.shape) * (s[0] if len(s) else 1.0)))
        return [vt[i] for i in range(rank, a.shape[1])]
    a = np.array(a, dtype=object)
    m, n = a.shape
    # reduced row echelon form
    pivots = []
    row = 0
    for col in range(n):
        piv = None
        for r in range(row, m):
            if a[r, col] != 0:
                piv = r
                break
        if piv is None:
            continue
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        a[row] = a[row] / a[row, col]
        for r in range(m):
            if r != row and a[r, col] != 0:
                a[r] = a[r] - a[r, col] * a[row]
        pivots.append(col)
        row += 1
        if row == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = zeros(n, RATIONAL)
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r, fc]
        basis.append(v)
    return basis


def is_positive_definite(a: np.ndarray) -> bool:
    """Sylvester's criterion in rational mode, Cholesky in float mode."""
    if a.dtype == object:
        n = a.shape[0]
        return all(det(a[: k + 1, : k + 1]) > 0 for k in range(n))
    try:
        np.linalg.cholesky(np.asarray(a, float))
        return True
    except np.linalg.LinAlgError:
        return False


def max_abs(values) -> float:
    """Max |x| over an iterable of scalars, as a float (0.0 if empty)."""
    m = 0.0
    for v in values:
        if isinstance(v, GaussianRational):
            x = abs(complex(v))
        else:
            x = abs(to_float(v))
        if x > m:
            m = x
    return m


def parse_scalar(text, mode: str):
    """Parse a JSON-borne scalar; rationals may be 'p/q' strings."""
    if isinstance(text, str):
        f = Fraction(text)
        return f if mode == RATIONAL else float(f)
    return scalar(text, mode)


def format_scalar(x) -> object:
    """JSON-ready form: Fractions as 'p/q' strings, floats as numbers."""
    if isinstance(x, Fraction):
        return str(x)
    return float(x)
