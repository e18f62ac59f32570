"""Exact scalar fields and the matrix routines built on them.

Two fields are supported: a prime field F_p (default p = 32003) carried on
int64 numpy arrays, and Q carried on object arrays of ``fractions.Fraction``.
There are no floating point numbers and no tolerances anywhere; every rank,
kernel and solve is exact.

Matrices act on row vectors throughout the package: a map V -> W with
dim V = m, dim W = n is an (m, n) matrix applied as ``v @ M``.  Composition
"first f then g" is therefore the ordinary product ``f @ g``.
"""

from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

DEFAULT_PRIME = 32003

# Largest prime accepted for the int64 backend.  Entries are reduced after
# every product; p**2 * max_inner_dim must stay below 2**63.
_MAX_PRIME = 1 << 20


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Base class for exact scalar fields.

    Subclasses provide element normalization plus the handful of matrix
    primitives (rref, kernels, solves) the rest of the package uses.
    """

    characteristic: int

    def __call__(self, value) -> object:
        raise NotImplementedError

    # -- element ops -------------------------------------------------

    def inv(self, value):
        raise NotImplementedError

    def neg(self, value):
        raise NotImplementedError

    def zero_scalar(self):
        return self(0)

    def one_scalar(self):
        return self(1)

    def scalar_from_int(self, n: int):
        return self(n)

    def scalar_add(self, a, b):
        return self(a + b)

    def scalar_mul(self, a, b):
        return self(a * b)

    def scalar_neg(self, a):
        return self.neg(a)

    # -- matrix constructors -----------------------------------------

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        raise NotImplementedError

    def eye(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def matrix(self, rows) -> np.ndarray:
        """Build a matrix from nested ints/Fractions, normalizing entries."""
        raise NotImplementedError

    def random_matrix(self, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def random_row(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.random_matrix(1, n, rng)

    def stack_rows(self, rows: List[np.ndarray], width: int) -> np.ndarray:
        """Vertically stack (1, width) rows; empty list gives a (0, width) matrix."""
        mats = [r.reshape(1, -1) if r.ndim == 1 else r for r in rows]
        mats = [m for m in mats if m.shape[0] > 0]
        if not mats:
            return self.zeros(0, width)
        return np.vstack(mats)

    def trace(self, a: np.ndarray):
        acc = self.zero_scalar()
        for i in range(min(a.shape)):
            acc = self.scalar_add(acc, a[i, i])
        return acc

    # -- matrix ops --------------------------------------------------

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def scale(self, c, a: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return a.shape == b.shape and bool(np.all(a == b))

    def is_zero(self, a: np.ndarray) -> bool:
        return a.size == 0 or bool(np.all(a == self.zeros(1, 1)[0, 0]))

    # -- elimination -------------------------------------------------

    def rref(self, a: np.ndarray) -> Tuple[np.ndarray, List[int]]:
        """Reduced row echelon form and the pivot column list."""
        raise NotImplementedError

    def rank(self, a: np.ndarray) -> int:
        if a.size == 0:
            return 0
        return len(self.rref(a)[1])

    def right_kernel(self, a: np.ndarray) -> np.ndarray:
        """Rows spanning {x : a @ x^T = 0}, i.e. the kernel of columns."""
        rows, cols = a.shape
        if cols == 0:
            return self.zeros(0, 0)
        if rows == 0:
            return self.eye(cols)
        r, pivots = self.rref(a)
        free = [j for j in range(cols) if j not in pivots]
        basis = self.zeros(len(free), cols)
        one = self.eye(1)[0, 0]
        for k, j in enumerate(free):
            basis[k, j] = one
            for i, pj in enumerate(pivots):
                basis[k, pj] = self.neg(r[i, j])
        return basis

    def left_kernel(self, a: np.ndarray) -> np.ndarray:
        """Rows v with v @ a = 0."""
        return self.right_kernel(a.T)

    def solve_right(self, a: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
        """Some x with a @ x = b, or None if inconsistent."""
        rows, cols = a.shape
        if b.shape[0] != rows:
            raise ValueError("shape mismatch in solve_right")
        width = b.shape[1]
        aug = self.zeros(rows, cols + width)
        if a.size:
            aug[:, :cols] = a
        if b.size:
            aug[:, cols:] = b
        r, pivots = self.rref(aug)
        # Inconsistent iff a pivot lands in the augmented block.
        for pj in pivots:
            if pj >= cols:
                return None
        x = self.zeros(cols, width)
        for i, pj in enumerate(pivots):
            x[pj, :] = r[i, cols:]
        return x

    def solve_left(self, a: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
        """Some x with x @ a = b, or None if inconsistent."""
        xt = self.solve_right(a.T, b.T)
        return None if xt is None else xt.T

    def inverse_matrix(self, a: np.ndarray) -> Optional[np.ndarray]:
        n = a.shape[0]
        if a.shape[0] != a.shape[1]:
            return None
        if n == 0:
            return self.zeros(0, 0)
        x = self.solve_right(a, self.eye(n))
        if x is None or not self.equal(self.matmul(a, x), self.eye(n)):
            return None
        return x

    def row_space(self, a: np.ndarray) -> np.ndarray:
        """A canonical (rref, zero rows dropped) basis of the row space."""
        if a.size == 0:
            return self.zeros(0, a.shape[1] if a.ndim == 2 else 0)
        r, pivots = self.rref(a)
        return r[: len(pivots), :]

    def in_row_space(self, basis: np.ndarray, v: np.ndarray) -> bool:
        if basis.shape[0] == 0:
            return self.is_zero(v)
        return self.solve_left(basis, v.reshape(1, -1)) is not None

    def echelon(self, a: np.ndarray) -> Tuple[np.ndarray, List[int]]:
        """Trimmed rref basis of the row space with its pivot columns."""
        if a.size == 0:
            return self.zeros(0, a.shape[1] if a.ndim == 2 else 0), []
        r, pivots = self.rref(a)
        return r[: len(pivots), :], pivots

    def reduce_rows(self, basis: np.ndarray, pivots: List[int], v: np.ndarray) -> np.ndarray:
        """Residue of the rows of v modulo an echelon basis."""
        if basis.shape[0] == 0 or v.size == 0:
            return v
        return self.sub(v, self.matmul(v[:, pivots], basis))

    # -- serialization -----------------------------------------------

    def describe(self) -> str:
        raise NotImplementedError

    def entry_str(self, value) -> str:
        raise NotImplementedError


class PrimeField(Field):
    """F_p with canonical representatives in [0, p)."""

    def __init__(self, p: int = DEFAULT_PRIME):
        if not _is_prime(p):
            raise ValueError("field order %r is not prime" % (p,))
        if p > _MAX_PRIME:
            raise ValueError("prime %d exceeds the int64-safe bound %d" % (p, _MAX_PRIME))
        self.p = p
        self.characteristic = p

    def __call__(self, value) -> int:
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError("denominator divisible by %d" % self.p)
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        return int(value) % self.p

    def inv(self, value):
        v = int(value) % self.p
        if v == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.p)
        return pow(v, self.p - 2, self.p)

    def neg(self, value):
        return (-int(value)) % self.p

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matrix(self, rows) -> np.ndarray:
        arr = [[self(v) for v in row] for row in rows]
        if not arr or not arr[0]:
            r = len(arr)
            c = len(arr[0]) if arr else 0
            return self.zeros(r, c)
        return np.array(arr, dtype=np.int64)

    def random_matrix(self, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.p, size=(rows, cols), dtype=np.int64)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def scale(self, c, a):
        return (int(c) * a) % self.p

    def matmul(self, a, b):
        if a.shape[1] != b.shape[0]:
            raise ValueError("matmul shape mismatch %r x %r" % (a.shape, b.shape))
        if a.size == 0 or b.size == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return (a @ b) % self.p

    def is_zero(self, a):
        return a.size == 0 or not a.any()

    def rref(self, a: np.ndarray) -> Tuple[np.ndarray, List[int]]:
        m = a.copy() % self.p
        rows, cols = m.shape
        pivots: List[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.nonzero(m[r:, c])[0]
            if nz.size == 0:
                continue
            pr = r + int(nz[0])
            if pr != r:
                m[[r, pr]] = m[[pr, r]]
            m[r] = (m[r] * self.inv(m[r, c])) % self.p
            col = m[:, c].copy()
            col[r] = 0
            # Eliminate the pivot column from every other row at once.
            m = (m - np.outer(col, m[r])) % self.p
            pivots.append(c)
            r += 1
        return m, pivots

    def describe(self) -> str:
        return "p=%d" % self.p

    def entry_str(self, value) -> str:
        return str(int(value) % self.p)


class RationalField(Field):
    """Q on object arrays of Fractions."""

    characteristic = 0

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    def inv(self, value):
        return Fraction(1) / Fraction(value)

    def neg(self, value):
        return -Fraction(value)

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        m = np.empty((rows, cols), dtype=object)
        m[...] = Fraction(0)
        return m

    def eye(self, n: int) -> np.ndarray:
        m = self.zeros(n, n)
        for i in range(n):
            m[i, i] = Fraction(1)
        return m

    def matrix(self, rows) -> np.ndarray:
        r = len(rows)
        c = len(rows[0]) if r else 0
        m = self.zeros(r, c)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                m[i, j] = Fraction(v)
        return m

    def random_matrix(self, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
        ints = rng.integers(-4, 5, size=(rows, cols))
        m = self.zeros(rows, cols)
        for i in range(rows):
            for j in range(cols):
                m[i, j] = Fraction(int(ints[i, j]))
        return m

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def scale(self, c, a):
        return Fraction(c) * a

    def matmul(self, a, b):
        if a.shape[1] != b.shape[0]:
            raise ValueError("matmul shape mismatch %r x %r" % (a.shape, b.shape))
        if a.size == 0 or b.size == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return a.dot(b)

    def is_zero(self, a):
        return a.size == 0 or all(v == 0 for v in a.flat)

    def rref(self, a: np.ndarray) -> Tuple[np.ndarray, List[int]]:
        m = a.copy()
        rows, cols = m.shape
        pivots: List[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            pr = None
            for i in range(r, rows):
                if m[i, c] != 0:
                    pr = i
                    break
            if pr is None:
                continue
            if pr != r:
                m[[r, pr]] = m[[pr, r]]
            m[r] = m[r] * (Fraction(1) / m[r, c])
            for i in range(rows):
                if i != r and m[i, c] != 0:
                    m[i] = m[i] - m[i, c] * m[r]
            pivots.append(c)
            r += 1
        return m, pivots

    def describe(self) -> str:
        return "Q"

    def entry_str(self, value) -> str:
        f = Fraction(value)
        return str(f.numerator) if f.denominator == 1 else "%d/%d" % (f.numerator, f.denominator)


def field_from_string(text: str) -> Field:
    """Parse ``p=<prime>`` or ``Q`` into a Field."""
    t = text.strip()
    if t in ("Q", "QQ", "rationals"):
        return RationalField()
    if t.startswith("p="):
        return PrimeField(int(t[2:]))
    if t.isdigit():
        return PrimeField(int(t))
    raise ValueError("cannot parse field spec %r" % (text,))


def kron(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the field's normalization."""
    if a.size == 0 or b.size == 0:
        return field.zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    out = np.kron(a, b)
    if isinstance(field, PrimeField):
        out = out % field.p
    return out
