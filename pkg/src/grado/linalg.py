"""Exact dense linear algebra over prime fields and the rationals.

Matrices are numpy arrays: ``int64`` entries in ``[0, p)`` for GF(p),
``fractions.Fraction`` objects for the rationals.  Everything is exact;
there is no floating point anywhere in the package.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

# int64 matmul is safe as long as inner_dim * (p-1)^2 stays below 2^62.
_INT64_SAFE = 2**62


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class GF:
    """Prime field GF(p); scalars are canonical ints in [0, p)."""

    def __init__(self, p: int):
        if not (2 <= p < 2**31 and _is_prime(p)):
            raise ValueError(f"field order must be a prime below 2**31, got {p}")
        self.p = p
        self.char = p
        self.size = p  # number of scalars, None for infinite fields

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def asarray(self, data):
        a = np.asarray(data, dtype=np.int64)
        return np.mod(a, self.p)

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def normalize(self, a):
        return np.mod(a, self.p)

    def neg(self, a):
        return np.mod(-a, self.p)

    def inv_scalar(self, a):
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def matmul(self, a, b):
        inner = a.shape[-1] if a.ndim > 1 else a.shape[0]
        if inner * (self.p - 1) ** 2 >= _INT64_SAFE:
            obj = np.dot(a.astype(object), b.astype(object))
            return np.asarray(np.mod(obj, self.p), dtype=np.int64)
        return np.mod(np.dot(a, b), self.p)

    def scalars(self):
        return range(self.p)

    def vectors(self, n):
        """All vectors of length n, lexicographic."""
        for tup in itertools.product(range(self.p), repeat=n):
            yield np.array(tup, dtype=np.int64)

    def random_matrix(self, rng, rows, cols):
        return np.array(
            [[rng.randrange(self.p) for _ in range(cols)] for _ in range(rows)],
            dtype=np.int64,
        ).reshape(rows, cols)

    def scalar_to_json(self, a):
        return int(a)

    def scalar_from_json(self, v):
        if not isinstance(v, int):
            raise ValueError(f"GF({self.p}) scalar must be an integer, got {v!r}")
        return v % self.p


class Rationals:
    """Arbitrary-precision rational field, scalars are Fraction objects."""

    char = 0
    size = None

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def asarray(self, data):
        a = np.asarray(data, dtype=object)
        flat = a.reshape(-1)
        for i, v in enumerate(flat):
            flat[i] = Fraction(v)
        return flat.reshape(a.shape)

    def zeros(self, shape):
        a = np.empty(shape, dtype=object)
        a.reshape(-1)[:] = [Fraction(0)] * a.size
        return a

    def eye(self, n):
        a = self.zeros((n, n))
        for i in range(n):
            a[i, i] = Fraction(1)
        return a

    def normalize(self, a):
        return a

    def neg(self, a):
        return -a

    def inv_scalar(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return Fraction(1) / a

    def matmul(self, a, b):
        if a.size == 0 or b.size == 0:
            rows = a.shape[0] if a.ndim == 2 else 1
            cols = b.shape[1] if b.ndim == 2 else 1
            if a.ndim == 1 and b.ndim == 2:
                return self.zeros((b.shape[1],))
            if a.ndim == 2 and b.ndim == 1:
                return self.zeros((a.shape[0],))
            return self.zeros((rows, cols))
        return np.dot(a, b)

    def vectors(self, n):
        raise ValueError("cannot enumerate vectors over an infinite field")

    def random_matrix(self, rng, rows, cols):
        a = self.zeros((rows, cols))
        for i in range(rows):
            for j in range(cols):
                a[i, j] = Fraction(rng.randrange(-6, 7), rng.randrange(1, 5))
        return a

    def scalar_to_json(self, a):
        f = Fraction(a)
        return f"{f.numerator}/{f.denominator}"

    def scalar_from_json(self, v):
        if isinstance(v, int):
            return Fraction(v)
        if isinstance(v, str):
            return Fraction(v)
        raise ValueError(f"rational scalar must be an int or 'a/b' string, got {v!r}")


QQ = Rationals()


def field_to_json(field):
    if isinstance(field, GF):
        return {"GF": field.p}
    return "Q"


def field_from_json(doc):
    if doc == "Q":
        return QQ
    if isinstance(doc, dict) and set(doc) == {"GF"}:
        return GF(doc["GF"])
    raise ValueError(f"bad field descriptor {doc!r}")


# ---------------------------------------------------------------------------
# row reduction and solvers


def rref(field, mat):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    m = field.asarray(mat) if not isinstance(mat, np.ndarray) else field.normalize(mat.copy())
    if m.ndim != 2:
        raise ValueError("rref expects a 2-D matrix")
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = -1
        for i in range(r, rows):
            if m[i, c] != field.zero:
                pivot = i
                break
        if pivot == -1:
            continue
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        inv = field.inv_scalar(m[r, c])
        m[r] = field.normalize(m[r] * inv)
        for i in range(rows):
            if i != r and m[i, c] != field.zero:
                m[i] = field.normalize(m[i] - m[i, c] * m[r])
        pivots.append(c)
        r += 1
    return m, tuple(pivots)


def row_space(field, mat):
    """Canonical basis (rref, zero rows dropped) of the row space."""
    r, piv = rref(field, mat)
    return r[: len(piv)].copy()


def rank(field, mat):
    if mat.shape[0] == 0 or mat.shape[1] == 0:
        return 0
    return len(rref(field, mat)[1])


def nullspace(field, mat):
    """Basis of the right kernel, returned as rows of a matrix."""
    mat = field.normalize(np.asarray(mat))
    rows, cols = mat.shape if mat.ndim == 2 else (1, mat.shape[0])
    mat = mat.reshape(rows, cols)
    r, piv = rref(field, mat)
    free = [c for c in range(cols) if c not in piv]
    basis = field.zeros((len(free), cols))
    for k, fc in enumerate(free):
        basis[k, fc] = field.one
        for i, pc in enumerate(piv):
            basis[k, pc] = field.normalize(-r[i, fc])
    return basis


def solve(field, a, b):
    """Solve a @ x = b exactly.

    Returns (particular_solution, nullspace_basis_rows) or None when the
    system is inconsistent.  Free variables are set to zero.
    """
    a = field.normalize(np.asarray(a))
    b = field.normalize(np.asarray(b))
    if a.ndim != 2:
        raise ValueError("coefficient matrix must be 2-D")
    vec = b.ndim == 1
    rhs = b.reshape(-1, 1) if vec else b
    if rhs.shape[0] != a.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} vs {rhs.shape}")
    rows, cols = a.shape
    aug = np.concatenate([a, rhs], axis=1)
    r, piv = rref(field, aug)
    sys_piv = [c for c in piv if c < cols]
    if len(sys_piv) != len(piv):
        return None  # pivot in the rhs block: inconsistent
    x = field.zeros((cols, rhs.shape[1]))
    for i, pc in enumerate(sys_piv):
        x[pc] = r[i, cols:]
    if vec:
        return x[:, 0], nullspace(field, a)
    return x, nullspace(field, a)


def solve_unique(field, a, b):
    """Particular solution of a @ x = b, or None.  Ignores the kernel."""
    res = solve(field, a, b)
    return None if res is None else res[0]


def is_invertible(field, a):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("invertibility is defined for square matrices")
    if a.shape[0] == 0:
        return True
    return rank(field, a) == a.shape[0]


def inverse(field, a):
    """Exact inverse of a square matrix, or None if singular."""
    a = field.normalize(np.asarray(a))
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([a, field.eye(n)], axis=1)
    r, piv = rref(field, aug)
    if list(piv[:n]) != list(range(n)):
        return None
    return r[:, n:].copy()


def in_row_space(field, basis_rows, vec):
    """Membership test against a canonical (rref) row basis."""
    v = field.normalize(np.asarray(vec).copy())
    for row in basis_rows:
        lead = _leading_index(field, row)
        if lead is not None and v[lead] != field.zero:
            v = field.normalize(v - v[lead] * row)
    return not v.any() if v.dtype != object else all(x == 0 for x in v)


def _leading_index(field, row):
    for j, x in enumerate(row):
        if x != field.zero:
            return j
    return None


def coords_in_basis(field, basis_rows, vec):
    """Coefficients of vec over independent basis rows, or None."""
    if len(basis_rows) == 0:
        v = np.asarray(vec)
        zero = not v.any() if v.dtype != object else all(x == 0 for x in v)
        return field.zeros((0,)) if zero else None
    res = solve(field, np.asarray(basis_rows).T, vec)
    return None if res is None else res[0]
