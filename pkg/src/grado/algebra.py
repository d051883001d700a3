"""Finite-dimensional associative unital algebras given by structure constants.

An algebra lives over an exact field from :mod:`grado.linalg`; elements are
coordinate vectors over the distinguished basis.  Associativity and the unit
laws are checked eagerly at construction, so downstream code can assume it is
working with a genuine ring.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import linalg
from .linalg import GF


class SearchBudgetExceeded(Exception):
    """Raised when an exhaustive enumeration would exceed its budget."""


class StructureAlgebra:
    """Associative unital algebra defined by a (d, d, d) structure tensor.

    ``table[i, j]`` holds the coordinates of ``b_i * b_j``.
    """

    def __init__(self, field, table, unit, basis_names=None, validate=True):
        self.field = field
        self.table = field.asarray(table)
        if self.table.ndim != 3 or len(set(self.table.shape)) > 1:
            raise ValueError(f"structure tensor must be (d, d, d), got {self.table.shape}")
        self.dim = self.table.shape[0]
        self.unit = field.asarray(unit)
        if self.unit.shape != (self.dim,):
            raise ValueError("unit vector has the wrong length")
        self.basis_names = list(basis_names) if basis_names else [f"b{i}" for i in range(self.dim)]
        if len(self.basis_names) != self.dim:
            raise ValueError("need one name per basis vector")
        self._left = None
        self._right = None
        if validate:
            self._validate()

    # -- multiplication -----------------------------------------------------

    def mul(self, x, y):
        m = np.tensordot(x, self.table, axes=([0], [0]))
        return self.field.normalize(np.dot(y, m))

    def left_matrix(self, x):
        """Matrix L with L @ v = x * v."""
        return self.field.normalize(np.tensordot(x, self.table, axes=([0], [0])).T)

    def right_matrix(self, y):
        """Matrix R with R @ v = v * y."""
        return self.field.normalize(np.tensordot(y, self.table, axes=([0], [1])).T)

    @property
    def left_basis_matrices(self):
        if self._left is None:
            self._left = [self.table[i].T.copy() for i in range(self.dim)]
        return self._left

    @property
    def right_basis_matrices(self):
        if self._right is None:
            self._right = [self.table[:, j, :].T.copy() for j in range(self.dim)]
        return self._right

    def basis_vector(self, i):
        v = self.field.zeros((self.dim,))
        v[i] = self.field.one
        return v

    def element(self, coeffs):
        return self.field.asarray(coeffs)

    def power(self, x, n):
        acc = self.unit.copy()
        for _ in range(n):
            acc = self.mul(acc, x)
        return acc

    def is_idempotent(self, x):
        return array_eq(self.mul(x, x), x)

    def is_central(self, x):
        lx = self.left_matrix(x)
        rx = self.right_matrix(x)
        return array_eq(lx, rx)

    def is_commutative(self):
        return all(array_eq(self.table[i, j], self.table[j, i])
                   for i in range(self.dim) for j in range(i))

    # -- validation ----------------------------------------------------------

    def _validate(self):
        f, d = self.field, self.dim
        lu = self.left_matrix(self.unit)
        ru = self.right_matrix(self.unit)
        if not (array_eq(lu, f.eye(d)) and array_eq(ru, f.eye(d))):
            raise ValueError("unit vector is not a two-sided identity")
        c2 = self.table.reshape(d * d, d)
        lhs = f.matmul(c2, c2.reshape(d, d * d)) if isinstance(f, GF) else np.dot(c2, c2.reshape(d, d * d))
        lhs = f.normalize(lhs).reshape(d, d, d, d)  # [i, j, l, k] = ((b_i b_j) b_l)_k
        x = self.table.transpose(0, 2, 1).reshape(d * d, d)  # [(i,k), m] = c[i, m, k]
        rhs = f.matmul(x, c2.T) if isinstance(f, GF) else np.dot(x, c2.T)
        rhs = f.normalize(rhs).reshape(d, d, d, d)  # [i, k, j, l] = (b_i (b_j b_l))_k
        rhs = rhs.transpose(0, 2, 3, 1)
        if not array_eq(lhs, rhs):
            bad = _first_mismatch(lhs, rhs)
            raise ValueError(f"structure constants are not associative at triple {bad[:3]}")

    # -- derived algebras ----------------------------------------------------

    def corner(self, basis_rows, unit_vec, names=None):
        """Algebra structure on a multiplicatively closed subspace.

        ``basis_rows`` are ambient coordinates (independent rows), ``unit_vec``
        the identity of the corner.  Returns (algebra, embedding) where
        ``embedding`` maps corner coordinates to ambient ones (rows = corner
        basis).
        """
        f = self.field
        basis = np.asarray(basis_rows)
        k = basis.shape[0]
        table = f.zeros((k, k, k))
        for i in range(k):
            for j in range(k):
                prod = self.mul(basis[i], basis[j])
                coords = linalg.coords_in_basis(f, basis, prod)
                if coords is None:
                    raise ValueError("subspace is not closed under multiplication")
                table[i, j] = coords
        unit = linalg.coords_in_basis(f, basis, unit_vec)
        if unit is None:
            raise ValueError("designated unit does not lie in the subspace")
        sub = StructureAlgebra(f, table, unit, basis_names=names)
        return sub, basis

    def change_of_basis(self, t):
        """Same algebra expressed over the basis given by the rows of t."""
        f = self.field
        tinv = linalg.inverse(f, np.asarray(t).T)  # columns = new basis vectors
        if tinv is None:
            raise ValueError("basis change matrix is singular")
        d = self.dim
        table = f.zeros((d, d, d))
        for i in range(d):
            for j in range(d):
                prod = self.mul(t[i], t[j])
                table[i, j] = f.normalize(np.dot(tinv, prod))
        unit = f.normalize(np.dot(tinv, self.unit))
        return StructureAlgebra(f, table, unit, basis_names=self.basis_names)

    def __repr__(self):
        return f"StructureAlgebra(dim={self.dim}, field={self.field!r})"


def array_eq(a, b):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    if a.dtype == object or b.dtype == object:
        return all(x == y for x, y in zip(a.reshape(-1), b.reshape(-1)))
    return bool(np.array_equal(a, b))


def _first_mismatch(a, b):
    diff = np.argwhere(np.asarray(a != b))
    return tuple(int(v) for v in diff[0])


class Subspace:
    """Subspace of an algebra's underlying vector space, in canonical rref form."""

    def __init__(self, algebra, basis_rows):
        self.algebra = algebra
        b = np.asarray(basis_rows)
        if b.size == 0:
            self.basis = algebra.field.zeros((0, algebra.dim))
        else:
            self.basis = linalg.row_space(algebra.field, b.reshape(-1, algebra.dim))

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, algebra.field.zeros((0, algebra.dim)))

    @classmethod
    def full(cls, algebra):
        return cls(algebra, algebra.field.eye(algebra.dim))

    @property
    def dim(self):
        return self.basis.shape[0]

    def is_zero(self):
        return self.dim == 0

    def contains(self, vec):
        return linalg.in_row_space(self.algebra.field, self.basis, vec)

    def contains_subspace(self, other):
        return all(self.contains(row) for row in other.basis)

    def coords_of(self, vec):
        return linalg.coords_in_basis(self.algebra.field, self.basis, vec)

    def add(self, other):
        self._check(other)
        return Subspace(self.algebra, np.concatenate([self.basis, other.basis]))

    def intersect(self, other):
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.algebra)
        # kernel of [B1^T | -B2^T] gives matching coefficient pairs
        stacked = np.concatenate([self.basis.T, -other.basis.T], axis=1)
        ker = linalg.nullspace(self.algebra.field, self.algebra.field.normalize(stacked))
        vecs = [self.algebra.field.normalize(np.dot(row[: self.dim], self.basis)) for row in ker]
        return Subspace(self.algebra, np.array(vecs) if vecs else self.basis[:0])

    def __eq__(self, other):
        return (isinstance(other, Subspace) and other.algebra is self.algebra
                and array_eq(self.basis, other.basis))

    def __hash__(self):
        raise TypeError("subspaces are not hashable")

    def _check(self, other):
        if other.algebra is not self.algebra:
            raise ValueError("subspaces belong to different algebras")

    def __repr__(self):
        return f"Subspace(dim={self.dim} of {self.algebra.dim})"


def product_span(x: Subspace, y: Subspace) -> Subspace:
    """Span of all products x*y over the two bases."""
    if x.algebra is not y.algebra:
        raise ValueError("subspaces belong to different algebras")
    alg = x.algebra
    prods = [alg.mul(u, v) for u in x.basis for v in y.basis]
    if not prods:
        return Subspace.zero(alg)
    return Subspace(alg, np.array(prods))


def center(algebra: StructureAlgebra) -> Subspace:
    """Elements commuting with every basis vector."""
    rows = []
    for i in range(algebra.dim):
        li = algebra.left_basis_matrices[i]
        ri = algebra.right_basis_matrices[i]
        rows.append(algebra.field.normalize(li - ri))
    stacked = np.concatenate(rows, axis=0)
    ker = linalg.nullspace(algebra.field, stacked)
    return Subspace(algebra, ker)


def centralizer(algebra: StructureAlgebra, sub: Subspace) -> Subspace:
    """Elements commuting with everything in the subspace."""
    rows = []
    for v in sub.basis:
        rows.append(algebra.field.normalize(algebra.left_matrix(v) - algebra.right_matrix(v)))
    if not rows:
        return Subspace.full(algebra)
    ker = linalg.nullspace(algebra.field, np.concatenate(rows, axis=0))
    return Subspace(algebra, ker)


def ideal_identity(j: Subspace, within: Subspace | None = None):
    """Two-sided identity of the ideal J, or None if the system is inconsistent.

    ``within`` (default: the whole algebra) is the ambient in which J must be
    closed under multiplication; a violation raises ValueError.
    """
    alg = j.algebra
    f = alg.field
    amb = within if within is not None else Subspace.full(alg)
    for a in amb.basis:
        for x in j.basis:
            if not (j.contains(alg.mul(a, x)) and j.contains(alg.mul(x, a))):
                raise ValueError("subspace is not an ideal of the given ambient")
    if j.dim == 0:
        return f.zeros((alg.dim,))
    # e = sum c_k j_k with e*x = x and x*e = x for all basis x of J
    cols = []
    rhs = []
    for x in j.basis:
        lx = alg.right_matrix(x)  # applied to e: e*x
        rx = alg.left_matrix(x)   # x*e
        cols.append(np.dot(lx, j.basis.T))
        cols.append(np.dot(rx, j.basis.T))
        rhs.extend([x, x])
    a = f.normalize(np.concatenate(cols, axis=0))
    b = f.normalize(np.concatenate([np.asarray(v) for v in rhs]))
    res = linalg.solve(f, a, b)
    if res is None:
        return None
    e = f.normalize(np.dot(res[0], j.basis))
    # identities of algebras are unique; re-derive through a different route
    res2 = linalg.solve(f, a[::-1], b[::-1])
    assert res2 is not None
    e2 = f.normalize(np.dot(res2[0], j.basis))
    assert array_eq(e, e2), "ideal identity is not unique"
    return e


def all_idempotents(algebra: StructureAlgebra, budget: int = 2**20):
    """Every idempotent, by exhaustive enumeration (finite fields only)."""
    f = algebra.field
    if f.size is None:
        raise SearchBudgetExceeded("cannot enumerate over an infinite field")
    total = f.size ** algebra.dim
    if total > budget:
        raise SearchBudgetExceeded(f"{total} candidates exceed budget {budget}")
    out = []
    for v in f.vectors(algebra.dim):
        if algebra.is_idempotent(v):
            out.append(v)
    return out


def primitive_idempotents(algebra: StructureAlgebra):
    """Complete orthogonal set of primitive idempotents of a commutative
    algebra over GF(p), via the Frobenius-fixed subalgebra."""
    f = algebra.field
    if not isinstance(f, GF):
        raise SearchBudgetExceeded("primitive splitting implemented for GF(p) only")
    if not algebra.is_commutative():
        raise SearchBudgetExceeded("primitive splitting needs a commutative algebra")
    p, d = f.p, algebra.dim
    frob_cols = [algebra.power(algebra.basis_vector(i), p) for i in range(d)]
    frob = np.array(frob_cols).T
    fixed = linalg.nullspace(f, f.normalize(frob - f.eye(d)))
    comps = [algebra.unit.copy()]
    for x in fixed:
        refined = []
        for e in comps:
            ex = algebra.mul(e, x)
            # spectral projectors of multiplication by x on the corner e*A
            pieces = []
            for c in f.scalars():
                proj = e.copy()
                for c2 in f.scalars():
                    if c2 == c:
                        continue
                    scale = f.inv_scalar((c - c2) % p)
                    proj = algebra.mul(proj, f.normalize((ex - c2 * e) * scale))
                if proj.any():
                    pieces.append(f.normalize(proj))
            refined.extend(pieces if pieces else [e])
        comps = refined
    total = f.zeros((d,))
    for e in comps:
        assert algebra.is_idempotent(e)
        total = f.normalize(total + e)
    assert array_eq(total, algebra.unit)
    for e1, e2 in itertools.combinations(comps, 2):
        assert not algebra.mul(e1, e2).any() and not algebra.mul(e2, e1).any()
    return comps


def find_idempotents(algebra: StructureAlgebra, budget: int = 2**20, mode: str = "auto"):
    """Spec'd front door: exhaustive list, or a primitive orthogonal set.

    Returns (mode_used, list_of_vectors).
    """
    if mode == "exhaustive":
        return "exhaustive", all_idempotents(algebra, budget)
    if mode == "split":
        return "split", primitive_idempotents(algebra)
    f = algebra.field
    if f.size is not None and f.size ** algebra.dim <= budget:
        return "exhaustive", all_idempotents(algebra, budget)
    if isinstance(f, GF) and algebra.is_commutative():
        return "split", primitive_idempotents(algebra)
    raise SearchBudgetExceeded("no idempotent search mode applies within budget")
