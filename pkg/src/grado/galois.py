"""Induced partial action on the center of the degree-one corner, invariant
subring, partial Galois coordinates, and direct Azumaya verification.

All maps are realized as exact matrices on the center's coordinate space;
only restrictions to the corner ideals Z(R) eps_g carry canonicity
guarantees.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import Subspace, array_eq, center, centralizer, product_span
from .bimodule import QuotientSpace
from .decision import Report
from .graded import EpsilonSystem, GradedRing


@dataclass
class EpsilonDecomposition:
    """eps_g = sum_i u_i v_i with u_i in A_g, v_i in A_{g^-1} (ambient)."""

    degree: object
    pairs: list

    def verify(self, graded, eps):
        alg = graded.algebra
        acc = alg.field.zeros((alg.dim,))
        for u, v in self.pairs:
            acc = alg.field.normalize(acc + alg.mul(u, v))
        return array_eq(acc, eps.of(self.degree))


def decompose_epsilon(graded: GradedRing, eps: EpsilonSystem, g,
                      variant=0) -> EpsilonDecomposition:
    """Solve eps_g as a sum of products over the component basis pairs.

    ``variant`` selects a different exact solution when the solution space
    allows one (used to confirm decomposition independence downstream).
    """
    alg, f, grp = graded.algebra, graded.algebra.field, graded.group
    g = graded._canon(g)
    if g == grp.id:
        return EpsilonDecomposition(g, [(alg.unit.copy(), alg.unit.copy())])
    gi = graded.component_indices(g)
    hi = graded.component_indices(grp.inverse(g))
    cols = []
    pairs = []
    for a in gi:
        for b in hi:
            cols.append(alg.table[a, b])
            pairs.append((a, b))
    if not cols:
        raise ValueError(f"degree {g} has an empty component pairing")
    mat = np.array(cols).T
    res = linalg.solve(f, mat, eps.of(g))
    if res is None:
        raise ValueError("epsilon does not lie in the component product span")
    coeff, null = res
    if variant and null.shape[0]:
        coeff = f.normalize(coeff + null[variant % null.shape[0] if null.shape[0] else 0])
    out = []
    for c, (a, b) in zip(coeff, pairs):
        if c != f.zero:
            out.append((f.normalize(c * alg.basis_vector(a)), alg.basis_vector(b)))
    dec = EpsilonDecomposition(g, out)
    assert dec.verify(graded, eps)
    return dec


class PartialCenterAction:
    """Partial action on Z(R): domains Z(R) eps_g and transport matrices.

    Coordinates are taken over the canonical basis of Z(R) inside the
    ambient algebra.  ``gamma_full[g]`` is the matrix of the conjugation-sum
    transport on all of Z(R); only its restriction to the domain at g^-1 is
    canonical.
    """

    def __init__(self, graded, zrows, domains, gamma_full):
        self.graded = graded
        self.zrows = zrows          # rows: basis of Z(R) in ambient coordinates
        self.domains = domains      # g -> rows in z-coordinates of Z(R) eps_g
        self.gamma_full = gamma_full  # g -> (z x z) matrix

    @property
    def field(self):
        return self.graded.algebra.field

    def zdim(self):
        return self.zrows.shape[0]

    def to_z(self, ambient_vec):
        return linalg.coords_in_basis(self.field, self.zrows, ambient_vec)

    def from_z(self, zvec):
        return self.field.normalize(np.dot(zvec, self.zrows))

    def apply(self, g, zvec):
        """gamma_g of an element given in z-coordinates (restricted use: the
        input should lie in the domain at g^-1)."""
        return self.field.normalize(np.dot(self.gamma_full[self.graded._canon(g)], zvec))

    def domain(self, g):
        return self.domains[self.graded._canon(g)]

    def restricted_matrix(self, g):
        """Matrix of gamma_g: dom(g^-1) -> dom(g) in domain coordinates."""
        f = self.field
        g = self.graded._canon(g)
        src = self.domains[self.graded.group.inverse(g)]
        dst = self.domains[g]
        if src.shape[0] == 0:
            return f.zeros((dst.shape[0], 0))
        images = np.array([self.apply(g, row) for row in src])
        sol = linalg.solve(f, dst.T, images.T)
        if sol is None:
            raise ValueError("transport leaves its target domain")
        return sol[0]


def gamma_action(graded: GradedRing, eps: EpsilonSystem, decomp=None) -> PartialCenterAction:
    """Assemble the induced partial action on Z(R) from epsilon
    decompositions and verify its axioms; failures raise."""
    alg, f, grp = graded.algebra, graded.algebra.field, graded.group
    r_sub = graded.component(grp.id)
    z_amb = _center_of_corner(graded)
    zrows = z_amb.basis
    supp = graded.support()
    if decomp is None:
        decomp = {g: decompose_epsilon(graded, eps, g) for g in supp}

    gamma_full = {}
    domains = {}
    for g in supp:
        dec = decomp[g]
        cols = []
        for row in zrows:
            img = f.zeros((alg.dim,))
            for u, v in dec.pairs:
                img = f.normalize(img + alg.mul(alg.mul(u, row), v))
            zimg = linalg.coords_in_basis(f, zrows, img)
            if zimg is None:
                raise ValueError(f"transport at {g} leaves the center")
            cols.append(zimg)
        gamma_full[g] = np.array(cols).T
        dom_rows = [linalg.coords_in_basis(f, zrows, alg.mul(row, eps.of(g)))
                    for row in zrows]
        domains[g] = linalg.row_space(f, np.array(dom_rows))

    act = PartialCenterAction(graded, zrows, domains, gamma_full)
    _verify_gamma(graded, eps, act)
    return act


def _center_of_corner(graded) -> Subspace:
    """Z(R) as an ambient subspace: central elements of the corner."""
    alg = graded.algebra
    f = alg.field
    r_idx = list(graded.R_corner()[1])
    rows = []
    for i in r_idx:
        li = alg.left_basis_matrices[i]
        ri = alg.right_basis_matrices[i]
        rows.append(f.normalize((li - ri)[:, r_idx]))
    stacked = np.concatenate(rows, axis=0)
    ker = linalg.nullspace(f, stacked)
    amb = [graded.from_R(row) for row in ker]
    return Subspace(alg, np.array(amb) if amb else f.zeros((0, alg.dim)))


def _verify_gamma(graded, eps, act):
    alg, f, grp = graded.algebra, graded.algebra.field, graded.group
    supp = graded.support()
    zdim = act.zdim()
    # identity degree acts as the identity
    one = grp.id
    if not array_eq(act.gamma_full[one], f.eye(zdim)):
        raise ValueError("identity degree does not act as the identity on the center")
    for g in supp:
        ginv = grp.inverse(g)
        # image of the domain at g^-1 equals the domain at g
        src = act.domains[ginv]
        imgs = [act.apply(g, row) for row in src]
        img_rows = linalg.row_space(f, np.array(imgs)) if imgs else f.zeros((0, zdim))
        if not array_eq(img_rows, act.domains[g]):
            raise ValueError(f"gamma at {g} does not carry its domain onto the target ideal")
        # inverse composition is the identity on the domain
        for row in src:
            back = act.apply(ginv, act.apply(g, row))
            if not array_eq(back, row):
                raise ValueError(f"gamma at {g} is not inverted by gamma at {ginv}")
    # the defining exchange identity: gamma_g(r) a = a r on component bases
    for g in supp:
        for zrow in act.zrows:
            moved = _gamma_of_ambient(act, eps, g, zrow)
            for i in graded.component_indices(g):
                a = alg.basis_vector(i)
                if not array_eq(alg.mul(moved, a), alg.mul(a, zrow)):
                    raise ValueError(f"exchange identity fails at degree {g}")
    # composition extension on support pairs
    for g in supp:
        for h in supp:
            gh = grp.op(g, h)
            if gh not in act.gamma_full:
                continue
            for row in _domain_intersection(act, grp.inverse(h), grp.op(grp.inverse(h), grp.inverse(g))):
                lhs = act.apply(g, act.apply(h, row))
                rhs = act.apply(gh, row)
                if not array_eq(lhs, rhs):
                    raise ValueError(f"composition fails at ({g}, {h})")


def _domain_intersection(act, g1, g2):
    f = act.field
    d1, d2 = act.domains.get(g1), act.domains.get(g2)
    if d1 is None or d2 is None or d1.shape[0] == 0 or d2.shape[0] == 0:
        return []
    stacked = np.concatenate([d1.T, -d2.T], axis=1)
    ker = linalg.nullspace(f, f.normalize(stacked))
    rows = [f.normalize(np.dot(k[: d1.shape[0]], d1)) for k in ker]
    out = linalg.row_space(f, np.array(rows)) if rows else f.zeros((0, act.zdim()))
    return list(out)


def invariants(act: PartialCenterAction, eps: EpsilonSystem) -> Subspace:
    """{ t in Z(R) : gamma_g(t eps_{g^-1}) = t eps_g for all supported g }."""
    graded = act.graded
    f = act.field
    grp = graded.group
    zdim = act.zdim()
    if zdim == 0:
        return Subspace.zero(graded.algebra)
    rows = []
    for g in graded.support():
        ginv = grp.inverse(g)
        mult_src = _eps_mult_matrix(act, eps.of(ginv))
        mult_dst = _eps_mult_matrix(act, eps.of(g))
        rows.append(f.normalize(np.dot(act.gamma_full[g], mult_src) - mult_dst))
    ker = linalg.nullspace(f, np.concatenate(rows, axis=0))
    amb = [act.from_z(row) for row in ker]
    return Subspace(graded.algebra, np.array(amb) if amb else f.zeros((0, graded.algebra.dim)))


def _eps_mult_matrix(act, eps_vec):
    """Matrix on z-coordinates of multiplication by a central idempotent."""
    f = act.field
    cols = []
    for row in act.zrows:
        prod = act.graded.algebra.mul(row, eps_vec)
        cols.append(linalg.coords_in_basis(f, act.zrows, prod))
    return np.array(cols).T


@dataclass
class GaloisCoordinates:
    pairs: list  # (x_i, y_i) ambient vectors

    def verify(self, act, eps):
        graded = act.graded
        alg, f, grp = graded.algebra, graded.algebra.field, graded.group
        for g in graded.support():
            acc = f.zeros((alg.dim,))
            for x, y in self.pairs:
                moved = _gamma_of_ambient(act, eps, g, y)
                acc = f.normalize(acc + alg.mul(x, moved))
            target = alg.unit if g == grp.id else f.zeros((alg.dim,))
            if not array_eq(acc, target):
                return False
        return True


def _gamma_of_ambient(act, eps, g, y):
    """gamma_g(y eps_{g^-1}) for y in Z(R), ambient in and out."""
    graded = act.graded
    grp = graded.group
    arg = graded.algebra.mul(y, eps.of(grp.inverse(g)))
    zarg = linalg.coords_in_basis(act.field, act.zrows, arg)
    return act.from_z(act.apply(g, zarg))


def galois_check(graded: GradedRing, eps: EpsilonSystem, act: PartialCenterAction):
    """Partial Galois coordinates for R^gamma inside R, or None.

    Requires a commutative corner.  Fixing the y_i as the full corner basis
    makes the existence question one exact linear system: any coordinate
    system rewrites over a basis by bilinearity.
    """
    r, ridx = graded.R_corner()
    if not r.is_commutative():
        raise ValueError("partial Galois coordinates need a commutative corner")
    alg, f, grp = graded.algebra, graded.algebra.field, graded.group
    ys = [graded.from_R(r.basis_vector(b)) for b in range(r.dim)]
    blocks = []
    rhs = []
    for g in graded.support():
        # unknowns: the x_i stacked in R-coordinates; equations ambient
        block = np.concatenate(
            [alg.right_matrix(_gamma_of_ambient(act, eps, g, y))[:, list(ridx)]
             for y in ys], axis=1)
        blocks.append(f.normalize(block))
        rhs.append(alg.unit if g == grp.id else f.zeros((alg.dim,)))
    a = np.concatenate(blocks, axis=0)
    b = np.concatenate(rhs)
    res = linalg.solve(f, a, b)
    if res is None:
        return None
    n = len(ys)
    rdim = r.dim
    pairs = []
    for i in range(n):
        xi = graded.from_R(res[0][i * rdim:(i + 1) * rdim])
        pairs.append((xi, ys[i]))
    coords = GaloisCoordinates(pairs)
    assert coords.verify(act, eps)
    return coords


def azumaya_check(graded: GradedRing, s: Subspace) -> Report:
    """Direct verification that the whole ring is Azumaya over the invariant
    subring S: center comparison, separability idempotent, and maximal
    commutativity of the corner."""
    rep = Report()
    alg, f = graded.algebra, graded.algebra.field
    r_sub = graded.component(graded.group.id)
    z_whole = center(alg)
    rep.add("center equals invariants", z_whole == s,
            f"center dim {z_whole.dim}, invariants dim {s.dim}")

    # separability: e in A (x)_S A with mu(e) = 1, (a (x) 1) e = (1 (x) a) e
    d = alg.dim
    rels = []
    for srow in s.basis:
        ls = alg.left_matrix(srow)
        for i in range(d):
            for j in range(d):
                v = f.zeros((d * d,))
                col = alg.right_matrix(srow)[:, i]  # (b_i s)
                for k in range(d):
                    if col[k] != f.zero:
                        v[k * d + j] = f.normalize(v[k * d + j] + col[k])
                colj = ls[:, j]
                for l in range(d):
                    if colj[l] != f.zero:
                        v[i * d + l] = f.normalize(v[i * d + l] - colj[l])
                rels.append(v)
    q = QuotientSpace(f, d * d, rels)
    lift = q.lift_matrix()
    mu_amb = f.zeros((d, d * d))
    for i in range(d):
        for j in range(d):
            mu_amb[:, i * d + j] = alg.table[i, j]
    if not q.kills(mu_amb):
        rep.add("multiplication descends to the tensor quotient", False)
        return rep
    mu = f.normalize(np.dot(mu_amb, lift))
    sym_blocks = []
    for i in range(d):
        a_i = alg.basis_vector(i)
        left_first = np.kron(alg.left_matrix(a_i), f.eye(d))
        right_second = np.kron(f.eye(d), alg.right_matrix(a_i))
        op = q.induced_matrix(f.normalize(left_first - right_second))
        sym_blocks.append(op)
    a_mat = np.concatenate([mu] + sym_blocks, axis=0)
    b_vec = np.concatenate([alg.unit] + [f.zeros((q.dim,)) for _ in range(d)])
    res = linalg.solve(f, a_mat, b_vec)
    rep.add("separability idempotent exists", res is not None,
            None if res is not None else "separability system inconsistent")
    if res is not None:
        rep.add("separability witness splits the multiplication",
                array_eq(f.normalize(np.dot(mu, res[0])), alg.unit))

    cent = centralizer(alg, r_sub)
    rep.add("corner is maximal commutative", cent == r_sub,
            f"centralizer dim {cent.dim}, corner dim {r_sub.dim}")
    return rep
