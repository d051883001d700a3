"""Unital twisted partial actions and partial crossed products.

An action is stored over an explicit finite degree set: idempotents 1_g,
ambient matrices for the partial isomorphisms, and twisting elements with
designated inverses.  Axiom verification quantifies over the supplied degree
set only, which keeps infinite groups usable.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import linalg
from .algebra import StructureAlgebra, Subspace, array_eq, product_span
from .decision import Report
from .graded import EpsilonSystem, GradedRing, NotEpsilonStrong, detect_epsilon


class ExtractionInvalid(Exception):
    """Post-hoc verification of an extracted action failed."""


class TwistedPartialAction:
    """({D_g}, {alpha_g}, {omega_{g,h}}) on a base algebra.

    ``idem``: degree -> central idempotent (ambient coordinates); missing
    degrees act through the zero ideal.  ``alpha``: degree -> ambient matrix
    vanishing off D_{g^-1}.  ``omega``: (g, h) -> element; missing pairs use
    the trivial twist 1_g * 1_{gh} (its own inverse in the corner).
    """

    def __init__(self, base: StructureAlgebra, group, idem, alpha, omega=None,
                 omega_inv=None, degrees=None):
        self.base = base
        self.group = group
        f = base.field
        self.idem = {self._c(g): f.asarray(v) for g, v in idem.items()}
        self.alpha = {self._c(g): f.asarray(m) for g, m in alpha.items()}
        self.omega = {(self._c(g), self._c(h)): f.asarray(v)
                      for (g, h), v in (omega or {}).items()}
        self.omega_inv = {(self._c(g), self._c(h)): f.asarray(v)
                          for (g, h), v in (omega_inv or {}).items()}
        if degrees is not None:
            self.degrees = [self._c(g) for g in degrees]
        elif hasattr(group, "order"):
            self.degrees = list(group.elements())
        else:
            self.degrees = sorted(self.idem)

    def _c(self, g):
        if hasattr(self.group, "order"):
            return int(g)
        return tuple(g) if not isinstance(g, tuple) else g

    def one(self, g):
        g = self._c(g)
        return self.idem.get(g, self.base.field.zeros((self.base.dim,)))

    def alpha_matrix(self, g):
        g = self._c(g)
        if g in self.alpha:
            return self.alpha[g]
        return self.base.field.zeros((self.base.dim, self.base.dim))

    def apply(self, g, vec):
        return self.base.field.normalize(np.dot(self.alpha_matrix(g), vec))

    def omega_of(self, g, h):
        key = (self._c(g), self._c(h))
        if key in self.omega:
            return self.omega[key]
        return self.base.mul(self.one(g), self.one(self.group.op(g, h)))

    def omega_inv_of(self, g, h):
        key = (self._c(g), self._c(h))
        if key in self.omega_inv:
            return self.omega_inv[key]
        return self.base.mul(self.one(g), self.one(self.group.op(g, h)))

    def domain(self, g) -> Subspace:
        """D_g = A * 1_g."""
        e = self.one(g)
        vecs = [self.base.mul(self.base.basis_vector(i), e) for i in range(self.base.dim)]
        return Subspace(self.base, np.array(vecs))


def verify_tpa(t: TwistedPartialAction, test_degrees=None) -> Report:
    """Axioms of a unital twisted partial action over the given degree set."""
    rep = Report()
    alg, f, grp = t.base, t.base.field, t.group
    degs = [t._c(g) for g in (test_degrees if test_degrees is not None else t.degrees)]
    one_g = grp.id

    rep.add("identity degree present", one_g in degs)
    rep.add("D_1 is everything", array_eq(t.one(one_g), alg.unit))
    rep.add("alpha_1 is the identity", array_eq(t.alpha_matrix(one_g), f.eye(alg.dim)))

    doms = {g: t.domain(g) for g in degs}
    for g in degs:
        e = t.one(g)
        rep.add(f"1_{g} central idempotent",
                alg.is_idempotent(e) and alg.is_central(e))
        ginv = grp.inverse(g)
        if ginv not in doms:
            doms[ginv] = t.domain(ginv)
        m = t.alpha_matrix(g)
        src, dst = doms.get(ginv, t.domain(ginv)), doms[g]
        images = [t.apply(g, row) for row in src.basis]
        img_space = Subspace(alg, np.array(images) if images else f.zeros((0, alg.dim)))
        rep.add(f"alpha_{g} bijective onto D_{g}",
                img_space == dst and linalg.rank(f, np.array(images) if images else f.zeros((0, alg.dim))) == src.dim)
        # vanishes off the source ideal
        killed = all(array_eq(t.apply(g, alg.basis_vector(i)),
                              t.apply(g, alg.mul(alg.basis_vector(i), t.one(ginv))))
                     for i in range(alg.dim))
        rep.add(f"alpha_{g} supported on D_{grp.inverse(g)}", killed)
        mult = all(array_eq(t.apply(g, alg.mul(x, y)),
                            alg.mul(t.apply(g, x), t.apply(g, y)))
                   for x in src.basis for y in src.basis)
        rep.add(f"alpha_{g} multiplicative", mult)
        rep.add(f"alpha_{g} sends 1_{grp.inverse(g)} to 1_{g}",
                array_eq(t.apply(g, t.one(ginv)), e))

    for g, h in itertools.product(degs, repeat=2):
        gh = grp.op(g, h)
        ginv = grp.inverse(g)
        # T2 and the induced idempotent identity
        src = product_span(doms.get(ginv, t.domain(ginv)), doms.get(h, t.domain(h)))
        imgs = [t.apply(g, row) for row in src.basis]
        lhs = Subspace(alg, np.array(imgs) if imgs else f.zeros((0, alg.dim)))
        rhs = product_span(doms[g], doms.get(gh, t.domain(gh)))
        rep.add(f"T2 {g},{h}", lhs == rhs)
        rep.add(f"idem image {g},{h}",
                array_eq(t.apply(g, alg.mul(t.one(ginv), t.one(h))),
                         alg.mul(t.one(g), t.one(gh))))
        # twist invertibility in the corner
        w, winv = t.omega_of(g, h), t.omega_inv_of(g, h)
        corner = alg.mul(t.one(g), t.one(gh))
        rep.add(f"omega {g},{h} in corner", rhs.contains(w) and rhs.contains(winv))
        rep.add(f"omega {g},{h} invertible",
                array_eq(alg.mul(w, winv), corner) and array_eq(alg.mul(winv, w), corner))
        # T4
        if g == one_g or h == one_g:
            tgt = t.one(h if g == one_g else g)
            rep.add(f"T4 {g},{h}", array_eq(w, tgt))
        # T3 on the natural domain
        hinv = grp.inverse(h)
        ghinv = grp.inverse(gh)
        dom3 = product_span(doms.get(hinv, t.domain(hinv)), doms.get(ghinv, t.domain(ghinv)))
        ok3 = True
        for x in dom3.basis:
            lhs3 = t.apply(g, t.apply(h, x))
            rhs3 = alg.mul(alg.mul(w, t.apply(gh, x)), winv)
            if not array_eq(lhs3, rhs3):
                ok3 = False
                break
        rep.add(f"T3 {g},{h}", ok3)

    for g, h, l in itertools.product(degs, repeat=3):
        hl = grp.op(h, l)
        gh = grp.op(g, h)
        lhs = alg.mul(t.apply(g, alg.mul(t.omega_of(h, l), t.one(grp.inverse(g)))),
                      t.omega_of(g, hl))
        rhs = alg.mul(t.omega_of(g, h), t.omega_of(gh, l))
        rep.add(f"T5 {g},{h},{l}", array_eq(lhs, rhs))
    return rep


def build_crossed_product(t: TwistedPartialAction, degrees=None) -> GradedRing:
    """The crossed product as a graded ring with components D_g delta_g."""
    alg, f, grp = t.base, t.base.field, t.group
    degs = [t._c(g) for g in (degrees if degrees is not None else t.degrees)]
    blocks = []
    for g in degs:
        dom = t.domain(g)
        if dom.dim:
            blocks.append((g, dom.basis))
    index = []
    for g, rows in blocks:
        for k in range(rows.shape[0]):
            index.append((g, k))
    dim = len(index)
    block_of = {g: rows for g, rows in blocks}
    offset = {}
    pos = 0
    for g, rows in blocks:
        offset[g] = pos
        pos += rows.shape[0]

    table = f.zeros((dim, dim, dim))
    for a, (g, i) in enumerate(index):
        for b, (h, j) in enumerate(index):
            gh = grp.op(g, h)
            x = block_of[g][i]
            y = block_of[h][j]
            prod = alg.mul(alg.mul(x, t.apply(g, alg.mul(y, t.one(grp.inverse(g))))),
                           t.omega_of(g, h))
            if gh not in block_of:
                if prod.any() if prod.dtype != object else any(v != 0 for v in prod):
                    raise ValueError("product escapes the declared degree set")
                continue
            coords = linalg.coords_in_basis(f, block_of[gh], prod)
            if coords is None:
                raise ValueError("product leaves its target component")
            table[a, b, offset[gh]:offset[gh] + len(coords)] = coords

    unit = f.zeros((dim,))
    one_coords = linalg.coords_in_basis(f, block_of[grp.id], alg.unit)
    unit[offset[grp.id]:offset[grp.id] + len(one_coords)] = one_coords
    names = [f"d{k}@{g}" for (g, k) in index]
    cp = StructureAlgebra(f, table, unit, basis_names=names)  # validates associativity
    ring = GradedRing(cp, grp, [g for g, _ in index])
    ring.crossed_blocks = {g: rows for g, rows in blocks}
    ring.crossed_offsets = offset
    ring.crossed_source = t
    return ring


def extract_tpa(graded: GradedRing, eps: EpsilonSystem, witnesses, degrees=None):
    """Twisted partial action on the degree-one corner derived from
    epsilon-invertible witnesses; verified a posteriori, never trusted.

    Raises ExtractionInvalid unless the axioms hold and the rebuilt crossed
    product is graded-isomorphic to the input along a_g -> (a_g sbar_g) delta_g.
    """
    r, _ = graded.R_corner()
    grp = graded.group
    f = graded.algebra.field
    supp = graded.support()
    if degrees is None:
        if hasattr(grp, "order"):
            degrees = list(grp.elements())
        else:
            degrees = sorted({grp.op(g, h) for g in supp for h in supp}
                             | set(supp) | {grp.inverse(g) for g in supp} | {grp.id})
    missing = [g for g in supp if g not in witnesses]
    if missing:
        raise ExtractionInvalid(f"witness family does not cover degrees {missing}")

    def s_of(g):
        return witnesses[g].element if g in witnesses else f.zeros((graded.algebra.dim,))

    def sbar_of(g):
        return witnesses[g].inverse if g in witnesses else f.zeros((graded.algebra.dim,))

    idem = {g: graded.to_R(eps.of(g)) for g in supp}
    alpha = {}
    omega = {}
    omega_inv = {}
    amb = graded.algebra
    for g in degrees:
        if g not in supp:
            continue
        cols = []
        for b in range(r.dim):
            x = graded.from_R(r.basis_vector(b))
            img = amb.mul(amb.mul(s_of(g), x), sbar_of(g))
            cols.append(graded.to_R(img))
        alpha[g] = np.array(cols).T
    for g in degrees:
        for h in degrees:
            gh = grp.op(g, h)
            if g in supp and h in supp and gh in supp:
                w = amb.mul(amb.mul(s_of(g), s_of(h)), sbar_of(gh))
                winv = amb.mul(amb.mul(s_of(gh), sbar_of(h)), sbar_of(g))
                omega[(g, h)] = graded.to_R(w)
                omega_inv[(g, h)] = graded.to_R(winv)

    t = TwistedPartialAction(r, grp, idem, alpha, omega, omega_inv, degrees=degrees)
    rep = verify_tpa(t, degrees)
    if not rep.ok:
        raise ExtractionInvalid(f"axiom verification failed: {rep.failures()[:3]}")

    rebuilt = build_crossed_product(t, degrees)
    iso = _graded_isomorphism(graded, rebuilt, witnesses)
    if iso is None:
        raise ExtractionInvalid("rebuilt crossed product is not graded-isomorphic to the input")
    t.verified_against = (rebuilt, iso)
    return t


def _graded_isomorphism(graded: GradedRing, rebuilt: GradedRing, witnesses):
    """Matrix of a_g -> (a_g sbar_g) delta_g, checked to be a graded ring iso."""
    amb = graded.algebra
    f = amb.field
    blocks = rebuilt.crossed_blocks
    offsets = rebuilt.crossed_offsets
    dim_src = amb.dim
    dim_dst = rebuilt.algebra.dim
    if dim_src != dim_dst:
        return None
    phi = f.zeros((dim_dst, dim_src))
    for i in range(dim_src):
        g = graded.degrees[i]
        sbar = witnesses[g].inverse
        img = graded.to_R(amb.mul(amb.basis_vector(i), sbar))
        coords = linalg.coords_in_basis(f, blocks[g], img)
        if coords is None:
            return None
        phi[offsets[g]:offsets[g] + len(coords), i] = coords
    if not linalg.is_invertible(f, phi):
        return None
    # multiplicative + unit-preserving
    b_alg = rebuilt.algebra
    for i in range(dim_src):
        for j in range(dim_src):
            lhs = f.normalize(np.dot(phi, amb.table[i, j]))
            rhs = b_alg.mul(f.normalize(phi[:, i]), f.normalize(phi[:, j]))
            if not array_eq(lhs, rhs):
                return None
    if not array_eq(f.normalize(np.dot(phi, amb.unit)), b_alg.unit):
        return None
    return phi
