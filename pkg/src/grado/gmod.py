"""Graded left modules, graded morphism spaces, graded endomorphism rings,
divisibility relations and induced modules.

Morphism spaces in the graded category are degree-preserving; a degree-l
morphism space Mor(M, N)_l collects maps shifting every component by l on
the right.  Endomorphism rings multiply by opposite composition (u*v = v o u).
"""

from __future__ import annotations

import itertools
import random

import numpy as np

from . import linalg
from .algebra import StructureAlgebra, array_eq
from .bimodule import LeftModule, QuotientSpace, invertible_in_span
from .decision import Decision, Report, no, undecided, yes
from .graded import (DEFAULT_BUDGET, EpsilonSystem, GradedRing, NotEpsilonStrong,
                     detect_epsilon, is_epsilon_crossed_product, is_strongly_graded)


class GradedModule:
    """Graded left module over a graded ring; one action matrix per algebra
    basis vector, one group degree per module coordinate."""

    def __init__(self, graded: GradedRing, degrees, acts, validate=True):
        self.graded = graded
        f = graded.algebra.field
        self.acts = [f.asarray(a) for a in acts]
        if len(self.acts) != graded.algebra.dim:
            raise ValueError("need one action matrix per algebra basis vector")
        self.dim = self.acts[0].shape[0] if self.acts else 0
        self.degrees = [graded._canon(g) for g in degrees]
        if len(self.degrees) != self.dim:
            raise ValueError("need one degree per module coordinate")
        if validate:
            self._validate()

    @property
    def field(self):
        return self.graded.algebra.field

    def act_of(self, vec):
        f = self.field
        if self.dim == 0:
            return f.zeros((0, 0))
        return f.normalize(np.tensordot(vec, np.array(self.acts), axes=([0], [0])))

    def component_indices(self, h):
        h = self.graded._canon(h)
        return tuple(i for i, d in enumerate(self.degrees) if d == h)

    def support(self):
        return sorted(set(self.degrees))

    def _validate(self):
        f = self.field
        alg = self.graded.algebra
        if not array_eq(self.act_of(alg.unit), f.eye(self.dim)):
            raise ValueError("module is not unital")
        for i in range(alg.dim):
            for j in range(alg.dim):
                lhs = self.act_of(alg.table[i, j])
                rhs = f.normalize(np.dot(self.acts[i], self.acts[j]))
                if not array_eq(lhs, rhs):
                    raise ValueError(f"action is not multiplicative at ({i}, {j})")
        grp = self.graded.group
        for i in range(alg.dim):
            g = self.graded.degrees[i]
            for c in range(self.dim):
                target = grp.op(g, self.degrees[c])
                col = self.acts[i][:, c]
                for r, x in enumerate(col):
                    if x != f.zero and self.degrees[r] != target:
                        raise ValueError(
                            f"action of basis {i} breaks the grading at coordinate {c}")

    @classmethod
    def regular(cls, graded: GradedRing):
        return cls(graded, list(graded.degrees), graded.algebra.left_basis_matrices,
                   validate=False)

    def restrict_to_indices(self, idx, validate=True):
        sel = list(idx)
        acts = [a[np.ix_(sel, sel)] for a in self.acts]
        return GradedModule(self.graded, [self.degrees[i] for i in sel], acts,
                            validate=validate)

    def __repr__(self):
        return f"GradedModule(dim={self.dim}, degrees={self.degrees})"


def suspend(m: GradedModule, l) -> GradedModule:
    """M(l): component at g is M_{gl}; degrees reindex by right division."""
    grp = m.graded.group
    linv = grp.inverse(m.graded._canon(l))
    return GradedModule(m.graded, [grp.op(d, linv) for d in m.degrees], m.acts,
                        validate=False)


def graded_mor(m: GradedModule, n: GradedModule, l) -> list:
    """Basis of Mor(M, N)_l: module-linear maps with H(M_g) inside N_{gl}."""
    if m.graded is not n.graded:
        raise ValueError("modules live over different graded rings")
    f = m.field
    grp = m.graded.group
    l = m.graded._canon(l)
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        return []
    blocks = []
    for i in range(m.graded.algebra.dim):
        mat = np.kron(f.eye(dn), m.acts[i].T) - np.kron(n.acts[i], f.eye(dm))
        blocks.append(f.normalize(mat))
    # degree pattern: H[r, c] = 0 unless deg_N(r) = deg_M(c) * l
    mask_rows = []
    for r in range(dn):
        for c in range(dm):
            if n.degrees[r] != grp.op(m.degrees[c], l):
                row = f.zeros((dn * dm,))
                row[r * dm + c] = f.one
                mask_rows.append(row)
    if mask_rows:
        blocks.append(np.array(mask_rows))
    ker = linalg.nullspace(f, np.concatenate(blocks, axis=0))
    return [k.reshape(dn, dm) for k in ker]


def mor_category(m: GradedModule, n: GradedModule) -> list:
    """Degree-preserving morphisms (the graded category's hom set)."""
    return graded_mor(m, n, m.graded.group.id)


def end_degree_candidates(m: GradedModule):
    grp = m.graded.group
    degs = sorted(set(m.degrees))
    return sorted({grp.op(grp.inverse(g), h) for g in degs for h in degs})


def build_end_ring(m: GradedModule):
    """The graded endomorphism ring of M, multiplication u*v = v o u.

    Returns (graded_ring, basis) where basis is the flat list of matrices
    aligned with the ring's basis vectors.
    """
    if m.dim == 0:
        raise ValueError("endomorphism ring of the zero module has no unit")
    f = m.field
    grp = m.graded.group
    per_degree = {}
    for l in end_degree_candidates(m):
        mats = graded_mor(m, m, l)
        if mats:
            per_degree[l] = mats
    index = [(l, k) for l in sorted(per_degree) for k in range(len(per_degree[l]))]
    dim = len(index)
    flat = {l: np.array([h.reshape(-1) for h in per_degree[l]]) for l in per_degree}
    offset = {}
    pos = 0
    for l in sorted(per_degree):
        offset[l] = pos
        pos += len(per_degree[l])

    table = f.zeros((dim, dim, dim))
    for a, (l, i) in enumerate(index):
        for b, (s, j) in enumerate(index):
            ls = grp.op(l, s)
            comp = f.normalize(np.dot(per_degree[s][j], per_degree[l][i]))  # v o u
            if ls not in per_degree:
                if comp.any() if comp.dtype != object else any(x != 0 for x in comp.reshape(-1)):
                    raise ValueError("composition escapes the collected degrees")
                continue
            coords = linalg.coords_in_basis(f, flat[ls], comp.reshape(-1))
            if coords is None:
                raise ValueError("composition leaves its morphism space")
            table[a, b, offset[ls]:offset[ls] + len(coords)] = coords

    unit_coords = linalg.coords_in_basis(f, flat[grp.id], f.eye(m.dim).reshape(-1))
    if unit_coords is None:
        raise ValueError("identity map is missing from the degree-one component")
    unit = f.zeros((dim,))
    unit[offset[grp.id]:offset[grp.id] + len(unit_coords)] = unit_coords
    names = [f"u{k}@{l}" for (l, k) in index]
    alg = StructureAlgebra(f, table, unit, basis_names=names)
    ring = GradedRing(alg, grp, [l for l, _ in index])
    basis = [per_degree[l][k] for (l, k) in index]
    return ring, basis


# ---------------------------------------------------------------------------
# divisibility in the graded category


def _absorbing_identity(f, products, absorb_left, absorb_right):
    """Identity of span(products) absorbing the given morphism lists.

    products: list of (n x n) matrices spanning J; the solution e satisfies
    e @ F = F for F in absorb_left and G @ e = G for G in absorb_right.
    Returns the matrix e or None.
    """
    if not products:
        return None
    jflat = linalg.row_space(f, np.array([p.reshape(-1) for p in products]))
    if jflat.shape[0] == 0:
        return None
    n = products[0].shape[0]
    jbasis = [row.reshape(n, n) for row in jflat]
    cols = []
    rhs = []
    for fmat in absorb_left:
        block = np.array([f.normalize(np.dot(jb, fmat)).reshape(-1) for jb in jbasis]).T
        cols.append(block)
        rhs.append(fmat.reshape(-1))
    for gmat in absorb_right:
        block = np.array([f.normalize(np.dot(gmat, jb)).reshape(-1) for jb in jbasis]).T
        cols.append(block)
        rhs.append(gmat.reshape(-1))
    a = f.normalize(np.concatenate(cols, axis=0))
    b = f.normalize(np.concatenate([np.asarray(v) for v in rhs]))
    res = linalg.solve(f, a, b)
    if res is None:
        return None
    e = f.zeros((n, n))
    for c, jb in zip(res[0], jbasis):
        e = f.normalize(e + c * jb)
    # the absorbing identity of J is unique; re-derive with permuted equations
    res2 = linalg.solve(f, a[::-1], b[::-1])
    assert res2 is not None
    e2 = f.zeros((n, n))
    for c, jb in zip(res2[0], jbasis):
        e2 = f.normalize(e2 + c * jb)
    assert array_eq(e, e2)
    zero = not e.any() if e.dtype != object else all(x == 0 for x in e.reshape(-1))
    return None if zero else e


def divides(n: GradedModule, m: GradedModule) -> Decision:
    """N | M: the identity of N is a sum of compositions through M."""
    f = n.field
    fs = mor_category(m, n)
    gs = mor_category(n, m)
    if n.dim == 0:
        return yes(reason="zero module divides everything")
    products = [f.normalize(np.dot(fi, gj)) for fi in fs for gj in gs]
    if not products:
        return no(reason="no morphisms through M")
    stack = np.array([p.reshape(-1) for p in products])
    sol = linalg.solve(f, stack.T, f.eye(n.dim).reshape(-1))
    if sol is None:
        return no(reason="identity is not a sum of compositions")
    return yes(witness=sol[0])


def semi_divides(n: GradedModule, m: GradedModule) -> Decision:
    """N semi-divides M: a nonzero summand of N divides M and its idempotent
    absorbs every graded morphism between M and N."""
    f = n.field
    fs = mor_category(m, n)
    gs = mor_category(n, m)
    products = [f.normalize(np.dot(fi, gj)) for fi in fs for gj in gs]
    e = _absorbing_identity(f, products, fs, gs)
    if e is None:
        return no(reason="no nonzero absorbing idempotent in the composite span")
    assert array_eq(f.normalize(np.dot(e, e)), e)
    image = linalg.row_space(f, f.normalize(e.T))  # rows span im(e)
    return yes(witness=(e, image))


def epsilon_similar(m: GradedModule, n: GradedModule, seed=0,
                    budget=DEFAULT_BUDGET, trials=1000) -> Decision:
    """Mutual semi-division realized by one pair of morphisms composing to
    the two absorbing idempotents."""
    f = m.field
    fs = mor_category(m, n)
    gs = mor_category(n, m)
    prod_n = [f.normalize(np.dot(fi, gj)) for fi in fs for gj in gs]
    prod_m = [f.normalize(np.dot(gj, fi)) for fi in fs for gj in gs]
    e_n = _absorbing_identity(f, prod_n, fs, gs)
    e_m = _absorbing_identity(f, prod_m, gs, fs)
    if e_n is None or e_m is None:
        return no(reason="absorbing idempotents do not both exist")

    def try_f(fmat):
        # find g with fmat o g = e_n and g o fmat = e_m; linear in g
        if not gs:
            return None
        cols1 = np.array([f.normalize(np.dot(fmat, gj)).reshape(-1) for gj in gs]).T
        cols2 = np.array([f.normalize(np.dot(gj, fmat)).reshape(-1) for gj in gs]).T
        a = np.concatenate([cols1, cols2], axis=0)
        b = np.concatenate([e_n.reshape(-1), e_m.reshape(-1)])
        sol = linalg.solve(f, f.normalize(a), f.normalize(b))
        if sol is None:
            return None
        g = f.zeros(gs[0].shape)
        for c, gj in zip(sol[0], gs):
            g = f.normalize(g + c * gj)
        return g

    k = len(fs)
    if k == 0:
        return no(reason="no morphisms from M to N")
    stacked = np.array(fs)
    if f.size is not None and f.size**k <= budget:
        count = 0
        for coeff in f.vectors(k):
            count += 1
            fmat = f.normalize(np.tensordot(coeff, stacked, axes=([0], [0])))
            g = try_f(fmat)
            if g is not None:
                return yes(witness=(fmat, g, e_m, e_n), checked=count)
        return no(checked=count, reason="exhausted morphism coefficient space")
    rng = random.Random(seed)
    for t in range(trials):
        coeff = f.asarray([rng.randrange(f.size) if f.size else rng.randrange(-9, 10)
                           for _ in range(k)])
        fmat = f.normalize(np.tensordot(coeff, stacked, axes=([0], [0])))
        g = try_f(fmat)
        if g is not None:
            return yes(witness=(fmat, g, e_m, e_n), checked=t + 1)
    return undecided(checked=trials, reason="randomized morphism search exhausted")


def classify_end(m: GradedModule, seed=0, budget=DEFAULT_BUDGET, trials=1000):
    """Classify END(M) directly and through the module-side criteria; the two
    routes must agree wherever both decide."""
    ring, basis = build_end_ring(m)
    eps = detect_epsilon(ring)
    direct_eps = not isinstance(eps, NotEpsilonStrong)
    direct_strong = is_strongly_graded(ring, eps if direct_eps else None)
    crossed = (is_epsilon_crossed_product(ring, eps, seed=seed, budget=budget, trials=trials)
               if direct_eps else None)

    supp = ring.support()
    module_eps = True
    module_eps_detail = {}
    for l in supp:
        ml = suspend(m, l)
        d1 = semi_divides(m, ml)
        d2 = semi_divides(ml, m)
        module_eps_detail[l] = (d1.status, d2.status)
        if not (d1.is_yes and d2.is_yes):
            module_eps = False
    grp = m.graded.group
    full_support = grp.is_finite() and set(supp) == set(grp.elements())
    module_strong = full_support and module_eps
    if module_strong:
        for l in supp:
            ml = suspend(m, l)
            if not (divides(m, ml).is_yes and divides(ml, m).is_yes):
                module_strong = False
                break

    module_crossed = "yes"
    for l in supp:
        if ring.component_dim(grp.inverse(l)) == 0:
            module_crossed = "no"
            break
        d = epsilon_similar(m, suspend(m, l), seed=seed, budget=budget, trials=trials)
        if d.is_no:
            module_crossed = "no"
            break
        if d.is_undecided:
            module_crossed = "undecided"

    rep = Report()
    rep.add("epsilon-strong routes agree", direct_eps == module_eps,
            f"direct {direct_eps}, module {module_eps} {module_eps_detail}")
    rep.add("strongly-graded routes agree", direct_strong == module_strong,
            f"direct {direct_strong}, module {module_strong}")
    if crossed is None:
        crossed_agree = module_crossed == "no" or module_crossed == "undecided"
        crossed_status = "no"
    else:
        crossed_status = crossed.status
        crossed_agree = (crossed.status == module_crossed
                         or "undecided" in (crossed.status, module_crossed))
    rep.add("crossed routes agree", crossed_agree,
            f"direct {crossed_status}, module {module_crossed}")
    return {
        "end_ring": ring,
        "end_basis": basis,
        "epsilon": eps,
        "epsilon_strong": direct_eps,
        "strongly_graded": direct_strong,
        "partial_crossed": crossed_status,
        "module_routes": {
            "epsilon_strong": module_eps,
            "strongly_graded": module_strong,
            "partial_crossed": module_crossed,
        },
        "report": rep,
    }


# ---------------------------------------------------------------------------
# induced modules


def induce(graded: GradedRing, n: LeftModule) -> GradedModule:
    """A (x)_R N as a graded module, component at g being A_g (x) N."""
    r, ridx = graded.R_corner()
    if n.ring is not r:
        raise ValueError("module must live over the degree-one corner of the ring")
    alg, f = graded.algebra, graded.algebra.field
    da, dn = alg.dim, n.dim
    amb = da * dn
    rels = []
    for pos, t in enumerate(ridx):
        rb = alg.basis_vector(t)
        act = n.acts[pos]
        for i in range(da):
            ar = alg.mul(alg.basis_vector(i), rb)
            for j in range(dn):
                v = f.zeros((amb,))
                for k in range(da):
                    if ar[k] != f.zero:
                        v[k * dn + j] = f.normalize(v[k * dn + j] + ar[k])
                for ll in range(dn):
                    if act[ll, j] != f.zero:
                        v[i * dn + ll] = f.normalize(v[i * dn + ll] - act[ll, j])
                rels.append(v)
    q = QuotientSpace(f, amb, rels)
    degrees = [graded.degrees[c // dn] for c in q.free]
    acts = []
    for i in range(da):
        acts.append(q.induced_matrix(np.kron(alg.left_basis_matrices[i], f.eye(dn))))
    mod = GradedModule(graded, degrees, acts)
    mod.quotient = q
    return mod


def direct_sum_module(ring: StructureAlgebra, mods) -> LeftModule:
    f = ring.field
    total = sum(m.dim for m in mods)
    acts = []
    for b in range(ring.dim):
        big = f.zeros((total, total))
        pos = 0
        for m in mods:
            big[pos:pos + m.dim, pos:pos + m.dim] = m.acts[b]
            pos += m.dim
        acts.append(big)
    return LeftModule(ring, acts, validate=False)


def component_times_module(graded: GradedRing, g, n: LeftModule):
    """A_g (x)_R N computed through the honest tensor-product quotient."""
    from .bimodule import tensor_with_left_module

    return tensor_with_left_module(graded.component_bimodule(g), n)


def check_astor(graded: GradedRing, n: LeftModule, seed=0, budget=DEFAULT_BUDGET,
                trials=400):
    """Suspension-compatibility of the induced module: the (l)-indexed
    submodules must be graded-isomorphic with shift, and when every degree
    passes, END of the induced module must be epsilon-strong.  Also reports
    the invariant-module route to a partial crossed product."""
    rep = Report()
    f = graded.algebra.field
    grp = graded.group
    ind = induce(graded, n)
    ring, basis = build_end_ring(ind)
    supp_a = graded.support()
    hypothesis = True
    shifts = {}
    for l in supp_a:
        supp_l = [g for g in supp_a if grp.op(g, l) in supp_a]
        upper = [grp.op(g, l) for g in supp_l]
        idx_up = [i for i in range(ind.dim) if ind.degrees[i] in upper]
        idx_lo = [i for i in range(ind.dim) if ind.degrees[i] in supp_l]
        try:
            n_up = ind.restrict_to_indices(idx_up)
            n_lo = ind.restrict_to_indices(idx_lo)
        except ValueError:
            rep.add(f"submodules at {l} well-defined", False)
            hypothesis = False
            shifts[l] = "invalid"
            continue
        mats = graded_mor(n_up, n_lo, grp.inverse(l))
        dec = invertible_in_span(f, mats, budget=budget,
                                 rng=random.Random(seed), trials=trials) \
            if mats and n_up.dim == n_lo.dim else no(reason="dimension mismatch or empty hom")
        shifts[l] = dec.status
        if not dec.is_yes:
            hypothesis = False
    eps = detect_epsilon(ring)
    eps_ok = not isinstance(eps, NotEpsilonStrong)
    rep.add("hypothesis implies epsilon-strong END", (not hypothesis) or eps_ok,
            f"hypothesis {hypothesis}, END epsilon-strong {eps_ok}")

    invariant = True
    for g in supp_a:
        t = component_times_module(graded, g, n)
        dec = _left_iso(t, n, budget=budget, seed=seed, trials=trials)
        if not dec.is_yes:
            invariant = False
            break
    crossed_status = None
    if eps_ok:
        crossed = is_epsilon_crossed_product(ring, eps, seed=seed, budget=budget,
                                             trials=trials)
        crossed_status = crossed.status
    rep.add("invariant module implies partial crossed END",
            (not invariant) or crossed_status == "yes",
            f"invariant {invariant}, crossed {crossed_status}")
    return {
        "induced": ind,
        "end_ring": ring,
        "hypothesis": hypothesis,
        "shifts": shifts,
        "epsilon_strong": eps_ok,
        "invariant": invariant,
        "partial_crossed": crossed_status,
        "report": rep,
    }


def _left_iso(m: LeftModule, n: LeftModule, budget=DEFAULT_BUDGET, seed=0, trials=400):
    from .bimodule import is_isomorphic

    return is_isomorphic(m, n, budget=budget, rng=random.Random(seed), trials=trials)


def assemble_invariant_witness(graded: GradedRing, n: LeftModule, ind: GradedModule,
                               l, seed=0, budget=DEFAULT_BUDGET, trials=400):
    """Best-effort degree-l endomorphism of the induced module, glued per
    degree from corner-module isomorphisms ind_g -> N -> ind_{gl}.

    Returns the assembled matrix when the glued map is module-linear over
    the whole ring, else None (the per-degree choices need not be
    compatible)."""
    f = graded.algebra.field
    grp = graded.group
    r, ridx = graded.R_corner()
    l = graded._canon(l)

    def corner_module(idx):
        sel = list(idx)
        return LeftModule(r, [ind.acts[t][np.ix_(sel, sel)] for t in ridx],
                          validate=False)

    isos = {}
    for g in sorted(set(ind.degrees)):
        idx = [i for i in range(ind.dim) if ind.degrees[i] == g]
        dec = _left_iso(corner_module(idx), n, budget=budget, seed=seed, trials=trials)
        if not dec.is_yes:
            return None
        isos[g] = (idx, dec.witness)  # witness: ind_g-coords -> N-coords
    phi = f.zeros((ind.dim, ind.dim))
    for g, (src, psi_g) in isos.items():
        gl = grp.op(g, l)
        if gl not in isos:
            continue
        dst, psi_gl = isos[gl]
        inv = linalg.inverse(f, psi_gl)
        if inv is None:
            return None
        block = f.normalize(np.dot(inv, psi_g))
        for a, col in enumerate(src):
            for b, row in enumerate(dst):
                phi[row, col] = block[b, a]
    for i in range(graded.algebra.dim):
        lhs = f.normalize(np.dot(phi, ind.acts[i]))
        rhs = f.normalize(np.dot(ind.acts[i], phi))
        if not array_eq(lhs, rhs):
            return None
    return phi
