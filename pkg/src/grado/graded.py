"""Group gradings on structure algebras and the epsilon-strong machinery.

A grading assigns a group degree to every basis vector (so homogeneous
components are coordinate subspaces), which keeps homogeneity checkable and
components canonical.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import SearchBudgetExceeded, StructureAlgebra, Subspace, array_eq, ideal_identity, product_span
from .bimodule import Bimodule, LeftModule, hom_matrices, invertible_in_span
from .decision import Decision, Report, no, undecided, yes

DEFAULT_BUDGET = 2**20


class GradedRing:
    """StructureAlgebra plus a degree map basis index -> group element."""

    def __init__(self, algebra: StructureAlgebra, group, degrees, validate=True):
        self.algebra = algebra
        self.group = group
        self.degrees = [self._canon(g) for g in degrees]
        if len(self.degrees) != algebra.dim:
            raise ValueError("need one degree per basis vector")
        self._corner = None
        if validate:
            self._validate()

    def _canon(self, g):
        if hasattr(self.group, "order"):
            return int(g)
        return tuple(g) if not isinstance(g, tuple) else g

    def _validate(self):
        f = self.algebra.field
        one = self.group.id
        for i, x in enumerate(self.algebra.unit):
            if x != f.zero and self.degrees[i] != one:
                raise ValueError("unit is not concentrated in the identity degree")
        for i in range(self.algebra.dim):
            for j in range(self.algebra.dim):
                target = self.group.op(self.degrees[i], self.degrees[j])
                prod = self.algebra.table[i, j]
                for k, x in enumerate(prod):
                    if x != f.zero and self.degrees[k] != target:
                        raise ValueError(
                            f"product of basis {i} (deg {self.degrees[i]}) and {j} "
                            f"(deg {self.degrees[j]}) is not homogeneous")

    # -- components ----------------------------------------------------------

    def component_indices(self, g):
        g = self._canon(g)
        return tuple(i for i, d in enumerate(self.degrees) if d == g)

    def component(self, g) -> Subspace:
        idx = self.component_indices(g)
        rows = self.algebra.field.zeros((len(idx), self.algebra.dim))
        for r, i in enumerate(idx):
            rows[r, i] = self.algebra.field.one
        return Subspace(self.algebra, rows)

    def component_dim(self, g):
        return len(self.component_indices(g))

    def support(self):
        return sorted(set(self.degrees))

    def subspace_of_vectors(self, vectors):
        vecs = [np.asarray(v) for v in vectors]
        if not vecs:
            return Subspace.zero(self.algebra)
        return Subspace(self.algebra, np.array(vecs))

    # -- the degree-one corner ------------------------------------------------

    def R_corner(self):
        """(R, indices): the identity component as its own structure algebra."""
        if self._corner is None:
            idx = self.component_indices(self.group.id)
            f = self.algebra.field
            k = len(idx)
            table = f.zeros((k, k, k))
            for a, i in enumerate(idx):
                for b, j in enumerate(idx):
                    table[a, b] = self.algebra.table[i, j][list(idx)]
            unit = self.algebra.unit[list(idx)]
            names = [self.algebra.basis_names[i] for i in idx]
            r = StructureAlgebra(f, table, unit, basis_names=names, validate=False)
            self._corner = (r, idx)
        return self._corner

    def to_R(self, vec):
        _, idx = self.R_corner()
        return np.asarray(vec)[list(idx)]

    def from_R(self, rvec):
        _, idx = self.R_corner()
        out = self.algebra.field.zeros((self.algebra.dim,))
        for pos, i in enumerate(idx):
            out[i] = rvec[pos]
        return out

    def left_module_on_indices(self, idx) -> LeftModule:
        """Left R-module structure on the coordinate subspace given by idx."""
        r, ridx = self.R_corner()
        sel = list(idx)
        acts = []
        for i in ridx:
            acts.append(self.algebra.left_basis_matrices[i][np.ix_(sel, sel)])
        return LeftModule(r, acts, validate=False)

    def left_module_on_rows(self, rows) -> LeftModule:
        r, ridx = self.R_corner()
        amb = [self.algebra.left_basis_matrices[i] for i in ridx]
        return LeftModule.from_subspace(r, amb, rows, validate=False)

    def component_bimodule(self, g) -> Bimodule:
        r, ridx = self.R_corner()
        sel = list(self.component_indices(g))
        left = [self.algebra.left_basis_matrices[i][np.ix_(sel, sel)] for i in ridx]
        right = [self.algebra.right_basis_matrices[i][np.ix_(sel, sel)] for i in ridx]
        return Bimodule(r, left, right, validate=False)

    def embed_component(self, g, coords):
        idx = self.component_indices(g)
        out = self.algebra.field.zeros((self.algebra.dim,))
        for pos, i in enumerate(idx):
            out[i] = coords[pos]
        return out

    def regular_graded_bimodule(self):
        return GradedBimodule(self, self.algebra.dim, list(self.degrees),
                              self.algebra.left_basis_matrices,
                              self.algebra.right_basis_matrices)

    def __repr__(self):
        return f"GradedRing(dim={self.algebra.dim}, group={self.group!r})"


class GradedBimodule:
    """Graded (A,A)-bimodule: ambient action matrices per algebra basis."""

    def __init__(self, graded: GradedRing, dim, degrees, left, right):
        self.graded = graded
        self.dim = dim
        self.degrees = [graded._canon(g) for g in degrees]
        self.left = left
        self.right = right

    def component_indices(self, h):
        h = self.graded._canon(h)
        return tuple(i for i, d in enumerate(self.degrees) if d == h)

    def left_action_of_basis(self, i):
        return self.left[i]

    def left_action_of(self, vec):
        f = self.graded.algebra.field
        return f.normalize(np.tensordot(vec, np.array(self.left), axes=([0], [0])))

    def right_action_of(self, vec):
        f = self.graded.algebra.field
        return f.normalize(np.tensordot(vec, np.array(self.right), axes=([0], [0])))

    def component_bimodule(self, h) -> Bimodule:
        r, ridx = self.graded.R_corner()
        sel = list(self.component_indices(h))
        left = [self.left[i][np.ix_(sel, sel)] for i in ridx]
        right = [self.right[i][np.ix_(sel, sel)] for i in ridx]
        return Bimodule(r, left, right, validate=False)


# ---------------------------------------------------------------------------
# epsilon systems


@dataclass
class NotEpsilonStrong:
    degree: object
    reason: str

    @property
    def ok(self):
        return False


class EpsilonSystem:
    """Map degree -> epsilon element (ambient coordinates); zero off-support."""

    def __init__(self, graded: GradedRing, table):
        self.graded = graded
        self.table = dict(table)

    def of(self, g):
        g = self.graded._canon(g)
        if g in self.table:
            return self.table[g]
        return self.graded.algebra.field.zeros((self.graded.algebra.dim,))

    @property
    def ok(self):
        return True

    def degrees(self):
        return sorted(self.table)

    def items(self):
        return self.table.items()


def support(graded: GradedRing):
    return graded.support()


def component(graded: GradedRing, g) -> Subspace:
    return graded.component(g)


def is_symmetrically_graded(graded: GradedRing) -> bool:
    """A_g A_{g^-1} A_g = A_g for every supported degree."""
    for g in graded.support():
        a_g = graded.component(g)
        a_inv = graded.component(graded.group.inverse(g))
        if product_span(product_span(a_g, a_inv), a_g) != a_g:
            return False
    return True


def component_pairing_has_identity(graded: GradedRing, g):
    """Identity element of the ideal A_g A_{g^-1} of the corner, or None."""
    a_g = graded.component(g)
    a_inv = graded.component(graded.group.inverse(g))
    j = product_span(a_g, a_inv)
    return ideal_identity(j, within=graded.component(graded.group.id))


def detect_epsilon(graded: GradedRing):
    """EpsilonSystem, or NotEpsilonStrong with the first failing degree."""
    alg = graded.algebra
    grp = graded.group
    supp = graded.support()
    for g in supp:
        if graded.component_dim(grp.inverse(g)) == 0:
            return NotEpsilonStrong(g, "support is not closed under inversion")
    eps = {}
    for g in supp:
        e = component_pairing_has_identity(graded, g)
        if e is None:
            return NotEpsilonStrong(g, "component pairing ideal has no identity")
        eps[g] = e
    for g in supp:
        e_g = eps[g]
        e_inv = eps[grp.inverse(g)]
        for i in graded.component_indices(g):
            b = alg.basis_vector(i)
            if not array_eq(alg.mul(e_g, b), b):
                return NotEpsilonStrong(g, f"left identity fails on basis {i}")
            if not array_eq(alg.mul(b, e_inv), b):
                return NotEpsilonStrong(g, f"right identity fails on basis {i}")
    system = EpsilonSystem(graded, eps)
    _assert_epsilon_invariants(graded, system)
    return system


def _assert_epsilon_invariants(graded, eps):
    alg = graded.algebra
    r_full = graded.component(graded.group.id)
    for g, e in eps.items():
        assert alg.is_idempotent(e), f"epsilon at {g} is not idempotent"
        for row in r_full.basis:
            assert array_eq(alg.mul(e, row), alg.mul(row, e)), \
                f"epsilon at {g} is not central in the corner"
    one = graded.group.id
    if one in eps.table:
        assert array_eq(eps.table[one], alg.unit)


def check_remark_identities(graded: GradedRing, eps: EpsilonSystem) -> Report:
    """A_g A_h = eps_g A_{gh} = A_{gh} eps_{h^-1} on all support pairs."""
    rep = Report()
    alg, grp = graded.algebra, graded.group
    supp = graded.support()
    for g in supp:
        for h in supp:
            gh = grp.op(g, h)
            lhs = product_span(graded.component(g), graded.component(h))
            a_gh = graded.component(gh)
            left_side = graded.subspace_of_vectors(
                [alg.mul(eps.of(g), row) for row in a_gh.basis])
            right_side = graded.subspace_of_vectors(
                [alg.mul(row, eps.of(grp.inverse(h))) for row in a_gh.basis])
            rep.add(f"left {g},{h}", lhs == left_side,
                    f"dims {lhs.dim} vs {left_side.dim}")
            rep.add(f"right {g},{h}", lhs == right_side,
                    f"dims {lhs.dim} vs {right_side.dim}")
    return rep


# ---------------------------------------------------------------------------
# epsilon-invertible elements and crossed products


@dataclass
class EpsilonInvertibleWitness:
    degree: object
    element: np.ndarray
    inverse: np.ndarray

    def verify(self, graded, eps):
        alg, grp = graded.algebra, graded.group
        ginv = grp.inverse(self.degree)
        return (array_eq(alg.mul(self.element, self.inverse), eps.of(self.degree))
                and array_eq(alg.mul(self.inverse, self.element), eps.of(ginv)))


def _witness_for_candidate(graded, eps, g, s):
    """Solve s*u = eps_g and v*s = eps_{g^-1}; both solvable forces u = v."""
    alg, f = graded.algebra, graded.algebra.field
    ginv = graded.group.inverse(g)
    inv_idx = graded.component_indices(ginv)
    if not inv_idx:
        return None
    ls = alg.left_matrix(s)
    cols_u = ls[:, list(inv_idx)]
    res_u = linalg.solve(f, cols_u, eps.of(g))
    if res_u is None:
        return None
    rs = alg.right_matrix(s)
    cols_v = rs[:, list(inv_idx)]
    res_v = linalg.solve(f, cols_v, eps.of(ginv))
    if res_v is None:
        return None
    u = graded.embed_component(ginv, res_u[0])
    v = graded.embed_component(ginv, res_v[0])
    assert array_eq(alg.mul(s, u), eps.of(g))
    assert array_eq(u, v), "one-sided epsilon inverses disagree"
    return EpsilonInvertibleWitness(g, s, u)


def _corner_ideal_module(graded, eps_vec):
    r, ridx = graded.R_corner()
    e = graded.to_R(eps_vec)
    vecs = [r.mul(r.basis_vector(i), e) for i in range(r.dim)]
    rows = linalg.row_space(r.field, np.array(vecs))
    return graded.left_module_on_rows([graded.from_R(row) for row in rows]), rows


def find_epsilon_invertible(graded: GradedRing, eps: EpsilonSystem, g,
                            strategy="auto", seed=0, budget=DEFAULT_BUDGET,
                            trials=1000) -> Decision:
    """Search for s in A_g with s*u = eps_g, u*s = eps_{g^-1}.

    Tri-state: "no" only from deterministic routes (dimension mismatch or an
    exhausted finite enumeration); randomized failures give "undecided".
    """
    alg, f, grp = graded.algebra, graded.algebra.field, graded.group
    g = graded._canon(g)
    idx = graded.component_indices(g)
    if not idx:
        z = f.zeros((alg.dim,))
        return yes(witness=EpsilonInvertibleWitness(g, z, z), reason="empty component")

    eps_rows_mod, eps_rows = _corner_ideal_module(graded, eps.of(g))
    dim_target = eps_rows.shape[0]
    if len(idx) != dim_target:
        return no(reason=f"component dim {len(idx)} differs from corner ideal dim {dim_target}")

    def exhaustive_elements():
        count = 0
        for coords in f.vectors(len(idx)):
            count += 1
            s = graded.embed_component(g, coords)
            w = _witness_for_candidate(graded, eps, g, s)
            if w is not None:
                return yes(witness=w, checked=count)
        return no(checked=count, reason="exhausted component enumeration")

    def module_iso_route():
        a_mod = graded.left_module_on_indices(idx)
        homs = hom_matrices(f, eps_rows_mod.acts, a_mod.acts, eps_rows_mod.dim, a_mod.dim)
        if not homs:
            return no(reason="zero hom space between component and corner ideal")
        k = len(homs)
        if f.size is None or f.size**k > budget:
            return undecided(reason="hom-coefficient space exceeds budget")
        e_coords = linalg.coords_in_basis(f, eps_rows, graded.to_R(eps.of(g)))
        count = 0
        stacked = np.array(homs)
        for coeff in f.vectors(k):
            count += 1
            h = f.normalize(np.tensordot(coeff, stacked, axes=([0], [0])))
            s_comp = f.normalize(np.dot(h, e_coords))
            s = graded.embed_component(g, s_comp)
            w = _witness_for_candidate(graded, eps, g, s)
            if w is not None:
                return yes(witness=w, checked=count)
        return no(checked=count, reason="exhausted hom-image candidates")

    def random_route():
        rng = random.Random(seed)
        count = 0
        for _ in range(trials):
            count += 1
            if f.size is not None:
                coords = f.asarray([rng.randrange(f.size) for _ in idx])
            else:
                coords = f.asarray([rng.randrange(-9, 10) for _ in idx])
            s = graded.embed_component(g, coords)
            w = _witness_for_candidate(graded, eps, g, s)
            if w is not None:
                return yes(witness=w, checked=count)
        return undecided(checked=count, reason="randomized search exhausted trials")

    if strategy == "exhaustive":
        if f.size is None or f.size**len(idx) > budget:
            raise SearchBudgetExceeded("component enumeration exceeds budget")
        return exhaustive_elements()
    if strategy == "module-iso":
        return module_iso_route()
    if strategy == "random":
        return random_route()
    if strategy != "auto":
        raise ValueError(f"unknown strategy {strategy!r}")

    n_elem = f.size**len(idx) if f.size is not None else None
    if n_elem is not None and n_elem <= budget:
        return exhaustive_elements()
    dec = module_iso_route()
    if not dec.is_undecided:
        return dec
    return random_route()


@dataclass
class CrossedDecision:
    status: str
    witnesses: dict
    failing_degree: object = None
    reason: str = ""
    checked: int = 0

    @property
    def is_yes(self):
        return self.status == "yes"

    @property
    def is_no(self):
        return self.status == "no"

    @property
    def is_undecided(self):
        return self.status == "undecided"


def is_epsilon_crossed_product(graded: GradedRing, eps: EpsilonSystem | None = None,
                               strategy="auto", seed=0, budget=DEFAULT_BUDGET,
                               trials=1000) -> CrossedDecision:
    """Epsilon-invertible element in every supported degree, with verified
    witnesses and the generator cross-check R s = A_g = s R."""
    if eps is None:
        eps = detect_epsilon(graded)
        if isinstance(eps, NotEpsilonStrong):
            return CrossedDecision("no", {}, failing_degree=eps.degree,
                                   reason=f"not epsilon-strong: {eps.reason}")
    witnesses = {}
    checked = 0
    for g in graded.support():
        dec = find_epsilon_invertible(graded, eps, g, strategy=strategy, seed=seed,
                                      budget=budget, trials=trials)
        checked += dec.checked
        if dec.is_no:
            return CrossedDecision("no", witnesses, failing_degree=g,
                                   reason=dec.reason, checked=checked)
        if dec.is_undecided:
            return CrossedDecision("undecided", witnesses, failing_degree=g,
                                   reason=dec.reason, checked=checked)
        w = dec.witness
        witnesses[g] = w
        assert w.verify(graded, eps)
        assert generator_condition_holds(graded, g, w.element), \
            "witness fails the generator condition"
    return CrossedDecision("yes", witnesses, checked=checked)


def generator_condition_holds(graded: GradedRing, g, s) -> bool:
    """R s = A_g = s R as subspaces."""
    alg = graded.algebra
    r_idx = graded.R_corner()[1]
    left = graded.subspace_of_vectors([alg.mul(alg.basis_vector(i), s) for i in r_idx])
    right = graded.subspace_of_vectors([alg.mul(s, alg.basis_vector(i)) for i in r_idx])
    comp = graded.component(g)
    return left == comp and right == comp


def find_generator_element(graded: GradedRing, g, seed=0, budget=DEFAULT_BUDGET,
                           trials=1000) -> Decision:
    """Search s in A_g with R s = A_g = s R, independent of epsilon data."""
    f = graded.algebra.field
    idx = graded.component_indices(g)
    if not idx:
        return yes(witness=f.zeros((graded.algebra.dim,)), reason="empty component")
    space = f.size**len(idx) if f.size is not None else None
    if space is not None and space <= budget:
        count = 0
        for coords in f.vectors(len(idx)):
            count += 1
            s = graded.embed_component(g, coords)
            if generator_condition_holds(graded, g, s):
                return yes(witness=s, checked=count)
        return no(checked=count, reason="exhausted component enumeration")
    rng = random.Random(seed)
    for t in range(trials):
        if f.size is not None:
            coords = f.asarray([rng.randrange(f.size) for _ in idx])
        else:
            coords = f.asarray([rng.randrange(-9, 10) for _ in idx])
        s = graded.embed_component(g, coords)
        if generator_condition_holds(graded, g, s):
            return yes(witness=s, checked=t + 1)
    return undecided(checked=trials, reason="randomized generator search exhausted")


# ---------------------------------------------------------------------------
# matrix gradings


def matrix_grading(graded: GradedRing, n: int) -> GradedRing:
    """M_n(A) with entrywise degrees: component at g is M_n(A_g)."""
    if n < 1:
        raise ValueError("matrix size must be positive")
    alg, f = graded.algebra, graded.algebra.field
    d = alg.dim
    big = n * n * d

    def pos(t, i, j):
        return t * n * n + i * n + j

    table = f.zeros((big, big, big))
    for t in range(d):
        for s in range(d):
            prod = alg.table[t, s]
            for i in range(n):
                for j in range(n):
                    for l in range(n):
                        row = pos(t, i, j)
                        col = pos(s, j, l)
                        for m in range(d):
                            if prod[m] != f.zero:
                                table[row, col, pos(m, i, l)] = prod[m]
    unit = f.zeros((big,))
    for t in range(d):
        if alg.unit[t] != f.zero:
            for i in range(n):
                unit[pos(t, i, i)] = alg.unit[t]
    names = [f"{alg.basis_names[t]}.e{i + 1}{j + 1}"
             for t in range(d) for i in range(n) for j in range(n)]
    mat = StructureAlgebra(f, table, unit, basis_names=names, validate=False)
    degrees = [graded.degrees[t] for t in range(d) for _ in range(n * n)]
    return GradedRing(mat, graded.group, degrees, validate=False)


def matcro_decide(graded: GradedRing, n: int, strategy="auto", seed=0,
                  budget=DEFAULT_BUDGET, trials=1000):
    """Crossed-product decision for M_n(A), along two routes that must agree.

    Route one: epsilon-invertible elements in every degree of M_n(A).
    Route two: generator elements kappa with M_n(R) kappa = M_n(A_g) =
    kappa M_n(R), searched independently of epsilon data.  The corner-iso
    route is recorded as equivalent by construction, not recomputed.
    """
    big = matrix_grading(graded, n)
    eps_big = detect_epsilon(big)
    if isinstance(eps_big, NotEpsilonStrong):
        raise ValueError(f"matrix ring is not epsilon-strong: {eps_big.reason}")
    crossed = is_epsilon_crossed_product(big, eps_big, strategy=strategy, seed=seed,
                                         budget=budget, trials=trials)
    generator = {}
    for g in big.support():
        if crossed.is_yes:
            s = crossed.witnesses[g].element
            ok = generator_condition_holds(big, g, s)
            generator[g] = yes(witness=s) if ok else no(reason="witness fails generator condition")
        else:
            generator[g] = find_generator_element(big, g, seed=seed, budget=budget,
                                                  trials=trials)
    gen_status = "yes"
    for g, dec in generator.items():
        if dec.is_no:
            gen_status = "no"
            break
        if dec.is_undecided:
            gen_status = "undecided"
    agreement = (crossed.status == gen_status
                 or "undecided" in (crossed.status, gen_status))
    report = Report()
    report.add("epsilon-invertible route", crossed.is_yes,
               f"{crossed.status}: {crossed.reason}")
    report.add("generator route", gen_status == "yes", gen_status)
    report.add("routes agree", agreement,
               f"{crossed.status} vs {gen_status}")
    return {
        "matrix_ring": big,
        "epsilon": eps_big,
        "crossed": crossed,
        "generator": generator,
        "generator_status": gen_status,
        "agreement": agreement,
        "theta_route": "equivalent by the generator characterization (not recomputed)",
        "report": report,
    }


def is_strongly_graded(graded: GradedRing, eps=None) -> bool:
    """Support forms a subgroup and every supported epsilon equals 1."""
    if eps is None:
        eps = detect_epsilon(graded)
    if isinstance(eps, NotEpsilonStrong):
        return False
    supp = set(graded.support())
    for g in supp:
        if graded.group.inverse(g) not in supp:
            return False
        for h in supp:
            if graded.group.op(g, h) not in supp:
                return False
        if not array_eq(eps.of(g), graded.algebra.unit):
            return False
    return True
