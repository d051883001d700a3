"""Primitive idempotent frames, the stabilizer subgroup of a set of
projectives, graded subrings over it, and the index partial action.

Semiperfectness is consumed as data: the caller supplies the frame (or
derives one for commutative corners via the splitting mode in
:mod:`grado.algebra`); the artifact validates it rather than guessing."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import StructureAlgebra, array_eq
from .bimodule import LeftModule, is_fgp, is_isomorphic, hom_matrices, tensor_with_left_module
from .decision import Report, no, undecided, yes
from .gmod import build_end_ring, direct_sum_module, induce
from .graded import (DEFAULT_BUDGET, EpsilonSystem, GradedRing, NotEpsilonStrong,
                     detect_epsilon, is_epsilon_crossed_product)
from .groups import FiniteGroup, cyclic


class IdempotentFrame:
    """Primitive orthogonal idempotents of the corner with pairwise
    non-isomorphic cyclic projectives; optionally a full orthogonal
    completion assigned to representatives."""

    def __init__(self, ring: StructureAlgebra, idempotents, completion=None,
                 assignment=None, validate=True, budget=DEFAULT_BUDGET):
        self.ring = ring
        f = ring.field
        self.E = [f.asarray(e) for e in idempotents]
        self.completion = [f.asarray(e) for e in completion] if completion else None
        self.assignment = list(assignment) if assignment is not None else None
        self._cyclic_cache = {}
        if validate:
            self._validate(budget)

    def cyclic_module(self, vec):
        key = tuple(int(x) if not isinstance(x, object) else x for x in np.asarray(vec).tolist())
        if key not in self._cyclic_cache:
            self._cyclic_cache[key] = LeftModule.cyclic(self.ring, np.asarray(vec),
                                                        validate=False)
        return self._cyclic_cache[key]

    def _validate(self, budget):
        ring, f = self.ring, self.ring.field
        for e in self.E:
            if not ring.is_idempotent(e):
                raise ValueError("frame contains a non-idempotent")
        for e1, e2 in itertools.combinations(self.E, 2):
            if ring.mul(e1, e2).any() or ring.mul(e2, e1).any():
                raise ValueError("frame idempotents are not orthogonal")
        for (i, e1), (j, e2) in itertools.combinations(enumerate(self.E), 2):
            m1, _ = self.cyclic_module(e1)
            m2, _ = self.cyclic_module(e2)
            dec = is_isomorphic(m1, m2, budget=budget)
            if dec.is_yes:
                raise ValueError(f"frame is redundant: Re{i} and Re{j} are isomorphic")
            if dec.is_undecided:
                raise ValueError("frame irredundancy could not be decided within budget")
        if self.completion is not None:
            total = f.zeros((ring.dim,))
            for e in self.completion:
                if not ring.is_idempotent(e):
                    raise ValueError("completion contains a non-idempotent")
                total = f.normalize(total + e)
            if not array_eq(total, ring.unit):
                raise ValueError("completion does not sum to the identity")
            for e1, e2 in itertools.combinations(self.completion, 2):
                if ring.mul(e1, e2).any() or ring.mul(e2, e1).any():
                    raise ValueError("completion idempotents are not orthogonal")
            if self.assignment is None or len(self.assignment) != len(self.completion):
                raise ValueError("completion needs one representative index per idempotent")
            for k, rep_idx in enumerate(self.assignment):
                m1, _ = self.cyclic_module(self.completion[k])
                m2, _ = self.cyclic_module(self.E[rep_idx])
                dec = is_isomorphic(m1, m2, budget=budget)
                if not dec.is_yes:
                    raise ValueError(
                        f"completion element {k} is not isomorphic to its representative")


def frame_from_commutative_corner(graded: GradedRing, budget=DEFAULT_BUDGET):
    """Automatic frame for a commutative corner over GF(p): the primitive
    splitting, taken as its own completion."""
    from .algebra import primitive_idempotents

    r, _ = graded.R_corner()
    prims = primitive_idempotents(r)
    return IdempotentFrame(r, prims, completion=prims,
                           assignment=list(range(len(prims))), budget=budget)


def component_tensor_cyclic(graded: GradedRing, g, frame: IdempotentFrame, i):
    """A_g (x)_R Re_i through the honest tensor quotient."""
    n, _ = frame.cyclic_module(frame.E[i])
    return tensor_with_left_module(graded.component_bimodule(g), n)


def _iso_to_some(graded, frame, mod, candidates, budget, rng):
    """First candidate index whose cyclic module is isomorphic to mod."""
    any_undecided = False
    for j in candidates:
        m2, _ = frame.cyclic_module(frame.E[j])
        dec = is_isomorphic(mod, m2, budget=budget, rng=rng)
        if dec.is_yes:
            return j, False
        if dec.is_undecided:
            any_undecided = True
    return None, any_undecided


def lemma_ege_check(graded: GradedRing, eps: EpsilonSystem, frame: IdempotentFrame,
                    degrees=None) -> Report:
    """Equivalence of eps_g e = e, A_g e != 0 and A_{g^-1} e != 0 for frame
    idempotents, plus the 0-or-e dichotomy for eps_g e."""
    rep = Report()
    alg, f, grp = graded.algebra, graded.algebra.field, graded.group
    degs = degrees if degrees is not None else graded.support()
    pool = frame.E + (frame.completion or [])
    for g in degs:
        ginv = grp.inverse(g)
        for k, e_r in enumerate(pool):
            e = graded.from_R(e_r) if len(e_r) != alg.dim else e_r
            prod = alg.mul(eps.of(g), e)
            dichotomy = array_eq(prod, e) or not prod.any()
            cond_eps = array_eq(prod, e)
            a_ge = [alg.mul(alg.basis_vector(i), e) for i in graded.component_indices(g)]
            cond_g = any(v.any() for v in a_ge)
            a_inv_e = [alg.mul(alg.basis_vector(i), e) for i in graded.component_indices(ginv)]
            cond_inv = any(v.any() for v in a_inv_e)
            rep.add(f"dichotomy {g} e{k}", dichotomy)
            rep.add(f"equivalence {g} e{k}", cond_eps == cond_g == cond_inv,
                    f"eps:{cond_eps} A_g:{cond_g} A_ginv:{cond_inv}")
    return rep


def compute_GX(graded: GradedRing, frame: IdempotentFrame, X=None, test_set=None,
               budget=DEFAULT_BUDGET, seed=0):
    """Degrees g with A_g (x) Re_i isomorphic to some Re_j (i, j ranging over
    X); subgroup axioms checked within the test set."""
    grp = graded.group
    X = list(range(len(frame.E))) if X is None else list(X)
    if not X:
        raise ValueError("X must be nonempty")
    if test_set is None:
        if grp.is_finite():
            test_set = list(grp.elements())
        else:
            supp = graded.support()
            test_set = sorted(set(supp) | {grp.inverse(g) for g in supp} | {grp.id})
    rng = random.Random(seed)
    members = []
    witnesses = {}
    undecided_degrees = []
    for g in test_set:
        assign = {}
        ok = True
        for i in X:
            mod = component_tensor_cyclic(graded, g, frame, i)
            j, saw_und = _iso_to_some(graded, frame, mod, X, budget, rng)
            if j is None:
                if saw_und:
                    undecided_degrees.append(g)
                ok = False
                break
            assign[i] = j
        if ok:
            members.append(g)
            witnesses[g] = assign
    rep = Report()
    rep.add("identity belongs", grp.id in members)
    for g in members:
        gi = grp.inverse(g)
        if gi in test_set:
            rep.add(f"inverse of {g} belongs", gi in members)
        for h in members:
            gh = grp.op(g, h)
            if gh in test_set:
                rep.add(f"closure {g},{h}", gh in members)
    return {
        "members": members,
        "witnesses": witnesses,
        "undecided": undecided_degrees,
        "report": rep,
        "test_set": list(test_set),
    }


def graded_subring(graded: GradedRing, degree_subset):
    """The subring spanned by the components over a closed degree subset,
    graded over the corresponding subgroup."""
    grp = graded.group
    subset = [graded._canon(g) for g in degree_subset]
    if grp.is_finite():
        sub, elems = grp.subgroup(subset)
        remap = {g: k for k, g in enumerate(elems)}
    else:
        if set(subset) != {grp.id}:
            raise ValueError("infinite-group subrings are supported for the trivial "
                             "subgroup only")
        sub = cyclic(1)
        remap = {grp.id: 0}
    idx = [i for i in range(graded.algebra.dim) if graded.degrees[i] in remap]
    f = graded.algebra.field
    k = len(idx)
    table = f.zeros((k, k, k))
    for a, i in enumerate(idx):
        for b, j in enumerate(idx):
            table[a, b] = graded.algebra.table[i, j][idx]
    unit = graded.algebra.unit[idx]
    names = [graded.algebra.basis_names[i] for i in idx]
    alg = StructureAlgebra(f, table, unit, basis_names=names, validate=False)
    degrees = [remap[graded.degrees[i]] for i in idx]
    return GradedRing(alg, sub, degrees, validate=False)


def theorem_semicase_check(graded: GradedRing, eps: EpsilonSystem,
                           frame: IdempotentFrame, X=None, pics_members=None,
                           test_set=None, budget=DEFAULT_BUDGET, seed=0):
    """Stabilizer-subgroup pipeline: the epsilon characterization of the full
    stabilizer, the crossed-product property of END over the subring, the
    projective-image law for partially invertible bimodules, and the
    progenerator data for the chosen summand."""
    alg, grp = graded.algebra, graded.group
    rep = Report()
    full = compute_GX(graded, frame, None, test_set, budget=budget, seed=seed)
    eps_route = [g for g in full["test_set"]
                 if all(array_eq(alg.mul(eps.of(g), graded.from_R(e)), graded.from_R(e))
                        for e in frame.E)]
    rep.add("stabilizer equals epsilon route", set(full["members"]) == set(eps_route),
            f"iso {full['members']} vs eps {eps_route}")
    rep.add("stabilizer undecided-free", not full["undecided"], full["undecided"])

    gx = full if X is None else compute_GX(graded, frame, X, test_set,
                                           budget=budget, seed=seed)
    members = gx["members"]
    sub = graded_subring(graded, members)
    sub_eps = detect_epsilon(sub)
    rep.add("subring epsilon-strong", not isinstance(sub_eps, NotEpsilonStrong))

    x_list = list(range(len(frame.E))) if X is None else list(X)
    r_new, _ = sub.R_corner()
    mods = []
    for i in x_list:
        m, _ = frame.cyclic_module(frame.E[i])
        mods.append(LeftModule(r_new, m.acts, validate=False))
    q_x = direct_sum_module(r_new, mods)
    ind = induce(sub, q_x)
    end_ring, _ = build_end_ring(ind)
    end_eps = detect_epsilon(end_ring)
    end_ok = not isinstance(end_eps, NotEpsilonStrong)
    rep.add("END of induced summand epsilon-strong", end_ok)
    crossed_status = None
    if end_ok:
        crossed = is_epsilon_crossed_product(end_ring, end_eps, seed=seed, budget=budget)
        crossed_status = crossed.status
    rep.add("END of induced summand is a partial crossed product",
            crossed_status == "yes", crossed_status)

    fgp = is_fgp(q_x, "left")
    rep.add("summand projective", fgp.is_yes)
    trace = _trace_ideal(q_x)
    rep.add("summand generator (trace ideal equals corner)",
            trace.shape[0] == r_new.dim,
            f"trace dim {trace.shape[0]} of {r_new.dim}")

    if pics_members:
        for t, p in enumerate(pics_members):
            for i in range(len(frame.E)):
                n, _ = frame.cyclic_module(frame.E[i])
                prod = tensor_with_left_module(p, n)
                if prod.dim == 0:
                    rep.add(f"pics image {t},{i}", True, "zero")
                    continue
                j, saw_und = _iso_to_some(graded, frame, prod, range(len(frame.E)),
                                          budget, random.Random(seed))
                rep.add(f"pics image {t},{i}", j is not None,
                        "undecided" if saw_und else f"-> {j}")
    return {
        "stabilizer": full,
        "subgroup_members": members,
        "subring": sub,
        "end_ring": end_ring,
        "crossed": crossed_status,
        "report": rep,
    }


def _trace_ideal(module: LeftModule):
    """Span of images of module maps into the regular module."""
    ring, f = module.ring, module.ring.field
    reg = LeftModule.regular(ring)
    homs = hom_matrices(f, module.acts, reg.acts, module.dim, reg.dim)
    vecs = []
    for h in homs:
        for c in range(module.dim):
            vecs.append(h[:, c])
    if not vecs:
        return f.zeros((0, ring.dim))
    return linalg.row_space(f, np.array(vecs))


@dataclass
class IndexPartialAction:
    domains: dict
    maps: dict

    def is_global(self, degrees, size):
        return all(len(self.domains.get(g, ())) == size for g in degrees)


def index_partial_action(graded: GradedRing, frame: IdempotentFrame, test_set=None,
                         budget=DEFAULT_BUDGET, seed=0):
    """Set-theoretic partial action on frame indices: i is in the domain at g
    when A_g (x) Re_i is isomorphic to some Re_j; transport follows the
    inverse-degree tensors."""
    grp = graded.group
    if test_set is None:
        if grp.is_finite():
            test_set = list(grp.elements())
        else:
            supp = graded.support()
            test_set = sorted(set(supp) | {grp.inverse(g) for g in supp} | {grp.id})
    rng = random.Random(seed)
    n = len(frame.E)
    domains = {}
    maps = {}
    rep = Report()
    und = []
    for g in test_set:
        dom = []
        for i in range(n):
            mod = component_tensor_cyclic(graded, g, frame, i)
            if mod.dim == 0:
                continue
            j, saw_und = _iso_to_some(graded, frame, mod, range(n), budget, rng)
            if j is None:
                if saw_und:
                    und.append((g, i))
                continue
            dom.append(i)
        domains[g] = tuple(dom)
    for g in test_set:
        ginv = grp.inverse(g)
        if ginv not in domains:
            continue
        amap = {}
        for i in domains.get(ginv, ()):
            mod = component_tensor_cyclic(graded, ginv, frame, i)
            j, _ = _iso_to_some(graded, frame, mod, range(n), budget, rng)
            if j is not None:
                amap[i] = j
        maps[g] = amap
    act = IndexPartialAction(domains, maps)

    rep.add("undecided-free", not und, und)
    one = grp.id
    rep.add("identity domain total", len(domains.get(one, ())) == n)
    rep.add("identity map trivial", all(maps.get(one, {}).get(i) == i for i in range(n)))
    for g in test_set:
        ginv = grp.inverse(g)
        rep.add(f"domain symmetry {g}", domains.get(g) == domains.get(ginv),
                f"{domains.get(g)} vs {domains.get(ginv)}")
        amap = maps.get(g, {})
        rep.add(f"map {g} into domain", all(j in domains.get(g, ()) for j in amap.values()))
        rep.add(f"map {g} injective", len(set(amap.values())) == len(amap))
        back = maps.get(ginv, {})
        rep.add(f"map {g} inverted by {ginv}",
                all(back.get(j) == i for i, j in amap.items()))
    for g in test_set:
        for h in test_set:
            gh = grp.op(g, h)
            if gh not in test_set:
                continue
            ok = True
            for i, j in maps.get(h, {}).items():
                if j in maps.get(g, {}):
                    if maps.get(gh, {}).get(i) != maps[g][j]:
                        ok = False
            rep.add(f"composition {g},{h}", ok)
    return act, rep
