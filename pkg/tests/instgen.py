"""Seeded random instance generators shared by the property and acceptance
suites.  Every generated object is a genuine validated algebra."""

from __future__ import annotations

import random

import numpy as np

from grado.algebra import StructureAlgebra
from grado.crossed import TwistedPartialAction, build_crossed_product
from grado.fixtures import group_algebra, product_ring
from grado.graded import GradedRing
from grado.groups import cyclic, direct_product, klein_four
from grado.linalg import GF


def rotation_partial_action(field, n, subset):
    """Restriction of the rotation action of Z_n on k^n to a coordinate
    subset: the standard way to manufacture honest partial actions."""
    grp = cyclic(n)
    base = product_ring(field, len(subset))
    pos = {x: k for k, x in enumerate(subset)}
    idem = {}
    alpha = {}
    for g in range(n):
        dom = [x for x in subset if (x - g) % n in pos]  # X cap gX
        vec = field.zeros((len(subset),))
        for x in dom:
            vec[pos[x]] = field.one
        idem[g] = vec
        mat = field.zeros((len(subset), len(subset)))
        for x in dom:
            mat[pos[x], pos[(x - g) % n]] = field.one
        alpha[g] = mat
    return TwistedPartialAction(base, grp, idem, alpha)


def random_rotation_crossed(rng, field, max_dim=6):
    for _ in range(40):
        n = rng.choice([2, 2, 3])
        size = rng.randint(1, n)
        subset = sorted(rng.sample(range(n), size))
        t = rotation_partial_action(field, n, subset)
        dim = sum(int(t.one(g).sum()) for g in range(n))
        if 0 < dim <= max_dim:
            return build_crossed_product(t)
    raise RuntimeError("no instance within the dimension cap")


def random_group_algebra(rng, field, max_dim=6):
    grp = rng.choice([cyclic(2), cyclic(3), cyclic(4), klein_four()])
    if grp.order > max_dim:
        grp = cyclic(2)
    return group_algebra(field, grp)


def coarse_group_algebra(rng, field):
    """k[Z4] graded by Z2 through the quotient degree map: strongly graded
    with 2-dimensional components."""
    ga = group_algebra(field, cyclic(4))
    return GradedRing(ga.algebra, cyclic(2), [g % 2 for g in range(4)])


def nil_instance(rng, field):
    f = field
    table = f.zeros((2, 2, 2))
    table[0, 0, 0] = f.one
    table[0, 1, 1] = f.one
    table[1, 0, 1] = f.one
    alg = StructureAlgebra(f, table, f.asarray([1, 0]), validate=False)
    return GradedRing(alg, cyclic(2), [0, 1])


def triangular_instance(rng, field):
    """Upper triangular 2x2 matrices, off-diagonal in degree 1: the standard
    non-symmetric grading."""
    f = field
    # basis: E11, E22, E12
    table = f.zeros((3, 3, 3))
    table[0, 0, 0] = f.one
    table[1, 1, 1] = f.one
    table[0, 2, 2] = f.one  # E11 E12 = E12
    table[2, 1, 2] = f.one  # E12 E22 = E12
    alg = StructureAlgebra(f, table, f.asarray([1, 1, 0]), validate=False)
    return GradedRing(alg, cyclic(2), [0, 0, 1])


def direct_sum_instances(a: GradedRing, b: GradedRing) -> GradedRing:
    """Product ring with the diagonal grading (same group on both sides)."""
    f = a.algebra.field
    da, db = a.algebra.dim, b.algebra.dim
    d = da + db
    table = f.zeros((d, d, d))
    table[:da, :da, :da] = a.algebra.table
    table[da:, da:, da:] = b.algebra.table
    unit = f.zeros((d,))
    unit[:da] = a.algebra.unit
    unit[da:] = b.algebra.unit
    alg = StructureAlgebra(f, table, unit, validate=False)
    return GradedRing(alg, a.group, list(a.degrees) + list(b.degrees))


def scramble(graded: GradedRing, rng) -> GradedRing:
    """Random homogeneous change of basis: same ring, generic coordinates."""
    f = graded.algebra.field
    d = graded.algebra.dim
    t = f.zeros((d, d))
    for g in set(graded.degrees):
        idx = [i for i, dg in enumerate(graded.degrees) if dg == g]
        k = len(idx)
        while True:
            block = f.random_matrix(rng, k, k)
            from grado import linalg
            if linalg.is_invertible(f, block):
                break
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                t[i, j] = block[a, b]
    new_alg = graded.algebra.change_of_basis(t)
    return GradedRing(new_alg, graded.group, list(graded.degrees))


def random_graded_instance(rng: random.Random, max_dim=6):
    """One random graded ring of dimension <= max_dim over GF(2) or GF(3);
    mixes epsilon-strong and non-examples; coordinates scrambled half the
    time."""
    field = GF(rng.choice([2, 3]))
    kind = rng.randrange(6)
    if kind == 0:
        g = random_group_algebra(rng, field, max_dim)
    elif kind == 1:
        g = coarse_group_algebra(rng, field)
    elif kind in (2, 3):
        g = random_rotation_crossed(rng, field, max_dim)
    elif kind == 4:
        g = nil_instance(rng, field)
    else:
        g = triangular_instance(rng, field)
    if g.algebra.dim <= max_dim - 2 and rng.random() < 0.3:
        extra = nil_instance(rng, field) if rng.random() < 0.5 else None
        if extra is not None and g.group == extra.group:
            g = direct_sum_instances(g, extra)
    if rng.random() < 0.5:
        g = scramble(g, rng)
    return g


def random_commutative_galois_instance(rng: random.Random):
    """Epsilon-strong ring with commutative corner whose induced action
    admits partial Galois coordinates (subset restrictions of free rotation
    actions always do)."""
    field = GF(rng.choice([2, 3, 5]))
    n = rng.choice([2, 2, 3, 4])
    size = rng.randint(1, n)
    subset = sorted(rng.sample(range(n), size))
    t = rotation_partial_action(field, n, subset)
    return build_crossed_product(t)


def random_graded_module(rng: random.Random, graded: GradedRing, max_dim=5):
    """A graded module assembled from shifted cyclic pieces of the regular
    module (always valid)."""
    from grado.gmod import GradedModule, suspend

    reg = GradedModule.regular(graded)
    picks = []
    grp = graded.group
    supp = graded.support()
    shifts = [grp.id] + supp
    total = 0
    mods = []
    for _ in range(rng.randint(1, 2)):
        l = rng.choice(shifts)
        m = suspend(reg, l)
        if total + m.dim > max_dim + graded.algebra.dim:
            continue
        mods.append(m)
        total += m.dim
    if not mods:
        mods = [reg]
    f = graded.algebra.field
    dim = sum(m.dim for m in mods)
    acts = []
    for i in range(graded.algebra.dim):
        big = f.zeros((dim, dim))
        pos = 0
        for m in mods:
            big[pos:pos + m.dim, pos:pos + m.dim] = m.acts[i]
            pos += m.dim
        acts.append(big)
    degrees = []
    for m in mods:
        degrees.extend(m.degrees)
    return GradedModule(graded, degrees, acts)
