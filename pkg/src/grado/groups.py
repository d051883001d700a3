"""Group descriptions: finite groups by Cayley table, free abelian groups.

Group elements are plain hashable handles: ints (indices) for finite groups,
int tuples for free abelian ones.
"""

from __future__ import annotations

import itertools

import numpy as np


class FiniteGroup:
    def __init__(self, table, identity=None, names=None, validate=True):
        self.table = np.asarray(table, dtype=np.int64)
        n = self.table.shape[0]
        if self.table.shape != (n, n):
            raise ValueError("Cayley table must be square")
        self.order = n
        self.names = list(names) if names else [str(i) for i in range(n)]
        if identity is None:
            identity = self._find_identity()
        self.identity = int(identity)
        self.inverse_table = self._build_inverses()
        if validate:
            self._validate()

    @property
    def id(self):
        return self.identity

    def op(self, a, b):
        return int(self.table[a, b])

    def inverse(self, a):
        return int(self.inverse_table[a])

    def elements(self):
        return list(range(self.order))

    def is_finite(self):
        return True

    def _find_identity(self):
        for e in range(self.order):
            if all(self.table[e, x] == x and self.table[x, e] == x for x in range(self.order)):
                return e
        raise ValueError("table has no identity element")

    def _build_inverses(self):
        inv = np.full(self.order, -1, dtype=np.int64)
        for a in range(self.order):
            for b in range(self.order):
                if self.table[a, b] == self.identity and self.table[b, a] == self.identity:
                    inv[a] = b
                    break
            if inv[a] == -1:
                raise ValueError(f"element {a} has no inverse")
        return inv

    def _validate(self):
        n = self.order
        if self.table.min() < 0 or self.table.max() >= n:
            raise ValueError("table entries out of range")
        for a, b, c in itertools.product(range(n), repeat=3):
            if self.table[self.table[a, b], c] != self.table[a, self.table[b, c]]:
                raise ValueError(f"table is not associative at ({a}, {b}, {c})")

    def subgroup(self, subset):
        """Group structure on a closed subset; returns (group, element list)."""
        elems = sorted(set(int(x) for x in subset))
        index = {g: i for i, g in enumerate(elems)}
        if self.identity not in index:
            raise ValueError("subset does not contain the identity")
        table = np.zeros((len(elems), len(elems)), dtype=np.int64)
        for i, a in enumerate(elems):
            for j, b in enumerate(elems):
                c = self.op(a, b)
                if c not in index:
                    raise ValueError(f"subset is not closed: {a}*{b} = {c}")
                table[i, j] = index[c]
        sub = FiniteGroup(table, identity=index[self.identity],
                          names=[self.names[g] for g in elems], validate=False)
        return sub, elems

    def element_to_json(self, g):
        return int(g)

    def element_from_json(self, v):
        g = int(v)
        if not 0 <= g < self.order:
            raise ValueError(f"group element index {g} out of range")
        return g

    def __eq__(self, other):
        return (isinstance(other, FiniteGroup) and other.order == self.order
                and bool(np.array_equal(other.table, self.table))
                and other.identity == self.identity)

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


class FreeAbelian:
    """Z^r, elements are integer r-tuples."""

    def __init__(self, rank):
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank

    @property
    def id(self):
        return (0,) * self.rank

    def op(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inverse(self, a):
        return tuple(-x for x in a)

    def is_finite(self):
        return False

    def element_to_json(self, g):
        return list(g)

    def element_from_json(self, v):
        if isinstance(v, int) and self.rank == 1:
            return (v,)
        t = tuple(int(x) for x in v)
        if len(t) != self.rank:
            raise ValueError(f"expected a rank-{self.rank} vector, got {v!r}")
        return t

    def __eq__(self, other):
        return isinstance(other, FreeAbelian) and other.rank == self.rank

    def __repr__(self):
        return f"FreeAbelian(rank={self.rank})"


def cyclic(n):
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, identity=0, names=[str(i) for i in range(n)], validate=False)


def direct_product(g1, g2):
    n1, n2 = g1.order, g2.order
    idx = lambda a, b: a * n2 + b
    table = np.zeros((n1 * n2, n1 * n2), dtype=np.int64)
    for a1, b1, a2, b2 in itertools.product(range(n1), range(n2), range(n1), range(n2)):
        table[idx(a1, b1), idx(a2, b2)] = idx(g1.op(a1, a2), g2.op(b1, b2))
    names = [f"({g1.names[a]},{g2.names[b]})" for a in range(n1) for b in range(n2)]
    return FiniteGroup(table, identity=idx(g1.identity, g2.identity), names=names, validate=False)


def klein_four():
    return direct_product(cyclic(2), cyclic(2))


def group_to_json(group):
    if isinstance(group, FiniteGroup):
        return {"finite": {"table": group.table.tolist(), "identity": group.identity,
                           "names": group.names}}
    return {"free_abelian": group.rank}


def group_from_json(doc):
    if "finite" in doc:
        d = doc["finite"]
        return FiniteGroup(d["table"], identity=d.get("identity"), names=d.get("names"))
    if "free_abelian" in doc:
        return FreeAbelian(int(doc["free_abelian"]))
    raise ValueError(f"bad group descriptor {doc!r}")
