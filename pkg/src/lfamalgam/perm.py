"""Closure of permutation generators into an explicitly tabled group.

Permutations are integer arrays acting from the right: the product
``f1 * f2`` applies ``f1`` first, so as arrays it is ``f2[f1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded

DEFAULT_MAX_ORDER = 6000


@dataclass
class PermClosure:
    elements: list  # np.ndarray per element, index 0 is the identity
    table: np.ndarray
    generator_index: list[int]
    right: np.ndarray  # right[x, k] = index of x * gens[k]

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, perm) -> int:
        return self._lookup[np.asarray(perm, dtype=np.int32).tobytes()]


def compose(f1, f2):
    """Right-action product: apply ``f1`` then ``f2``."""
    return f2[f1]


def close_permutations(gens: Sequence, degree: int | None = None, max_order: int = DEFAULT_MAX_ORDER,
                       want_table: bool = True) -> PermClosure:
    """Breadth-first numbering of ``<gens>`` from the identity.

    New elements are discovered by right-multiplying already numbered
    elements by the generators in list order, which makes the numbering
    (and therefore the table) a deterministic function of the generator
    list.
    """
    gens = [np.asarray(g, dtype=np.int32) for g in gens]
    if degree is None:
        degree = len(gens[0]) if gens else 0
    ident = np.arange(degree, dtype=np.int32)
    # each element is held once, as the bytes key of the lookup table
    keys = [ident.tobytes()]
    lookup = {keys[0]: 0}
    parent = [(-1, -1)]
    right: list[list[int]] = []
    i = 0
    while i < len(keys):
        x = np.frombuffer(keys[i], dtype=np.int32)
        row = []
        for k, s in enumerate(gens):
            key = s[x].tobytes()
            j = lookup.get(key)
            if j is None:
                j = len(keys)
                if j >= max_order:
                    del keys, lookup
                    raise BudgetExceeded(
                        f"permutation group exceeds {max_order} elements",
                        {"max_order": max_order, "degree": degree},
                    )
                lookup[key] = j
                keys.append(key)
                parent.append((i, k))
            row.append(j)
        right.append(row)
        i += 1
    n = len(keys)
    R = np.asarray(right, dtype=np.int32).reshape(n, len(gens))
    table = _table_from_cayley(R, parent) if want_table else None
    gen_index = [lookup[g.tobytes()] for g in gens]
    out = PermClosure([np.frombuffer(k, dtype=np.int32) for k in keys], table, gen_index, R)
    out._lookup = lookup
    return out


def _table_from_cayley(R: np.ndarray, parent: list[tuple[int, int]]) -> np.ndarray:
    n = R.shape[0]
    table = np.empty((n, n), dtype=np.int32)
    table[:, 0] = np.arange(n, dtype=np.int32)
    for h in range(1, n):
        p, k = parent[h]
        table[:, h] = R[table[:, p], k]
    return table


def format_permutation(perm) -> str:
    """Disjoint cycles, fixed points omitted, cycles ordered by least point."""
    perm = [int(v) for v in perm]
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) if cycles else "()"


class PermGroup:
    """Permutation group given by generators; orders come from Schreier-Sims.

    Used where the generated group is far too large to enumerate (the
    stable amalgam of two non-normal extensions easily has 10^8 elements).
    """

    def __init__(self, gens: Sequence, degree: int | None = None):
        self.gens = [np.asarray(g, dtype=np.int32) for g in gens]
        if degree is None:
            degree = len(self.gens[0]) if self.gens else 0
        self.degree = degree
        self._sym = None
        self._order = None

    @property
    def sympy(self):
        if self._sym is None:
            from sympy.combinatorics import Permutation, PermutationGroup

            gens = [Permutation(g.tolist()) for g in self.gens] or [Permutation(list(range(max(self.degree, 1))))]
            self._sym = PermutationGroup(gens)
        return self._sym

    @property
    def order(self) -> int:
        if self._order is None:
            if self.degree <= 1 or not self.gens:
                self._order = 1
            else:
                self._order = int(self.sympy.order())
        return self._order

    def contains(self, perm) -> bool:
        from sympy.combinatorics import Permutation

        return bool(self.sympy.contains(Permutation(np.asarray(perm).tolist())))

    def closure(self, max_order: int = DEFAULT_MAX_ORDER, want_table: bool = True) -> PermClosure:
        if self.order > max_order:
            raise BudgetExceeded(f"group of order {self.order} exceeds table budget {max_order}",
                                 {"order": self.order, "max_order": max_order})
        gens = self.gens or [np.arange(self.degree, dtype=np.int32)]
        return close_permutations(gens, degree=self.degree, max_order=max_order, want_table=want_table)


def diagonal(gens_a: Sequence, gens_b: Sequence) -> list[np.ndarray]:
    """Generators of the subdirect product acting on the disjoint union."""
    if len(gens_a) != len(gens_b):
        raise ValueError("generator lists differ in length")
    if not gens_a:
        return []
    na = len(gens_a[0])
    return [np.concatenate([np.asarray(a), np.asarray(b) + na]).astype(np.int32) for a, b in zip(gens_a, gens_b)]


def generator_map_is_isomorphism(gens_a: Sequence, gens_b: Sequence) -> bool:
    """Whether ``a_i -> b_i`` extends to an isomorphism ``<a> -> <b>``.

    Equivalent labeled actions settle it at once.  Otherwise both
    projections of the diagonal group are onto, so the map is a
    well-defined isomorphism exactly when all three orders agree.
    """
    if permutation_isomorphic(gens_a, gens_b):
        return True
    A, B = PermGroup(gens_a), PermGroup(gens_b)
    if A.order != B.order:
        return False
    return PermGroup(diagonal(gens_a, gens_b)).order == A.order


def orbit_codes(gens: Sequence, degree: int | None = None) -> list[bytes]:
    """Labeled code of every orbit, read by breadth-first search from its least point."""
    gens = [np.asarray(g) for g in gens]
    if degree is None:
        degree = len(gens[0]) if gens else 0
    seen = np.zeros(degree, dtype=bool)
    codes = []
    for start in range(degree):
        if seen[start]:
            continue
        label = {start: 0}
        order = [start]
        i = 0
        while i < len(order):
            p = order[i]
            i += 1
            for g in gens:
                q = int(g[p])
                if q not in label:
                    label[q] = len(order)
                    order.append(q)
        pts = np.asarray(order)
        seen[pts] = True
        lab = np.empty(degree, dtype=np.int32)
        lab[pts] = np.arange(len(order), dtype=np.int32)
        codes.append(b"".join(lab[g[pts]].tobytes() for g in gens) + len(order).to_bytes(8, "little"))
    return codes


def permutation_isomorphic(gens_a: Sequence, gens_b: Sequence) -> bool:
    """Sufficient test: the two labeled actions agree orbit by orbit."""
    if len(gens_a) != len(gens_b):
        return False
    if not gens_a:
        return True
    return sorted(orbit_codes(gens_a)) == sorted(orbit_codes(gens_b))
