"""Quantifier-free types of tuples over finite parameter sets.

Over a finite base the basic type of ``a`` over ``A`` in ``H`` is the
isomorphism class of the marked group ``<A u a>`` in which every element of
``A`` is named and the tuple is marked.  We compute a canonical form by a
breadth-first numbering that only looks at the marks, so two types are
equal iff their canonical forms coincide byte for byte.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ArityMismatch, BaseMismatch, IndexOutOfRange
from .group import FiniteGroup, GroupTerm, Subgroup, eval_term, generated_subgroup, reduced_words


def _base_tuple(H: FiniteGroup, A) -> tuple[int, ...]:
    """Parameters as an ordered tuple; a Subgroup contributes its sorted members."""
    if A is None:
        return ()
    if isinstance(A, Subgroup):
        if A.parent != H:
            raise IndexOutOfRange("parameter subgroup lives in a different group")
        return A.members
    base = tuple(int(a) for a in A)
    H.check_index(*base)
    return base


def _greedy_generators(H: FiniteGroup, elems: Sequence[int]) -> list[int]:
    """Positions of a generating subsequence: keep an element iff it is new."""
    picked: list[int] = []
    span = {0}
    for pos, g in enumerate(elems):
        if g in span:
            continue
        picked.append(pos)
        span = set(generated_subgroup(H, [elems[p] for p in picked]).members)
    return picked


def _bfs(H: FiniteGroup, gens: Sequence[int]) -> list[int]:
    rows = H.rows
    order = [0]
    seen = {0}
    i = 0
    while i < len(order):
        x = rows[order[i]]
        i += 1
        for s in gens:
            y = x[s]
            if y not in seen:
                seen.add(y)
                order.append(y)
    return order


@dataclass(frozen=True)
class QfType:
    """Canonical marked-group form of a tuple over an ordered parameter list."""

    arity: int
    n_base: int
    table: bytes = field(repr=False)
    order: int
    base_pos: tuple[int, ...]
    tuple_pos: tuple[int, ...]

    @property
    def key(self) -> tuple:
        return (self.order, self.table, self.base_pos, self.tuple_pos)

    def group(self) -> FiniteGroup:
        t = np.frombuffer(self.table, dtype=np.int32).reshape(self.order, self.order)
        return FiniteGroup(t.copy())

    def restrict(self, base_positions: Sequence[int] = None, tuple_positions: Sequence[int] = None) -> "QfType":
        """Type of a sub-tuple over a sub-list of the parameters, from the form alone."""
        if base_positions is None:
            base_positions = range(self.n_base)
        if tuple_positions is None:
            tuple_positions = range(self.arity)
        M = self.group()
        return tp_bs(M, [self.tuple_pos[i] for i in tuple_positions], [self.base_pos[i] for i in base_positions])

    def holds(self, term: GroupTerm, params: Sequence[int] = ()) -> bool:
        """Whether ``term(tuple, params) = e``; params are positions in the base list."""
        M = self.group()
        return eval_term(M, term, list(self.tuple_pos) + [self.base_pos[p] for p in params]) == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, QfType) and self.arity == other.arity and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


def tp_bs(H: FiniteGroup, abar: Sequence[int], A=None) -> QfType:
    """Basic type of ``abar`` over ``A`` in ``H``.

    ``A`` may be a Subgroup (members taken in sorted order) or an ordered
    tuple of indices; the ordered form lets callers compare types over the
    same abstract base sitting inside different ambient groups.
    """
    abar = tuple(int(a) for a in abar)
    H.check_index(*abar)
    base = _base_tuple(H, A)
    gens = [base[p] for p in _greedy_generators(H, base)] + list(abar)
    order = _bfs(H, gens)
    label = np.full(H.order, -1, dtype=np.int32)
    idx = np.asarray(order, dtype=np.int64)
    label[idx] = np.arange(len(order), dtype=np.int32)
    sub = label[H.table[np.ix_(idx, idx)]]
    return QfType(
        arity=len(abar),
        n_base=len(base),
        table=np.ascontiguousarray(sub, dtype=np.int32).tobytes(),
        order=len(order),
        base_pos=tuple(int(label[b]) for b in base),
        tuple_pos=tuple(int(label[a]) for a in abar),
    )


def types_equal(p: QfType, q: QfType) -> bool:
    if p.arity != q.arity:
        raise ArityMismatch(f"arities {p.arity} and {q.arity}")
    if p.n_base != q.n_base or p.restrict(tuple_positions=()) != q.restrict(tuple_positions=()):
        raise BaseMismatch("types are over different parameter sets")
    return p == q


# --- splitting -----------------------------------------------------------------


@dataclass(frozen=True)
class SplitWitness:
    m: int
    b1: tuple[int, ...]
    b2: tuple[int, ...]
    reason: str

    def __bool__(self) -> bool:
        # a witness means the type splits, so it reads as "does not split: False"
        return False


def distinguishing_term(H: FiniteGroup, u: Sequence[int], v: Sequence[int], params: Sequence[int],
                        max_len: int = 6) -> str:
    """Shortest word telling ``u`` from ``v`` with parameters appended as extra letters."""
    gens = [params[p] for p in _greedy_generators(H, params)]
    n = len(u)
    for w in reduced_words(n + len(gens), max_len):
        x = eval_term(H, w, list(u) + gens) == 0
        y = eval_term(H, w, list(v) + gens) == 0
        if x != y:
            names = [f"x{i}" for i in range(n)] + [f"k{i}" for i in range(len(gens))]
            text = " ".join(names[s] + ("^-1" if e < 0 else "") for s, e in w.word)
            return f"{text} = e holds for exactly one tuple"
    return "generated marked subgroups are not isomorphic"


def does_not_split(H: FiniteGroup, abar: Sequence[int], G: Subgroup, K: Subgroup, m_max: int = 2,
                   explain: bool = True):
    """``True`` or the lexicographically least :class:`SplitWitness`.

    Scans tuples ``b`` of ``G`` of length ``m <= m_max``, grouped by their
    type over ``K``; the type of ``abar`` splits when two tuples of one group
    disagree once ``abar`` is appended.
    """
    abar = tuple(int(a) for a in abar)
    H.check_index(*abar)
    if G.parent != H or K.parent != H:
        raise IndexOutOfRange("G and K must be subgroups of H")
    if not set(K.members) <= set(G.members):
        raise IndexOutOfRange("K must lie inside G")
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    base = K.members
    for m in range(1, m_max + 1):
        buckets: dict = {}
        over_k: dict = {}
        joint: dict = {}
        tuples = list(itertools.product(G.members, repeat=m))
        for b in tuples:
            over_k[b] = tp_bs(H, b, base).key
            buckets.setdefault(over_k[b], []).append(b)
            joint[b] = tp_bs(H, b + abar, base).key
        for b1 in tuples:
            for b2 in buckets[over_k[b1]]:
                if b2 > b1 and joint[b2] != joint[b1]:
                    reason = distinguishing_term(H, b1 + abar, b2 + abar, base) if explain else ""
                    return SplitWitness(m, b1, b2, reason)
    return True


# --- definability of an extension ------------------------------------------------


@dataclass
class DefinabilityReport:
    verdict: bool
    entries: list = field(default_factory=list)  # (cbar, scheme id or None, params)

    @property
    def undefinable(self) -> list:
        return [c for c, s, _ in self.entries if s is None]


def check_extension_definable(emb, catalog, n_max: int = 1) -> DefinabilityReport:
    """Every short tuple of ``H`` is defined over ``G`` from a catalog scheme.

    ``emb`` embeds ``G`` into ``H``.  A tuple counts as defined when it lies in
    ``<G u d>`` for some realization ``d`` of ``q_s(a, G)`` in ``H`` with ``s``
    from the catalog and ``a`` from ``G`` (tuples inside ``G`` are defined by
    the trivial scheme).
    """
    G, H = emb.source, emb.target
    base = emb.map
    Gset = set(base)
    realizations = []
    for s in catalog:
        for a in s.parameter_tuples(G):
            q = s.q_type(G, a)
            pa = tuple(emb.map[x] for x in a)
            for d in itertools.product(range(H.order), repeat=s.n):
                if tp_bs(H, d, base) == q:
                    span = set(generated_subgroup(H, list(base) + list(d) + list(pa)).members)
                    realizations.append((s.id, a, span))
    report = DefinabilityReport(True)
    for n in range(1, n_max + 1):
        for c in itertools.product(range(H.order), repeat=n):
            if set(c) <= Gset:
                report.entries.append((c, "trivial", ()))
                continue
            hit = next(((sid, a) for sid, a, span in realizations if set(c) <= span), None)
            if hit is None:
                report.entries.append((c, None, ()))
                report.verdict = False
            else:
                report.entries.append((c, hit[0], hit[1]))
    return report

