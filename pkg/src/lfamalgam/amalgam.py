"""Amalgamation tries, their permutation groups, and the stable amalgam.

A try fixes left-coset transversals ``I1``, ``I2`` of ``G0`` inside
``G1``, ``G2``.  The triple space ``U`` is ``G0 x I1 x I2`` and ``G1``
(resp. ``G2``) acts on it from the right through the factorisation
``g1 * g0 * g = g1' * g0'`` (resp. with ``g2``).  The stable amalgam is
the subgroup of the product of all these permutation groups generated by
the diagonal images of ``G1`` and ``G2``.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    ElementInBase,
    IdentityNotRepresentative,
    NotAnEmbedding,
    NotATransversal,
)
from .group import (
    Embedding,
    FiniteGroup,
    Subgroup,
    centralizer,
    check_embedding,
    generating_sequence,
    left_cosets,
    normalizer,
    random_relabel,
)
from .perm import PermGroup, close_permutations, generator_map_is_isomorphism

DEFAULT_BUDGET_TRIPLES = 20_000
DEFAULT_BUDGET_PRODUCT = 2_000_000
DEFAULT_MAX_ORDER = 6000
DEFAULT_MAX_TRIES = 4096
DEFAULT_SIDE_SAMPLE = 8


@dataclass(frozen=True)
class Budget:
    """Resource ceilings.

    ``max_order`` bounds re-tabling of generated groups.  Try families with
    more than ``max_tries`` members are replaced by the product of
    ``side_sample`` seeded transversal choices per side.
    """

    triples: int = DEFAULT_BUDGET_TRIPLES
    product: int = DEFAULT_BUDGET_PRODUCT
    max_order: int = DEFAULT_MAX_ORDER
    max_tries: int = DEFAULT_MAX_TRIES
    side_sample: int = DEFAULT_SIDE_SAMPLE
    seed: int = 0


@dataclass(frozen=True, eq=False)
class AmalgamTry:
    G0: FiniteGroup = field(repr=False)
    G1: FiniteGroup = field(repr=False)
    G2: FiniteGroup = field(repr=False)
    emb1: Embedding = field(repr=False)
    emb2: Embedding = field(repr=False)
    I1: tuple[int, ...]
    I2: tuple[int, ...]

    @property
    def n_triples(self) -> int:
        return self.G0.order * len(self.I1) * len(self.I2)

    def key(self) -> tuple:
        return (self.I1, self.I2)

    def side(self, ell: int):
        return (self.G1, self.emb1, self.I1) if ell == 1 else (self.G2, self.emb2, self.I2)


def _check_transversal(G: FiniteGroup, emb: Embedding, I: Sequence[int], side: int) -> tuple[int, ...]:
    I = tuple(sorted(int(g) for g in I))
    if 0 not in I:
        raise IdentityNotRepresentative(f"identity missing from I{side}")
    blocks = left_cosets(G, emb.image)
    where = {}
    for b, block in enumerate(blocks):
        for x in block:
            where[x] = b
    hit = [where[g] for g in I]
    if len(set(hit)) != len(hit) or len(hit) != len(blocks):
        missing = sorted(set(range(len(blocks))) - set(hit))
        raise NotATransversal(
            f"I{side} must meet every left coset exactly once"
            + (f"; coset {blocks[missing[0]]} unrepresented" if missing else "; coset hit twice")
        )
    return I


def default_transversal(G: FiniteGroup, emb: Embedding) -> tuple[int, ...]:
    return tuple(block[0] for block in left_cosets(G, emb.image))


def make_try(G0, G1, G2, emb1, emb2, I1=None, I2=None) -> AmalgamTry:
    for emb, target, side in ((emb1, G1, 1), (emb2, G2, 2)):
        if emb.source != G0 or emb.target != target:
            raise NotAnEmbedding(f"emb{side} does not map G0 into G{side}")
        check_embedding(G0, target, emb.map)
    I1 = default_transversal(G1, emb1) if I1 is None else _check_transversal(G1, emb1, I1, 1)
    I2 = default_transversal(G2, emb2) if I2 is None else _check_transversal(G2, emb2, I2, 2)
    return AmalgamTry(G0, G1, G2, emb1, emb2, tuple(I1), tuple(I2))


class TripleSpace:
    """Triples ``(g0, g1, g2)`` in lexicographic order, plus the actions."""

    def __init__(self, x: AmalgamTry):
        self.parent = x
        n0, m1, m2 = x.G0.order, len(x.I1), len(x.I2)
        self.shape = (n0, m1, m2)
        idx = np.arange(n0 * m1 * m2)
        self._t0 = idx // (m1 * m2)
        self._t1 = (idx // m2) % m1
        self._t2 = idx % m2
        self._factor = {1: self._factorisation(1), 2: self._factorisation(2)}

    def __len__(self) -> int:
        n0, m1, m2 = self.shape
        return n0 * m1 * m2

    @property
    def triples(self) -> list[tuple[int, int, int]]:
        x = self.parent
        return [
            (int(a), x.I1[b], x.I2[c]) for a, b, c in zip(self._t0, self._t1, self._t2)
        ]

    def index(self, triple) -> int:
        x = self.parent
        g0, g1, g2 = triple
        n0, m1, m2 = self.shape
        return (g0 * m1 + x.I1.index(g1)) * m2 + x.I2.index(g2)

    def _factorisation(self, ell: int):
        """For each ``y`` in ``G_ell``: the transversal slot and ``G0`` part of ``y``."""
        G, emb, I = self.parent.side(ell)
        pre = emb.preimage()
        slot_of = {g: i for i, g in enumerate(I)}
        rep_pos = np.empty(G.order, dtype=np.int64)
        base = np.empty(G.order, dtype=np.int64)
        for g in I:
            for h in range(self.parent.G0.order):
                y = G.rows[g][emb.map[h]]
                rep_pos[y] = slot_of[g]
                base[y] = h
        assert all(pre[G.rows[G.inverse[I[rep_pos[y]]]][y]] == base[y] for y in range(G.order))
        return rep_pos, base

    def action(self, ell: int, g: int) -> np.ndarray:
        """Permutation of triple indices induced by ``g`` in ``G_ell``."""
        x = self.parent
        n0, m1, m2 = self.shape
        if ell == 0:
            g0n = x.G0.table[self._t0, g]
            return ((g0n * m1 + self._t1) * m2 + self._t2).astype(np.int32)
        G, emb, I = x.side(ell)
        emb_arr = np.asarray(emb.map)
        I_arr = np.asarray(I)
        slots = self._t1 if ell == 1 else self._t2
        y = G.table[G.table[I_arr[slots], emb_arr[self._t0]], g]
        rep_pos, base = self._factor[ell]
        if ell == 1:
            out = (base[y] * m1 + rep_pos[y]) * m2 + self._t2
        else:
            out = (base[y] * m1 + self._t1) * m2 + rep_pos[y]
        return out.astype(np.int32)


def triple_space(x: AmalgamTry) -> TripleSpace:
    return TripleSpace(x)


def j_action(x: AmalgamTry, ell: int, g: int, u: tuple[int, int, int]) -> tuple[int, int, int]:
    """Image of the triple ``u`` under ``j_ell(g)``, computed directly."""
    g0, g1, g2 = u
    if ell == 0:
        return (x.G0.rows[g0][g], g1, g2)
    G, emb, I = x.side(ell)
    gl = g1 if ell == 1 else g2
    y = G.rows[G.rows[gl][emb.map[g0]]][g]
    pre = emb.preimage()
    for rep in I:
        h = pre.get(G.rows[G.inverse[rep]][y])
        if h is not None:
            return (h, rep, g2) if ell == 1 else (h, g1, rep)
    raise AssertionError("transversal does not cover the coset")


# --- the generated permutation group ---------------------------------------


@dataclass(eq=False)
class GxGroup:
    carrier: FiniteGroup = field(repr=False)
    j1: Embedding = field(repr=False)
    j2: Embedding = field(repr=False)
    perms: list = field(repr=False)
    space: TripleSpace = field(repr=False)

    @property
    def j0(self) -> Embedding:
        return self.j1.__class__(self.space.parent.G0, self.carrier,
                                 tuple(self.j1.map[v] for v in self.space.parent.emb1.map))


def generator_lists(G1: FiniteGroup, G2: FiniteGroup) -> tuple[list[int], list[int]]:
    """Generators used for the breadth-first numbering: each side's greedy
    generating sequence, in parent index order."""
    return sorted(generating_sequence(G1)), sorted(generating_sequence(G2))


def c6_log_bound(n1: int, n2: int, n0: int) -> float:
    """``log log`` of the ``(n*!)^(m*)`` size bound with ``n* = n1*n2/n0``,
    ``m* = n*^(n1+n2)``; ``-inf`` when the bound is at most ``e``."""
    nstar = n1 * n2 // n0
    lg = math.lgamma(nstar + 1)
    if lg <= 0:
        return -math.inf
    return (n1 + n2) * math.log(nstar) + math.log(lg)


def within_c6_bound(order: int, n1: int, n2: int, n0: int) -> bool:
    """Overflow-safe ``order <= (n*!)^(m*)`` via doubly logarithmic comparison."""
    if order <= 1:
        return True
    bound = c6_log_bound(n1, n2, n0)
    if bound == -math.inf:
        # n* <= 1: the bound is 1
        return order <= 1
    return math.log(math.log(order)) <= bound if order > 2 else True


def build_Gx(x: AmalgamTry, budget: Budget = Budget()) -> GxGroup:
    if x.n_triples > budget.triples:
        raise BudgetExceeded(
            f"try has {x.n_triples} triples, budget {budget.triples}",
            {"triples": x.n_triples, "log_log_c6_bound": c6_log_bound(x.G1.order, x.G2.order, x.G0.order)},
        )
    U = TripleSpace(x)
    gens1, gens2 = generator_lists(x.G1, x.G2)
    gens = [U.action(1, g) for g in gens1] + [U.action(2, g) for g in gens2]
    if not gens:
        gens = [np.arange(len(U), dtype=np.int32)]
    res = close_permutations(gens, degree=len(U), max_order=budget.max_order)
    carrier = FiniteGroup(res.table)
    j1 = Embedding(x.G1, carrier, tuple(res.index_of(U.action(1, g)) for g in range(x.G1.order)))
    j2 = Embedding(x.G2, carrier, tuple(res.index_of(U.action(2, g)) for g in range(x.G2.order)))
    check_embedding(x.G1, carrier, j1.map)
    check_embedding(x.G2, carrier, j2.map)
    return GxGroup(carrier, j1, j2, res.elements, U)


# --- enumeration of tries ---------------------------------------------------


def _transversal_choices(G: FiniteGroup, emb: Embedding) -> list[tuple[int, ...]]:
    blocks = left_cosets(G, emb.image)
    # block 0 is G0 itself; the identity is pinned as its representative
    free = [block for block in blocks[1:]]
    return [tuple(sorted((0,) + combo)) for combo in itertools.product(*free)]


def count_tries(G0, G1, G2, emb1, emb2) -> int:
    n = 1
    for G, emb in ((G1, emb1), (G2, emb2)):
        for block in left_cosets(G, emb.image)[1:]:
            n *= len(block)
    return n


def enumerate_tries(G0, G1, G2, emb1, emb2, sample: tuple[int, int] | None = None) -> Iterator[AmalgamTry]:
    """All tries in lexicographic order of ``(I1, I2)``, or a seeded sample.

    ``sample=(seed, count)`` draws ``count`` distinct tries (all of them
    when fewer exist) with a deterministic generator.
    """
    c1 = _transversal_choices(G1, emb1)
    c2 = _transversal_choices(G2, emb2)
    if sample is None:
        for I1 in c1:
            for I2 in c2:
                yield AmalgamTry(G0, G1, G2, emb1, emb2, I1, I2)
        return
    seed, count = sample
    total = len(c1) * len(c2)
    rng = random.Random(seed)
    picks = sorted(rng.sample(range(total), min(count, total)))
    for p in picks:
        I1, I2 = c1[p // len(c2)], c2[p % len(c2)]
        yield AmalgamTry(G0, G1, G2, emb1, emb2, I1, I2)


def _side_seed(seed: int, G: FiniteGroup, emb: Embedding) -> int:
    h = hashlib.sha256(G.table.tobytes() + np.asarray(emb.map, dtype=np.int64).tobytes())
    return int.from_bytes(h.digest()[:8], "little") ^ seed


def sample_transversals(G: FiniteGroup, emb: Embedding, count: int, seed: int = 0) -> list[tuple[int, ...]]:
    """The least-index transversal plus ``count - 1`` seeded random ones.

    The generator is seeded from ``seed`` and the side's own data only, so
    swapping the two sides of an amalgam swaps the samples as well.
    """
    blocks = left_cosets(G, emb.image)
    rng = random.Random(_side_seed(seed, G, emb))
    out = [tuple(sorted(b[0] for b in blocks))]
    total = 1
    for b in blocks[1:]:
        total *= len(b)
    seen = set(out)
    while len(out) < min(count, total):
        I = tuple(sorted([0] + [rng.choice(b) for b in blocks[1:]]))
        if I not in seen:
            seen.add(I)
            out.append(I)
    return out


def try_family(G0, G1, G2, emb1, emb2, budget: Budget = Budget()) -> tuple[str, list[AmalgamTry]]:
    """All tries when there are at most ``budget.max_tries``, else a per-side sample."""
    if count_tries(G0, G1, G2, emb1, emb2) <= budget.max_tries:
        return "full", list(enumerate_tries(G0, G1, G2, emb1, emb2))
    S1 = sample_transversals(G1, emb1, budget.side_sample, budget.seed)
    S2 = sample_transversals(G2, emb2, budget.side_sample, budget.seed)
    return "sampled", [AmalgamTry(G0, G1, G2, emb1, emb2, I1, I2) for I1 in S1 for I2 in S2]


# --- the stable amalgam -----------------------------------------------------


@dataclass(frozen=True)
class TryCertificate:
    """An enumerated try and the block of the G3 representation realising it.

    The homomorphism ``G3 -> G_x`` is restriction to that block; tries
    sharing a block have isomorphic labeled actions.
    """

    I1: tuple[int, ...]
    I2: tuple[int, ...]
    block: int


def _orbit_code(gens: list[np.ndarray]) -> bytes:
    """Breadth-first relabeling from point 0 (the triple ``(e, e, e)``).

    Every try action is transitive, so equal codes mean the labeled
    generator actions are isomorphic and one of the two blocks is redundant.
    """
    n = len(gens[0])
    label = np.full(n, -1, dtype=np.int64)
    label[0] = 0
    order = [0]
    i = 0
    while i < len(order):
        p = order[i]
        i += 1
        for g in gens:
            q = int(g[p])
            if label[q] < 0:
                label[q] = len(order)
                order.append(q)
    if len(order) != n:
        raise AssertionError("try action is not transitive")
    pts = np.asarray(order)
    return b"".join(label[g[pts]].astype(np.int32).tobytes() for g in gens)


class StableAmalgam:
    """``G3 = <j1(G1) u j2(G2)>`` inside the product of all try groups.

    G3 is held as a permutation group on the disjoint union of the distinct
    try actions.  ``G3``/``j1``/``j2`` give the re-tabled group, built on
    first use and only when its order fits ``budget.max_order``.
    """

    def __init__(self, G0, G1, G2, emb1, emb2, blocks, offsets, certificate, budget, family="full"):
        self.G0, self.G1, self.G2 = G0, G1, G2
        self.emb1, self.emb2 = emb1, emb2
        self.blocks: list[TripleSpace] = blocks
        self.offsets: list[int] = offsets
        self.degree = offsets[-1] + len(blocks[-1])
        self.certificate: list[TryCertificate] = certificate
        self.budget = budget
        self.family = family
        self.gens1, self.gens2 = generator_lists(G1, G2)
        self._perm_cache: dict = {}
        self._group = None
        self._tabled = None

    @property
    def n_tries(self) -> int:
        return len(self.certificate)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def perm(self, ell: int, g: int) -> np.ndarray:
        """Diagonal image of ``g`` in ``G_ell`` (``ell = 0`` uses ``G0``)."""
        key = (ell, g)
        p = self._perm_cache.get(key)
        if p is None:
            p = np.concatenate([U.action(ell, g) + off for U, off in zip(self.blocks, self.offsets)])
            p = p.astype(np.int32)
            p.setflags(write=False)
            self._perm_cache[key] = p
        return p

    def generator_perms(self) -> list[np.ndarray]:
        return [self.perm(1, g) for g in self.gens1] + [self.perm(2, g) for g in self.gens2]

    @property
    def group(self) -> "PermGroup":
        if self._group is None:
            self._group = PermGroup(self.generator_perms(), degree=self.degree)
        return self._group

    @property
    def order(self) -> int:
        """``|G3|``; from the table when it fits, otherwise by Schreier-Sims."""
        if self.is_tabled:
            return self._tabled[0].order
        return self.group.order

    def _table(self):
        if self._tabled is None:
            gens = self.generator_perms() or [np.arange(self.degree, dtype=np.int32)]
            try:
                res = close_permutations(gens, degree=self.degree, max_order=self.budget.max_order)
            except BudgetExceeded as exc:
                # a fresh copy: the original traceback pins the closure's element list
                self._tabled = BudgetExceeded(str(exc), exc.report)
            else:
                G3 = FiniteGroup(res.table)
                j1 = Embedding(self.G1, G3, tuple(res.index_of(self.perm(1, g)) for g in range(self.G1.order)))
                j2 = Embedding(self.G2, G3, tuple(res.index_of(self.perm(2, g)) for g in range(self.G2.order)))
                check_embedding(self.G1, G3, j1.map)
                check_embedding(self.G2, G3, j2.map)
                self._tabled = (G3, j1, j2, res)
        if isinstance(self._tabled, BudgetExceeded):
            raise self._tabled
        return self._tabled

    @property
    def is_tabled(self) -> bool:
        try:
            self._table()
        except BudgetExceeded:
            return False
        return True

    @property
    def G3(self) -> FiniteGroup:
        return self._table()[0]

    @property
    def j1(self) -> Embedding:
        return self._table()[1]

    @property
    def j2(self) -> Embedding:
        return self._table()[2]

    @property
    def j0(self) -> Embedding:
        j1 = self.j1
        return Embedding(self.G0, j1.target, tuple(j1.map[v] for v in self.emb1.map))

    def element_perms(self) -> list:
        """Permutation of each G3 index (tabled groups only)."""
        return self._table()[3].elements

    def block_group(self, b: int) -> "PermGroup":
        U = self.blocks[b]
        return PermGroup([U.action(1, g) for g in self.gens1] + [U.action(2, g) for g in self.gens2],
                         degree=len(U))

    def __repr__(self) -> str:
        return (f"<StableAmalgam |G0|={self.G0.order} |G1|={self.G1.order} |G2|={self.G2.order} "
                f"tries={self.n_tries} blocks={self.n_blocks}>")


def stable_amalgam(G0, G1, G2, emb1, emb2, budget: Budget = Budget(), tries=None) -> StableAmalgam:
    """Stable amalgam of ``G1`` and ``G2`` over ``G0``.

    ``tries`` fixes the family explicitly (the commutation-preserving
    variant does this); by default :func:`try_family` chooses it.
    """
    for emb, target, side in ((emb1, G1, 1), (emb2, G2, 2)):
        if emb.source != G0 or emb.target != target:
            raise NotAnEmbedding(f"emb{side} does not map G0 into G{side}")
    family = "given"
    if tries is None:
        family, tries = try_family(G0, G1, G2, emb1, emb2, budget)
    gens1, gens2 = generator_lists(G1, G2)
    blocks: list[TripleSpace] = []
    offsets: list[int] = []
    codes: dict[bytes, int] = {}
    certificate = []
    total = 0
    for x in tries:
        if x.n_triples > budget.triples:
            raise BudgetExceeded(
                f"try has {x.n_triples} triples, budget {budget.triples}",
                {"triples": x.n_triples, "log_log_c6_bound": c6_log_bound(G1.order, G2.order, G0.order)},
            )
        U = TripleSpace(x)
        acts = [U.action(1, g) for g in gens1] + [U.action(2, g) for g in gens2]
        code = _orbit_code(acts) if acts else b""
        b = codes.get(code)
        if b is None:
            b = codes[code] = len(blocks)
            blocks.append(U)
            offsets.append(total)
            total += len(U)
            if total > budget.product:
                raise BudgetExceeded(f"product representation exceeds {budget.product} points",
                                     {"points": total})
        certificate.append(TryCertificate(x.I1, x.I2, b))
    if not blocks:
        raise ValueError("empty try family")
    A = StableAmalgam(G0, G1, G2, emb1, emb2, blocks, offsets, certificate, budget, family)
    _check_construction(A)
    return A


def _check_construction(A: StableAmalgam) -> None:
    """Homomorphism and compatibility checks on the diagonal images; clause
    (d) separation holds because G3 acts faithfully on the block union."""
    for ell, G in ((1, A.G1), (2, A.G2)):
        perms = [A.perm(ell, g) for g in range(G.order)]
        if len({p.tobytes() for p in perms}) != G.order:
            raise AssertionError(f"j{ell} is not injective")
        for a in range(G.order):
            for b in A.gens1 if ell == 1 else A.gens2:
                if not np.array_equal(perms[b][perms[a]], perms[G.rows[a][b]]):
                    raise AssertionError(f"j{ell} is not a homomorphism")
    for h in range(A.G0.order):
        if not np.array_equal(A.perm(1, A.emb1.map[h]), A.perm(2, A.emb2.map[h])):
            raise AssertionError("j1 and j2 disagree on G0")


def try_orders(A: StableAmalgam) -> list[int]:
    """``|G_x|`` for each distinct try action."""
    return [A.block_group(b).order for b in range(A.n_blocks)]


# --- laws --------------------------------------------------------------------


@dataclass
class LawResult:
    law: str
    ref: str
    passed: bool
    detail: str = ""


def intermediate_subgroups(G: FiniteGroup, base: Subgroup) -> list[Subgroup]:
    """All subgroups of ``G`` containing ``base``, ordered by (order, members)."""
    from .group import generated_subgroup

    found = {base.members: base}
    frontier = [base]
    while frontier:
        nxt = []
        for H in frontier:
            for g in range(G.order):
                if g in H:
                    continue
                K = generated_subgroup(G, H.members + (g,))
                if K.members not in found:
                    found[K.members] = K
                    nxt.append(K)
        frontier = nxt
    return sorted(found.values(), key=lambda K: (K.order, K.members))


def _restrict_side(G: FiniteGroup, emb: Embedding, H: Subgroup):
    """Re-table ``H <= G`` and move ``emb`` into it."""
    Hg, inc = H.as_group()
    pre = inc.preimage()
    return Hg, inc, Embedding(emb.source, Hg, tuple(pre[v] for v in emb.map))


def _iso_over(A: StableAmalgam, B: StableAmalgam, m1: dict, m2: dict) -> bool:
    """Whether ``j^A_l(g) -> j^B(m_l(g))`` extends to an isomorphism, where
    ``m1``/``m2`` send G1/G2 generators of A to ``(side, element)`` of B."""
    gens_a, gens_b = [], []
    for g in A.gens1:
        gens_a.append(A.perm(1, g))
        gens_b.append(B.perm(*m1[g]))
    for g in A.gens2:
        gens_a.append(A.perm(2, g))
        gens_b.append(B.perm(*m2[g]))
    return generator_map_is_isomorphism(gens_a, gens_b)


def check_disjointness(A: StableAmalgam) -> LawResult:
    img1 = {A.perm(1, g).tobytes(): g for g in range(A.G1.order)}
    meet = sorted(img1[p] for p in (A.perm(2, g).tobytes() for g in range(A.G2.order)) if p in img1)
    base = sorted(A.emb1.map)
    ok = meet == base
    return LawResult("disjointness", "c12(2)", ok,
                     "" if ok else f"j1(G1) meets j2(G2) in G1 elements {meet}, base {base}")


def check_c8(A: StableAmalgam) -> LawResult:
    """Image intersection inside every try group (and therefore in G3)."""
    for b, U in enumerate(A.blocks):
        img1 = {U.action(1, g).tobytes(): g for g in range(A.G1.order)}
        meet = sorted(img1[p] for p in (U.action(2, g).tobytes() for g in range(A.G2.order)) if p in img1)
        if meet != sorted(A.emb1.map):
            return LawResult("c8_intersection", "c8", False, f"block {b}: intersection {meet}")
    return LawResult("c8_intersection", "c8", True)


def check_symmetry(A: StableAmalgam) -> LawResult:
    B = stable_amalgam(A.G0, A.G2, A.G1, A.emb2, A.emb1, budget=A.budget)
    ok = _iso_over(A, B, {g: (2, g) for g in A.gens1}, {g: (1, g) for g in A.gens2})
    return LawResult("symmetry", "c14(1)", ok, "" if ok else "swapped amalgam not isomorphic over G1 u G2")


def check_monotonicity(A: StableAmalgam, pairs=None) -> LawResult:
    """For intermediate ``G0 <= G1' <= G1``, ``G0 <= G2' <= G2`` the generated
    subgroup of G3 is the stable amalgam of ``G1'``, ``G2'``."""
    from .group import generated_subgroup

    if pairs is None:
        L1 = intermediate_subgroups(A.G1, A.emb1.image)
        L2 = intermediate_subgroups(A.G2, A.emb2.image)
        pairs = [(H1, H2) for H1 in L1 for H2 in L2]
    for H1, H2 in pairs:
        K1, inc1, e1 = _restrict_side(A.G1, A.emb1, H1)
        K2, inc2, e2 = _restrict_side(A.G2, A.emb2, H2)
        C = stable_amalgam(A.G0, K1, K2, e1, e2, budget=A.budget)
        gens_a = [A.perm(1, inc1.map[g]) for g in C.gens1] + [A.perm(2, inc2.map[g]) for g in C.gens2]
        gens_c = C.generator_perms()
        if not generator_map_is_isomorphism(gens_a, gens_c):
            return LawResult("monotonicity", "c14(2)", False,
                             f"sub-amalgam over G1'={H1.members} G2'={H2.members} differs")
    return LawResult("monotonicity", "c14(2)", True, f"{len(pairs)} pairs")


def check_uniqueness(A: StableAmalgam, seed: int = 0) -> LawResult:
    """Rebuild through randomly relabeled copies and compare over G1 u G2."""
    rng = random.Random(seed)
    H0, f0 = random_relabel(A.G0, rng)
    H1, f1 = random_relabel(A.G1, rng)
    H2, f2 = random_relabel(A.G2, rng)
    inv0 = f0.inverse()
    e1 = Embedding(H0, H1, tuple(f1.map[A.emb1.map[inv0.map[h]]] for h in range(H0.order)))
    e2 = Embedding(H0, H2, tuple(f2.map[A.emb2.map[inv0.map[h]]] for h in range(H0.order)))
    B = stable_amalgam(H0, H1, H2, e1, e2, budget=A.budget)
    ok = _iso_over(A, B, {g: (1, f1.map[g]) for g in A.gens1}, {g: (2, f2.map[g]) for g in A.gens2})
    return LawResult("uniqueness", "c14(3)", ok, "" if ok else "relabeled rebuild not isomorphic over G1 u G2")


def check_c6_bound(A: StableAmalgam) -> LawResult:
    orders = try_orders(A)
    n1, n2, n0 = A.G1.order, A.G2.order, A.G0.order
    bad = [o for o in orders if not within_c6_bound(o, n1, n2, n0)]
    return LawResult("c6_size_bound", "c6(8)", not bad,
                     f"max |G_x| = {max(orders)}, loglog bound {c6_log_bound(n1, n2, n0):.3f}")


def verify_nf_laws(A: StableAmalgam, seed: int = 0, monotone_pairs=None) -> list[LawResult]:
    return [
        check_disjointness(A),
        check_c8(A),
        check_symmetry(A),
        check_monotonicity(A, monotone_pairs),
        check_uniqueness(A, seed),
    ]


# --- commuting pairs -----------------------------------------------------------


@dataclass
class CommutingVerdict:
    a: int
    b: int
    commute: bool
    predicted: bool
    explanation: str

    @property
    def mismatch(self) -> bool:
        return self.commute != self.predicted


def commuting_characterization(A: StableAmalgam, a: int, b: int) -> CommutingVerdict:
    """Compare ``[j1(a), j2(b)] = e`` in G3 with the centraliser criterion."""
    if a in set(A.emb1.map):
        raise ElementInBase(f"a={a} lies in the image of G0 in G1")
    if b in set(A.emb2.map):
        raise ElementInBase(f"b={b} lies in the image of G0 in G2")
    pa, pb = A.perm(1, a), A.perm(2, b)
    commute = bool(np.array_equal(pb[pa], pa[pb]))
    a_cent = a in centralizer(A.G1, A.emb1.map)
    b_cent = b in centralizer(A.G2, A.emb2.map)
    base_ab = A.G0.is_abelian
    predicted = a_cent and b_cent and base_ab
    reasons = []
    if not a_cent:
        reasons.append("a normalizes but does not centralize G0" if a in normalizer(A.G1, A.emb1.image)
                       else "a does not normalize G0")
    if not b_cent:
        reasons.append("b normalizes but does not centralize G0" if b in normalizer(A.G2, A.emb2.image)
                       else "b does not normalize G0")
    if not base_ab:
        reasons.append("G0 is not commutative")
    explanation = "a, b centralize an abelian G0" if predicted else "; ".join(reasons)
    return CommutingVerdict(a, b, commute, predicted, explanation)
