"""Bounded approximation of existentially closed locally finite groups.

A group is *closed at bound b* when every embedding ``f: K -> G`` with
``K <= L`` and ``|L| <= b`` extends to ``L``.  Hall steps repair failures by
amalgamating ``L`` over ``f(K)``; a one-step closure instead realizes every
scheme-defined type over the current stage at once.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from .amalgam import Budget, stable_amalgam
from .errors import BudgetExceeded, ProbeInvalid
from .group import (
    Embedding,
    FiniteGroup,
    Subgroup,
    automorphisms,
    commute_setwise,
    enumerate_embeddings,
    generated_subgroup,
    generating_sequence,
    identity_embedding,
    trivial_group,
)
from .io import format_group, load_corpus, parse_group_file, write_group_file
from .qf_types import tp_bs
from .schemes import DefEntry, Scheme, apply_ab_k, get_scheme


# --- stage chains ---------------------------------------------------------------------


@dataclass
class StageChain:
    """``G_0 <= G_1 <= ...`` with the links and the operation that made each stage."""

    stages: list = field(default_factory=list)
    links: list = field(default_factory=list)
    provenance: list = field(default_factory=list)  # (op id, params) per stage

    @classmethod
    def start(cls, G: FiniteGroup, label: str = "") -> "StageChain":
        return cls([G], [], [("start", (label or G.name or str(G.order),))])

    def __len__(self) -> int:
        return len(self.stages)

    @property
    def last(self) -> FiniteGroup:
        return self.stages[-1]

    def append(self, H: FiniteGroup, link: Embedding, op: str, params: tuple = ()) -> None:
        if link.source is not self.last and link.source != self.last:
            raise ValueError("link does not start at the last stage")
        if link.target is not H and link.target != H:
            raise ValueError("link does not end at the new stage")
        self.stages.append(H)
        self.links.append(link)
        self.provenance.append((op, tuple(params)))

    def embedding(self, i: int, j: int) -> Embedding:
        """Composite link ``G_i -> G_j`` for ``i <= j``."""
        emb = identity_embedding(self.stages[i])
        for k in range(i, j):
            emb = emb.then(self.links[k])
        return emb

    def links_compose(self) -> bool:
        return all(l.source == self.stages[k] and l.target == self.stages[k + 1] and l.is_valid()
                   for k, l in enumerate(self.links))

    def replay(self, budget: Budget = Budget()) -> "StageChain":
        out = StageChain([self.stages[0]], [], [self.provenance[0]])
        for op, params in self.provenance[1:]:
            apply_op(out, op, params, budget)
        return out

    def replay_matches(self, budget: Budget = Budget()) -> bool:
        other = self.replay(budget)
        return len(other) == len(self) and all(
            a.table.tobytes() == b.table.tobytes() for a, b in zip(self.stages, other.stages)
        ) and all(a.map == b.map for a, b in zip(self.links, other.links))

    def save(self, directory) -> None:
        root = Path(directory)
        root.mkdir(parents=True, exist_ok=True)
        lines = []
        for k, (G, (op, params)) in enumerate(zip(self.stages, self.provenance)):
            write_group_file(root / f"stage{k:03d}.mtable", G)
            lines.append(" ".join([str(k), op] + [str(p) for p in params]))
            if k:
                lines.append(f"link {k - 1} " + " ".join(map(str, self.links[k - 1].map)))
        (root / "manifest.txt").write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, directory) -> "StageChain":
        root = Path(directory)
        chain = cls()
        pending_links = {}
        for line in (root / "manifest.txt").read_text().splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "link":
                pending_links[int(parts[1])] = tuple(int(v) for v in parts[2:])
                continue
            k, op, params = int(parts[0]), parts[1], tuple(_param(p) for p in parts[2:])
            G = parse_group_file(root / f"stage{k:03d}.mtable")
            chain.stages.append(G)
            chain.provenance.append((op, params))
        for k in range(len(chain.stages) - 1):
            chain.links.append(Embedding(chain.stages[k], chain.stages[k + 1], pending_links[k]))
        return chain


def _param(text: str):
    try:
        return int(text)
    except ValueError:
        return text


def apply_op(chain: StageChain, op: str, params: tuple, budget: Budget = Budget()) -> None:
    """Extend ``chain`` by one stage as recorded in a provenance line."""
    G = chain.last
    if op == "hall":
        res = hall_step(G, int(params[0]), budget=budget)
        chain.append(res.H, res.emb, op, params)
    elif op == "osc":
        res = one_step_closure(G, [get_scheme(s) for s in params[1:]], int(params[0]), budget=budget)
        chain.append(res.H, res.emb, op, params)
    elif op == "ab":
        P, _, eG = apply_ab_k(G, int(params[0]))
        chain.append(P, eG, op, params)
    else:
        raise ValueError(f"unknown stage operation {op!r}")


# --- pairs and deficiencies --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExtensionPair:
    """``K <= L`` given by an inclusion of an abstract ``K``."""

    L: FiniteGroup
    K: FiniteGroup
    inc: Embedding
    label: str

    def __repr__(self) -> str:
        return f"<{self.label}>"


def _subgroups(G: FiniteGroup) -> list[Subgroup]:
    found = {}
    for r in range(0, 4):
        for S in itertools.combinations(range(1, G.order), r):
            H = generated_subgroup(G, S)
            found.setdefault(H.members, H)
    return [found[k] for k in sorted(found, key=lambda m: (len(m), m))]


def extension_pairs(b: int, corpus: Sequence[FiniteGroup] | None = None) -> list[ExtensionPair]:
    """Proper pairs ``K < L`` with ``|L| <= b``, one per ``Aut(L)``-class of ``K``."""
    if corpus is None:
        corpus = load_corpus()
    out = []
    for L in corpus:
        if L.order > b:
            continue
        auts = automorphisms(L)
        seen = set()
        for H in _subgroups(L):
            if H.order == L.order:
                continue
            key = min(tuple(sorted(a.map[h] for h in H.members)) for a in auts)
            if key in seen:
                continue
            seen.add(key)
            K, inc = H.as_group()
            out.append(ExtensionPair(L, K, inc, f"{L.name}>{'.'.join(map(str, H.members))}"))
    return out


def embeddings_up_to_conjugacy(K: FiniteGroup, G: FiniteGroup) -> list[Embedding]:
    """One embedding ``K -> G`` per orbit of inner automorphisms of ``G``."""
    gens = generating_sequence(K)
    seen = set()
    out = []
    for f in enumerate_embeddings(K, G):
        img = tuple(f.map[g] for g in gens)
        if img in seen:
            continue
        out.append(f)
        for g in range(G.order):
            seen.add(tuple(G.conj(x, g) for x in img))
    return out


class _ExtensionOracle:
    """Caches, per (pair, group), the restrictions to ``K`` of all embeddings of ``L``."""

    def __init__(self):
        self._cache = {}

    def extends(self, pair: ExtensionPair, G: FiniteGroup, f_map: Sequence[int]) -> bool:
        key = (id(pair), id(G))
        entry = self._cache.get(key)
        if entry is None:
            entry = (pair, G, {tuple(phi.map[v] for v in pair.inc.map) for phi in enumerate_embeddings(pair.L, G)})
            self._cache[key] = entry
        return tuple(f_map) in entry[2]


@dataclass(frozen=True)
class LogEntry:
    """One amalgamation of a hall step; indices refer to the latest stage of the step."""

    adjoined: tuple  # images of a generating sequence of L
    w: tuple  # earlier steps whose tuples generate K together with G
    K: tuple  # members of f(K)
    scheme: str


@dataclass
class ConstructionLog:
    entries: list = field(default_factory=list)

    def check(self, H: FiniteGroup, base: Sequence[int], adjoined_in_H: Sequence[tuple]) -> bool:
        """Each ``K_j`` lies in ``<G u tuples of w_j>`` (all read inside ``H``)."""
        for j, e in enumerate(self.entries):
            gens = list(base) + [x for i in e.w for x in adjoined_in_H[i]]
            span = set(generated_subgroup(H, gens).members)
            if not set(e.K) <= span:
                return False
        return True


@dataclass
class HallResult:
    H: FiniteGroup
    emb: Embedding
    log: ConstructionLog
    adjoined: list  # per log entry, its tuple read in H
    repaired: list  # (pair label, f map in G)


def hall_step(G: FiniteGroup, b: int, budget: Budget = Budget(),
              corpus: Sequence[FiniteGroup] | None = None) -> HallResult:
    """Extend ``G`` so that every embedding of a ``K`` into ``G`` extends to each ``L >= K``, ``|L| <= b``.

    Failures are visited by ``|L|``, corpus order, ``K`` and then the
    embedding; one already repaired by an earlier amalgamation in the same
    step is skipped.
    """
    if b < 1:
        raise ValueError("bound must be at least 1")
    oracle = _ExtensionOracle()
    pairs = extension_pairs(b, corpus)
    H, emb = G, identity_embedding(G)
    log = ConstructionLog()
    adjoined: list[tuple] = []
    repaired = []
    for pair in pairs:
        for f in embeddings_up_to_conjugacy(pair.K, G):
            fH = tuple(emb.map[v] for v in f.map)
            if oracle.extends(pair, H, fH):
                continue
            try:
                A = stable_amalgam(pair.K, H, pair.L, Embedding(pair.K, H, fH), pair.inc, budget=budget)
                H_new = A.G3
            except BudgetExceeded as exc:
                raise BudgetExceeded(
                    f"hall step stopped after {len(log.entries)} amalgamations: {exc}",
                    {"log": log, "stage": H, "pending": (pair.label, fH)},
                ) from exc
            adjoined = [A.j1.images(t) for t in adjoined]
            log.entries = [replace(e, adjoined=A.j1.images(e.adjoined), K=tuple(sorted(A.j1.images(e.K))))
                           for e in log.entries]
            new = A.j2.images(generating_sequence(pair.L))
            K_now = tuple(sorted(A.j1.images(fH)))
            log.entries.append(LogEntry(new, tuple(range(len(adjoined))), K_now, f"amalgam:{pair.L.name}"))
            adjoined.append(new)
            emb = emb.then(A.j1)
            H = H_new
            repaired.append((pair.label, f.map))
    return HallResult(H, emb, log, adjoined, repaired)


# --- certification ----------------------------------------------------------------------------


@dataclass
class EcEntry:
    stage: int
    pair: str
    f: tuple
    repaired_at: int | None


@dataclass
class EcReport:
    bound: int
    entries: list
    n_stages: int
    margin: int = 0

    def stage_ok(self, i: int) -> bool:
        return all(e.repaired_at is not None for e in self.entries if e.stage == i)

    @property
    def verdict(self) -> bool:
        return all(self.stage_ok(i) for i in range(self.n_stages - self.margin))

    @property
    def failures(self) -> list:
        return [e for e in self.entries if e.repaired_at is None and e.stage < self.n_stages - self.margin]


def certify_ec(chain: StageChain, b: int, corpus: Sequence[FiniteGroup] | None = None, margin: int = 0) -> EcReport:
    """For each stage and each embedding up to conjugacy, the least stage where it extends.

    ``margin`` excludes that many final stages from the verdict (their
    failures are still listed).
    """
    if not chain.stages:
        raise ValueError("empty chain")
    oracle = _ExtensionOracle()
    pairs = extension_pairs(b, corpus)
    entries = []
    for i, G in enumerate(chain.stages):
        ups = [chain.embedding(i, j) for j in range(i, len(chain))]
        for pair in pairs:
            for f in embeddings_up_to_conjugacy(pair.K, G):
                at = None
                for j, up in enumerate(ups, start=i):
                    if oracle.extends(pair, chain.stages[j], tuple(up.map[v] for v in f.map)):
                        at = j
                        break
                entries.append(EcEntry(i, pair.label, f.map, at))
    return EcReport(b, entries, len(chain), margin)


def hall_chain(G: FiniteGroup, steps: int, b: int, budget: Budget = Budget()) -> StageChain:
    chain = StageChain.start(G)
    for _ in range(steps):
        apply_op(chain, "hall", (b,), budget)
    return chain


# --- one-step closure -------------------------------------------------------------------------------


@dataclass
class ClosureResult:
    H: FiniteGroup
    emb: Embedding
    entries: list  # DefEntry per realized tuple
    tuples: list
    realizes: list = field(default_factory=list)  # (entry index, bool)
    pairwise: list = field(default_factory=list)  # (i, j, bool or None when too large)


def def_entries(G: FiniteGroup, catalog: Sequence[Scheme], param_bound: int) -> list[DefEntry]:
    out = []
    for s in catalog:
        if s.k > param_bound:
            continue
        out.extend(DefEntry(s, a) for a in s.parameter_tuples(G))
    return out


def one_step_closure(G: FiniteGroup, catalog: Sequence[Scheme], param_bound: int = 1,
                     budget: Budget = Budget(), pairwise: bool = True) -> ClosureResult:
    """Realize every catalog entry over ``G`` by folding independent amalgamations."""
    if not catalog:
        raise ValueError("catalog is empty")
    entries = def_entries(G, catalog, param_bound)
    if not entries:
        return ClosureResult(G, identity_embedding(G), [], [])
    first = entries[0].scheme.apply(G, entries[0].params)
    H, emb, tuples = first.H, first.j0, [first.c]
    for t in entries[1:]:
        e = t.scheme.apply(G, t.params)
        A = stable_amalgam(G, H, e.H, emb, e.j0, budget=budget)
        tuples = [A.j1.images(c) for c in tuples] + [A.j2.images(e.c)]
        emb = emb.then(A.j1)
        H = A.G3
    res = ClosureResult(H, emb, entries, tuples)
    for i, t in enumerate(entries):
        params = emb.images(t.params)
        res.realizes.append((i, tp_bs(H, tuples[i], emb.map) == t.scheme.q_type(G, t.params)))
    if pairwise:
        for i, j in itertools.permutations(range(len(entries)), 2):
            res.pairwise.append((i, j, _independent_over(H, emb, entries[i], tuples[i], tuples[j], budget)))
    return res


def _independent_over(H, emb, t: DefEntry, c, other, budget) -> bool | None:
    """Does ``c`` realize the scheme type of ``t`` over ``<G u other>``?"""
    sub = generated_subgroup(H, list(emb.map) + list(other))
    if 2 * sub.order ** 2 > budget.max_order:
        return None
    Gp, inc = sub.as_group()
    pos = inc.preimage()
    try:
        q = t.scheme.q_type(Gp, [pos[emb.map[a]] for a in t.params])
    except BudgetExceeded:
        return None
    return tp_bs(H, c, sub.members) == q


def closure_chain(G: FiniteGroup, steps: int, catalog_ids: Sequence[str], param_bound: int = 1,
                  budget: Budget = Budget()) -> StageChain:
    """Iterate one-step closures; stops early (without raising) once a step exceeds the budget."""
    chain = StageChain.start(G)
    for _ in range(steps):
        try:
            apply_op(chain, "osc", (param_bound, *catalog_ids), budget)
        except BudgetExceeded:
            break
    return chain


def cross_embeddings(a: StageChain, b: StageChain, max_order: int = 64) -> list[tuple[int, int | None]]:
    """For each stage of ``a`` up to ``max_order``, the least stage of ``b`` it embeds into."""
    out = []
    for i, G in enumerate(a.stages):
        if G.order > max_order:
            continue
        hit = next((j for j, H in enumerate(b.stages) if enumerate_embeddings(G, H, limit=1)), None)
        out.append((i, hit))
    return out


# --- the chain-limit probe -----------------------------------------------------------------------


@dataclass
class ChainProbe:
    """``a_n`` lives in stage ``n + 1``; ``b_n = a_0 ... a_n`` there."""

    a: list
    k: int
    disjoint: bool = True

    def b(self, chain: StageChain) -> list[int]:
        out = []
        for n, a in enumerate(self.a):
            G = chain.stages[n + 1]
            prev = chain.links[n].map[out[-1]] if out else 0
            out.append(G.mul(prev, a))
        return out


@dataclass
class ProbeReport:
    checked: list = field(default_factory=list)  # (n, m, states visited)
    violation: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.violation is None


def validate_probe(chain: StageChain, probe: ChainProbe) -> None:
    if len(probe.a) > len(chain) - 1:
        raise ProbeInvalid("c64(A)(b)", "more adjoined elements than chain links")
    for n, a in enumerate(probe.a):
        G = chain.stages[n + 1]
        G.check_index(a)
        base = chain.links[n].map
        if a in set(base):
            raise ProbeInvalid("c64(A)(b)", f"a_{n} already lies in stage {n}")
        if not commute_setwise(G, (a,), base):
            raise ProbeInvalid("c64(A)(e)", f"a_{n} does not commute with stage {n}")
        if G.orders[a] != probe.k:
            raise ProbeInvalid("c64(A)(b)", f"a_{n} has order {G.orders[a]}, expected {probe.k}")
        if probe.disjoint and set(generated_subgroup(G, (a,)).members) & set(base) != {0}:
            raise ProbeInvalid("c64(A)(d)(beta)", f"<a_{n}> meets stage {n}")


def _first_disagreement(G: FiniteGroup, x1: int, x2: int, params: Sequence[int], max_len: int):
    """Breadth-first search over pairs ``(sigma(x1, c), sigma(x2, c))`` for words up to ``max_len``."""
    rows, inv = G.rows, G.inverse
    letters = [(x1, x2, "x")] + [(c, c, f"c{c}") for c in params]
    steps = []
    for u, v, name in letters:
        steps.append((u, v, name))
        steps.append((inv[u], inv[v], name + "^-1"))
    start = (0, 0)
    parent = {start: None}
    frontier = deque([(start, 0)])
    while frontier:
        (u, v), d = frontier.popleft()
        if (u == 0) != (v == 0):
            word = []
            s = (u, v)
            while parent[s] is not None:
                s, name = parent[s]
                word.append(name)
            return " ".join(reversed(word)), len(parent)
        if d == max_len:
            continue
        for su, sv, name in steps:
            t = (rows[u][su], rows[v][sv])
            if t not in parent:
                parent[t] = ((u, v), name)
                frontier.append((t, d + 1))
    return None, len(parent)


def chain_limit_probe(chain: StageChain, probe: ChainProbe, term_budget: int = 6) -> ProbeReport:
    """``sigma(b_n, c) = e`` iff ``sigma(b_m, c) = e`` for ``c`` from stage ``n``.

    ``m`` is ``n + 1``; without disjointness only factorial indices are
    compared.
    """
    validate_probe(chain, probe)
    bs = probe.b(chain)
    report = ProbeReport()
    if probe.disjoint:
        idx = list(range(len(bs)))
    else:
        idx, f, n = [], 1, 1
        while f < len(bs):
            idx.append(f)
            n += 1
            f *= n
    for n, m in zip(idx, idx[1:]):
        top = m + 1
        X = chain.stages[top]
        up_n = chain.embedding(n + 1, top).map[bs[n]]
        up_m = bs[m]
        params = chain.embedding(n, top).map
        word, visited = _first_disagreement(X, up_n, up_m, params, term_budget)
        report.checked.append((n, m, visited))
        if word is not None:
            report.violation = (n, m, word)
            break
    return report


def z2_diagonal_chain(length: int) -> tuple[StageChain, ChainProbe]:
    """``G_n = Z2^n`` by repeated central adjunction; ``a_n`` is the new generator."""
    chain = StageChain.start(trivial_group())
    a = []
    for _ in range(length - 1):
        P, c, eG = apply_ab_k(chain.last, 2)
        chain.append(P, eG, "ab", (2,))
        a.append(c[0])
    return chain, ChainProbe(a, 2)
