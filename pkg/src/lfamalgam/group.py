"""Finite groups as multiplication tables with the identity pinned at index 0.

Everything downstream (types, tries, amalgams, schemes) works on element
indices of a :class:`FiniteGroup`; subgroups are sorted index sets and
embeddings are index maps.
"""

from __future__ import annotations

import itertools
import operator
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    IndexOutOfRange,
    NoIdentityAtZero,
    NoInverse,
    NotAnEmbedding,
    NotASubgroup,
    NotAssociative,
    NotClosed,
)


class FiniteGroup:
    """Immutable group of order ``n`` given by an ``n x n`` table.

    Construct through :func:`validate_table` for untrusted input; the
    constructor itself only derives caches and trusts its argument.
    """

    __slots__ = ("table", "inverse", "orders", "order", "name", "_rows", "_key", "_abelian")

    def __init__(self, table, name: str = ""):
        t = np.array(table, dtype=np.int32, copy=True)
        t.setflags(write=False)
        self.table = t
        self.order = int(t.shape[0])
        self.name = name
        if self.order > 256:
            # share one int object per value; plain tolist() allocates one per entry
            pool = list(range(self.order))
            self._rows = [operator.itemgetter(*row.tolist())(pool) for row in t]
        else:
            self._rows = t.tolist()
        inv = [0] * self.order
        for g, row in enumerate(self._rows):
            inv[g] = row.index(0)
        self.inverse = tuple(inv)
        self.orders = tuple(_element_orders(self._rows))
        self._key = t.tobytes()
        self._abelian = None

    def mul(self, a: int, b: int) -> int:
        return self._rows[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, a: int) -> int:
        """``a^-1 g a``."""
        r = self._rows
        return r[r[self.inverse[a]][g]][a]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inverse[g], -k
        out, base = 0, g
        while k:
            if k & 1:
                out = self._rows[out][base]
            base = self._rows[base][base]
            k >>= 1
        return out

    def product(self, elems: Iterable[int]) -> int:
        out = 0
        for e in elems:
            out = self._rows[out][e]
        return out

    def commute(self, a: int, b: int) -> bool:
        return self._rows[a][b] == self._rows[b][a]

    @property
    def rows(self) -> list[list[int]]:
        return self._rows

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            self._abelian = bool(np.array_equal(self.table, self.table.T))
        return self._abelian

    def check_index(self, *idx: int) -> None:
        for i in idx:
            if not (isinstance(i, (int, np.integer)) and 0 <= i < self.order):
                raise IndexOutOfRange(f"index {i!r} outside group of order {self.order}")

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<FiniteGroup{label} order={self.order}>"


def _element_orders(rows: list[list[int]]) -> list[int]:
    n = len(rows)
    orders = [0] * n
    for g in range(n):
        if orders[g]:
            continue
        k, x = 1, g
        while x != 0:
            x = rows[x][g]
            k += 1
        orders[g] = k
    return orders


def validate_table(raw, name: str = "") -> FiniteGroup:
    """Check the group axioms on a raw square table and build the group.

    Errors name the first witnessing tuple in row-major order.
    """
    try:
        t = np.asarray(raw, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise NotClosed(f"table is not a square integer array: {exc}") from None
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotClosed(f"table shape {t.shape} is not square and nonempty")
    n = t.shape[0]
    bad = np.argwhere((t < 0) | (t >= n))
    if len(bad):
        a, b = (int(v) for v in bad[0])
        raise NotClosed(f"product {a}*{b} = {int(t[a, b])} outside 0..{n - 1}", (a, b))
    for g in range(n):
        if t[0, g] != g or t[g, 0] != g:
            raise NoIdentityAtZero(f"index 0 is not an identity: fails at element {g}", (g,))
    for g in range(n):
        right = np.nonzero(t[g] == 0)[0]
        if len(right) == 0 or t[right[0], g] != 0:
            raise NoInverse(f"element {g} has no two-sided inverse", (g,))
    for a in range(n):
        lhs = t[t[a]]  # (a*b)*c over all b, c
        rhs = t[a][t]  # a*(b*c)
        diff = np.argwhere(lhs != rhs)
        if len(diff):
            b, c = (int(v) for v in diff[0])
            raise NotAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})", (a, b, c))
    return FiniteGroup(t, name=name)


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(repr=False)
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, g: int) -> bool:
        return g in self._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_cached_set", s)
        return s

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def as_group(self, name: str = "") -> tuple[FiniteGroup, "Embedding"]:
        """Re-table the subgroup (members keep their sorted order)."""
        pos = {g: i for i, g in enumerate(self.members)}
        rows = self.parent.rows
        table = [[pos[rows[a][b]] for b in self.members] for a in self.members]
        sub = FiniteGroup(table, name=name)
        return sub, Embedding(sub, self.parent, self.members)


def as_subgroup(G: FiniteGroup, members: Iterable[int]) -> Subgroup:
    """Wrap an index set that must already be a subgroup of ``G``."""
    ms = sorted(set(int(m) for m in members))
    G.check_index(*ms)
    s = set(ms)
    if 0 not in s:
        raise NotASubgroup("identity missing")
    rows = G.rows
    for a in ms:
        if G.inverse[a] not in s:
            raise NotASubgroup(f"inverse of {a} missing")
        for b in ms:
            if rows[a][b] not in s:
                raise NotASubgroup(f"{a}*{b} missing")
    return Subgroup(G, tuple(ms))


def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (0,))


def generated_subgroup(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    """Least subgroup containing ``S`` (closure under right multiplication)."""
    gens = sorted(set(int(s) for s in S))
    G.check_index(*gens)
    gens = [g for g in gens if g != 0]
    seen = {0}
    frontier = [0]
    rows = G.rows
    while frontier:
        nxt = []
        for x in frontier:
            r = rows[x]
            for s in gens:
                y = r[s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, tuple(sorted(seen)))


def subgroup_join(A: Subgroup, B: Subgroup) -> Subgroup:
    return generated_subgroup(A.parent, set(A.members) | set(B.members))


def intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    return Subgroup(A.parent, tuple(sorted(set(A.members) & set(B.members))))


def _require_subgroup(G: FiniteGroup, K) -> Subgroup:
    if isinstance(K, Subgroup):
        if K.parent is not G and K.parent != G:
            raise NotASubgroup("subgroup belongs to another group")
        return K
    return as_subgroup(G, K)


def left_cosets(G: FiniteGroup, K) -> list[tuple[int, ...]]:
    """Blocks ``gK`` sorted internally and ordered by least element."""
    K = _require_subgroup(G, K)
    rows = G.rows
    seen = [False] * G.order
    blocks = []
    for g in range(G.order):
        if seen[g]:
            continue
        block = tuple(sorted(rows[g][k] for k in K.members))
        for x in block:
            seen[x] = True
        blocks.append(block)
    return blocks


def coset_map(G: FiniteGroup, K) -> list[int]:
    """Position of each element's left ``K``-coset in :func:`left_cosets`."""
    out = [0] * G.order
    for i, block in enumerate(left_cosets(G, K)):
        for x in block:
            out[x] = i
    return out


def centralizer(G: FiniteGroup, A: Iterable[int]) -> Subgroup:
    A = sorted(set(int(a) for a in A))
    G.check_index(*A)
    rows = G.rows
    members = tuple(g for g in range(G.order) if all(rows[g][a] == rows[a][g] for a in A))
    return Subgroup(G, members)


def center(G: FiniteGroup) -> Subgroup:
    return centralizer(G, range(G.order))


def normalizer(G: FiniteGroup, A) -> Subgroup:
    A = _require_subgroup(G, A)
    aset = set(A.members)
    members = tuple(
        g for g in range(G.order) if all(G.conj(a, g) in aset for a in A.members)
    )
    return Subgroup(G, members)


def commute_setwise(G: FiniteGroup, A: Iterable[int], B: Iterable[int]) -> bool:
    rows = G.rows
    B = list(B)
    return all(rows[a][b] == rows[b][a] for a in A for b in B)


@dataclass(frozen=True, eq=False)
class Embedding:
    """Injective homomorphism ``source -> target`` stored as an index map."""

    source: FiniteGroup = field(repr=False)
    target: FiniteGroup = field(repr=False)
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(v) for v in self.map))

    def __call__(self, g: int) -> int:
        return self.map[g]

    def images(self, gs: Iterable[int]) -> tuple[int, ...]:
        return tuple(self.map[g] for g in gs)

    @property
    def image(self) -> Subgroup:
        return Subgroup(self.target, tuple(sorted(self.map)))

    def then(self, other: "Embedding") -> "Embedding":
        """Composite: apply ``self`` first, then ``other``."""
        return Embedding(self.source, other.target, tuple(other.map[v] for v in self.map))

    def preimage(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.map)}

    def inverse(self) -> "Embedding":
        if self.source.order != self.target.order:
            raise NotAnEmbedding("only bijective embeddings invert")
        inv = [0] * self.target.order
        for i, v in enumerate(self.map):
            inv[v] = i
        return Embedding(self.target, self.source, tuple(inv))

    def is_valid(self) -> bool:
        return check_embedding(self.source, self.target, self.map, raise_=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Embedding)
            and self.map == other.map
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self) -> int:
        return hash(self.map)


def check_embedding(K: FiniteGroup, G: FiniteGroup, mapping: Sequence[int], raise_: bool = True) -> bool:
    def fail(msg):
        if raise_:
            raise NotAnEmbedding(msg)
        return False

    if len(mapping) != K.order:
        return fail("map length differs from source order")
    if any(not 0 <= v < G.order for v in mapping):
        return fail("map leaves the target")
    if mapping[0] != 0:
        return fail("identity not preserved")
    if len(set(mapping)) != K.order:
        return fail("map is not injective")
    kr, gr = K.rows, G.rows
    for a in range(K.order):
        ma = mapping[a]
        for b in range(K.order):
            if mapping[kr[a][b]] != gr[ma][mapping[b]]:
                return fail(f"product of {a},{b} not preserved")
    return True


def make_embedding(K: FiniteGroup, G: FiniteGroup, mapping: Sequence[int]) -> Embedding:
    check_embedding(K, G, mapping)
    return Embedding(K, G, tuple(mapping))


def identity_embedding(G: FiniteGroup) -> Embedding:
    return Embedding(G, G, tuple(range(G.order)))


def generating_sequence(G: FiniteGroup) -> list[int]:
    """Greedy generators: repeatedly add the least element outside the span.

    Preferring elements of large order keeps the backtracking tree small;
    ties break by index so the result is deterministic.
    """
    gens: list[int] = []
    span = {0}
    by_order = sorted(range(1, G.order), key=lambda g: (-G.orders[g], g))
    while len(span) < G.order:
        g = next(x for x in by_order if x not in span)
        gens.append(g)
        span = set(generated_subgroup(G, gens).members)
    return gens


def _cayley_walk(K: FiniteGroup, gens: Sequence[int]) -> list[tuple[int, int, int]]:
    """BFS edges ``(x, k, x*gens[k])`` spanning ``<gens>`` plus all closing edges."""
    rows = K.rows
    seen = {0}
    order = [0]
    edges = []
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for k, s in enumerate(gens):
            y = rows[x][s]
            edges.append((x, k, y))
            if y not in seen:
                seen.add(y)
                order.append(y)
    return edges


def extend_homomorphism(K: FiniteGroup, gens: Sequence[int], images: Sequence[int], G: FiniteGroup):
    """Extend ``gens[i] -> images[i]`` to ``<gens>``; ``None`` when inconsistent."""
    grows = G.rows
    phi = {0: 0}
    for x, k, y in _cayley_walk(K, gens):
        v = grows[phi[x]][images[k]]
        w = phi.get(y)
        if w is None:
            phi[y] = v
        elif w != v:
            return None
    return phi


def iter_homomorphisms_from_gens(K, gens, G, candidates, injective=True) -> Iterator[tuple[int, ...]]:
    """Backtrack over generator images, checking each prefix subgroup."""
    walks = [_cayley_walk(K, gens[: i + 1]) for i in range(len(gens))]
    grows = G.rows

    def consistent(level, images):
        phi = {0: 0}
        for x, k, y in walks[level]:
            v = grows[phi[x]][images[k]]
            w = phi.get(y)
            if w is None:
                phi[y] = v
            elif w != v:
                return None
        if injective and len(set(phi.values())) != len(phi):
            return None
        return phi

    def rec(level, images):
        for c in candidates[level]:
            imgs = images + (c,)
            phi = consistent(level, imgs)
            if phi is None:
                continue
            if level == len(gens) - 1:
                yield phi
            else:
                yield from rec(level + 1, imgs)

    if not gens:
        yield {0: 0}
        return
    yield from rec(0, ())


def enumerate_embeddings(K: FiniteGroup, G: FiniteGroup, limit: int | None = None) -> list[Embedding]:
    """All injective homomorphisms ``K -> G``, lexicographic on generator images."""
    if G.order % K.order:
        return []
    gens = generating_sequence(K)
    candidates = [
        [g for g in range(G.order) if G.orders[g] == K.orders[s]] for s in gens
    ]
    out = []
    for phi in iter_homomorphisms_from_gens(K, gens, G, candidates):
        out.append(Embedding(K, G, tuple(phi[x] for x in range(K.order))))
        if limit is not None and len(out) >= limit:
            break
    return out


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> Embedding | None:
    if G.order != H.order or sorted(G.orders) != sorted(H.orders):
        return None
    if G.is_abelian != H.is_abelian:
        return None
    found = enumerate_embeddings(G, H, limit=1)
    return found[0] if found else None


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return find_isomorphism(G, H) is not None


def automorphisms(G: FiniteGroup) -> list[Embedding]:
    return enumerate_embeddings(G, G)


def inner_automorphisms(G: FiniteGroup) -> list[Embedding]:
    """Conjugations ``x -> g^-1 x g`` deduplicated, in order of ``g``."""
    seen = set()
    out = []
    for g in range(G.order):
        m = tuple(G.conj(x, g) for x in range(G.order))
        if m not in seen:
            seen.add(m)
            out.append(Embedding(G, G, m))
    return out


def relabel(G: FiniteGroup, perm: Sequence[int], name: str = "") -> tuple[FiniteGroup, Embedding]:
    """Isomorphic copy where old element ``g`` becomes ``perm[g]`` (``perm[0] == 0``)."""
    perm = list(perm)
    if perm[0] != 0 or sorted(perm) != list(range(G.order)):
        raise NotAnEmbedding("relabeling must be a permutation fixing 0")
    inv = [0] * G.order
    for g, p in enumerate(perm):
        inv[p] = g
    rows = G.rows
    table = [[perm[rows[inv[a]][inv[b]]] for b in range(G.order)] for a in range(G.order)]
    H = FiniteGroup(table, name=name or G.name)
    return H, Embedding(G, H, tuple(perm))


def random_relabel(G: FiniteGroup, rng) -> tuple[FiniteGroup, Embedding]:
    rest = list(range(1, G.order))
    rng.shuffle(rest)
    return relabel(G, [0] + rest)


# --- group terms -----------------------------------------------------------


@dataclass(frozen=True)
class GroupTerm:
    """A word over ``arity`` slots; letters are ``(slot, +1 | -1)``.

    Callers lay out slots as variables followed by parameters, so the same
    term type serves ``sigma(x, b)``.
    """

    arity: int
    word: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for slot, e in self.word:
            if not 0 <= slot < self.arity:
                raise ArityMismatch(f"slot {slot} outside arity {self.arity}")
            if e not in (1, -1):
                raise ArityMismatch(f"exponent {e} is not +-1")

    @classmethod
    def parse(cls, text: str, arity: int) -> "GroupTerm":
        """Parse ``"x0 x1^-1 x0"``; ``"e"`` or empty text is the empty word."""
        letters = []
        for tok in text.split():
            if tok in ("e", "1"):
                continue
            base, _, exp = tok.partition("^")
            if not base.startswith("x"):
                raise ArityMismatch(f"bad letter {tok!r}")
            e = int(exp) if exp else 1
            letters.extend([(int(base[1:]), 1 if e > 0 else -1)] * abs(e))
        return cls(arity, tuple(letters))

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        if not self.word:
            return "e"
        return " ".join(f"x{s}" + ("^-1" if e < 0 else "") for s, e in self.word)


def eval_term(G: FiniteGroup, term: GroupTerm, args: Sequence[int]) -> int:
    if len(args) != term.arity:
        raise ArityMismatch(f"term of arity {term.arity} got {len(args)} arguments")
    G.check_index(*args)
    rows, inv = G.rows, G.inverse
    out = 0
    for slot, e in term.word:
        a = args[slot]
        out = rows[out][a if e > 0 else inv[a]]
    return out


def reduced_words(arity: int, max_len: int) -> Iterator[GroupTerm]:
    """Freely reduced words of length ``1..max_len`` in shortlex order."""
    letters = [(s, e) for s in range(arity) for e in (1, -1)]
    frontier: list[tuple] = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for s, e in letters:
                if w and w[-1] == (s, -e):
                    continue
                nw = w + ((s, e),)
                nxt.append(nw)
                yield GroupTerm(arity, nw)
        frontier = nxt


# --- standard constructions ------------------------------------------------


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], name=f"Z{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str = ""):
    """``G x H`` with element ``(g, h)`` at index ``g * |H| + h``.

    Returns the group and the two factor embeddings.
    """
    m = H.order
    gr, hr = G.rows, H.rows
    table = [
        [gr[a // m][b // m] * m + hr[a % m][b % m] for b in range(G.order * m)]
        for a in range(G.order * m)
    ]
    P = FiniteGroup(table, name=name or (f"{G.name}x{H.name}" if G.name and H.name else ""))
    return P, Embedding(G, P, tuple(g * m for g in range(G.order))), Embedding(H, P, tuple(range(m)))


def group_from_permutations(perms: Sequence[Sequence[int]], name: str = "") -> tuple[FiniteGroup, list[tuple[int, ...]]]:
    """Group of explicit permutations (composition: apply left factor first)."""
    from .perm import close_permutations

    res = close_permutations([np.asarray(p) for p in perms])
    return FiniteGroup(res.table, name=name), [tuple(int(v) for v in e) for e in res.elements]


def symmetric(n: int) -> FiniteGroup:
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(i) = q(p(i)): apply p first.
    table = [[index[tuple(q[p[i]] for i in range(n))] for q in perms] for p in perms]
    return FiniteGroup(table, name=f"S{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of an ``n``-gon, order ``2n``: ``r^i s^f`` at index ``2i + f``."""

    def mul(a, b):
        i, f = divmod(a, 2)
        j, g = divmod(b, 2)
        k = (i + (-j if f else j)) % n
        return 2 * k + (f ^ g)

    return FiniteGroup([[mul(a, b) for b in range(2 * n)] for a in range(2 * n)], name=f"D{2 * n}")


def quaternion() -> FiniteGroup:
    # unit quaternions as (sign, unit) with units 1,i,j,k
    units = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
             (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
             (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
             (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0)}
    elems = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
    index = {e: i for i, e in enumerate(elems)}

    def mul(a, b):
        (sa, ua), (sb, ub) = elems[a], elems[b]
        s, u = units[(ua, ub)]
        return index[(sa * sb * s, u)]

    return FiniteGroup([[mul(a, b) for b in range(8)] for a in range(8)], name="Q8")


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], name="Z1")
