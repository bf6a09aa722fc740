"""Operational type schemes and their sequential and independent products.

A scheme is a constructor: given ``G`` and parameters ``a`` it builds an
extension ``H`` of ``G`` and a tuple ``c`` in ``H``; the scheme's type
``q_s(a, G)`` is ``tp_bs(c, G, H)``.  Constructions that live on ``G x n``
use the permutations ``h_{a,pi}: (g, i) -> (g * a_i, pi(i))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .amalgam import Budget, StableAmalgam, stable_amalgam
from .errors import (
    BudgetExceeded,
    InvariantViolation,
    NoSwapRealization,
    NotAFullListing,
    ParameterNotOrderTwo,
    PreconditionFailed,
    SymmetryCheckFailed,
)
from .group import (
    Embedding,
    FiniteGroup,
    as_subgroup,
    automorphisms,
    center,
    centralizer,
    check_embedding,
    commute_setwise,
    cyclic,
    direct_product,
    extend_homomorphism,
    generated_subgroup,
    generating_sequence,
    identity_embedding,
    trivial_subgroup,
)
from .perm import DEFAULT_MAX_ORDER, close_permutations, generator_map_is_isomorphism
from .qf_types import QfType, tp_bs


@dataclass(frozen=True, eq=False)
class Extension:
    """``G <= H`` (through ``j0``) with the realizing tuple ``c``."""

    scheme: str
    G: FiniteGroup = field(repr=False)
    H: FiniteGroup = field(repr=False)
    j0: Embedding = field(repr=False)
    params: tuple[int, ...]
    c: tuple[int, ...]

    def q_type(self) -> QfType:
        return tp_bs(self.H, self.c, self.j0.map)


# --- wreath-type permutation constructions ---------------------------------------


def wreath_perm(G: FiniteGroup, n: int, a: Sequence[int], pi: Sequence[int]) -> np.ndarray:
    """``h_{a,pi}`` on ``G x n`` with point ``(g, i)`` at index ``g * n + i``."""
    g = np.repeat(np.arange(G.order), n)
    i = np.tile(np.arange(n), G.order)
    a_arr = np.asarray(a, dtype=np.int64)
    pi_arr = np.asarray(pi, dtype=np.int64)
    return (G.table[g, a_arr[i]].astype(np.int64) * n + pi_arr[i]).astype(np.int32)


def _slot_embedding(G: FiniteGroup, n: int, slot: int, x: int) -> np.ndarray:
    a = [0] * n
    a[slot] = x
    return wreath_perm(G, n, a, range(n))


def _close(G: FiniteGroup, n: int, extra: list, max_order: int):
    gens = [_slot_embedding(G, n, 0, x) for x in sorted(generating_sequence(G))] + extra
    res = close_permutations(gens, degree=G.order * n, max_order=max_order)
    H = FiniteGroup(res.table)
    j0 = Embedding(G, H, tuple(res.index_of(_slot_embedding(G, n, 0, x)) for x in range(G.order)))
    check_embedding(G, H, j0.map)
    return H, j0, res


def cg_clauses(H: FiniteGroup, j0: Embedding, a: int) -> dict[str, bool]:
    """The three conclusions about the adjoined element ``a``."""
    img = j0.map
    conj = [H.conj(g, a) for g in img]
    return {
        "a has order 2": H.orders[a] == 2,
        "a commutes with no nontrivial element of G": not any(H.commute(a, g) for g in img[1:]),
        "G and a^-1 G a commute": commute_setwise(H, img, conj),
    }


def apply_cg(G: FiniteGroup, max_order: int = DEFAULT_MAX_ORDER):
    """``G+ = <G u {a}>`` on ``G x 2`` with ``a`` the swap of the two copies."""
    swap = wreath_perm(G, 2, (0, 0), (1, 0))
    H, j0, res = _close(G, 2, [swap], max_order)
    a = res.index_of(swap)
    bad = [k for k, ok in cg_clauses(H, j0, a).items() if not ok]
    if bad:
        raise InvariantViolation("c52(1)", bad[0])
    return H, a, j0


_GL_PI = ((1, 0, 2), (2, 1, 0), (2, 1, 0), (1, 0, 2))


def _gl_tuples(a: int):
    return ((a, a, 0), (a, 0, a), (0, 0, 0), (0, 0, a))


def gl_clauses(G: FiniteGroup, H: FiniteGroup, j0: Embedding, a: int, c: Sequence[int]) -> dict[str, bool]:
    img = j0.map
    out = {}
    q_cg = cg_type(G)
    for ell, x in enumerate(c):
        out[f"c{ell} has order 2"] = H.orders[x] == 2
        conj = [H.conj(g, x) for g in img]
        out[f"c{ell} moves G onto a commuting copy"] = commute_setwise(H, img, conj)
        out[f"c{ell} realizes q_cg"] = tp_bs(H, (x,), img) == q_cg
    out["c0 c1 c2 c3 = a"] = H.product(c) == img[a]
    out["a in <c>"] = img[a] in generated_subgroup(H, c)
    return out


def apply_gl(G: FiniteGroup, a: int, max_order: int = DEFAULT_MAX_ORDER):
    """Four conjugates of the cg element on ``G x 3`` whose product is ``a``."""
    G.check_index(a)
    if G.orders[a] != 2:
        raise ParameterNotOrderTwo(f"element {a} has order {G.orders[a]}")
    perms = [wreath_perm(G, 3, t, pi) for t, pi in zip(_gl_tuples(a), _GL_PI)]
    H, j0, res = _close(G, 3, perms, max_order)
    c = tuple(res.index_of(p) for p in perms)
    bad = [k for k, ok in gl_clauses(G, H, j0, a, c).items() if not ok]
    if bad:
        raise InvariantViolation("c52(3)", bad[0])
    return H, c, j0


def ab_clauses(G_emb: Embedding, K: FiniteGroup, listing: Sequence[int], c: Sequence[int]) -> dict[str, bool]:
    H = G_emb.target
    img = G_emb.map
    span = generated_subgroup(H, c)
    return {
        "c realizes the type of the listing": tp_bs(H, c) == tp_bs(K, listing),
        "c commutes with G": commute_setwise(H, c, img),
        "<c> meets G trivially": set(span.members) & set(img) == {0},
    }


def apply_ab(G: FiniteGroup, K: FiniteGroup, listing: Sequence[int] | None = None):
    """Direct product ``G x K``; ``c`` is the copy of ``listing`` in the ``K`` factor."""
    if listing is None:
        listing = tuple(range(K.order))
    listing = tuple(int(x) for x in listing)
    if len(listing) != K.order or sorted(listing) != list(range(K.order)):
        raise NotAFullListing(f"{listing} does not list the {K.order} elements of K once each")
    P, eG, eK = direct_product(G, K)
    c = eK.images(listing)
    bad = [k for k, ok in ab_clauses(eG, K, listing, c).items() if not ok]
    if bad:
        raise InvariantViolation("c67(2)", bad[0])
    return P, c, eG


def apply_ab_k(G: FiniteGroup, k: int):
    """A new central element of order ``k`` meeting ``G`` trivially."""
    P, eG, eK = direct_product(G, cyclic(k))
    c = eK.map[1 % k]
    for m in range(1, 2 * k + 1):
        cm = P.power(c, m)
        if (cm == 0) != (cm in set(eG.map)) or (cm == 0) != (m % k == 0):
            raise InvariantViolation("c67(1)(c)", f"power {m}")
    if not commute_setwise(P, (c,), eG.map):
        raise InvariantViolation("c67(1)(b)", "c is not central over G")
    return P, (c,), eG


def _gm_preconditions(G: FiniteGroup, a1: Sequence[int], a2: Sequence[int]) -> None:
    if len(a1) != len(a2):
        raise PreconditionFailed("d93(c) equal types", "tuples differ in length")
    if tp_bs(G, a1) != tp_bs(G, a2):
        raise PreconditionFailed("d93(c) equal types", "the two tuples have different types over the empty set")
    A1, A2 = generated_subgroup(G, a1), generated_subgroup(G, a2)
    if not commute_setwise(G, A1.members, A2.members):
        raise PreconditionFailed("d93(c) commuting copies", "<a1> and <a2> do not commute")
    if set(A1.members) & set(A2.members) != {0}:
        raise PreconditionFailed("d93(c) trivial intersection", "<a1> and <a2> meet nontrivially")
    K0, _ = generated_subgroup(G, list(a1) + list(a2)).as_group()
    if center(K0).order != 1:
        raise PreconditionFailed("d93 trivial center", "<a1 a2> has a nontrivial center")


def _split_extension(G: FiniteGroup, phi: Sequence[int]) -> FiniteGroup:
    """``G x| <phi>`` for an involutive automorphism; ``(g, i)`` sits at ``i * |G| + g``."""
    n = G.order
    t = G.table
    phi_arr = np.asarray(phi, dtype=np.int64)
    twist = [np.arange(n), phi_arr]
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    for i in range(2):
        for j in range(2):
            table[i * n:(i + 1) * n, j * n:(j + 1) * n] = t[:, twist[i]] + ((i + j) % 2) * n
    return FiniteGroup(table)


def gm_clauses(H: FiniteGroup, j0: Embedding, a1, a2, c: int) -> dict[str, bool]:
    G = j0.source
    cm = centralizer(G, list(a1) + list(a2))
    return {
        "conjugation by c swaps a1 and a2": all(
            H.conj(j0.map[x], c) == j0.map[y] and H.conj(j0.map[y], c) == j0.map[x] for x, y in zip(a1, a2)
        ),
        "conjugation by c fixes Cm_G(a1 a2)": all(H.conj(j0.map[g], c) == j0.map[g] for g in cm.members),
    }


def apply_gm(G: FiniteGroup, a1: Sequence[int], a2: Sequence[int], budget: Budget = Budget()):
    """Adjoin an involution swapping ``a1``, ``a2`` and fixing their centraliser."""
    a1, a2 = tuple(a1), tuple(a2)
    G.check_index(*a1, *a2)
    _gm_preconditions(G, a1, a2)
    cm = centralizer(G, a1 + a2).members
    for f in automorphisms(G):
        phi = f.map
        if any(phi[x] != y or phi[y] != x for x, y in zip(a1, a2)):
            continue
        if any(phi[phi[g]] != g for g in range(G.order)) or any(phi[g] != g for g in cm):
            continue
        H = _split_extension(G, phi)
        j0 = Embedding(G, H, tuple(range(G.order)))
        c = G.order
        break
    else:
        H, c, j0 = _gm_by_amalgam(G, a1, a2, budget)
    bad = [k for k, ok in gm_clauses(H, j0, a1, a2, c).items() if not ok]
    if bad:
        raise InvariantViolation("d93(d)", bad[0])
    return H, c, j0


def _gm_by_amalgam(G, a1, a2, budget):
    """Amalgamate ``G`` with ``<a1 a2> x| swap`` keeping ``Cm_G(a1 a2)`` commuting with the swap."""
    from .nf3 import Nf3Request, nf3_amalgam

    sub = generated_subgroup(G, a1 + a2)
    K0, inc = sub.as_group()
    pre = inc.preimage()
    gens = [pre[x] for x in a1 + a2]
    images = [pre[x] for x in a2 + a1]
    swap = extend_homomorphism(K0, gens, images, K0)
    if swap is None:
        raise NoSwapRealization("the swap of a1 and a2 is not an automorphism of <a1 a2>")
    phi = [swap[g] for g in range(K0.order)]
    K2 = _split_extension(K0, phi)
    emb2 = Embedding(K0, K2, tuple(range(K0.order)))
    L = as_subgroup(G, centralizer(G, inc.map).members)
    req = Nf3Request(K0, G, K2, inc, emb2, L, trivial_subgroup(K0))
    try:
        A = nf3_amalgam(req, budget).amalgam
        H, j0 = A.G3, A.j1
        return H, A.j2.map[K0.order], j0
    except BudgetExceeded as exc:
        raise NoSwapRealization(f"fallback amalgam too large: {exc}") from exc


# --- scheme objects -----------------------------------------------------------


class WordAlgebra:
    """Element arithmetic of a scheme's extension of a tabled group ``M``.

    Used to decide ``sigma(z, ...) = e`` in ``q_s(a, M)`` without tabling the
    (much larger) extension.
    """

    def __init__(self, mul: Callable, inv: Callable, identity, embed: Callable, outputs: tuple):
        self.mul, self.inv, self.identity, self.embed, self.outputs = mul, inv, identity, embed, outputs


def _wreath_algebra(M: FiniteGroup, n: int, outputs_spec) -> WordAlgebra:
    rows, inverse = M.rows, M.inverse

    def mul(x, y):
        a, pi = x
        b, rho = y
        return tuple(rows[a[i]][b[pi[i]]] for i in range(n)), tuple(rho[pi[i]] for i in range(n))

    def inv(x):
        a, pi = x
        b = [0] * n
        p = [0] * n
        for i in range(n):
            b[pi[i]] = inverse[a[i]]
            p[pi[i]] = i
        return tuple(b), tuple(p)

    ident = (tuple([0] * n), tuple(range(n)))

    def embed(m):
        return ((m,) + (0,) * (n - 1), tuple(range(n)))

    return WordAlgebra(mul, inv, ident, embed, tuple((tuple(a), tuple(pi)) for a, pi in outputs_spec))


def _cyclic_algebra(M: FiniteGroup, K: FiniteGroup, outputs) -> WordAlgebra:
    rows, inverse = M.rows, M.inverse
    krows, kinv = K.rows, K.inverse
    return WordAlgebra(
        lambda x, y: (rows[x[0]][y[0]], krows[x[1]][y[1]]),
        lambda x: (inverse[x[0]], kinv[x[1]]),
        (0, 0),
        lambda m: (m, 0),
        tuple((0, k) for k in outputs),
    )


@dataclass(frozen=True, eq=False)
class Scheme:
    id: str
    k: int
    n: int
    p_text: str
    realizes: Callable = field(repr=False)
    build: Callable = field(repr=False)
    algebra: Callable | None = field(default=None, repr=False)

    def realizes_p(self, G: FiniteGroup, a: Sequence[int]) -> bool:
        return len(a) == self.k and self.realizes(G, tuple(a))

    def parameter_tuples(self, G: FiniteGroup) -> list[tuple[int, ...]]:
        return [a for a in itertools.product(range(G.order), repeat=self.k) if self.realizes(G, a)]

    def apply(self, G: FiniteGroup, a: Sequence[int] = ()) -> Extension:
        a = tuple(a)
        if not self.realizes_p(G, a):
            raise PreconditionFailed(f"p_{self.id}", f"parameters {a} do not realize {self.p_text}")
        H, c, j0 = self.build(G, a)
        return Extension(self.id, G, H, j0, a, tuple(c))

    def q_type(self, G: FiniteGroup, a: Sequence[int] = ()) -> QfType:
        return self.apply(G, a).q_type()


def _always(G, a):
    return True


def scheme_trivial() -> Scheme:
    return Scheme("trivial", 0, 0, "no parameters", _always, lambda G, a: (G, (), identity_embedding(G)),
                  lambda M, a: WordAlgebra(lambda x, y: M.rows[x][y], lambda x: M.inverse[x], 0, lambda m: m, ()))


def scheme_cg() -> Scheme:
    def build(G, a):
        H, x, j0 = apply_cg(G)
        return H, (x,), j0

    return Scheme("cg", 0, 1, "no parameters", _always, build,
                  lambda M, a: _wreath_algebra(M, 2, [((0, 0), (1, 0))]))


def scheme_gl() -> Scheme:
    def algebra(M, a):
        return _wreath_algebra(M, 3, list(zip(_gl_tuples(a[0]), _GL_PI)))

    return Scheme("gl", 1, 4, "x0 = x0^-1, x0 != e", lambda G, a: G.orders[a[0]] == 2,
                  lambda G, a: apply_gl(G, a[0]), algebra)


def scheme_ab(k: int) -> Scheme:
    Zk = cyclic(k)
    return Scheme(f"ab{k}", 0, 1, "no parameters", _always, lambda G, a: apply_ab_k(G, k),
                  lambda M, a: _cyclic_algebra(M, Zk, (1 % k,)))


def scheme_ab_marked(K: FiniteGroup, listing: Sequence[int] | None = None) -> Scheme:
    listing = tuple(range(K.order)) if listing is None else tuple(listing)
    return Scheme(f"ab[{K.name or K.order}]", 0, len(listing), "no parameters", _always,
                  lambda G, a: apply_ab(G, K, listing), lambda M, a: _cyclic_algebra(M, K, listing))


def scheme_gm(m: int) -> Scheme:
    def realizes(G, a):
        try:
            _gm_preconditions(G, a[:m], a[m:])
        except PreconditionFailed:
            return False
        return True

    def build(G, a):
        H, c, j0 = apply_gm(G, a[:m], a[m:])
        return H, (c,), j0

    return Scheme(f"gm{m}", 2 * m, 1, "equal types, commuting, disjoint, centreless join", realizes, build)


def get_scheme(name: str) -> Scheme:
    """``cg``, ``gl``, ``ab<k>``, ``gm<m>`` or ``trivial``."""
    name = name.replace("(", "").replace(")", "").replace("_", "")
    if name == "cg":
        return scheme_cg()
    if name == "gl":
        return scheme_gl()
    if name == "trivial":
        return scheme_trivial()
    if name.startswith("ab") and name[2:].isdigit():
        return scheme_ab(int(name[2:]))
    if name.startswith("gm") and name[2:].isdigit():
        return scheme_gm(int(name[2:]))
    raise KeyError(f"unknown scheme {name!r}")


def cg_type(G: FiniteGroup) -> QfType:
    return scheme_cg().q_type(G)


@dataclass(frozen=True)
class DefEntry:
    """A scheme with parameters; an int is an element of the base group and
    ``("c", i, j)`` is output ``j`` of entry ``i`` of the same product."""

    scheme: Scheme
    params: tuple = ()


# --- sequential product ----------------------------------------------------------


@dataclass
class OplusResult:
    H: FiniteGroup
    emb: Embedding
    tuples: list
    stages: list
    restriction: list = field(default_factory=list)

    @property
    def restriction_ok(self) -> bool:
        return all(ok for _, ok in self.restriction)


def oplus_apply(entries: Sequence[DefEntry], G: FiniteGroup) -> OplusResult:
    """Apply the entries one after the other, each over the stage reached so far."""
    stage, emb = G, identity_embedding(G)
    outputs: list[tuple[int, ...]] = []
    stages = [(G, emb)]
    links = []
    for i, t in enumerate(entries):
        params = []
        for p in t.params:
            if isinstance(p, tuple):
                _, src, j = p
                params.append(outputs[src][j])
            else:
                params.append(emb.map[p])
        ext = t.scheme.apply(stage, params)
        outputs = [ext.j0.images(c) for c in outputs] + [ext.c]
        emb = emb.then(ext.j0)
        links.append(ext.j0)
        stage = ext.H
        stages.append((stage, emb))
    result = OplusResult(stage, emb, outputs, stages)
    for i, t in enumerate(entries):
        if all(not isinstance(p, tuple) for p in t.params):
            want = t.scheme.q_type(G, t.params)
            got = tp_bs(stage, outputs[i], emb.map)
            result.restriction.append((i, want == got))
    return result


# --- independent product ---------------------------------------------------------


@dataclass
class SweepReport:
    words: int = 0
    violations: list = field(default_factory=list)
    skipped: str = ""


@dataclass
class OtimesResult:
    amalgam: StableAmalgam
    transposed: StableAmalgam
    ext1: Extension
    ext2: Extension
    symmetric: bool
    joint_type: QfType | None
    sweep: SweepReport

    @property
    def c1(self):
        A = self.amalgam
        return A.j1.images(self.ext1.c) if A.is_tabled else None

    @property
    def c2(self):
        A = self.amalgam
        return A.j2.images(self.ext2.c) if A.is_tabled else None


def _marked_gens(A: StableAmalgam, G: FiniteGroup, ext_a: Extension, side_a: int, ext_b: Extension, side_b: int):
    gens = sorted(generating_sequence(G))
    out = [A.perm(side_a, ext_a.j0.map[g]) for g in gens]
    out += [A.perm(side_a, c) for c in ext_a.c]
    out += [A.perm(side_b, c) for c in ext_b.c]
    return out


def _joint_type(A: StableAmalgam, G: FiniteGroup, ext1: Extension, ext2: Extension, first: int) -> QfType:
    second = 3 - first
    j = A.j1 if first == 1 else A.j2
    k = A.j2 if first == 1 else A.j1
    base = tuple(j.map[ext1.j0.map[g]] for g in range(G.order))
    return tp_bs(A.G3, j.images(ext1.c) + k.images(ext2.c), base)


def otimes_apply(t1: DefEntry, t2: DefEntry, G: FiniteGroup, word_len: int = 6,
                 budget: Budget = Budget()) -> OtimesResult:
    """Realize both entries independently over ``G`` by stable amalgamation."""
    e1 = t1.scheme.apply(G, t1.params)
    e2 = t2.scheme.apply(G, t2.params)
    A = stable_amalgam(G, e1.H, e2.H, e1.j0, e2.j0, budget=budget)
    B = stable_amalgam(G, e2.H, e1.H, e2.j0, e1.j0, budget=budget)
    joint = None
    if A.is_tabled and B.is_tabled:
        joint = _joint_type(A, G, e1, e2, 1)
        symmetric = joint == _joint_type(B, G, e1, e2, 2)
    else:
        symmetric = generator_map_is_isomorphism(
            _marked_gens(A, G, e1, 1, e2, 2), _marked_gens(B, G, e1, 2, e2, 1)
        )
    if not symmetric:
        raise SymmetryCheckFailed(f"{t1.scheme.id} x {t2.scheme.id} over {G.name or G.order}: joint types differ")
    sweep = boxplus_sweep(A, G, e1, t1.scheme, e2, t2.scheme, word_len)
    return OtimesResult(A, B, e1, e2, symmetric, joint, sweep)


def boxplus_sweep(A: StableAmalgam, G: FiniteGroup, e1: Extension, s1: Scheme, e2: Extension, s2: Scheme,
                  word_len: int) -> SweepReport:
    """Check ``sigma(c1, c2, b) = e`` against the two one-sided scheme types.

    Letters are the new tuples and a generating sequence of ``G``; every
    freely reduced word up to ``word_len`` is evaluated in ``G3`` and in the
    two scheme extensions of ``G3``.
    """
    report = SweepReport()
    if word_len <= 0:
        report.skipped = "word length 0"
        return report
    if s1.algebra is None or s2.algebra is None:
        report.skipped = "no element arithmetic for this scheme"
        return report
    if not A.is_tabled:
        report.skipped = f"G3 has more than {A.budget.max_order} elements"
        return report
    M = A.G3
    c1 = A.j1.images(e1.c)
    c2 = A.j2.images(e2.c)
    b = [A.j1.map[e1.j0.map[g]] for g in sorted(generating_sequence(G))]
    alg1 = s1.algebra(M, A.j1.images(e1.j0.images(e1.params)))
    alg2 = s2.algebra(M, A.j2.images(e2.j0.images(e2.params)))
    worlds = [
        (lambda x, y: M.rows[x][y], lambda x: M.inverse[x], 0, list(c1) + list(c2) + b),
        (alg1.mul, alg1.inv, alg1.identity, list(alg1.outputs) + [alg1.embed(x) for x in c2] + [alg1.embed(x) for x in b]),
        (alg2.mul, alg2.inv, alg2.identity, [alg2.embed(x) for x in c1] + list(alg2.outputs) + [alg2.embed(x) for x in b]),
    ]
    n_slots = len(worlds[0][3])
    letters = [(s, e) for s in range(n_slots) for e in (1, -1)]
    values = [[(w[3][s] if e > 0 else w[1](w[3][s])) for s, e in letters] for w in worlds]
    names = [f"z1_{i}" for i in range(len(c1))] + [f"z2_{i}" for i in range(len(c2))] + \
        [f"b{i}" for i in range(len(b))]

    def visit(word, cur):
        for li, (s, e) in enumerate(letters):
            if word and word[-1] == (s, -e):
                continue
            nxt = [worlds[k][0](cur[k], values[k][li]) for k in range(3)]
            w = word + [(s, e)]
            report.words += 1
            alpha = nxt[0] == worlds[0][2]
            beta = nxt[1] == worlds[1][2] and nxt[2] == worlds[2][2]
            if alpha != beta and len(report.violations) < 10:
                report.violations.append(" ".join(names[x] + ("^-1" if y < 0 else "") for x, y in w))
            if len(w) < word_len:
                visit(w, nxt)

    visit([], [w[2] for w in worlds])
    return report


def cp_set(s: Scheme, emb: Embedding) -> list[int]:
    """First coordinates of tuples of ``G2`` realizing ``q_t(G1)`` for some ``t`` with scheme ``s``."""
    G1, G2 = emb.source, emb.target
    found = set()
    for a in s.parameter_tuples(G1):
        q = s.q_type(G1, a)
        for c in itertools.product(range(G2.order), repeat=s.n):
            if c[0] not in found and tp_bs(G2, c, emb.map) == q:
                found.add(c[0])
    return sorted(found)
