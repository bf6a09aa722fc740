"""Amalgamation that keeps a designated subgroup commuting.

Given ``L <= Cm_G1(G0)`` with ``L n G0 = {e}`` and ``H0 <= G0``, the tries
built here make ``j1(<H0 u L>)`` commute with ``j2(Cm_G2(H0))`` in every
generated group, hence in the amalgam over the whole family.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .amalgam import AmalgamTry, Budget, StableAmalgam, stable_amalgam
from .errors import InvariantViolation, NotASubgroup
from .group import (
    Embedding,
    FiniteGroup,
    Subgroup,
    as_subgroup,
    centralizer,
    commute_setwise,
    generated_subgroup,
    intersection,
    left_cosets,
    trivial_subgroup,
)
from .perm import generator_map_is_isomorphism


@dataclass
class Nf3Request:
    G0: FiniteGroup
    G1: FiniteGroup
    G2: FiniteGroup
    emb1: Embedding
    emb2: Embedding
    L: Subgroup
    H0: Subgroup = None
    H1: Subgroup = field(init=False)
    H2: Subgroup = field(init=False)
    H1_plus: Subgroup = field(init=False)

    def __post_init__(self):
        if self.H0 is None:
            self.H0 = trivial_subgroup(self.G0)
        if self.L.parent != self.G1:
            raise NotASubgroup("L must be a subgroup of G1")
        if self.H0.parent != self.G0:
            raise NotASubgroup("H0 must be a subgroup of G0")
        h0_in_1 = self.emb1.images(self.H0.members)
        self.H1 = generated_subgroup(self.G1, list(h0_in_1) + list(self.L.members))
        self.H1_plus = generated_subgroup(self.G1, list(self.emb1.map) + list(self.L.members))
        self.H2 = centralizer(self.G2, self.emb2.images(self.H0.members))

    def validate(self) -> None:
        cm = centralizer(self.G1, self.emb1.map)
        if not set(self.L.members) <= set(cm.members):
            raise InvariantViolation("d39 A(d)", "L is not inside Cm_G1(G0)")
        if set(self.L.members) & set(self.emb1.map) != {0}:
            raise InvariantViolation("d39 A(d)", "L meets G0 nontrivially")
        if not set(self.H1.members) <= set(cm.members):
            raise InvariantViolation("d39 A(d)", "H1 = <H0 u L> is not inside Cm_G1(G0)")


def _h1_transversals(req: Nf3Request) -> list[tuple[int, ...]]:
    """All transversals ``J1`` of the left ``H1+`` cosets with the identity pinned."""
    blocks = left_cosets(req.G1, req.H1_plus)
    return [(0,) + combo for combo in itertools.product(*blocks[1:])]


def _side1(req: Nf3Request, J1) -> tuple[int, ...]:
    G1 = req.G1
    return tuple(sorted(G1.rows[j][b] for j in J1 for b in req.L.members))


def _h2_parts(req: Nf3Request):
    """Coset blocks of ``G0 n H2`` inside ``H2`` and the remaining ``G0`` cosets of ``G2``."""
    G2 = req.G2
    base = req.emb2.image
    meet = intersection(base, req.H2)
    inner = left_cosets(G2, meet)
    inner = [b for b in inner if b[0] in req.H2]
    covered = set()
    for b in inner:
        for g in b:
            covered.update(G2.rows[g][h] for h in base.members)
    outer = [b for b in left_cosets(G2, base) if b[0] not in covered]
    return inner, outer


def _side2_choices(req: Nf3Request):
    inner, outer = _h2_parts(req)
    for a in itertools.product(*inner[1:]):
        for b in itertools.product(*outer):
            yield tuple(sorted((0,) + a + b))


def _default_side2(req: Nf3Request) -> tuple[int, ...]:
    inner, outer = _h2_parts(req)
    return tuple(sorted([b[0] for b in inner] + [b[0] for b in outer]))


def build_commuting_transversals(req: Nf3Request) -> AmalgamTry:
    """The least-index try satisfying the commutation clauses."""
    req.validate()
    J1 = tuple(b[0] for b in left_cosets(req.G1, req.H1_plus))
    x = AmalgamTry(req.G0, req.G1, req.G2, req.emb1, req.emb2, _side1(req, J1), _default_side2(req))
    bad = [k for k, ok in d36_clauses(req, x).items() if not ok]
    if bad:
        raise InvariantViolation(f"d36 {bad[0]}", "constructed try violates the commutation clauses")
    return x


def d36_clauses(req: Nf3Request, x: AmalgamTry) -> dict[str, bool]:
    """Each hypothesis of the commutation theorem, checked separately on ``x``."""
    G1, G2 = req.G1, req.G2
    base1 = set(req.emb1.map)
    I1, I2 = set(x.I1), set(x.I2)
    H1, H2 = set(req.H1.members), set(req.H2.members)
    H0_1 = set(req.emb1.images(req.H0.members))
    H0_2 = req.emb2.images(req.H0.members)
    meet2 = set(H2) & set(req.emb2.map)
    out = {}
    out["(a) valid try"] = _is_transversal(G1, req.emb1, x.I1) and _is_transversal(G2, req.emb2, x.I2)
    out["(d) H0 = H1 n G0"] = (H1 & base1) == H0_1
    out["(e) H1 covered by I1 n H1"] = {G1.rows[b][h] for b in I1 & H1 for h in H0_1} == H1
    out["(f) I1 closed under I1 n H1"] = all(G1.rows[g][b] in I1 for g in I1 for b in I1 & H1)
    out["(g) G0 and H1 commute"] = commute_setwise(G1, base1, H1)
    out["(h) H2 commutes with H0"] = commute_setwise(G2, H2, H0_2)
    out["(i) H2 covered by I2 n H2"] = {G2.rows[b][h] for b in I2 & H2 for h in meet2} == H2
    return out


def _is_transversal(G: FiniteGroup, emb: Embedding, I) -> bool:
    blocks = left_cosets(G, emb.image)
    return 0 in I and sorted(sum(1 for g in I if g in set(b)) for b in blocks) == [1] * len(blocks)


def commuting_family(req: Nf3Request, budget: Budget = Budget()) -> tuple[str, list[AmalgamTry]]:
    """Every ``J1`` choice times every qualifying side-2 transversal (or a seeded sample)."""
    req.validate()
    S1 = [_side1(req, J1) for J1 in _h1_transversals(req)]
    S2 = list(itertools.islice(_side2_choices(req), budget.max_tries + 1))
    if len(S1) * len(S2) <= budget.max_tries:
        return "full", [AmalgamTry(req.G0, req.G1, req.G2, req.emb1, req.emb2, a, b) for a in S1 for b in S2]
    # sampling draws from the first max_tries + 1 side-2 choices in lexicographic order
    rng = random.Random(budget.seed)

    def pick(S):
        if len(S) <= budget.side_sample:
            return S
        return [S[0]] + [S[i] for i in sorted(rng.sample(range(1, len(S)), budget.side_sample - 1))]

    pick1, pick2 = pick(S1), pick(S2)
    return "sampled", [AmalgamTry(req.G0, req.G1, req.G2, req.emb1, req.emb2, a, b) for a in pick1 for b in pick2]


@dataclass
class Nf3Result:
    amalgam: StableAmalgam
    family: str
    commuting_pairs: int
    clause_failures: list
    cross_check: bool | None = None

    @property
    def certified(self) -> bool:
        return not self.clause_failures


def nf3_amalgam(req: Nf3Request, budget: Budget = Budget(), cross_check: bool = False) -> Nf3Result:
    """Amalgam over the commutation-preserving tries, with an element-wise certificate."""
    family, tries = commuting_family(req, budget)
    failures = []
    for x in tries:
        for clause, ok in d36_clauses(req, x).items():
            if not ok:
                failures.append((x.I1, x.I2, clause))
    if failures:
        raise InvariantViolation(f"d36 {failures[0][2]}", "a try of the family violates the commutation clauses")
    A = stable_amalgam(req.G0, req.G1, req.G2, req.emb1, req.emb2, budget=budget, tries=tries)
    pairs = 0
    for h1 in req.H1.members:
        p1 = A.perm(1, h1)
        for h2 in req.H2.members:
            p2 = A.perm(2, h2)
            if not np.array_equal(p2[p1], p1[p2]):
                failures.append((h1, h2))
            pairs += 1
    result = Nf3Result(A, family, pairs, failures)
    if failures:
        raise InvariantViolation("d36", f"j1({failures[0][0]}) and j2({failures[0][1]}) do not commute")
    if cross_check:
        result.cross_check = _cross_check(req, A, budget)
    return result


def _cross_check(req: Nf3Request, A: StableAmalgam, budget: Budget) -> bool:
    """Compare with the amalgam over every try satisfying the clauses (tiny inputs only)."""
    from .amalgam import enumerate_tries

    tries = [x for x in enumerate_tries(req.G0, req.G1, req.G2, req.emb1, req.emb2)
             if all(d36_clauses(req, x).values())]
    B = stable_amalgam(req.G0, req.G1, req.G2, req.emb1, req.emb2, budget=budget, tries=tries)
    return generator_map_is_isomorphism(A.generator_perms(), B.generator_perms())


def default_request(G0, G1, G2, emb1, emb2) -> Nf3Request:
    """``L = Cm_G1(G0)`` and ``H0 = {e}``, the natural case for a centreless base."""
    cm = centralizer(G1, emb1.map)
    return Nf3Request(G0, G1, G2, emb1, emb2, as_subgroup(G1, cm.members))

