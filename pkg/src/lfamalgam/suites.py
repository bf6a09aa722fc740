"""Named check suites over the bundled corpus, emitting one record per check.

Records are plain dicts serialised as sorted-key JSON lines.  Wall times are
kept beside the records, not inside them, so that two runs with the same
seed and flags produce identical report bytes.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .amalgam import Budget, commuting_characterization, stable_amalgam, check_c6_bound, verify_nf_laws
from .closure import (
    certify_ec,
    chain_limit_probe,
    closure_chain,
    cross_embeddings,
    hall_chain,
    z2_diagonal_chain,
)
from .errors import BudgetExceeded, LfAmalgamError, SymmetryCheckFailed, UnknownSuite
from .group import (
    Embedding,
    FiniteGroup,
    Subgroup,
    automorphisms,
    enumerate_embeddings,
    generated_subgroup,
    random_relabel,
    trivial_group,
    trivial_subgroup,
)
from .io import load_corpus
from .qf_types import does_not_split, tp_bs
from .schemes import DefEntry, apply_cg, apply_gl, cg_clauses, get_scheme, gl_clauses, otimes_apply

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    m_max: int = 2
    term_budget: int = 6
    budget: Budget = Budget()
    max_base: int = 4
    max_side: int = 8
    commuting_max_order: int = 200
    otimes_max_order: int = 6
    ec_bound: int = 4
    ec_steps: int = 4


@dataclass
class SuiteReport:
    name: str
    records: list = field(default_factory=list)
    wall: list = field(default_factory=list)

    def add(self, law: str, ref: str, instance: str, verdict: str, witness=None, seconds: float = 0.0) -> dict:
        rec = {
            "id": f"{self.name}/{len(self.records):05d}",
            "law": law,
            "ref": ref,
            "instance": instance,
            "verdict": verdict,
            "witness": witness,
        }
        self.records.append(rec)
        self.wall.append(seconds)
        return rec

    @property
    def failures(self) -> list[dict]:
        return [r for r in self.records if r["verdict"] == FAIL]

    @property
    def passed(self) -> bool:
        return not self.failures

    def lines(self, timings: bool = False) -> Iterator[str]:
        for rec, t in zip(self.records, self.wall):
            if timings:
                rec = dict(rec, wall_s=round(t, 4))
            yield json.dumps(rec, sort_keys=True)

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIP: 0}
        for r in self.records:
            out[r["verdict"]] += 1
        return out


# --- configurations -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Config:
    G0: FiniteGroup
    G1: FiniteGroup
    G2: FiniteGroup
    emb1: Embedding
    emb2: Embedding

    @property
    def label(self) -> str:
        return (f"{self.G0.name} -> {self.G1.name}{list(self.emb1.map)}, "
                f"{self.G2.name}{list(self.emb2.map)}")


def amalgam_configurations(corpus, max_base: int = 4, max_side: int = 8) -> Iterator[Config]:
    """Every ``(G0, G1, G2, emb1, emb2)`` up to automorphisms of all three groups.

    Two configurations are identified when they differ by automorphisms of
    ``G1`` and ``G2`` and a common reparametrisation of ``G0``.
    """
    auts = {}

    def aut(G):
        if id(G) not in auts:
            auts[id(G)] = (G, automorphisms(G))
        return auts[id(G)][1]

    for G0 in corpus:
        if G0.order > max_base:
            continue
        a0 = aut(G0)
        for G1 in corpus:
            if G1.order > max_side or G1.order % G0.order:
                continue
            e1s = enumerate_embeddings(G0, G1)
            c1 = {e.map: min(tuple(a.map[v] for v in e.map) for a in aut(G1)) for e in e1s}
            for G2 in corpus:
                if G2.order > max_side or G2.order % G0.order:
                    continue
                e2s = enumerate_embeddings(G0, G2)
                c2 = {e.map: min(tuple(a.map[v] for v in e.map) for a in aut(G2)) for e in e2s}
                keys = set()
                for e1 in e1s:
                    for e2 in e2s:
                        k = min((c1[tuple(e1.map[v] for v in b.map)], c2[tuple(e2.map[v] for v in b.map)])
                                for b in a0)
                        if k in keys:
                            continue
                        keys.add(k)
                        yield Config(G0, G1, G2, e1, e2)


# --- the suites --------------------------------------------------------------------------


def _timed(fn: Callable):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def suite_amalgam_laws(report: SuiteReport, corpus, cfg: SuiteConfig) -> None:
    for conf in amalgam_configurations(corpus, cfg.max_base, cfg.max_side):
        t = time.perf_counter()
        A = stable_amalgam(conf.G0, conf.G1, conf.G2, conf.emb1, conf.emb2, budget=cfg.budget)
        results = verify_nf_laws(A, cfg.seed) + [check_c6_bound(A)]
        dt = (time.perf_counter() - t) / len(results)
        for r in results:
            report.add(r.law, r.ref, conf.label, PASS if r.passed else FAIL,
                       None if r.passed else r.detail, dt)


def suite_commuting(report: SuiteReport, corpus, cfg: SuiteConfig) -> None:
    for conf in amalgam_configurations(corpus, cfg.max_base, cfg.max_side):
        t = time.perf_counter()
        A = stable_amalgam(conf.G0, conf.G1, conf.G2, conf.emb1, conf.emb2, budget=cfg.budget)
        if not A.is_tabled or A.order > cfg.commuting_max_order:
            continue
        base1, base2 = set(conf.emb1.map), set(conf.emb2.map)
        pairs = mismatch = 0
        first = None
        for a in range(conf.G1.order):
            if a in base1:
                continue
            for b in range(conf.G2.order):
                if b in base2:
                    continue
                v = commuting_characterization(A, a, b)
                pairs += 1
                if v.mismatch:
                    mismatch += 1
                    first = first or f"a={a} b={b} commute={v.commute} predicted={v.predicted}"
        report.add("commuting_characterization", "c70", f"{conf.label} |G3|={A.order} pairs={pairs}",
                   FAIL if mismatch else PASS, first, time.perf_counter() - t)


def _split_record(report, instance, H, c, base_members, K_members, m_max, t0):
    G = Subgroup(H, tuple(sorted(base_members)))
    K = Subgroup(H, tuple(sorted(K_members)))
    res = does_not_split(H, c, G, K, m_max)
    report.add("does_not_split", "a15(3)", instance, PASS if res is True else FAIL,
               None if res is True else f"m={res.m} b1={res.b1} b2={res.b2}: {res.reason}",
               time.perf_counter() - t0)


def suite_schemes(report: SuiteReport, corpus, cfg: SuiteConfig) -> None:
    for G in corpus:
        t = time.perf_counter()
        try:
            H, a, j0 = apply_cg(G, max_order=cfg.budget.max_order)
        except LfAmalgamError as exc:
            report.add("cg_postconditions", "c52(1)", f"cg over {G.name}", FAIL, str(exc), time.perf_counter() - t)
            continue
        bad = [k for k, ok in cg_clauses(H, j0, a).items() if not ok]
        report.add("cg_postconditions", "c52(1)", f"cg over {G.name} |H|={H.order}", FAIL if bad else PASS,
                   "; ".join(bad) or None, time.perf_counter() - t)
        t = time.perf_counter()
        _split_record(report, f"cg over {G.name}", H, (a,), j0.map, (0,), cfg.m_max, t)
    gl_groups = [G for G in corpus if G.name in ("Z2", "S3", "Z2xZ2")]
    for G in gl_groups:
        for x in range(G.order):
            if G.orders[x] != 2:
                continue
            t = time.perf_counter()
            inst = f"gl over {G.name} a={x}"
            try:
                H, c, j0 = apply_gl(G, x, max_order=cfg.budget.max_order)
            except LfAmalgamError as exc:
                report.add("gl_postconditions", "c52(3)", inst, FAIL, str(exc), time.perf_counter() - t)
                continue
            bad = [k for k, ok in gl_clauses(G, H, j0, x, c).items() if not ok]
            report.add("gl_postconditions", "c52(3)", f"{inst} |H|={H.order}", FAIL if bad else PASS,
                       "; ".join(bad) or None, time.perf_counter() - t)
            t = time.perf_counter()
            _split_record(report, inst, H, c, j0.map, generated_subgroup(H, (j0.map[x],)).members, cfg.m_max, t)
    names = ("cg", "ab2", "ab3")
    for G in corpus:
        if G.order > cfg.otimes_max_order:
            continue
        for s1, s2 in itertools.combinations_with_replacement(names, 2):
            t = time.perf_counter()
            inst = f"{s1} x {s2} over {G.name}"
            try:
                r = otimes_apply(DefEntry(get_scheme(s1)), DefEntry(get_scheme(s2)), G,
                                 word_len=cfg.term_budget, budget=cfg.budget)
            except SymmetryCheckFailed as exc:
                report.add("otimes_symmetry", "a59(4)", inst, FAIL, str(exc), time.perf_counter() - t)
                continue
            except BudgetExceeded as exc:
                report.add("otimes_symmetry", "a59(4)", inst, FAIL, f"budget: {exc}", time.perf_counter() - t)
                continue
            A = r.amalgam
            how = "canonical types" if r.joint_type is not None else "marked generator isomorphism"
            report.add("otimes_symmetry", "a59(4)", f"{inst} family={A.family} by {how}",
                       PASS if r.symmetric else FAIL, None, time.perf_counter() - t)
            sw = r.sweep
            if sw.skipped:
                report.add("boxplus_sweep", "a55(2)", inst, SKIP, sw.skipped, 0.0)
            else:
                report.add("boxplus_sweep", "a55(2)", f"{inst} words={sw.words}", FAIL if sw.violations else PASS,
                           sw.violations[0] if sw.violations else None, 0.0)


def suite_closure(report: SuiteReport, corpus, cfg: SuiteConfig) -> None:
    b = cfg.ec_bound
    T = trivial_group()
    hall, dt = _timed(lambda: hall_chain(T, cfg.ec_steps, b, cfg.budget))
    orders = [G.order for G in hall.stages]
    rep = certify_ec(hall, b, corpus)
    report.add("ec_certify_hall", "z1(2)", f"{cfg.ec_steps} hall steps at b={b} orders={orders}",
               PASS if rep.verdict else FAIL, _ec_witness(rep), dt)
    t = time.perf_counter()
    ok = hall.replay_matches(cfg.budget)
    report.add("replay_determinism", "a37(1)", "hall chain", PASS if ok else FAIL, None, time.perf_counter() - t)
    osc, dt = _timed(lambda: closure_chain(T, cfg.ec_steps, ["cg", "ab2", "ab3"], 1, cfg.budget))
    orders = [G.order for G in osc.stages]
    note = "" if len(osc) == cfg.ec_steps + 1 else f" (stopped: stage {len(osc)} exceeds the table budget)"
    rep = certify_ec(osc, b, corpus)
    report.add("ec_certify_closure", "a25(2)", f"one-step closures cg,ab2,ab3 at b={b} orders={orders}{note}",
               PASS if rep.verdict and not note else FAIL, _ec_witness(rep) or (note.strip() or None), dt)
    t = time.perf_counter()
    ab = cross_embeddings(hall, osc, max_order=64)
    ba = cross_embeddings(osc, hall, max_order=64)
    early = [(i, j) for i, j in ab if i <= 1] + [(i, j) for i, j in ba if i <= 1]
    missing = [f"hall {i}" for i, j in ab if i <= 1 and j is None] + [f"closure {i}" for i, j in ba if i <= 1 and j is None]
    report.add("cross_embedding", "sec0.1", f"stages 0-1 of each chain ({len(early)} checks)",
               FAIL if missing else PASS, ("no embedding for " + ", ".join(missing)) if missing else None,
               time.perf_counter() - t)
    t = time.perf_counter()
    chain, probe = z2_diagonal_chain(6)
    pr = chain_limit_probe(chain, probe, cfg.term_budget)
    report.add("chain_limit_probe", "c64(1)", f"Z2^n diagonal, {len(chain)} stages, words <= {cfg.term_budget}",
               PASS if pr.passed else FAIL, None if pr.passed else str(pr.violation), time.perf_counter() - t)


def _ec_witness(rep) -> str | None:
    f = rep.failures
    if not f:
        return None
    e = f[0]
    return f"{len(f)} failures; first: stage {e.stage}, pair {e.pair}, f={list(e.f)}"


def suite_types(report: SuiteReport, corpus, cfg: SuiteConfig) -> None:
    rng = random.Random(cfg.seed)
    for G in corpus:
        t = time.perf_counter()
        H, f = random_relabel(G, rng)
        bad = []
        for x in range(G.order):
            if tp_bs(G, (x,)) != tp_bs(H, (f.map[x],)):
                bad.append(f"x={x} over empty base")
            if tp_bs(G, (x,), tuple(range(G.order))) != tp_bs(H, (f.map[x],), f.map):
                bad.append(f"x={x} over G")
        report.add("type_relabel_invariance", "a2(1)", G.name, FAIL if bad else PASS, bad[0] if bad else None,
                   time.perf_counter() - t)
        t = time.perf_counter()
        bad = []
        for x in range(G.order):
            full = tp_bs(G, (x,), tuple(range(G.order)))
            if full.restrict(base_positions=()) != tp_bs(G, (x,)):
                bad.append(str(x))
        report.add("type_restriction", "a5(2)", G.name, FAIL if bad else PASS, bad[0] if bad else None,
                   time.perf_counter() - t)
    for conf in amalgam_configurations(corpus, cfg.max_base, cfg.max_side):
        if conf.G0.order == conf.G1.order or conf.G0.order == conf.G2.order:
            continue
        t = time.perf_counter()
        A = stable_amalgam(conf.G0, conf.G1, conf.G2, conf.emb1, conf.emb2, budget=cfg.budget)
        if not A.is_tabled or A.order > 64:
            continue
        G3 = A.G3
        side1 = A.j1.map
        base = A.j0.map
        witness = None
        for a in range(conf.G2.order):
            if a in set(conf.emb2.map):
                continue
            res = does_not_split(G3, (A.j2.map[a],), Subgroup(G3, tuple(sorted(side1))),
                                 Subgroup(G3, tuple(sorted(base))), cfg.m_max, explain=False)
            if res is not True:
                witness = f"a={a} m={res.m} b1={res.b1} b2={res.b2}"
                break
        report.add("amalgam_does_not_split", "c14(4)", f"{conf.label} |G3|={A.order}",
                   FAIL if witness else PASS, witness, time.perf_counter() - t)


SUITES = {
    "amalgam-laws": suite_amalgam_laws,
    "commuting": suite_commuting,
    "schemes": suite_schemes,
    "closure": suite_closure,
    "types": suite_types,
}


def run_suite(name: str, corpus_path=None, config: SuiteConfig = SuiteConfig()) -> SuiteReport:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    corpus = load_corpus(corpus_path)
    report = SuiteReport(name)
    SUITES[name](report, corpus, config)
    return report
