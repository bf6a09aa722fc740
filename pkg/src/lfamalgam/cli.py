"""Command-line interface.

Groups are given either as a path to an ``mtable`` file or as the name of a
bundled corpus group (``Z4``, ``S3``, ``Z2xZ2`` ...).  Index lists are
comma-separated.  Exit status: 0 when everything passes, 1 on a law
failure, 2 on bad input.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import io as mio
from .amalgam import Budget, count_tries, enumerate_tries, stable_amalgam, try_family, verify_nf_laws
from .closure import (
    StageChain,
    certify_ec,
    chain_limit_probe,
    closure_chain,
    hall_chain,
    z2_diagonal_chain,
)
from .errors import LfAmalgamError
from .group import Embedding, FiniteGroup, check_embedding, generated_subgroup, trivial_subgroup
from .nf3 import Nf3Request, nf3_amalgam
from .perm import format_permutation
from .qf_types import does_not_split, tp_bs, types_equal
from .schemes import apply_ab, apply_ab_k, apply_cg, apply_gl, apply_gm
from .suites import SUITES, SuiteConfig, run_suite


def load_group(spec: str) -> FiniteGroup:
    p = Path(spec)
    if p.exists():
        return mio.parse_group_file(p)
    try:
        return mio.corpus_group(spec)
    except KeyError:
        raise click.BadParameter(f"{spec!r} is neither a file nor a corpus group") from None


def indices(text: str | None) -> tuple[int, ...]:
    if text is None or text.strip() in ("", "-"):
        return ()
    try:
        return tuple(int(v) for v in text.replace(" ", "").split(","))
    except ValueError:
        raise click.BadParameter(f"{text!r} is not a comma-separated index list") from None


def embedding(K: FiniteGroup, G: FiniteGroup, text: str | None) -> Embedding:
    if text is None:
        if K.order != 1:
            raise click.BadParameter("an embedding map is required unless the base is trivial")
        return Embedding(K, G, (0,))
    m = indices(text)
    check_embedding(K, G, m)
    return Embedding(K, G, m)


def budget_from(ctx) -> Budget:
    o = ctx.obj or {}
    b = Budget()
    return Budget(triples=o.get("triples") or b.triples, product=o.get("product") or b.product,
                  max_order=b.max_order, max_tries=b.max_tries, side_sample=b.side_sample,
                  seed=o.get("seed", b.seed))


def emit(ctx, lines) -> None:
    out = (ctx.obj or {}).get("out")
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).mkdir(parents=True, exist_ok=True)
        name = ctx.command_path.replace(" ", "_") + ".txt"
        (Path(out) / name).write_text(text)
    click.echo(text, nl=False)


class Main(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except LfAmalgamError as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            ctx.exit(exc.exit_code)


@click.group(cls=Main)
@click.option("--budget-triples", type=int, default=None, help="Triple-space ceiling per try.")
@click.option("--budget-product", type=int, default=None, help="Ceiling on total permutation degree.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Also write output into this directory.")
@click.pass_context
def main(ctx, budget_triples, budget_product, seed, out):
    """Finite group amalgamation toolkit."""
    ctx.obj = {"triples": budget_triples, "product": budget_product, "seed": seed, "out": out}


# --- group -------------------------------------------------------------------------


@main.group()
def group():
    """Inspect group tables."""


@group.command("check")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def group_check(path):
    G = mio.parse_group_file(path)
    click.echo(f"ok: order {G.order}, {'abelian' if G.is_abelian else 'non-abelian'}")


@group.command("show")
@click.argument("group_spec")
@click.pass_context
def group_show(ctx, group_spec):
    G = load_group(group_spec)
    lines = mio.format_group(G, comment=G.name).rstrip("\n").split("\n")
    lines.append("orders: " + " ".join(map(str, G.orders)))
    emit(ctx, lines)


# --- types ------------------------------------------------------------------------------


def _type_lines(q) -> list[str]:
    lines = mio.format_group(q.group()).rstrip("\n").split("\n")
    lines.append("base: " + " ".join(map(str, q.base_pos)))
    lines.append("tuple: " + " ".join(map(str, q.tuple_pos)))
    return lines


@main.group("type")
def type_():
    """Quantifier-free types."""


@type_.command("compute")
@click.argument("group_spec")
@click.option("--tuple", "tup", required=True, help="Tuple indices, e.g. 1,2.")
@click.option("--base", default=None, help="Parameter indices (default: none).")
@click.pass_context
def type_compute(ctx, group_spec, tup, base):
    H = load_group(group_spec)
    emit(ctx, _type_lines(tp_bs(H, indices(tup), indices(base))))


@type_.command("equal")
@click.argument("group_spec")
@click.option("--tuple", "tup", required=True)
@click.option("--other", required=True, help="Second tuple in the same group.")
@click.option("--base", default=None)
@click.pass_context
def type_equal(ctx, group_spec, tup, other, base):
    H = load_group(group_spec)
    A = indices(base)
    emit(ctx, [str(types_equal(tp_bs(H, indices(tup), A), tp_bs(H, indices(other), A))).lower()])


@main.group()
def split():
    """Splitting of types."""


@split.command("check")
@click.argument("group_spec")
@click.option("--tuple", "tup", required=True)
@click.option("--sub", "sub", required=True, help="Generators of G inside H.")
@click.option("--over", default=None, help="Generators of K inside G (default: trivial).")
@click.option("--m-max", type=int, default=2, show_default=True)
@click.pass_context
def split_check(ctx, group_spec, tup, sub, over, m_max):
    H = load_group(group_spec)
    G = generated_subgroup(H, indices(sub))
    K = generated_subgroup(H, indices(over)) if over else trivial_subgroup(H)
    res = does_not_split(H, indices(tup), G, K, m_max)
    if res is True:
        emit(ctx, ["does not split"])
    else:
        emit(ctx, [f"splits: m={res.m} b1={list(res.b1)} b2={list(res.b2)}", f"reason: {res.reason}"])


# --- amalgam and tries ------------------------------------------------------------------------------


def _amalgam_args(f):
    f = click.option("--emb2", default=None, help="Image of G0 in G2, in G0 index order.")(f)
    f = click.option("--emb1", default=None, help="Image of G0 in G1, in G0 index order.")(f)
    f = click.argument("g2")(f)
    f = click.argument("g1")(f)
    f = click.argument("g0")(f)
    return f


def _load_amalgam_args(g0, g1, g2, emb1, emb2):
    G0, G1, G2 = load_group(g0), load_group(g1), load_group(g2)
    return G0, G1, G2, embedding(G0, G1, emb1), embedding(G0, G2, emb2)


@main.group()
def amalgam():
    """Stable amalgams."""


@amalgam.command("run")
@_amalgam_args
@click.pass_context
def amalgam_run(ctx, g0, g1, g2, emb1, emb2):
    args = _load_amalgam_args(g0, g1, g2, emb1, emb2)
    A = stable_amalgam(*args, budget=budget_from(ctx))
    lines = [f"# tries {A.n_tries} ({A.family}), distinct actions {A.n_blocks}, degree {A.degree}"]
    if A.is_tabled:
        lines += mio.format_group(A.G3).rstrip("\n").split("\n")
        lines += [mio.format_embedding("j1", A.j1), mio.format_embedding("j2", A.j2)]
    else:
        lines.append(f"order {A.order} (too large to table)")
    emit(ctx, lines)


@amalgam.command("laws")
@_amalgam_args
@click.pass_context
def amalgam_laws(ctx, g0, g1, g2, emb1, emb2):
    args = _load_amalgam_args(g0, g1, g2, emb1, emb2)
    b = budget_from(ctx)
    A = stable_amalgam(*args, budget=b)
    results = verify_nf_laws(A, b.seed)
    emit(ctx, [json.dumps({"law": r.law, "ref": r.ref, "verdict": "PASS" if r.passed else "FAIL",
                           "detail": r.detail}, sort_keys=True) for r in results])
    if not all(r.passed for r in results):
        ctx.exit(1)


@main.group()
def tries():
    """Amalgamation tries."""


@tries.command("list")
@_amalgam_args
@click.option("--limit", type=int, default=20, show_default=True)
@click.option("--perms", is_flag=True, help="Also print the generator actions in cycle notation.")
@click.pass_context
def tries_list(ctx, g0, g1, g2, emb1, emb2, limit, perms):
    args = _load_amalgam_args(g0, g1, g2, emb1, emb2)
    lines = [f"# {count_tries(*args)} tries"]
    for k, x in enumerate(enumerate_tries(*args)):
        if k >= limit:
            break
        lines.append(_try_line(x, perms))
    emit(ctx, lines)


def _try_line(x, perms: bool) -> str:
    line = f"I1={list(x.I1)} I2={list(x.I2)}"
    if perms:
        from .amalgam import TripleSpace, generator_lists

        U = TripleSpace(x)
        g1, g2 = generator_lists(x.G1, x.G2)
        acts = [f"j1({g})={format_permutation(U.action(1, g))}" for g in g1]
        acts += [f"j2({g})={format_permutation(U.action(2, g))}" for g in g2]
        line += " " + " ".join(acts)
    return line


@tries.command("sample")
@_amalgam_args
@click.option("--seed", type=int, default=None, help="Defaults to the global --seed.")
@click.option("--count", type=int, default=8, show_default=True)
@click.pass_context
def tries_sample(ctx, g0, g1, g2, emb1, emb2, seed, count):
    args = _load_amalgam_args(g0, g1, g2, emb1, emb2)
    if seed is None:
        seed = (ctx.obj or {}).get("seed", 0)
    emit(ctx, [_try_line(x, False) for x in enumerate_tries(*args, sample=(seed, count))])


# --- nf3 ------------------------------------------------------------------------------------------


@main.group()
def nf3():
    """Amalgamation keeping a subgroup commuting."""


@nf3.command("run")
@_amalgam_args
@click.option("--L", "L", default=None, help="Generators of L inside G1 (default: the centraliser of G0; needs a centreless G0).")
@click.option("--H0", "H0", default=None, help="Generators of H0 inside G0 (default: trivial).")
@click.option("--cross-check", is_flag=True)
@click.pass_context
def nf3_run(ctx, g0, g1, g2, emb1, emb2, L, H0, cross_check):
    from .group import centralizer

    G0, G1, G2, e1, e2 = _load_amalgam_args(g0, g1, g2, emb1, emb2)
    Lsub = generated_subgroup(G1, indices(L)) if L else centralizer(G1, e1.map)
    Hsub = generated_subgroup(G0, indices(H0)) if H0 else trivial_subgroup(G0)
    res = nf3_amalgam(Nf3Request(G0, G1, G2, e1, e2, Lsub, Hsub), budget_from(ctx), cross_check)
    A = res.amalgam
    lines = [f"# family {res.family}, tries {A.n_tries}, commuting pairs checked {res.commuting_pairs}"]
    if cross_check:
        lines.append(f"# cross-check against all qualifying tries: {res.cross_check}")
    if A.is_tabled:
        lines += mio.format_group(A.G3).rstrip("\n").split("\n")
        lines += [mio.format_embedding("j1", A.j1), mio.format_embedding("j2", A.j2)]
    else:
        lines.append(f"order {A.order} (too large to table)")
    emit(ctx, lines)


# --- schemes --------------------------------------------------------------------------------------


@main.group()
def scheme():
    """Scheme constructions."""


@scheme.command("apply")
@click.argument("which", type=click.Choice(["cg", "gl", "ab", "gm"]))
@click.argument("group_spec")
@click.option("--a", "a", type=int, default=None, help="gl: the involution parameter.")
@click.option("--k", type=int, default=None, help="ab: adjoin a central cyclic group of this order.")
@click.option("--K", "K", default=None, help="ab: adjoin this group, listed in index order.")
@click.option("--a1", default=None, help="gm: first tuple.")
@click.option("--a2", default=None, help="gm: second tuple.")
@click.pass_context
def scheme_apply(ctx, which, group_spec, a, k, K, a1, a2):
    G = load_group(group_spec)
    if which == "cg":
        H, x, j0 = apply_cg(G)
        c = (x,)
    elif which == "gl":
        if a is None:
            raise click.BadParameter("gl needs --a")
        H, c, j0 = apply_gl(G, a)
    elif which == "ab":
        if K is not None:
            H, c, j0 = apply_ab(G, load_group(K))
        else:
            H, c, j0 = apply_ab_k(G, k or 2)
    else:
        H, x, j0 = apply_gm(G, indices(a1), indices(a2), budget_from(ctx))
        c = (x,)
    lines = mio.format_group(H).rstrip("\n").split("\n")
    lines += [mio.format_embedding("j0", j0), "c: " + " ".join(map(str, c))]
    emit(ctx, lines)


# --- closure ------------------------------------------------------------------------------------------


@main.group()
def closure():
    """Approximate existentially closed groups."""


@closure.command("run")
@click.option("--steps", type=int, default=4, show_default=True)
@click.option("--bound", "b", type=int, default=4, show_default=True)
@click.option("--strategy", type=click.Choice(["hall", "schemes"]), default="hall", show_default=True)
@click.option("--start", default="Z1", show_default=True)
@click.option("--chain", "chain_dir", type=click.Path(file_okay=False), default=None,
              help="Save the chain here (default: <out>/chain when --out is given).")
@click.pass_context
def closure_run(ctx, steps, b, strategy, start, chain_dir):
    G = load_group(start)
    if strategy == "hall":
        chain = hall_chain(G, steps, b, budget_from(ctx))
    else:
        chain = closure_chain(G, steps, ["cg", "ab2", "ab3"], 1, budget_from(ctx))
    out = chain_dir or ((ctx.obj or {}).get("out") and str(Path(ctx.obj["out"]) / "chain"))
    if out:
        chain.save(out)
    lines = [f"stage {k}: order {S.order} via {op} {' '.join(map(str, p))}".rstrip()
             for k, (S, (op, p)) in enumerate(zip(chain.stages, chain.provenance))]
    emit(ctx, lines)


@closure.command("certify")
@click.option("--bound", "b", type=int, default=4, show_default=True)
@click.option("--chain", "chain_dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--margin", type=int, default=0, show_default=True, help="Final stages left out of the verdict.")
@click.pass_context
def closure_certify(ctx, b, chain_dir, margin):
    chain = StageChain.load(chain_dir)
    rep = certify_ec(chain, b, margin=margin)
    lines = [json.dumps({"stage": e.stage, "pair": e.pair, "f": list(e.f), "repaired_at": e.repaired_at})
             for e in rep.entries]
    lines.append(f"verdict: {'PASS' if rep.verdict else 'FAIL'}")
    emit(ctx, lines)
    if not rep.verdict:
        ctx.exit(1)


@closure.command("probe")
@click.option("--length", type=int, default=6, show_default=True, help="Stages of the Z2^n chain.")
@click.option("--term-budget", type=int, default=6, show_default=True)
@click.pass_context
def closure_probe(ctx, length, term_budget):
    chain, probe = z2_diagonal_chain(length)
    rep = chain_limit_probe(chain, probe, term_budget)
    lines = [f"n={n} m={m}: {v} states" for n, m, v in rep.checked]
    lines.append("PASS" if rep.passed else f"FAIL: {rep.violation}")
    emit(ctx, lines)
    if not rep.passed:
        ctx.exit(1)


# --- suites ---------------------------------------------------------------------------------------------


@main.group()
def suite():
    """Run a named check suite."""


@suite.command("run")
@click.argument("name")
@click.option("--corpus", type=click.Path(), default=None, help="Directory of .mtable files.")
@click.option("--m-max", type=int, default=2, show_default=True)
@click.option("--term-budget", type=int, default=6, show_default=True)
@click.option("--report", type=click.Path(dir_okay=False), default=None, help="JSONL report path.")
@click.option("--timings", is_flag=True, help="Add wall times to the records (breaks byte-identity).")
@click.pass_context
def suite_run(ctx, name, corpus, m_max, term_budget, report, timings):
    b = budget_from(ctx)
    cfg = SuiteConfig(seed=b.seed, m_max=m_max, term_budget=term_budget, budget=b)
    rep = run_suite(name, corpus, cfg)
    lines = list(rep.lines(timings))
    target = report or ((ctx.obj or {}).get("out") and str(Path(ctx.obj["out"]) / f"{name}.jsonl"))
    if target:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        Path(target).write_text("\n".join(lines) + "\n")
    else:
        for line in lines:
            click.echo(line)
    c = rep.counts()
    click.echo(f"{name}: {c['PASS']} pass, {c['FAIL']} fail, {c['SKIP']} skipped", err=True)
    if not rep.passed:
        ctx.exit(1)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
