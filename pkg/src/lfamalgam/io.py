"""The ``mtable`` text format and the bundled corpus of small groups.

``mtable <n>`` on the first significant line, then ``n`` rows of ``n``
indices; lines starting with ``#`` are comments.
"""

from __future__ import annotations

import os
from pathlib import Path

from .errors import CorpusLoadError, LfAmalgamError, ParseError
from .group import Embedding, FiniteGroup, validate_table

CORPUS_DIR = Path(__file__).with_name("corpus")

# corpus order: by group order, then by this list
CORPUS_NAMES = ("Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "S3", "Z7", "Z8", "Z2xZ4", "Z2xZ2xZ2", "D8", "Q8")


def parse_group_text(text: str, name: str = "") -> FiniteGroup:
    rows: list[list[int]] = []
    n = None
    header_line = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "mtable":
                raise ParseError("expected header 'mtable <n>'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"order {parts[1]!r} is not an integer", lineno) from None
            if n < 1:
                raise ParseError("order must be positive", lineno)
            header_line = lineno
            continue
        if len(rows) == n:
            raise ParseError(f"more than {n} rows", lineno)
        if len(parts) != n:
            raise ParseError(f"row has {len(parts)} entries, expected {n}", lineno)
        try:
            rows.append([int(p, 10) for p in parts])
        except ValueError:
            raise ParseError("entries must be base-10 integers", lineno) from None
    if n is None:
        raise ParseError("missing 'mtable' header", 1)
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, found {len(rows)}", header_line)
    return validate_table(rows, name=name)


def parse_group_file(path) -> FiniteGroup:
    path = Path(path)
    return parse_group_text(path.read_text(), name=path.stem)


def format_group(G: FiniteGroup, comment: str = "") -> str:
    lines = [f"# {c}" for c in comment.splitlines()] if comment else []
    lines.append(f"mtable {G.order}")
    lines.extend(" ".join(map(str, row)) for row in G.rows)
    return "\n".join(lines) + "\n"


def write_group_file(path, G: FiniteGroup, comment: str = "") -> None:
    Path(path).write_text(format_group(G, comment))


def format_embedding(label: str, emb: Embedding) -> str:
    return f"{label}: " + " ".join(map(str, emb.map))


def load_corpus(path=None) -> list[FiniteGroup]:
    """Every ``*.mtable`` in ``path`` (default: the bundled corpus), ordered by group order."""
    root = Path(path) if path is not None else CORPUS_DIR
    if not root.is_dir():
        raise CorpusLoadError(root, "not a directory")
    files = sorted(root.glob("*.mtable"))
    if not files:
        raise CorpusLoadError(root, "no .mtable files")
    groups = []
    for f in files:
        try:
            groups.append(parse_group_file(f))
        except (LfAmalgamError, OSError) as exc:
            raise CorpusLoadError(f, exc) from exc
    rank = {name: i for i, name in enumerate(CORPUS_NAMES)}
    groups.sort(key=lambda G: (G.order, rank.get(G.name, len(rank)), G.name))
    return groups


def corpus_group(name: str, path=None) -> FiniteGroup:
    for G in load_corpus(path):
        if G.name == name:
            return G
    raise KeyError(name)


def build_corpus() -> list[FiniteGroup]:
    """The 14 groups of order at most 8, from the standard constructions."""
    from .group import cyclic, dihedral, direct_product, quaternion, symmetric, trivial_group

    Z2, Z4 = cyclic(2), cyclic(4)
    V = direct_product(Z2, Z2)[0]
    out = [trivial_group(), Z2, cyclic(3), Z4, V, cyclic(5), cyclic(6), symmetric(3), cyclic(7), cyclic(8),
           direct_product(Z2, Z4)[0], direct_product(V, Z2)[0], dihedral(4), quaternion()]
    return [FiniteGroup(G.table, name=n) for G, n in zip(out, CORPUS_NAMES)]


def write_corpus(path=None) -> None:
    root = Path(path) if path is not None else CORPUS_DIR
    os.makedirs(root, exist_ok=True)
    for G in build_corpus():
        write_group_file(root / f"{G.name}.mtable", G)
