"""Readers and writers: lattice JSON, Burmeister ``.cxt``, CSV, implication text, DOT."""
from __future__ import annotations

import csv
import html
import io
import json
from pathlib import Path
from typing import Iterable, Mapping

from .context import Concept, ConceptLattice, FormalContext
from .implications import Implication, ImplicationBasis
from .order import Lattice, Poset, as_lattice, make_poset

__all__ = [
    "ParseError",
    "label_to_json",
    "label_from_json",
    "label_text",
    "poset_to_json",
    "poset_from_json",
    "read_cxt",
    "write_cxt",
    "read_csv",
    "format_implications",
    "parse_implications",
    "report_to_json",
    "lattice_to_dot",
    "concept_lattice_to_dot",
]


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


def _text(source) -> str:
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    return source


# -- labels -------------------------------------------------------------------


def label_to_json(x):
    if isinstance(x, Concept):
        return {"extent": label_to_json(x.extent), "intent": label_to_json(x.intent)}
    if isinstance(x, (frozenset, set)):
        return sorted((label_to_json(v) for v in x), key=_sort_key)
    return x


def label_from_json(v):
    if isinstance(v, list):
        return frozenset(label_from_json(x) for x in v)
    if isinstance(v, dict):
        return Concept(label_from_json(v["extent"]), label_from_json(v["intent"]))
    return v


def _sort_key(v) -> str:
    return json.dumps(v, ensure_ascii=False, sort_keys=True)


def label_text(x) -> str:
    """Human-readable label, sets as ``{a, b}``."""
    if isinstance(x, (frozenset, set)):
        return "{" + ", ".join(sorted(label_text(v) for v in x)) + "}"
    return str(x)


# -- lattice JSON -------------------------------------------------------------


def poset_to_json(p: Poset) -> str:
    """``{"elements": [...], "covers": [[lo, hi], ...]}`` with sorted labels and pairs."""
    labels = [label_to_json(x) for x in p.labels]
    elements = sorted(labels, key=_sort_key)
    covers = sorted(
        ([labels[i], labels[j]] for i, j in p.cover_pairs),
        key=lambda pr: (_sort_key(pr[0]), _sort_key(pr[1])),
    )
    return json.dumps({"elements": elements, "covers": covers}, ensure_ascii=False, indent=1) + "\n"


def _poset_from_obj(obj) -> Poset:
    if not isinstance(obj, dict) or "elements" not in obj:
        raise ParseError("expected an object with 'elements' and 'covers'")
    labels = [label_from_json(x) for x in obj["elements"]]
    pairs = []
    for k, pr in enumerate(obj.get("covers", [])):
        if not isinstance(pr, list) or len(pr) != 2:
            raise ParseError(f"cover #{k} is not a [lo, hi] pair")
        pairs.append((label_from_json(pr[0]), label_from_json(pr[1])))
    try:
        return make_poset(labels, pairs)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def poset_from_json(source, *, lattice: bool = True):
    """Read a poset (a Lattice unless ``lattice=False``); raises ParseError."""
    try:
        obj = json.loads(_text(source))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    p = _poset_from_obj(obj)
    if not lattice:
        return p
    try:
        return as_lattice(p)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


# -- Burmeister .cxt ------------------------------------------------------------


def read_cxt(source) -> FormalContext:
    lines = _text(source).splitlines()

    def line(k: int) -> str:
        if k >= len(lines):
            raise ParseError("unexpected end of file", k + 1)
        return lines[k].rstrip("\r")

    if line(0).strip() != "B":
        raise ParseError("expected header 'B'", 1, 1)
    k = 2  # line 2 holds the (usually blank) context name
    try:
        ng = int(line(k).strip())
        nm = int(line(k + 1).strip())
    except ValueError as exc:
        raise ParseError("expected object and attribute counts", k + 1) from exc
    k += 2
    while k < len(lines) and not line(k).strip():
        k += 1
    objects = [line(k + i).strip() for i in range(ng)]
    k += ng
    attributes = [line(k + i).strip() for i in range(nm)]
    k += nm
    rows = []
    for i in range(ng):
        row = line(k + i).rstrip()
        if len(row) != nm:
            raise ParseError(f"row has {len(row)} cells, expected {nm}", k + i + 1, min(len(row), nm) + 1)
        cells = []
        for c, ch in enumerate(row):
            if ch not in "Xx.":
                raise ParseError(f"unexpected cell {ch!r}", k + i + 1, c + 1)
            cells.append(ch in "Xx")
        rows.append(cells)
    try:
        return FormalContext(objects, attributes, rows)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def write_cxt(K: FormalContext) -> str:
    out = ["B", "", str(len(K.objects)), str(len(K.attributes)), ""]
    out += [str(g) for g in K.objects]
    out += [str(m) for m in K.attributes]
    out += ["".join("X" if v else "." for v in row) for row in K.incidence]
    return "\n".join(out) + "\n"


# -- CSV ------------------------------------------------------------------------

_TRUE = {"1", "x", "X", "true", "True"}
_FALSE = {"0", "", "false", "False", "."}


def read_csv(source) -> FormalContext:
    """First column object names, header row attribute names, cells 1/0 or x/empty."""
    reader = csv.reader(io.StringIO(_text(source)))
    rows = [r for r in reader]
    if not rows:
        raise ParseError("empty CSV", 1)
    attributes = [a.strip() for a in rows[0][1:]]
    objects, inc = [], []
    for i, r in enumerate(rows[1:], start=2):
        if not r:
            continue
        if len(r) - 1 != len(attributes):
            raise ParseError(f"row has {len(r) - 1} cells, expected {len(attributes)}", i)
        objects.append(r[0].strip())
        cells = []
        for c, v in enumerate(r[1:], start=2):
            v = v.strip()
            if v in _TRUE:
                cells.append(True)
            elif v in _FALSE:
                cells.append(False)
            else:
                raise ParseError(f"unexpected cell {v!r}", i, c)
        inc.append(cells)
    try:
        return FormalContext(objects, attributes, inc)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


# -- implications -----------------------------------------------------------------


def format_implications(implications: Iterable[Implication], *, mark: bool = False) -> str:
    """One implication per line; ``mark`` appends ``  # distributive`` or ``  # non-distributive``."""
    out = []
    for imp in implications:
        note = ("  # distributive" if imp.is_distributive else "  # non-distributive") if mark else ""
        out.append(f"{imp}{note}\n")
    return "".join(out)


def _side(text: str) -> frozenset:
    return frozenset(x.strip() for x in text.split(",") if x.strip())


def parse_implications(source, universe: Iterable | None = None) -> ImplicationBasis:
    """Parse ``a, b -> c, d`` lines; blank lines and ``#`` comments are skipped.

    A trailing ``  # note`` after an implication is ignored as well.
    """
    imps = []
    for k, raw in enumerate(_text(source).splitlines(), start=1):
        s = raw.split("  #", 1)[0].strip()
        if not s or s.startswith("#"):
            continue
        if s.count("->") != 1:
            raise ParseError("expected exactly one '->'", k, 1)
        lhs, rhs = s.split("->")
        imps.append(Implication(_side(lhs), _side(rhs)))
    if universe is None:
        universe = sorted(set().union(*(i.premise | i.conclusion for i in imps)) if imps else set())
    return ImplicationBasis(tuple(universe), imps)


# -- reports ------------------------------------------------------------------------


def report_to_json(report) -> str:
    """Serialize a CompletionReport."""
    L = report.completed
    doc = {
        "kind": report.kind,
        "completed": json.loads(poset_to_json(L)),
        "embedding": sorted(
            ([label_to_json(k), label_to_json(v)] for k, v in report.embedding.items()),
            key=lambda pr: _sort_key(pr),
        ),
        "generators": [[g, label_to_json(c)] for g, c in report.generators.items()],
        "coincidences": [list(p) for p in report.coincidences],
        "new_concepts": [label_to_json(c) for c in report.new_concepts],
        "invalidated": [str(imp) for imp in report.invalidated],
    }
    return json.dumps(doc, ensure_ascii=False, indent=1) + "\n"


# -- DOT ----------------------------------------------------------------------------


def _cell(items) -> str:
    return "<BR/>".join(html.escape(str(x)) for x in items)


def lattice_to_dot(
    L: Lattice,
    *,
    upper: Mapping | None = None,
    lower: Mapping | None = None,
    highlight: Iterable = (),
    name: str = "lattice",
) -> str:
    """Hasse diagram as DOT: one node per element, one edge per cover pair.

    ``upper``/``lower`` map element labels to text lines drawn above/below the
    node; elements without either get their own label.
    """
    marked = set(highlight)
    out = [f"digraph {json.dumps(name)} {{", "  rankdir=BT;", '  node [shape=plaintext, fontsize=10];']
    for i, x in enumerate(L.labels):
        above = list((upper or {}).get(x, []))
        below = list((lower or {}).get(x, []))
        if upper is None and lower is None:
            above = [label_text(x)]
        fill = ' BGCOLOR="#d9d9d9"' if x in marked else ""
        rows = []
        if above:
            rows.append(f"<TR><TD>{_cell(above)}</TD></TR>")
        rows.append(f'<TR><TD BORDER="1" STYLE="rounded"{fill}> </TD></TR>')
        if below:
            rows.append(f"<TR><TD>{_cell(below)}</TD></TR>")
        out.append(f'  n{i} [label=<<TABLE BORDER="0" CELLSPACING="0">{"".join(rows)}</TABLE>>];')
    for i, j in sorted(L.cover_pairs):
        out.append(f"  n{i} -> n{j} [arrowhead=none];")
    out.append("}")
    return "\n".join(out) + "\n"


def concept_lattice_to_dot(cl: ConceptLattice, *, highlight: Iterable = (), name: str = "concepts") -> str:
    """Concept lattice with reduced labelling: attributes above, objects below."""
    return lattice_to_dot(
        cl.lattice,
        upper=cl.attribute_labels(),
        lower=cl.object_labels(),
        highlight=highlight,
        name=name,
    )
