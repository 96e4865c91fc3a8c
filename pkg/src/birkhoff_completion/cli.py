"""Command-line interface: ``birkhoff <command> [options] INPUT``.

Exit status is 0 on success, 1 when a check fails and 2 on unreadable input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .completion import (
    birkhoff_completion_context,
    birkhoff_completion_context_downset,
    birkhoff_down,
    birkhoff_up,
    fig6_check,
    verify_commutation,
    verify_duality,
)
from .context import FormalContext, concept_lattice, is_attribute_reduced, reduce, standard_context
from .datasets import DATASETS, dataset_text
from .implications import canonical_direct_basis, distributive_part, proper_premises
from .io import (
    ParseError,
    concept_lattice_to_dot,
    format_implications,
    label_text,
    label_to_json,
    lattice_to_dot,
    poset_from_json,
    poset_to_json,
    read_csv,
    read_cxt,
    report_to_json,
)
from .order import Lattice, NotALatticeError, OrderError, find_forbidden_sublattice, is_distributive_law, is_isomorphic

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# -- input ---------------------------------------------------------------------


def _source_text(path: str) -> tuple[str, str]:
    """File contents and the name used for format detection.

    A missing path whose file name (or bare name) matches a bundled dataset
    falls back to the bundled copy, so ``data/uk.cxt`` works from any directory.
    """
    p = Path(path)
    if p.is_file():
        try:
            return p.read_text(encoding="utf-8"), p.name
        except (OSError, UnicodeDecodeError) as exc:
            raise InputError(f"{path}: {exc}") from exc
    for name, (filename, _) in DATASETS.items():
        if p.name in (filename, name):
            return dataset_text(name), filename
    raise InputError(f"{path}: no such file or bundled dataset")


def load_input(path: str):
    """A FormalContext, a Lattice, or a ``{name: Lattice}`` pair (fig6-style JSON)."""
    text, name = _source_text(path)
    suffix = Path(name).suffix.lower()
    try:
        if suffix == ".cxt":
            return read_cxt(text)
        if suffix == ".csv":
            return read_csv(text)
        if suffix == ".json":
            try:
                obj = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
            if isinstance(obj, dict) and "elements" not in obj and obj and all(
                isinstance(v, dict) for v in obj.values()
            ):
                return {k: poset_from_json(json.dumps(v)) for k, v in obj.items()}
            return poset_from_json(text)
    except (ParseError, NotALatticeError, OrderError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    raise InputError(f"{path}: unknown format {suffix or '(no extension)'}; use .cxt, .csv or .json")


def _as_context(obj, path: str) -> FormalContext:
    if isinstance(obj, FormalContext):
        return obj
    if isinstance(obj, Lattice):
        return standard_context(obj)
    raise InputError(f"{path}: expected a context or a single lattice")


def _as_lattice(obj, path: str) -> Lattice:
    if isinstance(obj, Lattice):
        return obj
    if isinstance(obj, FormalContext):
        return concept_lattice(obj).lattice
    raise InputError(f"{path}: expected a context or a single lattice")


# -- output helpers --------------------------------------------------------------


class _Out:
    def __init__(self, args):
        self.args = args

    def info(self, msg: str) -> None:
        if not self.args.quiet:
            print(msg, file=sys.stderr)

    def write(self, text: str) -> None:
        sys.stdout.write(text)

    def json(self, obj) -> None:
        sys.stdout.write(json.dumps(obj, ensure_ascii=False, indent=1) + "\n")

    def dot(self, text: str) -> None:
        if self.args.dot:
            Path(self.args.dot).write_text(text, encoding="utf-8")
            self.info(f"wrote {self.args.dot}")


# -- commands ---------------------------------------------------------------------


def cmd_concepts(args, out: _Out) -> int:
    obj = load_input(args.input)
    if isinstance(obj, Lattice):
        if args.json:
            out.write(poset_to_json(obj))
        else:
            out.write(f"{len(obj)} elements\n")
            for x in obj.labels:
                out.write(f"{label_text(x)}\n")
        out.dot(lattice_to_dot(obj))
        return EXIT_OK
    K = _as_context(obj, args.input)
    cl = concept_lattice(K)
    if args.json:
        out.json([label_to_json(c) for c in cl.concepts])
    else:
        out.write(f"{len(cl)} concepts\n")
        for c in cl.concepts:
            out.write(f"{label_text(c.extent)} | {label_text(c.intent)}\n")
    out.dot(concept_lattice_to_dot(cl))
    return EXIT_OK


def cmd_basis(args, out: _Out) -> int:
    obj = load_input(args.input)
    K = _as_context(obj, args.input)
    if not is_attribute_reduced(K):
        R = reduce(K, objects=False)
        dropped = [m for m in K.attributes if m not in set(R.attributes)]
        out.info(f"note: reduced the context; dropped attributes: {', '.join(map(str, dropped))}")
        K = R
    basis = canonical_direct_basis(K, full_conclusions=args.full_conclusions)
    if args.distributive_only:
        basis = distributive_part(basis)
    if args.json:
        out.json([
            {"premise": label_to_json(i.premise), "conclusion": label_to_json(i.conclusion),
             "distributive": i.is_distributive}
            for i in basis
        ])
    else:
        out.write(format_implications(basis, mark=args.mark))
    return EXIT_OK


def _report_text(report) -> str:
    lines = [
        f"kind: {report.kind}",
        f"original: {len(report.original)} elements",
        f"completed: {len(report.completed)} elements",
    ]
    if report.context is not None:
        added = list(report.generators)
        what = "objects" if report.kind == "up" else "attributes"
        lines.append(f"added {what} ({len(added)}): {', '.join(map(str, added))}")
        for g, h in report.coincidences:
            lines.append(f"coincides: {g} = {h}")
        lines.append(f"new concepts: {len(report.new_concepts)}")
        for c in report.new_concepts:
            lines.append(f"  {label_text(c.extent)} | {label_text(c.intent)}")
        lines.append(f"invalidated implications: {len(report.invalidated)}")
        lines += [f"  {imp}" for imp in report.invalidated]
    else:
        image = set(report.embedding.values())
        fresh = [x for x in report.completed.labels if x not in image]
        lines.append(f"new elements: {len(fresh)}")
        lines += [f"  {label_text(x)}" for x in fresh]
    return "\n".join(lines) + "\n"


def cmd_bc(args, out: _Out) -> int:
    obj = load_input(args.input)
    level = args.level or ("context" if isinstance(obj, FormalContext) else "lattice")
    if level == "context":
        K = _as_context(obj, args.input)
        build = birkhoff_completion_context if args.kind == "up" else birkhoff_completion_context_downset
        _, report = build(K)
        marked = set(report.generators.values())
        dot = concept_lattice_to_dot(report.concepts, highlight=marked)
    else:
        L = _as_lattice(obj, args.input)
        report = (birkhoff_up if args.kind == "up" else birkhoff_down)(L)
        image = set(report.embedding.values())
        dot = lattice_to_dot(report.completed, highlight=[x for x in report.completed.labels if x not in image])
    out.write(report_to_json(report) if args.json else _report_text(report))
    out.dot(dot)
    return EXIT_OK


def _lattice_checks(L: Lattice) -> dict:
    up = birkhoff_up(L).completed
    down = birkhoff_down(L).completed
    dist = is_distributive_law(L)
    w = find_forbidden_sublattice(L)
    iso_up = is_isomorphic(L, up) is not None
    iso_down = is_isomorphic(L, down) is not None
    res = {
        "size": len(L),
        "distributive": dist,
        "witness": None if w is None else {"kind": w.kind, "elements": sorted(map(label_text, w.elements))},
        "up_size": len(up),
        "down_size": len(down),
        "isomorphic_to_up": iso_up,
        "isomorphic_to_down": iso_down,
        "duality": bool(verify_duality(L)),
    }
    res["equivalences"] = dist == (w is None) == iso_up == iso_down
    res["passed"] = res["equivalences"] and res["duality"]
    return res


def cmd_check(args, out: _Out) -> int:
    obj = load_input(args.input)
    if isinstance(obj, dict):
        if set(obj) != {"lattice", "extension"}:
            raise InputError(f"{args.input}: expected keys 'lattice' and 'extension'")
        r = fig6_check(obj["lattice"], obj["extension"])
        res = {
            "extension_distributive": r.extension_distributive,
            "inclusion_is_order_embedding": r.inclusion_is_order_embedding,
            "up_size": r.up_size,
            "down_size": r.down_size,
            "extension_size": r.extension_size,
            "passed": r.passed,
        }
    elif isinstance(obj, FormalContext):
        res = _lattice_checks(concept_lattice(obj).lattice)
        res["commutation"] = bool(verify_commutation(obj))
        R = reduce(obj)
        singleton = all(len(a) == 1 for a, _ in proper_premises(R))
        res["premises_singleton"] = singleton
        res["passed"] = res["passed"] and res["commutation"] and singleton == res["distributive"]
    else:
        res = _lattice_checks(obj)
    if args.json:
        out.json(res)
    else:
        for k, v in res.items():
            if k == "witness" and v is not None:
                v = f"{v['kind']} on {', '.join(v['elements'])}"
            out.write(f"{k}: {v}\n")
        out.write("PASS\n" if res["passed"] else "FAIL\n")
    return EXIT_OK if res["passed"] else EXIT_FAILED


def cmd_render(args, out: _Out) -> int:
    obj = load_input(args.input)
    if isinstance(obj, dict):
        text = "".join(lattice_to_dot(L, name=k) for k, L in obj.items())
    elif isinstance(obj, FormalContext):
        text = concept_lattice_to_dot(concept_lattice(obj))
    else:
        text = lattice_to_dot(obj)
    if args.dot:
        out.dot(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_datasets(args, out: _Out) -> int:
    if args.name:
        if args.name not in DATASETS:
            raise InputError(f"unknown dataset {args.name!r}; choose from {', '.join(sorted(DATASETS))}")
        out.write(dataset_text(args.name))
        return EXIT_OK
    if args.json:
        out.json({k: {"file": f, "note": n} for k, (f, n) in DATASETS.items()})
    else:
        for k, (f, n) in DATASETS.items():
            out.write(f"{k}\tdata/{f}\t{n}\n")
    return EXIT_OK


# -- parser -------------------------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--json", action="store_true", help="machine-readable output", **d)
    parser.add_argument("--dot", metavar="PATH", help="also write a DOT Hasse diagram to PATH", **d)
    parser.add_argument("--quiet", action="store_true", help="suppress notices on stderr", **d)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="birkhoff", description="Birkhoff completions of lattices and formal contexts.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help: str, input_arg: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        _global_flags(p, suppress=True)
        if input_arg:
            p.add_argument("input", help=".cxt, .csv or lattice .json file (or a bundled dataset name)")
        p.set_defaults(func=func)
        return p

    add("concepts", cmd_concepts, "list concepts in lectic order")
    p = add("basis", cmd_basis, "canonical direct basis")
    p.add_argument("--distributive-only", action="store_true", help="keep singleton-premise implications")
    p.add_argument("--mark", action="store_true", help="tag implications distributive / non-distributive")
    p.add_argument("--full-conclusions", action="store_true", help="print A'' minus A instead of A•")
    p = add("bc", cmd_bc, "Birkhoff completion")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--up", dest="kind", action="store_const", const="up", help="up-set completion (default)")
    g.add_argument("--down", dest="kind", action="store_const", const="down", help="down-set completion")
    h = p.add_mutually_exclusive_group()
    h.add_argument("--context-level", dest="level", action="store_const", const="context")
    h.add_argument("--lattice-level", dest="level", action="store_const", const="lattice")
    p.set_defaults(kind="up", level=None)
    add("check", cmd_check, "verify the completion theorems on the input")
    add("render", cmd_render, "DOT Hasse diagram")
    p = add("datasets", cmd_datasets, "list bundled datasets or print one", input_arg=False)
    p.add_argument("name", nargs="?")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:  # pragma: no cover
        return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
