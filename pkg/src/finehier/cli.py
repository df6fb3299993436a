"""Command-line surface.

Subcommands:
  finest      exhaustive finest valid hierarchy of a matrix
  linkage     agglomerative trace, trimmed by default (--no-trim for raw)
  validate    check a tree file against a matrix (--strong for the block rule)
  check-rule  conformance report for an update rule (conditions + fix point)
  hunt        randomized counterexample search for a rule
  ultra       ultrametric test; emits the dendrogram when it holds

Exit codes: 0 success / positive verdict; 1 negative verdict (invalid
tree, rule violation found, counterexample found, not ultrametric);
2 input error.  ``--format json`` prints one canonical JSON document
(check-rule and hunt print JSON lines for violation records).

Every subcommand is a thin composition of library calls; no logic lives
here.
"""

from __future__ import annotations

import argparse
import sys

from . import conditions as cond
from .errors import FinehierError, InputError
from .matrix import Orientation
from .oracle import ENUMERATION_CAP, finest_valid_hierarchy, search_counterexample
from .linkage import run_linkage
from .prune import trim
from .rules import BUILTIN_RULES, LinkageRule, lance_williams, rule_from_name
from .treeio import (
    canonical_json,
    default_labels,
    dendrogram_to_json_doc,
    dendrogram_to_newick,
    hierarchy_from_json_doc,
    hierarchy_from_newick,
    hierarchy_to_json_doc,
    load_matrix,
    matrix_to_json_doc,
    to_newick,
    trace_to_newick,
)
from .ultrametric import dendrogram_from_ultrametric, is_ultrametric
from .validity import (
    hierarchy_validity_reports,
    strong_hierarchy_reports,
    tree_gaps,
)

import json as _json
from pathlib import Path


def _add_common(p: argparse.ArgumentParser, orientation_alias: bool = False) -> None:
    p.add_argument(
        "--mode",
        choices=[o.value for o in Orientation],
        help="score orientation (never guessed)",
    )
    if orientation_alias:
        p.add_argument("--orientation", dest="mode_alias", choices=[o.value for o in Orientation])
    p.add_argument("--epsilon", type=float, default=0.0, help="validity margin (default 0)")
    p.add_argument("--format", choices=["newick", "json"], default="newick")
    p.add_argument("--labels", help="comma-separated item names overriding the file's")


def _orientation(args) -> Orientation | None:
    mode = args.mode or getattr(args, "mode_alias", None)
    return Orientation(mode) if mode else None


def _labels_arg(args) -> list[str] | None:
    return args.labels.split(",") if args.labels else None


def _load(args):
    m = load_matrix(args.matrix, _orientation(args))
    labels = _labels_arg(args)
    if labels is not None:
        if len(labels) != m.k:
            raise InputError(f"expected {m.k} labels, got {len(labels)}")
        from .matrix import PairMatrix

        m = PairMatrix(m.scores, m.orientation, tuple(labels))
    return m


def _rule_arg(args) -> LinkageRule:
    if getattr(args, "lw", None):
        parts = [float(v) for v in args.lw.split(",")]
        if len(parts) not in (3, 4):
            raise InputError("--lw expects eta1,eta2,beta[,gamma]")
        return lance_williams(*parts)
    if not getattr(args, "rule", None):
        raise InputError("a rule is required: --rule NAME or --lw coefficients")
    return rule_from_name(args.rule)


def _emit_tree(args, m, h, trace=None, gaps=None) -> None:
    labels = m.labels if m.labels is not None else None
    if args.format == "json":
        doc = hierarchy_to_json_doc(h, labels, gaps=gaps)
        sys.stdout.write(canonical_json(doc))
    elif trace is not None and h is trace:
        sys.stdout.write(trace_to_newick(trace, labels) + "\n")
    else:
        sys.stdout.write(to_newick(h, labels) + "\n")


def _load_tree(path: str, m):
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        try:
            doc = _json.loads(text)
        except _json.JSONDecodeError as e:
            raise InputError(f"invalid JSON in {path}: {e}") from None
        h, _labels, _heights = hierarchy_from_json_doc(doc)
    else:
        labels = list(m.labels) if m.labels is not None else None
        h, _labels, _heights = hierarchy_from_newick(text, labels, k=m.k)
    return h


# --- subcommands ------------------------------------------------------------


def _cmd_finest(args) -> int:
    m = _load(args)
    h = finest_valid_hierarchy(m, args.epsilon, cap=args.cap)
    gaps = tree_gaps(m, h) if args.format == "json" else None
    _emit_tree(args, m, h, gaps=gaps)
    return 0


def _cmd_linkage(args) -> int:
    m = _load(args)
    rule = _rule_arg(args)
    trace = run_linkage(m, rule)
    if args.no_trim:
        _emit_tree(args, m, trace, trace=trace)
    else:
        _emit_tree(args, m, trim(m, trace, args.epsilon))
    return 0


def _cmd_validate(args) -> int:
    m = _load(args)
    h = _load_tree(args.tree, m)
    labels = default_labels(m.k, m.labels)
    if args.strong:
        ok, pairs = strong_hierarchy_reports(m, h, args.epsilon)
        failing = [(c, g) for c, g in pairs if not g > args.epsilon]
    else:
        ok, reports = hierarchy_validity_reports(m, h, args.epsilon)
        failing = [(r.cluster, r.gap) for r in reports if not r.gap > args.epsilon]
    if args.format == "json":
        doc = {
            "valid": ok,
            "strong": bool(args.strong),
            "failing": [
                {"members": sorted(c.members),
                 "labels": [labels[x] for x in sorted(c.members)],
                 "gap": g}
                for c, g in failing
            ],
        }
        sys.stdout.write(canonical_json(doc))
    elif ok:
        print("valid" if not args.strong else "strongly valid")
    else:
        print("invalid" if not args.strong else "not strongly valid")
        for c, g in failing:
            names = ",".join(labels[x] for x in sorted(c.members))
            print(f"  failing vertex {{{names}}} gap {g!r}")
    return 0 if ok else 1


def _cmd_check_rule(args) -> int:
    rule = _rule_arg(args)
    orientation = _orientation(args)
    if orientation is None:
        if rule.orientations == {Orientation.DISSIMILARITY}:
            orientation = Orientation.DISSIMILARITY
        else:
            raise InputError("check-rule requires --orientation/--mode")
    rule.require(orientation)
    if orientation is Orientation.SIMILARITY:
        checks = [("C1", cond.check_condition_1), ("C2", cond.check_condition_2)]
    else:
        checks = [("C3", cond.check_condition_3), ("C4", cond.check_condition_4)]
    records = []
    counts = {}
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [
                (cid, pool.submit(fn, rule, args.samples, args.seed))
                for cid, fn in checks
            ]
            futures.append(
                ("FixPoint",
                 pool.submit(cond.check_fixpoint, rule, orientation,
                             args.samples, args.seed))
            )
            for cid, fut in futures:
                vs = fut.result()
                counts[cid] = len(vs)
                records.extend(vs)
    else:
        for cid, fn in checks:
            vs = fn(rule, samples=args.samples, seed=args.seed)
            counts[cid] = len(vs)
            records.extend(vs)
        vs = cond.check_fixpoint(rule, orientation, samples=args.samples, seed=args.seed)
        counts["FixPoint"] = len(vs)
        records.extend(vs)

    for v in records[: args.max_report]:
        sys.stdout.write(
            _json.dumps(
                {
                    "condition": v.condition_id,
                    "inputs": v.inputs,
                    "lhs": v.lhs,
                    "rhs": v.rhs,
                },
                sort_keys=True,
            )
            + "\n"
        )
    summary = {
        "rule": rule.name,
        "orientation": orientation.value,
        "samples": args.samples,
        "seed": args.seed,
        "violations": counts,
    }
    sys.stdout.write(_json.dumps(summary, sort_keys=True) + "\n")
    return 1 if any(counts.values()) else 0


def _parse_k_range(text: str) -> range:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    k = int(text)
    return range(k, k + 1)


def _cmd_hunt(args) -> int:
    rule = _rule_arg(args)
    orientation = _orientation(args)
    if orientation is None:
        if rule.orientations == {Orientation.DISSIMILARITY}:
            orientation = Orientation.DISSIMILARITY
        else:
            raise InputError("hunt requires --orientation/--mode")
    report = search_counterexample(
        rule,
        orientation,
        k_range=_parse_k_range(args.k),
        trials=args.trials,
        seed=args.seed,
        jobs=args.jobs,
    )
    if report is None:
        sys.stdout.write(
            _json.dumps(
                {"found": False, "rule": rule.name, "trials": args.trials,
                 "seed": args.seed},
                sort_keys=True,
            )
            + "\n"
        )
        return 0
    doc = {
        "found": True,
        "rule": report.rule_name,
        "seed": report.seed,
        "trial": report.trial,
        "trials_used": report.trials_used,
        "missing": [sorted(c.members) for c in sorted(report.missing, key=lambda c: (len(c), c.members))],
        "matrix": matrix_to_json_doc(report.matrix),
    }
    sys.stdout.write(canonical_json(doc))
    return 1


def _cmd_ultra(args) -> int:
    m = _load(args)
    check = is_ultrametric(m)
    if not check.ok:
        labels = default_labels(m.k, m.labels)
        if args.format == "json":
            sys.stdout.write(
                canonical_json(
                    {"ultrametric": False,
                     "witness": list(check.witness),
                     "witness_labels": [labels[i] for i in check.witness]}
                )
            )
        else:
            names = ", ".join(labels[i] for i in check.witness)
            print(f"not ultrametric: violating triple ({names})")
        return 1
    d = dendrogram_from_ultrametric(m)
    if args.format == "json":
        doc = dendrogram_to_json_doc(d, m.labels)
        doc["ultrametric"] = True
        sys.stdout.write(canonical_json(doc))
    else:
        sys.stdout.write(dendrogram_to_newick(d, m.labels) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finehier",
        description="Finest valid hierarchies under arbitrary similarity functions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("finest", help="exhaustive finest valid hierarchy")
    p.add_argument("matrix")
    p.add_argument("--cap", type=int, default=ENUMERATION_CAP,
                   help="enumeration size cap (default %(default)s)")
    _add_common(p)
    p.set_defaults(fn=_cmd_finest)

    p = sub.add_parser("linkage", help="agglomerative trace, trimmed by default")
    p.add_argument("matrix")
    p.add_argument("--rule", choices=sorted(BUILTIN_RULES))
    p.add_argument("--lw", help="inline coefficients eta1,eta2,beta[,gamma]")
    p.add_argument("--no-trim", action="store_true", help="emit the raw binary trace")
    _add_common(p)
    p.set_defaults(fn=_cmd_linkage)

    p = sub.add_parser("validate", help="validity verdict for a tree file")
    p.add_argument("matrix")
    p.add_argument("tree")
    p.add_argument("--strong", action="store_true",
                   help="use the stricter block condition")
    _add_common(p)
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("check-rule", help="conformance report for an update rule")
    p.add_argument("--rule", choices=sorted(BUILTIN_RULES))
    p.add_argument("--lw", help="inline coefficients eta1,eta2,beta[,gamma]")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-report", type=int, default=20,
                   help="cap on violation records printed (default %(default)s)")
    _add_common(p, orientation_alias=True)
    p.set_defaults(fn=_cmd_check_rule)

    p = sub.add_parser("hunt", help="randomized counterexample search")
    p.add_argument("--rule", choices=sorted(BUILTIN_RULES))
    p.add_argument("--lw", help="inline coefficients eta1,eta2,beta[,gamma]")
    p.add_argument("--trials", type=int, default=5000)
    p.add_argument("--k", default="4..8", help="item-count range MIN..MAX")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p, orientation_alias=True)
    p.set_defaults(fn=_cmd_hunt)

    p = sub.add_parser("ultra", help="ultrametric test and dendrogram emission")
    p.add_argument("matrix")
    _add_common(p)
    p.set_defaults(fn=_cmd_ultra)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FinehierError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
