"""Command line interface.

Instances are given inline as ``"n=9 range=0,2,4,6,8"`` (``size=`` also works;
``chain=a,b,c range=b,c`` takes labelled chains) or as a path to a JSON file
holding ``{"size": n, "range": [...]}``.

Exit codes: 0 success, 1 mismatch found, 2 enumeration cap or search
budget hit, 3 invalid input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .chains import ChainPair, InvalidInstance, gap_signature
from .decision import (cross_validate, decide_iso, instance_family)
from .semigroup import (DEFAULT_BUDGET, SearchBudgetExceeded,
                        SemigroupIso, build_cayley, find_iso, verify_iso)
from .structures import (adjusted_chain, classify_lambda, k_classes,
                         lambda_class_sizes, partial_graph)
from .transformations import (EnumerationCapExceeded, Transformation,
                              count_top, default_cap, enumerate_top)

EXIT_OK, EXIT_MISMATCH, EXIT_RESOURCE, EXIT_INVALID = 0, 1, 2, 3


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise InvalidInstance(f"expected a comma separated list of integers, got {text!r}") from None


def _labelled(chain: Sequence, rng: Sequence) -> ChainPair:
    """Normalise a labelled chain (listed in increasing order) to indices."""
    pos = {}
    for i, lab in enumerate(chain):
        if lab in pos:
            raise InvalidInstance(f"chain label {lab!r} repeated")
        pos[lab] = i
    missing = [r for r in rng if r not in pos]
    if missing:
        raise InvalidInstance(f"range labels {missing} are not in the chain")
    return ChainPair.of(len(chain), sorted(pos[r] for r in rng))


def parse_instance(text: str) -> ChainPair:
    text = text.strip()
    if os.path.isfile(text):
        with open(text) as fh:
            return _instance_from_json(json.load(fh))
    if text.startswith("{"):
        return _instance_from_json(json.loads(text))
    fields = {}
    for tok in text.split():
        key, sep, value = tok.partition("=")
        if not sep:
            raise InvalidInstance(f"cannot parse {tok!r}; expected key=value")
        fields[key.lower()] = value
    if "chain" in fields:
        return _labelled(fields["chain"].split(","), fields.get("range", "").split(","))
    size = fields.get("n", fields.get("size"))
    if size is None or "range" not in fields:
        raise InvalidInstance(f"instance {text!r} needs n=<size> and range=<i,j,...>")
    try:
        n = int(size)
    except ValueError:
        raise InvalidInstance(f"size must be an integer, got {size!r}") from None
    return ChainPair.of(n, _int_list(fields["range"]))


def _instance_from_json(data) -> ChainPair:
    if isinstance(data, dict) and "chain" in data:
        return _labelled(list(data["chain"]), list(data["range"]))
    if isinstance(data, dict) and "pair" in data:
        data = data["pair"]
    if not isinstance(data, dict):
        raise InvalidInstance("instance JSON must be an object")
    return ChainPair.from_json(data)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _instance(args) -> ChainPair:
    return parse_instance(" ".join(args.instance))


def cmd_enumerate(args) -> int:
    pair = _instance(args)
    cap = args.cap if args.cap is not None else default_cap()
    count = count_top(pair)
    if args.count_only:
        if count > cap:
            raise EnumerationCapExceeded(f"T_OP({pair}) has {count} elements, above the cap of {cap}")
        if args.json:
            _emit({"pair": pair.to_json(), "count": count})
        else:
            print(count)
        return EXIT_OK
    elements = enumerate_top(pair, cap)
    if args.json:
        _emit({"pair": pair.to_json(), "count": len(elements),
               "images": [list(e.image) for e in elements]})
        return EXIT_OK
    for i, alpha in enumerate(elements):
        print(f"#{i}")
        print(alpha.two_row())
    print(f"count: {len(elements)}")
    return EXIT_OK


def cmd_adjusted(args) -> int:
    pair = _instance(args)
    chain = adjusted_chain(pair)
    if args.json:
        _emit({"pair": pair.to_json(), "nodes": chain.to_json(),
               "signature": list(gap_signature(pair).gaps)})
    else:
        print(chain.render())
    return EXIT_OK


def cmd_graph(args) -> int:
    pair = _instance(args)
    alpha = Transformation(pair, tuple(_int_list(args.image)))
    if args.monotone and not alpha.is_order_preserving():
        raise InvalidInstance(f"image {list(alpha.image)} is not order-preserving")
    graph = partial_graph(alpha)
    dot = graph.to_dot()
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(dot)
    if args.json:
        _emit({**graph.to_json(), "components": graph.n_components,
               "order_preserving": alpha.is_order_preserving()})
    elif not args.dot:
        sys.stdout.write(dot)
    else:
        print(f"components: {graph.n_components}")
    return EXIT_OK


def cmd_kclasses(args) -> int:
    pair = _instance(args)
    elements = enumerate_top(pair, args.cap)
    part = k_classes(pair, elements)
    two_point = len(pair.range) == 2
    rows = []
    for key, members in zip(part.keys, part.classes):
        row = {"restriction": list(key[0]), "range": list(key[1]), "size": len(members),
               "members": list(members)}
        if two_point:
            row["shape"] = str(classify_lambda(elements[members[0]]))
        rows.append(row)
    out = {"pair": pair.to_json(), "classes": rows}
    if two_point:
        predicted = list(lambda_class_sizes(pair))
        observed = [0] * 5
        for row in rows:
            observed[int(row["shape"][1:]) - 1] += row["size"]
        out["class_sizes"] = {"predicted": predicted, "observed": observed,
                            "agree": predicted == observed}
    if args.json:
        _emit(out)
        return EXIT_OK
    for row in rows:
        tag = f"{row['shape']:>3} " if two_point else ""
        print(f"{tag}size {row['size']:>3}  X'|-> {row['restriction']}  ran {row['range']}")
    if two_point:
        rec = out["class_sizes"]
        verdict = "ok" if rec["agree"] else "MISMATCH"
        print(f"class sizes λ1..λ5: observed {rec['observed']}, predicted {rec['predicted']} ({verdict})")
        return EXIT_OK if rec["agree"] else EXIT_MISMATCH
    return EXIT_OK


def cmd_decide(args) -> int:
    a, b = parse_instance(args.a), parse_instance(args.b)
    _emit(decide_iso(a, b).to_json())
    return EXIT_OK


def cmd_cayley(args) -> int:
    pair = _instance(args)
    _emit(build_cayley(pair, args.cap).to_json())
    return EXIT_OK


def cmd_oracle(args) -> int:
    a, b = parse_instance(args.a), parse_instance(args.b)
    A, B = build_cayley(a, args.cap), build_cayley(b, args.cap)
    m = find_iso(A, B, budget=args.budget)
    if m is None:
        _emit({"isomorphic": False, "a": a.to_json(), "b": b.to_json(),
               "orders": [A.order, B.order]})
    else:
        _emit({"isomorphic": True, **m.to_json()})
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.witness:
        if not (args.a and args.b):
            raise InvalidInstance("--witness needs --a and --b")
        A, B = build_cayley(parse_instance(args.a), args.cap), build_cayley(parse_instance(args.b), args.cap)
        with open(args.witness) as fh:
            m = SemigroupIso.from_json(json.load(fh))
        ok = verify_iso(A, B, m)
        _emit({"verified": ok})
        return EXIT_OK if ok else EXIT_MISMATCH
    if args.instances:
        with open(args.instances) as fh:
            data = json.load(fh)
        instances = [_instance_from_json(d) if isinstance(d, dict) else parse_instance(d)
                     for d in data]
    else:
        instances = instance_family(args.max_size, args.min_size, args.min_range, args.max_range)
    cap = args.cap if args.cap is not None else default_cap()
    for p in instances:
        if count_top(p) > cap:
            raise EnumerationCapExceeded(f"T_OP({p}) has {count_top(p)} elements, above the cap of {cap}")
    report = cross_validate(instances, budget=args.budget, audit=not args.no_audit,
                            workers=args.workers)
    if args.json:
        out = report.to_json()
        if not args.full:
            out.pop("outcomes")
        _emit(out)
    else:
        for o in report.mismatches:
            print(f"MISMATCH {o.a} vs {o.b}: decide={o.decision.verdict} oracle={o.oracle}")
        for o in report.violations:
            print(f"VIOLATION {o.a} vs {o.b}: {o.preservation}")
        for o in report.skipped:
            print(f"SKIPPED {o.a} vs {o.b}: budget exceeded")
        print(report.summary())
    if report.mismatches or report.violations:
        return EXIT_MISMATCH
    if report.skipped:
        return EXIT_RESOURCE
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ordsemi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def single(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("instance", nargs="+", help='e.g. n=5 range=1,3, or a JSON file')
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--cap", type=int, default=None, help="enumeration cap")
        sp.set_defaults(func=func)
        return sp

    sp = single("enumerate", cmd_enumerate, "list T_OP(X, X') in canonical order")
    sp.add_argument("--count-only", action="store_true")
    single("adjusted", cmd_adjusted, "render the adjusted chain")
    sp = single("graph", cmd_graph, "partial graph of a map as DOT")
    sp.add_argument("--image", required=True, help="image array, comma separated")
    sp.add_argument("--dot", metavar="FILE", help="write DOT here instead of stdout")
    sp.add_argument("--monotone", action="store_true",
                    help="reject maps that are not order-preserving")
    single("kclasses", cmd_kclasses, "K-classes, with λ tags for two-point ranges")
    single("cayley", cmd_cayley, "export the Cayley table as JSON")

    for name, func, help in (("decide", cmd_decide, "decide isomorphism from signatures"),
                             ("oracle", cmd_oracle, "search for an isomorphism")):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("a")
        sp.add_argument("b")
        sp.add_argument("--json", action="store_true", help="accepted; output is always JSON")
        sp.add_argument("--cap", type=int, default=None)
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        sp.set_defaults(func=func)

    sp = sub.add_parser("verify", help="cross-check decide against the oracle")
    sp.add_argument("--max-size", type=int, default=5)
    sp.add_argument("--min-size", type=int, default=1)
    sp.add_argument("--min-range", type=int, default=2)
    sp.add_argument("--max-range", type=int, default=None)
    sp.add_argument("--instances", metavar="FILE", help="JSON list of instances")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--no-audit", action="store_true", help="skip preservation checks")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--full", action="store_true", help="include every pair in JSON output")
    sp.add_argument("--witness", metavar="FILE", help="verify a SemigroupIso JSON for --a/--b")
    sp.add_argument("--a")
    sp.add_argument("--b")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EnumerationCapExceeded, SearchBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvalidInstance, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
