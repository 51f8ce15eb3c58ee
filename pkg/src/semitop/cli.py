"""Command-line interface: ``semitop eval | check | simulate | search``.

Exit status is 0 when everything checked passes (or no counterexample was
found), 1 on a violation or counterexample, and 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from typing import Sequence

from . import checker, formats, grammar, semantics, simulator, theories

OK, VIOLATION, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _csv(text: str | None) -> list[str]:
    if text is None:
        return []
    return [part.strip() for part in text.split(",") if part.strip()]


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_eval(args) -> int:
    m = formats.load_model(args.model)
    phi = grammar.parse(args.formula)
    if args.at is not None:
        value = semantics.denote(m, phi, args.at)
        print(value)
        return OK if value != semantics.F else VIOLATION
    table = semantics.denote_all(m, phi)
    width = max(len(p) for p in table)
    for p, value in table.items():
        print(f"{p:<{width}}  {value}")
    return OK if semantics.F not in table.values() else VIOLATION


def _selected(tf: theories.TheoryFile, args) -> tuple[list, list]:
    props = list(tf.properties) if args.properties else []
    lemmas = list(tf.lemmas) if args.lemmas else []
    return props, lemmas


def _emit_report(report: checker.Report, as_json: bool) -> int:
    sys.stdout.write(report.to_json() if as_json else report.to_text())
    return OK if report.overall else VIOLATION


def cmd_check(args) -> int:
    tf = theories.resolve_theory(args.theory)
    m = formats.load_model(args.model, tf.theory.predicates)
    props, lemmas = _selected(tf, args)
    return _emit_report(checker.check_model(m, tf.theory, props, lemmas), args.json)


def _run_config(args) -> simulator.RunConfig:
    kw: dict = dict(
        byzantine=tuple(_csv(args.byzantine)),
        strategy=args.strategy,
        seed=args.seed,
        echo2_tiebreak=args.tiebreak,
        single_output=args.single_output,
        max_rounds=args.max_rounds,
    )
    if args.values:
        kw["values"] = tuple(_csv(args.values))
    if args.sender:
        kw["sender"] = args.sender
    if args.value:
        kw["value"] = args.value
    if args.inputs:
        kw["inputs"] = tuple(_csv(args.inputs) if "," in args.inputs else args.inputs)
    if args.votes:
        kw["votes"] = tuple(v in ("T", "1", "yes") for v in (_csv(args.votes) if "," in args.votes else args.votes))
    if args.f is not None:
        if any(x is not None for x in (args.n, args.quorum, args.contraquorum)):
            raise UsageError("--f cannot be combined with --n, --quorum or --contraquorum")
        return simulator.RunConfig.classic(args.protocol, args.f, **kw)
    n = args.n if args.n is not None else 4
    quorum = args.quorum if args.quorum is not None else (2 * n) // 3 + 1
    contraquorum = args.contraquorum if args.contraquorum is not None else n - quorum + 1
    return simulator.RunConfig(args.protocol, n=n, quorum=quorum, contraquorum=contraquorum, **kw)


def cmd_simulate(args) -> int:
    cfg = _run_config(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        trace = simulator.run(cfg)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    model = simulator.extract_model(trace, cfg)
    if args.emit_trace:
        _write(args.emit_trace, formats.dumps_json(trace.to_dict()))
    if args.emit_model:
        formats.save_model(model, args.emit_model)
    if not args.check:
        if args.json:
            sys.stdout.write(formats.dumps_json(trace.to_dict()))
        else:
            print(f"{cfg.protocol}: {len(trace.rounds)} rounds")
            for p in cfg.points:
                role = "byzantine" if p in cfg.byzantine else "honest"
                outs = ", ".join(sorted(trace.outputs(p))) or "-"
                print(f"  {p} ({role}): {outs}")
        return OK
    name = simulator.THEORY_OF[cfg.protocol]
    report = checker.check_model(model, theories.theory(name), theories.properties(name),
                                 theories.derived_lemmas(name))
    return _emit_report(report, args.json)


def cmd_search(args) -> int:
    tf = theories.resolve_theory(args.theory)
    t = tf.theory
    for item in args.mutate_axiom:
        name, sep, text = item.partition("=")
        if not sep:
            raise UsageError(f"--mutate-axiom expects NAME=FORMULA, got {item!r}")
        t = theories.replace_axiom(t, name.strip(), text.strip())
    pool = list(tf.properties) + list(tf.lemmas)
    if args.property == "ALL":
        props = list(tf.properties)
    else:
        wanted = _csv(args.property)
        props = [p for p in pool if p.name in wanted]
        missing = set(wanted) - {p.name for p in props}
        if missing:
            raise UsageError(f"unknown properties {sorted(missing)}; known: {', '.join(p.name for p in pool)}")
    cfg = checker.SearchConfig(
        mode=args.mode, seed=args.seed, budget=args.budget, cap=args.cap,
        n=args.n, quorum=args.quorum if args.quorum is not None else (2 * args.n) // 3 + 1,
        values=tuple(_csv(args.values)) if args.values else None,
    )
    result = checker.search_counterexample(t, props, cfg)
    print(f"examined {result.candidates} candidates, {result.theory_models} models of {t.name}",
          file=sys.stderr)
    if not result.found:
        print("no counterexample found")
        return OK
    text = formats.dumps_model(result.model)
    print(f"counterexample violates: {', '.join(result.violated)}")
    if args.out:
        _write(args.out, text)
        print(f"model written to {args.out}")
    else:
        sys.stdout.write(text)
    return VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semitop", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a closed formula in a model")
    p.add_argument("--model", required=True, help="model JSON file")
    p.add_argument("--formula", required=True)
    p.add_argument("--at", help="evaluate at this point only")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check", help="check a model against a theory")
    p.add_argument("--model", required=True)
    p.add_argument("--theory", required=True, help="vote, bracha, crusader, or a theory file")
    p.add_argument("--properties", action="store_true", help="also check correctness properties")
    p.add_argument("--lemmas", action="store_true", help="also check derived lemmas")
    p.add_argument("--json", action="store_true", help="print the full report as JSON")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate", help="run a protocol and optionally check the extracted model")
    p.add_argument("--protocol", required=True, choices=simulator.PROTOCOLS)
    p.add_argument("--f", type=int, help="classic preset: n=3f+1, quorum 2f+1, contraquorum f+1")
    p.add_argument("--n", type=int)
    p.add_argument("--quorum", type=int)
    p.add_argument("--contraquorum", type=int)
    p.add_argument("--byzantine", help="comma-separated participants, e.g. p0,p3")
    p.add_argument("--strategy", default="conform", choices=simulator.STRATEGIES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--values", help="bracha value set, comma-separated")
    p.add_argument("--sender", help="bracha sender (default p0)")
    p.add_argument("--value", help="bracha sender value")
    p.add_argument("--inputs", help="crusader inputs, e.g. 0011 or 0,0,1,1")
    p.add_argument("--votes", help="votes as T/F per participant, e.g. TTFT")
    p.add_argument("--tiebreak", default="low", choices=("low", "high"),
                   help="crusader echo2 choice when both values reach a quorum together")
    p.add_argument("--single-output", action="store_true", help="crusader: output at most one value")
    p.add_argument("--max-rounds", type=int)
    p.add_argument("--emit-model", help="write the extracted model here")
    p.add_argument("--emit-trace", help="write the message trace here")
    p.add_argument("--check", action="store_true", help="check axioms, properties and lemmas")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("search", help="search for a model of a theory that violates a property")
    p.add_argument("--theory", required=True)
    p.add_argument("--property", default="ALL", help="property name(s), comma-separated, or ALL")
    p.add_argument("--mode", default="guided", choices=checker.SEARCH_MODES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--cap", type=int, help="enumeration cap (default SEMITOP_CAP or 10^7)")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--quorum", type=int)
    p.add_argument("--values", help="value set, comma-separated")
    p.add_argument("--mutate-axiom", action="append", default=[], metavar="NAME=FORMULA")
    p.add_argument("--out", help="write a countermodel here instead of stdout")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"semitop: error: {message}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
