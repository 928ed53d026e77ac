"""Command-line driver.

Exit codes: 0 accepted / success, 1 rejected, 2 compile or validation
failure, 3 encoding ambiguity (or step budget exhausted), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import compiler, enzymes, fsa, sim
from .errors import (
    AmbiguousStep,
    DepthExceeded,
    InstantiationExhausted,
    NoConsistentLayout,
    NotCompilable,
    RestrictomatonError,
    UnknownEnzyme,
)
from .seq import format_records, parse_records
from .table import table_diff

EXIT_ACCEPT, EXIT_REJECT, EXIT_INVALID, EXIT_AMBIGUOUS, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_automaton(path: str) -> fsa.Automaton:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return fsa.parse_automaton(text)


def _check_word(word: str) -> str:
    if not word:
        raise UsageError("the input word must be non-empty")
    bad = set(word) - set(fsa.ALPHABET)
    if bad:
        raise UsageError(f"word contains symbols outside {{a, b}}: {''.join(sorted(bad))}")
    return word


def _registry():
    return enzymes.load_registry()


def _compile(args) -> tuple[fsa.Automaton, compiler.CompiledMachine]:
    aut = _read_automaton(args.automaton)
    return aut, compiler.compile_machine(aut, seed=args.seed, registry=_registry())


def cmd_compile(args) -> int:
    try:
        aut, machine = _compile(args)
    except NotCompilable as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for rule, d in machine.molecules.items():
        name = "T_" + "_".join(rule)
        (out / f"{name}.dna").write_text(format_records([(machine.transitions[rule].name, d)]))
    for q, d in machine.terminators.items():
        (out / f"term_{q}.dna").write_text(format_records([(f"term({q})", d)]))
    (out / "manifest.json").write_text(json.dumps(machine.manifest(), indent=2, sort_keys=True) + "\n")
    for err in machine.report.errors:
        print(f"validation: {err}", file=sys.stderr)
    print(f"wrote {len(machine.molecules)} transition(s), {len(machine.terminators)} terminator(s) to {out}")
    return EXIT_ACCEPT if machine.report.ok else EXIT_INVALID


def cmd_validate(args) -> int:
    try:
        _, machine = _compile(args)
    except NotCompilable as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    report = machine.report
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        for c in report.checks:
            print(f"{'PASS' if c.passed else 'FAIL'} {c.name}")
            for f in c.failures:
                print(f"     {f}")
    return EXIT_ACCEPT if report.ok else EXIT_INVALID


def _simulate(args):
    word = _check_word(args.word)
    try:
        _, machine = _compile(args)
    except NotCompilable as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID, None
    pot = sim.seed_pot(machine, word)
    registry = machine.registry
    try:
        if args.mode == "det":
            result = sim.run_deterministic(pot, args.depth, registry)
            return (EXIT_ACCEPT if result.accepted else EXIT_REJECT), [result]
        results = sim.run_exhaustive(pot, args.depth, registry, jobs=args.jobs)
    except AmbiguousStep as exc:
        print(f"ambiguous step: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS, None
    except DepthExceeded as exc:
        print(f"step budget exceeded: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS, [exc.result]
    ordered = sorted(results, key=lambda r: (not r.accepted, r.halt_reason, len(r.events)))
    accepted = any(r.accepted for r in ordered)
    return (EXIT_ACCEPT if accepted else EXIT_REJECT), ordered


def cmd_simulate(args) -> int:
    code, results = _simulate(args)
    if results is None:
        return code
    if args.mode == "det":
        payload = results[0].to_json()
    else:
        payload = {
            "accepted": code == EXIT_ACCEPT,
            "results": [r.to_json() for r in results],
        }
    print(json.dumps(payload, indent=2))
    if not args.json:
        print()
        print(sim.render_gel(sim.gel_report(results[0].pot)))
    return code


def cmd_gel(args) -> int:
    code, results = _simulate(args)
    if results is not None:
        print(sim.render_gel(sim.gel_report(results[0].pot)))
    return code


def cmd_oracle(args) -> int:
    aut = _read_automaton(args.automaton)
    word = args.word
    if set(word) - set(fsa.ALPHABET):
        raise UsageError("word contains symbols outside {a, b}")
    if args.nfa:
        accepted = fsa.run_nfa(aut, word)
        if args.json:
            print(json.dumps({"accepted": accepted}))
        else:
            print("accepted" if accepted else "rejected")
        return EXIT_ACCEPT if accepted else EXIT_REJECT
    if not aut.deterministic:
        raise UsageError("automaton is nondeterministic; use --nfa")
    v = fsa.run_dfa(aut, word)
    if args.json:
        print(json.dumps({
            "accepted": v.accepted,
            "halt_reason": v.halt_reason,
            "trace": [list(t) for t in v.trace],
        }))
    else:
        for state, symbol in v.trace:
            print(f"{state} --{symbol}-->")
        print(f"{v.final_state}: {'accepted' if v.accepted else 'rejected'} ({v.halt_reason})")
    return EXIT_ACCEPT if v.accepted else EXIT_REJECT


def cmd_table_diff(args) -> int:
    report = table_diff()
    if args.json:
        print(json.dumps({
            "counts": dict(report.counts),
            "rows": [
                {
                    "id": r.row.id,
                    "rule": list(r.row.rule),
                    "status": r.status,
                    "table": [r.row.top, r.row.bottom],
                    "derived": [r.got_top, r.got_bottom],
                    "ledger": r.ledger.category if r.ledger else None,
                }
                for r in report.rows
            ],
        }, indent=2))
    else:
        print(report.format())
    return EXIT_ACCEPT if report.ok else EXIT_REJECT


def cmd_digest(args) -> int:
    registry = _registry()
    try:
        chosen = enzymes.lookup(args.enzymes, registry)
    except UnknownEnzyme as exc:
        raise UsageError(str(exc)) from None
    try:
        records = parse_records(Path(args.duplex_file).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {args.duplex_file}: {exc.strerror}") from None
    out = []
    for name, d in records:
        frags = enzymes.digest(d, chosen)
        out += [(f"{name}.{i + 1}", f) for i, f in enumerate(frags)]
    sys.stdout.write(format_records(out))
    return EXIT_ACCEPT


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="restrictomaton", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(p, word=False, seed=True):
        p.add_argument("automaton")
        if word:
            p.add_argument("word")
        if seed:
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("compile", help="emit molecule records and a manifest")
    common(p)
    p.add_argument("--out", default="compiled")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("validate", help="run the encoding checks")
    common(p)
    p.set_defaults(func=cmd_validate)

    for verb, func in (("simulate", cmd_simulate), ("gel", cmd_gel)):
        p = sub.add_parser(verb, help="run the one-pot reaction" if verb == "simulate" else "print the gel")
        common(p, word=True)
        p.add_argument("--mode", choices=["det", "exhaustive"], default="det")
        p.add_argument("--depth", type=int, default=None)
        p.add_argument("--jobs", type=int, default=1)
        p.set_defaults(func=func)

    p = sub.add_parser("oracle", help="classical automaton verdict")
    common(p, word=True, seed=False)
    p.add_argument("--nfa", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("table-diff", help="compare compiled codes with the bundled transition table")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_table_diff)

    p = sub.add_parser("digest", help="digest duplex records with named enzymes")
    p.add_argument("duplex_file")
    p.add_argument("enzymes", nargs="+")
    p.set_defaults(func=cmd_digest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"restrictomaton: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotCompilable, InstantiationExhausted, NoConsistentLayout) as exc:
        print(f"restrictomaton: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (RestrictomatonError, ValueError) as exc:
        print(f"restrictomaton: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
