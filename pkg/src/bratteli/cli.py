"""Command line entry point.

Exit codes: 0 success, 1 negative answer to a yes/no question, 2 input
error, 3 disagreement between independent perfectness routes.
"""

from __future__ import annotations

import argparse
import sys

from . import analysis
from .diagram import BratteliDiagram, validate_diagram
from .errors import CrossCheckError, DiagramValidationError, InputError, StabilizationError
from .ideals import is_full, quotient_diagram
from .io import dumps, level_set_json, parse_ideal_spec, read_diagram, serialize_diagram, to_dot
from .subgroups import algebra_at_level
from .verify import verify_level

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_CROSSCHECK = 0, 1, 2, 3
MAX_VERIFY_DIM = 400


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _ideal_json(s) -> dict:
    return {**level_set_json(s), "describe": s.describe()}


def _witness_json(w: analysis.CharacterPath) -> dict:
    return {
        "start": str(w.start),
        "prefix": list(w.prefix),
        "cycle_start": w.cycle_start,
        "cycle": list(w.cycle),
        "single_arrow": w.single_arrow,
    }


def _lattice_warning(lattice: analysis.IdealLattice) -> None:
    if lattice.capped:
        _warn(f"enumeration stopped at the cap of {lattice.cap} ideals")
    elif not lattice.complete:
        _warn(f"enumeration may be incomplete (seeded up to level {lattice.max_seed_level})")


def _emit(args, payload: dict, text: list[str]) -> None:
    if args.json:
        sys.stdout.write(dumps({"command": args.command, **payload}))
    else:
        for line in text:
            print(line)


# -- commands ------------------------------------------------------------------

def cmd_validate(args) -> int:
    try:
        d = read_diagram(args.file, validate=False)
    except DiagramValidationError as exc:  # pragma: no cover - validate=False never raises it
        report = exc.report
    else:
        report = validate_diagram(d)
    issues = [{"kind": i.kind, "where": i.where, "message": i.message} for i in report.issues]
    text = ["valid"] if report.ok else ["invalid"] + [f"  {i}" for i in report.issues]
    _emit(args, {"valid": report.ok, "issues": issues}, text)
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_ideals(args) -> int:
    d = read_diagram(args.file)
    lattice = analysis.enumerate_ideals(d, args.max_level, args.cap)
    _lattice_warning(lattice)
    payload = {
        "count": len(lattice),
        "complete": lattice.complete,
        "capped": lattice.capped,
        "max_seed_level": lattice.max_seed_level,
        "ideals": [_ideal_json(s) for s in lattice],
    }
    text = [f"{len(lattice)} ideal(s), {'complete' if lattice.complete else 'possibly incomplete'}"]
    text += [f"  [{n}] {s.describe()}" for n, s in enumerate(lattice)]
    _emit(args, payload, text)
    return EXIT_OK


def cmd_perfect(args) -> int:
    d = read_diagram(args.file)
    s = parse_ideal_spec(d, args.ideal)
    v = analysis.perfectness_check(d, s)
    rep = v.report
    payload = {
        "ideal": _ideal_json(s),
        "perfect": v.perfect,
        "characters": rep.count if rep.count is not None else "infinite",
        "witnesses": [_witness_json(w) for w in rep.witnesses],
        "criteria": {
            "character_oracle": v.character_oracle,
            "closure": v.closure_criterion,
            "path": v.path_criterion,
            "strict_path": v.strict_path_criterion,
        },
        "consistent": v.consistent,
        "divergent": v.divergent,
    }
    text = [f"perfect: {'true' if v.perfect else 'false'}, characters: {rep.count_label}"]
    text += [f"  witness {w.describe()}" for w in rep.witnesses]
    _emit(args, payload, text)
    if not v.consistent or v.divergent:
        print("cross-check: perfectness routes disagree "
              f"(characters {v.character_oracle}, closure {v.closure_criterion}, "
              f"path {v.path_criterion}, single-arrow path {v.strict_path_criterion})", file=sys.stderr)
        return EXIT_CROSSCHECK
    return EXIT_OK if v.perfect else EXIT_NEGATIVE


def cmd_largest_perfect(args) -> int:
    d = read_diagram(args.file)
    s = parse_ideal_spec(d, args.ideal)
    lp = analysis.largest_perfect(d, s)
    _emit(args, {"ideal": _ideal_json(s), "largest_perfect": _ideal_json(lp)}, [lp.describe()])
    return EXIT_OK


def cmd_characters(args) -> int:
    d = read_diagram(args.file)
    s = parse_ideal_spec(d, args.ideal)
    rep = analysis.characters(d, s)
    payload = {
        "ideal": _ideal_json(s),
        "count": rep.count if rep.count is not None else "infinite",
        "witnesses": [_witness_json(w) for w in rep.witnesses],
        "cycles": [[str(v) for v in c] for c in rep.cycles],
    }
    text = [f"characters: {rep.count_label}"]
    text += [f"  {w.describe()}" for w in rep.witnesses]
    text += ["  cycle " + " ".join(map(str, c)) for c in rep.cycles]
    _emit(args, payload, text)
    return EXIT_OK


def cmd_normal_subgroups(args) -> int:
    d = read_diagram(args.file)
    ns = analysis.normal_subgroups_of_VA(d, args.max_level, args.cap)
    _lattice_warning(ns.lattice)
    payload = {
        "count": len(ns),
        "complete": ns.complete,
        "subgroups": [{"label": x.label, "ideal": _ideal_json(x.ideal), "note": x.sandwich_note}
                      for x in ns],
    }
    text = [f"{len(ns)} closed normal subgroup(s) of V_A"]
    text += [f"  {x.label}: V_I for I = {x.ideal.describe()}" for x in ns]
    _emit(args, payload, text)
    return EXIT_OK


def cmd_simplicity(args) -> int:
    d = read_diagram(args.file)
    rep = analysis.simplicity_report(d, args.max_level, args.cap)
    payload = {
        "holds": rep.holds,
        "conclusive": rep.conclusive,
        "perfect_ideals": [_ideal_json(s) for s in rep.perfect_ideals],
        "commutator_ideal": _ideal_json(rep.commutator_ideal),
    }
    _emit(args, payload, rep.message.splitlines())
    if not rep.conclusive:
        _warn("enumeration incomplete; simplicity verdict is not conclusive")
    return EXIT_OK if rep.holds else EXIT_NEGATIVE


def cmd_quotient(args) -> int:
    d = read_diagram(args.file)
    s = parse_ideal_spec(d, args.ideal)
    if is_full(d, s):
        _warn("quotient by the whole algebra is zero")
    text = serialize_diagram(quotient_diagram(d, s))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_dot(args) -> int:
    d = read_diagram(args.file)
    s = parse_ideal_spec(d, args.ideal) if args.ideal is not None else None
    sys.stdout.write(to_dot(d, s))
    return EXIT_OK


def cmd_verify(args) -> int:
    d: BratteliDiagram = read_diagram(args.file)
    s = parse_ideal_spec(d, args.ideal)
    A, S = algebra_at_level(d, args.level, s)
    if A.dimension > MAX_VERIFY_DIM:
        raise InputError(f"level {args.level} has dimension {A.dimension}; "
                         f"dense checks are limited to {MAX_VERIFY_DIM}")
    if args.trials < 1:
        raise InputError("--trials must be >= 1")
    results = verify_level(A, S, args.trials, args.seed)
    payload = {
        "level": args.level,
        "blocks": list(A.block_dims),
        "ideal_blocks": sorted(S),
        "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
    }
    text = [f"level {args.level}: blocks {list(A.block_dims)}, ideal blocks {sorted(S)}"]
    text += [r.line() for r in results]
    _emit(args, payload, text)
    return EXIT_OK if all(r.passed for r in results) else EXIT_NEGATIVE


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bratteli", description=(
        "Ideals, perfect ideals, characters and normal subgroups of AF algebras "
        "given by Bratteli diagrams."))
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help, ideal=False, lattice=False, json=True):
        p = sub.add_parser(name, help=help)
        p.add_argument("file", help="diagram file")
        if ideal:
            p.add_argument("--ideal", metavar="SPEC",
                           help="generator vertices 'p:i,p:i,...' (closure applied); default: whole diagram")
        if lattice:
            p.add_argument("--max-level", type=int, default=None, metavar="L",
                           help="seed ideals from vertices at levels <= L")
            p.add_argument("--cap", type=int, default=analysis.DEFAULT_CAP, metavar="N",
                           help="stop after N ideals (default %(default)s)")
        if json:
            p.add_argument("--json", action="store_true", help="emit JSON (schema v1)")
        p.set_defaults(func=func)
        return p

    command("validate", cmd_validate, "check the diagram invariants")
    command("ideals", cmd_ideals, "enumerate the ideal lattice", lattice=True)
    command("perfect", cmd_perfect, "is the ideal perfect?", ideal=True)
    command("largest-perfect", cmd_largest_perfect, "largest perfect ideal inside an ideal", ideal=True)
    command("characters", cmd_characters, "characters of an ideal", ideal=True)
    command("normal-subgroups", cmd_normal_subgroups, "closed normal subgroups of V_A", lattice=True)
    command("simplicity", cmd_simplicity, "are the only perfect ideals 0 and Id([A,A])?", lattice=True)
    q = command("quotient", cmd_quotient, "diagram of the quotient algebra", ideal=True, json=False)
    q.add_argument("-o", "--output", help="write the diagram here instead of stdout")
    command("dot", cmd_dot, "Graphviz export", ideal=True, json=False)
    v = command("verify", cmd_verify, "run the matrix checks at one level", ideal=True)
    v.add_argument("--level", type=int, required=True, metavar="P")
    v.add_argument("--trials", type=int, default=20, metavar="T")
    v.add_argument("--seed", type=int, default=0, metavar="S")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "cap", 2) < 2 or (getattr(args, "max_level", None) or 0) < 0:
        print("error: --cap must be >= 2 and --max-level >= 0", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except CrossCheckError as exc:
        print(f"cross-check: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    except (InputError, StabilizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
