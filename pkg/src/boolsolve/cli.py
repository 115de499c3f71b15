"""Batch command-line front end.

Problem files are line-oriented ``key: value`` with ``#`` comments:

    unknowns: p1 p2
    parameters: t1 t2        # optional
    forbid: b                # optional, applies to every component
    forbid(p1): b            # optional, per-component restriction
    formula: (a -> b) -> ((p1 -> p2) & (a -> p2) & (p2 -> b))

Exit codes: 0 success/true, 1 no solution/false, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass

from .elimination import (
    NotIndependent,
    forall_eliminate,
    project_vocabulary,
    weakest_precondition,
)
from .formula import BoolsolveError, Formula, all_names, fresh_name
from .oracle import enumerate_solutions, check_particular
from .semantics import truth_table
from .solve import (
    NoSolution,
    NotSolvable,
    Solution,
    SolutionProblem,
    Strategy,
    WitnessFn,
    constructive_shortcut,
    exists_solution,
    solve_by_witnesses,
    solve_on_second_order,
    solve_restricted,
    solve_restricted_two_stage,
    solve_succ_elim,
)
from .syntax import parse

_IDENT = re.compile(r"[a-z][A-Za-z0-9_]*$")


class ProblemFileError(BoolsolveError):
    pass


@dataclass
class ProblemFile:
    unknowns: tuple[str, ...]
    parameters: tuple[str, ...] | None
    forbid: tuple[str, ...] | None
    per_forbid: dict[str, tuple[str, ...]]
    formula: Formula


def _idents(value: str, context: str) -> tuple[str, ...]:
    names = value.split()
    for name in names:
        if not _IDENT.match(name):
            raise ProblemFileError(f"invalid identifier {name!r} in {context}")
    return tuple(names)


def parse_problem_file(text: str) -> ProblemFile:
    seen: dict[str, str] = {}
    per_forbid: dict[str, tuple[str, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ProblemFileError(f"line {lineno}: expected 'key: value'")
        key, value = line.split(":", 1)
        key = key.strip()
        value = value.strip()
        match = re.match(r"forbid\(([^)]*)\)$", key)
        if match:
            unknown = match.group(1).strip()
            if not _IDENT.match(unknown):
                raise ProblemFileError(f"line {lineno}: invalid unknown in {key!r}")
            if unknown in per_forbid:
                raise ProblemFileError(f"line {lineno}: duplicate key {key!r}")
            per_forbid[unknown] = _idents(value, key)
            continue
        if key not in ("unknowns", "parameters", "forbid", "formula"):
            raise ProblemFileError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ProblemFileError(f"line {lineno}: duplicate key {key!r}")
        seen[key] = value
    if "unknowns" not in seen:
        raise ProblemFileError("missing 'unknowns:' line")
    if "formula" not in seen:
        raise ProblemFileError("missing 'formula:' line")
    unknowns = _idents(seen["unknowns"], "unknowns")
    parameters = (
        _idents(seen["parameters"], "parameters") if "parameters" in seen else None
    )
    forbid = _idents(seen["forbid"], "forbid") if "forbid" in seen else None
    for unknown in per_forbid:
        if unknown not in unknowns:
            raise ProblemFileError(f"forbid({unknown}): {unknown} is not an unknown")
    formula = parse(seen["formula"])
    return ProblemFile(unknowns, parameters, forbid, per_forbid, formula)


def _load(path: str) -> ProblemFile:
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_problem_file(handle.read())
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from exc


def _fresh_parameters(pf: ProblemFile) -> tuple[str, ...]:
    used = set(all_names(pf.formula)) | set(pf.unknowns) | set(pf.forbid or ())
    for atoms in pf.per_forbid.values():
        used |= set(atoms)
    out = []
    for _ in pf.unknowns:
        name = fresh_name("t", used)
        used.add(name)
        out.append(name)
    return tuple(out)


def _print_solution(unknowns: tuple[str, ...], sol: Solution) -> None:
    for name, component in zip(unknowns, sol.components):
        print(f"{name} := {component}")


def _cmd_exists(args: argparse.Namespace) -> int:
    pf = _load(args.file)
    if pf.per_forbid:
        raise ProblemFileError("per-component restrictions: use 'solve' instead")
    formula = pf.formula
    if pf.forbid:
        # Restricted solvability is solvability of the universally
        # quantified problem.
        for b in reversed(sorted(set(pf.forbid))):
            formula = forall_eliminate(b, formula)
    sp = SolutionProblem(formula, pf.unknowns)
    if exists_solution(sp):
        print("solvable")
        return 0
    print("not solvable")
    return 1


def _cmd_solve(args: argparse.Namespace) -> int:
    pf = _load(args.file)
    needs_params = (
        args.method == "succ-elim" or args.reproductive or bool(pf.per_forbid)
    )
    parameters = pf.parameters
    if parameters is None and needs_params:
        parameters = _fresh_parameters(pf)
    if args.reproductive and args.method == "witnesses":
        print("error: the witnesses method yields particular solutions", file=sys.stderr)
        return 2
    sp = SolutionProblem(pf.formula, pf.unknowns, parameters, pf.forbid)
    if pf.per_forbid:
        per_unknown = [pf.per_forbid.get(p, ()) for p in pf.unknowns]
        sol = solve_restricted_two_stage(sp, per_unknown)
        _print_solution(pf.unknowns, sol)
        return 0
    if pf.forbid:
        sol = solve_restricted(sp)
        _print_solution(pf.unknowns, sol)
        return 0
    wants_particular = not (args.method == "succ-elim" or args.reproductive)
    if args.reorder and wants_particular:
        shortcut = constructive_shortcut(sp, reorder=True)
        if shortcut is not None:
            _print_solution(pf.unknowns, shortcut)
            return 0
    if args.method == "succ-elim":
        sol = solve_succ_elim(sp)
    elif args.method == "second-order":
        strategy = Strategy.REPRODUCTIVE if args.reproductive else Strategy.INTERVAL
        sol = solve_on_second_order(sp, strategy)
    else:
        sol = solve_by_witnesses(sp, WitnessFn.F_TRUE)
    _print_solution(pf.unknowns, sol)
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    pf = _load(args.file)
    texts = [part.strip() for part in args.with_.split(";")]
    if len(texts) != len(pf.unknowns):
        print(
            f"error: expected {len(pf.unknowns)} components, got {len(texts)}",
            file=sys.stderr,
        )
        return 2
    components = [parse(text) for text in texts]
    sp = SolutionProblem(pf.formula, pf.unknowns, pf.parameters)
    report = check_particular(sp, components)
    if report.verdict:
        print("valid solution")
        return 0
    failure = report.failures[0]
    detail = f" at {failure.valuation}" if failure.valuation else ""
    print(f"not a solution: {failure.reason}{detail}")
    return 1


def _cmd_eliminate(args: argparse.Namespace) -> int:
    names = _idents(args.vars, "--vars")
    print(weakest_precondition(names, parse(args.formula)))
    return 0


def _cmd_precondition(args: argparse.Namespace) -> int:
    pf = _load(args.file)
    print(weakest_precondition(pf.unknowns, pf.formula))
    return 0


def _cmd_enumerate(args: argparse.Namespace) -> int:
    pf = _load(args.file)
    basis = _idents(args.basis, "--basis")
    sp = SolutionProblem(pf.formula, pf.unknowns)
    solutions = enumerate_solutions(sp, basis)
    if args.bits:
        print(f"basis: {' '.join(sorted(set(basis)))}")
        for sol in solutions:
            print(
                "; ".join(
                    truth_table(g, sorted(set(basis))).bit_string()
                    for g in sol.components
                )
            )
    else:
        for sol in solutions:
            print("; ".join(str(g) for g in sol.components))
    return 0 if solutions else 1


def _cmd_project(args: argparse.Namespace) -> int:
    keep = _idents(args.keep, "--keep")
    try:
        print(project_vocabulary(parse(args.formula), keep))
    except NotIndependent as exc:
        print(f"not independent: {exc}")
        return 1
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boolsolve",
        description="Solve Boolean equations over propositional formulas",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="compute a solution of a problem file")
    p_solve.add_argument(
        "--method",
        choices=["succ-elim", "second-order", "witnesses"],
        default="succ-elim",
    )
    p_solve.add_argument("--reproductive", action="store_true")
    p_solve.add_argument(
        "--reorder",
        action="store_true",
        help="retry constructive shortcuts with permuted unknowns",
    )
    p_solve.add_argument("file")
    p_solve.set_defaults(func=_cmd_solve)

    p_exists = sub.add_parser("exists", help="test solvability")
    p_exists.add_argument("file")
    p_exists.set_defaults(func=_cmd_exists)

    p_check = sub.add_parser("check", help="verify a candidate solution")
    p_check.add_argument(
        "--with", dest="with_", required=True, metavar="COMPONENTS",
        help="semicolon-separated component formulas",
    )
    p_check.add_argument("file")
    p_check.set_defaults(func=_cmd_check)

    p_elim = sub.add_parser("eliminate", help="eliminate atoms from a formula")
    p_elim.add_argument("--vars", required=True, help="atoms to eliminate")
    p_elim.add_argument("formula")
    p_elim.set_defaults(func=_cmd_eliminate)

    p_pre = sub.add_parser(
        "precondition", help="weakest antecedent making the problem solvable"
    )
    p_pre.add_argument("file")
    p_pre.set_defaults(func=_cmd_precondition)

    p_enum = sub.add_parser("enumerate", help="list all basis-function solutions")
    p_enum.add_argument("--basis", required=True, help="basis atoms")
    p_enum.add_argument("--bits", action="store_true", help="print truth-table bits")
    p_enum.add_argument("file")
    p_enum.set_defaults(func=_cmd_enumerate)

    p_proj = sub.add_parser("project", help="restrict a formula to a vocabulary")
    p_proj.add_argument("--keep", required=True, help="atoms to keep")
    p_proj.add_argument("formula")
    p_proj.set_defaults(func=_cmd_project)

    return parser


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except NoSolution as exc:
        print(f"no solution: {exc}")
        return 1
    except NotSolvable as exc:
        print(f"not solvable: {exc}")
        return 1
    except NotIndependent as exc:
        print(f"not independent: {exc}")
        return 1
    except BoolsolveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
