"""Brute-force ground truth over a finite function basis.

Candidate solution components range over every Boolean function of the
basis atoms, represented canonically as full-DNF formulas.  The checks
mirror the solution-type definitions exactly: particular (substitutible
and valid), reproductive (every parameter instantiation solves, and
every enumerated solution is reproduced) and general (every enumerated
solution is reachable by some instantiation).

Internally candidates are composed as truth tables, which is exact for
quantifier-free material; anything involving quantifiers falls back to
literal substitution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

from .formula import (
    AtomSet,
    BoolsolveError,
    Formula,
    free_atoms,
    has_quantifier,
    is_substitutible,
    substitute,
)
from .semantics import (
    TruthTable,
    atom_patterns,
    decode_valuation,
    equivalent,
    falsifying_valuation,
    formula_from_table,
    formula_mask,
)
from .solve import Solution, SolutionKind, SolutionProblem

MAX_BASIS = 3
MAX_UNKNOWNS = 2


class TooLarge(BoolsolveError):
    pass


class FunctionSpace:
    """All Boolean functions over a basis, in table-bits integer order.

    Tables are plain ints (bit i = value at valuation i); truth tables
    and canonical formulas are materialized on demand.
    """

    def __init__(self, basis: Sequence[str]):
        self.basis: AtomSet = tuple(sorted(set(basis)))
        self.tables: range = range(1 << (1 << len(self.basis)))
        self._formulas: dict[int, Formula] = {}

    def __len__(self) -> int:
        return len(self.tables)

    @property
    def functions(self) -> list[TruthTable]:
        return [TruthTable.from_int(t, self.basis) for t in self.tables]

    def formula(self, table: int) -> Formula:
        if table not in self._formulas:
            self._formulas[table] = formula_from_table(
                TruthTable.from_int(table, self.basis)
            )
        return self._formulas[table]

    @property
    def formulas(self) -> list[Formula]:
        return [self.formula(t) for t in self.tables]


@dataclass(frozen=True)
class CheckFailure:
    subject: str
    reason: str
    valuation: dict[str, bool] | None = None


@dataclass(frozen=True)
class CheckReport:
    verdict: bool
    failures: tuple[CheckFailure, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.verdict != (not self.failures):
            raise ValueError("verdict must match emptiness of failures")


def _guard(basis: Sequence[str], unknowns: Sequence[str], allow_large: bool) -> None:
    if allow_large:
        return
    if len(set(basis)) > MAX_BASIS or len(unknowns) > MAX_UNKNOWNS:
        raise TooLarge(
            f"basis of {len(set(basis))} atoms with {len(unknowns)} unknowns "
            f"exceeds the cost guard ({MAX_BASIS} atoms, {MAX_UNKNOWNS} unknowns); "
            "pass allow_large=True to override"
        )


class _Composer:
    """Row bookkeeping for evaluating F[p := candidate functions] on tables."""

    def __init__(self, sp: SolutionProblem, basis: AtomSet, extra: Sequence[str] = ()):
        self.sp = sp
        self.basis = basis
        eval_names = (set(free_atoms(sp.formula)) - set(sp.unknowns)) | set(basis)
        eval_names |= set(extra)
        self.eval_names: AtomSet = tuple(sorted(eval_names))
        self.all_names: AtomSet = tuple(sorted(eval_names | set(sp.unknowns)))
        self.formula_mask = formula_mask(sp.formula, self.all_names)
        positions = {a: i for i, a in enumerate(self.all_names)}
        self.unknown_positions = [positions[p] for p in sp.unknowns]
        eval_positions = [positions[a] for a in self.eval_names]
        basis_in_eval = [self.eval_names.index(b) for b in basis]
        self.rows: list[tuple[int, int]] = []  # (scattered base row, basis index)
        for w in range(1 << len(self.eval_names)):
            row = 0
            for k, pos in enumerate(eval_positions):
                if (w >> k) & 1:
                    row |= 1 << pos
            basis_idx = 0
            for k, src in enumerate(basis_in_eval):
                if (w >> src) & 1:
                    basis_idx |= 1 << k
            self.rows.append((row, basis_idx))

    def failing_valuation(self, tables: Sequence[int]) -> int | None:
        """Index (over eval_names) of a valuation falsifying
        F[candidates], or None when all pass."""
        fmask = self.formula_mask
        upos = self.unknown_positions
        for w, (row, basis_idx) in enumerate(self.rows):
            for j, pos in enumerate(upos):
                if (tables[j] >> basis_idx) & 1:
                    row |= 1 << pos
            if not (fmask >> row) & 1:
                return w
        return None


def _solution_tables(
    sp: SolutionProblem, space: FunctionSpace, composer: _Composer
) -> Iterator[tuple[int, ...]]:
    quantified = has_quantifier(sp.formula)
    n = len(sp.unknowns)
    for tables in product(space.tables, repeat=n):
        if composer.failing_valuation(tables) is not None:
            continue
        if quantified:
            components = [space.formula(t) for t in tables]
            if not is_substitutible(components, sp.unknowns, sp.formula):
                continue
        yield tables


def enumerate_solutions(
    sp: SolutionProblem, basis: Sequence[str], allow_large: bool = False
) -> list[Solution]:
    """Every tuple of basis functions that is a particular solution, as
    canonical full-DNF formulas, in enumeration order."""
    basis_t = tuple(sorted(set(basis)))
    if set(basis_t) & set(sp.unknowns):
        raise ValueError("basis atoms must not be unknowns")
    _guard(basis_t, sp.unknowns, allow_large)
    space = FunctionSpace(basis_t)
    composer = _Composer(sp, basis_t)
    out = []
    for tables in _solution_tables(sp, space, composer):
        out.append(
            Solution([space.formula(t) for t in tables], SolutionKind.PARTICULAR)
        )
    return out


def any_enumerated_solution(
    sp: SolutionProblem, basis: Sequence[str], allow_large: bool = False
) -> bool:
    """Early-exiting nonemptiness test for ``enumerate_solutions``."""
    basis_t = tuple(sorted(set(basis)))
    if set(basis_t) & set(sp.unknowns):
        raise ValueError("basis atoms must not be unknowns")
    _guard(basis_t, sp.unknowns, allow_large)
    space = FunctionSpace(basis_t)
    composer = _Composer(sp, basis_t)
    return next(_solution_tables(sp, space, composer), None) is not None


def check_particular(sp: SolutionProblem, sol: Sequence[Formula]) -> CheckReport:
    """Substitutibility plus validity of the substituted formula."""
    label = "(" + ", ".join(str(g) for g in sol) + ")"
    if len(sol) != len(sp.unknowns):
        return CheckReport(
            False, (CheckFailure(label, "component count differs from unknown count"),)
        )
    if not is_substitutible(sol, sp.unknowns, sp.formula):
        return CheckReport(False, (CheckFailure(label, "NotSubstitutible"),))
    counterexample = falsifying_valuation(
        substitute(sp.formula, sp.unknowns, sol)
    )
    if counterexample is not None:
        return CheckReport(
            False, (CheckFailure(label, "substituted formula falsified", counterexample),)
        )
    return CheckReport(True)


def _components_mention_unknowns(sp: SolutionProblem, sol: Sequence[Formula]) -> bool:
    unknowns = set(sp.unknowns)
    return any(set(free_atoms(g)) & unknowns for g in sol)


class _ReproductiveChecker:
    """Shared table machinery for the reproductive and general checks."""

    def __init__(self, sp: SolutionProblem, sol: Sequence[Formula], basis: AtomSet):
        if sp.parameters is None:
            raise ValueError("the problem carries no parameters")
        self.sp = sp
        self.sol = tuple(sol)
        self.basis = basis
        self.params = sp.parameters
        extra = set()
        for g in sol:
            extra |= set(free_atoms(g)) - set(self.params)
        self.composer = _Composer(sp, basis, extra=tuple(extra))
        self.space = FunctionSpace(basis)
        eval_names = self.composer.eval_names
        comp_names = tuple(sorted(set(eval_names) | set(self.params)))
        patterns = atom_patterns(comp_names)
        self.comp_masks = [formula_mask(g, comp_names, patterns) for g in sol]
        positions = {a: i for i, a in enumerate(comp_names)}
        self.param_positions = [positions[t] for t in self.params]
        eval_positions = [positions[a] for a in eval_names]
        self.comp_rows: list[int] = []
        for w in range(1 << len(eval_names)):
            row = 0
            for k, pos in enumerate(eval_positions):
                if (w >> k) & 1:
                    row |= 1 << pos
            self.comp_rows.append(row)

    def instantiated_tables(self, t_tables: Sequence[int]) -> list[int]:
        """Tables over eval_names of each component with the parameters
        replaced by the given basis functions."""
        out = []
        basis_rows = self.composer.rows
        ppos = self.param_positions
        for mask in self.comp_masks:
            table = 0
            for w, comp_row in enumerate(self.comp_rows):
                basis_idx = basis_rows[w][1]
                row = comp_row
                for j, pos in enumerate(ppos):
                    if (t_tables[j] >> basis_idx) & 1:
                        row |= 1 << pos
                if (mask >> row) & 1:
                    table |= 1 << w
            out.append(table)
        return out

    def check_solution_tables(self, inst_tables: Sequence[int]) -> int | None:
        """Falsifying eval_names valuation index of F[instantiation]."""
        fmask = self.composer.formula_mask
        upos = self.composer.unknown_positions
        for w, (row, _) in enumerate(self.composer.rows):
            for j, pos in enumerate(upos):
                if (inst_tables[j] >> w) & 1:
                    row |= 1 << pos
            if not (fmask >> row) & 1:
                return w
        return None

    def extend_basis_table(self, table: int) -> int:
        """Broadcast a basis-function table to one over eval_names."""
        out = 0
        for w, (_, basis_idx) in enumerate(self.composer.rows):
            if (table >> basis_idx) & 1:
                out |= 1 << w
        return out

    def tuple_label(self, tables: Sequence[int]) -> str:
        return "(" + ", ".join(str(self.space.formula(t)) for t in tables) + ")"


def _instantiation_failures(
    checker: _ReproductiveChecker, limit: int = 5
) -> list[CheckFailure]:
    """Failures of the all-instantiations clause: every tuple of basis
    functions substituted for the parameters must solve the problem."""
    failures: list[CheckFailure] = []
    n = len(checker.params)
    for t_tables in product(checker.space.tables, repeat=n):
        inst = checker.instantiated_tables(t_tables)
        bad = checker.check_solution_tables(inst)
        if bad is not None:
            failures.append(
                CheckFailure(
                    f"instantiation T = {checker.tuple_label(t_tables)}",
                    "instantiated components do not solve the problem",
                    decode_valuation(bad, checker.composer.eval_names),
                )
            )
            if len(failures) >= limit:
                break
    return failures


def _slow_instantiation_failures(
    sp: SolutionProblem, sol: Sequence[Formula], space: FunctionSpace, limit: int = 5
) -> list[CheckFailure]:
    failures: list[CheckFailure] = []
    params = sp.parameters or ()
    for ts in product(space.formulas, repeat=len(params)):
        label = "instantiation T = (" + ", ".join(str(t) for t in ts) + ")"
        try:
            inst = [substitute(g, params, list(ts)) for g in sol]
            report = check_particular(sp, inst)
        except BoolsolveError as exc:
            failures.append(CheckFailure(label, str(exc)))
        else:
            if not report.verdict:
                first = report.failures[0]
                failures.append(CheckFailure(label, first.reason, first.valuation))
        if len(failures) >= limit:
            return failures
    return failures


def check_parametric(
    sp: SolutionProblem,
    sol: Sequence[Formula],
    basis: Sequence[str],
    allow_large: bool = False,
) -> CheckReport:
    """Parametric-solution check: every instantiation of the parameters
    with basis functions must be a particular solution."""
    basis_t = tuple(sorted(set(basis)))
    _guard(basis_t, sp.unknowns, allow_large)
    if sp.parameters is None:
        raise ValueError("parametric check needs a problem with parameters")
    if _components_mention_unknowns(sp, sol):
        return CheckReport(
            False, (CheckFailure("components", "components mention an unknown"),)
        )
    if has_quantifier(sp.formula) or any(has_quantifier(g) for g in sol):
        failures = _slow_instantiation_failures(sp, sol, FunctionSpace(basis_t))
    else:
        failures = _instantiation_failures(_ReproductiveChecker(sp, sol, basis_t))
    return CheckReport(not failures, tuple(failures))


def check_reproductive(
    sp: SolutionProblem,
    sol: Sequence[Formula],
    basis: Sequence[str],
    allow_large: bool = False,
) -> CheckReport:
    """Reproductive-solution check against the basis function space.

    Clause (a): every instantiation of the parameters with basis
    functions is a particular solution.  Clause (b): for every
    enumerated particular solution H, substituting H for the parameters
    reproduces H up to equivalence.
    """
    basis_t = tuple(sorted(set(basis)))
    _guard(basis_t, sp.unknowns, allow_large)
    if sp.parameters is None:
        raise ValueError("reproductive check needs a problem with parameters")
    if _components_mention_unknowns(sp, sol):
        return CheckReport(
            False, (CheckFailure("components", "components mention an unknown"),)
        )
    slow = has_quantifier(sp.formula) or any(has_quantifier(g) for g in sol)
    if slow:
        return _check_reproductive_slow(sp, sol, basis_t, allow_large)
    checker = _ReproductiveChecker(sp, sol, basis_t)
    failures = _instantiation_failures(checker)
    composer = _Composer(sp, basis_t)
    space = checker.space
    for h_tables in _solution_tables(sp, space, composer):
        reproduced = checker.instantiated_tables(h_tables)
        for i, h in enumerate(h_tables):
            if reproduced[i] != checker.extend_basis_table(h):
                failures.append(
                    CheckFailure(
                        f"solution H = {checker.tuple_label(h_tables)}",
                        f"component {i + 1} is not reproduced",
                    )
                )
                break
    return CheckReport(not failures, tuple(failures))


def _check_reproductive_slow(
    sp: SolutionProblem, sol: Sequence[Formula], basis: AtomSet, allow_large: bool
) -> CheckReport:
    space = FunctionSpace(basis)
    failures = _slow_instantiation_failures(sp, sol, space)
    params = sp.parameters or ()
    for h_sol in enumerate_solutions(sp, basis, allow_large):
        h = h_sol.components
        label = "solution H = (" + ", ".join(str(g) for g in h) + ")"
        try:
            reproduced = [substitute(g, params, list(h)) for g in sol]
        except BoolsolveError as exc:
            failures.append(CheckFailure(label, str(exc)))
            continue
        for i, (r, original) in enumerate(zip(reproduced, h)):
            if not equivalent(r, original):
                failures.append(
                    CheckFailure(label, f"component {i + 1} is not reproduced")
                )
                break
    return CheckReport(not failures, tuple(failures))


def check_general(
    sp: SolutionProblem,
    sol: Sequence[Formula],
    basis: Sequence[str],
    allow_large: bool = False,
) -> CheckReport:
    """General-solution check against the basis function space.

    Clause (a) as for the reproductive check; clause (b'): every
    enumerated particular solution equals some instantiation of the
    candidate with basis functions.
    """
    basis_t = tuple(sorted(set(basis)))
    _guard(basis_t, sp.unknowns, allow_large)
    if sp.parameters is None:
        raise ValueError("general check needs a problem with parameters")
    if _components_mention_unknowns(sp, sol):
        return CheckReport(
            False, (CheckFailure("components", "components mention an unknown"),)
        )
    if has_quantifier(sp.formula) or any(has_quantifier(g) for g in sol):
        return _check_general_slow(sp, sol, basis_t, allow_large)
    checker = _ReproductiveChecker(sp, sol, basis_t)
    failures = _instantiation_failures(checker)
    composer = _Composer(sp, basis_t)
    space = checker.space
    images: list[tuple[int, ...]] = [
        tuple(checker.instantiated_tables(t_tables))
        for t_tables in product(space.tables, repeat=len(checker.params))
    ]
    image_set = set(images)
    for h_tables in _solution_tables(sp, space, composer):
        extended = tuple(checker.extend_basis_table(h) for h in h_tables)
        if extended not in image_set:
            failures.append(
                CheckFailure(
                    f"solution H = {checker.tuple_label(h_tables)}",
                    "not reachable by any parameter instantiation",
                )
            )
    return CheckReport(not failures, tuple(failures))


def _check_general_slow(
    sp: SolutionProblem, sol: Sequence[Formula], basis: AtomSet, allow_large: bool
) -> CheckReport:
    space = FunctionSpace(basis)
    failures = _slow_instantiation_failures(sp, sol, space)
    params = sp.parameters or ()
    for h_sol in enumerate_solutions(sp, basis, allow_large):
        h = h_sol.components
        label = "solution H = (" + ", ".join(str(g) for g in h) + ")"
        reached = False
        for ts in product(space.formulas, repeat=len(params)):
            try:
                image = [substitute(g, params, list(ts)) for g in sol]
            except BoolsolveError:
                continue
            if all(equivalent(r, original) for r, original in zip(image, h)):
                reached = True
                break
        if not reached:
            failures.append(
                CheckFailure(label, "not reachable by any parameter instantiation")
            )
    return CheckReport(not failures, tuple(failures))
