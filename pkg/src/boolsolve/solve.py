"""Solvers for Boolean solution problems.

A solution problem pairs a formula with an ordered list of unknown
atoms; solving means finding replacement formulas that make the formula
valid.  Reproductive solutions additionally carry parameter atoms and
represent every particular solution: substituting any particular
solution for the parameters reproduces it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from typing import Sequence

from .formula import (
    BOT,
    TOP,
    And,
    Atom,
    AtomSet,
    BoolsolveError,
    Exists,
    Formula,
    Implies,
    Not,
    Or,
    Polarity,
    all_names,
    clean_variant,
    conj,
    exists,
    free_atoms,
    fresh_name,
    is_substitutible,
    polarity_of,
    substitute,
)
from .elimination import (
    NotIndependent,
    ackermann_rewrite,
    elim_witness,
    elim_witness_dnf,
    eliminate_all,
    forall_eliminate,
    project_vocabulary,
    shannon_eliminate,
)
from .semantics import (
    TruthTable,
    entails,
    equivalent,
    falsifying_valuation,
    formula_from_table,
    is_valid,
    simplify,
)


class NoSolution(BoolsolveError):
    pass


class MissingParameters(BoolsolveError):
    pass


class NotSolvable(BoolsolveError):
    pass


class NotAParticularSolution(BoolsolveError):
    pass


class InternalCheckFailed(BoolsolveError):
    pass


class ProjectionFailed(BoolsolveError):
    pass


class SolutionKind(Enum):
    PARTICULAR = "particular"
    REPRODUCTIVE = "reproductive"


class Strategy(Enum):
    INTERVAL = "interval"
    REPRODUCTIVE = "reproductive"


class WitnessFn(Enum):
    F_TRUE = "f-true"
    DNF_EHW = "dnf-ehw"
    ACKERMANN_THEN_F_TRUE = "ackermann-then-f-true"


class SchroederVariant(Enum):
    A_OR_BT = "a-or-bt"  # A | (B & t)
    B_AND_AT = "b-and-at"  # B & (A | t)
    CASE_SPLIT = "case-split"  # (A & ~t) | (B & t)


@dataclass(frozen=True)
class SolutionProblem:
    """A formula with ordered unknowns, optional parameters and an
    optional set of atoms forbidden in solution components."""

    formula: Formula
    unknowns: tuple[str, ...]
    parameters: tuple[str, ...] | None = None
    forbidden: AtomSet | None = None

    def __init__(
        self,
        formula: Formula,
        unknowns: Sequence[str],
        parameters: Sequence[str] | None = None,
        forbidden: Sequence[str] | None = None,
    ):
        object.__setattr__(self, "formula", formula)
        object.__setattr__(self, "unknowns", tuple(unknowns))
        object.__setattr__(
            self, "parameters", None if parameters is None else tuple(parameters)
        )
        object.__setattr__(
            self, "forbidden", None if forbidden is None else tuple(sorted(set(forbidden)))
        )
        self._validate()

    def _validate(self) -> None:
        if len(set(self.unknowns)) != len(self.unknowns):
            raise ValueError("unknowns must be distinct")
        if self.parameters is not None:
            if len(set(self.parameters)) != len(self.parameters):
                raise ValueError("parameters must be distinct")
            if len(self.parameters) != len(self.unknowns):
                raise ValueError("one parameter per unknown is required")
            clash = (set(free_atoms(self.formula)) | set(self.unknowns)) & set(
                self.parameters
            )
            if clash:
                raise ValueError(f"parameters must be fresh, clashing: {sorted(clash)}")
        if self.forbidden is not None and set(self.forbidden) & set(self.unknowns):
            raise ValueError("forbidden atoms must not be unknowns")


@dataclass(frozen=True)
class Solution:
    components: tuple[Formula, ...]
    kind: SolutionKind

    def __init__(self, components: Sequence[Formula], kind: SolutionKind):
        object.__setattr__(self, "components", tuple(components))
        object.__setattr__(self, "kind", kind)


def exists_solution(sp: SolutionProblem) -> bool:
    """Solvability test: validity of the formula under an existential
    prefix over the unknowns."""
    return is_valid(exists(sp.unknowns, sp.formula))


def _strip_exists_prefix(f: Formula, keep: str) -> tuple[list[str], Formula]:
    names: list[str] = []
    while isinstance(f, Exists) and f.var != keep:
        names.append(f.var)
        f = f.body
    return names, f


def _interval_bounds(f: Formula, p: str) -> tuple[Formula, Formula]:
    """(lower, upper) cofactor bounds of the unknown ``p`` after
    eliminating any leading existential prefix of ``f``."""
    prefix, body = _strip_exists_prefix(f, p)
    core = clean_variant(eliminate_all(prefix, body))
    lower = simplify(Not(substitute(core, [p], [BOT])))
    upper = simplify(substitute(core, [p], [TOP]))
    return lower, upper


def solve1_interval(f: Formula, p: str) -> Formula:
    """Deterministic particular solution of a unary problem: the lower
    bound of the solution interval.

    Any leading existential prefix (unprocessed unknowns) is eliminated
    first.  Every solution G satisfies lower |= G |= upper; the lower
    bound itself is returned.
    """
    lower, upper = _interval_bounds(f, p)
    if not is_valid(Or(upper, Not(lower))):
        raise NoSolution(f"no value for {p} makes the formula valid")
    return lower


def solve1_reproductive(f: Formula, p: str, t: str) -> Formula:
    """Reproductive solution of a unary problem with parameter ``t``:
    ``(lower & ~t) | (upper & t)``.

    Substituting any particular solution H for ``t`` yields a formula
    equivalent to H, so the result represents the whole solution set.
    """
    if t == p or t in free_atoms(f):
        raise ValueError(f"parameter {t} must be fresh")
    lower, upper = _interval_bounds(f, p)
    if not is_valid(Or(upper, Not(lower))):
        raise NoSolution(f"no value for {p} makes the formula valid")
    return simplify(Or(And(lower, Not(Atom(t))), And(upper, Atom(t))))


def schroeder_interpolant(
    aF: Formula, bF: Formula, t: str, variant: SchroederVariant
) -> Formula:
    """Reproductive solution of ``(A -> p) & (p -> B)`` with parameter t.

    Requires A |= B (otherwise no solution exists).  The three variants
    are pairwise equivalent as formulas in t:
    ``A | (B & t)``, ``B & (A | t)`` and ``(A & ~t) | (B & t)``.
    """
    if t in free_atoms(aF) or t in free_atoms(bF):
        raise ValueError(f"parameter {t} must be fresh")
    if not entails(aF, bF):
        raise NotSolvable("lower bound does not entail upper bound")
    ta = Atom(t)
    if variant is SchroederVariant.A_OR_BT:
        built = Or(aF, And(bF, ta))
    elif variant is SchroederVariant.B_AND_AT:
        built = And(bF, Or(aF, ta))
    else:
        built = Or(And(aF, Not(ta)), And(bF, ta))
    return simplify(built)


def _require_parameters(sp: SolutionProblem) -> tuple[str, ...]:
    if sp.parameters is None:
        raise MissingParameters("this solver needs one fresh parameter per unknown")
    return sp.parameters


def _prepared(sp: SolutionProblem) -> Formula:
    avoid = set(sp.unknowns) | set(sp.parameters or ())
    return clean_variant(sp.formula, avoid=avoid)


def solve_on_second_order(sp: SolutionProblem, strategy: Strategy) -> Solution:
    """Left-to-right reduction to unary problems.

    Unknown i is solved in the formula with the already-computed
    components substituted and the remaining unknowns existentially
    quantified.  With the reproductive strategy each unary step uses its
    parameter, and the composed result is itself reproductive.
    """
    if not exists_solution(sp):
        raise NoSolution("the existential closure over the unknowns is not valid")
    params = _require_parameters(sp) if strategy is Strategy.REPRODUCTIVE else None
    work = _prepared(sp)
    components: list[Formula] = []
    for i, p in enumerate(sp.unknowns):
        cur = substitute(work, sp.unknowns[:i], components)
        unary = exists(sp.unknowns[i + 1 :], cur)
        if strategy is Strategy.INTERVAL:
            g = solve1_interval(unary, p)
        else:
            assert params is not None
            g = solve1_reproductive(unary, p, params[i])
        components.append(g)
    kind = (
        SolutionKind.REPRODUCTIVE
        if strategy is Strategy.REPRODUCTIVE
        else SolutionKind.PARTICULAR
    )
    return Solution(components, kind)


def solve_succ_elim_stages(sp: SolutionProblem) -> tuple[Formula, ...]:
    """The stored intermediate formulas of successive elimination:
    element i is the input with unknowns i+1..n eliminated."""
    work = _prepared(sp)
    stages = [work]
    for p in reversed(sp.unknowns):
        work = shannon_eliminate(p, work)
        stages.append(work)
    return tuple(reversed(stages))


def solve_succ_elim(sp: SolutionProblem) -> Solution:
    """The method of successive eliminations.

    Phase 1 eliminates the unknowns last-to-first, storing each
    intermediate formula.  Phase 2 walks first-to-last and emits for
    unknown i the reproductive unary solution
    ``(~F_i[G.. false] & ~t_i) | (F_i[G.. true] & t_i)`` built from the
    stored formula F_i with the earlier components substituted.
    """
    params = _require_parameters(sp)
    if not exists_solution(sp):
        raise NoSolution("the existential closure over the unknowns is not valid")
    stages = solve_succ_elim_stages(sp)
    components: list[Formula] = []
    for i, p in enumerate(sp.unknowns):
        stage = stages[i + 1]  # formula with unknowns 1..i still present
        ps = list(sp.unknowns[: i + 1])
        lower = simplify(Not(substitute(stage, ps, [*components, BOT])))
        upper = simplify(substitute(stage, ps, [*components, TOP]))
        t = Atom(params[i])
        components.append(simplify(Or(And(lower, Not(t)), And(upper, t))))
    return Solution(components, SolutionKind.REPRODUCTIVE)


def _witness_for(fn: WitnessFn, p: str, f: Formula) -> Formula:
    if fn is WitnessFn.F_TRUE:
        return elim_witness(p, f).witness
    if fn is WitnessFn.DNF_EHW:
        return elim_witness_dnf(p, f).witness
    result = ackermann_rewrite(p, f)
    if result is not None:
        return result.witness
    return elim_witness(p, f).witness


def solve_by_witnesses(
    sp: SolutionProblem, witness_fn: WitnessFn = WitnessFn.F_TRUE
) -> Solution:
    """Right-to-left elimination-witness computation with back-substitution.

    Unknown i receives a witness computed in the formula with the later
    components already substituted; each new component is then folded
    into all later ones, so the final components contain no unknowns.
    """
    if not exists_solution(sp):
        raise NoSolution("the existential closure over the unknowns is not valid")
    work = _prepared(sp)
    tail: list[Formula] = []  # components for the unknowns after position i
    for i in range(len(sp.unknowns) - 1, -1, -1):
        cur = substitute(work, sp.unknowns[i + 1 :], tail)
        g = _witness_for(witness_fn, sp.unknowns[i], cur)
        tail = [g] + [substitute(h, [sp.unknowns[i]], [g]) for h in tail]
    return Solution(tail, SolutionKind.PARTICULAR)


def _check_is_particular(sp: SolutionProblem, components: Sequence[Formula]) -> None:
    if len(components) != len(sp.unknowns):
        raise NotAParticularSolution("component count differs from unknown count")
    if not is_substitutible(components, sp.unknowns, sp.formula):
        raise NotAParticularSolution("components are not substitutible")
    if not is_valid(substitute(sp.formula, sp.unknowns, components)):
        raise NotAParticularSolution("substituted formula is not valid")


def rigorous_solution(sp: SolutionProblem, particular: Solution) -> Solution:
    """Reproductive solution grown from any particular one.

    Component i is ``(G_i & ~F[t..]) | (t_i & F[t..])`` where F[t..] is
    the problem formula with every unknown replaced by its parameter:
    substituting a solution for the parameters makes F[t..] valid and
    reproduces that solution.
    """
    params = _require_parameters(sp)
    if particular.kind is not SolutionKind.PARTICULAR:
        raise NotAParticularSolution("expected a particular solution")
    _check_is_particular(sp, particular.components)
    work = _prepared(sp)
    f_params = substitute(work, sp.unknowns, [Atom(t) for t in params])
    components = [
        simplify(
            clean_variant(
                Or(And(g, Not(f_params)), And(Atom(t), f_params)),
                avoid=set(sp.unknowns) | set(params),
            )
        )
        for g, t in zip(particular.components, params)
    ]
    return Solution(components, SolutionKind.REPRODUCTIVE)


def instantiate(
    sp: SolutionProblem, sol: Solution, ts: Sequence[Formula]
) -> Solution:
    """Particular solution obtained by substituting ``ts`` for the
    parameters of a reproductive solution, then validating it."""
    params = _require_parameters(sp)
    if sol.kind is not SolutionKind.REPRODUCTIVE:
        raise ValueError("only reproductive solutions can be instantiated")
    if len(ts) != len(params):
        raise ValueError("one replacement per parameter is required")
    components = [simplify(substitute(g, params, ts)) for g in sol.components]
    counterexample = falsifying_valuation(
        substitute(sp.formula, sp.unknowns, components)  # NotSubstitutible propagates
    )
    if counterexample is not None:
        raise InternalCheckFailed(
            f"instantiation is not a solution, falsified at {counterexample}"
        )
    return Solution(components, SolutionKind.PARTICULAR)


def polarity_shortcut(sp: SolutionProblem) -> Solution | None:
    """Constant solution read off syntactic polarities, when every
    unknown occurs with a single polarity (or not at all).

    Returns None when some unknown occurs with both polarities or when
    the constant candidate fails validation.
    """
    candidate: list[Formula] = []
    for p in sp.unknowns:
        pol = polarity_of(sp.formula, p)
        if pol in (Polarity.POSITIVE_ONLY, Polarity.ABSENT):
            candidate.append(TOP)
        elif pol is Polarity.NEGATIVE_ONLY:
            candidate.append(BOT)
        else:
            return None
    if not is_valid(substitute(sp.formula, sp.unknowns, candidate)):
        return None
    return Solution(candidate, SolutionKind.PARTICULAR)


def definiens(f: Formula, p: str) -> Formula | None:
    """Defining formula for ``p`` within ``f`` when one exists.

    ``p`` is implicitly definable iff the two cofactors of ``f`` cannot
    hold together; the true cofactor is then a definiens:
    ``f |= p <-> definiens``.  Returns None when not definable.
    """
    top = substitute(f, [p], [TOP])
    bot = substitute(f, [p], [BOT])
    if not is_valid(Not(And(top, bot))):
        return None
    return simplify(top)


def reorder_unknowns(sp: SolutionProblem, order: Sequence[str]) -> SolutionProblem:
    if sorted(order) != sorted(sp.unknowns):
        raise ValueError("order must permute the unknowns")
    perm = [sp.unknowns.index(p) for p in order]
    params = (
        None
        if sp.parameters is None
        else tuple(sp.parameters[i] for i in perm)
    )
    return SolutionProblem(sp.formula, tuple(order), params, sp.forbidden)


def _constructive_attempt(sp: SolutionProblem) -> Solution | None:
    """Solve each unknown in order by a constructive case: constant by
    single polarity, else a definiens of the unknown in the unary
    formula.  Returns None as soon as neither case applies."""
    work = _prepared(sp)
    components: list[Formula] = []
    for i, p in enumerate(sp.unknowns):
        cur = substitute(work, sp.unknowns[:i], components)
        unary = eliminate_all(sp.unknowns[i + 1 :], cur)
        pol = polarity_of(unary, p)
        if pol in (Polarity.POSITIVE_ONLY, Polarity.ABSENT):
            g: Formula | None = TOP
        elif pol is Polarity.NEGATIVE_ONLY:
            g = BOT
        else:
            g = definiens(unary, p)
        if g is None or not is_valid(substitute(unary, [p], [g])):
            return None
        components.append(g)
    if not is_valid(substitute(work, sp.unknowns, components)):
        return None
    return Solution(components, SolutionKind.PARTICULAR)


def constructive_shortcut(sp: SolutionProblem, reorder: bool = False) -> Solution | None:
    """Per-unknown constructive solving; with ``reorder`` retry failed
    attempts over permutations of the unknowns (components are restored
    to the original order)."""
    sol = _constructive_attempt(sp)
    if sol is not None or not reorder:
        return sol
    for order in permutations(sp.unknowns):
        if list(order) == list(sp.unknowns):
            continue
        permuted = reorder_unknowns(sp, order)
        sol = _constructive_attempt(permuted)
        if sol is not None:
            back = [sol.components[list(order).index(p)] for p in sp.unknowns]
            return Solution(back, SolutionKind.PARTICULAR)
    return None


def solve_restricted(sp: SolutionProblem) -> Solution:
    """Solve with a global set of atoms forbidden in every component.

    The restriction is encoded directly: G solves the problem with
    components free of the forbidden atoms iff G solves the universally
    quantified problem, so the forbidden atoms are eliminated
    universally and the result is solved as usual.  Components are
    verified to be free of the forbidden atoms afterwards.
    """
    if sp.forbidden is None:
        raise ValueError("a forbidden atom set is required")
    work = sp.formula
    for b in reversed(sp.forbidden):
        work = forall_eliminate(b, work)
    inner = SolutionProblem(work, sp.unknowns, sp.parameters)
    if not exists_solution(inner):
        raise NoSolution(
            "no solution avoids the forbidden atoms "
            f"({', '.join(sp.forbidden)})"
        )
    if sp.parameters is not None:
        sol = solve_succ_elim(inner)
    else:
        sol = solve_on_second_order(inner, Strategy.INTERVAL)
    components = []
    for c in sol.components:
        touched = set(free_atoms(c)) & set(sp.forbidden)
        if touched:
            keep = tuple(sorted(set(free_atoms(c)) - set(sp.forbidden)))
            c = project_vocabulary(c, keep)  # NotIndependent propagates loudly
        components.append(c)
    return Solution(components, sol.kind)


def _fresh_names(bases: Sequence[str], used: set[str]) -> list[str]:
    out = []
    for base in bases:
        name = fresh_name(base, used)
        used.add(name)
        out.append(name)
    return out


_STAGE2_SEARCH_LIMIT = 1024  # candidate tuples; beyond this, fall back


def _stage2_search(
    stage2: SolutionProblem,
    reproductive: Solution,
    params: tuple[str, ...],
    per_unknown_forbidden: Sequence[Sequence[str]],
    basis: tuple[str, ...],
) -> tuple[Formula, ...] | None:
    """First basis-function tuple (enumeration order) solving the
    stage-2 problem whose instantiation is projectable per component."""
    candidates = [
        formula_from_table(TruthTable.from_int(t, basis))
        for t in range(1 << (1 << len(basis)))
    ]
    indexes = [0] * len(params)
    while True:
        ts = tuple(candidates[i] for i in indexes)
        if is_valid(substitute(stage2.formula, params, ts)):
            inst = [
                simplify(substitute(g, params, ts)) for g in reproductive.components
            ]
            ok = True
            for c, forbidden in zip(inst, per_unknown_forbidden):
                dropped = tuple(sorted(set(free_atoms(c)) & set(forbidden)))
                if dropped and not equivalent(eliminate_all(dropped, c), c):
                    ok = False
                    break
            if ok:
                return ts
        for pos in range(len(indexes) - 1, -1, -1):
            indexes[pos] += 1
            if indexes[pos] < len(candidates):
                break
            indexes[pos] = 0
        else:
            return None


def solve_restricted_two_stage(
    sp: SolutionProblem, per_unknown_forbidden: Sequence[Sequence[str]]
) -> Solution:
    """Solve with per-component vocabulary restrictions.

    Stage 1 computes a reproductive solution R of the problem.  Stage 2
    builds the combined problem ``AND_i (R_i with its forbidden atoms
    renamed fresh -> R_i)`` over the parameters and solves it for a
    tuple T making each R_i[T] independent of its forbidden atoms; the
    instantiation R[T] is then projected onto each component's allowed
    vocabulary.  Small instances are solved by deterministic enumeration
    over the basis-function space; larger ones fall back to excluding
    the restricted atoms from the stage-2 components altogether.
    """
    params = _require_parameters(sp)
    if len(per_unknown_forbidden) != len(sp.unknowns):
        raise ValueError("one forbidden set per unknown is required")
    for i, forbidden in enumerate(per_unknown_forbidden):
        if set(forbidden) & (set(sp.unknowns) | set(params)):
            raise ValueError(f"forbidden set {i} clashes with an unknown or parameter")
    if not exists_solution(sp):
        raise NoSolution("the existential closure over the unknowns is not valid")
    reproductive = solve_succ_elim(sp)

    used = set(all_names(sp.formula)) | set(sp.unknowns) | set(params)
    for c in reproductive.components:
        used |= set(all_names(c))
    conjuncts: list[Formula] = []
    stage2_forbidden: set[str] = set()
    for r, forbidden in zip(reproductive.components, per_unknown_forbidden):
        forbidden_t = tuple(sorted(set(forbidden)))
        stage2_forbidden |= set(forbidden_t)
        if not forbidden_t:
            continue
        copies = _fresh_names(forbidden_t, used)
        stage2_forbidden |= set(copies)
        renamed = substitute(r, forbidden_t, [Atom(c) for c in copies])
        conjuncts.append(Implies(renamed, r))
    stage2 = SolutionProblem(conj(conjuncts), params)

    search_basis = tuple(
        sorted(
            (set(free_atoms(sp.formula)) | {a for g in reproductive.components for a in free_atoms(g)})
            - set(sp.unknowns)
            - set(params)
        )
    )
    tuple_count = (1 << (1 << len(search_basis))) ** len(params)
    ts: tuple[Formula, ...] | None
    if tuple_count <= _STAGE2_SEARCH_LIMIT:
        ts = _stage2_search(
            stage2, reproductive, params, per_unknown_forbidden, search_basis
        )
        if ts is None:
            raise NoSolution(
                "no solution meets the per-component vocabulary restrictions"
            )
    else:
        fallback = SolutionProblem(
            stage2.formula, params, forbidden=tuple(sorted(stage2_forbidden))
        )
        try:
            ts = solve_restricted(fallback).components
        except NoSolution:
            raise NoSolution(
                "no solution meets the per-component vocabulary restrictions"
            ) from None
    instantiated = instantiate(sp, reproductive, ts)
    components = []
    for i, (c, forbidden) in enumerate(
        zip(instantiated.components, per_unknown_forbidden)
    ):
        touched = set(free_atoms(c)) & set(forbidden)
        if touched:
            keep = tuple(sorted(set(free_atoms(c)) - set(forbidden)))
            try:
                c = project_vocabulary(c, keep)
            except NotIndependent as exc:
                raise ProjectionFailed(
                    f"component {i} still depends on {sorted(touched)}"
                ) from exc
        components.append(simplify(c))
    return Solution(components, SolutionKind.PARTICULAR)
