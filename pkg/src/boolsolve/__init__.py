"""Boolean equation solving over propositional formulas with
quantification on nullary atoms.

Decide solvability, compute particular and reproductive (most general)
solutions, compute elimination witnesses and weakest preconditions, and
verify every output against an exact brute-force oracle.
"""

from .formula import (
    BOT,
    TOP,
    And,
    Atom,
    AtomSet,
    Bot,
    BoolsolveError,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    NotSubstitutible,
    Or,
    Polarity,
    Top,
    all_names,
    clean_variant,
    conj,
    disj,
    exists,
    forall,
    free_atoms,
    has_quantifier,
    is_substitutible,
    polarity_of,
    substitute,
)
from .syntax import ParseError, format_formula, parse
from .semantics import (
    TruthTable,
    UnboundAtom,
    entails,
    equivalent,
    evaluate,
    formula_from_table,
    is_satisfiable,
    is_valid,
    simplify,
    truth_table,
)
from .elimination import (
    DisjunctWitnesses,
    InvalidDisjunctWitness,
    NotIndependent,
    WitnessResult,
    ackermann_rewrite,
    ehw_combine,
    elim_witness,
    elim_witness_dnf,
    eliminate_all,
    forall_eliminate,
    project_vocabulary,
    shannon_eliminate,
    to_dnf,
    weakest_precondition,
)
from .solve import (
    InternalCheckFailed,
    MissingParameters,
    NoSolution,
    NotAParticularSolution,
    NotSolvable,
    ProjectionFailed,
    SchroederVariant,
    Solution,
    SolutionKind,
    SolutionProblem,
    Strategy,
    WitnessFn,
    constructive_shortcut,
    definiens,
    exists_solution,
    instantiate,
    polarity_shortcut,
    reorder_unknowns,
    rigorous_solution,
    schroeder_interpolant,
    solve1_interval,
    solve1_reproductive,
    solve_by_witnesses,
    solve_on_second_order,
    solve_restricted,
    solve_restricted_two_stage,
    solve_succ_elim,
    solve_succ_elim_stages,
)
from .oracle import (
    CheckFailure,
    CheckReport,
    FunctionSpace,
    TooLarge,
    any_enumerated_solution,
    check_general,
    check_parametric,
    check_particular,
    check_reproductive,
    enumerate_solutions,
)

__version__ = "0.1.0"
