import random

import pytest

from boolsolve import (
    Atom,
    BOT,
    Exists,
    InternalCheckFailed,
    MissingParameters,
    NoSolution,
    NotAParticularSolution,
    NotSolvable,
    NotSubstitutible,
    SchroederVariant,
    Solution,
    SolutionKind,
    SolutionProblem,
    Strategy,
    TOP,
    WitnessFn,
    check_particular,
    check_reproductive,
    constructive_shortcut,
    definiens,
    entails,
    enumerate_solutions,
    equivalent,
    exists_solution,
    free_atoms,
    instantiate,
    parse,
    polarity_shortcut,
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
    substitute,
)
from genutil import random_formula, random_solvable_sp

EXAMPLE_SOLVABLE = parse("(a -> b) -> ((p1 -> p2) & (a -> p2) & (p2 -> b))")
EXAMPLE_UNSOLVABLE = parse("(p1 -> p2) & (a -> p2) & (p2 -> b)")
UNARY_SOLVABLE = parse("(a -> b) -> ((a -> p) & (p -> b))")


def test_exists_solution():
    assert exists_solution(SolutionProblem(EXAMPLE_SOLVABLE, ["p1", "p2"]))
    assert not exists_solution(SolutionProblem(EXAMPLE_UNSOLVABLE, ["p1", "p2"]))
    assert exists_solution(SolutionProblem(TOP, ["p"]))


def test_problem_validation():
    with pytest.raises(ValueError):
        SolutionProblem(TOP, ["p", "p"])
    with pytest.raises(ValueError):
        SolutionProblem(parse("p & t"), ["p"], parameters=["t"])
    with pytest.raises(ValueError):
        SolutionProblem(parse("p"), ["p"], parameters=["t1", "t2"])
    with pytest.raises(ValueError):
        SolutionProblem(parse("p & b"), ["p"], forbidden=["p"])


def test_solve1_interval():
    g = solve1_interval(UNARY_SOLVABLE, "p")
    assert equivalent(g, parse("a & b"))
    assert check_particular(SolutionProblem(UNARY_SOLVABLE, ["p"]), [g]).verdict

    with pytest.raises(NoSolution):
        solve1_interval(parse("(a -> p) & (p -> b)"), "p")

    assert equivalent(solve1_interval(parse("p <-> a"), "p"), parse("a"))


def test_solve1_interval_strips_prefix():
    f = Exists("p2", parse("(a -> b) -> ((p -> p2) & (a -> p2) & (p2 -> b))"))
    g = solve1_interval(f, "p")
    assert "p2" not in free_atoms(g)
    inner = parse("(a -> b) -> ((p -> p2) & (a -> p2) & (p2 -> b))")
    assert exists_solution(
        SolutionProblem(substitute(inner, ["p"], [g]), ["p2"])
    )


def test_solve1_reproductive():
    unary = SolutionProblem(UNARY_SOLVABLE, ["p"], parameters=["t"])
    g = solve1_reproductive(UNARY_SOLVABLE, "p", "t")
    assert check_reproductive(unary, [g], ["a", "b"]).verdict

    g = solve1_reproductive(parse("p <-> a"), "p", "t")
    assert equivalent(g, parse("a"))

    g = solve1_reproductive(TOP, "p", "t")
    assert equivalent(g, Atom("t"))
    assert check_reproductive(
        SolutionProblem(TOP, ["p"], parameters=["t"]), [g], ["a"]
    ).verdict

    with pytest.raises(NoSolution):
        solve1_reproductive(parse("(a -> p) & (p -> b)"), "p", "t")
    with pytest.raises(ValueError):
        solve1_reproductive(parse("p | t"), "p", "t")


def test_schroeder_interpolant():
    got = schroeder_interpolant(parse("a & b"), parse("a | b"), "t", SchroederVariant.A_OR_BT)
    assert got == parse("(a & b) | ((a | b) & t)")
    sp = SolutionProblem(parse("((a & b) -> p) & (p -> (a | b))"), ["p"], parameters=["t"])
    assert check_reproductive(sp, [got], ["a", "b"]).verdict

    got = schroeder_interpolant(BOT, parse("b"), "t", SchroederVariant.CASE_SPLIT)
    assert equivalent(got, parse("b & t"))

    with pytest.raises(NotSolvable):
        schroeder_interpolant(parse("a"), parse("~a"), "t", SchroederVariant.A_OR_BT)


def test_schroeder_variants_equivalent():
    rng = random.Random(67)
    done = 0
    while done < 150:
        aF = random_formula(rng, ("a", "b"), depth=3)
        bF = random_formula(rng, ("a", "b"), depth=3)
        if not entails(aF, bF):
            continue
        variants = [
            schroeder_interpolant(aF, bF, "t", v) for v in SchroederVariant
        ]
        assert equivalent(variants[0], variants[1])
        assert equivalent(variants[1], variants[2])
        done += 1


def test_solve_on_second_order_interval():
    sp = SolutionProblem(EXAMPLE_SOLVABLE, ["p1", "p2"])
    sol = solve_on_second_order(sp, Strategy.INTERVAL)
    assert sol.kind is SolutionKind.PARTICULAR
    assert check_particular(sp, sol.components).verdict

    unary = SolutionProblem(UNARY_SOLVABLE, ["p"])
    sol = solve_on_second_order(unary, Strategy.INTERVAL)
    assert sol.components[0] == solve1_interval(UNARY_SOLVABLE, "p")

    with pytest.raises(NoSolution):
        solve_on_second_order(
            SolutionProblem(EXAMPLE_UNSOLVABLE, ["p1", "p2"]), Strategy.INTERVAL
        )


def test_solve_on_second_order_reproductive():
    sp = SolutionProblem(EXAMPLE_SOLVABLE, ["p1", "p2"], parameters=["t1", "t2"])
    sol = solve_on_second_order(sp, Strategy.REPRODUCTIVE)
    assert sol.kind is SolutionKind.REPRODUCTIVE
    assert check_reproductive(sp, sol.components, ["a", "b"]).verdict

    with pytest.raises(MissingParameters):
        solve_on_second_order(
            SolutionProblem(EXAMPLE_SOLVABLE, ["p1", "p2"]), Strategy.REPRODUCTIVE
        )


def test_solve_succ_elim():
    sp = SolutionProblem(EXAMPLE_SOLVABLE, ["p1", "p2"], parameters=["t1", "t2"])
    sol = solve_succ_elim(sp)
    assert sol.kind is SolutionKind.REPRODUCTIVE
    assert check_reproductive(sp, sol.components, ["a", "b"]).verdict

    unary = SolutionProblem(parse("p <-> a"), ["p"], parameters=["t"])
    sol = solve_succ_elim(unary)
    assert equivalent(sol.components[0], parse("a"))

    with pytest.raises(NoSolution):
        solve_succ_elim(
            SolutionProblem(EXAMPLE_UNSOLVABLE, ["p1", "p2"], parameters=["t1", "t2"])
        )
    with pytest.raises(MissingParameters):
        solve_succ_elim(SolutionProblem(EXAMPLE_SOLVABLE, ["p1", "p2"]))


def test_solve_succ_elim_stages():
    sp = SolutionProblem(EXAMPLE_SOLVABLE, ["p1", "p2"], parameters=["t1", "t2"])
    stages = solve_succ_elim_stages(sp)
    assert len(stages) == 3
    assert stages[2] == EXAMPLE_SOLVABLE  # already clean
    assert equivalent(stages[1], Exists("p2", EXAMPLE_SOLVABLE))
    assert equivalent(stages[0], Exists("p1", Exists("p2", EXAMPLE_SOLVABLE)))
    assert not set(free_atoms(stages[0])) & {"p1", "p2"}


def test_solve_by_witnesses():
    sp = SolutionProblem(EXAMPLE_SOLVABLE, ["p1", "p2"])
    for fn in WitnessFn:
        sol = solve_by_witnesses(sp, fn)
        assert check_particular(sp, sol.components).verdict
        assert not set().union(*(free_atoms(c) for c in sol.components)) & {
            "p1",
            "p2",
        }

    unary = SolutionProblem(parse("p <-> a"), ["p"])
    sol = solve_by_witnesses(unary, WitnessFn.F_TRUE)
    assert equivalent(sol.components[0], parse("a"))

    trivial = SolutionProblem(TOP, ["p1", "p2"])
    sol = solve_by_witnesses(trivial, WitnessFn.F_TRUE)
    assert all(c == TOP for c in sol.components)

    with pytest.raises(NoSolution):
        solve_by_witnesses(SolutionProblem(EXAMPLE_UNSOLVABLE, ["p1", "p2"]))


def test_rigorous_solution():
    sp = SolutionProblem(UNARY_SOLVABLE, ["p"], parameters=["t"])
    rig = rigorous_solution(sp, Solution([parse("b")], SolutionKind.PARTICULAR))
    assert rig.kind is SolutionKind.REPRODUCTIVE
    assert check_reproductive(sp, rig.components, ["a", "b"]).verdict

    open_sp = SolutionProblem(parse("p"), ["p"], parameters=["t"])
    rig = rigorous_solution(open_sp, Solution([TOP], SolutionKind.PARTICULAR))
    assert check_reproductive(open_sp, rig.components, ["a"]).verdict

    with pytest.raises(NotAParticularSolution):
        rigorous_solution(
            SolutionProblem(parse("p <-> b"), ["p"], parameters=["t"]),
            Solution([parse("a")], SolutionKind.PARTICULAR),
        )


def test_instantiate():
    sp = SolutionProblem(EXAMPLE_SOLVABLE, ["p1", "p2"], parameters=["t1", "t2"])
    rep = solve_succ_elim(sp)
    inst = instantiate(sp, rep, [parse("a"), parse("b")])
    assert inst.kind is SolutionKind.PARTICULAR
    # reproduces the solution (a, b)
    assert equivalent(inst.components[0], parse("a"))
    assert equivalent(inst.components[1], parse("b"))

    same = instantiate(sp, rep, [Atom("t1"), Atom("t2")])
    assert same.components == rep.components

    with pytest.raises(NotSubstitutible):
        instantiate(sp, rep, [parse("p1"), parse("b")])


def test_instantiate_flags_bogus_reproductive():
    sp = SolutionProblem(parse("p <-> a"), ["p"], parameters=["t"])
    bogus = Solution([Atom("t")], SolutionKind.REPRODUCTIVE)
    with pytest.raises(InternalCheckFailed):
        instantiate(sp, bogus, [parse("~a")])


def test_polarity_shortcut():
    sol = polarity_shortcut(SolutionProblem(parse("(a -> p) & (b -> p)"), ["p"]))
    assert sol is not None and sol.components == (TOP,)

    sol = polarity_shortcut(SolutionProblem(parse("p -> a"), ["p"]))
    assert sol is not None and sol.components == (BOT,)

    assert polarity_shortcut(SolutionProblem(parse("p <-> a"), ["p"])) is None
    # single polarity but the constant candidate fails validation
    assert polarity_shortcut(SolutionProblem(parse("p & a"), ["p"])) is None


def test_constructive_shortcut_reorder():
    # solvable, but the constructive cases only fire for one ordering
    f = parse("(p2 -> p2) | ~b <-> ~p1")
    sp = SolutionProblem(f, ["p1", "p2"])
    assert exists_solution(sp)
    assert constructive_shortcut(sp) is None
    sol = constructive_shortcut(sp, reorder=True)
    assert sol is not None
    assert check_particular(sp, sol.components).verdict


def test_definiens():
    d = definiens(parse("(p <-> (a & b)) & c"), "p")
    assert d is not None and equivalent(d, parse("a & b & c"))
    from boolsolve import Iff

    assert entails(parse("(p <-> (a & b)) & c"), Iff(Atom("p"), d))
    assert definiens(TOP, "p") is None

    # a definiens of the negated formula yields a solution when negated
    f = parse("~((a -> b) -> ((a -> p) & (p -> b)))")
    d = definiens(f, "p")
    assert d is not None
    from boolsolve import Not

    sp = SolutionProblem(parse("(a -> b) -> ((a -> p) & (p -> b))"), ["p"])
    assert check_particular(sp, [Not(d)]).verdict


def test_definiens_entailment():
    rng = random.Random(71)
    found = 0
    while found < 100:
        f = random_formula(rng, ("p", "a", "b"), depth=4)
        d = definiens(f, "p")
        if d is None:
            continue
        from boolsolve import Iff

        assert entails(f, Iff(Atom("p"), d))
        found += 1


def test_solve_restricted():
    sp = SolutionProblem(parse("b -> p"), ["p"], forbidden=["b"])
    sol = solve_restricted(sp)
    assert not set(free_atoms(sol.components[0])) & {"b"}
    assert check_particular(SolutionProblem(parse("b -> p"), ["p"]), sol.components).verdict

    with pytest.raises(NoSolution):
        solve_restricted(SolutionProblem(parse("p <-> b"), ["p"], forbidden=["b"]))

    # empty restriction behaves like the unrestricted solver
    sp = SolutionProblem(EXAMPLE_SOLVABLE, ["p1", "p2"], forbidden=[])
    sol = solve_restricted(sp)
    unrestricted = solve_on_second_order(
        SolutionProblem(EXAMPLE_SOLVABLE, ["p1", "p2"]), Strategy.INTERVAL
    )
    assert sol.components == unrestricted.components


def test_solve_restricted_reproductive():
    sp = SolutionProblem(parse("b -> p"), ["p"], parameters=["t"], forbidden=["b"])
    sol = solve_restricted(sp)
    assert sol.kind is SolutionKind.REPRODUCTIVE
    assert "b" not in set().union(*(free_atoms(c) for c in sol.components))


def test_two_stage_demo():
    f = parse("(a & (b <-> p)) <-> (b & (a <-> q))")
    sp = SolutionProblem(f, ["p", "q"], parameters=["t1", "t2"])
    sol = solve_restricted_two_stage(sp, [["b"], ["a"]])
    assert equivalent(sol.components[0], parse("a"))
    assert equivalent(sol.components[1], parse("b"))
    assert set(free_atoms(sol.components[0])) <= {"a"}
    assert set(free_atoms(sol.components[1])) <= {"b"}
    assert check_particular(SolutionProblem(f, ["p", "q"]), sol.components).verdict


def test_two_stage_unconstrained_matches_instantiation():
    sp = SolutionProblem(EXAMPLE_SOLVABLE, ["p1", "p2"], parameters=["t1", "t2"])
    sol = solve_restricted_two_stage(sp, [[], []])
    rep = solve_succ_elim(sp)
    inst = instantiate(sp, rep, [BOT, BOT])
    assert [str(c) for c in sol.components] == [str(c) for c in inst.components]


def test_two_stage_unsolvable_restriction():
    sp = SolutionProblem(parse("p <-> b"), ["p"], parameters=["t"])
    with pytest.raises(NoSolution):
        solve_restricted_two_stage(sp, [["b"]])


def test_interval_law_random():
    # the basis solutions of a solvable unary problem are exactly the
    # functions between the two cofactor bounds
    from boolsolve import Not, FunctionSpace

    rng = random.Random(73)
    done = 0
    while done < 150:
        f = random_formula(rng, ("p", "a", "b"), depth=4)
        sp = SolutionProblem(f, ["p"])
        if not exists_solution(sp):
            continue
        lower = Not(substitute(f, ["p"], [BOT]))
        upper = substitute(f, ["p"], [TOP])
        enumerated = {
            str(s.components[0]) for s in enumerate_solutions(sp, ["a", "b"])
        }
        space = FunctionSpace(["a", "b"])
        expected = {
            str(g)
            for g in space.formulas
            if entails(lower, g) and entails(g, upper)
        }
        assert enumerated == expected
        done += 1


def test_reproductive_composition_random():
    # composing unary reproductive steps stays reproductive
    rng = random.Random(79)
    for _ in range(25):
        sp = random_solvable_sp(rng, 2, 2, depth=3, parameters=True)
        sol = solve_on_second_order(sp, Strategy.REPRODUCTIVE)
        assert check_reproductive(sp, sol.components, ("a", "b")).verdict


def test_solution_entailed_by_definition():
    # G solves F[p] exactly when the definition p <-> G entails F
    from boolsolve import Iff

    rng = random.Random(83)
    for _ in range(200):
        f = random_formula(rng, ("p", "a", "b"), depth=4)
        g = random_formula(rng, ("a", "b"), depth=3)
        sp = SolutionProblem(f, ["p"])
        lhs = check_particular(sp, [g]).verdict
        rhs = entails(Iff(Atom("p"), g), f)
        assert lhs == rhs


def test_alternate_disjunct_combination():
    # combining candidate solutions G_i with exists p F == OR F[G_i]
    # through the guarded-conjunction scheme yields a single witness
    from boolsolve import Implies, Not, conj, disj

    rng = random.Random(89)
    for _ in range(100):
        f = random_formula(rng, ("p", "a", "b"), depth=3)
        candidates = [TOP, BOT] + [
            random_formula(rng, ("a", "b"), depth=2) for _ in range(2)
        ]
        images = [substitute(f, ["p"], [g]) for g in candidates]
        assert equivalent(Exists("p", f), disj(images))  # includes both constants
        parts = []
        for i, g in enumerate(candidates):
            guard = conj([Not(images[j]) for j in range(i)] + [images[i]])
            parts.append(Implies(guard, g))
        combined = conj(parts)
        assert equivalent(Exists("p", f), substitute(f, ["p"], [combined]))


def test_weakest_precondition_is_weakest():
    from boolsolve import FunctionSpace, Implies, weakest_precondition

    rng = random.Random(97)
    space = FunctionSpace(["a", "b"])
    for _ in range(40):
        f = random_formula(rng, ("p1", "p2", "a", "b"), depth=3)
        wp = weakest_precondition(["p1", "p2"], f)
        assert exists_solution(SolutionProblem(Implies(wp, f), ["p1", "p2"]))
        for candidate in space.formulas:
            guarded = SolutionProblem(Implies(candidate, f), ["p1", "p2"])
            if exists_solution(guarded):
                assert entails(candidate, wp)
