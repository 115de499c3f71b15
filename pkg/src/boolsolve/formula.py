"""Formula AST over nullary atoms, with analysis and substitution.

Nodes are immutable (frozen dataclasses), so formulas hash, compare
structurally, and can be shared freely between threads.  Besides the
usual connectives the language has the propositional quantifiers
``exists p . F`` and ``forall p . F`` that bind an atom name.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

AtomSet = tuple[str, ...]  # sorted, duplicate-free


class BoolsolveError(Exception):
    """Base class for all errors raised by this package."""


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        from .syntax import format_formula

        return format_formula(self)

    def __repr__(self) -> str:
        return f"<{self}>"


@dataclass(frozen=True, repr=False)
class Top(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, repr=False)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    body: Formula


TOP = Top()
BOT = Bot()

BINARY = (And, Or, Implies, Iff)
QUANT = (Exists, Forall)


def conj(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    out: Formula | None = None
    for f in formulas:
        out = f if out is None else And(out, f)
    return TOP if out is None else out


def disj(formulas: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is ``false``."""
    out: Formula | None = None
    for f in formulas:
        out = f if out is None else Or(out, f)
    return BOT if out is None else out


def exists(names: Sequence[str], f: Formula) -> Formula:
    """Prefix ``f`` with existential quantifiers, first name outermost."""
    for name in reversed(names):
        f = Exists(name, f)
    return f


def forall(names: Sequence[str], f: Formula) -> Formula:
    for name in reversed(names):
        f = Forall(name, f)
    return f


def free_atoms(f: Formula) -> AtomSet:
    """The atoms with at least one occurrence not bound by a quantifier."""
    out: set[str] = set()

    def walk(g: Formula, bound: frozenset[str]) -> None:
        if isinstance(g, Atom):
            if g.name not in bound:
                out.add(g.name)
        elif isinstance(g, Not):
            walk(g.operand, bound)
        elif isinstance(g, BINARY):
            walk(g.left, bound)
            walk(g.right, bound)
        elif isinstance(g, QUANT):
            walk(g.body, bound | {g.var})

    walk(f, frozenset())
    return tuple(sorted(out))


def all_names(f: Formula) -> AtomSet:
    """Every atom name occurring anywhere in ``f``, free, bound or as binder."""
    out: set[str] = set()

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            out.add(g.name)
        elif isinstance(g, Not):
            walk(g.operand)
        elif isinstance(g, BINARY):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, QUANT):
            out.add(g.var)
            walk(g.body)

    walk(f)
    return tuple(sorted(out))


def has_quantifier(f: Formula) -> bool:
    if isinstance(f, QUANT):
        return True
    if isinstance(f, Not):
        return has_quantifier(f.operand)
    if isinstance(f, BINARY):
        return has_quantifier(f.left) or has_quantifier(f.right)
    return False


class Polarity(Enum):
    POSITIVE_ONLY = "positive"
    NEGATIVE_ONLY = "negative"
    BOTH = "both"
    ABSENT = "absent"


def polarity_of(f: Formula, atom: str) -> Polarity:
    """Classify the free occurrences of ``atom`` in ``f``.

    Implications flip the sign of their antecedent; any free occurrence
    under a biconditional counts as both polarities.
    """
    signs: set[int] = set()

    def walk(g: Formula, sign: int | None) -> None:
        # sign: +1 positive, -1 negative, None = occurrence counts as both
        if isinstance(g, Atom):
            if g.name == atom:
                if sign is None:
                    signs.update((1, -1))
                else:
                    signs.add(sign)
        elif isinstance(g, Not):
            walk(g.operand, None if sign is None else -sign)
        elif isinstance(g, (And, Or)):
            walk(g.left, sign)
            walk(g.right, sign)
        elif isinstance(g, Implies):
            walk(g.left, None if sign is None else -sign)
            walk(g.right, sign)
        elif isinstance(g, Iff):
            walk(g.left, None)
            walk(g.right, None)
        elif isinstance(g, QUANT):
            if g.var != atom:
                walk(g.body, sign)

    walk(f, 1)
    if not signs:
        return Polarity.ABSENT
    if signs == {1}:
        return Polarity.POSITIVE_ONLY
    if signs == {-1}:
        return Polarity.NEGATIVE_ONLY
    return Polarity.BOTH


class NotSubstitutible(BoolsolveError):
    """A replacement sequence violates the substitution preconditions.

    ``condition`` is 1 when a replacement would be captured by a
    quantifier, 2 when a replacement mentions one of the replaced atoms;
    ``index`` is the offending position.
    """

    def __init__(self, condition: int, index: int, detail: str = ""):
        self.condition = condition
        self.index = index
        msg = f"condition ({condition}) violated at position {index}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


def _substitution_violation(
    gs: Sequence[Formula], ps: Sequence[str], f: Formula
) -> tuple[int, int] | None:
    """First violated (condition, index), or None when substitutible.

    A position whose replacement is literally the replaced atom is a
    no-op and is exempt from both conditions.
    """
    active = [i for i, g in enumerate(gs) if g != Atom(ps[i])]
    pset = set(ps)
    free_gs = {i: set(free_atoms(gs[i])) for i in active}
    for i in active:
        if free_gs[i] & pset:
            return (2, i)
    watched = {ps[i]: i for i in active}
    hit: list[tuple[int, int]] = []

    def walk(g: Formula, binders: frozenset[str]) -> None:
        if hit:
            return
        if isinstance(g, Atom):
            i = watched.get(g.name)
            if i is not None and g.name not in binders:
                if binders & free_gs[i]:
                    hit.append((1, i))
        elif isinstance(g, Not):
            walk(g.operand, binders)
        elif isinstance(g, BINARY):
            walk(g.left, binders)
            walk(g.right, binders)
        elif isinstance(g, QUANT):
            walk(g.body, binders | {g.var})

    walk(f, frozenset())
    return hit[0] if hit else None


def is_substitutible(gs: Sequence[Formula], ps: Sequence[str], f: Formula) -> bool:
    """True iff ``gs`` may simultaneously replace the atoms ``ps`` in ``f``.

    Requires matching lengths and, for each replacement: no free
    occurrence of the replaced atom lies under a quantifier binding a
    free atom of the replacement, and the replacement mentions none of
    the replaced atoms (identity positions are exempt no-ops).
    """
    if len(gs) != len(ps):
        return False
    return _substitution_violation(gs, ps, f) is None


def substitute(f: Formula, ps: Sequence[str], gs: Sequence[Formula]) -> Formula:
    """Simultaneously replace free occurrences of each ``ps[i]`` by ``gs[i]``.

    Bound occurrences are untouched.  Raises NotSubstitutible when the
    replacement would capture or reintroduce a replaced atom.
    """
    if len(ps) != len(gs):
        raise ValueError("atom and replacement sequences differ in length")
    if len(set(ps)) != len(ps):
        raise ValueError("replaced atoms must be distinct")
    violation = _substitution_violation(gs, ps, f)
    if violation is not None:
        cond, i = violation
        raise NotSubstitutible(cond, i, f"replacing {ps[i]} by {gs[i]}")
    mapping = {p: g for p, g in zip(ps, gs) if g != Atom(p)}
    if not mapping:
        return f

    def walk(g: Formula, shadowed: frozenset[str]) -> Formula:
        if isinstance(g, Atom):
            if g.name in mapping and g.name not in shadowed:
                return mapping[g.name]
            return g
        if isinstance(g, Not):
            sub = walk(g.operand, shadowed)
            return g if sub is g.operand else Not(sub)
        if isinstance(g, BINARY):
            left = walk(g.left, shadowed)
            right = walk(g.right, shadowed)
            return g if left is g.left and right is g.right else type(g)(left, right)
        if isinstance(g, QUANT):
            body = walk(g.body, shadowed | {g.var})
            return g if body is g.body else type(g)(g.var, body)
        return g

    return walk(f, frozenset())


def fresh_name(base: str, used: Iterable[str]) -> str:
    """``base_k`` with the smallest k >= 1 not in ``used``."""
    taken = set(used)
    k = 1
    while f"{base}_{k}" in taken:
        k += 1
    return f"{base}_{k}"


def clean_variant(f: Formula, avoid: Iterable[str] = ()) -> Formula:
    """Equivalent formula where no free atom is also bound and all bound
    atoms are distinct.

    Renaming appends ``_k`` with the smallest k making the name globally
    fresh, assigned in a left-to-right traversal, so the result is
    deterministic.  Names in ``avoid`` are treated as taken.
    """
    free = set(free_atoms(f))
    used = set(all_names(f)) | free | set(avoid)
    taken = free | set(avoid)

    def walk(g: Formula, env: dict[str, str]) -> Formula:
        if isinstance(g, Atom):
            return Atom(env[g.name]) if g.name in env else g
        if isinstance(g, Not):
            return Not(walk(g.operand, env))
        if isinstance(g, BINARY):
            return type(g)(walk(g.left, env), walk(g.right, env))
        if isinstance(g, QUANT):
            name = g.var
            if name in taken:
                name = fresh_name(g.var, used)
            used.add(name)
            taken.add(name)
            return type(g)(name, walk(g.body, {**env, g.var: name}))
        return g

    return walk(f, {})
