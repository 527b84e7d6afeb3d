"""Abducible transformation and explanation extraction.

Declaring ``#abducible g(X).`` appends four rules after all facts and rules
of the theory::

    g(X) :- not _neg_g(X), _abd_g(X).
    _neg_g(X) :- not g(X).
    _abd_g(X) :- not _negabd_g(X).
    _negabd_g(X) :- not _abd_g(X).

The last pair is an even loop that lets the solver freely assume each
instance true or false; the first pair ties the assumption to the atom
itself.  Declared atoms may not unify with any rule head of the theory, so
everything abduced is genuinely missing rather than derivable.  Running an
observation as a query over the expanded program yields partial answer
sets; the restriction of each to the declared atoms is its explanation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .engine import DEFAULT_DEPTH_LIMIT, PartialAnswerSet, Solver
from .grounding import _match_atom, ground
from .syntax import Atom, Literal, Program, Rule, Variable


class AbducibleConflict(ValueError):
    """An abducible pattern unifies with a rule head of the theory."""


def _unifies(pattern: Atom, other: Atom) -> bool:
    """Unification over flat terms, variables allowed on either side."""
    if pattern.predicate != other.predicate or pattern.arity != other.arity:
        return False
    bindings: dict[str, object] = {}
    for a, b in zip(pattern.args, other.args):
        a_var, b_var = isinstance(a, Variable), isinstance(b, Variable)
        if a_var or b_var:
            # Flat terms: a variable unifies with anything; cross-bindings
            # between two variables can always be made consistent.
            if a_var and not b_var:
                seen = bindings.setdefault(f"L:{a.name}", b)
                if seen != b:
                    return False
            elif b_var and not a_var:
                seen = bindings.setdefault(f"R:{b.name}", a)
                if seen != a:
                    return False
            continue
        if a != b:
            return False
    return True


def check_patterns(theory: Program, patterns: Iterable[Atom]) -> None:
    for pattern in patterns:
        for rule in theory.rules:
            if rule.head is not None and _unifies(pattern, rule.head):
                raise AbducibleConflict(
                    f"abducible {pattern} unifies with the head of rule: {rule}"
                )


def _aux(prefix: str, pattern: Atom) -> Atom:
    return Atom(f"{prefix}{pattern.predicate}", pattern.args)


def expansion_rules(pattern: Atom) -> tuple[Rule, ...]:
    neg = _aux("_neg_", pattern)
    abd = _aux("_abd_", pattern)
    negabd = _aux("_negabd_", pattern)
    return (
        Rule(pattern, (Literal(neg, negated=True), Literal(abd))),
        Rule(neg, (Literal(pattern, negated=True),)),
        Rule(abd, (Literal(negabd, negated=True),)),
        Rule(negabd, (Literal(abd, negated=True),)),
    )


def expand_abducibles(program: Program) -> Program:
    """Append the four-rule schema for every declared abducible pattern.

    Placement after all facts and rules guarantees nothing derivable is ever
    abduced.
    """
    check_patterns(program, program.abducible_directives)
    extra: list[Rule] = []
    for pattern in program.abducible_directives:
        extra.extend(expansion_rules(pattern))
    return Program(program.rules + tuple(extra), ())


# --------------------------------------------------------------------------
# Problems and explanations
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Explanation:
    """Signed abducible assumptions extracted from one partial answer set.

    Tuples preserve the order in which the assumptions were made during the
    derivation; comparisons use the frozen set views.
    """

    assumed_true: tuple[Atom, ...]
    assumed_false: tuple[Atom, ...]

    @property
    def key(self) -> tuple[frozenset[Atom], frozenset[Atom]]:
        return frozenset(self.assumed_true), frozenset(self.assumed_false)

    @property
    def is_empty(self) -> bool:
        return not self.assumed_true and not self.assumed_false

    def dominates(self, other: "Explanation") -> bool:
        """Subset-or-equal on both signs, proper on at least one."""
        t1, f1 = self.key
        t2, f2 = other.key
        return t1 <= t2 and f1 <= f2 and (t1, f1) != (t2, f2)

    def __str__(self):
        parts = [str(a) for a in self.assumed_true]
        parts.extend(f"not {a}" for a in self.assumed_false)
        return "{ " + ", ".join(parts) + " }" if parts else "{ }"


@dataclass(frozen=True)
class AbductionProblem:
    """Theory T, observation O, and declared abducible patterns A."""

    theory: Program
    observation: tuple[Literal, ...]
    abducibles: tuple[Atom, ...]

    def __post_init__(self):
        check_patterns(self.theory, self.abducibles)

    def expanded(self) -> Program:
        base = Program(self.theory.rules, tuple(self.abducibles))
        return expand_abducibles(base)


def extract_explanation(chs: PartialAnswerSet, patterns: Sequence[Atom]) -> Explanation:
    """Restrict a partial answer set to the declared abducible atoms."""
    assumed_true: list[Atom] = []
    assumed_false: list[Atom] = []
    for atom, sign in chs.signed_literals:
        if atom.hidden:
            continue
        if any(_match_atom(p, atom, {}) is not None for p in patterns):
            (assumed_true if sign else assumed_false).append(atom)
    return Explanation(tuple(assumed_true), tuple(assumed_false))


def abduce(
    problem: AbductionProblem,
    *,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
    max_answers: int | None = None,
) -> Iterator[tuple[PartialAnswerSet, Explanation]]:
    """Run the observation against the expanded theory.

    Yields each distinct partial answer set with its explanation; an empty
    enumeration means the observation cannot be explained.
    """
    gp = ground(problem.expanded())
    solver = Solver(gp, depth_limit=depth_limit)
    seen = set()
    for chs in solver.solve(problem.observation):
        key = chs.visible_key
        if key in seen:
            continue
        seen.add(key)
        yield chs, extract_explanation(chs, problem.abducibles)
        if max_answers is not None and len(seen) >= max_answers:
            return


def minimal_explanations(explanations: Iterable[Explanation]) -> list[Explanation]:
    """Drop explanations dominated by a subset-smaller one; keep order."""
    pool = list(explanations)
    out = []
    for cand in pool:
        if any(other.dominates(cand) for other in pool):
            continue
        if any(kept.key == cand.key for kept in out):
            continue
        out.append(cand)
    return out


def generate_abducible_declarations(
    vocabulary: Iterable[Atom],
    profile_facts: Iterable[Atom],
    *,
    known_absent: Iterable[Atom] = (),
    theory: Program | None = None,
) -> list[Atom]:
    """Declare every vocabulary atom that is neither recorded in the profile,
    explicitly ruled out by it, nor derivable (i.e. unifying with some rule
    head of the theory, which covers threshold propositions backed by
    measurements)."""
    facts = set(profile_facts)
    absent = set(known_absent)
    heads = [r.head for r in theory.rules if r.head is not None] if theory else []
    out: list[Atom] = []
    for atom in sorted(set(vocabulary), key=str):
        if atom in facts or atom in absent:
            continue
        if any(_unifies(atom, head) for head in heads):
            continue
        out.append(atom)
    return out
