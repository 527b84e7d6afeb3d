"""Brute-force stable-model ground truth for tests and verification.

Enumerates every subset of the Herbrand base and keeps those that are fixed
points of the reduct's least model.  Deliberately exhaustive so it stays
trivially auditable; never used on the solving path.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .grounding import GroundProgram, ground, ground_atoms
from .syntax import Atom, Literal, Program, Rule


class BaseTooLarge(RuntimeError):
    """Herbrand base exceeds the exhaustive-enumeration budget."""


DEFAULT_BASE_LIMIT = 20


def _atom_key(atom: Atom) -> str:
    return str(atom)


def least_model(rules: Sequence[Rule]) -> frozenset[Atom]:
    """Least model of a definite (negation-free) rule set."""
    derived: set[Atom] = set()
    changed = True
    while changed:
        changed = False
        for rule in rules:
            if rule.head is None or rule.head in derived:
                continue
            if all(item.atom in derived for item in rule.body):
                derived.add(rule.head)
                changed = True
    return frozenset(derived)


def reduct(gp: GroundProgram, candidate: frozenset[Atom]) -> list[Rule]:
    """Gelfond-Lifschitz reduct: drop rules with a negated atom in the
    candidate, then strip remaining negated literals."""
    out: list[Rule] = []
    for rule in gp.rules:
        if any(item.negated and item.atom in candidate for item in rule.body):
            continue
        out.append(
            Rule(rule.head, tuple(item for item in rule.body if not item.negated))
        )
    return out


def _violates_constraints(rules: Iterable[Rule], model: frozenset[Atom]) -> bool:
    for rule in rules:
        if rule.head is None and all(
            (item.atom in model) != item.negated for item in rule.body
        ):
            return True
    return False


def enumerate_stable_models(
    gp: GroundProgram, *, limit: int = DEFAULT_BASE_LIMIT
) -> list[frozenset[Atom]]:
    """All stable models, sorted canonically."""
    base = sorted(set(ground_atoms(gp)), key=_atom_key)
    if len(base) > limit:
        raise BaseTooLarge(f"{len(base)} atoms exceed the limit of {limit}")
    models: list[frozenset[Atom]] = []
    for size in range(len(base) + 1):
        for chosen in combinations(base, size):
            candidate = frozenset(chosen)
            if _violates_constraints(gp.rules, candidate):
                continue
            if least_model(reduct(gp, candidate)) == candidate:
                models.append(candidate)
    models.sort(key=lambda m: sorted(_atom_key(a) for a in m))
    return models


def stable_models_of(program: Program, *, limit: int = DEFAULT_BASE_LIMIT) -> list[frozenset[Atom]]:
    return enumerate_stable_models(ground(program), limit=limit)


def verify_explanation(
    theory: Program,
    assumed_true: Iterable[Atom],
    assumed_false: Iterable[Atom],
    observation: Sequence[Literal],
    *,
    limit: int = DEFAULT_BASE_LIMIT,
) -> bool:
    """True when the theory plus the assumed-true atoms (as facts) has a
    stable model that contains the observation and avoids every assumed-false
    atom."""
    extended = Program(
        theory.rules + tuple(Rule(atom) for atom in assumed_true)
    )
    assumed_false = set(assumed_false)
    for model in stable_models_of(extended, limit=limit):
        if model & assumed_false:
            continue
        ok = True
        for lit in observation:
            if (lit.atom in model) == lit.negated:
                ok = False
                break
        if ok:
            return True
    return False
