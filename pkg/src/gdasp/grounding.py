"""Finite grounding of safe programs over their Herbrand universe.

Instantiation is deterministic: rules are processed in textual order,
variables are bound by joining positive body literals against the set of
possibly-derivable atoms (a least fixpoint over rule heads), any leftover
variables range over the sorted universe, and builtin comparisons are
evaluated during instantiation (true ones are deleted from the body, false
ones drop the instance).  Instances whose positive body mentions an atom
that can never be derived are pruned; such instances can never fire under
the stable-model semantics.

Variable-free rules, the common case, propagate through the fixpoint with
a watcher queue in linear time; only rules with variables pay for joins.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from decimal import Decimal
from itertools import product
from typing import Iterable, Mapping

from .syntax import (
    Atom,
    Comparison,
    Constant,
    Literal,
    Number,
    Program,
    Rule,
    Term,
    Variable,
)


class GroundingExplosion(RuntimeError):
    """The instantiation exceeded the configured instance budget."""


DEFAULT_INSTANCE_LIMIT = 10**6


def herbrand_universe(program: Program) -> set[Term]:
    """Constants and numbers occurring anywhere in the program text."""
    universe: set[Term] = set()

    def add(term: Term) -> None:
        if not isinstance(term, Variable):
            universe.add(term)

    for rule in program.rules:
        if rule.head is not None:
            for arg in rule.head.args:
                add(arg)
        for item in rule.body:
            if isinstance(item, Literal):
                for arg in item.atom.args:
                    add(arg)
            else:
                add(item.left)
                add(item.right)
    for pattern in program.abducible_directives:
        for arg in pattern.args:
            add(arg)
    return universe


def _term_sort_key(term: Term):
    # Constants sort before numbers; each group is ordered internally.
    if isinstance(term, Constant):
        return (0, term.symbol, Decimal(0))
    return (1, "", term.value)


def evaluate_comparison(left: Term, op: str, right: Term) -> bool:
    """Evaluate a ground comparison.

    Ordering operators hold only between numbers; ``=``/``\\=`` additionally
    compare constants by symbol.  Mixed constant/number operands are simply
    unequal.
    """
    if isinstance(left, Number) and isinstance(right, Number):
        a, b = left.value, right.value
        if op == "=<":
            return a <= b
        if op == ">=":
            return a >= b
        if op == "<":
            return a < b
        if op == ">":
            return a > b
        if op == "=":
            return a == b
        return a != b
    if op == "=":
        return left == right
    if op == "\\=":
        return left != right
    return False


@dataclass(frozen=True)
class GroundProgram:
    """Variable- and builtin-free rules plus lookup indexes."""

    rules: tuple[Rule, ...]
    rules_by_head: Mapping[Atom, tuple[Rule, ...]] = field(compare=False, default=None)
    atoms_by_predicate: Mapping[tuple[str, int], tuple[Atom, ...]] = field(
        compare=False, default=None
    )

    def rules_for(self, atom: Atom) -> tuple[Rule, ...]:
        return self.rules_by_head.get(atom, ()) if self.rules_by_head else ()

    def candidate_atoms(self, predicate: str, arity: int) -> tuple[Atom, ...]:
        if not self.atoms_by_predicate:
            return ()
        return self.atoms_by_predicate.get((predicate, arity), ())

    @property
    def constraints(self) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.head is None)


Substitution = dict[str, Term]


def _apply(term: Term, theta: Substitution) -> Term:
    if isinstance(term, Variable):
        return theta[term.name]
    return term


def _apply_atom(atom: Atom, theta: Substitution) -> Atom:
    if not atom.args:
        return atom
    return Atom(atom.predicate, tuple(_apply(a, theta) for a in atom.args))


def _match_atom(pattern: Atom, atom: Atom, theta: Substitution) -> Substitution | None:
    """Extend theta so pattern instantiates to atom, or None."""
    if pattern.predicate != atom.predicate or pattern.arity != atom.arity:
        return None
    out = theta
    for p_arg, g_arg in zip(pattern.args, atom.args):
        if isinstance(p_arg, Variable):
            bound = out.get(p_arg.name)
            if bound is None:
                if out is theta:
                    out = dict(theta)
                out[p_arg.name] = g_arg
            elif bound != g_arg:
                return None
        elif p_arg != g_arg:
            return None
    return out if out is not theta else dict(theta)


def _rule_variables(rule: Rule) -> list[str]:
    seen: list[str] = []

    def visit(term: Term) -> None:
        if isinstance(term, Variable) and term.name not in seen:
            seen.append(term.name)

    if rule.head is not None:
        for arg in rule.head.args:
            visit(arg)
    for item in rule.body:
        if isinstance(item, Literal):
            for arg in item.atom.args:
                visit(arg)
        else:
            visit(item.left)
            visit(item.right)
    return seen


class _AtomIndex:
    """Possibly-derivable atoms, insertion-ordered, bucketed by predicate."""

    __slots__ = ("members", "buckets")

    def __init__(self):
        self.members: set[Atom] = set()
        self.buckets: dict[tuple[str, int], list[Atom]] = {}

    def add(self, atom: Atom) -> bool:
        if atom in self.members:
            return False
        self.members.add(atom)
        self.buckets.setdefault((atom.predicate, atom.arity), []).append(atom)
        return True

    def bucket(self, predicate: str, arity: int) -> list[Atom]:
        return self.buckets.get((predicate, arity), ())

    def __contains__(self, atom: Atom) -> bool:
        return atom in self.members


def _positive_atoms(rule: Rule) -> list[Atom]:
    return [
        item.atom
        for item in rule.body
        if isinstance(item, Literal) and not item.negated
    ]


def _ground_builtins_hold(rule: Rule) -> bool:
    for item in rule.body:
        if isinstance(item, Comparison) and not evaluate_comparison(
            item.left, item.op, item.right
        ):
            return False
    return True


class _Instantiator:
    def __init__(self, program: Program, limit: int):
        self.program = program
        self.limit = limit
        self.count = 0
        self.universe = sorted(herbrand_universe(program), key=_term_sort_key)

    def _tick(self, amount: int = 1) -> None:
        self.count += amount
        if self.count > self.limit:
            raise GroundingExplosion(
                f"grounding exceeded {self.limit} rule instances"
            )

    def substitutions(self, rule: Rule, index: _AtomIndex) -> list[Substitution]:
        """All bindings where positive body atoms are possibly derivable and
        builtins hold; leftover variables range over the universe."""
        thetas: list[Substitution] = [{}]
        for item in rule.body:
            if not (isinstance(item, Literal) and not item.negated):
                continue
            extended: list[Substitution] = []
            for theta in thetas:
                pattern = item.atom
                bound = _apply_partial(pattern, theta)
                if bound.is_ground:
                    if bound in index:
                        extended.append(theta)
                    continue
                for atom in index.bucket(pattern.predicate, pattern.arity):
                    theta2 = _match_atom(pattern, atom, theta)
                    if theta2 is not None:
                        self._tick()
                        extended.append(theta2)
            thetas = extended
            if not thetas:
                return []
        variables = _rule_variables(rule)
        missing_any = any(v not in thetas[0] for v in variables)
        if missing_any:
            widened: list[Substitution] = []
            for theta in thetas:
                missing = [v for v in variables if v not in theta]
                for values in product(self.universe, repeat=len(missing)):
                    self._tick()
                    theta2 = dict(theta)
                    theta2.update(zip(missing, values))
                    widened.append(theta2)
            thetas = widened
        out: list[Substitution] = []
        for theta in thetas:
            ok = True
            for item in rule.body:
                if isinstance(item, Comparison):
                    if not evaluate_comparison(
                        _apply(item.left, theta), item.op, _apply(item.right, theta)
                    ):
                        ok = False
                        break
            if ok:
                out.append(theta)
        return out


def _apply_partial(atom: Atom, theta: Substitution) -> Atom:
    if not atom.args:
        return atom
    return Atom(
        atom.predicate,
        tuple(
            theta.get(t.name, t) if isinstance(t, Variable) else t for t in atom.args
        ),
    )


def _possible_atoms(program: Program, inst: _Instantiator) -> _AtomIndex:
    """Least fixpoint of possibly-derivable atoms (negation ignored)."""
    index = _AtomIndex()
    ground_rules: list[tuple[Atom, list[Atom]]] = []
    var_rules: list[Rule] = []
    for rule in program.rules:
        if rule.head is None:
            continue
        if _rule_variables(rule):
            var_rules.append(rule)
        elif _ground_builtins_hold(rule):
            ground_rules.append((rule.head, _positive_atoms(rule)))

    # Watcher propagation for variable-free rules: O(total body size).
    waiting: dict[Atom, list[int]] = {}
    counts: list[int] = []
    queue: deque[Atom] = deque()

    def derive(atom: Atom) -> None:
        if index.add(atom):
            queue.append(atom)

    for rule_id, (head, body_atoms) in enumerate(ground_rules):
        unsatisfied = {a for a in body_atoms if a not in index}
        counts.append(len(unsatisfied))
        for atom in unsatisfied:
            waiting.setdefault(atom, []).append(rule_id)
        if not unsatisfied:
            derive(head)

    def drain() -> None:
        while queue:
            atom = queue.popleft()
            for rule_id in waiting.pop(atom, ()):
                counts[rule_id] -= 1
                if counts[rule_id] == 0:
                    derive(ground_rules[rule_id][0])

    drain()
    changed = True
    while changed:
        changed = False
        for rule in var_rules:
            for theta in inst.substitutions(rule, index):
                head = _apply_atom(rule.head, theta)
                if index.add(head):
                    queue.append(head)
                    changed = True
        drain()
    return index


def ground(program: Program, *, limit: int = DEFAULT_INSTANCE_LIMIT) -> GroundProgram:
    """Ground a program, resolving builtins and pruning underivable instances."""
    inst = _Instantiator(program, limit)
    possible = _possible_atoms(program, inst)

    ground_rules: list[Rule] = []
    for rule in program.rules:
        if not _rule_variables(rule):
            if not _ground_builtins_hold(rule):
                continue
            if any(atom not in possible for atom in _positive_atoms(rule)):
                continue
            inst._tick()
            body = tuple(item for item in rule.body if isinstance(item, Literal))
            ground_rules.append(Rule(rule.head, body))
            continue
        for theta in inst.substitutions(rule, possible):
            inst._tick()
            body = tuple(
                Literal(_apply_atom(item.atom, theta), item.negated)
                for item in rule.body
                if isinstance(item, Literal)
            )
            head = _apply_atom(rule.head, theta) if rule.head is not None else None
            ground_rules.append(Rule(head, body))

    rules_by_head: dict[Atom, list[Rule]] = {}
    atoms_by_predicate: dict[tuple[str, int], list[Atom]] = {}

    def index_atom(atom: Atom) -> None:
        key = (atom.predicate, atom.arity)
        bucket = atoms_by_predicate.setdefault(key, [])
        if atom not in bucket:
            bucket.append(atom)

    for rule in ground_rules:
        if rule.head is not None:
            rules_by_head.setdefault(rule.head, []).append(rule)
            index_atom(rule.head)
    for rule in ground_rules:
        for item in rule.body:
            index_atom(item.atom)

    return GroundProgram(
        rules=tuple(ground_rules),
        rules_by_head={k: tuple(v) for k, v in rules_by_head.items()},
        atoms_by_predicate={k: tuple(v) for k, v in atoms_by_predicate.items()},
    )


def ground_atoms(gp: GroundProgram) -> list[Atom]:
    """Every atom mentioned by the ground program, in first-occurrence order."""
    seen: dict[Atom, None] = {}
    for rule in gp.rules:
        if rule.head is not None:
            seen.setdefault(rule.head)
        for item in rule.body:
            seen.setdefault(item.atom)
    return list(seen)


def facts_of(program: Program | GroundProgram) -> list[Atom]:
    return [r.head for r in program.rules if r.head is not None and not r.body]


def naive_ground_rules(program: Program) -> list[Rule]:
    """Full cross-product grounding with no derivability pruning.

    Kept independent of :func:`ground` so tests can check the two agree
    under the stable-model semantics.
    """
    universe = sorted(herbrand_universe(program), key=_term_sort_key)
    out: list[Rule] = []
    for rule in program.rules:
        names = _rule_variables(rule)
        for values in product(universe, repeat=len(names)):
            theta = dict(zip(names, values))
            ok = True
            body: list[Literal] = []
            for item in rule.body:
                if isinstance(item, Comparison):
                    if not evaluate_comparison(
                        _apply(item.left, theta), item.op, _apply(item.right, theta)
                    ):
                        ok = False
                        break
                else:
                    body.append(Literal(_apply_atom(item.atom, theta), item.negated))
            if not ok:
                continue
            head = _apply_atom(rule.head, theta) if rule.head is not None else None
            out.append(Rule(head, tuple(body)))
    return out
