"""Goal-directed computation of partial stable models.

The solver runs a coinductive SLD search over a ground program while
maintaining a consistent hypothesis set (the partial answer set under
construction).  Truth of a negated call is established by dual resolution:
every rule for the atom must have some body literal refuted.  Rules are
classified over the ground call graph; rules reachable from their own head
through a cycle with an odd number of negations act as global constraints,
and one compiled check per such rule (plus one per integrity constraint)
is appended to every query.

Search discipline (deterministic):

* positive call ``p`` -- fail on a positive ancestor with zero intervening
  negations (positive loop); succeed if ``p`` is already hypothesised true;
  fail if hypothesised false; otherwise resolve rules for ``p`` in textual
  order, body left-to-right, tentatively adding ``p`` to the hypothesis set
  on rule entry (trailed, undone on backtracking).
* negated call ``not p`` -- succeed/fail immediately on a hypothesis hit;
  succeed coinductively when an identical negated ancestor exists (the
  negation distance between identical calls is always even); otherwise
  refute every rule for ``p``; with no rules, ``not p`` holds outright.
  Success commits ``p`` false.

Before an answer is emitted it must also pass a foundedness check: every
atom hypothesised true is rederived from rules whose negated literals the
answer commits to be false, which rejects candidates whose true atoms only
support each other through a positive cycle.

Negation distance bookkeeping: a positive body literal keeps the current
depth, a negated one crosses one negation; inside a refutation, falsifying
a positive body literal keeps the depth and falsifying a negated one
crosses back out through its negation.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .grounding import GroundProgram
from .syntax import Atom, Comparison, Literal, Rule, Variable, format_literal_set


def _subst(atom: Atom, theta: dict) -> Atom:
    """Apply a (possibly partial) variable binding to an atom."""
    if not atom.args:
        return atom
    return Atom(
        atom.predicate,
        tuple(
            theta.get(a.name, a) if isinstance(a, Variable) else a for a in atom.args
        ),
    )


class DepthLimitExceeded(RuntimeError):
    """Derivation depth crossed the configured bound; likely non-termination."""


DEFAULT_DEPTH_LIMIT = 10**5


# --------------------------------------------------------------------------
# Partial answer sets
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PartialAnswerSet:
    """Signed ground literals proved or assumed while answering a query.

    ``signed_literals`` preserves derivation order, which is what the
    renderer prints; ``positive``/``negative`` give set views.
    """

    signed_literals: tuple[tuple[Atom, bool], ...]
    positive: frozenset[Atom] = field(compare=False, default=frozenset())
    negative: frozenset[Atom] = field(compare=False, default=frozenset())

    @staticmethod
    def from_entries(entries: Sequence[tuple[Atom, bool]]) -> "PartialAnswerSet":
        return PartialAnswerSet(
            signed_literals=tuple(entries),
            positive=frozenset(a for a, s in entries if s),
            negative=frozenset(a for a, s in entries if not s),
        )

    @property
    def visible_key(self) -> tuple[frozenset[Atom], frozenset[Atom]]:
        return (
            frozenset(a for a in self.positive if not a.hidden),
            frozenset(a for a in self.negative if not a.hidden),
        )

    def sign_of(self, atom: Atom) -> bool | None:
        if atom in self.positive:
            return True
        if atom in self.negative:
            return False
        return None

    def __str__(self):
        return format_literal_set(self.signed_literals)


class _Hypotheses:
    """Insertion-ordered signed atom set with a trail for backtracking."""

    __slots__ = ("entries", "trail")

    def __init__(self):
        self.entries: dict[Atom, bool] = {}
        self.trail: list[Atom] = []

    def mark(self) -> int:
        return len(self.trail)

    def undo_to(self, mark: int) -> None:
        while len(self.trail) > mark:
            del self.entries[self.trail.pop()]

    def add(self, atom: Atom, sign: bool) -> bool:
        """Record atom with sign; False on conflict, no-op if already there."""
        current = self.entries.get(atom)
        if current is None:
            self.entries[atom] = sign
            self.trail.append(atom)
            return True
        return current == sign

    def sign_of(self, atom: Atom) -> bool | None:
        return self.entries.get(atom)

    def snapshot(self) -> PartialAnswerSet:
        return PartialAnswerSet.from_entries(list(self.entries.items()))


# --------------------------------------------------------------------------
# Rule classification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckGoal:
    """Compiled consistency check for one rule instance.

    For an odd-loop rule ``h :- B`` the check holds when some body literal
    can be refuted or ``h`` holds anyway; for a constraint ``:- B`` only the
    refutation disjunct exists.
    """

    rule_index: int
    rule: Rule


@dataclass(frozen=True)
class RuleClassification:
    olon_rules: frozenset[int]
    ordinary_rules: frozenset[int]
    even_loop_rules: frozenset[int]
    nmr_goals: tuple[CheckGoal, ...]


def _strongly_connected_components(adjacency: dict[Atom, list[Atom]]) -> dict[Atom, int]:
    """Iterative Tarjan; returns atom -> component id."""
    index_of: dict[Atom, int] = {}
    lowlink: dict[Atom, int] = {}
    component: dict[Atom, int] = {}
    on_stack: set[Atom] = set()
    stack: list[Atom] = []
    counter = 0
    components = 0

    for root in adjacency:
        if root in index_of:
            continue
        work = [(root, iter(adjacency.get(root, ())))]
        index_of[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, edges = work[-1]
            advanced = False
            for nxt in edges:
                if nxt not in index_of:
                    index_of[nxt] = lowlink[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(adjacency.get(nxt, ()))))
                    advanced = True
                    break
                if nxt in on_stack:
                    lowlink[node] = min(lowlink[node], index_of[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index_of[node]:
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component[member] = components
                    if member is node or member == node:
                        break
                components += 1
    return component


def classify_rules(gp: GroundProgram) -> RuleClassification:
    """Classify ground rules by the negation parity of call-graph cycles.

    A rule is odd-loop (OLON) when its head is reachable from one of its own
    body literals along a path crossing an odd number of negations; it is
    ordinary when at least one body literal avoids every such path (or the
    body is empty).  Cycles crossing an even, non-zero number of negations
    are recorded separately: they generate alternative answer sets.

    Any cycle through a head stays inside the head's strongly connected
    component, so the parity search is restricted to it; rules whose head
    sits in an acyclic component are ordinary without any search.
    """
    adjacency: dict[Atom, list[Atom]] = {}
    for rule in gp.rules:
        if rule.head is None:
            continue
        targets = adjacency.setdefault(rule.head, [])
        for item in rule.body:
            targets.append(item.atom)
            adjacency.setdefault(item.atom, [])
    component = _strongly_connected_components(adjacency)
    members: dict[int, int] = {}
    for atom, comp in component.items():
        members[comp] = members.get(comp, 0) + 1

    def in_cycle(head: Atom) -> bool:
        comp = component[head]
        if members[comp] > 1:
            return True
        return head in adjacency.get(head, ())  # direct self-loop

    olon: set[int] = set()
    ordinary: set[int] = set()
    even: set[int] = set()

    for index, rule in enumerate(gp.rules):
        if rule.head is None:
            continue
        head = rule.head
        if not in_cycle(head):
            ordinary.add(index)
            continue
        head_comp = component[head]
        per_literal_odd: list[bool] = []
        for item in rule.body:
            if component.get(item.atom) != head_comp:
                per_literal_odd.append(False)
                continue
            reaches_odd = False
            reaches_even = False
            # States are (atom, parity, crossed-any-negation).
            start = (item.atom, 1 if item.negated else 0, item.negated)
            seen = {start}
            frontier = [start]
            while frontier:
                atom, parity, crossed = frontier.pop()
                if atom == head:
                    if parity == 1:
                        reaches_odd = True
                    elif crossed:
                        reaches_even = True
                for next_rule in gp.rules_for(atom):
                    for nxt in next_rule.body:
                        if component.get(nxt.atom) != head_comp:
                            continue
                        state = (
                            nxt.atom,
                            (parity + 1) % 2 if nxt.negated else parity,
                            crossed or nxt.negated,
                        )
                        if state not in seen:
                            seen.add(state)
                            frontier.append(state)
            per_literal_odd.append(reaches_odd)
            if reaches_even:
                even.add(index)
        if any(per_literal_odd):
            olon.add(index)
        if not rule.body or not all(per_literal_odd):
            ordinary.add(index)

    goals = [CheckGoal(i, gp.rules[i]) for i in sorted(olon)]
    goals.extend(
        CheckGoal(i, r) for i, r in enumerate(gp.rules) if r.head is None
    )
    return RuleClassification(
        olon_rules=frozenset(olon),
        ordinary_rules=frozenset(ordinary),
        even_loop_rules=frozenset(even),
        nmr_goals=tuple(goals),
    )


# --------------------------------------------------------------------------
# Frames (ancestor chain)
# --------------------------------------------------------------------------

class _Frame:
    __slots__ = ("positive", "atom", "depth", "parent", "size")

    def __init__(self, positive: bool, atom: Atom, depth: int, parent: "_Frame | None"):
        self.positive = positive
        self.atom = atom
        self.depth = depth
        self.parent = parent
        self.size = 1 if parent is None else parent.size + 1


# --------------------------------------------------------------------------
# Solver
# --------------------------------------------------------------------------

class Solver:
    """Single-threaded search over one immutable ground program.

    Distinct instances over the same program may run concurrently; emitted
    answer sets are immutable snapshots.
    """

    def __init__(self, gp: GroundProgram, *, depth_limit: int = DEFAULT_DEPTH_LIMIT):
        self.gp = gp
        self.depth_limit = depth_limit
        self.classification = classify_rules(gp)
        self.hypotheses = _Hypotheses()

    # -- public API ----------------------------------------------------------

    # Each proof level costs a couple of Python generator frames plus more C
    # stack than the interpreter's recursion counter accounts for, so a large
    # recursion limit dies on the C stack before RecursionError fires.  Cap
    # the limit at a value measured to stay safe on a default 8 MiB stack
    # (proof depth ~5-6k; the crash line is past ~12k) and surface the
    # interpreter's RecursionError as our own depth error.
    _PY_FRAME_CAP = 12_000

    def solve(self, query: Sequence[Literal]) -> Iterator[PartialAnswerSet]:
        """Lazily enumerate partial answer sets containing the query."""
        query = tuple(query)
        old_limit = sys.getrecursionlimit()
        wanted = min(10 * self.depth_limit + 10_000, self._PY_FRAME_CAP)
        if wanted > old_limit:
            sys.setrecursionlimit(wanted)
        try:
            for ground_query in self._query_instances(query):
                self.hypotheses = _Hypotheses()
                for _ in self._prove_conjunction(ground_query, 0, 0, None):
                    for _ in self._prove_checks(0):
                        if self._positives_founded():
                            yield self.hypotheses.snapshot()
        except RecursionError:
            raise DepthLimitExceeded(
                "derivation exceeded the interpreter recursion capacity "
                f"({wanted} frames); the program likely recurses too deeply"
            ) from None
        finally:
            if wanted > old_limit:
                sys.setrecursionlimit(old_limit)

    def _positives_founded(self) -> bool:
        """Reject hypothetical answers whose true atoms only support each
        other in a positive cycle.

        Coinductive hits let an in-progress atom justify another atom's
        truth; that is sound when the mutual dependence crosses negation
        (the reduct strips those literals) but not when two true atoms feed
        each other through positive body literals.  Keep an answer only if
        every hypothesised-true atom is derivable from the rules whose
        negated literals the answer itself commits to be false.
        """
        entries = self.hypotheses.entries
        positives = [atom for atom, sign in entries.items() if sign]
        if not positives:
            return True
        derived: set[Atom] = set()
        remaining = set(positives)
        changed = True
        while changed and remaining:
            changed = False
            for atom in list(remaining):
                for rule in self.gp.rules_for(atom):
                    supported = True
                    for item in rule.body:
                        if item.negated:
                            if entries.get(item.atom) is not False:
                                supported = False
                                break
                        elif item.atom not in derived:
                            supported = False
                            break
                    if supported:
                        derived.add(atom)
                        remaining.discard(atom)
                        changed = True
                        break
        return not remaining

    # -- query grounding -----------------------------------------------------

    def _query_instances(self, query: tuple[Literal, ...]) -> Iterator[tuple[Literal, ...]]:
        if all(lit.atom.is_ground for lit in query):
            yield query
            return
        yield from self._bind(query, 0, {})

    def _bind(self, query, index, theta) -> Iterator[tuple[Literal, ...]]:
        from .grounding import _match_atom  # shared matcher

        if index == len(query):
            instance = tuple(
                Literal(_subst(lit.atom, theta), lit.negated) for lit in query
            )
            if all(lit.atom.is_ground for lit in instance):
                yield instance
            return
        pattern = _subst(query[index].atom, theta)
        if pattern.is_ground:
            yield from self._bind(query, index + 1, theta)
            return
        # Bind remaining variables against atoms the ground program mentions.
        for atom in self.gp.candidate_atoms(pattern.predicate, pattern.arity):
            theta2 = _match_atom(pattern, atom, theta)
            if theta2 is not None:
                yield from self._bind(query, index + 1, theta2)

    # -- search core -----------------------------------------------------------

    def _prove_conjunction(self, items, index, depth, frame) -> Iterator[None]:
        if index == len(items):
            yield
            return
        item = items[index]
        if isinstance(item, Comparison):  # pragma: no cover - grounder removes these
            raise AssertionError("comparison survived grounding")
        if item.negated:
            producer = self._prove_falsity(item.atom, depth + 1, frame)
        else:
            producer = self._prove_atom(item.atom, depth, frame)
        for _ in producer:
            yield from self._prove_conjunction(items, index + 1, depth, frame)

    def _prove_atom(self, atom: Atom, depth: int, frame: "_Frame | None") -> Iterator[None]:
        ancestor = frame
        while ancestor is not None:
            if ancestor.positive and ancestor.atom == atom and ancestor.depth == depth:
                return  # positive loop: no founded support
            ancestor = ancestor.parent
        sign = self.hypotheses.sign_of(atom)
        if sign is True:
            yield
            return
        if sign is False:
            return
        rules = self.gp.rules_for(atom)
        if not rules:
            return
        child = self._push(True, atom, depth, frame)
        mark = self.hypotheses.mark()
        for rule in rules:
            self.hypotheses.add(atom, True)
            yield from self._prove_conjunction(rule.body, 0, depth, child)
            self.hypotheses.undo_to(mark)

    def _prove_falsity(self, atom: Atom, depth: int, frame: "_Frame | None") -> Iterator[None]:
        sign = self.hypotheses.sign_of(atom)
        if sign is False:
            yield
            return
        if sign is True:
            return
        ancestor = frame
        while ancestor is not None:
            if not ancestor.positive and ancestor.atom == atom:
                # Identical negated ancestor: the intervening negation count
                # is even by construction, so succeed coinductively.
                mark = self.hypotheses.mark()
                self.hypotheses.add(atom, False)
                yield
                self.hypotheses.undo_to(mark)
                return
            ancestor = ancestor.parent
        rules = self.gp.rules_for(atom)
        child = self._push(False, atom, depth, frame)
        for _ in self._refute_rules(rules, 0, depth, child):
            # Undo only the commitment itself between alternatives; the
            # suspended refutation generators still own their trail entries.
            mark = self.hypotheses.mark()
            if self.hypotheses.add(atom, False):
                yield
            self.hypotheses.undo_to(mark)

    def _refute_rules(self, rules, index, depth, frame) -> Iterator[None]:
        if index == len(rules):
            yield
            return
        for item in rules[index].body:
            for _ in self._prove_complement(item, depth, frame):
                yield from self._refute_rules(rules, index + 1, depth, frame)

    def _prove_complement(self, item: Literal, depth: int, frame) -> Iterator[None]:
        if item.negated:
            yield from self._prove_atom(item.atom, depth + 1, frame)
        else:
            yield from self._prove_falsity(item.atom, depth, frame)

    def _prove_checks(self, index: int) -> Iterator[None]:
        goals = self.classification.nmr_goals
        if index == len(goals):
            yield
            return
        for _ in self._prove_one_check(goals[index]):
            yield from self._prove_checks(index + 1)

    def _prove_one_check(self, goal: CheckGoal) -> Iterator[None]:
        rule = goal.rule
        for item in rule.body:
            for _ in self._prove_complement(item, 0, None):
                yield
        if rule.head is not None:
            yield from self._prove_atom(rule.head, 0, None)

    def _push(self, positive: bool, atom: Atom, depth: int, frame) -> _Frame:
        child = _Frame(positive, atom, depth, frame)
        if child.size > self.depth_limit:
            raise DepthLimitExceeded(
                f"derivation depth exceeded {self.depth_limit} frames"
            )
        return child


# --------------------------------------------------------------------------
# Convenience entry points
# --------------------------------------------------------------------------

def solve(
    gp: GroundProgram,
    query: Sequence[Literal],
    *,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
) -> Iterator[PartialAnswerSet]:
    yield from Solver(gp, depth_limit=depth_limit).solve(query)


def enumerate_all(
    gp: GroundProgram,
    query: Sequence[Literal],
    *,
    depth_limit: int = DEFAULT_DEPTH_LIMIT,
    max_answers: int | None = None,
    solver: Solver | None = None,
) -> list[PartialAnswerSet]:
    """Drain :func:`solve`, suppressing answers whose visible literals repeat."""
    solver = solver if solver is not None else Solver(gp, depth_limit=depth_limit)
    seen = set()
    answers: list[PartialAnswerSet] = []
    for chs in solver.solve(query):
        key = chs.visible_key
        if key in seen:
            continue
        seen.add(key)
        answers.append(chs)
        if max_answers is not None and len(answers) >= max_answers:
            break
    return answers
