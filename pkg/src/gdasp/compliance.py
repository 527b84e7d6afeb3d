"""Adherence checking: enumerate compliant recommendations, classify a
proposed treatment, and abduce the missing evidence for non-compliant ones.

A proposal is *compliant* when it already follows from the rule base and the
profile alone.  Otherwise the proposal is posed as an observation over the
same theory with every plausible-but-unrecorded clinical atom declared
abducible: a non-empty set of explanations means the proposal is repairable
once the abduced evidence is confirmed, an empty one means it should be
rejected.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .abduction import (
    AbductionProblem,
    Explanation,
    abduce,
    generate_abducible_declarations,
    minimal_explanations,
)
from .engine import Solver
from .grounding import ground
from .heart_failure import (
    COR_CLASSES,
    PatientProfile,
    kb_rules,
    profile_theory,
    treatments,
    vocabulary,
)
from .syntax import Atom, Constant, Literal, Program


class UnknownAtom(ValueError):
    """Atom outside the clinical vocabulary."""


class UnknownTreatment(ValueError):
    """Treatment (or recommendation class) outside the KB vocabulary."""


DEFAULT_EXPLANATION_CAP = 32


@dataclass(frozen=True)
class Recommendation:
    treatment: str
    cor_class: str

    @property
    def atom(self) -> Atom:
        return Atom(
            "recommendation", (Constant(self.treatment), Constant(self.cor_class))
        )

    def __str__(self):
        return str(self.atom)


class Verdict(str, Enum):
    COMPLIANT = "compliant"
    REPAIRABLE_WITH_EVIDENCE = "repairable_with_evidence"
    REJECTED = "rejected"


@dataclass(frozen=True)
class ComplianceReport:
    proposed: Recommendation
    verdict: Verdict
    explanations: tuple[Explanation, ...]
    compliant_set: tuple[Recommendation, ...]
    timings_ms: dict

    def to_json(self) -> dict:
        return {
            "proposed": {
                "treatment": self.proposed.treatment,
                "cor_class": self.proposed.cor_class,
            },
            "verdict": self.verdict.value,
            "explanations": [
                {
                    "assumed_true": [str(a) for a in e.assumed_true],
                    "assumed_false": [str(a) for a in e.assumed_false],
                }
                for e in self.explanations
            ],
            "compliant_set": [
                {"treatment": r.treatment, "cor_class": r.cor_class}
                for r in self.compliant_set
            ],
            "timings_ms": dict(self.timings_ms),
        }


def _validate(proposed: Recommendation) -> None:
    if proposed.treatment not in treatments():
        raise UnknownTreatment(f"unknown treatment {proposed.treatment!r}")
    if proposed.cor_class not in COR_CLASSES:
        raise UnknownTreatment(f"unknown recommendation class {proposed.cor_class!r}")


# Ground program cache keyed by (kb identity, profile content); profiles are
# tiny and the KB object is long-lived, so a small LRU-ish dict suffices.
_GROUND_CACHE: dict[tuple[int, str], object] = {}
_GROUND_CACHE_MAX = 64


def _ground_theory(profile: PatientProfile, kb: Program | None):
    key = (id(kb) if kb is not None else 0, profile.canonical_text())
    cached = _GROUND_CACHE.get(key)
    if cached is None:
        cached = ground(profile_theory(profile, kb))
        if len(_GROUND_CACHE) >= _GROUND_CACHE_MAX:
            _GROUND_CACHE.pop(next(iter(_GROUND_CACHE)))
        _GROUND_CACHE[key] = cached
    return cached


def enumerate_recommendations(
    profile: PatientProfile, *, kb: Program | None = None
) -> list[Recommendation]:
    """Every (treatment, class) pair derivable from the profile alone."""
    solver = Solver(_ground_theory(profile, kb))
    out: list[Recommendation] = []
    for treatment in treatments():
        for cor_class in COR_CLASSES:
            rec = Recommendation(treatment, cor_class)
            if next(solver.solve((Literal(rec.atom),)), None) is not None:
                out.append(rec)
    return out


def abducibles_for(
    profile: PatientProfile,
    *,
    kb: Program | None = None,
    exclude: Iterable[Atom] = (),
) -> list[Atom]:
    """Abducible declarations for a profile: vocabulary atoms that are not
    recorded, not ruled out, and not derivable."""
    theory = profile_theory(profile, kb)
    return generate_abducible_declarations(
        vocabulary(),
        profile.facts,
        known_absent=set(profile.known_absent) | set(exclude),
        theory=theory,
    )


def check_compliance(
    profile: PatientProfile,
    proposed: Recommendation,
    *,
    kb: Program | None = None,
    max_explanations: int = DEFAULT_EXPLANATION_CAP,
    minimal: bool = True,
) -> ComplianceReport:
    """Classify a proposed treatment against the guideline rule base."""
    _validate(proposed)
    timings: dict[str, float] = {}

    started = time.perf_counter()
    compliant = enumerate_recommendations(profile, kb=kb)
    timings["enumerate_ms"] = round((time.perf_counter() - started) * 1000, 3)

    if proposed in compliant:
        return ComplianceReport(
            proposed, Verdict.COMPLIANT, (), tuple(compliant), timings
        )

    # A physician proposing a treatment has implicitly ruled out that
    # treatment's own contraindication, so it is not offered for abduction.
    own_gate = Atom("contraindication", (Constant(proposed.treatment),))
    started = time.perf_counter()
    problem = AbductionProblem(
        theory=profile_theory(profile, kb),
        observation=(Literal(proposed.atom),),
        abducibles=tuple(abducibles_for(profile, kb=kb, exclude=(own_gate,))),
    )
    explanations: list[Explanation] = []
    for _, explanation in abduce(problem, max_answers=max_explanations):
        if all(explanation.key != seen.key for seen in explanations):
            explanations.append(explanation)
    if minimal:
        explanations = minimal_explanations(explanations)
    timings["abduce_ms"] = round((time.perf_counter() - started) * 1000, 3)

    if explanations:
        verdict = Verdict.REPAIRABLE_WITH_EVIDENCE
    else:
        verdict = Verdict.REJECTED
    return ComplianceReport(
        proposed, verdict, tuple(explanations), tuple(compliant), timings
    )


def confirm_evidence(profile: PatientProfile, atoms: Iterable[Atom]) -> PatientProfile:
    """Record abduced atoms as facts; the caller re-checks compliance next."""
    from dataclasses import replace

    atoms = list(atoms)
    vocab = vocabulary()
    for atom in atoms:
        if atom not in vocab:
            raise UnknownAtom(f"{atom} is not in the clinical vocabulary")
    evidence = set(profile.evidence)
    diagnoses = set(profile.diagnoses)
    history = set(profile.history)
    contraindications = set(profile.contraindications)
    assertions = set(profile.assertions)
    known_absent = set(profile.known_absent) - set(atoms)
    for atom in atoms:
        if atom.predicate == "evidence":
            evidence.add(atom)
        elif atom.predicate == "diagnosis":
            diagnoses.add(atom)
        elif atom.predicate == "history":
            history.add(atom)
        elif atom.predicate == "contraindication":
            contraindications.add(atom)
        else:
            assertions.add(atom)
    return replace(
        profile,
        evidence=frozenset(evidence),
        diagnoses=frozenset(diagnoses),
        history=frozenset(history),
        contraindications=frozenset(contraindications),
        assertions=frozenset(assertions),
        known_absent=frozenset(known_absent),
    )
