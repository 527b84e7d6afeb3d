"""Heart-failure guideline knowledge base and patient-profile handling.

The rule base ships as a plain-text logic program (``data/hf_guideline.asp``)
so it can be audited without reading engine code.  Patient profiles use the
same fact syntax, one category of predicate per clinical aspect::

    evidence(accf_stage_c).      evidence(age, 60).
    diagnosis(hf_with_reduced_ef).
    history(standard_neurohumoral_antagonist_therapy).
    measurement(lvef, 0.16).
    contraindication(ace_inhibitors).

Lines of the form ``% known_absent: <atom>`` record conditions the chart
explicitly rules out; they produce no facts but stop those atoms from being
treated as missing evidence during abduction.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from decimal import Decimal
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping

from .syntax import Atom, Constant, Number, Program, Rule, parse_program

COR_CLASSES = ("class_1", "class_2a", "class_2b", "class_3")

_STAGES = tuple(f"accf_stage_{s}" for s in "abcd")
_NYHA = tuple(f"nyha_class_{n}" for n in "1234")

_PROFILE_PREDICATES = ("evidence", "diagnosis", "history", "measurement", "contraindication")

_KNOWN_ABSENT_RE = re.compile(r"^\s*%\s*known_absent:\s*(?P<atom>.+?)\s*$")


class ProfileError(ValueError):
    """A patient profile is malformed or internally inconsistent."""


# --------------------------------------------------------------------------
# Knowledge base
# --------------------------------------------------------------------------

@lru_cache(maxsize=1)
def kb_rules() -> Program:
    """The shipped guideline rule base, parsed once."""
    text = resources.files("gdasp").joinpath("data/hf_guideline.asp").read_text("utf-8")
    return parse_program(text)


@lru_cache(maxsize=1)
def treatments() -> tuple[str, ...]:
    """Treatment vocabulary, from the ``treatment/1`` facts of the rule base."""
    out = []
    for rule in kb_rules().rules:
        if rule.is_fact and rule.head.predicate == "treatment":
            out.append(rule.head.args[0].symbol)
    return tuple(out)


def _a(predicate: str, *symbols: str) -> Atom:
    return Atom(predicate, tuple(Constant(s) for s in symbols))


@lru_cache(maxsize=1)
def vocabulary() -> frozenset[Atom]:
    """Clinical-atom inventory: every evidence/diagnosis/history/
    contraindication atom the rule base consults, plus its threshold
    propositions.  Additions are append-only across releases."""
    atoms = {
        _a("evidence", "accf_stage_a"),
        _a("evidence", "accf_stage_b"),
        _a("evidence", "accf_stage_c"),
        _a("evidence", "accf_stage_d"),
        _a("evidence", "nyha_class_1"),
        _a("evidence", "nyha_class_2"),
        _a("evidence", "nyha_class_3"),
        _a("evidence", "nyha_class_4"),
        _a("evidence", "african_american"),
        _a("evidence", "angina"),
        _a("evidence", "fluid_retention"),
        _a("evidence", "hf_symptoms"),
        _a("evidence", "recent_mi"),
        _a("evidence", "sleep_apnea"),
        _a("diagnosis", "hf_with_reduced_ef"),
        _a("diagnosis", "dilated_cardiomyopathy"),
        _a("diagnosis", "diabetes"),
        _a("diagnosis", "hypertension"),
        _a("diagnosis", "atrial_fibrillation"),
        _a("diagnosis", "cardioembolic_source"),
        _a("history", "standard_neurohumoral_antagonist_therapy"),
        _a("history", "ace_inhibitors"),
        _a("history", "beta_blockers"),
        _a("history", "angioedema"),
        _a("history", "thromboembolism"),
        _a("survival_year_greater_than_1"),
        _a("lvef_less_than_30"),
        _a("lvef_less_than_or_equal_40"),
        _a("potassium_greater_than_5"),
        _a("non_lbbb_greater_than_or_equal_150"),
        _a("mi_post_40_days"),
        _a("current_or_recent_history_of_fluid_retention"),
    }
    atoms.update(_a("contraindication", t) for t in treatments())
    atoms.add(_a("contraindication", "arbs"))
    return frozenset(atoms)


# --------------------------------------------------------------------------
# Patient profiles
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PatientProfile:
    """Typed clinical facts for one patient.

    ``known_absent`` lists conditions the record explicitly rules out;
    ``assertions`` holds propositional findings outside the fact scheme
    (e.g. confirmed survival expectations).  ``notes`` records normalisation
    provenance.
    """

    evidence: frozenset[Atom] = frozenset()
    diagnoses: frozenset[Atom] = frozenset()
    history: frozenset[Atom] = frozenset()
    measurements: Mapping[str, Decimal] = field(default_factory=dict)
    contraindications: frozenset[Atom] = frozenset()
    known_absent: frozenset[Atom] = frozenset()
    assertions: frozenset[Atom] = frozenset()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        stages = [a for a in self.evidence if a.predicate == "evidence"
                  and a.arity == 1 and getattr(a.args[0], "symbol", None) in _STAGES]
        if len(stages) > 1:
            raise ProfileError(f"conflicting stage records: {sorted(map(str, stages))}")
        nyha = [a for a in self.evidence if a.predicate == "evidence"
                and a.arity == 1 and getattr(a.args[0], "symbol", None) in _NYHA]
        if len(nyha) > 1:
            raise ProfileError(f"conflicting NYHA class records: {sorted(map(str, nyha))}")
        for name, value in self.measurements.items():
            if value < 0:
                raise ProfileError(f"negative measurement {name}={value}")

    @property
    def facts(self) -> frozenset[Atom]:
        atoms = set(self.evidence | self.diagnoses | self.history
                    | self.contraindications | self.assertions)
        atoms.update(
            Atom("measurement", (Constant(name), Number(value)))
            for name, value in self.measurements.items()
        )
        return frozenset(atoms)

    def canonical_text(self) -> str:
        lines = [f"{rule}" for rule in profile_to_facts(self)]
        lines.extend(f"% known_absent: {a}" for a in sorted(self.known_absent, key=str))
        return "\n".join(lines) + "\n"


def _classify_fact(atom: Atom, profile: dict) -> None:
    if atom.predicate == "evidence":
        profile["evidence"].add(atom)
    elif atom.predicate == "diagnosis":
        profile["diagnoses"].add(atom)
    elif atom.predicate == "history":
        profile["history"].add(atom)
    elif atom.predicate == "contraindication":
        profile["contraindications"].add(atom)
    elif atom.predicate == "measurement":
        if atom.arity != 2 or not isinstance(atom.args[1], Number) \
                or not isinstance(atom.args[0], Constant):
            raise ProfileError(f"malformed measurement fact: {atom}")
        profile["measurements"][atom.args[0].symbol] = atom.args[1].value
    else:
        profile["assertions"].add(atom)


def load_profile(text: str) -> PatientProfile:
    """Parse profile facts plus ``% known_absent:`` annotations."""
    known_absent: set[Atom] = set()
    for line in text.splitlines():
        m = _KNOWN_ABSENT_RE.match(line)
        if m:
            atom_text = m.group("atom").rstrip(".")
            parsed = parse_program(atom_text + ".")
            known_absent.add(parsed.rules[0].head)
    program = parse_program(text)
    if program.abducible_directives:
        raise ProfileError("profiles may not declare abducibles")
    buckets = {
        "evidence": set(), "diagnoses": set(), "history": set(),
        "measurements": {}, "contraindications": set(), "assertions": set(),
    }
    for rule in program.rules:
        if not rule.is_fact:
            raise ProfileError(f"profiles may contain only facts, found: {rule}")
        if not rule.head.is_ground:
            raise ProfileError(f"non-ground profile fact: {rule}")
        _classify_fact(rule.head, buckets)
    return PatientProfile(
        evidence=frozenset(buckets["evidence"]),
        diagnoses=frozenset(buckets["diagnoses"]),
        history=frozenset(buckets["history"]),
        measurements=dict(buckets["measurements"]),
        contraindications=frozenset(buckets["contraindications"]),
        known_absent=frozenset(known_absent),
        assertions=frozenset(buckets["assertions"]),
    )


def normalize_profile(profile: PatientProfile) -> PatientProfile:
    """Scale fractional LVEF values to percent and record implicit absences.

    A staged patient has exactly one stage, and a graded patient exactly one
    NYHA class, so the unrecorded alternatives are added to ``known_absent``.
    """
    notes = list(profile.notes)
    measurements = dict(profile.measurements)
    lvef = measurements.get("lvef")
    if lvef is not None and lvef < 1:
        scaled = lvef * 100
        if scaled == scaled.to_integral_value():
            scaled = scaled.quantize(Decimal(1))
        else:
            scaled = scaled.normalize()
        measurements["lvef"] = scaled
        notes.append(f"lvef {lvef} interpreted as a fraction, scaled to {scaled}")
    if "lvef" in measurements and not (0 <= measurements["lvef"] <= 100):
        raise ProfileError(f"lvef out of range: {measurements['lvef']}")

    known_absent = set(profile.known_absent)
    for group in (_STAGES, _NYHA):
        present = {
            a.args[0].symbol
            for a in profile.evidence
            if a.arity == 1 and isinstance(a.args[0], Constant)
            and a.args[0].symbol in group
        }
        if present:
            for other in group:
                if other not in present:
                    known_absent.add(_a("evidence", other))
    if known_absent != set(profile.known_absent):
        notes.append("unrecorded stage/NYHA alternatives marked known-absent")

    return replace(
        profile,
        measurements=measurements,
        known_absent=frozenset(known_absent),
        notes=tuple(notes),
    )


def profile_to_facts(profile: PatientProfile) -> list[Rule]:
    """One fact per profile atom and measurement, deterministic order."""
    atoms = sorted(profile.facts, key=str)
    return [Rule(atom) for atom in atoms]


def profile_theory(profile: PatientProfile, kb: Program | None = None) -> Program:
    """The rule base extended with the profile's facts."""
    base = kb if kb is not None else kb_rules()
    return base.extended(profile_to_facts(profile))


# --------------------------------------------------------------------------
# Bundled cases
# --------------------------------------------------------------------------

def load_case_profile(filename: str) -> PatientProfile:
    text = resources.files("gdasp").joinpath(f"data/patients/{filename}").read_text("utf-8")
    return normalize_profile(load_profile(text))


def bundled_cases() -> list[dict]:
    raw = resources.files("gdasp").joinpath("data/patients/cases.json").read_text("utf-8")
    return json.loads(raw)["cases"]
