import pytest

from gdasp.abduction import (
    AbducibleConflict,
    AbductionProblem,
    Explanation,
    abduce,
    expand_abducibles,
    extract_explanation,
    generate_abducible_declarations,
    minimal_explanations,
)
from gdasp.engine import enumerate_all
from gdasp.grounding import ground
from gdasp.oracle import verify_explanation
from gdasp.syntax import Atom, Constant, Literal, Program, Rule, Variable, parse_program, parse_query, render


def atoms(*names):
    return tuple(Atom(n) for n in names)


class TestExpansion:
    def test_four_rules_per_declaration_appended_last(self, abduction_theory):
        program = Program(abduction_theory.rules, atoms("a", "b", "c"))
        expanded = expand_abducibles(program)
        assert len(expanded.rules) == len(abduction_theory.rules) + 12
        assert expanded.rules[: len(abduction_theory.rules)] == abduction_theory.rules
        block = expanded.rules[len(abduction_theory.rules):][:4]
        assert [str(r) for r in block] == [
            "a :- not _neg_a, _abd_a.",
            "_neg_a :- not a.",
            "_abd_a :- not _negabd_a.",
            "_negabd_a :- not _abd_a.",
        ]

    def test_variable_pattern_keeps_variables(self):
        program = parse_program("p(X) :- q(X), goal(X). q(a).\n#abducible goal(X).")
        expanded = expand_abducibles(program)
        schema = expanded.rules[-4:]
        assert str(schema[0]) == "goal(X) :- not _neg_goal(X), _abd_goal(X)."
        assert str(schema[3]) == "_negabd_goal(X) :- not _abd_goal(X)."

    def test_pattern_unifying_with_rule_head_rejected(self):
        program = parse_program("p :- q.\n#abducible p.")
        with pytest.raises(AbducibleConflict):
            expand_abducibles(program)

    def test_problem_validates_on_construction(self, abduction_theory):
        with pytest.raises(AbducibleConflict):
            AbductionProblem(abduction_theory, parse_query("p"), atoms("q"))


class TestAbduce:
    def test_worked_example(self, abduction_theory):
        problem = AbductionProblem(abduction_theory, parse_query("p"), atoms("a", "b", "c"))
        results = list(abduce(problem))
        assert len(results) == 1
        chs, explanation = results[0]
        assert chs.positive == {Atom("p"), Atom("a"), Atom("_abd_a")} | {
            a for a in chs.positive if a.hidden
        }
        assert {str(a) for a in chs.positive if not a.hidden} == {"p", "a"}
        assert {str(a) for a in chs.negative if not a.hidden} == {"q", "b", "c"}
        assert explanation.assumed_true == (Atom("a"),)
        assert set(explanation.assumed_false) == {Atom("b"), Atom("c")}

    def test_irrelevant_abducible_never_appears(self, abduction_theory):
        problem = AbductionProblem(
            abduction_theory, parse_query("p"), atoms("a", "b", "c", "d")
        )
        results = list(abduce(problem))
        assert len(results) == 1
        chs, explanation = results[0]
        assert Atom("d") not in chs.positive | chs.negative
        assert Atom("d") not in set(explanation.assumed_true) | set(explanation.assumed_false)

    def test_entailed_observation_needs_no_assumptions(self):
        problem = AbductionProblem(parse_program("p."), parse_query("p"), atoms("a"))
        ((chs, explanation),) = list(abduce(problem))
        assert explanation.is_empty

    def test_expansion_neutrality_without_declarations(self, abduction_theory):
        problem = AbductionProblem(abduction_theory, parse_query("not q"), ())
        via_abduce = [render(chs) for chs, _ in abduce(problem)]
        via_solve = [
            render(chs)
            for chs in enumerate_all(ground(abduction_theory), parse_query("not q"))
        ]
        assert via_abduce == via_solve

    def test_no_auxiliary_atoms_visible(self, abduction_theory):
        problem = AbductionProblem(abduction_theory, parse_query("p"), atoms("a", "b", "c"))
        for chs, explanation in abduce(problem):
            assert "_" not in render(chs)
            for atom in explanation.assumed_true + explanation.assumed_false:
                assert not atom.hidden

    def test_unexplainable_observation_yields_nothing(self):
        problem = AbductionProblem(
            parse_program("p :- a, b. :- a."), parse_query("p"), atoms("a", "b")
        )
        assert list(abduce(problem)) == []

    def test_explanations_verified_by_oracle(self, abduction_theory):
        problem = AbductionProblem(abduction_theory, parse_query("p"), atoms("a", "b", "c"))
        for _, explanation in abduce(problem):
            assert verify_explanation(
                abduction_theory,
                explanation.assumed_true,
                explanation.assumed_false,
                problem.observation,
            )

    def test_two_rule_schema_equivalent_for_ground_atoms(self, abduction_theory):
        """The informal two-rule expansion assumes the same atoms with the
        same signs as the four-rule one; only hidden plumbing differs."""
        two_rule = parse_program(
            "p :- a, not q.\nq :- a, b.\nq :- c.\n"
            "a :- not _not_a. _not_a :- not a.\n"
            "b :- not _not_b. _not_b :- not b.\n"
            "c :- not _not_c. _not_c :- not c.\n"
        )
        four_rule = AbductionProblem(
            abduction_theory, parse_query("p"), atoms("a", "b", "c")
        )
        two = enumerate_all(ground(two_rule), parse_query("p"))
        four = [chs for chs, _ in abduce(four_rule)]
        key = lambda chs: (
            {str(a) for a in chs.positive if not a.hidden},
            {str(a) for a in chs.negative if not a.hidden},
        )
        assert [key(c) for c in two] == [key(c) for c in four]


class TestMinimalExplanations:
    def test_dominated_explanations_dropped(self):
        small = Explanation((Atom("a"),), ())
        large = Explanation((Atom("a"), Atom("b")), ())
        assert minimal_explanations([large, small]) == [small]

    def test_incomparable_kept_in_order(self):
        e1 = Explanation((Atom("a"),), ())
        e2 = Explanation((Atom("b"),), ())
        assert minimal_explanations([e1, e2]) == [e1, e2]


class TestDeclarationGeneration:
    def test_unrecorded_vocabulary_atom_declared(self):
        vocab = {Atom("history", (Constant("angioedema"),))}
        out = generate_abducible_declarations(vocab, profile_facts=set())
        assert out == [Atom("history", (Constant("angioedema"),))]

    def test_profile_fact_not_declared(self):
        atom = Atom("contraindication", (Constant("ace_inhibitors"),))
        assert generate_abducible_declarations({atom}, profile_facts={atom}) == []

    def test_known_absent_not_declared(self):
        atom = Atom("diagnosis", (Constant("atrial_fibrillation"),))
        out = generate_abducible_declarations(
            {atom}, profile_facts=set(), known_absent={atom}
        )
        assert out == []

    def test_derivable_atom_not_declared(self):
        theory = parse_program("lvef_less_than_30 :- measurement(lvef, D), D =< 30.")
        out = generate_abducible_declarations(
            {Atom("lvef_less_than_30"), Atom("survival_year_greater_than_1")},
            profile_facts=set(),
            theory=theory,
        )
        assert out == [Atom("survival_year_greater_than_1")]
