import pytest

from gdasp.grounding import ground
from gdasp.oracle import (
    BaseTooLarge,
    enumerate_stable_models,
    stable_models_of,
    verify_explanation,
)
from gdasp.syntax import Atom, Literal, parse_program, parse_query


def models(text, **kw):
    return [
        frozenset(str(a) for a in m)
        for m in enumerate_stable_models(ground(parse_program(text)), **kw)
    ]


# Hand-checked golden corpus: program text -> exact set of stable models.
GOLDEN = [
    ("p.", [{"p"}]),
    ("p. q :- p.", [{"p", "q"}]),
    ("p :- q.", [set()]),
    ("p :- not q. q :- not p.", [{"p"}, {"q"}]),
    ("p :- not p.", []),
    ("p. p :- not p.", [{"p"}]),
    (
        "p :- not q. q :- not p. r :- not s. s :- not r.",
        [{"p", "r"}, {"p", "s"}, {"q", "r"}, {"q", "s"}],
    ),
    ("a :- b. b :- a.", [set()]),
    ("a. b :- a. c :- b.", [{"a", "b", "c"}]),
    ("p :- not q. q :- not p. :- p.", [{"q"}]),
    ("p :- not q.", [{"p"}]),
    ("p :- not q. q.", [{"q"}]),
    ("a :- not b. b :- not c. c :- not a.", []),
    ("a :- not b. b :- not a. c :- a. c :- b.", [{"a", "c"}, {"b", "c"}]),
    ("x :- not y. y :- u. u :- not x.", [{"x"}, {"u", "y"}]),
    ("p :- q, not r. q.", [{"p", "q"}]),
    (":- not p.", []),
    ("p. :- not p.", [{"p"}]),
    ("a :- not b. b :- not a. :- a.", [{"b"}]),
    ("q :- not p. p :- q.", []),
    ("p(a). q(X) :- p(X).", [{"p(a)", "q(a)"}]),
    ("p(1). small :- p(X), X < 2.", [{"p(1)", "small"}]),
]


@pytest.mark.parametrize("text,expected", GOLDEN, ids=[t for t, _ in GOLDEN])
def test_golden_corpus(text, expected):
    assert models(text) == sorted(
        (frozenset(m) for m in expected), key=lambda m: sorted(m)
    )


def test_models_sorted_canonically():
    out = models("p :- not q. q :- not p. r :- not s. s :- not r.")
    assert out == sorted(out, key=sorted)


def test_base_limit():
    text = " ".join(f"a{i}." for i in range(8))
    with pytest.raises(BaseTooLarge):
        models(text, limit=7)
    assert len(models(text, limit=8)) == 1


class TestVerifyExplanation:
    def setup_method(self):
        self.theory = parse_program("p :- a, not q.\nq :- a, b.\nq :- c.")
        self.observation = parse_query("p")

    def test_worked_example_holds(self):
        assert verify_explanation(
            self.theory, [Atom("a")], [Atom("b"), Atom("c")], self.observation
        )

    def test_overcommitted_explanation_fails(self):
        # with both a and b assumed, q becomes true and p can no longer hold
        assert not verify_explanation(
            self.theory, [Atom("a"), Atom("b")], [], self.observation
        )

    def test_entailed_observation_needs_nothing(self):
        assert verify_explanation(parse_program("p."), [], [], self.observation)

    def test_negated_observation(self):
        assert verify_explanation(
            self.theory, [], [Atom("a")], parse_query("not p")
        )
