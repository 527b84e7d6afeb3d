import pytest

from gdasp.syntax import parse_program


EVEN_LOOP_PAIR = "p :- not q.\nq :- not p.\nr :- not s.\ns :- not r.\n"

ABDUCTION_THEORY = "p :- a, not q.\nq :- a, b.\nq :- c.\n"


@pytest.fixture
def even_loop_pair():
    return parse_program(EVEN_LOOP_PAIR)


@pytest.fixture
def abduction_theory():
    return parse_program(ABDUCTION_THEORY)
