import pytest

from recset import (
    IntMod,
    RecurrenceSpec,
    Sym,
    VecMod,
    build_cyclic_group,
    build_identity_closure,
    build_recurrence,
    build_span,
    saturate,
)


def z5(v):
    return IntMod(v, 5)


def vec6(*coords):
    return VecMod(coords, 6)


@pytest.fixture
def z5_instance():
    return build_cyclic_group(5, 1, "additive")


@pytest.fixture
def z5_result(z5_instance):
    return saturate(z5_instance)


@pytest.fixture
def span6():
    return build_span(6, 1, [[2]])


@pytest.fixture
def identity_pq():
    return build_identity_closure([Sym("p"), Sym("q")])


@pytest.fixture
def fib10():
    return build_recurrence(RecurrenceSpec(2, [1, 1], 0, [1, 1], 10))


# One line per acceptance criterion, filled by test_acceptance and echoed at the end of the run.
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
