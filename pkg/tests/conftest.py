import pytest

from swlab.exactnum import QuadScalar, inverse, kron
from swlab.symmetry import (Symmetry, build_rank2, classical_pair, glue, noncentral_n3,
                            skew_diagonal_n3, super_example)

SQRT5 = QuadScalar.sqrt(5)
ALPHA_N3 = [(3 - SQRT5) / 2, (3 + SQRT5) / 2]


def gauge(S, g):
    G = kron(g, g)
    return Symmetry(G @ S.S @ inverse(G), S.n)


@pytest.fixture(scope="session")
def n3():
    return build_rank2(*skew_diagonal_n3(1, 1, "plus"))


@pytest.fixture(scope="session")
def n3_minus():
    return build_rank2(*skew_diagonal_n3(1, 1, "minus"))


@pytest.fixture(scope="session")
def classical():
    return build_rank2(*classical_pair())


@pytest.fixture(scope="session")
def glued(classical, n3):
    return glue(classical, n3)


@pytest.fixture(scope="session")
def noncentral():
    return build_rank2(*noncentral_n3("plus"))


@pytest.fixture(scope="session")
def super1():
    return super_example(1)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
