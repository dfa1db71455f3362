import mpmath
import numpy as np
import pytest

from dtoqw import graph as gr
from dtoqw.walk import make_state

T6_EDGES = [(0, 1), (0, 2), (0, 3), (0, 4), (2, 4), (2, 5), (3, 4), (4, 5)]


def reference_graphs():
    return {
        "P5": gr.path(5),
        "C3": gr.cycle(3),
        "S5": gr.star(5),
        "K5": gr.complete(5),
        "K23": gr.complete_bipartite(2, 3),
        "T6": gr.from_edge_list(6, T6_EDGES),
    }


@pytest.fixture(params=sorted(reference_graphs()))
def reference_graph(request):
    return reference_graphs()[request.param]


def random_state(n, rng):
    """Random valid block-diagonal density matrix."""
    blocks = []
    for _ in range(n):
        rank = rng.integers(1, n + 1)
        a = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
        blocks.append(a @ a.conj().T * rng.uniform(0.1, 1.0))
    blocks = np.array(blocks)
    blocks /= np.einsum("uii->", blocks).real
    return make_state(blocks)


def lambda_mp(t, gamma, g):
    """lambda(t) in 50-digit complex arithmetic."""
    with mpmath.workdps(50):
        t, gamma, g = mpmath.mpf(t), mpmath.mpf(gamma), mpmath.mpf(g)
        l = mpmath.sqrt(mpmath.mpc(g * g - 2 * gamma * g))
        b = (g / l) * mpmath.sinh(l * t / 2) + mpmath.cosh(l * t / 2)
        return float((1 - mpmath.exp(-g * t) * b * b).real)


# filled by test_acceptance.py, echoed at the end of the session
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
