import numpy as np
import pytest

from cml.graphs import Dag

# 13-node demo network used throughout the suite. Two interesting hubs sit a
# few steps apart, connected only through nodes outside their blankets, which
# exercises every piece of the local-discovery machinery. Edges are 1-based
# here for readability and shifted to 0-based when the Dag is built.
DEMO13_EDGES_1BASED = [
    (1, 3),
    (2, 3),
    (2, 12),
    (3, 4),
    (3, 5),
    (4, 6),
    (6, 11),
    (8, 7),
    (8, 10),
    (9, 8),
    (11, 9),
    (12, 9),
    (13, 1),
    (13, 2),
]

DEMO13_NAMES = tuple(f"X{i}" for i in range(1, 14))


def make_demo13() -> Dag:
    edges = [(i - 1, j - 1) for i, j in DEMO13_EDGES_1BASED]
    return Dag.from_edges(13, edges, names=DEMO13_NAMES)


def n(*one_based):
    """Shift 1-based node labels to internal 0-based indices."""
    if len(one_based) == 1:
        return one_based[0] - 1
    return tuple(v - 1 for v in one_based)


def nset(*one_based):
    return {v - 1 for v in one_based}


@pytest.fixture(scope="session")
def demo13() -> Dag:
    return make_demo13()


@pytest.fixture(scope="session")
def demo13_targets():
    """The worked-example target pair X3, X8 (0-based)."""
    return (2, 7)


def random_dag(p: int, expected_degree: float, rng: np.random.Generator) -> Dag:
    """Small-corpus generator local to the tests (the package has its own)."""
    order = rng.permutation(p)
    prob = min(1.0, expected_degree / max(p - 1, 1))
    edges = []
    for a in range(p):
        for b in range(a + 1, p):
            if rng.random() < prob:
                edges.append((int(order[a]), int(order[b])))
    return Dag.from_edges(p, edges)
