import os

import numpy as np
import pytest

from citetopo.graph import graph_from_edges

DATA_DIR = os.environ.get("CITETOPO_DATA", os.path.join(os.path.dirname(__file__), "..", "data"))


def random_graph(rng, n_max=40, p=None, directed_only=False):
    """Random simple digraph on at most ``n_max`` labels (isolated nodes dropped later)."""
    n = int(rng.integers(2, n_max + 1))
    p = rng.uniform(0.02, 0.4) if p is None else p
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    if directed_only:
        mask &= ~mask.T
    src, dst = np.nonzero(mask)
    if len(src) == 0:
        src, dst = np.array([0]), np.array([1])
    return graph_from_edges(np.column_stack([src, dst]))


def random_graphs(count, seed, **kw):
    rng = np.random.default_rng(seed)
    return [random_graph(rng, **kw) for _ in range(count)]


def dataset_path(*names):
    """First existing file among ``names`` in the data directory, else ``None``."""
    for name in names:
        path = os.path.join(DATA_DIR, name)
        if os.path.exists(path):
            return path
    return None


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
