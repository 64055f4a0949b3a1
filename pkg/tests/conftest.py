"""Shared builders for the test suite."""

import numpy as np
import pytest

import gsis


def random_connected_graph(n, rng, extra_edges=None):
    """Path backbone plus random extra edges, random positive weights."""
    edges = {(i, i + 1) for i in range(n - 1)}
    extra = n if extra_edges is None else extra_edges
    for _ in range(extra):
        i, j = sorted(rng.integers(0, n, 2).tolist())
        if i != j:
            edges.add((i, j))
    edges = sorted(edges)
    weights = rng.uniform(0.5, 2.0, len(edges))
    return gsis.Graph(n, edges, weights)


def laplacian_shift_set(graph, second=None, rng=None):
    """ShiftSet of the Laplacian alone or with a commuting affine companion.

    Any second shift supported on the same edges that commutes with L and
    shares its eigenvectors is of the form a*I + b*L; a random such pair
    exercises the multi-shift code paths without leaving the edge set.
    """
    s1 = gsis.build_standard_shifts(graph, "laplacian")
    if second is None and rng is None:
        return gsis.ShiftSet((s1,))
    if second is None:
        a, b = rng.uniform(-1.0, 1.0), rng.uniform(0.2, 1.0)
        second = a * np.eye(graph.n_vertices) + b * s1.matrix
    s2 = gsis.ShiftMatrix(second, graph)
    return gsis.ShiftSet((s1, s2))


@pytest.fixture
def p3():
    """Path on 3 vertices with its Laplacian decomposition."""
    graph = gsis.path_graph(3)
    shifts = gsis.ShiftSet((gsis.build_standard_shifts(graph, "laplacian"),))
    decomp = gsis.diagonalize_simultaneously(shifts)
    return graph, shifts, decomp
