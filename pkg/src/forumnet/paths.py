"""Unweighted shortest-path machinery shared by the measure modules.

Breadth-first searches from every source run level-synchronously over a
dense adjacency matrix. At the scale this package targets (hundreds to a
few thousand nodes) the matrix form is fast, and every reduction happens
in a fixed order, so repeated runs are bit-identical.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .graph import OneModeNetwork


def adjacency_matrix(g: OneModeNetwork) -> np.ndarray:
    """Boolean adjacency in node order (weights ignored: binary view)."""
    n = len(g.nodes)
    index = {node: i for i, node in enumerate(g.nodes)}
    adj = np.zeros((n, n), dtype=bool)
    for a, b in g.edges:
        i, j = index[a], index[b]
        adj[i, j] = True
        adj[j, i] = True
    return adj


def _bfs_levels(adj: np.ndarray, with_sigma: bool):
    """All-sources BFS. Returns (dist, sigma); dist is -1 when unreachable,
    sigma counts shortest paths (None unless requested)."""
    n = adj.shape[0]
    dist = np.full((n, n), -1, dtype=np.int32)
    sigma = np.eye(n, dtype=np.float64) if with_sigma else None
    if n == 0:
        return dist, sigma
    np.fill_diagonal(dist, 0)
    hop = adj.astype(np.float64)
    frontier = np.eye(n, dtype=bool)
    level = 0
    while True:
        if with_sigma:
            reach = np.where(frontier, sigma, 0.0) @ hop
        else:
            reach = frontier.astype(np.float64) @ hop
        newly = (reach > 0.0) & (dist < 0)
        if not newly.any():
            break
        level += 1
        dist[newly] = level
        if with_sigma:
            sigma[newly] = reach[newly]
        frontier = newly
    return dist, sigma


def all_pairs_distances(adj: np.ndarray) -> np.ndarray:
    """dist[i, j] = hops from i to j; -1 when unreachable."""
    return _bfs_levels(adj, with_sigma=False)[0]


def betweenness_raw(adj: np.ndarray) -> np.ndarray:
    """Raw betweenness per node: Brandes dependency accumulation.

    Credit for a pair splits evenly over its shortest paths; each
    unordered pair is counted once. Sources are accumulated in index
    order (vectorized), so output is deterministic.
    """
    n = adj.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.float64)
    dist, sigma = _bfs_levels(adj, with_sigma=True)
    hop = adj.astype(np.float64)
    inv_sigma = np.zeros_like(sigma)
    np.divide(1.0, sigma, out=inv_sigma, where=sigma > 0.0)
    delta = np.zeros((n, n), dtype=np.float64)
    for level in range(int(dist.max()), 0, -1):
        # nodes at `level` push (1 + delta)/sigma back to predecessors
        coef = np.where(dist == level, (1.0 + delta) * inv_sigma, 0.0)
        pushed = coef @ hop
        on_prev = dist == level - 1
        delta += np.where(on_prev, pushed * sigma, 0.0)
    np.fill_diagonal(delta, 0.0)
    # each unordered pair was visited from both endpoints
    return delta.sum(axis=0) / 2.0


def connected_components(g: OneModeNetwork) -> list[list[str]]:
    """Components as sorted node lists, largest first.

    Ties on size break toward the component holding the lexicographically
    smallest node, so "the largest component" is deterministic.
    """
    adjacency = g.adjacency_map()
    seen: set[str] = set()
    components: list[list[str]] = []
    for start in g.nodes:
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        component = []
        while queue:
            node = queue.popleft()
            component.append(node)
            for neighbor in sorted(adjacency[node]):
                if neighbor not in seen:
                    seen.add(neighbor)
                    queue.append(neighbor)
        components.append(sorted(component))
    components.sort(key=lambda comp: (-len(comp), comp[0]))
    return components
