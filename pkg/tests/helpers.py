"""Shared builders and independent oracles for the test suite.

Oracles here deliberately avoid the library's own algorithms: distances
come from Floyd-Warshall over dicts, betweenness from explicit
shortest-path enumeration, and projections from incidence-matrix
products, so agreement is meaningful.
"""

from __future__ import annotations

import itertools
from datetime import datetime, timedelta, timezone

import numpy as np

from forumnet.graph import BipartiteNetwork, OneModeNetwork, edge_key
from forumnet.ingest import ForumDataset, PostRecord, UserProfile

INF = float("inf")


def make_network(edges, nodes=(), mode="user") -> OneModeNetwork:
    """Build a OneModeNetwork from (a, b[, weight]) tuples plus extra nodes."""
    edge_map = {}
    node_set = set(nodes)
    for spec in edges:
        a, b = spec[0], spec[1]
        weight = spec[2] if len(spec) > 2 else 1
        edge_map[edge_key(a, b)] = weight
        node_set.update((a, b))
    ordered = tuple(sorted(node_set))
    return OneModeNetwork(mode=mode, nodes=ordered, edges=edge_map, node_attr={})


def complete_graph(n: int) -> OneModeNetwork:
    names = [f"n{i:02d}" for i in range(n)]
    return make_network(itertools.combinations(names, 2), nodes=names)


def path_graph(n: int) -> OneModeNetwork:
    names = [f"n{i:02d}" for i in range(n)]
    return make_network(zip(names, names[1:]), nodes=names)


def cycle_graph(n: int) -> OneModeNetwork:
    names = [f"n{i:02d}" for i in range(n)]
    return make_network(list(zip(names, names[1:])) + [(names[-1], names[0])], nodes=names)


def star_graph(n: int) -> OneModeNetwork:
    """Star with n nodes total: one hub plus n - 1 leaves."""
    hub = "hub"
    leaves = [f"leaf{i:02d}" for i in range(n - 1)]
    return make_network([(hub, leaf) for leaf in leaves], nodes=[hub] + leaves)


def random_graph(rng, n: int, p: float = 0.5) -> OneModeNetwork:
    names = [f"n{i:02d}" for i in range(n)]
    edges = [(a, b) for a, b in itertools.combinations(names, 2) if rng.random() < p]
    return make_network(edges, nodes=names)


def random_bipartite(rng, n_users: int, n_threads: int, p: float = 0.3) -> BipartiteNetwork:
    users = [f"u{i:02d}" for i in range(n_users)]
    threads = [f"t{i:02d}" for i in range(n_threads)]
    incidence = {}
    for u in users:
        for t in threads:
            if rng.random() < p:
                incidence[(u, t)] = rng.randint(1, 4)
    present_users = tuple(sorted({u for u, _ in incidence}))
    present_threads = tuple(sorted({t for _, t in incidence}))
    return BipartiteNetwork(
        user_nodes=present_users, thread_nodes=present_threads, incidence=incidence
    )


def dataset_from_posts(rows, users=()) -> ForumDataset:
    """Rows are (user_id, thread_id) or (user_id, thread_id, forum_id)."""
    base = datetime(2010, 1, 1, tzinfo=timezone.utc)
    posts = []
    seen_threads = set()
    for i, row in enumerate(rows):
        user_id, thread_id = row[0], row[1]
        forum_id = row[2] if len(row) > 2 else "f1"
        posts.append(
            PostRecord(
                post_id=f"p{i:04d}",
                thread_id=thread_id,
                user_id=user_id,
                forum_id=forum_id,
                timestamp=base + timedelta(hours=i),
                is_thread_start=thread_id not in seen_threads,
            )
        )
        seen_threads.add(thread_id)
    profiles = {u: UserProfile(user_id=u, profession=None) for u, *_ in rows}
    for profile in users:
        profiles[profile.user_id] = profile
    ordered = [profiles[u] for u in sorted(profiles)]
    return ForumDataset(posts=posts, users=ordered, rejected=[])


def adjacency_sets(g: OneModeNetwork) -> dict[str, set[str]]:
    neighbors = {node: set() for node in g.nodes}
    for (a, b) in g.edges:
        neighbors[a].add(b)
        neighbors[b].add(a)
    return neighbors


def floyd_warshall(g: OneModeNetwork) -> dict[tuple[str, str], float]:
    nodes = list(g.nodes)
    dist = {(a, b): (0.0 if a == b else INF) for a in nodes for b in nodes}
    for (a, b) in g.edges:
        dist[(a, b)] = 1.0
        dist[(b, a)] = 1.0
    for k in nodes:
        for i in nodes:
            ik = dist[(i, k)]
            if ik == INF:
                continue
            for j in nodes:
                through = ik + dist[(k, j)]
                if through < dist[(i, j)]:
                    dist[(i, j)] = through
    return dist


def oracle_diameter_apl(g: OneModeNetwork) -> tuple[int, float]:
    """Diameter and mean pairwise distance over the largest component."""
    nodes = list(g.nodes)
    if not nodes:
        return 0, 0.0
    dist = floyd_warshall(g)
    unassigned = set(nodes)
    components = []
    while unassigned:
        seed = min(unassigned)
        comp = {v for v in nodes if dist[(seed, v)] < INF}
        components.append(sorted(comp))
        unassigned -= comp
    components.sort(key=lambda comp: (-len(comp), comp[0]))
    largest = components[0]
    pair_dists = [
        dist[(a, b)] for a, b in itertools.combinations(largest, 2)
    ]
    if not pair_dists:
        return 0, 0.0
    return int(max(pair_dists)), sum(pair_dists) / len(pair_dists)


def _shortest_path_nodes(neighbors, dist_from_s, s, t):
    """Yield every shortest s-t path as a node tuple, walking back from t."""
    if dist_from_s.get(t, INF) == INF:
        return
    stack = [(t, (t,))]
    while stack:
        node, tail = stack.pop()
        if node == s:
            yield tail
            continue
        for prev in neighbors[node]:
            if dist_from_s.get(prev, INF) == dist_from_s[node] - 1:
                stack.append((prev, (prev,) + tail))


def _bfs_distances(neighbors, source):
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for node in frontier:
            for other in neighbors[node]:
                if other not in dist:
                    dist[other] = dist[node] + 1
                    nxt.append(other)
        frontier = nxt
    return dist


def naive_betweenness_raw(g: OneModeNetwork) -> dict[str, float]:
    """Raw betweenness by enumerating every shortest path of every pair."""
    neighbors = adjacency_sets(g)
    nodes = list(g.nodes)
    score = {node: 0.0 for node in nodes}
    for s, t in itertools.combinations(nodes, 2):
        dist = _bfs_distances(neighbors, s)
        paths = list(_shortest_path_nodes(neighbors, dist, s, t))
        if not paths:
            continue
        for path in paths:
            for interior in path[1:-1]:
                score[interior] += 1.0 / len(paths)
    return score


def naive_betweenness(g: OneModeNetwork) -> dict[str, float]:
    n = len(g.nodes)
    if n < 3:
        return {node: 0.0 for node in g.nodes}
    scale = (n - 1) * (n - 2) / 2.0
    return {node: raw / scale for node, raw in naive_betweenness_raw(g).items()}


def projection_oracle(b: BipartiteNetwork, mode: str, weighting: str = "events"):
    """Tie weights from the incidence matrix product, off-diagonal only."""
    users = list(b.user_nodes)
    threads = list(b.thread_nodes)
    matrix = np.zeros((len(users), len(threads)))
    for (u, t), count in b.incidence.items():
        value = 1 if weighting == "events" else count
        matrix[users.index(u), threads.index(t)] = value
    if mode == "user":
        product, names = matrix @ matrix.T, users
    else:
        product, names = matrix.T @ matrix, threads
    edges = {}
    for i, a in enumerate(names):
        for j in range(i + 1, len(names)):
            if product[i, j] > 0:
                edges[edge_key(a, names[j])] = product[i, j]
    return edges
