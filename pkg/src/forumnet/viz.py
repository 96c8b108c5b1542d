"""Tie thinning, force-directed layout, and graph file exports.

Thinning hides ties below a statistical cutoff (mean + k * sd of the tie
weights) so dense networks stay readable; nodes are never dropped. The
layout is a seeded spring embedder: connected hubs migrate toward the
middle of the drawing. Exports cover DOT, GraphML, and a dependency-free
SVG rendering.
"""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .graph import BipartiteNetwork, OneModeNetwork

EXPORT_FORMATS = ("dot", "graphml", "svg")

SVG_SIZE = 1000
SVG_MARGIN = 40


@dataclass(frozen=True)
class ThinningSpec:
    """Cutoff = mean + k_sd * sample standard deviation of edge weights.

    strict=True keeps only weights strictly greater than the cutoff.
    """

    k_sd: float = 1.0
    strict: bool = True

    def __post_init__(self):
        if self.k_sd < 0:
            raise ValueError("k_sd must be >= 0")


@dataclass
class LayoutResult:
    positions: dict[str, tuple[float, float]]
    seed: int
    iterations: int


def thin(g: OneModeNetwork, spec: ThinningSpec | None = None) -> OneModeNetwork:
    """Drop ties at or below the cutoff; keep every node.

    Graphs with fewer than two edges are returned unchanged (no spread to
    measure). The sample standard deviation uses the n-1 denominator.
    """
    spec = spec or ThinningSpec()
    if len(g.edges) < 2:
        return OneModeNetwork(g.mode, g.nodes, dict(g.edges), dict(g.node_attr))
    weights = [float(w) for w in g.edges.values()]
    cutoff = statistics.mean(weights) + spec.k_sd * statistics.stdev(weights)
    if spec.strict:
        kept = {pair: w for pair, w in g.edges.items() if w > cutoff}
    else:
        kept = {pair: w for pair, w in g.edges.items() if w >= cutoff}
    return OneModeNetwork(g.mode, g.nodes, kept, dict(g.node_attr))


def _nodes_edges_modes(network):
    """Uniform (nodes, weighted edges, node->mode) view of either network kind."""
    if isinstance(network, BipartiteNetwork):
        overlap = set(network.user_nodes) & set(network.thread_nodes)
        if overlap:
            raise ValueError(f"user/thread id collision: {sorted(overlap)[:3]}")
        nodes = list(network.user_nodes) + list(network.thread_nodes)
        edges = [(u, t, w) for (u, t), w in sorted(network.incidence.items())]
        modes = {u: "user" for u in network.user_nodes}
        modes.update({t: "thread" for t in network.thread_nodes})
        return nodes, edges, modes
    return (
        list(network.nodes),
        [(a, b, w) for (a, b), w in sorted(network.edges.items())],
        None,
    )


def layout(network, seed: int = 42, iterations: int = 100) -> LayoutResult:
    """Seeded spring embedding scaled to the unit square.

    Nodes repel each other, edges pull their endpoints together, and a
    linearly cooling step cap anneals the placement. Identical
    (network, seed, iterations) inputs give identical positions.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    nodes, edges, _ = _nodes_edges_modes(network)
    n = len(nodes)
    if n == 0:
        raise ValueError("layout requires at least one node")
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    if n == 1:
        return LayoutResult({nodes[0]: (0.5, 0.5)}, seed, iterations)

    index = {node: i for i, node in enumerate(nodes)}
    ei = np.array([index[a] for a, _, _ in edges], dtype=np.intp)
    ej = np.array([index[b] for _, b, _ in edges], dtype=np.intp)
    k = (1.0 / n) ** 0.5
    start_temp = 0.1
    dx = np.empty((n, n))
    dy = np.empty((n, n))
    factor = np.empty((n, n))
    for step in range(iterations):
        temp = start_temp * (1.0 - step / iterations)
        np.subtract(pos[:, 0][:, None], pos[:, 0][None, :], out=dx)
        np.subtract(pos[:, 1][:, None], pos[:, 1][None, :], out=dy)
        np.multiply(dx, dx, out=factor)
        factor += dy * dy
        np.maximum(factor, 1e-12, out=factor)
        # repulsion k^2/d along each pair direction: delta * k^2/d^2
        np.divide(k * k, factor, out=factor)
        disp = np.empty((n, 2))
        disp[:, 0] = np.einsum("ij,ij->i", dx, factor)
        disp[:, 1] = np.einsum("ij,ij->i", dy, factor)
        if len(ei):
            span = pos[ei] - pos[ej]
            length = np.sqrt(np.einsum("ij,ij->i", span, span))
            np.maximum(length, 1e-9, out=length)
            # attraction d^2/k along the edge
            pull = span * (length / k)[:, None]
            np.add.at(disp, ei, -pull)
            np.add.at(disp, ej, pull)
        norm = np.sqrt(np.einsum("ij,ij->i", disp, disp))
        np.maximum(norm, 1e-12, out=norm)
        pos += disp * (np.minimum(norm, temp) / norm)[:, None]

    # rescale each axis into [0, 1]; degenerate axes collapse to center
    lo = pos.min(axis=0)
    span = pos.max(axis=0) - lo
    for axis in range(2):
        if span[axis] > 0:
            pos[:, axis] = (pos[:, axis] - lo[axis]) / span[axis]
        else:
            pos[:, axis] = 0.5
    positions = {node: (float(pos[i, 0]), float(pos[i, 1])) for i, node in enumerate(nodes)}
    return LayoutResult(positions, seed, iterations)


def positions_csv(result: LayoutResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["node_id", "x", "y"])
    for node, (x, y) in result.positions.items():
        writer.writerow([node, repr(x), repr(y)])
    return buf.getvalue()


def _dot_quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _to_dot(nodes, edges, modes, sizes) -> str:
    lines = ["graph G {"]
    for node in nodes:
        attrs = []
        if modes is not None:
            attrs.append(f"mode={_dot_quote(modes[node])}")
        if node in sizes:
            attrs.append(f"size={sizes[node]}")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_dot_quote(node)}{suffix};")
    for a, b, weight in edges:
        lines.append(f"  {_dot_quote(a)} -- {_dot_quote(b)} [weight={weight}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _to_graphml(nodes, edges, modes, sizes) -> str:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="long"/>',
        '  <key id="size" for="node" attr.name="size" attr.type="long"/>',
        '  <key id="mode" for="node" attr.name="mode" attr.type="string"/>',
        '  <graph edgedefault="undirected">',
    ]
    for node in nodes:
        data = []
        if modes is not None:
            data.append(f'<data key="mode">{escape(modes[node])}</data>')
        if node in sizes:
            data.append(f'<data key="size">{sizes[node]}</data>')
        if data:
            out.append(f"    <node id={quoteattr(node)}>{''.join(data)}</node>")
        else:
            out.append(f"    <node id={quoteattr(node)}/>")
    for a, b, weight in edges:
        out.append(
            f"    <edge source={quoteattr(a)} target={quoteattr(b)}>"
            f'<data key="weight">{weight}</data></edge>'
        )
    out.append("  </graph>")
    out.append("</graphml>")
    return "\n".join(out) + "\n"


def _scale_point(point) -> tuple[float, float]:
    x, y = point
    usable = SVG_SIZE - 2 * SVG_MARGIN
    return (SVG_MARGIN + x * usable, SVG_MARGIN + y * usable)


def _to_svg(nodes, edges, modes, sizes, result: LayoutResult) -> str:
    missing = [node for node in nodes if node not in result.positions]
    if missing:
        raise ValueError(f"layout is missing positions for {missing[:3]}")
    max_weight = max((w for _, _, w in edges), default=1)
    max_size = max(sizes.values(), default=0)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f'  <rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>',
        '  <g stroke="#8899aa" stroke-opacity="0.55">',
    ]
    for a, b, weight in edges:
        x1, y1 = _scale_point(result.positions[a])
        x2, y2 = _scale_point(result.positions[b])
        width = 0.6 + 2.4 * weight / max_weight
        out.append(
            f'    <line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}"'
            f' stroke-width="{width:.2f}"/>'
        )
    out.append("  </g>")
    out.append('  <g fill="#3465a4" stroke="#1f3d66" stroke-width="0.8">')
    for node in nodes:
        x, y = _scale_point(result.positions[node])
        if max_size > 0:
            radius = 3.0 + 11.0 * sizes.get(node, 0) / max_size
        else:
            radius = 6.0
        label = f"<title>{escape(node)}</title>"
        if modes is not None and modes[node] == "thread":
            side = 2 * radius
            out.append(
                f'    <rect x="{x - radius:.2f}" y="{y - radius:.2f}"'
                f' width="{side:.2f}" height="{side:.2f}" fill="#cc6644">{label}</rect>'
            )
        else:
            out.append(f'    <circle cx="{x:.2f}" cy="{y:.2f}" r="{radius:.2f}">{label}</circle>')
    out.append("  </g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_graph(
    network,
    layout_result: LayoutResult | None = None,
    format: str = "dot",
    node_size_attr: dict[str, int] | None = None,
) -> str:
    """Serialize a network (one-mode or bipartite) as DOT, GraphML, or SVG.

    SVG needs a layout. Node sizes default to the network's own node
    attribute; pass ``node_size_attr`` to override.
    """
    if format not in EXPORT_FORMATS:
        raise ValueError(f"unknown export format: {format!r}")
    nodes, edges, modes = _nodes_edges_modes(network)
    if node_size_attr is not None:
        sizes = dict(node_size_attr)
    else:
        sizes = dict(getattr(network, "node_attr", {}))
    if format == "dot":
        return _to_dot(nodes, edges, modes, sizes)
    if format == "graphml":
        return _to_graphml(nodes, edges, modes, sizes)
    if layout_result is None:
        raise ValueError("svg export requires a layout")
    return _to_svg(nodes, edges, modes, sizes, layout_result)
