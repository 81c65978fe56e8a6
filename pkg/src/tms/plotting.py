"""Report figures: convergence curves, scheme trees, Julia pictures."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

from .numerics import LimitReport  # noqa: E402
from .scheme import TreeMappingScheme  # noqa: E402


def convergence_figure(report: LimitReport, path, reference=None, reference_label: str = ""):
    """Log-log sup error against ``n``, one curve per region.

    ``reference`` is an optional callable ``n -> expected error``.
    """
    fig, ax = plt.subplots(figsize=(5, 3.6), dpi=120)
    for j, region in enumerate(report.regions):
        ax.loglog(report.ns, [row[j] for row in report.table], "o-", label=f"region {j}")
    if reference is not None:
        ax.loglog(report.ns, [reference(n) for n in report.ns], "k--", lw=1,
                  label=reference_label or "reference")
    ax.axhline(report.bound, color="0.6", lw=0.8, ls=":", label=f"bound {report.bound:g}")
    ax.set_xlabel("n")
    ax.set_ylabel("sup chordal error")
    ax.set_title(report.name, fontsize=9)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return Path(path)


def tree_figure(s: TreeMappingScheme, path, title: str | None = None):
    """The tree with T0 edges drawn solid and edge labels ``length, degree``."""
    g = nx.Graph()
    names = s.meta.get("vertex_names") or [str(v) for v in range(s.tree.n_vertices)]
    for v in range(len(names)):
        g.add_node(v)
    for e in s.tree.edges:
        g.add_edge(e.a, e.b, e=e)
    pos = nx.kamada_kawai_layout(g) if len(g) > 2 else nx.spring_layout(g, seed=0)
    fig, ax = plt.subplots(figsize=(5, 4), dpi=120)
    t0 = [(e.a, e.b) for e in s.tree.edges if e.in_t0]
    rest = [(e.a, e.b) for e in s.tree.edges if not e.in_t0]
    nx.draw_networkx_edges(g, pos, edgelist=t0, width=2.2, ax=ax)
    nx.draw_networkx_edges(g, pos, edgelist=rest, width=1.0, style="dashed", edge_color="0.5", ax=ax)
    v0 = set(s.tree.V0)
    nx.draw_networkx_nodes(g, pos, nodelist=sorted(v0), node_color="#4287f5", node_size=180, ax=ax)
    nx.draw_networkx_nodes(g, pos, nodelist=[v for v in g if v not in v0], node_color="white",
                           edgecolors="0.3", node_size=120, ax=ax)
    nx.draw_networkx_labels(g, pos, {v: names[v] for v in g}, font_size=7, ax=ax)
    deg = s.map.edge_degree
    labels = {(e.a, e.b): f"{e.length}" + (f", d{deg[i]}" if i in deg else "")
              for i, e in enumerate(s.tree.edges)}
    nx.draw_networkx_edge_labels(g, pos, labels, font_size=6, ax=ax)
    ax.set_title(title or s.meta.get("name", ""), fontsize=9)
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return Path(path)


def julia_figure(rendering, path, title: str = ""):
    cfg = rendering.config
    x0, x1 = cfg.center.real - cfg.scale, cfg.center.real + cfg.scale
    half_h = cfg.scale * cfg.height / cfg.width
    y0, y1 = cfg.center.imag - half_h, cfg.center.imag + half_h
    fig, ax = plt.subplots(figsize=(5, 5 * cfg.height / cfg.width), dpi=120)
    ax.imshow(rendering.rgb(), extent=(x0, x1, y0, y1), interpolation="nearest")
    ax.set_title(f"{title}  Julia pixels {100 * rendering.julia_fraction:.1f}%", fontsize=9)
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return Path(path)
