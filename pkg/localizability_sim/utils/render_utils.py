"""
SVG state maps: nodes colored by final state, radio links in the background.
"""

from pathlib import Path
from typing import Dict, Mapping, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.collections import LineCollection  # noqa: E402
from matplotlib.patches import Circle, Rectangle  # noqa: E402

from ..exceptions import RenderError  # noqa: E402
from ..models.network_models import HoleShape  # noqa: E402
from ..models.protocol_models import NodeState  # noqa: E402
from ..services.graph_core import NetworkGraph  # noqa: E402
from .logger import logger  # noqa: E402

STATE_COLORS = {
    "beacon": "#d62728",
    "localizable": "#1f77b4",
    "rigid": "#ffbf00",
    "flexible": "#7f7f7f",
}


def _state_class(net: NetworkGraph, node: int, state: NodeState) -> str:
    return "beacon" if node in net.beacons else state.value


def render_state_map(
    net: NetworkGraph,
    final_states: Mapping[int, NodeState],
    path: Union[str, Path],
    title: str = "",
) -> Dict[str, int]:
    """
    Writes the map to `path` and returns the marker count per class. Each
    class is one scatter group whose SVG id is `state-<class>`.
    """
    if not final_states:
        raise RenderError("Nothing to render: the final state map is empty.")

    groups: Dict[str, list] = {}
    for node, state in sorted(final_states.items()):
        groups.setdefault(_state_class(net, node, NodeState(state)), []).append(node)

    fig, ax = plt.subplots(figsize=(8, 8))
    try:
        segments = [
            [net.positions[u].as_tuple(), net.positions[v].as_tuple()] for u, v in sorted(net.radio_edges)
        ]
        ax.add_collection(LineCollection(segments, colors="#dddddd", linewidths=0.5, zorder=1, gid="radio-links"))

        if net.hole is not None:
            hole = net.hole
            if hole.shape == HoleShape.DISC:
                patch = Circle((hole.center_x, hole.center_y), hole.radius)
            else:
                patch = Rectangle((hole.x0, hole.y0), hole.x1 - hole.x0, hole.y1 - hole.y0)
            patch.set(fill=False, linestyle="--", edgecolor="black", gid="hole")
            ax.add_patch(patch)

        for cls, color in STATE_COLORS.items():
            members = groups.get(cls)
            if not members:
                continue
            xs = [net.positions[n].x for n in members]
            ys = [net.positions[n].y for n in members]
            ax.scatter(xs, ys, s=24, c=color, label=f"{cls} ({len(members)})", zorder=2, gid=f"state-{cls}")

        ax.set_aspect("equal")
        ax.autoscale_view()
        ax.legend(loc="upper right", fontsize="small")
        if title:
            ax.set_title(title)
        fig.savefig(path, format="svg")
    except OSError as e:
        raise RenderError(f"Could not write state map to '{path}': {e}") from e
    finally:
        plt.close(fig)

    counts = {cls: len(members) for cls, members in groups.items()}
    logger.info(f"State map written to '{path}': {counts}")
    return counts
