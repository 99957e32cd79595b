"""
Network generation: cell-grid or uniform placement, beacon deployment and holes.
"""

from typing import Iterable, List, Optional, Sequence

import numpy as np

from .. import config
from ..exceptions import NetworkError
from ..models.network_models import BeaconMode, ExperimentConfig, HoleSpec, Position
from ..utils.logger import logger
from .graph_core import NetworkGraph, build_network


def _place_in_cells(cfg: ExperimentConfig, rng: np.random.Generator) -> np.ndarray:
    """One node uniformly inside each cell, cells scanned row by row."""
    cell = cfg.cell_size
    jj, ii = np.meshgrid(np.arange(cfg.grid), np.arange(cfg.grid), indexing="ij")
    corners = np.stack([ii.ravel(), jj.ravel()], axis=1).astype(float)
    return (corners + rng.random((cfg.grid * cfg.grid, 2))) * cell


def _check_hole(hole: Optional[HoleSpec], side: Optional[float]) -> None:
    if hole is not None and side is not None and hole.covers_square(side):
        raise NetworkError(f"The hole covers the whole {side:.1f} m deployment square.")


def _place_uniform(cfg: ExperimentConfig, rng: np.random.Generator) -> np.ndarray:
    """S nodes uniform over the square, redrawn while they fall inside the hole."""
    side = cfg.side
    _check_hole(cfg.hole, side)
    points = np.empty((cfg.S, 2))
    filled = 0
    for _ in range(config.UNIFORM_MAX_ATTEMPTS):
        if filled == cfg.S:
            return points
        batch = rng.random((2 * (cfg.S - filled), 2)) * side
        if cfg.hole is not None:
            keep = np.array([not cfg.hole.contains(x, y) for x, y in batch], dtype=bool)
            batch = batch[keep]
        take = min(len(batch), cfg.S - filled)
        points[filled : filled + take] = batch[:take]
        filled += take
    if filled == cfg.S:
        return points
    raise NetworkError(
        f"Placed only {filled} of {cfg.S} nodes outside the hole after {config.UNIFORM_MAX_ATTEMPTS} draws."
    )


def with_beacons(net: NetworkGraph, beacons: Iterable[int]) -> NetworkGraph:
    """Same placement with a new beacon set."""
    return build_network(
        net.positions, beacons, net.radius, labels=net.labels, extent=net.extent, hole=net.hole
    )


def generate(cfg: ExperimentConfig) -> NetworkGraph:
    """Deterministic network for `cfg`; same config and seed give the same graph."""
    count = cfg.beacon_count
    if count < 2:
        raise NetworkError(f"Beacon count round(B*S) must be at least 2, got {count}.")
    if count > cfg.S:
        raise NetworkError(f"Beacon count {count} exceeds node count {cfg.S}.")

    rng = np.random.default_rng(cfg.seed)
    points = _place_in_cells(cfg, rng) if cfg.uses_cells else _place_uniform(cfg, rng)
    net = build_network(
        [tuple(p) for p in points.tolist()], [], cfg.radius, extent=cfg.side, hole=cfg.hole
    )

    if cfg.beacon_mode == BeaconMode.EXPLICIT:
        net = with_beacons(net, cfg.beacon_ids)
    elif cfg.beacon_mode == BeaconMode.SKEWED:
        net = place_beacons_skewed(net, count, cfg.corner_fraction, corners=cfg.corners, rng=rng)
    else:
        chosen = rng.choice(net.size, size=count, replace=False)
        net = with_beacons(net, sorted(chosen.tolist()))

    logger.info(
        f"Generated network: S={net.size}, side={cfg.side:.1f} m, radius={cfg.radius:.1f} m, "
        f"{len(net.beacons)} beacons ({cfg.beacon_mode.value}), seed={cfg.seed}."
    )
    return net


def corner_region(net: NetworkGraph, corners: int = 1) -> List[int]:
    """Nodes in the lower-left quadrant, plus the upper-right one when corners=2."""
    side = net.extent or max(max(p.x, p.y) for p in net.positions.values())
    half = side / 2.0
    region = []
    for node, p in sorted(net.positions.items()):
        lower_left = p.x < half and p.y < half
        upper_right = p.x >= half and p.y >= half
        if lower_left or (corners == 2 and upper_right):
            region.append(node)
    return region


def _share_neighbor(net: NetworkGraph, a: int, b: int) -> bool:
    return bool(set(net.graph.neighbors(a)) & set(net.graph.neighbors(b)))


def place_beacons_skewed(
    net: NetworkGraph,
    count: int,
    corner_fraction: float = config.SKEW_CORNER_FRACTION,
    corners: int = 1,
    rng: Optional[np.random.Generator] = None,
) -> NetworkGraph:
    """
    Draws round(corner_fraction * count) beacons from the corner region and
    the rest from the remaining nodes. With two beacons the pair is redrawn
    until some node hears both.
    """
    if count < 2:
        raise NetworkError(f"Skewed deployment needs at least 2 beacons, got {count}.")
    if count > net.size:
        raise NetworkError(f"Beacon count {count} exceeds node count {net.size}.")
    rng = rng or np.random.default_rng(0)

    region = corner_region(net, corners)
    in_corner = min(int(round(corner_fraction * count)), len(region))

    for attempt in range(config.SKEW_MAX_ATTEMPTS):
        picked = rng.choice(region, size=in_corner, replace=False).tolist() if in_corner else []
        taken = set(picked)
        rest = [n for n in net.nodes if n not in taken]
        picked += rng.choice(rest, size=count - in_corner, replace=False).tolist()
        if count > 2 or _share_neighbor(net, picked[0], picked[1]):
            logger.debug(f"Skewed beacons drawn after {attempt + 1} attempt(s): {in_corner} in the corner region.")
            return with_beacons(net, sorted(picked))
    raise NetworkError(f"No beacon pair with a common neighbor after {config.SKEW_MAX_ATTEMPTS} attempts.")


def inject_hole(net: NetworkGraph, region: HoleSpec) -> NetworkGraph:
    """Removes the nodes inside `region`, re-densifies ids and rebuilds adjacency."""
    _check_hole(region, net.extent)
    keep = [n for n in net.nodes if not region.contains(net.positions[n].x, net.positions[n].y)]
    if len(keep) < 3:
        raise NetworkError(f"Hole leaves {len(keep)} nodes; at least 3 are required.")
    if len(keep) == net.size:
        return net
    remap = {old: new for new, old in enumerate(keep)}
    positions: Sequence[Position] = [net.positions[old] for old in keep]
    labels = {remap[old]: name for old, name in net.labels.items() if old in remap}
    beacons = [remap[b] for b in net.beacons if b in remap]
    logger.info(f"Hole removed {net.size - len(keep)} nodes; {len(beacons)} beacons remain.")
    return build_network(positions, beacons, net.radius, labels=labels, extent=net.extent, hole=region)


def central_disc(cfg: ExperimentConfig, diameter: float) -> HoleSpec:
    half = cfg.side / 2.0
    return HoleSpec.disc(half, half, diameter / 2.0)


def central_rect(cfg: ExperimentConfig, width: float, height: float) -> HoleSpec:
    half = cfg.side / 2.0
    return HoleSpec.rect(half - width / 2.0, half - height / 2.0, half + width / 2.0, half + height / 2.0)
