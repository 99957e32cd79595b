"""
Built-in scenario catalogue.

Hand-built fixtures sit on a triangular lattice of side 20 m with a 25 m
radio radius, so only lattice neighbors hear each other. The strip
p_k = (10k, (k mod 2) * 10*sqrt(3)) is the usual backbone. Each fixture
records where its topology comes from and the outcome it must reproduce;
labels in `expected` are the non-beacon nodes a protocol ends up marking
localizable.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import UnknownScenarioError
from ..models.network_models import BeaconMode, ExperimentConfig, Placement
from ..services import netgen
from ..services.graph_core import NetworkGraph, build_network

H = 10.0 * math.sqrt(3.0)
LATTICE_RADIUS = 25.0

NodeSpec = Tuple[str, float, float, bool]


def strip(k: int) -> Tuple[float, float]:
    return 10.0 * k, H * (k % 2)


def fixture(nodes: Sequence[NodeSpec], radius: float = LATTICE_RADIUS) -> NetworkGraph:
    """Network from (label, x, y, beacon) rows; ids follow row order."""
    positions = [(x, y) for _, x, y, _ in nodes]
    beacons = [i for i, row in enumerate(nodes) if row[3]]
    labels = {i: row[0] for i, row in enumerate(nodes)}
    return build_network(positions, beacons, radius, labels=labels)


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    build: Callable[[int], NetworkGraph]
    protocols: Tuple[str, ...] = ("te", "ite", "tp", "we")
    # label -> new position, applied once the first phase is quiet
    moves: Optional[Mapping[str, Tuple[float, float]]] = None
    expected: Dict[str, FrozenSet[str]] = field(default_factory=dict)
    statistical: bool = False


# --- Hand-built fixtures ---


def _closer(seed: int = 0) -> NetworkGraph:
    # Global-rigidity figure: branch r1 r2 v1 v2 closed by the beacon q.
    return fixture(
        [
            ("r1", 0.0, 0.0, True),
            ("r2", 20.0, 0.0, True),
            ("v1", 10.0, H, False),
            ("v2", 30.0, H, False),
            ("q", 50.0, H, True),
        ]
    )


def _gap(seed: int = 0) -> NetworkGraph:
    # Trilateration-gap figure: A, B and C never hear three localizable
    # neighbors although the block they hang in is pinned by b3 and q.
    return fixture(
        [
            ("r1", *strip(0), True),
            ("r2", *strip(1), True),
            ("u1", *strip(2), False),
            ("A", *strip(3), False),
            ("B", *strip(4), False),
            ("C", *strip(5), False),
            ("b3", 10.0, -H, True),
            ("q", 70.0, H, True),
        ]
    )


def _border(seed: int = 0) -> NetworkGraph:
    # Wheel-border figure: a hexagonal wheel around h with A and B hanging
    # off its upper rim, closed by the beacon q.
    rim = [(20.0, 0.0), (10.0, H), (-10.0, H), (-20.0, 0.0), (-10.0, -H), (10.0, -H)]
    rows: List[NodeSpec] = [("h", 0.0, 0.0, False)]
    rows += [(f"rim{k}", x, y, k % 2 == 0) for k, (x, y) in enumerate(rim)]
    rows += [("A", 0.0, 2 * H, False), ("B", 20.0, 2 * H, False), ("q", 40.0, 2 * H, True)]
    return fixture(rows)


def _gc_ring(seed: int = 0) -> NetworkGraph:
    # Square of a 12-cycle: every node hears its two nearest ring mates on
    # each side and no neighborhood contains a wheel.
    rows: List[NodeSpec] = []
    for k in range(12):
        r = 40.0 if k % 2 == 0 else 50.0
        a = math.radians(30.0 * k)
        rows.append((f"g{k}", r * math.cos(a), r * math.sin(a), k in (0, 1, 6)))
    return fixture(rows, radius=55.0)


def _chain(seed: int = 0) -> NetworkGraph:
    # Closer-at-the-far-end figure: q localizes v7 and localizability runs
    # back down the chain; the side node v2 has no localizable child.
    return fixture(
        [
            ("r1", *strip(0), True),
            ("r2", *strip(1), True),
            ("v1", *strip(2), False),
            ("v2", 10.0, -H, False),
            ("v3", *strip(3), False),
            ("v4", *strip(4), False),
            ("v5", *strip(5), False),
            ("v6", *strip(6), False),
            ("v7", *strip(7), False),
            ("q", 90.0, H, True),
        ]
    )


def _dual_v(seed: int = 0) -> NetworkGraph:
    # Two triangle blocks grown from opposite ends of a strip meet in the
    # middle; neither block hears a third beacon.
    return fixture([(f"p{k}", *strip(k), k in (0, 1, 8, 9)) for k in range(10)])


def _exp1(seed: int = 0) -> NetworkGraph:
    # Testbed line: beacons 1 and 2 at one end, A at the other, B and C on a
    # side spur that only 1 and 2 reach.
    rows: List[NodeSpec] = [(str(k + 1), *strip(k), k < 2) for k in range(9)]
    rows += [("A", 100.0, 0.0, True), ("B", -20.0, 0.0, False), ("C", -10.0, H, False)]
    return fixture(rows)


def _exp2(seed: int = 0) -> NetworkGraph:
    # Testbed with two blocks: the left one grows from beacons 1 and 2, the
    # right one from A and F. D and E are moved towards the left block later.
    left = [
        ("1", 10.0, -H, True),
        ("2", 0.0, 0.0, True),
        ("3", 20.0, 0.0, False),
        ("4", 10.0, H, False),
        ("5", -10.0, H, False),
        ("6", 0.0, 2 * H, False),
        ("7", -20.0, 2 * H, False),
        ("8", -10.0, 3 * H, False),
    ]
    right = [
        ("A", -66.0, 2.0, True),
        ("B", -45.0, -8.0, False),
        ("C", -48.0, 14.0, False),
        ("D", -34.0, 4.0, False),
        ("E", -44.0, 20.0, False),
        ("F", -58.0, -28.0, True),
    ]
    # ids: "1".."8" -> 0..7, then A..F -> 8..13
    order = sorted(left, key=lambda row: int(row[0])) + right
    return fixture(order)


# --- Generated networks ---


def _sparse4(seed: int = 7) -> NetworkGraph:
    """Dense cell network with four beacons: a close pair in the middle and two far corners."""
    cfg = ExperimentConfig(N=2.0, B=0.01, seed=seed)
    net = netgen.generate(cfg)
    coords = np.array([net.positions[n].as_tuple() for n in net.nodes])

    def nearest(x: float, y: float, exclude: Sequence[int] = ()) -> int:
        d = np.hypot(coords[:, 0] - x, coords[:, 1] - y)
        d[list(exclude)] = np.inf
        return int(np.argmin(d))

    centre = cfg.side / 2.0
    hub = nearest(centre, centre)
    mate = nearest(*coords[hub], exclude=[hub])
    low = nearest(0.1 * cfg.side, 0.1 * cfg.side)
    high = nearest(0.9 * cfg.side, 0.9 * cfg.side)
    return netgen.with_beacons(net, sorted({hub, mate, low, high}))


def _hole_config(N: float, B: float, seed: int, mode: BeaconMode = BeaconMode.RANDOM) -> ExperimentConfig:
    return ExperimentConfig(S=400, N=N, B=B, placement=Placement.UNIFORM, beacon_mode=mode, seed=seed)


def _hole_t0(seed: int = 1) -> NetworkGraph:
    cfg = _hole_config(3.2, 0.1, seed)
    hole = netgen.central_disc(cfg, diameter=2.5 * cfg.radius)
    return netgen.generate(cfg.model_copy(update={"hole": hole}))


def _hole_t1(seed: int = 1) -> NetworkGraph:
    cfg = _hole_config(2.4, 0.05, seed)
    hole = netgen.central_rect(cfg, width=2.5 * cfg.radius, height=2.0 * cfg.radius)
    return netgen.generate(cfg.model_copy(update={"hole": hole}))


def _hole_t2(seed: int = 1) -> NetworkGraph:
    cfg = _hole_config(2.4, 0.05, seed, BeaconMode.SKEWED)
    hole = netgen.central_rect(cfg, width=2.5 * cfg.radius, height=2.0 * cfg.radius)
    return netgen.generate(cfg.model_copy(update={"hole": hole}))


def _labels(*names: str) -> FrozenSet[str]:
    return frozenset(names)


SCENARIOS: Dict[str, Scenario] = {
    s.name: s
    for s in (
        Scenario(
            "closer",
            "Branch r1-r2-v1-v2 closed by beacon q; the five nodes are globally rigid.",
            _closer,
            expected={"te": _labels("v1", "v2")},
        ),
        Scenario(
            "gap",
            "Block pinned by two extra beacons; TP stalls after u1.",
            _gap,
            expected={
                "te": _labels("u1", "A", "B", "C"),
                "tp": _labels("u1"),
                "we": _labels(),
            },
        ),
        Scenario(
            "border",
            "Hexagonal wheel with a two-node cap; only TE reaches the cap.",
            _border,
            expected={
                "te": _labels("h", "rim1", "rim3", "rim5", "A", "B"),
                "tp": _labels("h", "rim1", "rim3", "rim5"),
                "we": _labels("h", "rim1", "rim3", "rim5"),
            },
        ),
        Scenario(
            "gc_ring",
            "Squared 12-cycle without wheels or trilateration triples.",
            _gc_ring,
            expected={
                "te": _labels(*(f"g{k}" for k in range(12) if k not in (0, 1, 6))),
                "tp": _labels(),
                "we": _labels(),
            },
        ),
        Scenario(
            "dual_v",
            "Two triangle blocks joined by a dual-v handshake.",
            _dual_v,
            expected={"te": _labels(*(f"p{k}" for k in range(2, 8)))},
        ),
        Scenario(
            "chain",
            "Long branch closed at its far end; the side node v2 stays rigid.",
            _chain,
            expected={"te": _labels("v1", "v3", "v4", "v5", "v6", "v7")},
        ),
        Scenario(
            "sparse4",
            "Dense network with four beacons, two of them next to each other.",
            _sparse4,
            expected={"tp": _labels(), "we": _labels()},
        ),
        Scenario(
            "exp1",
            "Testbed line; B and C on a spur end rigid.",
            _exp1,
            expected={"te": _labels("3", "4", "5", "6", "7", "8", "9"), "tp": _labels()},
        ),
        Scenario(
            "exp2",
            "Two testbed blocks joined after D and E move; node 8 ends rigid.",
            _exp2,
            moves={"D": (-28.0, 4.0), "E": (-30.0, 22.0)},
            expected={"te": _labels("3", "4", "5", "6", "7", "B", "C", "D", "E")},
        ),
        Scenario(
            "hole_T0",
            "Uniform placement with a central disc hole, random beacons.",
            _hole_t0,
            protocols=("te", "tp", "we"),
            statistical=True,
        ),
        Scenario(
            "hole_T1",
            "Dense uniform placement with a central rectangular hole, random beacons.",
            _hole_t1,
            protocols=("te", "tp", "we"),
            statistical=True,
        ),
        Scenario(
            "hole_T2",
            "As hole_T1 with beacons skewed into the lower-left corner.",
            _hole_t2,
            protocols=("te", "tp", "we"),
            statistical=True,
        ),
    )
}


def scenario_names() -> List[str]:
    return list(SCENARIOS)


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise UnknownScenarioError(
            f"Unknown scenario '{name}'; expected one of {', '.join(SCENARIOS)}."
        ) from None


def build_scenario(name: str, seed: Optional[int] = None) -> NetworkGraph:
    scenario = get_scenario(name)
    return scenario.build() if seed is None else scenario.build(seed)
