"""
Combinatorial rigidity kernel for 2D bar frameworks.

The fast path is the (2,3) pebble game, which also tracks the fundamental
circuit of every rejected edge so redundancy and rigid components come out of
one pass. The brute-force Laman enumerator is the slow reference it is
cross-checked against.
"""

from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx
import numpy as np

from .. import config
from ..exceptions import GraphSizeError, GraphTooLargeError
from ..models.report_models import EdgeCountClass, RigidityVerdict, SubsetWitness
from ..utils.logger import logger

Edge = Tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u <= v else (v, u)


def _sorted_edges(g: nx.Graph) -> List[Edge]:
    return sorted(_edge(u, v) for u, v in g.edges if u != v)


# --- Pebble Game ---


class PebbleGame:
    """
    (2,3) pebble game over an undirected graph.

    Every vertex owns two pebbles. An edge is independent when four pebbles
    can be gathered on its endpoints. For a rejected edge the vertices reachable
    from its endpoints form the smallest tight set spanning it, so the accepted
    edges induced there plus the edge itself are its fundamental circuit.
    """

    def __init__(self, g: nx.Graph):
        self.nodes = sorted(g.nodes)
        self.edges = _sorted_edges(g)
        self.pebbles: Dict[int, int] = {v: 2 for v in self.nodes}
        self.out: Dict[int, Set[int]] = {v: set() for v in self.nodes}
        self.independent: List[Edge] = []
        self.circuits: Dict[Edge, FrozenSet[Edge]] = {}
        for u, v in self.edges:
            self._insert(u, v)

    def _find_pebble(self, start: int, blocked: Set[int]) -> bool:
        parent = {start: None}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in sorted(self.out[x]):
                if y in parent or y in blocked:
                    continue
                parent[y] = x
                if self.pebbles[y] > 0:
                    self.pebbles[y] -= 1
                    node = y
                    while parent[node] is not None:
                        prev = parent[node]
                        self.out[prev].remove(node)
                        self.out[node].add(prev)
                        node = prev
                    self.pebbles[start] += 1
                    return True
                stack.append(y)
        return False

    def _gather(self, u: int, v: int, target: int = 4) -> int:
        # A search for v can reverse a path ending in u's pebbles and back,
        # so alternate until the pair holds `target` or neither side gains.
        while self.pebbles[u] + self.pebbles[v] < target:
            if self.pebbles[u] < 2 and self._find_pebble(u, {v}):
                continue
            if self.pebbles[v] < 2 and self._find_pebble(v, {u}):
                continue
            break
        return self.pebbles[u] + self.pebbles[v]

    def _reach(self, sources: Iterable[int]) -> Set[int]:
        seen = set(sources)
        stack = list(seen)
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def _insert(self, u: int, v: int) -> None:
        if self._gather(u, v) == 4:
            self.pebbles[u] -= 1
            self.out[u].add(v)
            self.independent.append((u, v))
            return
        tight = self._reach((u, v))
        circuit = {e for e in self.independent if e[0] in tight and e[1] in tight}
        circuit.add((u, v))
        self.circuits[(u, v)] = frozenset(circuit)

    @property
    def rank(self) -> int:
        return len(self.independent)

    @property
    def rejected(self) -> List[Edge]:
        return list(self.circuits)

    @property
    def is_rigid(self) -> bool:
        n = len(self.nodes)
        return n <= 1 or self.rank == 2 * n - 3

    def redundant_edges(self) -> Set[Edge]:
        """Edges lying on some circuit, i.e. every edge that is not a coloop."""
        redundant: Set[Edge] = set()
        for circuit in self.circuits.values():
            redundant |= circuit
        return redundant

    def _component_of(self, u: int, v: int) -> FrozenSet[int]:
        self._gather(u, v, target=3)
        incoming: Dict[int, List[int]] = {x: [] for x in self.nodes}
        for x, targets in self.out.items():
            for y in targets:
                incoming[y].append(x)
        can_free = {w for w in self.nodes if w not in (u, v) and self.pebbles[w] > 0}
        stack = list(can_free)
        while stack:
            y = stack.pop()
            for x in incoming[y]:
                if x not in can_free and x not in (u, v):
                    can_free.add(x)
                    stack.append(x)
        return frozenset(w for w in self.nodes if w not in can_free)

    def rigid_components(self) -> List[FrozenSet[int]]:
        """Maximal rigid vertex sets; every edge falls in exactly one of them."""
        assigned: Set[Edge] = set()
        components: List[FrozenSet[int]] = []
        for u, v in self.edges:
            if (u, v) in assigned:
                continue
            comp = self._component_of(u, v)
            components.append(comp)
            assigned.update(e for e in self.edges if e[0] in comp and e[1] in comp)
        return components


def pebble_game_rigid(g: nx.Graph) -> Tuple[bool, bool]:
    """Returns (rigid, redundantly rigid) for `g`."""
    game = PebbleGame(g)
    rigid = game.is_rigid
    m = g.number_of_edges()
    redundant = rigid and m > 0 and len(game.redundant_edges()) == m
    return rigid, redundant


def redundant_edges(g: nx.Graph) -> Set[Edge]:
    return PebbleGame(g).redundant_edges()


def rigid_components(g: nx.Graph) -> List[FrozenSet[int]]:
    return PebbleGame(g).rigid_components()


def is_minimally_rigid(g: nx.Graph) -> bool:
    n = g.number_of_nodes()
    if g.number_of_edges() != 2 * n - 3:
        return False
    game = PebbleGame(g)
    return not game.circuits


def is_m_circuit(g: nx.Graph) -> bool:
    n = g.number_of_nodes()
    if n < 4 or g.number_of_edges() != 2 * n - 2:
        return False
    game = PebbleGame(g)
    if len(game.circuits) != 1:
        return False
    (circuit,) = game.circuits.values()
    return len(circuit) == g.number_of_edges()


# --- Connectivity & Global Rigidity ---


def vertex_connectivity_at_least(g: nx.Graph, k: int) -> bool:
    n = g.number_of_nodes()
    if n < k + 1:
        raise GraphSizeError(f"{k}-connectivity needs at least {k + 1} vertices, graph has {n}.")
    if k <= 0:
        return True
    return nx.node_connectivity(g) >= k


def _is_complete(g: nx.Graph) -> bool:
    n = g.number_of_nodes()
    return g.number_of_edges() == n * (n - 1) // 2


def is_globally_rigid(g: nx.Graph) -> bool:
    """
    3-connected and redundantly rigid. Graphs on at most three vertices are
    globally rigid exactly when complete.
    """
    if g.number_of_nodes() <= 3:
        return _is_complete(g)
    if not vertex_connectivity_at_least(g, 3):
        return False
    return pebble_game_rigid(g)[1]


def edge_count_class(n: int, m: int) -> EdgeCountClass:
    if m < 2 * n - 3:
        return EdgeCountClass.UNDER
    if m == 2 * n - 3:
        return EdgeCountClass.MINIMAL
    if m == 2 * n - 2:
        return EdgeCountClass.CIRCUIT
    return EdgeCountClass.OVER


# --- Brute Force Laman Enumeration ---


class SubsetTable:
    """Every vertex subset of a small graph as a bitmask, with induced edge counts."""

    def __init__(self, g: nx.Graph):
        n = g.number_of_nodes()
        if n > config.BRUTE_FORCE_MAX_VERTICES:
            raise GraphTooLargeError(
                f"Subset enumeration is capped at {config.BRUTE_FORCE_MAX_VERTICES} vertices, graph has {n}."
            )
        self.order = sorted(g.nodes)
        index = {v: i for i, v in enumerate(self.order)}
        masks = np.arange(1 << n, dtype=np.int64)
        self.membership = ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)
        self.sizes = self.membership.sum(axis=1)
        self.bound = 2 * self.sizes - 3
        self.inside = {
            e: self.membership[:, index[e[0]]] & self.membership[:, index[e[1]]] for e in _sorted_edges(g)
        }
        self.counts = np.zeros(1 << n, dtype=np.int32)
        for mask in self.inside.values():
            self.counts += mask

    def violations(self, counts: np.ndarray, include_full: bool) -> np.ndarray:
        n = len(self.order)
        upper = n if include_full else n - 1
        window = (self.sizes >= 2) & (self.sizes <= upper)
        return np.nonzero(window & (counts > self.bound))[0]

    def witness(self, counts: np.ndarray, include_full: bool) -> Optional[SubsetWitness]:
        bad = self.violations(counts, include_full)
        if bad.size == 0:
            return None
        best = bad[np.lexsort((bad, self.sizes[bad]))[0]]
        return SubsetWitness(
            vertex_set=[v for i, v in enumerate(self.order) if self.membership[best, i]],
            edge_count=int(counts[best]),
        )

    def independent_rank(self, edges: Iterable[Edge]) -> int:
        """Greedy rank of `edges` in the rigidity matroid, by subset counting."""
        counts = np.zeros_like(self.counts)
        window = self.sizes >= 2
        rank = 0
        for e in edges:
            trial = counts + self.inside[e]
            if np.all(trial[window] <= self.bound[window]):
                counts = trial
                rank += 1
        return rank


def laman_sparse_bruteforce(g: nx.Graph) -> Tuple[bool, Optional[SubsetWitness]]:
    """Checks |E[X]| <= 2|X| - 3 on every X with 2 <= |X| <= |V| - 1."""
    table = SubsetTable(g)
    witness = table.witness(table.counts, include_full=False)
    return witness is None, witness


def bruteforce_rigid(g: nx.Graph) -> bool:
    n = g.number_of_nodes()
    if n <= 1:
        return True
    return SubsetTable(g).independent_rank(_sorted_edges(g)) == 2 * n - 3


def bruteforce_redundantly_rigid(g: nx.Graph) -> bool:
    n = g.number_of_nodes()
    edges = _sorted_edges(g)
    if n <= 1 or not edges:
        return False
    table = SubsetTable(g)
    if table.independent_rank(edges) != 2 * n - 3:
        return False
    return all(table.independent_rank([f for f in edges if f != e]) == 2 * n - 3 for e in edges)


# --- Verdict ---


def rigidity_verdict(g: nx.Graph) -> RigidityVerdict:
    n, m = g.number_of_nodes(), g.number_of_edges()
    game = PebbleGame(g)
    rigid = game.is_rigid
    redundant = rigid and m > 0 and len(game.redundant_edges()) == m
    connectivity = nx.node_connectivity(g) if n >= 2 else 0

    witness = None
    if game.circuits and n <= config.BRUTE_FORCE_MAX_VERTICES:
        table = SubsetTable(g)
        witness = table.witness(table.counts, include_full=True)

    verdict = RigidityVerdict(
        vertex_count=n,
        edge_count=m,
        sparsity_ok=not game.circuits,
        edge_count_class=edge_count_class(n, m),
        rigid=rigid,
        minimally_rigid=rigid and not game.circuits,
        m_circuit=is_m_circuit(g),
        redundantly_rigid=redundant,
        connectivity=connectivity,
        globally_rigid=_is_complete(g) if n <= 3 else (connectivity >= 3 and redundant),
        witness=witness,
    )
    logger.debug(f"Rigidity verdict for |V|={n}, |E|={m}: rigid={rigid}, global={verdict.globally_rigid}.")
    return verdict

