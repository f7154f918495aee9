"""Minor embedding of logical problems onto hardware graphs.

A logical variable becomes a chain: a connected set of physical qubits
tied together by one global ferromagnetic coupling (the chain strength,
negative so agreeing spins lower the energy).  The embedded model's offset
absorbs the chain coupling of the unbroken state, so an unbroken ground
state reports the logical energy.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, replace

from ._kernels.rng import derive_seed
from .chimera import ChimeraGraph
from .errors import EmbeddingError
from .models import Assignment, HardwareRange, IsingModel, energy
from .samplers import SampleRecord, SampleSet


@dataclass(frozen=True)
class Embedding:
    """Map from logical variable to its chain of physical qubits."""

    chains: dict[int, frozenset[int]]
    chain_strength: float = -1.0

    def __post_init__(self):
        object.__setattr__(
            self, "chains", {int(v): frozenset(c) for v, c in self.chains.items()}
        )
        if not self.chain_strength < 0.0:
            raise ValueError("chain_strength must be negative")
        for v, chain in self.chains.items():
            if not chain:
                raise ValueError(f"chain for variable {v} is empty")

    @property
    def num_physical_qubits(self) -> int:
        return sum(len(c) for c in self.chains.values())

    @property
    def max_chain_length(self) -> int:
        return max((len(c) for c in self.chains.values()), default=0)

    def with_chain_strength(self, chain_strength: float) -> "Embedding":
        return replace(self, chain_strength=chain_strength)

    def to_json_dict(self) -> dict:
        return {
            "chains": {str(v): sorted(c) for v, c in sorted(self.chains.items())},
            "chain_strength": self.chain_strength,
        }


def _is_connected(nodes: frozenset[int] | set[int], hw: ChimeraGraph) -> bool:
    if not nodes:
        return False
    start = next(iter(nodes))
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for nbr in hw.neighbors(x):
            if nbr in nodes and nbr not in seen:
                seen.add(nbr)
                queue.append(nbr)
    return len(seen) == len(nodes)


def _chains_coupled(a, b, hw: ChimeraGraph) -> bool:
    return any(nbr in b for x in a for nbr in hw.neighbors(x))


def validate_embedding(
    emb: Embedding,
    logical_edges,
    hw: ChimeraGraph,
    num_vars: int | None = None,
) -> None:
    """Raise ``ValueError`` when the embedding breaks a structural invariant
    (disjointness, connectivity, edge coverage, or variable coverage)."""
    if num_vars is not None:
        missing = set(range(num_vars)) - set(emb.chains)
        if missing:
            raise ValueError(f"variables without a chain: {sorted(missing)}")
    seen: dict[int, int] = {}
    for v, chain in emb.chains.items():
        for x in chain:
            if not 0 <= x < hw.num_nodes:
                raise ValueError(f"chain node {x} outside the hardware graph")
            if x in seen:
                raise ValueError(f"node {x} used by chains {seen[x]} and {v}")
            seen[x] = v
        if not _is_connected(chain, hw):
            raise ValueError(f"chain for variable {v} is not connected")
    for u, v in logical_edges:
        if not _chains_coupled(emb.chains[u], emb.chains[v], hw):
            raise ValueError(f"no hardware edge couples chains {u} and {v}")


def clique_embedding(
    num_vars: int, hw: ChimeraGraph, chain_strength: float = -1.0
) -> Embedding:
    """Deterministic complete-graph layout: chain k runs down column k//L
    and across row k//L, so every pair of chains meets in one cell."""
    if num_vars < 1:
        raise ValueError("num_vars must be >= 1")
    shore = hw.shore
    blocks = -(-num_vars // shore)
    if blocks > min(hw.rows, hw.cols):
        raise EmbeddingError(
            f"complete graph on {num_vars} vertices needs a "
            f"{blocks}x{blocks} cell block; hardware is {hw.rows}x{hw.cols}"
        )
    chains: dict[int, frozenset[int]] = {}
    for k in range(num_vars):
        c, s = divmod(k, shore)
        vertical = {hw.node_index(i, c, 0, s) for i in range(c + 1)}
        horizontal = {hw.node_index(c, j, 1, s) for j in range(c, blocks)}
        chains[k] = frozenset(vertical | horizontal)
    return Embedding(chains=chains, chain_strength=chain_strength)


def _grow_chain(v, adj_logical, chains, used, hw, rnd):
    """Root-and-paths placement of one logical vertex; returns node set or
    None when no free route exists."""
    targets = [u for u in adj_logical[v] if u in chains]
    free = [x for x in range(hw.num_nodes) if x not in used]
    if not free:
        return None
    if not targets:
        return {rnd.choice(free)}
    dist_maps = []
    parent_maps = []
    for t in targets:
        dist: dict[int, int] = {}
        parent: dict[int, int | None] = {}
        queue = deque()
        for x in chains[t]:
            for nbr in hw.neighbors(x):
                if nbr not in used and nbr not in dist:
                    dist[nbr] = 1
                    parent[nbr] = None
                    queue.append(nbr)
        while queue:
            x = queue.popleft()
            for nbr in hw.neighbors(x):
                if nbr not in used and nbr not in dist:
                    dist[nbr] = dist[x] + 1
                    parent[nbr] = x
                    queue.append(nbr)
        dist_maps.append(dist)
        parent_maps.append(parent)
    candidates = [x for x in free if all(x in d for d in dist_maps)]
    if not candidates:
        return None
    root = min(candidates, key=lambda x: (sum(d[x] for d in dist_maps), x))
    chain = {root}
    for parent in parent_maps:
        x = root
        while parent[x] is not None:
            x = parent[x]
            chain.add(x)
    return chain


def _trim_chains(chains, adj_logical, hw):
    """Greedily drop chain nodes that are not needed for connectivity or
    edge coverage."""
    changed = True
    while changed:
        changed = False
        for v in sorted(chains):
            chain = set(chains[v])
            for x in sorted(chain, reverse=True):
                if len(chain) == 1:
                    break
                candidate = chain - {x}
                if not _is_connected(candidate, hw):
                    continue
                if all(
                    _chains_coupled(candidate, chains[u], hw)
                    for u in adj_logical[v]
                    if u in chains
                ):
                    chain = candidate
                    changed = True
            chains[v] = frozenset(chain)
    return chains


def find_embedding(
    edges,
    hw: ChimeraGraph,
    *,
    num_vars: int | None = None,
    seed: int = 0,
    max_restarts: int = 32,
    chain_strength: float = -1.0,
) -> Embedding:
    """Find chains for a logical graph on the hardware graph.

    Runs a randomized greedy search (``max_restarts`` independent attempts,
    deterministic given ``seed``), trims each result, and keeps the best by
    (total qubits, longest chain).  A deterministic complete-graph layout
    is also considered whenever it fits, both as a floor on quality and as
    a fallback when the randomized search fails.  Raises
    :class:`EmbeddingError` when nothing works.
    """
    edge_list = sorted({(min(u, v), max(u, v)) for u, v in edges})
    if num_vars is None:
        num_vars = 1 + max((max(u, v) for u, v in edge_list), default=-1)
    if num_vars < 1:
        raise ValueError("logical graph must have at least one vertex")
    for u, v in edge_list:
        if u == v:
            raise ValueError(f"self-loop on logical vertex {u}")
        if v >= num_vars or u < 0:
            raise ValueError(f"edge {(u, v)} outside the {num_vars}-vertex graph")
    adj_logical: dict[int, list[int]] = {v: [] for v in range(num_vars)}
    for u, v in edge_list:
        adj_logical[u].append(v)
        adj_logical[v].append(u)

    best: Embedding | None = None

    def quality(emb: Embedding):
        return (emb.num_physical_qubits, emb.max_chain_length)

    try:
        candidate = clique_embedding(num_vars, hw, chain_strength)
        best = candidate
    except EmbeddingError:
        pass

    order_seedless = sorted(range(num_vars), key=lambda v: -len(adj_logical[v]))
    for restart in range(max_restarts):
        rnd = random.Random(derive_seed(seed, restart, tag=0xE3B))
        order = sorted(order_seedless, key=lambda v: (-len(adj_logical[v]), rnd.random()))
        chains: dict[int, frozenset[int]] = {}
        used: set[int] = set()
        ok = True
        for v in order:
            grown = _grow_chain(v, adj_logical, chains, used, hw, rnd)
            if grown is None:
                ok = False
                break
            chains[v] = frozenset(grown)
            used |= grown
        if not ok:
            continue
        chains = _trim_chains(chains, adj_logical, hw)
        candidate = Embedding(chains=chains, chain_strength=chain_strength)
        try:
            validate_embedding(candidate, edge_list, hw, num_vars)
        except ValueError:
            continue
        if best is None or quality(candidate) < quality(best):
            best = candidate

    if best is None:
        raise EmbeddingError(
            f"no embedding found for {num_vars} variables after {max_restarts} restarts"
        )
    return best


def embed_model(
    logical: IsingModel,
    emb: Embedding,
    hw: ChimeraGraph,
    hw_range: HardwareRange | None = None,
) -> IsingModel:
    """Build the physical model over hardware nodes.

    Linear fields split evenly across their chain; each logical coupling is
    placed on one hardware edge between the two chains, splitting across
    parallel edges only when a single edge would exceed ``hw_range``.
    Every edge inside a chain gets the chain strength, and the offset drops
    by chain_strength * (number of intra-chain edges) so unbroken states
    report logical energies.
    """
    validate_embedding(emb, logical.interactions(), hw, logical.num_vars)
    c = emb.chain_strength
    h_phys: dict[int, float] = {}
    j_phys: dict[tuple[int, int], float] = {}
    for v in range(logical.num_vars):
        hv = logical.h.get(v, 0.0)
        if hv == 0.0:
            continue
        chain = emb.chains[v]
        share = hv / len(chain)
        for x in sorted(chain):
            h_phys[x] = share
    for (u, v), coupling in sorted(logical.J.items()):
        cross = sorted(
            (min(a, b), max(a, b))
            for a in emb.chains[u]
            for b in hw.neighbors(a)
            if b in emb.chains[v]
        )
        count = 1
        if hw_range is not None and coupling != 0.0:
            limit = hw_range.j_max if coupling > 0.0 else -hw_range.j_min
            if limit > 0.0:
                count = min(len(cross), max(1, math.ceil(abs(coupling) / limit)))
        share = coupling / count
        for a, b in cross[:count]:
            j_phys[(a, b)] = j_phys.get((a, b), 0.0) + share
    intra_edges = 0
    for v in sorted(emb.chains):
        chain = emb.chains[v]
        for a in sorted(chain):
            for b in hw.neighbors(a):
                if b in chain and a < b:
                    j_phys[(a, b)] = j_phys.get((a, b), 0.0) + c
                    intra_edges += 1
    return IsingModel(
        num_vars=hw.num_nodes,
        h=h_phys,
        J=j_phys,
        offset=logical.offset - c * intra_edges,
    )


def unembed(
    physical_samples: SampleSet,
    emb: Embedding,
    logical: IsingModel,
    *,
    discard_broken: bool = False,
) -> SampleSet:
    """Collapse hardware samples back to logical assignments.

    Each chain resolves by majority vote; exact ties take the value of the
    chain's lowest-indexed physical node.  Records are re-scored on the
    logical model and keep a per-record broken-chain count; with
    ``discard_broken`` reads containing any broken chain are dropped.
    """
    chain_nodes = {v: sorted(chain) for v, chain in sorted(emb.chains.items())}
    missing = set(range(logical.num_vars)) - set(chain_nodes)
    if missing:
        raise ValueError(f"embedding lacks chains for variables {sorted(missing)}")
    grouped: dict[tuple[tuple[int, ...], int], int] = {}
    for record in physical_samples.records:
        phys = record.assignment.values
        spins = []
        broken = 0
        for v in range(logical.num_vars):
            nodes = chain_nodes[v]
            total = sum(phys[x] for x in nodes)
            if total > 0:
                spin = 1
            elif total < 0:
                spin = -1
            else:
                spin = phys[nodes[0]]
            first = phys[nodes[0]]
            if any(phys[x] != first for x in nodes[1:]):
                broken += 1
            spins.append(spin)
        key = (tuple(spins), broken)
        grouped[key] = grouped.get(key, 0) + record.occurrences
    records = []
    for (spins, broken), occurrences in grouped.items():
        if discard_broken and broken > 0:
            continue
        assignment = Assignment.ising(spins)
        records.append(
            SampleRecord(
                assignment=assignment,
                energy=energy(logical, assignment),
                occurrences=occurrences,
                num_broken_chains=broken,
            )
        )
    info = dict(physical_samples.info)
    info["unembedded"] = True
    info["chain_strength"] = emb.chain_strength
    info["discard_broken"] = discard_broken
    return SampleSet(records=records, info=info)
