"""Chimera hardware graphs: a grid of complete-bipartite unit cells.

Each cell holds ``2 * shore`` qubits forming K_{shore,shore}; one shore
also couples to the vertically adjacent cell, the other horizontally, so
every qubit touches at most ``shore + 2`` others.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ChimeraGraph:
    rows: int
    cols: int
    shore: int
    adjacency: tuple[frozenset[int], ...]

    @property
    def num_nodes(self) -> int:
        return 2 * self.shore * self.rows * self.cols

    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def neighbors(self, node: int) -> frozenset[int]:
        return self.adjacency[node]

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.adjacency[a]

    def edges(self):
        for a, nbrs in enumerate(self.adjacency):
            for b in nbrs:
                if a < b:
                    yield (a, b)

    def node_index(self, row: int, col: int, side: int, offset: int) -> int:
        return ((row * self.cols) + col) * 2 * self.shore + side * self.shore + offset

    def node_coords(self, node: int) -> tuple[int, int, int, int]:
        cell, within = divmod(node, 2 * self.shore)
        side, offset = divmod(within, self.shore)
        row, col = divmod(cell, self.cols)
        return row, col, side, offset


def chimera(rows: int, cols: int, shore: int = 4) -> ChimeraGraph:
    """Build the standard Chimera graph with the given cell grid and shore
    size.  Side 0 of each cell couples to the cell below, side 1 to the
    cell on the right."""
    if rows < 1 or cols < 1 or shore < 1:
        raise ValueError("rows, cols, and shore must all be >= 1")
    total = 2 * shore * rows * cols
    adj: list[set[int]] = [set() for _ in range(total)]

    def link(a: int, b: int) -> None:
        adj[a].add(b)
        adj[b].add(a)

    def index(row, col, side, offset):
        return ((row * cols) + col) * 2 * shore + side * shore + offset

    for row in range(rows):
        for col in range(cols):
            for k0 in range(shore):
                for k1 in range(shore):
                    link(index(row, col, 0, k0), index(row, col, 1, k1))
            if row + 1 < rows:
                for k in range(shore):
                    link(index(row, col, 0, k), index(row + 1, col, 0, k))
            if col + 1 < cols:
                for k in range(shore):
                    link(index(row, col, 1, k), index(row, col + 1, 1, k))

    return ChimeraGraph(
        rows=rows, cols=cols, shore=shore, adjacency=tuple(frozenset(s) for s in adj)
    )


def parse_topology(text: str) -> ChimeraGraph:
    """Parse a topology flag of the form ``chimera:rows,cols,shore``."""
    kind, _, dims = text.partition(":")
    if kind != "chimera":
        raise ValueError(f"unsupported topology {kind!r}; expected 'chimera:rows,cols,shore'")
    parts = dims.split(",")
    if len(parts) != 3:
        raise ValueError("topology must be 'chimera:rows,cols,shore'")
    try:
        rows, cols, shore = (int(p) for p in parts)
    except ValueError:
        raise ValueError(f"bad topology dimensions {dims!r}") from None
    return chimera(rows, cols, shore)
