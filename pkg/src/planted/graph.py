"""Labeled simple graphs stored as dense edge-membership vectors.

Edges of ``K_n`` are numbered lexicographically over pairs ``(i, j)`` with
``i < j``; vertices are 0-based. The same order is used by every file format
and by the integer "mask" encoding used for exhaustive enumeration (bit ``e``
of the mask is edge ``e``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import IO, Iterable, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionError, InvalidEdgeError, ConfigError


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(i: int, j: int, n: int) -> int:
    """Position of ``{i, j}`` (``i < j``) in lexicographic pair order."""
    if not (0 <= i < n and 0 <= j < n):
        raise InvalidEdgeError(f"vertex out of range for n={n}: ({i}, {j})")
    if i == j:
        raise InvalidEdgeError(f"self-loop ({i}, {j}) is not an edge")
    if i > j:
        raise InvalidEdgeError(f"expected i < j, got ({i}, {j})")
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def edge_pair(index: int, n: int) -> Tuple[int, int]:
    """Inverse of :func:`edge_index`."""
    if not 0 <= index < num_pairs(n):
        raise InvalidEdgeError(f"edge id {index} out of range for n={n}")
    i = 0
    row = n - 1  # number of pairs starting at vertex i
    while index >= row:
        index -= row
        i += 1
        row -= 1
    return i, i + 1 + index


def edge_pairs(ids: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`edge_pair`."""
    ids = np.asarray(ids, dtype=np.int64)
    b = 2 * n - 1
    i = np.floor((b - np.sqrt(b * b - 8.0 * ids)) / 2).astype(np.int64)
    start = i * n - i * (i + 1) // 2
    # float sqrt can land one row off
    i = np.where(start > ids, i - 1, i)
    start = i * n - i * (i + 1) // 2
    nxt = (i + 1) * n - (i + 1) * (i + 2) // 2
    i = np.where(ids >= nxt, i + 1, i)
    start = i * n - i * (i + 1) // 2
    return i, ids - start + i + 1


@lru_cache(maxsize=16)
def pair_arrays(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Endpoint arrays ``(rows, cols)`` for all edges in canonical order."""
    rows, cols = np.triu_indices(n, 1)
    rows = rows.astype(np.int32)
    cols = cols.astype(np.int32)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable labeled simple graph on vertices ``0..n-1``."""

    n: int
    edges: np.ndarray  # bool, length n(n-1)/2

    def __post_init__(self):
        arr = np.asarray(self.edges, dtype=bool)
        if arr.ndim != 1 or arr.shape[0] != num_pairs(self.n):
            raise DimensionError(
                f"membership vector has shape {arr.shape}, expected ({num_pairs(self.n)},)"
            )
        if arr.flags.writeable:
            arr = arr.copy()
            arr.setflags(write=False)
        object.__setattr__(self, "edges", arr)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros(num_pairs(n), dtype=bool))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, np.ones(num_pairs(n), dtype=bool))

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[Tuple[int, int]]) -> "Graph":
        vec = np.zeros(num_pairs(n), dtype=bool)
        for i, j in pairs:
            i, j = (i, j) if i < j else (j, i)
            vec[edge_index(i, j, n)] = True
        return cls(n, vec)

    @classmethod
    def from_edge_ids(cls, n: int, ids: Sequence[int]) -> "Graph":
        vec = np.zeros(num_pairs(n), dtype=bool)
        vec[np.asarray(ids, dtype=np.int64)] = True
        return cls(n, vec)

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Graph":
        m = num_pairs(n)
        bits = [(mask >> e) & 1 for e in range(m)]
        return cls(n, np.array(bits, dtype=bool))

    def to_mask(self) -> int:
        mask = 0
        for e in np.flatnonzero(self.edges):
            mask |= 1 << int(e)
        return mask

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self.edges))

    def edge_ids(self) -> np.ndarray:
        return np.flatnonzero(self.edges)

    def edge_list(self) -> list:
        rows, cols = pair_arrays(self.n)
        ids = self.edge_ids()
        return list(zip(rows[ids].tolist(), cols[ids].tolist()))

    def has_edge(self, i: int, j: int) -> bool:
        i, j = (i, j) if i < j else (j, i)
        return bool(self.edges[edge_index(i, j, self.n)])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count})"


def union(g: Graph, h: Graph) -> Graph:
    if g.n != h.n:
        raise DimensionError(f"cannot union graphs on {g.n} and {h.n} vertices")
    return Graph(g.n, np.logical_or(g.edges, h.edges))


def intersection_size(g: Graph, h: Graph) -> int:
    if g.n != h.n:
        raise DimensionError(f"graphs on {g.n} and {h.n} vertices")
    return int(np.count_nonzero(g.edges & h.edges))


# --- edge-list text format ---------------------------------------------------
#
#   n <n>
#   i j          (one per line, lexicographically sorted)
#   planted <kind> <count>      (optional second section)
#   i j
#

PathOrFile = Union[str, Path, IO[str]]


def format_edge_list(g: Graph, planted=None) -> str:
    lines = [f"n {g.n}"]
    lines += [f"{i} {j}" for i, j in g.edge_list()]
    if planted is not None:
        pairs = sorted(edge_pair(int(e), g.n) for e in planted.edges)
        lines.append(f"planted {planted.kind.value} {len(pairs)}")
        lines += [f"{i} {j}" for i, j in pairs]
    return "\n".join(lines) + "\n"


def write_edge_list(dest: PathOrFile, g: Graph, planted=None) -> None:
    text = format_edge_list(g, planted)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)


def parse_edge_list(text: str):
    """Parse the edge-list format. Returns ``(graph, planted_section)`` where
    the second item is ``None`` or ``(kind_name, [edge ids])``."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("n "):
        raise ConfigError("edge list must start with a header line 'n <n>'")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise ConfigError(f"bad header line: {lines[0]!r}") from None
    graph_pairs = []
    planted = None
    current = graph_pairs
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "planted":
            if planted is not None:
                raise ConfigError("duplicate planted section")
            planted = (parts[1] if len(parts) > 1 else "", [])
            current = planted[1]
            continue
        if len(parts) != 2:
            raise ConfigError(f"bad edge line: {ln!r}")
        i, j = int(parts[0]), int(parts[1])
        if i > j:
            i, j = j, i
        current.append(edge_index(i, j, n))
    return Graph.from_edge_ids(n, graph_pairs), planted


def read_edge_list(src: PathOrFile):
    text = src.read() if hasattr(src, "read") else Path(src).read_text()
    return parse_edge_list(text)
