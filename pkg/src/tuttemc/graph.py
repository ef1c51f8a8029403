"""Multigraph substrate: component counting, rank, contraction and density tests.

Edge identity is the index into ``Graph.edges``.  Edge subsets may be given as
a Python ``int`` bitmask (bit ``i`` set means edge ``i`` is in the subset), as
an iterable of edge indices, or as a boolean numpy array of length ``m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Union

import numpy as np

EdgeSubset = Union[int, Iterable[int], np.ndarray]


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed."""


class DensityError(ValueError):
    """Raised when a density classification is requested for n < 2."""


class Graph:
    """Immutable undirected multigraph on vertices ``0..n-1``.

    Loops ``(u, u)`` and parallel edges are allowed.  The edge array is
    read-only, so instances are hashable and may be shared between threads.
    """

    def __init__(self, n: int, edges=()):
        n = int(n)
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if arr.size == 0:
            arr = np.empty((0, 2), dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("edges must be a sequence of (u, v) pairs")
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError(f"edge endpoint out of range for n={n}")
        arr = arr.copy()
        arr.setflags(write=False)
        self.n = n
        self.edges = arr
        self._hash = None

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges]

    def __len__(self):
        return self.m

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.edges.tobytes()))
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def same_multiset(self, other: "Graph") -> bool:
        """Equality up to edge order and endpoint orientation."""
        return self.n == other.n and sorted_edge_multiset(self) == sorted_edge_multiset(other)

    def degrees(self) -> np.ndarray:
        """Vertex degrees; a loop adds 2, every parallel edge counts."""
        deg = np.zeros(self.n, dtype=np.int64)
        if self.m:
            np.add.at(deg, self.edges[:, 0], 1)
            np.add.at(deg, self.edges[:, 1], 1)
        return deg

    def simple_adjacency(self) -> np.ndarray:
        """Boolean adjacency of the simple support (no loops, no multiplicity)."""
        adj = np.zeros((self.n, self.n), dtype=bool)
        if self.m:
            u, v = self.edges[:, 0], self.edges[:, 1]
            adj[u, v] = True
            adj[v, u] = True
            np.fill_diagonal(adj, False)
        return adj


def sorted_edge_multiset(g: Graph) -> list[tuple[int, int]]:
    return sorted((min(u, v), max(u, v)) for u, v in g.edge_list)


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def perfect_matching(n: int) -> Graph:
    if n % 2:
        raise ValueError(f"perfect matching needs an even vertex count, got {n}")
    return Graph(n, [(2 * i, 2 * i + 1) for i in range(n // 2)])


def edge_mask(a: EdgeSubset, m: int) -> np.ndarray:
    """Normalize any accepted edge-subset form to a boolean array of length m."""
    if isinstance(a, np.ndarray) and a.dtype == bool:
        if a.shape != (m,):
            raise ValueError(f"edge mask has shape {a.shape}, expected ({m},)")
        return a
    mask = np.zeros(m, dtype=bool)
    if isinstance(a, (int, np.integer)):
        a = int(a)
        if a < 0 or a >> m:
            raise ValueError(f"bitmask {a:#x} does not index into {m} edges")
        for i in range(m):
            if (a >> i) & 1:
                mask[i] = True
        return mask
    idx = np.fromiter((int(i) for i in a), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= m):
        raise ValueError(f"edge index out of range for m={m}")
    mask[idx] = True
    return mask


def edge_indices(a: EdgeSubset, m: int) -> list[int]:
    return np.flatnonzero(edge_mask(a, m)).tolist()


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True


@dataclass(frozen=True)
class ComponentSummary:
    kappa: int
    rank: int


def _union_subset(g: Graph, a: EdgeSubset) -> UnionFind:
    uf = UnionFind(g.n)
    edges = g.edge_list
    for i in edge_indices(a, g.m):
        uf.union(*edges[i])
    return uf


def components(g: Graph, a: EdgeSubset) -> ComponentSummary:
    """Components of the spanning subgraph (V, A); isolated vertices count."""
    kappa = _union_subset(g, a).count
    return ComponentSummary(kappa=kappa, rank=g.n - kappa)


def kappa_full(g: Graph) -> int:
    """Number of connected components of g itself."""
    return components(g, range(g.m)).kappa


def contract(g: Graph, a: EdgeSubset) -> Graph:
    """Contract every edge of ``a``; the remaining edges keep their order.

    The result has one vertex per component of (V, A), numbered by first
    appearance in vertex order.  Loops and parallel edges created by the
    contraction are kept, so the result has ``m - |A|`` edges.
    """
    mask = edge_mask(a, g.m)
    uf = UnionFind(g.n)
    for i in np.flatnonzero(mask):
        u, v = g.edge_list[i]
        uf.union(u, v)
    label: dict[int, int] = {}
    relabel = []
    for v in range(g.n):
        relabel.append(label.setdefault(uf.find(v), len(label)))
    kept = [(relabel[u], relabel[v]) for (u, v), used in zip(g.edge_list, mask) if not used]
    return Graph(len(label), kept)


def contraction_edge_map(g: Graph, a: EdgeSubset) -> dict[int, int]:
    """Index of each surviving edge of g in ``contract(g, a)``."""
    mask = edge_mask(a, g.m)
    return {int(i): j for j, i in enumerate(np.flatnonzero(~mask))}


def min_degree(g: Graph) -> int:
    if g.n == 0:
        raise ValueError("min degree of the empty graph is undefined")
    return int(g.degrees().min())


# Superdense f(n) closed forms: a constant, n**gamma with gamma < 1, or n / ln n.
def parse_f(spec) -> Callable[[int], float]:
    """Turn ``"3"``, ``"n^0.5"`` or ``"n/log n"`` into a callable f(n)."""
    if callable(spec):
        return spec
    if isinstance(spec, (int, float)):
        k = float(spec)
        return lambda n: k
    s = str(spec).replace(" ", "").lower()
    if s in ("n/logn", "n/lnn", "n/log(n)", "n/ln(n)"):
        return lambda n: n / math.log(n)
    for prefix in ("n^", "n**"):
        if s.startswith(prefix):
            gamma = float(s[len(prefix):])
            if not gamma < 1:
                raise ValueError(f"f(n)=n^{gamma} is not o(n)")
            return lambda n: n ** gamma
    try:
        k = float(s)
    except ValueError:
        raise ValueError(f"unrecognized f(n) form: {spec!r}") from None
    if k < 0:
        raise ValueError("f(n) must be nonnegative")
    return lambda n: k


def density_threshold(n: int, family: str, c=None, f=None) -> float:
    """Minimum degree demanded by a density family on n vertices.

    ``family`` is one of ``"eps"`` (c*n), ``"subdense"`` (c*n/sqrt(ln n)) or
    ``"superdense"`` ((n-1) - f(n), i.e. at most f(n) missing neighbours).
    """
    if n < 2:
        raise DensityError(f"density classification needs n >= 2, got n={n}")
    if family == "eps":
        return c * n
    if family == "subdense":
        return c * n / math.sqrt(math.log(n))
    if family == "superdense":
        return (n - 1) - parse_f(f)(n)
    raise ValueError(f"unknown density family {family!r}")


def classify_density(g: Graph, c=None, family: str = "subdense", f=None) -> bool:
    # float slack: thresholds like c*n/sqrt(ln n) are computed, degrees are exact
    return min_degree(g) >= density_threshold(g.n, family, c=c, f=f) - 1e-9


def subdense_constant(g: Graph) -> float:
    """Largest c for which g is c*n/sqrt(ln n)-subdense."""
    if g.n < 2:
        raise DensityError(f"density classification needs n >= 2, got n={g.n}")
    return min_degree(g) * math.sqrt(math.log(g.n)) / g.n


def parse_graph(text: str) -> Graph:
    """Parse the ``"n m"`` header plus ``m`` lines of ``"u v"`` format."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise GraphFormatError("empty graph file")
    try:
        n, m = (int(tok) for tok in lines[0])
    except ValueError:
        raise GraphFormatError(f"bad header line: {' '.join(lines[0])!r}") from None
    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(body)}")
    edges = []
    for lineno, toks in enumerate(body, start=2):
        if len(toks) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer endpoint") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: endpoint out of range [0, {n})")
        edges.append((u, v))
    return Graph(n, edges)


def format_graph(g: Graph) -> str:
    return "\n".join([f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edge_list]) + "\n"


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g))
