"""Graph families: (alpha, beta) power-law multigraphs and dense/subdense/superdense graphs."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .graph import Graph, classify_density, density_threshold, parse_f


class InfeasibleSpecError(ValueError):
    pass


# Bernoulli numbers B2, B4, B6, B8 for the Euler-Maclaurin tail of zeta(s)
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30)


def riemann_zeta(s: float, terms: int = 64) -> float:
    """zeta(s) for real s > 1: a partial sum plus an Euler-Maclaurin tail.

    With N = 64 and four correction terms the truncation error is far below
    1e-9 for every s > 1 used here.
    """
    if not s > 1:
        raise ValueError(f"zeta(s) diverges for s <= 1 (got s={s})")
    n = terms
    head = math.fsum(k ** -s for k in range(1, n))
    tail = n ** (1 - s) / (s - 1) + 0.5 * n ** -s
    # rising factorial s(s+1)...(s+2j-2) / (2j)! times B_2j times N^(-s-2j+1)
    rising, fact = s, 2.0
    for j, b in enumerate(_BERNOULLI, start=1):
        tail += b / fact * rising * n ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    return head + tail


@dataclass(frozen=True)
class PLGSpec:
    """ACL power-law degree sequence: floor(e^alpha / i^beta) vertices of degree i."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"alpha and beta must be positive, got ({self.alpha}, {self.beta})")

    @cached_property
    def max_degree(self) -> int:
        return math.floor(math.exp(self.alpha / self.beta))

    @cached_property
    def degree_counts(self) -> list[int]:
        """Entry i-1 holds the number of degree-i vertices, i = 1..max_degree."""
        ea = math.exp(self.alpha)
        return [math.floor(ea / i ** self.beta) for i in range(1, self.max_degree + 1)]

    @property
    def n(self) -> int:
        return sum(self.degree_counts)

    @property
    def total_copies(self) -> int:
        return sum(i * c for i, c in enumerate(self.degree_counts, start=1))

    def degree_sequence(self) -> np.ndarray:
        """Prescribed degree of each vertex, vertices grouped by ascending degree."""
        return np.repeat(np.arange(1, self.max_degree + 1), self.degree_counts)


def gen_plg(spec: PLGSpec, rng=None, simple: bool = False) -> tuple[Graph, dict]:
    """Random (alpha, beta)-PLG via a uniform perfect matching on vertex copies.

    When the number of copies is odd, one copy of the last maximum-degree
    vertex is dropped and reported as ``meta["dropped_copy"]``.  ``simple``
    removes loops and merges parallel edges afterwards; the result then no
    longer follows the matching model exactly.
    """
    if spec.max_degree < 1:
        raise ValueError(f"max degree floor(e^(alpha/beta)) = {spec.max_degree} < 1")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    degrees = spec.degree_sequence()
    copies = np.repeat(np.arange(len(degrees)), degrees)
    dropped = None
    if copies.size % 2:
        dropped = int(len(degrees) - 1)
        copies = copies[:-1]
    rng.shuffle(copies)
    pairs = copies.reshape(-1, 2)
    meta = {"family": "plg", "alpha": spec.alpha, "beta": spec.beta, "max_degree": spec.max_degree,
            "dropped_copy": dropped, "simple": simple}
    if simple:
        pairs = np.sort(pairs, axis=1)
        pairs = np.unique(pairs[pairs[:, 0] != pairs[:, 1]], axis=0)
    return Graph(len(degrees), pairs), meta


def plg_asymptotics(spec: PLGSpec) -> tuple[float, float]:
    """Predicted (n, m) of an (alpha, beta)-PLG for large alpha."""
    a, b = spec.alpha, spec.beta
    ea = math.exp(a)
    if b > 1:
        n = riemann_zeta(b) * ea
    elif b == 1:
        n = a * ea
    else:
        n = math.exp(a / b) / (1 - b)
    if b > 2:
        m = 0.5 * riemann_zeta(b - 1) * ea
    elif b == 2:
        m = 0.25 * a * ea
    else:
        m = 0.5 * math.exp(2 * a / b) / (2 - b)
    return n, m


def molloy_reed_from_counts(counts) -> float:
    """Sum of i (i - 2) lambda_i with lambda_i = counts[i] / n.

    ``counts`` is a mapping degree -> vertex count, or a sequence whose
    entry i-1 is the count for degree i.
    """
    items = counts.items() if hasattr(counts, "items") else enumerate(counts, start=1)
    items = [(int(i), c) for i, c in items]
    n = sum(c for _, c in items)
    return math.fsum(i * (i - 2) * c for i, c in items) / n


def molloy_reed_closed_form(beta: float) -> float:
    """(zeta(beta - 2) - 2 zeta(beta - 1)) / zeta(beta); only converges for beta > 3."""
    if not beta > 3:
        raise ValueError(f"closed form needs zeta(beta - 2) finite, i.e. beta > 3 (got beta={beta})")
    return (riemann_zeta(beta - 2) - 2 * riemann_zeta(beta - 1)) / riemann_zeta(beta)


@dataclass(frozen=True)
class MolloyReed:
    finite_sum: float
    closed_form: Optional[float]


def molloy_reed_q(spec: PLGSpec) -> MolloyReed:
    closed = molloy_reed_closed_form(spec.beta) if spec.beta > 3 else None
    return MolloyReed(molloy_reed_from_counts(spec.degree_counts), closed)


@dataclass(frozen=True)
class FamilySpec:
    """``family`` is "eps" (param = eps), "subdense" (param = c) or "superdense" (param = f(n) form)."""

    family: str
    n: int
    param: object

    def threshold(self) -> float:
        if self.family == "superdense":
            return density_threshold(self.n, "superdense", f=self.param)
        return density_threshold(self.n, self.family, c=float(self.param))

    def accepts(self, g: Graph) -> bool:
        if self.family == "superdense":
            return classify_density(g, family="superdense", f=self.param)
        return classify_density(g, c=float(self.param), family=self.family)

    def describe(self) -> dict:
        return {"family": self.family, "n": self.n, "param": str(self.param) if self.family == "superdense"
                else float(self.param)}


def gen_family(spec: FamilySpec, rng=None) -> Graph:
    """Thin K_n at random while keeping the family's minimum-degree bound.

    Every edge of K_n is deleted independently with probability
    1 - d/(n-1), where d is the required minimum degree, so the expected
    degree sits at the bound.  Vertices that end up below the bound get
    random deleted edges back until they meet it.
    """
    n = spec.n
    if n < 4:
        raise InfeasibleSpecError(f"gen_family needs n >= 4, got {n}")
    if spec.family == "superdense":
        parse_f(spec.param)
    need = max(0, math.ceil(spec.threshold() - 1e-9))
    if need > n - 1:
        raise InfeasibleSpecError(f"min degree {need} exceeds n - 1 = {n - 1} for {spec.describe()}")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    keep_prob = need / (n - 1)
    iu, ju = np.triu_indices(n, 1)
    kept = rng.random(iu.size) < keep_prob if keep_prob < 1 else np.ones(iu.size, dtype=bool)
    adj = np.zeros((n, n), dtype=bool)
    adj[iu[kept], ju[kept]] = True
    adj |= adj.T
    deg = adj.sum(axis=1)
    for v in range(n):
        short = need - deg[v]
        if short <= 0:
            continue
        missing = np.flatnonzero(~adj[v])
        missing = missing[missing != v]
        add = rng.choice(missing, size=short, replace=False)
        adj[v, add] = adj[add, v] = True
        deg[v] += short
        deg[add] += 1
    r, c = np.nonzero(np.triu(adj, 1))
    g = Graph(n, np.column_stack([r, c]))
    assert spec.accepts(g)
    return g
