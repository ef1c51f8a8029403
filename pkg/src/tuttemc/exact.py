"""Exact small-graph oracles for T_G(x, y), Z, mu(A) and lambda(A).

Rational inputs (``int``, ``Fraction`` or strings such as ``"3/2"``) are
evaluated in exact rational arithmetic; floats are evaluated in floating
point.  Two independent routes exist for the Tutte polynomial: a state sum
over all 2^m edge subsets and the deletion-contraction recursion.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .graph import Graph, EdgeSubset, components, contract, edge_indices, edge_mask, kappa_full

STATESUM_MAX_EDGES = 30
DELCON_MAX_EDGES = 20


class EnumerationLimitError(ValueError):
    """The graph has too many edges for exhaustive evaluation."""


class OracleMismatch(AssertionError):
    """Two exact routes that must agree did not."""


def as_number(v):
    """Fraction for rational input, float otherwise."""
    if isinstance(v, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(v, Rational):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError:
            return float(v)
    return float(v)


def is_exact(*vals) -> bool:
    return all(isinstance(v, Fraction) for v in vals)


def _guard(g: Graph, limit: int, what: str):
    if g.m > limit:
        raise EnumerationLimitError(
            f"{what} enumerates 2^m edge subsets and is limited to m <= {limit}; graph has m={g.m}"
        )


@dataclass(frozen=True)
class EvalPoint:
    """A Tutte evaluation point (x, y) and its random-cluster parametrization."""

    x: object
    y: object

    def __post_init__(self):
        object.__setattr__(self, "x", as_number(self.x))
        object.__setattr__(self, "y", as_number(self.y))

    @property
    def q(self):
        return (self.x - 1) * (self.y - 1)

    @property
    def p(self):
        return (self.y - 1) / self.y

    def zeta(self, n: int, m: int, k: int = 1):
        """Scale factor y^m / ((x-1)^k (y-1)^n); k is the component count of G."""
        return self.y ** m / ((self.x - 1) ** k * (self.y - 1) ** n)

    def log_zeta(self, n: int, m: int, k: int = 1) -> float:
        x, y = float(self.x), float(self.y)
        return m * math.log(y) - k * math.log(x - 1) - n * math.log(y - 1)

    def rc_config(self) -> "RCConfig":
        return RCConfig(self.p, self.q)


@dataclass(frozen=True)
class RCConfig:
    """Uniform edge probability ``p`` and cluster weight ``q_weight``."""

    p: object
    q_weight: object

    def __post_init__(self):
        p, q = as_number(self.p), as_number(self.q_weight)
        if not 0 <= p <= 1:
            raise ValueError(f"edge probability must lie in [0, 1], got p={p}")
        if not q > 0:
            raise ValueError(f"cluster weight must be positive, got Q={q}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q_weight", q)


def subset_statistics(n: int, free_edges, forced_edges=()) -> dict[tuple[int, int], int]:
    """Count subsets Y of ``free_edges`` by (|Y|, kappa(forced + Y)).

    Depth-first over the free edges with an undoable union-find, so every
    leaf costs O(log n) instead of a fresh component count.
    """
    parent = list(range(n))
    size = [1] * n

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    comps = n
    for u, v in forced_edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            if size[ru] < size[rv]:
                ru, rv = rv, ru
            parent[rv] = ru
            size[ru] += size[rv]
            comps -= 1

    free = list(free_edges)
    total = len(free)
    counts: dict[tuple[int, int], int] = defaultdict(int)

    def rec(i, k, c):
        if i == total:
            counts[(k, c)] += 1
            return
        rec(i + 1, k, c)
        u, v = free[i]
        ru, rv = find(u), find(v)
        if ru == rv:
            rec(i + 1, k + 1, c)
            return
        if size[ru] < size[rv]:
            ru, rv = rv, ru
        parent[rv] = ru
        size[ru] += size[rv]
        rec(i + 1, k + 1, c - 1)
        size[ru] -= size[rv]
        parent[rv] = rv

    rec(0, 0, comps)
    return dict(sorted(counts.items()))


@lru_cache(maxsize=512)
def rank_statistics(g: Graph) -> dict[tuple[int, int], int]:
    """Number of edge subsets A with each (|A|, kappa(A))."""
    return subset_statistics(g.n, g.edge_list)


def tutte_statesum(g: Graph, x, y):
    """T_G(x, y) as the sum over A of (x-1)^(r(E)-r(A)) (y-1)^(|A|-r(A))."""
    _guard(g, STATESUM_MAX_EDGES, "tutte_statesum")
    x, y = as_number(x), as_number(y)
    xm, ym = x - 1, y - 1
    k_e = kappa_full(g)
    terms = [c * xm ** (kap - k_e) * ym ** (k - g.n + kap) for (k, kap), c in rank_statistics(g).items()]
    return sum(terms) if is_exact(x, y) else math.fsum(terms)


def tutte_delcon(g: Graph, x, y):
    """T_G(x, y) by deletion-contraction with loop and bridge base cases."""
    _guard(g, DELCON_MAX_EDGES, "tutte_delcon")
    x, y = as_number(x), as_number(y)
    memo: dict = {}

    def connected(n, edges, a, b):
        adj = defaultdict(list)
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        seen, stack = {a}, [a]
        while stack:
            w = stack.pop()
            if w == b:
                return True
            for z in adj[w]:
                if z not in seen:
                    seen.add(z)
                    stack.append(z)
        return False

    def merge(edges, u, v):
        # relabel v -> u and close the gap left by v
        def r(w):
            w = u if w == v else w
            return w - 1 if w > v else w
        return tuple((r(a), r(b)) for a, b in edges)

    def rec(n, edges):
        if not edges:
            return 1
        key = (n, tuple(sorted((min(a, b), max(a, b)) for a, b in edges)))
        if key in memo:
            return memo[key]
        (u, v), rest = edges[-1], edges[:-1]
        if u == v:
            val = y * rec(n, rest)
        elif not connected(n, rest, u, v):
            val = x * rec(n - 1, merge(rest, u, v))
        else:
            val = rec(n, rest) + rec(n - 1, merge(rest, u, v))
        memo[key] = val
        return val

    return rec(g.n, tuple(g.edge_list))


def chromatic_eval(g: Graph, lam: int) -> int:
    """P(G, lam) = (-1)^r(E) * lam^k(G) * T_G(1 - lam, 0)."""
    lam = int(lam)
    k_g = kappa_full(g)
    t = tutte_statesum(g, Fraction(1 - lam), Fraction(0))
    val = (-1) ** (g.n - k_g) * Fraction(lam) ** k_g * t
    assert val.denominator == 1
    return int(val)


def _weight(p, q, m, k, kap):
    return p ** k * (1 - p) ** (m - k) * q ** kap


def z_exact(g: Graph, cfg: RCConfig):
    """Random-cluster partition function by enumeration of all edge subsets."""
    _guard(g, STATESUM_MAX_EDGES, "z_exact")
    p, q = cfg.p, cfg.q_weight
    terms = [c * _weight(p, q, g.m, k, kap) for (k, kap), c in rank_statistics(g).items()]
    return sum(terms) if is_exact(p, q) else math.fsum(terms)


def mu_exact(g: Graph, cfg: RCConfig, a: EdgeSubset):
    """Probability of the exact configuration A under the random-cluster measure."""
    _guard(g, STATESUM_MAX_EDGES, "mu_exact")
    idx = edge_indices(a, g.m)
    kap = components(g, idx).kappa
    return _weight(cfg.p, cfg.q_weight, g.m, len(idx), kap) / z_exact(g, cfg)


def lambda_contraction(g: Graph, cfg: RCConfig, a: EdgeSubset):
    """p^|A| * Z(G/A) / Z(G), with both partition functions exact."""
    k = len(edge_indices(a, g.m))
    return cfg.p ** k * z_exact(contract(g, a), cfg) / z_exact(g, cfg)


def lambda_exact(g: Graph, cfg: RCConfig, a: EdgeSubset, verify: bool = True):
    """Probability that every edge of A is open: the sum of mu(X) over X containing A.

    With ``verify`` the direct sum is checked against the contraction form;
    exact inputs must agree exactly, float inputs to 1e-9 relative.
    """
    _guard(g, STATESUM_MAX_EDGES, "lambda_exact")
    mask = edge_mask(a, g.m)
    forced = [e for e, used in zip(g.edge_list, mask) if used]
    free = [e for e, used in zip(g.edge_list, mask) if not used]
    p, q = cfg.p, cfg.q_weight
    na = len(forced)
    terms = [c * _weight(p, q, g.m, na + k, kap) for (k, kap), c in subset_statistics(g.n, free, forced).items()]
    num = sum(terms) if is_exact(p, q) else math.fsum(terms)
    val = num / z_exact(g, cfg)
    if verify:
        other = lambda_contraction(g, cfg, mask)
        ok = val == other if is_exact(p, q) else math.isclose(val, other, rel_tol=1e-9, abs_tol=1e-300)
        if not ok:
            raise OracleMismatch(f"direct lambda {val} != contraction lambda {other}")
    return val
