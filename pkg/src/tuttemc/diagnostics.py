"""Empirical checks of the variance-bounding constructions.

These run the auxiliary common-neighbour graph, the 2 Q^(2s) second-moment
bound, superdense convergence of E(Q^kappa) to Q, and the perfect-matching
partition function on concrete inputs.  Nothing here proves anything; each
function reports the measured value next to the bound it is meant to respect.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import connected_components

from .exact import as_number, is_exact
from .generators import FamilySpec, InfeasibleSpecError, gen_family
from .graph import Graph, parse_f, subdense_constant
from .sampler import SamplerConfig, estimate_q_kappa_mean


def component_bound(n: int, c: float) -> int:
    """s = ceil(5/(2c) * sqrt(ln n)), the bound on the number of G* components."""
    return math.ceil(5 / (2 * c) * math.sqrt(math.log(n)))


def second_moment_bound(n: int, q: float, c: float) -> float:
    """2 Q^(2s) with s from :func:`component_bound`."""
    return 2 * q ** (2 * component_bound(n, c))


@dataclass
class GStarReport:
    n: int
    c: float
    d0: float
    threshold: float
    gstar_components: int
    bound_s: int
    bound_s_log: int
    passed: bool

    def to_dict(self):
        return asdict(self)


def common_neighbours(g: Graph) -> np.ndarray:
    """|N(u) & N(v)| for all pairs, on the simple support of g."""
    adj = g.simple_adjacency().astype(np.float32)
    # float32 matmul is exact for counts below 2^24
    return (adj @ adj).astype(np.int64)


def build_gstar(g: Graph, c: float, d0_override: Optional[float] = None) -> tuple[Graph, GStarReport]:
    """Join u, v whenever they share at least d0 * n / ln n neighbours.

    ``d0`` defaults to c^2 / 5.  The report compares the component count of
    G* with s = ceil(5/(2c) sqrt(ln n)); ``bound_s_log`` is the variant with
    ln n in place of sqrt(ln n), given for reference only.
    """
    n = g.n
    if n < 3:
        raise ValueError(f"build_gstar needs n >= 3, got {n}")
    d0 = c * c / 5 if d0_override is None else d0_override
    threshold = d0 * n / math.log(n)
    common = common_neighbours(g)
    linked = common >= threshold
    np.fill_diagonal(linked, False)
    rho, _ = connected_components(linked, directed=False)
    r, s = np.nonzero(np.triu(linked, 1))
    gstar = Graph(n, np.column_stack([r, s]))
    bound_s = component_bound(n, c)
    report = GStarReport(n=n, c=c, d0=d0, threshold=threshold, gstar_components=int(rho), bound_s=bound_s,
                         bound_s_log=math.ceil(5 / (2 * c) * math.log(n)), passed=bool(rho <= bound_s))
    return gstar, report


@dataclass
class SecondMomentReport:
    estimate: float
    std_error: float
    t: int
    seed: int
    s: int
    bound: float
    passed: bool

    def to_dict(self):
        return asdict(self)


def second_moment(g: Graph, p: float, q: float, t: int, seed: int, c: Optional[float] = None,
                  threads: int = 1) -> SecondMomentReport:
    """Monte Carlo E(Q^(2 kappa(G_p))) against 2 Q^(2s).

    ``c`` defaults to the largest subdensity constant g satisfies.
    """
    if q < 1:
        raise ValueError(f"second-moment comparison only covers Q >= 1, got Q={q}")
    if c is None:
        c = subdense_constant(g)
    run = estimate_q_kappa_mean(g, p, q * q, SamplerConfig(t_override=t, seed=seed, threads=threads),
                                mode="second_moment")
    s = component_bound(g.n, c)
    bound = 2 * q ** (2 * s)
    return SecondMomentReport(estimate=run.mean, std_error=run.std_error, t=t, seed=seed, s=s, bound=bound,
                              passed=bool(run.mean <= bound))


@dataclass
class ConvergenceRow:
    n: int
    estimate: Optional[float]
    rel_error: Optional[float]
    envelope: Optional[float]
    note: str = ""


def connectivity_envelope(n: int, p: float, f_n: float) -> float:
    """n^2 (1-p)^(n - 2 f(n)): bound on P(G_p disconnected) for f(n)-superdense G."""
    if p >= 1:
        return 0.0
    return n * n * (1 - p) ** (n - 2 * f_n)


def superdense_convergence(f, p: float, q: float, n_grid, t: int, seed: int, threads: int = 1) -> list[ConvergenceRow]:
    """|E(Q^kappa(G_p)) - Q| / Q on a generated f(n)-superdense graph for each n."""
    fn = parse_f(f)
    rows = []
    for i, n in enumerate(n_grid):
        f_n = fn(n)
        if f_n >= n - 1:
            rows.append(ConvergenceRow(n, None, None, None, note=f"skipped: f(n)={f_n:g} >= n-1"))
            continue
        try:
            g = gen_family(FamilySpec("superdense", n, f), np.random.default_rng([seed, i]))
        except InfeasibleSpecError as exc:
            rows.append(ConvergenceRow(n, None, None, None, note=f"skipped: {exc}"))
            continue
        run = estimate_q_kappa_mean(g, p, q, SamplerConfig(t_override=t, seed=seed, threads=threads), mode="z")
        rows.append(ConvergenceRow(n, run.mean, abs(run.mean - q) / q, connectivity_envelope(n, p, f_n)))
    return rows


def convergence_csv(rows: list[ConvergenceRow]) -> str:
    lines = ["n,estimate,rel_error"]
    for r in rows:
        lines.append(f"{r.n},{'' if r.estimate is None else repr(r.estimate)},"
                     f"{'' if r.rel_error is None else repr(r.rel_error)}")
    return "\n".join(lines) + "\n"


@dataclass
class MatchingZ:
    z: object
    reference: object
    ratio: object


def matching_model_z(n: int, p, q) -> MatchingZ:
    """Z of the perfect matching on n vertices: (pQ + (1-p)Q^2)^(n/2).

    Also returns the all-open value Q^(n/2) and the ratio (p + (1-p)Q)^(n/2).
    """
    if n % 2:
        raise ValueError(f"perfect matching needs an even n, got {n}")
    p, q = as_number(p), as_number(q)
    half = n // 2
    z = (p * q + (1 - p) * q * q) ** half
    ref = q ** half
    ratio = (p + (1 - p) * q) ** half
    if not is_exact(p, q):
        z, ref, ratio = float(z), float(ref), float(ratio)
    return MatchingZ(z, ref, ratio)

