"""Monte Carlo estimators for E(Q^kappa(G_p)), the Tutte polynomial, Z and lambda(A).

Samples are drawn in fixed-size blocks.  Block ``b`` of repetition ``r`` gets
its own PCG64 stream seeded from ``(seed, stream, r, b)``, and every sample in
a block consumes exactly ``m`` uniforms in edge-index order.  Each block is
reduced to a histogram of component counts, so the merged result is an
integer sum and does not depend on the number of worker threads.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.special import logsumexp

from .exact import EvalPoint, RCConfig
from .graph import Graph, EdgeSubset, classify_density, contract, edge_mask, kappa_full, subdense_constant

# target number of uniforms per block; block size depends only on m
BLOCK_DRAWS = 1 << 21
MAX_BLOCK = 1 << 15
MAX_SAMPLES = 10 ** 9


class SamplerDomainError(ValueError):
    """Parameters outside the sampler's domain (use the exact oracle instead)."""


@dataclass(frozen=True)
class SamplerConfig:
    epsilon: float = 0.1
    t_override: Optional[int] = None
    variance_bound: Optional[float] = None
    seed: int = 0
    fail_prob_amplification: int = 1
    threads: int = 1
    subdense_c: Optional[float] = None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.t_override is not None and self.t_override < 1:
            raise ValueError(f"t must be at least 1, got {self.t_override}")
        if self.variance_bound is not None and not self.variance_bound > 0:
            raise ValueError("variance_bound must be positive")
        r = self.fail_prob_amplification
        if r < 1 or r % 2 == 0:
            raise ValueError(f"fail_prob_amplification must be a positive odd integer, got {r}")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")


@dataclass
class EstimatorRun:
    mode: str
    t: int
    mean: float
    m2: float
    estimate: float
    seed: int
    epsilon: float
    log_mean: float = 0.0
    log_estimate: float = 0.0
    repetitions: int = 1
    kappa_counts: dict = field(default_factory=dict, repr=False)

    @property
    def variance(self) -> float:
        """Unbiased sample variance of Q^kappa."""
        return self.m2 / (self.t - 1) if self.t > 1 else 0.0

    @property
    def std_error(self) -> float:
        return math.sqrt(self.variance / self.t)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "estimate": self.estimate,
            "log_estimate": self.log_estimate,
            "mean": self.mean,
            "variance": self.variance,
            "std_error": self.std_error,
            "t": self.t,
            "seed": self.seed,
            "epsilon": self.epsilon,
            "repetitions": self.repetitions,
        }


@dataclass
class LambdaRun:
    estimate: float
    numerator: EstimatorRun
    denominator: EstimatorRun
    sub_epsilon: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "mode": "lambda",
            "estimate": self.estimate,
            "seed": self.seed,
            "sub_epsilon": self.sub_epsilon,
            "numerator": self.numerator.to_dict(),
            "denominator": self.denominator.to_dict(),
        }


def chebyshev_samples(variance_bound: float, epsilon: float) -> int:
    """t = ceil(2 p(n) / eps^2), so that p(n) / (t eps^2) <= 1/2."""
    t = math.ceil(2 * variance_bound / epsilon ** 2)
    if t < 1:
        raise ValueError(f"sample count computed as {t}; variance bound must be positive")
    return t


def resolve_samples(g: Graph, q: float, cfg: SamplerConfig) -> int:
    """Sample count from the override, an explicit bound, or the subdense bound 2 Q^(2s)."""
    if cfg.t_override is not None:
        return cfg.t_override
    if cfg.variance_bound is not None:
        t = chebyshev_samples(cfg.variance_bound, cfg.epsilon)
    else:
        from .diagnostics import second_moment_bound

        if g.n < 2:
            raise ValueError("no default variance bound for n < 2; pass t_override")
        c = cfg.subdense_c if cfg.subdense_c is not None else subdense_constant(g)
        if c <= 0 or not classify_density(g, c=c, family="subdense"):
            raise ValueError(
                f"graph is not {c:g}*n/sqrt(ln n)-subdense, so no default variance bound exists; pass t_override"
            )
        t = chebyshev_samples(second_moment_bound(g.n, max(q, 1.0), c), cfg.epsilon)
    if t > MAX_SAMPLES:
        raise ValueError(f"variance bound asks for t={t} samples (> {MAX_SAMPLES}); pass t_override")
    return t


def _as_generator(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def sample_gp(g: Graph, p: float, rng=None) -> np.ndarray:
    """Keep each edge independently with probability p (m draws in edge order)."""
    if not 0 <= p <= 1:
        raise ValueError(f"edge probability must lie in [0, 1], got p={p}")
    return _as_generator(rng).random(g.m) < p


def _is_dense_simple(n: int, edges: np.ndarray) -> bool:
    if n < 16 or len(edges) < n * (n - 1) // 4:
        return False
    lo, hi = np.minimum(edges[:, 0], edges[:, 1]), np.maximum(edges[:, 0], edges[:, 1])
    keys = lo * n + hi
    return np.unique(keys).size == keys.size


def _connected_rows(n: int, edges: np.ndarray, open_mask: np.ndarray) -> np.ndarray:
    """Which samples are connected, by reachability sweeps from vertex 0."""
    batch = open_mask.shape[0]
    adj = np.zeros((batch, n, n), dtype=bool)
    u, v = edges[:, 0], edges[:, 1]
    adj[:, u, v] = open_mask
    adj[:, v, u] = open_mask
    reach = adj[:, 0, :].copy()
    reach[:, 0] = True
    count = reach.sum(axis=1)
    while True:
        reach |= (reach[:, :, None] & adj).any(axis=1)
        new_count = reach.sum(axis=1)
        if np.array_equal(new_count, count):
            return count == n
        count = new_count


def kappa_batch(n: int, edges: np.ndarray, open_mask: np.ndarray, dense: Optional[bool] = None) -> np.ndarray:
    """Component counts of (V, A_b) for every row b of a boolean (B, m) mask.

    Dense simple graphs first settle the (typical) connected samples with a
    reachability sweep; the rest go through scipy's component labelling.
    """
    if dense is None:
        dense = _is_dense_simple(n, edges)
    if dense:
        out = np.ones(open_mask.shape[0], dtype=np.int64)
        rest = np.flatnonzero(~_connected_rows(n, edges, open_mask))
        if rest.size:
            out[rest] = kappa_batch(n, edges, open_mask[rest], dense=False)
        return out
    batch = open_mask.shape[0]
    if n == 0:
        return np.zeros(batch, dtype=np.int64)
    rows, cols = np.nonzero(open_mask)
    if rows.size == 0:
        return np.full(batch, n, dtype=np.int64)
    src = rows * n + edges[cols, 0]
    dst = rows * n + edges[cols, 1]
    size = batch * n
    mat = csr_matrix((np.ones(rows.size, dtype=np.int32), (src, dst)), shape=(size, size))
    ncomp, labels = connected_components(mat, directed=False)
    owner = np.empty(ncomp, dtype=np.int64)
    owner[labels] = np.repeat(np.arange(batch), n)
    return np.bincount(owner, minlength=batch)


def block_size(m: int) -> int:
    return max(1, min(MAX_BLOCK, BLOCK_DRAWS // max(m, 1)))


def _block_rng(seed: int, key: tuple) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def kappa_histogram(g: Graph, p: float, t: int, seed: int, key: tuple = (0,), threads: int = 1) -> np.ndarray:
    """Counts of kappa(G_p) over t independent samples, indexed by kappa."""
    bs = block_size(g.m)
    nblocks = -(-t // bs)
    dense = _is_dense_simple(g.n, g.edges)

    def run_block(b):
        size = min(bs, t - b * bs)
        draws = _block_rng(seed, key + (b,)).random((size, g.m))
        kap = kappa_batch(g.n, g.edges, draws < p, dense=dense)
        return np.bincount(kap, minlength=g.n + 1)

    if threads > 1 and nblocks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run_block, range(nblocks)))
    else:
        parts = [run_block(b) for b in range(nblocks)]
    return np.sum(parts, axis=0)


def _summarize(hist: np.ndarray, q: float, t: int):
    """mean, m2 and log-mean of Q^kappa from a kappa histogram."""
    ks = np.flatnonzero(hist)
    counts = hist[ks].astype(float)
    if q == 1:
        return 1.0, 0.0, 0.0
    lnq = math.log(q)
    log_mean = float(logsumexp(np.log(counts) + ks * lnq)) - math.log(t)
    if ks.max() * abs(lnq) < 700:
        vals = q ** ks.astype(float)
        mean = math.fsum(counts * vals) / t
        m2 = math.fsum(counts * (vals - mean) ** 2)
        return mean, m2, log_mean
    # Q^kappa overflows a double: keep the log-mean, report the rest as inf/0
    mean = math.exp(log_mean) if log_mean < 709 else math.inf
    return mean, math.inf, log_mean


def _single_run(g, p, q, t, seed, key, threads, mode, epsilon):
    if q == 1:
        # Q^kappa is identically 1; no draws needed
        hist = {}
        mean, m2, log_mean = 1.0, 0.0, 0.0
    else:
        h = kappa_histogram(g, p, t, seed, key=key, threads=threads)
        mean, m2, log_mean = _summarize(h, q, t)
        hist = {int(k): int(h[k]) for k in np.flatnonzero(h)}
    return EstimatorRun(mode=mode, t=t, mean=mean, m2=m2, estimate=mean, seed=seed, epsilon=epsilon,
                        log_mean=log_mean, log_estimate=log_mean, kappa_counts=hist)


def _check_rc(p, q):
    if not 0 <= p <= 1:
        raise SamplerDomainError(f"edge probability must lie in [0, 1], got p={p}")
    if not q > 0:
        raise SamplerDomainError(f"cluster weight must be positive, got Q={q}")
    if q < 1:
        warnings.warn(f"Q={q} < 1: the estimate is unbiased but the variance bound only covers Q >= 1",
                      stacklevel=3)


def estimate_q_kappa_mean(g: Graph, p: float, q: float, cfg: SamplerConfig, *, mode: str = "q_kappa",
                          stream: int = 0) -> EstimatorRun:
    """Sample mean of Q^kappa(G_p); median of r means when amplification r > 1."""
    p, q = float(p), float(q)
    _check_rc(p, q)
    t = resolve_samples(g, q, cfg)
    runs = [_single_run(g, p, q, t, cfg.seed, (stream, r), cfg.threads, mode, cfg.epsilon)
            for r in range(cfg.fail_prob_amplification)]
    runs.sort(key=lambda run: run.log_mean)
    run = runs[len(runs) // 2]
    run.repetitions = len(runs)
    return run


def _scale(run: EstimatorRun, log_factor: float, factor: Optional[float]) -> EstimatorRun:
    run.log_estimate = run.log_mean + log_factor
    if factor is not None and math.isfinite(factor) and factor > 0 and math.isfinite(run.mean):
        run.estimate = factor * run.mean
    else:
        run.estimate = math.exp(run.log_estimate) if run.log_estimate < 709 else math.inf
    return run


def estimate_tutte(g: Graph, x, y, cfg: SamplerConfig) -> EstimatorRun:
    """zeta * mean(Q^kappa(G_p)) with p = (y-1)/y and Q = (x-1)(y-1).

    For a disconnected graph the scale factor uses (x-1)^k(G) in place of
    (x-1), which keeps the estimator unbiased for T_G(x, y).
    """
    x, y = float(x), float(y)
    if not (x > 1 and y > 1):
        raise SamplerDomainError(
            f"estimate_tutte needs x > 1 and y > 1 (got x={x}, y={y}); use the exact oracle tutte_statesum"
        )
    if cfg.subdense_c is not None and g.n >= 2 and not classify_density(g, c=cfg.subdense_c, family="subdense"):
        warnings.warn(f"graph is not {cfg.subdense_c:g}*n/sqrt(ln n)-subdense; the mean is still unbiased "
                      "but the sample-count guarantee does not apply", stacklevel=2)
    pt = EvalPoint(x, y)
    k_e = kappa_full(g)
    run = estimate_q_kappa_mean(g, pt.p, pt.q, cfg, mode="tutte")
    try:
        factor = pt.zeta(g.n, g.m, k_e)
    except (OverflowError, ZeroDivisionError):
        factor = None
    return _scale(run, pt.log_zeta(g.n, g.m, k_e), factor)


def estimate_z(g: Graph, cfg_rc: RCConfig, cfg: SamplerConfig, *, stream: int = 0) -> EstimatorRun:
    """Random-cluster partition function: Z = E(Q^kappa(G_p)) directly."""
    return estimate_q_kappa_mean(g, float(cfg_rc.p), float(cfg_rc.q_weight), cfg, mode="z", stream=stream)


def estimate_lambda(g: Graph, cfg_rc: RCConfig, a: EdgeSubset, cfg: SamplerConfig) -> LambdaRun:
    """p^|A| * Z(G/A) / Z(G) from two independent runs.

    Each run targets eps' = sqrt(1 + eps) - 1, so the ratio of two
    (1 + eps')-approximations is a (1 + eps)-approximation.
    """
    mask = edge_mask(a, g.m)
    sub_eps = math.sqrt(1 + cfg.epsilon) - 1
    sub = replace(cfg, epsilon=sub_eps)
    den = estimate_z(g, cfg_rc, sub, stream=0)
    num = estimate_z(contract(g, mask), cfg_rc, sub, stream=1)
    if not den.estimate > 0:
        raise ArithmeticError(f"denominator estimate {den.estimate} is not positive")
    p = float(cfg_rc.p)
    k = int(mask.sum())
    if math.isfinite(num.estimate) and math.isfinite(den.estimate):
        value = p ** k * num.estimate / den.estimate
    else:
        log_p = math.log(p) if p > 0 else -math.inf
        value = math.exp(k * log_p + num.log_mean - den.log_mean)
    return LambdaRun(estimate=value, numerator=num, denominator=den, sub_epsilon=sub_eps, seed=cfg.seed)
