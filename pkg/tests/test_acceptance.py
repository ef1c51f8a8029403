"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines appear even
without ``-s``.
"""
import math
import time
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from corpus import corpus, rational_points
from tuttemc.diagnostics import build_gstar, second_moment, superdense_convergence
from tuttemc.exact import EvalPoint, RCConfig, lambda_contraction, lambda_exact, tutte_delcon, tutte_statesum, z_exact
from tuttemc.generators import FamilySpec, PLGSpec, gen_family, gen_plg, molloy_reed_q
from tuttemc.graph import complete_graph, contract, kappa_full, perfect_matching
from tuttemc.sampler import SamplerConfig, chebyshev_samples, estimate_lambda, estimate_tutte, estimate_z

GRAPHS = corpus()
SUBDENSE_NS = (256, 512, 1024)


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {name}: {detail}")
        assert ok, detail
    return emit


def rel_second_moment(g, p, q):
    return z_exact(g, RCConfig(p, q * q)) / z_exact(g, RCConfig(p, q)) ** 2


def test_c01_oracle_cross_validation(report):
    start = time.perf_counter()
    bad = [(g, x, y) for g in GRAPHS for x, y in rational_points(5, seed=g.m)
           if tutte_statesum(g, x, y) != tutte_delcon(g, x, y)]
    elapsed = time.perf_counter() - start
    report("C1 statesum == delcon", not bad and elapsed < 60,
           f"{len(GRAPHS)} graphs x 5 points, {len(bad)} mismatches, {elapsed:.1f}s")


def test_c02_identity_chain(report):
    points = [(F(2), F(2)), (F(2), F(3)), (F(3), F(2)), (F(3, 2), F(4))]
    exact_bad = float_bad = 0
    for g in GRAPHS:
        k = kappa_full(g)
        for x, y in points:
            pt = EvalPoint(x, y)
            target = tutte_statesum(g, x, y)
            exact_bad += pt.zeta(g.n, g.m, k) * z_exact(g, pt.rc_config()) != target
            fpt = EvalPoint(float(x), float(y))
            approx = fpt.zeta(g.n, g.m, k) * z_exact(g, fpt.rc_config())
            float_bad += abs(approx - float(target)) > 1e-12 * abs(float(target))
    report("C2 identity chain", exact_bad == 0 and float_bad == 0,
           f"{len(GRAPHS) * 4} cases, exact mismatches {exact_bad}, float > 1e-12 rel {float_bad}")


def test_c03_sampler_correctness(report):
    start = time.perf_counter()
    eps, runs = 0.05, 200
    pt = EvalPoint(F(2), F(3))
    worst = 0.0
    graphs = [g for g in GRAPHS if g.n <= 6]
    for gi, g in enumerate(graphs):
        exact = float(tutte_statesum(g, 2, 3))
        t = chebyshev_samples(float(rel_second_moment(g, pt.p, pt.q)), eps)
        fails = sum(
            abs(estimate_tutte(g, 2, 3, SamplerConfig(epsilon=eps, t_override=t, seed=gi * runs + s)).estimate
                - exact) > eps * exact
            for s in range(runs)
        )
        worst = max(worst, fails / runs)
    elapsed = time.perf_counter() - start
    report("C3 sampler failure rate", worst <= 0.25 + 0.08 and elapsed < 300,
           f"{len(graphs)} graphs, worst failure fraction {worst:.3f} (limit 0.33), {elapsed:.1f}s")


def test_c04_q_one_exactness(report):
    bad = 0
    for g in GRAPHS:
        run = estimate_tutte(g, 2, 2, SamplerConfig(t_override=100, seed=g.m))
        bad += run.estimate != 2 ** g.m or run.variance != 0
    report("C4 T(2,2) = 2^m", bad == 0, f"{len(GRAPHS)} graphs, {bad} failures")


def test_c05_lambda(report):
    cfg = RCConfig(F(1, 2), F(2))
    small = [g for g in GRAPHS if g.m <= 10]
    worst = 0.0
    for g in small:
        for a in range(1 << g.m):
            direct = lambda_exact(g, cfg, a, verify=False)
            via = lambda_contraction(g, cfg, a)
            worst = max(worst, float(abs(direct - via) / via))
    eps = 0.1
    tol = (1 + eps) ** 2 - 1
    sub_eps = math.sqrt(1 + eps) - 1
    instances = [(complete_graph(4), [0]), (complete_graph(3), [0, 1]), (small[-1], [0, 2]),
                 (complete_graph(5), [0, 4, 7])]
    rates = []
    for g, a in instances:
        truth = float(lambda_exact(g, cfg, a))
        bound = max(float(rel_second_moment(g, cfg.p, cfg.q_weight)),
                    float(rel_second_moment(contract(g, a), cfg.p, cfg.q_weight)))
        t = chebyshev_samples(bound, sub_eps)
        hits = sum(
            abs(estimate_lambda(g, RCConfig(0.5, 2.0), a, SamplerConfig(epsilon=eps, t_override=t, seed=s)).estimate
                - truth) <= tol * truth
            for s in range(100)
        )
        rates.append(hits / 100)
    report("C5 lambda machinery", worst <= 1e-12 and min(rates) >= 0.70,
           f"{len(small)} graphs all A, max rel diff {worst:.1e}; estimate hit rates {rates}")


def test_c06_matching_closed_form(report):
    p, q = F(3, 10), F(2)
    exact_ok = all(z_exact(perfect_matching(n), RCConfig(p, q)) == (p * q + (1 - p) * q * q) ** (n // 2)
                   for n in (4, 6, 8))
    target = 3.4 ** 5
    run = estimate_z(perfect_matching(10), RCConfig(0.3, 2.0), SamplerConfig(t_override=10 ** 6, seed=6))
    rel = abs(run.estimate - target) / target
    report("C6 matching closed form", exact_ok and rel < 0.01,
           f"exact n=4,6,8 {exact_ok}; estimate {run.estimate:.3f} vs {target:.5f}, rel {rel:.2e}")


@pytest.fixture(scope="module")
def subdense_results():
    """G* and second-moment reports for 100 seeded Subdense(c=2) graphs per n."""
    out = {}
    for n in SUBDENSE_NS:
        rows = []
        for i in range(100):
            g = gen_family(FamilySpec("subdense", n, 2.0), np.random.default_rng([n, i]))
            _, gstar = build_gstar(g, 2.0)
            moments = {q: second_moment(g, 0.5, q, 32, seed=i, c=2.0) for q in (1.0, 2.0)}
            rows.append((gstar, moments))
        out[n] = rows
    return out


def test_c07_gstar_components(report, subdense_results):
    summary = {n: (sum(r.passed for r, _ in rows), max(r.gstar_components for r, _ in rows), rows[0][0].bound_s)
               for n, rows in subdense_results.items()}
    ok = all(passed == 100 for passed, _, _ in summary.values())
    detail = ", ".join(f"n={n}: {p}/100 passed, max rho {r}, s {s}" for n, (p, r, s) in summary.items())
    report("C7 G* components <= s", ok, detail)


def test_c08_second_moment_bound(report, subdense_results):
    ok = True
    parts = []
    for n, rows in subdense_results.items():
        for q in (1.0, 2.0):
            reps = [m[q] for _, m in rows]
            ok &= all(r.passed for r in reps)
            parts.append(f"n={n} Q={q:g}: max {max(r.estimate for r in reps):.3g} <= {reps[0].bound:g}")
    report("C8 E(Q^2kappa) <= 2Q^2s", ok, "; ".join(parts))


def test_c09_superdense_convergence(report):
    rows = superdense_convergence("0", 0.5, 4.0, [50, 100, 200], t=10 ** 5, seed=9)
    errs = [r.rel_error for r in rows]
    ok = all(b <= a for a, b in zip(errs, errs[1:])) and errs[-1] < 0.01
    report("C9 superdense convergence", ok, f"rel errors at n=50,100,200: {errs}")


def test_c10_plg(report):
    spec = PLGSpec(2, 1)
    g, meta = gen_plg(spec, 10)
    diff = spec.degree_sequence() - g.degrees()
    dropped = meta["dropped_copy"]
    degrees_ok = (np.count_nonzero(diff) == (0 if dropped is None else 1)
                  and (dropped is None or diff[dropped] == 1))
    table_ok = spec.max_degree == 7 and spec.degree_counts == [7, 3, 2, 1, 1, 1, 1]
    tiny = PLGSpec(math.log(4), 10)
    partner = np.zeros(4, dtype=np.int64)
    for seed in range(10 ** 5):
        h, _ = gen_plg(tiny, seed)
        for u, v in h.edge_list:
            if u == 0 or v == 0:
                partner[u + v] += 1
    freqs = partner[1:] / 10 ** 5
    uniform_ok = bool(np.all(np.abs(freqs - 1 / 3) <= 0.02))
    report("C10 PLG exactness", table_ok and degrees_ok and uniform_ok,
           f"max degree {spec.max_degree}, counts {spec.degree_counts}, degrees ok {degrees_ok}, "
           f"matching frequencies {np.round(freqs, 4).tolist()}")


def test_c11_molloy_reed(report):
    with mpmath.workdps(40):
        num = mpmath.nsum(lambda i: i * (i - 2) / i ** 4, [1, mpmath.inf])
        den = mpmath.nsum(lambda i: 1 / i ** 4, [1, mpmath.inf])
        reference = float(num / den)
    value = molloy_reed_q(PLGSpec(8, 4)).closed_form
    report("C11 Molloy-Reed closed form", abs(value - reference) < 1e-6,
           f"{value!r} vs series {reference!r}")
