"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL`` line (visible even under
pytest's output capture) and then asserts.  Run with ``pytest -v
tests/test_acceptance.py``.
"""

from __future__ import annotations

import time
from fractions import Fraction

import numpy as np
import pytest

from csdilog.dilog import pentagon_residual
from csdilog.group import DilogFactor, ProductExpr, evaluate_product, evaluate_product_by_composition
from csdilog.identity import (
    DEFAULT_SCALE_GRID,
    assemble_di,
    replay_trace_on_di,
    verify_di_numeric,
    verify_di_symbolic,
    y_variable,
)
from csdilog.lattice import A1_1, A2_2, B2, skew_form
from csdilog.scatter import (
    build_csd,
    consistency_check,
    incoming_product,
    is_ordered,
    loop_crossings,
    order_product,
    pentagon_sort_trace,
    positive_form,
)
from csdilog.series import TruncatedSeries, pow_rational

from conftest import rank2_pairs

RANDOM_DATA = rank2_pairs(sign=1) + rank2_pairs(sign=-1)


@pytest.fixture
def report(capsys):
    def _report(n: int, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip())
        assert ok, f"criterion {n} failed: {detail}"

    return _report


def ys(level):
    return TruncatedSeries.variable(2, level, 0), TruncatedSeries.variable(2, level, 1)


def S(terms, level=3):
    return TruncatedSeries(2, level, terms)


def y_at(csd, m):
    (c,) = [c for c in loop_crossings(csd) if c.phi.m == m]
    return y_variable(csd, c.position)


def factors(p: ProductExpr):
    return [(f.m, f.c) for f in p.signed_factors()]


def test_criterion_1_a11_wall_set(report):
    t0 = time.perf_counter()
    csd = build_csd(A1_1, 8)
    elapsed = time.perf_counter() - t0
    got = factors(csd.ordered_product())
    left = [((k + 1, k), 2) for k in range(4)]
    ray = [((2**j, 2**j), 2 ** (2 - j)) for j in range(3)]
    right = [((k, k + 1), 2) for k in reversed(range(4))]
    ok = got == left + ray + right and elapsed < 10
    report(1, ok, f"{len(got)} factors, {elapsed:.2f} s")


def test_criterion_2_a11_series(report):
    y1, y2 = ys(3)
    csd = build_csd(A1_1, 3)
    checks = [
        y2 * (1 + y1) ** 2 == S({(0, 1): 1, (1, 1): 2, (2, 1): 1}),
        y1 * pow_rational(1 + y2 * (1 + y1) ** 2, -2) == S({(1, 0): 1, (1, 1): -2, (2, 1): -4, (1, 2): 3}),
        y_at(csd, (1, 1)) == S({(1, 1): 1, (1, 2): -2}),
        y_at(csd, (2, 1)) == S({(2, 1): 1}),
        y_at(csd, (1, 2)) == S({(1, 2): 1}),
    ]
    report(2, all(checks), f"{sum(checks)}/{len(checks)} series")


def test_criterion_3_a22_series_and_relation(report):
    y1, y2 = ys(3)
    csd = build_csd(A2_2, 3)
    checks = [
        y1 * pow_rational(1 + y2 * (1 + y1), -4) == S({(1, 0): 1, (1, 1): -4, (2, 1): -4, (1, 2): 10}),
        y_at(csd, (1, 1)) == S({(1, 1): 1, (1, 2): -4}),
        factors(order_product(A2_2, 3, incoming_product(A2_2))) == [((1, 0), 1), ((1, 1), 4), ((1, 2), 6), ((0, 1), 4)],
    ]
    report(3, all(checks), f"{sum(checks)}/{len(checks)} checks")


def test_criterion_4_symbolic_residuals(report):
    cases = [(A1_1, 1), (A1_1, 2), (A1_1, 3), (A2_2, 3), (B2, 12)] + [(fd, 6) for fd in RANDOM_DATA]
    bad = [(fd.B, fd.delta, lvl) for fd, lvl in cases if not verify_di_symbolic(assemble_di(build_csd(fd, lvl)), lvl).symbolic_ok]
    report(4, not bad and len(RANDOM_DATA) >= 20, f"{len(cases)} diagrams, {len(RANDOM_DATA)} random data, failures {bad}")


def test_criterion_5_numeric(report):
    terms = assemble_di(build_csd(B2, 12))
    pts = np.random.default_rng(20261014).uniform(0, 1, size=(100, 2))
    b2 = verify_di_numeric(terms, pts, fd=B2).max_residual()
    g = np.linspace(0.025, 0.975, 20)
    pent = max(abs(pentagon_residual(a, b)) for a in g for b in g)
    a11 = assemble_di(build_csd(A1_1, 3))
    slope = verify_di_numeric(a11, pts[:20], DEFAULT_SCALE_GRID, fd=A1_1).scaling_slope
    ok = b2 < 1e-10 and pent < 1e-12 and 3.7 <= slope <= 4.3
    report(5, ok, f"B2 max {b2:.1e}, pentagon max {pent:.1e}, slope {slope:.3f}")


def _random_vector(rng, max_deg=3):
    d = int(rng.integers(1, max_deg + 1))
    a = int(rng.integers(0, d + 1))
    return (a, d - a)


def test_criterion_6_group_law(report):
    rng = np.random.default_rng(6)
    level = 8
    pent = comm = 0
    failures = []
    while pent < 50:
        fd = RANDOM_DATA[rng.integers(len(RANDOM_DATA))]
        n1, n2 = _random_vector(rng), _random_vector(rng)
        c = skew_form(fd, n2, n1)
        if c == 0:
            continue
        q = 1 / Fraction(c)
        n12 = (n1[0] + n2[0], n1[1] + n2[1])
        lhs = ProductExpr.of([DilogFactor(n2, q), DilogFactor(n1, q)])
        rhs = ProductExpr.of([DilogFactor(n1, q), DilogFactor(n12, q), DilogFactor(n2, q)])
        if evaluate_product(fd, level, lhs) != evaluate_product(fd, level, rhs):
            failures.append(("pentagon", fd.B, n1, n2))
        pent += 1
    while comm < 50:
        fd = RANDOM_DATA[rng.integers(len(RANDOM_DATA))]
        n = _random_vector(rng)
        k = int(rng.integers(1, 4))
        m = (k * n[0], k * n[1])
        a, b = Fraction(int(rng.integers(1, 5)), 2), Fraction(-int(rng.integers(1, 5)), 3)
        ab = ProductExpr.of([DilogFactor(n, a), DilogFactor(m, b)])
        ba = ProductExpr.of([DilogFactor(m, b), DilogFactor(n, a)])
        if evaluate_product(fd, level, ab) != evaluate_product(fd, level, ba):
            failures.append(("commute", fd.B, n, m))
        comm += 1
    orders = 0
    for _ in range(50):
        fd = RANDOM_DATA[rng.integers(len(RANDOM_DATA))]
        k = int(rng.integers(2, 5))
        C = ProductExpr.of([DilogFactor(_random_vector(rng), int(rng.integers(1, 3))) for _ in range(k)])
        out = order_product(fd, 6, C, check_positive=False)
        if not is_ordered(fd, out.signed_factors()) or (
            evaluate_product_by_composition(fd, 6, out) != evaluate_product_by_composition(fd, 6, C)
        ):
            failures.append(("order", fd.B, factors(C)))
        orders += 1
    report(6, not failures, f"{pent} pentagon, {comm} commutation, {orders} ordering draws, failures {failures[:3]}")


def test_criterion_7_trace_fidelity(report):
    start = ProductExpr.of([DilogFactor((0, 1), 2), DilogFactor((1, 0), 1)])
    out, trace = pentagon_sort_trace(B2, 12, start)
    e1, e2, a, b = (1, 0), (0, 1), (1, 1), (1, 2)
    want_rel = [
        [e2, e2, e1],
        [e2, e1, a, e2],
        [e1, a, e2, a, e2],
        [e1, a, a, b, e2, e2],
    ]
    rel_ok = [[f.m for f in s] for s in trace.pentagon_stages()] == want_rel
    rel_ok &= all(f.c == 1 for s in trace.pentagon_stages() for f in s)

    states = replay_trace_on_di(trace)
    pent = [i for i, m in enumerate(trace.moves) if m.kind == "pentagon"]
    stages = [states[pent[0]]] + [states[i + 1] for i in pent]
    # each stage is listed as (word as exponent vectors, argument monomial); all exponents are -1
    want_di = [
        [([e1, e2], e2), ([e1], e2), ([], e1)],
        [([e2, a, e1], e2), ([e2, a], e1), ([e2], a), ([], e2)],
        [([e2, a, e2, a], e1), ([e2, a, e2], a), ([e2, a], e2), ([e2], a), ([], e2)],
        [([e2, e2, b, a, a], e1), ([e2, e2, b, a], a), ([e2, e2, b], a), ([e2, e2], b), ([e2], e2), ([], e2)],
    ]
    got_di = [[([f.m for f in t.word], t.m) for t in s] for s in stages]
    di_ok = got_di == want_di and all(f.c == -1 for s in stages for t in s for f in t.word)

    residuals = {verify_di_symbolic(s, 12, 2).symbolic_residual for s in states}
    inv_ok = len(residuals) == 1
    report(7, rel_ok and di_ok and inv_ok, f"{len(trace.moves)} moves, relations {rel_ok}, DI stages {di_ok}, residual invariant {inv_ok}")


def test_criterion_8_positive_form(report):
    built = [(fd, lvl) for fd in (A1_1, A2_2, B2) for lvl in range(1, 11)] + [(fd, 6) for fd in RANDOM_DATA]
    count = 0
    bad = []
    for fd, lvl in built:
        csd = build_csd(fd, lvl)
        if not consistency_check(csd):
            bad.append((fd.B, fd.delta, lvl, "inconsistent"))
        for f in csd.all_factors():
            rec = positive_form(fd, f)
            count += 1
            if not (isinstance(rec.s, int) and rec.s >= 1):
                bad.append((fd.B, fd.delta, lvl, f))
    report(8, not bad, f"{count} factors over {len(built)} diagrams, failures {bad[:3]}")
