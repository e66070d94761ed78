"""Acceptance suite: one test per criterion, each labelled with ``criterion``.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary lists a
PASS/FAIL line per criterion.
"""
import math
import time

import numpy as np
import pytest

from npce import reference
from npce.economy import productivity_report
from npce.errors import ZeroDelta
from npce.experiments import iteration_growth, rates_table
from npce.operators import g_matrix, g_offset, modulus_bundle
from npce.oracle import enumerate_equilibria
from npce.probgen import GenSpec, planted_instance, random_productive, shaped_instance
from npce.solvers import EPG, EPG_SAFETY, PGP, SolverConfig, epg_step, pgp_step, solve
from npce.vi import Point, budget_terms, certify, project_onto_omega

criterion = pytest.mark.criterion

R1_STAR = np.array([20 / 9, 80 / 9, 11 / 9])
KAPPAS = (1 / 8, 1 / 4, 1 / 2, 2 / 3)


def shaped_cases():
    """20 seeded planted instances with n, m <= 5, cycling through KAPPAS."""
    cases = []
    for seed in range(20):
        n, m = 1 + seed % 5, 1 + (3 * seed + 1) % 5
        kappa = KAPPAS[seed % 4]
        cases.append((kappa, shaped_instance(n, m, seed, kappa)))
    return cases


@pytest.fixture(scope="module")
def shaped():
    return shaped_cases()


def distances(inst, method, t, max_iters):
    res = solve(inst.eco, inst.ops, SolverConfig(method, step=t, tol=1e-300, max_iters=max_iters),
                reference=inst.planted)
    return np.array([h.dist_to_reference for h in res.residual_history])


def step_ratios(d, floor=1e-6):
    keep = d[:-1] >= floor
    return d[1:][keep] / d[:-1][keep]


@criterion("AC1 R1 reference equilibrium reached by PGP and EPG")
@pytest.mark.parametrize("method, t", [(PGP, 4 / 9), (EPG, 1 / 3)])
def test_ac1_r1_reference(method, t):
    inst = reference.r1()
    star = Point.unflatten(R1_STAR, 1)
    cfg = SolverConfig(method, step=t, tol=1e-12, max_iters=10_000, start=Point.ones(1, 1))
    begin = time.perf_counter()
    res = solve(inst.eco, inst.ops, cfg, reference=star)
    elapsed = time.perf_counter() - begin
    d = [h.dist_to_reference for h in res.residual_history]
    hit = next(h.iter for h in res.residual_history if h.dist_to_reference <= 1e-8)
    assert hit < 200
    assert elapsed < 0.1
    assert np.linalg.norm(res.final.flatten() - R1_STAR) <= 1e-8
    assert d[0] == pytest.approx(np.linalg.norm(np.ones(3) - R1_STAR))


@criterion("AC2 budget identity at equilibria and gap identity at iterates")
def test_ac2_budget_identity():
    instances = [reference.r1(), reference.r2()]
    instances += [planted_instance(GenSpec(1 + s % 3, 1 + s % 2, seed=s,
                                           planting="boundary" if s % 2 else "interior"))
                  for s in range(10)]
    for inst in instances:
        moduli = modulus_bundle(inst.eco, inst.ops)
        for method in (PGP, EPG):
            res = solve(inst.eco, inst.ops, SolverConfig(method, tol=1e-12), moduli=moduli)
            cert = res.certificate
            assert cert.max_gap() <= 1e-8
            cons, prod, fac = budget_terms(inst.eco, inst.ops, res.final)
            assert abs(cons - prod - fac) <= 1e-7
        # gap identity along a whole PGP trajectory
        y = Point.ones(inst.eco.n, inst.eco.m)
        t = res.step_used
        for _ in range(200):
            cert = certify(inst.eco, inst.ops, y, t)
            assert abs(cert.complementarity_gap - cert.budget_gap) <= 1e-10
            y = pgp_step(inst.eco, inst.ops, y, t)


@criterion("AC3 R2 market clearing with idle factor")
def test_ac3_market_clearing():
    inst = reference.r2()
    sol = enumerate_equilibria(inst.eco, inst.ops)
    assert sol.active_sets == [("v1",)]
    np.testing.assert_allclose(sol.points[0].flatten(), [3.2, 8.4, 0.0], atol=1e-12)
    for method in (PGP, EPG):
        res = solve(inst.eco, inst.ops, SolverConfig(method, tol=1e-12))
        np.testing.assert_allclose(res.final.flatten(), [3.2, 8.4, 0.0], atol=1e-9)
        rows = {r.label: r for r in res.certificate.per_constraint}
        assert rows["v1"].slack == pytest.approx(-1.8, abs=1e-9)
        assert rows["v1"].multiplier == 0.0
        assert all(abs(r.product) <= 1e-8 for r in rows.values())


@criterion("AC4 PGP per-iteration contraction within sqrt(1-kappa^2)")
def test_ac4_pgp_rate(shaped):
    for kappa, inst in shaped:
        moduli = modulus_bundle(inst.eco, inst.ops)
        assert moduli.kappa == pytest.approx(kappa, rel=1e-6)
        t = moduli.delta / moduli.L ** 2
        ratios = step_ratios(distances(inst, PGP, t, 20_000))
        assert ratios.size > 10
        assert ratios.max() <= math.sqrt(1 - moduli.kappa ** 2) + 1e-6


@criterion("AC5 EPG per-iteration squared contraction at t=1/(2L)")
def test_ac5_epg_rate(shaped):
    for kappa, inst in shaped:
        moduli = modulus_bundle(inst.eco, inst.ops)
        k = moduli.kappa
        ratios2 = step_ratios(distances(inst, EPG, 1 / (2 * moduli.L), 20_000)) ** 2
        assert ratios2.size > 10
        assert ratios2.max() <= (1 + k) / (1 + 2 * k) + 1e-6
        if k <= 0.5:
            assert ratios2.max() <= 1 - 0.5 * k + 1e-6


@criterion("AC6 monotone-only R3: EPG converges, Fejer monotone, PGP auto refuses")
def test_ac6_monotone_only():
    inst = reference.r3()
    moduli = modulus_bundle(inst.eco, inst.ops)
    assert moduli.delta == 0.0
    t = EPG_SAFETY / (math.sqrt(2) * moduli.L)
    res = solve(inst.eco, inst.ops, SolverConfig(EPG, step=t, tol=1e-8, max_iters=100_000))
    assert res.converged and res.iterations <= 100_000
    assert res.residual_history[-1].natural_residual < 1e-8

    y = Point.ones(1, 1)
    prev = reference.r3_distance(y)
    for _ in range(res.iterations):
        _, y = epg_step(inst.eco, inst.ops, y, t)
        cur = reference.r3_distance(y)
        assert cur <= prev + 1e-12
        prev = cur

    with pytest.raises(ZeroDelta):
        solve(inst.eco, inst.ops, SolverConfig(PGP, step="auto"))


@criterion("AC7 solvers agree with the LCP enumeration oracle")
def test_ac7_oracle_equivalence():
    checked = 0
    for seed in range(50):
        n = 1 + seed % 3
        m = 1 + (seed // 3) % (10 - 2 * n)
        planting = ("interior", "boundary")[seed % 2]
        inst = planted_instance(GenSpec(n, m, seed=seed, planting=planting))
        assert 2 * n + m <= 10
        moduli = modulus_bundle(inst.eco, inst.ops)
        assert moduli.delta > 0
        sol = enumerate_equilibria(inst.eco, inst.ops)
        assert len(sol.points) == 1
        star = sol.points[0].flatten()
        np.testing.assert_allclose(star, inst.planted.flatten(), atol=1e-8)
        for method in (PGP, EPG):
            res = solve(inst.eco, inst.ops, SolverConfig(method, tol=1e-12), moduli=moduli)
            assert res.converged
            assert np.linalg.norm(res.final.flatten() - star) <= 1e-6
        checked += 1
    assert checked == 50


@criterion("AC8 iteration growth as kappa halves (PGP about x4, EPG about x2)")
def test_ac8_complexity_scaling(capsys):
    rows = rates_table([0.4, 0.2, 0.1], n=3, m=2, seed=0, tol=1e-10)
    assert all(r.converged for r in rows)
    pgp, epg = iteration_growth(rows, PGP), iteration_growth(rows, EPG)
    assert all(2.0 <= g <= 6.0 for g in pgp), pgp
    assert all(1.0 <= g <= 3.0 for g in epg), epg
    by = {(r.kappa, r.method): r.iters_to_tol for r in rows}
    for kappa in (0.4, 0.2, 0.1):
        assert by[(kappa, EPG)] <= by[(kappa, PGP)]


@criterion("AC9 randomized invariant probes on 1000 samples")
def test_ac9_invariants():
    begin = time.perf_counter()
    rng = np.random.default_rng(20241014)
    inst = planted_instance(GenSpec(3, 2, seed=11))
    eco, ops = inst.eco, inst.ops
    M, b = g_matrix(eco, ops), g_offset(ops)
    moduli = modulus_bundle(eco, ops)
    k = 2 * eco.n + eco.m
    Y1 = rng.normal(scale=5, size=(1000, k))
    Y2 = rng.normal(scale=5, size=(1000, k))
    for y1, y2 in zip(Y1, Y2):
        # projection: idempotent and nonexpansive
        p1 = project_onto_omega(y1, eco.n).flatten()
        p2 = project_onto_omega(y2, eco.n).flatten()
        np.testing.assert_array_equal(project_onto_omega(p1, eco.n).flatten(), p1)
        assert np.linalg.norm(p1 - p2) <= np.linalg.norm(y1 - y2) + 1e-12
        # -g is delta-strongly monotone and g is L-Lipschitz
        g1, g2 = M @ y1 + b, M @ y2 + b
        d = y1 - y2
        assert -(g1 - g2) @ d >= moduli.delta * (d @ d) - 1e-9 * (d @ d)
        assert np.linalg.norm(g1 - g2) <= moduli.L * np.linalg.norm(d) * (1 + 1e-9)
    # Leontief inverse of productive matrices is nonnegative
    for seed in range(1000):
        A = random_productive(1 + seed % 4, density=0.5, seed=seed)
        rep = productivity_report(A)
        assert rep.is_productive and rep.min_inverse_entry >= -1e-10
    # determinism: identical seeds give identical instances
    for seed in range(1000):
        a = planted_instance(GenSpec(1 + seed % 2, 1, seed=seed))
        b2 = planted_instance(GenSpec(1 + seed % 2, 1, seed=seed))
        np.testing.assert_array_equal(a.eco.A, b2.eco.A)
        np.testing.assert_array_equal(a.ops.r.offset, b2.ops.r.offset)
    assert time.perf_counter() - begin < 60
