"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py``; the lines show even
without ``-s``.
"""

import json
import math

import numpy as np
import pytest

from bellvolume.cli import main
from bellvolume.estimation import estimate_volume, find_crossover, sweep_lambda
from bellvolume.geometry import (CHSH_PAIRS, batch_pair_angles, coplanar_chsh_config,
                                 uniform_draws)
from bellvolume.inequalities import CHSH, I3322, chsh_value, functional_from_angles, violates
from bellvolume.models import (LAMBDA_MAX, LAMBDA_MIN, eval_correlation,
                               joint_outcome_probabilities, lambda_box_model, pr_box_model,
                               singlet_model)
from bellvolume.search import search_max_violation
from oracles import coplanar_grid_fraction, lambda_branches, pr_branches
from oracles import singlet as singlet_oracle

PI = math.pi
SEED = 20240601


@pytest.fixture
def report(capsys):
    def _report(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        assert ok, f"criterion {criterion}: {detail}"
    return _report


def test_1_singlet_chsh_volume(report):
    est = estimate_volume(singlet_model(), CHSH, 10**6, SEED)
    target = (PI - 3) / 2
    ok = abs(est.v - target) <= 3 * est.stderr
    report(1, ok, f"v={est.v:.6f} target={target:.7f} 3se={3 * est.stderr:.2e}")


def test_2_pr_chsh_volume(report):
    est = estimate_volume(pr_box_model(), CHSH, 10**6, SEED)
    ok = abs(est.v - 0.180717) <= 3 * est.stderr + 0.001
    report(2, ok, f"v={est.v:.6f} target=0.180717 tol={3 * est.stderr + 0.001:.2e}")


def test_3_i3322_volumes(report):
    s = estimate_volume(singlet_model(), I3322, 10**7, SEED)
    p = estimate_volume(pr_box_model(), I3322, 10**6, SEED)
    ok_s = abs(s.v - 2.17e-3) <= 3 * s.stderr + 2e-4
    ok_p = abs(p.v - 2.69e-2) <= 3 * p.stderr + 1e-3
    report(3, ok_s and ok_p,
           f"singlet v={s.v:.3e} (target 2.17e-3, tol {3 * s.stderr + 2e-4:.1e}); "
           f"pr v={p.v:.3e} (target 2.69e-2, tol {3 * p.stderr + 1e-3:.1e})")


@pytest.mark.parametrize("reference, scenario, samples, target", [
    ("singlet", CHSH, 10**6, 0.934),
    ("pr", CHSH, 10**6, 1.225),
    ("singlet", I3322, 10**7, 0.788),
    ("pr", I3322, 10**6, 1.154),
])
def test_4_crossovers(report, reference, scenario, samples, target):
    ref = singlet_model() if reference == "singlet" else pr_box_model()
    res = find_crossover(lambda_box_model, ref, scenario, (LAMBDA_MIN, LAMBDA_MAX),
                         samples, SEED, tol=0.01)
    ok = abs(res.lambda_star - target) <= 0.02 and res.bracket_width <= 0.01
    report(4, ok, f"{scenario.name} vs {reference}: lambda*={res.lambda_star:.4f} "
                  f"target={target} +-0.02 (N={samples})")


def test_5_maxima(report):
    cfg = coplanar_chsh_config(PI / 18, PI / 9, PI / 6, 0.0)
    worst = max(abs(chsh_value(lambda_box_model(lam), cfg) - 4.0)
                for lam in np.linspace(LAMBDA_MIN, LAMBDA_MAX, 20))
    singlet = search_max_violation(singlet_model(), CHSH, 50, 2000, SEED).value
    boxes = {lam: search_max_violation(lambda_box_model(lam), I3322, 200, 5000, SEED).value
             for lam in (LAMBDA_MIN, 11 * PI / 36, LAMBDA_MAX)}
    ok = (worst <= 1e-12 and abs(singlet - 2 * math.sqrt(2)) <= 1e-3
          and all(abs(v - 8.0) <= 0.05 for v in boxes.values()))
    report(5, ok, f"max |S-4| on pi/18 config={worst:.1e}; singlet CHSH max={singlet:.6f}; "
                  "3322 maxima " + ", ".join(f"lambda={k:.3f}: {v:.5f}" for k, v in boxes.items()))


def test_6_right_edge_ordering(report):
    pr = pr_box_model()
    chsh_edge = sweep_lambda([LAMBDA_MAX], CHSH, 10**6, SEED)[0].estimate
    chsh_pr = estimate_volume(pr, CHSH, 10**6, SEED)
    i_edge = sweep_lambda([LAMBDA_MAX], I3322, 10**6, SEED)[0].estimate
    i_pr = estimate_volume(pr, I3322, 10**6, SEED)
    ratio = i_edge.v / i_pr.v
    ok = chsh_edge.v > chsh_pr.v and i_edge.v > i_pr.v and 1.7 <= ratio <= 2.3
    report(6, ok, f"CHSH {chsh_edge.v:.4f} > {chsh_pr.v:.4f}; 3322 {i_edge.v:.4f} > "
                  f"{i_pr.v:.4f}; ratio={ratio:.3f} in [1.7, 2.3]")


def test_7_nonsignaling(report):
    rng = np.random.default_rng(SEED)
    models = [singlet_model(), pr_box_model()] + [lambda_box_model(l) for l in
                                                  np.linspace(LAMBDA_MIN, LAMBDA_MAX, 5)]
    failures = 0
    for theta in rng.uniform(0.0, PI, 1000):
        for m in models:
            pp, mm, pm, mp = joint_outcome_probabilities(m, float(theta))
            marginals = (pp + pm, mp + mm, pp + mp, pm + mm)
            if any(x != 0.5 for x in marginals) or abs(pp + mm + pm + mp - 1.0) > 1e-15:
                failures += 1
    report(7, failures == 0, f"{failures} failures over 1000 angles x {len(models)} models")


def _coplanar_mc(model, samples, seed):
    alphas = 2 * PI * uniform_draws(seed, np.arange(samples), 3)
    free = np.stack([np.sin(alphas), np.zeros_like(alphas), np.cos(alphas)], axis=-1)
    values = functional_from_angles(model, CHSH, batch_pair_angles(free, CHSH_PAIRS))
    v = np.count_nonzero(violates(CHSH, values)) / samples
    return v, math.sqrt(v * (1 - v) / samples)


@pytest.mark.parametrize("name", ["singlet", "pr"])
def test_8_coplanar_oracle(report, name):
    model, oracle = ((singlet_model(), singlet_oracle) if name == "singlet"
                     else (pr_box_model(), pr_branches))
    v_grid = coplanar_grid_fraction(oracle, 400)
    grid_err = abs(v_grid - coplanar_grid_fraction(oracle, 200))
    v_mc, se = _coplanar_mc(model, 10**6, SEED)
    combined = math.hypot(se, grid_err)
    ok = abs(v_grid - v_mc) <= 3 * combined
    report(8, ok, f"{name}: grid(400^3)={v_grid:.5f} mc={v_mc:.5f} "
                  f"|diff|={abs(v_grid - v_mc):.1e} <= 3x{combined:.1e}")


def test_9_determinism(report, capsys):
    a = estimate_volume(lambda_box_model(1.0), I3322, 10**6, SEED, threads=1)
    b = estimate_volume(lambda_box_model(1.0), I3322, 10**6, SEED, threads=4)
    counts = []
    for threads in ("1", "3"):
        assert main(["estimate", "--model", "pr", "--scenario", "chsh", "--samples", "500000",
                     "--seed", str(SEED), "--threads", threads]) == 0
        counts.append(json.loads(capsys.readouterr().out)["result"]["violations"])
    ok = a.violations == b.violations and counts[0] == counts[1]
    report(9, ok, f"library {a.violations} == {b.violations}; CLI {counts[0]} == {counts[1]}")


def test_10_node_form(report):
    grid = np.linspace(0.0, PI, 10_000)
    err = np.max(np.abs(eval_correlation(pr_box_model(), grid) - pr_branches(grid)))
    for lam in np.linspace(LAMBDA_MIN, LAMBDA_MAX, 20):
        err = max(err, np.max(np.abs(eval_correlation(lambda_box_model(lam), grid)
                                     - lambda_branches(grid, lam))))
    report(10, err <= 1e-12, f"max deviation from branch formulas {err:.1e}")
