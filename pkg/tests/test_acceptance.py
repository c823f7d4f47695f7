"""Acceptance criteria 1-9, one PASS/FAIL line each with its runtime.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

import math
import time

import mpmath as mp
import numpy as np
import pytest
import sympy as sp
from scipy import integrate

from conetrace import cross_section, expansion, oracle
from conetrace.conegeom import cone_u
from conetrace.cross_section import Circle, FlatTorus, ProjectiveSpace, Sphere
from conetrace.expansion import (b_direct, c_coefficient, gamma_ratio_asymptotic,
                                 local_resolvent_expansion, mellin_bessel_value,
                                 resolvent_to_heat)
from conetrace.oracle import MIN_EIGENVALUES, compare_report
from conetrace.regint import TaggedFunction, mellin, regularized_integral
from conetrace.specfun import (EULER_GAMMA, bessel_ik_product_deriv, bessel_j_zero,
                               log_bessel_ik)
from conetrace.zeta import ZetaContext, zeta_laurent, zeta_residue_formula

PI = math.pi


def _cold():
    """Drop memoized results so every criterion is timed from scratch."""
    oracle._circle_constant.cache_clear()
    expansion._zeta_at.cache_clear()
    cross_section._spectrum_cached.cache_clear()


def _record(log, k, ok, detail, elapsed, limit):
    in_time = elapsed < limit
    status = "PASS" if ok and in_time else "FAIL"
    line = f"{status} criterion {k}: {detail} [{elapsed:.2f} s, limit {limit:g} s]"
    log.append(line)
    print(line)
    assert ok, line
    assert in_time, line


# ---------------------------------------------------------------- 1

def test_criterion_1_flat_cone_identities(acceptance_log):
    _cold()
    t0 = time.perf_counter()
    worst_c = max(abs(c_coefficient(Sphere(m - 1, 1.0), m)) for m in (2, 3, 4))
    u_exact = all(cone_u(Sphere(m - 1, 1.0), j, r) == 0.0
                  for m in (2, 3, 4) for j in (1, 2) for r in (0.25, 1.0, 3.0))
    elapsed = time.perf_counter() - t0
    ok = worst_c <= 1e-12 and u_exact
    _record(acceptance_log, 1, ok, f"max |c| = {worst_c:.2e} (tol 1e-12), u_1 = u_2 = 0 exactly: "
            f"{u_exact}", elapsed, 1.0)


# ---------------------------------------------------------------- 2

def test_criterion_2_log_coefficient_two_forms(acceptance_log):
    _cold()
    t0 = time.perf_counter()
    cases = [(Circle(g), 2) for g in (PI, 2 * PI, 4 * PI, 1.3)]
    cases += [(Sphere(3, a), 4) for a in (1.0, 2.0)]
    cases += [(FlatTorus(1.0, 1.7), 3), (FlatTorus(1.0, 1.3, 2.0), 4)]
    worst_forms = 0.0
    for model, m in cases:
        c = c_coefficient(model, m)  # raises if the two forms disagree beyond 1e-10
        other = 0.0 if m % 2 else 0.5 * zeta_residue_formula(
            ZetaContext(model, (model.n - 1) / 2), m // 2)
        worst_forms = max(worst_forms, abs(c - other))
    worst_closed = max(abs(c_coefficient(Sphere(3, a), 4) + (a * a - 1) ** 2 / (32 * a))
                       for a in (1.0, 2.0, 0.5, 1.5))
    elapsed = time.perf_counter() - t0
    ok = worst_forms <= 1e-10 and worst_closed <= 1e-10
    _record(acceptance_log, 2, ok, f"forms differ by {worst_forms:.2e}, Sphere(3,a) closed form "
            f"off by {worst_closed:.2e} (tol 1e-10)", elapsed, 1.0)


# ---------------------------------------------------------------- 3

def test_criterion_3_d_independence(acceptance_log):
    _cold()
    t0 = time.perf_counter()
    worst = max(abs(b_direct(Circle(g), 2, d=2) - b_direct(Circle(g), 2, d=3))
                for g in (PI, 2 * PI, 4 * PI))
    elapsed = time.perf_counter() - t0
    _record(acceptance_log, 3, worst <= 1e-8, f"max |b(d=2) - b(d=3)| = {worst:.2e} (tol 1e-8)",
            elapsed, 30.0)


# ---------------------------------------------------------------- 4

def test_criterion_4_oracle_adjudication(acceptance_log):
    _cold()
    t0 = time.perf_counter()
    rep = compare_report([PI, 2 * PI, 4 * PI])
    elapsed = time.perf_counter() - t0
    rows = rep["rows"]
    statuses_ok = all(r["status"] == "ok" for r in rows)
    worst = max(abs(r["deltas"]["direct_vs_oracle"]) for r in rows) if statuses_ok else math.inf
    enough = statuses_ok and all(r["eigenvalues"] >= MIN_EIGENVALUES for r in rows)
    full = [r for r in rows if r.get("gates", {}).get("formula_claim_zero") is not None]
    claim_pass = bool(full) and full[0]["gates"]["formula_claim_zero"]
    noted = any('"is equal to zero"' in n for n in rep["notes"])
    # the claim gate is reported; if it fails while the oracle gate passes, the erratum note is required
    ok = (statuses_ok and worst <= 2e-3 and enough and rep["all_direct_vs_oracle_pass"]
          and (claim_pass or noted))
    counts = ",".join(str(r.get("eigenvalues")) for r in rows)
    bf = full[0]["b_formula"] if full else float("nan")
    _record(acceptance_log, 4, ok,
            f"max |b_direct - oracle_b| = {worst:.2e} (tol 2e-3), eigenvalues per angle {counts}; "
            f"claim gate b_formula(2pi) = {bf:.6g}: {'pass' if claim_pass else 'fail'}, "
            f"erratum note present: {noted}", elapsed, 120.0)


# ---------------------------------------------------------------- 5

BUILTINS = [Circle(2 * PI), Circle(PI), Circle(4 * PI), Sphere(2, 1.0), Sphere(2, 0.7),
            Sphere(3, 1.0), Sphere(3, 2.0), ProjectiveSpace(2, 1.0), ProjectiveSpace(3, 1.0),
            FlatTorus(1.0, 1.3), FlatTorus(1.0, 1.0, 2.0)]


def test_criterion_5_zeta_machinery(acceptance_log):
    _cold()
    t0 = time.perf_counter()
    worst_res = 0.0
    for model in BUILTINS:
        ctx = ZetaContext(model, (model.n - 1) / 2)
        for l in range(3):
            v = zeta_laurent(ctx, model.n / 2 - l)
            worst_res = max(worst_res, abs(v.res1 - zeta_residue_formula(ctx, l)))
    ctx = ZetaContext(Circle(2 * PI))
    a, b = zeta_laurent(ctx, -0.5), zeta_laurent(ctx, 0.5)
    worst_val = max(abs(a.res0 + 1 / 6), abs(b.res1 - 1), abs(b.res0 - 2 * EULER_GAMMA))
    elapsed = time.perf_counter() - t0
    ok = worst_res <= 1e-6 and worst_val <= 1e-8
    _record(acceptance_log, 5, ok, f"residues off by {worst_res:.2e} (tol 1e-6), circle values off "
            f"by {worst_val:.2e} (tol 1e-8)", elapsed, 10.0)


# ---------------------------------------------------------------- 6

def test_criterion_6_special_functions(acceptance_log):
    _cold()
    t0 = time.perf_counter()
    worst_w = 0.0
    for nu in np.linspace(0.0, 300.0, 20):
        for x in np.geomspace(1e-2, 200.0, 20):
            li0, lk0 = log_bessel_ik(float(nu), float(x))
            li1, lk1 = log_bessel_ik(float(nu) + 1, float(x))
            worst_w = max(worst_w, abs(x * (math.exp(li1 + lk0) + math.exp(li0 + lk1)) - 1.0))
    worst_z = max(abs(bessel_j_zero(0.5, k) - k * PI) for k in range(1, 51))
    # 40-digit log-gamma: at s = 0 the bound nu**(-2J) sits below double-precision roundoff
    fitted_c = 0.0
    for J in (1, 2, 3):
        for nu in np.geomspace(5.0, 500.0, 25):
            for s in np.linspace(-0.2, 0.2, 17):
                with mp.workdps(40):
                    exact = float(mp.exp(mp.loggamma(mp.mpf(nu) - mp.mpf(s) + 1)
                                         - mp.loggamma(mp.mpf(nu) + mp.mpf(s))))
                rel = abs(gamma_ratio_asymptotic(float(nu), float(s), J) / exact - 1)
                fitted_c = max(fitted_c, rel / (s * s + nu ** (-2 * J)))
    elapsed = time.perf_counter() - t0
    ok = worst_w <= 1e-8 and worst_z <= 1e-10 and fitted_c <= 10
    _record(acceptance_log, 6, ok, f"Wronskian {worst_w:.2e} (tol 1e-8), j_(1/2,k) - k pi "
            f"{worst_z:.2e} (tol 1e-10), Gamma-ratio C = {fitted_c:.3g} (limit 10)", elapsed, 5.0)


# ---------------------------------------------------------------- 7

def test_criterion_7_mellin_closed_form(acceptance_log):
    _cold()
    t0 = time.perf_counter()
    worst = 0.0
    for nu, d, p in [(1.0, 1, -0.5), (2.0, 2, 0.3), (0.5, 1, -0.2), (3.0, 3, 1.5), (1.5, 2, 1.0)]:
        f = lambda x: x**p * bessel_ik_product_deriv(nu, x, d)
        q = (integrate.quad(f, 0, 1, limit=200, epsabs=1e-14)[0]
             + integrate.quad(f, 1, math.inf, limit=200, epsabs=1e-14)[0])
        worst = max(worst, abs(mellin_bessel_value(nu, d, p).res0 - q))
    elapsed = time.perf_counter() - t0
    _record(acceptance_log, 7, worst <= 1e-8, f"max |closed form - quadrature| = {worst:.2e} "
            "(tol 1e-8) at five points", elapsed, 5.0)


# ---------------------------------------------------------------- 8

def _exp_family(split=1.0):
    def f1_x2(x):
        if x < 1e-3:
            return 0.5 - x / 6 + x * x / 24
        return (math.expm1(-x) + x) / (x * x)
    exp_decay = TaggedFunction(f1=lambda x: math.exp(-x), f2=lambda x: math.exp(-x),
                               p=1.0, q=20.0, split=split)
    exp_x = TaggedFunction(small_terms=[(-1.0, 0, 1.0)],
                           f1=lambda x: math.expm1(-x) / x if x > 0 else -1.0,
                           f2=lambda x: math.exp(-x) / x, p=1.0, q=20.0, split=split)
    exp_x2 = TaggedFunction(small_terms=[(-2.0, 0, 1.0), (-1.0, 0, -1.0)], f1=f1_x2,
                            f2=lambda x: math.exp(-x) / (x * x), p=1.0, q=20.0, split=split)
    return exp_decay, exp_x, exp_x2


def test_criterion_8_regularized_integral(acceptance_log):
    _cold()
    t0 = time.perf_counter()
    fam = _exp_family()
    expected = (1.0, -EULER_GAMMA, EULER_GAMMA - 1.0)
    worst_ex = max(abs(regularized_integral(f) - e) for f, e in zip(fam, expected))
    worst_split = 0.0
    for split in (0.3, 2.0, 5.0):
        for f, g in zip(fam, _exp_family(split)):
            for s in (1.0, 1.4, 2.5):
                a, b = mellin(f, s), mellin(g, s)
                worst_split = max(worst_split, abs(a.res0 - b.res0), abs(a.res1 - b.res1))
    rng = np.random.default_rng(7)
    worst_lin = 0.0
    for alpha, beta in rng.uniform(-3, 3, size=(25, 2)):
        lhs = regularized_integral(float(alpha) * fam[1] + fam[2] * float(beta))
        rhs = alpha * regularized_integral(fam[1]) + beta * regularized_integral(fam[2])
        worst_lin = max(worst_lin, abs(lhs - rhs))
    elapsed = time.perf_counter() - t0
    ok = worst_ex <= 1e-9 and worst_split <= 1e-10 and worst_lin <= 1e-10
    _record(acceptance_log, 8, ok, f"examples off by {worst_ex:.2e} (tol 1e-9), split spread "
            f"{worst_split:.2e}, linearity defect {worst_lin:.2e}", elapsed, 2.0)


# ---------------------------------------------------------------- 9

def test_criterion_9_resolvent_heat_round_trip(acceptance_log):
    _cold()
    t0 = time.perf_counter()
    S, u2 = sp.symbols("Scal u2")
    u = [sp.Integer(1), S / 6, u2]
    checked, exact = [], True
    for m in (2, 3, 4):
        for d in (2, 3):
            if not d > m / 2:
                continue  # the resolvent power must exceed m/2
            terms = local_resolvent_expansion(u, m, d)
            for j, term in enumerate(terms):
                (h,) = resolvent_to_heat(term, d)
                exact &= sp.simplify(h.amplitude - (4 * sp.pi) ** sp.Rational(-m, 2) * u[j]) == 0
                exact &= sp.simplify(h.power - (j - sp.Rational(m, 2))) == 0
            checked.append((m, d))
    elapsed = time.perf_counter() - t0
    _record(acceptance_log, 9, bool(exact), f"exact for (m, d) in {checked}; (4, 2) violates "
            "d > m/2", elapsed, 1.0)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
