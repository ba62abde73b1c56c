"""Acceptance criteria, each checked at its stated tolerance.

Every test prints one ``criterion N: PASS|FAIL`` line; under pytest the
lines are also collected into a summary section.  Run directly with
``python3 tests/test_acceptance.py`` for the lines alone.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction

import numpy as np

from freelukacs.laws import (
    FreeBinomialLaw,
    FreePoissonLaw,
    bernoulli_power,
    fb_cauchy_closed,
    fb_cumulants,
    fb_measure,
    fb_moments,
    mp_cumulants,
    mp_measure,
    mp_moments,
)
from freelukacs.lukacs import (
    build_generating_bundle,
    compute_mixed_sequences,
    conditional_moment_check,
    forward_check,
    roundtrip_characterization,
    solve_inverse,
)
from freelukacs.matrixlab import (
    LukacsEnsemble,
    exact_limits,
    mixed_words,
    spectral_histogram,
    target_measures,
    trace_mixed_moment,
)
from freelukacs.ncpart import catalan, cumulant_sequence, enumerate_nc, moment_sequence, nc_moment_sum
from freelukacs.transforms import (
    cauchy_from_r,
    cauchy_quadrature,
    crr_residual,
    mgf_s_check,
    r_from_cumulants,
    s_from_r,
    str_residual,
)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []

GRID = [(Fraction(1), Fraction(1), Fraction(1)), (Fraction(2), Fraction(1), Fraction(1, 2)),
        (Fraction(2), Fraction(3), Fraction(1))]


def report(n: int, ok: bool, detail: str) -> bool:
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def laws(s, t, a):
    u = FreeBinomialLaw(s, t)
    return u, FreePoissonLaw(u.total, a)


def test_criterion_01_catalan():
    start = time.perf_counter()
    counts = [len(enumerate_nc(k)) for k in range(1, 9)]
    elapsed = time.perf_counter() - start
    ok = counts == [1, 2, 5, 14, 42, 132, 429, 1430] and elapsed < 5
    assert report(1, ok, f"|NC(k)|, k=1..8 = {counts} in {elapsed:.2f}s (limit 5s)")


def test_criterion_02_moment_cumulant_roundtrip():
    rng = random.Random(2)
    trials = 0
    ok = True
    for order in range(1, 11):
        for _ in range(20):
            kappa = [Fraction(rng.randint(-50, 50), rng.randint(1, 12)) for _ in range(order)]
            m = [Fraction(rng.randint(-50, 50), rng.randint(1, 12)) for _ in range(order)]
            ok &= cumulant_sequence(moment_sequence(kappa)) == kappa
            ok &= moment_sequence(cumulant_sequence(m)) == m
            trials += 1
    assert report(2, ok, f"{trials} random rational sequences, orders 1..10, both directions exact")


def test_criterion_03_free_poisson_catalan():
    law = FreePoissonLaw(1, 1)
    m = mp_moments(law, 10)
    oracle = [nc_moment_sum(mp_cumulants(law, 10), n) for n in range(1, 11)]
    ok = m == oracle == [catalan(n) for n in range(1, 11)]
    assert report(3, ok, f"MP(1,1) m_1..m_10 = {[int(x) for x in m]} (NC-enumeration oracle agrees)")


def test_criterion_04_transform_identities():
    K = 10
    worst = {}
    for name, cum in (("MP(2,1)", mp_cumulants(FreePoissonLaw(2, 1), K + 1)),
                      ("fb(1,1)", fb_cumulants(FreeBinomialLaw(1, 1), K + 1))):
        r = r_from_cumulants(cum)
        s = s_from_r(r)
        m = cauchy_from_r(r)
        worst[name] = (str_residual(r, s), crr_residual(r, m), mgf_s_check(m[1:], s))
    ok = all(v == 0 for res in worst.values() for v in res)
    detail = "; ".join(f"{k}: Str={a} Crr={b} MSr={c}" for k, (a, b, c) in worst.items())
    assert report(4, ok, f"K=10 residuals {detail}")


def test_criterion_05_forward_theorem():
    # stated marginals: kappa_n(X) = alpha^n theta, kappa_n(Y) = alpha^n sigma
    parts = []
    ok = True
    for s, t, a in GRID:
        start = time.perf_counter()
        cert = forward_check(*laws(s, t, a), 6)
        elapsed = time.perf_counter() - start
        mixed_ok = cert.max_mixed_cumulant == 0 and not cert.violations
        stated = (cert.x_cumulants == [a**n * t for n in range(1, 7)]
                  and cert.y_cumulants == [a**n * s for n in range(1, 7)])
        swapped = (cert.x_cumulants == [a**n * s for n in range(1, 7)]
                   and cert.y_cumulants == [a**n * t for n in range(1, 7)])
        ok &= mixed_ok and stated and elapsed < 60
        parts.append(
            f"({s},{t},{a}): mixed=0 {mixed_ok}, X=a^n*theta,Y=a^n*sigma {stated}, "
            f"X=a^n*sigma,Y=a^n*theta {swapped}, {elapsed:.2f}s"
        )
    assert report(5, ok, " | ".join(parts)), (
        "stated marginal labels disagree with the exact cumulants for sigma != theta; "
        "the cumulants match the exchanged labels exactly"
    )


def test_criterion_06_conditional_moments():
    parts = []
    ok = True
    for s, t, a in GRID:
        u, v = laws(s, t, a)
        r1, r2 = conditional_moment_check(u, v, K=8, c1=t * a, c2=t * (t + 1) * a * a)
        broken = conditional_moment_check(u, FreePoissonLaw(v.lam + Fraction(1, 10), a), K=8,
                                          c1=t * a, c2=t * (t + 1) * a * a)
        ok &= r1 == 0 and r2 == 0 and broken[0] != 0 and broken[1] != 0
        parts.append(f"({s},{t},{a}): residuals ({r1},{r2}), lambda+0.1 -> "
                     f"({float(broken[0]):.3g},{float(broken[1]):.3g})")
    assert report(6, ok, "n<=6; " + " | ".join(parts))


def test_criterion_07_proof_identities():
    names = ["AA", "BB", "CC", "equ1h", "equ1hh", "funH", "quadD", "hD"]
    K = 10
    ok = True
    worst = {k: Fraction(0) for k in names}
    for s, t, a in GRID:
        u, v = laws(s, t, a)
        table = compute_mixed_sequences(u, v, K)
        bundle = build_generating_bundle(table, r_from_cumulants(mp_cumulants(v, K + 1)))
        res = bundle.max_residuals()
        for k in names:
            worst[k] = max(worst[k], abs(res[k]))
    ok = all(v == 0 for v in worst.values())
    assert report(7, ok, "K=10, max over grid: " + ", ".join(f"{k}={v}" for k, v in worst.items()))


def test_criterion_08_inverse_theorem():
    sol = solve_inverse(1, 2, 2, 1)
    mp, fb = sol.laws
    laws_ok = (mp.lam, mp.alpha, fb.sigma, fb.theta) == (2, 1, 1, 1)
    g_ok = sol.G_U[1:9] == fb_moments(fb, 8)
    rt = [roundtrip_characterization(s, t, a, K=8) for s, t, a in GRID]
    rt_ok = all(r.exact_match and r.forward_passed for r in rt)
    ok = laws_ok and g_ok and rt_ok
    assert report(8, ok, f"recovered {mp}, {fb}: {laws_ok}; G_U 8 terms exact: {g_ok}; "
                         f"roundtrip on grid exact: {rt_ok}")


def test_criterion_09_law_numerics():
    mp_grid = [FreePoissonLaw(Fraction(1, 2), 1), FreePoissonLaw(2, 1), FreePoissonLaw(3, Fraction(1, 2))]
    fb_vals = [Fraction(3, 5), Fraction(1), Fraction(2), Fraction(3)]
    fb_grid = [FreeBinomialLaw(s, t) for s in fb_vals for t in fb_vals if s + t > 1]
    mass_err = max(abs(mp_measure(l).mass() - 1) for l in mp_grid)
    mass_err = max(mass_err, max(abs(fb_measure(l).mass() - 1) for l in fb_grid))
    mom_err = 0.0
    for law in fb_grid:
        num = fb_measure(law).moments(6)
        mom_err = max(mom_err, max(abs(x - float(y)) for x, y in zip(num, fb_moments(law, 6))))
    points = [complex(x, y) for x in (-1.0, 0.25, 0.5, 0.9, 2.0) for y in (0.5, 1.0, 2.0, 5.0)]
    cauchy_err = 0.0
    for law in fb_grid:
        mu = fb_measure(law)
        cauchy_err = max(cauchy_err, max(abs(fb_cauchy_closed(z, law) - cauchy_quadrature(mu, z)) for z in points))
    ok = mass_err < 1e-8 and mom_err < 1e-7 and cauchy_err < 1e-6
    assert report(9, ok, f"mass {mass_err:.1e} (<1e-8), fb moments {mom_err:.1e} (<1e-7), "
                         f"Cauchy {cauchy_err:.1e} (<1e-6) on {len(points)} points x {len(fb_grid)} laws")


def test_criterion_10_bernoulli_powers():
    half = Fraction(1, 2)
    two = bernoulli_power(half, 2, 8) == fb_moments(FreeBinomialLaw(1, 1), 8)
    three = bernoulli_power(half, 3, 8) == fb_moments(FreeBinomialLaw(Fraction(3, 2), Fraction(3, 2)), 8)
    assert report(10, two and three, f"n=2 vs fb(1,1): {two}; n=3 vs fb(1.5,1.5): {three} (8 terms, exact)")


def test_criterion_11_monte_carlo():
    start = time.perf_counter()
    ens = LukacsEnsemble(200, 1, 1, 1, seed=7)
    assert ens.shapes == (200, 200)
    samples = ens.samples(50)
    targets = target_measures(ens)
    dist = {r: spectral_histogram([s[r] for s in samples], targets[r]).distance for r in "VU"}
    words = mixed_words("UV", 4) + mixed_words("XY", 4)
    limits = exact_limits(ens, words)
    z = {}
    for w in words:
        est = trace_mixed_moment(w, samples)
        z[str(w)] = (est.mean - float(limits[str(w)])) / est.standard_error
    elapsed = time.perf_counter() - start
    worst = max(z, key=lambda k: abs(z[k]))
    ok = dist["V"] < 0.05 and dist["U"] < 0.05 and all(abs(v) <= 3 for v in z.values()) and elapsed < 600
    assert report(11, ok, f"KS V~MP(2,1) {dist['V']:.4f}, U~fb(1,1) {dist['U']:.4f} (<0.05); "
                          f"{len(words)} mixed words, max |z| {abs(z[worst]):.2f} ({worst}) (<=3); "
                          f"{elapsed:.1f}s (<600s)")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
