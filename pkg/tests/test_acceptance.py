"""End-to-end acceptance criteria A1-A10.

Each test prints one ``A<k> PASS|FAIL`` line with the measured quantity and
wall time, then asserts on the same outcome.
"""
import io
import json
import math
import time

import pytest

from kuostab import closedform as cf
from kuostab import verify
from kuostab.cli import main
from kuostab.errors import ContourAmbiguous
from kuostab.profiles import sinus_profile
from kuostab.slsolver import Compactified, Finite, SLProblem, eigenvalues
from kuostab.stability import (boundary_sweep, capital_lambda, find_beta_minus,
                               find_unstable_mode, index_counts, neutral_nonresonant_census)
from kuostab.stability.boundary import TABLE1_BETAS

from reference_rows import BOUNDARY_ROWS, row_matches

PI = math.pi
PI2 = PI * PI
GRID_BETAS = (-0.45, -0.3, -0.1, 0.1, 0.25, 0.4)
GRID_ALPHA2 = (0.2, 0.5, 0.8, 1.05)


def rel_dev(v, ref):
    # lambda_2 on the regular curve is exactly 0
    return abs(v - ref) / max(abs(ref), 1.0)


def report(capsys, label, ok, detail, elapsed=None, limit=None):
    if limit is not None:
        ok = ok and elapsed < limit
    t = ""
    if elapsed is not None:
        t = f"  [{elapsed:.1f} s" + ("]" if limit is None else f" < {limit:.0f} s]")
    with capsys.disabled():
        print(f"\n{label} {'PASS' if ok else 'FAIL'}  {detail}{t}")
    return ok


def test_a1_closed_form_regression(capsys):
    s = sinus_profile()
    t0 = time.perf_counter()
    worst = []
    for beta in (0.0, 1.3, -2.0):
        lam = eigenvalues(SLProblem(s, beta, Finite(s.u_beta(beta))), 3, 1e-10)
        for n, v in enumerate(lam, 1):
            worst.append((rel_dev(v, cf.lambda_regular(n)), f"U_beta beta={beta} n={n}"))
    for ct in (1e-6, -1e-6):
        lam = eigenvalues(SLProblem(s, 0.0, Compactified(ct)), 3, 1e-10)
        for n, v in enumerate(lam, 1):
            worst.append((rel_dev(v, cf.lambda_infinity(n)), f"ctilde={ct} n={n}"))
    elapsed = time.perf_counter() - t0
    bad = [w for w in worst if w[0] > 1e-8]
    detail = "max rel dev %.3g" % max(w[0] for w in worst)
    if bad:
        detail += "; over 1e-8: " + ", ".join(f"{name} ({d:.2g})" for d, name in bad)
    assert report(capsys, "A1", not bad, detail, elapsed, 5.0)


def test_a2_beta_minus(capsys):
    t0 = time.perf_counter()
    bm = find_beta_minus()
    elapsed = time.perf_counter() - t0
    ok = abs(bm - (-4.06867)) <= 5e-3
    assert report(capsys, "A2", ok, f"beta_- = {bm:.6f}", elapsed, 120.0)


def test_a3_table_reproduction(capsys):
    t0 = time.perf_counter()
    pts = boundary_sweep(TABLE1_BETAS)
    elapsed = time.perf_counter() - t0
    bad = []
    for p, row in zip(pts, BOUNDARY_ROWS):
        bad.extend(f"beta={row[0]}: {m}" for m in row_matches(p, row))
    ok = len(pts) == 14 and not bad
    assert report(capsys, "A3", ok, f"{14 - len(bad)}/14 rows match" + (f"; {bad}" if bad else ""),
                  elapsed, 600.0)


@pytest.fixture(scope="module")
def grid():
    """Per-cell results on the dichotomy grid, with timing."""
    t0 = time.perf_counter()
    cells = []
    for fb in GRID_BETAS:
        beta = fb * PI2
        lam = capital_lambda(beta).capital_lambda
        for fa in GRID_ALPHA2:
            a2 = fa * 0.75 * PI2
            cell = {"beta": beta, "a2": a2, "Lambda": lam, "ambiguous": False}
            try:
                cell["ic"] = index_counts(math.sqrt(a2), beta)
            except ContourAmbiguous:
                cell["ambiguous"] = True
            cells.append(cell)
    return cells, time.perf_counter() - t0


def test_a4_stability_dichotomy(capsys, grid):
    cells, elapsed = grid
    ambiguous = sum(c["ambiguous"] for c in cells)
    wrong = []
    for c in cells:
        if c["ambiguous"]:
            continue
        want = 1 if c["Lambda"] < c["a2"] < 0.75 * PI2 else 0
        if c["ic"].k_unstable != want:
            wrong.append((round(c["beta"] / PI2, 3), round(c["a2"] / (0.75 * PI2), 3)))
    ok = not wrong and ambiguous <= 2
    detail = f"{len(cells) - ambiguous - len(wrong)}/{len(cells) - ambiguous} cells agree, {ambiguous} ambiguous"
    if wrong:
        detail += f"; mismatched {wrong}"
    assert report(capsys, "A4", ok, detail, elapsed, 600.0)


def test_a5_index_formula(capsys, grid):
    cells, _ = grid
    checked = [c for c in cells if not c["ambiguous"]]
    bad = [(round(c["beta"] / PI2, 3), round(c["a2"] / (0.75 * PI2), 3)) for c in checked
           if not c["ic"].holds]
    assert report(capsys, "A5", not bad and checked,
                  f"index holds on {len(checked) - len(bad)}/{len(checked)} cells" + (f"; fails {bad}" if bad else ""))


def test_a6_mode_identities(capsys, grid):
    cells, _ = grid
    t0 = time.perf_counter()
    worst = {"identity": 0.0, "semicircle": math.inf, "h1": math.inf, "h2": math.inf, "lform": 0.0}
    modes = 0
    for c in cells:
        if c["ambiguous"] or c["ic"].k_unstable == 0:
            continue
        m = find_unstable_mode(math.sqrt(c["a2"]), c["beta"])
        assert m is not None, c
        modes += 1
        r = m.residuals
        worst["identity"] = max(worst["identity"], abs(r.identity2))
        worst["semicircle"] = min(worst["semicircle"], r.semicircle_slack)
        worst["h1"] = min(worst["h1"], r.h1_slack)
        worst["h2"] = min(worst["h2"], r.h2_slack)
        worst["lform"] = max(worst["lform"], abs(r.lform))
    ok = (modes > 0 and worst["identity"] < 1e-6 and worst["semicircle"] >= -1e-8
          and worst["h1"] >= -1e-8 and worst["h2"] >= -1e-8 and worst["lform"] < 1e-5)
    detail = f"{modes} modes; " + ", ".join(f"{k} {v:.3g}" for k, v in worst.items())
    assert report(capsys, "A6", ok, detail, time.perf_counter() - t0)


def test_a7_derivative_formulas(capsys):
    t0 = time.perf_counter()
    checks = verify.derivative_checks()
    signs = verify.derivative_sign_pattern()
    elapsed = time.perf_counter() - t0
    failed = [c.name for c in checks + signs if not c.passed]
    ok = len(checks) == 16 and len(signs) == 5 and not failed
    detail = f"{len(checks) // 2} points x 2 formulas, {len(signs)} sign samples"
    if failed:
        detail += f"; failed {failed}"
    assert report(capsys, "A7", ok, detail, elapsed)


def test_a8_neutral_census(capsys):
    t0 = time.perf_counter()
    b2 = 0.4 * PI2
    l0 = cf.lambda_minus_at_endpoints(b2).at0
    lam2 = capital_lambda(b2).capital_lambda
    b4 = -0.45 * PI2
    lam4 = capital_lambda(b4).capital_lambda
    samples = [("II", math.sqrt(0.5 * (l0 + lam2)), b2, 2, lambda c: c < 0),
               ("IV", math.sqrt(0.5 * lam4), b4, 2, lambda c: c > 1),
               ("III", math.sqrt(0.5 * l0), b2, 1, None)]
    found, ok = [], True
    for label, alpha, beta, want, side in samples:
        ent = neutral_nonresonant_census(alpha, beta)
        n = len(ent) if side is None else sum(1 for e in ent if side(e.c))
        ok &= n == want and (side is None or len(ent) == want)
        found.append(f"{label}: {n} (want {want})")
    assert report(capsys, "A8", ok, "; ".join(found), time.perf_counter() - t0)


def test_a9_zero_wave_number(capsys):
    t0 = time.perf_counter()
    m = find_unstable_mode(0.0, -0.3 * PI2)
    ok = m is not None and m.c.imag > 0 and m.residuals.ode < 1e-6
    detail = "no mode" if m is None else f"c = {m.c:.8g}, ode residual {m.residuals.ode:.2g}"
    assert report(capsys, "A9", ok, detail, time.perf_counter() - t0)


def test_a10_property_suites_and_full_verify(capsys):
    t0 = time.perf_counter()
    out = io.StringIO()
    code = main(["verify"], stdout=out)
    elapsed = time.perf_counter() - t0
    doc = json.loads(out.getvalue())
    by_suite = {}
    for d in doc["details"]:
        suite = d["name"].split(":", 1)[0]
        by_suite.setdefault(suite, []).append(d["passed"])
    required = ("specfun", "slsolver", "cli")
    req_ok = all(by_suite.get(s) and all(by_suite[s]) for s in required)
    other_fail = sorted(d["name"] for d in doc["details"] if not d["passed"])
    detail = (f"{', '.join(required)} {'all pass' if req_ok else 'FAIL'}; full verify "
              f"{doc['passed']} passed / {doc['failed']} failed (exit {code})")
    if other_fail:
        detail += f"; failing checks {other_fail}"
    assert report(capsys, "A10", req_ok, detail, elapsed, 1200.0)
