"""Self-check suites run by `kuostab verify`.

Each suite returns a list of Check records.  The checks restate the
library's documented invariants against independent computations
(quadrature, finite differences, explicit formulas).
"""
from dataclasses import asdict, dataclass

import math

import numpy as np
from scipy.integrate import quad

from . import closedform as cf
from . import specfun as sf
from .errors import ContourAmbiguous
from .profiles import check_class_k_plus, sinus_profile, tanh_profile
from .slsolver import (INFINITY, Compactified, Finite, SLProblem, dlambda_dbeta, dlambda_dc,
                       eigenfunction, eigenvalues)

PI = math.pi
PI2 = PI * PI


@dataclass
class Check:
    name: str
    passed: bool
    value: str = ""


def _chk(name, ok, value=""):
    return Check(name, bool(ok), str(value))


def _rel(a, b):
    return abs(a - b) / max(1e-300, abs(b))


# --------------------------------------------------------------------------- specfun

def suite_specfun():
    out = []
    out.append(_chk("ln_gamma(0.5)", abs(sf.ln_gamma(0.5) - 0.5 * math.log(PI)) < 1e-14))
    out.append(_chk("ln_gamma(5)", abs(sf.ln_gamma(5.0) - math.log(24.0)) < 1e-13))
    out.append(_chk("ln_gamma(1)", abs(sf.ln_gamma(1.0)) < 1e-15))
    xs = np.linspace(0.1, 50, 400)
    err = max(abs(sf.ln_gamma(x + 1) - sf.ln_gamma(x) - math.log(x)) for x in xs)
    out.append(_chk("ln_gamma recurrence", err < 1e-12, f"{err:.3g}"))
    v = sf.hyp2f1(sf.HypArgs(1, 1, 2, 0.5))
    out.append(_chk("2F1(1,1;2;1/2)", _rel(v, 2 * math.log(2)) < 1e-12, f"{v:.15g}"))
    poly = 1 - (6 / 1.5) * 0.3 + ((-2) * (-1) * 3 * 4 / (1.5 * 2.5)) * 0.09 / 2
    out.append(_chk("2F1 terminating", _rel(sf.hyp2f1(sf.HypArgs(-2, 3, 1.5, 0.3)), poly) < 1e-14))
    rng = np.random.default_rng(12345)
    worst = 0.0
    n = 0
    while n < 200:
        a, b = rng.uniform(-3, 3, 2)
        c = rng.uniform(0.6, 4)
        z = rng.uniform(0.05, 0.95)
        if c - a - b <= 0.1:
            continue
        d = sf.hyp2f1_direct(a, b, c, z)
        e = sf.hyp2f1_euler(a, b, c, z)
        worst = max(worst, abs(d - e) / max(abs(d), 1e-300))
        n += 1
    out.append(_chk("2F1 direct vs Euler", worst < 1e-10, f"{worst:.3g}"))
    out.append(_chk("gauss_at_one(0,b,c)", sf.gauss_at_one(0.0, 1.3, 2.2) == 1.0))
    out.append(_chk("gauss_at_one(-1,1,3)", _rel(sf.gauss_at_one(-1.0, 1.0, 3.0), 2 / 3) < 1e-13))
    near = sf.hyp2f1(sf.HypArgs(0.3, 0.4, 2.0, 1 - 1e-6), tol=1e-7)
    out.append(_chk("gauss_at_one vs series near 1",
                    _rel(sf.gauss_at_one(0.3, 0.4, 2.0), near) < 1e-4))
    for s_, ref in ((0, 2.0), (2, 1.0), (1, 4 / PI)):
        out.append(_chk(f"C_{s_}", _rel(sf.cos_power_integral(s_), ref) < 1e-13))
    for s_ in (-0.5, 0.5, 1.7, 3.2):
        q = quad(lambda y: math.cos(PI * y / 2) ** s_, -1, 1, epsabs=0, epsrel=1e-12, limit=200)[0]
        out.append(_chk(f"C_{s_} vs quadrature", _rel(sf.cos_power_integral(s_), q) < 1e-8))
    out.append(_chk("C_s infinite branch", sf.is_infinite(sf.cos_power_integral(-1.0))))
    return out


# --------------------------------------------------------------------------- profiles

def suite_profiles():
    out = []
    rng = np.random.default_rng(7)
    h = 1e-5
    for prof in (sinus_profile(), tanh_profile()):
        ys = rng.uniform(prof.y1 + 2 * h, prof.y2 - 2 * h, 64)
        worst = 0.0
        for f, df in ((prof.U, prof.dU), (prof.dU, prof.d2U), (prof.d2U, prof.d3U)):
            fd = (f(ys + h) - f(ys - h)) / (2 * h)
            ex = df(ys)
            worst = max(worst, float(np.max(np.abs(fd - ex) / np.maximum(np.abs(ex), 1.0))))
        out.append(_chk(f"{prof.name} derivative consistency", worst < 1e-6, f"{worst:.3g}"))
    s = sinus_profile()
    out.append(_chk("sinus U(0)=1", s.U(0.0) == 1.0))
    out.append(_chk("sinus U(+-1)=0", abs(s.U(1.0)) < 1e-30 and abs(s.U(-1.0)) < 1e-30))
    out.append(_chk("sinus K_2(0.37)", _rel(s.k_beta(2.0, 0.37), PI2) < 1e-15))
    ys = np.linspace(-1, 1, 4001)
    worst = 0.0
    for beta in (-4.0, -1.0, 0.0, 0.7, 3.3):
        ub = s.u_beta(beta)
        m = np.abs(s.U(ys) - ub) > 1e-12
        k = (beta - s.d2U(ys[m])) / (s.U(ys[m]) - ub)
        sel = np.abs(s.U(ys[m]) - ub) > 1e-6
        worst = max(worst, float(np.max(np.abs(k[sel] - PI2) / PI2)))
    out.append(_chk("sinus K_beta == pi^2 away from U_beta", worst < 1e-9, f"{worst:.3g}"))
    r = check_class_k_plus(s, 0.0, 1024)
    out.append(_chk("class K+ beta=0", r.ok and _rel(r.k_min, PI2) < 1e-6 and _rel(r.k_max, PI2) < 1e-6))
    r = check_class_k_plus(s, -PI2 / 2, 1024)
    out.append(_chk("class K+ beta=-pi^2/2", r.ok and r.u_beta == 1.0))
    t = tanh_profile()
    oks = [check_class_k_plus(t, b, 256).ok for b in np.linspace(t.upp_min, t.upp_max, 7)]
    out.append(_chk("tanh class K+", all(oks)))
    return out


# --------------------------------------------------------------------------- slsolver

def suite_slsolver(tol=1e-9):
    out = []
    s = sinus_profile()
    lam = eigenvalues(SLProblem(s, 1.3, Finite(s.u_beta(1.3))), 3, tol)
    ref = [cf.lambda_regular(n) for n in (1, 2, 3)]
    out.append(_chk("regular curve values", all(abs(a - b) < 1e-8 * max(1, abs(b)) for a, b in zip(lam, ref))))
    lam = eigenvalues(SLProblem(s, 0.0, INFINITY), 2, tol)
    out.append(_chk("infinity values", all(abs(a - b) < 1e-9 * b for a, b in zip(lam, (PI2 / 4, PI2)))))
    ordered = True
    nodes_ok = True
    for beta, c in ((0.0, 2.0), (0.4 * PI2, -0.5), (-0.4 * PI2, 1.3), (0.2 * PI2, -0.01)):
        pr = SLProblem(s, beta, Finite(c))
        lam = eigenvalues(pr, 4, tol)
        ordered &= all(a < b for a, b in zip(lam, lam[1:]))
        for n in (1, 2, 3):
            nodes_ok &= eigenfunction(pr, n, tol).nodes == n - 1
    out.append(_chk("eigenvalue ordering", ordered))
    out.append(_chk("node law", nodes_ok))
    betas = np.linspace(-0.45, 0.45, 5) * PI2
    mono = True
    for c in (-2.0, -0.7, -0.2, -0.05, -0.01):
        v = [eigenvalues(SLProblem(s, b, Finite(c)), 1, tol)[0] for b in betas]
        mono &= all(a > b for a, b in zip(v, v[1:]))
    for c in (1.01, 1.05, 1.2, 1.7, 3.0):
        v = [eigenvalues(SLProblem(s, b, Finite(c)), 1, tol)[0] for b in betas]
        mono &= all(a < b for a, b in zip(v, v[1:]))
    out.append(_chk("monotonicity in beta", mono))
    low = True
    for beta in np.linspace(-0.5, 0.5, 5) * PI2:
        for c in (-5.0, -0.3, 1.2, 4.0):
            lam = eigenvalues(SLProblem(s, beta, Finite(c)), 3, tol)
            low &= all(v > cf.lambda_regular(n) for n, v in enumerate(lam, 1))
    out.append(_chk("lower bound (n^2/4-1) pi^2", low))
    out.extend(derivative_checks(tol))
    return out


def suite_limits(tol=1e-9):
    """Limits of lambda_1 as c runs to infinity and to the wall value 0."""
    s = sinus_profile()
    out = []
    for ct in (1e-3, -1e-3):
        v = eigenvalues(SLProblem(s, 0.0, Compactified(ct)), 1, tol)[0]
        dev = abs(v - PI2 / 4)
        out.append(_chk(f"lambda_1 at ctilde={ct} within 1e-3 of pi^2/4", dev < 1e-3, f"{dev:.6g}"))
    beta = 0.2 * PI2
    target = cf.lambda_c0(beta, 1)
    d3 = abs(eigenvalues(SLProblem(s, beta, Finite(-1e-3)), 1, tol)[0] - target)
    d4 = abs(eigenvalues(SLProblem(s, beta, Finite(-1e-4)), 1, tol)[0] - target)
    out.append(_chk("singular-limit continuity", d4 < d3, f"{d3:.3g} -> {d4:.3g}"))
    return out


DERIVATIVE_POINTS = ((0.3 * PI2, -0.4, 1), (0.25 * PI2, -0.2, 1), (-0.3 * PI2, 1.3, 1),
                     (0.1 * PI2, 2.0, 2), (-0.45 * PI2, 1.05, 1), (0.45 * PI2, -0.05, 1),
                     (0.0, -1.0, 3), (0.2 * PI2, 3.5, 2))


def derivative_checks(tol=1e-10, points=DERIVATIVE_POINTS):
    """Integral formulas for d lambda/d beta and d lambda/d c against centered differences."""
    s = sinus_profile()
    out = []
    for beta, c, n in points:
        pr = SLProblem(s, beta, Finite(c))
        pair = eigenfunction(pr, n, tol)
        db = dlambda_dbeta(pair, pr)
        dc = dlambda_dc(pair, pr)
        hb = 1e-5
        fb = (eigenvalues(SLProblem(s, beta + hb, Finite(c)), n, tol)[n - 1]
              - eigenvalues(SLProblem(s, beta - hb, Finite(c)), n, tol)[n - 1]) / (2 * hb)
        hc = 1e-5 * max(1e-2, abs(c - (0.0 if c < 0 else 1.0)))
        fc = (eigenvalues(SLProblem(s, beta, Finite(c + hc)), n, tol)[n - 1]
              - eigenvalues(SLProblem(s, beta, Finite(c - hc)), n, tol)[n - 1]) / (2 * hc)
        rb, rc = _rel(db, fb), _rel(dc, fc)
        out.append(_chk(f"dlambda/dbeta beta={beta:.4g} c={c} n={n}", rb < 1e-4, f"{rb:.2g}"))
        out.append(_chk(f"dlambda/dc beta={beta:.4g} c={c} n={n}", rc < 1e-4, f"{rc:.2g}"))
    return out


# --------------------------------------------------------------------------- closedform

SIGN_SAMPLES = (0.1, 0.19, 0.25, 0.35, 0.45)


def derivative_sign_pattern():
    """Branch of the one-sided derivative at c = 0 for the five sample betas."""
    out = []
    for f in SIGN_SAMPLES:
        beta = f * PI2
        v = cf.dlambda1_dc_at_zero(beta)
        if beta <= cf.BETA_PLUS:
            ok = not sf.is_infinite(v) and v <= 0
            want = "<=0"
        elif beta < cf.BETA_CUSP:
            ok = not sf.is_infinite(v) and v > 0
            want = ">0"
        else:
            ok = sf.is_infinite(v)
            want = "+inf"
        out.append(_chk(f"derivative branch at {f} pi^2 ({want})", ok, str(v)))
    return out


def suite_closedform(tol=1e-9):
    out = []
    out.append(_chk("regular n=1", _rel(cf.lambda_regular(1), -0.75 * PI2) < 1e-15))
    out.append(_chk("infinity n=3", _rel(cf.lambda_infinity(3), 2.25 * PI2) < 1e-15))
    out.append(_chk("c0 at beta=0", abs(cf.lambda_c0(0.0, 1)) < 1e-14))
    out.append(_chk("c1 pairing", all(cf.lambda_c1(b, 2 * k - 1) == cf.lambda_c1(b, 2 * k)
                                      for b in (-3.0, 0.0, 2.0) for k in (1, 2, 3))))
    for g in (0.55, 0.7, 0.9):
        _, alpha, beta = cf.snm_curve(g)
        ok = abs(cf.gamma_of_beta(beta) - g) < 1e-12 and abs(cf.lambda_c0(beta, 1) + alpha ** 2) < 1e-12 * PI2
        out.append(_chk(f"SNM consistency gamma={g}", ok))
    _, a, b = cf.snm_curve(math.sqrt(3) / 2)
    out.append(_chk("SNM at sqrt3/2 is beta_plus", abs(b - cf.BETA_PLUS) < 1e-14 and abs(a - PI / 2) < 1e-14))
    out.extend(derivative_sign_pattern())
    # eigenfunction at c = 0 solves the equation (analytic derivatives)
    beta = 0.2 * PI2
    g = cf.gamma_of_beta(beta)
    lam = cf.lambda_c0(beta, 1)
    s = sinus_profile()
    ys = np.linspace(-0.99, 0.99, 101)
    co, si = np.cos(PI * ys / 2), np.sin(PI * ys / 2)
    phi = co ** (2 * g)
    d2 = (PI2 / 4) * (2 * g) * ((2 * g - 1) * co ** (2 * g - 2) * si ** 2 - co ** (2 * g))
    q = (beta - s.d2U(ys)) / s.U(ys)
    res = np.max(np.abs(-d2 - q * phi - lam * phi)) / np.max(np.abs(lam * phi))
    out.append(_chk("eigfun_c0 ODE residual", res < 1e-8, f"{res:.2g}"))
    out.append(_chk("eigfun_c0 matches formula", abs(cf.eigfun_c0(beta, 1, 0.5) - math.cos(PI / 4) ** (2 * g)) < 1e-15))
    for f in (0.1, 0.25, 0.45):
        beta = f * PI2
        target = cf.lambda_c0(beta, 1)
        d5 = abs(eigenvalues(SLProblem(s, beta, Finite(-1e-5)), 1, tol)[0] - target)
        d4 = abs(eigenvalues(SLProblem(s, beta, Finite(-1e-4)), 1, tol)[0] - target)
        out.append(_chk(f"c->0 limit at {f} pi^2", d5 < 1e-2 and d5 < d4, f"{d4:.2g} -> {d5:.2g}"))
    return out


# --------------------------------------------------------------------------- stability

def suite_boundary(tol=1e-9):
    from .stability.boundary import TABLE1_BETAS, capital_lambda, find_beta_minus, side_scan
    out = []
    pts = [capital_lambda(b, tol) for b in TABLE1_BETAS]
    out.append(_chk("Lambda < 3pi^2/4", all(p.capital_lambda < 0.75 * PI2 for p in pts)))
    out.append(_chk("table difference positive", all(p.difference > -2e-5 for p in pts)))
    single = True
    for b in TABLE1_BETAS[1:-1]:
        scan = side_scan(sinus_profile(), b, "left", tol)
        lam = -min(scan.lam_min, scan.end_value)
        hits = [i for i, (_, _, v) in enumerate(scan.samples) if -v >= lam - 10 * tol * max(1, lam)]
        single &= hits == list(range(hits[0], hits[-1] + 1)) if hits else True
    out.append(_chk("single supremum cluster", single))
    a = capital_lambda(-0.48 * PI2, tol).capital_lambda
    b = capital_lambda(-0.44 * PI2, tol).capital_lambda
    out.append(_chk("Lambda decreasing below beta_-", a > b, f"{a:.6g} > {b:.6g}"))
    p = capital_lambda(0.1 * PI2, tol)
    out.append(_chk("endpoint case at 0.1 pi^2", p.case == "endpoint_monotone" and p.c_star == 0.0
                    and abs(p.capital_lambda - cf.lambda_minus_at_endpoints(0.1 * PI2).at0) < 1e-12))
    p = capital_lambda(-0.2 * PI2, tol)
    out.append(_chk("zero case at -0.2 pi^2", p.case == "zero" and p.capital_lambda == 0.0))
    bm = find_beta_minus()
    out.append(_chk("beta_- location", abs(bm + 4.06867) < 5e-3, f"{bm:.6f}"))
    return out


# default (beta, alpha^2) sample grid, in units of pi^2 and 3 pi^2/4
GRID_BETAS = (-0.45, -0.3, -0.1, 0.1, 0.25, 0.4)
GRID_ALPHA2 = (0.2, 0.5, 0.8, 1.05)


def grid_cells(nb=None, na=None):
    """(beta, alpha^2) cells; the default grid when nb, na are not given."""
    if nb is None and na is None:
        betas = [f * PI2 for f in GRID_BETAS]
        a2s = [f * 0.75 * PI2 for f in GRID_ALPHA2]
    else:
        nb, na = nb or len(GRID_BETAS), na or len(GRID_ALPHA2)
        betas = [PI2 * (-0.48 + 0.96 * (i + 0.5) / nb) for i in range(nb)]
        a2s = [0.75 * PI2 * 1.1 * (j + 0.5) / na for j in range(na)]
    return [(b, a2) for b in betas for a2 in a2s]


def suite_index(nb=None, na=None):
    from .stability.boundary import capital_lambda
    from .stability.census import index_counts
    out = []
    ambiguous = 0
    for beta, a2 in grid_cells(nb, na):
        lam = capital_lambda(beta).capital_lambda
        if abs(a2 - lam) < 1e-3 or abs(a2 - 0.75 * PI2) < 1e-3:
            continue
        try:
            ic = index_counts(math.sqrt(a2), beta)
        except ContourAmbiguous:
            ambiguous += 1
            continue
        want = 1 if lam < a2 < 0.75 * PI2 else 0
        ok = ic.holds and ic.k_unstable == want
        out.append(_chk(f"index beta={beta:.4f} a2={a2:.4f}", ok,
                        f"n-={ic.n_minus} ku={ic.k_unstable} ki={ic.k_i_nonpos}"))
    out.append(_chk("ambiguous cells <= 2", ambiguous <= 2, ambiguous))
    return out


def mode_passes(r):
    return (abs(r.identity2) < 1e-6 and r.semicircle_slack >= -1e-8 and r.h1_slack >= -1e-8
            and r.h2_slack >= -1e-8 and abs(r.lform) < 1e-5)


def suite_identities(nb=None, na=None):
    from .stability.dispersion import find_unstable_mode
    out = []
    for beta, a2 in grid_cells(nb, na):
        try:
            m = find_unstable_mode(math.sqrt(a2), beta)
        except ContourAmbiguous:
            continue
        if m is None:
            continue
        r = m.residuals
        out.append(_chk(f"mode beta={beta:.4f} a2={a2:.4f}", mode_passes(r),
                        f"i2={r.identity2:.2g} lf={r.lform:.2g} h1={r.h1_slack:.3g}"))
    m = find_unstable_mode(0.0, -0.3 * PI2)
    out.append(_chk("alpha=0 mode", m is not None and m.c.imag > 0 and m.residuals.ode < 1e-6,
                    "" if m is None else f"c={m.c:.6g}"))
    return out


def census_regions():
    """(label, alpha, beta, expected count, side) samples for the census."""
    from .stability.boundary import capital_lambda
    b2 = 0.4 * PI2
    l0 = cf.lambda_minus_at_endpoints(b2).at0
    lam2 = capital_lambda(b2).capital_lambda
    b4 = -0.45 * PI2
    lam4 = capital_lambda(b4).capital_lambda
    return [("II", math.sqrt(0.5 * (l0 + lam2)), b2, 2, "left"),
            ("IV", math.sqrt(0.5 * lam4), b4, 2, "right"),
            ("III", math.sqrt(0.5 * l0), b2, 1, "left")]


def suite_census():
    from .stability.census import census_mode, neutral_nonresonant_census
    from .stability.dispersion import quadratic_form
    out = []
    for label, alpha, beta, want, side in census_regions():
        ent = neutral_nonresonant_census(alpha, beta)
        on_side = [e for e in ent if (e.c < 0 if side == "left" else e.c > 1)]
        out.append(_chk(f"region {label} count", len(ent) == want and len(on_side) == want,
                        [round(e.c, 8) for e in ent]))
        for e in ent:
            m = census_mode(e, alpha, beta)
            qf = quadratic_form(m)
            out.append(_chk(f"region {label} form at c={e.c:.6g}",
                            _rel(qf["via_identity"], e.form) < 1e-5
                            and _rel(qf["via_definition"], e.form) < 1e-5))
    return out


def suite_dispersion():
    from .stability.dispersion import count_unstable, dispersion
    out = []
    d = dispersion(math.sqrt(3) * PI / 2, 0.0, 0.5)
    out.append(_chk("regular neutral mode", abs(d) < 1e-8, f"{abs(d):.2g}"))
    d = dispersion(1.0, 0.0, 0.5 + 0.5j)
    ref = 0.5622223749323922 - 1.8445355557824128j
    out.append(_chk("D at 0.5+0.5i", abs(d - ref) < 1e-9 * abs(ref)))
    _, a, b = cf.snm_curve(math.sqrt(3) / 2)
    d = dispersion(a, b, 0.0)
    out.append(_chk("singular neutral mode", abs(d) < 1e-6, f"{abs(d):.2g}"))
    out.append(_chk("count alpha^2=0.5*3pi^2/4 beta=0", count_unstable(math.sqrt(0.375 * PI2), 0.0) == 1))
    out.append(_chk("count alpha=3", count_unstable(3.0, 0.2 * PI2) == 0))
    return out


def suite_cli():
    import io
    from .cli import main
    out = []
    for argv in (["eigen", "--beta", "0", "--c", "2", "--nmax", "3"],
                 ["contour", "--beta-range", "0:1:2", "--ctilde-range", "-1:1:3"]):
        a, b = io.StringIO(), io.StringIO()
        ra = main(argv, stdout=a)
        rb = main(argv + ["--threads", "2"], stdout=b)
        out.append(_chk(f"deterministic {argv[0]}", ra == rb == 0 and a.getvalue() == b.getvalue()))
    return out


SUITES = {
    "specfun": suite_specfun,
    "profiles": suite_profiles,
    "slsolver": suite_slsolver,
    "limits": suite_limits,
    "closedform": suite_closedform,
    "dispersion": suite_dispersion,
    "census": suite_census,
    "identities": suite_identities,
    "index": suite_index,
    "boundary": suite_boundary,
    "cli": suite_cli,
}


GRID_SUITES = ("index", "identities")


def run_suite(name, grid=None):
    """Run one suite; grid = (nb, na) applies to the grid-based suites."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    kw = {"nb": grid[0], "na": grid[1]} if (grid and name in GRID_SUITES) else {}
    checks = SUITES[name](**kw)
    passed = sum(c.passed for c in checks)
    return {"suite": name, "passed": passed, "failed": len(checks) - passed,
            "details": [asdict(c) for c in checks]}
