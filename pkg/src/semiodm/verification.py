"""Named verification suites. Each returns a list of IdentityReport."""

from __future__ import annotations

from typing import Callable, Dict, List

import numpy as np

from .bloch import (bloch_closed, bloch_quadrature, laplace_route_odm,
                    numeric_bromwich_check, symmetric_wk_odm)
from .fermi import FermiContext
from .identities import (ORDER3_BOUNDS, IdentityReport, check_gradient_identities,
                         loglog_slope)
from .odm import (PairPoint, SymmetricPoint, gvodm_diagonal, gvodm_diagonal_terms,
                  gvodm_sum, gvodm_terms, kodm, kodm_terms)
from .oracle import (HarmonicOscillator1D, SpectrumSpec, allowed_interval, collar_width,
                     exact_odm, idempotency_defect, particle_number, turning_point)
from .potentials import GaussianWell, IsotropicHarmonic, Potential, Zero
from .special import bessel_j, scaled_bessel

SLOPE_S = np.logspace(-3, -1, 9)


def _report(name, residual, n, tol, note="") -> IdentityReport:
    residual = float(residual)
    return IdentityReport(name, residual, int(n), float(tol), bool(residual <= tol), note=note)


def _slope_report(name, s, res, bounds=ORDER3_BOUNDS, note="") -> IdentityReport:
    slope = loglog_slope(s, res)
    ok = bool(np.isfinite(slope) and bounds[0] <= slope <= bounds[1])
    return IdentityReport(name, float(np.max(np.abs(res))), len(s), float("nan"), ok,
                          slope, slope, tuple(bounds), note)


def max_rel(a, b, floor=0.0) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), floor)))


# --- Bessel ---------------------------------------------------------------

BESSEL_ORDERS = np.arange(-2.5, 4.0 + 0.25, 0.5)
BESSEL_Z = np.linspace(50.0 / 200, 50.0, 200)


def bessel_suite(orders=BESSEL_ORDERS, z=BESSEL_Z) -> List[IdentityReport]:
    rec1 = rec2 = deriv = 0.0
    edges = np.concatenate([[0.0], z])
    gl_t, gl_w = np.polynomial.legendre.leggauss(24)
    for nu in orders:
        j0, j1, j2, j3 = (bessel_j(nu + k, z) for k in range(4))
        scale = np.maximum(1.0, np.abs(j0))
        rec1 = max(rec1, np.max(np.abs(j0 - (2 * (nu + 1) / z * j1 - j2)) / scale))
        rhs = ((4 * (nu + 1) * (nu + 2) - z * z) * j2 - 2 * z * (nu + 1) * j3) / z**2
        rec2 = max(rec2, np.max(np.abs(j0 - rhs) / scale))
        # derivative identity in integrated form over the panels between
        # consecutive samples: S_nu(a) - S_nu(b) = int_a^b x S_nu+1(x) dx
        a, b = edges[:-1], edges[1:]
        x = 0.5 * (a + b)[:, None] + 0.5 * (b - a)[:, None] * gl_t
        integral = np.sum(0.5 * (b - a)[:, None] * gl_w * x * scaled_bessel(nu + 1, x), axis=1)
        # scale: the local amplitude z^-nu sqrt(J_nu^2 + J_nu+1^2), which has no zeros
        amp = np.maximum(b ** (-nu) * np.hypot(j0, j1), np.abs(scaled_bessel(nu, a)))
        lhs = scaled_bessel(nu, a) - scaled_bessel(nu, b)
        deriv = max(deriv, np.max(np.abs(lhs - integral) / amp))
    n = len(orders) * len(z)
    half = 0.0
    forms = {
        0.5: lambda x: np.sqrt(2 / (np.pi * x)) * np.sin(x),
        -0.5: lambda x: np.sqrt(2 / (np.pi * x)) * np.cos(x),
        1.5: lambda x: np.sqrt(2 / (np.pi * x)) * (np.sin(x) / x - np.cos(x)),
        -1.5: lambda x: np.sqrt(2 / (np.pi * x)) * (-np.cos(x) / x - np.sin(x)),
        2.5: lambda x: np.sqrt(2 / (np.pi * x)) * ((3 / x**2 - 1) * np.sin(x) - 3 * np.cos(x) / x),
        -2.5: lambda x: np.sqrt(2 / (np.pi * x)) * (3 * np.sin(x) / x + (3 / x**2 - 1) * np.cos(x)),
    }
    for nu, form in forms.items():
        ref = form(z)
        floor = 1e-3 * np.sqrt(2 / (np.pi * z))
        half = max(half, np.max(np.abs(bessel_j(nu, z) - ref) / np.maximum(np.abs(ref), floor)))
    return [
        _report("J_nu = 2(nu+1)/z J_nu+1 - J_nu+2", rec1, n, 1e-11),
        _report("J_nu from J_nu+2, J_nu+3", rec2, n, 1e-11),
        _report("d/dz z^-nu J_nu = -z^-nu J_nu+1", deriv, n, 1e-11,
                note="integrated over panels between samples with 24-point Gauss-Legendre"),
        _report("half-integer closed forms", half, len(forms) * len(z), 1e-12,
                note="relative error, floored at 1e-3 of the local envelope near zeros"),
    ]


# --- shared point sets ----------------------------------------------------

def ho_case(mu=20.5):
    return FermiContext(d=1, hbar=1.0, m=1.0, mu=mu, g=1), IsotropicHarmonic(1, 1.0)


def gauss2d_case():
    return FermiContext(d=2, hbar=1.0, m=1.0, mu=0.5, g=2), GaussianWell(2, V0=-3.0, sigma=1.2)


def random_pairs(ctx: FermiContext, V: Potential, n: int, rng, box=1.5, smax=1.0):
    """``n`` pair points with r well inside the allowed region."""
    out_r, out_rp = [], []
    while len(out_r) < n:
        r = rng.uniform(-box, box, size=ctx.d)
        if ctx.mu - V.eval(r) < 0.2 * abs(ctx.mu):
            continue
        s = rng.normal(size=ctx.d)
        s *= rng.uniform(0.05, smax) / np.linalg.norm(s)
        out_r.append(r)
        out_rp.append(r - s)
    return PairPoint(np.array(out_r), np.array(out_rp))


def random_symmetric(ctx, V, n, rng, box=1.5, smax=1.0):
    p = random_pairs(ctx, V, n, rng, box, smax)
    return SymmetricPoint(p.r, p.r - p.r_prime)


def orderwise_rel(a, b):
    """Worst pointwise relative deviation over all three orders."""
    worst = 0.0
    for x, y in zip(a.orders(), b.orders()):
        x, y = np.asarray(x), np.asarray(y)
        worst = max(worst, float(np.max(np.abs(x - y) / np.maximum(np.abs(y), 1e-300))))
    return worst


# --- Laplace route --------------------------------------------------------

def laplace_suite(n=200, seed=7) -> List[IdentityReport]:
    rng = np.random.default_rng(seed)
    out = []
    for label, (ctx, V) in (("1D HO", ho_case(10.5)), ("2D Gaussian well", gauss2d_case())):
        p = random_pairs(ctx, V, n, rng)
        err = orderwise_rel(laplace_route_odm(ctx, V, p), kodm_terms(ctx, V, p))
        out.append(_report(f"laplace route = KODM order by order ({label})", err, n, 1e-10))
    ctx, V = ho_case(20.5)
    p = PairPoint([0.3], [0.2])
    for beta in (0.3, 0.5, 1.0):
        a = bloch_closed(ctx, V, p, beta)
        b = bloch_quadrature(ctx, V, p, beta)
        c = bloch_quadrature(ctx, V, p, beta, sign=-1)
        err = max(abs(a.c0 - b.c0) / abs(a.c0), abs(a.c1 - b.c1) / abs(a.c1), abs(a.c2 - b.c2) / abs(a.c2))
        out.append(_report(f"Bloch closed form = momentum quadrature (beta={beta})", err, 3, 1e-9))
        flip = max(abs(b.c0 - c.c0) / abs(b.c0), abs(b.c1 - c.c1) / abs(b.c1), abs(b.c2 - c.c2) / abs(b.c2))
        out.append(_report(f"p -> -p invariance (beta={beta})", flip, 3, 1e-13))
        out.append(_report(f"Im C relative (beta={beta})", b.imag_residual, 3, 1e-14))
    # Talbot spot checks on the free gas and the oscillator, z <= 20
    worst = 0.0
    pts = 0
    for ctx0, V0 in ((FermiContext(1, 1.0, 1.0, 2.0, 1), Zero(1)), ho_case(10.5)):
        for s in np.linspace(0.3, 3.0, 10):
            p = PairPoint([0.2], [0.2 - s])
            a = kodm_terms(ctx0, V0, p).order0
            t = numeric_bromwich_check(ctx0, V0, p, 0)
            worst = max(worst, abs(t - a) / abs(a))
            pts += 1
    out.append(_report("Talbot inversion = analytic A0", worst, pts, 1e-7))
    return out


# --- symmetric route and order fits ---------------------------------------

def swap_defect(ctx, V, R, s):
    R = np.atleast_1d(np.asarray(R, dtype=float))
    s = np.atleast_1d(np.asarray(s, dtype=float))
    return abs(kodm(ctx, V, R + s / 2, R - s / 2) - kodm(ctx, V, R - s / 2, R + s / 2))


def symmetrization_difference(ctx, V, R, s):
    R = np.atleast_1d(np.asarray(R, dtype=float))
    s = np.atleast_1d(np.asarray(s, dtype=float))
    return abs(kodm(ctx, V, R + s / 2, R - s / 2) - gvodm_sum(ctx, V, SymmetricPoint(R, s)))


def symmetrize_suite(n=200, seed=11) -> List[IdentityReport]:
    rng = np.random.default_rng(seed)
    out = []
    for label, (ctx, V) in (("1D HO", ho_case(10.5)), ("2D Gaussian well", gauss2d_case())):
        q = random_symmetric(ctx, V, n, rng)
        err = orderwise_rel(symmetric_wk_odm(ctx, V, q), gvodm_terms(ctx, V, q))
        out.append(_report(f"symmetric WK = symmetrized terms order by order ({label})", err, n, 1e-10))
        t = gvodm_terms(ctx, V, q)
        err = max_rel(t.total, gvodm_sum(ctx, V, q))
        out.append(_report(f"collapsed sum = sum of symmetrized terms ({label})", err, n, 1e-12))
    ctx, V = ho_case(20.5)
    res = [symmetrization_difference(ctx, V, 0.3, s) for s in SLOPE_S]
    out.append(_slope_report("|KODM - GVODM| order in s (1D HO, R=0.3)", SLOPE_S, res))
    return out


def hermiticity_suite(n=200, seed=13) -> List[IdentityReport]:
    rng = np.random.default_rng(seed)
    out = []
    for label, (ctx, V) in (("1D HO", ho_case(20.5)), ("2D Gaussian well", gauss2d_case())):
        q = random_symmetric(ctx, V, n, rng)
        a = gvodm_sum(ctx, V, q)
        b = gvodm_sum(ctx, V, SymmetricPoint(q.R, -q.s))
        out.append(_report(f"GVODM even in s ({label})", max_rel(b, a), n, 1e-14))
    ctx, V = ho_case(20.5)
    res = [swap_defect(ctx, V, 0.3, s) for s in SLOPE_S]
    out.append(_slope_report("KODM swap defect order in s (1D HO, R=0.3)", SLOPE_S, res))
    return out


def gradients_suite(n=100, seed=17) -> List[IdentityReport]:
    rng = np.random.default_rng(seed)
    V = GaussianWell(2, V0=-1.0, sigma=1.0)
    pts = rng.uniform(-1.5, 1.5, size=(n, 2))
    return check_gradient_identities(V, pts, rng=rng)


# --- exact oracle ---------------------------------------------------------

def oracle_bulk(mu=20.5, window=2.0, n=401):
    ctx, V = ho_case(mu)
    spec = SpectrumSpec.from_chemical_potential(HarmonicOscillator1D(1.0), ctx)
    x = np.linspace(-window, window, n)
    ex = exact_odm(spec, ctx, x, x)
    terms = gvodm_diagonal_terms(ctx, V, x[:, None])
    gv_err = float(np.max(np.abs(terms.total - ex) / ex))
    tf_err = float(np.max(np.abs(terms.order0 - ex) / ex))
    s = np.linspace(-1.0, 1.0, 201)
    off = gvodm_sum(ctx, V, SymmetricPoint(np.zeros((len(s), 1)), s[:, None]))
    off_err = float(np.max(np.abs(off - exact_odm(spec, ctx, s / 2, -s / 2))) / exact_odm(spec, ctx, 0.0, 0.0))
    return gv_err, tf_err, off_err


def gvodm_pair_evaluator(ctx, V):
    def ev(u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        return gvodm_sum(ctx, V, SymmetricPoint(((u + v) / 2)[..., None], (u - v)[..., None]))
    return ev


def kodm_pair_evaluator(ctx, V):
    """KODM with the density on the diagonal."""
    def ev(u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        out = np.empty(u.shape)
        diag = u == v
        if np.any(diag):
            out[diag] = gvodm_diagonal(ctx, V, u[diag][:, None])
        if np.any(~diag):
            out[~diag] = kodm(ctx, V, u[~diag][:, None], v[~diag][:, None])
        return out
    return ev


BULK_EVAL = np.linspace(-3.0, 3.0, 121)


def gvodm_defect(mu, n_nodes=1000, eval_points=BULK_EVAL, collar_factor=0.5):
    ctx, V = ho_case(mu)
    L = turning_point(1.0, ctx) - collar_width(ctx, 1.0, collar_factor)
    return idempotency_defect(gvodm_pair_evaluator(ctx, V), -L, L, eval_points, n_nodes=n_nodes)


def exact_defect(n_occupied=20, mu=20.5, eval_points=BULK_EVAL):
    ctx, _ = ho_case(mu)
    spec = SpectrumSpec.filled(HarmonicOscillator1D(1.0), n_occupied)
    L = 2.0 * turning_point(1.0, ctx)
    return idempotency_defect(lambda a, b: exact_odm(spec, ctx, a, b), -L, L, eval_points)


def tf_particle_number(mu=20.5):
    ctx, V = ho_case(mu)
    a, b = allowed_interval(ctx, 1.0)
    return particle_number(lambda x: gvodm_diagonal_terms(ctx, V, x[:, None]).order0, a, b)


def exact_particle_number(n_occupied=20, mu=20.5):
    ctx, _ = ho_case(mu)
    spec = SpectrumSpec.filled(HarmonicOscillator1D(1.0), n_occupied)
    L = 2.0 * turning_point(1.0, ctx)
    return particle_number(lambda x: exact_odm(spec, ctx, x, x), -L, L, endpoint_map=False)


def oracle_suite() -> List[IdentityReport]:
    gv, tf, off = oracle_bulk()
    out = [
        _report("GVODM diagonal vs exact, |x| <= 2", gv, 401, 2e-2),
        _report("GVODM diagonal error below TF error", gv - tf, 401, -1e-300,
                note=f"GVODM {gv:.4e}, TF {tf:.4e}; residual is their difference"),
        _report("GVODM off-diagonal vs exact at R=0, |s| <= 1", off, 201, 5e-2),
        _report("TF particle number = mu/(hbar omega)", abs(tf_particle_number() - 20.5), 1, 1e-6),
        _report("exact particle number = N", abs(exact_particle_number() - 20), 1, 1e-6),
        _report("exact projector idempotency defect", exact_defect(), len(BULK_EVAL) ** 2, 1e-7),
    ]
    d1, d2 = gvodm_defect(20.5), gvodm_defect(40.5)
    out.append(_report("GVODM defect shrinks from mu=20.5 to 40.5", d2 - d1, len(BULK_EVAL) ** 2,
                       -1e-300, note=f"defect {d1:.4e} -> {d2:.4e}"))
    return out


SUITES: Dict[str, Callable[[], List[IdentityReport]]] = {
    "bessel": bessel_suite,
    "gradients": gradients_suite,
    "laplace": laplace_suite,
    "symmetrize": symmetrize_suite,
    "hermiticity": hermiticity_suite,
    "oracle": oracle_suite,
}


def run_suite(name: str) -> List[IdentityReport]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name]()

