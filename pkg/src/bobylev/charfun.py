"""Characteristic functions on radial / axisymmetric xi-grids.

State representation used throughout: values phi(r) (or phi(r, u) with u the
polar cosine relative to the symmetry axis e1) on a geometric radial grid
with an r = 0 node prepended, plus a fitted "small-r model"

    phi(r) ~ 1 - sum_p a_p r^p        (r below the first positive node)

carrying the near-origin expansion. The model supplies sub-grid evaluation,
the analytic r -> 0 limits of the D^alpha metrics, and the grazing-panel
coefficients of the collision quadrature. Metrics take their sup over grid
nodes, a refined near-origin sequence, and the model limit, with the r_max
truncation recorded rather than hidden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import make_interp_spline

from .errors import BoundViolation, GridError, RangeError, TruncationError

TOL_CF = 1e-9          # characteristic-function bound slack at rest
MODEL_FIT_CEILING = 0.05   # fit the small-r model where 1 - phi <= this
SOBOLEV_TAIL_TOL = 1e-6


def radial_grid(r_min: float = 1e-4, r_max: float = 20.0, n: int = 1536) -> np.ndarray:
    """Geometric radii r_min..r_max with an exact r = 0 node prepended.

    Uniform spacing in log r keeps dilation CFL radius-independent and puts
    resolution where phi curves.
    """
    if not (0.0 < r_min < r_max) or n < 16:
        raise GridError("need 0 < r_min < r_max and n >= 16")
    return np.concatenate(([0.0], np.geomspace(r_min, r_max, n)))


def polar_grid(n: int = 33):
    """Gauss-Legendre polar cosines augmented with the axis points u = +-1.

    Returns (u, w); the endpoint weights are zero so integrals use the pure
    Gauss rule while interpolation never extrapolates in u.
    """
    x, w = np.polynomial.legendre.leggauss(n)
    u = np.concatenate(([-1.0], x, [1.0]))
    wt = np.concatenate(([0.0], w, [0.0]))
    return u, wt


def cutoff_x(radius):
    """Smooth radial cutoff: 1 on [0,1], 0 on [2,inf), C^2 quintic bridge.

    The bridge is a quintic smoothstep in |xi|^2 on 1 <= |xi| <= 2.
    """
    r = np.asarray(radius, dtype=float)
    z = np.clip((r * r - 1.0) / 3.0, 0.0, 1.0)
    out = 1.0 - z * z * z * (10.0 - 15.0 * z + 6.0 * z * z)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# small-r model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmallRModel:
    """Near-origin expansion 1 - phi(r) = sum_p coeffs[p] * r^exponents[p].

    coeffs has shape (n_exp,) for radial states and (n_exp, n_u) for
    axisymmetric ones.
    """

    exponents: tuple
    coeffs: np.ndarray

    @property
    def is_axisym(self) -> bool:
        return np.ndim(self.coeffs) == 2

    def one_minus(self, r):
        """sum_p a_p r^p; axisym models return shape r.shape + (n_u,)."""
        r = np.asarray(r, dtype=float)
        powers = np.stack([np.power(r, p) for p in self.exponents], axis=-1)
        if self.is_axisym:
            return powers @ self.coeffs
        return powers @ np.asarray(self.coeffs)

    def eval(self, r):
        return 1.0 - self.one_minus(r)

    def coeff_map(self):
        """dict exponent -> coefficient (scalar or per-u array)."""
        return {p: np.asarray(self.coeffs)[i] for i, p in enumerate(self.exponents)}


def fit_small_r_model(r, one_minus, exponents, ceiling=MODEL_FIT_CEILING,
                      pinned=None) -> SmallRModel:
    """Weighted LSQ of 1-phi samples against {r^p} on the near-origin window.

    Relative weighting (1/|1-phi|) keeps the leading coefficient accurate
    across the decades the window spans. `pinned` maps exponents to known
    coefficients that are held fixed (e.g. the conserved K of a profile
    relaxation) instead of fitted.
    """
    r = np.asarray(r, dtype=float)
    om = np.asarray(one_minus, dtype=float)
    pinned = pinned or {}
    axisym = om.ndim == 2
    scale = np.max(np.abs(om), axis=1) if axisym else np.abs(om)
    mask = (r > 0) & (scale <= ceiling)
    idx = np.nonzero(mask)[0]
    if idx.size < 3 * len(exponents):
        idx = np.nonzero(r > 0)[0][: max(12, 3 * len(exponents))]
    idx = idx[:96]
    rw = r[idx]
    free = [p for p in exponents if p not in pinned]
    design = np.stack([rw**p for p in free], axis=1) if free else None
    fixed_part = sum(pinned[p] * rw**p for p in pinned) if pinned else 0.0

    def solve(y):
        if design is None:
            return np.zeros(0)
        w = 1.0 / np.maximum(np.abs(y), 1e-14)
        sol, *_ = np.linalg.lstsq(design * w[:, None], (y - fixed_part) * w, rcond=None)
        return sol

    if axisym:
        coeffs = np.empty((len(exponents), om.shape[1]))
        for j in range(om.shape[1]):
            sol = solve(om[idx, j])
            it = iter(sol)
            coeffs[:, j] = [pinned[p] if p in pinned else next(it) for p in exponents]
    else:
        sol = solve(om[idx])
        it = iter(sol)
        coeffs = np.array([pinned[p] if p in pinned else next(it) for p in exponents])
    return SmallRModel(tuple(exponents), coeffs)


# ---------------------------------------------------------------------------
# gridded characteristic functions
# ---------------------------------------------------------------------------

def _check_grid(r):
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r[0] != 0.0 or np.any(np.diff(r) <= 0):
        raise GridError("radial grid must be strictly increasing with r[0] = 0")
    return r


class RadialCharFn:
    """phi(|xi|) sampled on a radial grid; real-valued (even density)."""

    def __init__(self, r, values, model=None, exponents=(2.0, 4.0),
                 bound_tol=TOL_CF, validate=True):
        self.r = _check_grid(r)
        self.values = np.asarray(values, dtype=float).copy()
        if self.values.shape != self.r.shape:
            raise GridError("values/grid shape mismatch")
        if validate:
            if abs(self.values[0] - 1.0) > 1e-9:
                raise BoundViolation(f"phi(0) = {self.values[0]!r} != 1")
            self.values[0] = 1.0
            excess = np.max(np.abs(self.values)) - 1.0
            if excess > bound_tol:
                raise BoundViolation(f"max|phi| exceeds 1 by {excess:.3e}")
        self.model = model if model is not None else fit_small_r_model(
            self.r, 1.0 - self.values, exponents)
        self._spline = None
        self._dspline = None

    # -- representation helpers ------------------------------------------------
    is_axisym = False
    u = None
    u_weights = None

    @property
    def r_seam(self) -> float:
        return self.r[1]

    @property
    def r_max(self) -> float:
        return self.r[-1]

    @classmethod
    def from_callable(cls, fn, r, **kw):
        r = _check_grid(r)
        return cls(r, fn(r), **kw)

    def spline(self):
        if self._spline is None:
            self._spline = make_interp_spline(self.r, self.values, k=5)
        return self._spline

    def dspline(self):
        if self._dspline is None:
            self._dspline = self.spline().derivative()
        return self._dspline

    def __call__(self, rr):
        rr = np.asarray(rr, dtype=float)
        if np.any(rr > self.r_max * (1.0 + 1e-12)):
            raise RangeError(f"evaluation beyond r_max = {self.r_max}")
        if np.any(rr < 0.0):
            raise RangeError("negative radius")
        out = np.where(rr < self.r_seam,
                       self.model.eval(rr),
                       self.spline()(np.minimum(rr, self.r_max)))
        return out if out.ndim else float(out)

    def refit_model(self, exponents=None):
        exps = exponents if exponents is not None else self.model.exponents
        self.model = fit_small_r_model(self.r, 1.0 - self.values, exps)
        return self.model

    def one_minus_values(self):
        return 1.0 - self.values


class AxisymCharFn:
    """phi(|xi|, u) with u = polar cosine relative to the symmetry axis e1."""

    def __init__(self, r, u, values, model=None, exponents=(2.0, 4.0),
                 u_weights=None, bound_tol=TOL_CF, validate=True):
        self.r = _check_grid(r)
        self.u = np.asarray(u, dtype=float)
        if np.any(np.diff(self.u) <= 0) or self.u[0] < -1.0 - 1e-12 or self.u[-1] > 1.0 + 1e-12:
            raise GridError("u grid must be increasing within [-1, 1]")
        self.values = np.asarray(values, dtype=float).copy()
        if self.values.shape != (self.r.size, self.u.size):
            raise GridError("values shape must be (n_r, n_u)")
        if u_weights is None:
            raise GridError("u_weights required (Gauss weights, 0 at axis points)")
        self.u_weights = np.asarray(u_weights, dtype=float)
        if validate:
            if np.max(np.abs(self.values[0] - 1.0)) > 1e-9:
                raise BoundViolation("phi(0, .) != 1")
            self.values[0, :] = 1.0
            excess = np.max(np.abs(self.values)) - 1.0
            if excess > bound_tol:
                raise BoundViolation(f"max|phi| exceeds 1 by {excess:.3e}")
        self.model = model if model is not None else fit_small_r_model(
            self.r, 1.0 - self.values, exponents)
        self._spline = None

    is_axisym = True

    @property
    def r_seam(self) -> float:
        return self.r[1]

    @property
    def r_max(self) -> float:
        return self.r[-1]

    def spline(self):
        # one B-spline with vector coefficients: evaluates all u-columns at once
        if self._spline is None:
            self._spline = make_interp_spline(self.r, self.values, k=5, axis=0)
        return self._spline

    def eval_radii(self, rr):
        """phi at radii rr for every u-column; shape (len(rr), n_u)."""
        rr = np.asarray(rr, dtype=float)
        if np.any(rr > self.r_max * (1.0 + 1e-12)) or np.any(rr < 0.0):
            raise RangeError("radius outside [0, r_max]")
        out = self.spline()(np.minimum(rr, self.r_max))
        sub = rr < self.r_seam
        if np.any(sub):
            out[sub] = self.model.eval(rr[sub])
        return out

    def __call__(self, rr, uu):
        """Pointwise evaluation; spline in r, linear interpolation in u."""
        cols = self.eval_radii(np.atleast_1d(np.asarray(rr, dtype=float)))
        uu = np.atleast_1d(np.asarray(uu, dtype=float))
        j = np.clip(np.searchsorted(self.u, uu) - 1, 0, self.u.size - 2)
        t = (uu - self.u[j]) / (self.u[j + 1] - self.u[j])
        t = np.clip(t, 0.0, 1.0)
        out = (1.0 - t) * cols[..., j] + t * cols[..., j + 1]
        return out if out.size > 1 else float(out.ravel()[0])

    def refit_model(self, exponents=None):
        exps = exponents if exponents is not None else self.model.exponents
        self.model = fit_small_r_model(self.r, 1.0 - self.values, exps)
        return self.model

    def one_minus_values(self):
        return 1.0 - self.values


def constant_one(like):
    """phi == 1 on the same grid as `like` (the Fourier transform of delta_0)."""
    if like.is_axisym:
        vals = np.ones_like(like.values)
        return AxisymCharFn(like.r, like.u, vals, u_weights=like.u_weights,
                            model=SmallRModel(like.model.exponents,
                                              np.zeros_like(np.asarray(like.model.coeffs))))
    return RadialCharFn(like.r, np.ones_like(like.values),
                        model=SmallRModel(like.model.exponents,
                                          np.zeros(len(like.model.exponents))))


# ---------------------------------------------------------------------------
# deviator / correction function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Deviator:
    """Trace-free second-moment deviator P_{jl}(0) and its decay rate A.

    The correction evaluated below is exp(-A t) * (1/2) xi_j xi_l P_{jl} X(|xi|)
    with X the quintic-smoothstep cutoff above.
    """

    P: np.ndarray
    A: float

    def __post_init__(self):
        P = np.asarray(self.P, dtype=float)
        object.__setattr__(self, "P", P)
        scale = max(1.0, float(np.max(np.abs(P))))
        if abs(np.trace(P)) > 1e-12 * scale:
            raise GridError(f"deviator trace {np.trace(P):.3e} != 0")
        if np.max(np.abs(P - P.T)) > 1e-12 * scale:
            raise GridError("deviator must be symmetric")

    def quad_axisym(self, u):
        """xi-hat^T P xi-hat for axis-e1 symmetry; requires P diagonal, P22=P33."""
        P = self.P
        off = np.max(np.abs(P - np.diag(np.diag(P))))
        if off > 1e-12 * max(1.0, np.max(np.abs(P))) or abs(P[1, 1] - P[2, 2]) > 1e-10:
            raise GridError("axisymmetric evaluation needs diag(p1, p, p) deviator")
        u = np.asarray(u, dtype=float)
        return P[0, 0] * u * u + P[1, 1] * (1.0 - u * u)

    def p_tilde(self, t, r, u=None):
        """Correction values on the grid (r outer axis, u inner when given).

        Sign convention: this is the quadratic that matches the second-order
        Taylor term of f_hat - g_hat, i.e. -(1/2) e^{-At} xi^T P xi X(|xi|),
        so that subtracting it cancels the r^2 content of the difference and
        leaves the D^{2+delta} norm finite (the Taylor cancellation underlying
        the moment-to-metric bound).
        """
        r = np.asarray(r, dtype=float)
        radial_part = -0.5 * r * r * cutoff_x(r)
        if u is None:
            if np.max(np.abs(self.P)) > 1e-14:
                raise GridError("nonzero deviator needs an axisymmetric grid")
            return np.zeros_like(r) * math.exp(-self.A * t)
        return math.exp(-self.A * t) * radial_part[:, None] * self.quad_axisym(u)[None, :]


# ---------------------------------------------------------------------------
# metric machinery
# ---------------------------------------------------------------------------

def _as_common(phi, psi):
    """Common (r, u, values_phi, values_psi, models) representation.

    Radial states broadcast across the other operand's u grid; grids must
    coincide in r (and u when both are axisymmetric).
    """
    if psi == "one":
        psi = constant_one(phi)
    if phi.is_axisym or psi.is_axisym:
        ax = phi if phi.is_axisym else psi
        r, u = ax.r, ax.u

        def lift(s):
            if s.is_axisym:
                if s.values.shape != (r.size, u.size) or not np.allclose(s.r, r):
                    raise GridError("incompatible axisymmetric grids")
                return s.values, s.model.coeff_map(), s.model.exponents
            if s.r.shape != r.shape or not np.allclose(s.r, r):
                raise GridError("incompatible radial grids")
            vals = np.repeat(s.values[:, None], u.size, axis=1)
            cmap = {p: np.full(u.size, c) for p, c in s.model.coeff_map().items()}
            return vals, cmap, s.model.exponents

        va, ca, _ = lift(phi)
        vb, cb, _ = lift(psi)
        return r, u, va, vb, ca, cb
    if phi.r.shape != psi.r.shape or not np.allclose(phi.r, psi.r):
        raise GridError("incompatible radial grids")
    return phi.r, None, phi.values, psi.values, phi.model.coeff_map(), psi.model.coeff_map()


def _origin_terms(cmap_phi, cmap_psi, extra=None):
    """Net coefficients of (phi - psi - correction) by exponent."""
    terms: dict[float, np.ndarray] = {}
    for p, c in cmap_psi.items():
        terms[p] = terms.get(p, 0.0) + np.asarray(c, dtype=float)
    for p, c in cmap_phi.items():
        terms[p] = terms.get(p, 0.0) - np.asarray(c, dtype=float)
    if extra:
        for p, c in extra.items():
            terms[p] = terms.get(p, 0.0) + np.asarray(c, dtype=float)
    return terms


def _origin_limit(terms, alpha, coeff_floor):
    """(limit, diverged) of |Delta|/r^alpha as r -> 0 from model terms."""
    for p in sorted(terms):
        c = float(np.max(np.abs(terms[p])))
        if c <= coeff_floor:
            continue
        if p < alpha - 1e-9:
            return math.inf, True
        if p <= alpha + 1e-9:
            return c, False
        return 0.0, False
    return 0.0, False


def _metric_sup(r, numer, alpha):
    pos = r > 0
    rad = r[pos]
    vals = numer[pos]
    if vals.ndim == 2:
        vals = vals.max(axis=1)
    ratios = vals / rad**alpha
    k = int(np.argmax(ratios))
    return float(ratios[k]), float(rad[k])


def d_alpha(phi, psi, alpha, coeff_floor=1e-7, full=False):
    """Toscani distance sup_xi |phi - psi| / |xi|^alpha.

    The sup runs over grid nodes, a log-refined near-origin sequence, and the
    analytic r -> 0 limit of the small-r models; it is +inf (flagged) when the
    models differ at an order below alpha.
    """
    if alpha <= 0:
        raise GridError("alpha must be positive")
    r, u, va, vb, ca, cb = _as_common(phi, psi)
    sup, argmax = _metric_sup(r, np.abs(va - vb), alpha)

    # refined near-origin sequence straddling the model/grid seam; differences
    # go through 1 - phi so the model region is free of 1-ulp cancellation
    seam = r[1]
    scan = np.geomspace(seam / 32.0, min(seam * 64.0, r[-1]), 40)
    pa = _scan_one_minus(phi, scan, u)
    pb = _scan_one_minus(psi if not isinstance(psi, str) else constant_one(phi), scan, u)
    sc = np.abs(pb - pa)
    if sc.ndim == 2:
        sc = sc.max(axis=1)
    sup_scan = float(np.max(sc / scan**alpha))

    limit, diverged = _origin_limit(_origin_terms(ca, cb), alpha, coeff_floor)
    value = math.inf if diverged else max(sup, sup_scan, limit)
    if not full:
        return value
    return {
        "value": value,
        "diverged": diverged,
        "grid_sup": sup,
        "origin_limit": limit,
        "argmax_r": argmax,
        "r_max": float(r[-1]),
    }


def _scan_one_minus(s, radii, u):
    """1 - phi on the scan radii; exact below the seam (model coefficients)."""
    if s.is_axisym:
        out = 1.0 - s.eval_radii(radii)
        sub = radii < s.r_seam
        if np.any(sub):
            out[sub] = s.model.one_minus(radii[sub])
        return out
    vals = np.where(radii < s.r_seam,
                    s.model.one_minus(radii),
                    1.0 - s.spline()(np.minimum(radii, s.r_max)))
    if u is not None:
        return np.repeat(np.asarray(vals)[:, None], len(u), axis=1)
    return np.asarray(vals)


def d_metric_with_correction(f_hat, g_hat, dev: Deviator, t, delta,
                             coeff_floor=1e-3, r_floor=5e-3, full=False):
    """D^{2+delta} distance of f_hat - g_hat - P_tilde(t, .).

    The origin limit compares net model coefficients (including the quadratic
    correction, X = 1 there) against the order 2+delta; the sub-seam scan is
    omitted since fitted-coefficient noise would be amplified by r^{-delta}.
    coeff_floor absorbs that fit noise (~1e-4 from basis truncation on evolved
    states); genuine hypothesis violations carry O(0.1) coefficients.

    r_floor truncates the grid sup below |xi| ~ 5e-3: after the correction
    cancels the quadratic content the true ratio vanishes as r -> 0, so
    nodes there only expose the absolute solver noise (~1e-12) amplified by
    r^{-2-delta}. The floor keeps that measurement floor near 1e-6 and is
    recorded in full reports.
    """
    if t < 0:
        raise GridError("t must be >= 0")
    alpha = 2.0 + delta
    r, u, va, vb, ca, cb = _as_common(f_hat, g_hat)
    pt = dev.p_tilde(t, r, u)
    numer = np.abs(va - vb - pt)
    eval_mask = r >= min(r_floor, r[max(r.size - 8, 1)])
    sup, argmax = _metric_sup(np.where(eval_mask, r, 0.0), numer, alpha)

    # net r^2 coefficient of f - g - P_tilde: (a2_g - a2_f) + (1/2) e^{-At} q(u)
    if u is None:
        extra = {2.0: np.zeros(1)}
    else:
        extra = {2.0: 0.5 * math.exp(-dev.A * t) * dev.quad_axisym(u)}
    limit, diverged = _origin_limit(_origin_terms(ca, cb, extra), alpha, coeff_floor)
    value = math.inf if diverged else max(sup, limit)
    if not full:
        return value
    return {
        "value": value,
        "diverged": diverged,
        "grid_sup": sup,
        "origin_limit": limit,
        "argmax_r": argmax,
        "r_max": float(r[-1]),
        "r_floor": r_floor,
    }


# ---------------------------------------------------------------------------
# Sobolev norms via Plancherel
# ---------------------------------------------------------------------------

def _radial_hn_integral(r, sq_vals, N):
    """int_0^{rmax} (1+r^2)^N |phi|^2 r^2 dr by spline integration."""
    g = (1.0 + r * r) ** N * sq_vals * r * r
    sp = make_interp_spline(r, g, k=3)
    return float(sp.integrate(r[0], r[-1])), g


def _tail_check(r, g, total):
    """Estimate the tail beyond r_max from the last decade's decay rate.

    Values below 1e-20 of the peak are the solver noise floor, not the
    integrand; their tail contribution is bounded by ~1e-18 of the norm.
    """
    gmax = float(np.max(g))
    if gmax == 0.0 or g[-1] <= gmax * 1e-20:
        return 0.0
    sel = r >= r[-1] / 3.0
    rr, gg = r[sel], g[sel]
    pos = gg > gmax * 1e-20
    if np.count_nonzero(pos) < 4:
        return 0.0
    slope = np.polyfit(rr[pos], np.log(gg[pos]), 1)[0]
    if slope >= -1e-12:
        raise TruncationError(
            "integrand not decaying at r_max; tail unbounded", tail_estimate=math.inf)
    tail = g[-1] / (-slope)
    if tail > SOBOLEV_TAIL_TOL * max(total, tail):
        raise TruncationError(
            f"tail beyond r_max ~ {tail:.3e} exceeds {SOBOLEV_TAIL_TOL:g} of the norm",
            tail_estimate=tail)
    return tail


def sobolev_norm_values(r, values, N, u_weights=None, check_tail=True):
    """H^N norm of the density from gridded phi values (Plancherel).

    ((2 pi)^-3 int (1+|xi|^2)^N |phi|^2 dxi)^(1/2) with the xi-integral done
    as 4 pi r^2 dr (radial) or 2 pi r^2 dr du (axisymmetric).
    """
    values = np.asarray(values)
    sq = np.abs(values) ** 2
    if values.ndim == 1:
        integral, g = _radial_hn_integral(r, sq, N)
        if check_tail:
            _tail_check(r, g, integral)
        return math.sqrt(integral / (2.0 * math.pi**2))
    total = 0.0
    gsum = None
    for j, w in enumerate(u_weights):
        if w == 0.0:
            continue
        part, g = _radial_hn_integral(r, sq[:, j], N)
        total += w * part
        gsum = g * w if gsum is None else gsum + g * w
    if check_tail and gsum is not None:
        _tail_check(r, gsum, total)
    return math.sqrt(total / (2.0 * math.pi) ** 2)


def sobolev_norm(phi, N: int, check_tail=True):
    """H^N norm of the underlying density of a CharFn."""
    if N < 0 or int(N) != N:
        raise GridError("N must be a non-negative integer")
    if phi.is_axisym:
        return sobolev_norm_values(phi.r, phi.values, N, phi.u_weights, check_tail)
    return sobolev_norm_values(phi.r, phi.values, N, check_tail=check_tail)


# ---------------------------------------------------------------------------
# diagnostics / IO
# ---------------------------------------------------------------------------

def k_alpha_diagnostic(phi, alpha):
    """Membership proxies for K^alpha: ||phi - 1||_{D^alpha}, fitted near-zero
    order of 1 - phi, and the bound violation max(|phi| - 1, 0)."""
    om = phi.one_minus_values()
    if om.ndim == 2:
        om = om.max(axis=1)
    r = phi.r
    mask = (r > 0) & (om > 1e-13) & (om < MODEL_FIT_CEILING)
    if np.count_nonzero(mask) >= 4:
        order = float(np.polyfit(np.log(r[mask][:48]), np.log(om[mask][:48]), 1)[0])
    else:
        order = math.nan
    return {
        "d_alpha_to_1": d_alpha(phi, "one", alpha),
        "near_zero_order": order,
        "bound_violation": float(max(np.max(np.abs(phi.values)) - 1.0, 0.0)),
    }


def charfn_to_csv(phi, path):
    """Dump a CharFn as CSV: columns r[,u],re,im."""
    with open(path, "w") as fh:
        if phi.is_axisym:
            fh.write("r,u,re,im\n")
            for i, r in enumerate(phi.r):
                for j, u in enumerate(phi.u):
                    fh.write(f"{r!r},{u!r},{phi.values[i, j]!r},0.0\n")
        else:
            fh.write("r,re,im\n")
            for r, v in zip(phi.r, phi.values):
                fh.write(f"{r!r},{v!r},0.0\n")
