"""Time integration of the Fourier-side (Bobylev) collision flow.

The right-hand side at xi is the sphere integral of
B(cos theta) * (phi(xi+) phi(xi-) - phi(xi)) with |xi+| = r cos(theta/2),
|xi-| = r sin(theta/2). For non-cutoff kernels gain and loss diverge
separately, so the integrand is always evaluated as the joint difference.
The grazing region, where float cancellation would be amplified by the
singular kernel mass, is handled analytically: below the angle at which
|xi-| drops under the first grid node the bracket is expanded through the
small-r model and integrated against precomputed cumulative kernel moments.

Angles are integrated on kernel-graded Gauss panels, azimuth (axisymmetric
states) on an equispaced ring whose symmetric sum cancels the O(theta)
first-azimuthal-harmonic of the integrand exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .charfun import AxisymCharFn, RadialCharFn
from .errors import DomainError, GridError, StiffnessError
from .kernels import THETA_MAX, KernelSpec, weight_lambda

FLOW_BOUND_TOL = 1e-7   # transient |phi| slack during time stepping
_THETA_TINY = 1e-14

DIRECT = "direct"
NORMALIZED_CUTOFF = "normalized_cutoff"


# ---------------------------------------------------------------------------
# quadrature plan
# ---------------------------------------------------------------------------

def _segment_integral(spec, weight_fn, a, b, n_gauss=12):
    """2*pi int_a^b B w sin dtheta via unit log-theta panels (a may be 0)."""
    lo = math.log(max(a, _THETA_TINY))
    hi = math.log(b)
    if hi <= lo:
        return 0.0
    n_seg = max(1, int(math.ceil((hi - lo) / 0.5)))
    x, w = np.polynomial.legendre.leggauss(n_gauss)
    edges = np.linspace(lo, hi, n_seg + 1)
    t = 0.5 * (edges[1:, None] - edges[:-1, None]) * x + 0.5 * (edges[1:, None] + edges[:-1, None])
    wt = 0.5 * (edges[1:, None] - edges[:-1, None]) * np.broadcast_to(w, t.shape)
    th = np.exp(t)
    vals = spec.b_theta(th) * weight_fn(th) * np.sin(th) * th
    return 2.0 * math.pi * float(np.sum(wt * vals))


def _cumulative_moments(spec, weight_fn, edges):
    out = np.empty(edges.size)
    out[0] = _segment_integral(spec, weight_fn, 0.0, edges[0]) if edges[0] > 0 else 0.0
    for k in range(edges.size - 1):
        out[k + 1] = out[k] + _segment_integral(spec, weight_fn, max(edges[k], _THETA_TINY), edges[k + 1])
    return out


@dataclass
class QuadPlan:
    """Kernel- and grid-bound angular quadrature with analytic grazing data."""

    kernel: KernelSpec
    analytic: bool
    r_seam: float
    z_switch: float
    edges: np.ndarray
    theta: np.ndarray
    wB: np.ndarray          # gauss weight * 2 pi * B * sin(theta)
    c: np.ndarray           # cos(theta/2)
    s: np.ndarray           # sin(theta/2)
    panel: np.ndarray
    exps: tuple
    M_edge: dict            # p -> cumulative 2 pi int B sin * sin^p(theta/2)
    LAM_edge: dict          # p -> cumulative 2 pi int B sin * (c^p + s^p - 1)
    sigma_bar: float | None = None
    # azimuth tables (axisymmetric only)
    n_phi: int = 0
    phi_cos: np.ndarray | None = None
    up_j: np.ndarray | None = None
    up_t: np.ndarray | None = None
    um_j: np.ndarray | None = None
    um_t: np.ndarray | None = None
    u: np.ndarray | None = None
    # Legendre-resolved grazing moments (axisymmetric analytic panel):
    # the azimuth average of a Legendre mode of the polar cosine obeys the
    # addition theorem <P_k(u+)>_phi = P_k(cos(theta/2)) P_k(u), so per-mode
    # kernel moments make the panel exact for coefficient functions a_p(u).
    legP: np.ndarray | None = None       # (K+1, n_u) P_k at the u-grid
    legProj: np.ndarray | None = None    # (K+1, n_u) Gauss projector onto P_k
    W_pk: dict | None = None   # p -> (K+1, n_edges) int B sin (1 - c^p P_k(c) - s^p P_k(s))
    V_pk: dict | None = None   # p -> (K+1, n_edges) int B sin s^p P_k(s)

    def kmin(self, r):
        """Index of the first panel kept in the grid sum, per radius."""
        with np.errstate(divide="ignore"):
            ratio = np.where(r > 0, np.minimum(self.r_seam / np.maximum(r, 1e-300), 1.0), 1.0)
        theta_cut = 2.0 * np.arcsin(ratio)
        return np.minimum(np.searchsorted(self.edges, theta_cut, side="left"),
                          self.edges.size - 1)


def _lagrange4_table(u, pts):
    """4-point Lagrange interpolation stencil (base index, weights).

    Cubic accuracy in the polar cosine; linear interpolation's O(du^2) error
    systematically distorts the deviator relaxation rate at the percent
    level, which the corrected-metric experiments cannot absorb.
    """
    base = np.clip(np.searchsorted(u, pts) - 2, 0, u.size - 4)
    idx = base[..., None] + np.arange(4)
    x = u[idx]
    w = np.ones(idx.shape)
    for a in range(4):
        for b in range(4):
            if a != b:
                w[..., a] *= (pts - x[..., b]) / (x[..., a] - x[..., b])
    return base, w


def _lagrange4_eval(cols, base, w):
    """Apply a Lagrange table along u: cols (n_r, n_u) -> (n_r,) + base.shape."""
    return (cols[:, base] * w[..., 0] + cols[:, base + 1] * w[..., 1]
            + cols[:, base + 2] * w[..., 2] + cols[:, base + 3] * w[..., 3])


def _grid_edges(spec: KernelSpec, theta_lo: float, n_panels: int):
    if spec.form == "constant_test":
        return np.linspace(0.0, THETA_MAX, max(12, n_panels // 4) + 1)
    kink = spec.theta_kink
    if spec.bound is not None:
        lo = kink if (kink is not None and kink > 0) else THETA_MAX / 64.0
        flat = np.linspace(0.0, lo, 9)
        geo = np.geomspace(lo, THETA_MAX, n_panels + 1)
        return np.unique(np.concatenate([flat, geo]))
    return np.geomspace(theta_lo, THETA_MAX, n_panels + 1)


def build_plan(kernel: KernelSpec, phi, n_panels=None, n_gauss=None, n_phi=12) -> QuadPlan:
    """Angular quadrature plan bound to a state's grid and model exponents."""
    axisym = phi.is_axisym
    if n_panels is None:
        n_panels = 44 if axisym else 72
    if n_gauss is None:
        n_gauss = 3 if axisym else 4
    r_seam, r_max = phi.r_seam, phi.r_max
    analytic = kernel.is_singular
    theta_lo = 2.0 * math.asin(min(r_seam / r_max, 1.0))
    edges = _grid_edges(kernel, theta_lo, n_panels)

    x, w = np.polynomial.legendre.leggauss(n_gauss)
    a, b = edges[:-1][:, None], edges[1:][:, None]
    theta = (0.5 * (b - a) * x[None, :] + 0.5 * (a + b)).ravel()
    wq = (0.5 * (b - a) * np.broadcast_to(w, (edges.size - 1, n_gauss))).ravel()
    panel = np.broadcast_to(np.arange(edges.size - 1)[:, None],
                            (edges.size - 1, n_gauss)).ravel().copy()
    wB = wq * 2.0 * math.pi * kernel.b_theta(theta) * np.sin(theta)

    exps = tuple(sorted(set(float(p) for p in phi.model.exponents) | {2.0}))
    M_edge, LAM_edge = {}, {}
    if analytic:
        for p in exps:
            M_edge[p] = _cumulative_moments(kernel, lambda th, p=p: np.sin(th / 2.0) ** p, edges)
            LAM_edge[p] = _cumulative_moments(kernel, lambda th, p=p: weight_lambda(th, p), edges)
    W_pk = V_pk = legP = legProj = None
    if analytic and axisym:
        K_LEG = 8
        eye = np.eye(K_LEG + 1)

        def pk(k, x):
            return np.polynomial.legendre.legval(np.asarray(x, dtype=float), eye[k])

        W_pk, V_pk = {}, {}
        for p in exps:
            W_pk[p] = np.stack([_cumulative_moments(
                kernel,
                lambda th, p=p, k=k: (weight_lambda(th, p) * (-1.0)
                                      + np.cos(th / 2.0) ** p * (1.0 - pk(k, np.cos(th / 2.0)))
                                      + np.sin(th / 2.0) ** p * (1.0 - pk(k, np.sin(th / 2.0)))),
                edges) for k in range(K_LEG + 1)])
            V_pk[p] = np.stack([_cumulative_moments(
                kernel,
                lambda th, p=p, k=k: np.sin(th / 2.0) ** p * pk(k, np.sin(th / 2.0)),
                edges) for k in range(K_LEG + 1)])
        u = phi.u
        legP = np.stack([pk(k, u) for k in range(K_LEG + 1)])
        legProj = legP * phi.u_weights[None, :] * \
            ((2.0 * np.arange(K_LEG + 1) + 1.0) / 2.0)[:, None]
    sigma_bar = None
    if not kernel.is_singular:
        from .kernels import angular_integral
        sigma_bar = angular_integral(kernel, lambda th: np.ones_like(np.asarray(th, float)))

    plan = QuadPlan(kernel=kernel, analytic=analytic, r_seam=r_seam,
                    z_switch=100.0 * r_seam, edges=edges, theta=theta, wB=wB,
                    c=np.cos(theta / 2.0), s=np.sin(theta / 2.0), panel=panel,
                    exps=exps, M_edge=M_edge, LAM_edge=LAM_edge, sigma_bar=sigma_bar,
                    legP=legP, legProj=legProj, W_pk=W_pk, V_pk=V_pk)
    if axisym:
        u = phi.u
        phis = (np.arange(n_phi) + 0.5) * (2.0 * math.pi / n_phi)
        cosphi = np.cos(phis)
        root = np.sqrt(np.clip(1.0 - u * u, 0.0, 1.0))
        up = np.clip(u[None, :, None] * plan.c[:, None, None]
                     + root[None, :, None] * plan.s[:, None, None] * cosphi[None, None, :],
                     -1.0, 1.0)
        um = np.clip(u[None, :, None] * plan.s[:, None, None]
                     - root[None, :, None] * plan.c[:, None, None] * cosphi[None, None, :],
                     -1.0, 1.0)

        plan.up_j, plan.up_t = _lagrange4_table(u, up)
        plan.um_j, plan.um_t = _lagrange4_table(u, um)
        plan.n_phi = n_phi
        plan.phi_cos = cosphi
        plan.u = u
    return plan


# ---------------------------------------------------------------------------
# right-hand side
# ---------------------------------------------------------------------------

def _eval_radial(phi: RadialCharFn, rr):
    flat = rr.ravel()
    out = np.empty_like(flat)
    sub = flat < phi.r_seam
    if np.any(sub):
        out[sub] = phi.model.eval(flat[sub])
    out[~sub] = phi.spline()(flat[~sub])
    return out.reshape(rr.shape)


def _a_small_radial(phi: RadialCharFn, plan: QuadPlan, kmin):
    r, vals = phi.r, phi.values
    out = np.zeros_like(r)
    zone_b = r <= plan.z_switch
    for p, a in phi.model.coeff_map().items():
        rp = r**p
        out += np.where(zone_b,
                        -float(a) * rp * plan.LAM_edge[p][kmin],
                        -vals * float(a) * rp * plan.M_edge[p][kmin])
    dphi = phi.dspline()(r)
    out += np.where(zone_b, 0.0, -(r * dphi / 2.0) * plan.M_edge[2.0][kmin])
    return out


def _rhs_radial(phi: RadialCharFn, plan: QuadPlan, mode: str):
    r, vals = phi.r, phi.values
    vp = _eval_radial(phi, r[:, None] * plan.c[None, :])
    vm = _eval_radial(phi, r[:, None] * plan.s[None, :])
    prod = vp * vm
    if mode == NORMALIZED_CUTOFF:
        return prod @ plan.wB / plan.sigma_bar - vals
    if not plan.analytic:
        return (prod - vals[:, None]) @ plan.wB
    kmin = plan.kmin(r)
    mask = plan.panel[None, :] >= kmin[:, None]
    rhs = np.where(mask, (prod - vals[:, None]) * plan.wB[None, :], 0.0).sum(axis=1)
    return rhs + _a_small_radial(phi, plan, kmin)


def _u_derivatives(u, vals):
    """First/second u-derivatives on the nonuniform polar grid (3-pt)."""
    n = u.size
    gu = np.zeros_like(vals)
    guu = np.zeros_like(vals)
    hm = u[1:-1] - u[:-2]
    hp = u[2:] - u[1:-1]
    fm, f0, fp = vals[:, :-2], vals[:, 1:-1], vals[:, 2:]
    gu[:, 1:-1] = (-hp / (hm * (hm + hp)) * fm
                   + (hp - hm) / (hm * hp) * f0
                   + hm / (hp * (hm + hp)) * fp)
    guu[:, 1:-1] = 2.0 * (fm / (hm * (hm + hp)) - f0 / (hm * hp) + fp / (hp * (hm + hp)))
    gu[:, 0] = (vals[:, 1] - vals[:, 0]) / (u[1] - u[0])
    gu[:, -1] = (vals[:, -1] - vals[:, -2]) / (u[-1] - u[-2])
    guu[:, 0] = guu[:, 1]
    guu[:, -1] = guu[:, -2]
    return gu, guu


def _a_small_axisym(phi: AxisymCharFn, plan: QuadPlan, kmin):
    """Analytic grazing panel, Legendre-resolved in the polar cosine.

    Zone B (nodes inside the model region): the whole bracket is expanded in
    the model and the azimuth average of each Legendre mode follows the
    addition theorem, giving sum_p r^p sum_k ahat_{p,k} P_k(u) W_{p,k}(e).
    Zone A (the panel is a thin grazing sliver): phi(xi+) - phi is Taylor
    expanded (transport term) while the phi(xi-) deficit uses the same
    per-mode V moments.
    """
    r, u, vals = phi.r, phi.u, phi.values
    out = np.zeros_like(vals)
    zone_b = (r <= plan.z_switch)[:, None]
    for p, a in phi.model.coeff_map().items():
        ahat = plan.legProj @ np.asarray(a, dtype=float)          # (K+1,)
        rp = r**p
        w_at = plan.W_pk[p][:, kmin]                              # (K+1, n_r)
        v_at = plan.V_pk[p][:, kmin]
        term_b = rp[:, None] * ((w_at * ahat[:, None]).T @ plan.legP)
        term_a = -vals * rp[:, None] * ((v_at * ahat[:, None]).T @ plan.legP)
        out += np.where(zone_b, term_b, term_a)
    dr = phi.spline().derivative()(r)
    gu, guu = _u_derivatives(u, vals)
    ct = (-(r[:, None] * dr + u[None, :] * gu) / 2.0
          + (1.0 - u * u)[None, :] / 4.0 * guu)
    out += np.where(zone_b, 0.0, ct * plan.M_edge[2.0][kmin][:, None])
    return out


def _rhs_axisym(phi: AxisymCharFn, plan: QuadPlan, mode: str):
    r, u, vals = phi.r, phi.u, phi.values
    nq = plan.theta.size
    cp_all = phi.eval_radii(np.outer(plan.c, r).ravel()).reshape(nq, r.size, u.size)
    cm_all = phi.eval_radii(np.outer(plan.s, r).ravel()).reshape(nq, r.size, u.size)
    acc = np.zeros_like(vals)
    if plan.analytic and mode == DIRECT:
        kmin = plan.kmin(r)
    else:
        kmin = None
    for q in range(nq):
        hp = _lagrange4_eval(cp_all[q], plan.up_j[q], plan.up_t[q])
        hm = _lagrange4_eval(cm_all[q], plan.um_j[q], plan.um_t[q])
        avg = np.einsum("ijk,ijk->ij", hp, hm) / plan.n_phi
        if mode == NORMALIZED_CUTOFF:
            acc += plan.wB[q] * avg
        elif kmin is None:
            acc += plan.wB[q] * (avg - vals)
        else:
            w_eff = np.where(plan.panel[q] >= kmin, plan.wB[q], 0.0)
            acc += w_eff[:, None] * (avg - vals)
    if mode == NORMALIZED_CUTOFF:
        return acc / plan.sigma_bar - vals
    if kmin is not None:
        acc += _a_small_axisym(phi, plan, kmin)
    return acc


# ---------------------------------------------------------------------------
# flow state / stepping
# ---------------------------------------------------------------------------

@dataclass
class FlowState:
    """A characteristic function advancing under the collision flow."""

    phi: object
    kernel: KernelSpec
    mode: str = DIRECT
    t: float = 0.0
    plan: QuadPlan = None
    diagnostics: dict = field(default_factory=lambda: {
        "max_abs_phi": 1.0, "min_phi": 1.0, "mass_drift": 0.0, "rejections": 0})

    def __post_init__(self):
        if self.mode not in (DIRECT, NORMALIZED_CUTOFF):
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.mode == NORMALIZED_CUTOFF and self.kernel.is_singular:
            raise DomainError("normalized_cutoff mode needs a bounded kernel")
        if self.plan is None:
            self.plan = build_plan(self.kernel, self.phi)
        if abs(self.plan.r_seam - self.phi.r_seam) > 1e-15:
            raise GridError("plan was built for a different grid")


def collision_rhs(state: FlowState):
    """Time derivative of phi on the grid (joint-difference integrand)."""
    if state.phi.is_axisym:
        return _rhs_axisym(state.phi, state.plan, state.mode)
    return _rhs_radial(state.phi, state.plan, state.mode)


def _rebuild(phi, new_vals, bound_tol):
    if phi.is_axisym:
        return AxisymCharFn(phi.r, phi.u, new_vals, u_weights=phi.u_weights,
                            exponents=phi.model.exponents, validate=False,
                            bound_tol=bound_tol)
    return RadialCharFn(phi.r, new_vals, exponents=phi.model.exponents,
                        validate=False, bound_tol=bound_tol)


def _rhs_of_values(state, vals):
    probe = _rebuild(state.phi, vals, FLOW_BOUND_TOL)
    if probe.is_axisym:
        return _rhs_axisym(probe, state.plan, state.mode)
    return _rhs_radial(probe, state.plan, state.mode)


def step(state: FlowState, dt: float, bound_tol: float = FLOW_BOUND_TOL) -> FlowState:
    """One explicit RK4 step with exact mass renormalization.

    The step is rejected (caller halves dt) when max|phi| leaves the
    characteristic bound by more than bound_tol.
    """
    vals = state.phi.values
    k1 = collision_rhs(state)
    k2 = _rhs_of_values(state, vals + 0.5 * dt * k1)
    k3 = _rhs_of_values(state, vals + 0.5 * dt * k2)
    k4 = _rhs_of_values(state, vals + dt * k3)
    new = vals + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    drift = float(np.max(np.abs(new[0] - 1.0)))
    new_phi = _rebuild(state.phi, new, bound_tol)
    new_phi.values[0] = 1.0
    excess = float(np.max(np.abs(new_phi.values))) - 1.0
    if excess > bound_tol:
        return None  # signal rejection
    diag = dict(state.diagnostics)
    diag["mass_drift"] = max(diag["mass_drift"], drift)
    diag["max_abs_phi"] = max(diag["max_abs_phi"], 1.0 + max(excess, 0.0))
    diag["min_phi"] = min(diag["min_phi"], float(np.min(new_phi.values)))
    return FlowState(phi=new_phi, kernel=state.kernel, mode=state.mode,
                     t=state.t + dt, plan=state.plan, diagnostics=diag)


def loss_rate_estimate(state: FlowState) -> float:
    """Effective loss rate max_xi int B (1 - |phi(xi^-)|) dsigma (stability)."""
    if state.mode == NORMALIZED_CUTOFF:
        return 1.0
    phi, plan = state.phi, state.plan
    r = phi.r
    pick = np.unique(np.concatenate([r.size - 1 - np.arange(4), [r.size // 2]]))
    sample = coercivity_integral(state, radii_idx=pick)
    return max(float(np.max(sample)), 1e-12)


def evolve(state: FlowState, t_end: float, observers=None, obs_times=None,
           dt: float | None = None, dt_max: float = 0.25, cfl: float = 1.0,
           bound_tol: float = FLOW_BOUND_TOL):
    """Advance to t_end, invoking observers at the requested times.

    dt = None uses an adaptive step bounded by the RK4 stability limit of the
    effective loss rate; a fixed dt makes runs bitwise reproducible across
    schedules. Returns (final_state, record) with record["t"] plus one series
    per observer tag.
    """
    if t_end < state.t:
        raise DomainError("t_end must be >= state.t")
    observers = observers or {}
    if obs_times is None:
        obs_times = np.array([t_end])
    obs_times = np.asarray(sorted(t for t in np.atleast_1d(obs_times)
                                  if state.t - 1e-12 <= t <= t_end + 1e-12))
    record = {"t": []}
    for tag in observers:
        record[tag] = []

    def observe(st):
        record["t"].append(st.t)
        for tag, fn in observers.items():
            record[tag].append(fn(st))

    auto = dt is None
    dt_eff = dt
    steps_since_estimate = 999
    pending = list(obs_times)
    if pending and abs(pending[0] - state.t) <= 1e-12:
        observe(state)
        pending.pop(0)
    while state.t < t_end - 1e-12:
        if auto and steps_since_estimate >= 8:
            rate = loss_rate_estimate(state)
            dt_eff = min(dt_max, cfl * 2.5 / rate)
            steps_since_estimate = 0
        target = pending[0] if pending else t_end
        h = min(dt_eff, target - state.t)
        nxt = step(state, h, bound_tol)
        tries = 0
        while nxt is None:
            h *= 0.5
            dt_eff *= 0.5
            tries += 1
            state.diagnostics["rejections"] += 1
            if h < 1e-12:
                raise StiffnessError("dt underflow after repeated step rejections")
            nxt = step(state, h, bound_tol)
        state = nxt
        steps_since_estimate += 1
        if pending and state.t >= pending[0] - 1e-12:
            observe(state)
            pending.pop(0)
    record = {k: np.asarray(v) for k, v in record.items()}
    return state, record


# ---------------------------------------------------------------------------
# coercivity diagnostic
# ---------------------------------------------------------------------------

def coercivity_integral(state: FlowState, radii_idx=None):
    """int_{S^2} B (1 - |phi(xi^-)|) dsigma at the chosen grid radii."""
    phi, plan = state.phi, state.plan
    r_all = phi.r
    idx = np.arange(r_all.size) if radii_idx is None else np.asarray(radii_idx)
    r = r_all[idx]
    kmin = plan.kmin(r) if plan.analytic else None
    if phi.is_axisym:
        u = phi.u
        out = np.zeros((r.size, u.size))
        for q in range(plan.theta.size):
            cm = phi.eval_radii(r * plan.s[q])
            hm = _lagrange4_eval(cm, plan.um_j[q], plan.um_t[q])
            term = 1.0 - np.abs(hm).mean(axis=2)
            if kmin is None:
                out += plan.wB[q] * term
            else:
                out += np.where(plan.panel[q] >= kmin, plan.wB[q], 0.0)[:, None] * term
        if kmin is not None:
            for p, a in phi.model.coeff_map().items():
                ahat = plan.legProj @ np.asarray(a, dtype=float)
                v_at = plan.V_pk[p][:, kmin]
                out += (r**p)[:, None] * ((v_at * ahat[:, None]).T @ plan.legP)
        return out
    vm = np.abs(_eval_radial(phi, r[:, None] * plan.s[None, :]))
    if kmin is None:
        return (1.0 - vm) @ plan.wB
    mask = plan.panel[None, :] >= kmin[:, None]
    out = np.where(mask, (1.0 - vm) * plan.wB[None, :], 0.0).sum(axis=1)
    for p, a in phi.model.coeff_map().items():
        out += float(a) * r**p * plan.M_edge[p][kmin]
    return out


def coercivity_check(state: FlowState, mu_alpha: float, s_exp: float,
                     t1: float | None = None, r_threshold: float = 2.0):
    """Fit the largest kappa with I(xi) >= kappa e^{2 s mu t} |xi|^{2s}, |xi| >= 2.

    Diagnostic only; reports nodes where the dissipation integral fails to be
    positive (the degenerate Dirac case).
    """
    if t1 is not None and state.t < t1 - 1e-12:
        raise DomainError(f"coercivity check requested before t1 = {t1}")
    r = state.phi.r
    idx = np.nonzero(r >= r_threshold)[0]
    if idx.size == 0:
        raise GridError("no grid radii with |xi| >= threshold")
    vals = coercivity_integral(state, radii_idx=idx)
    scale = math.exp(2.0 * s_exp * mu_alpha * state.t) * r[idx] ** (2.0 * s_exp)
    if vals.ndim == 2:
        ratios = vals.min(axis=1) / scale
        nonpos = int(np.count_nonzero(vals <= 0.0))
    else:
        ratios = vals / scale
        nonpos = int(np.count_nonzero(vals <= 0.0))
    return {
        "kappa_fit": float(np.min(ratios)),
        "violations": nonpos,
        "t": state.t,
        "r_threshold": r_threshold,
    }
