"""Collision cross sections and their angular-integral constants.

Angular integrals over the sphere reduce, by azimuthal symmetry, to

    2*pi * int_0^{pi/2} B(cos theta) w(theta) sin(theta) dtheta.

The non-cutoff model kernel behaves like b0 * theta^(-2-2s) at grazing
angles, so it is integrable only against weights vanishing at least like
theta^(2s+). All weights used here are written in cancellation-free form
(expm1/log) so that identities like lambda_2 = 0 hold to machine precision
instead of drowning in the singular mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, IntegrabilityError

THETA_MAX = math.pi / 2

INVERSE_POWER = "inverse_power_model"
CONSTANT = "constant_test"

# Floor (in theta) below which the singular end of an integral is treated as
# converged; the integrand decays like theta^(p-2s-1) with p-2s > 0 there.
_THETA_TINY = 1e-14


@dataclass(frozen=True)
class KernelSpec:
    """Cross-section descriptor.

    form:  INVERSE_POWER gives B(cos theta) = b0 * theta^(-2-2s) on (0, pi/2],
           the canonical representative of the grazing asymptote;
           CONSTANT gives B = b0 (a bounded Grad-cutoff test kernel).
    bound: optional n > 0 meaning the clamped kernel min{B, n}.
    """

    form: str
    s: float = 0.25
    b0: float = 1.0
    bound: float | None = None

    def __post_init__(self):
        if self.form not in (INVERSE_POWER, CONSTANT):
            raise DomainError(f"unknown kernel form {self.form!r}")
        if self.b0 <= 0:
            raise DomainError("kernel strength b0 must be positive")
        if self.form == INVERSE_POWER and not 0.0 < self.s < 1.0:
            raise DomainError("singularity exponent s must lie in (0, 1)")
        if self.bound is not None and self.bound <= 0:
            raise DomainError("bound n must be positive")

    @property
    def is_singular(self) -> bool:
        """True when the kernel mass on the sphere is infinite."""
        return self.form == INVERSE_POWER and self.bound is None

    @property
    def theta_kink(self) -> float | None:
        """Angle where min{B, n} switches branch, or None."""
        if self.form != INVERSE_POWER or self.bound is None:
            return None
        tk = (self.b0 / self.bound) ** (1.0 / (2.0 + 2.0 * self.s))
        return tk if tk < THETA_MAX else None

    def with_bound(self, n: float) -> "KernelSpec":
        return replace(self, bound=float(n))

    def b_theta(self, theta):
        """B(cos theta), vectorized, without domain checks."""
        theta = np.asarray(theta, dtype=float)
        if self.form == CONSTANT:
            b = np.full_like(theta, self.b0)
        else:
            with np.errstate(divide="ignore"):
                b = self.b0 * theta ** (-2.0 - 2.0 * self.s)
        if self.bound is not None:
            b = np.minimum(b, self.bound)
        return b


def eval_kernel(spec: KernelSpec, theta):
    """B(cos theta) (clamped by the bound if set) for theta in [0, pi/2]."""
    th = np.asarray(theta, dtype=float)
    if np.any(th < 0.0) or np.any(th > THETA_MAX + 1e-12):
        raise DomainError("theta outside [0, pi/2]")
    out = spec.b_theta(th)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# stable angular weights
# ---------------------------------------------------------------------------

def weight_lambda(theta, alpha):
    """cos^alpha(theta/2) + sin^alpha(theta/2) - 1, cancellation-free.

    Written as c^2*expm1((alpha-2) log c) + s^2*expm1((alpha-2) log s) so the
    value is exactly 0 for alpha = 2 and O(theta^alpha) near 0 without
    subtracting O(1) quantities.
    """
    theta = np.asarray(theta, dtype=float)
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    out = c * c * np.expm1((alpha - 2.0) * np.log(c))
    pos = s > 0.0
    out = np.where(pos, out + s * s * np.expm1((alpha - 2.0) * np.log(np.where(pos, s, 1.0))), out)
    return out


def weight_a(theta):
    """(3/4) sin^2 theta, the deviator relaxation weight."""
    st = np.sin(np.asarray(theta, dtype=float))
    return 0.75 * st * st


def weight_b(theta, delta):
    """1 - cos^{2+delta}(theta/2) - sin^{2+delta}(theta/2), cancellation-free.

    Equals c^2(1-c^delta) + s^2(1-s^delta); for delta = 2 this is
    2 c^2 s^2 = sin^2(theta)/2 identically.
    """
    theta = np.asarray(theta, dtype=float)
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    out = -c * c * np.expm1(delta * np.log(c))
    pos = s > 0.0
    out = np.where(pos, out - s * s * np.expm1(delta * np.log(np.where(pos, s, 1.0))), out)
    return out


# ---------------------------------------------------------------------------
# quadrature engine
# ---------------------------------------------------------------------------

def _panel_edges(spec: KernelSpec, theta_min: float) -> np.ndarray:
    """Panel edges resolving the kernel's structure on [theta_min, pi/2]."""
    edges = [THETA_MAX]
    kink = spec.theta_kink
    if spec.form == CONSTANT:
        lo = max(theta_min, 0.0)
        return np.concatenate([np.linspace(lo, THETA_MAX, 17)])
    lo = max(theta_min, _THETA_TINY)
    # geometric grading toward the singular end
    n_geo = max(8, int(math.ceil(math.log(THETA_MAX / lo) / math.log(1.35))))
    geo = np.geomspace(lo, THETA_MAX, n_geo + 1)
    if kink is not None and kink > lo:
        geo = np.unique(np.concatenate([geo, [kink]]))
    if theta_min <= 0.0 and spec.bound is not None:
        # bounded kernel: a smooth flat piece [0, lo] remains
        flat_hi = kink if (kink is not None and kink > lo) else lo
        flat = np.linspace(0.0, flat_hi, 9)
        geo = np.unique(np.concatenate([flat, geo[geo >= flat_hi]]))
    return np.asarray(geo)


def _gauss_on_panels(edges: np.ndarray, n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    a = edges[:-1][:, None]
    b = edges[1:][:, None]
    nodes = 0.5 * (b - a) * x[None, :] + 0.5 * (a + b)
    wts = 0.5 * (b - a) * np.broadcast_to(w, nodes.shape)
    panel_idx = np.broadcast_to(np.arange(len(edges) - 1)[:, None], nodes.shape)
    return nodes.ravel(), wts.ravel(), panel_idx.ravel()


def _integrate_log_tail(spec, weight, t_hi, rel_scale, gauss_n=12):
    """int_0^{exp(t_hi)} B w sin dtheta via unit panels in t = log theta.

    Extends toward t -> -inf until a panel contributes less than 1e-3 of the
    requested tolerance times the running scale.
    """
    x, w = np.polynomial.legendre.leggauss(gauss_n)
    total = 0.0
    hi = t_hi
    t_floor = math.log(_THETA_TINY)
    while hi > t_floor:
        lo = max(hi - 1.0, t_floor)
        tt = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        th = np.exp(tt)
        vals = spec.b_theta(th) * np.asarray(weight(th), dtype=float) * np.sin(th) * th
        piece = 0.5 * (hi - lo) * float(np.sum(w * vals))
        total += piece
        if abs(piece) < rel_scale:
            break
        hi = lo
    return total


def angular_integral(spec: KernelSpec, weight, rel_tol: float = 1e-8) -> float:
    """2*pi * int_0^{pi/2} B(cos theta) weight(theta) sin(theta) dtheta.

    For singular kernels the weight must vanish like theta^p with p > 2s;
    this is probed near theta = 0 and an IntegrabilityError is raised
    otherwise. Panels are graded toward the singularity and refined until a
    Gauss-order doubling changes the result by less than rel_tol.
    """
    if spec.is_singular:
        w6, w7 = float(np.asarray(weight(1e-6))), float(np.asarray(weight(1e-7)))
        if w6 != 0.0 or w7 != 0.0:
            if w7 == 0.0 or w6 == 0.0:
                raise IntegrabilityError("weight changes sign or vanishes erratically near 0")
            p_hat = math.log(abs(w6) / abs(w7)) / math.log(10.0)
            if p_hat <= 2.0 * spec.s + 1e-6:
                raise IntegrabilityError(
                    f"weight ~ theta^{p_hat:.3f} near 0; needs exponent > {2*spec.s:.3f}"
                )

    theta_switch = 1e-4 if spec.is_singular else 0.0
    edges = _panel_edges(spec, theta_switch)

    def body(n):
        th, wq, _ = _gauss_on_panels(edges, n)
        vals = spec.b_theta(th) * np.asarray(weight(th), dtype=float) * np.sin(th)
        return float(np.sum(wq * vals))

    coarse, fine = body(8), body(16)
    n = 16
    while abs(fine - coarse) > rel_tol * max(abs(fine), 1e-300) and n < 256:
        n *= 2
        coarse, fine = fine, body(n)

    total = fine
    if spec.is_singular:
        total += _integrate_log_tail(
            spec, weight, math.log(theta_switch), rel_tol * max(abs(total), 1e-300) * 1e-3
        )
    return 2.0 * math.pi * total


# ---------------------------------------------------------------------------
# constants of the paper
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelConstants:
    """All angular constants for one (kernel, alpha, delta) triple.

    lambda_alpha drives the D^alpha growth bound, mu_alpha = lambda_alpha/alpha
    is the self-similar dilation rate, A the deviator relaxation rate, B_delta
    the 2+delta contraction weight. eta0 = min{A - delta*mu_alpha, B_delta} and
    eta1 = min{A, B_delta} are the decay rates of the corrected metric toward
    the self-similar family and the Maxwellian respectively. For bounded
    kernels the sigma_bar-normalized versions (A_n, ...) are also filled.
    """

    alpha: float
    delta: float
    lambda_alpha: float
    mu_alpha: float
    A: float
    B_delta: float
    eta0: float
    eta1: float
    sigma_bar: float | None = None
    A_n: float | None = None
    B_n: float | None = None
    lambda_n_alpha: float | None = None
    eta0_n: float | None = None

    def as_dict(self) -> dict:
        out = {
            "alpha": self.alpha,
            "delta": self.delta,
            "lambda_alpha": self.lambda_alpha,
            "mu_alpha": self.mu_alpha,
            "A": self.A,
            "B_delta": self.B_delta,
            "eta0": self.eta0,
            "eta1": self.eta1,
        }
        if self.sigma_bar is not None:
            out.update(
                sigma_bar=self.sigma_bar,
                A_n=self.A_n,
                B_n=self.B_n,
                lambda_n_alpha=self.lambda_n_alpha,
                eta0_n=self.eta0_n,
            )
        return out


_CONSTANTS_CACHE: dict = {}


def constants(spec: KernelSpec, alpha: float, delta: float, rel_tol: float = 1e-8) -> KernelConstants:
    """All KernelConstants fields for (spec, alpha, delta); cached."""
    if not 0.0 < alpha <= 2.0:
        raise DomainError("alpha must lie in (0, 2]")
    if not 0.0 < delta <= alpha:
        raise DomainError("delta must lie in (0, alpha]")
    if spec.is_singular and alpha <= 2.0 * spec.s:
        raise IntegrabilityError(f"alpha = {alpha} <= 2s = {2*spec.s}: lambda_alpha diverges")

    key = (spec, alpha, delta, rel_tol)
    hit = _CONSTANTS_CACHE.get(key)
    if hit is not None:
        return hit

    lam = angular_integral(spec, lambda th: weight_lambda(th, alpha), rel_tol)
    a_const = angular_integral(spec, weight_a, rel_tol)
    b_const = angular_integral(spec, lambda th: weight_b(th, delta), rel_tol)
    mu = lam / alpha
    kc = dict(
        alpha=alpha,
        delta=delta,
        lambda_alpha=lam,
        mu_alpha=mu,
        A=a_const,
        B_delta=b_const,
        eta0=min(a_const - delta * mu, b_const),
        eta1=min(a_const, b_const),
    )
    if not spec.is_singular:
        sigma = angular_integral(spec, lambda th: np.ones_like(np.asarray(th, dtype=float)), rel_tol)
        a_n = a_const / sigma
        b_n = b_const / sigma
        lam_n = lam / sigma
        kc.update(
            sigma_bar=sigma,
            A_n=a_n,
            B_n=b_n,
            lambda_n_alpha=lam_n,
            eta0_n=min(b_n, a_n - delta * lam_n / alpha),
        )
    out = KernelConstants(**kc)
    _CONSTANTS_CACHE[key] = out
    return out


def cutoff_limit_sweep(spec: KernelSpec, alpha: float, delta: float, n_list) -> list[dict]:
    """Rows (n, sigma_n*A_n, sigma_n*B_n, sigma_n*lambda_n, sigma_n*eta0_n).

    Each row evaluates constants() on the clamped kernel min{B, n}; for a
    singular base kernel the rows converge monotonically to the unbounded
    constants as n grows.
    """
    n_list = list(n_list)
    if not n_list:
        raise DomainError("n_list must be non-empty")
    if any(b >= a for a, b in zip(n_list[1:], n_list)):
        raise DomainError("n_list must be strictly increasing")
    rows = []
    for n in n_list:
        kc = constants(spec.with_bound(n), alpha, delta)
        rows.append(
            {
                "n": n,
                "sigma_bar": kc.sigma_bar,
                "sig_A_n": kc.sigma_bar * kc.A_n,
                "sig_B_n": kc.sigma_bar * kc.B_n,
                "sig_lambda_n": kc.sigma_bar * kc.lambda_n_alpha,
                "sig_eta0_n": kc.sigma_bar * kc.eta0_n,
            }
        )
    return rows
