"""Velocity-space side: analytic density families, moments, cutoffs.

All families are centered (zero mean) unless an explicit axial shift is set
(test-only, for the recentering machinery). Axisymmetric families have their
symmetry axis along e1; (rho, w) velocity quadrature uses w = cosine of the
angle to that axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import transforms
from .charfun import (AxisymCharFn, RadialCharFn, SmallRModel, cutoff_x,
                      polar_grid, radial_grid)
from .errors import (DomainError, GridError, HypothesisError,
                     MomentDivergenceError, RTooSmallError)

MAXWELLIAN = "maxwellian"
ANISO_GAUSSIAN = "aniso_gaussian"
MIXTURE = "mixture"
SELFSIM_PROFILE = "selfsim_profile"
PERTURBED_PROFILE = "perturbed_profile"

_INV_TPI = (2.0 * math.pi) ** -1.5


@dataclass(frozen=True)
class DensitySpec:
    """One analytic velocity density.

    params by family:
      maxwellian:         T (temperature), shift (axial mean, tests only)
      aniso_gaussian:     temps = (T1, T2, T3), T2 == T3 (axis e1)
      mixture:            weights + components (radial members)
      selfsim_profile:    profile handle from selfsim.construct_profile
      perturbed_profile:  profile + eps*(h1 - h2), h1 = aniso_gaussian(temps),
                          h2 = maxwellian(mean(temps)); the infinite-energy
                          tails cancel exactly and the difference carries a
                          nonzero deviator.
    """

    family: str
    T: float = 1.0
    temps: tuple = ()
    shift: float = 0.0
    weights: tuple = ()
    components: tuple = ()
    profile: object = None
    eps: float = 0.0

    # ------------------------------------------------------------------ build
    @staticmethod
    def maxwellian(T: float, shift: float = 0.0) -> "DensitySpec":
        if T <= 0:
            raise DomainError("temperature must be positive")
        return DensitySpec(MAXWELLIAN, T=T, shift=shift)

    @staticmethod
    def aniso_gaussian(T1: float, T2: float, T3: float) -> "DensitySpec":
        if min(T1, T2, T3) <= 0:
            raise DomainError("temperatures must be positive")
        if abs(T2 - T3) > 1e-14 * max(T2, T3):
            raise GridError("axisymmetric grids need T2 == T3 (axis e1)")
        return DensitySpec(ANISO_GAUSSIAN, temps=(T1, T2, T3))

    @staticmethod
    def mixture(weights, components) -> "DensitySpec":
        weights = tuple(float(w) for w in weights)
        if abs(sum(weights) - 1.0) > 1e-12 or min(weights) < 0:
            raise DomainError("mixture weights must be nonnegative and sum to 1")
        return DensitySpec(MIXTURE, weights=weights, components=tuple(components))

    @staticmethod
    def selfsim(profile) -> "DensitySpec":
        return DensitySpec(SELFSIM_PROFILE, profile=profile)

    @staticmethod
    def perturbed(profile, eps: float, temps) -> "DensitySpec":
        t1, t2, t3 = temps
        if abs(t2 - t3) > 1e-14 * max(t2, t3):
            raise GridError("perturbation must be axisymmetric about e1")
        return DensitySpec(PERTURBED_PROFILE, profile=profile, eps=float(eps),
                           temps=(float(t1), float(t2), float(t3)))

    # ------------------------------------------------------------- structure
    @property
    def is_radial(self) -> bool:
        if self.family in (MAXWELLIAN, SELFSIM_PROFILE):
            return self.shift == 0.0
        if self.family == MIXTURE:
            return all(c.is_radial for c in self.components)
        if self.family == ANISO_GAUSSIAN:
            t1, t2, _ = self.temps
            return abs(t1 - t2) < 1e-15
        return False

    def energy(self) -> float:
        """int |v|^2 f dv (math.inf for the infinite-energy families)."""
        if self.family == MAXWELLIAN:
            return 3.0 * self.T + self.shift**2
        if self.family == ANISO_GAUSSIAN:
            return float(sum(self.temps))
        if self.family == MIXTURE:
            return float(sum(w * c.energy() for w, c in zip(self.weights, self.components)))
        return math.inf

    def second_moment_matrix(self):
        """int v_j v_l f dv as a 3x3 matrix, or None when divergent."""
        if self.family == MAXWELLIAN:
            m = np.diag([self.T] * 3)
            m[0, 0] += self.shift**2
            return m
        if self.family == ANISO_GAUSSIAN:
            return np.diag(self.temps)
        if self.family == MIXTURE:
            return sum(w * c.second_moment_matrix()
                       for w, c in zip(self.weights, self.components))
        return None

    def mean_vector(self):
        if self.family == MAXWELLIAN:
            return np.array([self.shift, 0.0, 0.0])
        return np.zeros(3)

    # -------------------------------------------------------- velocity space
    def eval_velocity(self, rho, w):
        """f at |v| = rho, axis cosine w (arrays broadcast together)."""
        rho = np.asarray(rho, dtype=float)
        w = np.asarray(w, dtype=float)
        if self.family == MAXWELLIAN:
            if self.shift == 0.0:
                return _INV_TPI * self.T**-1.5 * np.exp(-rho * rho / (2.0 * self.T))
            d2 = rho * rho + self.shift**2 - 2.0 * rho * w * self.shift
            return _INV_TPI * self.T**-1.5 * np.exp(-d2 / (2.0 * self.T))
        if self.family == ANISO_GAUSSIAN:
            t1, t2, _ = self.temps
            q = rho * rho * (w * w / t1 + (1.0 - w * w) / t2)
            return _INV_TPI * (t1 * t2 * t2) ** -0.5 * np.exp(-q / 2.0)
        if self.family == MIXTURE:
            return sum(wt * c.eval_velocity(rho, w)
                       for wt, c in zip(self.weights, self.components))
        if self.family == SELFSIM_PROFILE:
            return self.profile.velocity_density(rho) * np.ones_like(w)
        if self.family == PERTURBED_PROFILE:
            h1 = DensitySpec.aniso_gaussian(*self.temps)
            h2 = DensitySpec.maxwellian(sum(self.temps) / 3.0)
            return (self.profile.velocity_density(rho) * np.ones_like(w)
                    + self.eps * (h1.eval_velocity(rho, w) - h2.eval_velocity(rho, w)))
        raise DomainError(self.family)

    # --------------------------------------------------------- Fourier space
    def model_exponents(self) -> tuple:
        if self.family in (MAXWELLIAN, ANISO_GAUSSIAN, MIXTURE):
            return (2.0, 4.0)
        if self.family == SELFSIM_PROFILE:
            a = self.profile.alpha
            return (a, min(2.0 * a, 4.0))
        if self.family == PERTURBED_PROFILE:
            return (self.profile.alpha, 2.0)
        raise DomainError(self.family)

    def _radial_char_values(self, r):
        if self.family == MAXWELLIAN and self.shift == 0.0:
            return np.exp(-self.T * r * r / 2.0)
        if self.family == ANISO_GAUSSIAN and self.is_radial:
            return np.exp(-self.temps[0] * r * r / 2.0)
        if self.family == MIXTURE:
            return sum(w * c._radial_char_values(r)
                       for w, c in zip(self.weights, self.components))
        if self.family == SELFSIM_PROFILE:
            return self.profile.psi_hat(r)
        raise GridError(f"{self.family} is not radially symmetric")

    def char_radial(self, r=None) -> RadialCharFn:
        """Fourier transform phi(|xi|) on a radial grid (analytic families)."""
        if not self.is_radial:
            raise GridError(f"{self.family} needs an axisymmetric grid")
        r = radial_grid() if r is None else np.asarray(r, dtype=float)
        vals = self._radial_char_values(r)
        return RadialCharFn(r, vals, model=self._radial_model())

    def _radial_model(self):
        if self.family == MAXWELLIAN and self.shift == 0.0:
            return SmallRModel((2.0, 4.0), np.array([self.T / 2.0, -self.T**2 / 8.0]))
        if self.family == ANISO_GAUSSIAN and self.is_radial:
            t = self.temps[0]
            return SmallRModel((2.0, 4.0), np.array([t / 2.0, -t * t / 8.0]))
        if self.family == MIXTURE:
            coeffs = sum(w * np.asarray(c._radial_model().coeffs)
                         for w, c in zip(self.weights, self.components))
            return SmallRModel((2.0, 4.0), coeffs)
        if self.family == SELFSIM_PROFILE:
            return self.profile.psi_hat.model
        raise GridError(self.family)

    def char_axisym(self, r=None, u=None, u_weights=None) -> AxisymCharFn:
        """phi(|xi|, u) on an axisymmetric grid, symmetry axis e1."""
        if r is None:
            r = radial_grid(n=512)
        if u is None:
            u, u_weights = polar_grid()
        r = np.asarray(r, dtype=float)
        u = np.asarray(u, dtype=float)
        if self.family == ANISO_GAUSSIAN:
            t1, t2, _ = self.temps
            teff = t2 + (t1 - t2) * u * u
            vals = np.exp(-np.outer(r * r, teff) / 2.0)
            model = SmallRModel((2.0, 4.0), np.stack([teff / 2.0, -teff**2 / 8.0]))
            return AxisymCharFn(r, u, vals, model=model, u_weights=u_weights)
        if self.family == PERTURBED_PROFILE:
            t1, t2, _ = self.temps
            tbar = sum(self.temps) / 3.0
            teff = t2 + (t1 - t2) * u * u
            psi = self.profile.psi_hat(r)
            vals = (psi[:, None]
                    + self.eps * (np.exp(-np.outer(r * r, teff) / 2.0)
                                  - np.exp(-tbar * r * r / 2.0)[:, None]))
            a = self.profile.alpha
            prof_cmap = self.profile.psi_hat.model.coeff_map()
            a_alpha = np.full(u.size, float(prof_cmap.get(a, 0.0)))
            a2 = self.eps * (teff - tbar) / 2.0 + float(prof_cmap.get(2.0, 0.0))
            model = SmallRModel((a, 2.0), np.stack([a_alpha, a2]))
            return AxisymCharFn(r, u, vals, model=model, u_weights=u_weights)
        if self.is_radial:
            rad = self.char_radial(r)
            vals = np.repeat(rad.values[:, None], u.size, axis=1)
            cmap = rad.model
            model = SmallRModel(cmap.exponents,
                                np.repeat(np.asarray(cmap.coeffs)[:, None], u.size, axis=1))
            return AxisymCharFn(r, u, vals, model=model, u_weights=u_weights)
        raise GridError(f"no axisymmetric transform for {self.family}")


# ---------------------------------------------------------------------------
# moments / deviator
# ---------------------------------------------------------------------------

def _deviatoric(M):
    return M - np.trace(M) / 3.0 * np.eye(3)


def _difference_moments(f: DensitySpec, g: DensitySpec):
    """Second-moment matrix of f - g when it is finite; else None.

    Handles the infinite-energy case where both are built over the same
    self-similar profile so the tails cancel exactly.
    """
    mf, mg = f.second_moment_matrix(), g.second_moment_matrix()
    if mf is not None and mg is not None:
        return mf - mg
    pf = f.profile if f.family in (SELFSIM_PROFILE, PERTURBED_PROFILE) else None
    pg = g.profile if g.family in (SELFSIM_PROFILE, PERTURBED_PROFILE) else None
    if pf is not None and pf is pg:
        dm = np.zeros((3, 3))
        for spec, sign in ((f, 1.0), (g, -1.0)):
            if spec.family == PERTURBED_PROFILE:
                tbar = sum(spec.temps) / 3.0
                dm += sign * spec.eps * (np.diag(spec.temps) - tbar * np.eye(3))
        return dm
    return None


def second_moment_deviator(f: DensitySpec, g: DensitySpec, A: float = 0.0):
    """Trace-free deviator P_{jl}(0) of the pair, packed with its rate A.

    P_{jl}(0) = int (v_j v_l - delta_jl |v|^2 / 3)(f - g) dv; closed form for
    Gaussian families, exact tail cancellation for profile pairs.
    """
    from .charfun import Deviator

    dm = _difference_moments(f, g)
    if dm is None:
        raise MomentDivergenceError(
            "pair has non-cancelling infinite-energy tails; deviator undefined")
    return Deviator(_deviatoric(dm), A)


def check_zero_energy_perturbation(f: DensitySpec, g: DensitySpec):
    """Signed residual int |v|^2 (f - g) dv and whether it vanishes."""
    dm = _difference_moments(f, g)
    if dm is None:
        raise MomentDivergenceError("energy difference diverges for this pair")
    residual = float(np.trace(dm))
    return abs(residual) < 1e-8, residual


# ---------------------------------------------------------------------------
# cutoff-recenter approximation
# ---------------------------------------------------------------------------

def _velocity_quad(rho_max: float, n_panels: int = 48, n_gauss: int = 8, n_w: int = 64):
    x, wq = np.polynomial.legendre.leggauss(n_gauss)
    edges = np.linspace(0.0, rho_max, n_panels + 1)
    a, b = edges[:-1][:, None], edges[1:][:, None]
    rho = (0.5 * (b - a) * x[None, :] + 0.5 * (a + b)).ravel()
    wr = (0.5 * (b - a) * np.broadcast_to(wq, (n_panels, n_gauss))).ravel()
    w, ww = np.polynomial.legendre.leggauss(n_w)
    return rho, wr, w, ww


@dataclass
class CutoffApprox:
    """Normalized, recentered truncation f_{0R}(v) = f~_{0R}(v + a_R).

    Unit mass and zero mean hold by construction; all moments are finite
    because the support is contained in |v| <= 2R.
    """

    R: float
    a_R: np.ndarray              # recentering shift (along the density axis, e1)
    normalization: float         # int f0 X_R dv before normalizing
    spec: DensitySpec
    _rho: np.ndarray = field(repr=False, default=None)
    _wr: np.ndarray = field(repr=False, default=None)
    _w: np.ndarray = field(repr=False, default=None)
    _ww: np.ndarray = field(repr=False, default=None)
    _ftilde: np.ndarray = field(repr=False, default=None)  # includes X_R / normalization

    def _integrate(self, fn):
        vals = fn(self._rho[:, None], self._w[None, :]) * self._ftilde
        return 2.0 * math.pi * float(
            (self._wr[:, None] * self._ww[None, :] * vals * self._rho[:, None] ** 2).sum())

    def mass(self) -> float:
        return self._integrate(lambda rho, w: np.ones_like(rho * w))

    def mean_vector(self) -> np.ndarray:
        ax = self._integrate(lambda rho, w: rho * w) - self.a_R[0]
        return np.array([ax, 0.0, 0.0])

    def second_moment_matrix(self) -> np.ndarray:
        ax = self._integrate(lambda rho, w: (rho * w) ** 2) - self.a_R[0] ** 2
        perp = self._integrate(lambda rho, w: rho * rho * (1.0 - w * w)) / 2.0
        return np.diag([ax, perp, perp])

    def abs_moment(self, p: float) -> float:
        a = self.a_R[0]
        return self._integrate(
            lambda rho, w: (rho * rho + a * a - 2.0 * a * rho * w) ** (p / 2.0))


def cutoff_approx(f: DensitySpec, R: float) -> CutoffApprox:
    """Truncate with X_R(v) = X(|v|/R), normalize, recenter (a_R removed)."""
    if R <= 0:
        raise DomainError("R must be positive")
    rho, wr, w, ww = _velocity_quad(2.0 * R)
    fv = f.eval_velocity(rho[:, None], w[None, :]) * cutoff_x(rho / R)[:, None]
    base = 2.0 * math.pi * wr[:, None] * ww[None, :] * rho[:, None] ** 2
    norm = float((base * fv).sum())
    if norm < 0.5:
        raise RTooSmallError(f"mass under cutoff = {norm:.4f} < 1/2; increase R")
    ftilde = fv / norm
    a_axis = float((base * ftilde * (rho[:, None] * w[None, :])).sum())
    return CutoffApprox(R=R, a_R=np.array([a_axis, 0.0, 0.0]), normalization=norm,
                        spec=f, _rho=rho, _wr=wr, _w=w, _ww=ww, _ftilde=ftilde)


def deviator_convergence_sweep(f: DensitySpec, g: DensitySpec, R_list, target=None):
    """Rows (R, P^R, max-entry distance to the R -> inf deviator)."""
    if target is None:
        target = second_moment_deviator(f, g).P
    rows = []
    for R in R_list:
        pf = _deviatoric(cutoff_approx(f, R).second_moment_matrix())
        pg = _deviatoric(cutoff_approx(g, R).second_moment_matrix())
        pr = pf - pg
        rows.append({"R": R, "P_R": pr, "err": float(np.max(np.abs(pr - target)))})
    return rows


# ---------------------------------------------------------------------------
# transforms / moment-to-metric bound
# ---------------------------------------------------------------------------

def radial_transform(f: DensitySpec, r=None) -> RadialCharFn:
    """phi on the standard grid by spherical-sine quadrature (radial f).

    Numerical counterpart of char_radial for densities only available
    pointwise; round-trips with inverse_radial to ~1e-6.
    """
    if not f.is_radial:
        raise GridError("radial_transform needs a radial density")
    r = radial_grid() if r is None else np.asarray(r, dtype=float)
    vals = transforms.forward_radial(lambda rho: f.eval_velocity(rho, 0.0), r)
    return RadialCharFn(r, vals, exponents=f.model_exponents(), bound_tol=1e-7)


def inverse_radial_density(phi, rho):
    return transforms.inverse_radial(phi, rho)


def difference_eval(f: DensitySpec, g: DensitySpec):
    """Pointwise (f - g)(rho, w) with exact cancellation for profile pairs."""
    pf = f.profile if f.family in (SELFSIM_PROFILE, PERTURBED_PROFILE) else None
    pg = g.profile if g.family in (SELFSIM_PROFILE, PERTURBED_PROFILE) else None
    if pf is not None and pf is pg:
        def diff(rho, w):
            out = 0.0
            for spec, sign in ((f, 1.0), (g, -1.0)):
                if spec.family == PERTURBED_PROFILE:
                    h1 = DensitySpec.aniso_gaussian(*spec.temps)
                    h2 = DensitySpec.maxwellian(sum(spec.temps) / 3.0)
                    out = out + sign * spec.eps * (
                        h1.eval_velocity(rho, w) - h2.eval_velocity(rho, w))
            return out
        return diff
    return lambda rho, w: f.eval_velocity(rho, w) - g.eval_velocity(rho, w)


def moment_metric_bound_check(f: DensitySpec, g: DensitySpec, delta: float,
                              deviator, f_hat=None, g_hat=None, rho_max=30.0):
    """Both sides of the moment-to-metric bound and their ratio.

    Left: ||f_hat - g_hat - P_tilde(0,.)||_{D^{2+delta}}; right:
    int (1 + |v|^{2+delta}) |f - g| dv. Requires 0 < delta <= 1 and centered
    densities.
    """
    from .charfun import d_metric_with_correction

    if not 0.0 < delta <= 1.0:
        raise HypothesisError("delta_range", "moment-to-metric bound needs 0 < delta <= 1")
    if np.max(np.abs(f.mean_vector())) > 0 or np.max(np.abs(g.mean_vector())) > 0:
        raise HypothesisError("zero_mean", "densities must be centered")
    rho, wr, w, ww = _velocity_quad(rho_max)
    diff = difference_eval(f, g)(rho[:, None], w[None, :])
    base = 2.0 * math.pi * wr[:, None] * ww[None, :] * rho[:, None] ** 2
    weight = 1.0 + rho[:, None] ** (2.0 + delta)
    rhs = float((base * weight * np.abs(diff)).sum())
    if not math.isfinite(rhs):
        return {"rhs": math.inf, "lhs": math.nan, "ratio": math.nan, "finite": False}
    if f_hat is None or g_hat is None:
        if f.is_radial and g.is_radial:
            r = radial_grid()
            f_hat, g_hat = f.char_radial(r), g.char_radial(r)
        else:
            r, (u, uw) = radial_grid(n=512), polar_grid()
            f_hat, g_hat = f.char_axisym(r, u, uw), g.char_axisym(r, u, uw)
    lhs = d_metric_with_correction(f_hat, g_hat, deviator, 0.0, delta)
    ratio = 0.0 if rhs == 0.0 and lhs == 0.0 else lhs / rhs
    return {"rhs": rhs, "lhs": lhs, "ratio": ratio,
            "finite": math.isfinite(lhs), "delta": delta}
