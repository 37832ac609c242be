import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import bobylev as bl
from bobylev.charfun import (RadialCharFn, SmallRModel, constant_one,
                             d_metric_with_correction, fit_small_r_model,
                             sobolev_norm_values)
from bobylev.errors import BoundViolation, GridError, RangeError

R = bl.radial_grid()


def gaussian(T, r=R):
    return bl.DensitySpec.maxwellian(T).char_radial(r)


def stable_law(K, alpha, r=R):
    model = SmallRModel((alpha, 2 * alpha), np.array([K, -K * K / 2.0]))
    return RadialCharFn(r, np.exp(-K * r**alpha), model=model)


# ---------------------------------------------------------------- evaluation

def test_eval_constant_one():
    one = constant_one(gaussian(1.0))
    assert one(0.73) == 1.0


def test_eval_nodal_maxwellian():
    phi = gaussian(1.0)
    i = np.searchsorted(R, 1.0)
    assert abs(phi(R[i]) - math.exp(-R[i] ** 2 / 2)) < 1e-12


def test_eval_below_first_node_stable_law():
    phi = stable_law(1.0, 1.5)
    r = R[1] / 7.0
    # Taylor of the closed form: 1 - r^1.5 + O(r^3)
    assert abs(phi(r) - (1.0 - r**1.5)) < 2 * r**3.0 + 1e-15


def test_eval_seam_continuity():
    phi = gaussian(1.3)
    eps = 1e-9 * phi.r_seam
    below, above = phi(phi.r_seam - eps), phi(phi.r_seam + eps)
    assert abs(below - above) < 1e-6


def test_eval_out_of_range():
    phi = gaussian(1.0)
    with pytest.raises(RangeError):
        phi(phi.r_max * 1.01)


def test_bound_validation():
    vals = np.ones_like(R)
    vals[100] = 1.1
    with pytest.raises(BoundViolation):
        RadialCharFn(R, vals)


# ---------------------------------------------------------------- d_alpha

def test_d_alpha_identical():
    phi = gaussian(1.0)
    assert bl.d_alpha(phi, phi, 2.0) == 0.0


def test_d_alpha_gaussians_half_gap():
    # sup |e^{-a r^2/2} - e^{-b r^2/2}| / r^2 = |a - b| / 2, attained at 0;
    # dense-grid oracle confirms the interior stays below the limit
    a, b = 1.0, 2.0
    rr = np.geomspace(1e-6, 20, 4000)
    dense = np.max(np.abs(np.exp(-a * rr**2 / 2) - np.exp(-b * rr**2 / 2)) / rr**2)
    assert dense <= 0.5 + 1e-9
    val = bl.d_alpha(gaussian(a), gaussian(b), 2.0)
    assert abs(val - 0.5) < 1e-6


def test_d_alpha_stable_vs_one():
    K, alpha = 1.3, 1.5
    assert abs(bl.d_alpha(stable_law(K, alpha), "one", alpha) - K) < 1e-9 * K


def test_d_alpha_divergence_flag():
    # models differing at an order below alpha: +inf with the flag set
    res = bl.d_alpha(stable_law(1.0, 1.5), "one", 2.0, full=True)
    assert res["diverged"] and res["value"] == math.inf


def test_d_alpha_grid_mismatch():
    other = bl.DensitySpec.maxwellian(1.0).char_radial(bl.radial_grid(n=777))
    with pytest.raises(GridError):
        bl.d_alpha(gaussian(1.0), other, 2.0)


@settings(max_examples=20, deadline=None)
@given(st.tuples(st.floats(0.3, 3.0), st.floats(0.3, 3.0), st.floats(0.3, 3.0)))
def test_d_alpha_triangle_inequality(temps):
    a, b, c = (gaussian(t) for t in temps)
    dac = bl.d_alpha(a, c, 2.0)
    assert dac <= bl.d_alpha(a, b, 2.0) + bl.d_alpha(b, c, 2.0) + 1e-12


@settings(max_examples=10, deadline=None)
@given(st.floats(0.4, 2.0), st.floats(0.05, 0.95))
def test_embedding_monotone_in_alpha(K, frac):
    # ||phi - 1||_{D^beta} <= ||phi - 1||_{D^alpha} restricted to r <= 1
    alpha = 1.5
    beta = frac * alpha
    phi = stable_law(K, alpha)
    rr = np.geomspace(1e-6, 1.0, 800)
    om = 1.0 - np.exp(-K * rr**alpha)
    assert np.max(om / rr**beta) <= np.max(om / rr**alpha) + 1e-12


# ------------------------------------------------------- corrected metric

def _axisym_pair():
    r = bl.radial_grid(n=256, r_max=10.0)
    u, uw = bl.polar_grid(17)
    f = bl.DensitySpec.aniso_gaussian(2.0, 1.0, 1.0).char_axisym(r, u, uw)
    g = bl.DensitySpec.maxwellian(4.0 / 3.0).char_axisym(r, u, uw)
    return f, g, r, u


def test_correction_p_zero_reduces_to_d_alpha():
    f, g, *_ = _axisym_pair()
    dev = bl.Deviator(np.zeros((3, 3)), A=1.0)
    assert abs(bl.d_metric_with_correction(f, g, dev, 0.3, 0.5)
               - bl.d_alpha(f, g, 2.5)) < 1e-14


def test_correction_equal_states_zero():
    f, *_ = _axisym_pair()
    dev = bl.Deviator(np.zeros((3, 3)), A=1.0)
    assert bl.d_metric_with_correction(f, f, dev, 0.0, 0.5) == 0.0


def test_correction_only_term_at_unit_radius():
    # f = g, P != 0: the metric majorizes the correction quadratic at |xi|=1
    f, _, r, u = _axisym_pair()
    P = np.diag([2 / 3, -1 / 3, -1 / 3])
    dev = bl.Deviator(P, A=1.0)
    val = bl.d_metric_with_correction(f, f, dev, 0.0, 0.5)
    q = np.max(np.abs(dev.quad_axisym(u)))
    assert val >= 0.5 * q - 1e-12


def test_correction_decays_at_exactly_rate_a():
    f, _, r, u = _axisym_pair()
    dev = bl.Deviator(np.diag([2 / 3, -1 / 3, -1 / 3]), A=0.8)
    v1 = bl.d_metric_with_correction(f, f, dev, 1.0, 0.5)
    v2 = bl.d_metric_with_correction(f, f, dev, 2.0, 0.5)
    assert abs(v2 / v1 - math.exp(-0.8)) < 1e-12


def test_correction_cancels_initial_anisotropy():
    f, g, *_ = _axisym_pair()
    dev = bl.Deviator(np.diag([2 / 3, -1 / 3, -1 / 3]), A=1.0)
    res = d_metric_with_correction(f, g, dev, 0.0, 0.5, full=True)
    assert not res["diverged"] and math.isfinite(res["value"])
    # without the correction the quadratic mismatch diverges at the origin
    raw = bl.d_alpha(f, g, 2.5, full=True)
    assert raw["diverged"]


# ---------------------------------------------------------------- cutoff X

def test_cutoff_x_plateaus():
    assert bl.cutoff_x(0.5) == 1.0
    assert bl.cutoff_x(3.0) == 0.0
    mid = bl.cutoff_x(1.5)
    assert 0.0 < mid < 1.0
    assert bl.cutoff_x(1.4) > mid > bl.cutoff_x(1.6)


def test_cutoff_x_c2_seams():
    h = 1e-4
    for seam in (1.0, 2.0):
        second = (bl.cutoff_x(seam + h) - 2 * bl.cutoff_x(seam) + bl.cutoff_x(seam - h)) / h**2
        assert abs(second) < 1e-2  # C^2: curvature stays bounded across the seam


# ---------------------------------------------------------------- sobolev

def test_sobolev_maxwellian_l2():
    # (2 pi)^-3 int e^{-|xi|^2} dxi = (4 pi)^{-3/2}, Gaussian integral
    phi = gaussian(1.0)
    assert abs(bl.sobolev_norm(phi, 0) - (4 * math.pi) ** -0.75) < 1e-6


def test_sobolev_zero_and_monotone_in_n():
    z = sobolev_norm_values(R, np.zeros_like(R), 0)
    assert z == 0.0
    phi = gaussian(1.0)
    assert bl.sobolev_norm(phi, 1) >= bl.sobolev_norm(phi, 0)


def test_sobolev_axisym_matches_radial():
    r = bl.radial_grid(n=512)
    u, uw = bl.polar_grid(25)
    spec = bl.DensitySpec.maxwellian(1.0)
    n_rad = bl.sobolev_norm(spec.char_radial(r), 1)
    n_axi = bl.sobolev_norm(spec.char_axisym(r, u, uw), 1)
    assert abs(n_rad - n_axi) < 1e-10


# ---------------------------------------------------------------- diagnostics

def test_k_alpha_diagnostic_stable_law():
    d = bl.k_alpha_diagnostic(stable_law(1.0, 1.5), 1.5)
    assert abs(d["d_alpha_to_1"] - 1.0) < 1e-6
    assert abs(d["near_zero_order"] - 1.5) < 2e-2
    assert d["bound_violation"] == 0.0


def test_k_alpha_diagnostic_one_and_gaussian():
    one = constant_one(gaussian(1.0))
    assert bl.k_alpha_diagnostic(one, 1.0)["d_alpha_to_1"] == 0.0
    d = bl.k_alpha_diagnostic(gaussian(1.0), 2.0)
    assert abs(d["d_alpha_to_1"] - 0.5) < 1e-6


def test_model_fit_recovers_coefficients():
    om = 0.7 * R**1.5 + 0.2 * R**2
    m = fit_small_r_model(R, om, (1.5, 2.0))
    assert abs(m.coeffs[0] - 0.7) < 1e-6
    assert abs(m.coeffs[1] - 0.2) < 1e-4
