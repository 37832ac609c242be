import math

import numpy as np
import pytest

import bobylev as bl
from bobylev.density import DensitySpec, difference_eval, inverse_radial_density
from bobylev.errors import (GridError, HypothesisError, MomentDivergenceError,
                            RTooSmallError)

ANISO = DensitySpec.aniso_gaussian(2.0, 1.0, 1.0)
MAXW43 = DensitySpec.maxwellian(4.0 / 3.0)


# ------------------------------------------------------------------ deviator

def test_deviator_radial_pair_zero():
    dev = bl.second_moment_deviator(DensitySpec.maxwellian(1.0),
                                    DensitySpec.maxwellian(2.0))
    assert np.max(np.abs(dev.P)) == 0.0


def test_deviator_closed_form():
    dev = bl.second_moment_deviator(ANISO, MAXW43)
    target = np.diag([2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0])
    assert np.max(np.abs(dev.P - target)) < 1e-14


def test_deviator_trace_free():
    dev = bl.second_moment_deviator(ANISO, DensitySpec.maxwellian(0.7))
    assert abs(np.trace(dev.P)) < 1e-14


def test_deviator_divergent_pair(profile_19):
    with pytest.raises(MomentDivergenceError):
        bl.second_moment_deviator(DensitySpec.selfsim(profile_19),
                                  DensitySpec.maxwellian(1.0))


# ------------------------------------------------------------- zero energy

def test_zero_energy_examples():
    ok, res = bl.check_zero_energy_perturbation(ANISO, ANISO)
    assert ok and res == 0.0
    ok, res = bl.check_zero_energy_perturbation(ANISO, MAXW43)
    assert ok and abs(res) < 1e-14
    ok, res = bl.check_zero_energy_perturbation(ANISO, DensitySpec.maxwellian(1.0))
    assert not ok and abs(res - 1.0) < 1e-14


def test_perturbation_moments_cancel(profile_19):
    f = DensitySpec.perturbed(profile_19, 0.2, (2.0, 1.0, 1.0))
    g = DensitySpec.selfsim(profile_19)
    ok, res = bl.check_zero_energy_perturbation(f, g)
    assert ok and abs(res) < 1e-15
    dev = bl.second_moment_deviator(f, g)
    assert np.max(np.abs(dev.P - 0.2 * np.diag([2 / 3, -1 / 3, -1 / 3]))) < 1e-15


# ------------------------------------------------------------------ cutoff

def test_cutoff_even_density_no_shift():
    ca = bl.cutoff_approx(ANISO, 6.0)
    assert np.max(np.abs(ca.a_R)) < 1e-15
    assert abs(ca.mass() - 1.0) < 1e-12
    assert np.max(np.abs(ca.mean_vector())) < 1e-12


def test_cutoff_maxwellian_r8():
    ca = bl.cutoff_approx(DensitySpec.maxwellian(1.0), 8.0)
    assert 1.0 - 1e-10 < ca.normalization <= 1.0 + 1e-12
    assert np.max(np.abs(ca.a_R)) < 1e-14


def test_cutoff_shift_recovered():
    shifts = [bl.cutoff_approx(DensitySpec.maxwellian(1.0, shift=0.4), R).a_R[0]
              for R in (3.0, 6.0, 12.0)]
    errs = [abs(s - 0.4) for s in shifts]
    assert errs[0] > errs[1] > errs[2] or errs[2] < 1e-12
    assert errs[-1] < 1e-10


def test_cutoff_r_too_small():
    with pytest.raises(RTooSmallError):
        bl.cutoff_approx(DensitySpec.maxwellian(25.0), 0.5)


def test_cutoff_abs_moment_finite():
    ca = bl.cutoff_approx(DensitySpec.maxwellian(1.0), 6.0)
    m3 = ca.abs_moment(3.0)
    # against the untruncated Gaussian moment E|v|^3 = 2 T^{3/2} sqrt(2/pi) * 2
    exact = 8.0 / math.sqrt(2.0 * math.pi)
    assert abs(m3 - exact) < 1e-6


def test_deviator_sweep_converges():
    rows = bl.deviator_convergence_sweep(ANISO, MAXW43, [2.0, 4.0, 8.0, 16.0])
    errs = [row["err"] for row in rows]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-6


def test_deviator_sweep_radial_zero():
    rows = bl.deviator_convergence_sweep(DensitySpec.maxwellian(1.0),
                                         DensitySpec.maxwellian(2.0), [4.0, 8.0])
    for row in rows:
        assert np.max(np.abs(row["P_R"])) < 1e-12


# -------------------------------------------------------------- transforms

def test_radial_transform_gaussian():
    r = bl.radial_grid(n=768)
    phi = bl.radial_transform(DensitySpec.maxwellian(1.0), r)
    assert np.max(np.abs(phi.values - np.exp(-r**2 / 2))) < 1e-8


def test_radial_transform_delta_limit():
    # T -> 0: phi -> 1 pointwise (Fourier transform of delta_0)
    r = bl.radial_grid(n=256, r_max=5.0)
    for T in (1e-2, 1e-3):
        phi = bl.radial_transform(DensitySpec.maxwellian(T), r)
        assert np.max(np.abs(phi.values - 1.0)) < 3 * T * r[-1] ** 2 / 2


def test_inverse_round_trip():
    r = bl.radial_grid(n=768)
    spec = DensitySpec.maxwellian(1.4)
    phi = spec.char_radial(r)
    rho = np.linspace(0.0, 8.0, 160)
    fv = inverse_radial_density(phi, rho)
    assert np.max(np.abs(fv - spec.eval_velocity(rho, 0.0))) < 1e-6


def test_profile_round_trip(profile_19):
    # transform of the reconstructed density reproduces psi_hat
    from bobylev.transforms import forward_radial
    r = bl.radial_grid(n=384, r_max=10.0)
    vals = forward_radial(profile_19.velocity_density, r, rho_max=30.0)
    assert np.max(np.abs(vals - profile_19.psi_hat(r))) < 1e-5


def test_transform_second_moment_consistency():
    # -phi''(0)/... : small-r model curvature a2 = T/2 for maxwellian(T)
    phi = DensitySpec.maxwellian(1.7).char_radial()
    assert abs(phi.model.coeff_map()[2.0] - 0.85) < 1e-10


# ------------------------------------------------------------ moment bound

def test_moment_metric_bound_finite_pair():
    kc = bl.constants(bl.KernelSpec("inverse_power_model", s=0.25, b0=1.0), 2.0, 0.5)
    dev = bl.second_moment_deviator(ANISO, MAXW43, A=kc.A)
    rep = bl.moment_metric_bound_check(ANISO, MAXW43, 0.5, dev)
    assert rep["finite"]
    assert rep["lhs"] <= rep["rhs"]
    assert rep["ratio"] > 0.0


def test_moment_bound_identical_pair():
    dev = bl.second_moment_deviator(ANISO, ANISO, A=1.0)
    rep = bl.moment_metric_bound_check(ANISO, ANISO, 0.5, dev)
    assert rep["rhs"] < 1e-12 and rep["ratio"] == 0.0


def test_moment_bound_rejects_shifted():
    with pytest.raises(HypothesisError) as err:
        bl.moment_metric_bound_check(DensitySpec.maxwellian(1.0, shift=0.3),
                                     DensitySpec.maxwellian(1.0), 0.5,
                                     bl.Deviator(np.zeros((3, 3)), 1.0))
    assert err.value.condition == "zero_mean"


def test_moment_bound_delta_range():
    with pytest.raises(HypothesisError):
        bl.moment_metric_bound_check(ANISO, MAXW43, 1.5,
                                     bl.Deviator(np.zeros((3, 3)), 1.0))


def test_difference_eval_profile_pair_cancels(profile_19):
    f = DensitySpec.perturbed(profile_19, 0.1, (2.0, 1.0, 1.0))
    g = DensitySpec.selfsim(profile_19)
    diff = difference_eval(f, g)
    rho = np.array([0.5, 2.0])
    h1 = DensitySpec.aniso_gaussian(2.0, 1.0, 1.0)
    h2 = DensitySpec.maxwellian(4.0 / 3.0)
    expect = 0.1 * (h1.eval_velocity(rho, 0.3) - h2.eval_velocity(rho, 0.3))
    assert np.max(np.abs(diff(rho, 0.3) - expect)) < 1e-15


# ----------------------------------------------------------------- guards

def test_aniso_needs_axisymmetry():
    with pytest.raises(GridError):
        DensitySpec.aniso_gaussian(1.5, 0.9, 0.6)


def test_mixture_weights_validated():
    with pytest.raises(Exception):
        DensitySpec.mixture([0.5, 0.6], [DensitySpec.maxwellian(1.0)] * 2)


def test_mixture_radial_char():
    mix = DensitySpec.mixture([0.5, 0.5], (DensitySpec.maxwellian(0.5),
                                           DensitySpec.maxwellian(1.5)))
    assert mix.is_radial and abs(mix.energy() - 3.0) < 1e-14
    phi = mix.char_radial()
    expect = 0.5 * np.exp(-0.25 * phi.r**2) + 0.5 * np.exp(-0.75 * phi.r**2)
    assert np.max(np.abs(phi.values - expect)) < 1e-14
