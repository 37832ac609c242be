import math

import numpy as np
import pytest

import bobylev as bl
from bobylev.errors import DomainError, IntegrabilityError
from bobylev.kernels import angular_integral, constants, cutoff_limit_sweep

CONST = bl.KernelSpec("constant_test", b0=1.0)
SING = bl.KernelSpec("inverse_power_model", s=0.25, b0=1.0)


def test_eval_kernel_constant():
    assert bl.eval_kernel(CONST, 0.3) == 1.0


def test_eval_kernel_clamped():
    spec = bl.KernelSpec("inverse_power_model", s=0.25, b0=1.0, bound=10.0)
    assert bl.eval_kernel(spec, 1e-9) == 10.0


def test_eval_kernel_asymptote():
    # defining limit: B(cos theta) * theta^(2+2s) -> b0
    val = bl.eval_kernel(SING, 0.01)
    assert abs(val - 0.01**-2.5) / 0.01**-2.5 < 1e-2


def test_eval_kernel_domain_error():
    with pytest.raises(DomainError):
        bl.eval_kernel(CONST, 2.0)
    with pytest.raises(DomainError):
        bl.eval_kernel(CONST, -0.1)


def test_angular_integral_closed_forms():
    # 2 pi int_0^{pi/2} sin = 2 pi ; 2 pi int sin^3 = 4 pi / 3
    one = angular_integral(CONST, lambda th: np.ones_like(np.asarray(th, float)))
    assert abs(one - 2 * math.pi) < 1e-10 * 2 * math.pi
    s2 = angular_integral(CONST, lambda th: np.sin(th) ** 2)
    assert abs(s2 - 4 * math.pi / 3) < 1e-10 * 4 * math.pi / 3
    assert angular_integral(SING, lambda th: np.zeros_like(np.asarray(th, float))) == 0.0


def test_angular_integral_rejects_nonintegrable():
    with pytest.raises(IntegrabilityError):
        angular_integral(SING, lambda th: np.ones_like(np.asarray(th, float)))


def test_constants_constant_kernel_exact():
    kc = constants(CONST, 2.0, 2.0)
    assert abs(kc.A - math.pi) < 1e-10 * math.pi
    assert abs(kc.B_delta - 2 * math.pi / 3) < 1e-10
    assert abs(kc.sigma_bar - 2 * math.pi) < 1e-10
    assert kc.lambda_alpha == 0.0


def test_lambda2_zero_every_kernel():
    for spec in (CONST, SING, SING.with_bound(100.0)):
        assert abs(constants(spec, 2.0, 0.5).lambda_alpha) < 1e-12


def test_b2_equals_two_thirds_a():
    for spec in (CONST, SING):
        kc = constants(spec, 2.0, 2.0)
        assert abs(kc.B_delta - 2.0 / 3.0 * kc.A) < 1e-10 * kc.A


def test_b_delta_monotone_in_delta():
    deltas = np.linspace(0.1, 2.0, 12)
    vals = [constants(SING, 2.0, d).B_delta for d in deltas]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def test_refinement_stability():
    # the advertised tolerance: independently computed reference agrees
    from scipy.integrate import quad
    ref, _ = quad(lambda th: th**-2.5 * np.sin(th) ** 3, 0, math.pi / 2, limit=200)
    ref *= 0.75 * 2 * math.pi
    assert abs(constants(SING, 1.5, 0.5).A - ref) < 1e-8 * ref


def test_constants_integrability_guard():
    with pytest.raises(IntegrabilityError):
        constants(SING, 0.4, 0.2)   # alpha <= 2s
    with pytest.raises(DomainError):
        constants(SING, 1.5, 1.6)   # delta > alpha


def test_eta_definitions():
    kc = constants(SING, 1.5, 0.5)
    assert kc.eta0 == min(kc.A - 0.5 * kc.mu_alpha, kc.B_delta)
    assert kc.eta1 == min(kc.A, kc.B_delta)
    assert kc.eta1 >= kc.eta0
    assert kc.mu_alpha == kc.lambda_alpha / 1.5


def test_normalized_constants_bounded_kernel():
    spec = SING.with_bound(100.0)
    kc = constants(spec, 1.5, 0.5)
    assert kc.sigma_bar is not None
    assert abs(kc.A_n * kc.sigma_bar - kc.A) < 1e-12
    assert kc.B_n <= 1.0  # normalized contraction weight stays below 1


def test_cutoff_sweep_constant_kernel_trivial():
    rows = cutoff_limit_sweep(CONST, 2.0, 0.5, [2.0, 5.0])
    kc = constants(CONST, 2.0, 0.5)
    for row in rows:  # bound above the constant: min{B, n} = B exactly
        assert abs(row["sig_A_n"] - kc.A) < 1e-12
        assert abs(row["sig_B_n"] - kc.B_delta) < 1e-12


def test_cutoff_sweep_decreasing_errors():
    kc = constants(SING, 1.5, 0.5)
    rows = cutoff_limit_sweep(SING, 1.5, 0.5, [10.0, 100.0, 1e4])
    errs = [abs(r["sig_A_n"] - kc.A) for r in rows]
    assert errs[0] > errs[1] > errs[2]


def test_cutoff_sweep_large_n_surrogate():
    # n -> infinity surrogate: all constants within 0.1%
    kc = constants(SING, 1.5, 0.5)
    row = cutoff_limit_sweep(SING, 1.5, 0.5, [1e12])[0]
    assert abs(row["sig_A_n"] - kc.A) / kc.A < 1e-3
    assert abs(row["sig_B_n"] - kc.B_delta) / kc.B_delta < 1e-3
    assert abs(row["sig_lambda_n"] - kc.lambda_alpha) / kc.lambda_alpha < 1e-3
    assert abs(row["sig_eta0_n"] - kc.eta0) / kc.eta0 < 1e-3


def test_sweep_input_validation():
    with pytest.raises(DomainError):
        cutoff_limit_sweep(SING, 1.5, 0.5, [])
    with pytest.raises(DomainError):
        cutoff_limit_sweep(SING, 1.5, 0.5, [10.0, 10.0])
