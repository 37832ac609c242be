"""Fourier-side laboratory for the spatially homogeneous Boltzmann equation
with non-cutoff Maxwellian-molecule cross sections."""

from .charfun import (AxisymCharFn, Deviator, RadialCharFn, SmallRModel,
                      cutoff_x, d_alpha, d_metric_with_correction,
                      k_alpha_diagnostic, polar_grid, radial_grid, sobolev_norm)
from .density import (CutoffApprox, DensitySpec, check_zero_energy_perturbation,
                      cutoff_approx, deviator_convergence_sweep,
                      moment_metric_bound_check, radial_transform,
                      second_moment_deviator)
from .flow import (FlowState, build_plan, coercivity_check, collision_rhs,
                   evolve, step)
from .kernels import (KernelConstants, KernelSpec, angular_integral, constants,
                      cutoff_limit_sweep, eval_kernel)
from .selfsim import SelfSimilarProfile, construct_profile, self_similar_at, verify_stationarity

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
