"""Radial Fourier (spherical sine / Hankel-type) transforms.

For an even radial density f(|v|) the 3-D Fourier transform reduces to

    phi(r) = (4 pi / r) int_0^inf rho sin(r rho) f(rho) drho,
    f(rho) = 1/(2 pi^2 rho) int_0^inf r phi(r) sin(r rho) dr.

Both directions are evaluated on fine uniform auxiliary grids with Simpson
weights; the oscillation scale (r_max * rho_max) dictates the sampling.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import TruncationError


def _simpson_weights(n: int, h: float) -> np.ndarray:
    if n % 2 == 0:
        raise ValueError("need an odd number of samples")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def forward_radial(f_rho, r, rho_max=40.0, n_rho=16385, tail_tol=1e-9):
    """phi(r) on the given radii from a radial density callable f(rho)."""
    r = np.asarray(r, dtype=float)
    rho = np.linspace(0.0, rho_max, n_rho)
    w = _simpson_weights(n_rho, rho[1] - rho[0])
    fv = np.asarray(f_rho(rho), dtype=float)
    mass_tail = abs(fv[-1]) * rho_max**2
    if mass_tail > tail_tol:
        raise TruncationError(
            f"density tail at rho_max contributes ~{mass_tail:.2e}", tail_estimate=mass_tail)
    g = w * rho * fv
    out = np.empty_like(r)
    zero = r == 0.0
    out[zero] = 4.0 * math.pi * float(np.sum(w * rho * rho * fv))
    nz = ~zero
    # chunk the (n_r, n_rho) sine matrix to keep memory flat
    idx = np.nonzero(nz)[0]
    for k in range(0, idx.size, 128):
        sel = idx[k:k + 128]
        s = np.sin(np.outer(r[sel], rho))
        out[sel] = (4.0 * math.pi / r[sel]) * (s @ g)
    return out


def inverse_radial(phi, rho, n_fine=16385):
    """Radial density f(rho) from a gridded characteristic function.

    phi is any callable on [0, r_max] (a RadialCharFn works); the integral is
    truncated at phi's grid end, so the profile must decay there.
    """
    rho = np.asarray(rho, dtype=float)
    r_max = phi.r_max if hasattr(phi, "r_max") else phi.r[-1]
    rf = np.linspace(0.0, r_max, n_fine)
    w = _simpson_weights(n_fine, rf[1] - rf[0])
    pv = np.asarray(phi(rf), dtype=float)
    g = w * rf * pv
    out = np.empty_like(rho)
    zero = rho == 0.0
    out[zero] = float(np.sum(w * rf * rf * pv)) / (2.0 * math.pi**2)
    idx = np.nonzero(~zero)[0]
    for k in range(0, idx.size, 128):
        sel = idx[k:k + 128]
        s = np.sin(np.outer(rho[sel], rf))
        out[sel] = (s @ g) / (2.0 * math.pi**2 * rho[sel])
    return out
