"""Material data and the ideal-gas closure.

The closure is a calorically perfect ideal gas,

    s(rho, u) = rho * (c_v * log(u / (c_v * rho)) - R_g * log(rho) + s_ref),

which fixes temperature, pressure and chemical potential through

    theta = u / (rho * c_v),   p = rho * R_g * theta,
    mu    = theta * (c_v + R_g - s / rho),

and satisfies the local-equilibrium identity  p + u = theta * s + rho * mu
exactly.  All quantities are dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

# Nodal admissibility floor; states below it are rejected, never clamped.
ADMISSIBLE_FLOOR = 1e-10


@dataclass(frozen=True)
class Material:
    """Equation-of-state constants and transport coefficients."""

    c_v: float = 1.0
    R_g: float = 1.0
    s_ref: float = 0.0
    kappa: float = 0.0
    eta: float = 0.0
    zeta: float = 0.0
    tau0: float = 1.0

    def __post_init__(self):
        if self.c_v <= 0.0 or self.R_g <= 0.0:
            raise ConfigError("c_v and R_g must be positive")
        if self.kappa < 0.0 or self.eta < 0.0 or self.zeta < 0.0:
            raise ConfigError("transport coefficients kappa, eta, zeta must be nonnegative")
        if self.tau0 <= 0.0:
            raise ConfigError("reference reciprocal temperature tau0 must be positive")

    @property
    def lam(self) -> float:
        """Second viscosity lambda = zeta - (2/3) eta, always derived."""
        return self.zeta - (2.0 / 3.0) * self.eta

    @property
    def gamma(self) -> float:
        return (self.c_v + self.R_g) / self.c_v

    @property
    def inviscid(self) -> bool:
        return self.eta == 0.0 and self.zeta == 0.0


@dataclass(frozen=True)
class ThermoPoint:
    """Pointwise thermodynamic state derived from (rho, u)."""

    rho: float
    u: float
    theta: float
    tau: float
    p: float
    s: float
    mu: float
    s_tilde: float


def check_admissible(rho, u):
    """Reject nonpositive (or sub-floor) density / internal energy."""
    rho = np.asarray(rho)
    u = np.asarray(u)
    if not (np.all(np.isfinite(rho)) and np.all(np.isfinite(u))):
        raise DomainError("state contains non-finite values")
    if np.any(rho < ADMISSIBLE_FLOOR) or np.any(u < ADMISSIBLE_FLOOR):
        raise DomainError(
            f"state outside admissible set: min rho={np.min(rho):.3e}, min u={np.min(u):.3e}"
        )


def eval_eos(rho: float, u: float, m: Material) -> ThermoPoint:
    """Evaluate the closure at a single (rho, u) point."""
    check_admissible(rho, u)
    theta = u / (rho * m.c_v)
    tau = rho * m.c_v / u
    p = (m.R_g / m.c_v) * u
    s = rho * (m.c_v * np.log(u / (m.c_v * rho)) - m.R_g * np.log(rho) + m.s_ref)
    mu = theta * (m.c_v + m.R_g - s / rho)
    return ThermoPoint(
        rho=float(rho), u=float(u), theta=float(theta), tau=float(tau),
        p=float(p), s=float(s), mu=float(mu), s_tilde=float(s / m.tau0),
    )


def eos_arrays(rho, u, m: Material):
    """Vectorized closure: returns (theta, tau, p, s, mu_over_theta).

    mu/theta is returned instead of mu because it is what the entropy
    derivative needs; mu itself is theta * mu_over_theta.
    """
    theta = u / (rho * m.c_v)
    tau = rho * m.c_v / u
    p = (m.R_g / m.c_v) * u
    s = rho * (m.c_v * np.log(u / (m.c_v * rho)) - m.R_g * np.log(rho) + m.s_ref)
    muth = m.c_v + m.R_g - s / rho
    return theta, tau, p, s, muth


def eos_gradients(rho, u, grad_rho, grad_u, m: Material):
    """Chain-rule spatial gradients of theta, tau, p and mu/theta.

    Inputs are interpolated field values and their spatial derivatives at
    the same points; outputs are the derivatives of the derived quantities
    obtained by differentiating the closure, not by re-interpolating it.
    """
    theta = u / (rho * m.c_v)
    tau = rho * m.c_v / u
    dtheta = (grad_u - theta * m.c_v * grad_rho) / (rho * m.c_v)
    dtau = (m.c_v * grad_rho - tau * grad_u) / u
    dp = (m.R_g / m.c_v) * grad_u
    dmuth = (m.c_v + m.R_g) * grad_rho / rho - m.c_v * grad_u / u
    return dtheta, dtau, dp, dmuth


def gibbs_duhem_residual(rho, u, grad_rho, grad_u, m: Material):
    """Residual of rho*grad(mu/theta) - u*grad(1/theta) - grad(p/theta).

    Analytically zero for the ideal-gas closure; the returned value is the
    floating-point residue of the chain-rule expansion.
    """
    check_admissible(rho, u)
    rho = np.asarray(rho, dtype=float)
    u = np.asarray(u, dtype=float)
    theta, tau, p, _, _ = eos_arrays(rho, u, m)
    _, dtau, dp, dmuth = eos_gradients(rho, u, grad_rho, grad_u, m)
    # grad(p/theta) expanded as (1/theta) grad p + p grad(1/theta)
    return rho * dmuth - u * dtau - (tau * dp + p * dtau)
