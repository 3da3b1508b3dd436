"""State container, quadrature-point evaluation and the three generators.

The evaluation cache (`QuadData`) carries interpolated fields, the
velocity and its quotient-rule derivative, and all closure quantities
with chain-rule gradients.  Generator derivative data at quadrature
points is assembled from it componentwise, so the availability data
equals energy-data minus scaled entropy-data exactly in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import TopologyError
from .materials import Material, check_admissible, eos_arrays
from .mesh import Mesh


class State:
    """Nodal coefficients of (density, momentum density, internal energy)."""

    __slots__ = ("mesh", "rho", "mom", "en")

    def __init__(self, mesh: Mesh, rho, mom, en, check: bool = True):
        self.mesh = mesh
        self.rho = np.ascontiguousarray(rho, dtype=float)
        self.mom = np.ascontiguousarray(mom, dtype=float)
        self.en = np.ascontiguousarray(en, dtype=float)
        n = mesh.n_nodes
        if self.rho.shape != (n,) or self.mom.shape != (n,) or self.en.shape != (n,):
            raise ValueError(f"field shapes must be ({n},)")
        if check:
            check_admissible(self.rho, self.en)

    @classmethod
    def uniform(cls, mesh: Mesh, rho=1.0, mom=0.0, en=1.0):
        n = mesh.n_nodes
        return cls(mesh, np.full(n, float(rho)), np.full(n, float(mom)), np.full(n, float(en)))

    @classmethod
    def from_stacked(cls, mesh: Mesh, vec, check: bool = True):
        n = mesh.n_nodes
        vec = np.asarray(vec, dtype=float)
        return cls(mesh, vec[:n], vec[n:2 * n], vec[2 * n:], check=check)

    def stacked(self):
        return np.concatenate([self.rho, self.mom, self.en])

    def copy(self):
        return State(self.mesh, self.rho.copy(), self.mom.copy(), self.en.copy(), check=False)

    def velocity(self):
        return self.mom / self.rho


class QuadData:
    """Everything the weak forms need at the quadrature points."""

    __slots__ = ("mesh", "m", "r", "M", "e", "dr", "dM", "de", "v", "dv",
                 "theta", "tau", "p", "s", "muth", "dtau", "dp", "dmuth")

    def __init__(self, z: State, m: Material):
        mesh = z.mesh
        check_admissible(z.rho, z.en)
        (self.r, self.M, self.e, self.dr, self.dM, self.de,
         self.v, self.dv) = kernels.state_quad(
            z.rho, z.mom, z.en, mesh.qp_i0, mesh.qp_i1,
            mesh.qp_b0, mesh.qp_b1, mesh.inv_h)
        (self.theta, self.tau, self.p, self.s, self.muth,
         self.dtau, self.dp, self.dmuth) = kernels.thermo_quad(
            self.r, self.e, self.dr, self.de, m.c_v, m.R_g, m.s_ref)
        self.mesh = mesh
        self.m = m


@dataclass(frozen=True)
class GenData:
    """Values and spatial derivatives of one generator derivative at qp."""

    vals: tuple           # (rho-component, momentum-component, energy-component)
    grads: tuple


def gen_energy(qd: QuadData) -> GenData:
    nq = qd.v.shape[0]
    return GenData(
        vals=(-0.5 * qd.v * qd.v, qd.v, np.ones(nq)),
        grads=(-qd.v * qd.dv, qd.dv, np.zeros(nq)),
    )


def gen_entropy(qd: QuadData) -> GenData:
    nq = qd.v.shape[0]
    zero = np.zeros(nq)
    return GenData(
        vals=(-qd.muth, zero, qd.tau),
        grads=(-qd.dmuth, zero, qd.dtau),
    )


def gen_availability(qd: QuadData, m: Material) -> GenData:
    gh = gen_energy(qd)
    gs = gen_entropy(qd)
    c = 1.0 / m.tau0
    return GenData(
        vals=tuple(a - c * b for a, b in zip(gh.vals, gs.vals)),
        grads=tuple(a - c * b for a, b in zip(gh.grads, gs.grads)),
    )


def generator_derivatives(z: State, m: Material):
    """Nodal values of the three generator derivatives (dH, dS, dE).

    Each entry is a (3, n_nodes) array ordered (density, momentum, energy
    component).
    """
    check_admissible(z.rho, z.en)
    v = z.mom / z.rho
    theta, tau, p, s, muth = eos_arrays(z.rho, z.en, m)
    one = np.ones_like(v)
    zero = np.zeros_like(v)
    dH = np.stack([-0.5 * v * v, v, one])
    dS = np.stack([-muth, zero, tau])
    dE = dH - dS / m.tau0
    return dH, dS, dE


def functionals(z: State, m: Material):
    """(H, S, E): quadrature of the three generating functionals."""
    qd = QuadData(z, m)
    return kernels.functionals_quad(z.mesh.qp_w, qd.r, qd.M, qd.e, qd.s, 1.0 / m.tau0)


@dataclass(frozen=True)
class TraceRecord:
    """Boundary values and one-sided fluxes at one endpoint."""

    x: float
    nu: float
    rho: float
    mom: float
    en: float
    v: float
    theta: float
    tau: float
    p: float
    s: float
    mu: float
    s_tilde: float
    q_n: float        # heat flux through the boundary, -kappa d(theta)/dx * nu
    sigma_n: float    # viscous traction, (lam + 2 eta) d(v)/dx * nu


def trace(z: State, m: Material, endpoint) -> TraceRecord:
    """Evaluate the state trace at 'left'/'right' (or 0/1)."""
    mesh = z.mesh
    if mesh.periodic:
        raise TopologyError("traces require a bounded mesh")
    side = {0: 0, 1: 1, "left": 0, "right": 1}[endpoint]
    node = mesh.endpoint_nodes()[side]
    nu = mesh.endpoint_normals()[side]
    rho = z.rho[node]
    mom = z.mom[node]
    en = z.en[node]
    check_admissible(rho, en)
    theta, tau, p, s, muth = eos_arrays(rho, en, m)
    v = mom / rho

    drho = mesh.endpoint_cell_gradient(z.rho, side)
    dmom = mesh.endpoint_cell_gradient(z.mom, side)
    den = mesh.endpoint_cell_gradient(z.en, side)
    dtheta = (den - theta * m.c_v * drho) / (rho * m.c_v)
    dv = (dmom - v * drho) / rho
    q_n = -m.kappa * dtheta * nu
    sigma_n = (m.lam + 2.0 * m.eta) * dv * nu

    return TraceRecord(
        x=mesh.nodes[node], nu=nu, rho=float(rho), mom=float(mom), en=float(en),
        v=float(v), theta=float(theta), tau=float(tau), p=float(p), s=float(s),
        mu=float(theta * muth), s_tilde=float(s / m.tau0),
        q_n=float(q_n), sigma_n=float(sigma_n),
    )
