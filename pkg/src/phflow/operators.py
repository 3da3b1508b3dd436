"""Reversible, dissipative and boundary operators on the Galerkin space.

Two realizations of each operator coexist on purpose:

* assembled sparse matrices, built block-wise so that antisymmetry of the
  reversible operator and symmetry of the dissipative one hold exactly in
  floating point (blocks are reused transposed, never re-assembled);

* weak-form application to generator-derivative data evaluated at
  quadrature points with chain-rule gradients.  This path is what the
  dynamics uses: the pointwise Gibbs-Duhem identity then cancels the
  entropy rows of the reversible pairing, and the factored viscous
  combination cancels the energy-derivative rows of the dissipative one,
  both to roundoff, independent of resolution.

Flux-space convention: thermodynamic force and flux are stored as values
at quadrature points; the quadrature weight sits inside the diagonal
middle factor of the factorization.  That makes the adjoint of the
gradient map the literal matrix transpose and the factorization identity
an entrywise-identical quadrature sum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import kernels
from .errors import ConfigError, TopologyError
from .fields import (GenData, QuadData, State, gen_availability, gen_energy,
                     gen_entropy)
from .materials import Material


@dataclass
class AssembledOperator:
    """Matrix over stacked coefficients with a declared symmetry class."""

    matrix: sp.spmatrix
    symmetry: str                 # "skew" | "symmetric-psd" | "general"
    state: State | None = None

    def dense(self):
        return self.matrix.toarray()

    def skew_defect(self) -> float:
        return float(abs(self.matrix + self.matrix.T).max())

    def sym_defect(self) -> float:
        return float(abs(self.matrix - self.matrix.T).max())

    def max_abs(self) -> float:
        m = self.matrix.tocoo()
        return float(np.max(np.abs(m.data))) if m.nnz else 0.0

    def min_eigenvalue(self) -> float:
        import scipy.linalg as la
        return float(la.eigvalsh(self.dense())[0])


# -- matrix assembly -------------------------------------------------------


def assemble_J(z: State, m: Material) -> AssembledOperator:
    """Skew operator of the reversible dynamics (exactly antisymmetric)."""
    mesh = z.mesh
    qd = QuadData(z, m)
    G, W, U = kernels.local_j_blocks(
        mesh.qp_w, mesh.qp_b0, mesh.qp_b1, mesh.inv_h,
        qd.r, qd.M, qd.e, qd.p, qd.dp)
    Gm = mesh.scatter_matrix(G)
    Wm = mesh.scatter_matrix(W)
    Um = mesh.scatter_matrix(U)
    Jmm = Wm - Wm.T
    J = sp.bmat([
        [None, Gm, None],
        [-Gm.T, Jmm, -Um.T],
        [None, Um, None],
    ], format="csr")
    return AssembledOperator(J, "skew", z)


def assemble_R(z: State, m: Material) -> AssembledOperator:
    """Symmetric positive-semidefinite operator of the irreversible dynamics."""
    mesh = z.mesh
    qd = QuadData(z, m)
    c_visc = 2.0 * m.eta + m.lam
    RMM, RMu, Ruu = kernels.local_r_blocks(
        mesh.qp_w, mesh.qp_b0, mesh.qp_b1, mesh.inv_h,
        qd.theta, qd.dv, c_visc, m.kappa)
    Amm = mesh.scatter_matrix(RMM)
    Amu = mesh.scatter_matrix(RMu)
    Auu = mesh.scatter_matrix(Ruu)
    n = mesh.n_nodes
    Z = sp.csr_matrix((n, n))
    R = sp.bmat([
        [Z, None, None],
        [None, Amm, Amu],
        [None, Amu.T, Auu],
    ], format="csr")
    return AssembledOperator(R, "symmetric-psd", z)


# -- weak-form application to generator data --------------------------------


def apply_j(qd: QuadData, g: GenData):
    """Dual vectors of the reversible pairing against generator data g."""
    mesh = qd.mesh
    return kernels.dual_j(
        mesh.qp_w, mesh.qp_b0, mesh.qp_b1, mesh.inv_h,
        mesh.qp_i0, mesh.qp_i1, mesh.n_nodes,
        qd.r, qd.M, qd.e, qd.p, qd.dp,
        g.vals[0], g.vals[1], g.vals[2],
        g.grads[0], g.grads[1], g.grads[2])


def apply_r(qd: QuadData, g: GenData, m: Material):
    """Dual vectors of the dissipative pairing against generator data g."""
    mesh = qd.mesh
    c_visc = 2.0 * m.eta + m.lam
    out_m, out_e = kernels.dual_r(
        mesh.qp_w, mesh.qp_b0, mesh.qp_b1, mesh.inv_h,
        mesh.qp_i0, mesh.qp_i1, mesh.n_nodes,
        qd.theta, qd.dv, c_visc, m.kappa,
        g.vals[2], g.grads[1], g.grads[2])
    return np.zeros(mesh.n_nodes), out_m, out_e


def apply_cdc(qd: QuadData, m: Material, dgu):
    """Dual vector of the factored heat-conduction operator on d(g)_u data."""
    mesh = qd.mesh
    flux = (m.kappa * m.tau0) * qd.theta * qd.theta * dgu
    zero = np.zeros(mesh.n_qp)
    out = mesh.scatter_vector(zero, mesh.qp_w * flux)
    return np.zeros(mesh.n_nodes), np.zeros(mesh.n_nodes), out


def degeneracy_residuals(z: State, m: Material):
    """Scaled residual norms of the two non-interacting conditions.

    Returns (r_J, r_R, r_Cstar): reversible operator against the entropy
    derivative, dissipative operator against the energy derivative, and
    the gradient map against the energy derivative.
    """
    mesh = z.mesh
    qd = QuadData(z, m)
    gH = gen_energy(qd)
    gS = gen_entropy(qd)

    duals = apply_j(qd, gS)
    scales = kernels.dual_j_scale(
        mesh.qp_w, mesh.qp_b0, mesh.qp_b1, mesh.inv_h,
        mesh.qp_i0, mesh.qp_i1, mesh.n_nodes,
        qd.r, qd.M, qd.e, qd.p, qd.dp,
        gS.vals[0], gS.vals[1], gS.vals[2],
        gS.grads[0], gS.grads[1], gS.grads[2])
    num = max(np.max(np.abs(d)) for d in duals)
    den = max(max(np.max(s) for s in scales), 1e-300)
    r_j = num / den

    c_visc = 2.0 * m.eta + m.lam
    dm, de = kernels.dual_r(
        mesh.qp_w, mesh.qp_b0, mesh.qp_b1, mesh.inv_h,
        mesh.qp_i0, mesh.qp_i1, mesh.n_nodes,
        qd.theta, qd.dv, c_visc, m.kappa,
        gH.vals[2], gH.grads[1], gH.grads[2])
    sm, se = kernels.dual_r_scale(
        mesh.qp_w, mesh.qp_b0, mesh.qp_b1, mesh.inv_h,
        mesh.qp_i0, mesh.qp_i1, mesh.n_nodes,
        qd.theta, qd.dv, c_visc, m.kappa,
        gH.vals[2], gH.grads[1], gH.grads[2])
    num = max(np.max(np.abs(dm)), np.max(np.abs(de)))
    den = max(np.max(sm), np.max(se), 1e-300)
    r_r = num / den

    r_c = float(np.max(np.abs(gH.grads[2])))   # gradient of a constant field
    return float(r_j), float(r_r), r_c


# -- factorization of the heat-conduction operator ---------------------------


def assemble_factorization(z: State, m: Material):
    """(C, D, C_star) with tau0 * R == C @ D @ C_star entrywise.

    Requires a purely heat-conducting material (eta = zeta = 0); the flux
    space is one value per quadrature point and the quadrature weight
    lives inside the diagonal factor D.
    """
    if not m.inviscid:
        raise ConfigError("factorization is defined for eta = zeta = 0 only")
    mesh = z.mesh
    qd = QuadData(z, m)
    n, nq = mesh.n_nodes, mesh.n_qp

    rows = np.concatenate([2 * n + mesh.qp_i0, 2 * n + mesh.qp_i1])
    cols = np.concatenate([np.arange(nq), np.arange(nq)])
    data = np.concatenate([np.full(nq, -mesh.inv_h), np.full(nq, mesh.inv_h)])
    C = sp.coo_matrix((data, (rows, cols)), shape=(3 * n, nq)).tocsr()
    D = sp.diags(mesh.qp_w * m.kappa * m.tau0 * qd.theta * qd.theta).tocsr()
    C_star = C.T.tocsr()
    return (
        AssembledOperator(C, "general", z),
        AssembledOperator(D, "symmetric-psd", z),
        AssembledOperator(C_star, "general", z),
    )


def force_flux(z: State, m: Material):
    """Thermodynamic force and flux values at quadrature points.

    Force is the gradient of the scaled reciprocal temperature; the flux
    is the pointwise linear response to it and coincides with the heat
    flux of the Fourier closure.
    """
    if not m.inviscid:
        raise ConfigError("force/flux path is defined for eta = zeta = 0 only")
    qd = QuadData(z, m)
    force = qd.dtau / m.tau0
    flux = (m.kappa * m.tau0) * qd.theta * qd.theta * force
    return force, flux


# -- boundary ports ----------------------------------------------------------


@dataclass(frozen=True)
class PortSignal:
    """Boundary inputs (v.n, q.n, sigma.n) at the two endpoints."""

    left: tuple
    right: tuple

    @classmethod
    def zero(cls):
        return cls((0.0, 0.0, 0.0), (0.0, 0.0, 0.0))

    def flipped_heat(self):
        l, r = self.left, self.right
        return PortSignal((l[0], -l[1], l[2]), (r[0], -r[1], r[2]))


@dataclass(frozen=True)
class PortReadout:
    """Output triples per endpoint; rows ordered (left, right)."""

    y_H: np.ndarray         # shape (2, 3)
    y_S: np.ndarray
    y_Scaled: np.ndarray    # y_S / tau0
    y_E: np.ndarray         # y_H - y_Scaled, componentwise


def self_trace_signal(z: State, m: Material) -> PortSignal:
    """Close the ports with the trace of the evolving state."""
    from .fields import trace
    recs = [trace(z, m, side) for side in (0, 1)]
    return PortSignal(
        left=(recs[0].v * recs[0].nu, recs[0].q_n, recs[0].sigma_n),
        right=(recs[1].v * recs[1].nu, recs[1].q_n, recs[1].sigma_n),
    )


def apply_B(z: State, m: Material, sig: PortSignal):
    """Dual vectors of the boundary pairing for the given port input."""
    mesh = z.mesh
    if mesh.periodic:
        raise TopologyError("boundary pairing requires a bounded mesh")
    n = mesh.n_nodes
    out_r = np.zeros(n)
    out_m = np.zeros(n)
    out_e = np.zeros(n)
    from .fields import trace
    for side, u in ((0, sig.left), (1, sig.right)):
        rec = trace(z, m, side)
        node = mesh.endpoint_nodes()[side]
        u1, u2, u3 = u
        out_r[node] += -rec.rho * u1
        out_m[node] += u3 - rec.mom * u1
        out_e[node] += -((rec.en + rec.p) * u1 + u2)
    return out_r, out_m, out_e


def assemble_B(z: State, m: Material) -> AssembledOperator:
    """Boundary operator as a matrix from the 6 port inputs to duals."""
    mesh = z.mesh
    if mesh.periodic:
        raise TopologyError("boundary pairing requires a bounded mesh")
    from .fields import trace
    n = mesh.n_nodes
    B = np.zeros((3 * n, 6))
    for side in (0, 1):
        rec = trace(z, m, side)
        node = mesh.endpoint_nodes()[side]
        c = 3 * side
        B[node, c + 0] = -rec.rho
        B[n + node, c + 0] = -rec.mom
        B[n + node, c + 2] = 1.0
        B[2 * n + node, c + 0] = -(rec.en + rec.p)
        B[2 * n + node, c + 1] = -1.0
    return AssembledOperator(sp.csr_matrix(B), "general", z)


def outputs(z: State, m: Material) -> PortReadout:
    """Port outputs at both endpoints from the closed-form trace blocks."""
    from .fields import trace
    if z.mesh.periodic:
        raise TopologyError("port outputs require a bounded mesh")
    y_H = np.zeros((2, 3))
    y_S = np.zeros((2, 3))
    for side in (0, 1):
        rec = trace(z, m, side)
        y_H[side] = (-(rec.mom * rec.v / 2.0 + rec.en + rec.p), -1.0, rec.v)
        y_S[side] = (-rec.s, -rec.tau, 0.0)
    y_sc = y_S / m.tau0
    return PortReadout(y_H=y_H, y_S=y_S, y_Scaled=y_sc, y_E=y_H - y_sc)


def port_pairing(y: np.ndarray, sig: PortSignal) -> float:
    """Duality pairing of an output triple with a port input."""
    u = np.array([sig.left, sig.right])
    return float(np.sum(y * u))


# -- extended skew block -----------------------------------------------------


def extended_block(z: State, m: Material) -> AssembledOperator:
    """Skew block operator over (state-dual, flux, port) coordinates."""
    if not m.inviscid:
        raise ConfigError("extended block is defined for eta = zeta = 0 only")
    if z.mesh.periodic:
        raise TopologyError("extended block requires a bounded mesh")
    J = assemble_J(z, m).matrix
    C, _, C_star = assemble_factorization(z, m)
    B = assemble_B(z, m).matrix
    nq = z.mesh.n_qp
    A = sp.bmat([
        [J, C.matrix, B],
        [-C_star.matrix, sp.csr_matrix((nq, nq)), sp.csr_matrix((nq, 6))],
        [-B.T, sp.csr_matrix((6, nq)), sp.csr_matrix((6, 6))],
    ], format="csr")
    return AssembledOperator(A, "skew", z)
