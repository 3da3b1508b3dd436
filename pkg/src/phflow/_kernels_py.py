"""Pure-numpy implementations of the per-quadrature-point kernels.

These are the hot inner loops of the simulator: interpolation to
quadrature points, the gas closure with chain-rule gradients, and the
weak-form pairings that drive the dynamics.  A compiled twin lives in
``_kernels_c.pyx``; both must produce identical results, so any change
here has to be mirrored there expression by expression.

All kernels take flat arrays over quadrature points (two per cell,
ordered cell by cell) plus the mesh index/basis tables.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def state_quad(rho, mom, en, i0, i1, b0, b1, inv_h):
    """Interpolated state and gradients at qp; v by the quotient rule."""
    r = rho[i0] * b0 + rho[i1] * b1
    M = mom[i0] * b0 + mom[i1] * b1
    e = en[i0] * b0 + en[i1] * b1
    dr = (rho[i1] - rho[i0]) * inv_h
    dM = (mom[i1] - mom[i0]) * inv_h
    de = (en[i1] - en[i0]) * inv_h
    v = M / r
    dv = (dM - v * dr) / r
    return r, M, e, dr, dM, de, v, dv


def thermo_quad(r, e, dr, de, c_v, R_g, s_ref):
    """Closure values and chain-rule gradients at qp."""
    theta = e / (r * c_v)
    tau = r * c_v / e
    p = (R_g / c_v) * e
    s = r * (c_v * np.log(e / (c_v * r)) - R_g * np.log(r) + s_ref)
    muth = c_v + R_g - s / r
    dtau = (c_v * dr - tau * de) / e
    dp = (R_g / c_v) * de
    dmuth = (c_v + R_g) * dr / r - c_v * de / e
    return theta, tau, p, s, muth, dtau, dp, dmuth


def dual_j(w, b0, b1, inv_h, i0, i1, n_nodes,
           r, M, e, p, dp, gr, gm, gu, dgr, dgm, dgu):
    """Reversible-part pairing of every test function against input data g.

    Input data are values (gr, gm, gu) and spatial derivatives
    (dgr, dgm, dgu) of a stacked field at qp.  Returns the three dual
    vectors (density row, momentum row, energy row).
    """
    c_rho = w * (r * gm)
    a_mom = w * (-r * dgr - (e + p) * dgu - gu * dp - M * dgm)
    b_mom = w * (M * gm)
    a_en = w * (gm * dp)
    b_en = w * ((e + p) * gm)

    out_r = np.zeros(n_nodes)
    out_m = np.zeros(n_nodes)
    out_e = np.zeros(n_nodes)
    np.add.at(out_r, i0, -c_rho * inv_h)
    np.add.at(out_r, i1, c_rho * inv_h)
    np.add.at(out_m, i0, a_mom * b0 - b_mom * inv_h)
    np.add.at(out_m, i1, a_mom * b1 + b_mom * inv_h)
    np.add.at(out_e, i0, a_en * b0 - b_en * inv_h)
    np.add.at(out_e, i1, a_en * b1 + b_en * inv_h)
    return out_r, out_m, out_e


def dual_j_scale(w, b0, b1, inv_h, i0, i1, n_nodes,
                 r, M, e, p, dp, gr, gm, gu, dgr, dgm, dgu):
    """Absolute-value counterpart of dual_j, used to scale residuals."""
    c_rho = w * np.abs(r * gm)
    a_mom = w * (np.abs(r * dgr) + np.abs((e + p) * dgu)
                 + np.abs(gu * dp) + np.abs(M * dgm))
    b_mom = w * np.abs(M * gm)
    a_en = w * np.abs(gm * dp)
    b_en = w * np.abs((e + p) * gm)

    out_r = np.zeros(n_nodes)
    out_m = np.zeros(n_nodes)
    out_e = np.zeros(n_nodes)
    np.add.at(out_r, i0, c_rho * inv_h)
    np.add.at(out_r, i1, c_rho * inv_h)
    np.add.at(out_m, i0, a_mom * b0 + b_mom * inv_h)
    np.add.at(out_m, i1, a_mom * b1 + b_mom * inv_h)
    np.add.at(out_e, i0, a_en * b0 + b_en * inv_h)
    np.add.at(out_e, i1, a_en * b1 + b_en * inv_h)
    return out_r, out_m, out_e


def dual_r(w, b0, b1, inv_h, i0, i1, n_nodes,
           theta, dv, c_visc, kappa, gu, dgm, dgu):
    """Dissipative-part pairing against input data g.

    The viscous stress enters through the factored combination
    (dgm - dv * gu), so feeding the energy gradient data of the flow
    itself cancels exactly, term by term.
    """
    s_m = dgm - dv * gu
    c_mom = w * (c_visc * theta * s_m)
    a_en = -c_mom * dv
    b_en = w * (kappa * theta * theta * dgu)

    out_m = np.zeros(n_nodes)
    out_e = np.zeros(n_nodes)
    np.add.at(out_m, i0, -c_mom * inv_h)
    np.add.at(out_m, i1, c_mom * inv_h)
    np.add.at(out_e, i0, a_en * b0 - b_en * inv_h)
    np.add.at(out_e, i1, a_en * b1 + b_en * inv_h)
    return out_m, out_e


def dual_r_scale(w, b0, b1, inv_h, i0, i1, n_nodes,
                 theta, dv, c_visc, kappa, gu, dgm, dgu):
    """Absolute-value counterpart of dual_r."""
    s_m = np.abs(dgm) + np.abs(dv * gu)
    c_mom = w * (c_visc * theta * s_m)
    a_en = c_mom * np.abs(dv)
    b_en = w * np.abs(kappa * theta * theta * dgu)

    out_m = np.zeros(n_nodes)
    out_e = np.zeros(n_nodes)
    np.add.at(out_m, i0, c_mom * inv_h)
    np.add.at(out_m, i1, c_mom * inv_h)
    np.add.at(out_e, i0, a_en * b0 + b_en * inv_h)
    np.add.at(out_e, i1, a_en * b1 + b_en * inv_h)
    return out_m, out_e


def local_j_blocks(w, b0, b1, inv_h, r, M, e, p, dp):
    """Local 2x2 element blocks of the three reversible couplings.

    Returns (G, W, U): density/momentum, momentum/momentum antisymmetric
    part, energy/momentum.  Row index = test function, column = input.
    """
    nc = r.shape[0] // 2
    bas = np.stack([b0, b1], axis=1).reshape(nc, 2, 2)        # (c, q, k)
    dbas = np.array([-inv_h, inv_h])
    wq = w.reshape(nc, 2)

    cr = (wq * r.reshape(nc, 2))[:, :, None, None]
    cm = (wq * M.reshape(nc, 2))[:, :, None, None]
    ce = (wq * (e + p).reshape(nc, 2))[:, :, None, None]
    cp = (wq * dp.reshape(nc, 2))[:, :, None, None]
    bk = bas[:, :, None, :]                                    # input index k
    bj = bas[:, :, :, None]                                    # test index j
    dj = dbas[None, None, :, None]

    G = (cr * bk * dj).sum(axis=1)
    W = (cm * bk * dj).sum(axis=1)
    U = (bk * (ce * dj + cp * bj)).sum(axis=1)
    return G, W, U


def local_r_blocks(w, b0, b1, inv_h, theta, dv, c_visc, kappa):
    """Local 2x2 element blocks of the dissipative couplings."""
    nc = theta.shape[0] // 2
    bas = np.stack([b0, b1], axis=1).reshape(nc, 2, 2)
    dbas = np.array([-inv_h, inv_h])
    wq = w.reshape(nc, 2)

    ct = (wq * (c_visc * theta).reshape(nc, 2))[:, :, None, None]
    cdv = dv.reshape(nc, 2)[:, :, None, None]
    ck = (wq * (kappa * theta * theta).reshape(nc, 2))[:, :, None, None]
    bk = bas[:, :, None, :]
    bj = bas[:, :, :, None]
    dj = dbas[None, None, :, None]
    dk = dbas[None, None, None, :]

    RMM = (ct * dj * dk).sum(axis=1)
    RMu = (-ct * dj * cdv * bk).sum(axis=1)
    Ruu = (ct * cdv * cdv * bj * bk + ck * dj * dk).sum(axis=1)
    return RMM, RMu, Ruu


def functionals_quad(w, r, M, e, s, inv_tau0):
    """Quadrature of the energy, entropy and availability functionals."""
    H = float(np.dot(w, M * M / (2.0 * r) + e))
    S = float(np.dot(w, s))
    return H, S, H - inv_tau0 * S
