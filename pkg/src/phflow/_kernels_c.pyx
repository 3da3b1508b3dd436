# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_kernels_py``.

Every function mirrors the pure-numpy reference expression by
expression, in the same evaluation order, so the two backends agree to
the last bit on elementwise outputs (reductions may differ only in
summation order).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport log

cnp.import_array()

BACKEND = "cython"


def state_quad(const double[::1] rho, const double[::1] mom, const double[::1] en,
               const Py_ssize_t[::1] i0, const Py_ssize_t[::1] i1,
               const double[::1] b0, const double[::1] b1, double inv_h):
    cdef Py_ssize_t nq = i0.shape[0]
    cdef cnp.ndarray r_ = np.empty(nq), M_ = np.empty(nq), e_ = np.empty(nq)
    cdef cnp.ndarray dr_ = np.empty(nq), dM_ = np.empty(nq), de_ = np.empty(nq)
    cdef cnp.ndarray v_ = np.empty(nq), dv_ = np.empty(nq)
    cdef double[::1] r = r_, M = M_, e = e_, dr = dr_, dM = dM_, de = de_, v = v_, dv = dv_
    cdef Py_ssize_t q, a, b
    for q in range(nq):
        a = i0[q]
        b = i1[q]
        r[q] = rho[a] * b0[q] + rho[b] * b1[q]
        M[q] = mom[a] * b0[q] + mom[b] * b1[q]
        e[q] = en[a] * b0[q] + en[b] * b1[q]
        dr[q] = (rho[b] - rho[a]) * inv_h
        dM[q] = (mom[b] - mom[a]) * inv_h
        de[q] = (en[b] - en[a]) * inv_h
        v[q] = M[q] / r[q]
        dv[q] = (dM[q] - v[q] * dr[q]) / r[q]
    return r_, M_, e_, dr_, dM_, de_, v_, dv_


def thermo_quad(const double[::1] r, const double[::1] e,
                const double[::1] dr, const double[::1] de,
                double c_v, double R_g, double s_ref):
    cdef Py_ssize_t nq = r.shape[0]
    cdef cnp.ndarray theta_ = np.empty(nq), tau_ = np.empty(nq), p_ = np.empty(nq)
    cdef cnp.ndarray s_ = np.empty(nq), muth_ = np.empty(nq)
    cdef cnp.ndarray dtau_ = np.empty(nq), dp_ = np.empty(nq), dmuth_ = np.empty(nq)
    cdef double[::1] theta = theta_, tau = tau_, p = p_, s = s_, muth = muth_
    cdef double[::1] dtau = dtau_, dp = dp_, dmuth = dmuth_
    cdef double poverc = R_g / c_v, csum = c_v + R_g
    cdef Py_ssize_t q
    for q in range(nq):
        theta[q] = e[q] / (r[q] * c_v)
        tau[q] = r[q] * c_v / e[q]
        p[q] = poverc * e[q]
        s[q] = r[q] * (c_v * log(e[q] / (c_v * r[q])) - R_g * log(r[q]) + s_ref)
        muth[q] = csum - s[q] / r[q]
        dtau[q] = (c_v * dr[q] - tau[q] * de[q]) / e[q]
        dp[q] = poverc * de[q]
        dmuth[q] = csum * dr[q] / r[q] - c_v * de[q] / e[q]
    return theta_, tau_, p_, s_, muth_, dtau_, dp_, dmuth_


def dual_j(const double[::1] w, const double[::1] b0, const double[::1] b1,
           double inv_h, const Py_ssize_t[::1] i0, const Py_ssize_t[::1] i1,
           Py_ssize_t n_nodes,
           const double[::1] r, const double[::1] M, const double[::1] e,
           const double[::1] p, const double[::1] dp,
           const double[::1] gr, const double[::1] gm, const double[::1] gu,
           const double[::1] dgr, const double[::1] dgm, const double[::1] dgu):
    cdef Py_ssize_t nq = w.shape[0]
    cdef cnp.ndarray out_r_ = np.zeros(n_nodes)
    cdef cnp.ndarray out_m_ = np.zeros(n_nodes)
    cdef cnp.ndarray out_e_ = np.zeros(n_nodes)
    cdef double[::1] out_r = out_r_, out_m = out_m_, out_e = out_e_
    cdef double c_rho, a_mom, b_mom, a_en, b_en
    cdef Py_ssize_t q, a, b
    for q in range(nq):
        a = i0[q]
        b = i1[q]
        c_rho = w[q] * (r[q] * gm[q])
        a_mom = w[q] * (-r[q] * dgr[q] - (e[q] + p[q]) * dgu[q]
                        - gu[q] * dp[q] - M[q] * dgm[q])
        b_mom = w[q] * (M[q] * gm[q])
        a_en = w[q] * (gm[q] * dp[q])
        b_en = w[q] * ((e[q] + p[q]) * gm[q])
        out_r[a] += -c_rho * inv_h
        out_r[b] += c_rho * inv_h
        out_m[a] += a_mom * b0[q] - b_mom * inv_h
        out_m[b] += a_mom * b1[q] + b_mom * inv_h
        out_e[a] += a_en * b0[q] - b_en * inv_h
        out_e[b] += a_en * b1[q] + b_en * inv_h
    return out_r_, out_m_, out_e_


def dual_j_scale(const double[::1] w, const double[::1] b0, const double[::1] b1,
                 double inv_h, const Py_ssize_t[::1] i0, const Py_ssize_t[::1] i1,
                 Py_ssize_t n_nodes,
                 const double[::1] r, const double[::1] M, const double[::1] e,
                 const double[::1] p, const double[::1] dp,
                 const double[::1] gr, const double[::1] gm, const double[::1] gu,
                 const double[::1] dgr, const double[::1] dgm, const double[::1] dgu):
    cdef Py_ssize_t nq = w.shape[0]
    cdef cnp.ndarray out_r_ = np.zeros(n_nodes)
    cdef cnp.ndarray out_m_ = np.zeros(n_nodes)
    cdef cnp.ndarray out_e_ = np.zeros(n_nodes)
    cdef double[::1] out_r = out_r_, out_m = out_m_, out_e = out_e_
    cdef double c_rho, a_mom, b_mom, a_en, b_en
    cdef Py_ssize_t q, a, b
    for q in range(nq):
        a = i0[q]
        b = i1[q]
        c_rho = w[q] * abs(r[q] * gm[q])
        a_mom = w[q] * (abs(r[q] * dgr[q]) + abs((e[q] + p[q]) * dgu[q])
                        + abs(gu[q] * dp[q]) + abs(M[q] * dgm[q]))
        b_mom = w[q] * abs(M[q] * gm[q])
        a_en = w[q] * abs(gm[q] * dp[q])
        b_en = w[q] * abs((e[q] + p[q]) * gm[q])
        out_r[a] += c_rho * inv_h
        out_r[b] += c_rho * inv_h
        out_m[a] += a_mom * b0[q] + b_mom * inv_h
        out_m[b] += a_mom * b1[q] + b_mom * inv_h
        out_e[a] += a_en * b0[q] + b_en * inv_h
        out_e[b] += a_en * b1[q] + b_en * inv_h
    return out_r_, out_m_, out_e_


def dual_r(const double[::1] w, const double[::1] b0, const double[::1] b1,
           double inv_h, const Py_ssize_t[::1] i0, const Py_ssize_t[::1] i1,
           Py_ssize_t n_nodes,
           const double[::1] theta, const double[::1] dv,
           double c_visc, double kappa,
           const double[::1] gu, const double[::1] dgm, const double[::1] dgu):
    cdef Py_ssize_t nq = w.shape[0]
    cdef cnp.ndarray out_m_ = np.zeros(n_nodes)
    cdef cnp.ndarray out_e_ = np.zeros(n_nodes)
    cdef double[::1] out_m = out_m_, out_e = out_e_
    cdef double s_m, c_mom, a_en, b_en
    cdef Py_ssize_t q, a, b
    for q in range(nq):
        a = i0[q]
        b = i1[q]
        s_m = dgm[q] - dv[q] * gu[q]
        c_mom = w[q] * (c_visc * theta[q] * s_m)
        a_en = -c_mom * dv[q]
        b_en = w[q] * (kappa * theta[q] * theta[q] * dgu[q])
        out_m[a] += -c_mom * inv_h
        out_m[b] += c_mom * inv_h
        out_e[a] += a_en * b0[q] - b_en * inv_h
        out_e[b] += a_en * b1[q] + b_en * inv_h
    return out_m_, out_e_


def dual_r_scale(const double[::1] w, const double[::1] b0, const double[::1] b1,
                 double inv_h, const Py_ssize_t[::1] i0, const Py_ssize_t[::1] i1,
                 Py_ssize_t n_nodes,
                 const double[::1] theta, const double[::1] dv,
                 double c_visc, double kappa,
                 const double[::1] gu, const double[::1] dgm, const double[::1] dgu):
    cdef Py_ssize_t nq = w.shape[0]
    cdef cnp.ndarray out_m_ = np.zeros(n_nodes)
    cdef cnp.ndarray out_e_ = np.zeros(n_nodes)
    cdef double[::1] out_m = out_m_, out_e = out_e_
    cdef double s_m, c_mom, a_en, b_en
    cdef Py_ssize_t q, a, b
    for q in range(nq):
        a = i0[q]
        b = i1[q]
        s_m = abs(dgm[q]) + abs(dv[q] * gu[q])
        c_mom = w[q] * (c_visc * theta[q] * s_m)
        a_en = c_mom * abs(dv[q])
        b_en = w[q] * abs(kappa * theta[q] * theta[q] * dgu[q])
        out_m[a] += c_mom * inv_h
        out_m[b] += c_mom * inv_h
        out_e[a] += a_en * b0[q] + b_en * inv_h
        out_e[b] += a_en * b1[q] + b_en * inv_h
    return out_m_, out_e_


def local_j_blocks(const double[::1] w, const double[::1] b0, const double[::1] b1,
                   double inv_h,
                   const double[::1] r, const double[::1] M, const double[::1] e,
                   const double[::1] p, const double[::1] dp):
    cdef Py_ssize_t nc = r.shape[0] // 2
    cdef cnp.ndarray G_ = np.zeros((nc, 2, 2))
    cdef cnp.ndarray W_ = np.zeros((nc, 2, 2))
    cdef cnp.ndarray U_ = np.zeros((nc, 2, 2))
    cdef double[:, :, ::1] G = G_, W = W_, U = U_
    cdef double bas[2]
    cdef double dbas[2]
    cdef double cr, cm, ce, cp
    cdef Py_ssize_t c, k, q, j, l
    dbas[0] = -inv_h
    dbas[1] = inv_h
    for c in range(nc):
        for k in range(2):
            q = 2 * c + k
            bas[0] = b0[q]
            bas[1] = b1[q]
            cr = w[q] * r[q]
            cm = w[q] * M[q]
            ce = w[q] * (e[q] + p[q])
            cp = w[q] * dp[q]
            for j in range(2):
                for l in range(2):
                    G[c, j, l] += cr * bas[l] * dbas[j]
                    W[c, j, l] += cm * bas[l] * dbas[j]
                    U[c, j, l] += bas[l] * (ce * dbas[j] + cp * bas[j])
    return G_, W_, U_


def local_r_blocks(const double[::1] w, const double[::1] b0, const double[::1] b1,
                   double inv_h,
                   const double[::1] theta, const double[::1] dv,
                   double c_visc, double kappa):
    cdef Py_ssize_t nc = theta.shape[0] // 2
    cdef cnp.ndarray RMM_ = np.zeros((nc, 2, 2))
    cdef cnp.ndarray RMu_ = np.zeros((nc, 2, 2))
    cdef cnp.ndarray Ruu_ = np.zeros((nc, 2, 2))
    cdef double[:, :, ::1] RMM = RMM_, RMu = RMu_, Ruu = Ruu_
    cdef double bas[2]
    cdef double dbas[2]
    cdef double ct, cdv, ck
    cdef Py_ssize_t c, k, q, j, l
    dbas[0] = -inv_h
    dbas[1] = inv_h
    for c in range(nc):
        for k in range(2):
            q = 2 * c + k
            bas[0] = b0[q]
            bas[1] = b1[q]
            ct = w[q] * (c_visc * theta[q])
            cdv = dv[q]
            ck = w[q] * (kappa * theta[q] * theta[q])
            for j in range(2):
                for l in range(2):
                    RMM[c, j, l] += ct * dbas[j] * dbas[l]
                    RMu[c, j, l] += -ct * dbas[j] * cdv * bas[l]
                    Ruu[c, j, l] += ct * cdv * cdv * bas[j] * bas[l] + ck * dbas[j] * dbas[l]
    return RMM_, RMu_, Ruu_


def functionals_quad(const double[::1] w, const double[::1] r, const double[::1] M,
                     const double[::1] e, const double[::1] s, double inv_tau0):
    cdef Py_ssize_t nq = w.shape[0]
    cdef double H = 0.0, S = 0.0
    cdef Py_ssize_t q
    for q in range(nq):
        H += w[q] * (M[q] * M[q] / (2.0 * r[q]) + e[q])
        S += w[q] * s[q]
    return H, S, H - inv_tau0 * S
