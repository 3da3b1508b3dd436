"""Structural verification suite: the property checks behind `phflow verify`.

Each check returns (name, passed, measured value, tolerance); the CLI
serializes them, prints one line per check and exits nonzero on any
failure.
"""

from __future__ import annotations

import numpy as np

from .config import RunConfig
from .dynamics import SINGLE_GENERATOR, TWO_GENERATOR, rhs
from .fields import QuadData, State, gen_energy, generator_derivatives
from .materials import Material, eos_arrays, gibbs_duhem_residual
from .mesh import Mesh
from .operators import (apply_j, assemble_factorization, assemble_J,
                        assemble_R, degeneracy_residuals, force_flux)


def random_state(mesh: Mesh, rng: np.random.Generator) -> State:
    """Rough admissible state: lognormal densities, signed momentum."""
    n = mesh.n_nodes
    rho = np.exp(rng.uniform(-0.7, 0.7, n))
    mom = rng.normal(0.0, 0.5, n)
    en = np.exp(rng.uniform(-0.7, 0.7, n))
    return State(mesh, rho, mom, en)


def _thermo_checks(m: Material, rng, n_pts=10_000):
    rho = np.exp(rng.uniform(-1.0, 1.4, n_pts))
    u = np.exp(rng.uniform(-1.0, 1.4, n_pts))
    theta, tau, p, s, muth = eos_arrays(rho, u, m)
    ident = np.abs(p + u - (theta * s + rho * theta * muth))
    rel = float(np.max(ident / (p + u)))
    checks = [("thermo_identity", rel <= 1e-12, rel, 1e-12)]

    gr = rng.uniform(-10.0, 10.0, n_pts)
    gu = rng.uniform(-10.0, 10.0, n_pts)
    r = np.abs(gibbs_duhem_residual(rho, u, gr, gu, m))
    rmax = float(np.max(r))
    checks.append(("gibbs_duhem", rmax <= 1e-13, rmax, 1e-13))

    # closure partials against central differences
    rho_s = np.exp(rng.uniform(-0.5, 0.5, 64))
    u_s = np.exp(rng.uniform(-0.5, 0.5, 64))
    eps = 1e-6
    s_u1 = eos_arrays(rho_s, u_s + eps, m)[3]
    s_u0 = eos_arrays(rho_s, u_s - eps, m)[3]
    s_r1 = eos_arrays(rho_s + eps, u_s, m)[3]
    s_r0 = eos_arrays(rho_s - eps, u_s, m)[3]
    tau_ref = eos_arrays(rho_s, u_s, m)[1]
    muth_ref = eos_arrays(rho_s, u_s, m)[4]
    err_u = np.max(np.abs((s_u1 - s_u0) / (2 * eps) - tau_ref) / np.abs(tau_ref))
    err_r = np.max(np.abs((s_r1 - s_r0) / (2 * eps) + muth_ref) / np.maximum(np.abs(muth_ref), 1e-3))
    worst = float(max(err_u, err_r))
    checks.append(("eos_partials_fd", worst <= 1e-6, worst, 1e-6))
    return checks


def run_verify(cfg: RunConfig, n_states: int = 20, corrupt: str | None = None):
    """Run the full property suite; returns (all_passed, checks list)."""
    m = cfg.material
    mesh = cfg.mesh
    rng = np.random.default_rng(cfg.seed)
    if corrupt is None:
        corrupt = cfg.raw.get("_corrupt")

    checks = _thermo_checks(m, rng)
    states = [cfg.initial] + [random_state(mesh, rng) for _ in range(n_states - 1)]

    m_heat = Material(c_v=m.c_v, R_g=m.R_g, s_ref=m.s_ref,
                      kappa=m.kappa if m.kappa > 0 else 0.01,
                      eta=0.0, zeta=0.0, tau0=m.tau0)

    skew_max = 0.0
    sym_max = 0.0
    eig_rel = 0.0
    r_j = r_r = r_c = 0.0
    pair_rel = 0.0
    fact_rel = 0.0
    flux_rel = 0.0
    path_diff = 0.0
    for i, z in enumerate(states):
        J = assemble_J(z, m)
        if corrupt == "j-sign-flip" and i == 0:
            Jm = J.matrix.tolil()
            n = mesh.n_nodes
            Jm[0, n] = -Jm[0, n]
            J.matrix = Jm.tocsr()
        R = assemble_R(z, m)
        skew_max = max(skew_max, J.skew_defect())
        sym_max = max(sym_max, R.sym_defect())
        rmax = R.max_abs()
        if rmax > 0:
            eig_rel = min(eig_rel, R.min_eigenvalue() / rmax)
        dj, dr, dc = degeneracy_residuals(z, m)
        r_j = max(r_j, dj)
        r_r = max(r_r, dr)
        r_c = max(r_c, dc)

        qd = QuadData(z, m)
        gH = gen_energy(qd)
        dH = generator_derivatives(z, m)[0].ravel()
        jd = np.concatenate(apply_j(qd, gH))
        num = abs(float(np.dot(dH, jd)))
        den = max(1e-300, float(np.linalg.norm(dH) * np.linalg.norm(jd)))
        pair_rel = max(pair_rel, num / den)

        # heat-conduction factorization and flux law on the inviscid twin
        C, D, C_star = assemble_factorization(z, m_heat)
        tauR = (m_heat.tau0 * assemble_R(z, m_heat).matrix).tocsr()
        prod = (C.matrix @ D.matrix @ C_star.matrix).tocsr()
        diff = abs(tauR - prod).max()
        scale = max(abs(tauR).max(), 1e-300)
        fact_rel = max(fact_rel, diff / scale)

        force, flux = force_flux(z, m_heat)
        dtheta = (qd.de - qd.theta * m.c_v * qd.dr) / (qd.r * m.c_v)
        resid = np.abs(flux + m_heat.kappa * dtheta)
        bound = 1e-13 * np.abs(m_heat.kappa * dtheta) + 1e-15
        flux_rel = max(flux_rel, float(np.max(resid - bound)))

        z_dot_two = rhs(z, m_heat, t=0.0, path=TWO_GENERATOR)
        z_dot_one = rhs(z, m_heat, t=0.0, path=SINGLE_GENERATOR)
        path_diff = max(path_diff, float(np.max(np.abs(z_dot_two - z_dot_one))))

    checks += [
        ("skewness", skew_max == 0.0, skew_max, 0.0),
        ("symmetry", sym_max == 0.0, sym_max, 0.0),
        ("psd_min_eig", eig_rel >= -1e-10, eig_rel, -1e-10),
        ("degeneracy_J_dS", r_j <= 1e-12, r_j, 1e-12),
        ("degeneracy_R_dH", r_r <= 1e-12, r_r, 1e-12),
        ("degeneracy_Cstar_dH", r_c == 0.0, r_c, 0.0),
        ("skew_pairing_dH_JdH", pair_rel <= 1e-12, pair_rel, 1e-12),
        ("factorization", fact_rel <= 1e-13, fact_rel, 1e-13),
        ("fourier_flux_law", flux_rel <= 0.0, flux_rel, 0.0),
        ("generator_path_equivalence", path_diff <= 1e-11, path_diff, 1e-11),
    ]
    return all(ok for _, ok, _, _ in checks), checks
