"""Refinement studies: spatial recovery, oracle agreement, integrator order."""

from __future__ import annotations

import numpy as np

from .dynamics import (ISOLATED, ManufacturedCase, Profile, run,
                       weak_strong_consistency)
from .errors import ConfigError
from .fields import State
from .materials import Material
from .mesh import build_mesh
from .reference import FDGrid, compare, fd_run


def fit_slope(hs, errs) -> float:
    """Least-squares slope of log(err) against log(h)."""
    hs = np.asarray(hs, dtype=float)
    errs = np.asarray(errs, dtype=float)
    mask = errs > 0
    if mask.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(hs[mask]), np.log(errs[mask]), 1)[0])


def default_case() -> ManufacturedCase:
    """Smooth manufactured fields with everything nonconstant."""
    two_pi = 2.0 * np.pi
    return ManufacturedCase(
        rho=Profile(
            lambda x: 1.0 + 0.2 * np.sin(two_pi * x),
            lambda x: 0.2 * two_pi * np.cos(two_pi * x),
            lambda x: -0.2 * two_pi ** 2 * np.sin(two_pi * x)),
        mom=Profile(
            lambda x: 0.1 * np.sin(two_pi * x),
            lambda x: 0.1 * two_pi * np.cos(two_pi * x),
            lambda x: -0.1 * two_pi ** 2 * np.sin(two_pi * x)),
        en=Profile(
            lambda x: 1.0 + 0.1 * np.cos(two_pi * x),
            lambda x: -0.1 * two_pi * np.sin(two_pi * x),
            lambda x: -0.1 * two_pi ** 2 * np.cos(two_pi * x)),
    )


def weak_strong_slopes(m: Material, n_list=(32, 64, 128, 256), case=None):
    """Recovery residual ladder; returns (slopes per field, residual table)."""
    case = case or default_case()
    resids = []
    hs = []
    for n in n_list:
        mesh = build_mesh(0.0, 1.0, n, periodic=False)
        resids.append(weak_strong_consistency(case, mesh, m))
        hs.append(mesh.h)
    resids = np.array(resids)
    slopes = tuple(fit_slope(hs, resids[:, i]) for i in range(3))
    return slopes, {"h": hs, "residuals": resids.tolist()}


def _smooth_periodic_state(mesh):
    x = mesh.nodes
    xi = (x - mesh.a) / (mesh.b - mesh.a)
    two_pi = 2.0 * np.pi
    rho = 1.0 + 0.1 * np.sin(two_pi * xi)
    mom = 0.05 * np.sin(two_pi * xi + 0.5)
    en = 1.0 + 0.1 * np.cos(two_pi * xi)
    return State(mesh, rho, mom, en)


def oracle_agreement(m: Material, n_list=(64, 128, 256), t_end=0.1):
    """L2 distance between the Galerkin run and the collocation oracle.

    Both solvers start from the same nodal values on matching grids and
    are advanced with RK4 at a shared, stability-safe dt.
    """
    if not m.inviscid:
        raise ConfigError("oracle agreement study runs the inviscid system")
    errs = []
    hs = []
    for n in n_list:
        mesh = build_mesh(0.0, 1.0, n, periodic=True)
        z0 = _smooth_periodic_state(mesh)
        n_steps = int(np.ceil(t_end / (0.2 * mesh.h)))
        dt = t_end / n_steps
        res = run(z0, m, dt, t_end, scheme="rk4", boundary=ISOLATED,
                  output_interval=t_end, record_steps=False)
        zT = res.states[-1]

        grid = FDGrid(0.0, 1.0, n)
        times, snaps = fd_run(grid, (z0.rho, z0.mom, z0.en), m, dt, t_end,
                              viscous=False, output_interval=t_end)
        weak_times = [res.times[0], res.times[-1]]
        weak_snaps = [
            (res.states[0].rho, res.states[0].mom, res.states[0].en),
            (zT.rho, zT.mom, zT.en),
        ]
        table = compare(weak_times, weak_snaps, times, snaps, grid.dx)
        errs.append(max(table[-1]))
        hs.append(mesh.h)
    return fit_slope(hs, errs), {"h": hs, "l2_diff": errs}


def integrator_orders(m: Material, n_cells=32, t_end=0.05,
                      dts=(4e-3, 2e-3, 1e-3, 5e-4)):
    """Self-convergence order of both schemes on a smooth periodic run."""
    mesh = build_mesh(0.0, 1.0, n_cells, periodic=True)
    z0 = _smooth_periodic_state(mesh)
    out = {}
    for scheme in ("rk4", "implicit-midpoint"):
        finals = []
        for dt in dts:
            res = run(z0, m, dt, t_end, scheme=scheme, boundary=ISOLATED,
                      output_interval=t_end, record_steps=False)
            finals.append(res.states[-1].stacked())
        errs = [float(np.max(np.abs(a - b))) for a, b in zip(finals, finals[1:])]
        out[scheme] = fit_slope(dts[:-1], errs)
    return out
