"""Independent strong-form finite-difference oracle.

Second-order central differences on a periodic collocation grid with RK4
in time.  This module deliberately shares nothing with the Galerkin path
except the material constants and the closure formulas, so agreement
between the two solvers is meaningful evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .materials import Material


@dataclass(frozen=True)
class FDGrid:
    """Uniform periodic collocation grid on (a, b)."""

    a: float
    b: float
    n: int

    def __post_init__(self):
        if not self.a < self.b:
            raise ConfigError("need a < b")
        if self.n < 4:
            raise ConfigError("need at least 4 collocation points")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.n

    @property
    def x(self):
        return self.a + self.dx * np.arange(self.n)

    def ddx(self, f):
        """Second-order central difference, periodic."""
        return (np.roll(f, -1) - np.roll(f, 1)) / (2.0 * self.dx)


def fd_rhs(grid: FDGrid, rho, mom, en, m: Material, viscous: bool = True):
    """Time derivatives of the balance equations in flux form.

    viscous=True uses the full stress closure; viscous=False drops the
    viscous stress (heat conduction stays on), matching the simplified
    pressure-only closure.
    """
    if np.any(rho <= 0.0) or np.any(en <= 0.0):
        raise DomainError("nonpositive density or internal energy on the grid")
    v = mom / rho
    theta = en / (rho * m.c_v)
    p = (m.R_g / m.c_v) * en
    q = -m.kappa * grid.ddx(theta)
    if viscous:
        sigma = (m.lam + 2.0 * m.eta) * grid.ddx(v)
    else:
        sigma = 0.0
    T = -p + sigma
    dv = grid.ddx(v)
    drho = -grid.ddx(rho * v)
    dmom = -grid.ddx(mom * v) + grid.ddx(T)
    den = -grid.ddx(en * v) - grid.ddx(q) + T * dv
    return drho, dmom, den


def fd_step(grid: FDGrid, fields, m: Material, dt: float, viscous: bool = True):
    """One RK4 step of the collocation system."""
    y = np.stack(fields)

    def f(u):
        return np.stack(fd_rhs(grid, u[0], u[1], u[2], m, viscous))

    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    out = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return out[0], out[1], out[2]


def fd_run(grid: FDGrid, fields, m: Material, dt: float, t_end: float,
           viscous: bool = True, output_interval: float | None = None):
    """Integrate on [0, t_end]; returns (times, list of field triples)."""
    n_steps = int(round(t_end / dt)) if t_end > 0 else 0
    every = 1
    if output_interval is not None:
        every = max(1, int(round(output_interval / dt)))
    rho, mom, en = (np.asarray(f, dtype=float).copy() for f in fields)
    times = [0.0]
    snaps = [(rho.copy(), mom.copy(), en.copy())]
    for k in range(n_steps):
        rho, mom, en = fd_step(grid, (rho, mom, en), m, dt, viscous)
        if (k + 1) % every == 0 or k + 1 == n_steps:
            times.append((k + 1) * dt)
            snaps.append((rho.copy(), mom.copy(), en.copy()))
    return times, snaps


def compare(times_a, snaps_a, times_b, snaps_b, dx: float):
    """Discrete L2 differences per field per matching output time."""
    if len(times_a) != len(times_b):
        raise ConfigError("trajectories have different numbers of snapshots")
    if any(abs(ta - tb) > 1e-12 for ta, tb in zip(times_a, times_b)):
        raise ConfigError("trajectories were sampled at different times")
    out = []
    for (fa, fb) in zip(snaps_a, snaps_b):
        row = []
        for a, b in zip(fa, fb):
            a = np.asarray(a)
            b = np.asarray(b)
            if a.shape != b.shape:
                raise ConfigError("trajectories have incompatible resolutions")
            row.append(float(np.sqrt(dx * np.sum((a - b) ** 2))))
        out.append(tuple(row))
    return out
