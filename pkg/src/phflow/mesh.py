"""Uniform 1D interval mesh with a piecewise-linear Galerkin space.

Every integral in the package goes through the one 2-point Gauss rule
tabulated here; sharing the rule is what makes the operator identities
hold to machine precision instead of merely to discretization accuracy.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConfigError, TopologyError

# Reference-cell Gauss points (degree-3 exact) and P1 basis values there.
_XI = np.array([0.5 - 0.5 / np.sqrt(3.0), 0.5 + 0.5 / np.sqrt(3.0)])


class Mesh:
    """Uniform partition of (a, b) into n_cells cells with P1 nodes.

    Free nodes: n_cells + 1 for a bounded mesh, n_cells for a periodic one
    (the last node is identified with the first).  All per-quadrature-point
    tables are flat arrays of length 2 * n_cells, ordered cell by cell.
    """

    def __init__(self, a: float, b: float, n_cells: int, periodic: bool = False):
        if not (np.isfinite(a) and np.isfinite(b) and a < b):
            raise ConfigError(f"invalid interval ({a}, {b}); need a < b")
        if int(n_cells) != n_cells or n_cells < 2:
            raise ConfigError(f"n_cells must be an integer >= 2, got {n_cells}")
        self.a = float(a)
        self.b = float(b)
        self.n_cells = int(n_cells)
        self.periodic = bool(periodic)
        self.h = (self.b - self.a) / self.n_cells
        self.n_nodes = self.n_cells if periodic else self.n_cells + 1
        self.nodes = self.a + self.h * np.arange(self.n_nodes)

        cells = np.arange(self.n_cells)
        left = cells
        right = cells + 1
        if periodic:
            right = right % self.n_nodes
        # flat quadrature tables, two points per cell
        self.qp_i0 = np.repeat(left, 2).astype(np.intp)
        self.qp_i1 = np.repeat(right, 2).astype(np.intp)
        self.qp_b0 = np.tile(1.0 - _XI, self.n_cells)
        self.qp_b1 = np.tile(_XI, self.n_cells)
        self.qp_x = (self.a + self.h * cells)[:, None] + (self.h * _XI)[None, :]
        self.qp_x = self.qp_x.ravel()
        self.qp_w = np.full(2 * self.n_cells, 0.5 * self.h)
        self.inv_h = 1.0 / self.h
        self.n_qp = 2 * self.n_cells

        # scatter pattern for 2x2 local matrices: rows/cols per (cell, j, k)
        jl = np.array([0, 0, 1, 1])
        kl = np.array([0, 1, 0, 1])
        conn = np.stack([left, right], axis=1)
        self.loc_rows = conn[:, jl].ravel()
        self.loc_cols = conn[:, kl].ravel()
        self._jl, self._kl = jl, kl
        self._mass_lu = None

    def __repr__(self):
        kind = "periodic" if self.periodic else "bounded"
        return f"Mesh({self.a}, {self.b}, n_cells={self.n_cells}, {kind})"

    # -- field evaluation ------------------------------------------------

    def interp(self, coeffs):
        """Values and spatial derivatives of a nodal field at all qp."""
        coeffs = np.asarray(coeffs, dtype=float)
        f0 = coeffs[self.qp_i0]
        f1 = coeffs[self.qp_i1]
        vals = f0 * self.qp_b0 + f1 * self.qp_b1
        grads = (f1 - f0) * self.inv_h
        return vals, grads

    def interpolate(self, fn):
        """Nodal interpolant of a callable of x."""
        return np.asarray(fn(self.nodes), dtype=float)

    def integrate(self, f):
        """Quadrature of an array of qp values or a callable of x."""
        if callable(f):
            f = f(self.qp_x)
        f = np.asarray(f, dtype=float)
        if f.shape != (self.n_qp,):
            raise ConfigError(f"expected {self.n_qp} quadrature values, got shape {f.shape}")
        return float(np.dot(self.qp_w, f))

    # -- assembly helpers -------------------------------------------------

    def scatter_matrix(self, local):
        """Assemble (n_cells, 2, 2) local blocks into a CSR matrix."""
        data = local.reshape(self.n_cells, 4).ravel()
        mat = sp.coo_matrix(
            (data, (self.loc_rows, self.loc_cols)),
            shape=(self.n_nodes, self.n_nodes),
        )
        return mat.tocsr()

    def scatter_vector(self, phi_coef, dphi_coef):
        """Accumulate dual-vector entries from per-qp test-function factors.

        phi_coef multiplies the test value, dphi_coef its derivative; both
        are flat qp arrays already containing the quadrature weight.
        """
        out = np.zeros(self.n_nodes)
        np.add.at(out, self.qp_i0, phi_coef * self.qp_b0 - dphi_coef * self.inv_h)
        np.add.at(out, self.qp_i1, phi_coef * self.qp_b1 + dphi_coef * self.inv_h)
        return out

    def mass_matrix(self):
        """P1 mass matrix (tridiagonal, plus corners when periodic)."""
        loc = self.h * np.array([[1.0 / 3.0, 1.0 / 6.0], [1.0 / 6.0, 1.0 / 3.0]])
        local = np.broadcast_to(loc, (self.n_cells, 2, 2))
        return self.scatter_matrix(local)

    def mass_solve(self, rhs):
        """Solve M x = rhs with a cached factorization; rhs may be (k, N)."""
        if self._mass_lu is None:
            self._mass_lu = spla.splu(self.mass_matrix().tocsc())
        rhs = np.asarray(rhs, dtype=float)
        if rhs.ndim == 1:
            return self._mass_lu.solve(rhs)
        return np.stack([self._mass_lu.solve(r) for r in rhs])

    # -- boundary ---------------------------------------------------------

    def endpoint_nodes(self):
        if self.periodic:
            raise TopologyError("periodic mesh has no boundary")
        return (0, self.n_nodes - 1)

    def endpoint_normals(self):
        if self.periodic:
            raise TopologyError("periodic mesh has no boundary")
        return (-1.0, 1.0)

    def endpoint_cell_gradient(self, coeffs, side: int):
        """One-sided derivative of a nodal field at an endpoint (side 0/1)."""
        if self.periodic:
            raise TopologyError("periodic mesh has no boundary")
        coeffs = np.asarray(coeffs, dtype=float)
        if side == 0:
            return (coeffs[1] - coeffs[0]) * self.inv_h
        return (coeffs[-1] - coeffs[-2]) * self.inv_h


def build_mesh(a: float, b: float, n_cells: int, periodic: bool = False) -> Mesh:
    return Mesh(a, b, n_cells, periodic)
