"""Run configuration: one JSON document, validated up front.

Initial conditions come from a small named family (uniform, sine,
gaussian) with per-field parameters, which keeps runs reproducible
without an expression language.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .dynamics import SINGLE_GENERATOR, TWO_GENERATOR, Boundary
from .errors import ConfigError
from .fields import State
from .materials import Material
from .mesh import Mesh, build_mesh
from .operators import PortSignal

_SCHEMES = ("rk4", "implicit-midpoint")
_PATHS = (TWO_GENERATOR, SINGLE_GENERATOR)
_MODES = ("isolated-periodic", "self-trace", "prescribed")


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def _get(d, key, typ, default=None, required=False):
    if key not in d:
        if required:
            raise ConfigError(f"missing config key {key!r}")
        return default
    val = d[key]
    if typ is float and isinstance(val, int):
        val = float(val)
    _require(isinstance(val, typ), f"config key {key!r} must be {typ}")
    return val


def _field_profile(kind: str, spec, mesh: Mesh):
    xi = (mesh.nodes - mesh.a) / (mesh.b - mesh.a)
    if kind == "uniform":
        _require(isinstance(spec, (int, float)), "uniform fields take a number")
        return np.full(mesh.n_nodes, float(spec))
    _require(isinstance(spec, dict), f"{kind} fields take a parameter table")
    base = _get(spec, "base", (int, float), default=0.0)
    amp = _get(spec, "amp", (int, float), default=0.0)
    if kind == "sine":
        freq = _get(spec, "freq", (int, float), default=1.0)
        phase = _get(spec, "phase", (int, float), default=0.0)
        return base + amp * np.sin(2.0 * np.pi * freq * xi + phase)
    if kind == "gaussian":
        center = _get(spec, "center", (int, float), default=0.5)
        width = _get(spec, "width", (int, float), default=0.1)
        _require(width > 0, "gaussian width must be positive")
        return base + amp * np.exp(-(((xi - center) / width) ** 2))
    raise ConfigError(f"unknown initial-condition kind {kind!r}")


def build_initial(mesh: Mesh, spec: dict) -> State:
    kind = _get(spec, "kind", str, required=True)
    _require(kind in ("uniform", "sine", "gaussian"),
             f"initial kind must be uniform|sine|gaussian, got {kind!r}")
    rho = _field_profile(kind, spec.get("rho", 1.0 if kind == "uniform" else {"base": 1.0}), mesh)
    mom = _field_profile(kind, spec.get("mom", 0.0 if kind == "uniform" else {"base": 0.0}), mesh)
    en = _field_profile(kind, spec.get("en", 1.0 if kind == "uniform" else {"base": 1.0}), mesh)
    return State(mesh, rho, mom, en)


def _build_boundary(d: dict, mesh: Mesh) -> Boundary:
    mode = _get(d, "mode", str, required=True)
    _require(mode in _MODES, f"boundary mode must be one of {_MODES}, got {mode!r}")
    if mode == "prescribed":
        _require(not mesh.periodic, "periodic meshes cannot take prescribed ports")
        if "series" in d:
            series = d["series"]
            _require(isinstance(series, list) and series, "port series must be a nonempty list")
            entries = []
            for rec in series:
                t0 = _get(rec, "t", (int, float), required=True)
                left = tuple(_get(rec, "left", list, required=True))
                right = tuple(_get(rec, "right", list, required=True))
                _require(len(left) == 3 and len(right) == 3, "port triples need 3 entries")
                entries.append((float(t0), PortSignal(left, right)))
            entries.sort(key=lambda e: e[0])

            def signal(t, entries=tuple(entries)):
                out = entries[0][1]
                for t0, sig in entries:
                    if t >= t0 - 1e-15:
                        out = sig
                return out
        else:
            ports = _get(d, "ports", dict, required=True)
            left = tuple(_get(ports, "left", list, required=True))
            right = tuple(_get(ports, "right", list, required=True))
            _require(len(left) == 3 and len(right) == 3, "port triples need 3 entries")
            const = PortSignal(left, right)

            def signal(t, const=const):
                return const
        return Boundary("prescribed", signal)
    if mode == "isolated-periodic":
        _require(mesh.periodic, "isolated-periodic requires a periodic mesh")
    else:
        _require(not mesh.periodic, "self-trace requires a bounded mesh")
    return Boundary(mode)


@dataclass
class RunConfig:
    """Validated run configuration with constructed model objects."""

    mesh: Mesh
    material: Material
    initial: State
    boundary: Boundary
    scheme: str
    dt: float
    t_end: float
    output_interval: float | None
    path: str
    seed: int
    raw: dict = field(default_factory=dict, repr=False)


def config_from_dict(d: dict) -> RunConfig:
    _require(isinstance(d, dict), "config must be a JSON object")
    mesh_d = _get(d, "mesh", dict, required=True)
    mesh = build_mesh(
        _get(mesh_d, "a", (int, float), required=True),
        _get(mesh_d, "b", (int, float), required=True),
        _get(mesh_d, "n_cells", int, required=True),
        _get(mesh_d, "periodic", bool, default=False),
    )
    mat_d = _get(d, "material", dict, default={})
    material = Material(
        c_v=_get(mat_d, "c_v", (int, float), default=1.0),
        R_g=_get(mat_d, "R_g", (int, float), default=1.0),
        s_ref=_get(mat_d, "s_ref", (int, float), default=0.0),
        kappa=_get(mat_d, "kappa", (int, float), default=0.0),
        eta=_get(mat_d, "eta", (int, float), default=0.0),
        zeta=_get(mat_d, "zeta", (int, float), default=0.0),
        tau0=_get(mat_d, "tau0", (int, float), default=1.0),
    )
    initial = build_initial(mesh, _get(d, "initial", dict, required=True))
    bd = _get(d, "boundary", dict,
              default={"mode": "isolated-periodic" if mesh.periodic else "self-trace"})
    boundary = _build_boundary(bd, mesh)

    integ = _get(d, "integrator", dict, default={})
    scheme = _get(integ, "scheme", str, default="implicit-midpoint")
    _require(scheme in _SCHEMES, f"scheme must be one of {_SCHEMES}")
    dt = _get(integ, "dt", (int, float), default=1e-3)
    _require(dt > 0, "dt must be positive")
    t_end = _get(integ, "t_end", (int, float), default=0.0)
    _require(t_end >= 0, "t_end must be nonnegative")
    output_interval = _get(integ, "output_interval", (int, float), default=None)
    if output_interval is not None:
        _require(output_interval > 0, "output_interval must be positive")

    path = _get(d, "path", str, default=TWO_GENERATOR)
    _require(path in _PATHS, f"path must be one of {_PATHS}")
    if path == SINGLE_GENERATOR:
        _require(material.inviscid, "single-generator path requires eta = zeta = 0")
    seed = _get(d, "seed", int, default=1234)

    return RunConfig(mesh=mesh, material=material, initial=initial, boundary=boundary,
                     scheme=scheme, dt=float(dt), t_end=float(t_end),
                     output_interval=output_interval, path=path, seed=seed, raw=d)


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(d)


def default_verify_dict() -> dict:
    """Built-in configuration for the structural verification suite."""
    return {
        "mesh": {"a": 0.0, "b": 1.0, "n_cells": 32, "periodic": True},
        "material": {"c_v": 1.0, "R_g": 1.0, "s_ref": 0.0,
                     "kappa": 0.01, "eta": 0.0, "zeta": 0.0, "tau0": 1.0},
        "initial": {"kind": "sine",
                    "rho": {"base": 1.0, "amp": 0.1, "freq": 1},
                    "mom": {"base": 0.0, "amp": 0.1, "freq": 2},
                    "en": {"base": 1.0, "amp": 0.1, "freq": 1, "phase": 0.7}},
        "boundary": {"mode": "isolated-periodic"},
        "integrator": {"scheme": "implicit-midpoint", "dt": 1e-3, "t_end": 0.0},
        "path": "two-generator",
        "seed": 1234,
    }
