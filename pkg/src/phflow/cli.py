"""Command-line interface: verify, run, converge."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import kernels
from .config import config_from_dict, default_verify_dict, load_config
from .dynamics import balance_check, run
from .errors import ConfigError, IOError_, PhflowError
from .materials import Material
from .operators import assemble_J, assemble_R
from .studies import integrator_orders, oracle_agreement, weak_strong_slopes
from .verify import run_verify

CSV_SCHEMA = "phflow-balance-1"
CSV_COLUMNS = ("t,H,S,E,dHdt,dSdt,dEdt,pair_yH_u,pair_yS_u,pair_yE_u,"
               "dissipation,res_H,res_S,res_E")


def _out_dir(path_str: str) -> Path:
    out = Path(path_str)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IOError_(f"cannot create output directory {out}: {exc}") from exc
    return out


def _write_text(path: Path, text: str):
    try:
        path.write_text(text)
    except OSError as exc:
        raise IOError_(f"cannot write {path}: {exc}") from exc


def _dump_operators(cfg, out: Path):
    J = assemble_J(cfg.initial, cfg.material)
    R = assemble_R(cfg.initial, cfg.material)
    for name, op in (("J", J), ("R", R)):
        try:
            np.savetxt(out / f"operator_{name}.txt", op.dense())
        except OSError as exc:
            raise IOError_(f"cannot write operator dump: {exc}") from exc


def cmd_verify(cfg, out: Path, dump: bool) -> int:
    ok, checks = run_verify(cfg)
    report = {
        "all_passed": bool(ok),
        "backend": kernels.backend_name(),
        "checks": [
            {"name": name, "passed": bool(passed), "value": value, "tol": tol}
            for name, passed, value, tol in checks
        ],
    }
    _write_text(out / "verify_report.json", json.dumps(report, indent=2))
    for name, passed, value, tol in checks:
        print(f"[{'PASS' if passed else 'FAIL'}] {name}: value={value:.3e} tol={tol:.3e}")
    if dump:
        _dump_operators(cfg, out)
    print("verify:", "all checks passed" if ok else "FAILURES present")
    return 0 if ok else 1


def _fmt(x) -> str:
    return f"{x:.17g}"


def cmd_run(cfg, out: Path, dump: bool) -> int:
    res = run(cfg.initial, cfg.material, cfg.dt, cfg.t_end, scheme=cfg.scheme,
              boundary=cfg.boundary, path=cfg.path,
              output_interval=cfg.output_interval)
    lines = [f"# schema={CSV_SCHEMA}", CSV_COLUMNS]
    for rep in res.reports:
        lines.append(",".join(_fmt(v) for v in rep.row()))
    _write_text(out / "balance.csv", "\n".join(lines) + "\n")

    for t, z in zip(res.times, res.states):
        snap = {
            "t": t,
            "x": z.mesh.nodes.tolist(),
            "rho": z.rho.tolist(),
            "mom": z.mom.tolist(),
            "en": z.en.tolist(),
        }
        _write_text(out / f"state_{t:.6f}.json", json.dumps(snap))
    if dump:
        _dump_operators(cfg, out)

    n_bad = sum(1 for rep in res.reports if rep.interior
                and not all(balance_check(rep).values()))
    print(f"run: {len(res.reports)} report rows -> {out / 'balance.csv'}"
          f" ({n_bad} rows with balance violations)")
    return 0 if n_bad == 0 else 1


def cmd_converge(cfg, levels: int, out: Path) -> int:
    if levels < 3:
        raise ConfigError("converge needs at least 3 refinement levels")
    m = cfg.material
    m_inviscid = Material(c_v=m.c_v, R_g=m.R_g, s_ref=m.s_ref,
                          kappa=m.kappa if m.kappa > 0 else 0.01,
                          eta=0.0, zeta=0.0, tau0=m.tau0)
    n_list = [32 * 2 ** i for i in range(levels)]
    ws_slopes, ws_table = weak_strong_slopes(m_inviscid, n_list)
    oracle_n = [64 * 2 ** i for i in range(min(levels, 3))]
    or_slope, or_table = oracle_agreement(m_inviscid, oracle_n)
    orders = integrator_orders(m_inviscid)
    report = {
        "weak_strong_slopes": {"rho": ws_slopes[0], "mom": ws_slopes[1],
                               "en": ws_slopes[2], **ws_table},
        "oracle_agreement": {"slope": or_slope, **or_table},
        "integrator_orders": orders,
    }
    _write_text(out / "converge_report.json", json.dumps(report, indent=2))
    print(f"converge: weak/strong slopes rho={ws_slopes[0]:.2f}"
          f" mom={ws_slopes[1]:.2f} en={ws_slopes[2]:.2f}")
    print(f"converge: oracle L2 slope {or_slope:.2f}")
    print(f"converge: rk4 order {orders['rk4']:.2f},"
          f" implicit-midpoint order {orders['implicit-midpoint']:.2f}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="phflow",
        description="Structure-preserving 1D simulator for open compressible "
                    "heat-conducting fluids with boundary ports.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="JSON run configuration")
    common.add_argument("--out", type=str, default=".", help="output directory")
    common.add_argument("--dump-operators", action="store_true",
                        help="write dense operator matrices as text")
    common.add_argument("--seed", type=int, default=None,
                        help="override the configured random seed")

    sub.add_parser("verify", parents=[common],
                   help="run the structural property suite")
    sub.add_parser("run", parents=[common], help="integrate and emit balance data")
    conv = sub.add_parser("converge", parents=[common], help="refinement studies")
    conv.add_argument("--levels", type=int, default=3)

    args = parser.parse_args(argv)
    try:
        if args.config is None:
            cfg = config_from_dict(default_verify_dict())
        else:
            cfg = load_config(args.config)
        if args.seed is not None:
            d = dict(cfg.raw) if cfg.raw else default_verify_dict()
            d["seed"] = args.seed
            cfg = config_from_dict(d)
        out = _out_dir(args.out)
        if args.command == "verify":
            return cmd_verify(cfg, out, args.dump_operators)
        if args.command == "run":
            return cmd_run(cfg, out, args.dump_operators)
        return cmd_converge(cfg, args.levels, out)
    except PhflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
