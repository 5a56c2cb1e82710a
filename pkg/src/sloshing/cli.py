"""Command-line front end: ``sloshing {modes,evolve,observe,control,inject}``.

Configuration comes from one JSON file plus flag overrides. Outputs are
deterministic CSV/JSON files; every CSV starts with a comment line
carrying the artifact version and the config hash. Errors go to stderr
as ``{"error": {"code": ..., "message": ...}}``; input errors exit with
status 2, numerical failures with status 3.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from contextlib import nullcontext
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from . import io
from .chebyshev import ChebSeries
from .control import ControlSolution, default_injection_points, hum_control, plan_from_control, \
    injection_modal_forcing
from .domain import weight_from_label
from .dynamics import (ModalData, ModalState, default_horizon, duhamel_resonant, energy,
                       evolve_homogeneous, observability_constant, observability_ratio,
                       observability_threshold, project_data, state_mass)
from .errors import InputError, SloshingError
from .spectrum import BasisSpec, ModeSet, family_for, solve_modes

__all__ = ["RunConfig", "main", "build_modes"]

CONTAINERS = ("half-disk", "cheb-fixture", "flat")


@dataclass
class RunConfig:
    """Validated run configuration.

    ``fixture_basis`` selects the unconstrained Chebyshev basis, in which
    the cheb-fixture weight is diagonal. ``basis_count`` defaults to
    ``4 n_modes + 32``.
    """

    container: str = "half-disk"
    end_condition: str = "pinned"
    symmetry: str = "antisymmetric"
    n_modes: int = 4
    horizon_T: Union[float, str] = "auto"
    seed: int = 0
    output_dir: str = "."
    fixture_basis: bool = False
    basis_count: Optional[int] = None
    injection_points: Optional[list] = None
    wall_weights: Optional[list] = None

    def __post_init__(self):
        if not (self.container in CONTAINERS or self.container.startswith("custom:")):
            raise InputError(f"unknown container '{self.container}'")
        if self.container.startswith("custom:") and not Path(self.container[7:]).is_file():
            raise InputError(f"custom container file not found: {self.container[7:]}")
        if self.end_condition not in ("pinned", "free"):
            raise InputError(f"end_condition must be pinned or free, got '{self.end_condition}'")
        if self.symmetry not in ("symmetric", "antisymmetric", "full"):
            raise InputError(f"unknown symmetry '{self.symmetry}'")
        if isinstance(self.n_modes, bool) or not isinstance(self.n_modes, int) or self.n_modes < 1:
            raise InputError("n_modes must be an integer >= 1")
        if self.horizon_T != "auto":
            try:
                self.horizon_T = float(self.horizon_T)
            except (TypeError, ValueError):
                raise InputError("horizon_T must be a number or \"auto\"") from None
            if not (self.horizon_T > 0 and math.isfinite(self.horizon_T)):
                raise InputError("horizon_T must be positive")
        if self.basis_count is not None and (not isinstance(self.basis_count, int)
                                             or self.basis_count < self.n_modes + 4):
            raise InputError("basis_count must be an integer >= n_modes + 4")

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def hash_payload(self) -> dict:
        d = asdict(self)
        d.pop("output_dir")
        return d

    def spec(self) -> BasisSpec:
        count = self.basis_count or 4 * self.n_modes + 32
        family = family_for(self.end_condition, self.symmetry, self.fixture_basis)
        constraint = False if self.fixture_basis and self.container == "cheb-fixture" else None
        return BasisSpec(family, count, constraint)


def build_modes(config: RunConfig, doubled: bool = False) -> ModeSet:
    """Solve the eigenproblem described by ``config``."""
    spec = config.spec()
    if doubled:
        spec = BasisSpec(spec.family, 2 * spec.count, spec.mass_constraint)
    return solve_modes(spec, weight_from_label(config.container), config.n_modes)


def _horizon(config: RunConfig, modes, override=None) -> float:
    if override is not None:
        return float(override)
    if config.horizon_T == "auto":
        return default_horizon(modes)
    return float(config.horizon_T)


def _load_json(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"file not found: {path}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path} must contain a JSON object")
    return data


def load_data(path, modes: ModeSet) -> ModalData:
    """Initial data as ``{"A": [...], "B": [...]}`` or ``{"phi0": [...], "phi1": [...]}``."""
    d = _load_json(path)
    if "A" in d and "B" in d:
        try:
            data = ModalData(d["A"], d["B"])
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed modal data: {exc}") from None
        if data.n_modes != modes.n_modes:
            raise InputError(f"data has {data.n_modes} modes, config has {modes.n_modes}")
        return data
    if "phi0" in d and "phi1" in d:
        return project_data(ChebSeries.from_list(d["phi0"]), ChebSeries.from_list(d["phi1"]), modes)
    raise InputError("data file needs keys A,B (modal) or phi0,phi1 (Chebyshev series)")


def _out(config: RunConfig) -> Path:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _modes_table(path, modes, chash):
    io.write_table(path, ["n", "lambda", "theta"], modes.table_rows(), chash)


# -- commands -------------------------------------------------------------------------

def cmd_modes(config: RunConfig, doubling: bool = False, check_oracle: bool = False) -> dict:
    out, chash = _out(config), io.config_hash(config.hash_payload())
    modes = build_modes(config)
    _modes_table(out / "modes.csv", modes, chash)
    io.write_json(out / "modes.json", modes.to_dict())
    summary = {"lambdas": modes.lambdas.tolist()}
    if doubling or check_oracle:
        fine = build_modes(config, doubled=True)
        drift = np.abs(fine.lambdas - modes.lambdas) / np.abs(modes.lambdas)
        _modes_table(out / "modes_doubled.csv", fine, chash)
        summary["relative_drift"] = drift.tolist()
        summary["max_relative_drift"] = float(np.max(drift))
        io.write_json(out / "modes_drift.json", summary)
    return summary


def _times(spec: str) -> np.ndarray:
    try:
        if ":" in spec:
            a, b, n = spec.split(":")
            t = np.linspace(float(a), float(b), int(n))
        else:
            t = np.array([float(v) for v in spec.split(",")])
    except ValueError:
        raise InputError(f"bad times '{spec}'; use start:stop:count or a comma list") from None
    if t.size == 0 or np.any(t < 0) or not np.all(np.isfinite(t)):
        raise InputError("times must be finite and nonnegative")
    return t


def _forced_state(data: ModalData, modes, control: ControlSolution, t: float) -> ModalState:
    th = modes.thetas
    tt = min(t, control.T)
    c, cd = duhamel_resonant(data.A, th * data.B, th, control.adjoint_data.A,
                             control.adjoint_data.B, tt)
    if t <= control.T:
        return ModalState(c, cd, t)
    after = evolve_homogeneous(ModalData(c, cd / th), modes, t - control.T)
    return ModalState(after.c, after.c_dot, t)


def cmd_evolve(config: RunConfig, data_path, times: str, forcing_path=None) -> dict:
    out, chash = _out(config), io.config_hash(config.hash_payload())
    modes = build_modes(config)
    data = load_data(data_path, modes)
    control = None
    if forcing_path is not None:
        control = ControlSolution.from_dict(_load_json(forcing_path))
        if control.thetas.size != modes.n_modes or not np.allclose(control.thetas, modes.thetas,
                                                                   rtol=1e-9):
            raise InputError("forcing file was computed for a different mode set")
    rows = []
    for t in _times(times):
        st = (evolve_homogeneous(data, modes, t) if control is None
              else _forced_state(data, modes, control, t))
        rows.append([t, energy(st, modes), state_mass(st, modes), *st.c])
    header = ["t", "E", "mass"] + [f"c_{i + 1}" for i in range(modes.n_modes)]
    io.write_table(out / "trajectory.csv", header, rows, chash)
    E = np.array([r[1] for r in rows])
    return {"E_first": float(E[0]), "E_last": float(E[-1]),
            "max_energy_drift": float(np.max(np.abs(E - E[0])))}


def cmd_observe(config: RunConfig, data_path, T=None, check_oracle: bool = False) -> dict:
    out = _out(config)
    modes = build_modes(config)
    data = load_data(data_path, modes)
    horizon = _horizon(config, modes, T)
    rep = observability_ratio(data, modes, horizon).to_dict()
    rep["threshold"] = observability_threshold(modes)
    rep["lower_bound_constant"] = observability_constant(modes, horizon)
    if check_oracle:
        from .oracles import time_quadrature_lhs
        q = time_quadrature_lhs(data.A, data.B, modes.thetas, horizon)
        rep["oracle"] = {"lhs_quadrature": q, "lhs_residual": abs(q - rep["lhs"])}
    io.write_json(out / "observability.json", rep)
    return rep


def _write_plan(out, plan, chash):
    header = ["t"] + [f"j_{i + 1}" for i in range(plan.n_points)]
    io.write_table(out / "injection.csv", header, np.column_stack([plan.times, plan.rates]), chash)
    io.write_json(out / "injection.json", plan.to_dict())


def _plan(config: RunConfig, solution: ControlSolution, modes):
    points = config.injection_points
    if points is None:
        points = default_injection_points(modes.n_modes + 1).tolist()
    return plan_from_control(solution, modes, points, config.wall_weights)


def cmd_control(config: RunConfig, data_path, check_oracle: bool = False) -> dict:
    out, chash = _out(config), io.config_hash(config.hash_payload())
    modes = build_modes(config)
    data = load_data(data_path, modes)
    horizon = _horizon(config, modes)
    sol = hum_control(data, modes, horizon)
    io.write_json(out / "control.json", sol.to_dict())
    t, H = sol.sample()
    header = ["t"] + [f"h_{i + 1}" for i in range(modes.n_modes)]
    io.write_table(out / "control_h.csv", header, np.column_stack([t, H]), chash)

    E0, ET = sol.initial_energy, sol.terminal_energy
    report = {
        "T": horizon,
        "threshold": observability_threshold(modes),
        "E0": E0,
        "ET": ET,
        "ET_over_E0": ET / E0 if E0 > 0 else 0.0,
        "gramian_condition_numbers": sol.gramian_conditions.tolist(),
        "functional_value": sol.functional_value,
        "unresolved_residual": sol.unresolved_residual,
        "observability_ratio": (observability_ratio(data, modes, horizon).ratio
                                if E0 > 0 else None),
    }
    try:
        plan = _plan(config, sol, modes)
    except SloshingError as exc:
        report["injection"] = {"error": {"code": exc.code, "message": str(exc)}}
    else:
        _write_plan(out, plan, chash)
        n = plan.n_points - 1
        realized = injection_modal_forcing(plan, modes, "mass-rule")
        resid = realized[:, :n] - H[:, :n]
        scale = max(float(np.max(np.abs(H[:, :n]))), 1e-300)
        report["injection"] = {
            "points": plan.points.tolist(),
            "condition": plan.meta["condition"],
            "controlled_modes": n,
            "modal_match_residual": float(np.max(np.abs(resid))) / scale if H.size else 0.0,
            "max_abs_net_flux": float(np.max(np.abs(plan.rates.sum(axis=1)))),
            "unresolved_modal_forcing": float(np.max(np.abs(realized[:, n:] - H[:, n:])))
            if n < modes.n_modes else 0.0,
        }
    if check_oracle:
        from .oracles import ode_terminal
        th = modes.thetas
        c, cd = ode_terminal(data.A, th * data.B, th, sol.h_modal, horizon)
        ET_ode = energy(ModalState(c, cd), modes)
        report["oracle"] = {"ET_ode": ET_ode, "ET_ode_over_E0": ET_ode / E0 if E0 > 0 else 0.0}
    io.write_json(out / "report.json", report)
    return report


def cmd_inject(config: RunConfig, control_path) -> dict:
    out, chash = _out(config), io.config_hash(config.hash_payload())
    modes = build_modes(config)
    sol = ControlSolution.from_dict(_load_json(control_path))
    if sol.thetas.size != modes.n_modes or not np.allclose(sol.thetas, modes.thetas, rtol=1e-9):
        raise InputError("control file was computed for a different mode set")
    plan = _plan(config, sol, modes)
    _write_plan(out, plan, chash)
    return {"points": plan.points.tolist(), "condition": plan.meta["condition"]}


# -- argument handling --------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--output", help="output directory (overrides output_dir)")
    common.add_argument("--threads", type=int, help="limit BLAS/LAPACK threads")
    common.add_argument("--check-oracle", action="store_true",
                        help="run slow quadrature/ODE oracles and add residuals to reports")
    common.add_argument("--container")
    common.add_argument("--end-condition", dest="end_condition")
    common.add_argument("--symmetry")
    common.add_argument("--n-modes", dest="n_modes", type=int)
    common.add_argument("--horizon", dest="horizon_T")
    common.add_argument("--seed", type=int)
    common.add_argument("--fixture-basis", dest="fixture_basis", action="store_true", default=None)
    common.add_argument("--basis-count", dest="basis_count", type=int)

    p = argparse.ArgumentParser(prog="sloshing", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    m = sub.add_parser("modes", parents=[common], help="eigenvalue table")
    m.add_argument("--doubling", action="store_true", help="also solve with doubled basis")
    e = sub.add_parser("evolve", parents=[common], help="trajectory of modal state")
    e.add_argument("--data", required=True)
    e.add_argument("--times", default="0:10:11", help="start:stop:count or comma list")
    e.add_argument("--forcing", help="control.json to apply as forcing")
    o = sub.add_parser("observe", parents=[common], help="observability ratio")
    o.add_argument("--data", required=True)
    o.add_argument("--T", dest="T", type=float)
    c = sub.add_parser("control", parents=[common], help="HUM control and injection")
    c.add_argument("--data", required=True)
    i = sub.add_parser("inject", parents=[common], help="injection plan from control.json")
    i.add_argument("--control", required=True)
    return p


_OVERRIDES = ("container", "end_condition", "symmetry", "n_modes", "horizon_T", "seed",
              "fixture_basis", "basis_count")


def config_from_args(args) -> RunConfig:
    data = _load_json(args.config) if args.config else {}
    for key in _OVERRIDES:
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    if args.output:
        data["output_dir"] = args.output
    return RunConfig.from_mapping(data)


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(message)


def _emit_error(code: str, message: str):
    sys.stderr.write(json.dumps({"error": {"code": code, "message": message}}, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = _parser()
    parser.__class__ = _Parser
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            sp.__class__ = _Parser
    try:
        args = parser.parse_args(argv)
    except _ArgumentError as exc:
        _emit_error("usage", str(exc))
        return 2
    try:
        config = config_from_args(args)
        if args.threads is not None and args.threads < 1:
            raise InputError("--threads must be >= 1")
        if args.threads is not None:
            from threadpoolctl import threadpool_limits
            limiter = threadpool_limits(limits=args.threads)
        else:
            limiter = nullcontext()
        with limiter:
            if args.command == "modes":
                result = cmd_modes(config, args.doubling, args.check_oracle)
            elif args.command == "evolve":
                result = cmd_evolve(config, args.data, args.times, args.forcing)
            elif args.command == "observe":
                result = cmd_observe(config, args.data, args.T, args.check_oracle)
            elif args.command == "control":
                result = cmd_control(config, args.data, args.check_oracle)
            else:
                result = cmd_inject(config, args.control)
    except InputError as exc:
        _emit_error(exc.code, str(exc))
        return 2
    except SloshingError as exc:
        _emit_error(exc.code, str(exc))
        return 3
    sys.stdout.write(io.dumps(result) + "\n")
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
