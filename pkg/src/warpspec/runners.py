"""Experiment pipelines behind the command line.

Each runner turns a parsed config into scalars, named tolerance checks,
and CSV artifacts, then ``run`` wraps them into a schema-versioned report.
Reports are written even when checks fail; the failure is signaled by
raising CheckFailed after the files are on disk so callers can still
inspect the evidence.
"""

from __future__ import annotations

import math
import os
import time
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import schrodinger as sch
from .acceptance import (
    SMEAR_FLOOR,
    CheckResult,
    run_battery,
    smeared_biorth_error,
    suite_determinism_check,
)
from .distributions import (
    TestFunction,
    make_test_function,
    s_density,
    s_pairing_direct,
    s_pairing_parseval,
)
from .errors import (
    CheckFailed,
    ConfigParseError,
    InsufficientRuns,
    StabilityHeuristicViolated,
    WarpspecError,
)
from .grids import EnergyGrid, SampledSignal, TimeGrid
from .io import (
    read_rate_csv,
    read_signal_csv,
    write_csv,
    write_field_csv,
    write_report_json,
    write_signal_csv,
    write_spectrum_csv,
)
from .signals import band_limited_noise, gaussian_signal, hermite_signal
from .transforms import (
    biorth_pairing,
    modulated_forward,
    modulated_reduction_check,
    resolution_roundtrip,
    warped_forward,
    warped_reduction_check,
)
from .warp import WarpSpec, make_analytic_warp, make_numeric_warp

__all__ = [
    "SCHEMA_VERSION",
    "ExperimentConfig",
    "Report",
    "run",
    "emit_convergence_table",
]

SCHEMA_VERSION = "warpspec-report/1"


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed config plus the run context the CLI resolved."""

    data: dict
    out_dir: str
    seed: Optional[int] = None
    base_dir: str = "."


@dataclass(frozen=True)
class Report:
    subcommand: str
    inputs: dict
    scalars: Dict[str, float]
    checks: Tuple[CheckResult, ...]
    artifacts: Tuple[str, ...]
    wall_time_s: float
    seed: Optional[int] = None
    schema: str = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "subcommand": self.subcommand,
            "seed": self.seed,
            "inputs": self.inputs,
            "scalars": dict(self.scalars),
            "checks": [
                {
                    "name": c.name,
                    "value": c.value,
                    "tolerance": c.tolerance,
                    "comparator": c.comparator,
                    "passed": c.passed,
                }
                for c in self.checks
            ],
            "passed": self.passed,
            "artifacts": list(self.artifacts),
            "wall_time_s": self.wall_time_s,
        }


_MISSING = object()


def _table(data: dict, name: str, required: bool = True) -> dict:
    value = data.get(name, _MISSING)
    if value is _MISSING:
        if required:
            raise ConfigParseError(f"config needs a [{name}] table")
        return {}
    if not isinstance(value, dict):
        raise ConfigParseError(f"[{name}] must be a table")
    return value


def _get(table: dict, section: str, key: str, kind: type, default=_MISSING):
    value = table.get(key, _MISSING)
    if value is _MISSING:
        if default is _MISSING:
            raise ConfigParseError(f"[{section}] needs key {key!r}")
        return default
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigParseError(f"[{section}].{key} must be a number")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigParseError(f"[{section}].{key} must be an integer")
        return int(value)
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigParseError(f"[{section}].{key} must be true or false")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigParseError(f"[{section}].{key} must be a string")
        return value
    if kind is list:
        if not isinstance(value, list):
            raise ConfigParseError(f"[{section}].{key} must be an array")
        return value
    raise TypeError(f"unsupported kind {kind!r}")


def _resolve(path: str, base_dir: str) -> str:
    return path if os.path.isabs(path) else os.path.join(base_dir, path)


def _parse_warp(cfg: ExperimentConfig, section: str = "warp") -> WarpSpec:
    table = _table(cfg.data, section)
    family = _get(table, section, "family", str)
    t0 = _get(table, section, "t0", float, 0.0)
    c0 = _get(table, section, "c0", float, 0.0)
    try:
        if family == "numeric":
            path = _resolve(_get(table, section, "file", str), cfg.base_dir)
            rate = read_rate_csv(path)
            return make_numeric_warp(rate, t0=t0, c0=c0)
        params = _get(table, section, "params", list, [])
        return make_analytic_warp(family, params, t0=t0, c0=c0)
    except WarpspecError as exc:
        raise ConfigParseError(f"[{section}]: {exc}") from exc


def _parse_time_grid(cfg: ExperimentConfig, required: bool = True) -> Optional[TimeGrid]:
    table = _table(cfg.data, "time-grid", required=required)
    if not table:
        return None
    try:
        return TimeGrid(
            _get(table, "time-grid", "t-min", float),
            _get(table, "time-grid", "t-max", float),
            _get(table, "time-grid", "n", int),
        )
    except ValueError as exc:
        raise ConfigParseError(f"[time-grid]: {exc}") from exc


def _parse_signal(cfg: ExperimentConfig, tgrid: Optional[TimeGrid]) -> SampledSignal:
    table = _table(cfg.data, "signal")
    if "file" in table:
        path = _resolve(_get(table, "signal", "file", str), cfg.base_dir)
        return read_signal_csv(path)
    if tgrid is None:
        raise ConfigParseError("[signal] without 'file' needs a [time-grid] table")
    kind = _get(table, "signal", "kind", str)
    normalize = _get(table, "signal", "normalize", bool, True)
    if kind == "gaussian":
        return gaussian_signal(
            tgrid,
            sigma=_get(table, "signal", "sigma", float, 1.0),
            mu=_get(table, "signal", "mu", float, 0.0),
            carrier=_get(table, "signal", "carrier", float, 0.0),
            normalize=normalize,
        )
    if kind == "hermite":
        return hermite_signal(tgrid, _get(table, "signal", "n", int, 0), normalize=normalize)
    if kind == "noise":
        seed = cfg.seed if cfg.seed is not None else _get(table, "signal", "seed", int, 0)
        return band_limited_noise(
            tgrid, e_max=_get(table, "signal", "e-max", float, 4.0), seed=seed
        )
    raise ConfigParseError(f"[signal].kind must be gaussian, hermite, noise, or file, got {kind!r}")


def _parse_phi(cfg: ExperimentConfig) -> TestFunction:
    table = _table(cfg.data, "phi")
    kind = _get(table, "phi", "kind", str)
    try:
        if kind == "gaussian":
            return make_test_function(
                "gaussian",
                mu=_get(table, "phi", "mu", float, 0.0),
                sigma=_get(table, "phi", "sigma", float, 1.0),
            )
        if kind == "hermite":
            return make_test_function("hermite", n=_get(table, "phi", "n", int, 0))
        if kind == "bump":
            return make_test_function(
                "bump",
                mu=_get(table, "phi", "mu", float, 0.0),
                width=_get(table, "phi", "width", float, 1.0),
            )
    except (WarpspecError, ValueError, TypeError) as exc:
        raise ConfigParseError(f"[phi]: {exc}") from exc
    raise ConfigParseError(f"[phi].kind must be gaussian, hermite, or bump, got {kind!r}")


def _parse_energy_grid(cfg: ExperimentConfig, section: str, required: bool) -> Optional[EnergyGrid]:
    table = _table(cfg.data, section, required=required)
    if not table:
        return None
    try:
        return EnergyGrid(
            _get(table, section, "e-min", float),
            _get(table, section, "e-max", float),
            _get(table, section, "n", int),
        )
    except ValueError as exc:
        raise ConfigParseError(f"[{section}]: {exc}") from exc


def _parse_checks(cfg: ExperimentConfig, defaults: Dict[str, float]) -> Dict[str, float]:
    """Merge [checks] over the subcommand defaults; unknown names are config errors."""
    table = _table(cfg.data, "checks", required=False)
    merged = dict(defaults)
    for key, value in table.items():
        if key not in defaults:
            allowed = ", ".join(sorted(defaults))
            raise ConfigParseError(f"[checks].{key} is not a known check; allowed: {allowed}")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigParseError(f"[checks].{key} must be a number")
        merged[key] = float(value)
    return merged


_RunnerOut = Tuple[Dict[str, float], List[CheckResult], List[str]]


def _run_transform(cfg: ExperimentConfig) -> _RunnerOut:
    warp = _parse_warp(cfg)
    sig_from_file = "file" in _table(cfg.data, "signal")
    tgrid = _parse_time_grid(cfg, required=not sig_from_file)
    sig = _parse_signal(cfg, tgrid)
    table = _table(cfg.data, "transform", required=False)
    method = _get(table, "transform", "method", str, "resample-fft")
    egrid = _parse_energy_grid(cfg, "energy-grid", required=False)

    scalars = {
        "modulated-reduction": modulated_reduction_check(sig, warp),
        "warped-reduction": warped_reduction_check(sig, warp, egrid),
        "roundtrip-additive": resolution_roundtrip(sig, warp, flavor="additive"),
        "roundtrip-multiplicative": resolution_roundtrip(
            sig, warp, flavor="multiplicative", method=method, egrid=egrid
        ),
        "signal-norm": sig.l2_norm(),
    }
    tolerances = _parse_checks(
        cfg,
        {
            "modulated-reduction": 1e-6,
            "warped-reduction": 1e-6,
            "roundtrip-additive": 1e-7,
            "roundtrip-multiplicative": 1e-7,
        },
    )
    checks = [CheckResult(name, scalars[name], tol) for name, tol in tolerances.items()]

    artifacts = [
        write_signal_csv(os.path.join(cfg.out_dir, "signal.csv"), sig),
        write_spectrum_csv(
            os.path.join(cfg.out_dir, "modulated-spectrum.csv"), modulated_forward(sig, warp)
        ),
        write_spectrum_csv(
            os.path.join(cfg.out_dir, "warped-spectrum.csv"),
            warped_forward(sig, warp, egrid, method=method),
        ),
    ]
    return scalars, checks, artifacts


def _run_verify_biorth(cfg: ExperimentConfig) -> _RunnerOut:
    warp = _parse_warp(cfg)
    probe = _table(cfg.data, "probe", required=False)
    e0 = _get(probe, "probe", "e", float, 0.4)
    phi_t = _table(cfg.data, "phi", required=False)
    sigma = _get(phi_t, "phi", "sigma", float, 0.085)
    mu = _get(phi_t, "phi", "mu", float, e0)
    windows = _table(cfg.data, "windows", required=False)
    widths = [float(w) for w in _get(windows, "windows", "h-widths", list, [80.0, 160.0, 320.0, 640.0])]
    if len(widths) < 2:
        raise ConfigParseError("[windows].h-widths needs at least 2 entries")

    width0 = widths[0]
    lo = float(warp.h_inv(np.array(-0.5 * width0)))
    hi = float(warp.h_inv(np.array(0.5 * width0)))
    tgrid = TimeGrid(lo, hi, 16385)
    span = width0
    coincident = biorth_pairing(e0, e0, warp, tgrid)
    coincident_rel = abs(complex(coincident) - span / (2.0 * math.pi)) / (span / (2.0 * math.pi))
    zero_rel = max(
        abs(complex(biorth_pairing(e0 + 2.0 * math.pi * k / span, e0, warp, tgrid)))
        / (span / (2.0 * math.pi))
        for k in (1, 2, 3)
    )

    errors = [smeared_biorth_error(warp, w, sigma=sigma, mu=mu) for w in widths]
    defect = 0.0
    for prev, cur in zip(errors, errors[1:]):
        if cur >= SMEAR_FLOOR:
            defect = max(defect, cur - max(prev, SMEAR_FLOOR))

    scalars = {
        "coincident-rel": coincident_rel,
        "zeros-rel": zero_rel,
        "smear-first": errors[0],
        "smear-final": errors[-1],
        "smear-monotone-defect": defect,
    }
    tolerances = _parse_checks(
        cfg,
        {
            "coincident-rel": 1e-12,
            "zeros-rel": 1e-12,
            "smear-first": 1e-3,
            "smear-monotone-defect": SMEAR_FLOOR,
        },
    )
    checks = [CheckResult(name, scalars[name], tol) for name, tol in tolerances.items()]
    artifacts = [
        write_csv(
            os.path.join(cfg.out_dir, "biorth-smear.csv"),
            ("width", "error"),
            zip(widths, errors),
        )
    ]
    return scalars, checks, artifacts


def _run_distribution(cfg: ExperimentConfig) -> _RunnerOut:
    warp = _parse_warp(cfg)
    phi = _parse_phi(cfg)
    pairing = _table(cfg.data, "pairing", required=False)
    T = _get(pairing, "pairing", "T", float, None) if "T" in pairing else None
    n = _get(pairing, "pairing", "n", int, None) if "n" in pairing else None

    bounded = math.isfinite(warp.range_lo) or math.isfinite(warp.range_hi)
    if T is None:
        if bounded:
            raise ConfigParseError(
                "[pairing].T is required for warps with a one-sided h image "
                "(the window-doubling rule has no limit there)"
            )
        T_used = max(10.0, 1.25 * phi.u_halfwidth)
        direct = s_pairing_direct(warp, phi, T_used, n)
        for _ in range(3):
            nxt = s_pairing_direct(warp, phi, 2.0 * T_used, n)
            if abs(nxt - direct) < 1e-5:
                direct = nxt
                T_used = 2.0 * T_used
                break
            direct, T_used = nxt, 2.0 * T_used
        parseval = s_pairing_parseval(warp, phi, n=n)
    else:
        T_used = T
        direct = s_pairing_direct(warp, phi, T_used, n)
        parseval = s_pairing_parseval(warp, phi, T=T_used, n=n)

    difference = abs(direct - parseval)
    scalars = {
        "direct": direct.real,
        "direct-imag": direct.imag,
        "parseval": parseval.real,
        "parseval-imag": parseval.imag,
        "difference": difference,
        "T_used": T_used,
    }

    density = _table(cfg.data, "density", required=False)
    egrid = EnergyGrid(
        _get(density, "density", "e-min", float, -8.0),
        _get(density, "density", "e-max", float, 8.0),
        _get(density, "density", "n", int, 321),
    )
    dens_T = _get(density, "density", "T", float, T_used) if (bounded or "T" in density) else None
    taper = _get(density, "density", "taper", float, 0.0)
    density_samples = s_density(warp, egrid, T=dens_T, taper=taper)
    artifacts = [
        write_csv(
            os.path.join(cfg.out_dir, "density.csv"),
            ("E", "re", "im"),
            zip(egrid.energies, density_samples.values.real, density_samples.values.imag),
        )
    ]

    tolerances = _parse_checks(cfg, {"cross-method": 1e-4})
    checks = [CheckResult("cross-method", difference, tolerances["cross-method"])]
    return scalars, checks, artifacts


def _parse_hamiltonian(cfg: ExperimentConfig) -> sch.Hamiltonian1D:
    sg_t = _table(cfg.data, "space-grid")
    try:
        grid = sch.SpaceGrid(
            _get(sg_t, "space-grid", "q-min", float),
            _get(sg_t, "space-grid", "q-max", float),
            _get(sg_t, "space-grid", "n", int),
        )
    except ValueError as exc:
        raise ConfigParseError(f"[space-grid]: {exc}") from exc
    pot_t = dict(_table(cfg.data, "potential"))
    mass = float(pot_t.pop("mass", 1.0))
    try:
        return sch.build_hamiltonian(grid, pot_t, mass=mass)
    except WarpspecError as exc:
        raise ConfigParseError(f"[potential]: {exc}") from exc


def _parse_kind(cfg: ExperimentConfig) -> sch.EvolutionKind:
    ev = _table(cfg.data, "evolution")
    name = _get(ev, "evolution", "kind", str)
    warp = _parse_warp(cfg)
    if name == "additive":
        return sch.additive(warp)
    if name == "multiplicative":
        return sch.multiplicative(warp)
    if name == "combined":
        if "warp2" not in cfg.data:
            raise ConfigParseError("combined evolution needs a [warp2] table")
        return sch.combined(warp, _parse_warp(cfg, section="warp2"))
    raise ConfigParseError(
        f"[evolution].kind must be additive, multiplicative, or combined, got {name!r}"
    )


def _store_every(n_t: int, target_cols: int = 201) -> int:
    steps = n_t - 1
    want = max(1, steps // max(target_cols - 1, 1))
    for cand in range(want, 0, -1):
        if steps % cand == 0:
            return cand
    return 1


def _run_evolve(cfg: ExperimentConfig) -> _RunnerOut:
    H = _parse_hamiltonian(cfg)
    kind = _parse_kind(cfg)
    tgrid = _parse_time_grid(cfg)
    initial = _table(cfg.data, "initial", required=False)
    eigenindex = _get(initial, "initial", "eigenindex", int, 1)
    ev = _table(cfg.data, "evolution")
    store = _get(ev, "evolution", "store-every", int, 0) or _store_every(tgrid.n)

    ep = sch.eigensolve(H, eigenindex + 1)[eigenindex]
    endpoints = TimeGrid(tgrid.t_min, tgrid.t_max, 2)
    closed_ends = sch.separable_solution(ep, kind, endpoints)
    psi0 = closed_ends.values[:, 0]
    field_ = sch.propagate_crank_nicolson(H, kind, psi0, tgrid, store_every=store)
    closed = sch.separable_solution(ep, kind, field_.tgrid)

    final = field_.values[:, -1]
    ref = closed.values[:, -1]
    final_l2 = float(np.linalg.norm(final - ref) / np.linalg.norm(ref))
    dq = H.grid.dq
    norm0 = float(np.sqrt(np.sum(np.abs(field_.values[:, 0]) ** 2) * dq))
    normT = float(np.sqrt(np.sum(np.abs(final) ** 2) * dq))
    scalars = {
        "final-l2": final_l2,
        "norm-drift": abs(normT - norm0),
        "eigenvalue": ep.E,
        "refinement": tgrid.dt,
    }

    artifacts = [
        write_field_csv(os.path.join(cfg.out_dir, "field.csv"), field_),
        write_csv(
            os.path.join(cfg.out_dir, "final-state.csv"),
            ("q", "re", "im"),
            zip(H.grid.points, final.real, final.imag),
        ),
    ]

    defaults = {"final-l2": 1e-4, "norm-drift": 1e-10}
    study = _table(cfg.data, "study", required=False)
    slope = None
    if study:
        quantity = _get(study, "study", "quantity", str, "final-l2")
        n_values = [int(v) for v in _get(study, "study", "n-values", list)]
        expected = _get(study, "study", "expected-slope", float, 2.0 if quantity == "final-l2" else 4.0)
        sub_reports = []
        for n_t in sorted(n_values):
            sub_grid = TimeGrid(tgrid.t_min, tgrid.t_max, n_t)
            if quantity == "final-l2":
                sub_closed = sch.separable_solution(ep, kind, TimeGrid(tgrid.t_min, tgrid.t_max, 2))
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", StabilityHeuristicViolated)
                    sub_field = sch.propagate_crank_nicolson(
                        H, kind, sub_closed.values[:, 0], sub_grid, store_every=n_t - 1
                    )
                err = float(
                    np.linalg.norm(sub_field.values[:, -1] - sub_closed.values[:, 1])
                    / np.linalg.norm(sub_closed.values[:, 1])
                )
            elif quantity == "residual":
                sub_field = sch.separable_solution(ep, kind, sub_grid)
                err = sch.schrodinger_residual(sub_field, H, kind)
            else:
                raise ConfigParseError("[study].quantity must be final-l2 or residual")
            sub_reports.append(
                Report(
                    subcommand="evolve",
                    inputs={},
                    scalars={"refinement": sub_grid.dt, quantity: err},
                    checks=(),
                    artifacts=(),
                    wall_time_s=0.0,
                )
            )
        slope = emit_convergence_table(
            sub_reports, quantity, path=os.path.join(cfg.out_dir, "convergence.csv")
        )
        artifacts.append(os.path.join(cfg.out_dir, "convergence.csv"))
        scalars["slope"] = slope
        scalars["slope-gap"] = abs(slope - expected)
        defaults["slope-gap"] = 0.2 if quantity == "final-l2" else 0.3

    tolerances = _parse_checks(cfg, defaults)
    checks = [CheckResult(name, scalars[name], tol) for name, tol in tolerances.items()]
    return scalars, checks, artifacts


def _run_orthogonality(cfg: ExperimentConfig) -> _RunnerOut:
    H = _parse_hamiltonian(cfg)
    kind = _parse_kind(cfg)
    tgrid = _parse_time_grid(cfg)
    pairs_t = _table(cfg.data, "pairs", required=False)
    indices = [int(i) for i in _get(pairs_t, "pairs", "indices", list, [0, 1, 2, 3])]
    samples = _get(pairs_t, "pairs", "separable-samples", int, 50)
    ev = _table(cfg.data, "evolution")
    store = _get(ev, "evolution", "store-every", int, 0) or _store_every(tgrid.n)

    eps = sch.eigensolve(H, max(indices) + 1)
    tg_sep = TimeGrid(tgrid.t_min, tgrid.t_max, samples)
    sep_fields = {i: sch.separable_solution(eps[i], kind, tg_sep) for i in indices}
    closed = {
        i: sch.separable_solution(eps[i], kind, TimeGrid(tgrid.t_min, tgrid.t_max, 2))
        for i in indices
    }
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StabilityHeuristicViolated)
        prop_fields = {
            i: sch.propagate_crank_nicolson(H, kind, closed[i].values[:, 0], tgrid, store_every=store)
            for i in indices
        }

    rows: List[tuple] = []
    sep_max = prop_max = 0.0
    n_stored = next(iter(prop_fields.values())).tgrid.n
    for a in range(len(indices)):
        for b in range(a + 1, len(indices)):
            i, j = indices[a], indices[b]
            sep = max(
                sch.cross_orthogonality(sep_fields[i], sep_fields[j], ti)
                for ti in range(tg_sep.n)
            )
            prop = max(
                sch.cross_orthogonality(prop_fields[i], prop_fields[j], ti)
                for ti in range(n_stored)
            )
            sep_max, prop_max = max(sep_max, sep), max(prop_max, prop)
            rows.append((i, j, sep, prop))

    scalars = {"separable": sep_max, "propagated": prop_max}
    tolerances = _parse_checks(cfg, {"separable": 1e-10, "propagated": 1e-6})
    checks = [CheckResult(name, scalars[name], tol) for name, tol in tolerances.items()]
    artifacts = [
        write_csv(
            os.path.join(cfg.out_dir, "orthogonality.csv"),
            ("i", "j", "separable_max", "propagated_max"),
            rows,
        )
    ]
    return scalars, checks, artifacts


def _run_suite(cfg: ExperimentConfig) -> _RunnerOut:
    suite_t = _table(cfg.data, "suite", required=False)
    scale = _get(suite_t, "suite", "scale", str, "full")
    if scale not in ("full", "smoke"):
        raise ConfigParseError(f"[suite].scale must be full or smoke, got {scale!r}")
    determinism = _get(suite_t, "suite", "determinism", bool, scale == "full")

    results = run_battery(scale)
    if determinism:
        results.append(suite_determinism_check(seed=cfg.seed if cfg.seed is not None else 7))

    scalars: Dict[str, float] = {}
    checks: List[CheckResult] = []
    summary_rows: List[tuple] = []
    artifacts: List[str] = []
    for res in results:
        scalars[f"criterion-{res.index}-seconds"] = round(res.seconds, 3)
        for c in res.checks:
            checks.append(replace(c, name=f"c{res.index}-{c.name}"))
            summary_rows.append(
                (res.index, res.title, c.name, c.value, c.comparator, c.tolerance, c.passed)
            )
        for tname, (header, rows) in res.tables.items():
            path = os.path.join(cfg.out_dir, f"{tname}.csv")
            artifacts.append(write_csv(path, header, rows))
    summary_path = os.path.join(cfg.out_dir, "acceptance-summary.csv")
    artifacts.insert(
        0,
        write_csv(
            summary_path,
            ("criterion", "title", "check", "value", "comparator", "tolerance", "passed"),
            summary_rows,
        ),
    )
    return scalars, checks, artifacts


_RUNNERS: Dict[str, Callable[[ExperimentConfig], _RunnerOut]] = {
    "transform": _run_transform,
    "verify-biorth": _run_verify_biorth,
    "distribution": _run_distribution,
    "evolve": _run_evolve,
    "orthogonality": _run_orthogonality,
    "suite": _run_suite,
}


def run(subcommand: str, config: ExperimentConfig) -> Report:
    """Execute a subcommand; write report.json; raise CheckFailed on red checks."""
    if subcommand not in _RUNNERS:
        known = ", ".join(sorted(_RUNNERS))
        raise ConfigParseError(f"unknown subcommand {subcommand!r}; known: {known}")
    os.makedirs(config.out_dir, exist_ok=True)
    start = time.perf_counter()
    scalars, checks, artifacts = _RUNNERS[subcommand](config)
    report_path = os.path.join(config.out_dir, "report.json")
    report = Report(
        subcommand=subcommand,
        inputs=config.data,
        scalars={k: float(v) for k, v in scalars.items()},
        checks=tuple(checks),
        artifacts=tuple(artifacts + [report_path]),
        wall_time_s=time.perf_counter() - start,
        seed=config.seed,
    )
    write_report_json(report_path, report.to_dict())
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        exc = CheckFailed(f"checks failed: {', '.join(failed)} (report at {report_path})")
        exc.report = report
        raise exc
    return report


def emit_convergence_table(
    runs: Sequence[Report],
    quantity: str,
    parameter: str = "refinement",
    path: Optional[str] = None,
) -> float:
    """Fit a log-log slope of ``quantity`` against ``parameter`` across runs.

    Needs at least 3 runs with distinct positive parameter values and positive
    quantities; anything else cannot support a slope estimate and raises
    InsufficientRuns. Optionally writes the (parameter, quantity) table.
    """
    points = []
    for r in runs:
        scalars = r.scalars
        if parameter not in scalars or quantity not in scalars:
            raise InsufficientRuns(
                f"every run needs scalars {parameter!r} and {quantity!r}"
            )
        points.append((float(scalars[parameter]), float(scalars[quantity])))
    if len({p for p, _ in points}) < 3:
        raise InsufficientRuns("need at least 3 runs with distinct refinement parameters")
    if any(p <= 0 or q <= 0 for p, q in points):
        raise InsufficientRuns("parameters and quantities must be positive for a log-log fit")
    points.sort()
    xs = np.log([p for p, _ in points])
    ys = np.log([q for _, q in points])
    slope = float(np.polyfit(xs, ys, 1)[0])
    if path is not None:
        write_csv(path, (parameter, quantity), points)
    return slope
