"""
Orchestration behind the command line: tau1 candidates, single runs,
parameter sweeps and (tau1, tau2) surfaces.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from config import Settings, settings
from cavity import __version__
from cavity.errors import CavityError, ConfigError
from cavity.export import write_csv, write_manifest
from cavity.fock import PassageState
from cavity.observables import (
    entropy_cubic,
    inversion,
    mandel_q,
    moments,
    reduced_rho,
    squeezing_first,
    squeezing_second,
)
from cavity.scenario import SWEEP_AXES, ScenarioConfig, build_config
from cavity.solver import (
    ProjectionResult,
    inversion_minima,
    passage_amplitudes,
    passage_series,
    prepare_second_field,
    scan_first_passage,
)
from cavity.wigner import WignerGridSpec, wigner

logger = logging.getLogger("cavity.runner")

SERIES_OBSERVABLES = ("inversion", "entropy", "squeezing1", "squeezing2", "mandel")


class MinimumCandidate(BaseModel):
    model_config = ConfigDict(frozen=True)

    tau1: float
    inversion: float
    probability: float


class RunReport(BaseModel):
    out_dir: str
    files: List[str]
    n_max: int
    rows: int
    projection_probability: float
    wigner_tau2: Optional[float] = None
    max_entropy: Optional[float] = None
    min_s_x1: Optional[float] = None
    min_mandel: Optional[float] = None
    wigner_min: Optional[float] = None


class SweepPoint(BaseModel):
    value: float
    status: str
    report: Optional[RunReport] = None
    error: Optional[str] = None


# ── Series evaluation ──

def _moment_series(states: Sequence[PassageState], engine: Settings, cache: Dict) -> list:
    if "moments" not in cache:
        cache["moments"] = [moments(s, margin_tol=engine.moment_margin_tol) for s in states]
    return cache["moments"]


def observable_columns(
    name: str, states: Sequence[PassageState], engine: Settings = settings, cache: Optional[Dict] = None
) -> Tuple[List[str], np.ndarray]:
    """Nomes de colunas e valores (linhas x colunas) de um observável em série temporal"""
    cache = {} if cache is None else cache
    if name == "inversion":
        return ["value"], np.array([[inversion(s)] for s in states])
    if name == "entropy":
        return ["value"], np.array(
            [[entropy_cubic(reduced_rho(s), clip=engine.eigenvalue_clip)] for s in states]
        )
    if name == "mandel":
        m = _moment_series(states, engine, cache)
        return ["value"], np.array([[mandel_q(s, mm)] for s, mm in zip(states, m)])
    if name in ("squeezing1", "squeezing2"):
        m = _moment_series(states, engine, cache)
        squeeze = squeezing_first if name == "squeezing1" else squeezing_second
        pairs = [squeeze(s, mm) for s, mm in zip(states, m)]
        return ["s_x", "s_p"], np.array([[p.s_x, p.s_p] for p in pairs])
    raise ConfigError(f"'{name}' não é um observável de série temporal", code="observable")


def _second_passage(
    config: ScenarioConfig, engine: Settings
) -> Tuple[ProjectionResult, np.ndarray, List[PassageState]]:
    params = config.model_params()
    projection = prepare_second_field(
        params,
        config.alpha,
        config.tau1,
        tail_tol=config.tail_tol,
        projection_floor=engine.projection_floor,
        degeneracy_tol=engine.degeneracy_tol,
    )
    taus = config.tau2_grid()
    states = passage_series(
        projection.field,
        params,
        taus,
        degeneracy_tol=engine.degeneracy_tol,
        normalization_tol=engine.normalization_tol,
    )
    return projection, taus, states


def default_wigner_tau2(taus: np.ndarray, inversion_values: np.ndarray) -> float:
    """Primeiro mínimo local da inversão da segunda passagem, ou a menor amostra"""
    minima = inversion_minima(inversion_values)
    if minima.size:
        return float(taus[minima[0]])
    return float(taus[int(np.argmin(inversion_values))])


# ── Commands ──

def cmd_minima(config: ScenarioConfig, out_dir: Optional[Path] = None) -> List[MinimumCandidate]:
    """Mínimos locais da inversão da primeira passagem em [0, tau1_scan_max]"""
    params = config.model_params()
    taus = config.tau1_scan_grid()
    values, probability = scan_first_passage(params, config.alpha, taus, tail_tol=config.tail_tol)
    candidates = [
        MinimumCandidate(tau1=float(taus[i]), inversion=float(values[i]), probability=float(probability[i]))
        for i in inversion_minima(values)
    ]
    logger.info("Found %d inversion minima on [0, %s]", len(candidates), config.tau1_scan_max)
    if out_dir is not None:
        out_dir = Path(out_dir)
        write_csv(out_dir / "first_passage.csv", ["tau1", "inversion", "probability"], zip(taus, values, probability))
        write_csv(
            out_dir / "minima.csv",
            ["tau1", "inversion", "probability"],
            ([c.tau1, c.inversion, c.probability] for c in candidates),
        )
    return candidates


def cmd_run(config: ScenarioConfig, engine: Settings = settings) -> RunReport:
    """Execução completa dos dois átomos: um CSV por observável pedido e manifest.json"""
    projection, taus, states = _second_passage(config, engine)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files: List[str] = []
    aggregates: Dict[str, Optional[float]] = {}
    cache: Dict = {}

    for name in SERIES_OBSERVABLES:
        if name not in config.observables:
            continue
        columns, values = observable_columns(name, states, engine, cache)
        filename = f"{name}.csv"
        write_csv(out_dir / filename, ["tau2", *columns], (np.concatenate(([t], row)) for t, row in zip(taus, values)))
        files.append(filename)
        if name == "entropy":
            aggregates["max_entropy"] = float(values[:, 0].max())
        elif name == "squeezing1":
            aggregates["min_s_x1"] = float(values[:, 0].min())
        elif name == "mandel":
            aggregates["min_mandel"] = float(values[:, 0].min())

    wigner_tau2 = None
    if "wigner" in config.observables:
        wigner_tau2 = config.wigner_tau2
        if wigner_tau2 is None:
            _, inv = observable_columns("inversion", states, engine, cache)
            wigner_tau2 = default_wigner_tau2(taus, inv[:, 0])
        params = config.model_params()
        state = passage_amplitudes(projection.field, params, wigner_tau2, degeneracy_tol=engine.degeneracy_tol)
        grid = wigner(
            state,
            WignerGridSpec(halfwidth=config.wigner_halfwidth, resolution=config.wigner_resolution),
            coverage_tol=engine.wigner_coverage_tol,
        )
        re, im = np.meshgrid(grid.re_axis, grid.im_axis, indexing="ij")
        write_csv(
            out_dir / "wigner.csv",
            ["re", "im", "w"],
            zip(re.ravel(), im.ravel(), grid.values.ravel()),
        )
        files.append("wigner.csv")
        aggregates["wigner_min"] = grid.minimum

    n_max = config.truncation()
    manifest = {
        "engine_version": __version__,
        "config": config.model_dump(mode="json"),
        "tolerances": engine.model_dump(mode="json"),
        "n_max": n_max,
        "rows": int(len(taus)),
        "projection_probability": projection.probability,
        "wigner_tau2": wigner_tau2,
        "files": files,
    }
    write_manifest(out_dir / "manifest.json", manifest)
    logger.info("Run written to %s (%d rows, P(g) = %.6f)", out_dir, len(taus), projection.probability)

    return RunReport(
        out_dir=str(out_dir),
        files=files + ["manifest.json"],
        n_max=n_max,
        rows=int(len(taus)),
        projection_probability=projection.probability,
        wigner_tau2=wigner_tau2,
        **aggregates,
    )


def _parallel_map(func: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def cmd_sweep(
    config: ScenarioConfig,
    axis: str,
    values: Sequence[float],
    workers: int = 1,
    engine: Settings = settings,
) -> List[SweepPoint]:
    """Um cmd_run por valor em <out_dir>/<axis>=<value>, mais summary.csv"""
    if axis not in SWEEP_AXES:
        raise ConfigError(f"eixo de varredura '{axis}' não suportado (disponíveis: {', '.join(SWEEP_AXES)})", code="axis")
    if not values:
        raise ConfigError("a varredura precisa de pelo menos um valor", code="empty_sweep")

    base = Path(config.out_dir)
    dump = config.model_dump()

    def run_point(value: float) -> SweepPoint:
        value = float(value)
        try:
            point = build_config({**dump, axis: value, "out_dir": str(base / f"{axis}={value!r}")})
            return SweepPoint(value=value, status="ok", report=cmd_run(point, engine))
        except CavityError as exc:
            logger.warning("Sweep point %s=%s skipped: %s", axis, value, exc)
            return SweepPoint(value=value, status="failed", error=str(exc).splitlines()[0])

    points = _parallel_map(run_point, list(values), workers)

    header = [
        "value", "status", "n_max", "projection_probability",
        "max_entropy", "min_s_x1", "min_mandel", "wigner_min", "error",
    ]
    rows = []
    for p in points:
        r = p.report
        rows.append([
            p.value,
            p.status,
            r.n_max if r else None,
            r.projection_probability if r else None,
            r.max_entropy if r else None,
            r.min_s_x1 if r else None,
            r.min_mandel if r else None,
            r.wigner_min if r else None,
            p.error,
        ])
    write_csv(base / "summary.csv", header, rows)
    failed = sum(1 for p in points if p.status != "ok")
    logger.info("Sweep over %s finished: %d points, %d failed", axis, len(points), failed)
    return points


def cmd_surface(
    config: ScenarioConfig,
    tau1_values: Sequence[float],
    observable: str,
    workers: int = 1,
    engine: Settings = settings,
) -> Path:
    """Tabela longa (tau1, tau2, ...) de um observável sobre uma grade de tau1"""
    if observable not in SERIES_OBSERVABLES:
        raise ConfigError(
            f"observável da superfície precisa ser um de {', '.join(SERIES_OBSERVABLES)}, recebido '{observable}'",
            code="observable",
        )
    if not tau1_values:
        raise ConfigError("a superfície precisa de pelo menos um valor de tau1", code="empty_surface")

    def run_tau1(tau1: float):
        tau1 = float(tau1)
        try:
            _, taus, states = _second_passage(config.with_value("tau1", tau1), engine)
            columns, values = observable_columns(observable, states, engine)
            return tau1, taus, columns, values
        except CavityError as exc:
            logger.warning("Surface point tau1=%s skipped: %s", tau1, exc)
            return None

    results = [r for r in _parallel_map(run_tau1, list(tau1_values), workers) if r is not None]
    columns = results[0][2] if results else ["value"]
    rows = (
        [tau1, tau2, *row]
        for tau1, taus, _, values in results
        for tau2, row in zip(taus, values)
    )
    path = write_csv(Path(config.out_dir) / f"surface_{observable}.csv", ["tau1", "tau2", *columns], rows)
    logger.info("Surface of %s over %d tau1 values written to %s", observable, len(results), path)
    return path
