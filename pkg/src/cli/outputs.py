"""
Serialización de resultados: CSV de trayectorias y barridos, muestras de c,
manifiesto de la corrida. Todas las escrituras son atómicas (archivo temporal
en el mismo directorio + os.replace).
"""

import io
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

import pandas as pd
import yaml
from loguru import logger

from src.core.agent import GROUP_NAMES
from src.simulation.engine import Trajectory
from src.simulation.population import GenerationSummary
from src.sweep.sweep_engine import SweepResult

ARTIFACT_VERSION = 1
DEFAULT_FLOAT_FORMAT = "%.6f"
NOT_CONVERGED = "not converged"

TRAJECTORY_COLUMNS = ["generation", "group", "mean_c", "sd_c", "q05", "q95"]
SWEEP_RESULT_COLUMNS = ["replicate", "final_mean_c_overall", "final_mean_c_A", "final_mean_c_B", "converged_at"]
SAMPLE_COLUMNS = ["generation", "group", "agent", "c"]

TRAJECTORY_FILE = "trajectory.csv"
SWEEP_FILE = "sweep.csv"
HEATMAP_FILE = "heatmap.svg"
SAMPLES_FILE = "samples.csv"
PANELS_FILE = "panels.csv"
CONFIG_ECHO_FILE = "config.yaml"
MANIFEST_FILE = "manifest.yaml"


def atomic_write(path: str, data: bytes) -> str:
    """Escribe `data` en `path` de forma atómica y devuelve la ruta"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    return path


def atomic_write_text(path: str, text: str) -> str:
    return atomic_write(path, text.encode("utf-8"))


def write_csv(df: pd.DataFrame, path: str, float_format: str = DEFAULT_FLOAT_FORMAT) -> str:
    buffer = io.StringIO()
    df.to_csv(buffer, index=False, float_format=float_format, lineterminator="\n")
    atomic_write_text(path, buffer.getvalue())
    logger.debug(f"Wrote {len(df)} rows to {path}")
    return path


def _summary_rows(summary: GenerationSummary) -> List[Dict[str, Any]]:
    return [
        {
            "generation": summary.generation,
            "group": group,
            "mean_c": stats.mean_c,
            "sd_c": stats.sd_c,
            "q05": stats.q05,
            "q95": stats.q95,
        }
        for group, stats in sorted(summary.groups.items())
    ]


def trajectory_frame(summaries: List[GenerationSummary]) -> pd.DataFrame:
    """Una fila por (generación, grupo)"""
    rows = [row for summary in summaries for row in _summary_rows(summary)]
    return pd.DataFrame(rows, columns=TRAJECTORY_COLUMNS)


def samples_frame(trajectory: Trajectory) -> pd.DataFrame:
    """c de cada agente en las generaciones muestreadas"""
    frames = []
    for generation, pop in sorted(trajectory.samples.items()):
        frames.append(pd.DataFrame({
            "generation": generation,
            "group": [GROUP_NAMES[g] for g in pop.groups],
            "agent": range(pop.M),
            "c": pop.c,
        }))
    if not frames:
        return pd.DataFrame(columns=SAMPLE_COLUMNS)
    return pd.concat(frames, ignore_index=True)[SAMPLE_COLUMNS]


def sweep_frame(result: SweepResult) -> pd.DataFrame:
    """Una fila por celda x réplica, en orden de ejes"""
    axis_names = list(result.spec.axis_names)
    rows = []
    for run in result.runs:
        row = {name: run.params[name] for name in axis_names}
        row.update({
            "replicate": run.replicate,
            "final_mean_c_overall": run.final_mean_c,
            "final_mean_c_A": run.final_mean_by_group.get("A", float("nan")),
            "final_mean_c_B": run.final_mean_by_group.get("B", float("nan")),
            "converged_at": NOT_CONVERGED if run.converged_at is None else run.converged_at,
        })
        rows.append(row)
    return pd.DataFrame(rows, columns=axis_names + SWEEP_RESULT_COLUMNS)


def panels_frame(result: SweepResult) -> pd.DataFrame:
    """Trayectorias completas de cada corrida del barrido (keep_trajectories)"""
    axis_names = list(result.spec.axis_names)
    rows = []
    for run in result.runs:
        if run.summaries is None:
            continue
        for summary in run.summaries:
            for row in _summary_rows(summary):
                rows.append({**{name: run.params[name] for name in axis_names},
                             "replicate": run.replicate, **row})
    return pd.DataFrame(rows, columns=axis_names + ["replicate"] + TRAJECTORY_COLUMNS)


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    """
    Registro de una ejecución del CLI

    Args:
        command: Subcomando (run, sweep, replicate)
        root_seed: Semilla raíz
        config: Eco de la configuración
        outputs: Rutas relativas al directorio de salida
    """
    command: str
    root_seed: int
    config: Dict[str, Any]
    started_at: str = field(default_factory=_utc_now)
    finished_at: Optional[str] = None
    outputs: List[str] = field(default_factory=list)
    artifact_version: int = ARTIFACT_VERSION

    def add_output(self, out_dir: str, path: str) -> None:
        rel = os.path.relpath(path, out_dir).replace(os.sep, "/")
        if rel not in self.outputs:
            self.outputs.append(rel)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "artifact_version": self.artifact_version,
            "command": self.command,
            "root_seed": int(self.root_seed),
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "config": self.config,
            "outputs": list(self.outputs),
        }


def write_manifest(manifest: RunManifest, out_dir: str) -> str:
    """
    Cierra el manifiesto (finished_at, se lista a sí mismo) y lo escribe

    Raises:
        FileNotFoundError: Si alguna salida listada no existe
    """
    path = os.path.join(out_dir, MANIFEST_FILE)
    manifest.finished_at = _utc_now()
    manifest.add_output(out_dir, path)
    missing = [rel for rel in manifest.outputs
               if rel != MANIFEST_FILE and not os.path.exists(os.path.join(out_dir, rel))]
    if missing:
        raise FileNotFoundError(f"manifest lists outputs that were not written: {missing}")
    atomic_write_text(path, yaml.safe_dump(manifest.to_dict(), sort_keys=False, allow_unicode=True))
    logger.info(f"📄 Manifest written: {path} ({len(manifest.outputs)} files)")
    return path


def load_manifest(path: str) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f)
