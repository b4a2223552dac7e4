"""
Subcomandos del CLI: run, sweep y replicate
"""

import os
from typing import Optional

from loguru import logger

from src.cli.config_parser import config_to_dict, dump_config
from src.cli.heatmap import render_heatmap
from src.cli.outputs import (
    CONFIG_ECHO_FILE, DEFAULT_FLOAT_FORMAT, HEATMAP_FILE, PANELS_FILE, SAMPLES_FILE,
    SWEEP_FILE, TRAJECTORY_FILE, RunManifest, atomic_write_text, panels_frame,
    samples_frame, sweep_frame, trajectory_frame, write_csv, write_manifest,
)
from src.cli.presets import KIND_PANELS, KIND_RUN, KIND_SWEEP, get_preset, panel_name
from src.simulation.engine import run_trajectory
from src.simulation.scenarios import ScenarioConfig
from src.sweep.sweep_engine import SweepSpec, run_sweep


def cmd_run(config: ScenarioConfig, out_dir: str, emit_samples: Optional[int] = None, n_jobs: int = 1,
            float_format: str = DEFAULT_FLOAT_FORMAT) -> RunManifest:
    """
    Ejecuta una trayectoria y escribe trajectory.csv, el eco de la
    configuración, samples.csv (opcional) y manifest.yaml

    Args:
        config: Escenario validado
        out_dir: Directorio de salida (se crea si no existe)
        emit_samples: Guardar c de todos los agentes cada k generaciones
        n_jobs: Hilos por generación
        float_format: Formato de floats en los CSV

    Returns:
        Manifiesto escrito
    """
    os.makedirs(out_dir, exist_ok=True)
    manifest = RunManifest(command="run", root_seed=config.seed, config=config_to_dict(config))

    trajectory = run_trajectory(config, sample_every=emit_samples, n_jobs=n_jobs)

    path = write_csv(trajectory_frame(trajectory.summaries), os.path.join(out_dir, TRAJECTORY_FILE), float_format)
    manifest.add_output(out_dir, path)
    path = atomic_write_text(os.path.join(out_dir, CONFIG_ECHO_FILE), dump_config(config))
    manifest.add_output(out_dir, path)
    if emit_samples:
        path = write_csv(samples_frame(trajectory), os.path.join(out_dir, SAMPLES_FILE), float_format)
        manifest.add_output(out_dir, path)

    logger.info(f"💾 Trajectory written to {out_dir} (t=0..{trajectory.generations})")
    write_manifest(manifest, out_dir)
    return manifest


def cmd_sweep(spec: SweepSpec, out_dir: str, n_jobs: int = 1, float_format: str = DEFAULT_FLOAT_FORMAT,
              progress: bool = True, title: str = "") -> RunManifest:
    """
    Ejecuta un barrido y escribe sweep.csv, heatmap.svg, el eco de la
    configuración, panels.csv (si keep_trajectories) y manifest.yaml
    """
    os.makedirs(out_dir, exist_ok=True)
    manifest = RunManifest(command="sweep", root_seed=spec.base.seed, config=config_to_dict(spec))

    result = run_sweep(spec, n_jobs=n_jobs, progress=progress)

    path = write_csv(sweep_frame(result), os.path.join(out_dir, SWEEP_FILE), float_format)
    manifest.add_output(out_dir, path)
    path = render_heatmap(result, os.path.join(out_dir, HEATMAP_FILE), title=title)
    manifest.add_output(out_dir, path)
    path = atomic_write_text(os.path.join(out_dir, CONFIG_ECHO_FILE), dump_config(spec))
    manifest.add_output(out_dir, path)
    if spec.keep_trajectories:
        path = write_csv(panels_frame(result), os.path.join(out_dir, PANELS_FILE), float_format)
        manifest.add_output(out_dir, path)

    logger.info(f"💾 Sweep written to {out_dir} ({len(result.cells)} cells)")
    write_manifest(manifest, out_dir)
    return manifest


def cmd_replicate(figure_id: str, out_dir: str, seed: Optional[int] = None, replicates: Optional[int] = None,
                  emit_samples: Optional[int] = None, n_jobs: int = 1,
                  float_format: str = DEFAULT_FLOAT_FORMAT, progress: bool = True) -> RunManifest:
    """
    Ejecuta el preset de una figura

    Las salidas van a out_dir/<figure_id>/ (un subdirectorio por panel en los
    presets de paneles) y el manifiesto de nivel superior lista todas.
    """
    preset = get_preset(figure_id).with_seed(seed)
    figure_dir = os.path.join(out_dir, figure_id)
    logger.info(f"🎯 Replicating {figure_id}: {preset.description}")
    logger.info(f"Sources: {preset.sources}")

    if preset.kind == KIND_RUN:
        sub_manifests = [(figure_dir, cmd_run(preset.base, figure_dir, emit_samples or preset.sample_every,
                                              n_jobs=n_jobs, float_format=float_format))]
        echo = config_to_dict(preset.base)
    elif preset.kind == KIND_SWEEP:
        spec = preset.sweep_spec(replicates)
        sub_manifests = [(figure_dir, cmd_sweep(spec, figure_dir, n_jobs=n_jobs, float_format=float_format,
                                                progress=progress, title=figure_id))]
        echo = config_to_dict(spec)
    elif preset.kind == KIND_PANELS:
        sub_manifests = []
        panels = preset.panels()
        for i, (params, config) in enumerate(panels, start=1):
            logger.info(f"Panel {i}/{len(panels)}: {params}")
            panel_dir = os.path.join(figure_dir, panel_name(params))
            sub_manifests.append((panel_dir, cmd_run(config, panel_dir, emit_samples, n_jobs=n_jobs,
                                                     float_format=float_format)))
        echo = config_to_dict(preset.base)
    else:
        raise ValueError(f"unknown preset kind {preset.kind!r}")

    manifest = RunManifest(command=f"replicate {figure_id}", root_seed=preset.base.seed, config=echo)
    for sub_dir, sub in sub_manifests:
        for rel in sub.outputs:
            manifest.add_output(out_dir, os.path.join(sub_dir, rel))
    write_manifest(manifest, out_dir)
    logger.info(f"✅ {figure_id} done: {len(manifest.outputs)} files under {out_dir}")
    return manifest
