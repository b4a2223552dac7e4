"""
Simulador de actuación de cambio fonético - punto de entrada

Uso:
    python simulate.py run --config config/examples/fig4_run.yaml --out-dir output/fig4
    python simulate.py sweep --config config/examples/lambda_sweep.yaml --replicates 3
    python simulate.py replicate --figure fig6 --workers 4
"""

import argparse
import dataclasses
import os
import sys
from typing import List, Optional

from loguru import logger

from src.cli.commands import cmd_replicate, cmd_run, cmd_sweep
from src.cli.config_parser import parse_config
from src.cli.presets import PRESETS
from src.core.errors import ActuationError, ConfigurationError
from src.sweep.sweep_engine import SweepSpec
from src.utils.logger import setup_logger
from src.utils.settings import load_settings

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Population simulator for the actuation of coarticulation-driven sound change")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (default: config/config.yaml)")
    parser.add_argument("--settings", default=None, help="Application settings file (default: config/config.yaml)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--seed", type=int, default=None, help="Root seed (overrides the config)")
        p.add_argument("--out-dir", default=None, help="Output directory")
        p.add_argument("--workers", type=int, default=None,
                       help="Parallel workers (default: ACTUATION_WORKERS or config/config.yaml)")

    run = sub.add_parser("run", help="Run one trajectory")
    run.add_argument("--config", required=True, help="Scenario YAML")
    run.add_argument("--emit-samples", type=int, default=None, metavar="K",
                     help="Write every agent's c every K generations")
    common(run)

    sweep = sub.add_parser("sweep", help="Run a parameter sweep and render the heatmap")
    sweep.add_argument("--config", required=True, help="YAML with scenario and sweep sections")
    sweep.add_argument("--replicates", type=int, default=None, help="Seeds per cell (overrides the config)")
    common(sweep)

    rep = sub.add_parser("replicate", help="Run a figure preset")
    rep.add_argument("--figure", required=True, help=f"One of: {', '.join(sorted(PRESETS))}")
    rep.add_argument("--replicates", type=int, default=None, help="Seeds per cell for sweep presets")
    rep.add_argument("--emit-samples", type=int, default=None, metavar="K")
    common(rep)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = load_settings(args.settings)
    try:
        setup_logger(settings.log_file, args.log_level or settings.log_level,
                     settings.log_rotation, settings.log_retention)
    except ConfigurationError as e:
        logger.error(f"❌ Configuration error: {e}")
        return EXIT_CONFIG

    workers = args.workers if args.workers is not None else settings.workers
    out_dir = args.out_dir or os.path.join(settings.output_dir, args.command)

    try:
        if args.command == "run":
            config = parse_config(args.config)
            if isinstance(config, SweepSpec):
                raise ConfigurationError("sweep", "config has a sweep section; use the `sweep` command")
            if args.seed is not None:
                config = config.replace(seed=args.seed)
            cmd_run(config, out_dir, emit_samples=args.emit_samples, n_jobs=workers,
                    float_format=settings.float_format)

        elif args.command == "sweep":
            spec = parse_config(args.config)
            if not isinstance(spec, SweepSpec):
                raise ConfigurationError("sweep", "config has no sweep section")
            if args.seed is not None:
                spec = dataclasses.replace(spec, base=spec.base.replace(seed=args.seed))
            if args.replicates is not None:
                spec = dataclasses.replace(spec, replicates=args.replicates)
            cmd_sweep(spec, out_dir, n_jobs=workers, float_format=settings.float_format,
                      progress=settings.progress)

        elif args.command == "replicate":
            cmd_replicate(args.figure, out_dir, seed=args.seed, replicates=args.replicates,
                          emit_samples=args.emit_samples, n_jobs=workers,
                          float_format=settings.float_format, progress=settings.progress)

    except ConfigurationError as e:
        logger.error(f"❌ Configuration error: {e}")
        return EXIT_CONFIG
    except (ActuationError, ValueError, OSError) as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_FAILURE

    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
