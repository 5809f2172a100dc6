"""
This file contains the hpc-sentry command line.

Exit codes: 0 success or trusted verdict, 2 subverted verdict, 1 error.
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Tuple

import pandas as pd

from ..config.pipeline_config import PipelineConfig, load_config
from ..exceptions import SentryError
from ..features.feature_matrix import kde_scatter
from ..features.selection import CounterSelection
from ..fuzzer.corpus import SeedCorpus
from ..targets.subversion import Scheme, SubversionVariant, apply_subversion
from ..utils.io import atomic_write_csv
from ..utils.read_env import CONFIG_PATH_KEY, LOG_LEVEL_KEY, read_environment
from ..vpmu.signatures import CheckpointSignature, TimeSeriesSignature
from .artifacts import ArtifactPaths, RunArtifacts
from .detect import run_detect
from .experiment import run_experiment_matrix
from .offline import collect_stage, fuzz_stage, run_offline, select_stage, train_stage

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SUBVERTED = 2

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    """
    The --config file, else the file named by HPC_SENTRY_CONFIG, else the defaults,
    with the --scheme and --variant overrides applied.
    """

    path = args.config or read_environment(CONFIG_PATH_KEY)
    config = load_config(path) if path else PipelineConfig()
    scheme = args.scheme or config.scheme
    variant = args.variant or config.variant
    return config.for_cell(scheme, variant)


def _stage_context(config: PipelineConfig) -> Tuple[ArtifactPaths, RunArtifacts]:
    paths = ArtifactPaths.for_config(config)
    return paths, RunArtifacts.open(paths, config)


def cmd_fuzz(args: argparse.Namespace, config: PipelineConfig) -> int:
    paths, artifacts = _stage_context(config)
    target = apply_subversion(config.scheme, SubversionVariant.TRUSTED)
    corpus = fuzz_stage(config, target, paths, artifacts)
    artifacts.save(paths)
    print(f"{len(corpus)} seeds written to {paths.corpus_dir}")
    return EXIT_OK


def cmd_collect(args: argparse.Namespace, config: PipelineConfig) -> int:
    paths, artifacts = _stage_context(config)
    artifacts.require("corpus_manifest", "fuzz")
    target = apply_subversion(config.scheme, SubversionVariant.TRUSTED)
    ts, pc = collect_stage(config, target, SeedCorpus.load(paths.corpus_dir), paths, artifacts)
    artifacts.save(paths)
    print(f"{ts.n_samples} time-series samples and {pc.n_rows} checkpoint rows written to {paths.signatures_dir}")
    return EXIT_OK


def _load_time_series(config: PipelineConfig, paths: ArtifactPaths) -> TimeSeriesSignature:
    return TimeSeriesSignature.from_csv(paths.ts_signature, t_s=config.sampling.t_s, t_m=config.sampling.t_m)


def cmd_select(args: argparse.Namespace, config: PipelineConfig) -> int:
    paths, artifacts = _stage_context(config)
    artifacts.require("ts_signature", "collect")
    selection = select_stage(config, _load_time_series(config, paths), paths, artifacts)
    artifacts.save(paths)
    print("Selected counters: " + ", ".join(c.name for c in selection.chosen))
    return EXIT_OK


def cmd_train(args: argparse.Namespace, config: PipelineConfig) -> int:
    paths, artifacts = _stage_context(config)
    artifacts.require("pc_signature", "collect")
    selection: CounterSelection = artifacts.require("selection", "select")
    document = train_stage(
        config,
        _load_time_series(config, paths),
        CheckpointSignature.from_csv(paths.pc_signature),
        selection,
        paths,
        artifacts,
    )
    artifacts.save(paths)
    print(f"Model written to {paths.model_file}, detection seeds {document.detection_seeds}")
    return EXIT_OK


def cmd_offline(args: argparse.Namespace, config: PipelineConfig) -> int:
    artifacts = run_offline(config)
    frame = pd.DataFrame([t.model_dump() for t in artifacts.timing])
    print(frame.to_string(index=False))
    print(f"Model digest {artifacts.model_digest}")
    return EXIT_OK


def cmd_detect(args: argparse.Namespace, config: PipelineConfig) -> int:
    suspect = apply_subversion(config.scheme, config.variant)
    report = run_detect(config, suspect)
    for path in (report.ts, report.pc):
        detail = path.diagnostic or (f"pos {path.verdict.pos:.3f}" if path.verdict else "")
        print(f"{path.kind.value:12s} {'trusted' if path.label == 1 else 'subverted':10s} {detail}")
    print(f"{report.suspect}: {'trusted' if report.trusted else 'subverted'}")
    return EXIT_OK if report.trusted else EXIT_SUBVERTED


def cmd_matrix(args: argparse.Namespace, config: PipelineConfig) -> int:
    report = run_experiment_matrix(config)
    if report.rows:
        print(report.matrix_frame().to_string(index=False))
    for failure in report.failures:
        print(f"failed: {failure.scheme}/{failure.variant or '-'} at {failure.stage}: {failure.error}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace, config: PipelineConfig) -> int:
    """
    Print the stored tables and dump counter pairs of one checkpoint for kernel density plots.
    """

    paths = ArtifactPaths.for_config(config)
    for name, path in (("timing", paths.timing), ("matrix", config.paths.matrix_dir / "matrix.csv")):
        if path.exists():
            print(f"== {name} ({path})")
            print(pd.read_csv(path).to_string(index=False))

    if args.checkpoint is not None:
        artifacts = RunArtifacts.open(paths, config)
        artifacts.require("pc_signature", "collect")
        signature = CheckpointSignature.from_csv(paths.pc_signature)
        frame = kde_scatter(signature, args.checkpoint, args.pair)
        target = paths.report(f"kde-cp{args.checkpoint}-{args.pair[0]}-{args.pair[1]}.csv".lower())
        atomic_write_csv(target, frame)
        print(f"{len(frame)} points written to {target}")
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, PipelineConfig], int]] = {
    "fuzz": cmd_fuzz,
    "collect": cmd_collect,
    "select": cmd_select,
    "train": cmd_train,
    "offline": cmd_offline,
    "detect": cmd_detect,
    "matrix": cmd_matrix,
    "report": cmd_report,
}

HELP = {
    "fuzz": "Grow the seed corpus of the trusted build",
    "collect": "Collect time-series and checkpoint signatures over the corpus",
    "select": "Select the counters of the time-series features",
    "train": "Build features and train both detectors",
    "offline": "Run fuzz, collect, select and train",
    "detect": "Judge the configured variant with the trained models",
    "matrix": "Run the scheme x variant x threshold experiment grid",
    "report": "Print stored tables and dump counter pairs for density plots",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="JSON or YAML configuration file")
    common.add_argument("--log-level", type=str, default=None, help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--scheme", choices=[s.value for s in Scheme], default=None)
    common.add_argument("--variant", choices=[v.value for v in SubversionVariant], default=None)

    parser = argparse.ArgumentParser(
        prog="hpc-sentry",
        description="Detect subverted signature builds from their virtual performance counter behavior.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)
    for name in COMMANDS:
        command = sub.add_parser(name, parents=[common], help=HELP[name])
        if name == "report":
            command.add_argument("--checkpoint", type=int, default=None)
            command.add_argument("--pair", nargs=2, default=["L1_DCA", "L1_DCM"], metavar="COUNTER")
    return parser


def configure_logging(level: Optional[str]) -> None:
    name = (level or read_environment(LOG_LEVEL_KEY, "INFO") or "INFO").upper()
    logging.basicConfig(level=getattr(logging, name, logging.INFO), format=LOG_FORMAT)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        config = resolve_config(args)
        return COMMANDS[args.cmd](args, config)
    except SentryError as e:
        logger.error("%s", e)
        return EXIT_ERROR
    except (OSError, ValueError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
