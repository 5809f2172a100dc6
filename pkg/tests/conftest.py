from typing import Any

import pytest

from hpc_sentry.config import PipelineConfig
from hpc_sentry.exceptions import TargetAbortError
from hpc_sentry.vpmu import BaseProbe


class LoopProgram:
    """
    Toy instrumented program. Every run enters block 1 and hits checkpoint 1
    `loops` times, touching one data line per iteration.
    """

    name = "loop"

    def __init__(self, loops: int = 4) -> None:
        self.loops = loops

    def run(self, data: bytes, probe: BaseProbe) -> Any:
        probe.block(1)
        for i in range(self.loops):
            probe.branch(7, i < self.loops - 1)
            probe.access(0x1000 + 64 * (data[0] % 4) + 64 * i)
            probe.checkpoint(1)
        probe.block(2)
        return None


class StagedProgram:
    """
    Hits checkpoints 1, 2 and 3 once each.
    """

    name = "staged"

    def run(self, data: bytes, probe: BaseProbe) -> Any:
        for cp in (1, 2, 3):
            probe.block(cp)
            probe.access(0x2000 + 64 * cp)
            probe.checkpoint(cp)
        return None


class SilentProgram:
    """
    Never reaches a checkpoint.
    """

    name = "silent"

    def run(self, data: bytes, probe: BaseProbe) -> Any:
        probe.block(9)
        probe.branch(1, True)
        return None


class AbortingProgram(LoopProgram):
    """
    A LoopProgram that aborts on inputs starting with a zero byte.
    """

    name = "aborting"

    def run(self, data: bytes, probe: BaseProbe) -> Any:
        probe.block(1)
        if data[0] == 0:
            raise TargetAbortError("toy", "zero byte")
        return super().run(data, probe)


@pytest.fixture
def loop_program() -> LoopProgram:
    return LoopProgram()


def small_config_for(work_dir: Any) -> PipelineConfig:
    """
    A lattice configuration sized for tests.
    """

    return PipelineConfig.model_validate(
        {
            "scheme": "lattice",
            "fuzz": {"budget_execs": 300, "rng_seed": 7},
            "sampling": {"t_m": 120_000, "t_s": 20, "ts_inputs": 4},
            "features": {"t_len": 2000, "t_shift": 400, "max_seeds": 30},
            "detector": {"gammas": [0.01], "nus": [0.1], "t_ts": 11, "t_pc": 11},
            "paths": {"work_dir": str(work_dir)},
            "matrix": {
                "schemes": ["lattice"],
                "variants": ["trusted", "sparam"],
                "thresholds_ts": [11],
                "thresholds_pc": [11],
                "random_baseline": False,
            },
        }
    )


@pytest.fixture
def small_config(tmp_path: Any) -> PipelineConfig:
    return small_config_for(tmp_path / "work")
