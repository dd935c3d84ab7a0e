"""Parallel per-block sampling with deterministic per-block seeds."""

from __future__ import annotations

import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from mms_sampler.chains.config import Algorithm, ChainConfig
from mms_sampler.chains.rng import derive_seed
from mms_sampler.core.io import load_instance, write_jsonl
from mms_sampler.errors import MMSError
from mms_sampler.sampler import BlockSampler

logger = logging.getLogger(__name__)

STATUS_SAMPLED = "sampled"
STATUS_EXACT = "enumerated-exact"
MANIFEST_NAME = "manifest.json"


class BlockStatus(BaseModel):
    """Terminal status of one input block."""

    block: str
    seed: int
    status: str
    samples: int = 0
    output: str | None = None

    @property
    def failed(self) -> bool:
        return self.status.startswith("failed:")


class RunManifest(BaseModel):
    """Everything needed to reproduce a batch run."""

    command: list[str]
    config: dict[str, Any]
    base_seed: int
    version: str
    started_at: datetime
    finished_at: datetime | None = None
    blocks: list[BlockStatus] = []

    @property
    def failed_count(self) -> int:
        return sum(1 for b in self.blocks if b.failed)

    @property
    def excluded(self) -> list[str]:
        return [b.block for b in self.blocks if b.failed]

    def status_of(self, block: str) -> BlockStatus | None:
        return next((b for b in self.blocks if b.block == block), None)


@dataclass
class BlockOutcome:
    status: BlockStatus
    records: list[dict[str, Any]] = field(default_factory=list)


def _package_version() -> str:
    from mms_sampler import __version__

    return __version__


def instance_files(instance_dir: str | Path) -> list[Path]:
    """Instance documents of a directory, in filename order."""
    return sorted(Path(instance_dir).glob("*.json"), key=lambda p: p.name)


def process_block(path: Path, config: dict[str, Any], num_samples: int) -> BlockOutcome:
    """Sample one block; failures become a failed status rather than an exception."""
    seed = derive_seed(config["seed"], path.name)
    try:
        inst = load_instance(path)
        cfg = ChainConfig(**{**config, "seed": seed})
        sampler = BlockSampler(inst, cfg)
        reports = sampler.run(num_samples)
    except (MMSError, ValueError, OSError) as e:
        reason = " ".join(str(e).split())
        logger.warning("%s failed: %s", path.name, reason)
        return BlockOutcome(BlockStatus(block=path.stem, seed=seed, status=f"failed:{reason}"))

    exact = cfg.algorithm is Algorithm.HYBRID and all(r.exact_mode for r in reports)
    status = STATUS_EXACT if exact else STATUS_SAMPLED
    records = [{"block": path.stem, **r.to_record()} for r in reports]
    return BlockOutcome(
        BlockStatus(block=path.stem, seed=seed, status=status, samples=len(records)), records
    )


def run_batch(
    instance_dir: str | Path,
    cfg: ChainConfig,
    workers: int = 1,
    out_dir: str | Path | None = None,
    num_samples: int = 1,
    command: list[str] | None = None,
    version: str | None = None,
) -> tuple[RunManifest, dict[str, list[dict[str, Any]]]]:
    """
    Sample every block of a directory independently.

    Each block's seed is derived from the base seed and its filename, so
    outputs do not depend on the worker count or completion order. With
    out_dir set, writes <block>.jsonl per successful block and the manifest.
    """
    if workers < 1:
        raise ValueError("workers must be positive")
    paths = instance_files(instance_dir)
    config = cfg.snapshot()
    manifest = RunManifest(
        command=command if command is not None else list(sys.argv),
        config=config,
        base_seed=cfg.seed,
        version=version or _package_version(),
        started_at=datetime.now(timezone.utc),
    )
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
    logger.info("batch: %d block(s), %d worker(s)", len(paths), workers)

    if workers == 1 or len(paths) <= 1:
        outcomes = [process_block(p, config, num_samples) for p in paths]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(
                pool.map(process_block, paths, [config] * len(paths), [num_samples] * len(paths))
            )

    outputs: dict[str, list[dict[str, Any]]] = {}
    for outcome in outcomes:
        status = outcome.status
        if not status.failed:
            outputs[status.block] = outcome.records
            if out_dir is not None:
                target = Path(out_dir) / f"{status.block}.jsonl"
                write_jsonl(target, outcome.records)
                status.output = target.name
        manifest.blocks.append(status)
        logger.info("%s: %s", status.block, status.status)

    manifest.finished_at = datetime.now(timezone.utc)
    if out_dir is not None:
        (Path(out_dir) / MANIFEST_NAME).write_text(
            manifest.model_dump_json(indent=2) + "\n", encoding="utf-8"
        )
    return manifest, outputs


def load_manifest(path: str | Path) -> RunManifest:
    return RunManifest.model_validate_json(Path(path).read_text(encoding="utf-8"))
