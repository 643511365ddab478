"""Training configuration: defaults, overrides, validation, file round trip.

The emitted configuration points at a corpus JSONL and a token manifest
produced by the corpus pipeline, both validated structurally before the
config is written. Defaults reproduce the reference fine-tuning recipe and
every field can be overridden explicitly.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml


class ValidationError(ValueError):
    """Corpus or manifest file does not match the expected schema."""


@dataclass(frozen=True)
class InferenceConfig:
    sampling: bool = True
    beams: int = 2


@dataclass(frozen=True)
class TrainConfig:
    corpus_path: str
    manifest_path: str
    learning_rate: float = 2e-5
    dropout: float = 0.05
    weight_decay: float = 0.003
    lora_rank: int = 32
    lora_alpha: int = 64
    lora_target_layers: tuple[str, ...] = ("q_proj", "k_proj", "v_proj", "o_proj")
    max_steps: int = 4000
    eval_every: int = 200
    precision: str = "bfloat16"
    batch_size: int = 1
    grad_accum: int = 1
    inference: InferenceConfig = field(default_factory=InferenceConfig)

    def to_dict(self) -> dict:
        doc = dataclasses.asdict(self)
        doc["lora_target_layers"] = list(self.lora_target_layers)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "TrainConfig":
        doc = dict(doc)
        inference = doc.pop("inference", {})
        doc["lora_target_layers"] = tuple(doc.get("lora_target_layers", ()))
        return cls(**doc, inference=InferenceConfig(**inference))

    def write(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        doc = self.to_dict()
        if path.suffix in (".yaml", ".yml"):
            path.write_text(yaml.safe_dump(doc, sort_keys=True), encoding="utf-8")
        else:
            path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                            encoding="utf-8")

    @classmethod
    def read(cls, path: str | Path) -> "TrainConfig":
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        doc = yaml.safe_load(text) if path.suffix in (".yaml", ".yml") else json.loads(text)
        return cls.from_dict(doc)


_CORPUS_REQUIRED = {"id", "task_type", "structure", "prompt", "completion"}
_MANIFEST_REQUIRED = {"special_tokens", "added_tokens", "source_catalog_hash"}


def validate_corpus(path: str | Path) -> int:
    """Check every corpus line carries the expected fields; returns the count."""
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"corpus file missing: {path}")
    count = 0
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:{lineno}: not JSON ({exc})") from exc
            missing = _CORPUS_REQUIRED - set(record)
            if missing:
                raise ValidationError(
                    f"{path}:{lineno}: missing field(s) {sorted(missing)}"
                )
            count += 1
    if count == 0:
        raise ValidationError(f"corpus file is empty: {path}")
    return count


def validate_manifest(path: str | Path) -> dict:
    """Check the token manifest schema; returns the parsed document."""
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"manifest file missing: {path}")
    doc = json.loads(path.read_text(encoding="utf-8"))
    missing = _MANIFEST_REQUIRED - set(doc)
    if missing:
        raise ValidationError(f"{path}: missing key(s) {sorted(missing)}")
    for key in ("special_tokens", "added_tokens"):
        if not isinstance(doc[key], list) or not all(
            isinstance(t, str) for t in doc[key]
        ):
            raise ValidationError(f"{path}: {key} must be a list of strings")
    return doc


def emit_train_config(
    corpus_path: str | Path,
    manifest_path: str | Path,
    overrides: dict | None = None,
    out_path: str | Path | None = None,
) -> TrainConfig:
    """Build (and optionally write) a training config for one corpus.

    With no overrides the result carries exactly the default recipe; override
    keys replace single fields (`inference` takes a nested dict).
    """
    validate_corpus(corpus_path)
    validate_manifest(manifest_path)
    config = TrainConfig(
        corpus_path=str(corpus_path), manifest_path=str(manifest_path)
    )
    for key, value in (overrides or {}).items():
        if key == "inference":
            config = dataclasses.replace(
                config,
                inference=dataclasses.replace(config.inference, **value),
            )
        elif key == "lora_target_layers":
            config = dataclasses.replace(config, lora_target_layers=tuple(value))
        elif hasattr(config, key):
            config = dataclasses.replace(config, **{key: value})
        else:
            raise ValidationError(f"unknown config field {key!r}")
    if out_path is not None:
        config.write(out_path)
    return config
