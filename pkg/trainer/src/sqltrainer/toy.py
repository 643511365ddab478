"""Desk-scale training run: prove the corpus, manifest, and config wire up.

``toy_run`` reads a corpus JSONL, extends a tokenizer from the manifest,
resizes the model's embeddings, and trains a handful of steps, logging the
loss per step and a windowed smoothed loss. The default model reference
``tiny-random`` builds a two-layer randomly initialized causal LM and a
word-level tokenizer from the corpus itself, so the run needs nothing from
the network; any local model directory works too.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .config import TrainConfig, validate_corpus, validate_manifest
from .tokenizer_ext import extend_tokenizer

TINY_RANDOM = "tiny-random"
SMOOTH_WINDOW = 5


class EarlyStopping:
    """Stop after ``patience`` consecutive evals without improvement."""

    def __init__(self, patience: int = 2):
        self.patience = patience
        self.best: float | None = None
        self.worse_streak = 0

    def update(self, value: float) -> bool:
        """Record one eval loss; True means training should stop."""
        if self.best is None or value < self.best:
            self.best = value
            self.worse_streak = 0
            return False
        self.worse_streak += 1
        return self.worse_streak >= self.patience


@dataclass
class ToyRunResult:
    losses: list[float]  # training loss, one entry per step
    probe_losses: list[float]  # loss on a fixed probe batch after each step
    smoothed: list[float]  # windowed mean of the probe losses
    eval_losses: list[float]
    vocab_before: int
    vocab_added: int
    stopped_early: bool
    steps_run: int
    checkpoint_dir: str | None = None
    notes: list[str] = field(default_factory=list)

    def write_log(self, path: str | Path) -> None:
        doc = {
            "losses": self.losses,
            "probe_losses": self.probe_losses,
            "smoothed": self.smoothed,
            "eval_losses": self.eval_losses,
            "vocab_before": self.vocab_before,
            "vocab_added": self.vocab_added,
            "stopped_early": self.stopped_early,
            "steps_run": self.steps_run,
            "notes": self.notes,
        }
        Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_corpus_texts(path: str | Path) -> list[str]:
    texts = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            record = json.loads(line)
            texts.append(record["prompt"] + record["completion"])
    return texts


def build_word_tokenizer(texts: list[str]):
    """Whitespace word-level tokenizer trained on the corpus itself."""
    from tokenizers import Tokenizer, models, pre_tokenizers, trainers
    from transformers import PreTrainedTokenizerFast

    tokenizer = Tokenizer(models.WordLevel(unk_token="<unk>"))
    tokenizer.pre_tokenizer = pre_tokenizers.WhitespaceSplit()
    trainer = trainers.WordLevelTrainer(special_tokens=["<unk>", "<pad>"])
    tokenizer.train_from_iterator(texts, trainer)
    return PreTrainedTokenizerFast(
        tokenizer_object=tokenizer, unk_token="<unk>", pad_token="<pad>"
    )


def _build_tiny_model(vocab_size: int, dropout: float, seed: int):
    import torch
    from transformers import GPT2Config, GPT2LMHeadModel

    torch.manual_seed(seed)
    config = GPT2Config(
        vocab_size=vocab_size,
        n_embd=64,
        n_layer=2,
        n_head=2,
        n_positions=256,
        resid_pdrop=dropout,
        embd_pdrop=dropout,
        attn_pdrop=dropout,
        bos_token_id=None,
        eos_token_id=None,
    )
    return GPT2LMHeadModel(config)


def _load_local(model_ref: str):
    from transformers import AutoModelForCausalLM, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(model_ref, local_files_only=True)
    model = AutoModelForCausalLM.from_pretrained(model_ref, local_files_only=True)
    return model, tokenizer


def toy_run(
    config: TrainConfig,
    tiny_model_ref: str = TINY_RANDOM,
    steps: int = 20,
    out_dir: str | Path | None = None,
    seed: int = 0,
    eval_fraction: float = 0.1,
) -> ToyRunResult:
    """Train a small causal LM for ``steps`` steps on the configured corpus.

    The tokenizer is extended from the configured manifest first and the
    model embeddings resized to match. Evaluation runs every
    ``config.eval_every`` steps on a held-out slice, feeding the
    early-stopping rule (two consecutive worse evals by default).
    """
    import torch

    validate_corpus(config.corpus_path)
    manifest = validate_manifest(config.manifest_path)
    texts = load_corpus_texts(config.corpus_path)

    if tiny_model_ref == TINY_RANDOM:
        tokenizer = build_word_tokenizer(texts)
        vocab_before = len(tokenizer)
        vocab_added = extend_tokenizer(tokenizer, manifest)
        model = _build_tiny_model(len(tokenizer), config.dropout, seed)
    else:
        model, tokenizer = _load_local(tiny_model_ref)
        vocab_before = len(tokenizer)
        vocab_added = extend_tokenizer(tokenizer, manifest)
    model.resize_token_embeddings(len(tokenizer))

    n_eval = max(1, int(len(texts) * eval_fraction))
    eval_texts = texts[:n_eval]
    train_texts = texts[n_eval:] or texts

    torch.manual_seed(seed)
    generator = torch.Generator().manual_seed(seed)
    optimizer = torch.optim.AdamW(
        model.parameters(),
        lr=config.learning_rate,
        weight_decay=config.weight_decay,
    )
    if tokenizer.pad_token is None:
        tokenizer.pad_token = tokenizer.eos_token

    def encode(batch_texts):
        return tokenizer(
            batch_texts,
            return_tensors="pt",
            padding=True,
            truncation=True,
            max_length=128,
        )

    def batch_loss(batch_texts):
        enc = encode(batch_texts)
        labels = enc["input_ids"].masked_fill(enc["attention_mask"] == 0, -100)
        out = model(
            input_ids=enc["input_ids"],
            attention_mask=enc["attention_mask"],
            labels=labels,
        )
        return out.loss

    batch = max(1, config.batch_size)
    probe_texts = train_texts[: max(8, batch)]  # fixed batch tracking progress
    stopper = EarlyStopping(patience=2)
    losses: list[float] = []
    probe_losses: list[float] = []
    smoothed: list[float] = []
    eval_losses: list[float] = []
    stopped_early = False
    notes: list[str] = []

    model.train()
    for step in range(1, steps + 1):
        picks = torch.randint(0, len(train_texts), (batch,), generator=generator)
        batch_texts = [train_texts[i] for i in picks.tolist()]
        for _ in range(max(1, config.grad_accum)):
            loss = batch_loss(batch_texts)
            (loss / max(1, config.grad_accum)).backward()
        optimizer.step()
        optimizer.zero_grad()
        losses.append(float(loss.item()))
        model.eval()
        with torch.no_grad():
            probe_losses.append(float(batch_loss(probe_texts).item()))
        model.train()
        window = probe_losses[-SMOOTH_WINDOW:]
        smoothed.append(sum(window) / len(window))

        if config.eval_every and step % config.eval_every == 0:
            model.eval()
            with torch.no_grad():
                eval_loss = float(batch_loss(eval_texts[: 4 * batch]).item())
            model.train()
            eval_losses.append(eval_loss)
            if stopper.update(eval_loss):
                stopped_early = True
                notes.append(f"early stop at step {step}")
                break

    result = ToyRunResult(
        losses=losses,
        probe_losses=probe_losses,
        smoothed=smoothed,
        eval_losses=eval_losses,
        vocab_before=vocab_before,
        vocab_added=vocab_added,
        stopped_early=stopped_early,
        steps_run=len(losses),
        notes=notes,
    )
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        torch.save(model.state_dict(), out_dir / "checkpoint.pt")
        tokenizer.save_pretrained(str(out_dir / "tokenizer"))
        result.checkpoint_dir = str(out_dir)
        result.write_log(out_dir / "loss_log.json")
    return result
