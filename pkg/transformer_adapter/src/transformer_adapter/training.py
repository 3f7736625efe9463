"""Fine-tuning: encoder + head updated end to end with BCE on the sigmoid output."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import torch
from torch import nn

from .data import read_corpus
from .model import SigmoidHeadClassifier, load_encoder, save_checkpoint

LOG_FILE = "training_log.json"


@dataclass(frozen=True)
class FineTuneSpec:
    model_id: str
    batch_size: int = 32
    learning_rate: float = 3e-5
    epochs: int = 3
    max_length: int = 128
    seed: int = 0

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.max_length < 2:
            raise ValueError(f"max_length must be >= 2, got {self.max_length}")


def _batches(n: int, batch_size: int, generator: torch.Generator):
    order = torch.randperm(n, generator=generator).tolist()
    for start in range(0, n, batch_size):
        yield order[start : start + batch_size]


def fine_tune(train_path, spec: FineTuneSpec, out_dir) -> Path:
    """Train on a labeled corpus TSV and write checkpoint + loss log.

    Returns the checkpoint directory.  The log records per-step and
    per-epoch mean losses plus the corpus path, so it stays visible whether
    raw or normalized text was used.
    """
    corpus = read_corpus(train_path, labeled=True)
    if corpus.labels is None or len(corpus.ids) == 0:
        raise ValueError("fine-tuning requires a non-empty labeled corpus")

    torch.manual_seed(spec.seed)
    encoder, tokenizer = load_encoder(spec.model_id)
    model = SigmoidHeadClassifier(encoder, encoder.config.hidden_size)
    device = torch.device("cuda" if torch.cuda.is_available() else "cpu")
    model.to(device)
    model.train()

    optimizer = torch.optim.AdamW(model.parameters(), lr=spec.learning_rate)
    loss_fn = nn.BCEWithLogitsLoss()
    targets = torch.tensor(corpus.labels, dtype=torch.float32, device=device)
    generator = torch.Generator().manual_seed(spec.seed)

    step_losses: list[float] = []
    epoch_losses: list[float] = []
    try:
        for _ in range(spec.epochs):
            epoch_total = 0.0
            epoch_steps = 0
            for batch_idx in _batches(len(corpus.ids), spec.batch_size, generator):
                encoded = tokenizer(
                    [corpus.texts[i] for i in batch_idx],
                    return_tensors="pt",
                    padding=True,
                    truncation=True,
                    max_length=spec.max_length,
                ).to(device)
                optimizer.zero_grad()
                logits = model(**encoded)
                loss = loss_fn(logits, targets[batch_idx])
                loss.backward()
                optimizer.step()
                step_losses.append(float(loss.item()))
                epoch_total += float(loss.item())
                epoch_steps += 1
            epoch_losses.append(epoch_total / epoch_steps)
    except torch.cuda.OutOfMemoryError as exc:
        raise RuntimeError(
            f"out of memory at batch_size={spec.batch_size}; "
            f"retry with a smaller --batch-size"
        ) from exc

    out = Path(out_dir)
    meta = {"spec": asdict(spec), "train_corpus": str(train_path),
            "n_examples": len(corpus.ids)}
    save_checkpoint(out, model.cpu(), tokenizer, meta)
    log = {
        **meta,
        "step_losses": step_losses,
        "epoch_losses": epoch_losses,
    }
    (out / LOG_FILE).write_text(json.dumps(log, indent=2) + "\n", encoding="utf-8")
    return out
