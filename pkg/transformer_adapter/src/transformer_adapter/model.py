"""Encoder + single-logit sigmoid head.

The tweet representation is the final hidden vector of the [CLS] token;
the head maps it to one logit, so the predicted probability is
sigmoid(W^T e_t + b).  A single-logit head is used rather than a 2-class
softmax so the probability has exactly that closed form.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch
from torch import nn
from transformers import AutoModel, AutoTokenizer

HEAD_FILE = "sigmoid_head.pt"
ADAPTER_CONFIG = "adapter_config.json"


class SigmoidHeadClassifier(nn.Module):
    def __init__(self, encoder: nn.Module, hidden_size: int):
        super().__init__()
        self.encoder = encoder
        self.head = nn.Linear(hidden_size, 1)

    def forward(self, **encoded) -> torch.Tensor:
        """Return one logit per example (sigmoid is applied by the loss)."""
        outputs = self.encoder(**encoded)
        cls_state = outputs.last_hidden_state[:, 0]
        return self.head(cls_state).squeeze(-1)


def load_encoder(model_id: str):
    """Resolve a hub name or local checkpoint directory."""
    try:
        encoder = AutoModel.from_pretrained(model_id)
        tokenizer = AutoTokenizer.from_pretrained(model_id)
    except (OSError, EnvironmentError, ValueError) as exc:
        raise ValueError(
            f"cannot resolve model identifier {model_id!r} "
            f"(hub name or local path): {exc}"
        ) from None
    return encoder, tokenizer


def save_checkpoint(out_dir, model: SigmoidHeadClassifier, tokenizer, meta: dict) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model.encoder.save_pretrained(out)
    tokenizer.save_pretrained(out)
    torch.save(model.head.state_dict(), out / HEAD_FILE)
    (out / ADAPTER_CONFIG).write_text(
        json.dumps(meta, indent=2) + "\n", encoding="utf-8"
    )


def load_checkpoint(ckpt_dir) -> tuple[SigmoidHeadClassifier, "AutoTokenizer", dict]:
    ckpt = Path(ckpt_dir)
    if not (ckpt / HEAD_FILE).exists():
        raise ValueError(f"{ckpt_dir}: not an adapter checkpoint (missing {HEAD_FILE})")
    encoder, tokenizer = load_encoder(str(ckpt))
    model = SigmoidHeadClassifier(encoder, encoder.config.hidden_size)
    state = torch.load(ckpt / HEAD_FILE, map_location="cpu", weights_only=True)
    model.head.load_state_dict(state)
    meta = json.loads((ckpt / ADAPTER_CONFIG).read_text(encoding="utf-8"))
    return model, tokenizer, meta
