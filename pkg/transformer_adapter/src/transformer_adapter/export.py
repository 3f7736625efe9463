"""Export per-tweet INFORMATIVE probabilities in the shared TSV format."""

from __future__ import annotations

from pathlib import Path

import torch

from .data import read_corpus, write_predictions
from .model import load_checkpoint


def export_probabilities(
    ckpt_dir, corpus_path, out_path, labeled: bool = True, batch_size: int = 32
) -> None:
    """Write ``id<TAB>probability`` lines in corpus order.

    Evaluation runs under no_grad with dropout disabled, so the output is a
    pure function of checkpoint and corpus; batching only affects padding,
    which the attention mask hides.
    """
    if not Path(ckpt_dir).exists():
        raise ValueError(f"checkpoint directory {ckpt_dir} does not exist")
    model, tokenizer, meta = load_checkpoint(ckpt_dir)
    corpus = read_corpus(corpus_path, labeled=labeled)
    if len(corpus.ids) == 0:
        raise ValueError(f"{corpus_path}: empty corpus")
    max_length = int(meta.get("spec", {}).get("max_length", 128))
    device = torch.device("cuda" if torch.cuda.is_available() else "cpu")
    model.to(device)
    model.eval()

    probabilities: list[float] = []
    with torch.no_grad():
        for start in range(0, len(corpus.ids), batch_size):
            chunk = corpus.texts[start : start + batch_size]
            encoded = tokenizer(
                list(chunk),
                return_tensors="pt",
                padding=True,
                truncation=True,
                max_length=max_length,
            ).to(device)
            logits = model(**encoded)
            probabilities.extend(torch.sigmoid(logits).tolist())
    # clip away exact 0/1 that float32 sigmoid can produce on huge logits
    eps = 1e-6
    probabilities = [min(max(p, eps), 1.0 - eps) for p in probabilities]
    write_predictions(out_path, corpus.ids, probabilities)
