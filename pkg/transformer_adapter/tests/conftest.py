import random
import string

import pytest
import torch
from transformers import BertConfig, BertModel, BertTokenizer


@pytest.fixture(scope="session")
def tiny_encoder_dir(tmp_path_factory):
    """A small randomly initialized BERT saved locally; stands in for a hub
    model in this offline environment (a local path is a valid identifier)."""
    d = tmp_path_factory.mktemp("tiny-bert")
    chars = list(string.ascii_lowercase + string.digits)
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    vocab += chars + [f"##{c}" for c in chars]
    (d / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    tokenizer = BertTokenizer(str(d / "vocab.txt"))
    torch.manual_seed(0)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=192,
    )
    model = BertModel(config)
    model.save_pretrained(d)
    tokenizer.save_pretrained(d)
    return d


def synthetic_corpus_lines(n_info=100, n_noise=100, seed=13):
    rng = random.Random(seed)
    info = ["covid", "cases", "deaths", "confirmed", "hospital", "tested",
            "county", "update", "outbreak", "lockdown"]
    noise = ["lol", "party", "cat", "funny", "game", "music", "coffee",
             "movie", "dog", "beach"]
    shared = ["the", "a", "in", "today", "my", "and"]

    def tweet(pool):
        k = rng.randint(4, 9)
        return " ".join(rng.choice(pool if rng.random() < 0.7 else shared) for _ in range(k))

    lines = [f"i{k}\t{tweet(info)}\tINFORMATIVE" for k in range(n_info)]
    lines += [f"u{k}\t{tweet(noise)}\tUNINFORMATIVE" for k in range(n_noise)]
    return lines


@pytest.fixture
def corpus_200(tmp_path):
    p = tmp_path / "train.tsv"
    p.write_text("\n".join(synthetic_corpus_lines()) + "\n", encoding="utf-8")
    return p
