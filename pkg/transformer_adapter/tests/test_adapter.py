import json

import pytest
import torch

from transformer_adapter.data import read_corpus, write_predictions
from transformer_adapter.export import export_probabilities
from transformer_adapter.model import SigmoidHeadClassifier, load_checkpoint, load_encoder
from transformer_adapter.training import LOG_FILE, FineTuneSpec, fine_tune

from conftest import synthetic_corpus_lines


class TestData:
    def test_read_labeled(self, corpus_200):
        corpus = read_corpus(corpus_200)
        assert len(corpus.ids) == 200
        assert set(corpus.labels) == {0, 1}

    def test_read_unlabeled(self, tmp_path):
        p = tmp_path / "u.tsv"
        p.write_text("a\thello\nb\tworld\n", encoding="utf-8")
        corpus = read_corpus(p, labeled=False)
        assert corpus.labels is None and corpus.ids == ("a", "b")

    def test_bad_label(self, tmp_path):
        p = tmp_path / "c.tsv"
        p.write_text("a\thello\tMAYBE\n", encoding="utf-8")
        with pytest.raises(ValueError, match="MAYBE"):
            read_corpus(p)

    def test_predictions_format(self, tmp_path):
        p = tmp_path / "p.tsv"
        write_predictions(p, ["1"], [0.5])
        assert p.read_text(encoding="utf-8") == "1\t0.500000\n"


class TestFineTuneSpec:
    def test_default_hyperparameters(self):
        spec = FineTuneSpec(model_id="x")
        assert spec.batch_size == 32
        assert spec.learning_rate == pytest.approx(3e-5)
        assert spec.epochs == 3

    @pytest.mark.parametrize(
        "kwargs",
        [{"batch_size": 0}, {"epochs": 0}, {"learning_rate": 0.0}, {"max_length": 1}],
    )
    def test_invalid_spec(self, kwargs):
        with pytest.raises(ValueError):
            FineTuneSpec(model_id="x", **kwargs)

    def test_unresolvable_model_id(self, tmp_path, corpus_200):
        spec = FineTuneSpec(model_id=str(tmp_path / "no-such-model"))
        with pytest.raises(ValueError, match="resolve"):
            fine_tune(corpus_200, spec, tmp_path / "out")


class TestFineTune:
    def test_unlabeled_corpus_rejected(self, tiny_encoder_dir, tmp_path):
        p = tmp_path / "u.tsv"
        p.write_text("a\thello\nb\tworld\n", encoding="utf-8")
        spec = FineTuneSpec(model_id=str(tiny_encoder_dir), epochs=1)
        with pytest.raises(ValueError):
            fine_tune(p, spec, tmp_path / "out")

    def test_smoke_run_writes_checkpoint_and_log(self, tiny_encoder_dir, tmp_path):
        p = tmp_path / "mini.tsv"
        p.write_text(
            "\n".join(synthetic_corpus_lines(16, 16, seed=3)) + "\n", encoding="utf-8"
        )
        spec = FineTuneSpec(
            model_id=str(tiny_encoder_dir), batch_size=8, learning_rate=5e-3,
            epochs=1, max_length=32, seed=1,
        )
        out = fine_tune(p, spec, tmp_path / "ckpt")
        log = json.loads((out / LOG_FILE).read_text(encoding="utf-8"))
        assert log["n_examples"] == 32
        assert len(log["step_losses"]) == 4
        assert log["step_losses"][-1] < log["step_losses"][0]
        model, tokenizer, meta = load_checkpoint(out)
        assert isinstance(model, SigmoidHeadClassifier)
        assert meta["spec"]["seed"] == 1


class TestHeadGradient:
    def test_matches_finite_differences(self, tiny_encoder_dir):
        # frozen encoder: loss reduces to BCE(sigmoid(E @ W + b)) in the head
        encoder, tokenizer = load_encoder(str(tiny_encoder_dir))
        encoder.eval()
        texts = ["covid cases rise", "lol party", "hospital outbreak", "funny cat"]
        targets64 = torch.tensor([1.0, 0.0, 1.0, 0.0], dtype=torch.float64)
        with torch.no_grad():
            encoded = tokenizer(texts, return_tensors="pt", padding=True)
            cls_states = encoder(**encoded).last_hidden_state[:, 0]
        e = cls_states.double()
        torch.manual_seed(7)
        w = torch.randn(e.shape[1], dtype=torch.float64, requires_grad=True)
        b = torch.randn((), dtype=torch.float64, requires_grad=True)
        loss_fn = torch.nn.BCEWithLogitsLoss()

        def loss_at(w_t, b_t):
            return loss_fn(e @ w_t + b_t, targets64)

        loss = loss_at(w, b)
        loss.backward()
        h = 1e-6
        for k in range(e.shape[1]):
            shift = torch.zeros_like(w)
            shift[k] = h
            fd = (loss_at(w + shift, b) - loss_at(w - shift, b)).item() / (2 * h)
            grad = w.grad[k].item()
            assert abs(fd - grad) <= 1e-4 * max(abs(fd), abs(grad), 1e-8), k
        fd_b = (loss_at(w, b + h) - loss_at(w, b - h)).item() / (2 * h)
        assert abs(fd_b - b.grad.item()) <= 1e-4 * max(abs(fd_b), abs(b.grad.item()))


@pytest.fixture(scope="module")
def checkpoint(tiny_encoder_dir, tmp_path_factory):
    d = tmp_path_factory.mktemp("ckpt-export")
    corpus = d / "train.tsv"
    corpus.write_text(
        "\n".join(synthetic_corpus_lines(24, 24, seed=5)) + "\n", encoding="utf-8"
    )
    spec = FineTuneSpec(
        model_id=str(tiny_encoder_dir), batch_size=16, learning_rate=1e-3,
        epochs=1, max_length=32, seed=2,
    )
    return fine_tune(corpus, spec, d / "ckpt"), corpus


class TestExport:
    def test_values_in_open_interval(self, checkpoint, tmp_path):
        ckpt, corpus = checkpoint
        out = tmp_path / "p.tsv"
        export_probabilities(ckpt, corpus, out)
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 48
        for line in lines:
            _, prob = line.split("\t")
            assert 0.0 < float(prob) < 1.0

    def test_corpus_order_preserved(self, checkpoint, tmp_path):
        ckpt, corpus = checkpoint
        out = tmp_path / "p.tsv"
        export_probabilities(ckpt, corpus, out)
        exported_ids = [line.split("\t")[0] for line in
                        out.read_text(encoding="utf-8").splitlines()]
        assert exported_ids == list(read_corpus(corpus).ids)

    def test_re_export_identical(self, checkpoint, tmp_path):
        ckpt, corpus = checkpoint
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        export_probabilities(ckpt, corpus, a)
        export_probabilities(ckpt, corpus, b)
        assert a.read_bytes() == b.read_bytes()

    def test_batch_size_independent(self, checkpoint, tmp_path):
        ckpt, corpus = checkpoint
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        export_probabilities(ckpt, corpus, a, batch_size=4)
        export_probabilities(ckpt, corpus, b, batch_size=48)
        for la, lb in zip(a.read_text().splitlines(), b.read_text().splitlines()):
            ida, pa = la.split("\t")
            idb, pb = lb.split("\t")
            assert ida == idb
            assert abs(float(pa) - float(pb)) <= 2e-6

    def test_missing_checkpoint(self, tmp_path, corpus_200):
        with pytest.raises(ValueError, match="checkpoint"):
            export_probabilities(tmp_path / "nope", corpus_200, tmp_path / "p.tsv")
