"""Command line interface: split, normalize, train, predict, fuse, eval.

Exit codes: 0 success, 1 data/validation error, 2 usage error.  Every
subcommand is byte-for-byte reproducible given the same inputs and seeds.
"""

from __future__ import annotations

import argparse
import sys

from . import dataset, features, fusion_eval, normalize, svm
from .dataset import Label


def _fraction(text: str) -> float:
    value = float(text)
    if not (0.0 < value < 1.0):
        raise argparse.ArgumentTypeError(f"must be in (0,1), got {text}")
    return value


def _unit_interval(text: str) -> float:
    value = float(text)
    if not (0.0 <= value <= 1.0):
        raise argparse.ArgumentTypeError(f"must be in [0,1], got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _add_dictionary_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("normalization dictionaries")
    group.add_argument("--emoji-dict", metavar="TSV", default=None)
    group.add_argument("--interjections-dict", metavar="TSV", default=None)
    group.add_argument("--contractions-dict", metavar="TSV", default=None)
    group.add_argument("--slang-dict", metavar="TSV", default=None)
    group.add_argument(
        "--no-lowercase", action="store_true", help="skip the lowercasing stage"
    )


def _config_from_args(args) -> normalize.NormalizationConfig:
    return normalize.default_config(
        lowercase=not args.no_lowercase,
        emoji_path=args.emoji_dict,
        interjections_path=args.interjections_dict,
        contractions_path=args.contractions_dict,
        slang_path=args.slang_dict,
    )


def _print_split_table(train: dataset.Corpus, valid: dataset.Corpus) -> None:
    tc, vc = train.class_counts, valid.class_counts
    print(f"{'Label':<14}{'Training':>10}{'Validation':>12}")
    for label in (Label.INFORMATIVE, Label.UNINFORMATIVE):
        print(f"{label.name:<14}{tc.get(label, 0):>10}{vc.get(label, 0):>12}")
    print(f"{'total':<14}{len(train):>10}{len(valid):>12}")


def _cmd_split(args) -> int:
    corpus = dataset.load_corpus(args.corpus, labeled=True)
    train, valid = dataset.stratified_split(corpus, args.fraction, args.seed)
    dataset.write_corpus(args.train_out, train)
    dataset.write_corpus(args.valid_out, valid)
    _print_split_table(train, valid)
    return 0


def _cmd_normalize(args) -> int:
    cfg = _config_from_args(args)
    corpus = dataset.load_corpus(args.corpus, labeled=not args.unlabeled)
    entries = tuple(
        (dataset.Tweet(t.id, normalize.normalize_tweet(t.text, cfg)), label)
        for t, label in corpus.entries
    )
    dataset.write_corpus(args.out, dataset.Corpus(entries))
    return 0


def _cmd_train(args) -> int:
    cfg = _config_from_args(args)
    corpus = dataset.load_corpus(args.corpus, labeled=True)
    texts = [normalize.normalize_tweet(t, cfg) for t in corpus.texts()]
    normalized = dataset.Corpus(
        tuple(
            (dataset.Tweet(t.id, text), label)
            for (t, label), text in zip(corpus.entries, texts)
        )
    )
    vocab = features.fit_vocabulary(normalized, min_df=args.min_df)
    vectors = [features.vectorize(text, vocab) for text in texts]
    labels = corpus.labels()
    params = svm.SvmParams(
        c=args.c, gamma=args.gamma, coef0=args.coef0, tol=args.tol,
        max_passes=args.max_passes,
    )
    model = svm.train_svm(vectors, labels, params, seed=args.seed)
    model = svm.calibrate(model, vectors, labels)
    report = model.fit_report
    print(f"passes              {report.passes}")
    print(f"support vectors     {report.n_support}")
    print(f"max KKT violation   {report.max_kkt_violation:.6g}")
    print(f"platt A/B           {model.platt_a:.6g} {model.platt_b:.6g}")
    if not report.converged:
        print(
            "WARNING: SMO stopped before reaching the KKT tolerance; "
            "the model is usable but may be suboptimal (try --max-passes).",
            file=sys.stderr,
        )
    vocab_out = args.vocab if args.vocab else args.model + ".vocab.tsv"
    features.save_vocabulary(vocab_out, vocab)
    svm.save_model(args.model, model)
    return 0


def _cmd_predict(args) -> int:
    cfg = _config_from_args(args)
    model = svm.load_model(args.model)
    vocab_path = args.vocab if args.vocab else args.model + ".vocab.tsv"
    vocab = features.load_vocabulary(vocab_path)
    corpus = dataset.load_corpus(args.corpus, labeled=not args.unlabeled)
    vectors = [
        features.vectorize(normalize.normalize_tweet(t.text, cfg), vocab)
        for t, _ in corpus.entries
    ]
    probs = svm.predict_proba_batch(model, vectors)
    preds = fusion_eval.PredictionSet(
        "tfidf-svm", tuple((t.id, float(p)) for (t, _), p in zip(corpus.entries, probs))
    )
    fusion_eval.write_predictions(args.out, preds)
    return 0


def _cmd_fuse(args) -> int:
    sets = [fusion_eval.load_predictions(path) for path in args.predictions]
    fused = fusion_eval.fuse(sets)
    fusion_eval.write_predictions(args.out, fused)
    return 0


def _cmd_eval(args) -> int:
    gold_corpus = dataset.load_corpus(args.gold, labeled=True)
    preds = fusion_eval.load_predictions(args.predictions)
    predicted = fusion_eval.threshold(preds, args.cutoff)
    gold = [(t.id, label) for t, label in gold_corpus.entries]
    report = fusion_eval.compute_metrics(gold, predicted)
    print(report, file=sys.stderr)
    print(report.to_json_line())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tweetinfo",
        description="Classify tweets as INFORMATIVE vs UNINFORMATIVE: "
        "normalization, TF-IDF + sigmoid-kernel SVM, probability fusion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="stratified train/validation split")
    p.add_argument("corpus")
    p.add_argument("--fraction", type=_fraction, default=0.8)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--train-out", required=True)
    p.add_argument("--valid-out", required=True)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("normalize", help="rewrite corpus text through the pipeline")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--unlabeled", action="store_true")
    _add_dictionary_flags(p)
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("train", help="train the TF-IDF + sigmoid-kernel SVM")
    p.add_argument("corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--vocab", default=None, help="default: MODEL.vocab.tsv")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--min-df", type=_positive_int, default=2)
    p.add_argument("-c", "--c", type=_positive_float, default=1.0)
    p.add_argument("--gamma", type=_positive_float, default=None,
                   help="default: 1/n_features")
    p.add_argument("--coef0", type=float, default=0.0)
    p.add_argument("--tol", type=_positive_float, default=1e-3)
    p.add_argument("--max-passes", type=_positive_int, default=None,
                   help="default: 10 * n_samples")
    _add_dictionary_flags(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="write INFORMATIVE probabilities")
    p.add_argument("corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--vocab", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--unlabeled", action="store_true")
    _add_dictionary_flags(p)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("fuse", help="average prediction files into an ensemble")
    p.add_argument("predictions", nargs="+")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fuse)

    p = sub.add_parser("eval", help="precision/recall/F1 against a gold corpus")
    p.add_argument("--gold", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--cutoff", type=_unit_interval, default=0.5)
    p.set_defaults(func=_cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
