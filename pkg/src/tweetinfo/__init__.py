"""Toolkit for classifying tweets as informative vs uninformative."""

from .dataset import Corpus, Label, Tweet, load_corpus, stratified_split, write_corpus
from .features import SparseVector, TfIdfVocabulary, fit_vocabulary, tokenize, vectorize
from .fusion_eval import (
    ConfusionCounts,
    MetricsReport,
    PredictionSet,
    compute_metrics,
    fuse,
    load_predictions,
    threshold,
    write_predictions,
)
from .normalize import (
    NormalizationConfig,
    ReplacementDictionaries,
    apply_dictionary,
    collapse_repeats,
    default_config,
    load_dictionaries,
    normalize_tweet,
    strip_noise,
)
from .svm import (
    ConfidencePair,
    SvmModel,
    SvmParams,
    calibrate,
    decision,
    fit_platt,
    kernel_sigmoid,
    load_model,
    predict_proba,
    save_model,
    train_svm,
)

__version__ = "0.1.0"
