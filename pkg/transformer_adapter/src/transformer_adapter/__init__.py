"""Fine-tune transformer encoders for tweet classification and export
probability files consumable by the classical ensemble tooling."""

from .data import CorpusFile, read_corpus, write_predictions
from .export import export_probabilities
from .model import SigmoidHeadClassifier, load_checkpoint, load_encoder, save_checkpoint
from .training import FineTuneSpec, fine_tune

__version__ = "0.1.0"
