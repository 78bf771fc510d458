"""Surface morphological segmentation for conjunctively written
agglutinative languages.

The package covers the full pipeline: parsing word-level canonical
annotations, deriving surface segmentations by constrained edit alignment,
supervised segmentation with a feature-based linear-chain CRF over BMES
character labels, unsupervised baselines (branching entropy, random, MDL),
and morpheme-overlap evaluation.
"""

from .align import (AlignmentStats, EditOp, EditScript,
                    alignment_stats, derive_surface, desegment)
from .charlm import (CharLm, EntropyProfile, entropy, entropy_profile,
                     load_lm, save_lm, train_lm)
from .corpus import (AnnotatedWord, CanonicalAnalysis, Dataset, Morpheme,
                     load_corpus, parse_annotation, preprocess)
from .crf import (CrfModel, TrainConfig, extract_features, load_model,
                  log_partition, marginals, nll_and_gradient, save_model,
                  segment, sequence_score, train, viterbi_decode)
from .errors import (AnnotationParseError, DataError, InvalidLabelSeq,
                     ModelFormatError, MorphsegError, NumericalError,
                     UnalignableError)
from .evaluate import PRF, boundary_prf, micro_prf, word_overlap
from .labels import LABELS, decode_bmes, encode_bmes
from .segmentation import SurfaceSegmentation
from .unsup import (EntropyConfig, MdlModel, mdl_segment, mdl_train,
                    segment_constant_entropy, segment_entropy_increase,
                    segment_random, segment_relative_entropy, tune_theta)

__version__ = "0.1.0"
