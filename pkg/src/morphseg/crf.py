"""Feature-based linear-chain CRF over BMES character labels.

Emission scores come from sparse binary features (anchored character
n-grams plus vowel/consonant and case indicators); transition scores live
in small dense tables whose structurally illegal entries are pinned to
-inf and never trained, so every decoded sequence obeys the BMES grammar
by construction.  All dynamic programs run in log space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np
from scipy import optimize

from . import evaluate
from .errors import DataError, InvalidLabelSeq, ModelFormatError, NumericalError
from .labels import (END_LABELS, LABELS, LABEL_INDEX, NEXT_LABELS,
                     START_LABELS, check_labels, decode_bmes)
from .segmentation import SurfaceSegmentation

N_LABELS = len(LABELS)
TEMPLATE_VERSION = 1
MODEL_FORMAT_VERSION = 1
MAX_NGRAM = 6
VOWELS = frozenset("aeiouAEIOU")
_PAD_LEFT = "^"
_PAD_RIGHT = "$"

START_LEGAL = np.array([lab in START_LABELS for lab in LABELS])
END_LEGAL = np.array([lab in END_LABELS for lab in LABELS])
TRANS_LEGAL = np.array([[b in NEXT_LABELS[a] for b in LABELS] for a in LABELS])
_N_TRANS = int(TRANS_LEGAL.sum())
_N_START = int(START_LEGAL.sum())
_N_END = int(END_LEGAL.sum())
N_TRANSITION_PARAMS = _N_TRANS + _N_START + _N_END


# --------------------------------------------------------------------------
# feature extraction

def extract_features(word: str, i: int) -> list[str]:
    """Feature keys for character ``i`` of ``word``.

    Emits a bias key, all character n-grams (n = 1..6) that end at i and
    all that start at i (with one extra gram anchored to the word edge when
    the window crosses it), plus vowel/consonant and case indicators.
    Each key encodes its template and content, e.g. ``sfx=^ab``.
    """
    n = len(word)
    if not 0 <= i < n:
        raise IndexError(f"position {i} out of range for {word!r}")
    ch = word[i]
    feats = ["bias"]
    for k in range(1, MAX_NGRAM + 1):
        start = i - k + 1
        if start >= 0:
            feats.append("sfx=" + word[start:i + 1])
        elif start == -1:
            feats.append("sfx=" + _PAD_LEFT + word[:i + 1])
        else:
            break
    for k in range(1, MAX_NGRAM + 1):
        end = i + k
        if end <= n:
            feats.append("pfx=" + word[i:end])
        elif end == n + 1:
            feats.append("pfx=" + word[i:] + _PAD_RIGHT)
        else:
            break
    feats.append("vc=v" if ch in VOWELS else "vc=c")
    feats.append("case=u" if ch.isupper() else "case=l")
    return feats


def extract_word_features(word: str) -> list[list[str]]:
    return [extract_features(word, i) for i in range(len(word))]


class FeatureVocab:
    """Interns feature keys to dense integer ids in insertion order."""

    __slots__ = ("keys", "index")

    def __init__(self, keys: Iterable[str] = ()):
        self.keys: list[str] = []
        self.index: dict[str, int] = {}
        for key in keys:
            self.add(key)

    def add(self, key: str) -> int:
        fid = self.index.get(key)
        if fid is None:
            fid = len(self.keys)
            self.index[key] = fid
            self.keys.append(key)
        return fid

    def get(self, key: str) -> Optional[int]:
        return self.index.get(key)

    def __len__(self) -> int:
        return len(self.keys)


# --------------------------------------------------------------------------
# log-space dynamic programs (4 labels, so everything stays tiny and dense)

def _lse(a: np.ndarray, axis: int) -> np.ndarray:
    """logsumexp that keeps -inf rows at -inf without warnings."""
    m = np.max(a, axis=axis, keepdims=True)
    safe = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        out = np.log(np.sum(np.exp(a - safe), axis=axis)) + np.squeeze(safe, axis=axis)
    return out


def _forward(E, trans, ts, te):
    n = E.shape[0]
    alpha = np.empty((n, N_LABELS))
    alpha[0] = ts + E[0]
    for i in range(1, n):
        alpha[i] = E[i] + _lse(alpha[i - 1][:, None] + trans, axis=0)
    log_z = float(_lse((alpha[-1] + te)[None, :], axis=1)[0])
    return alpha, log_z


def _backward(E, trans, te):
    n = E.shape[0]
    beta = np.empty((n, N_LABELS))
    beta[n - 1] = te
    for i in range(n - 2, -1, -1):
        beta[i] = _lse(trans + (E[i + 1] + beta[i + 1])[None, :], axis=1)
    return beta


def _node_edge_marginals(E, trans, ts, te):
    n = E.shape[0]
    alpha, log_z = _forward(E, trans, ts, te)
    beta = _backward(E, trans, te)
    node = np.exp(alpha + beta - log_z)
    if n > 1:
        edge = np.exp(alpha[:-1, :, None] + trans[None, :, :]
                      + (E[1:] + beta[1:])[:, None, :] - log_z)
    else:
        edge = np.zeros((0, N_LABELS, N_LABELS))
    return node, edge, log_z


def _viterbi_path(E, trans, ts, te) -> list[int]:
    """Best label indices; ties fall to the smallest index, left to right.

    Runs the max-product recursion backwards and reads the path out
    forwards, which makes the tie-break lexicographic in sequence order
    (np.argmax returns the first maximum).
    """
    n = E.shape[0]
    delta = E[n - 1] + te
    backptr = np.empty((n - 1, N_LABELS), dtype=np.intp) if n > 1 else None
    for i in range(n - 2, -1, -1):
        scores = trans + delta[None, :]
        backptr[i] = np.argmax(scores, axis=1)
        delta = E[i] + np.max(scores, axis=1)
    y = int(np.argmax(ts + delta))
    path = [y]
    for i in range(n - 1):
        y = int(backptr[i][y])
        path.append(y)
    return path


# --------------------------------------------------------------------------
# model

@dataclass(frozen=True)
class TrainConfig:
    l2: float = 0.1
    epsilon: float = 1e-7
    max_iterations: int = 160

    def __post_init__(self):
        if self.l2 < 0:
            raise ValueError("l2 strength must be non-negative")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class TrainingLog:
    objectives: tuple[float, ...]
    dev_f1: tuple[float, ...]
    best_iteration: Optional[int]
    stop_reason: str


class CrfModel:
    """Trained weights plus the feature vocabulary; read-only after creation."""

    def __init__(self, vocab: FeatureVocab, feature_weights: np.ndarray,
                 trans: np.ndarray, trans_start: np.ndarray, trans_end: np.ndarray,
                 config: Optional[dict] = None,
                 training_log: Optional[TrainingLog] = None):
        feature_weights = np.asarray(feature_weights, dtype=float)
        trans = np.asarray(trans, dtype=float)
        trans_start = np.asarray(trans_start, dtype=float)
        trans_end = np.asarray(trans_end, dtype=float)
        if feature_weights.shape != (len(vocab), N_LABELS):
            raise ValueError("feature weight table has the wrong shape")
        if not np.isfinite(feature_weights).all():
            raise ValueError("feature weights must be finite")
        for values, legal, name in ((trans, TRANS_LEGAL, "transition"),
                                    (trans_start, START_LEGAL, "start"),
                                    (trans_end, END_LEGAL, "end")):
            if values.shape != legal.shape:
                raise ValueError(f"{name} table has the wrong shape")
            if not np.isfinite(values[legal]).all():
                raise ValueError(f"{name} weights must be finite")
            if not np.all(values[~legal] == -np.inf):
                raise ValueError(f"illegal {name} entries must be -inf")
        for arr in (feature_weights, trans, trans_start, trans_end):
            arr.setflags(write=False)
        self.vocab = vocab
        self.feature_weights = feature_weights
        self.trans = trans
        self.trans_start = trans_start
        self.trans_end = trans_end
        self.config = dict(config or {})
        self.config.setdefault("template_version", TEMPLATE_VERSION)
        self.training_log = training_log

    def position_feature_ids(self, word: str) -> list[np.ndarray]:
        """Known-feature ids per position; unknown keys are simply skipped."""
        get = self.vocab.get
        out = []
        for keys in extract_word_features(word):
            ids = [fid for fid in map(get, keys) if fid is not None]
            out.append(np.asarray(ids, dtype=np.intp))
        return out

    def emissions(self, word: str) -> np.ndarray:
        """Per-position label scores: summed weights of the active features."""
        ids = self.position_feature_ids(word)
        E = np.zeros((len(word), N_LABELS))
        for i, row in enumerate(ids):
            if row.size:
                E[i] = self.feature_weights[row].sum(axis=0)
        return E


def sequence_score(model: CrfModel, word: str, labels: str) -> float:
    """Unnormalized score of a label string; -inf if structurally illegal."""
    if len(labels) != len(word):
        raise DataError(f"{len(labels)} labels for word {word!r}")
    try:
        idx = np.array([LABEL_INDEX[lab] for lab in labels], dtype=np.intp)
    except KeyError as exc:
        raise DataError(f"unknown label {exc.args[0]!r}") from None
    E = model.emissions(word)
    score = float(E[np.arange(len(word)), idx].sum())
    score += float(model.trans_start[idx[0]] + model.trans_end[idx[-1]])
    if len(idx) > 1:
        score += float(model.trans[idx[:-1], idx[1:]].sum())
    return score


def log_partition(model: CrfModel, word: str) -> float:
    """log sum over all equal-length label sequences of exp(score)."""
    if not word:
        raise DataError("word must be non-empty")
    E = model.emissions(word)
    return _forward(E, model.trans, model.trans_start, model.trans_end)[1]


def marginals(model: CrfModel, word: str) -> tuple[np.ndarray, np.ndarray]:
    """Posterior marginals: (positions x labels, edges x labels x labels)."""
    if not word:
        raise DataError("word must be non-empty")
    E = model.emissions(word)
    node, edge, _ = _node_edge_marginals(
        E, model.trans, model.trans_start, model.trans_end)
    return node, edge


def viterbi_decode(model: CrfModel, word: str) -> str:
    """Highest-scoring legal label string for ``word``."""
    if not word:
        raise DataError("word must be non-empty")
    E = model.emissions(word)
    path = _viterbi_path(E, model.trans, model.trans_start, model.trans_end)
    return "".join(LABELS[i] for i in path)


def segment(model: CrfModel, word: str) -> SurfaceSegmentation:
    """Decode a word into its predicted surface segmentation."""
    return decode_bmes(viterbi_decode(model, word), word)


# --------------------------------------------------------------------------
# training

class _Compiled(NamedTuple):
    n: int
    flat_ids: np.ndarray   # feature id per (position, feature) instance
    rows: np.ndarray       # position of each instance
    offsets: Optional[np.ndarray]  # reduceat offsets, set when no position is empty
    gold: Optional[np.ndarray]     # gold label indices


def _compile_example(word: str, labels: Optional[str], vocab: FeatureVocab,
                     grow: bool) -> _Compiled:
    if not word:
        raise DataError("word must be non-empty")
    gold = None
    if labels is not None:
        try:
            check_labels(labels, len(word))
        except InvalidLabelSeq as exc:
            raise DataError(f"illegal gold labels for {word!r}: {exc}") from exc
        gold = np.array([LABEL_INDEX[lab] for lab in labels], dtype=np.intp)
    flat: list[int] = []
    rows: list[int] = []
    offsets: list[int] = []
    dense = True
    for i, keys in enumerate(extract_word_features(word)):
        offsets.append(len(flat))
        for key in keys:
            fid = vocab.add(key) if grow else vocab.get(key)
            if fid is not None:
                flat.append(fid)
                rows.append(i)
        if offsets[-1] == len(flat):
            dense = False
    return _Compiled(
        len(word),
        np.asarray(flat, dtype=np.intp),
        np.asarray(rows, dtype=np.intp),
        np.asarray(offsets, dtype=np.intp) if dense else None,
        gold,
    )


def _emissions_for(ex: _Compiled, weights: np.ndarray) -> np.ndarray:
    if ex.offsets is not None:
        return np.add.reduceat(weights[ex.flat_ids], ex.offsets, axis=0)
    E = np.zeros((ex.n, N_LABELS))
    np.add.at(E, ex.rows, weights[ex.flat_ids])
    return E


def _batch_nll(weights, trans, ts, te, examples, l2):
    """Regularized NLL and gradients over compiled examples."""
    loss = 0.0
    gf = np.zeros_like(weights)
    gt = np.zeros((N_LABELS, N_LABELS))
    gs = np.zeros(N_LABELS)
    ge = np.zeros(N_LABELS)
    for ex in examples:
        E = _emissions_for(ex, weights)
        node, edge, log_z = _node_edge_marginals(E, trans, ts, te)
        gold = ex.gold
        gold_score = E[np.arange(ex.n), gold].sum() + ts[gold[0]] + te[gold[-1]]
        if ex.n > 1:
            gold_score += trans[gold[:-1], gold[1:]].sum()
        loss += log_z - gold_score
        gs += node[0]
        gs[gold[0]] -= 1.0
        ge += node[-1]
        ge[gold[-1]] -= 1.0
        if ex.n > 1:
            gt += edge.sum(axis=0)
            np.subtract.at(gt, (gold[:-1], gold[1:]), 1.0)
        contrib = node[ex.rows]
        contrib[np.arange(len(ex.rows)), gold[ex.rows]] -= 1.0
        np.add.at(gf, ex.flat_ids, contrib)
    if l2 > 0:
        loss += 0.5 * l2 * (
            float(np.sum(weights * weights))
            + float(np.sum(trans[TRANS_LEGAL] ** 2))
            + float(np.sum(ts[START_LEGAL] ** 2))
            + float(np.sum(te[END_LEGAL] ** 2)))
        gf += l2 * weights
        gt[TRANS_LEGAL] += l2 * trans[TRANS_LEGAL]
        gs[START_LEGAL] += l2 * ts[START_LEGAL]
        ge[END_LEGAL] += l2 * te[END_LEGAL]
    gt[~TRANS_LEGAL] = 0.0
    gs[~START_LEGAL] = 0.0
    ge[~END_LEGAL] = 0.0
    return loss, gf, gt, gs, ge


@dataclass(frozen=True)
class Gradients:
    feature: np.ndarray
    trans: np.ndarray
    start: np.ndarray
    end: np.ndarray


def nll_and_gradient(model: CrfModel, batch: Sequence[tuple[str, str]],
                     l2: float = 0.0) -> tuple[float, Gradients]:
    """Regularized negative log-likelihood of ``batch`` plus its gradient.

    ``batch`` holds (word, label-string) pairs with legal gold labels.
    Gradient entries exist only for trainable parameters; structurally
    illegal transitions stay zero.
    """
    examples = [_compile_example(word, labels, model.vocab, grow=False)
                for word, labels in batch]
    loss, gf, gt, gs, ge = _batch_nll(
        model.feature_weights, model.trans, model.trans_start, model.trans_end,
        examples, l2)
    return float(loss), Gradients(gf, gt, gs, ge)


def _unpack(x: np.ndarray, n_features: int):
    weights = x[:n_features * N_LABELS].reshape(n_features, N_LABELS)
    rest = x[n_features * N_LABELS:]
    trans = np.full((N_LABELS, N_LABELS), -np.inf)
    trans[TRANS_LEGAL] = rest[:_N_TRANS]
    ts = np.full(N_LABELS, -np.inf)
    ts[START_LEGAL] = rest[_N_TRANS:_N_TRANS + _N_START]
    te = np.full(N_LABELS, -np.inf)
    te[END_LEGAL] = rest[_N_TRANS + _N_START:]
    return weights, trans, ts, te


def _pack_grads(gf, gt, gs, ge) -> np.ndarray:
    return np.concatenate(
        [gf.ravel(), gt[TRANS_LEGAL], gs[START_LEGAL], ge[END_LEGAL]])


def train(train_data: Sequence[tuple[str, str]],
          config: TrainConfig = TrainConfig(),
          dev_data: Optional[Sequence[tuple[str, str]]] = None) -> CrfModel:
    """Fit a model on (word, label-string) pairs by batch L-BFGS.

    Optimization stops when the relative objective change drops below
    ``config.epsilon`` or after ``config.max_iterations`` iterations.  With
    a dev set, the iterate with the best dev morpheme micro-F1 is returned;
    otherwise the final iterate.
    """
    pairs = list(train_data)
    if not pairs:
        raise DataError("empty training set")
    vocab = FeatureVocab()
    examples = [_compile_example(word, labels, vocab, grow=True)
                for word, labels in pairs]
    n_features = len(vocab)

    dev_examples = None
    dev_gold = None
    if dev_data is not None:
        dev_pairs = list(dev_data)
        dev_examples = [_compile_example(word, labels, vocab, grow=False)
                        for word, labels in dev_pairs]
        dev_gold = [list(decode_bmes(labels, word).segments)
                    for word, labels in dev_pairs]

    state = {"f": None, "x": None}

    def objective(x):
        weights, trans, ts, te = _unpack(x, n_features)
        loss, gf, gt, gs, ge = _batch_nll(weights, trans, ts, te,
                                          examples, config.l2)
        grad = _pack_grads(gf, gt, gs, ge)
        if not np.isfinite(loss) or not np.isfinite(grad).all():
            raise NumericalError("non-finite training objective or gradient")
        state["f"] = float(loss)
        state["x"] = x.copy()
        return loss, grad

    def dev_f1_at(x) -> float:
        weights, trans, ts, te = _unpack(x, n_features)
        pred = []
        for ex, gold_segs in zip(dev_examples, dev_gold):
            E = _emissions_for(ex, weights)
            path = _viterbi_path(E, trans, ts, te)
            labels = "".join(LABELS[i] for i in path)
            word = "".join(gold_segs)
            pred.append(list(decode_bmes(labels, word).segments))
        return evaluate.micro_prf(zip(pred, dev_gold)).f1

    objectives: list[float] = []
    dev_scores: list[float] = []
    best = {"f1": -1.0, "x": None, "iteration": None}

    def callback(xk):
        if state["x"] is not None and np.array_equal(state["x"], xk):
            f = state["f"]
        else:
            weights, trans, ts, te = _unpack(xk, n_features)
            f = float(_batch_nll(weights, trans, ts, te, examples, config.l2)[0])
        objectives.append(f)
        if dev_examples is not None:
            f1 = dev_f1_at(xk)
            dev_scores.append(f1)
            if f1 > best["f1"]:
                best.update(f1=f1, x=xk.copy(), iteration=len(objectives))

    x0 = np.zeros(n_features * N_LABELS + N_TRANSITION_PARAMS)
    result = optimize.minimize(
        objective, x0, jac=True, method="L-BFGS-B", callback=callback,
        options={"maxiter": config.max_iterations, "ftol": config.epsilon,
                 "gtol": 0.0, "maxfun": 10 * config.max_iterations + 100})

    x_final = result.x
    best_iteration = None
    if dev_examples is not None and best["x"] is not None:
        x_final = best["x"]
        best_iteration = best["iteration"]
    weights, trans, ts, te = _unpack(x_final, n_features)
    log = TrainingLog(tuple(objectives), tuple(dev_scores), best_iteration,
                      str(result.message))
    model_config = {
        "template_version": TEMPLATE_VERSION,
        "l2": config.l2,
        "epsilon": config.epsilon,
        "max_iterations": config.max_iterations,
    }
    return CrfModel(vocab, weights.copy(), trans, ts, te, model_config, log)


def train_on_segmentations(train_segs: Sequence[SurfaceSegmentation],
                           config: TrainConfig = TrainConfig(),
                           dev_segs: Optional[Sequence[SurfaceSegmentation]] = None
                           ) -> CrfModel:
    """Convenience wrapper: encode gold segmentations to labels and train."""
    from .labels import encode_bmes
    train_pairs = [(seg.word, encode_bmes(seg)) for seg in train_segs]
    dev_pairs = ([(seg.word, encode_bmes(seg)) for seg in dev_segs]
                 if dev_segs is not None else None)
    return train(train_pairs, config, dev_pairs)


# --------------------------------------------------------------------------
# serialization

def save_model(model: CrfModel, sink: Union[str, IO[str]]) -> None:
    """Write a model as versioned text, sorted for byte-stable output."""
    own = isinstance(sink, str)
    fh = open(sink, "w", encoding="utf-8") if own else sink
    try:
        fh.write(f"morphseg-crf {MODEL_FORMAT_VERSION}\n")
        fh.write(f"template {model.config.get('template_version', TEMPLATE_VERSION)}\n")
        fh.write(f"labels {' '.join(LABELS)}\n")
        fh.write(f"l2 {float(model.config.get('l2', 0.0))!r}\n")
        fh.write(f"epsilon {float(model.config.get('epsilon', 0.0))!r}\n")
        fh.write(f"max_iterations {int(model.config.get('max_iterations', 0))}\n")
        fh.write(f"features {len(model.vocab)}\n")
        fh.write("[emissions]\n")
        order = sorted(range(len(model.vocab)), key=model.vocab.keys.__getitem__)
        for fid in order:
            key = model.vocab.keys[fid]
            for li, lab in enumerate(LABELS):
                fh.write(f"{key}\t{lab}\t{float(model.feature_weights[fid, li])!r}\n")
        fh.write("[transitions]\n")
        for li, lab in enumerate(LABELS):
            if START_LEGAL[li]:
                fh.write(f"START\t{lab}\t{float(model.trans_start[li])!r}\n")
        for ai, a in enumerate(LABELS):
            for bi, b in enumerate(LABELS):
                if TRANS_LEGAL[ai, bi]:
                    fh.write(f"{a}\t{b}\t{float(model.trans[ai, bi])!r}\n")
        for li, lab in enumerate(LABELS):
            if END_LEGAL[li]:
                fh.write(f"{lab}\tEND\t{float(model.trans_end[li])!r}\n")
        fh.write("[end]\n")
    finally:
        if own:
            fh.close()


def load_model(source: Union[str, IO[str]]) -> CrfModel:
    """Read a model written by save_model; loading then decoding is lossless."""
    own = isinstance(source, str)
    fh = open(source, "r", encoding="utf-8") if own else source
    try:
        lines = fh.read().splitlines()
    finally:
        if own:
            fh.close()
    if not lines or not lines[0].startswith("morphseg-crf "):
        raise ModelFormatError("not a CRF model file")
    if lines[0].split()[1] != str(MODEL_FORMAT_VERSION):
        raise ModelFormatError(f"unsupported model version in {lines[0]!r}")
    header: dict[str, str] = {}
    i = 1
    while i < len(lines) and lines[i] != "[emissions]":
        key, _, value = lines[i].partition(" ")
        header[key] = value
        i += 1
    if i == len(lines):
        raise ModelFormatError("missing [emissions] section")
    if header.get("labels") != " ".join(LABELS):
        raise ModelFormatError("label inventory mismatch")
    try:
        n_features = int(header["features"])
        config = {
            "template_version": int(header["template"]),
            "l2": float(header.get("l2", "0.0")),
            "epsilon": float(header.get("epsilon", "0.0")),
            "max_iterations": int(header.get("max_iterations", "0")),
        }
    except (KeyError, ValueError) as exc:
        raise ModelFormatError(f"bad model header: {exc}") from exc

    vocab = FeatureVocab()
    rows: list[list[float]] = []
    i += 1
    seen = 0
    while i < len(lines) and lines[i] != "[transitions]":
        parts = lines[i].split("\t")
        if len(parts) != 3:
            raise ModelFormatError(f"bad emission line {lines[i]!r}")
        key, lab, value = parts
        if lab not in LABEL_INDEX:
            raise ModelFormatError(f"unknown label in line {lines[i]!r}")
        fid = vocab.add(key)
        if fid == len(rows):
            rows.append([0.0] * N_LABELS)
        try:
            weight = float(value)
        except ValueError:
            raise ModelFormatError(f"bad weight in line {lines[i]!r}") from None
        rows[fid][LABEL_INDEX[lab]] = weight
        seen += 1
        i += 1
    if i == len(lines):
        raise ModelFormatError("missing [transitions] section")
    if len(vocab) != n_features or seen != n_features * N_LABELS:
        raise ModelFormatError(
            f"expected {n_features} features, found {len(vocab)} ({seen} entries)")

    trans = np.full((N_LABELS, N_LABELS), -np.inf)
    ts = np.full(N_LABELS, -np.inf)
    te = np.full(N_LABELS, -np.inf)
    closed = False
    for line in lines[i + 1:]:
        if line == "[end]":
            closed = True
            break
        parts = line.split("\t")
        if len(parts) != 3:
            raise ModelFormatError(f"bad transition line {line!r}")
        src, dst, value = parts
        try:
            weight = float(value)
        except ValueError:
            raise ModelFormatError(f"bad weight in line {line!r}") from None
        if src == "START" and dst in LABEL_INDEX:
            ts[LABEL_INDEX[dst]] = weight
        elif dst == "END" and src in LABEL_INDEX:
            te[LABEL_INDEX[src]] = weight
        elif src in LABEL_INDEX and dst in LABEL_INDEX:
            trans[LABEL_INDEX[src], LABEL_INDEX[dst]] = weight
        else:
            raise ModelFormatError(f"bad transition line {line!r}")
    if not closed:
        raise ModelFormatError("model file is truncated")

    weights = np.array(rows, dtype=float).reshape(len(vocab), N_LABELS)
    try:
        return CrfModel(vocab, weights, trans, ts, te, config)
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from exc
