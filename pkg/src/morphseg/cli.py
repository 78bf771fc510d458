"""Command-line entry point: one executable with a subcommand per stage.

Every subcommand prints a machine-readable JSON summary on stdout and uses
deterministic seeding (``--seed``, default 42) for anything stochastic, so
identical inputs always produce byte-identical outputs.  Exit codes: 0
success, 1 usage error, 2 data or format error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import align, charlm, corpus, crf, evaluate, formats, synth, unsup
from .errors import (AnnotationParseError, DataError, ModelFormatError,
                     MorphsegError, NumericalError, UnalignableError)
from .labels import encode_bmes
from .segmentation import SurfaceSegmentation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def _cmd_preprocess(args) -> int:
    raw_train = formats.read_annotated(args.train)
    raw_test = formats.read_annotated(args.test)
    result = corpus.preprocess(raw_train.items, raw_test.items,
                               args.dev_fraction,
                               shuffle_seed=args.seed if args.shuffle else None)
    os.makedirs(args.out_dir, exist_ok=True)
    for split in (result.train, result.dev, result.test):
        formats.write_annotated(os.path.join(args.out_dir, f"{split.split}.tsv"),
                                split.items)
    summary = result.report.as_dict()
    summary["parse_skipped"] = len(raw_train.skipped) + len(raw_test.skipped)
    _emit(summary)
    return EXIT_OK


def _cmd_derive_surface(args) -> int:
    loaded = formats.read_annotated(args.infile)
    segs = []
    identical = unalignable = 0
    for item in loaded.items:
        kept = tuple(m for m in item.analysis.morphemes if m.text)
        if not kept:
            unalignable += 1
            continue
        analysis = corpus.CanonicalAnalysis(kept)
        try:
            seg = align.derive_surface(analysis, item.word)
        except UnalignableError:
            unalignable += 1
            continue
        if align.desegment(analysis) == item.word:
            identical += 1
        segs.append(seg)
    formats.write_segmentations(args.out, segs)
    _emit({
        "loaded": len(loaded.items),
        "parse_skipped": len(loaded.skipped),
        "derived": len(segs),
        "identical": identical,
        "unalignable": unalignable,
    })
    return EXIT_OK


def _cmd_stats(args) -> int:
    loaded = formats.read_annotated(args.infile)
    stats = align.alignment_stats(loaded.items)
    summary = stats.as_dict()
    summary["parse_skipped"] = len(loaded.skipped)
    _emit(summary)
    return EXIT_OK


def _cmd_train_crf(args) -> int:
    train_segs = formats.read_segmentations(args.train)
    dev_segs = formats.read_segmentations(args.dev) if args.dev else None
    config = crf.TrainConfig(l2=args.l2, epsilon=args.epsilon,
                             max_iterations=args.max_iter)
    model = crf.train_on_segmentations(train_segs, config, dev_segs)
    crf.save_model(model, args.out)
    log = model.training_log
    summary = {
        "train_words": len(train_segs),
        "features": len(model.vocab),
        "iterations": len(log.objectives),
        "final_objective": log.objectives[-1] if log.objectives else None,
        "stop_reason": log.stop_reason,
        "model": args.out,
    }
    if dev_segs is not None:
        summary["dev_words"] = len(dev_segs)
        summary["best_dev_f1"] = max(log.dev_f1) if log.dev_f1 else None
        summary["best_iteration"] = log.best_iteration
    _emit(summary)
    return EXIT_OK


def _cmd_segment(args) -> int:
    model = crf.load_model(args.model)
    words = formats.read_words(args.infile)
    segs = [crf.segment(model, word) for word in words]
    formats.write_segmentations(args.out, segs)
    _emit({"segmented": len(segs), "out": args.out})
    return EXIT_OK


def _cmd_train_lm(args) -> int:
    words = formats.read_words(args.infile)
    direction = charlm.FORWARD if args.direction == "fwd" else charlm.BACKWARD
    lm = charlm.train_lm(words, args.order, args.smoothing, direction)
    charlm.save_lm(lm, args.out)
    _emit({
        "words": len(words),
        "direction": lm.direction,
        "order": lm.order,
        "alphabet_size": len(lm.alphabet),
        "out": args.out,
    })
    return EXIT_OK


def _segment_word_entropy(fwd, bwd, word, config) -> SurfaceSegmentation:
    if len(word) < 2:
        return SurfaceSegmentation(word)
    profile = charlm.entropy_profile(fwd, bwd, word)
    return unsup.segment_with_entropy(profile, config)


def _cmd_unsup_segment(args) -> int:
    words = formats.read_words(args.infile)
    method = args.method
    if method.startswith("entropy-"):
        if not args.fwd_lm or not args.bwd_lm:
            print("error: entropy methods need --fwd-lm and --bwd-lm",
                  file=sys.stderr)
            return EXIT_USAGE
        if method == "entropy-const" and args.theta is None:
            print("error: entropy-const needs an explicit --theta "
                  f"(per-language starting points: {unsup.DEFAULT_THETAS})",
                  file=sys.stderr)
            return EXIT_USAGE
        fwd = charlm.load_lm(args.fwd_lm)
        bwd = charlm.load_lm(args.bwd_lm)
        objective = {"entropy-const": "constant", "entropy-inc": "increase",
                     "entropy-rel": "relative"}[method]
        config = unsup.EntropyConfig(objective, theta=args.theta or 0.0,
                                     alpha=args.alpha)
        segs = [_segment_word_entropy(fwd, bwd, w, config) for w in words]
    elif method == "random":
        import random as _random
        rng = _random.Random(args.seed)
        segs = [unsup.segment_random(w, args.p, rng) for w in words]
    elif method == "mdl":
        if args.mdl_model:
            model = unsup.load_mdl(args.mdl_model)
        else:
            train_words = (formats.read_words(args.train_words)
                           if args.train_words else words)
            model = unsup.mdl_train(train_words, seed=args.seed)
        if args.mdl_model_out:
            unsup.save_mdl(model, args.mdl_model_out)
        segs = [unsup.mdl_segment(model, w) for w in words]
    else:
        print(f"error: unknown method {method!r}", file=sys.stderr)
        return EXIT_USAGE
    formats.write_segmentations(args.out, segs)
    n_cuts = sum(len(s.boundaries) for s in segs)
    _emit({"method": method, "segmented": len(segs), "boundaries": n_cuts,
           "out": args.out})
    return EXIT_OK


def _parse_grid(spec: str) -> list[float]:
    try:
        lo_s, hi_s, step_s = spec.split(":")
        lo, hi, step = float(lo_s), float(hi_s), float(step_s)
    except ValueError:
        raise DataError(f"bad grid spec {spec!r}, expected lo:hi:step") from None
    if step <= 0 or hi < lo:
        raise DataError(f"bad grid spec {spec!r}")
    out = []
    value = lo
    while value <= hi + 1e-12:
        out.append(round(value, 10))
        value += step
    return out


def _cmd_tune_theta(args) -> int:
    fwd = charlm.load_lm(args.fwd_lm)
    bwd = charlm.load_lm(args.bwd_lm)
    gold = formats.read_segmentations(args.gold)
    grid = _parse_grid(args.grid)
    points = unsup.tune_theta(fwd, bwd, gold, grid)
    best_theta, best_f1 = max(points, key=lambda tf: (tf[1], -tf[0]))
    _emit({"best_theta": best_theta, "best_f1": best_f1,
           "points": [[t, f] for t, f in points]})
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    pred = formats.read_segmentations(args.pred)
    gold = formats.read_segmentations(args.gold)
    if args.metric == "morpheme":
        if len(pred) != len(gold):
            raise DataError(f"{len(pred)} predictions for {len(gold)} gold words")
        prf = evaluate.micro_prf(
            ((list(p.segments), list(g.segments))
             for p, g in zip(pred, gold)
             if _check_words(p, g)),
            overlap=args.overlap)
    else:
        if len(pred) != len(gold):
            raise DataError(f"{len(pred)} predictions for {len(gold)} gold words")
        prf = evaluate.boundary_prf(zip(pred, gold))
    summary = prf.as_dict()
    summary["metric"] = args.metric
    summary["overlap"] = args.overlap if args.metric == "morpheme" else None
    summary["words"] = len(gold)
    _emit(summary)
    return EXIT_OK


def _check_words(pred: SurfaceSegmentation, gold: SurfaceSegmentation) -> bool:
    if pred.word != gold.word:
        raise DataError(f"word mismatch: predicted {pred.word!r}, gold {gold.word!r}")
    return True


def _cmd_synth(args) -> int:
    config = synth.GrammarConfig(
        n_prefixes=args.n_prefixes, n_stems=args.n_stems,
        n_suffixes=args.n_suffixes, min_morphs=args.min_morphs,
        max_morphs=args.max_morphs, train_size=args.train_size,
        dev_size=args.dev_size, test_size=args.test_size)
    corpus_splits = synth.generate(config, seed=args.seed)
    os.makedirs(args.out_dir, exist_ok=True)
    paths = {}
    for name, segs in zip(("train", "dev", "test"), corpus_splits):
        path = os.path.join(args.out_dir, f"{name}.tsv")
        formats.write_segmentations(path, segs)
        paths[name] = path
    _emit({
        "train_size": len(corpus_splits.train),
        "dev_size": len(corpus_splits.dev),
        "test_size": len(corpus_splits.test),
        "paths": paths,
        "seed": args.seed,
    })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="morphseg",
                     description="Surface morphological segmentation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="clean and split an annotated corpus")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--dev-fraction", type=float, default=0.1)
    p.add_argument("--shuffle", action="store_true",
                   help="shuffle before carving off the dev set")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("derive-surface",
                       help="project canonical analyses onto surface segmentations")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_derive_surface)

    p = sub.add_parser("stats", help="alignment statistics for an annotated corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("train-crf", help="train the surface segmentation CRF")
    p.add_argument("--train", required=True)
    p.add_argument("--dev")
    p.add_argument("--l2", type=float, default=0.1)
    p.add_argument("--epsilon", type=float, default=1e-7)
    p.add_argument("--max-iter", type=int, default=160)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train_crf)

    p = sub.add_parser("segment", help="segment words with a trained CRF")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("train-lm", help="train a character n-gram language model")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--direction", choices=("fwd", "bwd"), default="fwd")
    p.add_argument("--smoothing", default="addk:0.1")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train_lm)

    p = sub.add_parser("unsup-segment", help="unsupervised segmentation")
    p.add_argument("--method", required=True,
                   choices=("entropy-const", "entropy-inc", "entropy-rel",
                            "random", "mdl"))
    p.add_argument("--fwd-lm")
    p.add_argument("--bwd-lm")
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--p", type=float, default=0.25)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--train-words",
                   help="MDL training corpus (defaults to the input words)")
    p.add_argument("--mdl-model", help="load an MDL lexicon instead of training")
    p.add_argument("--mdl-model-out", help="save the trained MDL lexicon")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_unsup_segment)

    p = sub.add_parser("tune-theta",
                       help="grid-search the constant-entropy threshold on a dev set")
    p.add_argument("--fwd-lm", required=True)
    p.add_argument("--bwd-lm", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--grid", default="0:10:0.5", help="lo:hi:step")
    p.set_defaults(func=_cmd_tune_theta)

    p = sub.add_parser("evaluate", help="score predictions against gold segmentations")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--metric", choices=("morpheme", "boundary"), default="morpheme")
    p.add_argument("--overlap", choices=("multiset", "set"), default="multiset")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("synth", help="generate a synthetic gold-segmented corpus")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--n-prefixes", type=int, default=20)
    p.add_argument("--n-stems", type=int, default=50)
    p.add_argument("--n-suffixes", type=int, default=20)
    p.add_argument("--min-morphs", type=int, default=2)
    p.add_argument("--max-morphs", type=int, default=5)
    p.add_argument("--train-size", type=int, default=2000)
    p.add_argument("--dev-size", type=int, default=200)
    p.add_argument("--test-size", type=int, default=500)
    p.set_defaults(func=_cmd_synth)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, AnnotationParseError, ModelFormatError,
            UnalignableError, MorphsegError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
