"""Command line front end.

Subcommands: train, parse, eval, cv. All results go to stdout as JSON;
diagnostics go to stderr. Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import Span
from .corpus import AnnotatedSentence, load_corpus, sentence_from_json
from .evaluation import cross_validate, evaluate
from .pipeline import ModelBundle, PipelineConfig, train_bundle


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--window", type=int, default=3,
                        help="token window for neighborhood features")
    parser.add_argument("--epochs", type=int, default=5)
    parser.add_argument("--learning-rate", type=float, default=0.1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--outer-iters", type=int, default=10,
                        help="outer loops for variable-stage training")
    parser.add_argument("--no-lexicon", action="store_true",
                        help="ablation: drop the operator lexicon")
    parser.add_argument("--lexicon-as-features", action="store_true",
                        help="ablation: lexicon matches become features, not constraints")
    parser.add_argument("--conform-syntactic", action="store_true",
                        help="ablation: keep tree nodes from crossing NP chunks")


def _config_from_args(args) -> PipelineConfig:
    return PipelineConfig(
        window=args.window,
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        seed=args.seed,
        outer_iters=args.outer_iters,
        use_lexicon=not args.no_lexicon,
        lexicon_as_features=args.lexicon_as_features,
        conform_syntactic=args.conform_syntactic,
    )


def _tokenize(text: str) -> list[str]:
    """Whitespace tokenization with edge punctuation peeled into its own
    tokens, so terminal periods do not mask digit tokens."""
    out = []
    for chunk in text.split():
        lead = []
        while chunk and not chunk[0].isalnum():
            lead.append(chunk[0])
            chunk = chunk[1:]
        tail = []
        while chunk and not chunk[-1].isalnum():
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        out.extend(lead)
        if chunk:
            out.append(chunk)
        out.extend(reversed(tail))
    return out


def _parse_np_span(raw: str) -> Span:
    try:
        start, end = raw.split(":")
        return Span(int(start), int(end))
    except (ValueError, TypeError) as e:
        raise ValueError(f"bad --np-span {raw!r}, expected START:END") from e


def _sentence_from_args(args) -> AnnotatedSentence:
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as e:
                raise ValueError(f"{args.input}: not valid JSON ({e})") from e
        try:
            return sentence_from_json(obj)
        except (KeyError, TypeError) as e:
            raise ValueError(f"{args.input}: malformed sentence object ({e})") from e
    tokens = tuple(_tokenize(args.text))
    return AnnotatedSentence(
        text=args.text,
        tokens=tokens,
        pos=("UNK",) * len(tokens),
        np_chunks=tuple(_parse_np_span(raw) for raw in args.np_span or ()),
    )


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_train(args) -> int:
    examples = load_corpus(args.corpus)
    if len(examples) < 2:
        raise ValueError("corpus too small: need at least 2 examples")
    bundle = train_bundle(examples, _config_from_args(args))
    bundle.save(args.model)
    _emit({"examples": len(examples), "model": args.model})
    return 0


def cmd_parse(args) -> int:
    bundle = ModelBundle.load(args.model)
    sentence = _sentence_from_args(args)
    if not sentence.np_chunks:
        raise ValueError("np_chunks missing: supply NP spans in the input "
                         "JSON or via --np-span")
    result = bundle.parse(sentence)
    _emit(result.to_json(sentence))
    return 0


def cmd_eval(args) -> int:
    bundle = ModelBundle.load(args.model)
    examples = load_corpus(args.corpus)
    _emit(evaluate(bundle, examples).to_json())
    return 0


def cmd_cv(args) -> int:
    examples = load_corpus(args.corpus)
    metrics = cross_validate(examples, args.folds, args.seed,
                             _config_from_args(args))
    _emit(metrics.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqparse",
        description="Parse a sentence into an equation with grounded variables.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train a model bundle on a corpus")
    p_train.add_argument("--corpus", required=True)
    p_train.add_argument("--model", required=True, help="output bundle path")
    _add_config_flags(p_train)
    p_train.set_defaults(func=cmd_train)

    p_parse = sub.add_parser("parse", help="parse one sentence")
    p_parse.add_argument("--model", required=True)
    src = p_parse.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="JSON file with text/tokens/pos/np_chunks")
    src.add_argument("--text", help="raw sentence; tokens split on whitespace, "
                                    "quantities detected, POS tagged UNK")
    p_parse.add_argument("--np-span", action="append", metavar="START:END",
                         help="NP chunk span for --text mode (repeatable)")
    p_parse.set_defaults(func=cmd_parse)

    p_eval = sub.add_parser("eval", help="score a bundle on a corpus")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--corpus", required=True)
    p_eval.set_defaults(func=cmd_eval)

    p_cv = sub.add_parser("cv", help="k-fold cross-validation")
    p_cv.add_argument("--corpus", required=True)
    p_cv.add_argument("--folds", type=int, default=5)
    _add_config_flags(p_cv)
    p_cv.set_defaults(func=cmd_cv)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage problems; 0 stays 0 (e.g. --help)
        return 0 if e.code == 0 else 1
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
