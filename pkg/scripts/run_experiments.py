#!/usr/bin/env python3
"""Train/evaluate sweep over the bundled corpora.

Rows: training-set evaluation, transfer to the multiplier-phrase file,
5-fold cross-validation, and one CV row per ablation. Everything is
seeded, so reruns print the same table. Run from the repository root.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from eqparse.corpus import load_corpus
from eqparse.evaluation import Metrics, cross_validate, evaluate
from eqparse.pipeline import PipelineConfig, train_bundle

COLUMNS = ("equation", "eq+grounding", "relevance", "variables", "tree|gold")


def row_values(m: Metrics) -> tuple[float, ...]:
    return (m.equation_accuracy, m.equation_grounding_accuracy,
            m.relevance_accuracy, m.variable_accuracy,
            m.tree_accuracy_gold_pipeline)


def print_table(rows: list[tuple[str, Metrics]]) -> None:
    label_width = max(len(label) for label, _ in rows)
    header = " ".join(f"{c:>13}" for c in COLUMNS)
    print(f"{'':<{label_width}} {header}   n")
    for label, metrics in rows:
        cells = " ".join(f"{v:>13.3f}" for v in row_values(metrics))
        print(f"{label:<{label_width}} {cells}  {metrics.count:>2}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data-dir", type=Path, default=Path("data"))
    parser.add_argument("--folds", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    synthetic = load_corpus(args.data_dir / "synthetic_corpus.jsonl")
    multiplier = load_corpus(args.data_dir / "multiplier_pairs.jsonl")
    base = PipelineConfig(seed=args.seed)

    bundle = train_bundle(synthetic, base)
    rows = [
        ("train (synthetic)", evaluate(bundle, synthetic)),
        ("transfer (multiplier)", evaluate(bundle, multiplier)),
        ("cv", cross_validate(synthetic, args.folds, args.seed, base)),
    ]

    ablations = [
        ("cv, no lexicon", PipelineConfig(seed=args.seed, use_lexicon=False)),
        ("cv, lexicon as features",
         PipelineConfig(seed=args.seed, lexicon_as_features=True)),
        ("cv, conform syntactic",
         PipelineConfig(seed=args.seed, conform_syntactic=True)),
    ]
    for label, config in ablations:
        rows.append((label, cross_validate(synthetic, args.folds,
                                           args.seed, config)))

    print_table(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
