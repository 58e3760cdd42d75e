"""Three-stage parsing pipeline: relevance, variables, equation tree.

A ModelBundle holds one trained linear model per stage plus the shared
configuration, and composes them into a full sentence -> equation parse.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, asdict
from pathlib import Path

from .core import (
    EquationTree,
    QuantityTrigger,
    Span,
    SymExpr,
    VariableTrigger,
    expr,
    format_tree,
    parse_equation,
    sort_triggers,
)
from .corpus import AnnotatedSentence
from .evaluation import expr_constants, gold_tree_instance
from .learning import (
    LinearModel,
    SupersetExample,
    TrainConfig,
    model_from_text,
    model_to_text,
    train_structured,
    train_superset,
)
from .quantities import sentence_quantities
from .relevance import (
    RelevanceAssignment,
    derive_gold_relevance,
    hamming_cost,
    predict_relevance,
    relevance_decoder,
    relevance_features,
)
from .treeparse import CkyDecoder
from .variables import (
    candidate_cost,
    candidate_from_grounding,
    predict_variable_triggers,
    variable_decoder,
    variable_features,
)


@dataclass(frozen=True)
class PipelineConfig:
    window: int = 3
    epochs: int = 5
    learning_rate: float = 0.1
    seed: int = 0
    outer_iters: int = 10
    use_lexicon: bool = True
    lexicon_as_features: bool = False
    conform_syntactic: bool = False

    def train_config(self) -> TrainConfig:
        return TrainConfig(epochs=self.epochs, learning_rate=self.learning_rate,
                           seed=self.seed, max_outer_iters=self.outer_iters)


@dataclass(frozen=True)
class ParseResult:
    """Everything a full parse produced, intermediate stages included."""

    equation: str
    expr: SymExpr
    tree: EquationTree
    quantities: tuple[QuantityTrigger, ...]
    relevance: RelevanceAssignment
    variable_triggers: tuple[VariableTrigger, ...]

    def groundings(self) -> dict[str, Span]:
        """First mention span per variable label."""
        out: dict[str, Span] = {}
        for t in self.variable_triggers:
            out.setdefault(t.label, t.span)
        return out

    def to_json(self, sentence: AnnotatedSentence) -> dict:
        text = sentence.text
        return {
            "equation": self.equation,
            "groundings": {label: {"span": [span.start, span.end],
                                   "text": span.text(text)}
                           for label, span in self.groundings().items()},
            "debug": {
                "quantities": [{"value": str(q.value),
                                "span": [q.span.start, q.span.end],
                                "relevant": rel}
                               for q, rel in zip(self.quantities,
                                                 self.relevance)],
                "variables": [{"label": t.label,
                               "span": [t.span.start, t.span.end],
                               "text": t.span.text(text)}
                              for t in self.variable_triggers],
            },
        }


BUNDLE_HEADER = "eqparse-bundle v1"
_SECTIONS = ("[relevance]", "[variables]", "[tree]")


@dataclass
class ModelBundle:
    relevance_model: LinearModel
    variable_model: LinearModel
    tree_model: LinearModel
    config: PipelineConfig

    def __post_init__(self):
        self._decoder = CkyDecoder(
            window=self.config.window,
            use_lexicon=self.config.use_lexicon,
            lexicon_as_features=self.config.lexicon_as_features,
            conform_syntactic=self.config.conform_syntactic)

    # prediction ---------------------------------------------------------

    def predict_relevance(self, sentence: AnnotatedSentence,
                          quantities) -> RelevanceAssignment:
        return predict_relevance(self.relevance_model, sentence, quantities,
                                 self.config.window)

    def predict_variables(self, sentence: AnnotatedSentence):
        return predict_variable_triggers(self.variable_model, sentence,
                                         self.config.window)

    def decode_tree(self, sentence: AnnotatedSentence, triggers) -> EquationTree:
        return self._decoder.decode((sentence, tuple(triggers)),
                                    self.tree_model.weights)

    def parse(self, sentence: AnnotatedSentence) -> ParseResult:
        """Full pipeline. Raises ValueError when the sentence yields fewer
        than two triggers or has no NP chunks to ground a variable in."""
        quantities = sentence_quantities(sentence)
        relevance = self.predict_relevance(sentence, quantities)
        variables = self.predict_variables(sentence)
        kept = [q for q, bit in zip(quantities, relevance) if bit]
        triggers = tuple(sort_triggers(kept + list(variables)))
        tree = self.decode_tree(sentence, triggers)
        return ParseResult(
            equation=format_tree(tree),
            expr=expr(tree),
            tree=tree,
            quantities=tuple(quantities),
            relevance=relevance,
            variable_triggers=tuple(variables),
        )

    # serialization ------------------------------------------------------

    def to_text(self) -> str:
        parts = [BUNDLE_HEADER,
                 json.dumps(asdict(self.config), sort_keys=True)]
        for marker, model in zip(_SECTIONS, (self.relevance_model,
                                             self.variable_model,
                                             self.tree_model)):
            parts.append(marker)
            parts.append(model_to_text(model).rstrip("\n"))
        return "\n".join(parts) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ModelBundle":
        lines = text.splitlines()
        if not lines or lines[0] != BUNDLE_HEADER:
            raise ValueError("not a model bundle (bad header)")
        config = PipelineConfig(**json.loads(lines[1]))
        cuts = [i for i, line in enumerate(lines) if line in _SECTIONS]
        if [lines[i] for i in cuts] != list(_SECTIONS):
            raise ValueError("model bundle is missing a section")
        cuts.append(len(lines))
        models = []
        for a, b in zip(cuts, cuts[1:]):
            models.append(model_from_text("\n".join(lines[a + 1:b]) + "\n"))
        return cls(*models, config)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "ModelBundle":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def _relevance_instances(examples):
    out = []
    for ex in examples:
        quantities = tuple(sentence_quantities(ex.sentence))
        constants = expr_constants(parse_equation(ex.equation))
        gold = derive_gold_relevance(quantities, constants)
        out.append(((ex.sentence, quantities), gold))
    return out


def _variable_instances(examples):
    out = []
    for ex in examples:
        candidates = []
        for grounding in ex.groundings:
            candidate = candidate_from_grounding(grounding)
            if candidate not in candidates:
                candidates.append(candidate)
        if candidates:
            out.append(SupersetExample(ex.sentence, tuple(candidates)))
    return out


def _tree_instances(examples, decoder: CkyDecoder, warn=True):
    out = []
    for ex in examples:
        instance = gold_tree_instance(ex)
        if instance is not None:
            sentence, triggers, tree = instance
            if decoder.contains((sentence, triggers), tree):
                out.append(((sentence, triggers), tree))
                continue
        if warn:
            print(f"skipping unreachable gold tree: {ex.sentence.text[:60]!r}",
                  file=sys.stderr)
    return out


def train_bundle(examples, config: PipelineConfig = PipelineConfig()) -> ModelBundle:
    """Train all three stages on an annotated corpus.

    Examples whose gold tree is not reachable by the decoder (no projective
    arrangement, or pruned by the lexicon) are left out of the tree stage
    with a note on stderr; they still train the other stages.
    """
    if not examples:
        raise ValueError("empty training corpus")
    tcfg = config.train_config()
    window = config.window

    rel_model = train_structured(
        _relevance_instances(examples), relevance_decoder(window),
        lambda x, y: relevance_features(x[0], x[1], y, window),
        tcfg, cost_fn=hamming_cost)

    var_model = train_superset(
        _variable_instances(examples), variable_decoder(window),
        lambda sentence, cand: variable_features(sentence, cand, window),
        tcfg, cost_fn=candidate_cost)

    decoder = CkyDecoder(window=window, use_lexicon=config.use_lexicon,
                         lexicon_as_features=config.lexicon_as_features,
                         conform_syntactic=config.conform_syntactic)
    tree_model = train_structured(
        _tree_instances(examples, decoder), decoder, decoder.features, tcfg)

    return ModelBundle(rel_model, var_model, tree_model, config)
