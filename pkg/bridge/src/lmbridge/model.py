"""Seq2seq model wrapper: turns any encoder-decoder LM into a constrained
next-token scorer over the label and unit vocabularies.

Extraction positions (see `Seq2SeqScorer`): the label probabilities are read
at the first decoder position after the prefix ``answer:``; the distance
probabilities at the first position after ``answer: positive``; the duration
probabilities after ``answer:``. Token ids resolve per model family: T5-style
tokenizers expose ``<extra_id_N>`` sentinels, which are preferred when
present; otherwise the first subtoken of the literal ``[extra_id_N]`` (or of
``positive``/``negative``) is used.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import torch

logger = logging.getLogger(__name__)

__all__ = ["Seq2SeqScorer", "load_model", "BridgeConfig", "first_verb_index"]

LABEL_PREFIX = "answer:"
DISTANCE_PREFIX = "answer: positive"
VERB_MARKER = "[V]"

_UNIT_COUNT = 7


@dataclass(frozen=True)
class BridgeConfig:
    model: str = "tiny"
    transport: str = "stdio"  # "stdio" or "host:port"
    device: str = "cpu"
    seed: int = 0


class Seq2SeqScorer:
    """Constrained scoring over one forward pass per query position."""

    def __init__(self, model, tokenizer, device: str = "cpu"):
        self.model = model.to(device).eval()
        self.tokenizer = tokenizer
        self.device = device
        self.positive_id = self._first_token_id("positive")
        self.negative_id = self._first_token_id("negative")
        self.unit_ids = [self._unit_token_id(k) for k in range(_UNIT_COUNT)]

    def _first_token_id(self, text: str) -> int:
        ids = self.tokenizer.encode(text, add_special_tokens=False)
        if not ids:
            raise ValueError(f"tokenizer produced no ids for {text!r}")
        return ids[0]

    def _unit_token_id(self, index: int) -> int:
        sentinel = f"<extra_id_{index}>"
        sentinel_id = self.tokenizer.convert_tokens_to_ids(sentinel)
        if sentinel_id is not None and sentinel_id >= 0:
            unk = getattr(self.tokenizer, "unk_token_id", None)
            if unk is None or sentinel_id != unk:
                return sentinel_id
        return self._first_token_id(f"[extra_id_{index}]")

    @torch.no_grad()
    def next_token_logits(self, input_text: str, decoder_prefix: str) -> torch.Tensor:
        """Logits over the vocabulary at the position following the prefix."""
        encoded = self.tokenizer(input_text, return_tensors="pt", truncation=True,
                                 max_length=512).to(self.device)
        prefix_ids = self.tokenizer.encode(decoder_prefix, add_special_tokens=False)
        start = self.model.config.decoder_start_token_id
        if start is None:
            start = self.model.config.pad_token_id or 0
        decoder_input_ids = torch.tensor([[start] + prefix_ids], device=self.device)
        output = self.model(
            input_ids=encoded["input_ids"],
            attention_mask=encoded.get("attention_mask"),
            decoder_input_ids=decoder_input_ids,
        )
        return output.logits[0, -1].float()

    def label_pair_probs(self, input_text: str) -> tuple[float, float]:
        """softmax over the positive/negative logits at the label position."""
        logits = self.next_token_logits(input_text, LABEL_PREFIX)
        pair = torch.softmax(logits[[self.positive_id, self.negative_id]], dim=0)
        return float(pair[0]), float(pair[1])

    def unit_probs(self, input_text: str, decoder_prefix: str) -> list[float]:
        """softmax over the 7 unit-token logits at the given position."""
        logits = self.next_token_logits(input_text, decoder_prefix)
        probs = torch.softmax(logits[self.unit_ids], dim=0)
        return [float(p) for p in probs]


# ---------------------------------------------------------------------------
# model loading

_TINY_WORDS = (
    "event: story: answer: starts ends before after positive negative "
    "[extra_id_0] [extra_id_1] [extra_id_2] [extra_id_3] [extra_id_4] "
    "[extra_id_5] [extra_id_6] [V] . , the a an and to of in on at he she "
    "it they we i you went go wrote write ate eat took take slept sleep "
    "walked walk cooked cook played play watched watch met meet was were "
    "is are park review food dinner house school work day night man woman "
    "dog cat tree river city team game song book letter friend family"
).split()


def _build_tiny(seed: int):
    """A genuinely loadable transformers seq2seq model with no downloads:
    a word-level tokenizer built in memory and a small randomly initialized
    encoder-decoder. Useful for protocol testing only."""
    from tokenizers import Tokenizer, models, pre_tokenizers
    from transformers import PreTrainedTokenizerFast, T5Config, T5ForConditionalGeneration

    vocab = {"<pad>": 0, "</s>": 1, "<unk>": 2}
    for word in _TINY_WORDS:
        vocab.setdefault(word, len(vocab))
    raw = Tokenizer(models.WordLevel(vocab, unk_token="<unk>"))
    raw.pre_tokenizer = pre_tokenizers.WhitespaceSplit()
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=raw, unk_token="<unk>", pad_token="<pad>", eos_token="</s>"
    )
    torch.manual_seed(seed)
    config = T5Config(
        vocab_size=len(vocab), d_model=32, d_kv=8, d_ff=64,
        num_layers=2, num_heads=2, dropout_rate=0.0,
        decoder_start_token_id=0, pad_token_id=0, eos_token_id=1,
    )
    return T5ForConditionalGeneration(config), tokenizer


def load_model(spec: str, device: str = "cpu", seed: int = 0) -> Seq2SeqScorer:
    """Build a scorer from a model spec: ``tiny`` (offline random-weight
    model) or ``hf:<name-or-path>`` (any transformers seq2seq checkpoint)."""
    if spec == "tiny":
        model, tokenizer = _build_tiny(seed)
    elif spec.startswith("hf:"):
        from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

        name = spec[len("hf:"):]
        tokenizer = AutoTokenizer.from_pretrained(name)
        model = AutoModelForSeq2SeqLM.from_pretrained(name)
    else:
        raise ValueError(f"unknown model spec {spec!r}; expected 'tiny' or 'hf:<name>'")
    return Seq2SeqScorer(model, tokenizer, device=device)


# ---------------------------------------------------------------------------
# duration-marker placement

_VERB_SUFFIXES = ("ed", "ing", "ate", "ize", "ise")
_COMMON_VERBS = frozenset(
    "is are was were be been being am go goes went gone make makes made "
    "take takes took taken get gets got run runs ran eat eats ate sleep "
    "sleeps slept walk walks write writes wrote read reads see sees saw "
    "say says said come comes came give gives gave find finds found think "
    "thinks thought play plays watch watches meet meets met work works "
    "live lives start starts end ends buy buys bought sell sells sold "
    "open opens close closes visit visits travel travels cook cooks "
    "drive drives drove sing sings sang swim swims swam fly flies flew".split()
)

_ING_NOUNS = frozenset("morning evening everything something anything nothing during".split())


@lru_cache(maxsize=4096)
def _looks_like_verb(token: str) -> bool:
    t = token.lower().strip(".,;:!?")
    if not t or any(c.isdigit() for c in t):
        return False
    if t in _COMMON_VERBS:
        return True
    if t in _ING_NOUNS:
        return False
    if t.endswith("ing") and len(t) >= 5:
        return True
    if t.endswith("ed") and len(t) >= 4:
        return True
    if t.endswith("s") and t[:-1] in _COMMON_VERBS:
        return True
    return False


def first_verb_index(tokens: list[str]) -> int:
    """Part-of-speech heuristic for the duration marker: index of the first
    verb-looking token, falling back to the first token."""
    for i, token in enumerate(tokens):
        if _looks_like_verb(token):
            return i
    return 0


def mark_first_verb(event: str) -> str:
    tokens = event.split()
    if not tokens:
        return VERB_MARKER
    index = first_verb_index(tokens)
    return " ".join(tokens[:index] + [VERB_MARKER] + tokens[index:])
