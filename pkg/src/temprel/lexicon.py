"""Bundled lexical resources: the closed verb list used by the fallback
annotator and the head-verb duration table used by the baseline predictor.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Iterator, Optional, Sequence

from .core import TemporalUnit

# -ing tokens that are nouns/prepositions far more often than verbs
_ING_STOPLIST = frozenset(
    "morning evening everything something anything nothing during king ring "
    "spring string ceiling wedding sibling darling duckling dumpling".split()
)


@lru_cache(maxsize=None)
def _load_json(name: str):
    with resources.files("temprel.data").joinpath(name).open(encoding="utf-8") as fh:
        return json.load(fh)


@lru_cache(maxsize=None)
def verb_forms() -> frozenset[str]:
    return frozenset(_load_json("verb_lexicon.json"))


@lru_cache(maxsize=None)
def duration_table() -> dict[str, TemporalUnit]:
    raw = _load_json("duration_lexicon.json")
    return {verb: TemporalUnit.from_name(unit) for verb, unit in raw.items()}


def lemma_candidates(token: str) -> Iterator[str]:
    """Naive inflection stripping, most specific first. Yields the token itself
    before any stripped form."""
    t = token.lower()
    yield t
    if t.endswith("ies") and len(t) > 4:
        yield t[:-3] + "y"
    if t.endswith("es") and len(t) > 3:
        yield t[:-2]
    if t.endswith("s") and len(t) > 2:
        yield t[:-1]
    if t.endswith("ed") and len(t) > 3:
        yield t[:-2]
        yield t[:-1]
    if t.endswith("ing") and len(t) > 4:
        yield t[:-3]
        yield t[:-3] + "e"


def is_verb_token(token: str) -> bool:
    """Closed-lexicon check with -ed/-ing suffix fallback."""
    t = token.lower()
    if any(c.isdigit() for c in t):
        return False
    if any(form in verb_forms() for form in lemma_candidates(t)):
        return True
    if t.endswith("ed") and len(t) >= 4:
        return True
    if t.endswith("ing") and len(t) >= 5 and t not in _ING_STOPLIST:
        return True
    return False


def duration_of_verb(token: str) -> Optional[TemporalUnit]:
    table = duration_table()
    for form in lemma_candidates(token):
        if form in table:
            return table[form]
    return None


def find_verb_index(tokens: Sequence[str]) -> int:
    """Index of the first verb-like token, or 0 when none is found."""
    for i, tok in enumerate(tokens):
        if is_verb_token(tok):
            return i
    return 0
