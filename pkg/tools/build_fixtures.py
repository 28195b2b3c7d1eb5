"""Builds the bundled test fixtures: the annotated mini-corpus, the
entailment mini-dataset, and the dataset's expected zero-shot predictions.

The expected predictions and metrics were derived by hand from the baseline
predictor's documented rules (narrative-order location, one-hot hours
distance, duration lexicon with a days default) and are frozen here as data;
they are NOT produced by running the pipeline.

Run from the repository root:

    python3 tools/build_fixtures.py
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "tests" / "data"

sys.path.insert(0, str(ROOT / "src"))

from temprel.extract import load_corpus, parse_document_record  # noqa: E402


def find(tokens, phrase):
    """Token span of the first occurrence of a phrase inside a sentence."""
    needle = phrase.split()
    for start in range(len(tokens) - len(needle) + 1):
        if tokens[start:start + len(needle)] == needle:
            return [start, start + len(needle)]
    raise ValueError(f"{phrase!r} not found in {tokens!r}")


def sent(text, *frames):
    """frames: (verb_phrase, [(role, arg_phrase), ...])"""
    tokens = text.split()
    out_frames = []
    for verb_phrase, args in frames:
        out_frames.append({
            "verb": find(tokens, verb_phrase),
            "args": [{"role": role, "span": find(tokens, arg)} for role, arg in args],
        })
    return {"tokens": tokens, "frames": out_frames}


def doc(doc_id, *paragraphs):
    return {"doc_id": doc_id, "paragraphs": [list(p) for p in paragraphs]}


FIG4_S1 = sent(
    "I went to the park on January 2nd .",
    ("went", [("ARG0", "I"), ("ARG2", "to the park"), ("ARGM-TMP", "on January 2nd")]),
)
FIG4_S2 = sent(
    "I wrote a review on the 10th .",
    ("wrote", [("ARG0", "I"), ("ARG1", "a review"), ("ARGM-TMP", "on the 10th")]),
)

CORPUS = [
    # cross-sentence pair with an inherited month: (before, weeks)
    doc("d01", [FIG4_S1, FIG4_S2]),
    # canonical within-sentence extraction
    doc("d02", [sent(
        "But luckily , I purchased enough food before going to the park .",
        ("purchased", [("ARG0", "I"), ("ARG1", "enough food"),
                       ("ARGM-TMP", "before going to the park")]),
        ("going", [("ARG2", "to the park")]),
    )]),
    # "after" keyword
    doc("d03", [sent(
        "She smiled after winning the race .",
        ("smiled", [("ARG0", "She"), ("ARGM-TMP", "after winning the race")]),
        ("winning", [("ARG1", "the race")]),
    )]),
    # temporal argument with no internal verb: nothing extracted
    doc("d04", [sent(
        "He ate breakfast before noon .",
        ("ate", [("ARG0", "He"), ("ARG1", "breakfast"), ("ARGM-TMP", "before noon")]),
    )]),
    # two internal verbs, 5 vs 1 argument tokens: larger one wins
    doc("d05", [sent(
        "We danced all night after they met and we celebrated the big happy day .",
        ("danced", [("ARG0", "We"), ("ARG1", "all night"),
                    ("ARGM-TMP", "after they met and we celebrated the big happy day")]),
        ("met", [("ARG0", "they")]),
        ("celebrated", [("ARG0", "we"), ("ARG1", "the big happy day")]),
    )]),
    # equal argument counts: earliest verb wins
    doc("d06", [sent(
        "We danced after they met and Sam sang .",
        ("danced", [("ARG0", "We"), ("ARGM-TMP", "after they met and Sam sang")]),
        ("met", [("ARG0", "they")]),
        ("sang", [("ARG0", "Sam")]),
    )]),
    # three year-dated verbs: two adjacent pairs, both years apart
    doc("d07", [
        sent("The mill opened in 1990 .",
             ("opened", [("ARG0", "The mill"), ("ARGM-TMP", "in 1990")])),
        sent("It burned down in 1995 .",
             ("burned", [("ARG0", "It"), ("ARGM-TMP", "in 1995")])),
        sent("The town rebuilt it in 2001 .",
             ("rebuilt", [("ARG0", "The town"), ("ARG1", "it"), ("ARGM-TMP", "in 2001")])),
    ]),
    # clock times: hours apart
    doc("d08", [
        sent("The crew gathered at 9 am .",
             ("gathered", [("ARG0", "The crew"), ("ARGM-TMP", "at 9 am")])),
        sent("They launched the boat at 3 pm .",
             ("launched", [("ARG0", "They"), ("ARG1", "the boat"), ("ARGM-TMP", "at 3 pm")])),
    ]),
    # explicit year meets a year-less mention: not comparable, no pair
    doc("d09", [
        sent("The fair started on January 2nd .",
             ("started", [("ARG0", "The fair"), ("ARGM-TMP", "on January 2nd")])),
        sent("It closed in March 1995 .",
             ("closed", [("ARG0", "It"), ("ARGM-TMP", "in March 1995")])),
    ]),
    # identical dates: tie reported as (before, <=minutes)
    doc("d10", [
        sent("The parade began on January 5th .",
             ("began", [("ARG0", "The parade"), ("ARGM-TMP", "on January 5th")])),
        sent("The market opened on January 5th .",
             ("opened", [("ARG0", "The market"), ("ARGM-TMP", "on January 5th")])),
    ]),
    # two days apart
    doc("d11", [
        sent("Workers arrived on January 2nd .",
             ("arrived", [("ARG0", "Workers"), ("ARGM-TMP", "on January 2nd")])),
        sent("They finished the roof on January 4th .",
             ("finished", [("ARG0", "They"), ("ARG1", "the roof"),
                           ("ARGM-TMP", "on January 4th")])),
    ]),
    # ~ten weeks apart: months bucket
    doc("d12", [
        sent("Rehearsals started on January 2nd .",
             ("started", [("ARG0", "Rehearsals"), ("ARGM-TMP", "on January 2nd")])),
        sent("The play premiered on March 15th .",
             ("premiered", [("ARG0", "The play"), ("ARGM-TMP", "on March 15th")])),
    ]),
    # frames but nothing temporal
    doc("d13", [sent(
        "The cat chased the mouse .",
        ("chased", [("ARG0", "The cat"), ("ARG1", "the mouse")]),
    )]),
    # one within pair and one cross pair in separate paragraphs
    doc("d14",
        [sent(
            "He napped before eating his lunch .",
            ("napped", [("ARG0", "He"), ("ARGM-TMP", "before eating his lunch")]),
            ("eating", [("ARG1", "his lunch")]),
        )],
        [sent("The shop opened on June 1st .",
              ("opened", [("ARG0", "The shop"), ("ARGM-TMP", "on June 1st")])),
         sent("A critic visited on the 3rd .",
              ("visited", [("ARG0", "A critic"), ("ARGM-TMP", "on the 3rd")]))],
    ),
    # within pair where the internal verb carries an ARG2
    doc("d15", [sent(
        "They packed the van before driving to the coast .",
        ("packed", [("ARG0", "They"), ("ARG1", "the van"),
                    ("ARGM-TMP", "before driving to the coast")]),
        ("driving", [("ARG2", "to the coast")]),
    )]),
    # narrative order disagrees with clock order: relation comes out `after`
    doc("d16", [
        sent("The rescue ended at 3 pm .",
             ("ended", [("ARG0", "The rescue"), ("ARGM-TMP", "at 3 pm")])),
        sent("The alarm sounded at 9 am .",
             ("sounded", [("ARG0", "The alarm"), ("ARGM-TMP", "at 9 am")])),
    ]),
    # two decades apart
    doc("d17", [
        sent("The bridge opened in 1980 .",
             ("opened", [("ARG0", "The bridge"), ("ARGM-TMP", "in 1980")])),
        sent("Engineers replaced it in 2001 .",
             ("replaced", [("ARG0", "Engineers"), ("ARG1", "it"), ("ARGM-TMP", "in 2001")])),
    ]),
    # two paragraphs, one cross pair each
    doc("d18",
        [sent("Snow fell on January 20th .",
              ("fell", [("ARG0", "Snow"), ("ARGM-TMP", "on January 20th")])),
         sent("Plows cleared the roads on the 21st .",
              ("cleared", [("ARG0", "Plows"), ("ARG1", "the roads"),
                           ("ARGM-TMP", "on the 21st")]))],
        [sent("The river froze on February 1st .",
              ("froze", [("ARG0", "The river"), ("ARGM-TMP", "on February 1st")])),
         sent("Skaters arrived on February 8th .",
              ("arrived", [("ARG0", "Skaters"), ("ARGM-TMP", "on February 8th")]))],
    ),
    # two within pairs in one paragraph
    doc("d19", [
        sent("She stretched before running the marathon .",
             ("stretched", [("ARG0", "She"), ("ARGM-TMP", "before running the marathon")]),
             ("running", [("ARG1", "the marathon")])),
        sent("He showered after finishing his shift .",
             ("showered", [("ARG0", "He"), ("ARGM-TMP", "after finishing his shift")]),
             ("finishing", [("ARG1", "his shift")])),
    ]),
    # capitalized keyword still heads the argument
    doc("d20", [sent(
        "He waved goodbye Before boarding the train .",
        ("waved", [("ARG0", "He"), ("ARG1", "goodbye"),
                   ("ARGM-TMP", "Before boarding the train")]),
        ("boarding", [("ARG1", "the train")]),
    )]),
]


# ---------------------------------------------------------------------------
# entailment mini-dataset: 10 stories x (2 start + 2 end) hypotheses.
# `expected` is the hand-derived zero-shot baseline prediction for each
# instance; `gold` is the story truth.

def h(event_a, comparator, relation, event_b):
    return f"{event_a} {comparator} {relation} {event_b}."


STORIES = {
    "s01": "Mara sneezed near the window. Later Mara cooked a pumpkin stew. Finally Mara napped on the sofa.",
    "s02": "Devon knocked on the oak door. Devon waited patiently outside. Devon greeted the plumber warmly.",
    "s03": "Priya boarded the red tram. Priya traveled across the valley. Priya reached the museum entrance.",
    "s04": "Theo studied algebra every night. Theo passed the difficult exam. Theo framed his shiny diploma.",
    "s05": "Noor coughed during the lecture. Noor walked to the library. Noor borrowed a thick atlas.",
    "s06": "Iris lived in a quiet cottage. Iris painted the garden fence. Iris sold her charming home.",
    "s07": "Omar dropped his phone in the river. Omar fished it out quickly. Omar dried it with a towel.",
    "s08": "Lena reigned over the island kingdom. Lena built a marble lighthouse. Lena hosted a grand festival.",
    "s09": "Felix slept through the storm. Felix repaired the broken shutter. Felix brewed some mint tea.",
    "s10": "Ruth laughed at the silly pun. Ruth washed the dusty blinds. Ruth visited her cousin Dale.",
}

E, C = "entailment", "contradiction"

# (story, hypothesis, gold, expected zero-shot prediction)
INSTANCES = [
    ("s01", h("Mara sneezed", "starts", "before", "Mara cooked a pumpkin stew"), E, E),
    ("s01", h("Mara napped on the sofa", "starts", "before", "Mara sneezed"), C, C),
    ("s01", h("Mara sneezed", "ends", "before", "Mara cooked a pumpkin stew"), E, E),
    ("s01", h("Mara cooked a pumpkin stew", "ends", "before", "Mara napped on the sofa"), E, C),

    ("s02", h("Devon knocked on the oak door", "starts", "before", "Devon greeted the plumber"), E, E),
    ("s02", h("Devon greeted the plumber", "starts", "after", "Devon waited patiently"), E, E),
    ("s02", h("Devon knocked on the oak door", "ends", "before", "Devon waited patiently"), E, E),
    ("s02", h("Devon waited patiently", "ends", "after", "Devon greeted the plumber"), C, E),

    ("s03", h("Priya boarded the red tram", "starts", "before", "Priya reached the museum entrance"), E, E),
    ("s03", h("Priya boarded the red tram", "starts", "after", "Priya traveled across the valley"), C, C),
    ("s03", h("Priya boarded the red tram", "ends", "before", "Priya reached the museum entrance"), E, C),
    ("s03", h("Priya traveled across the valley", "ends", "after", "Priya boarded the red tram"), E, E),

    ("s04", h("Theo studied algebra", "starts", "before", "Theo passed the difficult exam"), E, E),
    ("s04", h("Theo framed his shiny diploma", "starts", "after", "Theo studied algebra"), E, E),
    ("s04", h("Theo studied algebra", "ends", "before", "Theo framed his shiny diploma"), E, C),
    ("s04", h("Theo passed the difficult exam", "ends", "after", "Theo studied algebra"), E, E),

    ("s05", h("Noor coughed", "starts", "before", "Noor walked to the library"), E, E),
    ("s05", h("Noor borrowed a thick atlas", "starts", "after", "Noor coughed"), E, E),
    ("s05", h("Noor coughed", "ends", "before", "Noor walked to the library"), E, E),
    ("s05", h("Noor walked to the library", "ends", "after", "Noor coughed"), E, E),

    ("s06", h("Iris lived in a quiet cottage", "starts", "before", "Iris sold her charming home"), E, E),
    ("s06", h("Iris sold her charming home", "starts", "before", "Iris painted the garden fence"), C, C),
    ("s06", h("Iris lived in a quiet cottage", "ends", "after", "Iris painted the garden fence"), E, E),
    ("s06", h("Iris painted the garden fence", "ends", "after", "Iris sold her charming home"), C, E),

    ("s07", h("panicked", "starts", "before", "Omar fished it out"), E, E),
    ("s07", h("panicked", "starts", "after", "Omar dropped his phone"), E, C),
    ("s07", h("gasped in shock", "ends", "before", "Omar fished it out"), E, E),
    ("s07", h("Omar dropped his phone", "ends", "after", "Omar dried it"), C, E),

    ("s08", h("Lena reigned over the island kingdom", "starts", "before", "Lena built a marble lighthouse"), E, E),
    ("s08", h("Lena hosted a grand festival", "starts", "after", "Lena built a marble lighthouse"), E, E),
    ("s08", h("Lena reigned over the island kingdom", "ends", "after", "Lena hosted a grand festival"), E, E),
    ("s08", h("Lena built a marble lighthouse", "ends", "before", "Lena hosted a grand festival"), E, C),

    ("s09", h("Felix slept through the storm", "starts", "before", "Felix brewed some mint tea"), E, E),
    ("s09", h("Felix repaired the broken shutter", "starts", "before", "Felix slept through the storm"), C, C),
    ("s09", h("Felix slept through the storm", "ends", "before", "Felix repaired the broken shutter"), E, C),
    ("s09", h("Felix repaired the broken shutter", "ends", "after", "Felix slept through the storm"), E, E),

    ("s10", h("Ruth laughed at the silly pun", "starts", "before", "Ruth washed the dusty blinds"), E, E),
    ("s10", h("Ruth visited her cousin Dale", "starts", "after", "Ruth laughed at the silly pun"), E, E),
    ("s10", h("Ruth laughed at the silly pun", "ends", "before", "Ruth washed the dusty blinds"), E, E),
    ("s10", h("Ruth washed the dusty blinds", "ends", "after", "Ruth laughed at the silly pun"), E, E),
]

# hand tally over INSTANCES: 19/20 start and 12/20 end predictions correct,
# stories s05 and s10 fully correct
EXPECTED_METRICS = {
    "start_accuracy": 0.95,
    "end_accuracy": 0.6,
    "all_accuracy": 0.775,
    "story_exact_match": 0.2,
    "counts": {
        "start": {"correct": 19, "total": 20},
        "end": {"correct": 12, "total": 20},
        "stories": {"all_correct": 2, "total": 10},
    },
}


def main():
    DATA.mkdir(parents=True, exist_ok=True)

    corpus_path = DATA / "mini_corpus.jsonl"
    with open(corpus_path, "w", encoding="utf-8") as fh:
        for record in CORPUS:
            parse_document_record(record)  # validate against the schema
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    assert len(list(load_corpus(corpus_path, strict=True))) == len(CORPUS)
    print(f"wrote {corpus_path} ({len(CORPUS)} documents)")

    dataset_path = DATA / "mini_dataset.jsonl"
    expected_path = DATA / "mini_dataset_expected.json"
    with open(dataset_path, "w", encoding="utf-8") as fh:
        for story_id, hypothesis, gold, _ in INSTANCES:
            fh.write(json.dumps({
                "story_id": story_id,
                "premise": STORIES[story_id],
                "hypothesis": hypothesis,
                "label": gold,
            }, ensure_ascii=False) + "\n")
    with open(expected_path, "w", encoding="utf-8") as fh:
        json.dump({
            "predictions": [expected for _, _, _, expected in INSTANCES],
            "metrics": EXPECTED_METRICS,
        }, fh, indent=2)
        fh.write("\n")
    print(f"wrote {dataset_path} ({len(INSTANCES)} instances)")
    print(f"wrote {expected_path}")


if __name__ == "__main__":
    main()
