"""Multi-view instruction datasets, answer grammar, metrics and backend routing."""

import json

from . import _core
from ._core import (
    PlanError,
    UnrecognizedTemplate,
    around_azimuths,
    caption_bleu,
    caption_similarity,
    format_answer,
    normalize_azimuth,
    route,
)

__all__ = [
    "PlanError",
    "UnrecognizedTemplate",
    "around_azimuths",
    "build_plan",
    "caption_bleu",
    "caption_similarity",
    "evaluate",
    "format_answer",
    "generate_dataset",
    "normalize_azimuth",
    "oracle_answers",
    "corrupt_answers",
    "parse_answer",
    "parse_instruction",
    "route",
]

TASKS = ("I-around", "I-specific", "T-around", "T-specific", "I-degree")


def parse_answer(text):
    """Returns the answer as a dict; raises ValueError with the error kind and byte offsets."""
    result = json.loads(_core.parse_answer(text))
    if "error" in result:
        err = result["error"]
        raise ValueError(f"{err['kind']} at bytes [{err['offset']}, {err['end']})", err)
    return result["answer"]


def parse_instruction(text):
    return json.loads(_core.parse_instruction(text))


def generate_dataset(count=1000, seed=42, weights=None):
    """weights maps short task names to relative frequencies; unnamed tasks get 0."""
    w = [] if weights is None else [float(weights.get(t, 0.0)) for t in TASKS]
    return [json.loads(line) for line in _core.generate_dataset(count, seed, w)]


def _lines(records):
    return [json.dumps(r) for r in records]


def oracle_answers(records):
    return corrupt_answers(records)


def corrupt_answers(records, p_task_flip=0.0, p_azimuth_jitter=0.0, jitter_deg=0.0, p_caption_shuffle=0.0, seed=0):
    out = _core.answer(_lines(records), p_task_flip, p_azimuth_jitter, jitter_deg, p_caption_shuffle, seed)
    return [json.loads(line) for line in out]


def evaluate(records, responses, tolerance=0.5):
    """Returns (report dict, rendered table)."""
    report, table = _core.evaluate(_lines(records), _lines(responses), tolerance)
    return json.loads(report), table


def build_plan(answer_text, plan_id="", image_ref=None, caption=None, elevation=0.0, radius=1.5, resolution=256):
    return json.loads(_core.build_plan(answer_text, plan_id, image_ref, caption, elevation, radius, resolution))
