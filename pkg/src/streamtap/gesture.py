"""Stroke-to-command decoder for gesture control of streamer-side software.

Template matcher in the unistroke-recognizer style: the stroke is resampled
to a fixed point count along its arc length, centered on its centroid, and
uniformly scaled so the longest bounding-box side is 1; it is then compared
point-by-point against canonicalized templates. Built-ins are a right chevron
(next) and its horizontal mirror (previous). Rotation invariance is
deliberately not applied: ">" and "<" differ only by orientation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

RESAMPLE_POINTS = 32
ACCEPT_THRESHOLD = 0.7
DEGENERATE_ARC_LENGTH = 1e-6

COMMAND_NEXT = "next"
COMMAND_PREVIOUS = "previous"
COMMAND_UNRECOGNIZED = "unrecognized"


@dataclass(frozen=True)
class GestureCommand:
    command: str
    score: float


@dataclass(frozen=True)
class Template:
    name: str
    points: tuple
    command: str


def _as_array(points) -> np.ndarray:
    arr = np.asarray([(p.x, p.y) if hasattr(p, "x") else (p[0], p[1]) for p in points], dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] != 2:
        raise ValueError("a stroke needs at least two (x, y) points")
    return arr


def normalize_stroke(points) -> np.ndarray:
    """Canonicalize a stroke: resample, center on centroid, scale to unit box.

    Returns RESAMPLE_POINTS equidistant points along the stroke's arc length;
    degenerate strokes (arc length < 1e-6) collapse to the origin.
    """
    arr = _as_array(points)
    seg = np.linalg.norm(np.diff(arr, axis=0), axis=1)
    total = float(seg.sum())
    if total < DEGENERATE_ARC_LENGTH:
        return np.zeros((RESAMPLE_POINTS, 2))
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    targets = np.linspace(0.0, total, RESAMPLE_POINTS)
    resampled = np.column_stack(
        [np.interp(targets, cum, arr[:, 0]), np.interp(targets, cum, arr[:, 1])]
    )
    resampled -= resampled.mean(axis=0)
    span = resampled.max(axis=0) - resampled.min(axis=0)
    longest = float(span.max())
    if longest > 0.0:
        resampled /= longest
    return resampled


# Ideal chevrons in canonical space: apex at max |x|, drawn top to bottom.
_NEXT_IDEAL = ((0.0, -0.5), (0.5, 0.0), (0.0, 0.5))
_PREV_IDEAL = ((0.0, -0.5), (-0.5, 0.0), (0.0, 0.5))

BUILTIN_TEMPLATES = (
    Template("chevron_right", _NEXT_IDEAL, COMMAND_NEXT),
    Template("chevron_left", _PREV_IDEAL, COMMAND_PREVIOUS),
)

_canon_cache = {}


def _canonical(template: Template) -> np.ndarray:
    cached = _canon_cache.get(template)
    if cached is None:
        cached = normalize_stroke(template.points)
        _canon_cache[template] = cached
    return cached


def score_against(stroke_canon: np.ndarray, template: Template) -> float:
    """1 minus the mean point-to-point distance, clamped to [0, 1]."""
    d = float(np.linalg.norm(stroke_canon - _canonical(template), axis=1).mean())
    return min(1.0, max(0.0, 1.0 - d))


def classify(points, templates=BUILTIN_TEMPLATES, threshold=ACCEPT_THRESHOLD) -> GestureCommand:
    """Match a stroke against the template set.

    The best-scoring template wins if its score reaches the threshold;
    otherwise the command is unrecognized (carrying the best score seen).
    """
    canon = normalize_stroke(points)
    best_score = 0.0
    best_command = COMMAND_UNRECOGNIZED
    for t in templates:
        s = score_against(canon, t)
        if s > best_score:
            best_score = s
            best_command = t.command
    if best_score < threshold:
        return GestureCommand(COMMAND_UNRECOGNIZED, best_score)
    return GestureCommand(best_command, best_score)


def load_templates(path) -> tuple:
    """Load extra templates from JSON: [{name, points: [[x,y],...], command}]."""
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    templates = []
    for entry in raw:
        pts = tuple((float(x), float(y)) for x, y in entry["points"])
        if len(pts) < 2:
            raise ValueError(f"template {entry.get('name')!r} needs at least two points")
        templates.append(Template(entry["name"], pts, entry["command"]))
    return tuple(templates)
