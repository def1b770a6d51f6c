"""Anomaly detection over corpora of Scratch 3 student solutions."""

import json

from ._core import (
    EmptyCorpus,
    Error,
    MalformedProject,
    NoScripts,
    UnreadableFile,
    __version__,
    mine_patterns,
    run_cli,
    script_properties,
)
from . import _core


def detect(input, **options):
    """Run detection on a corpus directory and return the report as a dict."""
    return json.loads(_core.detect_json(str(input), **options))


def detect_text(input, **options):
    """Same as detect() but returns the human-readable report."""
    return _core.detect_json(str(input), text=True, **options)


def compare_modes(input, **options):
    """Run both AA and AS modes; returns {"AA": ..., "AS": ..., "overlap": [...]}."""
    return json.loads(_core.compare_modes_json(str(input), **options))


__all__ = [
    "EmptyCorpus",
    "Error",
    "MalformedProject",
    "NoScripts",
    "UnreadableFile",
    "__version__",
    "compare_modes",
    "detect",
    "detect_text",
    "mine_patterns",
    "run_cli",
    "script_properties",
]
