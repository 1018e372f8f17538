"""Disclosure analysis for rule-constrained data integration."""

import json as _json

try:
    from ._core import (  # installed-wheel layout
        canonical_text,
        check_text,
        classify_text,
        diff_seeds,
        gen_3col,
        gen_circuit,
        gen_idimp,
    )
except ImportError:  # in-build layout: extension module directly on sys.path
    from _core import (
        canonical_text,
        check_text,
        classify_text,
        diff_seeds,
        gen_3col,
        gen_circuit,
        gen_idimp,
    )

__all__ = [
    "canonical_text",
    "check",
    "check_text",
    "classify",
    "classify_text",
    "diff",
    "diff_seeds",
    "gen_3col",
    "gen_circuit",
    "gen_idimp",
]


def check(text, algo="auto", rounds=8, max_facts=100000):
    """Disclosure check on problem-file text; returns the report as a dict."""
    return _json.loads(check_text(text, algo, rounds, max_facts))


def classify(text):
    """Constraint and mapping class names, most specific first."""
    constraints, mappings = classify_text(text)
    return {"constraints": constraints, "mappings": mappings}


def diff(seed0=1, count=25, family="mixed", rounds=8, max_facts=100000):
    """Cross-check all legal algorithms over random settings; returns a dict."""
    return _json.loads(diff_seeds(seed0, count, family, rounds, max_facts))
