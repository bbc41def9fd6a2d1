"""Categorized next-step visualization recommendations."""

import json

from ._core import (
    PROTOCOL_VERSION,
    Dataset,
    Error,
    ParseError,
    Service,
    UnknownColumn,
    UnsupportedSpec,
    deviation,
    euclidean_similarity,
    mutual_information,
    non_uniformity,
    separability,
    skewness,
    spearman,
)
from . import _core

__all__ = [
    "PROTOCOL_VERSION", "Dataset", "Error", "ParseError", "Service", "UnknownColumn",
    "UnsupportedSpec", "aggregate", "canonical_key", "deviation", "encode",
    "euclidean_similarity", "load_csv", "mutual_information", "non_uniformity",
    "recommend", "schema", "separability", "skewness", "spearman",
]


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def load_csv(path, schema_override=None):
    return Dataset.from_csv(path, _dump(schema_override) if schema_override else "")


def schema(ds):
    return json.loads(ds.schema_json())


def encode(ds, attrs, filters=()):
    """Auto-encoded spec for attrs; filters are (attr, value) pairs."""
    view = {"attrs": list(attrs), "filters": [{"attr": a, "value": v} for a, v in filters]}
    return json.loads(_core.encode(ds, json.dumps(view)))


def canonical_key(spec):
    return _core.canonical_key(_dump(spec))


def aggregate(ds, spec):
    return json.loads(_core.aggregate(ds, _dump(spec)))


def recommend(ds, view=None, **kwargs):
    """RecommendationSet as a dict. view is a spec dict, {"attrs", "filters"} or None."""
    text = _core.recommend(ds, None if view is None else _dump(view), **kwargs)
    return json.loads(text)
