"""JSON input models and canonical output helpers."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ParseError, ThresholdError
from .family import MonotoneFamily, from_sets
from .graphs import GraphSpec
from .simulate import HypergraphSpec

ModelT = TypeVar("ModelT", bound=BaseModel)


class FamilyModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1)
    minimal_sets: list[list[int]]


class GraphModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertices: int = Field(ge=0)
    edges: list[tuple[int, int]]


class HypergraphModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=0)
    k: int = Field(ge=1)
    edges: list[list[int]]


def _describe(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        location = ".".join(str(item) for item in error["loc"]) or "<root>"
        parts.append(f"{location}: {error['msg']}")
    return "; ".join(parts)


def parse_model(model: type[ModelT], text: str, *, source: str = "<input>") -> ModelT:
    try:
        return model.model_validate_json(text)
    except ValidationError as exc:
        raise ParseError(f"{source}: {_describe(exc)}") from exc


def _read(path: Path | str) -> tuple[str, str]:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8"), str(path)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _build(source: str, factory: Any, *args: Any) -> Any:
    """Run a domain constructor, prefixing its validation message with ``source``."""
    try:
        return factory(*args)
    except ThresholdError as exc:
        raise type(exc)(f"{source}: {exc}") from exc


def family_from_json(text: str, *, source: str = "<input>") -> MonotoneFamily:
    """Family JSON such as ``{"n": 3, "minimal_sets": [[0,1],[0,2],[1,2]]}``.

    Input order and dominated sets are accepted; the result is canonical.
    """
    model = parse_model(FamilyModel, text, source=source)
    return _build(source, lambda: from_sets(model.n, model.minimal_sets, verbose=True))


def graph_from_json(text: str, *, source: str = "<input>") -> GraphSpec:
    model = parse_model(GraphModel, text, source=source)
    return _build(source, GraphSpec.from_edges, model.vertices, model.edges)


def hypergraph_from_json(text: str, *, source: str = "<input>") -> HypergraphSpec:
    model = parse_model(HypergraphModel, text, source=source)
    for edge in model.edges:
        if len(set(edge)) != model.k:
            raise ParseError(f"{source}: edge {edge} does not have {model.k} distinct vertices")
    return _build(source, HypergraphSpec.from_edges, model.n, model.k, model.edges)


def load_family(path: Path | str) -> MonotoneFamily:
    text, source = _read(path)
    return family_from_json(text, source=source)


def load_graph(path: Path | str) -> GraphSpec:
    text, source = _read(path)
    return graph_from_json(text, source=source)


def load_hypergraph(path: Path | str) -> HypergraphSpec:
    text, source = _read(path)
    return hypergraph_from_json(text, source=source)


def family_to_dict(family: MonotoneFamily) -> dict[str, Any]:
    return {"n": family.n, "minimal_sets": family.as_lists()}


def finite_or_none(payload: Any) -> Any:
    """Replace NaN and infinities with None, recursing into lists and dicts."""
    if isinstance(payload, float):
        return payload if math.isfinite(payload) else None
    if isinstance(payload, dict):
        return {key: finite_or_none(value) for key, value in payload.items()}
    if isinstance(payload, list | tuple):
        return [finite_or_none(value) for value in payload]
    return payload


def dumps_canonical(payload: Any) -> str:
    """Strict JSON with sorted keys so identical results serialize byte-identically."""
    return json.dumps(finite_or_none(payload), sort_keys=True, allow_nan=False)
