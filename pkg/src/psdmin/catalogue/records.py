"""The 31 combinatorial classes of psd-minimal 4-polytopes as shipped data."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from ..exact import DomainError, parse_rational
from ..polytope import VPolytope

CLASS_IDS = range(1, 32)


@dataclass(frozen=True)
class ClassRecord:
    id: int
    construction: str
    vertices: tuple[tuple[Fraction, ...], ...]
    f_vector: tuple[int, ...]
    facet_types: dict[str, int]
    dual: int
    condition: str
    witness: str | None

    def to_document(self) -> dict:
        return {
            "id": self.id,
            "construction": self.construction,
            "vertices": [[str(x) for x in v] for v in self.vertices],
            "f_vector": list(self.f_vector),
            "facet_types": dict(self.facet_types),
            "dual": self.dual,
            "condition": self.condition,
            "witness": self.witness,
        }


def _data(name: str) -> dict:
    return json.loads(resources.files("psdmin").joinpath("data", name).read_text())


@lru_cache(maxsize=None)
def load_catalogue() -> dict[int, ClassRecord]:
    doc = _data("catalogue.json")
    out = {}
    for c in doc["classes"]:
        out[c["id"]] = ClassRecord(
            id=c["id"],
            construction=c.get("construction", ""),
            vertices=tuple(tuple(parse_rational(x) for x in v) for v in c["vertices"]),
            f_vector=tuple(c["f_vector"]),
            facet_types=dict(c["facet_types"]),
            dual=c["dual"],
            condition=c["condition"],
            witness=c.get("witness"),
        )
    return out


def record(k: int) -> ClassRecord:
    if not isinstance(k, int) or isinstance(k, bool) or k not in CLASS_IDS:
        raise DomainError(f"class id must be an integer in 1..31, got {k!r}")
    return load_catalogue()[k]


@lru_cache(maxsize=None)
def build_class(k: int) -> VPolytope:
    r = record(k)
    return VPolytope.make(f"class-{k}", r.vertices, 4)
