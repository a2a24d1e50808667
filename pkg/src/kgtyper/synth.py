"""Synthetic knowledge graph generator for end-to-end testing.

Builds a two-level class hierarchy (root -> one coarse category -> the
fine classes) and gives every fine class a signature of characteristic
predicate/object pairs. Each entity carries its class signature plus a
type assertion, with optional uniformly random noise triples on top, so
class membership is recoverable from graph context by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .evaluation import write_labels
from .ntriples import RDF_TYPE, RDFS_SUBCLASSOF, Iri, Triple, write_ntriples

SYNTH_ROOT = "http://example.org/ontology/Root"
SYNTH_CATEGORY = "http://example.org/ontology/Category"

_RDF_TYPE = Iri(RDF_TYPE)
_SUBCLASS = Iri(RDFS_SUBCLASSOF)


def _class_iri(i: int) -> str:
    return f"http://example.org/ontology/Class{i:03d}"


def _entity_iri(class_id: int, k: int) -> str:
    return f"http://example.org/entity/c{class_id:03d}_e{k:04d}"


def _predicate_iri(class_id: int, j: int) -> str:
    return f"http://example.org/property/p{class_id:03d}_{j}"


def _value_iri(class_id: int, j: int) -> str:
    return f"http://example.org/value/v{class_id:03d}_{j}"


@dataclass
class SynthResult:
    kg_path: Path
    gold_path: Path
    root: str
    num_triples: int
    num_entities: int
    classes: list[str]


def generate_synthetic_kg(
    out_dir,
    num_classes: int,
    entities_per_class: int,
    predicates_per_class: int,
    noise_fraction: float,
    seed: int,
) -> SynthResult:
    """Write ``kg.nt`` and ``gold.tsv`` into ``out_dir``; deterministic per seed.

    Noise is binomial per entity: each of its signature slots is doubled
    by a uniformly random predicate/value pair with probability
    ``noise_fraction``.
    """
    if num_classes < 1 or entities_per_class < 1 or predicates_per_class < 1:
        raise ValueError("counts must be >= 1")
    if not 0.0 <= noise_fraction < 1.0:
        raise ValueError("noise_fraction must be in [0, 1)")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    triples: list[Triple] = [
        Triple(Iri(SYNTH_CATEGORY), _SUBCLASS, Iri(SYNTH_ROOT))
    ]
    for i in range(num_classes):
        triples.append(Triple(Iri(_class_iri(i)), _SUBCLASS, Iri(SYNTH_CATEGORY)))

    all_predicates = [
        _predicate_iri(i, j)
        for i in range(num_classes)
        for j in range(predicates_per_class)
    ]
    all_values = [
        _value_iri(i, j) for i in range(num_classes) for j in range(predicates_per_class)
    ]

    gold: list[tuple[str, str]] = []
    for i in range(num_classes):
        class_iri = Iri(_class_iri(i))
        for k in range(entities_per_class):
            entity = Iri(_entity_iri(i, k))
            gold.append((entity.value, class_iri.value))
            triples.append(Triple(entity, _RDF_TYPE, class_iri))
            for j in range(predicates_per_class):
                triples.append(
                    Triple(entity, Iri(_predicate_iri(i, j)), Iri(_value_iri(i, j)))
                )
            noise_count = rng.binomial(predicates_per_class, noise_fraction)
            for _ in range(noise_count):
                predicate = all_predicates[rng.integers(len(all_predicates))]
                value = all_values[rng.integers(len(all_values))]
                triples.append(Triple(entity, Iri(predicate), Iri(value)))

    kg_path = out_dir / "kg.nt"
    gold_path = out_dir / "gold.tsv"
    with open(kg_path, "w", encoding="utf-8") as handle:
        write_ntriples(triples, handle)
    write_labels(gold_path, gold)
    return SynthResult(
        kg_path,
        gold_path,
        SYNTH_ROOT,
        num_triples=len(triples),
        num_entities=num_classes * entities_per_class,
        classes=[_class_iri(i) for i in range(num_classes)],
    )
