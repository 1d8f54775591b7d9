"""Shared fixtures: the small worked example and corpus helpers."""

import random

import pytest

from tkcore import TemporalGraph, generate_synthetic


@pytest.fixture
def g0() -> TemporalGraph:
    """Four vertices, five edges over timestamps 1..5.

    Hand-checkable: with k=2 there are exactly three distinct cores, all on
    the triangle a-b-c, distinguished by which of the parallel a-b edges
    (t=1 and t=5) survive.  Vertex d only ever has one neighbor.
    """
    return TemporalGraph.from_edges(
        4,
        [(0, 1, 1), (1, 2, 2), (0, 2, 3), (2, 3, 4), (0, 1, 5)],
        labels=("a", "b", "c", "d"),
    )


@pytest.fixture
def tel_fixture_graph() -> TemporalGraph:
    """Seven vertices in two groups: a 2-core on v1..v5 living at t in {5,6}
    and a triangle v5-v7-v8 spread over t in {2,3,4}."""
    labels = ("v1", "v2", "v3", "v4", "v5", "v7", "v8")
    ids = {lab: i for i, lab in enumerate(labels)}
    raw = [
        ("v1", "v2", 5),
        ("v2", "v3", 6),
        ("v1", "v3", 5),
        ("v4", "v1", 5),
        ("v4", "v3", 6),
        ("v5", "v1", 5),
        ("v5", "v2", 6),
        ("v7", "v8", 2),
        ("v7", "v5", 3),
        ("v8", "v5", 4),
    ]
    return TemporalGraph.from_edges(
        7, [(ids[a], ids[b], t) for a, b, t in raw], labels=labels
    )


def random_instance(rng: random.Random, seed: int, *, max_vertices=12, max_edges=60, max_timestamps=14):
    model = rng.choice(["uniform", "preferential", "planted-community"])
    return generate_synthetic(
        rng.randint(3, max_vertices),
        rng.randint(3, max_edges),
        rng.randint(2, max_timestamps),
        model=model,
        seed=seed,
    )
