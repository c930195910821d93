"""Rank transformation and rank-distance matrices.

Feature vectors are turned into rankings (rank 1 = largest value, ties get
average ranks) and compared with the Spearman footrule: the sum of absolute
rank differences.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import SpaceMismatchError
from .features import FeatureVector


@dataclass(frozen=True)
class RankVector:
    doc_id: str
    space_id: str
    ranks: tuple[float, ...]


@dataclass(frozen=True)
class DistanceMatrix:
    doc_ids: tuple[str, ...]
    d: np.ndarray  # n x n, symmetric, zero diagonal

    def __post_init__(self):
        n = len(self.doc_ids)
        if self.d.shape != (n, n):
            raise ValueError("matrix shape does not match doc_ids")


def _rank_descending(values: np.ndarray) -> np.ndarray:
    """Ranks with 1 = largest value; tied values get the average of the
    positions they cover."""
    n = len(values)
    order = np.argsort(-values, kind="stable")
    sorted_vals = values[order]
    # tie-group boundaries over the sorted values
    starts = np.flatnonzero(np.r_[True, sorted_vals[1:] != sorted_vals[:-1]])
    ends = np.r_[starts[1:], n]
    # positions i..j-1 (0-based) carry the average rank (i + j - 1) / 2 + 1
    group_rank = (starts + ends - 1) / 2 + 1
    sorted_ranks = np.repeat(group_rank, ends - starts)
    ranks = np.empty(n, dtype=float)
    ranks[order] = sorted_ranks
    return ranks


def rank_transform(v: FeatureVector) -> RankVector:
    if len(v.values) == 0:
        raise ValueError("cannot rank an empty vector")
    ranks = _rank_descending(np.asarray(v.values, dtype=float))
    return RankVector(doc_id=v.doc_id, space_id=v.space_id, ranks=tuple(ranks))


def max_footrule(n: int) -> int:
    """Largest possible footrule distance between two rankings of length n."""
    return n * n // 2


def rank_distance(a: RankVector, b: RankVector, normalized: bool = False) -> float:
    """Spearman footrule between two rank vectors of the same feature space."""
    if a.space_id != b.space_id or len(a.ranks) != len(b.ranks):
        raise SpaceMismatchError(
            f"rank vectors from different spaces: {a.space_id!r} vs {b.space_id!r}"
        )
    dist = float(np.abs(np.asarray(a.ranks) - np.asarray(b.ranks)).sum())
    if normalized:
        dist /= max_footrule(len(a.ranks))
    return dist


def distance_matrix(
    vectors: list[FeatureVector], normalized: bool = False
) -> DistanceMatrix:
    """Pairwise rank distances over a list of feature vectors."""
    if len(vectors) < 2:
        raise ValueError("need at least 2 vectors")
    space = vectors[0].space_id
    for v in vectors[1:]:
        if v.space_id != space:
            raise SpaceMismatchError(
                f"mixed feature spaces: {space!r} vs {v.space_id!r}"
            )
    ranked = [rank_transform(v) for v in vectors]
    n = len(ranked)
    d = np.zeros((n, n), dtype=float)
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = rank_distance(ranked[i], ranked[j], normalized)
    return DistanceMatrix(doc_ids=tuple(v.doc_id for v in vectors), d=d)


def write_distance_matrix(path: str | Path, dm: DistanceMatrix) -> None:
    """CSV export: first row/column are doc_ids, full symmetric matrix."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["", *dm.doc_ids])
        for doc_id, row in zip(dm.doc_ids, dm.d):
            writer.writerow([doc_id, *[repr(float(x)) for x in row]])
