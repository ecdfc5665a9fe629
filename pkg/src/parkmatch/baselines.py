"""Comparison matchers: random pick, first-free greedy, and an optimal
assignment solved with the Hungarian method."""
from __future__ import annotations

import random
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .matching import Lists, Matching


def processing_order(driver_lists: Lists) -> List[str]:
    """Shortest preference list first, ties by driver id."""
    return sorted(driver_lists, key=lambda d: (len(driver_lists[d]), d))


def random_match(driver_lists: Lists, spot_lists: Lists, seed: int) -> Matching:
    """Each driver draws uniformly (with replacement) from its own list and
    keeps the first free spot; it gets as many draws as it has entries."""
    draw = random.Random(seed).random
    taken = set()
    assignment: Dict[str, str] = {}
    for d in processing_order(driver_lists):
        ids = driver_lists[d].ids
        k = len(ids)
        last = k - 1
        for _ in range(k):
            p = ids[min(int(draw() * k), last)]
            if p not in taken:
                taken.add(p)
                assignment[d] = p
                break
    return Matching.from_assignment(assignment, driver_lists, spot_lists)


def greedy_match(driver_lists: Lists, spot_lists: Lists) -> Matching:
    taken = set()
    assignment: Dict[str, str] = {}
    for d in processing_order(driver_lists):
        for p in driver_lists[d].ids:
            if p not in taken:
                taken.add(p)
                assignment[d] = p
                break
    return Matching.from_assignment(assignment, driver_lists, spot_lists)


def assignment_weights(distances: np.ndarray) -> Tuple[np.ndarray, float, float]:
    """Map a distance matrix (NaN = no edge) to nonnegative weights.

    Every real edge gets ``base + upper - distance`` with ``upper`` above the
    largest distance and ``base`` larger than any attainable sum of
    ``upper - distance`` terms, so one extra matched pair always outweighs any
    distance saving. Missing edges get weight 0.
    Returns ``(weights, upper, base)``.
    """
    listed = ~np.isnan(distances)
    largest = float(distances[listed].max()) if listed.any() else 0.0
    upper = largest + 1.0
    base = max(distances.shape, default=0) * upper + 1.0
    weights = np.where(listed, base + upper - np.where(listed, distances, 0.0), 0.0)
    return weights, upper, base


def solve_assignment(cost: np.ndarray) -> np.ndarray:
    """Minimum-cost perfect assignment on a square matrix (Kuhn-Munkres with
    dual potentials, O(n^3)). Returns ``col`` such that row i gets col[i]."""
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    owner = np.zeros(n + 1, dtype=np.int64)  # owner[j]: 1-based row on column j
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        owner[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = owner[j0]
            free = ~used
            reduced = cost[i0 - 1] - u[i0] - v[1:]
            better = np.flatnonzero(free[1:] & (reduced < minv[1:])) + 1
            minv[better] = reduced[better - 1]
            way[better] = j0
            masked = np.where(free, minv, np.inf)
            masked[0] = np.inf
            j1 = int(np.argmin(masked))
            step = masked[j1]
            u[owner[used]] += step
            v[used] -= step
            minv[free] -= step
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
    col = np.empty(n, dtype=np.int64)
    col[owner[1:] - 1] = np.arange(n)
    return col


def hungarian_match(
    distances: np.ndarray, driver_ids: Sequence[str], spot_ids: Sequence[str]
) -> Matching:
    """Maximum-cardinality matching of minimum total distance.

    ``distances[i, j]`` is the distance between ``driver_ids[i]`` and
    ``spot_ids[j]``; NaN marks an unlisted pair, which is never matched.
    """
    distances = np.asarray(distances, dtype=float)
    nd, ns = len(driver_ids), len(spot_ids)
    if distances.shape != (nd, ns):
        raise ValueError(f"distance matrix shape {distances.shape} != ({nd}, {ns})")
    n = max(nd, ns)
    if n == 0:
        return Matching(frozenset(), frozenset(), frozenset())
    weights, _, _ = assignment_weights(distances)
    padded = np.zeros((n, n))
    padded[:nd, :ns] = weights
    col = solve_assignment(-padded)
    assignment = {
        driver_ids[i]: spot_ids[col[i]]
        for i in range(nd)
        if col[i] < ns and padded[i, col[i]] > 0
    }
    return Matching.from_assignment(assignment, driver_ids, spot_ids)


def distance_matrix(
    driver_lists: Lists, driver_ids: Sequence[str], spot_ids: Sequence[str]
) -> np.ndarray:
    """Dense matrix of listed distances (NaN elsewhere) in the given order."""
    col = {p: j for j, p in enumerate(spot_ids)}
    out = np.full((len(driver_ids), len(spot_ids)), np.nan)
    for i, d in enumerate(driver_ids):
        for p, dist in driver_lists[d].ranked:
            j = col.get(p)
            if j is not None:
                out[i, j] = dist
    return out
