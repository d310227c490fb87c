"""Approximation algorithms for three primary colors.

A1 solves one color pair exactly and spans the third color with its MST,
giving a 2-approximation; the same idea pairs up any number of colors for a
ceil(k/2) ratio.  A2 builds six candidate solutions: the three pair+mono
unions, and three more that start from an MST H of the points carrying all
three colors and complete each world around H.  Its certified ratio is
2 - 1/(3 + 2*rho), where rho bounds the Steiner ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import mst
from .core import Instance, Solution, as_edges, make_solution, merge_edges
from .exact2 import project_pair, solve_pair


@dataclass(frozen=True)
class ApproxConfig:
    """Analysis constants; only the certified ratios are used at runtime."""

    steiner_ratio_bound: float = 1.21

    def __post_init__(self) -> None:
        if not 1.0 <= self.steiner_ratio_bound <= 2.0:
            raise ValueError("steiner ratio bound must lie in [1, 2]")

    @property
    def ratio_a2(self) -> float:
        return 2.0 - 1.0 / (3.0 + 2.0 * self.steiner_ratio_bound)

    def ratio_a1(self, k: int = 3) -> float:
        return float(math.ceil(k / 2))


@dataclass(frozen=True, eq=False)
class CandidateBundle:
    """The six A2 candidates (labels G1..G6) and the index of the cheapest."""

    graphs: tuple[Solution, ...]
    chosen: int

    @property
    def best(self) -> Solution:
        return self.graphs[self.chosen]


def _class_mst(inst: Instance, c: int) -> np.ndarray:
    members = inst.color_class(c)
    local = mst.euclidean_mst(inst.xy[members])
    if not local.size:
        return as_edges(())
    return as_edges(members[local])


def mst_completion(inst: Instance, members, merged) -> np.ndarray:
    """Minimum edge set spanning ``members`` given pre-connected blocks.

    Equivalent to an MST of the contracted point set where the distance
    between blocks is the minimum pairwise point distance; returns the
    witnessing point pairs.
    """
    members = np.asarray(members, dtype=np.int64)
    if members.size <= 1:
        return as_edges(())
    pos = {int(p): i for i, p in enumerate(members)}
    uf = mst.UnionFind(members.size)
    for block in merged:
        block = [pos[int(p)] for p in block if int(p) in pos]
        for a, b in zip(block, block[1:]):
            uf.union(a, b)
    comp = {}
    roots: dict[int, int] = {}
    for i in range(members.size):
        comp[i] = roots.setdefault(uf.find(i), len(roots))
    g = len(roots)
    if g <= 1:
        return as_edges(())
    best: dict[tuple[int, int], tuple[float, int, int]] = {}
    xy = inst.xy
    for i in range(members.size):
        for j in range(i + 1, members.size):
            ci, cj = comp[i], comp[j]
            if ci == cj:
                continue
            a, b = int(members[i]), int(members[j])
            w = float(np.hypot(*(xy[a] - xy[b])))
            key = (min(ci, cj), max(ci, cj))
            cand = (w, min(a, b), max(a, b))
            if key not in best or cand < best[key]:
                best[key] = cand
    in_tree = [False] * g
    in_tree[0] = True
    out = []
    dist: list[tuple[float, int, int] | None] = [best.get((min(0, j), max(0, j))) for j in range(g)]
    for _ in range(g - 1):
        pick, pick_j = None, -1
        for j in range(g):
            if not in_tree[j] and dist[j] is not None and (pick is None or dist[j] < pick):
                pick, pick_j = dist[j], j
        if pick is None:
            raise ValueError("contracted class is not connectable")
        in_tree[pick_j] = True
        out.append((pick[1], pick[2]))
        for j in range(g):
            if in_tree[j]:
                continue
            cand = best.get((min(pick_j, j), max(pick_j, j)))
            if cand is not None and (dist[j] is None or cand < dist[j]):
                dist[j] = cand
    return as_edges(out)


def approx_a1(inst: Instance, m_limit: int = 9, config: ApproxConfig | None = None) -> Solution:
    """2-approximation for three colors: exact red-blue pair plus yellow MST."""
    if inst.k != 3:
        raise ValueError("approx_a1 requires k == 3")
    g_rb = solve_pair(project_pair(inst, 1, 2), m_limit=m_limit)
    edges = merge_edges(g_rb.edges, _class_mst(inst, 3))
    return make_solution(inst, edges, "a1", ratio_bound=2.0)


def approx_pairing(inst: Instance, pairing, m_limit: int = 9) -> Solution:
    """ceil(k/2)-approximation: exact solve per color pair, MST per singleton."""
    blocks = [tuple(sorted(int(c) for c in b)) for b in pairing]
    flat = [c for b in blocks for c in b]
    if sorted(flat) != list(range(1, inst.k + 1)) or any(len(b) not in (1, 2) for b in blocks):
        raise ValueError(f"pairing must partition 1..{inst.k} into blocks of size <= 2")
    parts = []
    for b in blocks:
        if len(b) == 2:
            parts.append(solve_pair(project_pair(inst, b[0], b[1]), m_limit=m_limit).edges)
        else:
            parts.append(_class_mst(inst, b[0]))
    return make_solution(inst, merge_edges(*parts), "pairing", ratio_bound=math.ceil(inst.k / 2))


_A2_SPLITS = ((1, 2, 3), (1, 3, 2), (2, 3, 1))


def approx_a2_bundle(
    inst: Instance, m_limit: int = 9, config: ApproxConfig | None = None
) -> CandidateBundle:
    """All six A2 candidates: G1..G3 pair+mono, G4..G6 completions around H."""
    if inst.k != 3:
        raise ValueError("approx_a2 requires k == 3")
    config = config or ApproxConfig()
    graphs: list[Solution] = []
    for i, (c1, c2, mono) in enumerate(_A2_SPLITS):
        pair_sol = solve_pair(project_pair(inst, c1, c2), m_limit=m_limit)
        edges = merge_edges(pair_sol.edges, _class_mst(inst, mono))
        graphs.append(make_solution(inst, edges, f"a2/G{i + 1}", ratio_bound=None))
    black = np.flatnonzero(inst.masks == np.uint32(0b111))
    h_local = mst.euclidean_mst(inst.xy[black]) if black.size > 1 else as_edges(())
    h_edges = as_edges(black[h_local]) if h_local.size else as_edges(())
    merged = (frozenset(int(p) for p in black),) if black.size else ()
    for i, (c1, c2, mono) in enumerate(_A2_SPLITS):
        pair_sol = solve_pair(project_pair(inst, c1, c2, group_merge=merged), m_limit=m_limit)
        mono_edges = mst_completion(inst, inst.color_class(mono), merged)
        edges = merge_edges(h_edges, pair_sol.edges, mono_edges)
        graphs.append(make_solution(inst, edges, f"a2/G{i + 4}", ratio_bound=None))
    chosen = 0
    for i in range(1, 6):
        if graphs[i].cost < graphs[chosen].cost:
            chosen = i
    return CandidateBundle(graphs=tuple(graphs), chosen=chosen)


def approx_a2(inst: Instance, m_limit: int = 9, config: ApproxConfig | None = None) -> Solution:
    """(2 - 1/(3+2*rho))-approximation for three colors via six candidates."""
    config = config or ApproxConfig()
    bundle = approx_a2_bundle(inst, m_limit=m_limit, config=config)
    best = bundle.best
    return Solution(
        algorithm="a2", cost=best.cost, edges=best.edges, ratio_bound=config.ratio_a2
    )
