"""Exact two-color solver via enumeration of bichromatic ("purple") forests.

Any optimum for a 2-color instance can be written as: forced monochromatic
edges + an acyclic set A of purple-purple edges + per-color minimum
completions of the contracted component worlds.  A purple cycle's longest
edge can always be dropped, and a purple-purple edge that only serves one
color's completion is covered by the branch that moves it into A.  The
enumeration is exponential in the number m of purple points only, and is
certified against the brute-force oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import mst
from .core import Instance, RefusalError, Solution, as_edges, make_solution


@dataclass(frozen=True, eq=False)
class PairProjection:
    """A 2-color restriction of an instance to S_c1 union S_c2.

    ``idx`` holds the participating base-instance indices; ``bits`` has bit 0
    set where the point carries c1 and bit 1 where it carries c2 (after
    projection every point has at least one bit).  ``group_merge`` blocks are
    treated as pre-connected in both colors.
    """

    base: Instance
    pair: tuple[int, int]
    idx: np.ndarray
    bits: np.ndarray
    group_merge: tuple[frozenset[int], ...] = ()

    @property
    def n(self) -> int:
        return int(self.idx.size)

    def purple(self) -> np.ndarray:
        """Positions (into idx) of the bichromatic points."""
        return np.flatnonzero(self.bits == 3)


def project_pair(
    base: Instance, c1: int, c2: int, group_merge: tuple[frozenset[int], ...] = ()
) -> PairProjection:
    if c1 == c2 or not (1 <= c1 <= base.k and 1 <= c2 <= base.k):
        raise ValueError(f"invalid color pair ({c1}, {c2})")
    b1 = np.uint32(1 << (c1 - 1))
    b2 = np.uint32(1 << (c2 - 1))
    sel = np.flatnonzero(base.masks & (b1 | b2))
    bits = ((base.masks[sel] & b1) != 0).astype(np.uint8)
    bits |= (((base.masks[sel] & b2) != 0) << 1).astype(np.uint8)
    seen: set[int] = set()
    for block in group_merge:
        if seen & set(block):
            raise ValueError("group_merge blocks must be disjoint")
        seen |= set(block)
    return PairProjection(base=base, pair=(c1, c2), idx=sel, bits=bits, group_merge=tuple(group_merge))


def enumerate_forests(m: int, m_limit: int = 9):
    """Yield every acyclic edge subset of the complete graph on m vertices.

    Edge sets come out as sorted tuples of (u, v) pairs, the empty forest
    first.  Counts follow the labeled-forest sequence (1, 1, 2, 7, 38, ...).
    """
    if m > m_limit:
        raise RefusalError(f"m={m} exceeds the forest enumeration limit of {m_limit}")
    edges = [(u, v) for u in range(m) for v in range(u + 1, m)]
    parent = list(range(m))

    def find(a: int) -> int:
        while parent[a] != a:
            a = parent[a]
        return a

    chosen: list[tuple[int, int]] = []

    def rec(i: int):
        if i == len(edges):
            yield tuple(chosen)
            return
        yield from rec(i + 1)
        u, v = edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
            chosen.append((u, v))
            yield from rec(i + 1)
            chosen.pop()
            parent[rv] = rv

    yield from rec(0)


class _Engine:
    """Shared state for the purple-forest search on one projection."""

    def __init__(self, proj: PairProjection):
        self.proj = proj
        base = proj.base
        idx = proj.idx
        self.xy = base.xy[idx]
        self.n = proj.n
        self.purple = [int(p) for p in proj.purple()]
        # Local positions of each base index, for group_merge resolution.
        pos_of = {int(g): i for i, g in enumerate(idx)}
        self.merge_blocks = [
            sorted(pos_of[g] for g in block if int(g) in pos_of) for block in proj.group_merge
        ]
        self.forced_edges_local: list[tuple[int, int]] = []
        self.forced_cost = 0.0
        self.worlds = [self._build_world(0), self._build_world(1)]
        self.purple_edges = self._purple_edges()
        self.full_merge_lb = max(w.full_merge_completion() for w in self.worlds)

    # -- per-color worlds -------------------------------------------------

    def _build_world(self, which: int) -> "_World":
        bit = 1 << which
        members = [i for i in range(self.n) if self.bits_at(i) & bit]
        active = [i for i in members if self.bits_at(i) == 3]
        forced: list[tuple[int, int]] = []
        if len(members) > 1:
            local = mst.euclidean_mst(self.xy[members])
            glob = [(members[a], members[b]) for a, b in local]
            if active:
                w = np.array([self._dist(a, b) for a, b in glob])
                arr = np.array(glob, dtype=np.int64)
                is_active = np.zeros(self.n, dtype=bool)
                is_active[active] = True
                kept, _ = mst.prune_to_forest(arr, w, self.n, is_active)
                forced = [glob[i] for i in kept]
            else:
                forced = glob
        self.forced_edges_local.extend(forced)
        self.forced_cost += sum(self._dist(a, b) for a, b in forced)
        return _World(self, members, forced)

    def bits_at(self, i: int) -> int:
        return int(self.proj.bits[i])

    def _dist(self, a: int, b: int) -> float:
        d = self.xy[a] - self.xy[b]
        return float(math.hypot(d[0], d[1]))

    def _purple_edges(self) -> list[tuple[float, int, int]]:
        # Pairs pre-connected by group_merge are useless in a purple forest.
        seed = mst.UnionFind(self.n)
        for block in self.merge_blocks:
            for a, b in zip(block, block[1:]):
                seed.union(a, b)
        out = []
        for i, u in enumerate(self.purple):
            for v in self.purple[i + 1 :]:
                if seed.find(u) == seed.find(v):
                    continue
                out.append((self._dist(u, v), u, v))
        out.sort()
        return out

    # -- search ------------------------------------------------------------

    def solve(self, algorithm: str) -> Solution:
        best = [math.inf, None]  # cost, canonical local edge tuple

        def evaluate(forest: list[tuple[int, int]]) -> None:
            edges: set[tuple[int, int]] = set()
            for a, b in self.forced_edges_local:
                edges.add((min(a, b), max(a, b)))
            for u, v in forest:
                edges.add((min(u, v), max(u, v)))
            for world in self.worlds:
                links = world.completion_links(forest)
                if links is None:
                    return
                for a, b in links:
                    edges.add((min(a, b), max(a, b)))
            cost = sum(self._dist(a, b) for a, b in edges)
            key = tuple(sorted(edges))
            if cost < best[0] or (cost == best[0] and (best[1] is None or key < best[1])):
                best[0] = cost
                best[1] = key

        uf = mst.UnionFind(self.n)
        for block in self.merge_blocks:
            for a, b in zip(block, block[1:]):
                uf.union(a, b)

        edges = self.purple_edges
        chosen: list[tuple[int, int]] = []

        def rec(i: int, acc: float) -> None:
            if self.forced_cost + acc + self.full_merge_lb > best[0]:
                return
            if i == len(edges):
                evaluate(chosen)
                return
            rec(i + 1, acc)
            w, u, v = edges[i]
            ru, rv = uf.find(u), uf.find(v)
            if ru != rv:
                uf.parent[rv] = ru
                chosen.append((u, v))
                rec(i + 1, acc + w)
                chosen.pop()
                uf.parent[rv] = rv

        rec(0, 0.0)
        if best[1] is None:
            raise RefusalError("projection admits no colored spanning graph")
        base_edges = [(int(self.proj.idx[a]), int(self.proj.idx[b])) for a, b in best[1]]
        return make_solution(self.proj.base, base_edges, algorithm, ratio_bound=1.0)

    def formula_cost(self, forest: list[tuple[int, int]]) -> float:
        """w(f) + per-color (forced + completion) costs, shared edges paid per color."""
        total = sum(self._dist(u, v) for u, v in forest) + self.forced_cost
        for world in self.worlds:
            links = world.completion_links(forest)
            if links is None:
                return math.inf
            total += sum(self._dist(a, b) for a, b in links)
        return total


class _World:
    """One color's contracted component world inside the engine."""

    def __init__(self, engine: _Engine, members: list[int], forced: list[tuple[int, int]]):
        self.engine = engine
        self.members = members
        uf = mst.UnionFind(engine.n)
        for a, b in forced:
            uf.union(a, b)
        for block in engine.merge_blocks:
            inside = [p for p in block if p in set(members)]
            for a, b in zip(inside, inside[1:]):
                uf.union(a, b)
        roots: dict[int, int] = {}
        self.comp = {}
        for p in members:
            r = uf.find(p)
            self.comp[p] = roots.setdefault(r, len(roots))
        self.n_comps = len(roots)
        # Cheapest link per component pair; candidates are all member pairs,
        # including purple-purple ones (paid once per color world, see the
        # enumeration branch that moves such an edge into the forest).
        self.links: dict[tuple[int, int], tuple[float, int, int]] = {}
        for i, a in enumerate(members):
            for b in members[i + 1 :]:
                ca, cb = self.comp[a], self.comp[b]
                if ca == cb:
                    continue
                key = (min(ca, cb), max(ca, cb))
                cand = (engine._dist(a, b), min(a, b), max(a, b))
                if key not in self.links or cand < self.links[key]:
                    self.links[key] = cand

    def _prim(self, merged: list[list[int]]) -> list[tuple[int, int]] | None:
        """Minimum completion links over component groups; None if impossible."""
        group_of = {}
        for gi, grp in enumerate(merged):
            for c in grp:
                group_of[c] = gi
        g = len(merged)
        if g <= 1:
            return []
        best_link: dict[tuple[int, int], tuple[float, int, int]] = {}
        for (ca, cb), cand in self.links.items():
            ga, gb = group_of[ca], group_of[cb]
            if ga == gb:
                continue
            key = (min(ga, gb), max(ga, gb))
            if key not in best_link or cand < best_link[key]:
                best_link[key] = cand
        in_tree = [False] * g
        in_tree[0] = True
        out: list[tuple[int, int]] = []
        dist = [best_link.get((min(0, j), max(0, j))) for j in range(g)]
        for _ in range(g - 1):
            pick, pick_j = None, -1
            for j in range(g):
                if in_tree[j] or dist[j] is None:
                    continue
                if pick is None or dist[j] < pick:
                    pick, pick_j = dist[j], j
            if pick is None:
                return None
            in_tree[pick_j] = True
            out.append((pick[1], pick[2]))
            for j in range(g):
                if in_tree[j]:
                    continue
                cand = best_link.get((min(pick_j, j), max(pick_j, j)))
                if cand is not None and (dist[j] is None or cand < dist[j]):
                    dist[j] = cand
        return out

    def _groups(self, forest: list[tuple[int, int]]) -> list[list[int]]:
        uf = mst.UnionFind(self.n_comps)
        for u, v in forest:
            cu, cv = self.comp.get(u), self.comp.get(v)
            if cu is not None and cv is not None:
                uf.union(cu, cv)
        groups: dict[int, list[int]] = {}
        for c in range(self.n_comps):
            groups.setdefault(uf.find(c), []).append(c)
        return list(groups.values())

    def completion_links(self, forest: list[tuple[int, int]]) -> list[tuple[int, int]] | None:
        if self.n_comps <= 1:
            return []
        return self._prim(self._groups(forest))

    def full_merge_completion(self) -> float:
        """Completion cost with every purple component pre-merged (lower bound)."""
        purple_comps = sorted({self.comp[p] for p in self.engine.purple if p in self.comp})
        uf = mst.UnionFind(self.n_comps)
        for a, b in zip(purple_comps, purple_comps[1:]):
            uf.union(a, b)
        groups: dict[int, list[int]] = {}
        for c in range(self.n_comps):
            groups.setdefault(uf.find(c), []).append(c)
        links = self._prim(list(groups.values()))
        if links is None:
            return math.inf
        return sum(self.engine._dist(a, b) for a, b in links)


def solve_pair(proj: PairProjection, m_limit: int = 9) -> Solution:
    """Minimum-cost CSG of a 2-color projection, exact.

    Refuses when the number of bichromatic points exceeds ``m_limit``.  The
    result contains the forced edges of both colors and carries ratio 1.0;
    edges are reported in base-instance indices.
    """
    m = int(proj.purple().size)
    if m > m_limit:
        raise RefusalError(f"m={m} bichromatic points exceed the limit of {m_limit}")
    return _Engine(proj).solve("exact2")


def spans_projection(proj: PairProjection, edges) -> bool:
    """Connectivity check for a pair solve: both projected colors span,
    with group_merge blocks treated as pre-connected."""
    from . import core as _core

    pos = {int(g): i for i, g in enumerate(proj.idx)}
    arr = _core.as_edges(edges, proj.base.n)
    for which in (0, 1):
        bit = 1 << which
        members = [i for i in range(proj.n) if int(proj.bits[i]) & bit]
        if len(members) <= 1:
            continue
        uf = mst.UnionFind(proj.n)
        for block in proj.group_merge:
            inside = sorted(pos[int(p)] for p in block if int(p) in pos)
            for a, b in zip(inside, inside[1:]):
                uf.union(a, b)
        for a, b in arr:
            pa, pb = pos.get(int(a)), pos.get(int(b))
            if pa is None or pb is None:
                continue
            if int(proj.bits[pa]) & bit and int(proj.bits[pb]) & bit:
                uf.union(pa, pb)
        root = uf.find(members[0])
        if any(uf.find(m) != root for m in members[1:]):
            return False
    return True


def completion_cost(proj: PairProjection, forest) -> float:
    """Formula value of one purple forest: w(f) plus both color worlds.

    Each color world contributes its forced-forest weight plus the minimum
    completion of the world contracted by (forced + group_merge + f); an edge
    used by both worlds is paid once per world here (the solver's enumeration
    covers it via the branch with the edge inside f).
    """
    engine = _Engine(proj)
    purple = [int(p) for p in proj.purple()]
    f_local = [(purple[u], purple[v]) for u, v in forest]
    return engine.formula_cost(f_local)
