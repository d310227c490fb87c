"""Brute-force ground truth and the approximation-ratio benchmark harness.

The oracle enumerates subsets of the candidate edges (pairs with a nonempty
shared color) with branch-and-bound and is the arbiter for every acceptance
test.  A second, unpruned enumerator cross-checks the pruning logic on small
inputs.
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import IO, Iterable

import numpy as np

from .core import (
    Instance,
    RefusalError,
    Solution,
    as_edges,
    generate_all_black,
    generate_collinear,
    generate_random,
    make_solution,
)


@dataclass(frozen=True)
class OracleBudget:
    """Search limits: refuse instances whose candidate set is too large."""

    max_candidate_edges: int = 22
    time_limit: float | None = None


def _line_order(inst: Instance) -> np.ndarray:
    return np.lexsort((inst.xy[:, 1], inst.xy[:, 0]))


def candidate_edges(inst: Instance, star_restricted: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Candidate pairs (nonempty shared color), ascending by (weight, a, b).

    With ``star_restricted`` an edge is dropped when a point between its
    endpoints (in order along the line) carries all the edge's shared colors;
    only meaningful for collinear instances.
    """
    n = inst.n
    a, b = np.triu_indices(n, k=1)
    shared = inst.masks[a] & inst.masks[b]
    keep = shared != 0
    a, b, shared = a[keep], b[keep], shared[keep]
    if star_restricted and a.size:
        order = _line_order(inst)
        rank = np.empty(n, dtype=np.int64)
        rank[order] = np.arange(n)
        ok = np.ones(a.size, dtype=bool)
        for i in range(a.size):
            lo, hi = sorted((rank[a[i]], rank[b[i]]))
            between = order[lo + 1 : hi]
            if between.size and np.any((inst.masks[between] & shared[i]) == shared[i]):
                ok[i] = False
        a, b = a[ok], b[ok]
    if a.size == 0:
        return as_edges(()), np.zeros(0)
    d = inst.xy[a] - inst.xy[b]
    w = np.hypot(d[:, 0], d[:, 1])
    order = np.lexsort((b, a, w))
    edges = np.stack([a, b], axis=1)[order].astype(np.int64)
    return edges, w[order]


class _ColorState:
    """Undoable union-find for one color class (no path compression)."""

    __slots__ = ("bit", "pos", "parent", "rank", "comps", "trail")

    def __init__(self, inst: Instance, c: int):
        members = inst.color_class(c)
        self.bit = 1 << (c - 1)
        self.pos = {int(p): i for i, p in enumerate(members)}
        self.parent = list(range(members.size))
        self.rank = [0] * members.size
        self.comps = members.size
        self.trail: list[tuple[int, int]] = []

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(self.pos[a]), self.find(self.pos[b])
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
            self.trail.append((rb, -ra - 1))
        else:
            self.trail.append((rb, ra))
        self.comps -= 1
        return True

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            child, info = self.trail.pop()
            self.parent[child] = child
            if info < 0:
                self.rank[-info - 1] -= 1
            self.comps += 1


def _split_colors(inst: Instance) -> list[_ColorState]:
    return [_ColorState(inst, c) for c in range(1, inst.k + 1) if inst.color_class(c).size >= 2]


def brute_force(
    inst: Instance,
    budget: OracleBudget | None = None,
    *,
    star_restricted: bool = False,
    required: Iterable = (),
) -> Solution:
    """Exhaustive minimum-cost CSG search with branch-and-bound.

    ``required`` edges are forced into every considered subset.  Refuses the
    instance when the candidate-edge count exceeds the budget.
    """
    budget = budget or OracleBudget()
    edges, weights = candidate_edges(inst, star_restricted)
    m = edges.shape[0]
    if m > budget.max_candidate_edges:
        raise RefusalError(
            f"{m} candidate edges exceed the oracle budget of {budget.max_candidate_edges}"
        )
    colors = _split_colors(inst)
    req = {(int(a), int(b)) for a, b in as_edges(required, inst.n)}

    # Per color: candidate positions carrying it (ascending weight) + prefix sums.
    per_color_pos: list[list[int]] = []
    per_color_pref: list[list[float]] = []
    for st in colors:
        pos = [i for i in range(m) if st.pos.get(int(edges[i, 0])) is not None
               and st.pos.get(int(edges[i, 1])) is not None]
        pref = [0.0]
        for i in pos:
            pref.append(pref[-1] + float(weights[i]))
        per_color_pos.append(pos)
        per_color_pref.append(pref)

    best_cost = math.inf
    best_edges: tuple[tuple[int, int], ...] | None = None

    def connected() -> bool:
        return all(st.comps == 1 for st in colors)

    def lower_bound(idx: int, partial: float) -> float:
        lb_extra = 0.0
        for ci, st in enumerate(colors):
            need = st.comps - 1
            if need <= 0:
                continue
            pos = per_color_pos[ci]
            j = bisect_left(pos, idx)
            if len(pos) - j < need:
                return math.inf
            pref = per_color_pref[ci]
            lb_extra = max(lb_extra, pref[j + need] - pref[j])
        return partial + lb_extra

    def record(partial: float, included: list[tuple[int, int]]) -> None:
        nonlocal best_cost, best_edges
        key = tuple(sorted(included))
        if partial < best_cost or (partial == best_cost and (best_edges is None or key < best_edges)):
            best_cost = partial
            best_edges = key

    def dfs(idx: int, partial: float, included: list[tuple[int, int]]) -> None:
        if connected():
            record(partial, included)
            return
        if idx == m:
            return
        if lower_bound(idx, partial) > best_cost:
            return
        a, b = int(edges[idx, 0]), int(edges[idx, 1])
        marks = [st.mark() for st in colors]
        useful = False
        for st in colors:
            if a in st.pos and b in st.pos and st.union(a, b):
                useful = True
        if useful:
            included.append((a, b))
            dfs(idx + 1, partial + float(weights[idx]), included)
            included.pop()
        for st, mk in zip(colors, marks):
            st.undo(mk)
        dfs(idx + 1, partial, included)

    # Seed the required edges once, up front.
    base_included: list[tuple[int, int]] = []
    base_cost = 0.0
    cand_index = {(int(edges[i, 0]), int(edges[i, 1])): i for i in range(m)}
    for pair in sorted(req):
        if pair not in cand_index:
            raise RefusalError(f"required edge {pair} is not a candidate edge")
        for st in colors:
            if pair[0] in st.pos and pair[1] in st.pos:
                st.union(*pair)
        base_included.append(pair)
        base_cost += float(weights[cand_index[pair]])

    if req:
        # Required edges are already merged; search the rest normally but skip
        # re-including them (they are in every subset by construction).
        rest = [i for i in range(m) if (int(edges[i, 0]), int(edges[i, 1])) not in req]

        def dfs_req(k: int, partial: float, included: list[tuple[int, int]]) -> None:
            if connected():
                record(partial, included)
                return
            if k == len(rest):
                return
            idx = rest[k]
            if lower_bound(idx, partial) > best_cost:
                return
            a, b = int(edges[idx, 0]), int(edges[idx, 1])
            marks = [st.mark() for st in colors]
            useful = False
            for st in colors:
                if a in st.pos and b in st.pos and st.union(a, b):
                    useful = True
            if useful:
                included.append((a, b))
                dfs_req(k + 1, partial + float(weights[idx]), included)
                included.pop()
            for st, mk in zip(colors, marks):
                st.undo(mk)
            dfs_req(k + 1, partial, included)

        dfs_req(0, base_cost, base_included)
    else:
        dfs(0, 0.0, [])

    if best_edges is None:
        raise RefusalError("no colored spanning graph exists over the candidate edges")
    return make_solution(inst, best_edges, "oracle", ratio_bound=1.0)


def naive_brute_force(inst: Instance, *, star_restricted: bool = False, max_edges: int = 15) -> Solution:
    """Unpruned full-subset enumeration; cross-checks the branch-and-bound."""
    edges, weights = candidate_edges(inst, star_restricted)
    m = edges.shape[0]
    if m > max_edges:
        raise RefusalError(f"{m} candidate edges exceed the naive enumerator limit of {max_edges}")
    colors = [(1 << (c - 1), [int(p) for p in inst.color_class(c)])
              for c in range(1, inst.k + 1) if inst.color_class(c).size >= 2]
    best = (math.inf, None)
    for subset in range(1 << m):
        chosen = [i for i in range(m) if subset >> i & 1]
        cost = float(sum(weights[i] for i in chosen))
        if cost > best[0]:
            continue
        ok = True
        for bit, members in colors:
            parent = {p: p for p in members}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            comps = len(members)
            for i in chosen:
                a, b = int(edges[i, 0]), int(edges[i, 1])
                if a in parent and b in parent:
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[rb] = ra
                        comps -= 1
            if comps != 1:
                ok = False
                break
        if not ok:
            continue
        key = tuple(sorted((int(edges[i, 0]), int(edges[i, 1])) for i in chosen))
        if cost < best[0] or (cost == best[0] and key < best[1]):
            best = (cost, key)
    if best[1] is None:
        raise RefusalError("no colored spanning graph exists over the candidate edges")
    return make_solution(inst, best[1], "oracle-naive", ratio_bound=1.0)


# ---------------------------------------------------------------------------
# benchmark harness


@dataclass(frozen=True)
class BenchRow:
    seed: int
    n: int
    k: int
    opt: float
    algo: str
    cost: float
    ratio: float


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    failures: list[tuple[int, str, str]] = field(default_factory=list)
    bounds: dict[str, float] = field(default_factory=dict)

    def max_ratio(self, algo: str) -> float:
        vals = [r.ratio for r in self.rows if r.algo == algo]
        return max(vals) if vals else math.nan

    def mean_ratio(self, algo: str) -> float:
        vals = [r.ratio for r in self.rows if r.algo == algo]
        return sum(vals) / len(vals) if vals else math.nan

    def violations(self, tol: float = 1e-9) -> list[BenchRow]:
        return [r for r in self.rows if r.ratio > self.bounds.get(r.algo, math.inf) + tol]

    def write_csv(self, target: str | IO) -> None:
        fh = open(target, "w", newline="", encoding="utf-8") if isinstance(target, str) else target
        try:
            w = csv.writer(fh)
            w.writerow(["seed", "n", "k", "opt", "algo", "cost", "ratio"])
            for r in self.rows:
                w.writerow([r.seed, r.n, r.k, repr(r.opt), r.algo, repr(r.cost), repr(r.ratio)])
        finally:
            if isinstance(target, str):
                fh.close()


def _make_family(family: str, seed: int, n_max: int, k: int, fraction: float) -> Instance:
    n = 3 + seed % max(1, n_max - 2)
    if family == "random":
        return generate_random(n, k, fraction, seed)
    if family == "collinear":
        return generate_collinear(n, k, fraction, seed)
    if family == "allblack":
        return generate_all_black(n, seed)
    raise ValueError(f"unknown family: {family}")


def ratio_bench(
    family: str,
    algorithms: list[str],
    seeds: int,
    *,
    n_max: int = 6,
    k: int = 3,
    fraction: float = 0.5,
    budget: OracleBudget | None = None,
    rho: float = 1.21,
    m_limit: int = 9,
) -> BenchReport:
    """Compare algorithms against the brute-force optimum over seeded instances.

    Per-seed generation or budget failures are recorded and the run continues.
    """
    from . import approx3, exact2  # local import: approx3 builds on this module's callers

    config = approx3.ApproxConfig(steiner_ratio_bound=rho)
    report = BenchReport(bounds={"a1": 2.0, "a2": config.ratio_a2, "exact2": 1.0})

    def run_algo(name: str, inst: Instance) -> Solution:
        if name == "a1":
            return approx3.approx_a1(inst, m_limit=m_limit, config=config)
        if name == "a2":
            return approx3.approx_a2(inst, m_limit=m_limit, config=config)
        if name == "exact2":
            return exact2.solve_pair(exact2.project_pair(inst, 1, 2), m_limit=m_limit)
        raise ValueError(f"unknown algorithm: {name}")

    for seed in range(seeds):
        try:
            inst = _make_family(family, seed, n_max, k, fraction)
            opt = brute_force(inst, budget).cost
        except (RefusalError, ValueError) as exc:
            report.failures.append((seed, "generate/oracle", str(exc)))
            continue
        for name in algorithms:
            try:
                sol = run_algo(name, inst)
            except RefusalError as exc:
                report.failures.append((seed, name, str(exc)))
                continue
            if opt <= 0:
                ratio = 1.0 if sol.cost <= 0 else math.inf
            else:
                ratio = sol.cost / opt
            report.rows.append(
                BenchRow(seed=seed, n=inst.n, k=inst.k, opt=opt, algo=name, cost=sol.cost, ratio=ratio)
            )
    return report
