"""Domain model for colored point sets and their spanning graphs.

A problem instance is a set of planar points, each labeled with a nonempty
subset of k primary colors.  An edge set is a *colored spanning graph* (CSG)
when, for every color c, the points carrying c induce a connected subgraph
through the edges whose endpoints share c.  Everything downstream (exact
solvers, approximations, the brute-force oracle, gadget generation) works on
the types defined here.

Colors are 1-based externally and stored as bitmasks internally (bit c-1 set
iff the point carries color c).  Point sets are array-backed so that very
large generated instances stay cheap.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

MAX_COLORS = 16

# Relative tolerance used by every cost-equality check in the project.
COST_RTOL = 1e-9


class FormatError(ValueError):
    """Malformed document, invalid parameter, or broken instance invariant."""


class RefusalError(RuntimeError):
    """A solver declined the input because a configured limit was exceeded."""


# ---------------------------------------------------------------------------
# color sets


def mask_of(colors: Iterable[int], k: int = MAX_COLORS) -> int:
    """Encode a collection of 1-based colors as a bitmask."""
    m = 0
    for c in colors:
        c = int(c)
        if not 1 <= c <= k:
            raise FormatError(f"color out of range: {c} (k={k})")
        m |= 1 << (c - 1)
    return m


def colors_of(mask: int) -> frozenset[int]:
    """Decode a bitmask into the frozenset of 1-based colors."""
    return frozenset(c + 1 for c in range(int(mask).bit_length()) if mask >> c & 1)


@dataclass(frozen=True)
class Point:
    """A planar point with its color membership set."""

    x: float
    y: float
    colors: frozenset[int]

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise FormatError("point coordinates must be finite")
        if not self.colors:
            raise FormatError("point color set must be nonempty")


# ---------------------------------------------------------------------------
# instances


class Instance:
    """A colored point set: k primary colors plus n points with color masks.

    Coordinates live in ``xy`` (n x 2 float64) and color sets in ``masks``
    (n uint32 bitmasks).  Both arrays are frozen after construction; all
    higher-level types treat instances as immutable values.
    """

    __slots__ = ("k", "xy", "masks", "_classes")

    def __init__(self, k: int, points: Iterable[Point | tuple] = ()):
        pts = []
        for p in points:
            if not isinstance(p, Point):
                x, y, colors = p
                p = Point(float(x), float(y), frozenset(colors))
            pts.append(p)
        xy = np.array([(p.x, p.y) for p in pts], dtype=np.float64).reshape(-1, 2)
        masks = np.array([mask_of(p.colors, k) for p in pts], dtype=np.uint32)
        self._init_arrays(k, xy, masks)

    @classmethod
    def from_arrays(cls, k: int, xy: np.ndarray, masks: np.ndarray) -> "Instance":
        inst = cls.__new__(cls)
        inst._init_arrays(
            k,
            np.array(xy, dtype=np.float64, copy=True),
            np.array(masks, dtype=np.uint32, copy=True),
        )
        return inst

    def _init_arrays(self, k: int, xy: np.ndarray, masks: np.ndarray) -> None:
        if not 1 <= int(k) <= MAX_COLORS:
            raise FormatError(f"k must be in 1..{MAX_COLORS}, got {k}")
        if xy.ndim != 2 or xy.shape[1] != 2 or xy.shape[0] != masks.shape[0]:
            raise FormatError("coordinate/mask arrays are inconsistent")
        if xy.shape[0] < 1:
            raise FormatError("an instance needs at least one point")
        if not np.isfinite(xy).all():
            raise FormatError("point coordinates must be finite")
        if (masks == 0).any():
            raise FormatError("empty color set on a point")
        if (masks >> k).any():
            bad = int(np.flatnonzero(masks >> k)[0])
            raise FormatError(f"color out of range on point {bad} (k={k})")
        # The collinear DP's unique-endpoint rule assumes distinct points.
        if np.unique(xy, axis=0).shape[0] != xy.shape[0]:
            raise FormatError("coincident points are not allowed")
        xy.setflags(write=False)
        masks.setflags(write=False)
        self.k = int(k)
        self.xy = xy
        self.masks = masks
        self._classes = {}

    @property
    def n(self) -> int:
        return self.xy.shape[0]

    def point(self, i: int) -> Point:
        return Point(float(self.xy[i, 0]), float(self.xy[i, 1]), colors_of(int(self.masks[i])))

    def points(self) -> list[Point]:
        return [self.point(i) for i in range(self.n)]

    def color_set(self, i: int) -> frozenset[int]:
        return colors_of(int(self.masks[i]))

    def color_class(self, c: int) -> np.ndarray:
        """Indices of the points carrying color c (cached)."""
        if not 1 <= c <= self.k:
            raise FormatError(f"color out of range: {c}")
        got = self._classes.get(c)
        if got is None:
            got = np.flatnonzero(self.masks & np.uint32(1 << (c - 1)))
            got.setflags(write=False)
            self._classes[c] = got
        return got

    def multichromatic(self) -> np.ndarray:
        """Boolean mask of points carrying more than one color."""
        m = self.masks.astype(np.int64)
        return (m & (m - 1)) != 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Instance)
            and self.k == other.k
            and self.xy.shape == other.xy.shape
            and bool(np.all(self.xy == other.xy))
            and bool(np.all(self.masks == other.masks))
        )

    def __repr__(self) -> str:
        return f"Instance(k={self.k}, n={self.n})"


# ---------------------------------------------------------------------------
# edge sets

_EMPTY_EDGES = np.zeros((0, 2), dtype=np.int64)
_EMPTY_EDGES.setflags(write=False)


def as_edges(edges, n: int | None = None) -> np.ndarray:
    """Canonicalize an edge collection: int64 (m, 2), a < b, sorted, deduped."""
    if isinstance(edges, np.ndarray) and edges.size == 0:
        return _EMPTY_EDGES
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    if arr.size == 0:
        return _EMPTY_EDGES
    arr = arr.reshape(-1, 2)
    lo = arr.min(axis=1)
    hi = arr.max(axis=1)
    if (lo == hi).any():
        raise FormatError("self-loop edge")
    arr = np.unique(np.stack([lo, hi], axis=1), axis=0)
    if n is not None and (lo.min() < 0 or hi.max() >= n):
        raise FormatError("edge endpoint out of range")
    return arr


def merge_edges(*edge_sets) -> np.ndarray:
    parts = [as_edges(e) for e in edge_sets if len(e)]
    if not parts:
        return _EMPTY_EDGES
    return as_edges(np.concatenate(parts, axis=0))


def edge_color_mask(inst: Instance, a: int, b: int) -> int:
    return int(inst.masks[a] & inst.masks[b])


def edge_color(inst: Instance, e: Sequence[int]) -> frozenset[int]:
    """Shared colors of an edge: the intersection of its endpoint color sets."""
    a, b = int(e[0]), int(e[1])
    if a == b or not (0 <= a < inst.n and 0 <= b < inst.n):
        raise FormatError(f"invalid edge ({a}, {b})")
    return colors_of(edge_color_mask(inst, a, b))


def edge_lengths(inst: Instance, edges) -> np.ndarray:
    e = as_edges(edges, inst.n)
    d = inst.xy[e[:, 0]] - inst.xy[e[:, 1]]
    return np.hypot(d[:, 0], d[:, 1])


def solution_cost(inst: Instance, edges) -> float:
    """Total Euclidean length of an edge set (0 for the empty set)."""
    return float(np.sum(edge_lengths(inst, edges)))


def is_csg(inst: Instance, edges) -> bool:
    """Check the colored-spanning-graph property.

    For every color c the subgraph induced by the class of c, using only the
    edges whose endpoints share c, must be connected (vacuous for classes of
    size <= 1).  Edges with an empty shared color set are ignored.
    """
    e = as_edges(edges, inst.n)
    shared = (inst.masks[e[:, 0]] & inst.masks[e[:, 1]]) if e.size else np.zeros(0, np.uint32)
    for c in range(1, inst.k + 1):
        members = inst.color_class(c)
        if members.size <= 1:
            continue
        ec = e[(shared & np.uint32(1 << (c - 1))) != 0]
        if ec.shape[0] < members.size - 1:
            return False
        pos = np.full(inst.n, -1, dtype=np.int64)
        pos[members] = np.arange(members.size)
        g = coo_matrix(
            (np.ones(ec.shape[0]), (pos[ec[:, 0]], pos[ec[:, 1]])),
            shape=(members.size, members.size),
        )
        if connected_components(g, directed=False, return_labels=False) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# solutions


@dataclass(frozen=True, eq=False)
class Solution:
    """An edge set with its cost, producing algorithm, and certified ratio."""

    algorithm: str
    cost: float
    edges: np.ndarray
    ratio_bound: float | None = None

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(a), int(b)) for a, b in self.edges}


def make_solution(
    inst: Instance, edges, algorithm: str, ratio_bound: float | None = None
) -> Solution:
    e = as_edges(edges, inst.n)
    return Solution(algorithm=algorithm, cost=solution_cost(inst, e), edges=e, ratio_bound=ratio_bound)


def costs_equal(a: float, b: float, rtol: float = COST_RTOL) -> bool:
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


# ---------------------------------------------------------------------------
# JSON formats


def instance_to_json(inst: Instance) -> str:
    doc = {
        "k": inst.k,
        "points": [
            {
                "x": float(inst.xy[i, 0]),
                "y": float(inst.xy[i, 1]),
                "colors": sorted(colors_of(int(inst.masks[i]))),
            }
            for i in range(inst.n)
        ],
    }
    return json.dumps(doc)


def load_instance(source: str | bytes | IO) -> Instance:
    """Parse the JSON instance format, preserving point order.

    Raises FormatError for malformed documents, out-of-range colors, empty
    color sets, bad k, or coincident points.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed instance document: {exc}") from exc
    if not isinstance(doc, dict) or "k" not in doc or "points" not in doc:
        raise FormatError("instance document needs 'k' and 'points'")
    k = doc["k"]
    if not isinstance(k, int) or k < 1:
        raise FormatError(f"k must be a positive integer, got {k!r}")
    pts = []
    for rec in doc["points"]:
        try:
            pts.append((float(rec["x"]), float(rec["y"]), [int(c) for c in rec["colors"]]))
        except (TypeError, KeyError, ValueError) as exc:
            raise FormatError(f"malformed point record: {rec!r}") from exc
        if not pts[-1][2]:
            raise FormatError("empty color set on a point")
    return Instance(k, [(x, y, frozenset(cs)) for x, y, cs in pts])


def save_instance(inst: Instance, target: str | IO) -> None:
    text = instance_to_json(inst)
    if isinstance(target, str):
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        target.write(text)


def solution_to_json(sol: Solution) -> str:
    doc = {
        "algorithm": sol.algorithm,
        "cost": sol.cost,
        "edges": [[int(a), int(b)] for a, b in sol.edges],
        "ratio_bound": sol.ratio_bound,
    }
    return json.dumps(doc)


def solution_from_json(source: str | bytes | IO) -> Solution:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed solution document: {exc}") from exc
    try:
        return Solution(
            algorithm=str(doc["algorithm"]),
            cost=float(doc["cost"]),
            edges=as_edges(doc["edges"]),
            ratio_bound=None if doc.get("ratio_bound") is None else float(doc["ratio_bound"]),
        )
    except (TypeError, KeyError) as exc:
        raise FormatError(f"malformed solution document: {exc}") from exc


# ---------------------------------------------------------------------------
# generators


def _random_colors(rng: np.random.Generator, k: int, multi: bool, anchor: int | None) -> int:
    """One random color mask; multichromatic sets have size >= 2."""
    if multi:
        size = int(rng.integers(2, k + 1))
        pool = [c for c in range(1, k + 1) if c != anchor]
        take = size - 1 if anchor is not None else size
        chosen = list(rng.choice(pool, size=take, replace=False)) if take else []
        if anchor is not None:
            chosen.append(anchor)
        return mask_of(chosen, k)
    if anchor is not None:
        return mask_of([anchor], k)
    return mask_of([int(rng.integers(1, k + 1))], k)


def _assign_colors(rng: np.random.Generator, n: int, k: int, fraction: float) -> np.ndarray:
    if not 0.0 <= fraction <= 1.0:
        raise FormatError(f"multichromatic fraction must be in [0, 1], got {fraction}")
    n_multi = int(math.floor(fraction * n))
    if n_multi > 0 and k < 2:
        raise FormatError("multichromatic points require k >= 2")
    perm = rng.permutation(n)
    is_multi = np.zeros(n, dtype=bool)
    is_multi[perm[:n_multi]] = True
    # Anchor every color to one point so all classes are nonempty when n >= k.
    anchor_of = {}
    if n >= k:
        order = rng.permutation(n)
        for c in range(1, k + 1):
            anchor_of[int(order[c - 1])] = c
    masks = np.zeros(n, dtype=np.uint32)
    for i in range(n):
        masks[i] = _random_colors(rng, k, bool(is_multi[i]), anchor_of.get(i))
    return masks


def generate_random(n: int, k: int, multichromatic_fraction: float, seed: int) -> Instance:
    """Seeded random instance: n uniform points in the unit square.

    floor(fraction * n) points get a random color set of size >= 2, the rest a
    random singleton; every primary color is assigned to at least one point
    when n >= k.
    """
    if n < 1 or not 1 <= k <= MAX_COLORS:
        raise FormatError(f"invalid parameters n={n}, k={k}")
    rng = np.random.default_rng(seed)
    xy = rng.random((n, 2))
    while np.unique(xy, axis=0).shape[0] != n:  # pragma: no cover - measure zero
        xy = rng.random((n, 2))
    return Instance.from_arrays(k, xy, _assign_colors(rng, n, k, multichromatic_fraction))


def generate_collinear(n: int, k: int, multichromatic_fraction: float, seed: int) -> Instance:
    """Seeded random collinear instance on the x-axis, strictly increasing x."""
    if n < 1 or not 1 <= k <= MAX_COLORS:
        raise FormatError(f"invalid parameters n={n}, k={k}")
    rng = np.random.default_rng(seed)
    gaps = rng.random(n) + 1e-3
    x = np.cumsum(gaps)
    xy = np.stack([x, np.zeros(n)], axis=1)
    return Instance.from_arrays(k, xy, _assign_colors(rng, n, k, multichromatic_fraction))


def generate_all_black(n: int, seed: int) -> Instance:
    """Random points that all carry every color of a 3-color instance."""
    if n < 1:
        raise FormatError("n must be >= 1")
    rng = np.random.default_rng(seed)
    xy = rng.random((n, 2))
    masks = np.full(n, mask_of([1, 2, 3], 3), dtype=np.uint32)
    return Instance.from_arrays(3, xy, masks)
