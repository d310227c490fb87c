import numpy as np
import pytest

from mcsg import core, exact2, oracle

SQUARE = core.Instance(2, [(0, 0, {1, 2}), (1, 0, {1, 2}), (0, 1, {1}), (1, 1, {2})])


def proj(inst, merge=()):
    return exact2.project_pair(inst, 1, 2, merge)


def test_square_example():
    sol = exact2.solve_pair(proj(SQUARE))
    assert sol.cost == pytest.approx(3.0)
    assert sol.edge_set() == {(0, 1), (0, 2), (1, 3)}
    assert core.is_csg(SQUARE, sol.edges)


def test_collinear_example():
    inst = core.Instance(2, [(0, 0, {1}), (1, 0, {1, 2}), (2, 0, {2})])
    sol = exact2.solve_pair(proj(inst))
    assert sol.cost == pytest.approx(2.0)
    assert sol.edge_set() == {(0, 1), (1, 2)}


def test_single_color_degenerates_to_mst():
    inst = core.Instance(2, [(0, 0, {1}), (1, 0, {1}), (3, 0, {1})])
    sol = exact2.solve_pair(proj(inst))
    assert sol.cost == pytest.approx(3.0)


def test_m_limit_refusal():
    inst = core.generate_random(11, 2, 1.0, 0)
    with pytest.raises(core.RefusalError, match="limit of 9"):
        exact2.solve_pair(proj(inst), m_limit=9)
    with pytest.raises(core.RefusalError, match="limit of 4"):
        exact2.solve_pair(proj(core.generate_random(6, 2, 1.0, 0)), m_limit=4)


def test_forest_counts():
    counts = [sum(1 for _ in exact2.enumerate_forests(m)) for m in range(1, 6)]
    assert counts == [1, 2, 7, 38, 291]
    first = next(iter(exact2.enumerate_forests(3)))
    assert first == ()


def test_forest_enumeration_unique_and_acyclic():
    seen = set()
    for forest in exact2.enumerate_forests(4):
        assert forest not in seen
        seen.add(forest)
        parent = list(range(4))

        def find(a):
            while parent[a] != a:
                a = parent[a]
            return a

        for u, v in forest:
            ru, rv = find(u), find(v)
            assert ru != rv
            parent[rv] = ru


def test_completion_cost_examples():
    p = proj(SQUARE)
    assert exact2.completion_cost(p, []) == pytest.approx(4.0)
    assert exact2.completion_cost(p, [(0, 1)]) == pytest.approx(3.0)
    plain = core.Instance(2, [(0, 0, {1}), (1, 0, {1}), (0, 2, {2}), (1, 2, {2})])
    assert exact2.completion_cost(proj(plain), []) == pytest.approx(2.0)


def test_completion_cost_relabel_invariant():
    inst = core.generate_random(6, 2, 0.6, 21)
    order = np.array([3, 1, 5, 0, 2, 4])
    relabeled = core.Instance.from_arrays(2, inst.xy[order], inst.masks[order])
    best = min(exact2.completion_cost(proj(inst), f)
               for f in exact2.enumerate_forests(int(proj(inst).purple().size)))
    best2 = min(exact2.completion_cost(proj(relabeled), f)
                for f in exact2.enumerate_forests(int(proj(relabeled).purple().size)))
    assert best == pytest.approx(best2)


@pytest.mark.parametrize("seed", range(40))
def test_matches_oracle(seed):
    inst = core.generate_random(3 + seed % 5, 2, (0.2, 0.5, 1.0)[seed % 3], seed)
    sol = exact2.solve_pair(proj(inst))
    opt = oracle.brute_force(inst)
    assert sol.cost == pytest.approx(opt.cost, rel=1e-9)
    assert core.is_csg(inst, sol.edges)


def test_contains_forced_edges():
    from mcsg import mst

    for seed in range(15):
        inst = core.generate_random(6, 2, 0.5, seed)
        sol = exact2.solve_pair(proj(inst))
        got = sol.edge_set()
        for c in (1, 2):
            for a, b in mst.forced_edges(inst, c).edges:
                assert (int(a), int(b)) in got


def test_group_merge_only_helps():
    for seed in range(15):
        inst = core.generate_random(6, 2, 0.7, seed)
        plain = exact2.solve_pair(proj(inst))
        purple = [int(i) for i in np.flatnonzero(inst.masks == 3)]
        merged = exact2.solve_pair(proj(inst, (frozenset(purple),))) if purple else plain
        assert merged.cost <= plain.cost + 1e-9


def test_projection_of_three_color_instance():
    inst = core.Instance(3, [(0, 0, {1, 3}), (1, 0, {2}), (2, 0, {3})])
    p = exact2.project_pair(inst, 1, 2)
    assert p.idx.tolist() == [0, 1]
    assert p.bits.tolist() == [1, 2]
    assert p.purple().size == 0
