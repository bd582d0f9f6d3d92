from itertools import product

import pytest

from prismext.exceptions import PreconditionError
from prismext.services.extenders.lists import cycle_order, list_color_cycle, list_color_path, path_order
from prismext.services.graph_core import build_cycle, build_path, build_star


def _proper_from_lists(g, lists, colors):
    if set(colors) != set(range(g.edge_count)):
        return False
    if any(colors[e] not in lists[e] for e in colors):
        return False
    return all(colors[e] != colors[f] for e in colors for f in g.edge_neighbors[e])


# Paths
def test_path_forced_pair():
    p = build_path(3)
    assert list_color_path(p, {0: {1}, 1: {1, 2}}) == {0: 1, 1: 2}


def test_path_sweep_from_short_list():
    p = build_path(4)
    colors = list_color_path(p, {0: {2}, 1: {1, 2}, 2: {1, 2}})
    assert [colors[e] for e in path_order(p)] == [2, 1, 2]


def test_path_all_pairs_alternate():
    p = build_path(5)
    colors = list_color_path(p, {e: {1, 2} for e in range(4)})
    assert [colors[e] for e in path_order(p)] == [1, 2, 1, 2]


def test_path_designated_edge():
    p = build_path(4)
    colors = list_color_path(p, {0: {1, 2}, 1: {2}, 2: {1, 2}}, designated=1)
    assert colors == {0: 1, 1: 2, 2: 1}


def test_path_short_list_in_the_middle():
    p = build_path(6)
    lists = {0: {1, 3}, 1: {2, 3}, 2: {3}, 3: {1, 3}, 4: {2, 3}}
    assert _proper_from_lists(p, lists, list_color_path(p, lists))


def test_path_preconditions():
    p = build_path(4)
    with pytest.raises(PreconditionError):
        list_color_path(p, {0: {1}, 1: {1}, 2: {1, 2}})
    with pytest.raises(PreconditionError):
        list_color_path(p, {0: {1}, 1: {1, 2}})
    with pytest.raises(PreconditionError):
        list_color_path(p, {0: set(), 1: {1, 2}, 2: {1, 2}})
    with pytest.raises(PreconditionError):
        path_order(build_star(3))


# Cycles
def test_cycle_c3_mixed_lists():
    c3 = build_cycle(3)
    lists = {0: {1, 2}, 1: {1, 2}, 2: {1, 3}}
    assert _proper_from_lists(c3, lists, list_color_cycle(c3, lists))


def test_cycle_all_equal_rejected():
    with pytest.raises(PreconditionError):
        list_color_cycle(build_cycle(4), {e: {1, 2} for e in range(4)})
    with pytest.raises(PreconditionError):
        list_color_cycle(build_cycle(5), {e: {1, 2, 3} for e in range(5)})


def test_cycle_short_list_rejected():
    lists = {e: {1, 2} for e in range(5)}
    lists[2] = {3}
    with pytest.raises(PreconditionError):
        list_color_cycle(build_cycle(5), lists)


def test_cycle_c5_one_different_list():
    c5 = build_cycle(5)
    lists = {e: {1, 2} for e in range(5)}
    lists[4] = {2, 3}
    assert _proper_from_lists(c5, lists, list_color_cycle(c5, lists))


def test_cycle_direct_on_all_list_pairs_c4():
    c4 = build_cycle(4)
    options = [{1, 2}, {1, 3}, {2, 3}]
    for combo in product(options, repeat=4):
        lists = dict(enumerate(combo))
        if len(set(map(frozenset, combo))) == 1:
            continue
        assert _proper_from_lists(c4, lists, list_color_cycle(c4, lists))


def test_cycle_direct_on_all_list_pairs_c5():
    c5 = build_cycle(5)
    options = [{1, 2}, {1, 3}, {2, 3}, {1, 2, 3}]
    for combo in product(options, repeat=5):
        if len(set(map(frozenset, combo))) == 1:
            continue
        lists = dict(enumerate(combo))
        assert _proper_from_lists(c5, lists, list_color_cycle(c5, lists))


def test_cycle_order_walks_cycle():
    order = cycle_order(build_cycle(5))
    assert sorted(order) == list(range(5))
    assert order[0] == 0
