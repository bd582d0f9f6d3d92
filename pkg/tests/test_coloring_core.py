import pytest

from prismext.exceptions import GraphMismatchError, PreconditionError
from prismext.models.coloring import ColorPermutation, PartialEdgeColoring
from prismext.services.coloring_core import (
    agrees_with,
    apply_permutation,
    colors_at,
    find_conflict,
    is_independent,
    is_proper,
    missing_colors,
    normalize_colors,
    precolored_edges,
    restrict,
    with_assignment,
)
from prismext.services.graph_core import build_cycle, build_path, build_star
from prismext.services.oracle import extend_exhaustive


def _coloring(g, palette, pairs):
    return PartialEdgeColoring(graph=g, palette=palette, assignment={g.edge_id(u, v): c for (u, v), c in pairs.items()})


# Properness
def test_opposite_edges_same_color_is_proper():
    c4 = build_cycle(4)
    assert is_proper(_coloring(c4, 2, {(0, 1): 1, (2, 3): 1}))


def test_adjacent_same_color_is_not_proper():
    p3 = build_path(3)
    c = _coloring(p3, 2, {(0, 1): 1, (1, 2): 1})
    assert not is_proper(c)
    assert find_conflict(c) == (1, 1)


def test_empty_is_proper():
    assert is_proper(PartialEdgeColoring.empty(build_cycle(5), 3))


def test_color_outside_palette_rejected():
    with pytest.raises(ValueError):
        _coloring(build_path(3), 2, {(0, 1): 3})


# Colors at vertices
def test_colors_at_star_center():
    star = build_star(3)
    c = _coloring(star, 4, {(0, 1): 1, (0, 2): 2})
    assert colors_at(c, 0) == {1, 2}
    assert missing_colors(c, 0) == {3, 4}
    assert missing_colors(c, 3) == {1, 2, 3, 4}


# Independence
def test_independence():
    c6 = build_cycle(6)
    assert not is_independent(_coloring(c6, 2, {(0, 1): 1, (1, 2): 2}))
    assert is_independent(PartialEdgeColoring.empty(c6, 2))
    matching = _coloring(c6, 2, {(0, 1): 1, (2, 3): 1, (4, 5): 1})
    assert is_independent(matching)
    assert precolored_edges(matching) == sorted(matching.assignment)


# Normalization
def test_normalize_first_appearance():
    p3 = build_path(3)
    c = _coloring(p3, 5, {(0, 1): 5, (1, 2): 2})
    normalized, perm = normalize_colors(c, 2)
    assert normalized.assignment == {0: 1, 1: 2}
    assert apply_permutation(normalized, perm.inverse()).assignment == c.assignment


def test_normalize_reorders_in_range_colors():
    p3 = build_path(3)
    normalized, _ = normalize_colors(_coloring(p3, 3, {(0, 1): 2, (1, 2): 1}), 2)
    assert normalized.assignment == {0: 1, 1: 2}


def test_normalize_too_many_colors():
    p4 = build_path(4)
    with pytest.raises(PreconditionError):
        normalize_colors(_coloring(p4, 3, {(0, 1): 1, (1, 2): 2, (2, 3): 3}), 2)


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        ColorPermutation(mapping=(1, 1, 2))


def test_permutation_preserves_extendability():
    c5 = build_cycle(5)
    c = _coloring(c5, 3, {(0, 1): 1, (2, 3): 2})
    perm = ColorPermutation(mapping=(3, 1, 2))
    permuted = apply_permutation(c, perm)
    assert is_proper(permuted)
    assert extend_exhaustive(c).status == extend_exhaustive(permuted).status


def test_identity_permutation():
    c = _coloring(build_cycle(5), 3, {(0, 1): 1, (2, 3): 2})
    assert apply_permutation(c, ColorPermutation.identity(3)).assignment == c.assignment


# Agreement
def test_agrees_with():
    p3 = build_path(3)
    pre = _coloring(p3, 2, {(0, 1): 1})
    full = extend_exhaustive(pre).coloring
    assert agrees_with(full, pre)
    assert not agrees_with(_coloring(p3, 2, {(0, 1): 2, (1, 2): 1}), pre)
    assert not agrees_with(pre, pre)


def test_agrees_with_graph_mismatch():
    with pytest.raises(GraphMismatchError):
        agrees_with(PartialEdgeColoring.empty(build_path(3), 2), PartialEdgeColoring.empty(build_path(4), 2))


def test_restrict_and_with_assignment():
    p4 = build_path(4)
    c = _coloring(p4, 2, {(0, 1): 1, (2, 3): 2})
    assert restrict(c, [0]).assignment == {0: 1}
    assert with_assignment(c, {1: 2}, palette=3).palette == 3
