import pytest

from prismext.exceptions import PreconditionError
from prismext.models.outcome import OutcomeStatus
from prismext.models.report import EnumerationMode
from prismext.services.extenders.cycles import extend_even_cycle_prism, extend_odd_cycle_prism
from prismext.services.fixtures import odd_cycle_corresponding_pair, odd_cycle_four_edges
from prismext.services.graph_core import build_cycle, prism
from prismext.services.oracle import enumerate_precolorings, extend_exhaustive
from tests.helpers import assert_extends, prism_coloring


def _exhaustive(n, palette, colored, extender, arg):
    d = prism(build_cycle(n))
    for j in range(colored + 1):
        for c in enumerate_precolorings(d.product, palette, j, EnumerationMode.exhaustive(force=True)):
            outcome, trace = extender(arg, c)
            assert_extends(outcome, c)
            assert not trace.fallback, trace.labels


def _list_steps(trace):
    return [label for label in trace.labels if "списки на" in label]


# Even cycles
def test_c4_corresponding_edges_same_color():
    d = prism(build_cycle(4))
    c = prism_coloring(d, 3, copy1={0: 1}, copy2={0: 1})
    outcome, trace = extend_even_cycle_prism(2, c)
    assert_extends(outcome, c)
    assert trace.route == "even-cycle"
    assert not trace.fallback


def test_c6_two_matching_edges_different_colors():
    d = prism(build_cycle(6))
    c = prism_coloring(d, 3, matching={0: 1, 3: 2})
    outcome, trace = extend_even_cycle_prism(3, c)
    assert_extends(outcome, c)
    assert "копия 1: списки на цикле" in trace.labels
    assert not trace.fallback


def test_c6_adjacent_matching_edges_color_paths_from_lists():
    d = prism(build_cycle(6))
    c = prism_coloring(d, 3, matching={0: 1, 1: 2})
    outcome, trace = extend_even_cycle_prism(3, c)
    assert_extends(outcome, c)
    assert "два ребра M разных цветов на расстоянии 1" in trace.labels
    assert "копия 1: списки на пути" in trace.labels
    assert not trace.fallback


def test_c4_matching_and_copy_edge_same_color():
    d = prism(build_cycle(4))
    c4 = d.base
    c = prism_coloring(d, 3, copy2={c4.edge_id(1, 2): 1}, matching={0: 1})
    outcome, trace = extend_even_cycle_prism(2, c)
    assert_extends(outcome, c)
    assert _list_steps(trace) == ["копия 2: списки на пути"]


def test_c4_exhaustive():
    _exhaustive(4, 3, 2, extend_even_cycle_prism, 2)


def test_even_cycle_preconditions():
    d = prism(build_cycle(4))
    with pytest.raises(PreconditionError):
        extend_even_cycle_prism(2, prism_coloring(d, 3, copy1={0: 1}, copy2={1: 2}, matching={3: 3}))
    with pytest.raises(PreconditionError):
        extend_even_cycle_prism(2, prism_coloring(d, 4, copy1={0: 1}))
    with pytest.raises(PreconditionError):
        extend_even_cycle_prism(1, prism_coloring(d, 3))


# Odd cycles
def test_triangle_prism_three_edges():
    d = prism(build_cycle(3))
    c = prism_coloring(d, 4, copy1={0: 1}, copy2={1: 2}, matching={2: 3})
    outcome, trace = extend_odd_cycle_prism(1, c)
    assert_extends(outcome, c)
    assert not trace.fallback


def test_triangle_prism_exhaustive():
    _exhaustive(3, 4, 3, extend_odd_cycle_prism, 1)


def test_c5_corresponding_edges_with_four_colors():
    d = prism(build_cycle(5))
    c = prism_coloring(d, 4, copy1={0: 1}, copy2={0: 2})
    outcome, trace = extend_odd_cycle_prism(2, c)
    assert_extends(outcome, c)
    assert _list_steps(trace) == ["копия 1: списки на пути", "копия 2: списки на пути"]


def test_c5_one_matching_edge_and_edge_in_each_copy():
    d = prism(build_cycle(5))
    c5 = d.base
    c = prism_coloring(d, 4, copy1={c5.edge_id(0, 1): 2}, copy2={c5.edge_id(2, 3): 1}, matching={1: 1})
    outcome, trace = extend_odd_cycle_prism(2, c)
    assert_extends(outcome, c)
    assert len(_list_steps(trace)) == 2
    assert not trace.fallback


def test_c5_three_matching_edges_colored_first():
    d = prism(build_cycle(5))
    c = prism_coloring(d, 4, matching={0: 1, 1: 2, 3: 3})
    outcome, trace = extend_odd_cycle_prism(2, c)
    assert_extends(outcome, c)
    assert "копия 1: списки на цикле" in trace.labels
    matching = {v: outcome.coloring.assignment[d.matching_edges[v]] for v in (2, 4)}
    assert matching == {2: 4, 4: 4}


def test_odd_cycle_palette_three_rejected():
    with pytest.raises(PreconditionError):
        extend_odd_cycle_prism(2, odd_cycle_corresponding_pair(2))


def test_negative_fixtures_not_extendable():
    for n in (1, 2, 3):
        assert extend_exhaustive(odd_cycle_corresponding_pair(n)).status is OutcomeStatus.NOT_EXTENDABLE
        assert extend_exhaustive(odd_cycle_four_edges(n)).status is OutcomeStatus.NOT_EXTENDABLE


def test_four_edges_exceed_bound():
    with pytest.raises(PreconditionError):
        extend_odd_cycle_prism(2, odd_cycle_four_edges(2))


# Acceptance
@pytest.mark.slow
@pytest.mark.parametrize("n", [6, 8])
def test_even_cycles_exhaustive(n):
    _exhaustive(n, 3, 2, extend_even_cycle_prism, n // 2)


@pytest.mark.slow
@pytest.mark.parametrize("n", [5, 7])
def test_odd_cycles_exhaustive(n):
    _exhaustive(n, 4, 3, extend_odd_cycle_prism, (n - 1) // 2)
