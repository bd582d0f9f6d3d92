import pytest

from prismext.exceptions import PreconditionError
from prismext.models.outcome import OutcomeStatus
from prismext.models.report import EnumerationMode
from prismext.services.extenders.complete import complete_prism_bound, extend_complete_prism
from prismext.services.extenders.knn import extend_knn_prism
from prismext.services.fixtures import complete_odd_two_edges
from prismext.services.graph_core import build_complete, build_complete_bipartite, prism
from prismext.services.oracle import enumerate_precolorings, extend_exhaustive
from tests.helpers import assert_extends, fallback_cases, prism_coloring


# K_n,n
def test_k22_prism_exhaustive():
    d = prism(build_complete_bipartite(2, 2))
    for j in range(3):
        for c in enumerate_precolorings(d.product, 3, j):
            outcome, trace = extend_knn_prism(2, c)
            assert_extends(outcome, c)
            assert not trace.fallback, trace.labels


def test_k33_full_copy_uses_supergraph():
    g = build_complete_bipartite(3, 3)
    d = prism(g)
    c = prism_coloring(d, 4, copy1={g.edge_id(0, 3): 1, g.edge_id(1, 4): 2, g.edge_id(2, 5): 3})
    outcome, trace = extend_knn_prism(3, c)
    assert_extends(outcome, c)
    assert trace.route == "knn"
    assert not trace.fallback
    assert "вложение в K_{n+1,n+1}" in trace.labels


def test_k33_matching_edges_one_color():
    g = build_complete_bipartite(3, 3)
    d = prism(g)
    c = prism_coloring(d, 4, copy1={g.edge_id(0, 3): 2}, matching={1: 1, 4: 1})
    outcome, trace = extend_knn_prism(3, c)
    assert_extends(outcome, c)
    assert not trace.fallback


def test_knn_preconditions():
    d = prism(build_complete_bipartite(2, 2))
    with pytest.raises(PreconditionError):
        extend_knn_prism(1, prism_coloring(prism(build_complete_bipartite(1, 1)), 2))
    with pytest.raises(PreconditionError):
        extend_knn_prism(2, prism_coloring(d, 3, matching={0: 1, 1: 2, 2: 3}))


# Complete graphs
def test_bound():
    assert [complete_prism_bound(m) for m in (3, 4, 5, 6, 7)] == [3, 2, 4, 3, 5]


def test_k3_delegates_to_odd_cycle():
    d = prism(build_complete(3))
    c = prism_coloring(d, 4, copy1={0: 1}, copy2={0: 2}, matching={2: 3})
    outcome, trace = extend_complete_prism(3, c)
    assert_extends(outcome, c)
    assert trace.route == "odd-cycle"
    assert trace.steps[0].label.startswith("K_3")


def _colored(m, palette, copy1=None, copy2=None, matching=None):
    g = build_complete(m)
    d = prism(g)
    return prism_coloring(
        d,
        palette,
        copy1={g.edge_id(*pair): color for pair, color in (copy1 or {}).items()},
        copy2={g.edge_id(*pair): color for pair, color in (copy2 or {}).items()},
        matching=matching,
    )


def _starts(trace, prefix):
    return any(label.startswith(prefix) for label in trace.labels)


def test_k4_prism_exhaustive(record_property):
    d = prism(build_complete(4))
    traces = []
    for j in range(3):
        for c in enumerate_precolorings(d.product, 4, j):
            outcome, trace = extend_complete_prism(4, c)
            assert_extends(outcome, c)
            traces.append(trace)
    cases = fallback_cases(traces)
    record_property("fallbacks", dict(cases))
    assert all("построение:" in reason or "набросок:" in reason for reason in cases)


@pytest.mark.parametrize(
    "matching, copy1, copy2",
    [
        ({0: 1, 1: 2, 2: 3, 3: 4}, {}, {}),
        ({0: 1, 1: 1}, {}, {}),
        ({0: 1, 1: 2}, {(2, 3): 1}, {}),
        ({0: 5, 4: 6}, {(1, 2): 5}, {(1, 3): 6}),
        ({}, {(0, 1): 1, (2, 3): 1}, {(0, 1): 2, (3, 4): 2}),
    ],
)
def test_k5_cases(matching, copy1, copy2):
    c = _colored(5, 6, copy1, copy2, matching)
    outcome, _ = extend_complete_prism(5, c)
    assert_extends(outcome, c)


def test_k5_two_matching_edges_use_good_matching():
    c = _colored(5, 6, copy1={(2, 3): 3}, matching={0: 1, 1: 2})
    outcome, trace = extend_complete_prism(5, c)
    assert_extends(outcome, c)
    assert not trace.fallback
    assert "Случай 1.1: на M два ребра" in trace.labels
    assert _starts(trace, "φ-хорошее паросочетание #0")


def test_k5_three_matching_edges_two_colors_add_edge_of_copy_color():
    c = _colored(5, 6, copy1={(3, 4): 1}, matching={0: 1, 1: 2, 2: 2})
    outcome, trace = extend_complete_prism(5, c)
    assert_extends(outcome, c)
    assert not trace.fallback
    assert "Случай 1.2: два цвета" in trace.labels
    assert _starts(trace, "ребро [1, 2] в цвет")


def test_k5_four_matching_edges_two_repeated_colors():
    c = _colored(5, 6, matching={0: 1, 1: 1, 2: 2, 3: 2})
    outcome, trace = extend_complete_prism(5, c)
    assert_extends(outcome, c)
    assert not trace.fallback
    assert "два цвета повторяются на M: паросочетание M_1" in trace.labels


def test_k5_both_copies_one_matching_edge_colors_edge_at_its_end():
    c = _colored(5, 6, copy1={(0, 1): 1, (2, 3): 2}, copy2={(0, 1): 3}, matching={4: 1})
    outcome, trace = extend_complete_prism(5, c)
    assert_extends(outcome, c)
    assert not trace.fallback
    assert "Случай 2: одно ребро M, ребро e3 при u" in trace.labels
    assert _starts(trace, "ребро [4, 2] в цвет")


def test_k6_one_copy_lifts_matching_when_copy_extends():
    c = _colored(6, 6, copy1={(2, 3): 3}, matching={0: 1, 1: 2})
    outcome, trace = extend_complete_prism(6, c)
    assert_extends(outcome, c)
    assert not trace.fallback
    assert "окрашены M и не более одной копии" in trace.labels
    assert _starts(trace, "φ_1 продолжается")


def test_k7_one_matching_color_releases_it_on_the_copy():
    c = _colored(7, 8, copy1={(1, 2): 1, (3, 4): 2}, matching={0: 1})
    outcome, trace = extend_complete_prism(7, c)
    assert_extends(outcome, c)
    assert not trace.fallback
    assert "Случай 1: один цвет на M, окрашена не более чем одна копия" in trace.labels


def test_k7_one_matching_color_both_copies_use_corresponding_matchings():
    c = _colored(7, 8, copy1={(1, 2): 2}, copy2={(3, 4): 3}, matching={0: 1})
    outcome, trace = extend_complete_prism(7, c)
    assert_extends(outcome, c)
    assert not trace.fallback
    assert "Случай 1: один цвет на M, окрашены обе копии" in trace.labels
    assert _starts(trace, "M_1 = M_2 #0")


def test_k7_two_colors_everywhere_use_good_matching():
    c = _colored(7, 8, copy1={(2, 3): 3, (4, 5): 4}, matching={0: 1, 1: 2})
    outcome, trace = extend_complete_prism(7, c)
    assert_extends(outcome, c)
    assert not trace.fallback
    assert "Случай 3: на M и на копиях не менее двух цветов" in trace.labels
    assert _starts(trace, "хорошее паросочетание #0")


def test_k5_sampled_fallbacks_are_labelled(record_property):
    d = prism(build_complete(5))
    traces = []
    for c in enumerate_precolorings(d.product, 6, 4, EnumerationMode.sample(seed=7, count=300)):
        outcome, trace = extend_complete_prism(5, c)
        assert_extends(outcome, c)
        traces.append(trace)
    cases = fallback_cases(traces)
    record_property("fallbacks", dict(cases))
    assert sum(cases.values()) == sum(trace.fallback for trace in traces)
    assert all("построение:" in reason or "набросок:" in reason for reason in cases)


def test_odd_complete_with_m_colors_rejected_with_witness():
    d = prism(build_complete(5))
    with pytest.raises(PreconditionError) as err:
        extend_complete_prism(5, prism_coloring(d, 5))
    witness = err.value.witness
    assert witness == complete_odd_two_edges(3)
    assert extend_exhaustive(witness).status is OutcomeStatus.NOT_EXTENDABLE


def test_complete_preconditions():
    d = prism(build_complete(4))
    with pytest.raises(PreconditionError):
        extend_complete_prism(4, prism_coloring(d, 4, matching={0: 1, 1: 2, 2: 3}))
    with pytest.raises(PreconditionError):
        extend_complete_prism(2, prism_coloring(prism(build_complete(2)), 2))


# Acceptance
@pytest.mark.slow
def test_k33_prism_sampled():
    d = prism(build_complete_bipartite(3, 3))
    for c in enumerate_precolorings(d.product, 4, 3, EnumerationMode.sample(seed=42, count=10_000)):
        outcome, trace = extend_knn_prism(3, c)
        assert_extends(outcome, c)
        assert not trace.fallback, trace.labels


@pytest.mark.slow
@pytest.mark.parametrize("m", [5, 6, 7])
def test_complete_prism_sampled(m, record_property):
    d = prism(build_complete(m))
    palette = m if m % 2 == 0 else m + 1
    mode = EnumerationMode.sample(seed=42, count=10_000)
    traces = []
    for c in enumerate_precolorings(d.product, palette, complete_prism_bound(m), mode):
        outcome, trace = extend_complete_prism(m, c)
        assert_extends(outcome, c)
        traces.append(trace)
    record_property("fallbacks", dict(fallback_cases(traces)))
