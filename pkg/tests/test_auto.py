import pytest

from prismext.exceptions import PreconditionError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.outcome import OutcomeStatus
from prismext.services.extenders.auto import extend_auto, run_method
from prismext.services.fixtures import (
    complete_odd_two_edges,
    odd_cycle_corresponding_pair,
    odd_cycle_four_edges,
    path_condition_instance,
    subcubic_triangle_witness,
)
from prismext.services.graph_core import (
    build_complete,
    build_complete_bipartite,
    build_cycle,
    build_path,
    build_star,
    prism,
)
from prismext.services.oracle import extend_exhaustive
from tests.helpers import assert_extends, prism_coloring


# Routing
@pytest.mark.parametrize(
    "base, palette, route",
    [
        (build_path(5), 3, "tree"),
        (build_star(3), 4, "tree"),
        (build_cycle(4), 3, "even-cycle"),
        (build_cycle(5), 4, "odd-cycle"),
        (build_complete_bipartite(3, 3), 4, "knn"),
        (build_complete(5), 6, "complete"),
    ],
)
def test_routes(base, palette, route):
    d = prism(base)
    c = prism_coloring(d, palette, copy1={0: 1}, matching={base.vertex_count - 1: 2})
    outcome, trace = extend_auto(d.product, c)
    assert_extends(outcome, c)
    assert trace.route == route


def test_not_a_prism_goes_to_oracle():
    p3 = build_path(3)
    c = PartialEdgeColoring(graph=p3, palette=2, assignment={0: 1})
    outcome, trace = extend_auto(p3, c)
    assert_extends(outcome, c)
    assert trace.route == "oracle"
    assert trace.replay() == dict(outcome.coloring.assignment)


def test_no_matching_extender_goes_to_oracle():
    d = prism(build_path(3))
    c = prism_coloring(d, 4, copy1={0: 1})
    outcome, trace = extend_auto(d.product, c)
    assert_extends(outcome, c)
    assert trace.route == "oracle"


def test_rejected_route_falls_back_to_oracle():
    k4 = build_complete(4)
    d = prism(k4)
    c = prism_coloring(d, 4, copy1={k4.edge_id(0, 1): 1, k4.edge_id(0, 2): 2, k4.edge_id(0, 3): 3})
    outcome, trace = extend_auto(d.product, c)
    assert_extends(outcome, c)
    assert trace.route == "oracle"
    assert trace.labels[-1] == "маршрут subcubic отклонён"


def test_not_extendable_reported_by_oracle():
    c = odd_cycle_corresponding_pair(2)
    outcome, _ = extend_auto(c.graph, c)
    assert outcome.status is OutcomeStatus.NOT_EXTENDABLE


# Named methods
def test_run_method_cycle():
    d = prism(build_cycle(5))
    c = prism_coloring(d, 4, copy1={0: 1}, copy2={0: 2})
    outcome, trace = run_method("cycle", d.product, c)
    assert_extends(outcome, c)
    assert trace.route == "odd-cycle"


def test_run_method_rejections():
    d = prism(build_cycle(4))
    c = prism_coloring(d, 3, copy1={0: 1})
    with pytest.raises(PreconditionError):
        run_method("magic", d.product, c)
    with pytest.raises(PreconditionError):
        run_method("knn", d.product, c)
    with pytest.raises(PreconditionError):
        run_method("complete", d.product, c)
    p3 = build_path(3)
    with pytest.raises(PreconditionError):
        run_method("tree", p3, PartialEdgeColoring.empty(p3, 2))


def test_run_method_oracle():
    c = path_condition_instance()
    outcome, trace = run_method("oracle", c.graph, c)
    assert outcome.status is OutcomeStatus.NOT_EXTENDABLE
    assert trace.route == "oracle"


# Fixtures
def test_fixtures_not_extendable():
    for c in (odd_cycle_corresponding_pair(1), odd_cycle_four_edges(2), complete_odd_two_edges(3), path_condition_instance()):
        assert extend_exhaustive(c).status is OutcomeStatus.NOT_EXTENDABLE


def test_fixture_parameters():
    with pytest.raises(PreconditionError):
        odd_cycle_corresponding_pair(0)
    with pytest.raises(PreconditionError):
        complete_odd_two_edges(1)
    assert complete_odd_two_edges(3).palette == 5
    assert subcubic_triangle_witness(build_complete_bipartite(3, 3)) is None
