import json

import networkx as nx
import pytest

from prismext.exceptions import PreconditionError
from prismext.models.report import EnumerationKind, EnumerationMode, Verdict
from prismext.services import harness
from prismext.services.formats import write_graph
from prismext.services.graph_core import (
    always_extendable_class,
    build_complete,
    build_complete_bipartite,
    build_cycle,
    build_hypercube,
    build_path,
    build_star,
    from_networkx,
    graph_descriptor,
    prism,
)
from prismext.services.harness import (
    checkpoint_key,
    cross_validate,
    family_graphs,
    find_max_k,
    hunt_counterexamples,
    labeled_trees,
    method_bases,
    method_parameters,
    verify_always_extendable,
    verify_conjecture_instance,
    verify_hypothesis,
)


# Hypothesis
def test_c4_one_edge_holds():
    report = verify_hypothesis(build_cycle(4), 1, 2)
    assert report.verdict is Verdict.HOLDS
    assert report.total == 9
    assert report.extended == 9
    assert report.graph == graph_descriptor(build_cycle(4))


def test_p4_two_edges_fails_with_witnesses():
    report = verify_hypothesis(build_path(4), 2, 2)
    assert report.verdict is Verdict.FAILS
    assert report.not_extendable > 0
    assert report.failures
    assert all(w.status == "not_extendable" and len(w.precolored) == 2 for w in report.failures)


def test_k33_two_edges_holds():
    assert verify_hypothesis(build_complete_bipartite(3, 3), 2, 3).verdict is Verdict.HOLDS


def test_independent_only_counts_fewer():
    g = build_cycle(5)
    full = verify_hypothesis(g, 2, 3)
    independent = verify_hypothesis(g, 2, 3, independent_only=True)
    assert independent.total < full.total
    assert independent.verdict is Verdict.HOLDS


def test_sampled_report_reproducible():
    mode = EnumerationMode.sample(seed=42, count=50)
    first = verify_hypothesis(build_complete(4), 2, 3, mode)
    second = verify_hypothesis(build_complete(4), 2, 3, mode)
    assert first.model_dump_json() == second.model_dump_json()
    assert first.mode.kind is EnumerationKind.SAMPLE
    assert first.not_extendable > 0


def test_parallel_matches_sequential():
    g = build_cycle(5)
    assert verify_hypothesis(g, 2, 3, jobs=2).model_dump() == verify_hypothesis(g, 2, 3).model_dump()


def test_wall_time_not_serialized():
    report = verify_hypothesis(build_path(3), 1, 2)
    assert "wall_time" not in json.loads(report.model_dump_json())


# Conjecture instances
def test_odd_cycle_consistent():
    report = verify_conjecture_instance(build_cycle(5), 1)
    assert report.verdict is Verdict.CONJECTURE_CONSISTENT
    assert report.palette == 4
    assert report.k == 2
    assert report.antecedent.verdict is Verdict.HOLDS
    assert report.graph == graph_descriptor(build_cycle(5))


def test_path_consistent():
    assert verify_conjecture_instance(build_path(3), 1).verdict is Verdict.CONJECTURE_CONSISTENT


def test_smaller_consequent_palette_gives_counterexample():
    report = verify_conjecture_instance(build_cycle(5), 1, consequent_palette=3)
    assert report.verdict is Verdict.COUNTEREXAMPLE
    assert report.failures


def test_antecedent_fails():
    report = verify_conjecture_instance(build_path(4), 2)
    assert report.verdict is Verdict.ANTECEDENT_FAILS
    assert report.antecedent.verdict is Verdict.FAILS


# Always extendable, max k
def test_always_extendable():
    assert verify_always_extendable(build_star(3)) is True
    assert verify_always_extendable(build_cycle(5)) is True
    assert verify_always_extendable(build_cycle(4)) is False


def test_find_max_k():
    assert find_max_k(build_cycle(4), 2) == 1
    assert find_max_k(build_complete(4), 3) == 1
    assert find_max_k(build_path(3), 1) == -1
    assert find_max_k(build_star(3), 3, limit=2) == 2


def test_find_max_k_hypercube():
    assert find_max_k(build_hypercube(2), 2) == 1
    assert find_max_k(build_hypercube(3), 3, limit=3) == 2


# Cross-validation
def test_cross_validate_even_cycle():
    (report,) = cross_validate("even-cycle", [build_cycle(4)])
    assert report.method == "even-cycle"
    assert report.mismatches == 0
    assert report.verdict is Verdict.HOLDS
    assert report.total == report.extended > 0
    assert report.palette == 3


def test_cross_validate_trees_all_sizes():
    reports = cross_validate("tree", [build_path(3), build_path(4)], all_sizes=True)
    assert [r.mismatches for r in reports] == [0, 0]
    assert reports[1].k == 2


def test_cross_validate_regular_independent():
    (report,) = cross_validate("regular", [build_cycle(4)], k=1)
    assert report.mismatches == 0
    assert report.palette == 3


def test_cross_validate_rejects_bad_input():
    with pytest.raises(PreconditionError):
        cross_validate("magic", [build_cycle(4)])
    with pytest.raises(PreconditionError):
        cross_validate("tree", [build_cycle(4)])
    with pytest.raises(PreconditionError):
        cross_validate("regular", [build_cycle(4)], k=2)


def test_method_parameters():
    assert method_parameters("tree", build_star(3)) == (4, 3, False)
    assert method_parameters("knn", build_complete_bipartite(3, 3)) == (4, 3, False)
    assert method_parameters("complete", build_complete(5)) == (6, 4, False)
    assert method_parameters("cycle", build_cycle(7)) == (4, 3, False)
    assert method_parameters("regular", build_cycle(5), 1) == (4, 2, True)


# Families
def test_family_sizes():
    assert len(list(family_graphs("trees", 4))) == 4
    assert [g.vertex_count for g in family_graphs("cycles", 5)] == [3, 4, 5]
    assert [g.edge_count for g in family_graphs("hypercubes", 3)] == [1, 4, 12]
    regular = list(family_graphs("random_regular", 6, seed=1, count=2, degree=3))
    assert len(regular) == 2
    assert all(g.max_degree == 3 and g.vertex_count == 6 for g in regular)


def test_family_from_file(tmp_path):
    path = tmp_path / "graphs.jsonl"
    path.write_text(write_graph(build_cycle(4), as_json=True) + "\n\n" + write_graph(build_path(3), as_json=True) + "\n")
    assert list(family_graphs("from_file", 0, path=path)) == [build_cycle(4), build_path(3)]
    with pytest.raises(PreconditionError):
        list(family_graphs("from_file", 0))


def test_unknown_family():
    with pytest.raises(PreconditionError):
        list(family_graphs("moebius", 3))


def test_labeled_trees_cayley():
    assert len(list(labeled_trees(4))) == 16
    assert len(set(labeled_trees(4))) == 16
    with pytest.raises(PreconditionError):
        list(labeled_trees(1))


def test_method_bases():
    assert list(method_bases("knn", [2, 3])) == [build_complete_bipartite(2, 2), build_complete_bipartite(3, 3)]
    assert len(list(method_bases("tree", [4]))) == 2
    with pytest.raises(PreconditionError):
        list(method_bases("regular", [4]))


# Counterexample hunt
def test_hunt_checkpoint_resume(tmp_path, monkeypatch):
    checkpoint = tmp_path / "hunt.jsonl"
    graphs = [build_cycle(4), build_cycle(5)]
    first = hunt_counterexamples(graphs, [1], checkpoint=checkpoint)
    assert [r.verdict for r in first] == [Verdict.CONJECTURE_CONSISTENT, Verdict.CONJECTURE_CONSISTENT]
    lines = checkpoint.read_text().splitlines()
    keys = [json.loads(line)["key"] for line in lines]
    assert keys == [checkpoint_key(g, 1, EnumerationMode.exhaustive()) for g in graphs]

    def fail(*args, **kwargs):
        raise AssertionError("отчёт должен быть взят из checkpoint")

    monkeypatch.setattr(harness, "verify_conjecture_instance", fail)
    seen = []
    second = hunt_counterexamples(graphs, [1], checkpoint=checkpoint, on_report=lambda i, r: seen.append(i))
    assert [r.model_dump_json() for r in second] == [r.model_dump_json() for r in first]
    assert seen == [0, 1]


def test_hunt_default_k():
    (report,) = hunt_counterexamples([build_hypercube(2)])
    assert report.k == 2
    assert report.verdict is Verdict.CONJECTURE_CONSISTENT


def test_hunt_checkpoint_keyed_by_graph(tmp_path):
    checkpoint = tmp_path / "hunt.jsonl"
    hunt_counterexamples([build_path(3), build_cycle(4)], [1], checkpoint=checkpoint)
    graphs = [build_cycle(5), build_cycle(6), build_cycle(7)]
    reports = hunt_counterexamples(graphs, [1], checkpoint=checkpoint)
    assert [r.graph for r in reports] == [graph_descriptor(g) for g in graphs]
    assert [r.vertex_count for r in reports] == [5, 6, 7]
    assert len(checkpoint.read_text().splitlines()) == 5


def test_hunt_checkpoint_keyed_by_mode_and_palette(tmp_path, monkeypatch):
    checkpoint = tmp_path / "hunt.jsonl"
    graphs = [build_cycle(5)]
    (exhaustive,) = hunt_counterexamples(graphs, [1], checkpoint=checkpoint)
    (narrow,) = hunt_counterexamples(graphs, [1], checkpoint=checkpoint, consequent_palette=3)
    assert exhaustive.verdict is Verdict.CONJECTURE_CONSISTENT
    assert narrow.verdict is Verdict.COUNTEREXAMPLE
    assert narrow.palette == 3

    calls = []
    original = harness.verify_conjecture_instance

    def counting(*args, **kwargs):
        calls.append(args[0])
        return original(*args, **kwargs)

    monkeypatch.setattr(harness, "verify_conjecture_instance", counting)
    (sampled,) = hunt_counterexamples(graphs, [1], EnumerationMode.sample(3, 50), checkpoint=checkpoint)
    assert len(calls) == 1
    assert sampled.mode.kind is EnumerationKind.SAMPLE


def test_hunt_checkpoint_truncated_tail_recomputed(tmp_path, caplog):
    checkpoint = tmp_path / "hunt.jsonl"
    graphs = [build_cycle(4), build_cycle(5)]
    first = hunt_counterexamples(graphs, [1], checkpoint=checkpoint)
    lines = checkpoint.read_text().splitlines()
    checkpoint.write_text(lines[0] + "\n" + lines[1][: len(lines[1]) // 2])

    with caplog.at_level("WARNING", logger="prismext.services.harness"):
        second = hunt_counterexamples(graphs, [1], checkpoint=checkpoint)
    assert "последняя строка не читается" in caplog.text
    assert [r.graph for r in second] == [r.graph for r in first]
    assert [r.verdict for r in second] == [r.verdict for r in first]
    restored = [json.loads(line) for line in checkpoint.read_text().splitlines()]
    assert [record["key"] for record in restored] == [checkpoint_key(g, 1, EnumerationMode.exhaustive()) for g in graphs]


def test_hunt_checkpoint_rejects_mismatched_record(tmp_path):
    checkpoint = tmp_path / "hunt.jsonl"
    hunt_counterexamples([build_cycle(4)], [1], checkpoint=checkpoint)
    (record,) = [json.loads(line) for line in checkpoint.read_text().splitlines()]
    record["key"] = checkpoint_key(build_cycle(5), 1, EnumerationMode.exhaustive())
    checkpoint.write_text(json.dumps(record) + "\n")

    (report,) = hunt_counterexamples([build_cycle(5)], [1], checkpoint=checkpoint)
    assert report.graph == graph_descriptor(build_cycle(5))
    assert report.vertex_count == 5


def test_verify_hypothesis_streams_in_chunks(monkeypatch):
    sizes = []
    original = harness._chunks

    def recording(items, size=2):
        for chunk in original(items, size):
            sizes.append(len(chunk))
            yield chunk

    monkeypatch.setattr(harness, "_chunks", recording)
    report = verify_hypothesis(build_cycle(4), 1, 2)
    assert report.total == 9
    assert max(sizes) <= 2
    assert sum(sizes) == 9


# Sweeps
@pytest.mark.slow
def test_always_extendable_matches_atlas():
    graphs = [
        from_networkx(g)
        for g in nx.graph_atlas_g()
        if 1 <= g.number_of_nodes() <= 5 and g.number_of_edges() and nx.is_connected(g)
    ]
    assert len(graphs) == 1 + 2 + 6 + 21
    for g in graphs:
        assert verify_always_extendable(g) is always_extendable_class(g), graph_descriptor(g)


@pytest.mark.slow
def test_conjecture_sweep_small_families():
    graphs = [
        *family_graphs("trees", 6),
        *family_graphs("cycles", 7),
        build_complete(4),
        build_complete(5),
        build_complete_bipartite(2, 2),
        build_complete_bipartite(3, 3),
    ]
    reports = hunt_counterexamples(graphs, mode=EnumerationMode.sample(5, 3000))
    assert len(reports) == len(graphs)
    for report in reports:
        assert report.verdict in (Verdict.CONJECTURE_CONSISTENT, Verdict.ANTECEDENT_FAILS), report.graph


@pytest.mark.slow
def test_sampled_reports_do_not_depend_on_jobs():
    product = build_complete_bipartite(3, 3)
    mode = EnumerationMode.sample(9, 2000)
    single = verify_hypothesis(prism(product).product, 3, 4, mode, jobs=1)
    pooled = verify_hypothesis(prism(product).product, 3, 4, mode, jobs=2)
    assert single.model_dump(exclude={"wall_time"}) == pooled.model_dump(exclude={"wall_time"})

    knn = [build_complete_bipartite(3, 3)]
    (one,) = cross_validate("knn", knn, mode, jobs=1)
    (two,) = cross_validate("knn", knn, mode, jobs=2)
    assert one.model_dump(exclude={"wall_time"}) == two.model_dump(exclude={"wall_time"})
