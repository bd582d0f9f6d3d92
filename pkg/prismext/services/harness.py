"""
Пакетные проверки: гипотеза расширяемости на графе, гипотеза для
призмы (антецедент на G, следствие на G□K₂), сверка расширителей
с оракулом и поиск контрпримеров по семействам графов.

Экземпляры независимы, поэтому при jobs > 1 они считаются в пуле
процессов; порядок результатов совпадает с порядком перечисления,
и отчёты не зависят от числа процессов.
"""

import json
import logging
import os
import sys
import time
from concurrent.futures import Executor, ProcessPoolExecutor
from contextlib import contextmanager
from itertools import islice, product
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, TypeVar

import networkx as nx
from pydantic import ValidationError
from tqdm import tqdm

from prismext.config import CHUNK_SIZE, FAILURE_WITNESS_LIMIT, HUNT_PROGRESS_EVERY
from prismext.exceptions import PrismExtError, PreconditionError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.graph import Graph
from prismext.models.outcome import OutcomeStatus, SearchBudget
from prismext.models.report import (
    EnumerationKind,
    EnumerationMode,
    FailureWitness,
    Verdict,
    VerificationReport,
)
from prismext.services.coloring_core import is_independent, is_valid_extension
from prismext.services.extenders.complete import complete_prism_bound, extend_complete_prism
from prismext.services.extenders.cycles import extend_even_cycle_prism, extend_odd_cycle_prism
from prismext.services.extenders.knn import extend_knn_prism
from prismext.services.extenders.regular import BaseExtender, extend_regular_independent_prism
from prismext.services.extenders.subcubic import extend_subcubic_class1_prism
from prismext.services.extenders.tree import extend_tree_prism
from prismext.services.graph_core import (
    build_complete,
    build_complete_bipartite,
    build_cycle,
    build_hypercube,
    build_tree_from_pruefer,
    chromatic_index,
    chromatic_index_value,
    from_networkx,
    graph_descriptor,
    is_tree,
    prism,
)
from prismext.services.oracle import extend_exhaustive, hypothesis_holds, indexed_precolorings, instance_space_size

logger = logging.getLogger(__name__)

FAMILIES = ("trees", "cycles", "complete", "complete_bipartite", "hypercubes", "random_regular", "from_file")
XVAL_METHODS = ("tree", "knn", "complete", "even-cycle", "odd-cycle", "cycle", "regular", "subcubic")


# Instance streams
def _level_mode(mode: EnumerationMode, m: int, t: int, j: int) -> EnumerationMode:
    """Выборка заменяется полным перебором, если пространство не больше объёма выборки."""
    if mode.kind is EnumerationKind.SAMPLE and instance_space_size(m, t, j) <= mode.count:
        return EnumerationMode.exhaustive(force=True)
    return mode


T = TypeVar("T")


@contextmanager
def _pool(jobs: int) -> Iterator[Optional[Executor]]:
    if jobs <= 1:
        yield None
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield pool


def _map(task: Callable, items: Iterable, pool: Optional[Executor]) -> Iterator:
    if pool is None:
        return map(task, items)
    return pool.map(task, items, chunksize=64)


def _chunks(items: Iterable[T], size: int = CHUNK_SIZE) -> Iterator[List[T]]:
    """Поток экземпляров порциями не длиннее size; в памяти одна порция."""
    it = iter(items)
    while True:
        chunk = list(islice(it, size))
        if not chunk:
            return
        yield chunk


def _solved(
    task: Callable,
    stream: Iterable[Tuple[int, PartialEdgeColoring]],
    args: Callable[[PartialEdgeColoring], Any],
    pool: Optional[Executor],
    bar: tqdm,
) -> Iterator[Tuple[int, PartialEdgeColoring, Any]]:
    """(номер, раскраска, результат) в порядке перечисления."""
    for chunk in _chunks(stream):
        results = _map(task, [args(c) for _, c in chunk], pool)
        for (index, c), result in zip(chunk, results):
            bar.update()
            yield index, c, result


def _progress(desc: str, enabled: bool) -> tqdm:
    return tqdm(desc=desc, disable=not enabled, file=sys.stderr, leave=False)


def _witness(index: int, status: str, c: PartialEdgeColoring, note: Optional[str] = None) -> FailureWitness:
    return FailureWitness(index=index, status=status, palette=c.palette, precolored=list(c.triples()), note=note)


def _oracle_task(args: Tuple[PartialEdgeColoring, Optional[SearchBudget]]) -> Tuple[str, int]:
    c, budget = args
    outcome = extend_exhaustive(c, budget)
    return outcome.status.value, outcome.nodes


# Hypothesis
def verify_hypothesis(
    g: Graph,
    k: int,
    palette: int,
    mode: Optional[EnumerationMode] = None,
    budget: Optional[SearchBudget] = None,
    jobs: int = 1,
    independent_only: bool = False,
    progress: bool = False,
) -> VerificationReport:
    """Каждая правильная предраскраска не более k рёбер продолжается палитрой palette."""
    mode = mode or EnumerationMode.exhaustive()
    started = time.monotonic()
    keep = is_independent if independent_only else None
    counts: Dict[str, int] = {s.value: 0 for s in OutcomeStatus}
    failures: List[FailureWitness] = []

    with _pool(jobs) as pool:
        for j in range(min(k, g.edge_count) + 1):
            level = _level_mode(mode, g.edge_count, palette, j)
            stream = indexed_precolorings(g, palette, j, level, keep)
            with _progress(f"k={j}", progress) as bar:
                for index, c, (status, _) in _solved(_oracle_task, stream, lambda c: (c, budget), pool, bar):
                    counts[status] += 1
                    if status != OutcomeStatus.EXTENDED.value and len(failures) < FAILURE_WITNESS_LIMIT:
                        failures.append(_witness(index, status, c, note=f"окрашено {j}"))

    if counts[OutcomeStatus.NOT_EXTENDABLE.value]:
        verdict = Verdict.FAILS
    elif counts[OutcomeStatus.UNKNOWN.value]:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.HOLDS
    report = VerificationReport(
        graph=graph_descriptor(g),
        vertex_count=g.vertex_count,
        edge_count=g.edge_count,
        k=k,
        palette=palette,
        mode=mode,
        total=sum(counts.values()),
        extended=counts[OutcomeStatus.EXTENDED.value],
        not_extendable=counts[OutcomeStatus.NOT_EXTENDABLE.value],
        unknown=counts[OutcomeStatus.UNKNOWN.value],
        failures=failures,
        verdict=verdict,
        wall_time=time.monotonic() - started,
    )
    logger.info(
        "Гипотеза: %s, k=%d, t=%d, всего=%d, verdict=%s, %.2fs",
        report.graph, k, palette, report.total, verdict.value, report.wall_time,
    )
    return report


def verify_conjecture_instance(
    g: Graph,
    k: int,
    mode: Optional[EnumerationMode] = None,
    budget: Optional[SearchBudget] = None,
    consequent_palette: Optional[int] = None,
    jobs: int = 1,
    progress: bool = False,
) -> VerificationReport:
    """
    Антецедент: предраскраски не более k рёбер G продолжаются χ'(G) цветами.
    Следствие: предраскраски не более k+1 рёбер G□K₂ продолжаются χ'(G)+1 цветами
    (consequent_palette позволяет подставить другую палитру).
    """
    mode = mode or EnumerationMode.exhaustive()
    chi = chromatic_index(g, budget).index
    if chi is None:
        logger.info("Гипотеза для призмы: χ' не определён в пределах бюджета")
        return VerificationReport(
            graph=graph_descriptor(g), vertex_count=g.vertex_count, edge_count=g.edge_count,
            k=k, palette=0, mode=mode, verdict=Verdict.INCONCLUSIVE,
        )

    antecedent = verify_hypothesis(g, k, chi, mode, budget, jobs, progress=progress)
    if antecedent.verdict is not Verdict.HOLDS:
        verdict = Verdict.ANTECEDENT_FAILS if antecedent.verdict is Verdict.FAILS else Verdict.INCONCLUSIVE
        return antecedent.model_copy(update={"verdict": verdict, "antecedent": antecedent})

    d = prism(g)
    palette = consequent_palette or chi + 1
    consequent = verify_hypothesis(d.product, k + 1, palette, mode, budget, jobs, progress=progress)
    verdict = {
        Verdict.HOLDS: Verdict.CONJECTURE_CONSISTENT,
        Verdict.FAILS: Verdict.COUNTEREXAMPLE,
    }.get(consequent.verdict, Verdict.INCONCLUSIVE)
    if verdict is Verdict.COUNTEREXAMPLE:
        logger.warning("Контрпример: %s, k=%d, палитра %d", graph_descriptor(g), k, palette)
    return consequent.model_copy(
        update={"graph": graph_descriptor(g), "verdict": verdict, "antecedent": antecedent}
    )


def verify_always_extendable(g: Graph, budget: Optional[SearchBudget] = None) -> Optional[bool]:
    """Любая правильная частичная χ'(G)-раскраска продолжается (None - не хватило бюджета)."""
    chi = chromatic_index_value(g, budget)
    return hypothesis_holds(g, g.edge_count, chi, budget=budget)


def find_max_k(g: Graph, palette: int, budget: Optional[SearchBudget] = None, limit: Optional[int] = None) -> int:
    """Наибольшее k, при котором продолжаются все предраскраски не более k рёбер (-1, если даже пустая не продолжается)."""
    limit = g.edge_count if limit is None else min(limit, g.edge_count)
    best = -1
    for j in range(limit + 1):
        mode = EnumerationMode.exhaustive(force=True)
        for _, c in indexed_precolorings(g, palette, j, mode):
            outcome = extend_exhaustive(c, budget)
            if outcome.status is OutcomeStatus.UNKNOWN:
                raise PreconditionError(f"бюджет исчерпан на уровне k = {j}")
            if outcome.status is OutcomeStatus.NOT_EXTENDABLE:
                return best
        best = j
    return best


# Cross-validation
def method_parameters(method: str, base: Graph, k: Optional[int] = None) -> Tuple[int, int, bool]:
    """(палитра, число окрашенных рёбер, только независимые) для метода на базе."""
    n = base.vertex_count
    if method == "tree":
        return base.max_degree + 1, base.max_degree, False
    if method == "knn":
        return n // 2 + 1, n // 2, False
    if method == "complete":
        return (n if n % 2 == 0 else n + 1), complete_prism_bound(n), False
    if method in ("even-cycle", "odd-cycle", "cycle"):
        return (3, 2, False) if n % 2 == 0 else (4, 3, False)
    if method == "regular":
        return chromatic_index_value(base) + 1, (1 if k is None else k) + 1, True
    if method == "subcubic":
        return 4, 3, False
    raise PreconditionError(f"неизвестный метод сверки {method}")


def _extend_with(method: str, base: Graph, c: PartialEdgeColoring, budget: Optional[SearchBudget], k: int):
    """Вызов расширителя без повторной проверки гипотез базы (их проверяет cross_validate)."""
    n = base.vertex_count
    if method == "tree":
        return extend_tree_prism(base, c, budget)
    if method == "knn":
        return extend_knn_prism(n // 2, c, budget)
    if method == "complete":
        return extend_complete_prism(n, c, budget)
    if method in ("even-cycle", "odd-cycle", "cycle"):
        if n % 2 == 0:
            return extend_even_cycle_prism(n // 2, c, budget)
        return extend_odd_cycle_prism((n - 1) // 2, c, budget)
    if method == "regular":
        return extend_regular_independent_prism(base, c, BaseExtender.oracle(k, budget), budget, certify=False)
    return extend_subcubic_class1_prism(base, c, budget, hypothesis=True)


def _xval_task(args) -> Tuple[str, bool, bool, str, Optional[str]]:
    method, base, c, budget, k = args
    oracle = extend_exhaustive(c, budget)
    try:
        outcome, trace = _extend_with(method, base, c, budget, k)
    except PrismExtError as exc:
        return "error", False, False, oracle.status.value, str(exc)
    valid = outcome.is_extended and is_valid_extension(outcome.coloring, c)
    return outcome.status.value, valid, trace.fallback, oracle.status.value, None


def _check_base(method: str, base: Graph, k: int, budget: Optional[SearchBudget]) -> None:
    if method == "tree" and not is_tree(base):
        raise PreconditionError("база не является деревом")
    if method == "regular":
        extender = BaseExtender.oracle(k, budget)
        if extender.certified(base) is not True:
            raise PreconditionError(f"гипотеза базы для k = {k} не подтверждена")
    if method == "subcubic" and hypothesis_holds(base, 2, 3, budget=budget) is not True:
        raise PreconditionError("гипотеза о двух рёбрах базы не подтверждена")


def cross_validate(
    method: str,
    graphs: Iterable[Graph],
    mode: Optional[EnumerationMode] = None,
    budget: Optional[SearchBudget] = None,
    jobs: int = 1,
    k: Optional[int] = None,
    all_sizes: bool = False,
    progress: bool = False,
) -> List[VerificationReport]:
    """
    Сверка расширителя с оракулом на базах graphs. mismatches - экземпляры,
    где расширитель не дал корректного продолжения или разошёлся с оракулом.
    """
    if method not in XVAL_METHODS:
        raise PreconditionError(f"неизвестный метод сверки {method}")
    mode = mode or EnumerationMode.exhaustive()
    reports = []
    for base in graphs:
        started = time.monotonic()
        base_k = 1 if k is None else k
        palette, count, independent = method_parameters(method, base, base_k)
        _check_base(method, base, base_k, budget)
        product_graph = prism(base).product
        keep = is_independent if independent else None
        counts = {"extended": 0, "not_extendable": 0, "unknown": 0, "fallbacks": 0, "mismatches": 0}
        failures: List[FailureWitness] = []
        sizes = range(count + 1) if all_sizes else (min(count, product_graph.edge_count),)

        def args(c: PartialEdgeColoring) -> tuple:
            return method, base, c, budget, base_k

        with _pool(jobs) as pool:
            for j in sizes:
                level = _level_mode(mode, product_graph.edge_count, palette, j)
                stream = indexed_precolorings(product_graph, palette, j, level, keep)
                with _progress(f"{method} k={j}", progress) as bar:
                    for index, c, result in _solved(_xval_task, stream, args, pool, bar):
                        status, valid, fallback, oracle_status, error = result
                        bucket = status if status in counts else "not_extendable"
                        counts[bucket] += 1
                        counts["fallbacks"] += int(fallback)
                        agrees = valid or (status == oracle_status == OutcomeStatus.UNKNOWN.value)
                        if not agrees:
                            counts["mismatches"] += 1
                            if len(failures) < FAILURE_WITNESS_LIMIT:
                                note = error or f"оракул: {oracle_status}"
                                failures.append(_witness(index, status, c, note=note))

        total = counts["extended"] + counts["not_extendable"] + counts["unknown"]
        verdict = Verdict.HOLDS if counts["mismatches"] == 0 else Verdict.FAILS
        if verdict is Verdict.HOLDS and counts["unknown"]:
            verdict = Verdict.INCONCLUSIVE
        report = VerificationReport(
            graph=graph_descriptor(base),
            vertex_count=base.vertex_count,
            edge_count=base.edge_count,
            method=method,
            k=count,
            palette=palette,
            mode=mode,
            total=total,
            failures=failures,
            verdict=verdict,
            wall_time=time.monotonic() - started,
            **counts,
        )
        logger.info(
            "Сверка %s: %s, всего=%d, fallbacks=%d, mismatches=%d",
            method, report.graph, total, report.fallbacks, report.mismatches,
        )
        reports.append(report)
    return reports


# Families
def labeled_trees(n: int) -> Iterator[Graph]:
    """Все помеченные деревья на n вершинах (по кодам Прюфера)."""
    if n < 2:
        raise PreconditionError("дерево требует n >= 2")
    for seq in product(range(n), repeat=n - 2):
        yield build_tree_from_pruefer(seq)


def family_graphs(
    family: str,
    max_size: int,
    seed: int = 0,
    count: int = 10,
    degree: int = 3,
    path: Optional[Path] = None,
) -> Iterator[Graph]:
    """
    Графы семейства по возрастанию размера: деревья (с точностью до
    изоморфизма), циклы, K_n, K_n,n, гиперкубы, случайные регулярные
    графы и графы из файла (по одному JSON-графу в строке).
    """
    if family == "trees":
        for n in range(2, max_size + 1):
            for tree in nx.nonisomorphic_trees(n):
                yield from_networkx(tree)
    elif family == "cycles":
        for n in range(3, max_size + 1):
            yield build_cycle(n)
    elif family == "complete":
        for n in range(2, max_size + 1):
            yield build_complete(n)
    elif family == "complete_bipartite":
        for n in range(1, max_size + 1):
            yield build_complete_bipartite(n, n)
    elif family == "hypercubes":
        for d in range(1, max_size + 1):
            yield build_hypercube(d)
    elif family == "random_regular":
        for i in range(count):
            yield from_networkx(nx.random_regular_graph(degree, max_size, seed=seed + i))
    elif family == "from_file":
        if path is None:
            raise PreconditionError("семейство from_file требует путь к файлу")
        from prismext.services.formats import read_graph

        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if line.strip():
                yield read_graph(line, as_json=True)
    else:
        raise PreconditionError(f"неизвестное семейство {family}; доступны: {', '.join(FAMILIES)}")


def method_bases(method: str, sizes: Iterable[int]) -> Iterator[Graph]:
    """Базы для сверки метода: деревья на n вершинах, K_n,n, K_n или C_n."""
    for n in sizes:
        if method == "tree":
            for tree in nx.nonisomorphic_trees(n):
                yield from_networkx(tree)
        elif method == "knn":
            yield build_complete_bipartite(n, n)
        elif method == "complete":
            yield build_complete(n)
        elif method in ("even-cycle", "odd-cycle", "cycle"):
            yield build_cycle(n)
        else:
            raise PreconditionError(f"для метода {method} базы задаются файлами графов")


def checkpoint_key(g: Graph, k: int, mode: EnumerationMode, consequent_palette: Optional[int] = None) -> str:
    """Отчёт переиспользуется только для того же графа, k, палитры следствия и режима перебора."""
    palette = consequent_palette if consequent_palette is not None else "chi+1"
    return f"{graph_descriptor(g)}|k={k}|t={palette}|{mode.model_dump_json()}"


def _load_checkpoint(path: Optional[Path]) -> Dict[str, VerificationReport]:
    """
    Сохранённые отчёты по ключу. Нечитаемые строки (обычно обрезанная
    последняя после прерывания) пропускаются, файл переписывается без них,
    и соответствующие экземпляры считаются заново.
    """
    if path is None or not Path(path).exists():
        return {}
    done: Dict[str, VerificationReport] = {}
    kept: List[str] = []
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            key = record["key"]
            report = VerificationReport.model_validate(record["report"])
        except (json.JSONDecodeError, KeyError, TypeError, ValidationError) as exc:
            where = "последняя строка" if number == len(lines) else f"строка {number}"
            logger.warning("Checkpoint %s: %s не читается (%s), отчёт будет пересчитан", path, where, exc)
            continue
        if not key.startswith(f"{report.graph}|"):
            logger.warning("Checkpoint %s: строка %d не согласована с ключом %s, пропущена", path, number, key)
            continue
        done[key] = report
        kept.append(line)
    if len(kept) != sum(bool(line.strip()) for line in lines):
        Path(path).write_text("".join(line + "\n" for line in kept), encoding="utf-8")
    logger.info("Checkpoint: восстановлено %d отчётов из %s", len(done), path)
    return done


def _append_checkpoint(path: Path, key: str, report: VerificationReport) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps({"key": key, "report": report.model_dump(mode="json")}) + "\n")
        fh.flush()
        os.fsync(fh.fileno())


def hunt_counterexamples(
    graphs: Iterable[Graph],
    k_values: Optional[Sequence[int]] = None,
    mode: Optional[EnumerationMode] = None,
    budget: Optional[SearchBudget] = None,
    checkpoint: Optional[Path] = None,
    jobs: int = 1,
    on_report: Optional[Callable[[int, VerificationReport], None]] = None,
    consequent_palette: Optional[int] = None,
) -> List[VerificationReport]:
    """
    verify_conjecture_instance для каждого графа и k (по умолчанию k = Δ-1).
    Каждый готовый отчёт дописывается в checkpoint (JSON lines, ключ checkpoint_key),
    при повторном запуске сохранённые отчёты тех же экземпляров не пересчитываются.
    """
    mode = mode or EnumerationMode.exhaustive()
    done = _load_checkpoint(checkpoint)
    reports: List[VerificationReport] = []
    for index, g in enumerate(graphs):
        ks = list(k_values) if k_values is not None else [max(g.max_degree - 1, 0)]
        for k in ks:
            key = checkpoint_key(g, k, mode, consequent_palette)
            report = done.get(key)
            if report is None:
                report = verify_conjecture_instance(g, k, mode, budget, consequent_palette, jobs=jobs)
                if checkpoint is not None:
                    _append_checkpoint(Path(checkpoint), key, report)
                    done[key] = report
            else:
                logger.debug("Checkpoint: %s взят из файла", key)
            reports.append(report)
            if on_report is not None:
                on_report(index, report)
        if (index + 1) % HUNT_PROGRESS_EVERY == 0:
            logger.info("Поиск: обработано %d графов", index + 1)
    found = sum(r.verdict is Verdict.COUNTEREXAMPLE for r in reports)
    logger.info("Поиск завершён: отчётов=%d, контрпримеров=%d", len(reports), found)
    return reports
