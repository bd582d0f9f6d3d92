"""
Командная строка prismext.

Результаты (графы, раскраски, JSON-отчёты) печатаются в stdout, журнал
идёт в stderr. Коды выхода: 0 - успех, 1 - контрпример или
нерасширяемость, 2 - ошибка входа, 3 - исчерпан бюджет.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from prismext.config import (
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_SEED,
    EXIT_BUDGET,
    EXIT_COUNTEREXAMPLE,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    LOG_LEVEL,
)
from prismext.exceptions import PrismExtError, PreconditionError
from prismext.models.coloring import PartialEdgeColoring
from prismext.models.outcome import ExtensionOutcome, OutcomeStatus, SearchBudget
from prismext.models.report import EnumerationMode, Verdict, VerificationReport
from prismext.services import fixtures
from prismext.services.characterizations import detect_condition
from prismext.services.extenders.auto import METHODS, run_method
from prismext.services.formats import load_coloring, load_graph, write_coloring, write_graph
from prismext.services.graph_core import cartesian_product, chromatic_index, prism
from prismext.services.harness import (
    FAMILIES,
    XVAL_METHODS,
    cross_validate,
    family_graphs,
    hunt_counterexamples,
    method_bases,
    verify_conjecture_instance,
    verify_hypothesis,
)
from prismext.services.oracle import extend_exhaustive

logger = logging.getLogger("prismext")

FIXTURES = ("odd-cycle-pair", "odd-cycle-four", "complete-odd", "path")


# Helpers
def _budget(args: argparse.Namespace) -> Optional[SearchBudget]:
    if args.budget_nodes is None and args.time_limit is None:
        return None
    return SearchBudget(max_nodes=args.budget_nodes, time_limit=args.time_limit)


def _mode(args: argparse.Namespace) -> EnumerationMode:
    if args.sample is not None:
        return EnumerationMode.sample(args.seed, args.sample)
    return EnumerationMode.exhaustive(force=args.force)


def _emit_json(args: argparse.Namespace, payload) -> None:
    """JSON в файл --json или в stdout."""
    text = json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    if args.json:
        Path(args.json).write_text(text, encoding="utf-8")
        logger.info("JSON записан в %s", args.json)
    else:
        sys.stdout.write(text)


def _outcome_code(outcome: ExtensionOutcome) -> int:
    return {
        OutcomeStatus.EXTENDED: EXIT_OK,
        OutcomeStatus.NOT_EXTENDABLE: EXIT_COUNTEREXAMPLE,
        OutcomeStatus.UNKNOWN: EXIT_BUDGET,
    }[outcome.status]


def _report_code(reports: Sequence[VerificationReport]) -> int:
    verdicts = {r.verdict for r in reports}
    if verdicts & {Verdict.FAILS, Verdict.COUNTEREXAMPLE}:
        return EXIT_COUNTEREXAMPLE
    if Verdict.INCONCLUSIVE in verdicts:
        return EXIT_BUDGET
    return EXIT_OK


def _print_outcome(outcome: ExtensionOutcome) -> None:
    if outcome.is_extended:
        sys.stdout.write(write_coloring(outcome.coloring))
    else:
        sys.stdout.write(f"{outcome.status.value}\n")


def _dump_reports(reports: Sequence[VerificationReport]) -> List[dict]:
    return [r.model_dump(mode="json") for r in reports]


# Commands
def cmd_gen(args: argparse.Namespace) -> int:
    for g in family_graphs(args.family, args.max_size, args.seed, args.count, args.degree, args.path):
        if args.format == "json":
            sys.stdout.write(write_graph(g, as_json=True) + "\n")
        else:
            sys.stdout.write(write_graph(g) + "\n")
    return EXIT_OK


def cmd_product(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    product = prism(g).product if args.other is None else cartesian_product(g, load_graph(args.other))
    sys.stdout.write(write_graph(product, as_json=args.format == "json"))
    return EXIT_OK


def cmd_chi(args: argparse.Namespace) -> int:
    result = chromatic_index(load_graph(args.graph), _budget(args))
    _emit_json(args, result.model_dump(mode="json", exclude={"witness"}))
    return EXIT_BUDGET if result.index is None else EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    outcome = extend_exhaustive(load_coloring(args.coloring, g), _budget(args))
    _print_outcome(outcome)
    return _outcome_code(outcome)


def _instance_paths(args: argparse.Namespace) -> Tuple[str, str]:
    """Файлы графа и раскраски: --graph/--coloring или позиционные аргументы."""
    graph = args.graph_file or args.graph
    coloring = args.coloring_file or args.coloring
    if graph is None or coloring is None:
        raise PreconditionError("нужны файл графа и файл раскраски (позиционно или --graph/--coloring)")
    return graph, coloring


def cmd_extend(args: argparse.Namespace) -> int:
    graph_path, coloring_path = _instance_paths(args)
    g = load_graph(graph_path)
    c = load_coloring(coloring_path, g, args.palette)
    outcome, trace = run_method(args.method, g, c, _budget(args))
    _print_outcome(outcome)
    if args.trace or args.json:
        _emit_json(args, trace.model_dump(mode="json", exclude={"coloring"}))
    if trace.fallback:
        logger.warning("Расширитель %s перешёл к оракулу", trace.route)
    return _outcome_code(outcome)


def cmd_check(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    report = detect_condition(g, load_coloring(args.coloring, g))
    _emit_json(args, report.model_dump(mode="json"))
    return EXIT_COUNTEREXAMPLE if report.fired else EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    if args.conjecture:
        report = verify_conjecture_instance(
            g, args.k, _mode(args), _budget(args), args.consequent_palette, args.jobs, args.progress
        )
    else:
        palette = args.palette if args.palette is not None else chromatic_index(g, _budget(args)).index
        if palette is None:
            logger.error("χ' не определён в пределах бюджета, задайте --palette")
            return EXIT_BUDGET
        report = verify_hypothesis(
            g, args.k, palette, _mode(args), _budget(args), args.jobs, args.independent, args.progress
        )
    _emit_json(args, report.model_dump(mode="json"))
    return _report_code([report])


def cmd_hunt(args: argparse.Namespace) -> int:
    graphs = family_graphs(args.family, args.max_size, args.seed, args.count, args.degree, args.path)
    reports = hunt_counterexamples(
        graphs, args.k, _mode(args), _budget(args), Path(args.checkpoint) if args.checkpoint else None, args.jobs,
        consequent_palette=args.consequent_palette,
    )
    _emit_json(args, _dump_reports(reports))
    return _report_code(reports)


def cmd_xval(args: argparse.Namespace) -> int:
    if args.graph:
        bases = [load_graph(path) for path in args.graph]
    else:
        bases = list(method_bases(args.method, args.sizes))
    reports = cross_validate(
        args.method, bases, _mode(args), _budget(args), args.jobs, args.k, args.all_sizes, args.progress
    )
    _emit_json(args, _dump_reports(reports))
    return EXIT_COUNTEREXAMPLE if any(r.mismatches for r in reports) else _report_code(reports)


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("prismext.main:app", host=args.host, port=args.port, log_level=LOG_LEVEL.lower())
    return EXIT_OK


def cmd_fixtures(args: argparse.Namespace) -> int:
    builders: Dict[str, Callable[[], PartialEdgeColoring]] = {
        "odd-cycle-pair": lambda: fixtures.odd_cycle_corresponding_pair(args.n),
        "odd-cycle-four": lambda: fixtures.odd_cycle_four_edges(args.n),
        "complete-odd": lambda: fixtures.complete_odd_two_edges(args.n),
        "path": fixtures.path_condition_instance,
    }
    c = builders[args.name]()
    sys.stdout.write(write_graph(c.graph))
    sys.stdout.write(write_coloring(c))
    return EXIT_OK


# Parser
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="зерно выборок и случайных графов")
    common.add_argument("--jobs", type=int, default=1, help="число процессов")
    common.add_argument("--budget-nodes", type=int, default=None, help="лимит узлов перебора на экземпляр")
    common.add_argument("--time-limit", type=float, default=None, help="лимит времени на экземпляр, секунды")
    common.add_argument("--json", metavar="OUT", default=None, help="куда записать JSON (по умолчанию stdout)")
    common.add_argument("--checkpoint", metavar="FILE", default=None, help="файл checkpoint для hunt")
    common.add_argument("--sample", type=int, nargs="?", const=DEFAULT_SAMPLE_COUNT, default=None,
                        help="выборка вместо полного перебора")
    common.add_argument("--force", action="store_true", help="полный перебор сверх лимита")
    common.add_argument("--progress", action="store_true", help="полоса прогресса в stderr")
    common.add_argument("-v", "--verbose", action="store_true", help="подробный журнал")

    parser = argparse.ArgumentParser(prog="prismext", description="Продолжение частичных рёберных раскрасок G□K₂")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable[[argparse.Namespace], int], help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    def add_family(p: argparse.ArgumentParser) -> None:
        p.add_argument("family", choices=FAMILIES)
        p.add_argument("--max-size", type=int, required=True)
        p.add_argument("--count", type=int, default=10, help="число случайных графов")
        p.add_argument("--degree", type=int, default=3, help="степень случайных регулярных графов")
        p.add_argument("--path", type=Path, default=None, help="файл для from_file")

    p = add("gen", cmd_gen, "графы семейства")
    add_family(p)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("product", cmd_product, "декартово произведение (по умолчанию с K₂)")
    p.add_argument("graph")
    p.add_argument("other", nargs="?", default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("chi", cmd_chi, "хроматический индекс")
    p.add_argument("graph")

    p = add("oracle", cmd_oracle, "продолжение полным перебором")
    p.add_argument("graph")
    p.add_argument("coloring")

    p = add("extend", cmd_extend, "продолжение расширителем")
    p.add_argument("graph", nargs="?", default=None)
    p.add_argument("coloring", nargs="?", default=None)
    p.add_argument("--graph", dest="graph_file", metavar="FILE", default=None, help="файл графа G□K₂")
    p.add_argument("--coloring", dest="coloring_file", metavar="FILE", default=None, help="файл раскраски")
    p.add_argument("--palette", type=int, default=None, help="палитра вместо указанной в файле раскраски")
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--trace", action="store_true", help="JSON-трасса после раскраски (или в --json)")

    p = add("check", cmd_check, "условие нерасширяемости")
    p.add_argument("graph")
    p.add_argument("coloring")

    p = add("verify", cmd_verify, "гипотеза расширяемости или гипотеза для призмы")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--palette", type=int, default=None, help="по умолчанию χ'")
    p.add_argument("--conjecture", action="store_true", help="антецедент на G и следствие на G□K₂")
    p.add_argument("--consequent-palette", type=int, default=None)
    p.add_argument("--independent", action="store_true", help="только независимые предраскраски")

    p = add("hunt", cmd_hunt, "поиск контрпримеров по семейству")
    add_family(p)
    p.add_argument("--k", type=int, nargs="+", default=None, help="значения k (по умолчанию Δ-1)")
    p.add_argument("--consequent-palette", type=int, default=None, help="палитра следствия (по умолчанию χ'+1)")

    p = add("xval", cmd_xval, "сверка расширителя с оракулом")
    p.add_argument("method", choices=XVAL_METHODS)
    p.add_argument("--sizes", type=int, nargs="+", default=[3])
    p.add_argument("--graph", action="append", default=None, help="файл базы (можно повторять)")
    p.add_argument("--k", type=int, default=None, help="k для метода regular")
    p.add_argument("--all-sizes", action="store_true", help="все числа окрашенных рёбер до границы")

    p = add("serve", cmd_serve, "HTTP-сервис")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    p = add("fixtures", cmd_fixtures, "нерасширяемые примеры")
    p.add_argument("name", choices=FIXTURES)
    p.add_argument("--n", type=int, default=2)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else LOG_LEVEL,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except PrismExtError as exc:
        logger.error("%s", exc)
        witness = getattr(exc, "witness", None)
        if isinstance(witness, PartialEdgeColoring):
            sys.stdout.write(write_coloring(witness))
        return EXIT_INPUT_ERROR
    except OSError as exc:
        logger.error("Ошибка файла: %s", exc)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
