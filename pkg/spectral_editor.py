#!/usr/bin/env python3
"""
Spectral Editor - command-line entry point
Subcommands: solve, verify, kernelize, generate, spectrum, bench.
Exit codes: 0 YES/accept, 1 NO/reject, 2 usage, 3 capacity, 4 indeterminate.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from bench_runner import BenchRunner, RunRecord, make_corpus
from engines import Engine, engine_names, run_engine
from errors import (BenchDisagreement, CapacityError, ContractError, GraphParseError,
                    SpectralEditError, UsageError)
from graph_core import (complete_bipartite_graph, complete_graph, diameter, parse_graph,
                        petersen_graph)
from instance_files import (corpus_files, format_record, iter_instances, read_instance,
                            read_solution, serialize_instance, write_instance,
                            serialize_solution)
from kernel_eea import KernelVerdict, kernelize_2eea
from oracle import Answer, ProblemKind, check_solution
from reductions import (GENERATORS, Construction, Gadget, ReducedInstance, cube_graph,
                        find_triangle_partition, max_independent_set, min_vertex_cover,
                        prism_graph, solve_3partition)
from solver_config import DEFAULT_CONFIG_FILE, SolverConfig, load_config
from spectral import char_poly, distinct_eigenvalue_count, float_spectrum, gap_cluster_count

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_INDETERMINATE = 4

ANSWER_EXIT_CODES = {
    Answer.YES: EXIT_YES,
    Answer.NO: EXIT_NO,
    Answer.INDETERMINATE: EXIT_INDETERMINATE,
}

NAMED_SOURCES = {
    "k33": lambda: complete_bipartite_graph(3, 3),
    "cube": cube_graph,
    "k4": lambda: complete_graph(4),
    "k3": lambda: complete_graph(3),
    "prism": prism_graph,
    "petersen": petersen_graph,
}

# source sizes for which the brute force is run to annotate the sidecar
EXPECTED_ANSWER_MAX_VERTICES = 40
EXPECTED_ANSWER_MAX_NUMBERS = 30


class SpectralEditor:
    """Routes parsed subcommands to the solver modules"""

    def __init__(self, config: SolverConfig):
        self.config = config
        self.logger = logging.getLogger(__name__)

    # -- solve ---------------------------------------------------------------

    def cmd_solve(self, args) -> int:
        instance = read_instance(args.instance)
        self.logger.info(f"Solving {instance.kind.value} r={instance.r} k={instance.k} "
                         f"on n={instance.graph.n}, m={instance.graph.m} with {args.engine}")
        result = run_engine(instance, Engine(args.engine), self.config)
        record = RunRecord(Path(args.instance).stem, result.engine, result.answer.value,
                           stats=dict(result.stats))
        if result.solution is not None:
            record.solution_size = result.solution.size
            record.verification = "passed"
            if args.output:
                Path(args.output).write_text(serialize_solution(result.solution))
        if args.json:
            payload = {"answer": result.answer.value, "engine": result.engine,
                       "solution": result.solution.describe() if result.solution else None,
                       "distinct_count": result.distinct_count, "stats": result.stats}
            print(json.dumps(payload, sort_keys=True))
        else:
            print(record.to_line())
            if result.solution is not None:
                print(f"solution: {result.solution.describe()}")
        return ANSWER_EXIT_CODES[result.answer]

    # -- verify --------------------------------------------------------------

    def cmd_verify(self, args) -> int:
        instance = read_instance(args.instance)
        solution = read_solution(args.solution)
        verdict = check_solution(instance, solution, with_count=True)
        print(format_record({
            "verdict": "accept" if verdict.accepted else "reject",
            "size": verdict.size,
            "budget": instance.k,
            "distinct": verdict.distinct_count,
        }))
        print(f"reason: {verdict.reason}")
        return EXIT_YES if verdict.accepted else EXIT_NO

    # -- kernelize -----------------------------------------------------------

    def cmd_kernelize(self, args) -> int:
        instance = read_instance(args.instance)
        if instance.kind is not ProblemKind.EEA or instance.r != 2:
            raise UsageError(f"kernelize handles EEA with r=2, got {instance.kind.value} r={instance.r}")
        trace = kernelize_2eea(instance.graph, instance.k)
        for line in trace.describe():
            print(line)
        if trace.verdict is KernelVerdict.REDUCED:
            if args.output:
                write_instance(args.output, trace.final_instance)
                print(f"✓ Kernel written to {args.output}")
            else:
                print(serialize_instance(trace.final_instance), end="")
        return EXIT_NO if trace.verdict is KernelVerdict.NO else EXIT_YES

    # -- generate ------------------------------------------------------------

    def _source_graph(self, args):
        if args.graph:
            return parse_graph(Path(args.graph).read_text())
        if args.named:
            return NAMED_SOURCES[args.named]()
        raise UsageError(f"construction {args.construction} needs --graph or --named")

    def _numbers(self, args) -> List[int]:
        if not args.numbers or args.b is None:
            raise UsageError(f"construction {args.construction} needs --numbers and --b")
        try:
            return [int(x) for x in args.numbers.split(",")]
        except ValueError:
            raise UsageError(f"--numbers must be comma-separated integers, got {args.numbers!r}") from None

    def _require(self, args, *names: str) -> None:
        missing = [f"--{name}" for name in names if getattr(args, name) is None]
        if missing:
            raise UsageError(f"construction {args.construction} needs {', '.join(missing)}")

    def _build(self, args) -> ReducedInstance:
        construction = Construction(args.construction)
        generator = GENERATORS[construction]
        limit = self.config.max_generated_vertices
        if construction is Construction.IS_COPIES:
            self._require(args, "z")
            return generator(self._source_graph(args), args.z, args.copies, max_vertices=limit)
        if construction is Construction.IS_CLIQUES:
            self._require(args, "z")
            return generator(self._source_graph(args), args.z, max_vertices=limit)
        if construction is Construction.VC_PATHS:
            self._require(args, "k", "r")
            return generator(self._source_graph(args), args.k, args.r, max_vertices=limit)
        if construction is Construction.EEA_3PARTITION:
            return generator(self._numbers(args), args.b, Gadget(args.gadget), max_vertices=limit)
        if construction is Construction.REEA_3PARTITION:
            self._require(args, "r")
            return generator(self._numbers(args), args.b, args.r, max_vertices=limit)
        if construction is Construction.REED_TRIANGLES:
            self._require(args, "r")
            return generator(self._source_graph(args), args.r, max_vertices=limit)
        return generator(self._source_graph(args), max_vertices=limit)

    @staticmethod
    def expected_answer(reduced: ReducedInstance) -> Optional[str]:
        """Source-side brute-force answer, when the source is small enough"""
        source = reduced.source
        construction = reduced.construction
        if source.graph is not None and source.graph.n > EXPECTED_ANSWER_MAX_VERTICES:
            return None
        if len(source.numbers) > EXPECTED_ANSWER_MAX_NUMBERS:
            return None
        if construction in (Construction.IS_COPIES, Construction.IS_CLIQUES):
            holds = len(max_independent_set(source.graph)) >= source.z
        elif construction is Construction.VC_PATHS:
            holds = len(min_vertex_cover(source.graph)) <= source.k
        elif construction in (Construction.EEA_3PARTITION, Construction.REEA_3PARTITION):
            holds = solve_3partition(source.numbers, source.b) is not None
        else:
            holds = find_triangle_partition(source.graph) is not None
        return Answer.YES.value if holds else Answer.NO.value

    def cmd_generate(self, args) -> int:
        reduced = self._build(args)
        sidecar = reduced.sidecar()
        sidecar["expected"] = self.expected_answer(reduced)
        output = Path(args.output)
        write_instance(output, reduced.instance, {"construction": reduced.construction.value})
        sidecar_path = output.with_suffix(".json")
        with open(sidecar_path, 'w') as f:
            json.dump(sidecar, f, indent=2)
        print(f"✓ {reduced.construction.value}: n={reduced.instance.graph.n}, "
              f"m={reduced.instance.graph.m}, budget={reduced.budget} -> {output}")
        for note in reduced.notes:
            print(f"⚠ {note}")
        return EXIT_YES

    # -- spectrum ------------------------------------------------------------

    def cmd_spectrum(self, args) -> int:
        if args.instance:
            graph = read_instance(args.graph).graph
        else:
            graph = parse_graph(Path(args.graph).read_text())
        spectrum = float_spectrum(graph, self.config.float_tolerance)
        print(format_record({
            "n": graph.n,
            "m": graph.m,
            "distinct": distinct_eigenvalue_count(graph),
            "gap_clusters": gap_cluster_count(spectrum.values, self.config.cluster_tolerance),
            "diameter": diameter(graph),
        }))
        print(f"charpoly: {char_poly(graph)}")
        print("eigenvalues: " + " ".join(f"{value:.6f}" for value in spectrum.values))
        return EXIT_YES

    # -- bench ---------------------------------------------------------------

    def cmd_bench(self, args) -> int:
        if args.make_corpus is not None:
            paths = make_corpus(args.corpus, args.make_corpus, args.seed)
            print(f"✓ Wrote {len(paths)} instances to {args.corpus} (seed={args.seed})")
            return EXIT_YES

        engines = [name.strip() for name in args.engines.split(",") if name.strip()]
        unknown = [name for name in engines if name not in engine_names()]
        if unknown:
            raise UsageError(f"unknown engines {unknown}; choose from {engine_names()}")
        if args.workers is not None:
            self.config.bench_workers = args.workers
        corpus = list(iter_instances(corpus_files(args.corpus)))
        runner = BenchRunner(self.config, args.db)
        try:
            records = runner.run(corpus, engines, corpus_name=str(args.corpus))
        except BenchDisagreement as e:
            print(f"❌ {e}", file=sys.stderr)
            return EXIT_NO
        for record in records:
            print(record.to_json() if args.jsonl else record.to_line())
        self.logger.info(f"Bench finished: {len(records)} records, 0 disagreements")
        return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Spectral Editor - graph modification towards few distinct eigenvalues")
    parser.add_argument("--config", default=DEFAULT_CONFIG_FILE, help="Configuration file")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("-i", "--interactive", action="store_true", help="Verbose (DEBUG) logging")
    mode.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    solve_parser = subparsers.add_parser("solve", help="Decide an instance file")
    solve_parser.add_argument("instance", help="Instance file")
    solve_parser.add_argument("--engine", choices=engine_names(), default=Engine.AUTO.value)
    solve_parser.add_argument("--output", help="Write the solution file here")
    solve_parser.add_argument("--json", action="store_true", help="Print one JSON object")

    verify_parser = subparsers.add_parser("verify", help="Check a solution against an instance")
    verify_parser.add_argument("instance", help="Instance file")
    verify_parser.add_argument("solution", help="Solution file")

    kernel_parser = subparsers.add_parser("kernelize", help="Kernelize an EEA r=2 instance")
    kernel_parser.add_argument("instance", help="Instance file")
    kernel_parser.add_argument("--output", help="Write the kernel instance here")

    generate_parser = subparsers.add_parser("generate", help="Build an instance from a hardness construction")
    generate_parser.add_argument("--construction", required=True, choices=[c.value for c in Construction])
    generate_parser.add_argument("--output", required=True, help="Instance file to write (sidecar: .json)")
    generate_parser.add_argument("--graph", help="Source graph edge-list file")
    generate_parser.add_argument("--named", choices=sorted(NAMED_SOURCES), help="Built-in source graph")
    generate_parser.add_argument("--numbers", help="3-Partition numbers, comma-separated")
    generate_parser.add_argument("--b", type=int, help="3-Partition bound")
    generate_parser.add_argument("--z", type=int, help="Independent set target")
    generate_parser.add_argument("--k", type=int, help="Vertex cover budget")
    generate_parser.add_argument("--r", type=int, help="Eigenvalue bound r")
    generate_parser.add_argument("--copies", type=int, default=2, help="Copies per vertex (is-copies)")
    generate_parser.add_argument("--gadget", choices=[g.value for g in Gadget], default=Gadget.CLIQUE.value)

    spectrum_parser = subparsers.add_parser("spectrum", help="Spectral summary of a graph")
    spectrum_parser.add_argument("graph", help="Edge-list graph file")
    spectrum_parser.add_argument("--instance", action="store_true", help="The file is an instance file")

    bench_parser = subparsers.add_parser("bench", help="Run engines over a corpus")
    bench_parser.add_argument("corpus", help="Corpus directory")
    bench_parser.add_argument("--engines", default="oracle,fpt", help="Comma-separated engines")
    bench_parser.add_argument("--jsonl", action="store_true", help="JSON lines instead of key=value")
    bench_parser.add_argument("--db", help="sqlite file for run records")
    bench_parser.add_argument("--workers", type=int, help="Worker processes (overrides config)")
    bench_parser.add_argument("--make-corpus", type=int, metavar="N", help="Write N random instances and exit")
    bench_parser.add_argument("--seed", type=int, default=0, help="Corpus seed")
    return parser


def configure_logging(args, config: SolverConfig) -> None:
    if args.interactive:
        level, fmt = logging.DEBUG, '%(asctime)s [%(levelname)s] %(message)s'
    elif args.quiet:
        level, fmt = logging.WARNING, '[%(levelname)s] %(message)s'
    else:
        level, fmt = getattr(logging, str(config.log_level).upper(), logging.INFO), '[%(levelname)s] %(message)s'
    logging.basicConfig(level=level, format=fmt, force=True)


def main(argv: Optional[List[str]] = None) -> int:
    """Main command-line interface"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    config = load_config(args.config, create_missing=True)
    configure_logging(args, config)
    app = SpectralEditor(config)
    commands = {
        "solve": app.cmd_solve,
        "verify": app.cmd_verify,
        "kernelize": app.cmd_kernelize,
        "generate": app.cmd_generate,
        "spectrum": app.cmd_spectrum,
        "bench": app.cmd_bench,
    }
    try:
        return commands[args.command](args)
    except (UsageError, GraphParseError, ContractError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as e:
        print(f"Capacity: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except KeyboardInterrupt:
        print("\n\nOperation cancelled by user.", file=sys.stderr)
        return EXIT_NO
    except (SpectralEditError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_NO


if __name__ == "__main__":
    sys.exit(main())
