#!/usr/bin/env python3
"""
Instance and solution documents

Instance file:  optional '# key=value' comment lines, a header "KIND r k", then the
edge-list graph ("n m" followed by m "u v" lines).
Solution file:  one element per line, "V v" for a deleted vertex, "E- u v" for a deleted
edge, "E+ u v" for an added edge.
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

from errors import GraphParseError
from graph_core import edge_set, parse_graph, serialize_graph
from oracle import Instance, ProblemKind, Solution

logger = logging.getLogger(__name__)

INSTANCE_SUFFIX = ".inst"


def _content_lines(text: str) -> List[Tuple[int, str]]:
    return [(number, raw.strip()) for number, raw in enumerate(text.splitlines(), start=1)]


def header_comments(text: str) -> Dict[str, str]:
    """key=value pairs from '#' comment lines, e.g. the corpus seed"""
    found = {}
    for _, line in _content_lines(text):
        if not line.startswith('#'):
            continue
        body = line.lstrip('#').strip()
        if '=' in body:
            key, value = body.split('=', 1)
            found[key.strip()] = value.strip()
    return found


def instance_seed(text: str) -> Optional[int]:
    seed = header_comments(text).get("seed")
    return int(seed) if seed is not None and seed.lstrip('-').isdigit() else None


def parse_instance(text: str) -> Instance:
    lines = _content_lines(text)
    header = next(((n, line) for n, line in lines if line and not line.startswith('#')), None)
    if header is None:
        raise GraphParseError("empty instance document", 1)
    line_number, line = header
    parts = line.split()
    if len(parts) != 3:
        raise GraphParseError(f"expected header 'KIND r k', got {line!r}", line_number)
    try:
        kind = ProblemKind(parts[0].upper())
    except ValueError:
        kinds = ", ".join(k.value for k in ProblemKind)
        raise GraphParseError(f"unknown problem kind {parts[0]!r} (expected one of {kinds})",
                              line_number) from None
    try:
        r, k = int(parts[1]), int(parts[2])
    except ValueError:
        raise GraphParseError(f"r and k must be integers, got {line!r}", line_number) from None
    if r < 1 or k < 0:
        raise GraphParseError(f"need r >= 1 and k >= 0, got r={r}, k={k}", line_number)

    body = "\n".join(raw for number, raw in lines if number > line_number)
    graph = parse_graph(body, first_line_number=line_number + 1)
    return Instance(kind, r, k, graph)


def serialize_instance(instance: Instance, comments: Optional[Dict[str, object]] = None) -> str:
    lines = [f"# {key}={value}" for key, value in (comments or {}).items()]
    lines.append(f"{instance.kind.value} {instance.r} {instance.k}")
    return "\n".join(lines) + "\n" + serialize_graph(instance.graph)


def read_instance(path: Union[str, Path]) -> Instance:
    return parse_instance(Path(path).read_text())


def write_instance(path: Union[str, Path], instance: Instance,
                   comments: Optional[Dict[str, object]] = None) -> Path:
    path = Path(path)
    path.write_text(serialize_instance(instance, comments))
    logger.debug(f"Wrote {instance.kind.value} instance with n={instance.graph.n} to {path}")
    return path


def _parse_vertex(token: str, line_number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphParseError(f"expected an integer, got {token!r}", line_number) from None


def parse_solution(text: str) -> Solution:
    vertices, deletions, additions = [], [], []
    for line_number, line in _content_lines(text):
        if not line or line.startswith('#'):
            continue
        parts = line.split()
        tag, values = parts[0], [_parse_vertex(p, line_number) for p in parts[1:]]
        if tag == "V" and len(values) == 1:
            vertices.append(values[0])
        elif tag in ("E-", "E+") and len(values) == 2:
            u, v = values
            if u == v:
                raise GraphParseError(f"edge ({u}, {v}) is a self-loop", line_number)
            (deletions if tag == "E-" else additions).append((u, v))
        else:
            raise GraphParseError(f"expected 'V v', 'E- u v' or 'E+ u v', got {line!r}",
                                  line_number)
    return Solution(frozenset(vertices), edge_set(deletions), edge_set(additions))


def serialize_solution(solution: Solution) -> str:
    lines = [f"V {v}" for v in sorted(solution.vertices)]
    lines.extend(f"E- {u} {v}" for u, v in sorted(solution.deletions))
    lines.extend(f"E+ {u} {v}" for u, v in sorted(solution.additions))
    return "".join(line + "\n" for line in lines)


def read_solution(path: Union[str, Path]) -> Solution:
    return parse_solution(Path(path).read_text())


def format_record(fields: Dict[str, object]) -> str:
    """One key=value line; values with spaces are not quoted, so keep them space-free"""
    return " ".join(f"{key}={_format_value(value)}" for key, value in fields.items())


def _format_value(value: object) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value).replace(" ", "")


def corpus_files(directory: Union[str, Path]) -> List[Path]:
    """Instance files of a corpus directory in name order"""
    return sorted(Path(directory).glob(f"*{INSTANCE_SUFFIX}"))


def iter_instances(paths: Iterable[Path]) -> Iterable[Tuple[str, Instance]]:
    for path in paths:
        yield path.stem, read_instance(path)
