"""OVERVIEW:
Text formats flatmod reads and writes.

- Edge list      → "u v" per line, "#" comments, optional "# n=<count>" header
- Id map         → "dense_id original_id" per line (written when sparse ids are remapped)
- Membership     → "vertex_id cluster_id" per line, sorted by vertex id
- Merge trace    → "step i j delta_num delta_den" per line, "# variant=..." header

All readers take text (not paths) so they can be fed from files, caches or
test strings alike; the *_file helpers wrap them for paths.
"""

import re
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError as PydanticValidationError

from src.models.exceptions import InputFileError, ParseError, TraceMismatch, ValidationError
from src.models.graph_models import Graph, Partition
from src.models.score_models import MergeRecord, score_variant_adapter
from src.workflows.graph_core import build_graph

HEADER_RE = re.compile(r"^#\s*n\s*=\s*(\d+)\s*$")


def _data_lines(text: str):
    """Yield (line_number, stripped line) for non-empty, non-comment lines"""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line


def _two_ints(line: str, number: int, what: str) -> Tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise ParseError(f"expected two integers ({what}), got {line!r}", number)
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"expected two integers ({what}), got {line!r}", number) from None
    if a < 0 or b < 0:
        raise ParseError(f"negative id in {line!r}", number)
    return a, b


def _header_count(text: str) -> Optional[int]:
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        match = HEADER_RE.match(line)
        return int(match.group(1)) if match else None
    return None


def load_edge_list(text: str, remap: bool = False) -> Graph:
    """Parse an edge list into a validated Graph.

    Vertex count is 1 + max id unless a "# n=<count>" first line says
    otherwise. With remap=True, the distinct ids that appear are mapped to
    0..k-1 in ascending order and Graph.original_ids keeps the translation.
    """
    edges: List[Tuple[int, int]] = []
    seen: Dict[Tuple[int, int], int] = {}
    for number, line in _data_lines(text):
        u, v = _two_ints(line, number, "u v")
        if u == v:
            raise ValidationError(f"line {number}: self-loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise ValidationError(f"line {number}: duplicate edge {key} (first on line {seen[key]})")
        seen[key] = number
        edges.append(key)

    header_n = _header_count(text)
    original_ids = None
    if remap:
        ids = sorted({x for e in edges for x in e})
        dense = {orig: i for i, orig in enumerate(ids)}
        edges = [(dense[u], dense[v]) for u, v in edges]
        original_ids = ids
        n = len(ids)
    else:
        n = 1 + max((x for e in edges for x in e), default=-1)
        if header_n is not None:
            if header_n < n:
                raise ValidationError(f"header n={header_n} but edges use vertex id {n - 1}")
            n = header_n

    return build_graph(n, edges, original_ids=original_ids)


def write_edge_list(g: Graph) -> str:
    """Canonical form: header, then "u v" (u < v) sorted ascending"""
    lines = [f"# n={g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def write_id_map(g: Graph) -> str:
    if g.original_ids is None:
        return "".join(f"{v} {v}\n" for v in range(g.n))
    return "".join(f"{v} {orig}\n" for v, orig in enumerate(g.original_ids))


def load_partition(text: str, n: Optional[int] = None) -> Partition:
    """Read a membership file; every vertex 0..n-1 must appear exactly once"""
    labels: Dict[int, int] = {}
    for number, line in _data_lines(text):
        v, c = _two_ints(line, number, "vertex cluster")
        if v in labels:
            raise ParseError(f"vertex {v} assigned twice", number)
        labels[v] = c
    count = n if n is not None else len(labels)
    missing = [v for v in range(count) if v not in labels]
    if missing or len(labels) != count:
        raise ValidationError(
            f"membership must cover vertices 0..{count - 1} exactly; missing {missing[:5]}"
        )
    return Partition.from_assignment([labels[v] for v in range(count)])


def write_partition(p: Partition) -> str:
    return "".join(f"{v} {c}\n" for v, c in enumerate(p.assignment))


def write_trace(trace: Sequence[MergeRecord], variant=None) -> str:
    lines = []
    if variant is not None:
        lines.append(f"# variant={variant.model_dump_json()}")
    lines.extend(f"{m.step} {m.i} {m.j} {m.delta_num} {m.delta_den}" for m in trace)
    return "\n".join(lines) + ("\n" if lines else "")


def load_trace(text: str):
    """Return (variant or None, [MergeRecord, ...])"""
    variant = None
    records: List[MergeRecord] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("# variant="):
            try:
                variant = score_variant_adapter.validate_json(line[len("# variant="):])
            except PydanticValidationError as e:
                raise ParseError(f"unreadable variant header: {e.errors()[0]['msg']}", number) from e
            continue
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ParseError(f"expected 'step i j delta_num delta_den', got {line!r}", number)
        try:
            step, i, j, num, den = (int(x) for x in parts)
        except ValueError:
            raise ParseError(f"non-integer field in {line!r}", number) from None
        if step != len(records) + 1:
            raise TraceMismatch(f"line {number}: step {step} out of order")
        records.append(MergeRecord(step, i, j, num, den))
    return variant, records


def read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputFileError(f"cannot read {path}: {e}") from e


def write_text(path: Union[str, Path], text: str) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    return target


def load_edge_list_file(path: Union[str, Path], remap: bool = False) -> Graph:
    return load_edge_list(read_text(path), remap=remap)


def load_partition_file(path: Union[str, Path], n: Optional[int] = None) -> Partition:
    return load_partition(read_text(path), n=n)
