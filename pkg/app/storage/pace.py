"""
PACE 2017 treewidth files. Graph vertices are simplices, so every `.gr` / `.td`
file is accompanied by a JSON sidecar (``<file>.map.json``) mapping the 1-based
PACE ids back to simplices and naming the graph the ids belong to.

.td layout:
    c comment lines
    s td <num-bags> <max-bag-size> <num-graph-vertices>
    b <bag-id> <vertex> ...
    <bag-id> <bag-id>
"""
import json

from app.controllers.graph_controller import export_pace_graph, vertex_numbering
from app.errors import HomologyError, InvalidFileError
from app.logger import setup_logger
from app.models.decomposition import TreeDecomposition
from app.models.graph import GraphKind
from app.models.simplex import Simplex

logger = setup_logger(__name__)


def sidecar_path(path):
    return f"{path}.map.json"


def _write_text(path, text):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _write_sidecar(path, derived, mapping):
    payload = {
        "graph": derived.kind.value,
        "level": derived.level,
        "vertices": {str(index): list(simplex) for index, simplex in sorted(mapping.items())},
    }
    _write_text(sidecar_path(path), json.dumps(payload, indent=2) + "\n")


def read_sidecar(path):
    """Return ``(kind, level, {id: Simplex})`` from the sidecar of a PACE file."""
    try:
        with open(sidecar_path(path), "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        mapping = {int(index): Simplex(vertices) for index, vertices in payload["vertices"].items()}
        return GraphKind(payload["graph"]), int(payload["level"]), mapping
    except OSError as error:
        raise InvalidFileError(f"missing id mapping {sidecar_path(path)}") from error
    except (ValueError, KeyError, TypeError, HomologyError) as error:
        raise InvalidFileError(f"invalid id mapping {sidecar_path(path)}: {error}") from error


def write_pace_graph(path, derived):
    """Write the `.gr` text of a derived graph and its sidecar."""
    text, mapping = export_pace_graph(derived)
    _write_text(path, text)
    _write_sidecar(path, derived, mapping)


def format_pace_td(td, numbering):
    """PACE `.td` text of td; bags are numbered 1.. in node order.

    Args:
        td (TreeDecomposition): Decomposition over simplices.
        numbering (dict): Simplex -> 1-based PACE id.
    """
    bag_ids = {node: index for index, node in enumerate(td.nodes, start=1)}
    max_size = max((len(bag) for bag in td.bags.values()), default=0)
    lines = [f"s td {len(bag_ids)} {max_size} {len(numbering)}"]
    for node in td.nodes:
        ids = sorted(numbering[vertex] for vertex in td.bags[node])
        lines.append(" ".join(["b", str(bag_ids[node])] + [str(i) for i in ids]))
    lines.extend(f"{bag_ids[a]} {bag_ids[b]}" for a, b in td.edges)
    return "\n".join(lines) + "\n"


def parse_pace_td(text):
    """Parse `.td` text into ``({bag_id: set(ids)}, [(bag_id, bag_id)])``.

    Raises:
        InvalidFileError: missing or repeated solution line, malformed lines, or a
            bag count that disagrees with the solution line.
    """
    header = None
    bags = {}
    edges = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        try:
            if parts[0] == "s":
                if header is not None or len(parts) != 5 or parts[1] != "td":
                    raise InvalidFileError(f"line {line_number}: bad solution line {raw.strip()!r}")
                header = tuple(int(p) for p in parts[2:])
            elif header is None:
                raise InvalidFileError(f"line {line_number}: content before the solution line")
            elif parts[0] == "b":
                if len(parts) < 2:
                    raise InvalidFileError(f"line {line_number}: bag line without id")
                bags[int(parts[1])] = {int(v) for v in parts[2:]}
            elif len(parts) == 2:
                edges.append((int(parts[0]), int(parts[1])))
            else:
                raise InvalidFileError(f"line {line_number}: unexpected {raw.strip()!r}")
        except InvalidFileError:
            raise
        except ValueError as error:
            raise InvalidFileError(f"line {line_number}: non-integer value in {raw.strip()!r}") from error
    if header is None:
        raise InvalidFileError("no 's td' solution line")
    if header[0] != len(bags):
        raise InvalidFileError(f"solution line declares {header[0]} bags, found {len(bags)}")
    return bags, edges


def write_pace_td(path, td, derived):
    """Write td (a decomposition of ``derived``) as `.td` plus the id sidecar."""
    numbering = vertex_numbering(derived)
    _write_text(path, format_pace_td(td, numbering))
    _write_sidecar(path, derived, {index: vertex for vertex, index in numbering.items()})
    logger.info("wrote %s: %d bags, width %d", path, len(td), td.width())


def read_pace_td(path, kind=None, level=None):
    """Read a `.td` file and translate its ids back to simplices.

    Parameters:
    - kind, level: when given, the sidecar must name this graph.

    Returns:
        TreeDecomposition: Nodes are the PACE bag ids minus one.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as error:
        raise InvalidFileError(f"cannot read {path}: {error.strerror}") from error
    bags, edges = parse_pace_td(text)
    found_kind, found_level, mapping = read_sidecar(path)
    if kind is not None and GraphKind(kind) != found_kind:
        raise InvalidFileError(f"{path} decomposes the {found_kind.value} graph, expected {GraphKind(kind).value}")
    if level is not None and level != found_level:
        raise InvalidFileError(f"{path} decomposes level {found_level}, expected {level}")
    unknown = sorted({v for bag in bags.values() for v in bag} - set(mapping))
    if unknown:
        raise InvalidFileError(f"{path} uses ids missing from the mapping: {unknown[:5]}")
    td = TreeDecomposition({node - 1: {mapping[v] for v in bag} for node, bag in bags.items()},
                           ((a - 1, b - 1) for a, b in edges))
    logger.info("read %s: %d bags, width %d", path, len(td), td.width())
    return td
