import json
import logging

from kgraph.models.actions import Automorphism, ZlAction
from kgraph.models.constructions import Cocycle
from kgraph.models.skeleton import Edge, Skeleton, Square, path_from_edges, vertex_path
from kgraph.utils.exceptions import FormatError

logger = logging.getLogger(__name__)

SKELETON_FIELDS = {"k", "vertices", "edges", "squares", "boundary"}
EDGE_FIELDS = {"id", "color", "range", "source"}
SQUARE_FIELDS = {"first", "second"}
ACTION_FIELDS = {"l", "generators"}
GENERATOR_FIELDS = {"vertex_map", "edge_map"}
COCYCLE_FIELDS = {"values"}


def _check_fields(content, allowed, what, required=None):
    if not isinstance(content, dict):
        raise FormatError(f"{what} must be a JSON object")
    unknown = sorted(set(content) - allowed)
    if unknown:
        raise FormatError(f"{what} has unknown fields {unknown}")
    missing = sorted((allowed if required is None else required) - set(content))
    if missing:
        raise FormatError(f"{what} is missing fields {missing}")


def _check_unique(ids, what):
    seen = set()
    for x in ids:
        if x in seen:
            raise FormatError(f'Duplicate {what} id "{x}"')
        seen.add(x)


def _require(condition, message):
    if not condition:
        raise FormatError(message)


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _pair(value, what):
    if not isinstance(value, list) or len(value) != 2 or not all(isinstance(e, str) for e in value):
        raise FormatError(f"{what} must be a list of two edge ids")
    return tuple(value)


def skeleton_from_dict(content):
    """Build a skeleton from its JSON form

    Only the shape is checked here. Whether the squares define a k-graph is the job of
    ``validate_skeleton``.

    :param content: Parsed JSON with the keys ``k``, ``vertices``, ``edges``, ``squares`` and
        optionally ``boundary``
    :type content: dict
    :return: Skeleton
    :rtype: Skeleton
    """
    _check_fields(content, SKELETON_FIELDS, "Skeleton", SKELETON_FIELDS - {"boundary"})
    k = content["k"]
    if not _is_int(k) or k < 1:
        raise FormatError(f'"k" must be a positive integer, got {k!r}')
    vertices = content["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise FormatError('"vertices" must be a list of strings')
    _check_unique(vertices, "vertex")
    _require(isinstance(content["edges"], list), '"edges" must be a list')
    _require(isinstance(content["squares"], list), '"squares" must be a list')

    edges = []
    for entry in content["edges"]:
        _check_fields(entry, EDGE_FIELDS, "Edge")
        for name in ("id", "range", "source"):
            if not isinstance(entry[name], str):
                raise FormatError(f"Edge {name} must be a string, got {entry[name]!r}")
        if not _is_int(entry["color"]):
            raise FormatError(f'Edge "{entry["id"]}" has a non-integer colour')
        edges.append(Edge(entry["id"], entry["color"], entry["range"], entry["source"]))
    _check_unique([e.id for e in edges], "edge")

    squares = []
    for entry in content["squares"]:
        _check_fields(entry, SQUARE_FIELDS, "Square")
        squares.append(Square(_pair(entry["first"], "first"), _pair(entry["second"], "second")))

    boundary = content.get("boundary", [])
    _require(
        isinstance(boundary, list) and all(isinstance(v, str) for v in boundary),
        '"boundary" must be a list of vertex ids',
    )
    unknown = sorted(set(boundary) - set(vertices))
    if unknown:
        raise FormatError(f"Boundary mentions unknown vertices {unknown}")
    return Skeleton(k, tuple(vertices), tuple(edges), tuple(squares), frozenset(boundary))


def skeleton_to_dict(sk):
    content = {
        "k": sk.k,
        "vertices": list(sk.vertices),
        "edges": [
            {"id": e.id, "color": e.color, "range": e.range, "source": e.source} for e in sk.edges
        ],
        "squares": [{"first": list(q.first), "second": list(q.second)} for q in sk.squares],
    }
    if sk.boundary:
        content["boundary"] = sorted(sk.boundary)
    return content


def action_from_dict(content, sk):
    """Build an action of Z^l on ``sk`` from its JSON form

    :param content: Parsed JSON with the keys ``l`` and ``generators``
    :type content: dict
    :param sk: Skeleton acted on
    :type sk: Skeleton
    :return: Action (not yet validated)
    :rtype: ZlAction
    """
    _check_fields(content, ACTION_FIELDS, "Action")
    _require(isinstance(content["generators"], list), '"generators" must be a list')
    generators = []
    for entry in content["generators"]:
        _check_fields(entry, GENERATOR_FIELDS, "Generator")
        maps = (entry["vertex_map"], entry["edge_map"])
        _require(all(isinstance(m, dict) for m in maps), "Generator maps must be JSON objects")
        _require(
            all(isinstance(x, str) for m in maps for x in m.values()),
            "Generator maps must send ids to ids",
        )
        generators.append(Automorphism(dict(entry["vertex_map"]), dict(entry["edge_map"])))
    if content["l"] != len(generators):
        raise FormatError(f'"l" is {content["l"]} but {len(generators)} generators are given')
    return ZlAction(sk, tuple(generators))


def action_to_dict(a):
    return {
        "l": a.l,
        "generators": [
            {"vertex_map": dict(gen.vertex_map), "edge_map": dict(gen.edge_map)}
            for gen in a.generators
        ],
    }


def cocycle_from_dict(content):
    _check_fields(content, COCYCLE_FIELDS, "Cocycle")
    _require(isinstance(content["values"], dict), '"values" must map edge ids to lists')
    values = {}
    for e, value in content["values"].items():
        if not isinstance(value, list) or not all(_is_int(x) for x in value):
            raise FormatError(f'Cocycle value on "{e}" must be a list of integers')
        values[e] = tuple(value)
    return Cocycle(values)


def cocycle_to_dict(c):
    return {"values": {e: list(value) for e, value in sorted(c.values.items())}}


def read_json(file_path):
    """Parse a JSON file, turning syntax errors into FormatError

    :param file_path: Path to the file
    :type file_path: str
    :return: Parsed content
    :rtype: dict
    """
    with open(file_path, encoding="utf-8") as file:
        try:
            return json.load(file)
        except json.JSONDecodeError as e:
            raise FormatError(f'File "{file_path}" is not valid JSON: {e}') from e


def write_json(file_path, content):
    with open(file_path, "w", encoding="utf-8") as file:
        json.dump(content, file, indent=2, sort_keys=True)
        file.write("\n")
    logger.info("Wrote %s", file_path)


def load_skeleton(file_path):
    return skeleton_from_dict(read_json(file_path))


def load_action(file_path, sk):
    return action_from_dict(read_json(file_path), sk)


def load_cocycle(file_path):
    return cocycle_from_dict(read_json(file_path))


def parse_degree(text, k):
    """Parse a degree such as ``"1,2"``

    :param text: Comma-separated non-negative integers
    :type text: str
    :param k: Expected number of entries
    :type k: int
    :return: Degree
    :rtype: tuple
    """
    try:
        degree = tuple(int(part) for part in text.split(","))
    except ValueError as e:
        raise FormatError(f'Degree "{text}" must be comma-separated integers') from e
    if len(degree) != k or any(n < 0 for n in degree):
        raise FormatError(f'Degree "{text}" must have {k} non-negative entries')
    return degree


def parse_int_list(text):
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as e:
        raise FormatError(f'"{text}" must be comma-separated integers') from e


def parse_path(sk, text):
    """Parse a path written as ``@v`` (the vertex v) or as comma-separated edge ids

    :param sk: Skeleton
    :type sk: Skeleton
    :param text: Path notation
    :type text: str
    :return: Path in normal form
    :rtype: Path
    """
    if text.startswith("@"):
        return vertex_path(sk, text[1:])
    return path_from_edges(sk, [e.strip() for e in text.split(",") if e.strip()])


def path_to_dict(path):
    return {
        "range": path.range,
        "source": path.source,
        "word": list(path.word),
        "degree": list(path.degree),
    }
