"""Skeletons of k-graphs and the path calculus built on their factorization squares.

A skeleton is a k-coloured directed graph together with a list of squares ``f·g = g'·f'``.
Paths are stored in normal form: the colour-ascending edge word, read from the range end.
"""
import itertools
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, List, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import (
    MultiDiGraphMatcher,
    categorical_multiedge_match,
    categorical_node_match,
)

from kgraph.utils.exceptions import (
    DegreeOutOfRange,
    MissingFactorization,
    NonComposable,
    UnknownVertex,
)

logger = logging.getLogger(__name__)

Degree = Tuple[int, ...]


def zero(k: int) -> Degree:
    return (0,) * k


def unit(k: int, i: int) -> Degree:
    """Degree ``e_i`` (colours are numbered from 1)"""
    return tuple(1 if j == i else 0 for j in range(1, k + 1))


def add(m: Degree, n: Degree) -> Degree:
    return tuple(a + b for a, b in zip(m, n))


def sub(m: Degree, n: Degree) -> Degree:
    return tuple(a - b for a, b in zip(m, n))


def join(m: Degree, n: Degree) -> Degree:
    return tuple(max(a, b) for a, b in zip(m, n))


def meet(m: Degree, n: Degree) -> Degree:
    return tuple(min(a, b) for a, b in zip(m, n))


def leq(m: Degree, n: Degree) -> bool:
    return len(m) == len(n) and all(a <= b for a, b in zip(m, n))


def degrees_up_to(bound: Degree) -> List[Degree]:
    """All degrees ``n`` with ``0 <= n <= bound``, in lexicographic order"""
    return list(itertools.product(*(range(b + 1) for b in bound)))


def colour_sequence(n: Degree) -> List[int]:
    """Colours of the normal-form word of a path of degree ``n``"""
    return [colour for colour, count in enumerate(n, start=1) for _ in range(count)]


@dataclass(frozen=True)
class Edge:
    id: str
    color: int
    range: str
    source: str


@dataclass(frozen=True)
class Square:
    """The factorization rule ``first[0]·first[1] = second[0]·second[1]``, lower colour first"""

    first: Tuple[str, str]
    second: Tuple[str, str]


@dataclass(frozen=True)
class Skeleton:
    """A finite k-coloured graph with factorization squares

    ``boundary`` lists the vertices where a finite window was cut out of an infinite k-graph.
    Squares that would pass outside the window are missing there and validation excuses them.
    """

    k: int
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    squares: Tuple[Square, ...]
    boundary: FrozenSet[str] = frozenset()

    @cached_property
    def vertex_set(self) -> FrozenSet[str]:
        return frozenset(self.vertices)

    @cached_property
    def edge_index(self) -> Dict[str, Edge]:
        return {edge.id: edge for edge in self.edges}

    @cached_property
    def ranges_index(self) -> Dict[Tuple[str, int], Tuple[str, ...]]:
        """Edge ids grouped by (range, colour), sorted"""
        index = defaultdict(list)
        for edge in self.edges:
            index[(edge.range, edge.color)].append(edge.id)
        return {key: tuple(sorted(ids)) for key, ids in index.items()}

    @cached_property
    def sources_index(self) -> Dict[Tuple[str, int], Tuple[str, ...]]:
        """Edge ids grouped by (source, colour), sorted"""
        index = defaultdict(list)
        for edge in self.edges:
            index[(edge.source, edge.color)].append(edge.id)
        return {key: tuple(sorted(ids)) for key, ids in index.items()}

    @cached_property
    def forward(self) -> Dict[Tuple[str, str], Tuple[str, str]]:
        # On invalid input the first square wins; validate_skeleton reports the rest
        rules = {}
        for square in self.squares:
            rules.setdefault(tuple(square.first), tuple(square.second))
        return rules

    @cached_property
    def backward(self) -> Dict[Tuple[str, str], Tuple[str, str]]:
        rules = {}
        for square in self.squares:
            rules.setdefault(tuple(square.second), tuple(square.first))
        return rules

    def color(self, edge_id):
        return self.edge_index[edge_id].color

    def edges_into(self, vertex, color):
        """Edges of the given colour whose range is ``vertex``"""
        return self.ranges_index.get((vertex, color), ())

    def edges_out_of(self, vertex, color):
        """Edges of the given colour whose source is ``vertex``"""
        return self.sources_index.get((vertex, color), ())


@dataclass(frozen=True)
class Path:
    skeleton: Skeleton = field(compare=False, repr=False)
    range: str
    word: Tuple[str, ...]
    degree: Degree

    @property
    def source(self) -> str:
        if not self.word:
            return self.range
        return self.skeleton.edge_index[self.word[-1]].source


class ViolationKind(Enum):
    DUPLICATE_ID = "DuplicateId"
    DUPLICATE_SQUARE = "DuplicateSquare"
    MISSING_SQUARE = "MissingSquare"
    HEXAGON_FAILURE = "HexagonFailure"
    DANGLING_EDGE = "DanglingEdge"
    BAD_COLOR_ORDER = "BadColorOrder"
    NOT_BIJECTIVE = "NotBijective"
    NOT_EQUIVARIANT = "NotEquivariant"
    SQUARE_NOT_PRESERVED = "SquareNotPreserved"
    NOT_COMMUTING = "NotCommuting"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    detail: str

    def to_dict(self):
        return {"kind": self.kind.value, "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...]
    flags: Dict[str, bool]
    boundary_exemptions: int = 0

    @property
    def ok(self):
        return not self.violations

    def kinds(self):
        return {violation.kind for violation in self.violations}

    def to_dict(self):
        return {
            "ok": self.ok,
            "violations": [violation.to_dict() for violation in self.violations],
            "flags": dict(sorted(self.flags.items())),
            "boundary_exemptions": self.boundary_exemptions,
        }


def structural_counts(sk):
    """Flags computed from per-vertex, per-colour edge counts

    :param sk: Skeleton
    :type sk: Skeleton
    :return: ``row_finite``, ``no_sources`` and ``no_sinks``
    :rtype: dict
    """
    colours = range(1, sk.k + 1)
    return {
        # Finitely many edges, so every vΛ^n is finite
        "row_finite": True,
        "no_sources": all(sk.edges_into(v, c) for v in sk.vertices for c in colours),
        "no_sinks": all(sk.edges_out_of(v, c) for v in sk.vertices for c in colours),
    }


def _shape_violations(sk):
    violations = []
    for kind, ids in (("vertex", sk.vertices), ("edge", [edge.id for edge in sk.edges])):
        for item, count in sorted(Counter(ids).items()):
            if count > 1:
                violations.append(
                    Violation(
                        ViolationKind.DUPLICATE_ID, f'{kind} id "{item}" appears {count} times'
                    )
                )
    for edge in sk.edges:
        if not 1 <= edge.color <= sk.k:
            violations.append(
                Violation(
                    ViolationKind.BAD_COLOR_ORDER,
                    f'edge "{edge.id}" has colour {edge.color} outside 1..{sk.k}',
                )
            )
        for end in ("range", "source"):
            if getattr(edge, end) not in sk.vertex_set:
                violations.append(
                    Violation(
                        ViolationKind.DANGLING_EDGE,
                        f'edge "{edge.id}" has unknown {end} "{getattr(edge, end)}"',
                    )
                )
    return violations


def _square_violation(sk, square):
    """Return a violation if the square is malformed, else None"""
    (f, g), (g2, f2) = square.first, square.second
    unknown = [e for e in (f, g, g2, f2) if e not in sk.edge_index]
    if unknown:
        return Violation(
            ViolationKind.DANGLING_EDGE,
            f"square {square.first}={square.second} uses unknown {unknown}",
        )
    ef, eg, eg2, ef2 = (sk.edge_index[e] for e in (f, g, g2, f2))
    if not (ef.color < eg.color and eg2.color == eg.color and ef2.color == ef.color):
        return Violation(
            ViolationKind.BAD_COLOR_ORDER,
            f"square {square.first}={square.second} has colours "
            f"({ef.color},{eg.color})=({eg2.color},{ef2.color})",
        )
    if not (
        ef.source == eg.range
        and eg2.source == ef2.range
        and ef.range == eg2.range
        and eg.source == ef2.source
    ):
        return Violation(
            ViolationKind.DANGLING_EDGE,
            f"square {square.first}={square.second} does not join matching endpoints",
        )
    return None


def _bicoloured_pairs(sk):
    """All composable edge pairs (a, b), s(a) = r(b), with different colours"""
    for a in sorted(sk.edges, key=lambda edge: edge.id):
        for colour in range(1, sk.k + 1):
            if colour != a.color:
                for b in sk.edges_into(a.source, colour):
                    yield a.id, b


def _swap_or_none(sk, a, b):
    if sk.color(a) < sk.color(b):
        return sk.forward.get((a, b))
    return sk.backward.get((a, b))


def _hexagon_violations(sk):
    """Compare the two reversal routes of every colour-ascending composable triple"""
    violations = []
    for a in sorted(sk.edges, key=lambda edge: edge.id):
        for cb in range(a.color + 1, sk.k + 1):
            for b in sk.edges_into(a.source, cb):
                for cc in range(cb + 1, sk.k + 1):
                    for c in sk.edges_into(sk.edge_index[b].source, cc):
                        routes = []
                        for order in ((0, 1, 0), (1, 0, 1)):
                            word = [a.id, b, c]
                            for i in order:
                                swapped = _swap_or_none(sk, word[i], word[i + 1])
                                if swapped is None:
                                    break
                                word[i : i + 2] = swapped
                            else:
                                routes.append(tuple(word))
                        if len(routes) == 2 and routes[0] != routes[1]:
                            violations.append(
                                Violation(
                                    ViolationKind.HEXAGON_FAILURE,
                                    f"triple {(a.id, b, c)} reverses to {routes[0]} "
                                    f"and {routes[1]}",
                                )
                            )
    return violations


def validate_skeleton(sk):
    """Check that the squares of a skeleton are permissible

    Every bi-coloured composable pair must lie in exactly one square and, when k >= 3, the
    squares must be associative. Pairs cut off at a boundary vertex are excused.

    :param sk: Skeleton to check
    :type sk: Skeleton
    :return: Report listing every violation found
    :rtype: ValidationReport
    """
    violations = _shape_violations(sk)

    cover = Counter()
    for square in sk.squares:
        problem = _square_violation(sk, square)
        if problem:
            violations.append(problem)
            continue
        cover[tuple(square.first)] += 1
        cover[tuple(square.second)] += 1

    uncovered = []
    for pair in _bicoloured_pairs(sk):
        count = cover.get(pair, 0)
        if count > 1:
            violations.append(
                Violation(ViolationKind.DUPLICATE_SQUARE, f"pair {pair} lies in {count} squares")
            )
        elif count == 0:
            uncovered.append(pair)

    # A deleted square leaves both of its pairs uncovered; a truncated one leaves only one
    open_ends = Counter()
    for a, b in uncovered:
        ascending = sk.color(a) < sk.color(b)
        open_ends[(sk.edge_index[a].range, sk.edge_index[b].source, ascending)] += 1
    exemptions = 0
    for a, b in uncovered:
        edge_a, edge_b = sk.edge_index[a], sk.edge_index[b]
        ascending = edge_a.color < edge_b.color
        touches = {edge_a.range, edge_a.source, edge_b.source} & sk.boundary
        if touches and not open_ends[(edge_a.range, edge_b.source, not ascending)]:
            exemptions += 1
            continue
        violations.append(
            Violation(ViolationKind.MISSING_SQUARE, f"pair {(a, b)} lies in no square")
        )
    if exemptions:
        logger.info("Excused %d pairs cut off at the window boundary", exemptions)

    if sk.k >= 3 and not violations:
        violations.extend(_hexagon_violations(sk))

    return ValidationReport(tuple(violations), structural_counts(sk), exemptions)


def _swap(sk, a, b):
    swapped = _swap_or_none(sk, a, b)
    if swapped is None:
        raise MissingFactorization(f"No square contains the pair ({a}, {b})")
    return swapped


def _reorder(sk, word, target):
    """Rewrite a composable word until its colours read ``target``"""
    word = list(word)
    for position, colour in enumerate(target):
        found = next(j for j in range(position, len(word)) if sk.color(word[j]) == colour)
        for j in range(found, position, -1):
            word[j - 1 : j + 1] = _swap(sk, word[j - 1], word[j])
    return tuple(word)


def normalize_word(sk, word, choose=None):
    """Normal form of a composable edge word

    :param sk: Skeleton
    :type sk: Skeleton
    :param word: Composable edge ids, range end first
    :type word: Sequence[str]
    :param choose: Picks the position of the next colour inversion to rewrite from the list of
        candidates. Default: the leftmost one
    :type choose: Callable[[list], int]
    :return: Colour-ascending word
    :rtype: tuple
    """
    word = list(word)
    while True:
        inversions = [
            i for i in range(len(word) - 1) if sk.color(word[i]) > sk.color(word[i + 1])
        ]
        if not inversions:
            return tuple(word)
        i = choose(inversions) if choose else inversions[0]
        word[i : i + 2] = _swap(sk, word[i], word[i + 1])


def _degree_of(sk, word):
    counts = Counter(sk.color(e) for e in word)
    return tuple(counts[c] for c in range(1, sk.k + 1))


def vertex_path(sk, v):
    """The degree-zero path at ``v``"""
    if v not in sk.vertex_set:
        raise UnknownVertex(f'Vertex "{v}" is not in the skeleton')
    return Path(sk, v, (), zero(sk.k))


def path_from_edges(sk, word, range=None):
    """Build the path represented by a composable edge word

    :param sk: Skeleton
    :type sk: Skeleton
    :param word: Edge ids, range end first. Need not be in normal form
    :type word: Sequence[str]
    :param range: Vertex of the path when ``word`` is empty
    :type range: str
    :return: Path in normal form
    :rtype: Path
    """
    word = tuple(word)
    if not word:
        return vertex_path(sk, range)
    for e in word:
        if e not in sk.edge_index:
            raise NonComposable(f'Edge "{e}" is not in the skeleton')
    for a, b in zip(word, word[1:]):
        if sk.edge_index[a].source != sk.edge_index[b].range:
            raise NonComposable(f'Edges "{a}" and "{b}" are not composable')
    first = sk.edge_index[word[0]].range
    if range is not None and range != first:
        raise NonComposable(f'Edge "{word[0]}" does not have range "{range}"')
    return Path(sk, first, normalize_word(sk, word), _degree_of(sk, word))


def compose(a, b):
    """Compose two paths, ``a`` first (nearest the range)

    :param a: Path whose source is the range of ``b``
    :type a: Path
    :param b: Path
    :type b: Path
    :return: Normal form of the concatenation
    :rtype: Path
    """
    if a.source != b.range:
        raise NonComposable(
            f'Cannot compose: source "{a.source}" differs from range "{b.range}"'
        )
    sk = a.skeleton
    return Path(sk, a.range, normalize_word(sk, a.word + b.word), add(a.degree, b.degree))


def factorize(path, m):
    """Split a path into the unique pair (μ, ν) with d(μ) = m and μν = path

    Edges of the colours needed first are bubbled to the front one adjacent swap at a time.

    :param path: Path to split
    :type path: Path
    :param m: Degree of the first factor
    :type m: tuple
    :return: ``(μ, ν)``
    :rtype: tuple
    """
    m = tuple(m)
    if not leq(m, path.degree):
        raise DegreeOutOfRange(f"Degree {m} is not below {path.degree}")
    sk = path.skeleton
    rest = sub(path.degree, m)
    word = _reorder(sk, path.word, colour_sequence(m) + colour_sequence(rest))
    cut = sum(m)
    head = Path(sk, path.range, word[:cut], m)
    tail = Path(sk, head.source, word[cut:], rest)
    return head, tail


def segment(path, m, n):
    """The piece λ(m, n) of a path, for 0 <= m <= n <= d(λ)"""
    m, n = tuple(m), tuple(n)
    if not (leq(m, n) and leq(n, path.degree)):
        raise DegreeOutOfRange(f"Need {m} <= {n} <= {path.degree}")
    _, tail = factorize(path, m)
    middle, _ = factorize(tail, sub(n, m))
    return middle


def vertex_at(path, p):
    """The vertex λ(p)"""
    return factorize(path, p)[0].source


def enumerate_paths(sk, v, n):
    """All paths with range ``v`` and degree ``n``

    :param sk: Validated skeleton
    :type sk: Skeleton
    :param v: Range vertex
    :type v: str
    :param n: Degree
    :type n: tuple
    :return: Paths ordered by edge word
    :rtype: list
    """
    if v not in sk.vertex_set:
        raise UnknownVertex(f'Vertex "{v}" is not in the skeleton')
    n = tuple(n)
    colours = colour_sequence(n)
    words = [((), v)]
    for colour in colours:
        words = [
            (word + (e,), sk.edge_index[e].source)
            for word, end in words
            for e in sk.edges_into(end, colour)
        ]
    return [Path(sk, v, word, n) for word, _ in sorted(words)]


def paths_up_to(sk, v, bound):
    """All paths with range ``v`` and degree at most ``bound``, grouped by degree"""
    return [path for n in degrees_up_to(bound) for path in enumerate_paths(sk, v, n)]


def _incidence_graph(sk):
    graph = nx.MultiDiGraph()
    for v in sk.vertices:
        graph.add_node(("v", v), kind="vertex", color=0)
    for edge in sk.edges:
        graph.add_node(("e", edge.id), kind="edge", color=edge.color)
        graph.add_edge(("e", edge.id), ("v", edge.range), label="range")
        graph.add_edge(("e", edge.id), ("v", edge.source), label="source")
    for index, square in enumerate(sk.squares):
        graph.add_node(("q", index), kind="square", color=0)
        for label, e in zip(("f", "g", "g'", "f'"), square.first + square.second):
            graph.add_edge(("q", index), ("e", e), label=label)
    return graph


@dataclass(frozen=True)
class Isomorphism:
    vertex_map: Dict[str, str]
    edge_map: Dict[str, str]

    def __hash__(self):
        return hash((frozenset(self.vertex_map.items()), frozenset(self.edge_map.items())))


def skeleton_isomorphic(a, b):
    """Search for a colour- and square-preserving isomorphism between two skeletons

    Both skeletons become labelled incidence graphs (vertices, edges and squares as nodes) and
    the VF2 matcher of networkx does the backtracking.

    :param a: Validated skeleton
    :type a: Skeleton
    :param b: Validated skeleton
    :type b: Skeleton
    :return: The isomorphism, or None
    :rtype: Isomorphism
    """
    if a == b:
        return Isomorphism({v: v for v in a.vertices}, {e.id: e.id for e in a.edges})
    if (a.k, len(a.vertices), len(a.edges), len(a.squares)) != (
        b.k,
        len(b.vertices),
        len(b.edges),
        len(b.squares),
    ):
        return None
    matcher = MultiDiGraphMatcher(
        _incidence_graph(a),
        _incidence_graph(b),
        node_match=categorical_node_match(["kind", "color"], [None, 0]),
        edge_match=categorical_multiedge_match("label", None),
    )
    if not matcher.is_isomorphic():
        return None
    mapping = matcher.mapping
    logger.debug("Found isomorphism between skeletons with %d edges", len(a.edges))
    return Isomorphism(
        {node[1]: image[1] for node, image in mapping.items() if node[0] == "v"},
        {node[1]: image[1] for node, image in mapping.items() if node[0] == "e"},
    )
