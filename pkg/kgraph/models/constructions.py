"""Crossed-product, skew-product and cartesian-product skeletons"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Optional, Tuple

from kgraph.models.actions import Automorphism, ZlAction, apply, validate_action
from kgraph.models.alignment import mce
from kgraph.models.skeleton import (
    Edge,
    Path,
    Skeleton,
    Square,
    add,
    colour_sequence,
    compose,
    degrees_up_to,
    enumerate_paths,
    factorize,
    join,
    path_from_edges,
    paths_up_to,
    sub,
    validate_skeleton,
    zero,
)
from kgraph.utils.exceptions import (
    InternalError,
    InvalidAction,
    InvalidCocycle,
    NonSingletonDegree,
)

logger = logging.getLogger(__name__)


def designated_id(v, i):
    """Id of the edge (v, e_i) of a crossed product"""
    return f"({v},e{i})"


def tagged_id(x, g):
    """Id of the pair (x, g) for a lattice point g"""
    return f"({x},{','.join(str(c) for c in g)})"


def pair_id(x, y):
    return f"({x},{y})"


def _require_unique(ids, what):
    seen = set()
    for item in ids:
        if item in seen:
            raise InternalError(f'Generated {what} id "{item}" twice')
        seen.add(item)


def _post_check(sk, what):
    report = validate_skeleton(sk)
    if not report.ok:
        raise InternalError(f"{what} is not a valid skeleton: {report.violations[0].detail}")
    return sk


@dataclass(frozen=True)
class CrossedProductResult:
    """The (k+l)-graph Λ ×_α Z^l together with the bookkeeping of its designated edges

    Base vertices and edges keep their ids; the edge (v, e_i) has colour k+i, range v and source
    α_{e_i}^{-1}(v).
    """

    skeleton: Skeleton
    base: Skeleton = field(repr=False)
    action: ZlAction = field(repr=False)
    designated: Dict[str, Tuple[str, int]] = field(repr=False, compare=False)

    def embed(self, path, m):
        """The path ξ(λ, m): λ followed by the designated edges of degree m, in colour order

        :param path: Path λ of the base skeleton
        :type path: Path
        :param m: Degree in N^l
        :type m: tuple
        :return: Path of the crossed product
        :rtype: Path
        """
        word = list(path.word)
        vertex = path.source
        for i in colour_sequence(m):
            word.append(designated_id(vertex, i))
            vertex = self.action.vertex(_unit_step(self.action.l, i, -1), vertex)
        return Path(self.skeleton, path.range, tuple(word), tuple(path.degree) + tuple(m))

    def unembed(self, path):
        """Inverse of :meth:`embed`: read λ off the base prefix and count the designated edges"""
        k = self.base.k
        base_word = tuple(e for e in path.word if e not in self.designated)
        return (
            Path(self.base, path.range, base_word, tuple(path.degree[:k])),
            tuple(path.degree[k:]),
        )


def _unit_step(l, i, sign):  # noqa: E741
    return tuple(sign if j == i else 0 for j in range(1, l + 1))


def crossed_product(sk, a):
    """Build the crossed-product skeleton Λ ×_α Z^l

    Example function call::

        from kgraph.models.gallery import m_loops

        o2 = m_loops(2)
        result = crossed_product(o2.skeleton, o2.action)
        print(result.skeleton.squares)

    :param sk: Validated skeleton
    :type sk: Skeleton
    :param a: Action on ``sk``
    :type a: ZlAction
    :return: The (k+l)-coloured skeleton and its embedding maps
    :rtype: CrossedProductResult
    """
    report = validate_action(sk, a)
    if not report.ok:
        raise InvalidAction(f"Action is not valid: {report.violations[0].detail}")
    k, l = sk.k, a.l  # noqa: E741
    inverse = [_unit_step(l, i, -1) for i in range(1, l + 1)]

    designated = {}
    edges = list(sk.edges)
    for v in sorted(sk.vertices):
        for i in range(1, l + 1):
            edge_id = designated_id(v, i)
            designated[edge_id] = (v, i)
            edges.append(Edge(edge_id, k + i, v, a.vertex(inverse[i - 1], v)))
    _require_unique([e.id for e in edges], "edge")

    squares = list(sk.squares)
    for f in sorted(sk.edges, key=lambda edge: edge.id):
        for i in range(1, l + 1):
            squares.append(
                Square(
                    (f.id, designated_id(f.source, i)),
                    (designated_id(f.range, i), a.edge(inverse[i - 1], f.id)),
                )
            )
    for v in sorted(sk.vertices):
        for i, j in itertools.combinations(range(1, l + 1), 2):
            squares.append(
                Square(
                    (designated_id(v, i), designated_id(a.vertex(inverse[i - 1], v), j)),
                    (designated_id(v, j), designated_id(a.vertex(inverse[j - 1], v), i)),
                )
            )

    product = Skeleton(k + l, tuple(sk.vertices), tuple(edges), tuple(squares), sk.boundary)
    logger.debug(
        "Crossed product has %d edges and %d squares", len(product.edges), len(product.squares)
    )
    return CrossedProductResult(_post_check(product, "Crossed product"), sk, a, designated)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of an exhaustive check, with the first counterexample when it fails"""

    ok: bool
    checked: int
    counterexample: Optional[str] = None

    def to_dict(self):
        return {"ok": self.ok, "checked": self.checked, "counterexample": self.counterexample}


def mce_relationship_check(sk, a, bound):
    """Check MCE_Γ((μ,m),(ν,n)) = MCE_Λ(μ,ν) × {m ∨ n} on a bounded family of paths

    :param sk: Validated skeleton
    :type sk: Skeleton
    :param a: Validated action
    :type a: ZlAction
    :param bound: Pair (degree bound for μ and ν, degree bound for m and n)
    :type bound: tuple
    :return: Result of the comparison
    :rtype: CheckResult
    """
    path_bound, group_bound = (tuple(b) for b in bound)
    result = crossed_product(sk, a)
    shifts = degrees_up_to(group_bound)
    checked = 0
    for v in sorted(sk.vertices):
        base_paths = paths_up_to(sk, v, path_bound)
        for mu, nu in itertools.product(base_paths, repeat=2):
            expected_base = mce(mu, nu).extensions
            for m, n in itertools.product(shifts, repeat=2):
                top = join(m, n)
                found = {x.word for x in mce(result.embed(mu, m), result.embed(nu, n)).extensions}
                expected = {result.embed(x, top).word for x in expected_base}
                checked += 1
                if found != expected:
                    return CheckResult(
                        False,
                        checked,
                        f"μ={mu.word} m={m} ν={nu.word} n={n}: found {sorted(found)}, "
                        f"expected {sorted(expected)}",
                    )
    return CheckResult(True, checked)


def recognize(sk, zl_colors):
    """Recover (Λ, α) from a skeleton whose designated colours behave like a crossed product

    Every vertex must receive and emit exactly one edge of each designated colour. Designated
    colours are renumbered 1..l in increasing order, the other colours 1..k.

    :param sk: Validated skeleton
    :type sk: Skeleton
    :param zl_colors: Designated colours
    :type zl_colors: set
    :return: Base skeleton and action
    :rtype: tuple
    """
    designated = sorted(set(zl_colors))
    kept = [c for c in range(1, sk.k + 1) if c not in designated]
    for colour in designated:
        if not 1 <= colour <= sk.k:
            raise NonSingletonDegree(f"Colour {colour} is not a colour of the skeleton")
        for v in sorted(sk.vertices):
            incoming, outgoing = sk.edges_into(v, colour), sk.edges_out_of(v, colour)
            if len(incoming) != 1 or len(outgoing) != 1:
                raise NonSingletonDegree(
                    f'Vertex "{v}" has {len(incoming)} incoming and {len(outgoing)} outgoing '
                    f"edges of colour {colour}"
                )

    renumber = {colour: index for index, colour in enumerate(kept, start=1)}
    base_edges = tuple(
        Edge(e.id, renumber[e.color], e.range, e.source) for e in sk.edges if e.color in renumber
    )
    base_ids = {e.id for e in base_edges}
    base_squares = tuple(
        square for square in sk.squares if set(square.first + square.second) <= base_ids
    )
    base = Skeleton(len(kept), tuple(sk.vertices), base_edges, base_squares, sk.boundary)

    generators = []
    for colour in designated:
        # α(v) is the range of the unique designated edge with source v
        vertex_map = {
            v: sk.edge_index[sk.edges_out_of(v, colour)[0]].range for v in sk.vertices
        }
        edge_map = {}
        for g in base_edges:
            eta = sk.edges_out_of(g.range, colour)[0]
            conjugated = path_from_edges(sk, (eta, g.id))
            edge_map[g.id] = factorize(conjugated, _degree_of_edge(sk, g.id))[0].word[0]
        generators.append(Automorphism(vertex_map, edge_map))
    return base, ZlAction(base, tuple(generators))


def _degree_of_edge(sk, e):
    return tuple(1 if c == sk.color(e) else 0 for c in range(1, sk.k + 1))


@dataclass(frozen=True)
class Cocycle:
    """A Z^l-valued function on edges, extended additively to paths"""

    values: Dict[str, Tuple[int, ...]]

    def __hash__(self):
        return hash(frozenset(self.values.items()))

    @cached_property
    def rank(self):
        return len(next(iter(self.values.values()), ()))

    def value(self, path):
        total = zero(self.rank)
        for e in path.word:
            total = add(total, self.values[e])
        return total


def validate_cocycle(sk, c):
    """Raise InvalidCocycle unless c is defined on every edge and additive on every square"""
    missing = sorted(e.id for e in sk.edges if e.id not in c.values)
    if missing:
        raise InvalidCocycle(f"Cocycle has no value on {missing}")
    if any(len(value) != c.rank for value in c.values.values()):
        raise InvalidCocycle("Cocycle values have different lengths")
    for square in sk.squares:
        (f, g), (g2, f2) = square.first, square.second
        if add(c.values[f], c.values[g]) != add(c.values[g2], c.values[f2]):
            raise InvalidCocycle(
                f"Cocycle is not additive on square {square.first}={square.second}"
            )


def canonical_cocycle(result):
    """c(λ, m) = -m on a crossed product"""
    l = result.action.l  # noqa: E741
    values = {e.id: zero(l) for e in result.base.edges}
    for edge_id, (_, i) in result.designated.items():
        values[edge_id] = _unit_step(l, i, -1)
    return Cocycle(values)


def _window(rank, radius):
    return list(itertools.product(range(-radius, radius + 1), repeat=rank))


def _on_face(g, radius):
    return any(abs(c) == radius for c in g)


def _skew(sk, c, radius):
    validate_cocycle(sk, c)
    window = _window(c.rank, radius)
    inside = set(window)
    vertex_tags = {tagged_id(v, g): (v, g) for v in sorted(sk.vertices) for g in window}
    edge_tags = {}
    edges = []
    for e in sorted(sk.edges, key=lambda edge: edge.id):
        for g in window:
            shifted = add(c.values[e.id], g)
            if shifted in inside:
                edge_id = tagged_id(e.id, g)
                edge_tags[edge_id] = (e.id, g)
                edges.append(
                    Edge(edge_id, e.color, tagged_id(e.range, shifted), tagged_id(e.source, g))
                )
    _require_unique(list(vertex_tags) + [e.id for e in edges], "vertex or edge")

    squares = []
    for square in sk.squares:
        (f, g), (g2, f2) = square.first, square.second
        for h in window:
            ids = (
                tagged_id(f, add(c.values[g], h)),
                tagged_id(g, h),
                tagged_id(g2, add(c.values[f2], h)),
                tagged_id(f2, h),
            )
            if all(x in edge_tags for x in ids):
                squares.append(Square(ids[:2], ids[2:]))
    boundary = frozenset(
        vertex_id for vertex_id, (_, g) in vertex_tags.items() if _on_face(g, radius)
    )
    skew = Skeleton(sk.k, tuple(vertex_tags), tuple(edges), tuple(squares), boundary)
    return skew, vertex_tags, edge_tags


def skew_product(sk, c, window):
    """The skew product Λ ×_c Z^l restricted to the box [-W, W]^l

    The edge (e, g) runs from (s(e), g) to (r(e), c(e) + g) and exists when both ends lie in
    the box. Vertices on the faces of the box form the boundary.

    :param sk: Skeleton
    :type sk: Skeleton
    :param c: Cocycle on ``sk``
    :type c: Cocycle
    :param window: Radius W of the box
    :type window: int
    :return: Windowed skew-product skeleton
    :rtype: Skeleton
    """
    return _skew(sk, c, window)[0]


def cartesian_product(a, b):
    """The (k+l)-graph Λ × Γ with coordinatewise structure

    :param a: k-graph skeleton
    :type a: Skeleton
    :param b: l-graph skeleton, whose colours become k+1..k+l
    :type b: Skeleton
    :return: Product skeleton
    :rtype: Skeleton
    """
    k = a.k
    vertices = tuple(pair_id(v, w) for v in a.vertices for w in b.vertices)
    edges = [
        Edge(pair_id(e.id, w), e.color, pair_id(e.range, w), pair_id(e.source, w))
        for e in a.edges
        for w in b.vertices
    ]
    edges += [
        Edge(pair_id(v, h.id), k + h.color, pair_id(v, h.range), pair_id(v, h.source))
        for v in a.vertices
        for h in b.edges
    ]
    _require_unique(list(vertices) + [e.id for e in edges], "vertex or edge")
    squares = [
        Square(
            tuple(pair_id(e, w) for e in square.first), tuple(pair_id(e, w) for e in square.second)
        )
        for square in a.squares
        for w in b.vertices
    ]
    squares += [
        Square(
            tuple(pair_id(v, h) for h in square.first), tuple(pair_id(v, h) for h in square.second)
        )
        for square in b.squares
        for v in a.vertices
    ]
    squares += [
        Square(
            (pair_id(e.id, h.range), pair_id(e.source, h.id)),
            (pair_id(e.range, h.id), pair_id(e.id, h.source)),
        )
        for e in a.edges
        for h in b.edges
    ]
    boundary = frozenset(pair_id(v, w) for v in a.boundary for w in b.vertices) | frozenset(
        pair_id(v, w) for v in a.vertices for w in b.boundary
    )
    return Skeleton(k + b.k, vertices, tuple(edges), tuple(squares), boundary)


def lattice_vertex_id(p):
    return ",".join(str(c) for c in p)


def lattice_edge_id(p, i):
    """Id of the lattice edge (p, p + e_i)"""
    return f"{lattice_vertex_id(p)}+e{i}"


def lattice_skeleton(points, wrap=None, boundary=frozenset()):
    """Skeleton on lattice points with edges (p, p + e_i): range p, source p + e_i

    :param points: Lattice points, all of one dimension l
    :type points: list
    :param wrap: Reduce coordinates modulo this number (a quotient torus) when set
    :type wrap: int
    :param boundary: Points to mark as boundary
    :type boundary: set
    :return: l-graph skeleton
    :rtype: Skeleton
    """
    rank = len(points[0])
    inside = set(points)

    def step(p, i):
        q = tuple(c + (1 if j == i else 0) for j, c in enumerate(p, start=1))
        return tuple(c % wrap for c in q) if wrap else q

    edges, squares = [], []
    for p in points:
        for i in range(1, rank + 1):
            if step(p, i) in inside:
                edges.append(
                    Edge(
                        lattice_edge_id(p, i),
                        i,
                        lattice_vertex_id(p),
                        lattice_vertex_id(step(p, i)),
                    )
                )
        for i, j in itertools.combinations(range(1, rank + 1), 2):
            if all(q in inside for q in (step(p, i), step(p, j), step(step(p, i), j))):
                squares.append(
                    Square(
                        (lattice_edge_id(p, i), lattice_edge_id(step(p, i), j)),
                        (lattice_edge_id(p, j), lattice_edge_id(step(p, j), i)),
                    )
                )
    return Skeleton(
        rank,
        tuple(lattice_vertex_id(p) for p in points),
        tuple(edges),
        tuple(squares),
        frozenset(lattice_vertex_id(p) for p in boundary),
    )


def delta_skeleton(rank, radius):
    """Δ_l restricted to the box [-W, W]^l"""
    points = _window(rank, radius)
    return lattice_skeleton(points, boundary={p for p in points if _on_face(p, radius)})


def takai_check(sk, a, window, bound=1):
    """Check the Takai map ρ((λ,m),n) = (α_{n-m}(λ), (n-m, n)) on finite windows

    X is the skew product of Λ ×_α Z^l by the canonical cocycle and Y is Λ × Δ_l, both on the box
    [-W, W]^l. Every path of X with degree at most ``bound`` in each colour is mapped to Y; the
    map must hit each path of Y of that degree exactly once, preserve range and source, and carry
    composable products to products.

    :param sk: Validated skeleton
    :type sk: Skeleton
    :param a: Validated action
    :type a: ZlAction
    :param window: Radius W of the box
    :type window: int
    :param bound: Largest degree per colour of the checked paths
    :type bound: int
    :return: Result of the check
    :rtype: CheckResult
    """
    result = crossed_product(sk, a)
    k, l = sk.k, a.l  # noqa: E741
    x_skeleton, x_vertices, x_edges = _skew(result.skeleton, canonical_cocycle(result), window)
    y_skeleton = cartesian_product(sk, delta_skeleton(l, window))

    def rho_vertex(x_vertex):
        v, n = x_vertices[x_vertex]
        return pair_id(a.vertex(n, v), lattice_vertex_id(n))

    def rho(path):
        if not path.word:
            return path_from_edges(y_skeleton, (), range=rho_vertex(path.range))
        n = x_vertices[path.source][1]
        gamma = Path(
            result.skeleton,
            x_vertices[path.range][0],
            tuple(x_edges[e][0] for e in path.word),
            path.degree,
        )
        base_path, m = result.unembed(gamma)
        start = sub(n, m)
        image = apply(a, start, base_path)
        word = [pair_id(e, lattice_vertex_id(start)) for e in image.word]
        point = start
        for i in colour_sequence(m):
            word.append(pair_id(image.source, lattice_edge_id(point, i)))
            point = add(point, _unit_step(l, i, 1))
        return path_from_edges(y_skeleton, word)

    degree_bound = (bound,) * (k + l)
    checked = 0
    images = {}
    for x_vertex in x_skeleton.vertices:
        for path in paths_up_to(x_skeleton, x_vertex, degree_bound):
            image = rho(path)
            checked += 1
            if image.degree != path.degree:
                return CheckResult(False, checked, f"ρ changes the degree of {path.word}")
            if image.range != rho_vertex(path.range) or image.source != rho_vertex(path.source):
                return CheckResult(False, checked, f"ρ does not preserve the ends of {path.word}")
            if image.word in images:
                return CheckResult(False, checked, f"ρ is not injective at {path.word}")
            images[image.word] = path

    expected = {
        path.word for y_vertex in y_skeleton.vertices
        for path in paths_up_to(y_skeleton, y_vertex, degree_bound)
    }
    if expected != set(images):
        missing = sorted(expected - set(images))[:3]
        return CheckResult(False, checked, f"ρ misses paths of Λ × Δ_l such as {missing}")

    for first in list(images.values()):
        for n in degrees_up_to(sub(degree_bound, first.degree)):
            for second in enumerate_paths(x_skeleton, first.source, n):
                checked += 1
                if rho(compose(first, second)) != compose(rho(first), rho(second)):
                    return CheckResult(
                        False,
                        checked,
                        f"ρ does not preserve the product {first.word}·{second.word}",
                    )
    logger.info("Takai map verified on %d cells and products", checked)
    return CheckResult(True, checked)

