import logging
from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import combinations
from typing import Dict, Tuple

import networkx as nx
from sympy import ilcm
from sympy.combinatorics import Permutation

from kgraph.models.skeleton import (
    Path,
    Skeleton,
    ValidationReport,
    Violation,
    ViolationKind,
    structural_counts,
)
from kgraph.utils.exceptions import UnknownVertex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Automorphism:
    vertex_map: Dict[str, str]
    edge_map: Dict[str, str]

    def __hash__(self):
        return hash((frozenset(self.vertex_map.items()), frozenset(self.edge_map.items())))

    def permutation(self, elements):
        """This automorphism as a sympy permutation of ``elements`` (vertices, then edges)"""
        position = {x: i for i, x in enumerate(elements)}
        images = {**self.vertex_map, **self.edge_map}
        return Permutation([position[images[x]] for x in elements])


@dataclass(frozen=True)
class ZlAction:
    """An action of Z^l by automorphisms, stored as its l commuting generators

    Example function call::

        from kgraph.models.gallery import m_loops

        o2 = m_loops(2)
        swap = o2.action
        print(swap.edge((1,), "f1"))  # f2
    """

    skeleton: Skeleton = field(compare=False, repr=False)
    generators: Tuple[Automorphism, ...]

    @property
    def l(self):  # noqa: E743
        return len(self.generators)

    @cached_property
    def elements(self):
        return tuple(self.skeleton.vertices) + tuple(e.id for e in self.skeleton.edges)

    @cached_property
    def orders(self):
        """Order of each generator as a permutation of vertices and edges"""
        return tuple(gen.permutation(self.elements).order() for gen in self.generators)

    def _act(self, m, x, kind):
        for gen, order, power in zip(self.generators, self.orders, m):
            images = getattr(gen, kind)
            for _ in range(power % order):
                x = images[x]
        return x

    def vertex(self, m, v):
        """α_m(v) for m ∈ Z^l"""
        return self._act(m, v, "vertex_map")

    def edge(self, m, e):
        """α_m(e) for m ∈ Z^l"""
        return self._act(m, e, "edge_map")


def _map_violations(name, mapping, universe):
    violations = []
    unknown = sorted(set(mapping) - universe) + sorted(set(mapping.values()) - universe)
    if unknown:
        violations.append(
            Violation(ViolationKind.DANGLING_EDGE, f"{name} mentions unknown ids {unknown}")
        )
    if set(mapping) != universe or len(set(mapping.values())) != len(mapping):
        violations.append(Violation(ViolationKind.NOT_BIJECTIVE, f"{name} is not a bijection"))
    return violations


def _generator_violations(sk, index, gen):
    violations = _map_violations(f"generator {index} vertex_map", gen.vertex_map, sk.vertex_set)
    violations += _map_violations(f"generator {index} edge_map", gen.edge_map, set(sk.edge_index))
    if violations:
        return violations
    for edge in sk.edges:
        image = sk.edge_index[gen.edge_map[edge.id]]
        if (
            image.color != edge.color
            or image.range != gen.vertex_map[edge.range]
            or image.source != gen.vertex_map[edge.source]
        ):
            violations.append(
                Violation(
                    ViolationKind.NOT_EQUIVARIANT,
                    f'generator {index} sends "{edge.id}" to "{image.id}" without matching '
                    f"colour and endpoints",
                )
            )
    for square in sk.squares:
        first = tuple(gen.edge_map[e] for e in square.first)
        second = tuple(gen.edge_map[e] for e in square.second)
        if sk.forward.get(first) != second:
            violations.append(
                Violation(
                    ViolationKind.SQUARE_NOT_PRESERVED,
                    f"generator {index} maps square {square.first}={square.second} to "
                    f"{first}={second}, which is not a square",
                )
            )
    return violations


def validate_action(sk, a):
    """Check that the generators are commuting automorphisms of the skeleton

    :param sk: Validated skeleton
    :type sk: Skeleton
    :param a: Action to check
    :type a: ZlAction
    :return: Report listing every violation found
    :rtype: ValidationReport
    """
    violations = []
    for index, gen in enumerate(a.generators, start=1):
        violations += _generator_violations(sk, index, gen)
    if not violations:
        for (i, gi), (j, gj) in combinations(enumerate(a.generators, start=1), 2):
            for kind in ("vertex_map", "edge_map"):
                mi, mj = getattr(gi, kind), getattr(gj, kind)
                clash = sorted(x for x in mi if mi[mj[x]] != mj[mi[x]])
                if clash:
                    violations.append(
                        Violation(
                            ViolationKind.NOT_COMMUTING,
                            f"generators {i} and {j} do not commute on {clash[:5]}",
                        )
                    )
    return ValidationReport(tuple(violations), structural_counts(sk))


def apply(a, m, path):
    """Image α_m(λ) of a path

    :param a: Validated action
    :type a: ZlAction
    :param m: Group element, a vector of l integers
    :type m: tuple
    :param path: Path of the acted-on skeleton
    :type path: Path
    :return: Image path, still in normal form
    :rtype: Path
    """
    return Path(
        path.skeleton,
        a.vertex(m, path.range),
        tuple(a.edge(m, e) for e in path.word),
        path.degree,
    )


def orbit_graph(a):
    """Graph joining each vertex to its images under the generators"""
    graph = nx.Graph()
    graph.add_nodes_from(a.skeleton.vertices)
    for gen in a.generators:
        graph.add_edges_from(gen.vertex_map.items())
    return graph


def orbits(a):
    """Vertex orbits, each sorted, ordered by their least vertex"""
    return sorted(tuple(sorted(c)) for c in nx.connected_components(orbit_graph(a)))


def vertex_orbit(a, v):
    """The orbit {α_n(v) : n ∈ Z^l}

    :param a: Validated action
    :type a: ZlAction
    :param v: Vertex
    :type v: str
    :return: Orbit of ``v``
    :rtype: frozenset
    """
    if v not in a.skeleton.vertex_set:
        raise UnknownVertex(f'Vertex "{v}" is not in the skeleton')
    return frozenset(nx.node_connected_component(orbit_graph(a), v))


def action_order(a):
    """Least N >= 1 such that every generator's N-th power is the identity

    :param a: Validated action
    :type a: ZlAction
    :return: Order of the action
    :rtype: int
    """
    return int(reduce(ilcm, a.orders, 1))
