"""Builders for standard small k-graphs, finite windows of infinite ones, and their actions"""
import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from kgraph.models.actions import Automorphism, ZlAction
from kgraph.models.constructions import delta_skeleton, designated_id, lattice_skeleton
from kgraph.models.skeleton import Edge, Skeleton, Square
from kgraph.utils.exceptions import BadParameter


@dataclass(frozen=True)
class GalleryInstance:
    name: str
    skeleton: Skeleton
    action: Optional[ZlAction] = None
    note: str = ""


def _require_positive(**params):
    for name, value in params.items():
        if not isinstance(value, int) or value < 1:
            raise BadParameter(f'Parameter "{name}" must be a positive integer, got {value!r}')


def identity_action(sk, l=1):  # noqa: E741
    """The trivial action of Z^l"""
    _require_positive(l=l)
    gen = Automorphism({v: v for v in sk.vertices}, {e.id: e.id for e in sk.edges})
    return ZlAction(sk, (gen,) * l)


def m_loops(m):
    """One vertex with m loops, rotated cyclically by the action

    ``m_loops(2)`` is the graph of the Cuntz algebra O_2 with the swap of its two loops.

    :param m: Number of loops
    :type m: int
    :rtype: GalleryInstance
    """
    _require_positive(m=m)
    loops = [f"f{i}" for i in range(1, m + 1)]
    sk = Skeleton(1, ("v",), tuple(Edge(f, 1, "v", "v") for f in loops), ())
    rotate = Automorphism({"v": "v"}, {f: loops[(i + 1) % m] for i, f in enumerate(loops)})
    return GalleryInstance(f"m_loops({m})", sk, ZlAction(sk, (rotate,)), "one vertex, m loops")


def cycle_with_rotation(n):
    """The n-cycle v_i <- v_{i+1} with the rotation v_i -> v_{i+1}"""
    _require_positive(n=n)
    vertices = [f"v{i}" for i in range(n)]
    edges = tuple(Edge(f"e{i}", 1, f"v{i}", f"v{(i + 1) % n}") for i in range(n))
    sk = Skeleton(1, tuple(vertices), edges, ())
    rotate = Automorphism(
        {f"v{i}": f"v{(i + 1) % n}" for i in range(n)},
        {f"e{i}": f"e{(i + 1) % n}" for i in range(n)},
    )
    return GalleryInstance(f"cycle_with_rotation({n})", sk, ZlAction(sk, (rotate,)), "n-cycle")


def line_window_shift(radius, step):
    """The crossed product of the two-sided line by the shift v_n -> v_{n+step}, on a window

    Blue edges f_n run from v_{n+1} to v_n. Each red edge (v_n, e_1) runs from v_{n-step} to v_n
    and is kept only when both endpoints lie in the window v_{-radius} … v_radius.

    :param radius: Window radius
    :type radius: int
    :param step: Shift distance
    :type step: int
    :rtype: GalleryInstance
    """
    _require_positive(radius=radius, step=step)
    span = range(-radius, radius + 1)
    vertices = tuple(f"v{n}" for n in span)
    blue = {n: f"f{n}" for n in span if n + 1 in span}
    red = {n: designated_id(f"v{n}", 1) for n in span if n - step in span}
    edges = [Edge(f, 1, f"v{n}", f"v{n + 1}") for n, f in blue.items()]
    edges += [Edge(g, 2, f"v{n}", f"v{n - step}") for n, g in red.items()]
    squares = tuple(
        Square((blue[n], red[n + 1]), (red[n], blue[n - step]))
        for n in span
        if n in blue and n + 1 in red and n in red and n - step in blue
    )
    sk = Skeleton(2, vertices, tuple(edges), squares, frozenset({f"v{-radius}", f"v{radius}"}))
    return GalleryInstance(
        f"line_window_shift({radius}, {step})", sk, None, "line graph crossed by a shift, truncated"
    )


def omega_window(k, size):
    """Ω_k restricted to the box [0, size]^k"""
    _require_positive(k=k, size=size)
    points = list(itertools.product(range(size + 1), repeat=k))
    boundary = {p for p in points if size in p}
    sk = lattice_skeleton(points, boundary=boundary)
    return GalleryInstance(f"omega_window({k}, {size})", sk, None, "Ω_k window")


def delta_window(l, radius):  # noqa: E741
    """Δ_l restricted to the box [-radius, radius]^l"""
    _require_positive(l=l, radius=radius)
    return GalleryInstance(
        f"delta_window({l}, {radius})", delta_skeleton(l, radius), None, "Δ_l window"
    )


def delta_torus(l, size):  # noqa: E741
    """The quotient Δ_l / size·Z^l, with the translation action along each coordinate"""
    _require_positive(l=l, size=size)
    points = list(itertools.product(range(size), repeat=l))
    sk = lattice_skeleton(points, wrap=size)
    generators = []
    for i in range(l):

        def shift(p, i=i):
            return tuple((c + 1) % size if j == i else c for j, c in enumerate(p))

        vertex_map = {",".join(map(str, p)): ",".join(map(str, shift(p))) for p in points}
        edge_map = {e.id: f"{vertex_map[e.range]}+e{e.color}" for e in sk.edges}
        generators.append(Automorphism(vertex_map, edge_map))
    return GalleryInstance(
        f"delta_torus({l}, {size})", sk, ZlAction(sk, tuple(generators)), "quotient of Δ_l"
    )


def triangular(n):
    return n * (n + 1) // 2


def bratteli_matrices(c, levels):
    """Matrices A_n = Φ_{T_{n-1}+1} ⋯ Φ_{T_n} with Φ_i = [[c_i, 1], [1, 0]] and T_n triangular

    :param c: Continued fraction digits, all positive
    :type c: list
    :param levels: Number of matrices
    :type levels: int
    :return: ``[A_1, …, A_levels]``
    :rtype: list
    """
    _require_positive(levels=levels)
    if not c or any(not isinstance(x, int) or x < 1 for x in c):
        raise BadParameter(f"Digits must be a nonempty list of positive integers, got {c!r}")
    if len(c) < triangular(levels):
        raise BadParameter(
            f"{levels} levels need {triangular(levels)} digits, only {len(c)} given"
        )
    matrices = []
    for n in range(1, levels + 1):
        product = np.eye(2, dtype=object)
        for digit in c[triangular(n - 1) : triangular(n)]:
            product = product.dot(np.array([[digit, 1], [1, 0]], dtype=object))
        matrices.append(product)
    return matrices


def rank2_bratteli(c, levels):
    """The Bratteli diagram with bundles of multiplicity A_n between levels n and n+1

    Edge e^m_{ij}(t) has range v^m_i and source v^{m+1}_j. The action fixes every vertex and
    cycles each bundle of parallel edges, so its crossed product is a rank-2 Bratteli diagram.
    Vertices at the last level are boundary vertices.

    :param c: Continued fraction digits
    :type c: list
    :param levels: Number of edge levels
    :type levels: int
    :rtype: GalleryInstance
    """
    matrices = bratteli_matrices(c, levels)
    vertices = tuple(f"v{m}_{i}" for m in range(1, levels + 2) for i in (1, 2))
    edges, edge_map = [], {}
    for m, matrix in enumerate(matrices, start=1):
        for i, j in itertools.product((1, 2), repeat=2):
            size = int(matrix[i - 1, j - 1])
            bundle = [f"e{m}_{i}{j}({t})" for t in range(size)]
            edges += [Edge(e, 1, f"v{m}_{i}", f"v{m + 1}_{j}") for e in bundle]
            edge_map.update({e: bundle[(t + 1) % size] for t, e in enumerate(bundle)})
    sk = Skeleton(
        1,
        vertices,
        tuple(edges),
        (),
        frozenset(f"v{levels + 1}_{i}" for i in (1, 2)),
    )
    cycle = Automorphism({v: v for v in vertices}, edge_map)
    return GalleryInstance(
        f"rank2_bratteli({list(c)}, {levels})",
        sk,
        ZlAction(sk, (cycle,)),
        "continued-fraction Bratteli diagram",
    )


def commuting_loops():
    """One vertex with a blue loop f and a red loop g, and the square fg = gf"""
    sk = Skeleton(
        2,
        ("v",),
        (Edge("f", 1, "v", "v"), Edge("g", 2, "v", "v")),
        (Square(("f", "g"), ("g", "f")),),
    )
    return GalleryInstance(
        "commuting_loops", sk, identity_action(sk), "one vertex, two commuting loops"
    )


def disjoint_loops(n):
    """n one-loop components with the identity action"""
    _require_positive(n=n)
    sk = Skeleton(
        1,
        tuple(f"u{i}" for i in range(1, n + 1)),
        tuple(Edge(f"l{i}", 1, f"u{i}", f"u{i}") for i in range(1, n + 1)),
        (),
    )
    return GalleryInstance(f"disjoint_loops({n})", sk, identity_action(sk), "n disjoint loops")


GALLERY = {
    "commuting_loops": commuting_loops,
    "cycle_with_rotation": cycle_with_rotation,
    "delta_torus": delta_torus,
    "delta_window": delta_window,
    "disjoint_loops": disjoint_loops,
    "line_window_shift": line_window_shift,
    "m_loops": m_loops,
    "omega_window": omega_window,
    "rank2_bratteli": rank2_bratteli,
}
