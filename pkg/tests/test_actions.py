import itertools

import pytest

from kgraph.models.actions import (
    Automorphism,
    ZlAction,
    action_order,
    apply,
    orbits,
    validate_action,
    vertex_orbit,
)
from kgraph.models.gallery import cycle_with_rotation, m_loops
from kgraph.models.skeleton import (
    Edge,
    Skeleton,
    Square,
    ViolationKind,
    compose,
    path_from_edges,
    paths_up_to,
)
from kgraph.utils.exceptions import UnknownVertex

# Blue loops f1, f2 and red loops g1, g2 where only g1 flips the blue loops
twisted = Skeleton(
    2,
    ("v",),
    (
        Edge("f1", 1, "v", "v"),
        Edge("f2", 1, "v", "v"),
        Edge("g1", 2, "v", "v"),
        Edge("g2", 2, "v", "v"),
    ),
    (
        Square(("f1", "g1"), ("g1", "f2")),
        Square(("f2", "g1"), ("g1", "f1")),
        Square(("f1", "g2"), ("g2", "f1")),
        Square(("f2", "g2"), ("g2", "f2")),
    ),
)


def test_gallery_actions_validate(construction_instances):
    for sk, a in construction_instances:
        report = validate_action(sk, a)
        assert report.ok, report.violations


def test_not_bijective(o2):
    sk = o2.skeleton
    gen = Automorphism({"v": "v"}, {"f1": "f1", "f2": "f1"})
    report = validate_action(sk, ZlAction(sk, (gen,)))
    assert ViolationKind.NOT_BIJECTIVE in report.kinds()


def test_unknown_ids(o2):
    sk = o2.skeleton
    gen = Automorphism({"v": "v"}, {"f1": "f2", "f2": "f3"})
    report = validate_action(sk, ZlAction(sk, (gen,)))
    assert ViolationKind.DANGLING_EDGE in report.kinds()


def test_not_equivariant(cycle3):
    sk = cycle3.skeleton
    gen = Automorphism({v: v for v in sk.vertices}, {"e0": "e1", "e1": "e2", "e2": "e0"})
    report = validate_action(sk, ZlAction(sk, (gen,)))
    assert report.kinds() == {ViolationKind.NOT_EQUIVARIANT}


def test_square_not_preserved():
    assert validate_action(twisted, ZlAction(twisted, (_identity(twisted),))).ok
    swap_red = Automorphism({"v": "v"}, {"f1": "f1", "f2": "f2", "g1": "g2", "g2": "g1"})
    report = validate_action(twisted, ZlAction(twisted, (swap_red,)))
    assert report.kinds() == {ViolationKind.SQUARE_NOT_PRESERVED}


def test_not_commuting():
    loops3 = m_loops(3)
    sk = loops3.skeleton
    (rotate,) = loops3.action.generators
    transpose = Automorphism({"v": "v"}, {"f1": "f2", "f2": "f1", "f3": "f3"})
    report = validate_action(sk, ZlAction(sk, (rotate, transpose)))
    assert report.kinds() == {ViolationKind.NOT_COMMUTING}


def test_apply():
    loops3 = m_loops(3)
    path = path_from_edges(loops3.skeleton, ["f1", "f2"])
    assert apply(loops3.action, (1,), path).word == ("f2", "f3")
    assert apply(loops3.action, (-1,), path).word == ("f3", "f1")
    assert apply(loops3.action, (3,), path) == path


def test_orbits(cycle3, two_components):
    assert orbits(cycle3.action) == [("v0", "v1", "v2")]
    assert orbits(two_components.action) == [("u1",), ("u2",)]
    assert vertex_orbit(cycle3.action, "v1") == frozenset({"v0", "v1", "v2"})
    with pytest.raises(UnknownVertex):
        vertex_orbit(cycle3.action, "nowhere")


def test_action_order(o2, two_components):
    assert action_order(o2.action) == 2
    assert action_order(m_loops(3).action) == 3
    assert action_order(cycle_with_rotation(4).action) == 4
    assert action_order(two_components.action) == 1


def test_orbit_sizes_divide_order(construction_instances):
    # An orbit is a quotient of (Z/N)^l
    for _, a in construction_instances:
        order = action_order(a)
        assert all(order**a.l % len(orbit) == 0 for orbit in orbits(a))


def test_apply_respects_composition(action_instances):
    for sk, a in action_instances:
        ones = (1,) * sk.k
        for v in sk.vertices:
            for first in paths_up_to(sk, v, ones):
                for second in paths_up_to(sk, first.source, ones):
                    for m in itertools.product(range(-1, 3), repeat=a.l):
                        assert apply(a, m, compose(first, second)) == compose(
                            apply(a, m, first), apply(a, m, second)
                        )


def test_actions_are_hashable(cycle3):
    (gen,) = cycle3.action.generators
    copy = Automorphism(dict(gen.vertex_map), dict(gen.edge_map))
    assert copy == gen
    assert len({gen, copy}) == 1
    again = ZlAction(cycle3.skeleton, (copy,))
    assert hash(again) == hash(cycle3.action)


def _identity(sk):
    return Automorphism({v: v for v in sk.vertices}, {e.id: e.id for e in sk.edges})
