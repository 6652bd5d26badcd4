import itertools

import pytest

from kgraph.models.actions import apply
from kgraph.models.alignment import is_exhaustive, mce, structural_flags
from kgraph.models.gallery import commuting_loops, delta_torus, m_loops, omega_window
from kgraph.models.skeleton import (
    compose,
    path_from_edges,
    paths_up_to,
    segment,
    validate_skeleton,
    vertex_path,
    zero,
)
from kgraph.utils.exceptions import RangeMismatch, SkeletonMismatch

loops = commuting_loops().skeleton
square_grid = omega_window(2, 2).skeleton


def test_mce_of_different_colours():
    f = path_from_edges(loops, ["f"])
    g = path_from_edges(loops, ["g"])
    result = mce(f, g)
    assert len(result) == 1
    ((extension, (xi, eta)),) = result.pairs
    assert extension.word == ("f", "g")
    assert xi.word == ("g",)
    assert eta.word == ("f",)


def test_mce_in_one_colour(o2):
    sk = o2.skeleton
    f1 = path_from_edges(sk, ["f1"])
    f2 = path_from_edges(sk, ["f2"])
    f1f2 = path_from_edges(sk, ["f1", "f2"])
    assert not mce(f1, f2)
    assert [x.word for x in mce(f1, f1f2).extensions] == [("f1", "f2")]
    assert [x.word for x in mce(f1, f1).extensions] == [("f1",)]


def test_mce_with_vertex():
    v = vertex_path(square_grid, "0,0")
    e = path_from_edges(square_grid, ["0,0+e1"])
    assert [x.word for x in mce(v, e).extensions] == [("0,0+e1",)]


def test_mce_is_symmetric():
    a = path_from_edges(square_grid, ["0,0+e1"])
    b = path_from_edges(square_grid, ["0,0+e2"])
    forward = {x.word for x in mce(a, b).extensions}
    backward = {x.word for x in mce(b, a).extensions}
    assert forward == backward == {("0,0+e1", "1,0+e2")}


def test_mce_of_different_ranges(cycle3):
    sk = cycle3.skeleton
    assert not mce(vertex_path(sk, "v0"), vertex_path(sk, "v1"))


def test_mce_of_different_skeletons(o2):
    with pytest.raises(SkeletonMismatch):
        mce(vertex_path(o2.skeleton, "v"), vertex_path(loops, "v"))


def test_exhaustive_sets(o2, cycle3):
    sk = o2.skeleton
    f1 = path_from_edges(sk, ["f1"])
    f2 = path_from_edges(sk, ["f2"])
    assert is_exhaustive(sk, "v", [f1, f2])
    assert not is_exhaustive(sk, "v", [f1])
    assert not is_exhaustive(sk, "v", [])
    assert is_exhaustive(sk, "v", [vertex_path(sk, "v")])

    with pytest.raises(RangeMismatch):
        is_exhaustive(cycle3.skeleton, "v0", [vertex_path(cycle3.skeleton, "v1")])


def test_structural_flags():
    flags = structural_flags(loops)
    assert flags == {
        "finitely_aligned": True,
        "row_finite": True,
        "no_sources": True,
        "no_sinks": True,
    }


def _extends_everything(sk, v, paths, bound):
    return all(any(mce(mu, nu) for nu in paths) for mu in paths_up_to(sk, v, bound))


def test_exhaustive_against_larger_bound(o2, cycle3):
    skeletons = [
        o2.skeleton,
        m_loops(3).skeleton,
        cycle3.skeleton,
        loops,
        delta_torus(2, 2).skeleton,
    ]
    for sk in skeletons:
        bound = (3,) * sk.k
        for v in sk.vertices:
            candidates = paths_up_to(sk, v, (1,) * sk.k)
            for size in (1, 2):
                for family in itertools.combinations(candidates, size):
                    expected = _extends_everything(sk, v, family, bound)
                    assert is_exhaustive(sk, v, list(family)) == expected


def test_mce_extensions_begin_with_both_paths(all_instances):
    for sk in all_instances:
        # Windows with excused pairs lack some factorizations near the boundary
        if validate_skeleton(sk).boundary_exemptions:
            continue
        origin = zero(sk.k)
        for v in sk.vertices:
            paths = paths_up_to(sk, v, (1,) * sk.k)
            for mu, nu in itertools.product(paths, repeat=2):
                for extension, (xi, eta) in mce(mu, nu).pairs:
                    assert segment(extension, origin, mu.degree) == mu
                    assert segment(extension, origin, nu.degree) == nu
                    assert compose(mu, xi) == extension == compose(nu, eta)


def test_mce_is_equivariant(action_instances):
    for sk, a in action_instances:
        for v in sk.vertices:
            paths = paths_up_to(sk, v, (1,) * sk.k)
            for mu, nu in itertools.product(paths, repeat=2):
                for m in itertools.product(range(3), repeat=a.l):
                    images = {apply(a, m, x).word for x in mce(mu, nu).extensions}
                    found = mce(apply(a, m, mu), apply(a, m, nu)).extensions
                    assert images == {x.word for x in found}
