import json

import pytest

from kgraph import Workbench
from kgraph.models.gallery import (
    commuting_loops,
    cycle_with_rotation,
    delta_torus,
    delta_window,
    disjoint_loops,
    identity_action,
    line_window_shift,
    m_loops,
    omega_window,
    rank2_bratteli,
)
from kgraph.utils.io import action_to_dict, skeleton_to_dict


@pytest.fixture(scope="session")
def workbench():
    """Return a workbench with small search bounds

    :return: Workbench
    :rtype: Workbench
    """
    return Workbench(depth=4, pair_bound=2)


@pytest.fixture(scope="session")
def o2():
    """The one-vertex graph with two loops, and the swap of its loops"""
    return m_loops(2)


@pytest.fixture(scope="session")
def o2_identity(o2):
    return identity_action(o2.skeleton)


@pytest.fixture(scope="session")
def cycle3():
    return cycle_with_rotation(3)


@pytest.fixture(scope="session")
def two_components():
    return disjoint_loops(2)


@pytest.fixture(scope="session")
def action_instances(o2, o2_identity, cycle3, two_components):
    """Pairs (skeleton, action) of the finite gallery instances with an action

    Windows are left out since dynamics and K-theory refuse them; see ``window_actions``.
    """
    loops3 = m_loops(3)
    torus = delta_torus(2, 2)
    return [
        (o2.skeleton, o2.action),
        (o2.skeleton, o2_identity),
        (cycle3.skeleton, cycle3.action),
        (loops3.skeleton, loops3.action),
        (two_components.skeleton, two_components.action),
        (torus.skeleton, torus.action),
    ]


@pytest.fixture(scope="session")
def window_actions():
    """Gallery actions on truncated windows"""
    bratteli = rank2_bratteli([1] * 6, 3)
    return [(bratteli.skeleton, bratteli.action)]


@pytest.fixture(scope="session")
def construction_instances(action_instances, window_actions):
    return action_instances + window_actions


@pytest.fixture(scope="session")
def two_graphs():
    """Gallery 2-graphs, windows included"""
    return [
        commuting_loops().skeleton,
        line_window_shift(3, 2).skeleton,
        omega_window(2, 2).skeleton,
        delta_window(2, 1).skeleton,
        delta_torus(2, 2).skeleton,
    ]


@pytest.fixture(scope="session")
def all_instances(two_graphs, action_instances):
    skeletons = two_graphs + [sk for sk, _ in action_instances]
    return skeletons + [rank2_bratteli([1] * 6, 3).skeleton]


@pytest.fixture(scope="function")
def o2_files(tmp_path, o2):
    """Write the O_2 skeleton and its swap to JSON files

    :return: Paths of the skeleton and action files
    :rtype: tuple
    """
    skeleton_path = tmp_path / "o2.json"
    action_path = tmp_path / "swap.json"
    skeleton_path.write_text(json.dumps(skeleton_to_dict(o2.skeleton)), encoding="utf-8")
    action_path.write_text(json.dumps(action_to_dict(o2.action)), encoding="utf-8")
    return str(skeleton_path), str(action_path)
