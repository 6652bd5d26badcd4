import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from kgraph.models.gallery import commuting_loops, identity_action, m_loops, rank2_bratteli
from kgraph.models.ktheory import (
    FGAbelianGroup,
    adjacency_and_action,
    as_int_matrix,
    cokernel,
    crossed_k_groups_orbits,
    crossed_k_groups_pv,
    determinant_is_unit,
    group_hom,
    identity,
    kernel_basis,
    ktheory,
    orbit_matrices,
    smith_normal_form,
)
from kgraph.utils.exceptions import Inapplicable, InternalError

matrices = st.integers(min_value=1, max_value=4).flatmap(
    lambda rows: st.integers(min_value=1, max_value=4).flatmap(
        lambda cols: st.lists(
            st.lists(st.integers(min_value=-5, max_value=5), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
)

squares = st.integers(min_value=1, max_value=4).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(min_value=-5, max_value=5), min_size=n, max_size=n),
        min_size=n,
        max_size=n,
    )
)


@settings(max_examples=500, deadline=None)
@given(rows=matrices)
def test_smith_normal_form(rows):
    m = as_int_matrix(rows)
    form = smith_normal_form(m)
    assert (form.u.dot(m).dot(form.v) == form.s).all()
    assert (form.u.dot(form.u_inv) == identity(m.shape[0])).all()
    assert (form.v.dot(form.v_inv) == identity(m.shape[1])).all()
    assert determinant_is_unit(form.u)
    assert determinant_is_unit(form.v)

    off_diagonal = [
        form.s[i, j] for i in range(m.shape[0]) for j in range(m.shape[1]) if i != j
    ]
    assert not any(off_diagonal)
    diagonal = form.diagonal
    assert all(d >= 0 for d in diagonal)
    for d, e in zip(diagonal, diagonal[1:]):
        assert e == 0 if d == 0 else e % d == 0
    assert form.rank == Matrix(rows).rank()


@settings(max_examples=100, deadline=None)
@given(rows=squares)
def test_cokernel_order_is_determinant(rows):
    det = Matrix(rows).det()
    group = cokernel(as_int_matrix(rows))
    if det == 0:
        assert group.order() is None
    else:
        assert group.order() == abs(det)


@settings(max_examples=200, deadline=None)
@given(rows=squares)
def test_trivial_cokernel_forces_trivial_kernel(rows):
    m = as_int_matrix(rows)
    if cokernel(m).is_trivial():
        assert kernel_basis(m).shape[1] == 0


def test_kernel_basis():
    m = as_int_matrix([[1, 2, 3], [2, 4, 6]])
    basis = kernel_basis(m)
    assert basis.shape == (3, 2)
    assert not m.dot(basis).any()


def test_group_strings():
    assert str(FGAbelianGroup(0)) == "0"
    assert str(FGAbelianGroup(1)) == "Z"
    assert str(FGAbelianGroup(2, (2,))) == "Z^2 + Z/2"
    assert str(FGAbelianGroup(1, (2, 6))) == "Z + Z/2 + Z/6"


def test_group_invariants():
    group = FGAbelianGroup(0, (2, 6))
    assert group.order() == 12
    assert group.elementary_divisors() == [2, 2, 3]
    assert FGAbelianGroup(0, (12,)).elementary_divisors() == [3, 4]
    assert FGAbelianGroup(0).is_trivial()
    assert FGAbelianGroup(0, (2,)).direct_sum(FGAbelianGroup(0, (3,))) == FGAbelianGroup(0, (6,))
    assert FGAbelianGroup(1).direct_sum(FGAbelianGroup(0, (2,))) == FGAbelianGroup(1, (2,))
    assert len({cokernel(as_int_matrix([[2, 0], [0, 3]])), FGAbelianGroup(0, (6,))}) == 1


def test_ill_defined_hom():
    with pytest.raises(InternalError):
        group_hom(as_int_matrix([[2]]), as_int_matrix([[3]]), as_int_matrix([[1]]))


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_graph_k_groups_of_loops(m):
    report = ktheory(m_loops(m).skeleton)
    assert report.method == "graph"
    assert report.k0 == (FGAbelianGroup(0, (m - 1,)) if m > 2 else FGAbelianGroup(0))
    assert report.k1.is_trivial()


def test_graph_k_groups_of_cycle(cycle3, two_components):
    report = ktheory(cycle3.skeleton)
    assert report.k0 == FGAbelianGroup(1)
    assert report.k1 == FGAbelianGroup(1)
    report = ktheory(two_components.skeleton)
    assert str(report.k0) == str(report.k1) == "Z^2"


def test_o2_with_swap(o2):
    report = ktheory(o2.skeleton, o2.action)
    assert report.k0.is_trivial()
    assert report.k1.is_trivial()
    assert report.to_dict() == {
        "K0": {"rank": 0, "torsion": []},
        "K1": {"rank": 0, "torsion": []},
        "method": "both-agree",
        "case": "K1-trivial",
        "A": [[2]],
        "B": [[2]],
    }


def test_rotating_three_loops():
    instance = m_loops(3)
    for method in ("pv", "orbits", "both"):
        report = ktheory(instance.skeleton, instance.action, method)
        assert report.k0 == FGAbelianGroup(0, (2,))
        assert report.k1 == FGAbelianGroup(0, (2,))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_methods_agree(m):
    sk = m_loops(m).skeleton
    for a in (m_loops(m).action, identity_action(sk)):
        pv = crossed_k_groups_pv(sk, a)
        by_orbits = crossed_k_groups_orbits(sk, a)
        assert (pv.k0, pv.k1) == (by_orbits.k0, by_orbits.k1)
        assert pv.case == by_orbits.case == "K1-trivial"


def test_trivial_action_doubles_the_groups():
    for m in (3, 4, 5):
        sk = m_loops(m).skeleton
        report = ktheory(sk, identity_action(sk))
        assert report.k0 == report.k1 == FGAbelianGroup(0, (m - 1,))


def test_action_commutes_with_adjacency(action_instances):
    for sk, a in action_instances:
        if sk.k != 1:
            continue
        adjacency, permutation = adjacency_and_action(sk, a)
        transpose = adjacency.T
        assert (permutation.dot(transpose) == transpose.dot(permutation)).all()


def test_orbit_matrices(cycle3):
    a_matrix, b_matrix = orbit_matrices(cycle3.skeleton, cycle3.action)
    assert a_matrix.tolist() == [[1]]
    assert b_matrix.tolist() == [[1]]


def test_inapplicable(cycle3, two_components):
    with pytest.raises(Inapplicable):
        ktheory(cycle3.skeleton, cycle3.action)
    with pytest.raises(Inapplicable):
        ktheory(two_components.skeleton, two_components.action)
    loops = commuting_loops()
    with pytest.raises(Inapplicable):
        ktheory(loops.skeleton, loops.action)
    with pytest.raises(Inapplicable):
        ktheory(rank2_bratteli([1], 1).skeleton)


def test_report_without_case():
    report = ktheory(m_loops(2).skeleton)
    assert report.to_dict() == {
        "K0": {"rank": 0, "torsion": []},
        "K1": {"rank": 0, "torsion": []},
        "method": "graph",
    }
