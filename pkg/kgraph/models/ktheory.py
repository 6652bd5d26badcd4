"""Integer-matrix K-theory for graph algebras and their crossed products by Z.

Matrices are numpy arrays with ``dtype=object`` so entries stay exact Python integers.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from sympy import Matrix, factorint

from kgraph.models.actions import orbits
from kgraph.models.skeleton import structural_counts
from kgraph.utils.exceptions import Inapplicable, InternalError, NoSources

logger = logging.getLogger(__name__)


def as_int_matrix(rows, shape=None):
    """Exact integer matrix from nested lists (``shape`` is needed for empty matrices)"""
    matrix = np.array(rows, dtype=object)
    if shape is not None:
        matrix = matrix.reshape(shape)
    return matrix


def identity(n):
    return np.eye(n, dtype=object)


def mat_mul(a, b):
    """Exact product that also handles an empty inner dimension"""
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=object)
    return a.dot(b)


def determinant_is_unit(matrix):
    return abs(Matrix(matrix.tolist()).det()) == 1 if matrix.size else True


@dataclass(frozen=True)
class SmithForm:
    """S = U·M·V with U, V unimodular and S diagonal with d_1 | d_2 | …

    ``u_inv`` and ``v_inv`` are the exact inverses of ``u`` and ``v``.
    """

    u: np.ndarray = field(repr=False)
    s: np.ndarray
    v: np.ndarray = field(repr=False)
    u_inv: np.ndarray = field(repr=False)
    v_inv: np.ndarray = field(repr=False)

    @property
    def diagonal(self):
        return [self.s[i, i] for i in range(min(self.s.shape))]

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d != 0)


def _least_entry(s, t):
    """Position of the nonzero entry of least absolute value in s[t:, t:], ties row-major"""
    best = None
    for i in range(t, s.shape[0]):
        for j in range(t, s.shape[1]):
            if s[i, j] != 0 and (best is None or abs(s[i, j]) < abs(s[best])):
                best = (i, j)
    return best


def smith_normal_form(matrix):
    """Smith normal form by row and column reduction

    We repeatedly move the least nonzero entry of the remaining block to the pivot position and
    clear its row and column by division with remainder. A smaller remainder becomes the next
    pivot. Once the row and column are clear, an entry of the block that the pivot does not
    divide is added into the pivot row and the reduction resumes. Every operation is mirrored in
    U, V and their inverses.

    :param matrix: Integer matrix
    :type matrix: numpy.ndarray
    :return: The factorization
    :rtype: SmithForm
    """
    s = np.array(matrix, dtype=object)
    rows, cols = s.shape
    u, u_inv = identity(rows), identity(rows)
    v, v_inv = identity(cols), identity(cols)

    for t in range(min(rows, cols)):
        while True:
            pivot = _least_entry(s, t)
            if pivot is None:
                break
            i, j = pivot
            # Row and column swaps bring the pivot to (t, t)
            s[[t, i]], u[[t, i]] = s[[i, t]], u[[i, t]]
            u_inv[:, [t, i]] = u_inv[:, [i, t]]
            s[:, [t, j]], v[:, [t, j]] = s[:, [j, t]], v[:, [j, t]]
            v_inv[[t, j]] = v_inv[[j, t]]

            clear = True
            for i in range(t + 1, rows):
                q = s[i, t] // s[t, t]
                if q:
                    s[i] -= q * s[t]
                    u[i] -= q * u[t]
                    u_inv[:, t] += q * u_inv[:, i]
                clear = clear and s[i, t] == 0
            for j in range(t + 1, cols):
                q = s[t, j] // s[t, t]
                if q:
                    s[:, j] -= q * s[:, t]
                    v[:, j] -= q * v[:, t]
                    v_inv[t] += q * v_inv[j]
                clear = clear and s[t, j] == 0
            if not clear:
                continue

            stray = next(
                (
                    i
                    for i in range(t + 1, rows)
                    for j in range(t + 1, cols)
                    if s[i, j] % s[t, t] != 0
                ),
                None,
            )
            if stray is None:
                break
            s[t] += s[stray]
            u[t] += u[stray]
            u_inv[:, stray] -= u_inv[:, t]
        if _least_entry(s, t) is None:
            break
        if s[t, t] < 0:
            s[t] *= -1
            u[t] *= -1
            u_inv[:, t] *= -1
    return SmithForm(u, s, v, u_inv, v_inv)


@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_t with d_i >= 2 and d_i | d_{i+1}"""

    free_rank: int
    torsion: Tuple[int, ...] = ()

    def order(self):
        """Number of elements, or None when the group is infinite"""
        if self.free_rank:
            return None
        return int(np.prod(self.torsion, dtype=object)) if self.torsion else 1

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def elementary_divisors(self):
        """Prime-power orders of the cyclic summands of the torsion part"""
        return sorted(p**e for d in self.torsion for p, e in factorint(d).items())

    def direct_sum(self, other):
        diagonal = [*self.torsion, *other.torsion, *([0] * (self.free_rank + other.free_rank))]
        matrix = np.zeros((len(diagonal), len(diagonal)), dtype=object)
        for i, d in enumerate(diagonal):
            matrix[i, i] = d
        return cokernel(matrix)

    def to_dict(self):
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = ([f"Z^{self.free_rank}" if self.free_rank > 1 else "Z"] if self.free_rank else [])
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


def cokernel(matrix):
    """The group ℤ^rows / im(matrix)"""
    form = smith_normal_form(matrix)
    rows = matrix.shape[0]
    diagonal = form.diagonal
    torsion = tuple(int(d) for d in diagonal if d not in (0, 1))
    return FGAbelianGroup(rows - form.rank, torsion)


def kernel_basis(matrix):
    """Matrix whose columns form a ℤ-basis of the kernel"""
    form = smith_normal_form(matrix)
    return form.v[:, form.rank :]


def kernel_group(matrix):
    """The kernel as a (free) abelian group"""
    return FGAbelianGroup(kernel_basis(matrix).shape[1])


def solve(a, y):
    """The unique-up-to-kernel integer solution x of a·x = y

    :raises InternalError: when no integer solution exists
    """
    form = smith_normal_form(a)
    target = mat_mul(form.u, y)
    z = np.zeros((a.shape[1], y.shape[1]), dtype=object)
    for i, d in enumerate(form.diagonal):
        if d == 0:
            continue
        for j in range(y.shape[1]):
            if target[i, j] % d:
                raise InternalError("Equation has no integer solution")
            z[i, j] = target[i, j] // d
    if (target[form.rank :] != 0).any():
        raise InternalError("Equation has no integer solution")
    return mat_mul(form.v, z)


@dataclass(frozen=True)
class GroupHom:
    """The map ℤ^a / im(domain) → ℤ^b / im(codomain) induced by ``matrix``

    ``certificate`` is an integer X with matrix·domain = codomain·X, which proves that relations
    map into relations.
    """

    domain: np.ndarray = field(repr=False)
    codomain: np.ndarray = field(repr=False)
    matrix: np.ndarray
    certificate: np.ndarray = field(repr=False)

    def cokernel(self):
        return cokernel(np.hstack([self.codomain, self.matrix]))

    def kernel(self):
        stacked = np.hstack([self.matrix, -self.codomain])
        preimage = kernel_basis(stacked)[: self.matrix.shape[1]]
        form = smith_normal_form(preimage)
        basis = np.zeros((preimage.shape[0], form.rank), dtype=object)
        for i in range(form.rank):
            basis[:, i] = form.u_inv[:, i] * form.diagonal[i]
        return cokernel(solve(basis, self.domain))


def group_hom(domain, codomain, matrix):
    """Build a hom between presented groups after checking that it is well defined"""
    certificate = solve(codomain, mat_mul(matrix, domain))
    return GroupHom(domain, codomain, matrix, certificate)


def _require_graph(sk, a=None):
    if sk.k != 1:
        raise Inapplicable(f"K-theory formulas need a 1-graph, got k={sk.k}")
    if a is not None and a.l != 1:
        raise Inapplicable(f"K-theory formulas need an action of Z, got l={a.l}")
    if sk.boundary:
        raise Inapplicable("K-theory needs a whole graph, not a truncated window")
    if not structural_counts(sk)["no_sources"]:
        raise NoSources("K-theory formulas need a graph without sources")


def adjacency_matrix(sk):
    """M_E(v, w) = number of edges with range v and source w, vertices in sorted order"""
    vertices = sorted(sk.vertices)
    position = {v: i for i, v in enumerate(vertices)}
    matrix = np.zeros((len(vertices), len(vertices)), dtype=object)
    for e in sk.edges:
        matrix[position[e.range], position[e.source]] += 1
    return matrix


def adjacency_and_action(sk, a):
    """The adjacency matrix M_E and the matrix P of α_*(δ_v) = δ_{α^{-1}(v)}

    :param sk: Validated 1-graph skeleton
    :type sk: Skeleton
    :param a: Validated action of Z
    :type a: ZlAction
    :return: ``(M_E, P)``
    :rtype: tuple
    """
    _require_graph(sk, a)
    vertices = sorted(sk.vertices)
    position = {v: i for i, v in enumerate(vertices)}
    adjacency = adjacency_matrix(sk)
    permutation = np.zeros_like(adjacency)
    for v in vertices:
        permutation[position[a.vertex((-1,), v)], position[v]] = 1
    transpose = adjacency.T
    if not (mat_mul(permutation, transpose) == mat_mul(transpose, permutation)).all():
        raise InternalError("The action does not commute with the transposed adjacency matrix")
    return adjacency, permutation


def _one_minus(matrix):
    return identity(matrix.shape[0]) - matrix


def graph_k_groups(sk):
    """K_0 = coker(1 - M_E^t) and K_1 = ker(1 - M_E^t) for a 1-graph without sources

    :param sk: Validated 1-graph skeleton
    :type sk: Skeleton
    :return: ``(K0, K1)``
    :rtype: tuple
    """
    _require_graph(sk)
    relations = _one_minus(adjacency_matrix(sk).T)
    return cokernel(relations), kernel_group(relations)


@dataclass(frozen=True)
class KTheoryReport:
    k0: FGAbelianGroup
    k1: FGAbelianGroup
    method: str
    case: Optional[str] = None
    orbit_matrices: Optional[Tuple[np.ndarray, np.ndarray]] = field(default=None, compare=False)

    def to_dict(self):
        out = {"K0": self.k0.to_dict(), "K1": self.k1.to_dict(), "method": self.method}
        if self.case:
            out["case"] = self.case
        if self.orbit_matrices is not None:
            out["A"], out["B"] = (m.tolist() for m in self.orbit_matrices)
        return out


def _base_case(sk):
    k0, k1 = graph_k_groups(sk)
    if k1.is_trivial():
        return "K1-trivial"
    # Unreachable for finite graphs: 1 - M^t is square, so a trivial K0 forces a trivial K1
    if k0.is_trivial():
        return "K0-trivial"
    raise Inapplicable(f"Neither K0 = {k0} nor K1 = {k1} of the base graph is trivial")


def crossed_k_groups_pv(sk, a):
    """K-groups of the crossed product from the Pimsner-Voiculescu sequence

    :param sk: Validated 1-graph skeleton without sources
    :type sk: Skeleton
    :param a: Validated action of Z
    :type a: ZlAction
    :return: Report with ``method="pv"``
    :rtype: KTheoryReport
    """
    adjacency, permutation = adjacency_and_action(sk, a)
    case = _base_case(sk)
    relations = _one_minus(adjacency.T)
    if case == "K1-trivial":
        induced = group_hom(relations, relations, _one_minus(permutation))
        k0, k1 = induced.cokernel(), induced.kernel()
    else:
        basis = kernel_basis(relations)
        restricted = solve(basis, mat_mul(permutation, basis))
        k0, k1 = kernel_group(_one_minus(restricted)), cokernel(_one_minus(restricted))
    logger.debug("Pimsner-Voiculescu case %s gives K0 = %s, K1 = %s", case, k0, k1)
    return KTheoryReport(k0, k1, "pv", case)


def orbit_matrices(sk, a):
    """A_{C1,C2} = |C1 E^1 C2| / |C1| and B_{C1,C2} = |C1 E^1 C2| / |C2| over the vertex orbits

    :param sk: Validated 1-graph skeleton
    :type sk: Skeleton
    :param a: Validated action of Z
    :type a: ZlAction
    :return: ``(A, B)``
    :rtype: tuple
    """
    _require_graph(sk, a)
    classes = orbits(a)
    position = {v: index for index, orbit in enumerate(classes) for v in orbit}
    size = len(classes)
    counts = np.zeros((size, size), dtype=object)
    by_vertex = {}
    for e in sk.edges:
        i, j = position[e.range], position[e.source]
        counts[i, j] += 1
        by_vertex[("r", e.range, j)] = by_vertex.get(("r", e.range, j), 0) + 1
        by_vertex[("s", i, e.source)] = by_vertex.get(("s", i, e.source), 0) + 1

    a_matrix = np.zeros_like(counts)
    b_matrix = np.zeros_like(counts)
    for i, first in enumerate(classes):
        for j, second in enumerate(classes):
            if counts[i, j] % len(first) or counts[i, j] % len(second):
                raise InternalError(f"Edge count between orbits {i} and {j} is not divisible")
            a_matrix[i, j] = counts[i, j] // len(first)
            b_matrix[i, j] = counts[i, j] // len(second)
            if any(by_vertex.get(("r", v, j), 0) != a_matrix[i, j] for v in first) or any(
                by_vertex.get(("s", i, w), 0) != b_matrix[i, j] for w in second
            ):
                raise InternalError(f"Orbit matrices depend on the representative at {i}, {j}")
    return a_matrix, b_matrix


def crossed_k_groups_orbits(sk, a):
    """K-groups of the crossed product from the orbit matrices

    :param sk: Validated 1-graph skeleton without sources
    :type sk: Skeleton
    :param a: Validated action of Z
    :type a: ZlAction
    :return: Report with ``method="orbits"``
    :rtype: KTheoryReport
    """
    a_matrix, b_matrix = orbit_matrices(sk, a)
    case = _base_case(sk)
    if case == "K1-trivial":
        k0 = cokernel(_one_minus(a_matrix.T))
        k1 = cokernel(_one_minus(b_matrix.T))
    else:
        k0 = kernel_group(_one_minus(b_matrix.T))
        k1 = kernel_group(_one_minus(a_matrix.T))
    return KTheoryReport(k0, k1, "orbits", case, (a_matrix, b_matrix))


def ktheory(sk, a=None, method="both"):
    """K-groups of C*(E), or of C*(E) ⋊ Z when an action is given

    :param sk: Validated 1-graph skeleton without sources
    :type sk: Skeleton
    :param a: Action of Z, or None
    :type a: ZlAction
    :param method: ``"pv"``, ``"orbits"`` or ``"both"`` (both, checked against each other)
    :type method: str
    :return: The report
    :rtype: KTheoryReport
    """
    if a is None:
        k0, k1 = graph_k_groups(sk)
        return KTheoryReport(k0, k1, "graph")
    if method == "pv":
        return crossed_k_groups_pv(sk, a)
    if method == "orbits":
        return crossed_k_groups_orbits(sk, a)
    pv, by_orbits = crossed_k_groups_pv(sk, a), crossed_k_groups_orbits(sk, a)
    if (pv.k0, pv.k1) != (by_orbits.k0, by_orbits.k1):
        raise InternalError(
            f"Methods disagree: pv gives ({pv.k0}, {pv.k1}), orbits give "
            f"({by_orbits.k0}, {by_orbits.k1})"
        )
    return KTheoryReport(pv.k0, pv.k1, "both-agree", pv.case, by_orbits.orbit_matrices)
