"""Simplicity diagnostics for crossed products of finite k-graphs.

Cofinality is decided exactly. Aperiodicity is searched on path prefixes of bounded depth and
reported as a three-way answer.
"""
import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import networkx as nx

from kgraph.models.actions import action_order, orbits
from kgraph.models.constructions import crossed_product
from kgraph.models.skeleton import (
    compose,
    degrees_up_to,
    enumerate_paths,
    factorize,
    join,
    leq,
    segment,
    structural_counts,
    sub,
    zero,
)
from kgraph.utils.exceptions import NoSinks, NoSources, WindowTruncated

logger = logging.getLogger(__name__)


class Aperiodicity(Enum):
    WITNESSED = "AperiodicWitnessed"
    PERIODIC = "PeriodicPairFound"
    UNDECIDED = "UndecidedAtDepth"


class Verdict(Enum):
    SIMPLE = "Simple"
    NOT_SIMPLE = "NotSimple"
    UNDECIDED = "UndecidedAtDepth"


@dataclass(frozen=True)
class Witness:
    """A prefix x of a path at ``vertex`` on which σ^p x and σ^q x already disagree"""

    vertex: str
    pair: Tuple[Tuple[int, ...], Tuple[int, ...]]
    prefix: Tuple[str, ...]
    depth: int

    def to_dict(self):
        return {
            "vertex": self.vertex,
            "pair": [list(self.pair[0]), list(self.pair[1])],
            "prefix": list(self.prefix),
            "depth": self.depth,
        }


@dataclass(frozen=True)
class AperiodicityResult:
    status: Aperiodicity
    depth: int
    vertex: Optional[str] = None
    pair: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None
    witnesses: Tuple[Witness, ...] = ()

    def to_dict(self):
        out = {"status": self.status.value, "depth": self.depth}
        if self.status is Aperiodicity.PERIODIC:
            out["vertex"] = self.vertex
            out["pair"] = [list(self.pair[0]), list(self.pair[1])]
        if self.status is Aperiodicity.WITNESSED:
            out["witnesses"] = [witness.to_dict() for witness in self.witnesses]
        return out


@dataclass(frozen=True)
class CofinalityResult:
    ok: bool
    vertex: Optional[str] = None
    avoiding: Tuple[str, ...] = ()

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {"ok": self.ok, "vertex": self.vertex, "avoiding": list(self.avoiding)}


@dataclass(frozen=True)
class SimplicityReport:
    alpha_cofinal: CofinalityResult
    aperiodicity: AperiodicityResult
    notes: Tuple[str, ...] = field(default=())

    @property
    def verdict(self):
        if not self.alpha_cofinal or self.aperiodicity.status is Aperiodicity.PERIODIC:
            return Verdict.NOT_SIMPLE
        if self.aperiodicity.status is Aperiodicity.WITNESSED:
            return Verdict.SIMPLE
        return Verdict.UNDECIDED

    def to_dict(self):
        return {
            "alpha_cofinal": self.alpha_cofinal.to_dict(),
            "aperiodicity": self.aperiodicity.to_dict(),
            "verdict": self.verdict.value,
            "notes": list(self.notes),
        }


def require_dynamics(sk, sinks=False):
    """Raise unless the skeleton is a genuine finite k-graph without sources (and sinks)"""
    if sk.boundary:
        raise WindowTruncated("Dynamics needs a whole k-graph, not a truncated window")
    flags = structural_counts(sk)
    if not flags["no_sources"]:
        raise NoSources("The skeleton has a source: some vertex receives no edge of some colour")
    if sinks and not flags["no_sinks"]:
        raise NoSinks("The skeleton has a sink: some vertex emits no edge of some colour")


def _orbit_of(sk, a):
    if a is None:
        return {v: (v,) for v in sk.vertices}
    return {v: orbit for orbit in orbits(a) for v in orbit}


def _reachability(sk, a):
    """For each v, the orbit-saturated set R(v) of vertices reached from the orbit of v"""
    graph = nx.DiGraph()
    graph.add_nodes_from(sk.vertices)
    graph.add_edges_from((e.range, e.source) for e in sk.edges)
    orbit_of = _orbit_of(sk, a)
    reach = {}
    for v in sk.vertices:
        hits = set()
        for start in orbit_of[v]:
            hits |= {start} | nx.descendants(graph, start)
        reach[v] = {w for hit in hits for w in orbit_of[hit]}
    return reach


def _corners(k):
    return list(itertools.product((0, 1), repeat=k))


def _avoiding_core(sk, complement):
    """Greatest S ⊆ complement in which every vertex starts a degree-(1,…,1) path inside S"""
    ones = (1,) * sk.k
    corners = _corners(sk.k)
    core = set(complement)
    changed = True
    while changed:
        changed = False
        for w in sorted(core):
            stays = any(
                all(factorize(path, p)[0].source in core for p in corners)
                for path in enumerate_paths(sk, w, ones)
            )
            if not stays:
                core.discard(w)
                changed = True
    return core


def alpha_cofinal(sk, a=None):
    """Decide α-cofinality exactly

    For every vertex v the vertices reachable from the orbit of v, closed under the action, form
    R(v). An infinite path avoiding R(v) exists exactly when the complement of R(v) contains a
    nonempty set closed under degree-(1,…,1) steps.

    :param sk: Validated skeleton without sources
    :type sk: Skeleton
    :param a: Action, or None for plain cofinality
    :type a: ZlAction
    :return: Decision with the first offending vertex and the avoiding set
    :rtype: CofinalityResult
    """
    require_dynamics(sk)
    reach = _reachability(sk, a)
    for v in sorted(sk.vertices):
        core = _avoiding_core(sk, set(sk.vertices) - reach[v])
        if core:
            logger.info("Infinite paths from %s avoid the orbit closure of %s", sorted(core), v)
            return CofinalityResult(False, v, tuple(sorted(core)))
    return CofinalityResult(True)


def cofinal(sk):
    """Plain cofinality of a k-graph"""
    return alpha_cofinal(sk, None)


def bounded_pairs(k, pair_bound):
    """Unordered pairs p < q of degrees with coordinate sum at most ``pair_bound``"""
    degrees = [n for n in degrees_up_to((pair_bound,) * k) if sum(n) <= pair_bound]
    return list(itertools.combinations(sorted(degrees, key=lambda n: (sum(n), n)), 2))


def _prefixes(sk, v, depth, cylinder):
    top = (depth,) * sk.k
    if cylinder is None:
        return enumerate_paths(sk, v, top)
    if not leq(cylinder.degree, top):
        return []
    rests = enumerate_paths(sk, cylinder.source, sub(top, cylinder.degree))
    return [compose(cylinder, rest) for rest in rests]


def _separate(sk, v, p, q, depth, cylinder=None):
    """Search prefixes of growing depth for one where σ^p and σ^q disagree

    :return: ``(witness, examined)``; witness is None when every examined prefix agrees
    """
    corner = join(p, q)
    examined = False
    for d in range(max(corner), depth + 1):
        overlap = sub((d,) * sk.k, corner)
        for prefix in _prefixes(sk, v, d, cylinder):
            # Agreement on bare vertices says nothing about periodicity
            examined = examined or any(overlap)
            left = segment(prefix, p, tuple(a + b for a, b in zip(p, overlap)))
            right = segment(prefix, q, tuple(a + b for a, b in zip(q, overlap)))
            if (left.range, left.word) != (right.range, right.word):
                return Witness(v, (p, q), prefix.word, d), True
    return None, examined


def _fast_path(sk, a, depth):
    """For l >= 1 on a finite skeleton α_{N e_1} is the identity, so σ^0 and α^∞_{N e_1} agree"""
    order = action_order(a)
    total = sk.k + a.l
    first = zero(total)
    second = tuple(order if i == sk.k + 1 else 0 for i in range(1, total + 1))
    logger.info("Action has order %d, so ((0),(N e_1)) is a periodic pair", order)
    return AperiodicityResult(
        Aperiodicity.PERIODIC, depth, sorted(sk.vertices)[0], (first, second)
    )


def _bounded_search(sk, pair_bound, depth, cylinders):
    witnesses = []
    undecided = False
    for v in sorted(sk.vertices):
        for p, q in bounded_pairs(sk.k, pair_bound):
            for cylinder in cylinders(v):
                witness, examined = _separate(sk, v, p, q, depth, cylinder)
                if witness:
                    witnesses.append(witness)
                elif examined:
                    logger.info("Every depth-%d prefix at %s agrees on %s, %s", depth, v, p, q)
                    return AperiodicityResult(Aperiodicity.PERIODIC, depth, v, (p, q))
                else:
                    undecided = True
    if undecided:
        logger.warning("Depth %d is too small for some pairs of size %d", depth, pair_bound)
        return AperiodicityResult(Aperiodicity.UNDECIDED, depth)
    return AperiodicityResult(Aperiodicity.WITNESSED, depth, witnesses=tuple(witnesses))


def local_periodicity(sk, pair_bound, depth):
    """Bounded search for local periodicity of a plain k-graph"""
    require_dynamics(sk)
    return _bounded_search(sk, pair_bound, depth, lambda v: [None])


def alpha_aperiodic_bounded(sk, a, pair_bound, depth):
    """Bounded semi-decision of α-aperiodicity

    With l >= 1 the answer on a finite skeleton is always a periodic pair. Without an action every
    vertex and every pair p ≠ q with |p|, |q| <= ``pair_bound`` is searched for a prefix of depth at
    most ``depth`` separating σ^p from σ^q; witnesses are the first found in order of depth, then
    edge word.

    :param sk: Validated skeleton without sources
    :type sk: Skeleton
    :param a: Action, or None
    :type a: ZlAction
    :param pair_bound: Largest |p| and |q|
    :type pair_bound: int
    :param depth: Largest prefix degree (d, …, d)
    :type depth: int
    :return: Three-way answer
    :rtype: AperiodicityResult
    """
    require_dynamics(sk)
    if a is not None and a.l >= 1:
        return _fast_path(sk, a, depth)
    return local_periodicity(sk, pair_bound, depth)


def _agree(first, second):
    """Periodic against witnessed is the only disagreement; undecided matches anything"""
    statuses = {first.status, second.status}
    return statuses != {Aperiodicity.PERIODIC, Aperiodicity.WITNESSED}


def crossed_graph_equivalence_check(sk, a, depth, pair_bound=3):
    """Compare the α-checks on Λ with the plain checks on Λ ×_α Z^l

    :param sk: Validated skeleton without sources
    :type sk: Skeleton
    :param a: Validated action
    :type a: ZlAction
    :param depth: Prefix depth for the periodicity searches
    :type depth: int
    :param pair_bound: Largest |p| and |q|
    :type pair_bound: int
    :return: Whether both sides agree on cofinality and on periodicity
    :rtype: bool
    """
    product = crossed_product(sk, a).skeleton
    same_cofinality = bool(alpha_cofinal(sk, a)) == bool(cofinal(product))
    same_periodicity = _agree(
        alpha_aperiodic_bounded(sk, a, pair_bound, depth),
        local_periodicity(product, pair_bound, depth),
    )
    if not (same_cofinality and same_periodicity):
        logger.warning("Base and crossed-product diagnostics disagree")
    return same_cofinality and same_periodicity


@dataclass(frozen=True)
class CStarView:
    topologically_free: AperiodicityResult
    irreducible: bool

    def to_dict(self):
        return {
            "topologically_free": self.topologically_free.to_dict(),
            "irreducible": self.irreducible,
        }


def cstar_view(sk, a, pair_bound, depth):
    """Dynamical reformulation: topological freeness and irreducibility of the path-space action

    Freeness asks for a separating extension inside every cylinder of degree at most (1,…,1).

    :param sk: Validated skeleton without sources or sinks
    :type sk: Skeleton
    :param a: Action, or None
    :type a: ZlAction
    :param pair_bound: Largest |p| and |q|
    :type pair_bound: int
    :param depth: Prefix depth
    :type depth: int
    :return: The two properties
    :rtype: CStarView
    """
    require_dynamics(sk, sinks=True)
    if a is not None and a.l >= 1:
        freeness = _fast_path(sk, a, depth)
    else:
        ones = (1,) * sk.k

        def cylinders(v):
            return [path for n in degrees_up_to(ones) for path in enumerate_paths(sk, v, n)]

        freeness = _bounded_search(sk, pair_bound, depth, cylinders)
    return CStarView(freeness, bool(alpha_cofinal(sk, a)))


def simplicity(sk, a, pair_bound, depth):
    """Full simplicity report for C*(Λ) ⋊ Z^l (or C*(Λ) when ``a`` is None)

    :param sk: Validated skeleton without sources
    :type sk: Skeleton
    :param a: Action, or None
    :type a: ZlAction
    :param pair_bound: Largest |p| and |q|
    :type pair_bound: int
    :param depth: Prefix depth
    :type depth: int
    :return: Report with cofinality, aperiodicity and the verdict
    :rtype: SimplicityReport
    """
    notes = []
    aperiodicity = alpha_aperiodic_bounded(sk, a, pair_bound, depth)
    if a is not None and a.l >= 1:
        notes.append("finite action: every generator has finite order, so a periodic pair exists")
    elif aperiodicity.status is Aperiodicity.PERIODIC:
        notes.append(
            f"periodicity observed up to depth {depth}; exact only for deterministic paths"
        )
    return SimplicityReport(alpha_cofinal(sk, a), aperiodicity, tuple(notes))
