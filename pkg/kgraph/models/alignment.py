import logging
from dataclasses import dataclass
from functools import reduce
from typing import Tuple

from kgraph.models.skeleton import (
    Path,
    add,
    compose,
    enumerate_paths,
    factorize,
    join,
    paths_up_to,
    segment,
    structural_counts,
    sub,
    zero,
)
from kgraph.utils.exceptions import RangeMismatch, SkeletonMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MceSet:
    """Minimal common extensions of μ and ν, with the pairs (ξ, η) such that λ = μξ = νη"""

    pairs: Tuple[Tuple[Path, Tuple[Path, Path]], ...]

    @property
    def extensions(self):
        return [extension for extension, _ in self.pairs]

    def __bool__(self):
        return bool(self.pairs)

    def __len__(self):
        return len(self.pairs)


def mce(mu, nu):
    """Minimal common extensions of two paths

    Paths with different ranges have no common extension, so the result is empty.

    :param mu: Path
    :type mu: Path
    :param nu: Path of the same skeleton
    :type nu: Path
    :return: Extensions λ of degree d(μ) ∨ d(ν), ordered by edge word
    :rtype: MceSet
    """
    sk = mu.skeleton
    if sk is not nu.skeleton and sk != nu.skeleton:
        raise SkeletonMismatch("Cannot compare paths of different skeletons")
    if mu.range != nu.range:
        return MceSet(())
    target = join(mu.degree, nu.degree)
    pairs = []
    for xi in enumerate_paths(sk, mu.source, sub(target, mu.degree)):
        extension = compose(mu, xi)
        if factorize(extension, nu.degree)[0] == nu:
            eta = segment(extension, nu.degree, extension.degree)
            pairs.append((extension, (xi, eta)))
    pairs.sort(key=lambda pair: pair[0].word)
    return MceSet(tuple(pairs))


def is_exhaustive(sk, v, paths):
    """Decide whether every path at ``v`` has a common extension with some member of ``paths``

    Candidate paths are searched up to the join of the degrees in ``paths`` plus one step in
    every colour.

    :param sk: Skeleton
    :type sk: Skeleton
    :param v: Vertex
    :type v: str
    :param paths: Paths with range ``v``
    :type paths: list
    :return: Whether ``paths`` is exhaustive at ``v``
    :rtype: bool
    """
    for nu in paths:
        if nu.range != v:
            raise RangeMismatch(f'Path {nu.word} has range "{nu.range}", not "{v}"')
    if not paths:
        return False
    top = reduce(join, (nu.degree for nu in paths), zero(sk.k))
    bound = add(top, (1,) * sk.k)
    for mu in paths_up_to(sk, v, bound):
        if not any(mce(mu, nu) for nu in paths):
            logger.debug("Path %s at %s extends no member of F", mu.word, v)
            return False
    return True


def structural_flags(sk):
    """Finiteness flags of a finite skeleton

    :param sk: Validated skeleton
    :type sk: Skeleton
    :return: ``finitely_aligned``, ``row_finite``, ``no_sources`` and ``no_sinks``
    :rtype: dict
    """
    flags = structural_counts(sk)
    flags["finitely_aligned"] = flags["row_finite"]
    return flags
