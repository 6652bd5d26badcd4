from kgraph.models.actions import Automorphism, ZlAction
from kgraph.models.alignment import MceSet
from kgraph.models.constructions import Cocycle, CrossedProductResult
from kgraph.models.dynamics import SimplicityReport
from kgraph.models.gallery import GALLERY, GalleryInstance
from kgraph.models.ktheory import FGAbelianGroup, KTheoryReport
from kgraph.models.skeleton import Edge, Path, Skeleton, Square, ValidationReport

__all__ = [
    "Automorphism",
    "Cocycle",
    "CrossedProductResult",
    "Edge",
    "FGAbelianGroup",
    "GALLERY",
    "GalleryInstance",
    "KTheoryReport",
    "MceSet",
    "Path",
    "SimplicityReport",
    "Skeleton",
    "Square",
    "ValidationReport",
    "ZlAction",
]
