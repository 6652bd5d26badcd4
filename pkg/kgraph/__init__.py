from kgraph.kgraph import Workbench
from kgraph.utils.exceptions import KGraphError

__all__ = ["KGraphError", "Workbench"]
