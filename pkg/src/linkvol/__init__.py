"""Upper bounds on hyperbolic volumes of link complements from planar diagrams."""

from .bounds import BoundName, BoundReport, best_bound, evaluate_diagram
from .diagram import LinkDiagram, compute_faces, parse_pd
from .geometry import V_OCT, V_TET, lobachevsky, regular_bipyramid_volume

__all__ = [
    "BoundName",
    "BoundReport",
    "LinkDiagram",
    "V_OCT",
    "V_TET",
    "best_bound",
    "compute_faces",
    "evaluate_diagram",
    "lobachevsky",
    "parse_pd",
    "regular_bipyramid_volume",
]
