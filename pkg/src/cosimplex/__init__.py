"""Truncated semi-cosimplicial sets and Hilbert towers.

Subpackages by topic: label combinatorics (labels), set-level structures and
saturation (scs), exact rational cohomology (cohomology), normal labels and
extensions (normal_ext), inner-product towers with labeled subspaces and
symmetric-group generators (tower), spreadable isometry families (spread),
built-in examples (fixtures), JSON formats (io_json) and the command line
(cli).
"""

from .labels import Label, enumerate_labels, is_morphism, join
from .scs import TruncatedSCS, check_saturation, from_ell, prototypical, saturate, validate
from .tower import HilbertTower, from_scs

__all__ = [
    "Label",
    "enumerate_labels",
    "is_morphism",
    "join",
    "TruncatedSCS",
    "check_saturation",
    "from_ell",
    "prototypical",
    "saturate",
    "validate",
    "HilbertTower",
    "from_scs",
]

__version__ = "0.1.0"
