"""rotorlab: an exact-arithmetic laboratory for the piecewise rotation of
the half-open unit square near the quarter-turn.

The package builds the first-return structure of the map on a corner
triangle from closed-form rational vertex data, verifies periods and
symbolic codes by exact orbit iteration, accounts stability-disk areas and
their small-parameter limit, and validates bundled remainder enclosures
with certified interval arithmetic.  See README.md for the tour.
"""

from .exact import Point, Rational, as_rational, format_rational
from .kernel import KERNEL_NAME

__version__ = "0.1.0"

__all__ = ["KERNEL_NAME", "Point", "Rational", "as_rational", "format_rational", "__version__"]
