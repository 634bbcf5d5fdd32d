"""Restriction exponents for degenerate hypersurfaces via the r-height of a phase.

The exact layer (``poly``, ``newton``, ``exponents``) works in rational arithmetic; the
numerical layer (``quadrature``, ``lemmas``) estimates oscillatory integrals and checks
uniform bounds on parameter grids.
"""

__version__ = "0.1.0"

from .poly import PuiseuxPoly, parse_poly, render_poly  # noqa: E402
from .exponents import classify, family_member, hr_closed_form  # noqa: E402

__all__ = ["PuiseuxPoly", "parse_poly", "render_poly", "classify", "family_member", "hr_closed_form", "__version__"]
