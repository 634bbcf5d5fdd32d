"""Smooth cut-off functions built from the mollifier ``exp(-1/s)``.

All bumps share one transition profile: ``step(s) = f(s) / (f(s) + f(1 - s))`` with
``f(s) = exp(-1/s)`` for ``s > 0``.  It is C-infinity, equals 0 for ``s <= 0`` and 1 for
``s >= 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

MOLLIFIER = "exp(-1/s) smooth step"


def _f(s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(s)
    pos = s > 0
    out[pos] = np.exp(-1.0 / s[pos])
    return out


def smooth_step(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    a = _f(s)
    b = _f(1.0 - s)
    return a / (a + b)


@dataclass(frozen=True)
class CutoffSpec:
    """A one-dimensional cut-off.

    ``bump``: identically 1 on ``|t - center| <= radius/2`` and 0 for ``|t - center| >= radius``.
    ``annulus``: supported in ``1/2 <= |t| <= radius`` (``radius`` plays the role of R > 1),
    identically 1 on ``1 <= |t| <= R/2`` when ``R >= 2``.
    ``indicator``: the sharp characteristic function of ``|t - center| <= radius``.
    """

    kind: Literal["bump", "annulus", "indicator"] = "bump"
    center: float = 0.0
    radius: float = 1.0
    smoothness: str = MOLLIFIER

    def __post_init__(self):
        if self.kind not in ("bump", "annulus", "indicator"):
            raise ValueError(f"unknown cutoff kind {self.kind!r}")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.kind == "annulus" and self.radius <= 1:
            raise ValueError("annulus needs outer radius R > 1")

    def support(self) -> tuple[float, float]:
        """A closed interval containing the support."""
        if self.kind == "annulus":
            return (-self.radius, self.radius)
        return (self.center - self.radius, self.center + self.radius)

    def singular_points(self) -> list[float]:
        """Points where the cutoff is not smooth (quadrature breakpoints)."""
        if self.kind == "indicator":
            return [self.center - self.radius, self.center + self.radius]
        if self.kind == "annulus":
            return [-0.5, 0.5]
        return []

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "indicator":
            return (np.abs(t - self.center) <= self.radius).astype(float)
        if self.kind == "bump":
            u = np.abs(t - self.center) / self.radius  # 1 on u <= 1/2, 0 on u >= 1
            return smooth_step(2.0 * (1.0 - u))
        # annulus: rises on [1/2, 1], falls on [R/2, R]
        r = np.abs(t)
        big = self.radius
        inner = smooth_step(2.0 * (r - 0.5))
        outer = smooth_step((big - r) / (big / 2.0))
        return inner * outer

    def integral(self) -> float:
        """``∫ chi`` in closed form where available, else by quadrature."""
        if self.kind == "indicator":
            return 2.0 * self.radius
        if self.kind == "bump":
            # the ramp is antisymmetric about its midpoint, so each side contributes r/4
            return 1.5 * self.radius
        from scipy.integrate import quad

        val, _ = quad(lambda x: float(self(x)), 0.5, self.radius, limit=200)
        return 2.0 * val
