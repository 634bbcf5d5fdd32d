"""Desk-scale numerical checks of the quantitative lemmas.

A claim of the form ``|Q(p)| <= C * bound(p)`` uniformly in ``p`` is measured
as ``ratio(p) = |Q(p)| / bound(p)`` over a finite grid.  Grid points are
grouped into dyadic blocks of their main scale parameter; the verdict is
``stable`` when the sup over the top block is at most ``1.2`` times the sup
over the block below it, and ``growing`` otherwise.  A finite grid cannot
certify uniformity, so stability is the honest surrogate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .cutoff import CutoffSpec
from .exponents import DeltaTilde, rho
from .newton import (
    newton_distance,
    newton_polyhedron,
    principal_face,
    principal_weight,
)
from .poly import PuiseuxPoly, exact_power
from .quadrature import (
    DEFAULT,
    DecayFit,
    OscIntegralSpec,
    PhaseDescriptor,
    QuadConfig,
    QuadratureBudgetExceeded,
    decay_fit,
    integrate_abs_1d,
    integrate_graded,
    integrate_panels,
    integrate_osc_2d,
)

STABILITY_FACTOR = 1.2


@dataclass(frozen=True)
class LemmaConfig:
    L: float = 16.0
    M: float = 8.0
    delta0: float = 0.1
    eps_amp: float = 0.3
    tol: float = 1e-6
    quad: QuadConfig = DEFAULT


@dataclass
class GridPoint:
    params: dict
    level: int
    value: float
    bound: float

    @property
    def ratio(self) -> float:
        return self.value / self.bound if self.bound > 0 else 0.0


@dataclass
class BoundCheck:
    lemma_id: str
    parameter_grid: list[dict]
    ratio_sup: float
    ratio_argmax: tuple
    verdict: str  # stable | growing | inconclusive
    block_sups: dict[int, float] = field(default_factory=dict)
    points: list[GridPoint] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)

    @property
    def stable(self) -> bool:
        return self.verdict == "stable"

    def trend(self, last: int = 4) -> Optional[float]:
        """Least-squares slope of ``log2`` block sup against level over the top ``last`` blocks.

        The verdict only compares two blocks; a slow drift (a logarithmic loss, say) shows up here.
        """
        lv = sorted(k for k, v in self.block_sups.items() if v > 0)[-last:]
        if len(lv) < 3:
            return None
        y = np.log2([self.block_sups[k] for k in lv])
        return float(np.polyfit(np.asarray(lv, dtype=float), y, 1)[0])

    def rows(self) -> list[dict]:
        out = []
        for p in self.points:
            row = {"lemma_id": self.lemma_id, "level": p.level}
            row.update(p.params)
            row.update({"value": p.value, "bound": p.bound, "ratio": p.ratio})
            out.append(row)
        return out

    def summary(self) -> dict:
        return {
            "lemma_id": self.lemma_id,
            "ratio_sup": self.ratio_sup,
            "ratio_argmax": list(self.ratio_argmax),
            "verdict": self.verdict,
            "block_sups": {str(k): v for k, v in sorted(self.block_sups.items())},
            "trend_log2_per_level": self.trend(),
            "n_points": len(self.points),
            "n_skipped": len(self.skipped),
            "skipped": self.skipped,
            "failures": self.failures,
        }


def finish(lemma_id: str, points: list[GridPoint], skipped=(), failures=()) -> BoundCheck:
    """Assemble a :class:`BoundCheck` and decide the verdict from the two top blocks."""
    blocks: dict[int, float] = {}
    for p in points:
        blocks[p.level] = max(blocks.get(p.level, 0.0), p.ratio)
    if points:
        best = max(points, key=lambda p: p.ratio)
        sup, argmax = best.ratio, tuple(sorted(best.params.items()))
    else:
        sup, argmax = 0.0, ()
    levels = sorted(blocks)
    if failures:
        verdict = "inconclusive"
    elif len(levels) < 2:
        verdict = "inconclusive"
    else:
        top, prev = blocks[levels[-1]], blocks[levels[-2]]
        verdict = "stable" if top <= STABILITY_FACTOR * prev else "growing"
    return BoundCheck(
        lemma_id=lemma_id,
        parameter_grid=[p.params for p in points],
        ratio_sup=sup,
        ratio_argmax=argmax,
        verdict=verdict,
        block_sups=blocks,
        points=list(points),
        skipped=list(skipped),
        failures=list(failures),
    )


# ---------------------------------------------------------------------------
# absolute integrals I_eps(A, B, T) and I(A, B)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class As1Model:
    """``b(y1, u) = b0 + b1*u + b2*sin(y1)``, ``Q(u) = q*u``, ``r1 = c1*sin``, ``r2 = c2*cos``."""

    b0: float = 1.0
    b1: float = 0.1
    b2: float = 0.05
    q: float = 0.2
    c1: float = 0.3
    c2: float = 0.3
    N: int = 4

    @staticmethod
    def constant() -> "As1Model":
        return As1Model(b0=1.0, b1=0.0, b2=0.0, q=0.0, c1=0.0, c2=0.0)

    @property
    def y1_free(self) -> bool:
        return self.b2 == 0 and self.c1 == 0 and self.c2 == 0

    def coeffs(self, A: float, B: float, T: float, y1: float) -> np.ndarray:
        """Coefficients (highest first) of the inner argument as a polynomial in ``y2``."""
        bb = self.b0 + self.b2 * math.sin(y1)
        r1 = self.c1 * math.sin(y1)
        r2 = self.c2 * math.cos(y1)
        # A - (B + q y2/T) y2 - (bb + b1 y2/T) y2^3 + r1 + (y2/T) r2
        return np.array([-self.b1 / T, -bb, -self.q / T, -B + r2 / T, A + r1])


def _real_roots(c: np.ndarray, lo: float, hi: float) -> list[float]:
    c = np.trim_zeros(c, "f")
    if len(c) < 2:
        return []
    r = np.roots(c)
    return sorted(float(z.real) for z in r if abs(z.imag) <= 1e-7 * (1 + abs(z)) and lo < z.real < hi)


def _batched_real_roots(polys: np.ndarray, lo: float, hi: float) -> list[float]:
    """Real roots in ``(lo, hi)`` of several polynomials of one degree (rows, highest first)."""
    lead = polys[:, 0]
    if np.any(lead == 0):
        return [r for c in polys for r in _real_roots(c, lo, hi)]
    n = polys.shape[1] - 1
    comp = np.zeros((len(polys), n, n))
    comp[:, 0, :] = -polys[:, 1:] / lead[:, None]
    comp[:, np.arange(1, n), np.arange(n - 1)] = 1.0
    z = np.linalg.eigvals(comp).ravel()
    keep = (np.abs(z.imag) <= 1e-7 * (1 + np.abs(z))) & (z.real > lo) & (z.real < hi)
    return z.real[keep].tolist()


def _level_points(c: np.ndarray, lo: float, hi: float, levels=(1.0, 4.0)) -> list[float]:
    """Roots of ``g``, ``g'`` and ``g = +-v``: where ``(1 + |g|)^-N`` or ``rho(g)`` changes scale."""
    c = np.trim_zeros(np.asarray(c, dtype=float), "f")
    shifts = [0.0] + [sgn * v for v in levels for sgn in (1.0, -1.0)]
    polys = np.repeat(c[None, :], len(shifts), axis=0)
    polys[:, -1] -= shifts
    return _batched_real_roots(polys, lo, hi) + _real_roots(np.polyder(c), lo, hi)


def periodized_weight(theta: np.ndarray, N: int, K: int = 4000) -> np.ndarray:
    """``W(theta) = sum_k (1 + |theta + 2 pi k|)^(-N)``; the neglected tail is below ``2 (2 pi K)^(1-N)/(N-1)``."""
    k = np.arange(-K, K + 1)
    return np.sum((1.0 + np.abs(theta[:, None] + 2 * math.pi * k[None, :])) ** (-N), axis=1)


def as1_integral(A: float, B: float, T: float, eps: float, model: As1Model = As1Model(),
                 tol: float = 1e-6, outer_tol: float = 1e-3) -> float:
    """``I_eps(A, B, T)``.

    The model depends on ``y1`` only through ``sin`` and ``cos``, so the ``y1`` integral folds onto
    one period against the periodized weight and is integrated over ``[0, 2 pi]`` (the
    weight's only kink sits at the endpoints).
    """
    N = model.N

    def inner(y1: float) -> float:
        c = model.coeffs(A, B, T, y1)
        pts = [-T, 0.0, T, *_level_points(c, -T, T)]
        f = lambda y2: (1.0 + np.abs(np.polyval(c, y2))) ** (-N) * np.abs(y2) ** eps
        return integrate_graded(f, pts, tol, order=10, levels=16)

    if model.y1_free:
        return inner(0.0) * 2.0 / (N - 1)
    # roots can turn complex as y1 moves, which leaves square-root kinks in the outer integrand
    outer = lambda th: inner(th) * float(periodized_weight(np.array([th]), N)[0])
    # exact folds sit at y1 = 0 mod 2 pi, where b and r1 are frozen; grade toward 0, pi, 2 pi
    return integrate_panels(outer, (0.0, math.pi, 2 * math.pi), outer_tol)


def as1_bound(A: float, B: float, eps: float) -> float:
    return max(abs(A) ** (1 / 3), abs(B) ** 0.5) ** (eps - 0.5)


def _gauss(x: np.ndarray) -> np.ndarray:
    return np.exp(-x * x)


def as2_integral(A: float, B: float, T: float, delta: float, b_coeffs: Sequence[float] = (1.0, 0.5),
                 rho_fn: Callable[[np.ndarray], np.ndarray] = _gauss, tol: float = 1e-8) -> float:
    """``∫ |rho(A + B y + b(delta y) y^3)| chi0(y/T) dy``.

    ``b(u) = sum_k b_coeffs[k] u^k`` and ``chi0`` is the radius-1 bump, so the argument is a
    polynomial in ``y``; its real roots and critical points become breakpoints of a graded rule.
    """
    chi = CutoffSpec("bump", 0.0, 1.0)
    low_first = [A, B, 0.0] + [bk * delta**k for k, bk in enumerate(b_coeffs)]
    c = np.array(low_first[::-1])
    pts = [-T, -T / 2, T / 2, T, *_level_points(c, -T, T)]
    f = lambda y: np.abs(rho_fn(np.polyval(c, y))) * chi(y / T)
    return integrate_graded(f, pts, tol, levels=24)


def as2_fold(c: float, delta: float) -> tuple[float, float]:
    """``(A, B)`` with a double root of ``A + B y + (1 + delta y / 2) y^3`` at ``y = c``."""
    B = -3 * c**2 - 2 * delta * c**3
    A = -B * c - c**3 - 0.5 * delta * c**4
    return A, B


def as2_bound(A: float, B: float) -> float:
    return (1.0 + max(abs(A) ** (1 / 3), abs(B) ** 0.5)) ** (-0.5)


def as1_fold(c: float, T: float, model: As1Model = As1Model()) -> tuple[float, float]:
    """``(A, B)`` for which the argument at ``y1 = 0`` has a double root at ``y2 = c``."""
    q, b0, b1, c2 = model.q / T, model.b0, model.b1 / T, model.c2 / T
    B = c2 - 2 * q * c - 3 * b0 * c**2 - 4 * b1 * c**3
    A = B * c - c2 * c + q * c**2 + b0 * c**3 + b1 * c**4
    return A, B


def _as1_grid(T: float, model: As1Model = As1Model()) -> list[tuple[float, float, str]]:
    pts = []
    for a in (0.0, T**3, -T**3 / 8):
        for b in (0.0, T**2, -T**2 / 4):
            pts.append((a, b, "corner"))
    for c in (T / 2, -T / 2, T / 4):
        A, B = as1_fold(c, T, model)
        pts.append((A, B, "fold"))
    return pts


def check_as1(cfg: LemmaConfig = LemmaConfig(), T_levels: Sequence[int] = range(4, 9),
              eps_values: Sequence[float] = (0.0, 0.25), model: As1Model = As1Model(),
              precomputed: Optional[list[GridPoint]] = None) -> BoundCheck:
    """``I_eps(A,B,T) <= C max{|A|^(1/3), |B|^(1/2)}^(eps - 1/2)`` under the admissibility constraints."""
    pts, skipped, failures = [], [], []
    if precomputed is not None:
        for p in precomputed:
            if max(abs(p.params["A"]), abs(p.params["B"])) >= cfg.L and p.params["T"] >= cfg.L:
                pts.append(p)
            else:
                skipped.append(dict(p.params, reason="max{|A|,|B|} < L or T < L"))
        return finish("as1", pts, skipped)
    for k in T_levels:
        T = 2.0**k
        for A, B, kind in _as1_grid(T, model):
            for eps in eps_values:
                params = {"A": A, "B": B, "T": T, "eps": eps, "kind": kind}
                if not (max(abs(A), abs(B)) >= cfg.L and T >= cfg.L):
                    skipped.append(dict(params, reason="max{|A|,|B|} < L or T < L"))
                    continue
                if abs(A) > T**3 or abs(B) > T**2:
                    skipped.append(dict(params, reason="|A| > T^3 or |B| > T^2"))
                    continue
                try:
                    v = as1_integral(A, B, T, eps, model, cfg.tol)
                except QuadratureBudgetExceeded as exc:
                    failures.append(dict(params, error=str(exc)))
                    continue
                pts.append(GridPoint(params, k, v, as1_bound(A, B, eps)))
    return finish("as1", pts, skipped, failures)


def check_as2(cfg: LemmaConfig = LemmaConfig(), T_levels: Sequence[int] = range(4, 9),
              delta_factors: Sequence[float] = (1.0, 0.25), precomputed: Optional[list[GridPoint]] = None) -> BoundCheck:
    """``I(A,B) <= C (1 + max{|A|^(1/3), |B|^(1/2)})^(-1/2)`` for ``delta*T <= delta0``, ``T >= L``."""
    pts, skipped, failures = [], [], []
    if precomputed is not None:
        for p in precomputed:
            if p.params["T"] >= cfg.L:
                pts.append(p)
            else:
                skipped.append(dict(p.params, reason="T < L"))
        return finish("as2", pts, skipped)
    for k in T_levels:
        T = 2.0**k
        for fct in delta_factors:
            delta = fct * cfg.delta0 / T
            grid = [(a, b, "corner") for a in (0.0, T**3, -T**3 / 8) for b in (0.0, T**2, -T**2 / 4)]
            grid += [(*as2_fold(c, delta), "fold") for c in (T / 2, -T / 2, T / 4)]
            big = T**2 / cfg.delta0**2
            grid += [(0.0, 2 * big, "ibp"), (0.0, -2 * big, "ibp"), (T**3, 2 * big, "ibp")]
            for A, B, kind in grid:
                params = {"A": A, "B": B, "T": T, "delta": delta, "kind": kind}
                if not (delta < 1 and delta * T <= cfg.delta0 and T >= cfg.L):
                    skipped.append(dict(params, reason="delta*T > delta0 or T < L"))
                    continue
                try:
                    v = as2_integral(A, B, T, delta, tol=cfg.tol * 1e-2)
                except QuadratureBudgetExceeded as exc:
                    failures.append(dict(params, error=str(exc)))
                    continue
                pts.append(GridPoint(params, k, v, as2_bound(A, B)))
    return finish("as2", pts, skipped, failures)


# ---------------------------------------------------------------------------
# uniform Airy / D4 estimates
# ---------------------------------------------------------------------------

def _directions(B: int) -> list[dict]:
    """Unit-scale coefficient patterns; ``d0`` present means case D."""
    if B == 4:
        nd = [
            {"B1": 1.0}, {"B1": -1.0}, {"d30": 1.0}, {"d30": -1.0}, {"d4": 1.0}, {"d4": -1.0},
            {"B1": -1.0, "d30": 1.0, "d4": -1.0}, {"B1": 1.0, "d30": -1.0, "d4": 1.0},
        ]
        d = [{"d0": 1.0}, {"d0": 1.0, "B1": -1.0}, {"d0": 1.0, "B1": 1.0},
             {"d0": 1.0, "d4": -1.0}, {"d0": 1.0, "d30": 0.01}]
        return nd + d
    if B == 3:
        nd = [{"B1": 1.0}, {"B1": -1.0}, {"d30": 1.0}, {"d30": -1.0},
              {"B1": -1.0, "d30": -1.0}, {"B1": 1.0, "d30": 1.0}, {"B1": -1.0, "d30": 1.0}]
        d = [{"d0": 0.4, "B1": -1.0}, {"d0": 0.4, "d30": -1.0}, {"d0": 0.4, "B1": 1.0, "d30": 1.0},
             {"d0": 1.0}]  # the last one violates rho~ >= M delta0^3 and is filtered
        return nd + d
    raise ValueError("only B = 3 and B = 4 are modelled")


def _scaled(B: int, direction: dict, r: float) -> dict:
    """Duistermaat scaling: ``B1 -> r^(2/3) B1``, ``d30 -> r^((B-1)/B)``, ``d4 -> r^(1/2)``, ``d0 -> r^((2B-3)/(3B))``."""
    out = {"B1": 0.0, "d30": 0.0, "d4": 0.0, "d0": 0.0}
    out["B1"] = direction.get("B1", 0.0) * r ** (2 / 3)
    out["d30"] = direction.get("d30", 0.0) * r ** ((B - 1) / B)
    out["d4"] = direction.get("d4", 0.0) * r ** 0.5
    out["d0"] = direction.get("d0", 0.0) * r ** ((2 * B - 3) / (3 * B))
    return out


def rho_tilde(B: int, c: dict) -> float:
    branch = "D" if c["d0"] != 0 else "ND"
    higher = (c["d4"],) if B == 4 else ()
    dt = DeltaTilde(B, branch, c["d30"], higher, c["d0"] if branch == "D" else None)
    return float(rho(dt).value) + abs(c["B1"]) ** 1.5


def duistermaat_J(B: int, c: dict, lam: float, cfg: LemmaConfig = LemmaConfig()) -> complex:
    higher = (c["d4"],) if B == 4 else ()
    ph = PhaseDescriptor.full_sharp(B, B1=c["B1"], d30=c["d30"], d0=c["d0"], higher=higher)
    amp = CutoffSpec("bump", 0.0, cfg.eps_amp)
    spec = OscIntegralSpec(ph, amp, amp)
    return integrate_osc_2d(spec, lam, cfg.quad)


def duistermaat_bound(B: int, rt: float, lam: float) -> float:
    if B == 4:
        return rt ** (-1 / 12) * lam ** (-2 / 3)
    return rt ** (-1 / 6) * lam ** (-5 / 6)


def check_duistermaat_uniform(B: int, cfg: LemmaConfig = LemmaConfig(), lam_levels: Sequence[int] = range(4, 13),
                              r_levels: Sequence[int] = range(0, 15, 2),
                              r_levels_d: Sequence[int] = (0, 4, 8, 12),
                              directions: Optional[Sequence[dict]] = None) -> BoundCheck:
    """``|J| rho~^(1/12) lambda^(2/3)`` (B = 4) or ``|J| rho~^(1/6) lambda^(5/6)`` (B = 3), sup over the grid.

    For B = 3 every point must satisfy ``rho~ >= M delta0^3``; violators are skipped and reported.
    ``delta0`` here is the coefficient of ``x1 x2``.
    """
    pts, skipped, failures = [], [], []
    for direction in (_directions(B) if directions is None else directions):
        is_d = "d0" in direction
        for j in (r_levels_d if is_d else r_levels):
            c = _scaled(B, direction, 2.0 ** (-j))
            rt = rho_tilde(B, c)
            base = dict(c, r_level=j)
            if B == 3 and is_d and rt < cfg.M * abs(c["d0"]) ** 3:
                skipped.append(dict(base, reason="rho~ < M delta0^3"))
                continue
            for k in lam_levels:
                lam = 2.0**k
                params = dict(base, **{"lambda": lam})
                try:
                    v = abs(duistermaat_J(B, c, lam, cfg))
                except QuadratureBudgetExceeded as exc:
                    failures.append(dict(params, error=str(exc)))
                    continue
                pts.append(GridPoint(params, k, v, duistermaat_bound(B, rt, lam)))
    return finish(f"duistermaat_B{B}", pts, skipped, failures)


# ---------------------------------------------------------------------------
# the D4 counterexample
# ---------------------------------------------------------------------------

def counterexample_transformed(delta) -> PuiseuxPoly:
    """``z1^2 z2 + ((z2 - z1) / (3 (2 delta)^(1/3)))^4`` exactly; ``2*delta`` must be a rational cube."""
    k = exact_power(Fraction(2) * Fraction(delta), Fraction(1, 3))
    z1 = PuiseuxPoly.monomial(1, 0)
    z2 = PuiseuxPoly.monomial(0, 1)
    return z1 * z1 * z2 + ((z2 - z1) * PuiseuxPoly.constant(1 / (3 * k))) ** 4


def counterexample_geometry(delta=Fraction(1, 2)) -> dict:
    p = counterexample_transformed(delta)
    np_ = newton_polyhedron(p)
    face = principal_face(np_)
    return {"poly": p, "face": face.geometry, "kappa": principal_weight(face), "d": newton_distance(np_)}


@dataclass
class CounterexampleResult:
    delta: float
    fit: DecayFit
    slope_ok: bool
    violates_two_thirds: bool

    @property
    def passed(self) -> bool:
        return self.slope_ok and self.violates_two_thirds


def check_counterexample(deltas: Sequence[float] = (0.1,), lam_min_exp: int = 8, lam_max_exp: int = 16,
                         amp_radius: float = 0.3, cfg: QuadConfig = DEFAULT) -> list[CounterexampleResult]:
    """Fit ``log|J|`` for the perturbed phase; the slope should be near ``-5/8`` and clearly above ``-2/3``.

    The amplitude is a product bump around the origin containing the degenerate critical point
    ``(0, delta)`` and excluding the non-degenerate one.
    """
    out = []
    for delta in deltas:
        if not 0 < delta <= 0.3:
            raise ValueError("delta must lie in (0, 0.3]")
        amp = CutoffSpec("bump", 0.0, amp_radius)
        spec = OscIntegralSpec(PhaseDescriptor.d4_counterexample(delta), amp, amp,
                               tuple(2.0**k for k in range(lam_min_exp, lam_max_exp + 1)))
        fit = decay_fit(spec, cfg)
        out.append(CounterexampleResult(delta, fit, abs(fit.slope + 5 / 8) <= 0.05, fit.slope > -2 / 3 + 0.02))
    return out


# ---------------------------------------------------------------------------
# summation lemmas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OscSumCase:
    """``F(t) = sum_{l=0}^M 2^(i alpha l t) (H chi_Q)(2^(beta_k l) a_k)``."""

    H: Callable[[np.ndarray], np.ndarray]  # takes shape (n, m), returns shape (m,)
    grad: Callable[[np.ndarray], np.ndarray]  # shape (n, m) -> (n, m)
    R: tuple[float, ...]
    alpha: float
    beta: tuple[float, ...]
    a: tuple[float, ...]
    eps: float = 1.0

    def values(self, M: int) -> np.ndarray:
        l = np.arange(M + 1)
        u = np.array([ak * 2.0 ** (bk * l) for ak, bk in zip(self.a, self.beta)])
        inside = np.all(np.abs(u) <= np.array(self.R)[:, None], axis=0)
        h = np.zeros(M + 1)
        if inside.any():
            h[inside] = self.H(u[:, inside])
        return h

    def F(self, t: np.ndarray, M: int) -> np.ndarray:
        h = self.values(M)
        l = np.arange(M + 1)
        ph = np.exp(1j * self.alpha * math.log(2) * np.outer(np.asarray(t, dtype=float), l))
        return ph @ h

    def constants(self, samples: int = 41, s_nodes: int = 64) -> tuple[float, list[float]]:
        """``|H(0)|`` and grid estimates of the smallest admissible ``C_k``."""
        n = len(self.R)
        axes = [np.linspace(-r, r, samples) for r in self.R]
        grid = np.array([g.ravel() for g in np.meshgrid(*axes, indexing="ij")])
        s, w = np.polynomial.legendre.leggauss(s_nodes)
        s = 0.5 * (s + 1)
        w = 0.5 * w
        acc = np.zeros((n, grid.shape[1]))
        for sj, wj in zip(s, w):
            acc += wj * np.abs(self.grad(sj * grid))
        Ck = []
        for k in range(n):
            uk = np.abs(grid[k])
            with np.errstate(divide="ignore"):
                scale = np.where(uk > 0, uk ** (1 - self.eps), 0.0 if self.eps == 1 else np.inf)
            val = acc[k] * np.where(uk > 0, scale, 1.0 if self.eps == 1 else 0.0)
            Ck.append(float(np.max(val)))
        H0 = float(abs(self.H(np.zeros((n, 1)))[0]))
        return H0, Ck


def check_osc_sum(case: OscSumCase, M_levels: Sequence[int] = range(4, 11), t_grid: Optional[np.ndarray] = None,
                  min_gap: float = 1e-3, lemma_id: str = "osc_sum") -> BoundCheck:
    """``|F(t)| |2^(i alpha t) - 1| / (|H(0)| + sum C_k)`` over ``t`` and ``M = 2^k``."""
    if t_grid is None:
        t_grid = np.linspace(0.01, 2 * math.pi / (case.alpha * math.log(2)) - 0.01, 397)
    H0, Ck = case.constants()
    denom = H0 + sum(Ck)
    gap = np.abs(np.exp(1j * case.alpha * math.log(2) * t_grid) - 1)
    keep = gap >= min_gap
    skipped = [{"t": float(t), "reason": "too close to alpha t in 2 pi Z / log 2"} for t in t_grid[~keep]]
    pts = []
    for k in M_levels:
        M = 2**k
        vals = np.abs(case.F(t_grid[keep], M)) * gap[keep]
        for t, v in zip(t_grid[keep], vals):
            pts.append(GridPoint({"t": float(t), "M": M}, k, float(v), denom))
    return finish(lemma_id, pts, skipped)


def geometric_case(alpha: float = 1.0, beta: float = -1.0, a: float = 0.5) -> OscSumCase:
    """``H = 1``: ``F`` is a plain geometric sum when every point stays in ``Q``."""
    return OscSumCase(H=lambda u: np.ones(u.shape[1]), grad=lambda u: np.zeros_like(u),
                      R=(1.0,), alpha=alpha, beta=(beta,), a=(a,))


def linear_case(alpha: float = 1.0, beta: float = 0.5, a: float = 2.0**-20) -> OscSumCase:
    """``H(u) = u1`` on ``[-1, 1]``."""
    return OscSumCase(H=lambda u: u[0], grad=lambda u: np.ones_like(u), R=(1.0,), alpha=alpha, beta=(beta,), a=(a,))


def smooth2_case() -> OscSumCase:
    def H(u):
        return (1 + u[0]) / (1 + u[1] ** 2)

    def grad(u):
        return np.array([1 / (1 + u[1] ** 2), -2 * u[1] * (1 + u[0]) / (1 + u[1] ** 2) ** 2])

    return OscSumCase(H=H, grad=grad, R=(1.0, 2.0), alpha=1.5, beta=(0.7, -0.4), a=(2.0**-15, 1.5))


@dataclass
class DyadicTrial:
    alpha: tuple
    Lambda: list[int]
    exceptional: list[int]
    min_outside: float
    sum_outside: float
    C1: float
    C2: float

    @property
    def ok(self) -> tuple[bool, bool, bool]:
        return (len(self.exceptional) <= self.C1,
                self.min_outside >= 2 / 3 if not math.isnan(self.min_outside) else True,
                self.sum_outside <= self.C2)


def dyadic_constants(beta: Sequence[float]) -> tuple[float, float]:
    n = len(beta)
    gaps = [abs(bk - bl) for bk, bl in itertools.combinations(beta, 2)]
    C1 = math.comb(n, 2) * 4 * max((1 / g for g in gaps), default=0.0)
    C2 = 1.5 * math.factorial(n) * max(1 / (1 - 2.0 ** (-b)) for b in beta)
    return C1, C2


def dyadic_trial(alpha: Sequence[complex], beta: Sequence[float], j_range=(-60, 60)) -> DyadicTrial:
    if len(set(beta)) != len(beta) or any(b <= 0 for b in beta):
        raise ValueError("beta must be positive and pairwise distinct")
    C1, C2 = dyadic_constants(beta)
    js = range(j_range[0], j_range[1] + 1)
    Lam = [j for j in js if max(2.0 ** (b * j) * abs(a) for a, b in zip(alpha, beta)) >= 1]
    nz = [(a, b) for a, b in zip(alpha, beta) if a != 0]
    exc = []
    for j in Lam:
        for (ak, bk), (al, bl) in itertools.combinations(nz, 2):
            if bk < bl:
                ak, bk, al, bl = al, bl, ak, bk
            w = bk - bl
            if abs(j + math.log2(abs(ak / al)) / w) <= 2 / w:
                exc.append(j)
                break
    outside = [j for j in Lam if j not in set(exc)]
    sums = [abs(sum(2.0 ** (b * j) * a for a, b in zip(alpha, beta))) for j in outside]
    return DyadicTrial(tuple(alpha), Lam, exc, min(sums) if sums else float("nan"),
                       math.fsum(1 / s for s in sums), C1, C2)


def check_dyadic_sum_lemma(beta: Sequence[float] = (1.0, 2 / 3, 1 / 3), trials: int = 500, seed: int = 0,
                           j_range=(-60, 60)) -> tuple[BoundCheck, list[DyadicTrial]]:
    """Random ``alpha in [-1, 1]^n``; every trial must satisfy all three assertions."""
    rng = np.random.default_rng(seed)
    results = []
    pts = []
    C1, C2 = dyadic_constants(beta)
    for i in range(trials):
        alpha = tuple(float(x) for x in rng.uniform(-1, 1, len(beta)))
        tr = dyadic_trial(alpha, beta, j_range)
        results.append(tr)
        pts.append(GridPoint({"trial": i, "n_exceptional": len(tr.exceptional)}, 0, tr.sum_outside, C2))
    failed = [i for i, tr in enumerate(results) if not all(tr.ok)]
    chk = finish("dyadic_sum", pts, failures=[{"trial": i} for i in failed])
    chk.verdict = "stable" if not failed else "growing"
    return chk, results


# ---------------------------------------------------------------------------
# the simple one-dimensional integral
# ---------------------------------------------------------------------------

def simple_int(A: float, B: float, D: float, E: float, eps: float, tol: float = 1e-10) -> float:
    """``∫ (1 + max{|A + B v|, |D + E v|})^(-eps) chi0(v) dv`` with a radius-1 bump."""
    chi = CutoffSpec("bump", 0.0, 1.0)
    pts = [-0.5, 0.5]
    if B:
        pts.append(-A / B)
    if E:
        pts.append(-D / E)
    for s in (1.0, -1.0):
        if B - s * E:
            pts.append(-(A - s * D) / (B - s * E))
    f = lambda v: (1 + max(abs(A + B * v), abs(D + E * v))) ** (-eps) * float(chi(v))
    return integrate_abs_1d(f, -1.0, 1.0, tol, pts, limit=1000)


SIMPLE_DIRECTIONS = (
    (1.0, 0.0, 0.0, 0.0),
    (0.0, 1.0, 0.0, 0.0),
    (0.3, -1.0, 0.0, 0.0),
    (0.3, -1.0, -0.3, 1.0),
    (0.0, 0.0, 1.0, 1.0),
    (0.01, 1.0, 0.0, 0.02),
    (-0.5, 1.0, 0.7, -2.0),
    (1.0, 0.0, 0.0, 0.0001),
)


def check_simple_int(eps_values: Sequence[float] = (0.1, 0.5, 1.0), S_levels: Sequence[int] = range(0, 21),
                     directions=SIMPLE_DIRECTIONS) -> BoundCheck:
    """``J <= C max{|A|,|B|,|D|,|E|}^(-eps)``; parameters are ``S * direction`` for dyadic ``S``."""
    pts = []
    for eps in eps_values:
        if not 0 < eps <= 1:
            raise ValueError("eps must lie in (0, 1]")
        for dvec in directions:
            for k in S_levels:
                S = 2.0**k
                A, B, D, E = (S * x for x in dvec)
                big = max(abs(A), abs(B), abs(D), abs(E))
                params = {"A": A, "B": B, "D": D, "E": E, "eps": eps}
                pts.append(GridPoint(params, k, simple_int(A, B, D, E, eps), big ** (-eps)))
    return finish("simple_int", pts)
