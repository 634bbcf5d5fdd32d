"""Oscillatory and absolute integrals at desk scale.

1-D oscillatory integrals use composite Gauss-Legendre panels whose widths
follow the local frequency ``lambda * |phi'|``: each panel carries at most one
local wavelength of phase variation and ``order`` (default 16) nodes, so there
are always at least 10 nodes per wavelength.  Every value is recomputed on the
same panels with ``order - 4`` nodes; a disagreement above tolerance halves all
panels and tries again until the node budget runs out, at which point
:class:`QuadratureBudgetExceeded` is raised.  No value is ever returned without
passing that self-check.

2-D integrals use the same construction per axis on a tensor grid, with the
frequency profile of each axis taken as the maximum over the other variable.
Separable phases with a product amplitude go through Fubini automatically.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate as _sint

from .cutoff import CutoffSpec
from .poly import PuiseuxPoly, evaluate_array

ArrayFn = Callable[[np.ndarray], np.ndarray]


class QuadratureBudgetExceeded(RuntimeError):
    """The requested accuracy needs more nodes than the configured budget."""


@dataclass(frozen=True)
class QuadConfig:
    order: int = 16
    tol: float = 1e-10  # relative to the L1 norm of the amplitude
    max_nodes: int = 2**23
    max_nodes_2d: int = 2**28
    waves_per_panel: float = 1.0
    min_panels: int = 32
    profile_samples: int = 8192
    chunk: int = 2**21


DEFAULT = QuadConfig()


@lru_cache(maxsize=None)
def _gl(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _panel_edges(a: float, b: float, phase: ArrayFn, lam: float, cfg: QuadConfig,
                 breakpoints: Sequence[float] = (), refine: int = 0) -> np.ndarray:
    """Panel edges on ``[a, b]`` with at most ``waves_per_panel`` wavelengths of ``lam*phase`` each."""
    pts = sorted({a, b, *[p for p in breakpoints if a < p < b]})
    edges_all = []
    for lo, hi in zip(pts, pts[1:]):
        s = np.linspace(lo, hi, cfg.profile_samples + 1)
        ph = phase(s)
        cum = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(ph)))]) * abs(lam) / (2 * math.pi)
        n_waves = int(math.ceil(cum[-1] / cfg.waves_per_panel))
        levels = np.arange(1, n_waves) * cfg.waves_per_panel
        inner = np.interp(levels, cum, s) if len(levels) else np.empty(0)
        uniform = np.linspace(lo, hi, max(2, int(cfg.min_panels * (hi - lo) / (b - a))) + 1)
        e = np.unique(np.concatenate([inner, uniform]))
        edges_all.append(e)
    edges = np.unique(np.concatenate(edges_all))
    for _ in range(refine):
        mids = 0.5 * (edges[1:] + edges[:-1])
        edges = np.sort(np.concatenate([edges, mids]))
    return edges


def _nodes(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _gl(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _psum(values: np.ndarray) -> complex:
    # numpy add.reduce on a contiguous array is pairwise, hence deterministic
    v = np.ascontiguousarray(values)
    if np.iscomplexobj(v):
        return complex(np.sum(v.real), np.sum(v.imag))
    return float(np.sum(v))


@dataclass
class Quad1DResult:
    value: complex
    nodes: int
    error_estimate: float
    l1_amplitude: float


def integrate_osc_1d(phase: ArrayFn, amplitude, lam: float, cfg: QuadConfig = DEFAULT,
                     support: Optional[tuple[float, float]] = None,
                     breakpoints: Sequence[float] = (), full: bool = False):
    """``∫ exp(i lam phase(t)) a(t) dt`` over the support of ``a``.

    ``amplitude`` is a :class:`CutoffSpec` or any vectorised callable (then ``support`` is required).
    """
    if isinstance(amplitude, CutoffSpec):
        a_fn = amplitude
        lo, hi = amplitude.support() if support is None else support
        breakpoints = list(breakpoints) + amplitude.singular_points()
    else:
        if support is None:
            raise ValueError("support is required for a callable amplitude")
        a_fn = amplitude
        lo, hi = support
    for refine in range(0, 30):
        edges = _panel_edges(lo, hi, phase, lam, cfg, breakpoints, refine)
        n_nodes = (len(edges) - 1) * cfg.order
        if n_nodes > cfg.max_nodes:
            raise QuadratureBudgetExceeded(
                f"1-D integral at lambda={lam:g} needs more than {cfg.max_nodes} nodes"
            )
        vals = []
        for order in (cfg.order, cfg.order - 4):
            t, w = _nodes(edges, order)
            amp = np.asarray(a_fn(t), dtype=float)
            vals.append(_psum(w * amp * np.exp(1j * lam * phase(t))) if lam != 0 else complex(_psum(w * amp)))
            if order == cfg.order:
                l1 = _psum(np.abs(amp) * w)
        val, err = vals[0], abs(vals[0] - vals[1])
        if err <= cfg.tol * max(l1, 1e-300):
            return Quad1DResult(val, n_nodes, err, l1) if full else val
    raise QuadratureBudgetExceeded("1-D refinement did not converge")


# ---------------------------------------------------------------------------
# phase descriptors
# ---------------------------------------------------------------------------

def g_normalizations(n: int, omega0: float = 1.0) -> dict[str, Fraction]:
    """``G_1..G_5`` at 0 with ``alpha(0)`` fixed by ``-2 omega(0) / (n (n-1) alpha(0)) = 1``."""
    om = Fraction(omega0).limit_denominator() if not isinstance(omega0, Fraction) else omega0
    alpha = -2 * om / (n * (n - 1))
    G1 = Fraction(1)
    G2 = Fraction(n * n - n - 2, 2) * alpha
    G3 = Fraction(n * (n - 2)) * alpha
    G4 = Fraction(n * (n - 1) * (n - 2), 6) * alpha
    G5 = G1 * G3 - G2
    return {"alpha": alpha, "G1": G1, "G2": G2, "G3": G3, "G4": G4, "G5": G5}


@dataclass(frozen=True)
class PhaseDescriptor:
    """A model phase.

    kinds and the coefficients they read:

    * ``monomial``: ``x^B`` (1-D; in 2-D the phase is ``x2^B``).
    * ``airy``: ``B3 x^3 - B1 x`` (1-D).
    * ``product``: ``x1^3 + x2^B``.
    * ``full_sharp``: ``x1^3 B3 - x1 B1 + B0 + x2^B b + sum_j d_{j+2} x2^j + d30 x2 + d0 x1 x2``.
    * ``d4_counterexample``: ``x1^3 + y^4 + 4 delta y^3 - 3 (4 delta^2)^(1/3) x1 y^2 + 3 delta^4`` with ``y = x2 - delta``.
    * ``custom_poly``: a :class:`PuiseuxPoly` in ``poly``.
    """

    kind: str
    coeffs: dict = field(default_factory=dict)
    poly: Optional[PuiseuxPoly] = None

    @property
    def dim(self) -> int:
        return 1 if self.kind in ("monomial1d", "airy", "monomial") and self.coeffs.get("dim", 1) == 1 else 2

    # -- constructors -------------------------------------------------------
    @staticmethod
    def monomial(B: int) -> "PhaseDescriptor":
        return PhaseDescriptor("monomial", {"B": B, "dim": 1})

    @staticmethod
    def airy(B1: float = 0.0, B3: float = 1.0) -> "PhaseDescriptor":
        return PhaseDescriptor("airy", {"B1": B1, "B3": B3, "dim": 1})

    @staticmethod
    def product(B: int) -> "PhaseDescriptor":
        return PhaseDescriptor("product", {"B": B})

    @staticmethod
    def full_sharp(B: int, n: int = 9, s1: Optional[float] = None, s2: float = 1.0,
                   B1: Optional[float] = None, d30: float = 0.0, d0: float = 0.0,
                   higher: Sequence[float] = (), b: float = 1.0, B3: Optional[float] = None,
                   omega0: float = 1.0) -> "PhaseDescriptor":
        """Model of the normalised phase at ``delta_1 = 0`` with ``omega``, ``alpha`` constant.

        ``B1`` may be prescribed directly (then ``s1`` is solved for).  ``B3`` defaults to
        ``s2^((n-3)/(n-2)) G4(0)``.
        """
        if len(higher) != max(B - 3, 0):
            raise ValueError(f"need {max(B - 3, 0)} coefficients delta_4..delta_B")
        G = g_normalizations(n, omega0)
        assert G["G1"] == 1
        assert G["G2"] == Fraction(n * n - n - 2, 2) * G["alpha"]
        assert G["G3"] == n * (n - 2) * G["alpha"]
        assert G["G5"] == G["G1"] * G["G3"] - G["G2"] and G["G5"] != 0
        assert -2 * Fraction(omega0).limit_denominator() / (n * (n - 1) * G["alpha"]) == 1
        e = 1.0 / (n - 2)
        if B1 is None:
            s1 = 0.0 if s1 is None else s1
            B1 = -s1 + s2 ** ((n - 1) * e) * float(G["G3"])
        else:
            s1 = s2 ** ((n - 1) * e) * float(G["G3"]) - B1
        B0 = s1 * s2**e * float(G["G1"]) - s2 ** (n * e) * float(G["G2"])
        if B3 is None:
            B3 = s2 ** ((n - 3) * e) * float(G["G4"])
        return PhaseDescriptor("full_sharp", {
            "B": B, "n": n, "s1": s1, "s2": s2, "B0": B0, "B1": B1, "B3": B3, "b": b,
            "d30": d30, "d0": d0, "higher": tuple(higher),
        })

    @staticmethod
    def d4_counterexample(delta: float) -> "PhaseDescriptor":
        return PhaseDescriptor("d4_counterexample", {"delta": delta})

    @staticmethod
    def custom(p: PuiseuxPoly) -> "PhaseDescriptor":
        return PhaseDescriptor("custom_poly", {}, p)

    # -- evaluation ---------------------------------------------------------
    def __call__(self, x1, x2=None):
        c = self.coeffs
        k = self.kind
        if k == "monomial":
            x = x1 if x2 is None else x2
            return np.asarray(x, dtype=float) ** c["B"]
        if k == "airy":
            x = np.asarray(x1, dtype=float)
            return c["B3"] * x**3 - c["B1"] * x
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        if k == "product":
            return x1**3 + x2 ** c["B"]
        if k == "full_sharp":
            return self._f1(x1) + self._f2(x2) + c["d0"] * x1 * x2
        if k == "d4_counterexample":
            d = c["delta"]
            y = x2 - d
            kk = 3.0 * (4.0 * d * d) ** (1.0 / 3.0)
            return x1**3 + y**4 + 4 * d * y**3 - kk * x1 * y**2 + 3 * d**4
        if k == "custom_poly":
            return evaluate_array(self.poly, x1, x2)
        raise ValueError(f"unknown phase kind {k!r}")

    def _f1(self, x1):
        c = self.coeffs
        return c["B3"] * x1**3 - c["B1"] * x1 + c["B0"]

    def _f2(self, x2):
        c = self.coeffs
        B = c["B"]
        out = c["b"] * x2**B + c["d30"] * x2
        for j, dj in enumerate(c["higher"], start=2):
            out = out + dj * x2**j
        return out

    def separable(self) -> Optional[tuple[ArrayFn, ArrayFn]]:
        """``(f1, f2)`` with phase ``f1(x1) + f2(x2)``, or ``None``."""
        k = self.kind
        if k == "product":
            B = self.coeffs["B"]
            return (lambda t: t**3, lambda t: t**B)
        if k == "full_sharp" and self.coeffs["d0"] == 0:
            return (self._f1, self._f2)
        if k == "custom_poly":
            mixed = [e for e, _ in self.poly.items() if e[0] != 0 and e[1] != 0]
            if not mixed:
                p1 = PuiseuxPoly((e, c) for e, c in self.poly.items() if e[1] == 0)
                p2 = PuiseuxPoly((e, c) for e, c in self.poly.items() if e[1] != 0)
                return (lambda t: evaluate_array(p1, t, 0.0), lambda t: evaluate_array(p2, 0.0, t))
        return None


def critical_points_d4(delta: float) -> dict[str, tuple[float, float]]:
    """Degenerate and non-degenerate critical points of the counterexample phase."""
    return {
        "degenerate": (0.0, delta),
        "nondegenerate": (6.0 * 2 ** (1 / 3) * delta ** (4 / 3), -5.0 * delta),
    }


@dataclass(frozen=True)
class OscIntegralSpec:
    phase: PhaseDescriptor
    amp1: CutoffSpec = CutoffSpec("bump", 0.0, 1.0)
    amp2: Optional[CutoffSpec] = None
    lambda_grid: tuple[float, ...] = tuple(2.0**k for k in range(8, 17))
    method: str = "auto"  # auto | tensor

    def __post_init__(self):
        g = self.lambda_grid
        if any(b <= a for a, b in zip(g, g[1:])):
            raise ValueError("lambda grid must be strictly increasing")

    @property
    def dim(self) -> int:
        return 1 if self.amp2 is None else 2

    @property
    def domain(self) -> tuple[tuple[float, float], ...]:
        if self.amp2 is None:
            return (self.amp1.support(),)
        return (self.amp1.support(), self.amp2.support())


def _profile_max(fn2, a: CutoffSpec, b: CutoffSpec, axis: int, samples: int = 257) -> ArrayFn:
    """Phase proxy along one axis: cumulative max over the other axis of the partial variation."""
    other = np.linspace(*(b.support()), samples)

    def proxy(t: np.ndarray) -> np.ndarray:
        # per-step variation maximised over the other variable, accumulated
        if axis == 0:
            vals = fn2(t[:, None], other[None, :])
        else:
            vals = fn2(other[None, :], t[:, None])
        steps = np.max(np.abs(np.diff(vals, axis=0)), axis=1)
        return np.concatenate([[0.0], np.cumsum(steps)])

    return proxy


def integrate_osc_2d(spec: OscIntegralSpec, lam: float, cfg: QuadConfig = DEFAULT) -> complex:
    """``∫∫ exp(i lam Phi(x)) a1(x1) a2(x2) dx``."""
    if spec.amp2 is None:
        raise ValueError("2-D integral needs two amplitude factors")
    ph = spec.phase
    sep = ph.separable() if spec.method == "auto" else None
    if sep is not None:
        f1, f2 = sep
        return integrate_osc_1d(f1, spec.amp1, lam, cfg) * integrate_osc_1d(f2, spec.amp2, lam, cfg)
    return _tensor_2d(ph, spec.amp1, spec.amp2, lam, cfg)


def _tensor_sum(ph, a1, a2, e1, e2, lam, order, chunk) -> complex:
    t1, w1 = _nodes(e1, order)
    t2, w2 = _nodes(e2, order)
    wa1 = w1 * a1(t1)
    wa2 = w2 * a2(t2)
    keep1 = wa1 != 0
    keep2 = wa2 != 0
    t1, wa1 = t1[keep1], wa1[keep1]
    t2, wa2 = t2[keep2], wa2[keep2]
    rows = max(1, chunk // max(len(t2), 1))
    partial = []
    for s in range(0, len(t1), rows):
        blk = np.exp(1j * lam * ph(t1[s:s + rows, None], t2[None, :]))
        partial.append(blk @ wa2 * wa1[s:s + rows])
    return _psum(np.concatenate(partial)) if partial else 0j


def _tensor_2d(ph: PhaseDescriptor, a1: CutoffSpec, a2: CutoffSpec, lam: float, cfg: QuadConfig) -> complex:
    p1 = _profile_max(ph, a1, a2, 0)
    p2 = _profile_max(ph, a2, a1, 1)
    lo1, hi1 = a1.support()
    lo2, hi2 = a2.support()
    l1 = a1.integral() * a2.integral()
    for refine in range(0, 8):
        e1 = _panel_edges(lo1, hi1, p1, lam, cfg, a1.singular_points(), refine)
        e2 = _panel_edges(lo2, hi2, p2, lam, cfg, a2.singular_points(), refine)
        n1 = (len(e1) - 1) * cfg.order
        n2 = (len(e2) - 1) * cfg.order
        if n1 * n2 > cfg.max_nodes_2d:
            raise QuadratureBudgetExceeded(
                f"2-D integral at lambda={lam:g} needs {n1}x{n2} nodes (budget {cfg.max_nodes_2d})"
            )
        val = _tensor_sum(ph, a1, a2, e1, e2, lam, cfg.order, cfg.chunk)
        check = _tensor_sum(ph, a1, a2, e1, e2, lam, cfg.order - 4, cfg.chunk)
        if abs(val - check) <= cfg.tol * l1:
            return val
    raise QuadratureBudgetExceeded("2-D refinement did not converge")


# ---------------------------------------------------------------------------
# absolute integrals
# ---------------------------------------------------------------------------

def integrate_abs_1d(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-9,
                     points: Sequence[float] = (), limit: int = 500, abs_floor: float = 0.0) -> float:
    """Adaptive ``∫ f`` with interior breakpoints; ``tol`` is relative, ``abs_floor`` absolute.

    Budget overrun (subdivision limit) raises :class:`QuadratureBudgetExceeded`.
    """
    pts = sorted(p for p in set(points) if lo < p < hi)
    edges = [lo, *pts, hi]
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        if b <= a:
            continue
        with np.errstate(all="ignore"):
            out = _sint.quad(f, a, b, epsabs=abs_floor, epsrel=tol, limit=limit, full_output=1)
        if len(out) > 3 and "maximum number of subdivisions" in str(out[3]):
            raise QuadratureBudgetExceeded(f"adaptive quadrature budget exceeded on [{a}, {b}]")
        total += out[0]
    return total


def graded_rule(breakpoints: Sequence[float], order: int = 12, levels: int = 48) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes on ``[min, max]`` graded geometrically toward every breakpoint.

    Each gap is halved and each half is cut into panels of widths ``h/2, h/4, ..`` toward its
    breakpoint, down to ``h * 2^-levels``.  This resolves spikes and algebraic endpoint behaviour
    at any scale above that floor.
    """
    pts = np.unique(np.asarray(breakpoints, dtype=float))
    k = 2.0 ** -np.arange(levels + 1)
    edges = []
    for a, b in zip(pts[:-1], pts[1:]):
        h = 0.5 * (b - a)
        edges.append(a + h * k[::-1])
        edges.append(b - h * k[1:])
    e = np.unique(np.concatenate(edges + [pts]))
    return _nodes(e, order)


def integrate_graded(f: ArrayFn, breakpoints: Sequence[float], tol: float = 1e-9,
                     order: int = 12, levels: int = 48, max_tries: int = 3) -> float:
    """Vectorised ``∫ f`` on a graded mesh; a lower-order rule must agree to ``tol`` (relative).

    On disagreement the grading is deepened by ``levels`` more steps, ``max_tries`` times in all.
    """
    step = levels
    for _ in range(max_tries):
        vals = []
        for o in (order, order - 4):
            x, w = graded_rule(breakpoints, o, levels)
            vals.append(_psum(w * f(x)))
        if abs(vals[0] - vals[1]) <= tol * abs(vals[0]):
            return vals[0]
        levels += step
    raise QuadratureBudgetExceeded(f"graded rule did not settle: {vals[0]!r} vs {vals[1]!r}")


def integrate_panels(f: Callable[[float], float], breakpoints: Sequence[float], tol: float = 1e-3,
                     order: int = 6, levels: int = 14, max_tries: int = 3) -> float:
    """Graded composite Gauss-Legendre for an expensive scalar integrand.

    Orders ``order`` and ``order - 2`` on the same graded mesh must agree to ``tol`` (relative);
    otherwise the grading gets ``4`` more levels and the order grows by 2, ``max_tries`` times.
    """
    cache: dict[float, float] = {}

    def fc(x: float) -> float:
        if x not in cache:
            cache[x] = f(x)
        return cache[x]

    for _ in range(max_tries):
        vals = []
        for o in (order, order - 2):
            x, w = graded_rule(breakpoints, o, levels)
            vals.append(math.fsum(wi * fc(float(xi)) for xi, wi in zip(x, w)))
        if abs(vals[0] - vals[1]) <= tol * abs(vals[0]):
            return vals[0]
        order += 2
        levels += 4
    raise QuadratureBudgetExceeded(f"panel rule did not settle: {vals[0]!r} vs {vals[1]!r}")


def integrate_abs_2d(f: Callable[[float, float], float], domain: tuple[tuple[float, float], tuple[float, float]],
                     tol: float = 1e-8, inner_points: Optional[Callable[[float], Sequence[float]]] = None,
                     outer_points: Sequence[float] = ()) -> float:
    """Iterated adaptive ``∫∫ f(y1, y2) dy2 dy1``; ``inner_points(y1)`` supplies breakpoints in ``y2``."""
    (a1, b1), (a2, b2) = domain

    def inner(y1: float) -> float:
        pts = inner_points(y1) if inner_points else ()
        return integrate_abs_1d(lambda y2: f(y1, y2), a2, b2, tol, pts)

    return integrate_abs_1d(inner, a1, b1, tol, outer_points)


def tail_radius(N: float, tol: float) -> float:
    """``R`` with ``2 ∫_R^oo (1+t)^-N dt <= tol/10``."""
    return (20.0 / ((N - 1) * tol)) ** (1.0 / (N - 1)) - 1.0


# ---------------------------------------------------------------------------
# decay fits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    max_residual: float
    lambda_range: tuple[float, float]
    lambdas: tuple[float, ...] = ()
    values: tuple[complex, ...] = ()

    def rows(self) -> list[dict]:
        out = []
        for lam, v in zip(self.lambdas, self.values):
            out.append({"lambda": lam, "re": v.real, "im": v.imag, "abs": abs(v),
                        "log2_abs": math.log2(abs(v)) if v != 0 else float("-inf")})
        return out


def fit_loglog(lambdas: Sequence[float], values: Sequence[complex]) -> DecayFit:
    lam = np.asarray(lambdas, dtype=float)
    mags = np.abs(np.asarray(values))
    if len(lam) < 2:
        raise ValueError("need at least two points")
    x = np.log2(lam)
    y = np.log2(mags)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return DecayFit(float(slope), float(intercept), float(np.max(np.abs(resid))),
                    (float(lam[0]), float(lam[-1])), tuple(float(v) for v in lam), tuple(complex(v) for v in values))


def evaluate_spec(spec: OscIntegralSpec, lam: float, cfg: QuadConfig = DEFAULT) -> complex:
    if spec.dim == 1:
        return integrate_osc_1d(spec.phase, spec.amp1, lam, cfg)
    return integrate_osc_2d(spec, lam, cfg)


def decay_fit(spec: OscIntegralSpec, cfg: QuadConfig = DEFAULT) -> DecayFit:
    """Least-squares slope of ``log2 |I(lambda)|`` against ``log2 lambda``."""
    if len(spec.lambda_grid) < 6:
        raise ValueError("decay fit needs at least 6 lambda values")
    vals = [evaluate_spec(spec, lam, cfg) for lam in spec.lambda_grid]
    return fit_loglog(spec.lambda_grid, vals)
