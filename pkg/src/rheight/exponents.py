"""Restriction exponents: linear height, r-height, the case classifier and exponent arithmetic.

The classifier takes ``phi_a``, the phase after the first (non-fractional)
change of coordinates, together with the exponent ``m`` of that change.  It
reconstructs

* ``phi = phi_a(x1, x2 - x1^m)`` and its principal line ``L`` (giving ``d``),
* the principal weight ``kappa_tilde`` of ``phi_a`` and ``a = k2/k1``,
* the root ``c0`` that the modified adapted shear ``x2 -> x2 - c0 x1^a`` removes,
* ``phi_tilde_a``, its face ``(A, B) -- (n, 0)``, and the augmented polyhedron.

All numbers in a :class:`RestrictionReport` are exact Fractions.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Literal, Optional, Sequence, Union

import sympy

from .newton import (
    NoFiniteWeight,
    Weight,
    augmented_polyhedron,
    kappa_principal_part,
    newton_distance,
    newton_polyhedron,
    principal_face,
    principal_weight,
    r_height,
    supported_face,
)
from .poly import PuiseuxPoly, RationalLike, as_fraction, exact_power, render_poly, substitute_shear

Branch = Literal["ND", "D"]


# ---------------------------------------------------------------------------
# linear height
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearHeight:
    """``h_lin`` with the shear attaining it.

    ``shear`` is ``c`` in ``x2 -> x2 + c*x1`` (or ``x1 -> x1 + c*x2`` if ``swapped``).
    ``exact`` is False when the value is only a lower bound.
    """

    h_lin: Fraction
    shear: Fraction
    swapped: bool = False
    exact: bool = True


def _swap(p: PuiseuxPoly) -> PuiseuxPoly:
    return p.map_terms(lambda e, c: ((e[1], e[0]), c))


def _rational_roots(coeffs: dict[int, Fraction]) -> dict[Fraction, int]:
    """Rational roots (with multiplicity) of ``sum coeffs[k] z^k``."""
    z = sympy.Symbol("z")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * z**k for k, c in coeffs.items())
    poly = sympy.Poly(expr, z, domain=sympy.QQ)
    if poly.degree() <= 0:
        return {}
    roots: dict[Fraction, int] = {}
    _, factors = poly.factor_list()
    for fac, mult in factors:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            roots[Fraction(int(r.p), int(r.q))] = roots.get(Fraction(int(r.p), int(r.q)), 0) + mult
    return roots


def linear_height(p: PuiseuxPoly) -> LinearHeight:
    """Largest Newton distance over linear shears of ``p``.

    Only a root of the lowest homogeneous form with multiplicity above half its
    degree can raise ``d`` above ``k/2``.  Such a root is unique, hence fixed by
    conjugation, hence rational, so trying every rational root of the lowest form
    (in both affine charts) is exhaustive for polynomial input.
    """
    if not p:
        raise ValueError("linear height of the zero polynomial is undefined")
    if not p.is_polynomial():
        d = newton_distance(newton_polyhedron(p))
        return LinearHeight(d, Fraction(0), exact=False)
    k = min(e1 + e2 for (e1, e2), _ in p.items())
    low = {(int(e1), int(e2)): c for (e1, e2), c in p.items() if e1 + e2 == k}
    best = LinearHeight(newton_distance(newton_polyhedron(p)), Fraction(0))
    for swapped in (False, True):
        q = _swap(p) if swapped else p
        # P(1, z) in the current chart; roots z give factors (x2 - z x1)
        chart = {}
        for (e1, e2), c in low.items():
            key = e1 if swapped else e2
            chart[key] = chart.get(key, Fraction(0)) + c
        for root in _rational_roots(chart):
            if root == 0:
                continue
            d = newton_distance(newton_polyhedron(substitute_shear(q, root, 1)))
            if d > best.h_lin:
                best = LinearHeight(d, root, swapped=swapped)
    return best


# ---------------------------------------------------------------------------
# closed forms and exponent arithmetic
# ---------------------------------------------------------------------------

def hr_closed_form(A: int, B: int, n: RationalLike) -> Fraction:
    """``h^r`` from ``h^r + 1 = (n+3) B / (n+B-A)`` (valid for ``m = 2``)."""
    n = as_fraction(n)
    return (n + 3) * B / (n + B - A) - 1


def hr_from_weight(kappa: Weight, m: RationalLike) -> Fraction:
    """``h^r + 1 = (1 + (m+1) k1) / |kappa|`` when ``(t, t+m+1)`` meets the ``kappa`` face."""
    m = as_fraction(m)
    return (1 + (m + 1) * kappa.k1) / kappa.norm - 1


def p_prime_from_hr(hr: Fraction) -> Fraction:
    return 2 * hr + 2


def theta_from_hr(hr: Fraction) -> Fraction:
    return 1 / (hr + 1)


def h_tilde_r(m, H) -> Fraction:
    m, H = as_fraction(m), as_fraction(H)
    return m * H / (m + 1)


def p_tilde_c(m, H) -> Fraction:
    return 2 * (h_tilde_r(m, H) + 1)


def theta_tilde_c(m, H) -> Fraction:
    m, H = as_fraction(m), as_fraction(H)
    return (m + 1) / (m * H + m + 1)


def theta_tilde_B(m, B) -> Fraction:
    return theta_tilde_c(m, B)


def p_prime_H(H) -> Fraction:
    H = as_fraction(H)
    return 12 * H / (3 + H)


def theta_H(H) -> Fraction:
    H = as_fraction(H)
    return 1 / (2 * H) + Fraction(1, 6)


# p'_B and theta_B are the same functions evaluated at B
p_prime_B = p_prime_H
theta_B = theta_H


def M_poly(m, B) -> Fraction:
    """``M(m, B) = m B^2 - (3m+6) B + 3(m+1)``."""
    m, B = as_fraction(m), as_fraction(B)
    return m * B * B - (3 * m + 6) * B + 3 * (m + 1)


def H_threshold(B) -> Fraction:
    """``21 B / (2(B+3)) - 3/2``; equals ``H(4) = 9/2`` and ``H(5) = 81/16``."""
    B = as_fraction(B)
    return Fraction(21) * B / (2 * (B + 3)) - Fraction(3, 2)


def case1_lhs(B) -> Fraction:
    """``-1/B - 1/2 + (5/2) theta_B``, which should equal ``(1/B - 1/3)/4``."""
    B = as_fraction(B)
    return -1 / B - Fraction(1, 2) + Fraction(5, 2) * theta_B(B)


def bak_seeger_p0(a, b) -> Fraction:
    a, b = as_fraction(a), as_fraction(b)
    return 2 * (a + b) / (2 * a + b)


def typeZ_E(n) -> Fraction:
    """Exponent ``k2 (4 h^r - 3) + k1 (6 - 2 h^r) - 2`` for the two-edge ``B = 3`` configuration."""
    n = as_fraction(n)
    k1, k2, hr = 1 / n, (n - 1) / (3 * n), Fraction(7, 3)
    return k2 * (4 * hr - 3) + k1 * (6 - 2 * hr) - 2


def airy_gain(B, H) -> Fraction:
    """``-1/3 - 1/B + (7/3) theta_tilde_c`` at ``m = 2``; negative iff ``H > H_threshold(B)``."""
    B = as_fraction(B)
    return -Fraction(1, 3) - 1 / B + Fraction(7, 3) * theta_tilde_c(2, H)


# ---------------------------------------------------------------------------
# the report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RestrictionReport:
    m: Fraction
    d: Optional[Fraction] = None
    h: Optional[Fraction] = None
    h_lin: Optional[Fraction] = None
    case_ab: Optional[Literal["a", "b"]] = None
    kappa: Optional[Weight] = None
    kappa_tilde: Optional[Weight] = None
    a: Optional[Fraction] = None
    c0: Optional[Fraction] = None
    B: Optional[int] = None
    A: Optional[Fraction] = None
    H: Optional[Fraction] = None
    n: Optional[Fraction] = None
    hr: Optional[Fraction] = None
    p_c_prime: Optional[Fraction] = None
    theta_c: Optional[Fraction] = None
    nd_or_d: str = "n.a."
    in_family: bool = False
    phi: Optional[str] = None
    phi_a: Optional[str] = None
    phi_tilde_a: Optional[str] = None
    gaps: tuple[str, ...] = ()

    @property
    def complete(self) -> bool:
        return not self.gaps

    def invariants(self) -> dict[str, bool]:
        """Exact identities every complete report must satisfy."""
        out: dict[str, bool] = {}
        if self.hr is not None:
            out["p_c_prime = 2 hr + 2"] = self.p_c_prime == 2 * self.hr + 2
            out["theta_c (hr + 1) = 1"] = self.theta_c * (self.hr + 1) == 1
            out["theta_c = 2 / p_c_prime"] = self.theta_c == 2 / self.p_c_prime
        if self.hr is not None and self.d is not None:
            out["hr >= d"] = self.hr >= self.d
        if self.hr is not None and self.H is not None and self.kappa_tilde is not None:
            # the comparison line argument needs m < k2/k1; members with k2/k1 < m exist in the (A, B, n) grid
            if self.kappa_tilde.m >= self.m:
                out["hr >= h_tilde_r"] = self.hr >= h_tilde_r(self.m, self.H)
        if self.B is not None and self.kappa_tilde is not None and self.kappa_tilde.k2 * self.B <= 1:
            out["B <= H"] = self.B <= self.H
        return out


class FamilyError(ValueError):
    pass


def classify(
    phi_a: PuiseuxPoly,
    m: RationalLike = 2,
    n1: Optional[int] = None,
    psi_coeff: RationalLike = 1,
) -> RestrictionReport:
    """Full case report for ``phi_a``.

    ``m`` is the exponent of the first shear ``psi(x1) = psi_coeff * x1^m``;
    ``n1`` is the vanishing order of the ``x2``-linear coefficient (``None`` means flat).
    Inputs outside the implemented family yield a report with ``gaps`` filled in.
    """
    m = as_fraction(m)
    gaps: list[str] = []
    fields: dict = {"m": m, "phi_a": render_poly(phi_a)}
    if not phi_a:
        raise ValueError("cannot classify the zero polynomial")

    np_a = newton_polyhedron(phi_a)
    fields["h"] = newton_distance(np_a)
    face_a = principal_face(np_a)
    if face_a.kind == "vertex":
        fields["case_ab"] = "b"
    elif face_a.kind == "edge":
        fields["case_ab"] = "a"

    try:
        phi = substitute_shear(phi_a, -as_fraction(psi_coeff), m)
    except ValueError as exc:
        return RestrictionReport(**fields, gaps=(f"cannot undo the first shear: {exc}",))
    fields["phi"] = render_poly(phi)
    np_phi = newton_polyhedron(phi)
    fields["d"] = newton_distance(np_phi)
    fields["h_lin"] = linear_height(phi).h_lin if phi.is_polynomial() else None
    try:
        kappa = principal_weight(principal_face(np_phi))
        fields["kappa"] = kappa
    except NoFiniteWeight:
        kappa = None
        gaps.append("principal face of phi is not a compact edge; no principal line L")

    try:
        kt = principal_weight(face_a)
    except NoFiniteWeight:
        gaps.append(f"principal face of phi_a is a {face_a.kind}; no principal weight")
        return RestrictionReport(**fields, gaps=tuple(gaps))
    fields["kappa_tilde"] = kt
    fields["a"] = a = kt.m
    fields["n"] = n = 1 / kt.k1
    fields["H"] = 1 / kt.k2

    # c0: the root of maximal multiplicity of d/dz phi_a_kt(1, z)
    part = kappa_principal_part(phi_a, kt)
    fz: dict[int, Fraction] = {}
    for (e1, e2), c in part.items():
        if e2.denominator != 1:
            gaps.append("fractional x2 exponent in the principal part")
            return RestrictionReport(**fields, gaps=tuple(gaps))
        fz[int(e2)] = fz.get(int(e2), Fraction(0)) + c
    dfz = {k - 1: k * c for k, c in fz.items() if k > 0}
    roots = _rational_roots(dfz)
    if not roots:
        gaps.append("derivative of the principal part has no rational root; c0 undetermined")
        return RestrictionReport(**fields, gaps=tuple(gaps))
    top = max(roots.values())
    best = [r for r, mult in roots.items() if mult == top]
    if len(best) > 1:
        gaps.append(f"several roots of multiplicity {top}; c0 ambiguous")
        return RestrictionReport(**fields, gaps=tuple(gaps))
    c0 = -best[0]
    fields["c0"] = c0

    phi_t = substitute_shear(phi_a, -c0, a) if c0 != 0 else phi_a
    fields["phi_tilde_a"] = render_poly(phi_t)
    np_t = newton_polyhedron(phi_t)
    face_t = supported_face(np_t, kt)
    part_t = kappa_principal_part(phi_t, kt)
    if face_t is None or face_t.kind != "edge":
        gaps.append("kappa_tilde does not support an edge of N(phi_tilde_a)")
        return RestrictionReport(**fields, gaps=tuple(gaps))
    A, Bq = face_t.geometry[0]
    # B is the least j >= 1 with d^j/dx2^j of the principal part nonzero at (1, 0)
    js = sorted(e2 for (_, e2), _ in part_t.items() if e2 >= 1)
    if not js or js[0] != Bq or Bq.denominator != 1:
        gaps.append("left endpoint of the principal face is not the first nonvanishing x2-derivative")
        return RestrictionReport(**fields, gaps=tuple(gaps))
    fields["A"] = A
    fields["B"] = B = int(Bq)
    if B != top + 1:
        gaps.append(f"root multiplicity {top} does not match B - 1 = {B - 1}")
    fields["in_family"] = (
        len(part_t) == 2 and part_t.coefficient(A, B) != 0 and part_t.coefficient(n, 0) != 0
    )

    if kappa is not None:
        try:
            np_r = augmented_polyhedron(np_t, kappa)
        except ValueError:
            gaps.append("principal line of phi does not support N(phi_tilde_a)")
        else:
            hr = r_height(np_r, m)
            fields.update(hr=hr, p_c_prime=p_prime_from_hr(hr), theta_c=theta_from_hr(hr))

    if n1 is None or n.denominator != 1:
        fields["nd_or_d"] = "ND"
    else:
        fields["nd_or_d"] = "D" if n1 == n - 2 else "ND"
    return RestrictionReport(**fields, gaps=tuple(gaps))


def family_member(A: int, B: int, n: int, c0: RationalLike = 0, c1: RationalLike = 1, extra: str = "") -> PuiseuxPoly:
    """``x1^A (x2 + c0 x1^a)^B + c1 x1^n`` with ``a = (n - A)/B``, plus optional higher terms."""
    from .poly import parse_poly

    a = Fraction(n - A, B)
    base = PuiseuxPoly.monomial(A, B) + PuiseuxPoly.monomial(n, 0, c1)
    p = substitute_shear(base, c0, a) if c0 else base
    if extra:
        p = p + parse_poly(extra)
    return p


# ---------------------------------------------------------------------------
# exponent lemma table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaCheck:
    name: str
    holds: bool
    detail: dict = field(default_factory=dict)


def exponent_lemmas(report: RestrictionReport) -> list[LemmaCheck]:
    """Exact evaluation of the exponent identities and inequalities for a report."""
    if report.H is None or report.B is None:
        raise ValueError("exponent lemmas need a report with H and B")
    m, H, B = report.m, report.H, report.B
    out: list[LemmaCheck] = []
    pt, pH, pB = p_tilde_c(m, H), p_prime_H(H), p_prime_B(B)
    quad = m * H * H - (2 * m + 5) * H + 3 * m + 3
    hyp = (m >= 3 and H >= 2) or (m == 2 and H >= 3)
    out.append(LemmaCheck(
        "p_tilde_c >= p_H <=> m H^2 - (2m+5) H + 3m + 3 >= 0",
        (pt >= pH) == (quad >= 0),
        {"p_tilde_c": pt, "p_H": pH, "quadratic": quad},
    ))
    if hyp:
        strict_expected = not (m == 2 and H == 3)
        out.append(LemmaCheck(
            "p_tilde_c >= p_H >= p_B (strict first unless m=2, H=3)",
            pt >= pH >= pB and ((pt > pH) == strict_expected),
            {"p_tilde_c": pt, "p_H": pH, "p_B": pB},
        ))
    if report.hr is not None:
        out.append(LemmaCheck("p_c >= p_tilde_c", report.p_c_prime >= pt, {"p_c_prime": report.p_c_prime}))
        if report.B is not None and report.hr + 1 <= B:
            tc = theta_tilde_c(m, H)
            equal_case = B == H == report.hr + 1 == report.d + 1
            out.append(LemmaCheck(
                "theta_c <= theta_tilde_c (equality only if B = H = hr+1 = d+1)",
                report.theta_c <= tc and ((report.theta_c == tc) == equal_case),
                {"theta_c": report.theta_c, "theta_tilde_c": tc},
            ))
    out.append(LemmaCheck(
        "theta_tilde_c <= theta_tilde_B",
        theta_tilde_c(m, H) <= theta_tilde_B(m, B) if B <= H else True,
        {"theta_tilde_c": theta_tilde_c(m, H), "theta_tilde_B": theta_tilde_B(m, B)},
    ))
    out.append(LemmaCheck(
        "case-1 identity",
        case1_lhs(B) == (Fraction(1) / B - Fraction(1, 3)) / 4,
        {"lhs": case1_lhs(B)},
    ))
    mv = M_poly(m, B)
    out.append(LemmaCheck("M(m,B) sign", True, {"M": mv, "nonnegative": mv >= 0}))
    if m == 2 and B in (4, 5):
        thr = H_threshold(B)
        out.append(LemmaCheck(
            "airy gain negative <=> H > H(B)",
            (airy_gain(B, H) < 0) == (H > thr),
            {"H(B)": thr, "gain": airy_gain(B, H)},
        ))
    return out


def exponent_table() -> list[LemmaCheck]:
    """The fixed numerical identities, independent of any particular phase."""
    rows = [
        LemmaCheck("p_tilde_c(2,3) = p_H(3) = 6", p_tilde_c(2, 3) == p_prime_H(3) == 6,
                   {"p_tilde_c": p_tilde_c(2, 3), "p_H": p_prime_H(3)}),
        LemmaCheck("M(3,4) = 0", M_poly(3, 4) == 0, {"M": M_poly(3, 4)}),
        LemmaCheck("M(2,6) = 9", M_poly(2, 6) == 9, {"M": M_poly(2, 6)}),
        LemmaCheck("H(4) = 9/2", H_threshold(4) == Fraction(9, 2), {"H": H_threshold(4)}),
        LemmaCheck("H(5) = 81/16", H_threshold(5) == Fraction(81, 16), {"H": H_threshold(5)}),
        LemmaCheck("p0(5/3, 5/6) = 6/5", bak_seeger_p0(Fraction(5, 3), Fraction(5, 6)) == Fraction(6, 5),
                   {"p0": bak_seeger_p0(Fraction(5, 3), Fraction(5, 6))}),
        LemmaCheck("tilde L meets (t, t+3) at t2 = (2H+3)/3 for H=3",
                   h_tilde_r(2, 3) + 1 == Fraction(2 * 3 + 3, 3), {}),
    ]
    for B in range(2, 13):
        rows.append(LemmaCheck(f"case-1 identity B={B}", case1_lhs(B) == (Fraction(1, B) - Fraction(1, 3)) / 4, {}))
    return rows


# ---------------------------------------------------------------------------
# delta vector and rho
# ---------------------------------------------------------------------------

Number = Union[Fraction, float]


@dataclass(frozen=True)
class DeltaVector:
    """``delta_j = 2^(-k q_j)`` for ``j = 0..B``; ``q30`` is the exponent of ``delta_{3,0}``.

    Flat slots (``flat[j]`` True) carry the configured large exponent.
    """

    k: int
    B: int
    q: tuple[Fraction, ...]
    q30: Fraction
    branch: Branch
    flat: tuple[bool, ...]

    def value(self, j: int) -> float:
        return 2.0 ** (-float(self.k * self.q[j]))

    @property
    def delta30(self) -> float:
        return 2.0 ** (-float(self.k * self.q30))

    def ratio_to_delta0(self, j: int) -> Fraction:
        """``delta_j = delta_0 ** ratio`` (rational by construction)."""
        return self.q[j] / self.q[0]

    def tilde(self) -> "DeltaTilde":
        higher = tuple(self.value(j + 2) for j in range(2, self.B - 1))
        d0 = self.value(0) if self.branch == "D" else None
        return DeltaTilde(self.B, self.branch, self.delta30, higher, d0)


def delta_vector(
    report_or_kappa: Union[RestrictionReport, Weight],
    k: int,
    n_list: Sequence[Optional[int]],
    B: Optional[int] = None,
    branch: Optional[Branch] = None,
    N: int = 1,
    flat_exponent: RationalLike = 64,
) -> DeltaVector:
    """Exponents of ``delta = (delta_0, ..., delta_B)`` at dyadic scale ``2^-k``.

    ``n_list[j-1]`` is ``n_j`` for ``j = 1..B-2`` (``None`` marks a flat coefficient).
    ``N`` is the Taylor order entering ``delta_{3,0} = delta_0 delta_1^N`` in the degenerate case.
    """
    if isinstance(report_or_kappa, RestrictionReport):
        kt = report_or_kappa.kappa_tilde
        B = report_or_kappa.B if B is None else B
        branch = branch or report_or_kappa.nd_or_d
    else:
        kt = report_or_kappa
    if kt is None or B is None:
        raise ValueError("delta vector needs kappa_tilde and B")
    branch = branch if branch in ("ND", "D") else "ND"
    if k < 1:
        raise ValueError("k must be a positive integer")
    if len(n_list) != B - 2:
        raise ValueError(f"expected {B - 2} entries n_1..n_(B-2), got {len(n_list)}")
    big = as_fraction(flat_exponent)
    q = [kt.k2 - 2 * kt.k1, kt.k1, kt.k2]
    flat = [False, False, False]
    for j, nj in enumerate(n_list, start=1):
        if nj is None:
            q.append(big)
            flat.append(True)
        else:
            q.append(nj * kt.k1 + j * kt.k2 - 1)
            flat.append(False)
    for j, qj in enumerate(q):
        if qj <= 0:
            raise ValueError(f"exponent q_{j} = {qj} is not positive; delta_{j} would not tend to 0")
    if branch == "ND":
        q30 = min(q[0], q[3]) if B >= 3 else q[0]
    else:
        q30 = q[0] + N * q[1]
    return DeltaVector(k, B, tuple(q), q30, branch, tuple(flat))


@dataclass(frozen=True)
class DeltaTilde:
    """Coefficients entering ``rho``: ``delta_{3,0}``, ``delta_4..delta_B`` and, in case D, ``delta_0``."""

    B: int
    branch: Branch
    d30: Number
    higher: tuple[Number, ...] = ()
    d0: Optional[Number] = None

    def __post_init__(self):
        if len(self.higher) != max(self.B - 3, 0):
            raise ValueError(f"need {max(self.B - 3, 0)} entries delta_4..delta_B")
        if self.branch == "D" and self.d0 is None:
            raise ValueError("case D needs delta_0")


@dataclass(frozen=True)
class RhoValue:
    value: Number
    branch: Branch


def _rpow(x: Number, e: Fraction) -> Number:
    if isinstance(x, Fraction):
        if x == 0:
            return Fraction(0)
        try:
            return exact_power(x, e)
        except ValueError:
            return float(x) ** float(e)
    return float(x) ** float(e)


def _sum(parts: list[Number]) -> Number:
    if all(isinstance(p, Fraction) for p in parts):
        return sum(parts, Fraction(0))
    return math.fsum(float(p) for p in parts)


def rho(dt: Union[DeltaTilde, DeltaVector], branch: Optional[Branch] = None) -> RhoValue:
    if isinstance(dt, DeltaVector):
        dt = dt.tilde()
    if branch is not None and branch != dt.branch:
        dt = replace(dt, branch=branch)
    B = dt.B
    if dt.branch == "D" and B < 3:
        raise ValueError("case D needs B >= 3")
    parts = [_rpow(abs(dt.d30), Fraction(B, B - 1))]
    for j, dj in enumerate(dt.higher, start=2):
        parts.append(_rpow(abs(dj), Fraction(B, B - j)))
    if dt.branch == "D":
        parts.append(_rpow(abs(dt.d0), Fraction(3 * B, 2 * B - 3)))
    return RhoValue(_sum(parts), dt.branch)


def duistermaat_scale(dt: DeltaTilde, r: Number) -> DeltaTilde:
    """Apply ``delta_{j+2} -> r^((B-j)/B) delta_{j+2}``, ``delta_{3,0} -> r^((B-1)/B) delta_{3,0}``
    and in case D ``delta_0 -> r^((2B-3)/(3B)) delta_0``."""
    B = dt.B
    if not r > 0:
        raise ValueError("r must be positive")
    d30 = _rpow(r, Fraction(B - 1, B)) * dt.d30
    higher = tuple(_rpow(r, Fraction(B - j, B)) * dj for j, dj in enumerate(dt.higher, start=2))
    d0 = _rpow(r, Fraction(2 * B - 3, 3 * B)) * dt.d0 if dt.branch == "D" else dt.d0
    return DeltaTilde(B, dt.branch, d30, higher, d0)


def report_to_dict(report: RestrictionReport) -> dict:
    return asdict(report)
