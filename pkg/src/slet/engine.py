"""Shifted large-l expansion engine.

Given a radial potential, angular quantum number l (l = |m| in 2D) and a
radial quantum number n, the method expands about the minimum r0 of the
effective classical energy l̄²/r² + V(r), where the shifted count l̄ = l − β
is fixed self-consistently: β depends on the oscillation frequency

    w(r) = 2 sqrt(3 + r V''(r)/V'(r))

at r0, while r0 itself solves  sqrt(r³ V'(r)/2) = l − β.  The energy is then
assembled from the zeroth-order term plus second- and third-order corrections
driven by the anharmonicity coefficients alpha1, alpha2.

All arithmetic is plain 64-bit floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidExpansionPointError,
    NoBoundStateError,
    NoMinimumError,
    NoRootError,
)
from .potentials import Potential

TERM_E0 = "E0_only"
TERM_E2 = "through_E2"
TERM_E3 = "through_E3"
TERM_ORDERS = (TERM_E0, TERM_E2, TERM_E3)


@dataclass(frozen=True)
class SolverSettings:
    bracket_lo: float = 1e-3
    bracket_hi: float = 1e3
    scan_points: int = 400
    root_tol: float = 1e-12
    term_order: str = TERM_E3

    def __post_init__(self):
        if not (0 < self.bracket_lo < self.bracket_hi):
            raise ValueError("need 0 < bracket_lo < bracket_hi")
        if self.scan_points < 16:
            raise ValueError("scan_points must be at least 16")
        if not (0 < self.root_tol <= 1e-6):
            raise ValueError("root_tol must lie in (0, 1e-6]")
        if self.term_order not in TERM_ORDERS:
            raise ValueError(f"term_order must be one of {TERM_ORDERS}")


@dataclass(frozen=True)
class SletProblem:
    dim: int  # 3 or 2
    l: int
    n_radial: int
    potential: Potential
    solver: SolverSettings = field(default_factory=SolverSettings)

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        for name in ("l", "n_radial"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise ValueError(f"{name} must be a non-negative integer")
            if v < 0:
                raise ValueError(f"{name} must be a non-negative integer")
        if self.dim == 2 and self.potential.family == "donor":
            m = self.potential.params["m"]
            if self.l != abs(int(m)):
                raise ValueError(
                    f"2D donor requires l = |m|; got l={self.l}, m={m}")


@dataclass(frozen=True)
class SletBreakdown:
    r0: float
    w: float
    beta: float
    lbar: float
    Q: float
    E0: float
    E1: float
    E2_over_lbar2: float
    E3_over_lbar3: float
    E_total: float
    alpha1: float
    alpha2: float
    eps: tuple  # eps1..eps4
    dlt: tuple  # dlt1..dlt6
    e: tuple  # e1..e4
    d: tuple  # d1..d6
    candidates: tuple  # admissible (r0, E0) pairs, search order


# -- pointwise pieces -----------------------------------------------------


def omega(potential: Potential, r: float) -> float:
    """Oscillation frequency 2 sqrt(3 + r V''/V') at r."""
    jet = potential.eval_jet(r)
    vp = jet.coeffs[1]
    vpp = 2.0 * jet.coeffs[2]
    if not vp > 0:
        raise NoBoundStateError(
            f"V'({r}) = {vp}; the expansion needs a rising potential")
    radicand = 3.0 + r * vpp / vp
    if not radicand > 0:
        raise InvalidExpansionPointError(
            f"3 + r V''/V' = {radicand} at r = {r}; frequency undefined")
    return 2.0 * math.sqrt(radicand)


def beta_shift(dim: int, n_radial: int, w):
    """Shift removing the first-order energy term. Works elementwise on w."""
    if dim == 3:
        return -(2.0 + (2 * n_radial + 1) * w) / 4.0
    return -(n_radial + 0.5) * w / 2.0


def _lbar_equation_arrays(problem: SletProblem, r):
    """F(r) = sqrt(r^3 V'/2) - l + beta(w(r)) on an array, nan where undefined.

    Also returns the V' array so callers can distinguish a potential with no
    rising region from one where only the frequency is undefined.
    """
    jet = problem.potential.eval_jet(r)
    vp = np.asarray(jet.coeffs[1], dtype=float)
    vpp = 2.0 * np.asarray(jet.coeffs[2], dtype=float)
    with np.errstate(all="ignore"):
        radicand = 3.0 + r * vpp / vp
        w = 2.0 * np.sqrt(radicand)
        w = np.where((vp > 0) & (radicand > 0), w, np.nan)
        lhs = np.sqrt(r**3 * vp / 2.0)
        f = lhs - problem.l + beta_shift(problem.dim, problem.n_radial, w)
    return f, vp


def _lbar_equation_scalar(problem: SletProblem, r: float) -> float:
    f, _ = _lbar_equation_arrays(problem, np.asarray([r], dtype=float))
    return float(f[0])


def _e0_frozen(problem: SletProblem, lbar: float, r: float) -> float:
    return lbar**2 / r**2 + float(problem.potential.value(r))


def solve_r0(problem: SletProblem):
    """Locate the expansion point.

    Log-spaced scan over the bracket window, bisection on every sign change,
    then among the roots keep those that are genuine minima of the frozen
    effective energy l̄²/r² + V(r) and return the one with the lowest E0.
    """
    s = problem.solver
    grid = np.logspace(math.log10(s.bracket_lo), math.log10(s.bracket_hi),
                       s.scan_points)
    f, vp = _lbar_equation_arrays(problem, grid)

    if not np.any(np.isfinite(vp) & (vp > 0)):
        raise NoBoundStateError(
            "V' is nowhere positive on the bracket window; "
            "the potential admits no expansion point")
    finite = np.isfinite(f)
    if not finite.any():
        raise InvalidExpansionPointError(
            "frequency undefined across the whole bracket window")

    roots = []
    for i in range(len(grid) - 1):
        if not (finite[i] and finite[i + 1]):
            continue
        if f[i] == 0.0:
            roots.append(grid[i])
            continue
        if f[i] * f[i + 1] < 0:
            lo, hi = grid[i], grid[i + 1]
            flo = f[i]
            while hi - lo > s.root_tol * lo:
                mid = 0.5 * (lo + hi)
                fm = _lbar_equation_scalar(problem, mid)
                if math.isnan(fm):
                    raise InvalidExpansionPointError(
                        f"equation not evaluable at r = {mid} during bisection")
                if fm == 0.0:
                    lo = hi = mid
                    break
                if flo * fm < 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            roots.append(0.5 * (lo + hi))
    if f[-1] == 0.0:
        roots.append(grid[-1])

    if not roots:
        raise NoRootError(
            f"no root of the expansion-point equation in "
            f"[{s.bracket_lo:g}, {s.bracket_hi:g}]; widen the bracket "
            f"window or increase scan_points")

    candidates = []
    for r0 in roots:
        w = omega(problem.potential, r0)
        lbar = problem.l - beta_shift(problem.dim, problem.n_radial, w)
        if not lbar > 0:
            continue
        e0 = _e0_frozen(problem, lbar, r0)
        h = 1e-4 * r0
        curv = (_e0_frozen(problem, lbar, r0 + h) - 2.0 * e0
                + _e0_frozen(problem, lbar, r0 - h))
        if curv > 0:
            candidates.append((r0, e0))

    if not candidates:
        raise NoMinimumError(
            "every root of the expansion-point equation sits on a maximum "
            "of the effective energy; no stable expansion point")

    best = min(candidates, key=lambda c: c[1])
    return best[0], candidates


# -- anharmonic coefficient tables ----------------------------------------


def appendix_coeffs(dim: int, beta: float, r0: float, Q: float, potjet, w: float):
    """The ten expansion coefficients (eps1..4, dlt1..6) and their scaled
    forms e_j = eps_j / w^(j/2), d_i = dlt_i / w^(i/2).

    potjet holds Taylor coefficients c_k = V^(k)(r0)/k!, which absorb the
    factorials in the derivative terms: r0^5 V'''/6Q = r0^5 c3 / Q etc.
    """
    c = potjet.coeffs
    e3_tail = r0**5 * c[3] / Q
    e4_tail = r0**6 * c[4] / Q
    d5_tail = r0**7 * c[5] / Q
    d6_tail = r0**8 * c[6] / Q
    if dim == 3:
        tb = 2.0 * beta + 1.0
        bb = beta * (1.0 + beta)
        eps = (-2.0 * tb, 3.0 * tb, -4.0 + e3_tail, 5.0 + e4_tail)
        dlt = (-2.0 * bb, 3.0 * bb, -4.0 * tb, 5.0 * tb,
               -6.0 + d5_tail, 7.0 + d6_tail)
    else:
        bb = beta * beta - 0.25
        eps = (-4.0 * beta, 6.0 * beta, -4.0 + e3_tail, 5.0 + e4_tail)
        dlt = (-2.0 * bb, 3.0 * bb, -8.0 * beta, 10.0 * beta,
               -6.0 + d5_tail, 7.0 + d6_tail)
    rw = math.sqrt(w)
    e = tuple(eps[j] / rw ** (j + 1) for j in range(4))
    d = tuple(dlt[i] / rw ** (i + 1) for i in range(6))
    return eps, dlt, e, d


def alpha1(n_radial: int, w: float, e) -> float:
    """Second-order energy coefficient of the anharmonic expansion."""
    n = n_radial
    e1, e2, e3, e4 = e
    return ((1 + 2 * n) * e2 + 3 * (1 + 2 * n + 2 * n * n) * e4
            - (e1 * e1 + 6 * (1 + 2 * n) * e1 * e3
               + (11 + 30 * n + 30 * n * n) * e3 * e3) / w)


def alpha2(n_radial: int, w: float, e, d) -> float:
    """Fourth-order energy coefficient, grouped by inverse powers of w."""
    n = n_radial
    e1, e2, e3, e4 = e
    d1, d2, d3, d4, d5, d6 = d
    n2 = n * n
    n3 = n2 * n

    g0 = ((1 + 2 * n) * d2
          + 3 * (1 + 2 * n + 2 * n2) * d4
          + 5 * (3 + 8 * n + 6 * n2 + 4 * n3) * d6)

    g1 = ((1 + 2 * n) * e2 * e2
          + 12 * (1 + 2 * n + 2 * n2) * e2 * e4
          + 2 * e1 * d1
          + 2 * (21 + 59 * n + 51 * n2 + 34 * n3) * e4 * e4
          + 6 * (1 + 2 * n) * e1 * d3
          + 30 * (1 + 2 * n + 2 * n2) * e1 * d5
          + 6 * (1 + 2 * n) * e3 * d1
          + 2 * (11 + 30 * n + 30 * n2) * e3 * d3
          + 10 * (13 + 40 * n + 42 * n2 + 28 * n3) * e3 * d5)

    g2 = (4 * e1 * e1 * e2
          + 36 * (1 + 2 * n) * e1 * e2 * e3
          + 8 * (11 + 30 * n + 30 * n2) * e2 * e3 * e3
          + 24 * (1 + 2 * n) * e1 * e1 * e4
          + 8 * (31 + 78 * n + 78 * n2) * e1 * e3 * e4
          + 12 * (57 + 189 * n + 225 * n2 + 150 * n3) * e3 * e3 * e4)

    g3 = (8 * e1**3 * e3
          + 108 * (1 + 2 * n) * e1 * e1 * e3 * e3
          + 48 * (11 + 30 * n + 30 * n2) * e1 * e3**3
          + 30 * (31 + 109 * n + 141 * n2 + 94 * n3) * e3**4)

    return g0 - g1 / w + g2 / (w * w) - g3 / (w * w * w)


# -- assembly --------------------------------------------------------------


def solve(problem: SletProblem) -> SletBreakdown:
    """Full eigenvalue breakdown for one (l, n) level."""
    r0, candidates = solve_r0(problem)
    w = omega(problem.potential, r0)
    beta = beta_shift(problem.dim, problem.n_radial, w)
    lbar = problem.l - beta
    Q = lbar * lbar

    jet = problem.potential.eval_jet(r0)
    E0 = Q / r0**2 + jet.coeffs[0]

    n = problem.n_radial
    if problem.dim == 3:
        first_order = 2.0 * beta + 1.0 + (n + 0.5) * w
        second_shift = beta * (1.0 + beta)
    else:
        first_order = 2.0 * beta + (n + 0.5) * w
        second_shift = beta * beta - 0.25
    E1 = (Q / r0**2) * first_order

    eps, dlt, e, d = appendix_coeffs(problem.dim, beta, r0, Q, jet, w)
    a1 = alpha1(n, w, e)
    a2 = alpha2(n, w, e, d)

    E2_term = (second_shift + a1) / r0**2
    E3_term = a2 / (lbar * r0**2)

    order = problem.solver.term_order
    E_total = E0
    if order in (TERM_E2, TERM_E3):
        E_total += E2_term
    if order == TERM_E3:
        E_total += E3_term

    return SletBreakdown(
        r0=r0, w=w, beta=beta, lbar=lbar, Q=Q,
        E0=E0, E1=E1, E2_over_lbar2=E2_term, E3_over_lbar3=E3_term,
        E_total=E_total, alpha1=a1, alpha2=a2,
        eps=eps, dlt=dlt, e=e, d=d,
        candidates=tuple(candidates),
    )
