"""Cauchy solver for the radial integral equation, plus blow-up detection.

Two routes to the same fixed point:

* :func:`euler_break_line` -- piecewise-linear profile advanced with the slope
  frozen at the left node, the slope being recovered from the running
  quadrature of the Volterra integrand along the line built so far.
* :func:`picard_solve` -- fixed-point iteration of the integral operator on a
  fixed grid, starting from the constant initial value.

The Volterra accumulation uses a product-trapezoid rule: the integrand is
split as s^(n-1) * G(s) with G smooth down to s = 0, G is interpolated
linearly on each cell and the s^(n-1) weight is integrated exactly.  A plain
trapezoid rule mishandles the s^(n-1) vanishing at the origin, and that error
feeds straight into the curvature at 0; with the exact weight moments the
leading-order behaviour of the first cells is captured.
"""

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .nonlinearity import Nonlinearity
from .radial import (AdmissibilityError, ProblemParams, _smooth_factor,
                     dphi_from_integral)

__all__ = [
    "SCHEMA_ID", "RadialProfile", "BlowupReport", "NonConvergenceError",
    "RefinementDiagnosticError", "euler_break_line", "picard_solve",
    "per_cell_defect", "epsilon_defect", "detect_blowup", "refinement_order",
]

SCHEMA_ID = "hessian-radial/1"

GLOBAL = "global"
FINITE_BLOWUP = "finite_blowup"
ADMISSIBILITY_FAILURE = "admissibility_failure"


class NonConvergenceError(RuntimeError):
    """Fixed-point iteration failed; carries the last two node distances."""

    def __init__(self, message: str, last_deltas=()):
        super().__init__(message)
        self.last_deltas = tuple(last_deltas)


class RefinementDiagnosticError(RuntimeError):
    """Refinement study produced no usable error decay."""


@dataclass(frozen=True)
class RadialProfile:
    """Discrete solution of the Cauchy problem on a radial grid.

    `volterra[i]` is the accumulated integral over [0, grid[i]], and
    `dphi[i]` is always produced by :func:`dphi_from_integral` applied to it,
    so the two columns are consistent by construction.  `defect` holds the
    per-cell slope defect |d psi/dr - F| at cell midpoints when available.
    """

    grid: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    volterra: np.ndarray
    params: ProblemParams
    f: Nonlinearity
    defect: np.ndarray | None = None
    truncated_at: float | None = None

    @property
    def a(self) -> float:
        return float(self.phi[0])

    @property
    def r_end(self) -> float:
        return float(self.grid[-1])

    def validate(self) -> None:
        g, phi, dphi, I = self.grid, self.phi, self.dphi, self.volterra
        if not (len(g) == len(phi) == len(dphi) == len(I)):
            raise ValueError("profile columns must share one grid")
        if g[0] != 0.0 or np.any(np.diff(g) <= 0):
            raise ValueError("grid must start at 0 and increase strictly")
        if dphi[0] != 0.0 or I[0] != 0.0:
            raise ValueError("initial slope and integral must vanish")
        if np.any(dphi < 0) or np.any(np.diff(phi) < 0) or np.any(np.diff(I) < 0):
            raise ValueError("phi and the accumulated integral must be "
                             "non-decreasing with dphi >= 0")
        for name, col in (("phi", phi), ("dphi", dphi), ("volterra", I)):
            if not np.all(np.isfinite(col)):
                raise ValueError(f"non-finite values in {name}")

    def cell_defects(self) -> np.ndarray:
        return self.defect if self.defect is not None else per_cell_defect(self)

    def to_csv(self, fileobj) -> None:
        """Write columns r,phi,dphi,volterra,defect with 17 significant
        digits (byte-identical for identical profiles); the defect of the
        cell ending at node i is written on row i, 0.0 on row 0."""
        defects = np.concatenate(([0.0], self.cell_defects())) \
            if len(self.grid) >= 2 else np.zeros(len(self.grid))
        fileobj.write("r,phi,dphi,volterra,defect\n")
        for row in zip(self.grid, self.phi, self.dphi, self.volterra, defects):
            fileobj.write(",".join(f"{v:.17g}" for v in row) + "\n")

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA_ID,
            "params": self.params.to_dict(),
            "f": self.f.label,
            "a": self.a,
            "truncated_at": self.truncated_at,
            "r": self.grid.tolist(),
            "phi": self.phi.tolist(),
            "dphi": self.dphi.tolist(),
            "volterra": self.volterra.tolist(),
            "defect": self.cell_defects().tolist() if len(self.grid) >= 2 else [],
        }

    def to_json(self, fileobj) -> None:
        json.dump(self.to_json_dict(), fileobj, indent=2)
        fileobj.write("\n")


@dataclass(frozen=True)
class BlowupReport:
    """Outcome of the adaptive walk: global existence up to r_max, a finite
    blow-up radius bracket, or an a-priori admissibility rejection."""

    status: str
    r_max: float
    r_estimate: float | None = None
    bracket: tuple[float, float] | None = None
    r_fail: float | None = None
    profile: RadialProfile | None = None
    notes: str = ""

    def __post_init__(self):
        if self.status == FINITE_BLOWUP:
            lo, hi = self.bracket
            if not (lo < self.r_estimate <= hi):
                raise ValueError("blow-up estimate must lie in (lo, hi]")

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "r_max": self.r_max,
            "r_estimate": self.r_estimate,
            "bracket": list(self.bracket) if self.bracket else None,
            "r_fail": self.r_fail,
            "notes": self.notes,
        }


def _uniform_grid(r_end: float, h: float) -> np.ndarray:
    m = max(1, int(round(r_end / h)))
    return np.linspace(0.0, r_end, m + 1)


def _cell_increment(s0: float, s1: float, G0: float, G1: float, n: int) -> float:
    """Integral over [s0, s1] of s^(n-1) times the linear interpolant of G."""
    h = s1 - s0
    P = (s1 ** n - s0 ** n) / n
    Q = (s1 ** (n + 1) - s0 ** (n + 1)) / (n + 1)
    A = max((s1 * P - Q) / h, 0.0)
    B = max((Q - s0 * P) / h, 0.0)
    with np.errstate(over="ignore", invalid="ignore"):
        return A * G0 + B * G1


def _cell_increments(grid: np.ndarray, G: np.ndarray, n: int) -> np.ndarray:
    h = np.diff(grid)
    P = np.diff(grid ** n) / n
    Q = np.diff(grid ** (n + 1)) / (n + 1)
    A = np.maximum((grid[1:] * P - Q) / h, 0.0)
    B = np.maximum((Q - grid[:-1] * P) / h, 0.0)
    with np.errstate(over="ignore", invalid="ignore"):
        return A * G[:-1] + B * G[1:]


def _forward_pass(p: ProblemParams, f: Nonlinearity, grid: np.ndarray,
                  phi: np.ndarray):
    """Accumulated integral and slope induced by a candidate profile.

    Overflow is deliberate here: an accumulation running to +inf signals
    blow-up and is caught by the callers' finiteness checks.
    """
    G = _smooth_factor(p, f, grid, phi)
    with np.errstate(over="ignore", invalid="ignore"):
        I = np.concatenate(([0.0], np.cumsum(_cell_increments(grid, G, p.n))))
    dphi = np.concatenate(([0.0], dphi_from_integral(p, grid[1:], I[1:])))
    return I, dphi


def _require_solvable(p: ProblemParams, a: float, r_end: float,
                      h: float) -> None:
    if not p.admissible_regime():
        raise AdmissibilityError(
            f"k={p.k} >= 2 with mu={p.mu} < 0 admits no admissible radial "
            "solution on the whole space")
    if not math.isfinite(a):
        raise ValueError(f"initial value must be finite, got {a}")
    if not r_end > 0:
        raise ValueError(f"r_end must be > 0, got {r_end}")
    if not 0 < h <= r_end:
        raise ValueError(f"need 0 < h <= r_end, got h={h}")


def euler_break_line(p: ProblemParams, f: Nonlinearity, a: float,
                     r_end: float, h: float) -> RadialProfile:
    """Advance the break line with the slope frozen at the left node.

    The slope at a node is recovered from the running quadrature of the
    integrand along the line built so far.  If the accumulation overflows
    before r_end the profile is truncated there and flagged via
    `truncated_at`; use :func:`detect_blowup` for a proper bracket.
    """
    _require_solvable(p, a, r_end, h)
    grid = _uniform_grid(r_end, h)
    m = len(grid) - 1
    phi = np.zeros(m + 1)
    dphi = np.zeros(m + 1)
    I = np.zeros(m + 1)
    phi[0] = a
    G_prev = float(_smooth_factor(p, f, 0.0, a))
    truncated_at = None
    last = m
    for i in range(1, m + 1):
        r0, r1 = grid[i - 1], grid[i]
        phi_i = phi[i - 1] + dphi[i - 1] * (r1 - r0)
        G_i = float(_smooth_factor(p, f, r1, phi_i)) if np.isfinite(phi_i) \
            else np.inf
        I_i = I[i - 1] + _cell_increment(r0, r1, G_prev, G_i, p.n)
        dphi_i = float(dphi_from_integral(p, r1, I_i)) if np.isfinite(I_i) \
            else np.inf
        if not (np.isfinite(phi_i) and np.isfinite(I_i) and np.isfinite(dphi_i)):
            truncated_at = float(r1)
            last = i - 1
            break
        phi[i], dphi[i], I[i] = phi_i, dphi_i, I_i
        G_prev = G_i
    sl = slice(0, last + 1)
    profile = RadialProfile(grid[sl], phi[sl], dphi[sl], I[sl], p, f,
                            truncated_at=truncated_at)
    profile.validate()
    if last >= 1:
        profile = replace(profile, defect=per_cell_defect(profile))
    return profile


def picard_solve(p: ProblemParams, f: Nonlinearity, a: float, r_end: float,
                 h: float, tol: float = 1e-10,
                 max_iter: int = 200) -> RadialProfile:
    """Iterate phi <- a + int_0^r F(s, phi) ds on a fixed grid to a fixed point.

    The iteration starts from phi == a and is monotone increasing for
    monotone f, so plain undamped iteration converges whenever the solution
    exists on [0, r_end]; convergence is declared when the maximum node
    change drops below `tol`.
    """
    _require_solvable(p, a, r_end, h)
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    grid = _uniform_grid(r_end, h)
    hcells = np.diff(grid)
    phi = np.full(len(grid), float(a))
    deltas = []
    for _ in range(max_iter):
        _, dphi = _forward_pass(p, f, grid, phi)
        with np.errstate(over="ignore", invalid="ignore"):
            phi_new = a + np.concatenate(
                ([0.0], np.cumsum((dphi[:-1] + dphi[1:]) * hcells / 2.0)))
        if not np.all(np.isfinite(phi_new)):
            raise NonConvergenceError(
                f"iterates overflow on [0, {r_end}]: the solution appears to "
                "blow up before r_end (see detect_blowup)", deltas[-2:])
        deltas.append(float(np.max(np.abs(phi_new - phi))))
        phi = phi_new
        if deltas[-1] < tol:
            I, dphi = _forward_pass(p, f, grid, phi)
            profile = RadialProfile(grid, phi, dphi, I, p, f)
            profile.validate()
            return profile
    raise NonConvergenceError(
        f"no fixed point within {max_iter} iterations "
        f"(last node distances: {deltas[-2:]})", deltas[-2:])


def per_cell_defect(profile: RadialProfile) -> np.ndarray:
    """|slope of the profile on each cell - F at the cell midpoint|.

    F is reconstructed from the stored accumulation (linear interpolation of
    the integral at midpoints), not re-integrated, so the measurement is O(m).
    """
    g, phi, I = profile.grid, profile.phi, profile.volterra
    if len(g) < 2:
        raise ValueError("defect needs a profile with at least 2 nodes")
    mid = 0.5 * (g[:-1] + g[1:])
    I_mid = 0.5 * (I[:-1] + I[1:])
    slope = np.diff(phi) / np.diff(g)
    F_mid = dphi_from_integral(profile.params, mid, I_mid)
    return np.abs(slope - F_mid)


def epsilon_defect(profile: RadialProfile) -> float:
    """Maximum slope defect over all cells."""
    return float(np.max(per_cell_defect(profile)))


def _blowup_walk(p: ProblemParams, f: Nonlinearity, a: float, r_max: float,
                 phi_cap: float, h0: float) -> BlowupReport:
    h_min = h0 * 2.0 ** -40
    step_cap = max(1.0, 0.01 * phi_cap)
    rs, phis, dphis, Is = [0.0], [float(a)], [0.0], [0.0]
    G_prev = float(_smooth_factor(p, f, 0.0, a))
    h = h0
    status, bracket = GLOBAL, None
    while r_max - rs[-1] > 1e-12 * r_max:
        h_entry = h
        h_try = min(h, r_max - rs[-1])
        while not (np.isfinite(dphis[-1] * h_try)
                   and dphis[-1] * h_try <= step_cap):
            h /= 2.0
            h_try = min(h, r_max - rs[-1])
            if h < h_min:
                break
        if h < h_min:
            # the slope at this node defeats any representable step
            status = FINITE_BLOWUP
            bracket = (rs[-1], rs[-1] + h_entry)
            break
        r_new = rs[-1] + h_try
        phi_new = phis[-1] + dphis[-1] * h_try
        G_new = float(_smooth_factor(p, f, r_new, phi_new)) \
            if np.isfinite(phi_new) else np.inf
        I_new = Is[-1] + _cell_increment(rs[-1], r_new, G_prev, G_new, p.n)
        dphi_new = float(dphi_from_integral(p, r_new, I_new)) \
            if np.isfinite(I_new) and I_new >= 0 else np.inf
        rs.append(r_new)
        phis.append(phi_new)
        dphis.append(dphi_new)
        Is.append(I_new)
        G_prev = G_new
        if phi_new > phi_cap:
            status = FINITE_BLOWUP
            bracket = (rs[-2], rs[-1])
            break
    profile = _profile_from_walk(p, f, rs, phis, dphis, Is)
    if status == GLOBAL:
        return BlowupReport(GLOBAL, r_max, profile=profile)
    lo, hi = bracket
    return BlowupReport(FINITE_BLOWUP, r_max, r_estimate=0.5 * (lo + hi),
                        bracket=bracket, profile=profile)


def _profile_from_walk(p, f, rs, phis, dphis, Is) -> RadialProfile:
    arrs = tuple(np.asarray(col, dtype=float) for col in (rs, phis, dphis, Is))
    finite = np.all([np.isfinite(c) for c in arrs], axis=0)
    last = int(np.argmin(finite)) - 1 if not finite.all() else len(rs) - 1
    truncated_at = float(rs[last + 1]) if last + 1 < len(rs) else None
    sl = slice(0, last + 1)
    profile = RadialProfile(arrs[0][sl], arrs[1][sl], arrs[2][sl],
                            arrs[3][sl], p, f, truncated_at=truncated_at)
    profile.validate()
    return profile


def detect_blowup(p: ProblemParams, f: Nonlinearity, a: float, r_max: float,
                  phi_cap: float = 1e8, h0: float = 1e-3) -> BlowupReport:
    """Walk the break line adaptively and classify the run.

    The step is halved whenever the predicted increment exceeds
    max(1, 0.01 * phi_cap); blow-up is declared when the profile crosses
    phi_cap or the step underflows below h0 * 2^-40.  A finite blow-up
    estimate is Richardson-combined from runs at h0 and h0/2 (the walk is
    first-order), and the finer run's bracket is reported.
    """
    if not (r_max > 0 and h0 > 0):
        raise ValueError("r_max and h0 must be > 0")
    if not math.isfinite(a):
        raise ValueError(f"initial value must be finite, got {a}")
    if not phi_cap > a:
        raise ValueError(f"phi_cap={phi_cap} must exceed the initial value {a}")
    if p.k >= 2 and p.mu < 0:
        return BlowupReport(ADMISSIBILITY_FAILURE, r_max, r_fail=-1.0 / p.mu)
    coarse = _blowup_walk(p, f, a, r_max, phi_cap, h0)
    if coarse.status != FINITE_BLOWUP:
        return coarse
    fine = _blowup_walk(p, f, a, r_max, phi_cap, h0 / 2.0)
    if fine.status != FINITE_BLOWUP:
        return replace(coarse, notes="refinement at h0/2 reached r_max; "
                                     "keeping the coarse bracket")
    r1 = coarse.r_estimate
    r2 = fine.r_estimate
    lo, hi = fine.bracket
    richardson = 2.0 * r2 - r1
    estimate = min(max(richardson, np.nextafter(lo, hi)), hi)
    return BlowupReport(FINITE_BLOWUP, r_max, r_estimate=float(estimate),
                        bracket=fine.bracket, profile=fine.profile)


def refinement_order(p: ProblemParams, f: Nonlinearity, a: float,
                     r_end: float, h_sequence, method: str = "euler",
                     reference=None, tol: float = 1e-10,
                     max_iter: int = 200) -> float:
    """Empirical convergence order from successive error ratios.

    With a `reference` callable (exact solution of r), errors are maximum
    node deviations from it; otherwise successive endpoint differences
    between consecutive grids are used.  Raises
    :class:`RefinementDiagnosticError` when the error sequence does not
    decrease strictly (including identical profiles across h).
    """
    hs = [float(h) for h in h_sequence]
    if len(hs) < 3 or any(h1 >= h0 for h0, h1 in zip(hs, hs[1:])):
        raise ValueError("need >= 3 strictly decreasing steps")

    def solve(h):
        if method == "euler":
            return euler_break_line(p, f, a, r_end, h)
        if method == "picard":
            return picard_solve(p, f, a, r_end, h, tol=tol, max_iter=max_iter)
        raise ValueError(f"unknown method {method!r}")

    profiles = [solve(h) for h in hs]
    if reference is not None:
        errors = [float(np.max(np.abs(prof.phi - reference(prof.grid))))
                  for prof in profiles]
        pairs = list(zip(hs, errors))
    else:
        ends = [float(prof.phi[-1]) for prof in profiles]
        diffs = [abs(v1 - v0) for v0, v1 in zip(ends, ends[1:])]
        pairs = list(zip(hs[:-1], diffs))
    for (h0, e0), (h1, e1) in zip(pairs, pairs[1:]):
        if e1 <= 0 or e0 <= 0:
            raise RefinementDiagnosticError(
                "order undefined: identical solutions across steps")
        if e1 >= e0:
            raise RefinementDiagnosticError(
                f"error sequence not decreasing: {e0} -> {e1}")
    orders = [np.log(e0 / e1) / np.log(h0 / h1)
              for (h0, e0), (h1, e1) in zip(pairs, pairs[1:])]
    return float(np.mean(orders))
