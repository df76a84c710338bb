"""Pointwise verification of Gaussian candidates u = e^(A |x|^2).

For these candidates the augmented Hessian is again a rank-one update of the
identity, so the spectrum is explicit:

    lambda = ( 4 A^2 e^(A r^2) (r^2 + (1 + mu r)/(2A)),
               2 A e^(A r^2) (1 + mu r),  ... (n-1 times) )

The verifier checks, radius by radius, that the spectrum stays in Gamma_k and
that S_k >= u^(k alpha).  Every factor of e^(A r^2) scales out: checks run on
the scaled (polynomial) spectrum and margins move to the log domain once the
raw values stop being representable, so the inequality direction is exact at
any radius.
"""

import math
from dataclasses import dataclass

import numpy as np

from .radial import ProblemParams
from .symmetric import binom, elem_sym, in_gamma_k

__all__ = [
    "GaussianCandidate", "RadiusCheck", "SubsolutionReport",
    "gaussian_spectrum", "verify_subsolution", "gaussian_threshold",
    "gaussian_threshold_negative_mu", "cauchy_young_slack", "default_radii",
]

_LOG_HUGE = math.log(1e300)


@dataclass(frozen=True)
class GaussianCandidate:
    """Candidate u(x) = e^(A |x|^2) with A > 0."""

    A: float

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError(f"Gaussian exponent coefficient must be > 0, "
                             f"got {self.A}")


def _scaled_spectrum(p: ProblemParams, A: float, r: float) -> np.ndarray:
    """Spectrum divided by e^(A r^2): polynomial in r, overflow-free."""
    out = np.full(p.n, 2.0 * A * (1.0 + p.mu * r))
    out[0] = 4.0 * A * A * (r * r + (1.0 + p.mu * r) / (2.0 * A))
    return out


def gaussian_spectrum(p: ProblemParams, A: float, r: float) -> np.ndarray:
    """Eigenvalues of D^2 u + mu |Du| I for u = e^(A |x|^2) at radius r."""
    GaussianCandidate(A)
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    return math.exp(A * r * r) * _scaled_spectrum(p, A, r)


def gaussian_threshold(n: int, k: int) -> float:
    """Smallest A for which the Gaussian is a subsolution of
    S_k^(1/k)(.) = u^alpha for every mu >= 0 and alpha <= 1:
    A = (1/2) C(n,k)^(-1/k).  Sharp at the origin."""
    return 0.5 * binom(n, k) ** (-1.0 / k)


def gaussian_threshold_negative_mu(n: int, mu: float) -> float:
    """Variant for k = 1 with mu < 0 (formula valid for any mu):
    A = 1/(2n) + n mu^2 / 8."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return 1.0 / (2.0 * n) + n * mu * mu / 8.0


def cauchy_young_slack(n: int, mu: float, A: float, r: float) -> float:
    """4 A^2 r^2 + 2 A n + 2 A n mu r - 1: the trace margin of the Gaussian
    for k = 1, nonnegative for all r whenever A is at or above
    :func:`gaussian_threshold_negative_mu` (Cauchy-Young bound on the cross
    term 2 A n mu r)."""
    return 4.0 * A * A * r * r + 2.0 * A * n + 2.0 * A * n * mu * r - 1.0


@dataclass(frozen=True)
class RadiusCheck:
    r: float
    passed: bool
    margin: float
    gamma_k_ok: bool
    log_domain: bool = False

    def to_dict(self) -> dict:
        return {"r": self.r, "pass": self.passed, "margin": self.margin,
                "gamma_k_ok": self.gamma_k_ok, "log_domain": self.log_domain}


@dataclass(frozen=True)
class SubsolutionReport:
    params: ProblemParams
    A: float
    alpha: float
    checks: list
    passed: bool
    first_failure: float | None

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "A": self.A,
            "alpha": self.alpha,
            "passed": self.passed,
            "first_failure": self.first_failure,
            "radii": [c.to_dict() for c in self.checks],
        }


def default_radii(p: ProblemParams, A: float, r_max: float = 10.0,
                  count: int = 512) -> np.ndarray:
    """Mixed linear/geometric radius grid on [0, r_max].

    The inequalities are smooth in r and failures localize either at the
    origin or at the minimum of the trace quadratic, so the grid always
    contains 0 and, for mu < 0, the explicit minimizer r* = -mu n / (4A) of
    the trace slack.
    """
    if r_max <= 0 or count < 2:
        raise ValueError("need r_max > 0 and count >= 2")
    n_lin = count // 2
    lin = np.linspace(0.0, r_max, n_lin)
    geo = np.geomspace(r_max * 1e-3, r_max, count - n_lin + 1)[:-1]
    pts = np.concatenate((lin, geo))
    if p.mu < 0 and A > 0:
        r_star = -p.mu * p.n / (4.0 * A)
        if 0 < r_star <= r_max:
            pts = np.append(pts, r_star)
    return np.unique(pts)


def verify_subsolution(p: ProblemParams, A: float, alpha: float, radii,
                       rel_tol: float = 1e-12) -> SubsolutionReport:
    """Check S_k(spectrum) >= u^(k alpha) and Gamma_k membership per radius.

    alpha <= 1 is the range with a guarantee at and above the threshold;
    other alpha are accepted and verified empirically.  The inequality is
    accepted up to a relative slack `rel_tol` (exact-threshold candidates sit
    on equality, where roundoff has either sign).  Failures are data: they
    are reported per radius, never raised.
    """
    GaussianCandidate(A)
    checks = []
    first_failure = None
    for r in np.asarray(radii, dtype=float):
        if r < 0:
            raise ValueError(f"radius must be >= 0, got {r}")
        scaled = _scaled_spectrum(p, A, r)
        gamma_ok = in_gamma_k(scaled, p.k)
        sk_scaled = elem_sym(scaled, p.k)
        # S_k = e^(k A r^2) sk_scaled  vs  u^(k alpha) = e^(k alpha A r^2)
        if sk_scaled <= 0.0:
            ok = False
            margin, log_domain = -math.inf, True
        else:
            log_lhs = p.k * A * r * r + math.log(sk_scaled)
            log_rhs = p.k * alpha * A * r * r
            ok = log_lhs - log_rhs >= -rel_tol
            if max(log_lhs, log_rhs) < _LOG_HUGE:
                margin = math.exp(log_lhs) - math.exp(log_rhs)
                log_domain = False
            else:
                margin = log_lhs - log_rhs
                log_domain = True
        passed = bool(ok and gamma_ok)
        if not passed and first_failure is None:
            first_failure = float(r)
        checks.append(RadiusCheck(float(r), passed, float(margin),
                                  bool(gamma_ok), log_domain))
    return SubsolutionReport(p, float(A), float(alpha), checks,
                             all(c.passed for c in checks), first_failure)
