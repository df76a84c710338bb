"""Closed-form radial reduction of S_k(D^2 u + mu |Du| I).

For u(x) = phi(|x|) with phi'(0) = 0 the augmented Hessian is a rank-one
update of the identity, so its spectrum and S_k value are available in closed
form.  The induced ODE has a divergence structure, and integrating it once
turns the radial problem into a Volterra integral equation

    phi'(r) = ( r^(k-n) e^(-n mu r) int_0^r (k/C(n-1,k-1))
               e^(n mu s) s^(n-1) (1+mu s)^(1-k) f(phi(s))^k ds )^(1/k)

whose pieces live here.  All functions accept scalars or ndarrays where it
matters for the solver hot path.
"""

import math
from dataclasses import dataclass

import numpy as np

from .symmetric import binom, mu_zero

__all__ = [
    "ProblemParams", "AdmissibilityError", "SingularityError",
    "radial_spectrum", "sk_radial", "chi", "volterra_integrand",
    "dphi_from_integral", "ode_residual", "ddphi_at_zero", "ddphi_from_ode",
]


class AdmissibilityError(ValueError):
    """Raised for parameter regimes with no admissible radial solution
    (k >= 2 with mu < 0: the off-diagonal eigenvalue changes sign at
    r = -1/mu and the spectrum leaves Gamma_k)."""


class SingularityError(ValueError):
    """Raised when the integrand factor (1 + mu s)^(1-k) hits 1 + mu s = 0
    with k >= 2 (only reachable outside the admissible regime)."""


@dataclass(frozen=True)
class ProblemParams:
    """Dimension n, Hessian order k, gradient coefficient mu."""

    n: int
    k: int
    mu: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or int(self.k) != self.k:
            raise ValueError("n and k must be integers")
        if self.n < 2:
            raise ValueError(f"need n >= 2, got n={self.n}")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")

    def admissible_regime(self) -> bool:
        """True iff entire admissible radial solutions are possible:
        k = 1 (any mu) or k >= 2 with mu >= 0."""
        return self.k == 1 or self.mu >= 0

    def mu0(self) -> float:
        return mu_zero(self.n, self.k)

    def ko_equiv_regime(self) -> bool:
        """True iff the integral growth condition is sharp (necessary and
        sufficient): mu < mu0 inside the admissible regime."""
        return self.admissible_regime() and self.mu < self.mu0()

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "mu": self.mu}


def radial_spectrum(p: ProblemParams, r: float, dphi: float,
                    ddphi: float) -> np.ndarray:
    """Eigenvalues of D^2 u + mu |Du| I at radius r for a radial profile.

    For r > 0: (phi'' + mu phi', ((1+mu r)/r) phi' repeated n-1 times).
    At r = 0 the matrix is isotropic: all n eigenvalues equal phi''(0).
    """
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    if r == 0:
        if dphi != 0:
            raise ValueError("a C^2 radial profile forces phi'(0) = 0; "
                             f"got phi'(0) = {dphi}")
        return np.full(p.n, float(ddphi))
    out = np.full(p.n, (1.0 + p.mu * r) / r * dphi)
    out[0] = ddphi + p.mu * dphi
    return out


def sk_radial(p: ProblemParams, r: float, dphi: float, ddphi: float) -> float:
    """S_k of the radial spectrum via the two-term closed form.

    O(1) per point (used in the solver hot loop); the generic elementary
    symmetric polynomial route is kept as a test oracle.
    """
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    if r == 0:
        if dphi != 0:
            raise ValueError("a C^2 radial profile forces phi'(0) = 0; "
                             f"got phi'(0) = {dphi}")
        return binom(p.n, p.k) * float(ddphi) ** p.k
    w = (1.0 + p.mu * r) / r * dphi
    # math.comb(n-1, k) is 0 for k = n, which is exactly the k = n case here
    return (binom(p.n - 1, p.k - 1) * (ddphi + p.mu * dphi) * w ** (p.k - 1)
            + math.comb(p.n - 1, p.k) * w ** p.k)


def chi(p: ProblemParams, r: float) -> float:
    """Integrating factor exponent chi(r) = n mu r + (n-k) ln r."""
    if r <= 0:
        raise ValueError(f"chi needs r > 0, got {r}")
    return p.n * p.mu * r + (p.n - p.k) * math.log(r)


def _smooth_factor(p: ProblemParams, f, s, phi_s):
    """G(s) = (k/C(n-1,k-1)) e^(n mu s) (1+mu s)^(1-k) f(phi(s))^k.

    The s^(n-1) weight is deliberately excluded: the quadrature integrates it
    exactly, and G itself is smooth down to s = 0.  Computed in the log
    domain when the (1+mu s) factor is positive (always, in the admissible
    regime) so overflow happens only where the true value overflows.
    """
    s = np.asarray(s, dtype=float)
    phi_s = np.asarray(phi_s, dtype=float)
    base = 1.0 + p.mu * s
    if p.k >= 2 and np.any(base == 0.0):
        raise SingularityError(
            f"integrand singular at 1 + mu s = 0 (mu={p.mu}, k={p.k})")
    logc = math.log(p.k) - math.log(binom(p.n - 1, p.k - 1))
    if p.k == 1 or np.all(base > 0.0):
        logG = logc + p.n * p.mu * s + p.k * f.log_eval(phi_s)
        if p.k >= 2:
            logG = logG + (1.0 - p.k) * np.log(base)
        with np.errstate(over="ignore"):
            return np.exp(logG)
    # 1 + mu s < 0 somewhere with k >= 2: outside the admissible regime,
    # but the pointwise formula is still defined away from the singularity.
    with np.errstate(over="ignore"):
        return (p.k / binom(p.n - 1, p.k - 1) * np.exp(p.n * p.mu * s)
                * base ** (1 - p.k) * f.pow_k(phi_s, p.k))


def volterra_integrand(p: ProblemParams, f, s, phi_s):
    """Integrand (k/C(n-1,k-1)) e^(n mu s) s^(n-1) (1+mu s)^(1-k) f(phi)^k.

    For k = 1 the (1+mu s) factor is absent, so the integrand is continuous
    on (0, inf) for every mu.
    """
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 0.0):
        raise ValueError("volterra_integrand needs s > 0")
    out = s_arr ** (p.n - 1) * _smooth_factor(p, f, s_arr, phi_s)
    return float(out) if np.ndim(s) == 0 else out


def dphi_from_integral(p: ProblemParams, r, I):
    """phi'(r) = (r^(k-n) e^(-n mu r) I)^(1/k), evaluated in the log domain.

    Accepts scalars or ndarrays; I = 0 maps to exactly 0 and an overflowing
    accumulated integral propagates as +inf for the blow-up detector.
    """
    r_arr = np.asarray(r, dtype=float)
    I_arr = np.asarray(I, dtype=float)
    if np.any(r_arr <= 0.0):
        raise ValueError("dphi_from_integral needs r > 0")
    if np.any(I_arr < 0.0):
        raise ValueError("accumulated integral must be >= 0")
    with np.errstate(divide="ignore"):
        logv = ((p.k - p.n) * np.log(r_arr) - p.n * p.mu * r_arr
                + np.log(I_arr)) / p.k
    with np.errstate(over="ignore"):
        out = np.exp(logv)
    return float(out) if (np.ndim(r) == 0 and np.ndim(I) == 0) else out


def ode_residual(p: ProblemParams, f, r: float, phi: float, dphi: float,
                 ddphi: float) -> float:
    """S_k(radial spectrum) - f(phi)^k; zero for exact solutions."""
    if r <= 0:
        raise ValueError(f"ode_residual needs r > 0, got {r}")
    return sk_radial(p, r, dphi, ddphi) - f.pow_k(phi, p.k)


def ddphi_at_zero(p: ProblemParams, f, a: float) -> float:
    """Exact second derivative of the radial solution at the origin:
    f(a) / C(n,k)^(1/k)."""
    return f.eval(a) / binom(p.n, p.k) ** (1.0 / p.k)


def ddphi_from_ode(p: ProblemParams, f, r: float, phi: float,
                   dphi: float) -> float:
    """Second derivative recovered by solving S_k = f(phi)^k for phi''.

    Profiles never store phi''; reconstructing it from the closed form avoids
    differentiating noisy data.  Needs ((1+mu r)/r) phi' != 0 when k >= 2.
    """
    if r <= 0:
        raise ValueError(f"ddphi_from_ode needs r > 0, got {r}")
    w = (1.0 + p.mu * r) / r * dphi
    denom = binom(p.n - 1, p.k - 1) * w ** (p.k - 1)
    if denom == 0.0:
        raise ZeroDivisionError(
            "cannot recover phi'' at a node with vanishing phi' for k >= 2")
    fk = f.pow_k(phi, p.k)
    return (fk - math.comb(p.n - 1, p.k) * w ** p.k) / denom - p.mu * dphi
