"""Closed-form eigenvalue lower bounds and comparison verdicts.

Two bounds are implemented:

* Schouten operator, constant scalar curvature R, sectional curvature >= K0,
  Ricci >= L0 (n >= 4):
      mu1 >= (n-2)/(2(n-1)) * R/(R - 2 L0) * Gamma,
      Gamma = L0^2 - (R/(2(n-1)) + K0) L0 + K0 R / 2,
  with equality on the round sphere.

* Linearized operator L1 of a convex hypersurface with 0 < alpha I <= A <=
  a alpha I in a space form of curvature kappa:
      mu >= 1/2 * (n a)/(n a - 1) * [2(n-1) alpha^3 (n - a^2) + C_kappa - sigma],
  where C_kappa = 2 kappa (n-1)^2 alpha for kappa > 0 and
  2 kappa (n-1)^2 a alpha for kappa <= 0; equality on geodesic spheres
  (a = 1, sigma = 0) where mu = n(n-1) alpha (alpha^2 + kappa).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import DenominatorNonpositive, DimensionTooSmall

VERDICT_EQUALITY = "EqualityCase"
VERDICT_INEQUALITY = "InequalityHolds"
VERDICT_HYPOTHESIS_FAILED = "HypothesisFailed"
VERDICT_VIOLATION = "ViolationSuspected"


@dataclass(frozen=True)
class SchoutenBoundInput:
    n: int
    R: float
    K0: float
    L0: float
    harmonic_weyl_checked: bool = True
    R_constant_checked: bool = True
    schouten_positive_checked: bool = True

    @property
    def lambda0(self):
        """Least Schouten eigenvalue bound: L0 - R/(2(n-1))."""
        return self.L0 - self.R / (2.0 * (self.n - 1))

    @property
    def gamma(self):
        return (self.L0 ** 2
                - (self.R / (2.0 * (self.n - 1)) + self.K0) * self.L0
                + 0.5 * self.K0 * self.R)

    @property
    def hypotheses_ok(self):
        return (self.harmonic_weyl_checked and self.R_constant_checked
                and self.schouten_positive_checked)


@dataclass(frozen=True)
class NewtonBoundInput:
    n: int
    kappa: float
    alpha: float
    a: float
    sigma: float
    convexity_checked: bool = True

    @property
    def c_kappa(self):
        n, al = self.n, self.alpha
        if self.kappa > 0.0:
            return 2.0 * self.kappa * (n - 1.0) ** 2 * al
        return 2.0 * self.kappa * (n - 1.0) ** 2 * self.a * al

    @property
    def hypotheses_ok(self):
        return (self.convexity_checked and self.alpha > 0.0
                and self.a >= 1.0 and self.n * self.a > 1.0)


@dataclass(frozen=True)
class BoundReport:
    bound_value: float
    computed_mu1: Optional[float]
    margin: Optional[float]
    verdict: str
    tolerance: float
    hypotheses_ok: bool
    notes: dict = field(default_factory=dict)


def schouten_bound(n, R, K0, L0, check_flags=None):
    """Evaluate the Schouten-operator lower bound.

    Accepts either positional scalars or a SchoutenBoundInput as the first
    argument (remaining arguments ignored in that case).
    """
    if isinstance(n, SchoutenBoundInput):
        inp = n
    else:
        inp = SchoutenBoundInput(n=int(n), R=float(R), K0=float(K0),
                                 L0=float(L0))
    if inp.n < 4:
        raise DimensionTooSmall("Schouten bound requires n >= 4, got %d"
                                % inp.n)
    den = inp.R - 2.0 * inp.L0
    if den <= 0.0:
        raise DenominatorNonpositive("R - 2*L0 = %g <= 0" % den)
    return ((inp.n - 2.0) / (2.0 * (inp.n - 1.0))) * (inp.R / den) * inp.gamma


def newton_bound(n, kappa=None, alpha=None, a=None, sigma=None):
    """Evaluate the L1 lower bound; kappa's sign selects the variant."""
    if isinstance(n, NewtonBoundInput):
        inp = n
    else:
        inp = NewtonBoundInput(n=int(n), kappa=float(kappa),
                               alpha=float(alpha), a=float(a),
                               sigma=float(sigma))
    if inp.alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if inp.a < 1.0:
        raise ValueError("a must be >= 1")
    if inp.n * inp.a <= 1.0:
        raise ValueError("n*a must exceed 1")
    n_, al, a_ = inp.n, inp.alpha, inp.a
    core = 2.0 * (n_ - 1.0) * al ** 3 * (n_ - a_ ** 2) + inp.c_kappa - inp.sigma
    return 0.5 * (n_ * a_ / (n_ * a_ - 1.0)) * core


def sphere_equality_value(n, alpha, kappa):
    """mu(L1) on the umbilic geodesic sphere: n(n-1) alpha (alpha^2 + kappa)."""
    return n * (n - 1.0) * alpha * (alpha ** 2 + kappa)


def compare(bound_input, mu1, error_estimate=0.0, analytic=True):
    """Build a BoundReport comparing a computed/analytic mu1 to the bound.

    Equality tolerance: 1e-6 relative for analytic values, 3x the supplied
    refinement error estimate otherwise.  ViolationSuspected only fires when
    the margin is below minus the error estimate.
    """
    if isinstance(bound_input, SchoutenBoundInput):
        bound = schouten_bound(bound_input, None, None, None)
    elif isinstance(bound_input, NewtonBoundInput):
        bound = newton_bound(bound_input)
    else:
        raise TypeError("expected SchoutenBoundInput or NewtonBoundInput")
    mu1 = float(mu1)
    margin = mu1 - bound
    scale = max(abs(mu1), abs(bound), 1e-300)
    tol = 1e-6 * scale if analytic else 3.0 * float(error_estimate)
    if not bound_input.hypotheses_ok:
        verdict = VERDICT_HYPOTHESIS_FAILED
    elif abs(margin) <= tol:
        verdict = VERDICT_EQUALITY
    elif margin > 0.0:
        verdict = VERDICT_INEQUALITY
    elif margin < -max(float(error_estimate), 0.0):
        verdict = VERDICT_VIOLATION
    else:
        verdict = VERDICT_INEQUALITY  # within discretization noise of zero
    notes = {"error_estimate": float(error_estimate), "analytic": analytic}
    return BoundReport(bound_value=bound, computed_mu1=mu1, margin=margin,
                       verdict=verdict, tolerance=tol,
                       hypotheses_ok=bound_input.hypotheses_ok, notes=notes)
