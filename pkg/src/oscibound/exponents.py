"""Closed-form decay-exponent arithmetic, exact in rationals.

For a homogeneous phase of degree d with the rank-one condition, the
operator norm on L^p decays like |lambda|^{-gamma} with
gamma = (n_X/d)(1/p) + (n_Y/d)(1/p'), for p strictly inside
((d-n_Y+n_X)/(d-n_Y), (d-n_X+n_Y)/n_Y); the range closes when the
endpoint conditions (rank one + radial nondegeneracy on both sides) are
certified.  Damped operators |D|^sigma T_lambda obey a three-case decay
law with critical exponent (d-n_X-n_Y)/(2 d_D) at which a logarithmic
factor may appear.

All arithmetic is done in fractions.Fraction; callers render decimals
only for display.  p = infinity is handled via 1/p = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from .certify import CertificateResult, CertStatus
from .polynomials import PhaseDescriptor

PLike = Union[int, float, Fraction, str]

INF = math.inf


class HypothesisError(ValueError):
    """Raised when the theorem hypotheses (d > n_X + n_Y, p in [1, inf],
    sigma inside the damping strip) are violated."""


def as_p(p: PLike) -> Union[Fraction, float]:
    """Normalize an L^p index: Fraction for finite p, math.inf for infinity."""
    if isinstance(p, str):
        s = p.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return INF
        return Fraction(s)
    if isinstance(p, float) and math.isinf(p):
        return INF
    return Fraction(p)


def inv(p: Union[Fraction, float]) -> Fraction:
    return Fraction(0) if p == INF else 1 / Fraction(p)


def conjugate(p: PLike) -> Union[Fraction, float]:
    """Conjugate exponent p' with 1/p' = 1 - 1/p."""
    q = as_p(p)
    ip = inv(q)
    if ip == 1:
        return INF
    if ip == 0:
        return Fraction(1)
    return 1 / (1 - ip)


def _require_degree(n_X: int, n_Y: int, d: int):
    if d <= n_X + n_Y:
        raise HypothesisError(
            f"degree hypothesis fails: d={d} must exceed n_X+n_Y={n_X + n_Y}"
        )


def decay_exponent(n_X: int, n_Y: int, d: int, p: PLike) -> Fraction:
    """Sharp decay exponent gamma(p) = (n_X/d)(1/p) + (n_Y/d)(1/p')."""
    _require_degree(n_X, n_Y, d)
    q = as_p(p)
    ip = inv(q)
    if not 0 <= ip <= 1:
        raise HypothesisError(f"p={p} outside [1, inf]")
    return Fraction(n_X, d) * ip + Fraction(n_Y, d) * (1 - ip)


def admissible_p_range(
    n_X: int, n_Y: int, d: int, endpoint_eligible: bool = False
) -> Tuple[Fraction, Fraction, bool]:
    """(p_lower, p_upper, inclusive): the admissible L^p window
    ((d-n_Y+n_X)/(d-n_Y), (d-n_X+n_Y)/n_Y), closed iff both endpoint
    certificates hold."""
    _require_degree(n_X, n_Y, d)
    p_lower = Fraction(d - n_Y + n_X, d - n_Y)
    p_upper = Fraction(d - n_X + n_Y, n_Y)
    return p_lower, p_upper, bool(endpoint_eligible)


def critical_damping_exponent(n_X: int, n_Y: int, d: int, d_D: int) -> Fraction:
    _require_degree(n_X, n_Y, d)
    if d_D < 1:
        raise HypothesisError("damping degree d_D must be >= 1")
    return Fraction(d - n_X - n_Y, 2 * d_D)


def predicted_damping_decay(
    n_X: int, n_Y: int, d: int, d_D: int, sigma: PLike
) -> Tuple[Fraction, bool]:
    """(decay exponent, log factor present) for ||D|^sigma T_lambda| on L^2.

    Above the critical exponent the decay is 1/2 with no log; at the
    critical exponent 1/2 with a log factor; below it (but inside the strip
    sigma > -min(n_X,n_Y)/d_D) the decay is d_D*sigma/d + (n_X+n_Y)/(2d).
    """
    tau = critical_damping_exponent(n_X, n_Y, d, d_D)
    s = Fraction(as_p(sigma)) if as_p(sigma) != INF else None
    if s is None:
        return Fraction(1, 2), False
    strip_floor = Fraction(-min(n_X, n_Y), d_D)
    if s <= strip_floor:
        raise HypothesisError(
            f"sigma={s} at or below the damping strip floor {strip_floor}"
        )
    if s > tau:
        return Fraction(1, 2), False
    if s == tau:
        return Fraction(1, 2), True
    return Fraction(d_D, d) * s + Fraction(n_X + n_Y, 2 * d), False


def interpolation_exponent(
    a: PLike, n_X: int, theta: PLike
) -> Tuple[Fraction, Fraction]:
    """Weight/exponent bookkeeping for interpolation with change of power
    weights: returns (a*theta - (1-theta)*n_X, p with 1/p = theta/2 + 1-theta).

    Rejects a = -n_X/2 exactly: the weak-type argument needs 2a + n_X != 0.
    (The printed hypothesis reads a != -1/(2 n_X); the proof's substitution
    b = 2a + n_X pins the excluded value to -n_X/2.)
    """
    av = Fraction(as_p(a))
    th = Fraction(as_p(theta))
    if not 0 < th < 1:
        raise HypothesisError(f"theta={th} outside (0,1)")
    if 2 * av + n_X == 0:
        raise HypothesisError(f"a={av} excluded (2a + n_X must be nonzero)")
    weight = av * th - (1 - th) * n_X
    p = 1 / (th / 2 + 1 - th)
    return weight, p


def endpoint_eligibility(
    phase: PhaseDescriptor,
    rank_one: CertificateResult,
    radial: Tuple[CertificateResult, CertificateResult],
) -> Tuple[bool, Optional[str]]:
    """True iff d > n_X + n_Y and all three certificates are
    CertifiedPositive; otherwise (False, reason)."""
    if not phase.theorem_applicable:
        return False, f"degree hypothesis fails (d={phase.d} <= {phase.n_X + phase.n_Y})"
    checks = [("rank_one", rank_one), ("radial_x", radial[0]), ("radial_y", radial[1])]
    for name, cert in checks:
        if cert.status is CertStatus.INCONCLUSIVE:
            return False, f"{name} certificate inconclusive"
        if cert.status is not CertStatus.CERTIFIED_POSITIVE:
            return False, f"{name} certificate failed (witness found)"
    return True, None


@dataclass
class ExponentReport:
    """Bundle of the exponent arithmetic for one (phase, p) query."""

    n_X: int
    n_Y: int
    d: int
    p: Union[Fraction, float]
    gamma: Fraction
    p_lower: Fraction
    p_upper: Fraction
    endpoint_inclusive: bool
    sigma0: Fraction
    d_D: Optional[int] = None
    damping_exponent: Optional[Fraction] = None
    damping_log: Optional[bool] = None

    def to_dict(self) -> dict:
        def frac(x):
            if x is None:
                return None
            if x == INF:
                return {"value": None, "exact": "inf"}
            return {"value": float(x), "exact": f"{x}"}

        d = {
            "n_X": self.n_X,
            "n_Y": self.n_Y,
            "d": self.d,
            "p": frac(self.p),
            "gamma": float(self.gamma),
            "gamma_exact": f"{self.gamma}",
            "p_lower": frac(self.p_lower),
            "p_upper": frac(self.p_upper),
            "endpoint_inclusive": self.endpoint_inclusive,
            "sigma0": frac(self.sigma0),
        }
        if self.d_D is not None:
            d["d_D"] = self.d_D
            d["damping_exponent"] = frac(self.damping_exponent)
            d["damping_log"] = self.damping_log
        return d


def exponent_report(
    n_X: int,
    n_Y: int,
    d: int,
    p: PLike,
    endpoint_eligible: bool = False,
    d_D: Optional[int] = None,
    sigma: Optional[PLike] = None,
) -> ExponentReport:
    q = as_p(p)
    gamma = decay_exponent(n_X, n_Y, d, q)
    p_lower, p_upper, inclusive = admissible_p_range(n_X, n_Y, d, endpoint_eligible)
    damping_exponent = None
    damping_log = None
    if d_D is not None and sigma is not None:
        damping_exponent, damping_log = predicted_damping_decay(n_X, n_Y, d, d_D, sigma)
    return ExponentReport(
        n_X=n_X,
        n_Y=n_Y,
        d=d,
        p=q,
        gamma=gamma,
        p_lower=p_lower,
        p_upper=p_upper,
        endpoint_inclusive=inclusive,
        sigma0=Fraction(d - n_X - n_Y, 2),
        d_D=d_D,
        damping_exponent=damping_exponent,
        damping_log=damping_log,
    )
