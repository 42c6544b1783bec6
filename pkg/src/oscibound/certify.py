"""Certified positivity of homogeneous polynomials on the unit sphere.

The sphere is parametrized by the boundary of the cube [-1,1]^n (whose
radial projection covers it), avoiding trigonometric rounding.  Each face
box is bounded via its center value plus a rigorous Lipschitz estimate
from coefficient magnitudes; boxes proven positive are pruned, the rest
subdivided.  Bounds transfer to the sphere through homogeneity.

Used to decide the rank-one condition (via the sum of squared mixed-Hessian
entries) and radial nondegeneracy (via the sums of squared boundary
gradients).  Inconclusive is a first-class outcome; the decision problem is
only semi-decidable at fixed precision near degenerate minima.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from .polynomials import (
    HomogeneousPolynomial,
    PhaseDescriptor,
    boundary_gradients,
    hessian_sum_of_squares,
    zero_polynomial,
)

DEFAULT_WITNESS_TOL = 1e-10
DEFAULT_MAX_DEPTH = 40
DEFAULT_BOX_BUDGET = 10_000_000

# Guard against floating-point rounding in center evaluations: pruning
# requires center - L*r > guard rather than > 0.
_ROUNDING_GUARD_REL = 1e-12


class CertStatus(Enum):
    CERTIFIED_POSITIVE = "CertifiedPositive"
    WITNESS_FOUND = "WitnessFound"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class CertificateResult:
    status: CertStatus
    lower_bound: Optional[float] = None
    witness: Optional[Tuple[float, ...]] = None
    witness_value: Optional[float] = None
    boxes_explored: int = 0
    max_depth_hit: bool = False

    @property
    def certified(self) -> bool:
        return self.status is CertStatus.CERTIFIED_POSITIVE

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "lower_bound": self.lower_bound,
            "witness": list(self.witness) if self.witness is not None else None,
            "witness_value": self.witness_value,
            "boxes_explored": self.boxes_explored,
            "max_depth_hit": self.max_depth_hit,
        }


class _Box:
    """Axis-aligned box on a face of the cube boundary; the face coordinate
    is frozen at +-1."""

    __slots__ = ("lo", "hi", "depth")

    def __init__(self, lo: Tuple[float, ...], hi: Tuple[float, ...], depth: int):
        self.lo = lo
        self.hi = hi
        self.depth = depth

    def center(self) -> Tuple[float, ...]:
        return tuple(0.5 * (a + b) for a, b in zip(self.lo, self.hi))

    def radius(self) -> float:
        return 0.5 * math.sqrt(sum((b - a) ** 2 for a, b in zip(self.lo, self.hi)))

    def max_abs(self) -> Tuple[float, ...]:
        return tuple(max(abs(a), abs(b)) for a, b in zip(self.lo, self.hi))

    def split(self) -> Tuple["_Box", "_Box"]:
        widths = [b - a for a, b in zip(self.lo, self.hi)]
        axis = widths.index(max(widths))
        mid = 0.5 * (self.lo[axis] + self.hi[axis])
        lo2 = list(self.lo)
        hi1 = list(self.hi)
        hi1[axis] = mid
        lo2[axis] = mid
        return (
            _Box(self.lo, tuple(hi1), self.depth + 1),
            _Box(tuple(lo2), self.hi, self.depth + 1),
        )


def _norm_range(box: _Box) -> Tuple[float, float]:
    """Exact (min, max) of the Euclidean norm over an axis-aligned box."""
    lo2 = 0.0
    hi2 = 0.0
    for a, b in zip(box.lo, box.hi):
        m = max(abs(a), abs(b))
        if a <= 0.0 <= b:
            mn = 0.0
        else:
            mn = min(abs(a), abs(b))
        lo2 += mn * mn
        hi2 += m * m
    return math.sqrt(lo2), math.sqrt(hi2)


def _lipschitz_bound(terms_f, box: _Box) -> float:
    """Euclidean norm of per-direction sup bounds for |grad p| on the box.

    For direction i each term contributes |c| * e_i * prod_j M_j^{e_j - d_ij}
    with M_j = max |coordinate j| over the box; rigorous by the triangle
    inequality and monotonicity of monomials in |coordinates|.
    """
    M = box.max_abs()
    n = len(M)
    acc = [0.0] * n
    for mi, ac, _ in terms_f:
        # monomial bound prod M_j^{e_j}
        full = ac
        for j, e in enumerate(mi):
            if e:
                full *= M[j] ** e
        for j, e in enumerate(mi):
            if e == 0:
                continue
            if M[j] == 0.0:
                # exponent moved off a zero coordinate: recompute directly
                part = ac * e
                for jj, ee in enumerate(mi):
                    eff = ee - (1 if jj == j else 0)
                    if eff:
                        part *= M[jj] ** eff
                acc[j] += part
            else:
                acc[j] += full * e / M[j]
    return math.sqrt(sum(a * a for a in acc))


def _eval_float(terms_f, v) -> float:
    total = 0.0
    for mi, _, c in terms_f:
        t = c
        for base, e in zip(v, mi):
            if e:
                t *= base**e
        total += t
    return total


def certify_positive_on_sphere(
    p: HomogeneousPolynomial,
    witness_tol: float = DEFAULT_WITNESS_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
    box_budget: int = DEFAULT_BOX_BUDGET,
) -> CertificateResult:
    """Branch-and-bound certification that p > 0 on the unit sphere.

    Callers pass sums of squares, so p >= 0 pointwise; a witness is a unit
    vector where |p| <= witness_tol.  CertifiedPositive comes with a
    rigorous sphere lower bound; exhaustion of depth or budget without a
    proof or witness yields Inconclusive (never silently positive).
    """
    n = p.num_vars
    deg = p.degree

    if p.is_zero:
        w = (1.0,) + (0.0,) * (n - 1)
        return CertificateResult(
            CertStatus.WITNESS_FOUND, witness=w, witness_value=0.0
        )

    terms_f = [(mi, abs(float(c)), float(c)) for mi, c in sorted(p.terms.items())]
    guard = _ROUNDING_GUARD_REL * sum(ac for _, ac, _ in terms_f)

    if n == 1:
        vals = [(_eval_float(terms_f, (s,)), s) for s in (1.0, -1.0)]
        vmin, s = min(vals)
        if abs(vmin) <= witness_tol:
            return CertificateResult(
                CertStatus.WITNESS_FOUND, witness=(s,), witness_value=vmin, boxes_explored=2
            )
        if vmin > 0:
            return CertificateResult(
                CertStatus.CERTIFIED_POSITIVE, lower_bound=vmin, boxes_explored=2
            )
        return CertificateResult(CertStatus.INCONCLUSIVE, boxes_explored=2)

    # initial faces of the cube boundary
    heap: List[Tuple[float, int, _Box]] = []
    seq = 0

    def push(box: _Box):
        nonlocal seq
        c = box.center()
        nc = math.sqrt(sum(t * t for t in c))
        val = _eval_float(terms_f, c) / nc**deg
        heapq.heappush(heap, (val, seq, box))
        seq += 1

    for axis in range(n):
        for sign in (1.0, -1.0):
            lo = [-1.0] * n
            hi = [1.0] * n
            lo[axis] = hi[axis] = sign
            push(_Box(tuple(lo), tuple(hi), 0))

    best_lower = math.inf
    boxes_explored = 0
    max_depth_hit = False
    stuck = False

    while heap:
        if boxes_explored >= box_budget:
            return CertificateResult(
                CertStatus.INCONCLUSIVE,
                boxes_explored=boxes_explored,
                max_depth_hit=max_depth_hit,
            )
        sphere_center_val, _, box = heapq.heappop(heap)
        boxes_explored += 1

        if abs(sphere_center_val) <= witness_tol:
            c = box.center()
            nc = math.sqrt(sum(t * t for t in c))
            w = tuple(t / nc for t in c)
            return CertificateResult(
                CertStatus.WITNESS_FOUND,
                witness=w,
                witness_value=_eval_float(terms_f, w),
                boxes_explored=boxes_explored,
                max_depth_hit=max_depth_hit,
            )

        center_val = _eval_float(terms_f, box.center())
        lip = _lipschitz_bound(terms_f, box)
        cube_lower = center_val - lip * box.radius()
        if cube_lower > guard:
            _, norm_hi = _norm_range(box)
            best_lower = min(best_lower, cube_lower / norm_hi**deg)
            continue

        if box.depth >= max_depth:
            max_depth_hit = True
            stuck = True
            continue

        for child in box.split():
            push(child)

    if stuck:
        return CertificateResult(
            CertStatus.INCONCLUSIVE,
            boxes_explored=boxes_explored,
            max_depth_hit=max_depth_hit,
        )
    return CertificateResult(
        CertStatus.CERTIFIED_POSITIVE,
        lower_bound=best_lower,
        boxes_explored=boxes_explored,
        max_depth_hit=max_depth_hit,
    )


def check_rank_one(
    phase: PhaseDescriptor,
    witness_tol: float = DEFAULT_WITNESS_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
    box_budget: int = DEFAULT_BOX_BUDGET,
) -> CertificateResult:
    """Decide whether the mixed Hessian of the phase has rank >= 1 away
    from the origin, by certifying positivity of the sum of its squared
    entries on the unit sphere."""
    target = hessian_sum_of_squares(phase)
    return certify_positive_on_sphere(target, witness_tol, max_depth, box_budget)


def check_radial_nondegeneracy(
    phase: PhaseDescriptor,
    witness_tol: float = DEFAULT_WITNESS_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
    box_budget: int = DEFAULT_BOX_BUDGET,
) -> Tuple[CertificateResult, CertificateResult]:
    """Certify that the boundary gradients do not vanish away from the
    origin on each side: sum_i P_i(x)^2 > 0 on the x-sphere and
    sum_j Q_j(y)^2 > 0 on the y-sphere."""
    P, Q = boundary_gradients(phase)

    def sos(polys, nvars):
        deg = 2 * (phase.d - 1)
        acc = zero_polynomial(nvars, deg)
        for q in polys:
            if not q.is_zero:
                acc = acc + q.square()
        return acc

    x_side = certify_positive_on_sphere(
        sos(P, phase.n_X), witness_tol, max_depth, box_budget
    )
    y_side = certify_positive_on_sphere(
        sos(Q, phase.n_Y), witness_tol, max_depth, box_budget
    )
    return x_side, y_side
