"""Exact multivariate homogeneous polynomial arithmetic.

Polynomials are stored as sparse maps from exponent multi-indices to exact
rational coefficients, so construction, differentiation and Hessian assembly
stay exact; conversion to floating point happens only at evaluation
boundaries.  Variable ordering is fixed throughout the package:
x_1..x_{n_X} first, then y_1..y_{n_Y}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

import numpy as np

MultiIndex = Tuple[int, ...]
Coeff = Union[int, Fraction]


class ZeroOnIntervalError(ValueError):
    """The restriction is identically zero on the interval, so the
    derivative/sup ratio is undefined."""


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c)  # exact binary value
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """Homogeneous polynomial with exact rational coefficients.

    Invariants: every stored multi-index has total degree exactly ``degree``
    and no zero coefficients are stored.  The zero polynomial has an empty
    term map (its ``degree`` records the intended homogeneity degree).
    """

    num_vars: int
    degree: int
    terms: Mapping[MultiIndex, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("num_vars must be positive")
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        clean: Dict[MultiIndex, Fraction] = {}
        for mi, c in self.terms.items():
            mi = tuple(int(e) for e in mi)
            if len(mi) != self.num_vars:
                raise ValueError(f"multi-index {mi} has wrong length")
            if any(e < 0 for e in mi):
                raise ValueError(f"multi-index {mi} has negative exponent")
            if sum(mi) != self.degree:
                raise ValueError(
                    f"multi-index {mi} has total degree {sum(mi)}, expected {self.degree}"
                )
            c = _as_fraction(c)
            if c != 0:
                clean[mi] = clean.get(mi, Fraction(0)) + c
        clean = {mi: c for mi, c in clean.items() if c != 0}
        object.__setattr__(self, "terms", clean)

    # -- basic queries ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mi: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(mi), Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        return (
            self.num_vars == other.num_vars
            and dict(self.terms) == dict(other.terms)
        )

    def __hash__(self):
        return hash((self.num_vars, self.degree, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if self.is_zero:
            return f"HomogeneousPolynomial(0; n={self.num_vars}, d={self.degree})"
        bits = []
        for mi in sorted(self.terms):
            mono = "*".join(
                f"v{i}^{e}" for i, e in enumerate(mi) if e
            ) or "1"
            bits.append(f"{self.terms[mi]}*{mono}")
        return " + ".join(bits)

    # -- arithmetic (exact) -----------------------------------------------

    def __add__(self, other: "HomogeneousPolynomial") -> "HomogeneousPolynomial":
        if self.num_vars != other.num_vars:
            raise ValueError("variable count mismatch")
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add polynomials of different degrees")
        merged = dict(self.terms)
        for mi, c in other.terms.items():
            merged[mi] = merged.get(mi, Fraction(0)) + c
        return HomogeneousPolynomial(self.num_vars, self.degree, merged)

    def __mul__(self, other) -> "HomogeneousPolynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        if self.num_vars != other.num_vars:
            raise ValueError("variable count mismatch")
        deg = self.degree + other.degree
        out: Dict[MultiIndex, Fraction] = {}
        for mi, c in self.terms.items():
            for mj, cj in other.terms.items():
                mk = tuple(a + b for a, b in zip(mi, mj))
                out[mk] = out.get(mk, Fraction(0)) + c * cj
        return HomogeneousPolynomial(self.num_vars, deg, out)

    __rmul__ = __mul__

    def scale(self, c) -> "HomogeneousPolynomial":
        c = _as_fraction(c)
        return HomogeneousPolynomial(
            self.num_vars, self.degree, {mi: c * v for mi, v in self.terms.items()}
        )

    def square(self) -> "HomogeneousPolynomial":
        return self * self

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, v: Sequence) -> Union[float, Fraction]:
        """Term-sum evaluation.  Fraction inputs give an exact Fraction;
        otherwise float."""
        if len(v) != self.num_vars:
            raise ValueError(
                f"point has {len(v)} coordinates, polynomial has {self.num_vars} variables"
            )
        exact = all(isinstance(c, (int, Fraction)) for c in v)
        if exact:
            total = Fraction(0)
            for mi, c in self.terms.items():
                term = c
                for base, e in zip(v, mi):
                    if e:
                        term *= Fraction(base) ** e
                total += term
            return total
        total_f = 0.0
        vf = [float(c) for c in v]
        for mi, c in self.terms.items():
            term = float(c)
            for base, e in zip(vf, mi):
                if e:
                    term *= base**e
            total_f += term
        return total_f

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an (npts, num_vars) array."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.shape[1] != self.num_vars:
            raise ValueError("point array has wrong number of columns")
        out = np.zeros(pts.shape[0])
        for mi, c in self.terms.items():
            term = np.full(pts.shape[0], float(c))
            for j, e in enumerate(mi):
                if e:
                    term *= pts[:, j] ** e
            out += term
        return out

    # -- calculus -----------------------------------------------------------

    def partial_derivative(self, axis: int) -> "HomogeneousPolynomial":
        if not 0 <= axis < self.num_vars:
            raise IndexError(f"axis {axis} out of range for {self.num_vars} variables")
        deg = max(self.degree - 1, 0)
        out: Dict[MultiIndex, Fraction] = {}
        for mi, c in self.terms.items():
            e = mi[axis]
            if e == 0:
                continue
            mj = mi[:axis] + (e - 1,) + mi[axis + 1 :]
            out[mj] = out.get(mj, Fraction(0)) + c * e
        return HomogeneousPolynomial(self.num_vars, deg, out)

    def gradient(self) -> Tuple["HomogeneousPolynomial", ...]:
        return tuple(self.partial_derivative(i) for i in range(self.num_vars))

    def restrict_to_block(self, start: int, length: int) -> "HomogeneousPolynomial":
        """Set all variables outside [start, start+length) to zero and
        re-index onto the block's variables."""
        out: Dict[MultiIndex, Fraction] = {}
        for mi, c in self.terms.items():
            if any(e for j, e in enumerate(mi) if not start <= j < start + length):
                continue
            out[mi[start : start + length]] = c
        return HomogeneousPolynomial(length, self.degree, out)

    def restrict_to_line(self, base: Sequence, direction: Sequence) -> Tuple[Fraction, ...]:
        """Coefficients (c_0..c_degree) of t -> p(base + t*direction), exact."""
        if len(base) != self.num_vars or len(direction) != self.num_vars:
            raise ValueError("base/direction dimension mismatch")
        base = [_as_fraction(b) for b in base]
        direction = [_as_fraction(b) for b in direction]
        coeffs = [Fraction(0)] * (self.degree + 1)
        for mi, c in self.terms.items():
            # expand prod_j (base_j + t dir_j)^{e_j} one variable at a time
            poly = [c]
            for b, u, e in zip(base, direction, mi):
                for _ in range(e):
                    nxt = [Fraction(0)] * (len(poly) + 1)
                    for k, a in enumerate(poly):
                        nxt[k] += a * b
                        nxt[k + 1] += a * u
                    poly = nxt
            for k, a in enumerate(poly):
                coeffs[k] += a
        return tuple(coeffs)

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "nvars": self.num_vars,
            "degree": self.degree,
            "terms": [
                {"exp": list(mi), "num": c.numerator, "den": c.denominator}
                for mi, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HomogeneousPolynomial":
        terms = {
            tuple(t["exp"]): Fraction(t["num"], t["den"]) for t in d["terms"]
        }
        return cls(d["nvars"], d["degree"], terms)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "HomogeneousPolynomial":
        return cls.from_dict(json.loads(s))


def monomial(num_vars: int, exponents: Sequence[int], coeff=1) -> HomogeneousPolynomial:
    mi = tuple(int(e) for e in exponents)
    return HomogeneousPolynomial(num_vars, sum(mi), {mi: _as_fraction(coeff)})


def zero_polynomial(num_vars: int, degree: int) -> HomogeneousPolynomial:
    return HomogeneousPolynomial(num_vars, degree, {})


@dataclass(frozen=True)
class PhaseDescriptor:
    """A homogeneous phase S on R^{n_X} x R^{n_Y} (x variables first)."""

    n_X: int
    n_Y: int
    S: HomogeneousPolynomial

    def __post_init__(self):
        if self.n_X < 1 or self.n_Y < 1:
            raise ValueError("n_X and n_Y must be positive")
        if self.S.num_vars != self.n_X + self.n_Y:
            raise ValueError(
                f"phase has {self.S.num_vars} variables, expected {self.n_X + self.n_Y}"
            )

    @property
    def d(self) -> int:
        return self.S.degree

    @property
    def theorem_applicable(self) -> bool:
        """Degree hypothesis d > n_X + n_Y for the sharp decay results."""
        return self.d > self.n_X + self.n_Y

    def to_dict(self) -> dict:
        d = self.S.to_dict()
        d["nx"] = self.n_X
        d["ny"] = self.n_Y
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PhaseDescriptor":
        return cls(d["nx"], d["ny"], HomogeneousPolynomial.from_dict(d))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "PhaseDescriptor":
        return cls.from_dict(json.loads(s))


# ---------------------------------------------------------------------------
# Derived objects: mixed Hessian and boundary gradients
# ---------------------------------------------------------------------------


def mixed_hessian(phase: PhaseDescriptor):
    """Matrix (n_X x n_Y) of second mixed partials d/dx_i d/dy_j S.

    Returns (matrix, degenerate) where degenerate flags d < 2 (all entries
    are then the zero polynomial).
    """
    n = phase.S.num_vars
    if phase.d < 2:
        zero = zero_polynomial(n, 0)
        return [[zero for _ in range(phase.n_Y)] for _ in range(phase.n_X)], True
    rows = []
    for i in range(phase.n_X):
        dx = phase.S.partial_derivative(i)
        rows.append(
            [dx.partial_derivative(phase.n_X + j) for j in range(phase.n_Y)]
        )
    return rows, False


def hessian_sum_of_squares(phase: PhaseDescriptor) -> HomogeneousPolynomial:
    """Sum of squared mixed-Hessian entries; vanishes exactly where the
    mixed Hessian has rank zero."""
    rows, degenerate = mixed_hessian(phase)
    n = phase.S.num_vars
    if degenerate:
        return zero_polynomial(n, 0)
    acc = zero_polynomial(n, 2 * (phase.d - 2))
    for row in rows:
        for entry in row:
            if not entry.is_zero:
                acc = acc + entry.square()
    return acc


def boundary_gradients(phase: PhaseDescriptor):
    """(P, Q) with P_i(x) = d/dy_i S(x, 0) and Q_j(y) = d/dx_j S(0, y).

    Each P_i is homogeneous of degree d-1 in the x variables alone, each Q_j
    in the y variables alone.
    """
    if phase.d < 2:
        raise ValueError("boundary gradients need degree >= 2")
    nX, nY = phase.n_X, phase.n_Y
    P = [
        phase.S.partial_derivative(nX + i).restrict_to_block(0, nX)
        for i in range(nY)
    ]
    Q = [
        phase.S.partial_derivative(j).restrict_to_block(nX, nY)
        for j in range(nX)
    ]
    return P, Q


def gradient_sup_bound(phase: PhaseDescriptor, radius: float = 1.0, samples: int = 10000) -> float:
    """Sampled max of |grad S| over the ball of given radius (diagnostic,
    used by the grid-resolution rule)."""
    rng = np.random.default_rng(20240711)
    n = phase.S.num_vars
    pts = rng.standard_normal((samples, n))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    radii = rng.random(samples) ** (1.0 / n)
    pts *= radius * radii[:, None]
    g2 = np.zeros(samples)
    for i in range(n):
        g2 += phase.S.partial_derivative(i).evaluate_many(pts) ** 2
    return float(np.sqrt(g2.max()))


# ---------------------------------------------------------------------------
# Example phase families
# ---------------------------------------------------------------------------


def gpt_example_phase(n_X: int, n_Y: int, d: int, family: int) -> PhaseDescriptor:
    """The two standard phase families with all structural conditions
    (family 1 needs n_X = n_Y; family 2 needs n_X > n_Y and odd degree).

    Family 1:  ( sum_i x_i^{d-1} y_i + sum_{i>=2} x_{i-1} y_i^{d-1}
                 + x_{n_X} y_1^{d-1} ) / (d-1)
    Family 2:  same cyclic block on the first n_Y of the x variables plus
               sum_{i>n_Y} sum_j x_i^{d-1} y_j, all over (d-1).
    """
    if d < 3:
        raise ValueError("example families require degree d >= 3")
    n = n_X + n_Y
    c = Fraction(1, d - 1)
    terms: Dict[MultiIndex, Fraction] = {}

    def put(x_exp: Dict[int, int], y_exp: Dict[int, int]):
        mi = [0] * n
        for i, e in x_exp.items():
            mi[i] += e
        for j, e in y_exp.items():
            mi[n_X + j] += e
        mi = tuple(mi)
        terms[mi] = terms.get(mi, Fraction(0)) + c

    if family == 1:
        if n_X != n_Y:
            raise ValueError("family 1 requires n_X = n_Y")
        for i in range(n_X):
            put({i: d - 1}, {i: 1})
        for i in range(1, n_X):
            put({i - 1: 1}, {i: d - 1})
        put({n_X - 1: 1}, {0: d - 1})
    elif family == 2:
        if not n_X > n_Y:
            raise ValueError("family 2 requires n_X > n_Y")
        if d % 2 == 0:
            raise ValueError("family 2 requires odd degree d")
        for i in range(n_Y):
            put({i: d - 1}, {i: 1})
        for i in range(1, n_Y):
            put({i - 1: 1}, {i: d - 1})
        put({n_Y - 1: 1}, {0: d - 1})
        for i in range(n_Y, n_X):
            for j in range(n_Y):
                put({i: d - 1}, {j: 1})
    else:
        raise ValueError("family must be 1 or 2")

    return PhaseDescriptor(n_X, n_Y, HomogeneousPolynomial(n, d, terms))


def builtin_phase(name: str) -> PhaseDescriptor:
    """Phase registry: 'gpt1:nX:nY:d', 'gpt2:nX:nY:d', and the named
    controls 'x2y2', 'x3y', 'xy'."""
    if name.startswith("gpt1:") or name.startswith("gpt2:"):
        fam = 1 if name[3] == "1" else 2
        try:
            nx, ny, d = (int(s) for s in name.split(":")[1:])
        except ValueError:
            raise ValueError(f"malformed family phase name {name!r}") from None
        return gpt_example_phase(nx, ny, d, fam)
    if name == "x2y2":
        return PhaseDescriptor(1, 1, monomial(2, (2, 2)))
    if name == "x3y":
        return PhaseDescriptor(1, 1, monomial(2, (3, 1)))
    if name == "xy":
        return PhaseDescriptor(1, 1, monomial(2, (1, 1)))
    raise ValueError(f"unknown phase name {name!r}")


# ---------------------------------------------------------------------------
# Univariate sup-norm ratio diagnostic
# ---------------------------------------------------------------------------


def _univariate_derivative(coeffs: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    return tuple(c * k for k, c in enumerate(coeffs) if k >= 1)


def _sampled_sup(coeffs: Sequence, lo: float, hi: float, samples: int) -> float:
    xs = np.linspace(lo, hi, samples)
    vals = np.zeros_like(xs)
    for c in reversed([float(c) for c in coeffs]):
        vals = vals * xs + c
    return float(np.abs(vals).max())


def derivative_sup_ratio(
    coeffs: Sequence[Coeff],
    interval: Tuple[float, float],
    d_max: int | None = None,
    samples: int = 4097,
) -> float:
    """Ratio  sum_{k<=d} |I*|^k sup_{I*}|P^(k)|  /  sup_I |P|  for a
    univariate polynomial given by coefficients (low order first), where I*
    doubles I about its center.  Suprema are approximated by dense uniform
    sampling with endpoints included.

    Raises ZeroOnIntervalError when P vanishes identically on I.
    """
    coeffs = [_as_fraction(c) for c in coeffs]
    if d_max is not None and len(coeffs) - 1 > d_max:
        raise ValueError(f"polynomial degree {len(coeffs) - 1} exceeds d_max={d_max}")
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError("interval must have positive length")
    if samples < 4097:
        raise ValueError("at least 4097 sample points required")
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    star_lo, star_hi = mid - 2 * half, mid + 2 * half
    star_len = star_hi - star_lo

    denom = _sampled_sup(coeffs, lo, hi, samples)
    if denom == 0.0:
        raise ZeroOnIntervalError("polynomial vanishes identically on the interval")

    num = 0.0
    deriv = tuple(coeffs)
    k = 0
    while deriv:
        num += star_len**k * _sampled_sup(deriv, star_lo, star_hi, samples)
        deriv = _univariate_derivative(deriv)
        k += 1
    return num / denom
