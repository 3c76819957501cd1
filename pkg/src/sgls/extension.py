"""Reflection extension across the hyperplane x_d = 0.

A field f known on the upper half-space is extended to all of R^d by a
weighted sum of compressed reflections,

    Lf(x~, x_d) = sum_{k=1}^{m+1} c_k f(x~, -k x_d)   for x_d < 0,

with Lf = f on x_d >= 0.  The weights solve the (m+1) x (m+1) system
sum_k (-k)^l c_k = 1 for l = 0..m, which makes one-sided derivatives up
to order m match at the boundary.  Coefficients are computed in exact
rational arithmetic (the Vandermonde-type matrix is ill-conditioned in
floating point but harmless over the rationals) and cross-checked
against the Lagrange closed form c_k = prod_{j != k} (1+j)/(j-k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CoefficientOrderError, DerivativeOrderError
from .fields import Field, as_multi_index

__all__ = [
    "HestenesCoefficients",
    "hestenes_coefficients",
    "coefficient_residuals",
    "extension_constant_sharp",
    "operator_norm_bound",
    "ExtendedField",
    "extend",
    "extended_derivative",
]

# Policy cap: exact arithmetic would go further, but coefficient and
# constant growth (C(m) is already ~2.7e5 at m=5) makes larger orders
# useless for numerical work.
M_CAP = 12


def _solve_rational(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Exact Gaussian elimination with partial (nonzero) pivoting."""
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular coefficient system")
        a[col], a[pivot] = a[pivot], a[col]
        inv = Fraction(1, 1) / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def _lagrange_coefficients(m: int) -> list[Fraction]:
    """Closed form: c_k = prod_{j != k, 1 <= j <= m+1} (1+j)/(j-k)."""
    n = m + 1
    out = []
    for k in range(1, n + 1):
        prod = Fraction(1, 1)
        for j in range(1, n + 1):
            if j != k:
                prod *= Fraction(1 + j, j - k)
        out.append(prod)
    return out


@dataclass(frozen=True)
class HestenesCoefficients:
    """Exact reflection weights c_1..c_{m+1} and the constant C(m).

    C(m) = sum_k |c_k| k^m is the triangle-inequality constant; 1 + C(m)
    bounds the extension operator norm on every weighted Sobolev scale
    this package computes.  Instances are normally produced by
    :func:`hestenes_coefficients`, which guarantees the defining
    identities; hand-built instances (e.g. for fault injection in the
    verification suite) carry no such guarantee.
    """

    m: int
    c: tuple[Fraction, ...]
    C_of_m: Fraction

    @property
    def bound(self) -> Fraction:
        return 1 + self.C_of_m

    def c_floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.c])


def hestenes_coefficients(m: int) -> HestenesCoefficients:
    """Solve the reflection-weight system exactly for smoothness order m.

    Solves sum_{k=1}^{m+1} (-k)^l c_k = 1, l = 0..m, over the rationals,
    verifies a zero residual for every l, and cross-checks the solution
    against the Lagrange closed form.
    """
    if m < 0:
        raise CoefficientOrderError(f"smoothness order must be >= 0, got {m}")
    if m > M_CAP:
        raise CoefficientOrderError(
            f"smoothness order {m} above policy cap {M_CAP}"
        )
    n = m + 1
    matrix = [[Fraction(-k) ** l for k in range(1, n + 1)] for l in range(0, m + 1)]
    rhs = [Fraction(1) for _ in range(n)]
    c = _solve_rational(matrix, rhs)
    if c != _lagrange_coefficients(m):
        raise RuntimeError("solver and closed form disagree; this is a bug")
    for l in range(m + 1):
        if sum(Fraction(-k) ** l * c[k - 1] for k in range(1, n + 1)) != 1:
            raise RuntimeError("nonzero residual in exact solve; this is a bug")
    big_c = sum(abs(ck) * Fraction(k) ** m for k, ck in enumerate(c, start=1))
    return HestenesCoefficients(m=m, c=tuple(c), C_of_m=big_c)


def coefficient_residuals(coeffs: HestenesCoefficients) -> list[Fraction]:
    """Exact residuals sum_k (-k)^l c_k - 1 for l = 0..m (all zero iff valid)."""
    n = coeffs.m + 1
    return [
        sum(Fraction(-k) ** l * coeffs.c[k - 1] for k in range(1, n + 1)) - 1
        for l in range(coeffs.m + 1)
    ]


def extension_constant_sharp(coeffs: HestenesCoefficients, alpha_d: int,
                             p: float) -> float:
    """Per-(alpha_d, p) triangle-inequality constant sum_k |c_k| k^(alpha_d - 1/p).

    Always <= C(m); p = math.inf gives sum_k |c_k| k^alpha_d.
    """
    if alpha_d < 0 or alpha_d > coeffs.m:
        raise DerivativeOrderError(
            f"normal derivative order {alpha_d} outside 0..{coeffs.m}"
        )
    if p < 1:
        raise ValueError(f"exponent must be >= 1, got {p}")
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    return float(sum(abs(float(ck)) * k ** (alpha_d - inv_p)
                     for k, ck in enumerate(coeffs.c, start=1)))


def operator_norm_bound(coeffs: HestenesCoefficients) -> Fraction:
    """Guaranteed bound 1 + C(m) on the extension operator norm (exact)."""
    return 1 + coeffs.C_of_m


@dataclass(frozen=True, kw_only=True)
class ExtendedField(Field):
    """The extension Lf: equals the base field on x_d >= 0 exactly.

    Derivatives are available up to order m only; above that the two
    sides need not match across the boundary, so requests are refused
    rather than silently returning one-sided values.
    """

    base: Field
    coeffs: HestenesCoefficients


def extend(base: Field, coeffs: HestenesCoefficients) -> ExtendedField:
    """Build the reflection extension of a field known on x_d >= 0.

    Evaluation below the boundary reaches up to (m+1)|x_d| above it, so
    the base field must be evaluable there (builtins are global; grid
    fields raise their own domain errors if the reach leaves the box).
    """
    if base.m_max < coeffs.m:
        raise DerivativeOrderError(
            f"base field provides derivatives to order {base.m_max} "
            f"< required {coeffs.m}"
        )
    weights = coeffs.c_floats()
    d = base.dim

    def reflected(pts: np.ndarray, k: int) -> np.ndarray:
        out = pts.copy()
        out[:, -1] = -k * pts[:, -1]
        return out

    def ev(pts: np.ndarray) -> np.ndarray:
        xd = pts[:, -1]
        out = np.empty(pts.shape[0])
        up = xd >= 0.0  # boundary points evaluate from the upper side
        if up.any():
            out[up] = base.eval_fn(pts[up])
        lo = ~up
        if lo.any():
            lower_pts = pts[lo]
            acc = np.zeros(lower_pts.shape[0])
            for k, ck in enumerate(weights, start=1):
                acc += ck * base.eval_fn(reflected(lower_pts, k))
            out[lo] = acc
        return out

    def dv(alpha, pts: np.ndarray) -> np.ndarray:
        mi = as_multi_index(alpha, d)
        xd = pts[:, -1]
        out = np.empty(pts.shape[0])
        up = xd >= 0.0
        if up.any():
            out[up] = base.deriv_fn(mi, pts[up])
        lo = ~up
        if lo.any():
            lower_pts = pts[lo]
            acc = np.zeros(lower_pts.shape[0])
            ad = mi.normal_component
            for k, ck in enumerate(weights, start=1):
                acc += ck * (-k) ** ad * base.deriv_fn(mi, reflected(lower_pts, k))
            out[lo] = acc
        return out

    decay = None
    if base.decay_radius is not None:
        # Reflected points are no closer to the origin than the original,
        # so the base certificate transfers with the weight mass factored in.
        mass = float(sum(abs(float(ck)) * k ** coeffs.m
                         for k, ck in enumerate(weights, start=1)))
        base_radius = base.decay_radius
        decay = lambda tol: base_radius(tol / max(mass, 1.0))

    return ExtendedField(
        dim=d,
        m_max=coeffs.m,
        eval_fn=ev,
        deriv_fn=dv,
        decay_radius=decay,
        label=f"extend[m={coeffs.m}]({base.label})",
        base=base,
        coeffs=coeffs,
    )


def extended_derivative(ext: ExtendedField, alpha, x):
    """D^alpha (Lf) at x: base derivative for x_d >= 0, the weighted
    reflected sum for x_d < 0.  Orders above m raise DerivativeOrderError."""
    return ext.deriv(alpha, x)
