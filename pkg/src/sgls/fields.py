"""Scalar fields on R^d with derivative access up to a declared order.

Builtin fields are separable products of 1-D factors whose n-th derivatives
are available in closed form (Hermite recurrences for Gaussians, polynomial
algebra for bumps and tapers).  Keeping builtin derivatives analytic means
downstream norm and extension-bound checks are limited by quadrature error
only, never by numerical differentiation.

Grid-sampled fields are the ingestion path for external data: multilinear
interpolation for values, central finite differences for derivatives up to
total order 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.hermite_e import hermeval

from .errors import DerivativeOrderError, OutOfDomainError

__all__ = [
    "MultiIndex",
    "as_multi_index",
    "multi_indices_up_to",
    "Field",
    "HalfSpaceDomain",
    "Factor1D",
    "GaussianFactor",
    "PolynomialFactor",
    "BumpFactor",
    "CosineFactor",
    "ProductFactor",
    "separable_field",
    "scale_field",
    "gaussian_field",
    "poly_times_bump_field",
    "bump_field",
    "grid_field",
    "grid_field_from_csv",
    "write_grid_csv",
]

# Degree/order caps for the analytic builtins.  These are bookkeeping
# policies, not numerical limits.
_POLY_DEGREE_CAP = 10
_DEFAULT_ANALYTIC_M_MAX = 8
_BUMP_M_MAX = 6


# ---------------------------------------------------------------------------
# Multi-indices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiIndex:
    """A tuple of nonnegative integers selecting a mixed partial derivative.

    The last component is the normal (x_d) component, which controls the
    reflection factors in the extension operator.
    """

    components: tuple[int, ...]

    def __post_init__(self):
        comps = tuple(int(a) for a in self.components)
        if len(comps) < 1:
            raise ValueError("multi-index needs dimension >= 1")
        if any(a < 0 for a in comps):
            raise ValueError(f"multi-index components must be >= 0, got {comps}")
        object.__setattr__(self, "components", comps)

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def order(self) -> int:
        return sum(self.components)

    @property
    def normal_component(self) -> int:
        return self.components[-1]

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> int:
        return self.components[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.components)

    @staticmethod
    def zero(dim: int) -> "MultiIndex":
        return MultiIndex((0,) * dim)


def as_multi_index(alpha, dim: int | None = None) -> MultiIndex:
    """Coerce a tuple/list/MultiIndex to MultiIndex, checking dimension."""
    mi = alpha if isinstance(alpha, MultiIndex) else MultiIndex(tuple(alpha))
    if dim is not None and mi.dim != dim:
        raise ValueError(f"multi-index dimension {mi.dim} != field dimension {dim}")
    return mi


def multi_indices_up_to(d: int, m: int) -> list[MultiIndex]:
    """All multi-indices with |alpha| <= m in graded-lexicographic order.

    Within each total degree, the index with the larger leading component
    comes first, so for d=2, m=1 the order is (0,0), (1,0), (0,1).
    The list has exactly binomial(d+m, d) entries.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if m < 0:
        raise ValueError("order must be >= 0")

    def compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for head in range(total, -1, -1):
            for rest in compositions(total - head, parts - 1):
                yield (head,) + rest

    out: list[MultiIndex] = []
    for degree in range(m + 1):
        out.extend(MultiIndex(c) for c in compositions(degree, d))
    return out


# ---------------------------------------------------------------------------
# Point handling
# ---------------------------------------------------------------------------


def _as_points(x, dim: int) -> tuple[np.ndarray, bool]:
    """Normalize input to an (n, dim) float array; flag single-point input."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        if dim != 1:
            raise ValueError(f"scalar point given for a {dim}-dimensional field")
        return arr.reshape(1, 1), True
    if arr.ndim == 1:
        if arr.shape[0] == dim:
            return arr.reshape(1, dim), True
        if dim == 1:
            return arr.reshape(-1, 1), False
        raise ValueError(f"point of length {arr.shape[0]} given for dimension {dim}")
    if arr.ndim == 2 and arr.shape[1] == dim:
        return arr, False
    raise ValueError(f"expected points of shape (n, {dim}), got {arr.shape}")


# ---------------------------------------------------------------------------
# Field
# ---------------------------------------------------------------------------


@dataclass(frozen=True, kw_only=True)
class Field:
    """A scalar function on R^d with derivatives up to order ``m_max``.

    ``eval_fn`` and ``deriv_fn`` act on (n, dim) arrays and return (n,)
    arrays; use :meth:`eval` / :meth:`deriv` for scalar-friendly access.
    ``decay_radius(tol)``, when present, returns a radius R such that
    |D^alpha f(x)| <= tol for every |x|_inf >= R and |alpha| <= m_max;
    fields without it must be integrated over explicit truncation boxes.
    """

    dim: int
    m_max: int
    eval_fn: Callable[[np.ndarray], np.ndarray]
    deriv_fn: Callable[[MultiIndex, np.ndarray], np.ndarray]
    decay_radius: Callable[[float], float] | None = None
    label: str = "field"

    def eval(self, x):
        pts, single = _as_points(x, self.dim)
        vals = np.asarray(self.eval_fn(pts), dtype=float)
        return float(vals[0]) if single else vals

    def deriv(self, alpha, x):
        mi = as_multi_index(alpha, self.dim)
        if mi.order > self.m_max:
            raise DerivativeOrderError(
                f"derivative order {mi.order} exceeds m_max={self.m_max} "
                f"for field '{self.label}'"
            )
        if mi.order == 0:
            return self.eval(x)  # D^0 f = f, by construction
        pts, single = _as_points(x, self.dim)
        vals = np.asarray(self.deriv_fn(mi, pts), dtype=float)
        return float(vals[0]) if single else vals


@dataclass(frozen=True)
class HalfSpaceDomain:
    """Integration region: one side of the hyperplane x_d = 0, or all of R^d.

    ``side`` is "upper" (x_d >= 0), "lower" (x_d <= 0) or "full".  The
    optional truncation box bounds the quadrature region; without it, norm
    routines fall back to the field's decay certificate.
    """

    dim: int
    side: str = "upper"
    truncation_box: "object | None" = None  # quadrature.Box; duck-typed here

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if self.side not in ("upper", "lower", "full"):
            raise ValueError(f"side must be 'upper', 'lower' or 'full', got {self.side!r}")
        box = self.truncation_box
        if box is not None:
            if len(box.lower) != self.dim:
                raise ValueError("truncation box dimension mismatch")
            if self.side == "upper" and box.upper[-1] <= 0:
                raise ValueError("upper half-space box lies entirely below x_d = 0")
            if self.side == "lower" and box.lower[-1] >= 0:
                raise ValueError("lower half-space box lies entirely above x_d = 0")


# ---------------------------------------------------------------------------
# 1-D factors
# ---------------------------------------------------------------------------


class Factor1D:
    """One-dimensional building block with closed-form n-th derivatives."""

    def eval_deriv(self, n: int, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def tail_radius(self, n_max: int, tol: float) -> float | None:
        """Radius r with |d^n/dt^n| <= tol for |t| >= r, all n <= n_max.

        None means the factor has no decay certificate.
        """
        return None

    def sup_bound(self, n_max: int) -> float:
        """Upper bound on sup_t |d^n/dt^n| over n <= n_max (may be inf)."""
        r = self.tail_radius(n_max, 1.0)
        if r is None:
            return math.inf
        grid = np.linspace(-r - 1.0, r + 1.0, 4001)
        worst = max(float(np.max(np.abs(self.eval_deriv(n, grid)))) for n in range(n_max + 1))
        return 1.05 * max(worst, 1.0)


class GaussianFactor(Factor1D):
    """exp(-(t - center)^2 / (2 scale^2)); derivatives via Hermite recurrence."""

    def __init__(self, center: float = 0.0, scale: float = 1.0):
        if scale <= 0:
            raise ValueError("scale must be > 0")
        self.center = float(center)
        self.scale = float(scale)

    def eval_deriv(self, n: int, t: np.ndarray) -> np.ndarray:
        u = (np.asarray(t, dtype=float) - self.center) / self.scale
        g = np.exp(-0.5 * u * u)
        if n == 0:
            return g
        basis = np.zeros(n + 1)
        basis[n] = 1.0
        he_n = hermeval(u, basis)
        return (-1.0 / self.scale) ** n * he_n * g

    def tail_radius(self, n_max: int, tol: float) -> float:
        if tol <= 0:
            raise ValueError("tolerance must be > 0")
        # |He_n(u)| e^{-u^2/2} is decreasing beyond the last Hermite zero
        # (< 2 sqrt(n+1)); bisect on the envelope from there.
        lo = 2.0 * math.sqrt(n_max + 1.0) + 1.0
        hi = lo
        while self._envelope(n_max, hi) > tol:
            hi *= 2.0
            if hi > 1e6:
                break
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if self._envelope(n_max, mid) > tol:
                lo = mid
            else:
                hi = mid
        return abs(self.center) + hi * self.scale

    def _envelope(self, n_max: int, u: float) -> float:
        val = 0.0
        for n in range(n_max + 1):
            basis = np.zeros(n + 1)
            basis[n] = 1.0
            he = float(hermeval(u, basis))
            val = max(val, abs(he) * math.exp(-0.5 * u * u) / self.scale**n)
        return val


class PolynomialFactor(Factor1D):
    """Plain polynomial in one variable (no decay certificate)."""

    def __init__(self, coeffs: Sequence[float]):
        self.poly = Polynomial(np.asarray(coeffs, dtype=float))
        self._derivs = {0: self.poly}

    @property
    def degree(self) -> int:
        return len(self.poly.coef) - 1

    def eval_deriv(self, n: int, t: np.ndarray) -> np.ndarray:
        if n not in self._derivs:
            self._derivs[n] = self.poly.deriv(n)
        return self._derivs[n](np.asarray(t, dtype=float))


def _smoothstep(q: int) -> Polynomial:
    """Polynomial S with S(0)=0, S(1)=1 and S^(i)(0)=S^(i)(1)=0 for 1<=i<=q."""
    coeffs = np.zeros(2 * q + 2)
    for n in range(q + 1):
        coeffs[q + n + 1] = (-1) ** n * math.comb(q + n, n) * math.comb(2 * q + 1, q - n)
    return Polynomial(coeffs)


class BumpFactor(Factor1D):
    """Plateau bump: exactly 1 on [center-inner, center+inner], smoothly 0
    beyond |t - center| >= outer.  C^q regularity at the joins."""

    def __init__(self, center: float = 0.0, inner: float = 1.0, outer: float = 2.0,
                 smoothness: int = 7):
        if not (0 < inner < outer):
            raise ValueError("need 0 < inner < outer")
        self.center = float(center)
        self.inner = float(inner)
        self.outer = float(outer)
        self.smoothness = int(smoothness)
        self._ramp = _smoothstep(self.smoothness)
        self._ramp_derivs = {0: self._ramp}

    def _ramp_deriv(self, n: int) -> Polynomial:
        if n not in self._ramp_derivs:
            self._ramp_derivs[n] = self._ramp.deriv(n)
        return self._ramp_derivs[n]

    def eval_deriv(self, n: int, t: np.ndarray) -> np.ndarray:
        u = np.asarray(t, dtype=float) - self.center
        width = self.outer - self.inner
        out = np.zeros_like(u)
        if n == 0:
            out[np.abs(u) <= self.inner] = 1.0
        taper = (np.abs(u) > self.inner) & (np.abs(u) < self.outer)
        if np.any(taper):
            w = (np.abs(u[taper]) - self.inner) / width
            vals = self._ramp_deriv(n)(w) / width**n
            if n == 0:
                vals = 1.0 - vals
            else:
                # d/dt|u| = sign(u); odd orders flip sign on the left branch
                vals = -vals * np.sign(u[taper]) ** n
            out[taper] = vals
        return out

    def tail_radius(self, n_max: int, tol: float) -> float:
        # Compactly supported: identically zero beyond the outer radius.
        return abs(self.center) + self.outer


class CosineFactor(Factor1D):
    """cos(freq * t + phase); bounded, no decay."""

    def __init__(self, freq: float = 1.0, phase: float = 0.0):
        self.freq = float(freq)
        self.phase = float(phase)

    def eval_deriv(self, n: int, t: np.ndarray) -> np.ndarray:
        arg = self.freq * np.asarray(t, dtype=float) + self.phase + n * math.pi / 2.0
        return self.freq**n * np.cos(arg)

    def sup_bound(self, n_max: int) -> float:
        return max(1.0, abs(self.freq)) ** n_max


class ProductFactor(Factor1D):
    """Product of two factors; derivatives via the Leibniz rule."""

    def __init__(self, left: Factor1D, right: Factor1D):
        self.left = left
        self.right = right

    def eval_deriv(self, n: int, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        total = np.zeros_like(t)
        for i in range(n + 1):
            total += math.comb(n, i) * self.left.eval_deriv(i, t) * self.right.eval_deriv(n - i, t)
        return total

    def tail_radius(self, n_max: int, tol: float) -> float | None:
        # A compactly supported member kills the whole product.
        for member in (self.left, self.right):
            if isinstance(member, BumpFactor):
                return member.tail_radius(n_max, tol)
        for member, other in ((self.left, self.right), (self.right, self.left)):
            r_probe = member.tail_radius(n_max, tol)
            if r_probe is None:
                continue
            other_sup = other.sup_bound(n_max)
            if math.isinf(other_sup):
                continue
            scaled = tol / (2.0**n_max * other_sup)
            return member.tail_radius(n_max, scaled)
        return None

    def sup_bound(self, n_max: int) -> float:
        ls, rs = self.left.sup_bound(n_max), self.right.sup_bound(n_max)
        if math.isinf(ls) or math.isinf(rs):
            r = self.tail_radius(n_max, 1.0)
            if r is None:
                return math.inf
            grid = np.linspace(-r - 1.0, r + 1.0, 4001)
            worst = max(float(np.max(np.abs(self.eval_deriv(n, grid)))) for n in range(n_max + 1))
            return 1.05 * max(worst, 1.0)
        return 2.0**n_max * ls * rs


# ---------------------------------------------------------------------------
# Separable fields and builtins
# ---------------------------------------------------------------------------


def separable_field(factors: Sequence[Factor1D], m_max: int = _DEFAULT_ANALYTIC_M_MAX,
                    label: str = "separable") -> Field:
    """Field f(x) = prod_j g_j(x_j) with D^alpha f = prod_j g_j^(alpha_j)."""
    factors = list(factors)
    d = len(factors)
    if d < 1:
        raise ValueError("need at least one factor")

    def ev(pts: np.ndarray) -> np.ndarray:
        out = np.ones(pts.shape[0])
        for j, g in enumerate(factors):
            out *= g.eval_deriv(0, pts[:, j])
        return out

    def dv(alpha: MultiIndex, pts: np.ndarray) -> np.ndarray:
        out = np.ones(pts.shape[0])
        for j, g in enumerate(factors):
            out *= g.eval_deriv(alpha[j], pts[:, j])
        return out

    decay = _separable_decay(factors, m_max)
    return Field(dim=d, m_max=m_max, eval_fn=ev, deriv_fn=dv,
                 decay_radius=decay, label=label)


def _separable_decay(factors: Sequence[Factor1D], m_max: int):
    """Decay certificate for a product of factors, if every factor decays.

    For |x|_inf >= R some coordinate is large; that factor is below its
    scaled tolerance while the others stay within their sup bounds.
    """
    sups = [g.sup_bound(m_max) for g in factors]
    if any(math.isinf(s) for s in sups):
        return None
    if any(g.tail_radius(m_max, 1.0) is None for g in factors):
        return None
    total = 1.0
    for s in sups:
        total *= s

    def radius(tol: float) -> float:
        if tol <= 0:
            raise ValueError("tolerance must be > 0")
        r = 0.0
        for g, s in zip(factors, sups):
            own = g.tail_radius(m_max, tol * s / total)
            r = max(r, own)
        return r

    return radius


def scale_field(field: Field, factor: float, label: str | None = None) -> Field:
    """The field ``factor * f`` (derivatives scale linearly)."""
    lam = float(factor)

    def ev(pts):
        return lam * field.eval_fn(pts)

    def dv(alpha, pts):
        return lam * field.deriv_fn(alpha, pts)

    decay = None
    if field.decay_radius is not None and lam != 0.0:
        base_radius = field.decay_radius
        decay = lambda tol: base_radius(tol / abs(lam))
    elif lam == 0.0:
        decay = lambda tol: 1.0
    return Field(dim=field.dim, m_max=field.m_max, eval_fn=ev, deriv_fn=dv,
                 decay_radius=decay, label=label or f"{factor}*{field.label}")


def gaussian_field(d: int, scale: float = 1.0, center: Sequence[float] | None = None,
                   m_max: int = _DEFAULT_ANALYTIC_M_MAX) -> Field:
    """f(x) = exp(-|x - center|^2 / (2 scale^2)) with exact derivatives.

    The default center is the origin.  Derivatives of any order up to
    ``m_max`` come from the Hermite recurrence, so they are exact up to
    rounding.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if scale <= 0:
        raise ValueError("scale must be > 0")
    if center is None:
        center = (0.0,) * d
    center = tuple(float(c) for c in center)
    if len(center) != d:
        raise ValueError("center length must equal dimension")
    factors = [GaussianFactor(c, scale) for c in center]
    tag = f"gaussian(d={d},scale={scale:g})"
    if any(c != 0.0 for c in center):
        tag = f"gaussian(d={d},scale={scale:g},center={center})"
    return separable_field(factors, m_max=m_max, label=tag)


def poly_times_bump_field(coeffs: Sequence[float], cutoff_radius: float,
                          dim: int = 2) -> Field:
    """f(x~, x_d) = P(x_d) * bump(x~) near the boundary, derivatives exact.

    P is the polynomial with the given coefficients (constant term first).
    The product form holds exactly for |x_d| <= cutoff_radius and for
    tangential coordinates inside the bump plateau (|x_j| <= cutoff_radius);
    beyond that everything tapers smoothly to zero, so the field is
    compactly supported.
    """
    if cutoff_radius <= 0:
        raise ValueError("cutoff_radius must be > 0")
    coeffs = list(coeffs)
    degree = len(coeffs) - 1
    if degree > _POLY_DEGREE_CAP:
        raise DerivativeOrderError(
            f"polynomial degree {degree} exceeds derivative bookkeeping cap "
            f"{_POLY_DEGREE_CAP}"
        )
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    r_in = float(cutoff_radius)
    r_out = 2.0 * r_in
    q = _BUMP_M_MAX + 1
    normal = ProductFactor(PolynomialFactor(coeffs), BumpFactor(0.0, r_in, r_out, q))
    tangential = [BumpFactor(0.0, r_in, r_out, q) for _ in range(dim - 1)]
    return separable_field(tangential + [normal], m_max=_BUMP_M_MAX,
                           label=f"poly_bump(deg={degree},d={dim})")


def bump_field(dim: int, center: Sequence[float], inner: float, outer: float) -> Field:
    """Compactly supported plateau bump centered at ``center``.

    Equals 1 on the box |x_j - center_j| <= inner and vanishes outside
    |x_j - center_j| >= outer.
    """
    center = tuple(float(c) for c in center)
    if len(center) != dim:
        raise ValueError("center length must equal dimension")
    q = _BUMP_M_MAX + 1
    factors = [BumpFactor(c, inner, outer, q) for c in center]
    return separable_field(factors, m_max=_BUMP_M_MAX,
                           label=f"bump(center={center},inner={inner:g})")


# ---------------------------------------------------------------------------
# Grid-sampled fields
# ---------------------------------------------------------------------------

_GRID_MIN_PER_AXIS = 5
_GRID_M_MAX = 2


def grid_field(samples: np.ndarray, spacing: float, origin: Sequence[float]) -> Field:
    """Field backed by uniformly spaced samples.

    Values come from multilinear interpolation; derivatives (total order
    <= 2) from second-order central differences on the grid, themselves
    interpolated.  Evaluation outside the sampled box raises
    OutOfDomainError.  Grid fields carry no decay certificate, so
    half-space norms require an explicit truncation box.
    """
    from scipy.interpolate import RegularGridInterpolator

    samples = np.asarray(samples, dtype=float)
    d = samples.ndim
    if any(n < _GRID_MIN_PER_AXIS for n in samples.shape):
        raise ValueError(
            f"need at least {_GRID_MIN_PER_AXIS} samples per axis, got {samples.shape}"
        )
    spacing = float(spacing)
    if spacing <= 0:
        raise ValueError("spacing must be > 0")
    origin = tuple(float(c) for c in origin)
    if len(origin) != d:
        raise ValueError("origin length must equal array dimension")

    axes = [origin[j] + spacing * np.arange(samples.shape[j]) for j in range(d)]
    lo = np.array([ax[0] for ax in axes])
    hi = np.array([ax[-1] for ax in axes])
    interpolators: dict[tuple[int, ...], RegularGridInterpolator] = {}

    def table_for(alpha: MultiIndex) -> RegularGridInterpolator:
        key = alpha.components
        if key not in interpolators:
            data = samples
            for axis, reps in enumerate(key):
                for _ in range(reps):
                    data = np.gradient(data, spacing, axis=axis, edge_order=2)
            interpolators[key] = RegularGridInterpolator(axes, data, method="linear",
                                                         bounds_error=False,
                                                         fill_value=np.nan)
        return interpolators[key]

    def check_inside(pts: np.ndarray):
        if np.any(pts < lo - 1e-12) or np.any(pts > hi + 1e-12):
            raise OutOfDomainError(
                "evaluation outside the sampled box "
                f"[{lo.tolist()}, {hi.tolist()}]"
            )

    def ev(pts: np.ndarray) -> np.ndarray:
        check_inside(pts)
        return table_for(MultiIndex.zero(d))(np.clip(pts, lo, hi))

    def dv(alpha: MultiIndex, pts: np.ndarray) -> np.ndarray:
        check_inside(pts)
        return table_for(alpha)(np.clip(pts, lo, hi))

    return Field(dim=d, m_max=_GRID_M_MAX, eval_fn=ev, deriv_fn=dv,
                 decay_radius=None, label=f"grid(shape={samples.shape})")


def write_grid_csv(path, samples: np.ndarray, spacing: float,
                   origin: Sequence[float]) -> None:
    """Write the grid-field interchange format (see README): a small header
    followed by one value per line, row-major with the last axis fastest."""
    samples = np.asarray(samples, dtype=float)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"dim,{samples.ndim}\n")
        fh.write("counts," + ",".join(str(n) for n in samples.shape) + "\n")
        fh.write(f"spacing,{spacing!r}\n")
        fh.write("origin," + ",".join(repr(float(c)) for c in origin) + "\n")
        fh.write("values\n")
        for v in samples.reshape(-1):
            fh.write(f"{float(v)!r}\n")


def grid_field_from_csv(path) -> Field:
    """Load a grid field from the CSV interchange format."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    header: dict[str, list[str]] = {}
    idx = 0
    for idx, line in enumerate(lines):
        if line == "values":
            break
        key, _, rest = line.partition(",")
        header[key] = rest.split(",")
    else:
        raise ValueError("missing 'values' marker in grid CSV")
    try:
        d = int(header["dim"][0])
        counts = [int(c) for c in header["counts"]]
        spacing = float(header["spacing"][0])
        origin = [float(c) for c in header["origin"]]
    except (KeyError, ValueError, IndexError) as exc:
        raise ValueError(f"malformed grid CSV header: {exc}") from exc
    if len(counts) != d or len(origin) != d:
        raise ValueError("grid CSV header lengths inconsistent with dim")
    values = np.array([float(v) for v in lines[idx + 1:]])
    expected = int(np.prod(counts))
    if values.size != expected:
        raise ValueError(f"grid CSV has {values.size} values, expected {expected}")
    return grid_field(values.reshape(counts), spacing, origin)
