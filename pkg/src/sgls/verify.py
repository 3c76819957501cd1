"""Empirical verification of the extension operator's norm bound.

The suite checks, in increasing order of integration effort:

1. exactness of the reflection coefficients (rational residuals),
2. polynomial reproduction below the boundary,
3. one-sided derivative matching at the boundary (and the predicted
   derivative jump one order above the matched range),
4. the reflection scaling identity ||D^a g_k||_p = k^(a_d - 1/p) ||D^a f||_p,
5. the per-exponent triangle-inequality bound on the lower half-space,
6. the end-to-end operator-norm estimate max ||Lf|| / ||f|| against the
   guaranteed bound 1 + C(m).

The observed maximum ratio is a lower bound for the true operator norm;
1 + C(m) is the upper bound.  No sharpness is claimed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import BoundViolationError
from .extension import (
    HestenesCoefficients,
    coefficient_residuals,
    extend,
    extension_constant_sharp,
    hestenes_coefficients,
)
from .fields import (
    Field,
    HalfSpaceDomain,
    MultiIndex,
    bump_field,
    gaussian_field,
    multi_indices_up_to,
    poly_times_bump_field,
    separable_field,
    CosineFactor,
    GaussianFactor,
    ProductFactor,
)
from .norms import NormReport, PGridSpec, sgls_norm
from .psi import PsiSpec, make_constant_psi
from .quadrature import Box, QuadratureSpec, lp_norm_halfspace, lp_norm_info

__all__ = [
    "SuiteField",
    "SuiteConfig",
    "BoundaryMatchRow",
    "BoundaryMatchReport",
    "OperatorNormEstimate",
    "CheckResult",
    "VerificationReport",
    "default_suite",
    "boundary_probe_field",
    "check_scaling_identity",
    "check_boundary_matching",
    "estimate_operator_norm",
    "run_full_suite",
    "perturb_first_coefficient",
]

_FD_EXTRA_NODES = 2  # one-sided stencils use nodes 1..l+2: second-order accuracy


# ---------------------------------------------------------------------------
# Suite definitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteField:
    """A labeled test field with its truncation geometry.

    ``upper_box`` bounds norms of f on the upper half-space (its normal
    extent starts at 0).  ``lower_depth`` is how far below the boundary
    the extension is probed; reflections then reach (m+1) * lower_depth
    above, which the field must tolerate (builtins are global).
    """

    label: str
    field: Field
    upper_box: Box
    lower_depth: float | None = None

    def depth(self) -> float:
        return self.lower_depth if self.lower_depth is not None else self.upper_box.upper[-1]

    def full_box(self) -> Box:
        lo = list(self.upper_box.lower)
        hi = list(self.upper_box.upper)
        lo[-1] = -self.depth()
        return Box(tuple(lo), tuple(hi))


def _upper_cube(dim: int, radius: float) -> Box:
    return Box((-radius,) * (dim - 1) + (0.0,), (radius,) * dim)


def boundary_probe_field(d: int) -> Field:
    """Gaussian shifted along the normal axis.

    The shift keeps every normal derivative nonzero at the boundary; a
    centered Gaussian has vanishing odd normal derivatives there, which
    would make the derivative-jump check vacuous.
    """
    center = (0.0,) * (d - 1) + (0.4,)
    return gaussian_field(d, scale=0.8, center=center)


def default_suite(d: int) -> list[SuiteField]:
    """Six curated fields covering decay, shift, anisotropy, polynomial
    boundary behavior, off-boundary support, and oscillation."""
    tol = 1e-16
    entries: list[SuiteField] = []

    g1 = gaussian_field(d, scale=1.0)
    entries.append(SuiteField("gaussian_centered", g1,
                              _upper_cube(d, g1.decay_radius(tol))))

    g2 = boundary_probe_field(d)
    entries.append(SuiteField("gaussian_shifted", g2,
                              _upper_cube(d, g2.decay_radius(tol))))

    scales = [1.0 - 0.4 * (j == d - 1) for j in range(d)]
    g3 = separable_field([GaussianFactor(0.0, s) for s in scales],
                         label=f"gaussian_aniso(d={d})")
    entries.append(SuiteField("gaussian_anisotropic", g3,
                              _upper_cube(d, g3.decay_radius(tol))))

    pb = poly_times_bump_field([0.0, 1.0], cutoff_radius=1.5, dim=d)
    entries.append(SuiteField("poly_bump_linear", pb,
                              _upper_cube(d, pb.decay_radius(tol))))

    center = (0.0,) * (d - 1) + (1.5,)
    off = bump_field(d, center, inner=0.25, outer=0.5)
    entries.append(SuiteField("bump_off_boundary", off,
                              _upper_cube(d, off.decay_radius(tol))))

    factors = [ProductFactor(CosineFactor(2.0), GaussianFactor(0.0, 1.0))
               for _ in range(d)]
    g4 = separable_field(factors, label=f"cosine_gaussian(d={d})")
    entries.append(SuiteField("cosine_gaussian", g4,
                              _upper_cube(d, g4.decay_radius(tol))))
    return entries


@dataclass(frozen=True)
class SuiteConfig:
    """Everything one verification run needs; defaults give a desk-scale run."""

    d: int = 2
    m: int = 1
    psi: PsiSpec = dc_field(default_factory=lambda: make_constant_psi(1.0, 1.5, 4.0))
    pgrid: PGridSpec = dc_field(default_factory=lambda: PGridSpec(grid_points=6,
                                                                  refine_iters=4))
    # |D^a f|^p has a kink along the derivative's zero set for non-even p,
    # so tight tolerances make Gauss-Legendre grind; bound checks carry a
    # 10x margin on top of this anyway.
    quad: QuadratureSpec = dc_field(default_factory=lambda: QuadratureSpec(
        panels_per_axis=2, nodes_per_panel=12, rel_tol=1e-5, max_refinements=10))
    h_values: tuple[float, ...] = (1e-2, 5e-3, 2.5e-3)
    suite: tuple[SuiteField, ...] | None = None
    seed: int = 0
    threads: int = 1
    inject_coefficient_fault: bool = False

    def resolve_suite(self) -> list[SuiteField]:
        return list(self.suite) if self.suite is not None else default_suite(self.d)


def perturb_first_coefficient(coeffs: HestenesCoefficients,
                              delta: Fraction = Fraction(1, 100)) -> HestenesCoefficients:
    """Deliberately broken coefficients (c_1 += delta) for fault injection."""
    c = (coeffs.c[0] + delta,) + coeffs.c[1:]
    big_c = sum(abs(ck) * Fraction(k) ** coeffs.m for k, ck in enumerate(c, start=1))
    return HestenesCoefficients(m=coeffs.m, c=c, C_of_m=big_c)


# ---------------------------------------------------------------------------
# Scaling identity
# ---------------------------------------------------------------------------


def check_scaling_identity(field: Field, k: int, alpha, p: float,
                           quad: QuadratureSpec,
                           upper_box: Box | None = None) -> float:
    """Relative discrepancy of ||D^a g_k||_{L_p(lower)} vs
    k^(a_d - 1/p) ||D^a f||_{L_p(upper)} where g_k(x~, y) = f(x~, -k y).

    The lower box is the exact preimage of the upper box under the
    reflection, so with exact integration both sides agree identically.
    """
    if k < 1:
        raise ValueError("reflection index k must be >= 1")
    from .fields import as_multi_index
    from .quadrature import box_for_field

    mi = as_multi_index(alpha, field.dim)
    if upper_box is None:
        upper_box = box_for_field(field, HalfSpaceDomain(field.dim, "upper"))
    up = upper_box.clip_normal("upper")
    if up is None:
        raise ValueError("upper box has no intersection with x_d >= 0")

    def g_deriv(pts: np.ndarray) -> np.ndarray:
        ref = pts.copy()
        ref[:, -1] = -k * pts[:, -1]
        vals = field.deriv_fn(mi, ref) if mi.order else field.eval_fn(ref)
        return np.abs((-float(k)) ** mi.normal_component * vals)

    # exact preimage of the upper box under y -> -k y
    lo = list(up.lower)
    hi = list(up.upper)
    lo[-1] = -up.upper[-1] / k
    hi[-1] = -up.lower[-1] / k
    lower_box = Box(tuple(lo), tuple(hi))

    lhs = lp_norm_info(g_deriv, p, lower_box, quad).value

    def f_deriv(pts: np.ndarray) -> np.ndarray:
        vals = field.deriv_fn(mi, pts) if mi.order else field.eval_fn(pts)
        return np.abs(vals)

    rhs = float(k) ** (mi.normal_component - 1.0 / p) * lp_norm_info(f_deriv, p, up, quad).value
    scale = max(abs(rhs), 1e-300)
    return abs(lhs - rhs) / scale


# ---------------------------------------------------------------------------
# Boundary matching
# ---------------------------------------------------------------------------


def _one_sided_weights(l: int) -> np.ndarray:
    """Weights w_j on nodes j = 1..l+2 with sum w_j j^r = l! [r == l],
    r = 0..l+1: a second-order one-sided estimate of the l-th derivative
    that never touches the boundary point itself."""
    n = l + _FD_EXTRA_NODES
    matrix = [[Fraction(j) ** r for j in range(1, n + 1)] for r in range(n)]
    rhs = [Fraction(math.factorial(l)) if r == l else Fraction(0) for r in range(n)]
    from .extension import _solve_rational

    return np.array([float(w) for w in _solve_rational(matrix, rhs)])


@dataclass(frozen=True)
class BoundaryMatchRow:
    order: int
    mismatches: tuple[float, ...]
    observed_order: float
    converged: bool


@dataclass(frozen=True)
class BoundaryMatchReport:
    rows: tuple[BoundaryMatchRow, ...]
    h_values: tuple[float, ...]
    jump_order: int
    jump_constant: float
    jump_observed: float
    jump_expected: float
    jump_rel_error: float

    def row(self, order: int) -> BoundaryMatchRow:
        return self.rows[order]


def check_boundary_matching(field: Field, m: int, h_values,
                            coeffs: HestenesCoefficients | None = None,
                            n_tangential: int = 6, tangential_radius: float = 0.8,
                            seed: int = 0, order_threshold: float = 1.8,
                            floor: float = 1e-11) -> BoundaryMatchReport:
    """One-sided derivative mismatch across x_d = 0, per order l <= m+1.

    Orders l <= m must converge to zero (observed rate >= the threshold,
    or already at rounding level); order m+1 instead converges to the
    analytic jump |sum_k c_k (-k)^(m+1) - 1| times the field's (m+1)-th
    normal derivative at the boundary.
    """
    if field.m_max < m + 1:
        from .errors import DerivativeOrderError

        raise DerivativeOrderError(
            f"boundary check to order {m + 1} needs m_max >= {m + 1}, "
            f"field has {field.m_max}"
        )
    coeffs = coeffs if coeffs is not None else hestenes_coefficients(m)
    ext = extend(field, coeffs)
    d = field.dim
    h_values = tuple(float(h) for h in h_values)
    if any(h2 >= h1 for h1, h2 in zip(h_values, h_values[1:])):
        raise ValueError("h values must be strictly decreasing")

    rng = np.random.default_rng(seed)
    n_samples = n_tangential if d > 1 else 1
    tangential = (rng.uniform(-tangential_radius, tangential_radius,
                              size=(n_samples, d - 1))
                  if d > 1 else np.zeros((1, 0)))

    def points_at(offset: float) -> np.ndarray:
        pts = np.empty((n_samples, d))
        pts[:, :-1] = tangential
        pts[:, -1] = offset
        return pts

    boundary_pts = points_at(0.0)
    weights_float = coeffs.c_floats()

    rows: list[BoundaryMatchRow] = []
    per_sample_jump = None
    for l in range(m + 2):
        if l == 0:
            # Continuity holds identically when sum c_k = 1; compare the
            # boundary value with the lower-side formula evaluated at 0.
            upper_vals = field.eval_fn(boundary_pts)
            lower_vals = np.zeros(n_samples)
            for k, ck in enumerate(weights_float, start=1):
                lower_vals += ck * field.eval_fn(boundary_pts)
            gap = float(np.max(np.abs(upper_vals - lower_vals)))
            mismatches = (gap,) * len(h_values)
            per_h = np.full((len(h_values), n_samples), gap)
        else:
            w = _one_sided_weights(l)
            per_h = np.empty((len(h_values), n_samples))
            for hi, h in enumerate(h_values):
                above = np.zeros(n_samples)
                below = np.zeros(n_samples)
                for j, wj in enumerate(w, start=1):
                    above += wj * ext.eval_fn(points_at(j * h))
                    below += (-1.0) ** l * wj * ext.eval_fn(points_at(-j * h))
                per_h[hi] = np.abs(above - below) / h**l
            mismatches = tuple(float(np.max(per_h[hi])) for hi in range(len(h_values)))
        if l == m + 1:
            per_sample_jump = per_h[-1]  # smallest h
        if max(mismatches) <= floor:
            observed, converged = math.inf, True
        else:
            slope = np.polyfit(np.log(h_values),
                               np.log(np.maximum(mismatches, 1e-300)), 1)[0]
            observed = float(slope)
            converged = observed >= order_threshold
        rows.append(BoundaryMatchRow(order=l, mismatches=mismatches,
                                     observed_order=observed, converged=converged))

    jump_constant = abs(float(sum(ck * Fraction(-k) ** (m + 1)
                                  for k, ck in enumerate(coeffs.c, start=1)) - 1))
    normal_alpha = MultiIndex((0,) * (d - 1) + (m + 1,))
    normal_derivs = np.abs(field.deriv_fn(normal_alpha, boundary_pts))
    pick = int(np.argmax(normal_derivs))
    expected = jump_constant * float(normal_derivs[pick])
    observed_jump = float(per_sample_jump[pick])
    rel = abs(observed_jump - expected) / max(expected, 1e-300)
    return BoundaryMatchReport(
        rows=tuple(rows),
        h_values=h_values,
        jump_order=m + 1,
        jump_constant=jump_constant,
        jump_observed=observed_jump,
        jump_expected=expected,
        jump_rel_error=rel,
    )


# ---------------------------------------------------------------------------
# Operator norm estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldRatioRow:
    label: str
    numerator: NormReport
    denominator: NormReport
    ratio: float


@dataclass(frozen=True)
class OperatorNormEstimate:
    max_ratio: float
    witness_field: str
    theoretical_bound: float
    per_field_table: tuple[FieldRatioRow, ...]


def estimate_operator_norm(suite, m: int, psi: PsiSpec, pgrid: PGridSpec,
                           quad: QuadratureSpec,
                           coeffs: HestenesCoefficients | None = None,
                           threads: int = 1,
                           ratio_tol: float | None = None) -> OperatorNormEstimate:
    """Largest observed ||Lf|| / ||f|| over the suite, on the weighted
    Sobolev scale defined by (m, psi).

    The numerator search probes the denominator's best exponent as well,
    so the ratio is never spuriously below 1 due to the two searches
    refining different exponents.  Any ratio above 1 + C(m) + tol raises
    BoundViolationError naming the witness.
    """
    suite = list(suite)
    if not suite:
        raise ValueError("nothing to verify: empty suite")
    coeffs = coeffs if coeffs is not None else hestenes_coefficients(m)
    bound = float(coeffs.bound)
    tol = ratio_tol if ratio_tol is not None else 10.0 * quad.rel_tol

    rows: list[FieldRatioRow] = []
    for entry in suite:
        den_domain = HalfSpaceDomain(entry.field.dim, "upper",
                                     truncation_box=entry.upper_box)
        den = sgls_norm(entry.field, m, psi, den_domain, pgrid, quad,
                        threads=threads)
        if den.value <= 0.0:
            raise ValueError(f"suite field '{entry.label}' has zero norm on its box")
        ext = extend(entry.field, coeffs)
        num_domain = HalfSpaceDomain(entry.field.dim, "full",
                                     truncation_box=entry.full_box())
        num = sgls_norm(ext, m, psi, num_domain, pgrid, quad, threads=threads,
                        extra_p=(den.argmax_p,))
        ratio = num.value / den.value
        if ratio > bound + tol:
            raise BoundViolationError(
                f"field '{entry.label}': ratio {ratio!r} exceeds bound "
                f"{bound!r} + tol {tol!r} (numerator argmax p={num.argmax_p!r}, "
                f"m={m})"
            )
        rows.append(FieldRatioRow(label=entry.label, numerator=num,
                                  denominator=den, ratio=ratio))
    best = max(rows, key=lambda r: r.ratio)
    return OperatorNormEstimate(
        max_ratio=best.ratio,
        witness_field=best.label,
        theoretical_bound=bound,
        per_field_table=tuple(rows),
    )


# ---------------------------------------------------------------------------
# Full suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # "pass" | "fail"
    details: dict

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass(frozen=True)
class VerificationReport:
    m: int
    psi: dict
    bound: float
    max_ratio: float
    witness: str
    checks: tuple[CheckResult, ...]
    per_field: tuple[tuple[str, float, float], ...]  # label, ratio, argmax_p

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "psi": self.psi,
            "bound": self.bound,
            "max_ratio": self.max_ratio,
            "witness": self.witness,
            "checks": [
                {"name": c.name, "status": c.status, "details": c.details}
                for c in self.checks
            ],
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["field", "ratio", "argmax_p", "bound"])
            for label, ratio, argmax_p in self.per_field:
                writer.writerow([label, repr(ratio), repr(argmax_p), repr(self.bound)])


def _check_coefficients(coeffs: HestenesCoefficients) -> CheckResult:
    residuals = coefficient_residuals(coeffs)
    reference = hestenes_coefficients(coeffs.m)
    ok = all(r == 0 for r in residuals) and coeffs.c == reference.c
    return CheckResult(
        name="coefficient_exactness",
        status="pass" if ok else "fail",
        details={
            "residuals": [str(r) for r in residuals],
            "c": [str(v) for v in coeffs.c],
            "matches_closed_form": coeffs.c == reference.c,
        },
    )


def _check_reproduction(config: SuiteConfig, coeffs: HestenesCoefficients) -> CheckResult:
    rng = np.random.default_rng(config.seed)
    m = config.m
    worst = 0.0
    worst_l = 0
    cutoff = float(m + 2)
    for l in range(min(m, 3) + 1):
        mono = [0.0] * l + [1.0]
        base = poly_times_bump_field(mono, cutoff_radius=cutoff, dim=config.d)
        ext = extend(base, coeffs)
        pts = np.empty((1000, config.d))
        if config.d > 1:
            # cover the plateau, the taper, and the zero region of the bump
            pts[:, :-1] = rng.uniform(-1.8 * cutoff, 1.8 * cutoff,
                                      size=(1000, config.d - 1))
        pts[:, -1] = rng.uniform(-1.0, 0.0, size=1000)
        bump_only = poly_times_bump_field([1.0], cutoff_radius=cutoff, dim=config.d)
        expected = pts[:, -1] ** l * bump_only.eval_fn(pts)
        err = float(np.max(np.abs(ext.eval_fn(pts) - expected)))
        if err > worst:
            worst, worst_l = err, l
    ok = worst <= 1e-12
    return CheckResult(
        name="polynomial_reproduction",
        status="pass" if ok else "fail",
        details={"max_error": worst, "worst_degree": worst_l, "tolerance": 1e-12},
    )


def _check_boundary(config: SuiteConfig, coeffs: HestenesCoefficients) -> CheckResult:
    probe = boundary_probe_field(config.d)
    report = check_boundary_matching(probe, config.m, config.h_values,
                                     coeffs=coeffs, seed=config.seed)
    matched = all(report.rows[l].converged for l in range(config.m + 1))
    jump_ok = report.jump_rel_error <= 0.05
    return CheckResult(
        name="boundary_matching",
        status="pass" if matched and jump_ok else "fail",
        details={
            "orders": [
                {"l": r.order, "observed_order": r.observed_order,
                 "converged": r.converged, "mismatches": list(r.mismatches)}
                for r in report.rows
            ],
            "jump_constant": report.jump_constant,
            "jump_observed": report.jump_observed,
            "jump_expected": report.jump_expected,
            "jump_rel_error": report.jump_rel_error,
        },
    )


def _check_scaling(config: SuiteConfig) -> CheckResult:
    probe = gaussian_field(1, scale=1.0)
    quad = QuadratureSpec(panels_per_axis=4, nodes_per_panel=12,
                          rel_tol=min(config.quad.rel_tol, 1e-8),
                          max_refinements=10)
    tol = max(1e-6, 10.0 * quad.rel_tol)
    worst = 0.0
    worst_case = {}
    for k in (1, 2, 3):
        for alpha_d in (0, 1):
            for p in (1.0, 2.0, 5.0):
                rel = check_scaling_identity(probe, k, (alpha_d,), p, quad)
                if rel > worst:
                    worst = rel
                    worst_case = {"k": k, "alpha_d": alpha_d, "p": p}
    ok = worst <= tol
    return CheckResult(
        name="scaling_identity",
        status="pass" if ok else "fail",
        details={"max_rel_discrepancy": worst, "tolerance": tol, **worst_case},
    )


def _check_per_p_bounds(config: SuiteConfig, coeffs: HestenesCoefficients,
                        suite) -> CheckResult:
    grid = config.pgrid.grid_for(config.psi.a, config.psi.b)
    tol = 10.0 * config.quad.rel_tol
    violations = []
    worst_margin = -math.inf
    for entry in suite:
        ext = extend(entry.field, coeffs)
        up_domain = HalfSpaceDomain(config.d, "upper", truncation_box=entry.upper_box)
        lo_box = entry.full_box().clip_normal("lower")
        if lo_box is None:
            continue
        lo_domain = HalfSpaceDomain(config.d, "lower", truncation_box=lo_box)
        for p in grid:
            for alpha in multi_indices_up_to(config.d, config.m):
                lhs = lp_norm_halfspace(ext, alpha, float(p), lo_domain, config.quad)
                rhs_norm = lp_norm_halfspace(entry.field, alpha, float(p),
                                             up_domain, config.quad)
                sharp = extension_constant_sharp(coeffs, alpha.normal_component,
                                                 float(p))
                margin = lhs - (sharp * rhs_norm + tol)
                worst_margin = max(worst_margin, margin)
                if margin > 0:
                    violations.append({"field": entry.label, "p": float(p),
                                       "alpha": list(alpha.components),
                                       "lhs": lhs, "rhs": sharp * rhs_norm})
    return CheckResult(
        name="per_p_extension_bound",
        status="pass" if not violations else "fail",
        details={"violations": violations, "worst_margin": worst_margin,
                 "tolerance": tol},
    )


def _check_operator_norm(config: SuiteConfig, coeffs: HestenesCoefficients,
                         suite) -> CheckResult:
    tol = 10.0 * config.quad.rel_tol
    try:
        estimate = estimate_operator_norm(suite, config.m, config.psi,
                                          config.pgrid, config.quad,
                                          coeffs=coeffs, threads=config.threads,
                                          ratio_tol=tol)
    except BoundViolationError as exc:
        return CheckResult(name="operator_norm", status="fail",
                           details={"error": str(exc)})
    low_violations = [r.label for r in estimate.per_field_table
                      if r.ratio < 1.0 - tol]
    ok = not low_violations
    return CheckResult(
        name="operator_norm",
        status="pass" if ok else "fail",
        details={
            "max_ratio": estimate.max_ratio,
            "witness": estimate.witness_field,
            "bound": estimate.theoretical_bound,
            "below_one": low_violations,
            "per_field": [
                {"field": r.label, "ratio": r.ratio,
                 "argmax_p": r.numerator.argmax_p}
                for r in estimate.per_field_table
            ],
        },
    )


def run_full_suite(config: SuiteConfig) -> VerificationReport:
    """Run every check; the report's ``passed`` property is the exit status."""
    suite = config.resolve_suite()
    if not suite:
        raise ValueError("nothing to verify: empty suite")
    coeffs = hestenes_coefficients(config.m)
    if config.inject_coefficient_fault:
        coeffs = perturb_first_coefficient(coeffs)

    checks = [
        _check_coefficients(coeffs),
        _check_reproduction(config, coeffs),
        _check_boundary(config, coeffs),
        _check_scaling(config),
        _check_per_p_bounds(config, coeffs, suite),
        _check_operator_norm(config, coeffs, suite),
    ]

    op = next(c for c in checks if c.name == "operator_norm")
    max_ratio = op.details.get("max_ratio", math.nan)
    witness = op.details.get("witness", "")
    per_field = tuple(
        (row["field"], row["ratio"], row["argmax_p"])
        for row in op.details.get("per_field", [])
    )
    return VerificationReport(
        m=config.m,
        psi=config.psi.describe(),
        bound=float(coeffs.bound),
        max_ratio=max_ratio,
        witness=witness,
        checks=tuple(checks),
        per_field=per_field,
    )
