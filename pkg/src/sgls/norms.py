"""Sobolev and grand-Lebesgue norms with a documented sup-over-p search.

Three norms, in increasing generality:

* ``sobolev_norm``: max over |alpha| <= m of the L_p norms of D^alpha f
  (max convention, not the summed one used elsewhere in the literature).
* ``gls_norm``: sup over p in (a, b) of ||f||_p / psi(p).
* ``sgls_norm``: sup over p of the order-m Sobolev norm over psi(p);
  m = 0 reduces to ``gls_norm`` through the same code path.

The supremum is searched on a geometric grid followed by golden-section
refinement around the best interior grid point.  A maximizer at the first
or last grid point sets ``boundary_flag``: the true supremum may live at
an open endpoint (or beyond the cap for unbounded supports), and the
reported value is then a certified lower bound only.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NormInconsistencyError, QuadratureConvergenceError
from .fields import Field, HalfSpaceDomain, multi_indices_up_to
from .psi import PsiSpec, psi_validate
from .quadrature import QuadratureSpec, box_for_field, lp_norm_halfspace_info

__all__ = [
    "PGridSpec",
    "PRow",
    "PDiagnostic",
    "NormReport",
    "sobolev_norm",
    "gls_norm",
    "sgls_norm",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PGridSpec:
    """Discretization of the open exponent interval (a, b).

    The geometric grid runs from a + offset to min(b - offset, p_cap),
    where offset defaults to 1e-3 * a; psi may blow up or vanish at the
    endpoints, so they are never probed directly.  For unbounded supports
    only exponents up to ``p_cap`` are searched.
    """

    p_min_offset: float | None = None
    p_cap: float = 64.0
    grid_points: int = 16
    refine_iters: int = 20

    def __post_init__(self):
        if self.grid_points < 3:
            raise ValueError("grid_points must be >= 3")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be >= 0")
        if self.p_cap <= 1.0:
            raise ValueError("p_cap must exceed 1")

    def grid_for(self, a: float, b: float) -> np.ndarray:
        offset = self.p_min_offset if self.p_min_offset is not None else 1e-3 * a
        if offset <= 0:
            raise ValueError("p_min_offset must be > 0")
        lo = a + offset
        hi = min(b - offset, self.p_cap) if math.isfinite(b) else self.p_cap
        if not hi > lo:
            raise ValueError(
                f"empty search interval: ({lo}, {hi}) from support ({a}, {b}) "
                f"and cap {self.p_cap}"
            )
        return np.geomspace(lo, hi, self.grid_points)


@dataclass(frozen=True)
class PRow:
    p: float
    raw_norm: float
    psi: float
    ratio: float


@dataclass(frozen=True)
class PDiagnostic:
    p: float
    refinements: int
    converged: bool


@dataclass(frozen=True)
class NormReport:
    """Result of one sup-over-p norm evaluation.

    ``value`` is the maximum ratio over ``per_p_table`` (the refined best
    point is appended as a row, so the invariant holds by construction).
    """

    value: float
    argmax_p: float
    per_p_table: tuple[PRow, ...]
    boundary_flag: bool
    degraded_coverage: bool = False
    note: str = ""
    quadrature_diagnostics: tuple[PDiagnostic, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "argmax_p": self.argmax_p,
            "boundary_flag": self.boundary_flag,
            "degraded_coverage": self.degraded_coverage,
            "note": self.note,
            "per_p_table": [
                {"p": r.p, "raw_norm": r.raw_norm, "psi": r.psi, "ratio": r.ratio}
                for r in self.per_p_table
            ],
            "quadrature_diagnostics": [
                {"p": d.p, "refinements": d.refinements, "converged": d.converged}
                for d in self.quadrature_diagnostics
            ],
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["p", "raw_norm", "psi", "ratio"])
            for r in self.per_p_table:
                writer.writerow([repr(r.p), repr(r.raw_norm), repr(r.psi), repr(r.ratio)])


def sobolev_norm(field: Field, m: int, p: float, domain: HalfSpaceDomain,
                 quad: QuadratureSpec) -> float:
    """max over |alpha| <= m of ||D^alpha f||_{L_p} on the domain."""
    if m < 0:
        raise ValueError("order m must be >= 0")
    if m > field.m_max:
        from .errors import DerivativeOrderError

        raise DerivativeOrderError(
            f"order {m} exceeds m_max={field.m_max} of field '{field.label}'"
        )
    best = 0.0
    for alpha in multi_indices_up_to(field.dim, m):
        best = max(best, lp_norm_halfspace_info(field, alpha, p, domain, quad).value)
    return best


def _sobolev_with_diag(field, m, p, domain, quad):
    best = 0.0
    refinements = 0
    for alpha in multi_indices_up_to(field.dim, m):
        info = lp_norm_halfspace_info(field, alpha, p, domain, quad)
        best = max(best, info.value)
        refinements = max(refinements, info.refinements)
    return best, refinements


def gls_norm(field: Field, psi: PsiSpec, domain: HalfSpaceDomain,
             pgrid: PGridSpec, quad: QuadratureSpec, threads: int = 1,
             extra_p: Sequence[float] = ()) -> NormReport:
    """sup over p of ||f||_p / psi(p): the m = 0 case of :func:`sgls_norm`,
    evaluated through the identical code path."""
    return sgls_norm(field, 0, psi, domain, pgrid, quad, threads=threads,
                     extra_p=extra_p)


def sgls_norm(field: Field, m: int, psi: PsiSpec, domain: HalfSpaceDomain,
              pgrid: PGridSpec, quad: QuadratureSpec, threads: int = 1,
              extra_p: Sequence[float] = ()) -> NormReport:
    """sup over p in (a, b) of ||f||_{W^m_p} / psi(p).

    ``extra_p`` adds probe exponents inside the search interval to the
    grid; the verification suite uses this to evaluate a numerator and a
    denominator report at exactly the same refined exponent.
    """
    check = psi_validate(psi, samples=64, p_cap=pgrid.p_cap)
    if check.violation:
        from .errors import PositivityError

        raise PositivityError(
            f"generating function '{psi.family_tag}' fails positivity on its "
            f"support (min {check.min_value!r} at p={check.argmin_p!r})"
        )
    grid = pgrid.grid_for(psi.a, psi.b)
    lo, hi = float(grid[0]), float(grid[-1])
    ps = sorted(set(float(p) for p in grid)
                | {float(p) for p in extra_p if lo <= p <= hi})

    rows: list[PRow | None] = [None] * len(ps)
    diags: list[PDiagnostic] = []
    failures = 0

    def eval_one(i: int):
        p = ps[i]
        try:
            raw, refinements = _sobolev_with_diag(field, m, p, domain, quad)
        except QuadratureConvergenceError:
            return i, None, PDiagnostic(p=p, refinements=quad.max_refinements,
                                        converged=False)
        psi_p = float(psi(p))
        return i, PRow(p=p, raw_norm=raw, psi=psi_p, ratio=raw / psi_p), \
            PDiagnostic(p=p, refinements=refinements, converged=True)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(eval_one, range(len(ps))))
    else:
        results = [eval_one(i) for i in range(len(ps))]
    for i, row, diag in results:  # deterministic order regardless of threads
        rows[i] = row
        diags.append(diag)
        if row is None:
            failures += 1

    kept = [r for r in rows if r is not None]
    if not kept:
        raise QuadratureConvergenceError(
            "quadrature failed to converge at every searched exponent",
            coarse=math.nan, fine=math.nan,
        )
    if all(r.ratio == 0.0 for r in kept):
        if _probably_nonzero(field, domain):
            raise NormInconsistencyError(
                f"all per-p ratios are zero but field '{field.label}' is not "
                "identically zero on the sampled domain"
            )
        zero_rows = tuple(kept)
        return NormReport(value=0.0, argmax_p=kept[0].p, per_p_table=zero_rows,
                          boundary_flag=False, degraded_coverage=failures > 0,
                          quadrature_diagnostics=tuple(diags))

    # kept is sorted by p, so the searched-boundary check is positional
    best_idx = max(range(len(kept)), key=lambda i: kept[i].ratio)
    best = kept[best_idx]
    at_boundary = best_idx == 0 or best_idx == len(kept) - 1

    refined_rows = list(kept)
    if not at_boundary and pgrid.refine_iters > 0 and 0 < best_idx < len(kept) - 1:
        left, right = kept[best_idx - 1].p, kept[best_idx + 1].p
        refined = _golden_refine(field, m, psi, domain, quad, left, right,
                                 pgrid.refine_iters)
        if refined is not None and refined.ratio > best.ratio:
            best = refined
            refined_rows.append(refined)
            refined_rows.sort(key=lambda r: r.p)

    note = ""
    if at_boundary:
        if math.isinf(psi.b) and best.p == hi:
            note = ("maximizer at the search cap for an unbounded support; "
                    "the value is a certified lower bound for the supremum")
        else:
            note = ("maximizer at the searched boundary; the supremum may be "
                    "approached at an open endpoint")

    return NormReport(
        value=best.ratio,
        argmax_p=best.p,
        per_p_table=tuple(refined_rows),
        boundary_flag=at_boundary,
        degraded_coverage=failures > 0,
        note=note,
        quadrature_diagnostics=tuple(diags),
    )


def _golden_refine(field, m, psi, domain, quad, left, right, iters) -> PRow | None:
    """Golden-section maximization of the ratio on [left, right]."""

    def ratio_at(p: float) -> PRow:
        raw = sobolev_norm(field, m, p, domain, quad)
        psi_p = float(psi(p))
        return PRow(p=p, raw_norm=raw, psi=psi_p, ratio=raw / psi_p)

    a, b = float(left), float(right)
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    try:
        f1, f2 = ratio_at(x1), ratio_at(x2)
        best = max(f1, f2, key=lambda r: r.ratio)
        for _ in range(max(iters - 2, 0)):
            if f1.ratio >= f2.ratio:
                b, x2, f2 = x2, x1, f1
                x1 = b - _GOLDEN * (b - a)
                f1 = ratio_at(x1)
            else:
                a, x1, f1 = x1, x2, f2
                x2 = a + _GOLDEN * (b - a)
                f2 = ratio_at(x2)
            cand = max(f1, f2, key=lambda r: r.ratio)
            if cand.ratio > best.ratio:
                best = cand
        return best
    except QuadratureConvergenceError:
        return None


def _probably_nonzero(field: Field, domain: HalfSpaceDomain) -> bool:
    """Probe the integration region for any nonzero field value."""
    box = box_for_field(field, domain)
    lo = np.array(box.lower)
    hi = np.array(box.upper)
    if domain.side == "upper":
        lo[-1] = max(lo[-1], 0.0)
    elif domain.side == "lower":
        hi[-1] = min(hi[-1], 0.0)
    if np.any(lo >= hi):
        return False
    rng = np.random.default_rng(0)
    pts = lo + (hi - lo) * rng.random((4096, box.dim))
    return bool(np.max(np.abs(field.eval_fn(pts))) > 0.0)
