"""Generating functions for grand-Lebesgue norms.

A generating function is a strictly positive function psi on an open
exponent interval (a, b) with a >= 1; it is the denominator weight of
every sup-over-p norm in this package.  Three builtin families are
provided (power growth, constant, and blow-up at the right endpoint),
plus a hook for custom callables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import PositivityError, SupportIntervalError, UnsupportedFamilyError

__all__ = [
    "PsiSpec",
    "PsiValidationReport",
    "make_power_psi",
    "make_constant_psi",
    "make_grand_psi",
    "make_custom_psi",
    "psi_validate",
]


@dataclass(frozen=True)
class PsiSpec:
    """A generating function with support (a, b); b may be math.inf.

    Instances are immutable and evaluation is pure, so concurrent workers
    may share one PsiSpec freely.
    """

    a: float
    b: float
    eval_fn: Callable[[np.ndarray], np.ndarray]
    family_tag: str
    params: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        if not (self.a >= 1.0):
            raise SupportIntervalError(f"support must start at a >= 1, got a={self.a}")
        if not (self.b > self.a):
            raise SupportIntervalError(
                f"support must satisfy b > a, got (a, b)=({self.a}, {self.b})"
            )

    def __call__(self, p):
        arr = np.asarray(p, dtype=float)
        vals = np.asarray(self.eval_fn(arr), dtype=float)
        return float(vals) if arr.ndim == 0 else vals

    def describe(self) -> dict:
        b = "inf" if math.isinf(self.b) else self.b
        out = {"family": self.family_tag, "a": self.a, "b": b}
        out.update({k: v for k, v in self.params})
        return out


def make_power_psi(alpha: float, a: float, b: float) -> PsiSpec:
    """psi(p) = p**alpha on (a, b); the power-growth family."""
    if alpha <= 0:
        raise PositivityError(f"power exponent must be > 0, got {alpha}")
    return PsiSpec(float(a), float(b), lambda p: np.asarray(p, dtype=float) ** alpha,
                   "power", (("alpha", float(alpha)),))


def make_constant_psi(c: float, a: float, b: float) -> PsiSpec:
    """psi identically c > 0; turns the weighted sup into sup_p ||f||_p / c."""
    if c <= 0:
        raise PositivityError(f"constant generating function must be > 0, got {c}")
    return PsiSpec(float(a), float(b),
                   lambda p: np.full_like(np.asarray(p, dtype=float), float(c)),
                   "constant", (("c", float(c)),))


def make_grand_psi(gamma: float, a: float, b: float) -> PsiSpec:
    """psi(p) = (b - p)**(-gamma): blows up as p -> b-.  Requires finite b."""
    if math.isinf(b):
        raise UnsupportedFamilyError("blow-up family needs a finite right endpoint")
    if gamma <= 0:
        raise PositivityError(f"blow-up rate must be > 0, got {gamma}")
    bb = float(b)
    return PsiSpec(float(a), bb,
                   lambda p: (bb - np.asarray(p, dtype=float)) ** (-float(gamma)),
                   "grand", (("gamma", float(gamma)),))


def make_custom_psi(fn: Callable, a: float, b: float, tag: str = "custom") -> PsiSpec:
    """Wrap an arbitrary callable.  Positivity is the caller's promise;
    run :func:`psi_validate` to spot-check it."""
    return PsiSpec(float(a), float(b), lambda p: np.asarray(fn(np.asarray(p, dtype=float)),
                                                            dtype=float), tag)


@dataclass(frozen=True)
class PsiValidationReport:
    min_value: float
    argmin_p: float
    samples: int
    p_cap: float
    violation: bool


def psi_validate(psi: PsiSpec, samples: int = 128, p_cap: float = 64.0) -> PsiValidationReport:
    """Sample psi on a geometric grid over (a, min(b, p_cap)).

    Report-only: flags a violation if any sample is <= 0 (or non-finite
    where it should be positive).  A positive minimum on the grid is
    evidence, not proof, that inf psi > 0.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    hi = min(psi.b, float(p_cap))
    if hi <= psi.a:
        raise SupportIntervalError(
            f"cap {p_cap} leaves no searchable exponents above a={psi.a}"
        )
    lo = psi.a + 1e-9 * (hi - psi.a)
    if hi == psi.b:
        hi = psi.b - 1e-9 * (psi.b - psi.a)
    grid = np.geomspace(lo, hi, int(samples))
    vals = psi(grid)
    finite = np.isfinite(vals)
    bad = np.any(~finite) or np.any(vals[finite] <= 0.0) if finite.any() else True
    if finite.any():
        idx = int(np.argmin(np.where(finite, vals, np.inf)))
        min_val, argmin = float(vals[idx]), float(grid[idx])
    else:
        min_val, argmin = math.nan, float(grid[0])
    return PsiValidationReport(min_value=min_val, argmin_p=argmin,
                               samples=int(samples), p_cap=float(p_cap),
                               violation=bool(bad))
