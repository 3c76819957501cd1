"""Run configuration: a versioned TOML file plus CLI-flag overrides.

The canonical form materializes every default, so two configs that mean
the same run compare equal and reports stay reproducible from a committed
file.  All numeric parameters are validated here, before any computation
starts.
"""

from __future__ import annotations

import math
import sys
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml

from .errors import ConfigError, SglsError
from .fields import (
    Field,
    HalfSpaceDomain,
    bump_field,
    gaussian_field,
    grid_field_from_csv,
    poly_times_bump_field,
)
from .norms import PGridSpec
from .psi import PsiSpec, make_constant_psi, make_grand_psi, make_power_psi
from .quadrature import Box, QuadratureSpec
from .verify import SuiteConfig

__all__ = ["RunConfig", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1

_PSI_DEFAULT = {"family": "constant", "c": 1.0, "a": 1.5, "b": 4.0}
_PGRID_DEFAULT = {"p_cap": 64.0, "grid_points": 16, "refine_iters": 20}
_QUAD_DEFAULT = {"panels_per_axis": 4, "nodes_per_panel": 10,
                 "rel_tol": 1e-9, "max_refinements": 8}
_FIELD_DEFAULT = {"kind": "gaussian", "dim": 1, "scale": 1.0}
_DOMAIN_DEFAULT = {"side": "upper"}
_VERIFY_DEFAULT = {"d": 2, "h_values": [1e-2, 5e-3, 2.5e-3],
                   "inject_coefficient_fault": False}


def _as_float(value, where: str) -> float:
    if isinstance(value, str):
        if value.lower() in ("inf", "+inf", "infinity"):
            return math.inf
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _merged(defaults: dict, given: dict | None) -> dict:
    out = dict(defaults)
    out.update(given or {})
    return out


class RunConfig:
    """Validated, canonicalized parameters for one CLI invocation."""

    def __init__(self, data: dict[str, Any]):
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a table")
        version = data.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(
                f"unsupported schema_version {version!r}; this build speaks "
                f"{SCHEMA_VERSION}"
            )
        self._data = {
            "schema_version": SCHEMA_VERSION,
            "m": int(data.get("m", 1)),
            "seed": int(data.get("seed", 0)),
            "threads": int(data.get("threads", 1)),
            "psi": _merged(_PSI_DEFAULT, data.get("psi")),
            "pgrid": _merged(_PGRID_DEFAULT, data.get("pgrid")),
            "quadrature": _merged(_QUAD_DEFAULT, data.get("quadrature")),
            "field": _merged(_FIELD_DEFAULT, data.get("field")),
            "domain": _merged(_DOMAIN_DEFAULT, data.get("domain")),
            "verify": _merged(_VERIFY_DEFAULT, data.get("verify")),
            "output": dict(data.get("output") or {}),
        }
        self._validate()

    # -- construction ----------------------------------------------------

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            with open(path, "rb") as fh:
                data = _toml.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except _toml.TOMLDecodeError as exc:
            raise ConfigError(f"malformed config file {path}: {exc}") from exc
        return cls(data)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        return cls(data)

    def with_overrides(self, **overrides) -> "RunConfig":
        """New config with top-level or dotted-section overrides applied.

        Keys are either top-level ("m", "seed", ...) or "section.key"
        ("pgrid.p_cap"); None values are ignored so absent CLI flags
        leave the file values alone.
        """
        data = self.canonical()
        for key, value in overrides.items():
            if value is None:
                continue
            if "." in key:
                section, sub = key.split(".", 1)
                data.setdefault(section, {})[sub] = value
            else:
                data[key] = value
        return RunConfig(data)

    # -- validation and canonical form ------------------------------------

    def _validate(self) -> None:
        if not (0 <= self._data["m"] <= 12):
            raise ConfigError(f"m must be in 0..12, got {self._data['m']}")
        if self._data["threads"] < 1:
            raise ConfigError("threads must be >= 1")
        verify = self._data["verify"]
        if not (1 <= int(verify["d"]) <= 3):
            raise ConfigError("verify.d must be in 1..3")
        hs = [_as_float(h, "verify.h_values") for h in verify["h_values"]]
        if len(hs) < 2 or any(b >= a for a, b in zip(hs, hs[1:])):
            raise ConfigError("verify.h_values must be strictly decreasing, length >= 2")
        # Constructing the typed objects enforces the module preconditions.
        try:
            self.psi_spec()
            self.pgrid()
            self.quad()
            self.pgrid().grid_for(self.psi_spec().a, self.psi_spec().b)
        except ConfigError:
            raise
        except (SglsError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        dom = self._data["domain"]
        if dom["side"] not in ("upper", "lower", "full"):
            raise ConfigError(f"domain.side must be upper/lower/full, got {dom['side']!r}")
        if ("box_lower" in dom) != ("box_upper" in dom):
            raise ConfigError("domain box needs both box_lower and box_upper")

    def canonical(self) -> dict:
        import copy

        return copy.deepcopy(self._data)

    def __eq__(self, other) -> bool:
        return isinstance(other, RunConfig) and self._data == other._data

    # -- typed accessors ---------------------------------------------------

    @property
    def m(self) -> int:
        return self._data["m"]

    @property
    def seed(self) -> int:
        return self._data["seed"]

    @property
    def threads(self) -> int:
        return self._data["threads"]

    @property
    def output(self) -> dict:
        return dict(self._data["output"])

    def psi_spec(self) -> PsiSpec:
        cfg = self._data["psi"]
        family = cfg.get("family", "constant")
        a = _as_float(cfg.get("a", 1.5), "psi.a")
        b = _as_float(cfg.get("b", 4.0), "psi.b")
        try:
            if family == "power":
                return make_power_psi(_as_float(cfg.get("alpha", 1.0), "psi.alpha"), a, b)
            if family == "constant":
                return make_constant_psi(_as_float(cfg.get("c", 1.0), "psi.c"), a, b)
            if family == "grand":
                return make_grand_psi(_as_float(cfg.get("gamma", 1.0), "psi.gamma"), a, b)
        except SglsError:
            raise
        raise ConfigError(f"unknown psi family {family!r} (power/constant/grand)")

    def pgrid(self) -> PGridSpec:
        cfg = self._data["pgrid"]
        kwargs = dict(
            p_cap=_as_float(cfg["p_cap"], "pgrid.p_cap"),
            grid_points=int(cfg["grid_points"]),
            refine_iters=int(cfg["refine_iters"]),
        )
        if "p_min_offset" in cfg:
            kwargs["p_min_offset"] = _as_float(cfg["p_min_offset"], "pgrid.p_min_offset")
        return PGridSpec(**kwargs)

    def quad(self) -> QuadratureSpec:
        cfg = self._data["quadrature"]
        return QuadratureSpec(
            panels_per_axis=int(cfg["panels_per_axis"]),
            nodes_per_panel=int(cfg["nodes_per_panel"]),
            rel_tol=_as_float(cfg["rel_tol"], "quadrature.rel_tol"),
            max_refinements=int(cfg["max_refinements"]),
        )

    def build_field(self) -> Field:
        cfg = self._data["field"]
        kind = cfg.get("kind", "gaussian")
        try:
            if kind == "gaussian":
                return gaussian_field(int(cfg.get("dim", 1)),
                                      scale=_as_float(cfg.get("scale", 1.0), "field.scale"),
                                      center=cfg.get("center"))
            if kind == "poly_bump":
                return poly_times_bump_field(
                    [_as_float(c, "field.coeffs") for c in cfg.get("coeffs", [0.0, 1.0])],
                    cutoff_radius=_as_float(cfg.get("cutoff_radius", 4.0),
                                            "field.cutoff_radius"),
                    dim=int(cfg.get("dim", 2)),
                )
            if kind == "bump":
                return bump_field(int(cfg.get("dim", 2)),
                                  cfg.get("center", [0.0] * int(cfg.get("dim", 2))),
                                  inner=_as_float(cfg.get("inner", 1.0), "field.inner"),
                                  outer=_as_float(cfg.get("outer", 2.0), "field.outer"))
            if kind == "grid":
                path = cfg.get("path")
                if not path:
                    raise ConfigError("field.kind = 'grid' needs field.path")
                return grid_field_from_csv(path)
        except SglsError:
            raise
        except (ValueError, OSError) as exc:
            raise ConfigError(f"field construction failed: {exc}") from exc
        raise ConfigError(f"unknown field kind {kind!r} (gaussian/poly_bump/bump/grid)")

    def domain(self, field: Field) -> HalfSpaceDomain:
        cfg = self._data["domain"]
        box = None
        if "box_lower" in cfg:
            box = Box(tuple(_as_float(v, "domain.box_lower") for v in cfg["box_lower"]),
                      tuple(_as_float(v, "domain.box_upper") for v in cfg["box_upper"]))
        return HalfSpaceDomain(field.dim, cfg["side"], truncation_box=box)

    def suite_config(self) -> SuiteConfig:
        verify = self._data["verify"]
        return SuiteConfig(
            d=int(verify["d"]),
            m=self.m,
            psi=self.psi_spec(),
            pgrid=self.pgrid(),
            quad=self.quad(),
            h_values=tuple(_as_float(h, "verify.h_values") for h in verify["h_values"]),
            seed=self.seed,
            threads=self.threads,
            inject_coefficient_fault=bool(verify["inject_coefficient_fault"]),
        )
