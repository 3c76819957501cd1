"""Verification-suite machinery: scaling, boundary matching, operator norm."""

import pytest

from sgls import (
    Box,
    PGridSpec,
    QuadratureSpec,
    SuiteConfig,
    bump_field,
    check_boundary_matching,
    check_scaling_identity,
    estimate_operator_norm,
    gaussian_field,
    hestenes_coefficients,
    make_constant_psi,
    run_full_suite,
)
from sgls.verify import (
    SuiteField,
    boundary_probe_field,
    default_suite,
    perturb_first_coefficient,
)

COARSE = QuadratureSpec(panels_per_axis=2, nodes_per_panel=10, rel_tol=1e-6,
                        max_refinements=10)


def test_scaling_identity_k1_is_pure_reflection():
    g = gaussian_field(1)
    assert check_scaling_identity(g, 1, (0,), 2.0, COARSE) < 1e-8


@pytest.mark.parametrize("k,alpha_d,p", [(2, 1, 2.0), (3, 0, 1.0), (2, 0, 5.0)])
def test_scaling_identity_small_discrepancy(k, alpha_d, p):
    g = gaussian_field(1)
    quad = QuadratureSpec(panels_per_axis=4, nodes_per_panel=10, rel_tol=1e-9,
                          max_refinements=10)
    assert check_scaling_identity(g, k, (alpha_d,), p, quad) < 1e-6


def test_scaling_identity_improves_under_refinement():
    g = gaussian_field(1)
    coarse = QuadratureSpec(panels_per_axis=1, nodes_per_panel=4, rel_tol=5e-3,
                            max_refinements=6)
    fine = QuadratureSpec(panels_per_axis=4, nodes_per_panel=12, rel_tol=1e-10,
                          max_refinements=10)
    d_coarse = check_scaling_identity(g, 2, (1,), 2.0, coarse)
    d_fine = check_scaling_identity(g, 2, (1,), 2.0, fine)
    assert d_fine <= d_coarse + 1e-12


def test_boundary_matching_m1():
    probe = boundary_probe_field(2)
    report = check_boundary_matching(probe, 1, (1e-2, 5e-3, 2.5e-3))
    for l in range(2):
        assert report.rows[l].converged, report.rows[l]
    assert report.jump_order == 2
    assert report.jump_constant == pytest.approx(6.0)
    assert report.jump_rel_error <= 0.05
    # the mismatch one order above the matched range stays away from zero
    assert min(report.rows[2].mismatches) > 0.1


def test_boundary_matching_detects_coefficient_fault():
    probe = boundary_probe_field(2)
    bad = perturb_first_coefficient(hestenes_coefficients(1))
    report = check_boundary_matching(probe, 1, (1e-2, 5e-3, 2.5e-3), coeffs=bad)
    assert not report.rows[0].converged
    assert not report.rows[1].converged


def test_operator_norm_support_arithmetic_ratio_one():
    # bump supported at x_d in [1, 2]; probing only 0.4 below the boundary
    # reaches at most (m+1) * 0.4 = 0.8 above, where the field vanishes,
    # so the extension adds nothing and the ratio is exactly 1
    f = bump_field(2, center=(0.0, 1.5), inner=0.25, outer=0.5)
    entry = SuiteField("offset_bump", f,
                       Box((-1.0, 0.0), (1.0, 2.5)), lower_depth=0.4)
    psi = make_constant_psi(1.0, 1.5, 4.0)
    est = estimate_operator_norm([entry], 1, psi,
                                 PGridSpec(grid_points=5, refine_iters=3), COARSE)
    assert est.max_ratio == pytest.approx(1.0, abs=1e-12)


def test_operator_norm_even_reflection_below_two():
    suite = default_suite(2)[:2]
    psi = make_constant_psi(1.0, 1.5, 4.0)
    est = estimate_operator_norm(suite, 0, psi,
                                 PGridSpec(grid_points=5, refine_iters=3), COARSE)
    assert est.theoretical_bound == 2.0
    assert est.max_ratio <= 2.0 + 1e-5
    for row in est.per_field_table:
        assert row.ratio >= 1.0 - 1e-5


def test_operator_norm_empty_suite_rejected():
    psi = make_constant_psi(1.0, 1.5, 4.0)
    with pytest.raises(ValueError, match="empty suite"):
        estimate_operator_norm([], 1, psi, PGridSpec(), COARSE)


def _tiny_config(**overrides) -> SuiteConfig:
    g = gaussian_field(1)
    suite = (SuiteField("gauss", g, Box((0.0,), (g.decay_radius(1e-14),))),
             SuiteField("bump", bump_field(1, (0.6,), 0.2, 0.4),
                        Box((0.0,), (1.2,))))
    defaults = dict(
        d=1,
        m=1,
        psi=make_constant_psi(1.0, 1.5, 4.0),
        pgrid=PGridSpec(grid_points=4, refine_iters=2),
        quad=QuadratureSpec(panels_per_axis=2, nodes_per_panel=10, rel_tol=1e-5,
                            max_refinements=10),
        suite=suite,
    )
    defaults.update(overrides)
    return SuiteConfig(**defaults)


def test_run_full_suite_passes_and_reports():
    report = run_full_suite(_tiny_config())
    assert report.passed
    names = [c.name for c in report.checks]
    assert names == [
        "coefficient_exactness",
        "polynomial_reproduction",
        "boundary_matching",
        "scaling_identity",
        "per_p_extension_bound",
        "operator_norm",
    ]
    payload = report.to_json_dict()
    assert set(payload) == {"m", "psi", "bound", "max_ratio", "witness", "checks"}
    assert payload["bound"] == 8.0
    assert report.max_ratio <= 8.0
    assert report.witness in ("gauss", "bump")


def test_run_full_suite_catches_injected_fault():
    report = run_full_suite(_tiny_config(inject_coefficient_fault=True))
    assert not report.passed
    by_name = {c.name: c for c in report.checks}
    assert not by_name["coefficient_exactness"].passed
    assert not by_name["polynomial_reproduction"].passed
    assert not by_name["boundary_matching"].passed
    # the l = 1 mismatch no longer converges
    orders = by_name["boundary_matching"].details["orders"]
    assert orders[1]["converged"] is False


def test_report_csv_schema(tmp_path):
    report = run_full_suite(_tiny_config())
    path = tmp_path / "fields.csv"
    report.write_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "field,ratio,argmax_p,bound"
    assert len(lines) == 3  # two suite fields
