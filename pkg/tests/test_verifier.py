"""Verification layer: identity suites, crosschecks, MC, convergence."""

import cmath
import math

import numpy as np
import pytest

from ncsq import (
    ModeAmplitudes,
    SamplesTooFew,
    SqueezeParam,
    ThetaAtOrAboveOne,
    adjoint_mode_transform,
    algebra_residuals,
    bogoliubov_coefficients,
    build_operator_set,
    convergence_probe,
    crosscheck_suite,
    fit_mode_transform,
    identity_suite,
    make_params,
    make_space,
    overcompleteness_mc,
    squeeze_op,
    supercritical_witness,
)
from ncsq.fock import _squeeze_generator

P05 = make_params(0.5, 0.5, 1.0)
P00 = make_params(1e-200, 1e-200, 1.0)

IDENTITY_IDS = {
    "heisenberg_weyl",
    "deformed_algebra",
    "ordinary_algebra",
    "displacement_property",
    "bogoliubov",
    "eigenvalue_relations",
    "two_mode_commutator",
}


# ---------------------------------------------------------------------------
# algebra residuals and transforms


def test_algebra_residuals_complete_and_small(space20):
    ops = build_operator_set(P05, space20)
    resids = algebra_residuals(ops)
    want_keys = {
        "xy", "pxpy", "xpx", "ypy", "xpy", "ypx",
        "a_adag", "b_bdag", "ab", "a_bdag", "b_adag",
        "ord_a_adag", "ord_b_bdag", "ord_ab", "ord_a_bdag", "XP",
    }
    assert set(resids) == want_keys
    assert max(resids.values()) < 1e-10


def test_fit_recovers_a_bare_operator(space20):
    ops = build_operator_set(P05, space20)
    transform, resid = fit_mode_transform(ops.a_def, ops)
    assert resid < 1e-12
    assert transform.c_a == pytest.approx(1.0, abs=1e-12)
    for coef in (transform.c_b, transform.c_bdag, transform.c_adag):
        assert abs(coef) < 1e-12


def test_direct_fit_adjoint_and_closed_form_agree(space30):
    """Three routes to the same coefficients: conjugate-and-fit on a clean
    block, the adjoint flow, and the closed forms."""
    z = SqueezeParam(0.2, 0.6)
    ops = build_operator_set(P05, space30)
    sq = squeeze_op(P05, space30, z, ops)
    conj_a = sq @ ops.a_def @ sq.dag()

    # full-exponential conjugation reflects truncation error deep into the
    # matrix, so the direct fit must stay on a low-occupation block
    fitted, fit_resid = fit_mode_transform(conj_a, ops, block_top=6)
    assert fit_resid < 1e-8

    ad_a, _, closure = adjoint_mode_transform(_squeeze_generator(ops, z), ops)
    assert closure < 1e-10

    closed = bogoliubov_coefficients(P05, z).mode_a
    for attr in ("c_a", "c_b", "c_bdag", "c_adag"):
        assert abs(getattr(fitted, attr) - getattr(closed, attr)) < 1e-8
        assert abs(getattr(ad_a, attr) - getattr(closed, attr)) < 1e-8


def test_adjoint_transform_textbook_limit(space20):
    params = make_params(1e-4, 1e-4, 1.0)
    ops = build_operator_set(params, space20)
    for r, phi in [(0.2, 0.0), (0.3, 1.1)]:
        z = SqueezeParam(r, phi)
        ad_a, ad_b, closure = adjoint_mode_transform(
            _squeeze_generator(ops, z), ops)
        assert closure < 1e-10
        phase = cmath.exp(1j * phi)
        assert abs(ad_a.c_a - math.cosh(r)) < 1e-6
        assert abs(ad_a.c_bdag - phase * math.sinh(r)) < 1e-6
        # the cross coefficients vanish only like r*theta, not faster
        assert abs(ad_a.c_b) < 5e-5 and abs(ad_a.c_adag) < 5e-5
        assert abs(ad_b.c_b - math.cosh(r)) < 1e-6
        assert abs(ad_b.c_adag - phase * math.sinh(r)) < 1e-6


# ---------------------------------------------------------------------------
# identity suite


def test_identity_suite_all_pass(space30):
    reports = identity_suite(P05, space30, ModeAmplitudes(0.5, 0.2j),
                             SqueezeParam(0.3, math.pi / 4))
    assert {r.check_id for r in reports} == IDENTITY_IDS
    for report in reports:
        assert report.passed, (report.check_id, report.residual)
        assert report.residual < 1e-8


def test_identity_suite_without_squeeze(space20):
    reports = identity_suite(P05, space20, ModeAmplitudes(0.3, 0.1j),
                             SqueezeParam(0.0, 0.0))
    assert {r.check_id for r in reports} == IDENTITY_IDS
    assert all(r.passed for r in reports)


def test_identity_reports_carry_context(space20):
    reports = identity_suite(P05, space20, ModeAmplitudes(0.2, 0.0),
                             SqueezeParam(0.1, 0.0))
    by_id = {r.check_id: r for r in reports}
    assert by_id["bogoliubov"].metadata["r"] == 0.1
    assert by_id["heisenberg_weyl"].metadata["cutoff"] == 20
    assert by_id["bogoliubov"].metadata["closure_residual"] < 1e-10


# ---------------------------------------------------------------------------
# state-level crosschecks


def test_crosscheck_squeezed_vacuum():
    space = make_space(40)
    cases = [(ModeAmplitudes(0.0, 0.0), SqueezeParam(0.3, math.pi / 4))]
    reports = crosscheck_suite(P05, space, cases)
    assert len(reports) == 2
    for report in reports:
        assert report.passed
        assert report.residual < 1e-8


def test_crosscheck_commutative_regression():
    # theta = 0 exactly: the engine must reproduce the textbook formulas
    space = make_space(40)
    rng = np.random.default_rng(101)
    cases = []
    for _ in range(4):
        d = rng.uniform(-0.6, 0.6, size=4)
        amps = ModeAmplitudes(complex(d[0], d[1]), complex(d[2], d[3]))
        cases.append((amps, SqueezeParam(rng.uniform(0.0, 0.4), rng.uniform(-3, 3))))
    for report in crosscheck_suite(P00, space, cases):
        assert report.passed
        assert report.residual < 1e-8


def test_crosscheck_stress_near_saturation():
    # strong coupling wants a deep space; tolerance per the contract is 1e-6
    params = make_params(0.9, 0.9, 1.0)
    space = make_space(60)
    cases = [(ModeAmplitudes(0.3, 0.1j), SqueezeParam(0.2, 0.0))]
    for report in crosscheck_suite(params, space, cases):
        assert report.passed
        assert report.residual < 1e-6


def test_crosscheck_metadata_names_cases(space30):
    cases = [(ModeAmplitudes(0.1, 0.0), None),
             (ModeAmplitudes(0.0, 0.2j), SqueezeParam(0.2, 0.5))]
    reports = crosscheck_suite(P05, space30, cases)
    ids = [r.check_id for r in reports]
    assert ids == ["overlap[0]", "variance[0]", "overlap[1]", "variance[1]"]
    assert reports[2].metadata["r"] == 0.2


# ---------------------------------------------------------------------------
# Monte-Carlo overcompleteness


VAC = ModeAmplitudes(0.0, 0.0)
PROBE = ModeAmplitudes(0.7, 0.2j)


def test_mc_identity_vacuum_probe():
    p = make_params(0.3, 0.3, 1.0)
    reports = overcompleteness_mc(p, [(VAC, VAC)], 1_000_000, 42)
    rep = reports[0]
    assert rep.passed
    assert rep.z_score <= 4.0
    assert rep.reference == pytest.approx(1.0)
    assert 1e-4 < rep.stderr < 2e-2
    assert rep.samples == 1_000_000 and rep.seed == 42


def test_mc_is_deterministic():
    p = make_params(0.6, 0.6, 1.0)
    first = overcompleteness_mc(p, [(PROBE, VAC)], 20_000, 7)
    second = overcompleteness_mc(p, [(PROBE, VAC)], 20_000, 7)
    assert first[0].estimate == second[0].estimate
    assert first[0].stderr == second[0].stderr
    third = overcompleteness_mc(p, [(PROBE, VAC)], 20_000, 8)
    assert third[0].estimate != first[0].estimate


def test_mc_squeezed_family_resolves_identity():
    # sampling squeezed rather than coherent states must leave the
    # resolution of the identity (and the reference values) unchanged
    p = make_params(0.6, 0.6, 1.0)
    z = SqueezeParam(0.3, 0.8)
    reports = overcompleteness_mc(
        p, [(VAC, VAC), (PROBE, ModeAmplitudes(0.5, 0.5))], 200_000, 42, z=z)
    for rep in reports:
        assert rep.passed, rep.z_score


def test_mc_input_guards():
    with pytest.raises(ThetaAtOrAboveOne):
        overcompleteness_mc(make_params(1.0, 1.0, 1.0), [(VAC, VAC)], 10_000, 1)
    with pytest.raises(ThetaAtOrAboveOne):
        overcompleteness_mc(make_params(2.0, 2.0, 1.0), [(VAC, VAC)], 10_000, 1)
    with pytest.raises(SamplesTooFew):
        overcompleteness_mc(P05, [(VAC, VAC)], 999, 1)


# ---------------------------------------------------------------------------
# convergence and the critical boundary


def test_convergence_probe_shrinks():
    reports = convergence_probe(P05, ModeAmplitudes(0.5, 0.2j),
                                SqueezeParam(0.3, math.pi / 4), (20, 30, 40))
    names = {r.check_id for r in reports}
    assert names == {"convergence:" + n for n in
                     ("dx2", "dy2", "dpx2", "dpy2", "dX2", "dP2", "vac_overlap")}
    for report in reports:
        assert report.passed, (report.check_id, report.metadata["differences"])
        assert report.residual < 1e-8


def test_convergence_probe_unsqueezed_floor():
    # coherent states truncate so sharply the differences sit at float noise
    reports = convergence_probe(P05, ModeAmplitudes(0.4, 0.1j), None, (20, 30))
    for report in reports:
        assert report.passed
        assert report.residual < 1e-12


def test_convergence_probe_validates_cutoffs():
    with pytest.raises(ValueError):
        convergence_probe(P05, ModeAmplitudes(0.1, 0.0), None, (30,))
    with pytest.raises(ValueError):
        convergence_probe(P05, ModeAmplitudes(0.1, 0.0), None, (30, 20))
    with pytest.raises(ValueError):
        convergence_probe(P05, ModeAmplitudes(0.1, 0.0), None, (20, 20, 30))


def test_supercritical_witness_violates_floor():
    witness = supercritical_witness(make_params(2.0, 2.0, 1.0), r=0.3)
    assert witness.violated
    assert witness.product < witness.floor
    assert witness.phi == pytest.approx(math.pi / 2)

    benign = supercritical_witness(P05, r=0.3)
    assert not benign.violated
    assert benign.product >= benign.floor
