"""Matrix engine: spaces, operators, state construction, guards.

The operator realization is checked against an independently transcribed
forward map (reconstructing the ordinary ladder pair from the returned
phase-space matrices must give back the input), and the deformed vacuum
against an SVD null-space oracle.
"""

import math

import numpy as np
import pytest

from ncsq import (
    CutoffOutOfRange,
    ModeAmplitudes,
    NonFinite,
    NonHermitianOperator,
    OperatorMatrix,
    PopulationOverflow,
    SaturatedOrSuperCritical,
    SpaceMismatch,
    SqueezeParam,
    SqueezeTooLargeForCutoff,
    StateVector,
    basis_state,
    build_operator_set,
    commutator,
    deformed_vacuum,
    displacement_op,
    expectation,
    expectation_and_variance,
    make_params,
    make_space,
    make_state,
    matrix_exp,
    ordinary_mode_ops,
    phase_space_ops,
    safe_norm_fraction,
    squeeze_op,
)

P05 = make_params(0.5, 0.5, 1.0)


def _safe_max(space, matrix, buffer=5):
    mask = space.n_tot <= space.cutoff - buffer
    return float(np.abs(matrix[np.ix_(mask, mask)]).max())


# ---------------------------------------------------------------------------
# space layout


def test_space_layout():
    s = make_space(3)
    assert s.dim == 16
    assert s.index_of(0, 0) == 0
    assert s.index_of(1, 0) == 4
    assert s.index_of(2, 3) == 11
    assert list(s.n_tot[:5]) == [0, 1, 2, 3, 1]


def test_space_index_bounds():
    s = make_space(3)
    with pytest.raises(CutoffOutOfRange):
        s.index_of(4, 0)
    with pytest.raises(CutoffOutOfRange):
        s.index_of(0, -1)


@pytest.mark.parametrize("bad", [0, -2, 201, 2.5, True, "12"])
def test_make_space_rejects_bad_cutoffs(bad):
    with pytest.raises(CutoffOutOfRange):
        make_space(bad)


def test_space_equality_is_by_cutoff():
    assert make_space(7) == make_space(7)
    assert make_space(7) != make_space(8)


# ---------------------------------------------------------------------------
# ladder matrices


def test_ordinary_ladder_elements(space12):
    a, b = ordinary_mode_ops(space12)
    one = basis_state(space12, 1, 0)
    two = basis_state(space12, 2, 0)
    assert one.inner(a @ two) == pytest.approx(math.sqrt(2.0))
    mixed = basis_state(space12, 3, 4)
    up = basis_state(space12, 3, 5)
    assert up.inner(b.dag() @ mixed) == pytest.approx(math.sqrt(5.0))


def test_ordinary_commutator_sees_truncation_only_at_edge(space12):
    a, _ = ordinary_mode_ops(space12)
    comm = commutator(a, a.dag()).matrix - np.eye(space12.dim)
    # sqrt(n+1)^2 - n rounds at the last bit, so near-zero rather than zero;
    # the only structural artifact is the last per-mode level, where the
    # truncated a+ drops the outgoing amplitude and the diagonal reads
    # -cutoff - 1
    assert _safe_max(space12, comm, buffer=1) < 1e-13
    edge = space12.index_of(space12.cutoff, 0)
    assert comm[edge, edge] == pytest.approx(-(space12.cutoff + 1.0))


# ---------------------------------------------------------------------------
# phase-space realization


def _reconstruct_ordinary(params, x, y, px, py):
    """Forward map from phase-space matrices to the ordinary ladder pair.

    Transcribed directly from the defining linear combination, so it shares
    nothing with the 4x4 solve under test.
    """
    kap = params.kappa
    lam = params.lambda_denom
    hbar = params.hbar
    pref = 1.0 / (math.sqrt(2.0 * hbar) * lam)
    nu_term = params.nu / (2.0 * kap * hbar)
    mu_term = params.mu / (2.0 * hbar)
    rec_a = pref * (kap * x.matrix + mu_term * py.matrix
                    + 1j * (px.matrix - nu_term * y.matrix))
    rec_b = pref * (kap * y.matrix - mu_term * px.matrix
                    + 1j * (py.matrix + nu_term * x.matrix))
    return rec_a, rec_b


@pytest.mark.parametrize("theta", [0.1, 0.5, 0.9])
def test_phase_space_ops_invert_the_forward_map(theta, space20):
    params = make_params(theta, theta, 1.0)
    x, y, px, py = phase_space_ops(params, space20)
    a, b = ordinary_mode_ops(space20)
    rec_a, rec_b = _reconstruct_ordinary(params, x, y, px, py)
    # linear identity, no operator products: exact on the full space
    assert np.abs(rec_a - a.matrix).max() < 1e-12
    assert np.abs(rec_b - b.matrix).max() < 1e-12


def test_phase_space_ops_hermitian(space20):
    for op in phase_space_ops(P05, space20):
        assert op.hermiticity_defect() < 1e-12


@pytest.mark.parametrize("theta", [0.5, 0.9])
def test_phase_space_commutators(theta, space30):
    params = make_params(theta, theta, 1.0)
    x, y, px, py = phase_space_ops(params, space30)
    eye = np.eye(space30.dim)
    pairs = [
        (x, y, 1j * params.mu),
        (px, py, 1j * params.nu),
        (x, px, 1j * params.hbar),
        (y, py, 1j * params.hbar),
        (x, py, 0.0),
        (y, px, 0.0),
    ]
    for left, right, want in pairs:
        resid = commutator(left, right).matrix - want * eye
        assert _safe_max(space30, resid) < 1e-10


def test_phase_space_ops_refuse_saturation(space12):
    with pytest.raises(SaturatedOrSuperCritical):
        phase_space_ops(make_params(1.0, 1.0, 1.0), space12)
    with pytest.raises(SaturatedOrSuperCritical):
        phase_space_ops(make_params(2.0, 2.0, 1.0), space12)


def test_deformed_algebra(space30):
    ops = build_operator_set(P05, space30)
    theta = P05.theta
    eye = np.eye(space30.dim)
    checks = [
        (commutator(ops.a_def, ops.a_def.dag()).matrix - eye),
        (commutator(ops.b_def, ops.b_def.dag()).matrix - eye),
        commutator(ops.a_def, ops.b_def).matrix,
        (commutator(ops.a_def, ops.b_def.dag()).matrix - 1j * theta * eye),
        (commutator(ops.b_def, ops.a_def.dag()).matrix + 1j * theta * eye),
    ]
    for resid in checks:
        assert _safe_max(space30, resid) < 1e-10


def test_cross_commutator_expectation_tracks_theta(space12):
    params = make_params(1e-4, 1e-4, 1.0)
    ops = build_operator_set(params, space12)
    vac = basis_state(space12, 0, 0)
    got = expectation(vac, commutator(ops.a_def, ops.b_def.dag()))
    assert got == pytest.approx(1j * params.theta, abs=1e-10)


def test_operator_set_shares_space(space12):
    ops = build_operator_set(P05, space12)
    assert ops.space is space12
    assert ops.params is P05


# ---------------------------------------------------------------------------
# matrix_exp and the unitaries


def test_matrix_exp_of_zero_is_identity(space12):
    zero = OperatorMatrix(space12, np.zeros((space12.dim, space12.dim)))
    assert np.array_equal(matrix_exp(zero).matrix, np.eye(space12.dim))


def test_matrix_exp_diagonal_phase(space12):
    gen = OperatorMatrix(
        space12, 1j * math.pi * np.eye(space12.dim, dtype=np.complex128))
    got = matrix_exp(gen).matrix
    assert np.allclose(np.diag(got), -1.0, atol=1e-12)


def test_matrix_exp_rejects_nonfinite(space12):
    bad = np.zeros((space12.dim, space12.dim))
    bad[0, 0] = math.nan
    with pytest.raises(NonFinite):
        matrix_exp(OperatorMatrix(space12, bad))


def test_displacement_unitary(space20):
    ops = build_operator_set(P05, space20)
    disp = displacement_op(P05, space20, ModeAmplitudes(0.4, 0.3j), ops)
    eye = np.eye(space20.dim)
    assert np.abs(disp.dag().matrix @ disp.matrix - eye).max() < 1e-10


def test_displacement_of_nothing_is_identity(space20):
    disp = displacement_op(P05, space20, ModeAmplitudes(0.0, 0.0))
    assert np.abs(disp.matrix - np.eye(space20.dim)).max() < 1e-14


def test_squeeze_adjoint_is_negated_squeeze():
    space = make_space(40)
    ops = build_operator_set(P05, space)
    z = SqueezeParam(0.3, math.pi / 4)
    neg = SqueezeParam(0.3, math.pi / 4 - math.pi)
    sq = squeeze_op(P05, space, z, ops)
    sq_neg = squeeze_op(P05, space, neg, ops)
    assert np.abs(sq.dag().matrix - sq_neg.matrix).max() < 1e-11


def test_squeeze_refuses_large_r(space12):
    with pytest.raises(SqueezeTooLargeForCutoff):
        squeeze_op(P05, space12, SqueezeParam(0.8, 0.0))


# ---------------------------------------------------------------------------
# deformed vacuum


def test_deformed_vacuum_is_the_joint_null_direction():
    """SVD of the stacked annihilators must show a one-dimensional kernel
    containing the constructed vacuum."""
    for theta in (0.5, 0.9):
        params = make_params(theta, theta, 1.0)
        space = make_space(14)
        ops = build_operator_set(params, space)
        stacked = np.vstack([ops.a_def.matrix, ops.b_def.matrix])
        _, sv, vt = np.linalg.svd(stacked)
        assert sv[-1] < 1e-12
        assert sv[-2] > 0.1
        kernel = vt[-1].conj()
        vac = deformed_vacuum(params, space, ops)
        assert abs(np.vdot(kernel, vac.vector)) > 1.0 - 1e-12


def test_deformed_vacuum_annihilated(space30):
    ops = build_operator_set(P05, space30)
    vac = deformed_vacuum(P05, space30, ops)
    assert vac.norm() == pytest.approx(1.0, rel=1e-14)
    assert np.linalg.norm(ops.a_def.matrix @ vac.vector) < 1e-10
    assert np.linalg.norm(ops.b_def.matrix @ vac.vector) < 1e-10


def test_deformed_vacuum_differs_from_bare_vacuum(space30):
    # at theta = 0.5 the pair correlations are real: the overlap with
    # |0,0> must be high but strictly below one
    vac = deformed_vacuum(P05, space30)
    ov = abs(basis_state(space30, 0, 0).inner(vac))
    assert 0.99 < ov < 1.0 - 1e-4

    tiny = make_params(1e-4, 1e-4, 1.0)
    vac_tiny = deformed_vacuum(tiny, space30)
    assert abs(basis_state(space30, 0, 0).inner(vac_tiny)) > 1.0 - 1e-7


# ---------------------------------------------------------------------------
# make_state and guards


def test_coherent_state_is_joint_eigenvector():
    space = make_space(40)
    params = P05
    ops = build_operator_set(params, space)
    amps = ModeAmplitudes(1.0, 0.5j)
    state = make_state(params, space, amps, ops=ops)
    lam_a = amps.alpha + 1j * params.theta * amps.beta
    lam_b = amps.beta - 1j * params.theta * amps.alpha
    assert np.linalg.norm(ops.a_def.matrix @ state.vector
                          - lam_a * state.vector) < 1e-8
    assert np.linalg.norm(ops.b_def.matrix @ state.vector
                          - lam_b * state.vector) < 1e-8


def test_squeezed_state_is_eigenvector_of_conjugated_mode():
    """S a S+ applied to S D |vac> keeps the displaced eigenvalue; apply
    S+ first, then a, then S, so no full matrix exponential is needed."""
    from scipy.sparse import csr_array
    from scipy.sparse.linalg import expm_multiply
    from ncsq.fock import _squeeze_generator

    space = make_space(30)
    params = P05
    ops = build_operator_set(params, space)
    amps = ModeAmplitudes(0.4, 0.2j)
    z = SqueezeParam(0.25, 0.9)
    state = make_state(params, space, amps, z, ops=ops)

    gen = csr_array(_squeeze_generator(ops, z).matrix)
    unsqueezed = expm_multiply(-gen, state.vector)
    lowered = ops.a_def.matrix @ unsqueezed
    lam_a = amps.alpha + 1j * params.theta * amps.beta
    resid = np.linalg.norm(expm_multiply(gen, lowered) - lam_a * state.vector)
    assert resid < 1e-8


def test_make_state_population_guard():
    space = make_space(10)
    with pytest.raises(PopulationOverflow):
        make_state(P05, space, ModeAmplitudes(6.0, 0.0))


def test_make_state_rejects_big_squeeze(space20):
    with pytest.raises(SqueezeTooLargeForCutoff):
        make_state(P05, space20, ModeAmplitudes(0.0, 0.0), SqueezeParam(0.75, 0.0))


def test_coherent_tail_is_poissonian_small():
    space = make_space(40)
    state = make_state(P05, space, ModeAmplitudes(1.0, 0.0))
    assert safe_norm_fraction(state, buffer=5) < 1e-20


def test_safe_norm_fraction_vacuum_and_validation(space12):
    vac = basis_state(space12, 0, 0)
    assert safe_norm_fraction(vac) == 0.0
    with pytest.raises(ValueError):
        safe_norm_fraction(vac, buffer=-1)
    with pytest.raises(ValueError):
        safe_norm_fraction(vac, buffer=space12.cutoff + 1)
    with pytest.raises(ValueError):
        safe_norm_fraction(StateVector(space12, np.zeros(space12.dim)))


# ---------------------------------------------------------------------------
# expectations


def test_vacuum_quadrature_variance(space20):
    ops = build_operator_set(P05, space20)
    vac = make_state(P05, space20, ops=ops)
    mean, var = expectation_and_variance(vac, ops.x)
    assert abs(mean) < 1e-12
    # (hbar/2)*sqrt(mu/nu) with mu = nu reduces to hbar/2
    assert var == pytest.approx(0.5, rel=1e-10)


def test_expectation_and_variance_requires_hermitian(space12):
    ops = build_operator_set(P05, space12)
    vac = basis_state(space12, 0, 0)
    with pytest.raises(NonHermitianOperator):
        expectation_and_variance(vac, ops.a_def)


def test_space_mismatch_raises(space12, space20):
    ops12 = build_operator_set(P05, space12)
    vac20 = basis_state(space20, 0, 0)
    with pytest.raises(SpaceMismatch):
        expectation(vac20, ops12.x)
    with pytest.raises(SpaceMismatch):
        ops12.x @ vac20


def test_operator_algebra_helpers(space12):
    a, b = ordinary_mode_ops(space12)
    doubled = 2.0 * a
    assert np.array_equal(doubled.matrix, 2.0 * a.matrix)
    diff = (a + b) - b
    assert np.abs(diff.matrix - a.matrix).max() == 0.0
    assert (-a).matrix[1, 0] == -a.matrix[1, 0]
    herm = (1j * (a - a.dag())).hermitized()
    assert herm.hermiticity_defect() == 0.0
