"""Crosschecks between the closed forms and the truncated-matrix engine.

Three families of evidence that the two sides describe the same physics:

* identity checks: commutator residuals, the displacement shift property,
  the squeeze conjugation coefficients and eigenvalue relations, measured
  directly on matrices over the safe subspace;
* state crosschecks: overlaps and quadrature variances of concrete states,
  engine versus closed form;
* Monte-Carlo overcompleteness: the weighted coherent-state integral of
  the identity operator, sampled with a Gaussian importance density and
  compared against the closed-form overlap it must reproduce.

Every result is a small immutable report carrying its residual, tolerance
and enough metadata to rerun it.  Stochastic checks derive one child seed
per case from (master seed, case index), so results do not depend on
execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import analytic
from .analytic import ModeAmplitudes, SqueezeParam
from scipy.linalg import expm
from scipy.sparse import csr_array

from .fock import (
    DEFAULT_BUFFER,
    FockSpace,
    OperatorMatrix,
    OperatorSet,
    _squeeze_generator,
    build_operator_set,
    displacement_op,
    expectation_and_variance,
    make_state,
    squeeze_op,
)
from .params import NcParams

__all__ = [
    "COMMUTATOR_TOL",
    "CROSSCHECK_TOL",
    "MC_MAX_Z_SCORE",
    "OPERATOR_TOL",
    "McReport",
    "ResidualReport",
    "SamplesTooFew",
    "SupercriticalWitness",
    "ThetaAtOrAboveOne",
    "algebra_residuals",
    "convergence_probe",
    "crosscheck_suite",
    "fit_mode_transform",
    "identity_suite",
    "overcompleteness_mc",
    "supercritical_witness",
]

COMMUTATOR_TOL = 1e-10
OPERATOR_TOL = 1e-8
CROSSCHECK_TOL = 1e-6
MC_MAX_Z_SCORE = 4.0
MC_MIN_SAMPLES = 1000


class ThetaAtOrAboveOne(ValueError):
    """The overcompleteness weight 1 - theta**2 is not positive."""


class SamplesTooFew(ValueError):
    """Monte-Carlo sample count below the statistical minimum."""


@dataclass(frozen=True)
class ResidualReport:
    """One deterministic check: residual against a fixed tolerance."""

    check_id: str
    residual: float
    tolerance: float
    passed: bool
    metadata: Dict[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class McReport:
    """One Monte-Carlo overcompleteness check."""

    estimate: complex
    reference: complex
    stderr: float
    samples: int
    seed: int
    z_score: float

    @property
    def passed(self) -> bool:
        return self.z_score <= MC_MAX_Z_SCORE


@dataclass(frozen=True)
class SupercriticalWitness:
    """A (r, phi) point whose x-px uncertainty product undercuts its floor."""

    r: float
    phi: float
    product: float
    floor: float
    violated: bool


def _report(check_id: str, residual: float, tolerance: float, **metadata) -> ResidualReport:
    residual = float(residual)
    return ResidualReport(
        check_id=check_id,
        residual=residual,
        tolerance=tolerance,
        passed=residual <= tolerance,
        metadata=metadata,
    )


def _params_meta(params: NcParams, space: FockSpace, buffer: int) -> Dict[str, object]:
    return {
        "mu": params.mu,
        "nu": params.nu,
        "hbar": params.hbar,
        "theta": params.theta,
        "cutoff": space.cutoff,
        "buffer": buffer,
    }


def _safe_block_max(space: FockSpace, matrix: np.ndarray, buffer: int) -> float:
    """Max magnitude over entries whose row and column are both safe."""
    mask = space.n_tot <= space.cutoff - buffer
    return float(np.abs(matrix[np.ix_(mask, mask)]).max())


def algebra_residuals(
    ops: OperatorSet, buffer: int = DEFAULT_BUFFER
) -> Dict[str, float]:
    """Safe-subspace residuals of every defining commutation relation."""
    space = ops.space
    p = ops.params
    eye = np.eye(space.dim)

    # All these operators are banded ladder combinations, so sparse products
    # turn the 17 commutators from seconds of dense matmuls into noise.
    def resid(left: OperatorMatrix, right: OperatorMatrix, want: complex) -> float:
        ls, rs = csr_array(left.matrix), csr_array(right.matrix)
        comm = (ls @ rs - rs @ ls).toarray() - want * eye
        return _safe_block_max(space, comm, buffer)

    theta = p.theta
    out = {
        "xy": resid(ops.x, ops.y, 1j * p.mu),
        "pxpy": resid(ops.px, ops.py, 1j * p.nu),
        "xpx": resid(ops.x, ops.px, 1j * p.hbar),
        "ypy": resid(ops.y, ops.py, 1j * p.hbar),
        "xpy": resid(ops.x, ops.py, 0.0),
        "ypx": resid(ops.y, ops.px, 0.0),
        "a_adag": resid(ops.a_def, ops.a_def.dag(), 1.0),
        "b_bdag": resid(ops.b_def, ops.b_def.dag(), 1.0),
        "ab": resid(ops.a_def, ops.b_def, 0.0),
        "a_bdag": resid(ops.a_def, ops.b_def.dag(), 1j * theta),
        "b_adag": resid(ops.b_def, ops.a_def.dag(), -1j * theta),
        "ord_a_adag": resid(ops.a_ord, ops.a_ord.dag(), 1.0),
        "ord_b_bdag": resid(ops.b_ord, ops.b_ord.dag(), 1.0),
        "ord_ab": resid(ops.a_ord, ops.b_ord, 0.0),
        "ord_a_bdag": resid(ops.a_ord, ops.b_ord.dag(), 0.0),
    }
    big_x = 0.5 * (ops.x + ops.y)
    big_p = 0.5 * (ops.px + ops.py)
    out["XP"] = resid(big_x, big_p, 0.5j * p.hbar)
    return out


def fit_mode_transform(
    conjugated: OperatorMatrix,
    ops: OperatorSet,
    buffer: int = DEFAULT_BUFFER,
    block_top: Optional[int] = None,
) -> Tuple[analytic.ModeTransform, float]:
    """Least-squares coefficients of a conjugated annihilator.

    Expresses the given matrix as c_a*a + c_b*b + c_bdag*b+ + c_adag*a+
    (deformed operators) over a truncation-clean block and returns the
    coefficient quadruple together with the max-norm fit residual there.

    A full matrix-exponential conjugation smears edge artifacts well
    below cutoff - buffer (unlike single commutators), so callers
    fitting an explicitly conjugated matrix should pass a small
    ``block_top`` (bound on total occupation) to stay in clean matrix
    elements; see adjoint_mode_transform for the route that does not
    need this.
    """
    space = ops.space
    top = space.cutoff - buffer
    if block_top is not None:
        top = min(top, block_top)
    mask = space.n_tot <= top
    idx = np.ix_(mask, mask)
    basis = [ops.a_def, ops.b_def, ops.b_def.dag(), ops.a_def.dag()]
    design = np.stack([b.matrix[idx].ravel() for b in basis], axis=1)
    rhs = conjugated.matrix[idx].ravel()
    coef, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    resid = float(np.abs(design @ coef - rhs).max())
    transform = analytic.ModeTransform(
        c_a=complex(coef[0]),
        c_b=complex(coef[1]),
        c_bdag=complex(coef[2]),
        c_adag=complex(coef[3]),
    )
    return transform, resid


def adjoint_mode_transform(
    gen: OperatorMatrix, ops: OperatorSet, buffer: int = DEFAULT_BUFFER
) -> Tuple[analytic.ModeTransform, analytic.ModeTransform, float]:
    """Conjugation coefficients of both annihilators via the adjoint action.

    The commutator of the squeeze generator with any of (a, b, b+, a+)
    lands back in that span, so conjugation by exp(G) acts on the span
    through a 4x4 matrix exponential.  Commutators, unlike full
    conjugations, are exact on the safe block at any squeeze strength,
    which makes this route accurate where a direct fit of S a S+ drowns
    in reflected truncation error.  Returns the transforms of the two
    annihilators and the worst closure residual of the four commutator
    fits; a large closure value would mean the span assumption itself
    fails, so callers should fold it into their residual.
    """
    space = ops.space
    mask = space.n_tot <= space.cutoff - buffer
    block = np.ix_(mask, mask)
    span = [ops.a_def, ops.b_def, ops.b_def.dag(), ops.a_def.dag()]
    design = np.stack([op.matrix[block].ravel() for op in span], axis=1)
    gen_m = gen.matrix
    action = np.zeros((4, 4), dtype=np.complex128)
    closure = 0.0
    for col, op in enumerate(span):
        comm = (gen_m @ op.matrix - op.matrix @ gen_m)[block].ravel()
        coef, *_ = np.linalg.lstsq(design, comm, rcond=None)
        action[:, col] = coef
        closure = max(closure, float(np.abs(design @ coef - comm).max()))
    flow = expm(action)

    def _column(col: int) -> analytic.ModeTransform:
        return analytic.ModeTransform(
            c_a=complex(flow[0, col]),
            c_b=complex(flow[1, col]),
            c_bdag=complex(flow[2, col]),
            c_adag=complex(flow[3, col]),
        )

    return _column(0), _column(1), closure


def _transform_distance(
    fitted: analytic.ModeTransform, closed: analytic.ModeTransform
) -> float:
    return max(
        abs(fitted.c_a - closed.c_a),
        abs(fitted.c_b - closed.c_b),
        abs(fitted.c_bdag - closed.c_bdag),
        abs(fitted.c_adag - closed.c_adag),
    )


def identity_suite(
    params: NcParams,
    space: FockSpace,
    amps: ModeAmplitudes,
    z: SqueezeParam,
    buffer: int = DEFAULT_BUFFER,
) -> List[ResidualReport]:
    """All operator-level identities, one report per identity class.

    Classes: the phase-plane commutators, the deformed and ordinary boson
    algebras, the displacement shift property, the squeeze conjugation
    coefficients, eigenvalue relations of the constructed states, and the
    collective-quadrature commutator.
    """
    ops = build_operator_set(params, space)
    meta = _params_meta(params, space, buffer)
    resids = algebra_residuals(ops, buffer)
    reports = [
        _report(
            "heisenberg_weyl",
            max(resids[k] for k in ("xy", "pxpy", "xpx", "ypy", "xpy", "ypx")),
            COMMUTATOR_TOL,
            **meta,
        ),
        _report(
            "deformed_algebra",
            max(resids[k] for k in ("a_adag", "b_bdag", "ab", "a_bdag", "b_adag")),
            COMMUTATOR_TOL,
            **meta,
        ),
        _report(
            "ordinary_algebra",
            max(resids[k] for k in ("ord_a_adag", "ord_b_bdag", "ord_ab", "ord_a_bdag")),
            COMMUTATOR_TOL,
            **meta,
        ),
    ]

    lam_a, lam_b = analytic.coherent_eigenvalues(params, amps)
    eye = np.eye(space.dim)

    disp = displacement_op(params, space, amps, ops)
    shift_a = disp.dag().matrix @ ops.a_def.matrix @ disp.matrix \
        - ops.a_def.matrix - lam_a * eye
    shift_b = disp.dag().matrix @ ops.b_def.matrix @ disp.matrix \
        - ops.b_def.matrix - lam_b * eye
    # Matrix-exponential conjugation smears edge artifacts roughly 15
    # levels into the interior (factorially damped), so this check needs
    # a deeper margin than the single-commutator ones.
    conj_buffer = max(buffer, min(15, space.cutoff - 4))
    reports.append(
        _report(
            "displacement_property",
            max(
                _safe_block_max(space, shift_a, conj_buffer),
                _safe_block_max(space, shift_b, conj_buffer),
            ),
            OPERATOR_TOL,
            alpha=str(amps.alpha),
            beta=str(amps.beta),
            **meta,
        )
    )

    if z.r > 0.0:
        sq = squeeze_op(params, space, z, ops)
    else:
        sq = OperatorMatrix(space, np.eye(space.dim, dtype=np.complex128))
    conj_a = OperatorMatrix(space, sq.matrix @ ops.a_def.matrix @ sq.dag().matrix)
    conj_b = OperatorMatrix(space, sq.matrix @ ops.b_def.matrix @ sq.dag().matrix)
    closed = analytic.bogoliubov_coefficients(params, z)
    ad_a, ad_b, closure = adjoint_mode_transform(_squeeze_generator(ops, z), ops, buffer)
    reports.append(
        _report(
            "bogoliubov",
            max(
                _transform_distance(ad_a, closed.mode_a),
                _transform_distance(ad_b, closed.mode_b),
                closure,
            ),
            OPERATOR_TOL,
            closure_residual=closure,
            r=z.r,
            phi=z.phi,
            **meta,
        )
    )

    # Identity checks stay exact under truncation (the construction and
    # the relation share the same truncated generators), so a fatter tail
    # than the oracle-grade default is acceptable here.
    coh = make_state(params, space, amps, ops=ops, tail_tol=1e-6)
    eig = max(
        float(np.linalg.norm(ops.a_def.matrix @ coh.vector - lam_a * coh.vector)),
        float(np.linalg.norm(ops.b_def.matrix @ coh.vector - lam_b * coh.vector)),
    )
    if z.r > 0.0:
        sqz = make_state(params, space, amps, z, ops=ops, tail_tol=1e-6)
        eig = max(
            eig,
            float(np.linalg.norm(conj_a.matrix @ sqz.vector - lam_a * sqz.vector)),
            float(np.linalg.norm(conj_b.matrix @ sqz.vector - lam_b * sqz.vector)),
        )
    reports.append(
        _report(
            "eigenvalue_relations",
            eig,
            OPERATOR_TOL,
            alpha=str(amps.alpha),
            beta=str(amps.beta),
            r=z.r,
            phi=z.phi,
            **meta,
        )
    )

    reports.append(_report("two_mode_commutator", resids["XP"], COMMUTATOR_TOL, **meta))
    return reports


def _relative_error(got: complex, want: complex) -> float:
    scale = max(abs(want), 1e-30)
    return abs(got - want) / scale


def crosscheck_suite(
    params: NcParams,
    space: FockSpace,
    cases: Sequence[Tuple[ModeAmplitudes, Optional[SqueezeParam]]],
    buffer: int = DEFAULT_BUFFER,
) -> List[ResidualReport]:
    """State-level closed-form versus engine comparisons.

    For each (amplitudes, squeeze) case: the overlaps of the state against
    the deformed vacuum and against the coherent state with the same
    amplitudes, and the six quadrature variances, all compared to their
    closed forms at relative tolerance 1e-6.
    """
    ops = build_operator_set(params, space)
    vac_amps = ModeAmplitudes(0.0, 0.0)
    vacuum = make_state(params, space, ops=ops)
    big_x = 0.5 * (ops.x + ops.y)
    big_p = 0.5 * (ops.px + ops.py)

    reports: List[ResidualReport] = []
    for index, (amps, z) in enumerate(cases):
        state = make_state(params, space, amps, z, ops=ops)
        case_meta = {
            "case": index,
            "alpha": str(amps.alpha),
            "beta": str(amps.beta),
            "r": 0.0 if z is None else z.r,
            "phi": 0.0 if z is None else z.phi,
        }
        case_meta.update(_params_meta(params, space, buffer))

        if z is None or z.r == 0.0:
            want_vac = analytic.coherent_overlap(params, vac_amps, amps)
            want_self = analytic.coherent_overlap(params, amps, amps)
        else:
            want_vac = analytic.squeezed_overlap(params, vac_amps, amps, z)
            want_self = analytic.squeezed_overlap(params, amps, amps, z)
        coherent_bra = make_state(params, space, amps, ops=ops)
        overlap_resid = max(
            _relative_error(vacuum.inner(state), want_vac),
            _relative_error(coherent_bra.inner(state), want_self),
        )
        reports.append(
            _report(f"overlap[{index}]", overlap_resid, CROSSCHECK_TOL, **case_meta)
        )

        single = analytic.single_mode_report(params, z)
        two = analytic.two_mode_report(params, z)
        expected = {
            "dx2": (ops.x, single.dx2),
            "dy2": (ops.y, single.dy2),
            "dpx2": (ops.px, single.dpx2),
            "dpy2": (ops.py, single.dpy2),
            "dX2": (big_x, two.dX2),
            "dP2": (big_p, two.dP2),
        }
        var_resid = 0.0
        values: Dict[str, float] = {}
        for name, (op, want) in expected.items():
            _, got = expectation_and_variance(state, op)
            values[name] = got
            var_resid = max(var_resid, abs(got - want) / max(abs(want), 1e-30))
        reports.append(
            _report(
                f"variance[{index}]",
                var_resid,
                CROSSCHECK_TOL,
                oracle_values=values,
                **case_meta,
            )
        )
    return reports


def overcompleteness_mc(
    params: NcParams,
    probes: Sequence[Tuple[ModeAmplitudes, ModeAmplitudes]],
    samples: int,
    seed: int,
    z: Optional[SqueezeParam] = None,
) -> List[McReport]:
    """Monte-Carlo check of the weighted resolution of the identity.

    For each probe pair (psi1, psi2) the matrix element <psi1|I|psi2> is
    estimated by sampling (alpha, beta) from the standard complex Gaussian
    and weighting with (1 - theta**2) * exp(|alpha|**2 + |beta|**2), the
    importance correction for that density.  The reference value is the
    closed-form overlap <psi1|psi2>.  With a squeeze given, the sampled
    family consists of squeezed states instead; the identity (and hence
    the reference) is unchanged.
    """
    theta = params.theta
    if theta >= 1.0:
        raise ThetaAtOrAboveOne(
            f"resolution of the identity needs theta < 1, got {theta}"
        )
    if samples < MC_MIN_SAMPLES:
        raise SamplesTooFew(f"need at least {MC_MIN_SAMPLES} samples, got {samples}")

    weight_prefactor = 1.0 - theta * theta
    reports: List[McReport] = []
    for index, (psi1, psi2) in enumerate(probes):
        rng = np.random.default_rng([seed, index])
        draws = rng.normal(0.0, math.sqrt(0.5), size=(4, samples))
        alpha = draws[0] + 1j * draws[1]
        beta = draws[2] + 1j * draws[3]
        gauss_weight = np.exp(np.abs(alpha) ** 2 + np.abs(beta) ** 2)

        if z is None or z.r == 0.0:
            left = analytic._coherent_overlap_raw(
                theta, psi1.alpha, psi1.beta, alpha, beta
            )
            right = analytic._coherent_overlap_raw(
                theta, alpha, beta, psi2.alpha, psi2.beta
            )
        else:
            left = analytic._squeezed_overlap_raw(
                theta, psi1.alpha, psi1.beta, alpha, beta, z.r, z.phi
            )
            right = np.conjugate(
                analytic._squeezed_overlap_raw(
                    theta, psi2.alpha, psi2.beta, alpha, beta, z.r, z.phi
                )
            )
        values = weight_prefactor * left * right * gauss_weight

        estimate = complex(values.mean())
        spread = (values.real.var(ddof=1) + values.imag.var(ddof=1)) / samples
        stderr = float(math.sqrt(spread))
        reference = analytic.coherent_overlap(params, psi1, psi2)
        diff = abs(estimate - reference)
        if stderr == 0.0:
            z_score = 0.0 if diff == 0.0 else math.inf
        else:
            z_score = diff / stderr
        reports.append(
            McReport(
                estimate=estimate,
                reference=reference,
                stderr=stderr,
                samples=samples,
                seed=seed,
                z_score=z_score,
            )
        )
    return reports


_TRACKED_VARIANCES = ("dx2", "dy2", "dpx2", "dpy2", "dX2", "dP2")


def convergence_probe(
    params: NcParams,
    amps: ModeAmplitudes,
    z: Optional[SqueezeParam],
    cutoffs: Sequence[int],
    buffer: int = DEFAULT_BUFFER,
) -> List[ResidualReport]:
    """Truncation-convergence check across increasing cutoffs.

    Tracks the six quadrature variances and the vacuum overlap of the same
    state built at each cutoff, and reports the successive relative
    differences.  A quantity passes when the differences shrink (tiny
    floors forgiven) and the last one is below 1e-8.
    """
    from .fock import make_space  # local import keeps module load light

    if len(cutoffs) < 2:
        raise ValueError("need at least two cutoffs to measure convergence")
    if list(cutoffs) != sorted(set(cutoffs)):
        raise ValueError(f"cutoffs must be strictly increasing, got {cutoffs!r}")

    tracked: Dict[str, List[float]] = {name: [] for name in _TRACKED_VARIANCES}
    tracked["vac_overlap"] = []
    for cutoff in cutoffs:
        space = make_space(cutoff)
        ops = build_operator_set(params, space)
        # The probe exists to measure truncation error, so it must be able
        # to build states whose truncation error is still visible.
        state = make_state(params, space, amps, z, ops=ops, buffer=buffer,
                           tail_tol=1e-3)
        vacuum = make_state(params, space, ops=ops, buffer=buffer,
                            tail_tol=1e-3)
        quads = {
            "dx2": ops.x,
            "dy2": ops.y,
            "dpx2": ops.px,
            "dpy2": ops.py,
            "dX2": 0.5 * (ops.x + ops.y),
            "dP2": 0.5 * (ops.px + ops.py),
        }
        for name, op in quads.items():
            _, variance = expectation_and_variance(state, op)
            tracked[name].append(variance)
        tracked["vac_overlap"].append(abs(vacuum.inner(state)))

    reports = []
    for name, values in tracked.items():
        diffs = [
            abs(b - a) / max(abs(b), 1e-30)
            for a, b in zip(values[:-1], values[1:])
        ]
        shrinking = all(
            later <= max(earlier, 1e-12)
            for earlier, later in zip(diffs[:-1], diffs[1:])
        )
        final = diffs[-1]
        reports.append(
            ResidualReport(
                check_id=f"convergence:{name}",
                residual=final,
                tolerance=1e-8,
                passed=shrinking and final <= 1e-8,
                metadata={
                    "cutoffs": list(cutoffs),
                    "values": values,
                    "differences": diffs,
                    "mu": params.mu,
                    "nu": params.nu,
                    "hbar": params.hbar,
                },
            )
        )
    return reports


def supercritical_witness(params: NcParams, r: float = 0.3) -> SupercriticalWitness:
    """Exhibit an uncertainty-floor violation for super-critical parameters.

    At phi = pi/2 the x-px product equals its phi-minimum
    (hbar**2/4)*(1 + (1 - theta**2)*sinh(2r)**2), which drops below the
    floor hbar**2/4 exactly when mu*nu > hbar**2 and r > 0.  For
    sub-critical parameters the returned witness is simply not violated.
    """
    z = SqueezeParam(r=r, phi=0.5 * math.pi)
    products = analytic.variance_products(params, z)
    floor = 0.25 * params.hbar**2
    return SupercriticalWitness(
        r=r,
        phi=z.phi,
        product=products.prod_xpx,
        floor=floor,
        violated=bool(products.prod_xpx < floor),
    )
