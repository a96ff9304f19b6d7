"""Truncated two-mode number-basis realisation of the deformed pair.

The Hilbert space is spanned by |n_a, n_b> with both occupations capped at
``cutoff``; index layout is row-major, i = n_a*(cutoff+1) + n_b.  Ordinary
ladder matrices are Kronecker products of the single-mode ladder with the
identity.  The noncommuting plane operators (x, y, px, py) are obtained by
inverting the linear map that defines the ordinary modes in terms of them,
which is a 4x4 solve with the truncated ladder matrices on the right-hand
side; the deformed pair (a_def, b_def) is then assembled from the plane
operators.  Everything downstream (displacement, squeeze, the deformed
vacuum) works with these matrices.

Truncation is the only approximation.  Operator identities hold exactly on
the subspace of total occupation <= cutoff - buffer; states are guarded by a
tail-population check so that a state silently pressed against the cutoff
raises instead of returning garbage.
"""

from __future__ import annotations

import functools
import math
import numbers
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import expm
from scipy.sparse import csr_array
from scipy.sparse.linalg import expm_multiply

from .analytic import ModeAmplitudes, SqueezeParam
from .params import ConstraintClass, NcParams, NonFinite

__all__ = [
    "CutoffOutOfRange",
    "FockSpace",
    "NonHermitianOperator",
    "OperatorMatrix",
    "OperatorSet",
    "PopulationOverflow",
    "SaturatedOrSuperCritical",
    "SpaceMismatch",
    "SqueezeTooLargeForCutoff",
    "StateVector",
    "basis_state",
    "build_operator_set",
    "commutator",
    "deformed_ops",
    "deformed_vacuum",
    "displacement_op",
    "expectation",
    "expectation_and_variance",
    "make_space",
    "make_state",
    "matrix_exp",
    "ordinary_mode_ops",
    "phase_space_ops",
    "safe_norm_fraction",
    "squeeze_op",
]

MAX_CUTOFF = 200
DEFAULT_MAX_SQUEEZE = 0.7
DEFAULT_TAIL_TOL = 1e-10
DEFAULT_BUFFER = 5

# below this the 4x4 map is numerically singular (the plane operators blow up)
MIN_LAMBDA_DENOM = 1e-8


class CutoffOutOfRange(ValueError):
    """Cutoff is not an integer in [1, MAX_CUTOFF]."""


class SaturatedOrSuperCritical(ValueError):
    """The plane-operator construction needs strictly sub-critical parameters."""


class SqueezeTooLargeForCutoff(ValueError):
    """Requested squeeze strength exceeds the configured safety bound."""


class PopulationOverflow(RuntimeError):
    """Too much state population sits near the occupation cutoff."""


class SpaceMismatch(ValueError):
    """Operands live on different truncated spaces."""


class NonHermitianOperator(ValueError):
    """A variance was requested for an operator that is not Hermitian."""


@dataclass(frozen=True, eq=False)
class FockSpace:
    """Two-mode truncated number basis with per-mode occupation <= cutoff."""

    cutoff: int
    dim: int
    n_a: np.ndarray
    n_b: np.ndarray
    n_tot: np.ndarray

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FockSpace) and other.cutoff == self.cutoff

    def __hash__(self) -> int:
        return hash(("FockSpace", self.cutoff))

    def index_of(self, n_a: int, n_b: int) -> int:
        if not (0 <= n_a <= self.cutoff and 0 <= n_b <= self.cutoff):
            raise CutoffOutOfRange(
                f"occupation ({n_a}, {n_b}) outside [0, {self.cutoff}]"
            )
        return n_a * (self.cutoff + 1) + n_b


def make_space(cutoff: int) -> FockSpace:
    """Build the truncated space; cutoff must be an integer in [1, 200]."""
    if isinstance(cutoff, bool) or not isinstance(cutoff, numbers.Integral):
        raise CutoffOutOfRange(f"cutoff must be an integer, got {cutoff!r}")
    cutoff = int(cutoff)
    if not (1 <= cutoff <= MAX_CUTOFF):
        raise CutoffOutOfRange(f"cutoff must be in [1, {MAX_CUTOFF}], got {cutoff}")
    side = cutoff + 1
    dim = side * side
    idx = np.arange(dim)
    n_a = idx // side
    n_b = idx % side
    n_tot = n_a + n_b
    for arr in (n_a, n_b, n_tot):
        arr.setflags(write=False)
    return FockSpace(cutoff=cutoff, dim=dim, n_a=n_a, n_b=n_b, n_tot=n_tot)


def _check_same_space(left: FockSpace, right: FockSpace) -> None:
    if left != right:
        raise SpaceMismatch(
            f"operands live on different spaces (cutoffs {left.cutoff} and {right.cutoff})"
        )


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense complex matrix tagged with the space it acts on."""

    space: FockSpace
    matrix: np.ndarray

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.matrix.conj().T.copy())

    def hermitized(self) -> "OperatorMatrix":
        return OperatorMatrix(self.space, 0.5 * (self.matrix + self.matrix.conj().T))

    def hermiticity_defect(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        _check_same_space(self.space, other.space)
        return OperatorMatrix(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        _check_same_space(self.space, other.space)
        return OperatorMatrix(self.space, self.matrix - other.matrix)

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix(self.space, -self.matrix)

    def __mul__(self, scalar: complex) -> "OperatorMatrix":
        if not isinstance(scalar, numbers.Complex):
            return NotImplemented
        return OperatorMatrix(self.space, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            _check_same_space(self.space, other.space)
            return OperatorMatrix(self.space, self.matrix @ other.matrix)
        if isinstance(other, StateVector):
            _check_same_space(self.space, other.space)
            return StateVector(self.space, self.matrix @ other.vector)
        return NotImplemented


def commutator(left: OperatorMatrix, right: OperatorMatrix) -> OperatorMatrix:
    return left @ right - right @ left


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex state vector tagged with its space."""

    space: FockSpace
    vector: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalise the zero vector")
        return StateVector(self.space, self.vector / n)

    def inner(self, other: "StateVector") -> complex:
        """<self|other>, conjugating this vector."""
        _check_same_space(self.space, other.space)
        return complex(np.vdot(self.vector, other.vector))

    def population(self) -> np.ndarray:
        return np.abs(self.vector) ** 2


def basis_state(space: FockSpace, n_a: int, n_b: int) -> StateVector:
    """Number state |n_a, n_b> as a unit vector."""
    vec = np.zeros(space.dim, dtype=np.complex128)
    vec[space.index_of(n_a, n_b)] = 1.0
    return StateVector(space, vec)


def _single_mode_ladder(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, cutoff + 1.0)), k=1)


def ordinary_mode_ops(space: FockSpace) -> Tuple[OperatorMatrix, OperatorMatrix]:
    """Ordinary (undeformed) annihilators a, b as truncated matrices."""
    side = space.cutoff + 1
    ladder = _single_mode_ladder(space.cutoff)
    eye = np.eye(side)
    a = np.kron(ladder, eye).astype(np.complex128)
    b = np.kron(eye, ladder).astype(np.complex128)
    return OperatorMatrix(space, a), OperatorMatrix(space, b)


def phase_space_ops(
    params: NcParams, space: FockSpace
) -> Tuple[OperatorMatrix, OperatorMatrix, OperatorMatrix, OperatorMatrix]:
    """Plane operators (x, y, px, py) realised on the truncated space.

    The ordinary modes are defined as fixed linear combinations of the four
    plane operators; inverting that definition is a 4x4 linear solve with
    matrix-valued right-hand sides built from a, a+, b, b+.  The solutions
    are hermitised to kill rounding asymmetry.  Requires strictly
    sub-critical parameters: at and beyond the critical point the map is
    singular.
    """
    if (
        params.constraint_class is not ConstraintClass.SUB_CRITICAL
        or params.lambda_denom is None
        or params.lambda_denom <= MIN_LAMBDA_DENOM
    ):
        raise SaturatedOrSuperCritical(
            "plane operators need sub-critical parameters with a well-conditioned "
            f"map; got class {params.constraint_class.value!r}, "
            f"denominator {params.lambda_denom!r}"
        )
    hbar = params.hbar
    kappa = params.kappa
    denom = params.lambda_denom
    a, b = ordinary_mode_ops(space)
    adag = a.dag()
    bdag = b.dag()

    coeff = np.array(
        [
            [kappa, 0.0, 0.0, params.mu / (2.0 * hbar)],
            [0.0, -params.nu / (2.0 * kappa * hbar), 1.0, 0.0],
            [0.0, kappa, -params.mu / (2.0 * hbar), 0.0],
            [params.nu / (2.0 * kappa * hbar), 0.0, 0.0, 1.0],
        ]
    )
    scale = math.sqrt(0.5 * hbar) * denom
    rhs = np.stack(
        [
            scale * (a.matrix + adag.matrix),
            scale * (a.matrix - adag.matrix) / 1j,
            scale * (b.matrix + bdag.matrix),
            scale * (b.matrix - bdag.matrix) / 1j,
        ]
    ).reshape(4, -1)
    sol = np.linalg.solve(coeff, rhs).reshape(4, space.dim, space.dim)
    x, y, px, py = (
        OperatorMatrix(space, m).hermitized() for m in sol
    )
    return x, y, px, py


def deformed_ops(
    params: NcParams,
    space: FockSpace,
    plane: Optional[Tuple[OperatorMatrix, ...]] = None,
) -> Tuple[OperatorMatrix, OperatorMatrix]:
    """Deformed annihilators built from the plane operators.

    a_def mixes x with px, b_def mixes y with py, each with the quartic-root
    weights that make the pair dimensionless.  The two satisfy the usual
    single-mode relations plus the cross relation [a_def, b_def+] = i*theta.
    """
    if plane is None:
        plane = phase_space_ops(params, space)
    x, y, px, py = plane
    c = (params.nu / params.mu) ** 0.25
    d = (params.mu / params.nu) ** 0.25
    scale = 1.0 / math.sqrt(2.0 * params.hbar)
    a_def = scale * (c * x + (1j * d) * px)
    b_def = scale * (c * y + (1j * d) * py)
    return a_def, b_def


@dataclass(frozen=True, eq=False)
class OperatorSet:
    """All the matrices most callers need, built once per (params, space)."""

    space: FockSpace
    params: NcParams
    a_ord: OperatorMatrix
    b_ord: OperatorMatrix
    x: OperatorMatrix
    y: OperatorMatrix
    px: OperatorMatrix
    py: OperatorMatrix
    a_def: OperatorMatrix
    b_def: OperatorMatrix

    @functools.cached_property
    def pair_annihilator(self) -> OperatorMatrix:
        """a_def @ b_def, cached: it anchors every squeeze generator."""
        return self.a_def @ self.b_def

    @functools.cached_property
    def pair_creator(self) -> OperatorMatrix:
        return self.pair_annihilator.dag()

    @functools.cached_property
    def ground(self) -> StateVector:
        """The joint null state of both deformed annihilators, cached."""
        return deformed_vacuum(self.params, self.space, self)


def build_operator_set(params: NcParams, space: FockSpace) -> OperatorSet:
    a_ord, b_ord = ordinary_mode_ops(space)
    plane = phase_space_ops(params, space)
    a_def, b_def = deformed_ops(params, space, plane)
    x, y, px, py = plane
    return OperatorSet(
        space=space, params=params, a_ord=a_ord, b_ord=b_ord,
        x=x, y=y, px=px, py=py, a_def=a_def, b_def=b_def,
    )


def matrix_exp(op: OperatorMatrix, tol: float = 1e-12) -> OperatorMatrix:
    """Dense matrix exponential with a finiteness guard on the result.

    The underlying scaling-and-squaring method is backward stable well
    below the default tol; for anti-Hermitian input the result is unitary
    to within about 10*tol in max norm.  tol documents the contract, it is
    not an algorithm knob.
    """
    if not np.isfinite(op.matrix).all():
        raise NonFinite("matrix exponential of a non-finite matrix")
    result = expm(op.matrix)
    if not np.isfinite(result).all():
        raise NonFinite("matrix exponential produced non-finite entries")
    return OperatorMatrix(op.space, result)


def _displacement_generator(ops: OperatorSet, amps: ModeAmplitudes) -> OperatorMatrix:
    alpha, beta = amps.alpha, amps.beta
    return (
        alpha * ops.a_def.dag()
        + beta * ops.b_def.dag()
        - np.conjugate(alpha) * ops.a_def
        - np.conjugate(beta) * ops.b_def
    )


def _squeeze_generator(ops: OperatorSet, z: SqueezeParam) -> OperatorMatrix:
    zc = z.z
    return np.conjugate(zc) * ops.pair_annihilator - zc * ops.pair_creator


def displacement_op(
    params: NcParams, space: FockSpace, amps: ModeAmplitudes,
    ops: Optional[OperatorSet] = None,
) -> OperatorMatrix:
    """Unitary displacement of the deformed pair by (alpha, beta)."""
    if ops is None:
        ops = build_operator_set(params, space)
    return matrix_exp(_displacement_generator(ops, amps))


def squeeze_op(
    params: NcParams, space: FockSpace, z: SqueezeParam,
    ops: Optional[OperatorSet] = None, max_r: float = DEFAULT_MAX_SQUEEZE,
) -> OperatorMatrix:
    """Two-mode squeeze of the deformed pair; refuses r beyond max_r.

    The refusal is a coarse gate: even below it, states are still subject to
    the tail-population guard in make_state.
    """
    if z.r > max_r:
        raise SqueezeTooLargeForCutoff(
            f"squeeze r={z.r} exceeds max_r={max_r}; raise max_r explicitly "
            "if the cutoff can absorb it"
        )
    if ops is None:
        ops = build_operator_set(params, space)
    return matrix_exp(_squeeze_generator(ops, z))


def deformed_vacuum(
    params: NcParams, space: FockSpace, ops: Optional[OperatorSet] = None
) -> StateVector:
    """The state annihilated by both deformed annihilators.

    On the truncated space a_def and b_def are exact linear combinations of
    the ordinary ladder matrices, so the joint null state is a Gaussian over
    the ordinary basis: exp(Q)|0,0> with Q quadratic in the ordinary
    creators.  The three quadratic coefficients solve a small overdetermined
    linear system read off from matrix entries; exp(Q)|0,0> is summed as a
    terminating Taylor series because Q only raises total occupation.
    """
    if ops is None:
        ops = build_operator_set(params, space)
    a_def = ops.a_def.matrix
    b_def = ops.b_def.matrix
    i00 = space.index_of(0, 0)
    i10 = space.index_of(1, 0)
    i01 = space.index_of(0, 1)

    # coefficients of a_def = A_a a + A_adag a+ + A_b b + A_bdag b+ (mode b alike)
    sys = np.array(
        [
            [a_def[i00, i10], a_def[i00, i01], 0.0],
            [0.0, a_def[i00, i10], a_def[i00, i01]],
            [b_def[i00, i10], b_def[i00, i01], 0.0],
            [0.0, b_def[i00, i10], b_def[i00, i01]],
        ],
        dtype=np.complex128,
    )
    rhs = -np.array(
        [a_def[i10, i00], a_def[i01, i00], b_def[i10, i00], b_def[i01, i00]],
        dtype=np.complex128,
    )
    lam, residual, rank, _ = np.linalg.lstsq(sys, rhs, rcond=None)
    fit = sys @ lam - rhs
    if float(np.linalg.norm(fit)) > 1e-10:
        raise SaturatedOrSuperCritical(
            "no Gaussian null state: quadratic coefficient fit did not close "
            f"(residual {float(np.linalg.norm(fit)):.3e})"
        )

    adag = csr_array(ops.a_ord.dag().matrix)
    bdag = csr_array(ops.b_ord.dag().matrix)

    def quad_apply(v: np.ndarray) -> np.ndarray:
        av = adag @ v
        bv = bdag @ v
        return 0.5 * lam[0] * (adag @ av) + lam[1] * (adag @ bv) \
            + 0.5 * lam[2] * (bdag @ bv)

    vec = np.zeros(space.dim, dtype=np.complex128)
    vec[i00] = 1.0
    term = vec.copy()
    for k in range(1, space.cutoff + 2):
        term = quad_apply(term) / k
        tnorm = float(np.linalg.norm(term))
        if tnorm == 0.0:
            break
        vec = vec + term
        if tnorm < 1e-18 * float(np.linalg.norm(vec)):
            break
    return StateVector(space, vec).normalized()


def make_state(
    params: NcParams,
    space: FockSpace,
    amps: Optional[ModeAmplitudes] = None,
    z: Optional[SqueezeParam] = None,
    *,
    ops: Optional[OperatorSet] = None,
    buffer: int = DEFAULT_BUFFER,
    tail_tol: float = DEFAULT_TAIL_TOL,
    max_r: float = DEFAULT_MAX_SQUEEZE,
) -> StateVector:
    """Displaced, optionally squeezed state of the deformed pair.

    Pipeline: deformed vacuum, then the displacement, then the squeeze (so
    the squeeze acts last), each unitary applied by Krylov-style
    exponential-times-vector products rather than a full matrix exponential.
    The result is normalised and guarded: if more than tail_tol of its
    population sits within ``buffer`` quanta of the cutoff, the truncation
    cannot be trusted and PopulationOverflow is raised.
    """
    if ops is None:
        ops = build_operator_set(params, space)
    if z is not None and z.r > max_r:
        raise SqueezeTooLargeForCutoff(
            f"squeeze r={z.r} exceeds max_r={max_r}; raise max_r explicitly "
            "if the cutoff can absorb it"
        )
    vec = ops.ground.vector
    if amps is not None and (amps.alpha != 0.0 or amps.beta != 0.0):
        gen = csr_array(_displacement_generator(ops, amps).matrix)
        vec = expm_multiply(gen, vec)
    if z is not None and z.r > 0.0:
        gen = csr_array(_squeeze_generator(ops, z).matrix)
        vec = expm_multiply(gen, vec)
    out = StateVector(space, vec).normalized()
    leak = safe_norm_fraction(out, buffer=buffer)
    if leak > tail_tol:
        raise PopulationOverflow(
            f"{leak:.3e} of the population lies within {buffer} quanta of "
            f"cutoff {space.cutoff}; increase the cutoff"
        )
    return out


def safe_norm_fraction(state: StateVector, buffer: int = DEFAULT_BUFFER) -> float:
    """Fraction of squared norm with total occupation above cutoff - buffer.

    This is the truncation-leakage diagnostic: 0 for states living deep
    inside the space, approaching 1 as population piles up at the cutoff.
    """
    space = state.space
    if not (0 <= buffer <= space.cutoff):
        raise ValueError(f"buffer must be in [0, {space.cutoff}], got {buffer}")
    mask = space.n_tot > space.cutoff - buffer
    pop = state.population()
    total = float(np.sum(pop))
    if total == 0.0:
        raise ValueError("zero state has no population fractions")
    return float(np.sum(pop[mask])) / total


def expectation(state: StateVector, op: OperatorMatrix) -> complex:
    """<state|op|state> for any operator, Hermitian or not."""
    _check_same_space(state.space, op.space)
    return complex(np.vdot(state.vector, op.matrix @ state.vector))


def expectation_and_variance(
    state: StateVector, op: OperatorMatrix
) -> Tuple[complex, float]:
    """Mean and variance of a Hermitian operator in the given state.

    Refuses non-Hermitian input, since variance is only meaningful for
    observables; use expectation() for general means.  Tiny negative
    variances from rounding are clamped to zero.
    """
    _check_same_space(state.space, op.space)
    defect = op.hermiticity_defect()
    scale = max(1.0, float(np.abs(op.matrix).max()))
    if defect > 1e-10 * scale:
        raise NonHermitianOperator(
            f"hermiticity defect {defect:.3e} exceeds tolerance for variance"
        )
    applied = op.matrix @ state.vector
    mean = complex(np.vdot(state.vector, applied))
    second = float(np.real(np.vdot(applied, applied)))
    var = second - (mean.real * mean.real + mean.imag * mean.imag)
    if var < 0.0:
        var = 0.0
    return mean, var
