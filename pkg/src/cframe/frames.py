"""Controlled operator-frame systems and their bound certificates.

A system bundles a weighted module, a finite operator family (T_i), two
positive invertible control operators C and C', and a comparison
operator K.  The certified inequality sandwiches the family form

    sum_i <T_i C x, T_i C' x>

between A <K* x, K* x> A* from below and B <x, x> B* from above, where
A and B are algebra elements.  In the tuple model every side is a
Hermitian form per character, so the optimal bounds are extremal
eigenvalues of matrix pencils: the upper bound against the weight, the
lower bound against the comparison form with its kernel excluded.
Certificates are recomputed quantities, never trusted inputs; check_at
re-evaluates the inequality at any vector.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .algebra import (AlgebraElement, alg_is_positive,
                      alg_is_strictly_nonzero)
from .errors import (LengthMismatch, NotCommuting, NotGLPlus,
                     SingularFrameOperator, SpaceMismatch)
from .module_space import ModuleSpace, ModuleVector, module_norm
from .operators import (ModuleOperator, adjoint_gram_matrix, identity,
                        op_adjoint, op_classify, op_compose, op_norm, op_sqrt)
from .spectral import hermitian_part, pencil_extremes, restricted_pencil_min

STATUS_FRAME = "frame"
STATUS_BESSEL = "bessel_only"
STATUS_NOT_FRAME = "not_frame"

_COMMUTE_RTOL = 1e-10
_TIGHT_RTOL = 1e-8
_SKEW_RTOL = 1e-8


def commutation_residual(x: ModuleOperator, y: ModuleOperator) -> float:
    """Relative size of the commutator x y - y x."""
    num = op_norm(op_compose(x, y) - op_compose(y, x))
    den = max(op_norm(x) * op_norm(y), 1e-300)
    return num / den


@dataclass(frozen=True)
class CommutationFlags:
    """Checked, not assumed: each flag records a passed residual test."""

    controls_commute: bool
    controls_with_family: bool
    controls_with_k: bool
    worst_residual: float


@dataclass(frozen=True, eq=False)
class ControlledFrameSystem:
    space: ModuleSpace
    family: tuple[ModuleOperator, ...]
    control: ModuleOperator
    control_prime: ModuleOperator
    comparison: ModuleOperator

    def __post_init__(self):
        for t in self.family:
            if t.domain != self.space or t.codomain != self.space:
                raise SpaceMismatch("family members must be endomorphisms")
        for name, op in (("control", self.control),
                         ("control_prime", self.control_prime)):
            if op.domain != self.space or op.codomain != self.space:
                raise SpaceMismatch(f"{name} must be an endomorphism")
            if not op_classify(op).glplus:
                raise NotGLPlus(f"{name} must be positive and invertible")
        k = self.comparison
        if k.domain != self.space or k.codomain != self.space:
            raise SpaceMismatch("comparison operator must be an endomorphism")
        object.__setattr__(self, "flags", self._compute_flags())

    def _compute_flags(self) -> CommutationFlags:
        worst = commutation_residual(self.control, self.control_prime)
        cc = worst <= _COMMUTE_RTOL
        fam = 0.0
        for t in self.family:
            tt = op_compose(op_adjoint(t), t)
            fam = max(fam, commutation_residual(self.control, tt))
            fam = max(fam, commutation_residual(self.control_prime, tt))
        kk = max(commutation_residual(self.control, self.comparison),
                 commutation_residual(self.control_prime, self.comparison))
        return CommutationFlags(
            controls_commute=cc,
            controls_with_family=fam <= _COMMUTE_RTOL,
            controls_with_k=kk <= _COMMUTE_RTOL,
            worst_residual=max(worst, fam, kk),
        )


def frame_system(space: ModuleSpace, family, control=None, control_prime=None,
                 comparison=None) -> ControlledFrameSystem:
    """Assemble a system; omitted operators default to the identity."""
    ident = identity(space)
    return ControlledFrameSystem(
        space=space,
        family=tuple(family),
        control=ident if control is None else control,
        control_prime=ident if control_prime is None else control_prime,
        comparison=ident if comparison is None else comparison,
    )


# -- Hermitian forms per fiber ------------------------------------------

def family_gram_matrix(sys: ControlledFrameSystem, j: int) -> np.ndarray:
    """Sum over the family of M^H W M at fiber j."""
    n = sys.space.dims[j]
    w = sys.space.weights[j]
    acc = np.zeros((n, n), dtype=np.complex128)
    for t in sys.family:
        m = t.blocks[j]
        acc += m.conj().T @ w @ m
    return acc


def frame_form_matrix(sys: ControlledFrameSystem, j: int, *,
                      hermitian: bool = True) -> np.ndarray:
    """Form matrix of x -> sum_i <T_i C x, T_i C' x> at fiber j.

    The exact matrix is C'^H (sum M^H W M) C; it is Hermitian whenever
    the controls commute with the family Gram blocks.  With hermitian
    set, the Hermitian part is returned, which is the form of the real
    part of the sum.
    """
    phi = (sys.control_prime.blocks[j].conj().T
           @ family_gram_matrix(sys, j) @ sys.control.blocks[j])
    return hermitian_part(phi) if hermitian else phi


def comparison_form_matrix(sys: ControlledFrameSystem, j: int) -> np.ndarray:
    """Form matrix of x -> <K* x, K* x> at fiber j."""
    return adjoint_gram_matrix(sys.comparison, j)


def gram_matrix(space: ModuleSpace, j: int) -> np.ndarray:
    """Form matrix of x -> <x, x> at fiber j, the weight itself."""
    return space.weights[j]


# -- frame operator and the analysis pair --------------------------------

def frame_operator(sys: ControlledFrameSystem) -> ModuleOperator:
    """S = sum_i C' T_i* T_i C as a single blockwise operator."""
    if not sys.family:
        raise ValueError("frame operator needs a nonempty family")
    blocks = []
    for j in range(len(sys.space.dims)):
        cp = sys.control_prime.blocks[j]
        c = sys.control.blocks[j]
        winv = sys.space.weight_inv(j)
        w = sys.space.weights[j]
        acc = np.zeros((sys.space.dims[j], sys.space.dims[j]),
                       dtype=np.complex128)
        for t in sys.family:
            m = t.blocks[j]
            acc += cp @ (winv @ m.conj().T @ w) @ m @ c
        blocks.append(acc)
    return ModuleOperator(sys.space, sys.space, tuple(blocks))


def _mixing_root(sys: ControlledFrameSystem) -> ModuleOperator:
    if not sys.flags.controls_commute:
        raise NotCommuting(
            "analysis needs commuting controls",
            residual=sys.flags.worst_residual,
        )
    return op_sqrt(op_compose(sys.control, sys.control_prime))


def analysis(sys: ControlledFrameSystem, x: ModuleVector) -> list[ModuleVector]:
    """Coefficients T_i (C C')^(1/2) x of the analysis map."""
    if x.space != sys.space:
        raise SpaceMismatch("vector is not in the system space")
    r = _mixing_root(sys)
    rx = r(x)
    return [t(rx) for t in sys.family]


def synthesis(sys: ControlledFrameSystem, seq) -> ModuleVector:
    """Adjoint of analysis: sum_i (C C')^(1/2) T_i* a_i."""
    seq = list(seq)
    if len(seq) != len(sys.family):
        raise LengthMismatch(
            f"expected {len(sys.family)} coefficients, got {len(seq)}"
        )
    r = _mixing_root(sys)
    out = sys.space.zero_vector()
    for t, a in zip(sys.family, seq):
        if a.space != sys.space:
            raise SpaceMismatch("coefficient vector in the wrong space")
        out = out + r(op_adjoint(t)(a))
    return out


# -- optimal bounds ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LowerBoundResult:
    """Outcome of the optimal lower bound; failure is a status, not an error."""

    ok: bool
    element: AlgebraElement
    infima: tuple[float, ...]
    vacuous: tuple[int, ...]
    failed: tuple[int, ...]


def optimal_upper_bound(sys: ControlledFrameSystem) -> AlgebraElement:
    """Entrywise smallest valid upper bound element.

    Coordinate j is the square root of the largest eigenvalue of the
    pencil (frame form, weight) at fiber j, floored at zero.
    """
    vals = []
    for j in range(len(sys.space.dims)):
        phi = frame_form_matrix(sys, j)
        ext = pencil_extremes(phi, sys.space.weights[j])
        vals.append(np.sqrt(max(ext.lambda_max, 0.0)))
    return AlgebraElement(sys.space.algebra,
                          np.array(vals, dtype=np.complex128))


def optimal_lower_bound(sys: ControlledFrameSystem) -> LowerBoundResult:
    """Entrywise largest valid lower bound element against the K-form.

    Fiber j solves inf x^H Phi x / x^H Gamma x over x with a nonzero
    denominator, Phi the frame form and Gamma the comparison form.  A
    fiber with vanishing Gamma puts no constraint on the bound; it is
    flagged vacuous and later filled with the largest feasible value.
    A fiber with infimum zero (or an indefinite frame form) admits no
    strictly nonzero bound, which fails the whole lower inequality.
    """
    d = len(sys.space.dims)
    eps = sys.space.algebra.eps_pos
    gammas = [comparison_form_matrix(sys, j) for j in range(d)]
    gscale = max([1.0] + [float(np.linalg.norm(g)) for g in gammas])
    infima: list[float] = []
    vacuous: list[int] = []
    failed: list[int] = []
    for j in range(d):
        phi = frame_form_matrix(sys, j)
        w = sys.space.weights[j]
        ext = pencil_extremes(phi, w)
        if ext.lambda_min < -_SKEW_RTOL * max(1.0, abs(ext.lambda_max)):
            # Frame form dips negative: no positive element fits below it.
            infima.append(0.0)
            failed.append(j)
            continue
        if float(np.linalg.norm(gammas[j])) <= eps * gscale:
            infima.append(float("inf"))
            vacuous.append(j)
            continue
        lam, u = np.linalg.eigh(phi)
        phi_psd = (u * np.clip(lam, 0.0, None)) @ u.conj().T
        val = restricted_pencil_min(phi_psd, gammas[j], tol=_SKEW_RTOL)
        infima.append(val)
        if val <= 0.0:
            failed.append(j)
    finite = [v for v in infima if np.isfinite(v)]
    fill = np.sqrt(max(finite)) if finite else 1.0
    vals = np.zeros(d, dtype=np.complex128)
    for j, v in enumerate(infima):
        vals[j] = fill if not np.isfinite(v) else np.sqrt(max(v, 0.0))
    return LowerBoundResult(
        ok=not failed,
        element=AlgebraElement(sys.space.algebra, vals),
        infima=tuple(infima),
        vacuous=tuple(vacuous),
        failed=tuple(failed),
    )


# -- certification -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FrameCertificate:
    """Recomputed two-sided bound data for one system."""

    lower: AlgebraElement
    upper: AlgebraElement
    tight: bool
    lower_residual: float
    upper_residual: float
    status: str
    vacuous: tuple[int, ...]


def _sample_parts(space: ModuleSpace, count: int, rng) -> list[np.ndarray]:
    parts = []
    for n in space.dims:
        parts.append(
            (rng.standard_normal((n, count))
             + 1j * rng.standard_normal((n, count))) / np.sqrt(2.0)
        )
    return parts


def _form_values(mat: np.ndarray, batch: np.ndarray) -> np.ndarray:
    return np.einsum("as,ab,bs->s", batch.conj(), mat, batch)


def _violations(sys: ControlledFrameSystem, low_sq: np.ndarray,
                up_sq: np.ndarray, batches: list[np.ndarray]):
    """Worst relative violation of each inequality over a sample batch.

    Returns (lower, upper, per-sample worst) where the per-sample track
    is used to pick a witness.  Imaginary mass in the family form counts
    against both sides, since positivity of the slack fails with it.
    """
    d = len(sys.space.dims)
    count = batches[0].shape[1] if d else 0
    per_sample = np.zeros(count)
    worst_lower = -np.inf
    worst_upper = -np.inf
    for j in range(d):
        phi = frame_form_matrix(sys, j, hermitian=False)
        gamma = comparison_form_matrix(sys, j)
        w = sys.space.weights[j]
        x = batches[j]
        mid = _form_values(phi, x)
        low = low_sq[j] * _form_values(gamma, x).real
        up = up_sq[j] * _form_values(w, x).real
        ref = np.maximum(1.0, np.maximum(np.abs(mid), np.abs(up)))
        imag = np.abs(mid.imag) / ref
        lv = np.maximum((low - mid.real) / ref, imag)
        uv = np.maximum((mid.real - up) / ref, imag)
        worst_lower = max(worst_lower, float(lv.max()))
        worst_upper = max(worst_upper, float(uv.max()))
        np.maximum(per_sample, np.maximum(lv, uv), out=per_sample)
    return worst_lower, worst_upper, per_sample


def certify(sys: ControlledFrameSystem, *, samples: int = 1000,
            seed: int = 0, rng=None) -> FrameCertificate:
    """Compute optimal bounds, overall status, and sampled residuals.

    Status is `frame` when both recomputed bounds are strictly nonzero
    and every fiber admits a positive lower infimum, `bessel_only` when
    only the upper side survives, `not_frame` otherwise.  Residuals are
    the worst sampled violations of the two inequalities at the
    returned bounds, floored at zero.
    """
    d = len(sys.space.dims)
    upper = optimal_upper_bound(sys)
    low = optimal_lower_bound(sys)

    skew = 0.0
    for j in range(d):
        phi = frame_form_matrix(sys, j, hermitian=False)
        scale = max(1.0, float(np.linalg.norm(phi)))
        skew = max(skew, float(np.linalg.norm(phi - phi.conj().T)) / scale)

    upper_nz = alg_is_strictly_nonzero(upper)
    lower_nz = alg_is_strictly_nonzero(low.element)
    if skew > _SKEW_RTOL:
        status = STATUS_NOT_FRAME
    elif low.ok and lower_nz and upper_nz:
        status = STATUS_FRAME
    elif upper_nz:
        status = STATUS_BESSEL
    else:
        status = STATUS_NOT_FRAME

    tight = False
    if status == STATUS_FRAME:
        scale = max(
            [1.0]
            + [float(np.linalg.norm(frame_form_matrix(sys, j, hermitian=False)))
               for j in range(d)]
        )
        worst = 0.0
        for j in range(d):
            phi = frame_form_matrix(sys, j, hermitian=False)
            gamma = comparison_form_matrix(sys, j)
            a2 = float(np.abs(low.element.values[j]) ** 2)
            worst = max(worst, float(np.linalg.norm(a2 * gamma - phi)))
        tight = worst <= _TIGHT_RTOL * scale

    lower_res = 0.0
    upper_res = 0.0
    if samples > 0:
        rng = np.random.default_rng(seed) if rng is None else rng
        batches = _sample_parts(sys.space, samples, rng)
        low_sq = np.abs(low.element.values) ** 2
        up_sq = np.abs(upper.values) ** 2
        wl, wu, _ = _violations(sys, low_sq, up_sq, batches)
        lower_res = max(wl, 0.0)
        upper_res = max(wu, 0.0)

    return FrameCertificate(
        lower=low.element,
        upper=upper,
        tight=tight,
        lower_residual=lower_res,
        upper_residual=upper_res,
        status=status,
        vacuous=low.vacuous,
    )


@dataclass(frozen=True, eq=False)
class CheckReport:
    lower_ok: bool
    upper_ok: bool
    slack_lower: AlgebraElement
    slack_upper: AlgebraElement


def check_at(sys: ControlledFrameSystem, cert: FrameCertificate,
             x: ModuleVector) -> CheckReport:
    """Evaluate the two-sided inequality at one vector.

    Builds all three algebra values of the inequality at x and tests
    positivity of both slacks under the algebra tolerance.
    """
    if x.space != sys.space:
        raise SpaceMismatch("vector is not in the system space")
    d = len(sys.space.dims)
    mid = np.zeros(d, dtype=np.complex128)
    low = np.zeros(d, dtype=np.complex128)
    up = np.zeros(d, dtype=np.complex128)
    for j in range(d):
        col = x.parts[j].reshape(-1, 1)
        mid[j] = _form_values(frame_form_matrix(sys, j, hermitian=False), col)[0]
        low[j] = (np.abs(cert.lower.values[j]) ** 2
                  * _form_values(comparison_form_matrix(sys, j), col)[0].real)
        up[j] = (np.abs(cert.upper.values[j]) ** 2
                 * _form_values(sys.space.weights[j], col)[0].real)
    alg = sys.space.algebra
    slack_lower = AlgebraElement(alg, mid - low)
    slack_upper = AlgebraElement(alg, up - mid)
    return CheckReport(
        lower_ok=alg_is_positive(slack_lower),
        upper_ok=alg_is_positive(slack_upper),
        slack_lower=slack_lower,
        slack_upper=slack_upper,
    )


@dataclass(frozen=True, eq=False)
class VerifyResult:
    verified: bool
    residual: float
    witness: ModuleVector | None


def verify_bounds(sys: ControlledFrameSystem, lower: AlgebraElement,
                  upper: AlgebraElement, *, samples: int = 1000,
                  seed: int = 0, rng=None, tol: float = 1e-9) -> VerifyResult:
    """Sampled check that given bound elements satisfy the inequality.

    The residual is the worst relative violation found; a negative-free
    batch verifies within tol.  The worst offending sample is returned
    as a witness when any violation exceeds tol.
    """
    rng = np.random.default_rng(seed) if rng is None else rng
    batches = _sample_parts(sys.space, samples, rng)
    low_sq = np.abs(lower.values) ** 2
    up_sq = np.abs(upper.values) ** 2
    wl, wu, per_sample = _violations(sys, low_sq, up_sq, batches)
    residual = max(wl, wu, 0.0)
    verified = residual <= tol
    witness = None
    if not verified and per_sample.size:
        s = int(np.argmax(per_sample))
        witness = ModuleVector(
            sys.space, tuple(b[:, s].copy() for b in batches)
        )
    return VerifyResult(verified=verified, residual=residual, witness=witness)


# -- reconstruction ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    vector: ModuleVector
    method: str
    iterations: int | None
    residual: float
    lambda_min: float
    lambda_max: float


def _operator_spectrum(sys: ControlledFrameSystem, s: ModuleOperator):
    lo, hi = np.inf, -np.inf
    for j in range(len(sys.space.dims)):
        w = sys.space.weights[j]
        ext = pencil_extremes(hermitian_part(w @ s.blocks[j]), w)
        lo = min(lo, ext.lambda_min)
        hi = max(hi, ext.lambda_max)
    return float(lo), float(hi)


def reconstruct(sys: ControlledFrameSystem, x: ModuleVector, *,
                method: str = "direct", tol: float = 1e-9,
                max_iter: int | None = None) -> ReconstructionResult:
    """Round-trip x through the frame operator and solve back.

    direct: per-fiber linear solve of S z = S x.
    richardson: z <- z + omega (y - S z) with omega = 2/(l_min + l_max),
    stopped when the relative residual drops below tol.  The iteration
    count realizes the classical (kappa-1)/(kappa+1) contraction rate.
    """
    if x.space != sys.space:
        raise SpaceMismatch("vector is not in the system space")
    s = frame_operator(sys)
    if not op_classify(s).invertible:
        raise SingularFrameOperator("frame operator is singular")
    y = s(x)
    lo, hi = _operator_spectrum(sys, s)
    if lo <= 0:
        raise SingularFrameOperator("frame operator is not positive definite")
    ynorm = max(module_norm(y), 1e-300)
    if method == "direct":
        z = ModuleVector(
            sys.space,
            tuple(np.linalg.solve(b, p) for b, p in zip(s.blocks, y.parts)),
        )
        res = module_norm(y - s(z)) / ynorm
        return ReconstructionResult(z, "direct", None, res, lo, hi)
    if method != "richardson":
        raise ValueError(f"unknown method {method!r}")
    omega = 2.0 / (lo + hi)
    rho = (hi - lo) / (hi + lo)
    if max_iter is None:
        if rho <= 0:
            max_iter = 8
        else:
            max_iter = int(np.ceil(3 * np.log(tol) / np.log(rho))) + 50
    z = sys.space.zero_vector()
    steps = 0
    res = module_norm(y - s(z)) / ynorm
    while res > tol and steps < max_iter:
        z = z + omega * (y - s(z))
        steps += 1
        res = module_norm(y - s(z)) / ynorm
    return ReconstructionResult(z, "richardson", steps, res, lo, hi)


def with_family(sys: ControlledFrameSystem, family) -> ControlledFrameSystem:
    return replace(sys, family=tuple(family))


def with_comparison(sys: ControlledFrameSystem,
                    k: ModuleOperator) -> ControlledFrameSystem:
    return replace(sys, comparison=k)


def with_controls(sys: ControlledFrameSystem, control: ModuleOperator,
                  control_prime: ModuleOperator) -> ControlledFrameSystem:
    return replace(sys, control=control, control_prime=control_prime)
