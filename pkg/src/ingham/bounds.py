"""Empirical frame constants from Hermitian-definite matrix pencils, and the
averaging-filter machinery for augmenting an exponent system by one frequency.

The two-sided sampled-energy inequality

    c1 Q(x) <= delta sum_{j=-J}^{J} |x(t' + j delta)|^2 <= c2 Q(x)

is made sharp per instance by solving the generalized eigenproblem
S v = lambda Q v, where S is the sampled Gram matrix of the active
exponentials and Q the block matrix of the quadratic form.  The pencil is
reduced by congruence with the Cholesky factor of Q and diagonalized with
a self-contained complex Hermitian Jacobi eigensolver (off-diagonal
Frobenius threshold 1e-13 * ||A||, dimension capped at 200).

The augmentation machinery follows the averaging filter

    y(t) = x(t) - (1/(2J')) sum_{n=-J'}^{J'-1} e^{-i omega' n delta} x(t + n delta),

which multiplies the coefficient of frequency omega by

    f(omega) = e^{-i phi/2} sin(J' phi) / (2 J' sin(phi/2)),   phi = (omega - omega') delta,

so f(omega') = 1 (the new component is annihilated exactly) and
|f(omega_k)| = eps_k, the product of the two sinc factors.  Note the
factor e^{-i phi/2}: the bare ratio sin(J' phi) / (J'(e^{i phi} - 1))
misses a unit-modulus factor i, which drops out of |f| but matters for
the coefficient-domain filter; the time-domain recomputation in the test
suite is the arbiter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import StructuralError, ValidationError
from .exponents import BandMask, ExponentSequence, GapClassification, band_mask, classify
from .quadforms import q_matrix
from .sums import AugmentedExpSum, ExpSum, SamplingGrid

# min_eig at or below this fraction of max_eig marks the pencil singular
SINGULAR_RTOL = 1e-10
# pair gaps below this make the Q matrix numerically singular
PAIR_GAP_FLOOR = 1e-12
# absolute distance to a nonzero multiple of pi that counts as resonance
RESONANCE_WINDOW = 1e-10

_JACOBI_OFF_RTOL = 1e-13
_JACOBI_MAX_DIM = 200
_RESIDUAL_RTOL = 1e-9


@dataclass(frozen=True)
class FrameBoundReport:
    """Empirical frame constants with pencil diagnostics."""

    c_lower: float
    c_upper: float
    pencil_dim: int
    min_eig: float
    max_eig: float
    singular: bool
    diagnostics: tuple[str, ...] = ()
    companions: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "c_lower": self.c_lower,
            "c_upper": self.c_upper,
            "pencil_dim": self.pencil_dim,
            "min_eig": self.min_eig,
            "max_eig": self.max_eig,
            "singular": self.singular,
            "diagnostics": list(self.diagnostics),
            "companions": dict(sorted(self.companions.items())),
        }


@dataclass(frozen=True)
class HarauxPlan:
    """Filter parameters for augmenting a system by one frequency omega'."""

    J_prime: int
    delta: float
    omega_prime: float
    eps_k: tuple[float, ...]
    eps_sup: float
    c_prime: float
    lipschitz_L: float
    gamma_prime: float
    eps_prime: float
    active: tuple[int, ...]
    # Policy flag: the proximity condition |omega_k - omega'| < 2 c'/delta
    # is enforced for every active index, not only those with x_k != 0.
    eq19_enforced_all_active: bool = True

    def to_dict(self) -> dict:
        return {
            "J_prime": self.J_prime,
            "delta": self.delta,
            "omega_prime": self.omega_prime,
            "eps_k": list(self.eps_k),
            "eps_sup": self.eps_sup,
            "c_prime": self.c_prime,
            "lipschitz_L": self.lipschitz_L,
            "gamma_prime": self.gamma_prime,
            "eps_prime": self.eps_prime,
            "active": list(self.active),
            "eq19_enforced_all_active": self.eq19_enforced_all_active,
        }


def _sinc(x: float) -> float:
    return 1.0 if x == 0.0 else math.sin(x) / x


def _dirichlet(theta: float, J: int) -> float:
    """sum_{j=-J}^{J} exp(i j theta), which is real."""
    half = 0.5 * theta
    s = math.sin(half)
    if abs(s) >= 1e-8:
        return math.sin((2 * J + 1) * half) / s
    # near-resonant direction: fall back to direct summation
    return 1.0 + 2.0 * math.fsum(np.cos(theta * np.arange(1, J + 1)))


def _gram_from_omegas(omegas: np.ndarray, grid: SamplingGrid) -> np.ndarray:
    """Sampled Gram S_{kn} = delta sum_j e^{i(w_k - w_n)(t' + j delta)}."""
    n = len(omegas)
    s = np.empty((n, n), dtype=complex)
    for k in range(n):
        s[k, k] = grid.delta * (2 * grid.J + 1)
        for m in range(k + 1, n):
            diff = omegas[k] - omegas[m]
            d = _dirichlet(diff * grid.delta, grid.J)
            val = grid.delta * complex(math.cos(diff * grid.t_shift), math.sin(diff * grid.t_shift)) * d
            s[k, m] = val
            s[m, k] = val.conjugate()
    return s


def sampled_gram(seq: ExponentSequence, grid: SamplingGrid, mask: BandMask) -> np.ndarray:
    """Gram matrix of the sampled exponentials over the active indices."""
    if len(mask.admissible) != len(seq):
        raise StructuralError("band mask length does not match sequence")
    omegas = np.array([seq.omegas[k] for k in mask.active_indices()], dtype=float)
    return _gram_from_omegas(omegas, grid)


def _jacobi_eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and vectors of a complex Hermitian matrix by cyclic Jacobi."""
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    if n > _JACOBI_MAX_DIM:
        raise StructuralError(f"pencil dimension {n} exceeds the supported cap {_JACOBI_MAX_DIM}")
    v = np.eye(n, dtype=complex)
    if n == 1:
        return a.real.reshape(1).copy(), v
    norm = math.sqrt(float(np.sum(np.abs(a) ** 2)))
    if norm == 0.0:
        return np.zeros(n), v
    for _ in range(80):
        # sum |a_pq|^2 over p != q directly: the difference of squared norms
        # cancels to zero long before the threshold is reached
        strict = a.copy()
        np.fill_diagonal(strict, 0.0)
        off = float(np.linalg.norm(strict))
        if off <= _JACOBI_OFF_RTOL * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                phase = apq / abs(apq)
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * abs(apq))
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau)) if tau != 0.0 else 1.0
                c = 1.0 / math.hypot(1.0, t)
                sr = t * c
                # unitary on the (p, q) plane: diag(1, conj(phase)) then a
                # real rotation, zeroing the (p, q) entry
                rot = np.array(
                    [[c, sr], [-sr * phase.conjugate(), c * phase.conjugate()]],
                    dtype=complex,
                )
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = rot.conj().T @ a[[p, q], :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, [p, q]] = v[:, [p, q]] @ rot
    else:
        raise StructuralError("Jacobi eigensolver did not converge")
    vals = np.diag(a).real.copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def hermitian_pencil_eig(
    s: np.ndarray, q: np.ndarray, with_vectors: bool = False
):
    """Eigenvalues of the Hermitian-definite pencil S v = lambda Q v, ascending.

    Q must be positive definite (checked via Cholesky).  Residuals
    ||S v - lambda Q v|| are verified against 1e-9 ||S||.
    """
    s = np.asarray(s, dtype=complex)
    q = np.asarray(q, dtype=complex)
    if s.shape != q.shape or s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise StructuralError("pencil matrices must be square and of equal shape")
    try:
        chol = np.linalg.cholesky(q)
    except np.linalg.LinAlgError:
        raise ValidationError("Q not positive definite") from None
    # congruence A = L^{-1} S L^{-H}
    a = np.linalg.solve(chol, s)
    a = np.linalg.solve(chol, a.conj().T).conj().T
    a = 0.5 * (a + a.conj().T)
    vals, u = _jacobi_eigh(a)
    vecs = np.linalg.solve(chol.conj().T, u)
    s_norm = math.sqrt(float(np.sum(np.abs(s) ** 2)))
    resid = s @ vecs - q @ vecs * vals[None, :]
    worst = float(np.max(np.linalg.norm(resid, axis=0) / np.linalg.norm(vecs, axis=0)))
    if worst > _RESIDUAL_RTOL * max(s_norm, 1e-300):
        raise StructuralError(
            f"pencil residual {worst:.3e} exceeds {_RESIDUAL_RTOL:.0e} * ||S||"
        )
    if with_vectors:
        return vals, vecs
    return vals


def frame_constants(
    seq: ExponentSequence, grid: SamplingGrid, cls: GapClassification | None = None
) -> FrameBoundReport:
    """Sharp empirical constants of the two-sided sampled-energy inequality.

    The band mask for grid.delta is applied before assembling the pencil.
    A rank-deficient sampled Gram (for example fewer samples than active
    exponents) is reported as singular with c_lower = 0.
    """
    if cls is None:
        cls = classify(seq)
    mask = band_mask(seq, grid.delta)
    active = mask.active_indices()
    if not active:
        raise ValidationError(
            "no band-admissible exponents for this sampling step",
            details={"delta": grid.delta, "threshold": mask.threshold},
        )
    active_set = set(active)
    for k in cls.a2_leads:
        p = cls.partners[k]
        if k in active_set and p in active_set:
            d = seq.omegas[p] - seq.omegas[k]
            if d < PAIR_GAP_FLOOR:
                raise ValidationError(
                    "QMatrix numerically singular: pair gap below 1e-12",
                    details={"lead": k, "gap": d},
                )
    qm = q_matrix(cls, seq, mask)
    s = sampled_gram(seq, grid, mask)
    vals = hermitian_pencil_eig(s, qm.matrix)
    min_eig = float(vals[0])
    max_eig = float(vals[-1])
    singular = min_eig <= SINGULAR_RTOL * max(max_eig, 0.0)
    horizon = grid.J * grid.delta
    diagnostics = (
        f"band mask: {len(active)} of {len(seq)} admissible",
        f"samples 2J+1={2 * grid.J + 1} vs active exponents={len(active)}",
        (
            f"J*delta={horizon:.6g} exceeds pi/gamma={math.pi / seq.gamma:.6g}"
            if horizon > math.pi / seq.gamma
            else f"J*delta={horizon:.6g} below pi/gamma={math.pi / seq.gamma:.6g}"
        ),
    )
    return FrameBoundReport(
        c_lower=0.0 if singular else min_eig,
        c_upper=max_eig,
        pencil_dim=len(active),
        min_eig=min_eig,
        max_eig=max_eig,
        singular=singular,
        diagnostics=diagnostics,
    )


def epsilon_k(omega_k: float, omega_prime: float, J_prime: int, delta: float) -> float:
    """Contraction factor of the averaging filter at one frequency.

    |sinc((w_k - w') J' delta)| * |((w_k - w') delta/2) / sin((w_k - w') delta/2)|.
    """
    if int(J_prime) != J_prime or J_prime < 1:
        raise StructuralError(f"J_prime must be a positive integer, got {J_prime}")
    if not (delta > 0.0 and math.isfinite(delta)):
        raise StructuralError(f"delta must be positive, got {delta}")
    u = float(omega_k) - float(omega_prime)
    if u == 0.0:
        raise ValidationError("omega_k equals omega_prime")
    half = u * delta / 2.0
    m = round(half / math.pi)
    if m != 0 and abs(half - m * math.pi) < RESONANCE_WINDOW:
        raise ValidationError(
            "sampling resonance: (omega_k - omega') delta/2 at a multiple of pi",
            details={"omega_k": omega_k, "half_angle": half},
        )
    return abs(_sinc(u * J_prime * delta)) * abs(half / math.sin(half))


def _sinc_crossing(eps_prime: float) -> float:
    """Largest c in (0, pi] with sin(x)/x > eps_prime for all 0 < x <= c.

    Bisection on the monotone branch of sinc with bracket width 1e-12;
    returns the left bracket end so the strict inequality holds at c.
    """
    if eps_prime <= 0.0:
        return math.pi
    lo, hi = 0.0, math.pi
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if _sinc(mid) > eps_prime:
            lo = mid
        else:
            hi = mid
    return lo


def plan_haraux(
    seq: ExponentSequence,
    mask: BandMask,
    omega_prime: float,
    J_prime: int,
    delta: float,
) -> HarauxPlan:
    """Plan the averaging filter for one added frequency.

    Computes eps' over the active indices, the admissible radius c' from
    the first sinc crossing, the Lipschitz companion constant of the
    filter factor, and every per-index contraction factor.  Fails when
    any active index violates the proximity condition
    |omega_k - omega'| < 2 c'/delta or when the contraction factor
    reaches 1.
    """
    if int(J_prime) != J_prime or J_prime < 1:
        raise StructuralError(f"J_prime must be a positive integer, got {J_prime}")
    if not (delta > 0.0 and math.isfinite(delta)):
        raise StructuralError(f"delta must be positive, got {delta}")
    active = mask.active_indices()
    if not active:
        raise ValidationError("no active indices under the band mask")
    omega_prime = float(omega_prime)
    omegas = [seq.omegas[k] for k in active]
    gamma_prime = min(abs(w - omega_prime) for w in omegas)
    if gamma_prime == 0.0:
        raise ValidationError(
            "omega_prime coincides with an active exponent",
            details={"omega_prime": omega_prime},
        )
    eps_prime = max(abs(_sinc((w - omega_prime) * J_prime * delta)) for w in omegas)
    c_prime = _sinc_crossing(eps_prime)
    bound = 2.0 * c_prime / delta
    violating = [k for k, w in zip(active, omegas) if not (abs(w - omega_prime) < bound)]
    if violating:
        raise ValidationError(
            "proximity condition |omega_k - omega'| < 2c'/delta violated",
            details={"indices": violating, "bound": bound},
        )
    eps = tuple(epsilon_k(w, omega_prime, J_prime, delta) for w in omegas)
    eps_sup = max(eps)
    if not eps_sup < 1.0:
        raise ValidationError(
            "Haraux contraction fails: sup eps_k >= 1",
            details={"eps_sup": eps_sup},
        )
    scale = eps_prime * gamma_prime
    if scale > 0.0:
        lipschitz = 1.0 / scale + 1.0 / (J_prime * delta * scale * scale)
    else:
        lipschitz = math.inf
    return HarauxPlan(
        J_prime=int(J_prime),
        delta=delta,
        omega_prime=omega_prime,
        eps_k=eps,
        eps_sup=eps_sup,
        c_prime=c_prime,
        lipschitz_L=lipschitz,
        gamma_prime=gamma_prime,
        eps_prime=eps_prime,
        active=active,
    )


def _filter_factor(omega: float, omega_prime: float, J_prime: int, delta: float) -> complex:
    """f(omega) = e^{-i phi/2} sin(J' phi) / (2 J' sin(phi/2)), phi = (omega - omega') delta."""
    phi = (omega - omega_prime) * delta
    half = 0.5 * phi
    if half == 0.0:
        return 1.0 + 0.0j
    m = round(half / math.pi)
    if m != 0 and abs(half - m * math.pi) < RESONANCE_WINDOW:
        raise ValidationError(
            "sampling resonance in the filter factor",
            details={"omega": omega, "half_angle": half},
        )
    return complex(math.cos(half), -math.sin(half)) * (
        math.sin(J_prime * phi) / (2.0 * J_prime * math.sin(half))
    )


def haraux_filter(aug: AugmentedExpSum, plan: HarauxPlan) -> ExpSum:
    """Apply the averaging filter in the coefficient domain.

    Returns the plain sum with y_k = (1 - f(omega_k)) x_k; the omega'
    component is annihilated exactly because f(omega') = 1.  Zero
    coefficients stay zero without evaluating the factor.
    """
    if not plan.eps_sup < 1.0:
        raise ValidationError("plan invalid: eps_sup >= 1")
    if plan.omega_prime != aug.omega_prime:
        raise ValidationError("plan was built for a different omega_prime")
    filtered = []
    for omega, x in zip(aug.base.seq.omegas, aug.base.coeffs):
        if x == 0.0:
            filtered.append(0.0j)
        else:
            factor = _filter_factor(omega, plan.omega_prime, plan.J_prime, plan.delta)
            filtered.append((1.0 - factor) * x)
    return ExpSum(aug.base.seq, tuple(filtered))


def extended_frame_constants(
    seq: ExponentSequence,
    mask: BandMask,
    omega_prime: float,
    grid: SamplingGrid,
    J_prime: int,
    cls: GapClassification | None = None,
) -> FrameBoundReport:
    """Empirical c3, c4 for the augmented system on the extended grid.

    The pencil runs over the active exponents plus omega', with the
    quadratic form Q extended by the scalar 1 for the new coefficient and
    the Gram taken over j = -(J+J') .. (J+J').  The explicit companion

        c4_formula = (1 + (2J+2J'+1)/(2J+1)) max{4 c2, 12 J delta} (1 + (J' delta)^2)

    from the covering argument is reported alongside; the empirical c4 is
    sharper by construction.
    """
    if cls is None:
        cls = classify(seq)
    base = frame_constants(seq, grid, cls)
    if base.singular:
        raise ValidationError(
            "base pencil is singular; extended constants undefined",
            details={"min_eig": base.min_eig},
        )
    plan = plan_haraux(seq, mask, omega_prime, J_prime, grid.delta)
    active = mask.active_indices()
    omegas = np.array([seq.omegas[k] for k in active] + [plan.omega_prime], dtype=float)
    qm = q_matrix(cls, seq, mask).matrix
    dim = qm.shape[0] + 1
    q_ext = np.zeros((dim, dim), dtype=float)
    q_ext[:-1, :-1] = qm
    q_ext[-1, -1] = 1.0
    grid_ext = SamplingGrid(grid.delta, grid.J + plan.J_prime, grid.t_shift)
    s_ext = _gram_from_omegas(omegas, grid_ext)
    vals = hermitian_pencil_eig(s_ext, q_ext)
    min_eig = float(vals[0])
    max_eig = float(vals[-1])
    singular = min_eig <= SINGULAR_RTOL * max(max_eig, 0.0)
    j, jp = grid.J, plan.J_prime
    c4_formula = (
        (1.0 + (2 * j + 2 * jp + 1) / (2 * j + 1))
        * max(4.0 * base.c_upper, 12.0 * j * grid.delta)
        * (1.0 + (jp * grid.delta) ** 2)
    )
    diagnostics = base.diagnostics + (
        f"extended grid half-count J+J'={grid_ext.J}",
        f"eps_sup={plan.eps_sup:.6g}",
    )
    return FrameBoundReport(
        c_lower=0.0 if singular else min_eig,
        c_upper=max_eig,
        pencil_dim=dim,
        min_eig=min_eig,
        max_eig=max_eig,
        singular=singular,
        diagnostics=diagnostics,
        companions={
            "c4_formula": c4_formula,
            "c1_base": base.c_lower,
            "c2_base": base.c_upper,
        },
    )


@dataclass(frozen=True)
class ContinuumRow:
    """One row of the discrete-to-continuous convergence table."""

    J: int
    delta: float
    active_count: int
    active_changed: bool
    c1_discrete: float
    c2_discrete: float
    c1_continuous: float
    c2_continuous: float
    rel_gap: float
    singular: bool

    def to_dict(self) -> dict:
        return {
            "J": self.J,
            "delta": self.delta,
            "active_count": self.active_count,
            "active_changed": self.active_changed,
            "c1_discrete": self.c1_discrete,
            "c2_discrete": self.c2_discrete,
            "c1_continuous": self.c1_continuous,
            "c2_continuous": self.c2_continuous,
            "rel_gap": self.rel_gap,
            "singular": self.singular,
        }


def _continuous_gram(omegas: np.ndarray, R: float) -> np.ndarray:
    diffs = omegas[:, None] - omegas[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa = 2.0 * np.sin(diffs * R) / diffs
    kappa[diffs == 0.0] = 2.0 * R
    return kappa.astype(complex)


def continuum_limit_scan(
    seq: ExponentSequence,
    cls: GapClassification,
    R: float,
    J_list,
) -> tuple[ContinuumRow, ...]:
    """Compare discrete pencil constants at delta = R/J with the continuous ones.

    The discrete grid spans [-R, R]; as J grows the sampled Gram converges
    to the continuous-energy Gram and the extreme pencil eigenvalues
    follow.  Rows flag changes of the active set (the band mask depends
    on delta).
    """
    R = float(R)
    if not R > math.pi / seq.gamma:
        raise ValidationError(
            "horizon too short: R must exceed pi/gamma",
            details={"R": R, "pi_over_gamma": math.pi / seq.gamma},
        )
    rows = []
    prev_active: tuple[int, ...] | None = None
    for J in J_list:
        J = int(J)
        delta = R / J
        grid = SamplingGrid(delta, J, 0.0)
        mask = band_mask(seq, delta)
        active = mask.active_indices()
        report = frame_constants(seq, grid, cls)
        omegas = np.array([seq.omegas[k] for k in active], dtype=float)
        qm = q_matrix(cls, seq, mask).matrix
        cvals = hermitian_pencil_eig(_continuous_gram(omegas, R), qm)
        c1c, c2c = float(cvals[0]), float(cvals[-1])
        if report.singular or c1c <= 0.0:
            rel = math.inf
        else:
            rel = max(
                abs(report.c_lower - c1c) / abs(c1c),
                abs(report.c_upper - c2c) / abs(c2c),
            )
        rows.append(
            ContinuumRow(
                J=J,
                delta=delta,
                active_count=len(active),
                active_changed=prev_active is not None and active != prev_active,
                c1_discrete=report.c_lower,
                c2_discrete=report.c_upper,
                c1_continuous=c1c,
                c2_continuous=c2c,
                rel_gap=rel,
                singular=report.singular,
            )
        )
        prev_active = active
    return tuple(rows)
