"""Independent ground truth: working-point solver and fixed-step moment integration.

The integrators are classical fixed-step RK4. The moment systems are linear
and autonomous, so a single RK4 step reduces to multiplication by the constant
matrix R = I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24 (plus the matching affine
term for the inhomogeneous second-moment system); the update is applied
step by step, which keeps the oracle simple, deterministic and diffable.
All integration runs in kappa-normalized time internally; times are converted
to seconds at the boundary.

For unstable regimes the integration halts with a flagged truncation once any
moment magnitude exceeds 1e12, reporting the blow-up time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import CoherentInit, DriveParams, MomentState, NumberSplit, SystemParams

OVERFLOW_GUARD = 1e12


class ConvergenceError(RuntimeError):
    """Fixed-point iteration failed to reach the requested residual."""


@dataclass(frozen=True)
class WorkingPoint:
    """Self-consistent steady amplitudes of the driven nonlinear system.

    alpha_s, beta_s : complex steady amplitudes.
    delta_eff : effective detuning Delta = Delta_c - g*(beta_s + beta_s*), rad/s.
    G_eff : effective coupling g*alpha_s, rad/s (complex).
    iterations : fixed-point iterations used.
    residual : max relative defect of the two steady-state equations.
    """

    alpha_s: complex
    beta_s: complex
    delta_eff: float
    G_eff: complex
    iterations: int
    residual: float


def solve_working_point(
    drive: DriveParams,
    kappa: float,
    gamma: float,
    max_iter: int = 200,
    tol: float = 1e-12,
) -> WorkingPoint:
    """Solve the implicit steady-state equations by damped fixed-point iteration.

    alpha = drive_amp / (i*Delta(beta) + kappa), beta = i*g*|alpha|^2/(i*omega_m - gamma)
    with Delta(beta) = Delta_c - g*(beta + beta*). Starts from the bare-detuning
    cavity amplitude; a 0.5 damping factor is applied whenever the residual
    increases. Raises :class:`ConvergenceError` after ``max_iter`` iterations,
    which signals a bistable/strong-drive point outside the linearized scope.
    """
    if kappa <= 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    denom_b = 1j * drive.omega_m - gamma
    if abs(denom_b) == 0.0:
        raise ValueError("omega_m and gamma cannot both vanish (beta denominator is zero)")

    g = drive.g_single
    dc = drive.detuning

    def step(beta: complex) -> tuple[complex, complex]:
        delta = dc - g * (2.0 * beta.real)
        alpha_next = drive.drive_amp / (1j * delta + kappa)
        beta_next = 1j * g * abs(alpha_next) ** 2 / denom_b
        return alpha_next, beta_next

    def defect(alpha: complex, beta: complex) -> float:
        delta = dc - g * (2.0 * beta.real)
        r1 = abs(alpha - drive.drive_amp / (1j * delta + kappa))
        r2 = abs(beta - 1j * g * abs(alpha) ** 2 / denom_b)
        return max(r1, r2) / max(1.0, abs(alpha), abs(beta))

    alpha = drive.drive_amp / (1j * dc + kappa)
    beta = 1j * g * abs(alpha) ** 2 / denom_b
    residual = defect(alpha, beta)
    iterations = 0
    while residual > tol and iterations < max_iter:
        cand_alpha, cand_beta = step(beta)
        cand_res = defect(cand_alpha, cand_beta)
        if cand_res > residual:
            # Damp when the plain update overshoots.
            cand_alpha = 0.5 * (cand_alpha + alpha)
            cand_beta = 0.5 * (cand_beta + beta)
            cand_res = defect(cand_alpha, cand_beta)
        alpha, beta, residual = cand_alpha, cand_beta, cand_res
        iterations += 1
    if residual > tol:
        raise ConvergenceError(
            f"working point did not converge after {max_iter} iterations "
            f"(residual {residual:.3e} > {tol:.0e}); likely bistable/strong-drive regime"
        )
    delta_eff = dc - g * (2.0 * beta.real)
    return WorkingPoint(
        alpha_s=alpha,
        beta_s=beta,
        delta_eff=delta_eff,
        G_eff=g * alpha,
        iterations=iterations,
        residual=residual,
    )


@dataclass(frozen=True)
class FirstMomentSeries:
    """Sampled trajectory of <a>, <b>; t in seconds."""

    t: np.ndarray
    a_mean: np.ndarray
    b_mean: np.ndarray
    truncated: bool = False
    blowup_time: float | None = None


@dataclass(frozen=True)
class SecondMomentSeries:
    """Sampled trajectory of <a^dag a>, <b^dag b>, <a^dag b>; t in seconds."""

    t: np.ndarray
    n_a: np.ndarray
    n_b: np.ndarray
    ab_corr: np.ndarray
    truncated: bool = False
    blowup_time: float | None = None


def default_dt(params: SystemParams) -> float:
    """Default integration step 1e-3/max(kappa, gamma, G, omega1), seconds."""
    return 1e-3 / max(params.kappa, params.gamma, params.coupling_G, params.omega1)


def _check_step(params: SystemParams, t_end: float, dt: float | None) -> float:
    if dt is None:
        dt = default_dt(params)
    if t_end <= 0 or not math.isfinite(t_end):
        raise ValueError(f"t_end must be positive and finite, got {t_end}")
    limit = 0.01 * min(1.0 / params.kappa, 1.0 / params.omega1)
    if dt <= 0 or dt > limit:
        raise ValueError(
            f"dt must satisfy 0 < dt <= 0.01*min(1/kappa, 1/omega1) = {limit:.3e} s, got {dt}"
        )
    return dt


def _plan_grid(t_end_k: float, dt_k: float, n_samples: int | None) -> tuple[int, int]:
    """Return (steps per sample, number of sample intervals) for an exact grid."""
    n_steps = max(1, math.ceil(t_end_k / dt_k))
    if n_samples is None or n_samples >= n_steps + 1:
        return 1, n_steps
    intervals = max(1, n_samples - 1)
    chunk = math.ceil(n_steps / intervals)
    return chunk, intervals


def _rk4_update(A: np.ndarray, h: float) -> np.ndarray:
    """One-step RK4 propagator I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24."""
    eye = np.eye(A.shape[0], dtype=A.dtype)
    hA = h * A
    term = eye.copy()
    R = eye.copy()
    for k in (1.0, 2.0, 3.0, 4.0):
        term = term @ hA / k
        R = R + term
    return R


def _rk4_affine(A: np.ndarray, h: float, b: np.ndarray) -> np.ndarray:
    """Affine part of one RK4 step for x' = Ax + b: (h + h^2 A/2 + h^3 A^2/6 + h^4 A^3/24) b."""
    r = h * b
    term = h * b
    hA = h * A
    for k in (2.0, 3.0, 4.0):
        term = hA @ term / k
        r = r + term
    return r


def integrate_first_moments(
    params: SystemParams,
    init: CoherentInit,
    t_end: float,
    dt: float | None = None,
    n_samples: int | None = None,
) -> FirstMomentSeries:
    """RK4 trajectory of d<a>/dt = -(i*omega1+kappa)<a> + iG<b>,
    d<b>/dt = -(i*omega1-gamma)<b> + iG<a>; t_end, dt in seconds.

    The step must resolve the fast oscillation: dt <= 0.01*min(1/kappa, 1/omega1).
    If ``n_samples`` is given, only that many evenly spaced points (including
    both endpoints) are stored; integration still proceeds at the full step.
    """
    dt = _check_step(params, t_end, dt)
    k = params.kappa
    gn = params.gamma / k
    Gn = params.coupling_G / k
    w1 = params.omega1 / k
    t_end_k = t_end * k
    dt_k = dt * k

    chunk, intervals = _plan_grid(t_end_k, dt_k, n_samples)
    h = t_end_k / (chunk * intervals)

    M = np.array(
        [[-1j * w1 - 1.0, 1j * Gn], [1j * Gn, -1j * w1 + gn]],
        dtype=complex,
    )
    R = _rk4_update(M, h)

    z = np.array([init.alpha, init.beta], dtype=complex)
    ts = [0.0]
    out = [z.copy()]
    truncated = False
    blowup_time = None
    for i in range(1, intervals + 1):
        for _ in range(chunk):
            z = R @ z
        if np.max(np.abs(z)) > OVERFLOW_GUARD:
            truncated = True
            blowup_time = i * chunk * h / k
            ts.append(i * chunk * h / k)
            out.append(z.copy())
            break
        ts.append(i * chunk * h / k)
        out.append(z.copy())
    arr = np.array(out)
    return FirstMomentSeries(
        t=np.array(ts),
        a_mean=arr[:, 0],
        b_mean=arr[:, 1],
        truncated=truncated,
        blowup_time=blowup_time,
    )


def integrate_second_moments(
    params: SystemParams,
    init: CoherentInit,
    t_end: float,
    dt: float | None = None,
    n_samples: int | None = None,
) -> SecondMomentSeries:
    """RK4 trajectory of the closed second-moment system; t_end, dt in seconds.

    State (n_a, n_b, Re<a^dag b>, Im<a^dag b>) with the equations of motion
    n_a' = -2*kappa*n_a - 2G*Im(c), n_b' = 2*gamma*n_b + 2G*Im(c) + 2*gamma,
    c' = (gamma-kappa)*c + iG*(n_a - n_b), including the inhomogeneous
    2*gamma gain term. Initial second moments are the coherent-state values
    n_a = |alpha|^2, n_b = |beta|^2, c = alpha* beta.
    """
    dt = _check_step(params, t_end, dt)
    k = params.kappa
    gn = params.gamma / k
    Gn = params.coupling_G / k
    t_end_k = t_end * k
    dt_k = dt * k

    chunk, intervals = _plan_grid(t_end_k, dt_k, n_samples)
    h = t_end_k / (chunk * intervals)

    A = np.array(
        [
            [-2.0, 0.0, 0.0, -2.0 * Gn],
            [0.0, 2.0 * gn, 0.0, 2.0 * Gn],
            [0.0, 0.0, gn - 1.0, 0.0],
            [Gn, -Gn, 0.0, gn - 1.0],
        ]
    )
    b = np.array([0.0, 2.0 * gn, 0.0, 0.0])
    R = _rk4_update(A, h)
    r = _rk4_affine(A, h, b)

    c0 = complex(init.alpha).conjugate() * complex(init.beta)
    v = np.array([abs(init.alpha) ** 2, abs(init.beta) ** 2, c0.real, c0.imag])
    ts = [0.0]
    out = [v.copy()]
    truncated = False
    blowup_time = None
    for i in range(1, intervals + 1):
        for _ in range(chunk):
            v = R @ v + r
        ts.append(i * chunk * h / k)
        out.append(v.copy())
        if np.max(np.abs(v)) > OVERFLOW_GUARD:
            truncated = True
            blowup_time = i * chunk * h / k
            break
    arr = np.array(out)
    return SecondMomentSeries(
        t=np.array(ts),
        n_a=arr[:, 0],
        n_b=arr[:, 1],
        ab_corr=arr[:, 2] + 1j * arr[:, 3],
        truncated=truncated,
        blowup_time=blowup_time,
    )


def stimulated_spontaneous_split(
    first: FirstMomentSeries, second: SecondMomentSeries
) -> NumberSplit:
    """Split totals into n_st = |first moment|^2 and n_sp = total - n_st.

    Both series must share the same time grid.
    """
    n = min(len(first.t), len(second.t))
    if len(first.t) != len(second.t) or not np.allclose(
        first.t[:n], second.t[:n], rtol=0.0, atol=1e-15 * max(1.0, float(first.t[-1]))
    ):
        raise ValueError("time grids of the first- and second-moment series do not match")
    n_a_st = np.abs(first.a_mean) ** 2
    n_b_st = np.abs(first.b_mean) ** 2
    return NumberSplit(
        t=first.t.copy(),
        n_a_st=n_a_st,
        n_b_st=n_b_st,
        n_a_sp=second.n_a - n_a_st,
        n_b_sp=second.n_b - n_b_st,
    )


def moment_state(first: FirstMomentSeries, second: SecondMomentSeries, i: int) -> MomentState:
    """Merge sample ``i`` of paired series into a single :class:`MomentState`."""
    return MomentState(
        t=float(first.t[i]),
        a_mean=complex(first.a_mean[i]),
        b_mean=complex(first.b_mean[i]),
        n_a=float(second.n_a[i]),
        n_b=float(second.n_b[i]),
        ab_corr=complex(second.ab_corr[i]),
    )
