"""Closed-form on-resonance solution of the optical Bloch equations.

Convention (shared with :mod:`optbloch.numeric`)::

    dR1/dt = -Gamma2*R1 + Delta*R2 - Omega*R3
    dR2/dt = -Delta*R1 - Gamma2*R2
    dR3/dt =  Omega*R1 - Gamma1*(R3 - R3_tilde)

For ``Delta = 0`` the (R1, R3) block has Laplace roots ``s+- = -alpha +- beta``
and the solution is written as

    R_i(t) = D_i + exp(-alpha t) * [P_i * C(beta t) + M_i * t * S(beta t)]

with ``C = cosh`` and ``S = sinhc`` analytically continued to imaginary
``beta``. ``P = B + C`` and ``M = beta*(C - B)`` stay finite when the two
roots coalesce, so one code path covers the over-, under- and critically
damped cases.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BlochVector,
    DensityMatrix,
    DomainError,
    SystemParams,
    purity,
)

#: Relative tolerance on ``2*Omega`` vs ``|Gamma2 - Gamma1|`` for "critical".
REGIME_TOL = 1e-9
#: Below ``SMALL_OMEGA * max(Gamma1, Gamma2)`` the field is treated as absent.
SMALL_OMEGA = 1e-12
#: |beta t| below which C and S come from their Taylor series.
SERIES_CUTOFF = 1e-4


class OffResonanceError(DomainError):
    """Closed forms exist only for zero detuning."""


class DampingRegime(enum.Enum):
    OVERDAMPED = "overdamped"
    CRITICAL = "critical"
    UNDERDAMPED = "underdamped"


def _require_resonance(p: SystemParams) -> None:
    if p.Delta != 0.0:
        raise OffResonanceError(
            f"closed-form solution requires Delta = 0 (got {p.Delta!r}); "
            "use the numeric backend"
        )


def classify_regime(p: SystemParams, rel_tol: float = REGIME_TOL) -> DampingRegime:
    _require_resonance(p)
    split = abs(p.Gamma2 - p.Gamma1)
    drive = 2.0 * p.Omega
    if drive < split * (1.0 - rel_tol):
        return DampingRegime.OVERDAMPED
    if drive > split * (1.0 + rel_tol):
        return DampingRegime.UNDERDAMPED
    return DampingRegime.CRITICAL


@dataclass(frozen=True)
class SolutionCoefficients:
    alpha: float
    beta_sq: float
    s_plus: complex
    s_minus: complex
    D1: float
    D3: float
    P1: float
    P3: float
    M1: float
    M3: float
    Lambda: float
    regime: DampingRegime
    decoupled: bool = False

    @property
    def beta(self) -> complex:
        """Principal square root of ``beta_sq`` (imaginary when underdamped)."""
        return cmath.sqrt(self.beta_sq)

    def partial_fractions(self) -> dict[str, complex]:
        """Raw ``B_i``/``C_i`` amplitudes of ``exp(s-_t)`` and ``exp(s+_t)``.

        Undefined at critical damping, where both diverge.
        """
        b = self.beta
        if b == 0 or self.regime is DampingRegime.CRITICAL:
            raise ZeroDivisionError("B and C diverge at critical damping")
        # P = B + C, M = beta (C - B)
        return {
            "B1": 0.5 * (self.P1 - self.M1 / b),
            "C1": 0.5 * (self.P1 + self.M1 / b),
            "B3": 0.5 * (self.P3 - self.M3 / b),
            "C3": 0.5 * (self.P3 + self.M3 / b),
        }


def solve_coefficients(p: SystemParams, R0: BlochVector) -> SolutionCoefficients:
    _require_resonance(p)
    g1, g2, w, r3t = p.Gamma1, p.Gamma2, p.Omega, p.R3_tilde
    alpha = 0.5 * (g1 + g2)
    beta_sq = 0.25 * ((g2 - g1) ** 2 - 4.0 * w * w)
    beta = cmath.sqrt(beta_sq)
    denom = g1 * g2 + w * w
    D3 = g1 * g2 * r3t / denom if denom > 0 else r3t
    D1 = -g1 * w * r3t / denom if denom > 0 else 0.0
    Lam = w * R0.R1 + g2 * R0.R3 + g1 * r3t
    # value and slope at t = 0 fix the P and M amplitudes
    P3 = R0.R3 - D3
    P1 = R0.R1 - D1
    M3 = Lam - alpha * (R0.R3 + D3)
    M1 = -g2 * R0.R1 - w * R0.R3 + alpha * (R0.R1 - D1)
    return SolutionCoefficients(
        alpha=alpha,
        beta_sq=beta_sq,
        s_plus=-alpha + beta,
        s_minus=-alpha - beta,
        D1=D1,
        D3=D3,
        P1=P1,
        P3=P3,
        M1=M1,
        M3=M3,
        Lambda=Lam,
        regime=classify_regime(p),
        decoupled=w < SMALL_OMEGA * max(g1, g2),
    )


def damped_cosh_sinhc(alpha: float, beta_sq: float, t):
    """Return ``exp(-alpha t)*C(beta t)`` and ``exp(-alpha t)*t*S(beta t)``.

    ``C(x) = cosh x`` and ``S(x) = sinh(x)/x``, continued to ``cos``/``sinc``
    for ``beta_sq < 0``. Evaluated without overflow for large ``beta t`` and
    by truncated series for ``|beta t| < SERIES_CUTOFF``.
    """
    t = np.asarray(t, dtype=float)
    z = beta_sq * t * t
    small = np.abs(z) < SERIES_CUTOFF**2
    env = np.exp(-alpha * t)

    # through the x^8 term: relative error < 1e-16 for |x| < 1e-4
    c_ser = 1.0 + z * (1 / 2 + z * (1 / 24 + z * (1 / 720 + z / 40320)))
    s_ser = 1.0 + z * (1 / 6 + z * (1 / 120 + z * (1 / 5040 + z / 362880)))
    ec = env * c_ser
    es = env * t * s_ser

    if beta_sq < 0.0:
        b = math.sqrt(-beta_sq)
        ec = np.where(small, ec, env * np.cos(b * t))
        es = np.where(small, es, env * np.sin(b * t) / b)
    elif beta_sq > 0.0:
        b = math.sqrt(beta_sq)
        slow = np.exp((b - alpha) * t)
        ratio = np.exp(-2.0 * b * t)
        ec = np.where(small, ec, 0.5 * slow * (1.0 + ratio))
        es = np.where(small, es, -0.5 * slow * np.expm1(-2.0 * b * t) / b)
    return ec, es


def evaluate_array(c: SolutionCoefficients, p: SystemParams, R0: BlochVector, times):
    """States at each time in ``times``; returns an ``(n, 3)`` array."""
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if t.ndim != 1:
        raise ValueError("times must be one-dimensional")
    if np.any(t < 0.0) or np.any(np.isnan(t)):
        raise DomainError("time must be >= 0")
    out = np.empty((t.size, 3))
    out[:, 1] = R0.R2 * np.exp(-p.Gamma2 * t)
    if c.decoupled:
        out[:, 0] = R0.R1 * np.exp(-p.Gamma2 * t)
        out[:, 2] = p.R3_tilde + (R0.R3 - p.R3_tilde) * np.exp(-p.Gamma1 * t)
        return out
    ec, es = damped_cosh_sinhc(c.alpha, c.beta_sq, t)
    out[:, 0] = c.D1 + (c.P1 * ec + c.M1 * es)
    out[:, 2] = c.D3 + (c.P3 * ec + c.M3 * es)
    # D + (R0 - D) need not round back to R0
    out[t == 0.0] = (R0.R1, R0.R2, R0.R3)
    return out


def evaluate(c: SolutionCoefficients, p: SystemParams, R0: BlochVector, t: float) -> BlochVector:
    t = float(t)
    if t == 0.0:
        return R0
    return BlochVector.from_array(evaluate_array(c, p, R0, [t])[0])


def solve(p: SystemParams, R0: BlochVector, times) -> np.ndarray:
    """Shorthand for :func:`solve_coefficients` followed by :func:`evaluate_array`."""
    return evaluate_array(solve_coefficients(p, R0), p, R0, times)


def derivative_at_zero(c: SolutionCoefficients, p: SystemParams, R0: BlochVector) -> BlochVector:
    """Time derivative of the closed form at ``t = 0``.

    ``d/dt [P C + M t S] e^{-alpha t}`` at 0 equals ``M - alpha P``.
    """
    if c.decoupled:
        return BlochVector(
            -p.Gamma2 * R0.R1, -p.Gamma2 * R0.R2, -p.Gamma1 * (R0.R3 - p.R3_tilde)
        )
    return BlochVector(
        c.M1 - c.alpha * c.P1,
        -p.Gamma2 * R0.R2,
        c.M3 - c.alpha * c.P3,
    )


def equilibrium_bloch(p: SystemParams) -> BlochVector:
    _require_resonance(p)
    g1, g2, w = p.Gamma1, p.Gamma2, p.Omega
    denom = g1 * g2 + w * w
    if denom == 0.0:
        # T1 = T2 = inf and no field: nothing relaxes
        return BlochVector(0.0, 0.0, p.R3_tilde)
    return BlochVector(-g1 * w * p.R3_tilde / denom, 0.0, g1 * g2 * p.R3_tilde / denom)


def equilibrium_state(p: SystemParams) -> tuple[BlochVector, DensityMatrix]:
    """Asymptotic Bloch vector (rotating frame) and lab-phase density matrix.

    The density matrix carries the field phase: its coherence is the
    rotating-frame value times ``exp(2i*phi)``.
    """
    R = equilibrium_bloch(p)
    if math.isfinite(p.T1) and math.isfinite(p.T2):
        saturation = 1.0 + p.T1 * p.T2 * p.Omega**2
        amp = 0.5 * p.T2 * p.Omega / saturation
        pop = p.R3_tilde / saturation
    else:
        # same expressions multiplied through by Gamma1*Gamma2
        denom = p.Gamma1 * p.Gamma2 + p.Omega**2
        amp = 0.5 * p.Gamma1 * p.Omega / denom if denom else 0.0
        pop = p.Gamma1 * p.Gamma2 * p.R3_tilde / denom if denom else p.R3_tilde
    rho12 = amp * cmath.exp(1j * (2.0 * p.phi - 0.5 * math.pi)) * p.R3_tilde
    rho = DensityMatrix(0.5 * (1.0 + pop), 0.5 * (1.0 - pop), rho12)
    return R, rho


def equilibrium_relation_residual(p: SystemParams) -> float:
    """Magnitude of the violation of the coherence/population-difference relation."""
    _, rho = equilibrium_state(p)
    predicted = (
        -0.5
        * p.T2
        * p.Omega
        * cmath.exp(1j * (2.0 * p.phi + 0.5 * math.pi))
        * (rho.rho11 - rho.rho22)
    )
    return abs(rho.rho12 - predicted)


def equilibrium_coherence(T1: float, T2: float, Omega, R3_tilde: float = 1.0):
    """``|rho12_eq|`` as a function of the Rabi frequency (vectorised in Omega)."""
    Omega = np.asarray(Omega, dtype=float)
    return 0.5 * T2 * Omega * R3_tilde / (1.0 + T1 * T2 * Omega * Omega)


def optimal_rabi(T1: float, T2: float, R3_tilde: float = 1.0) -> tuple[float, float]:
    """Rabi frequency maximising the asymptotic coherence, and that maximum."""
    if not (T1 > 0 and T2 > 0):
        raise DomainError("T1 and T2 must be > 0")
    return 1.0 / math.sqrt(T1 * T2), math.sqrt(T2 / T1) * R3_tilde / 4.0


def purity_excited_initial(p: SystemParams, t):
    """Purity for the start ``R0 = (0, 0, 1)`` at infinite temperature.

    In the underdamped regime this is the trigonometric form, with
    ``k = (Gamma2 - Gamma1)/(2|beta|)``::

        chi = 1/2 + 1/2 [1 + 2 k^2 sin^2(|beta| t) + k sin(2|beta| t)] e^{-2 alpha t}

    The overdamped regime uses the continuation ``sin -> sinh`` and the
    critical case its ``beta -> 0`` limit (polynomial in t). Only valid for
    ``R3_tilde = 0``.
    """
    _require_resonance(p)
    if p.R3_tilde != 0.0:
        raise DomainError("closed-form purity from the excited start assumes R3_tilde = 0")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise DomainError("time must be >= 0")
    g1, g2, w = p.Gamma1, p.Gamma2, p.Omega
    alpha = 0.5 * (g1 + g2)
    half_split = 0.5 * (g2 - g1)
    regime = classify_regime(p)
    decay = np.exp(-2.0 * alpha * t)
    if regime is DampingRegime.UNDERDAMPED:
        b = math.sqrt(w * w - half_split**2)
        k = half_split / b
        bracket = 1.0 + 2.0 * k * k * np.sin(b * t) ** 2 + k * np.sin(2.0 * b * t)
        out = 0.5 + 0.5 * bracket * decay
    elif regime is DampingRegime.OVERDAMPED:
        b = math.sqrt(half_split**2 - w * w)
        k = half_split / b
        # sinh terms folded into the envelope so large b*t cannot overflow
        sh = 0.5 * (np.exp((b - alpha) * t) - np.exp(-(b + alpha) * t))
        sh2 = 0.5 * (np.exp(2.0 * (b - alpha) * t) - np.exp(-2.0 * (b + alpha) * t))
        out = 0.5 + 0.5 * (decay + 2.0 * k * k * sh * sh + k * sh2)
    else:
        bracket = 1.0 + 2.0 * (half_split * t) ** 2 + 2.0 * half_split * t
        out = 0.5 + 0.5 * bracket * decay
    return float(out) if out.ndim == 0 else out


def purity_strong_field(p: SystemParams, t):
    """``Omega -> inf`` limit of :func:`purity_excited_initial`."""
    alpha = 0.5 * (p.Gamma1 + p.Gamma2)
    out = 0.5 + 0.5 * np.exp(-2.0 * alpha * np.asarray(t, dtype=float))
    return float(out) if out.ndim == 0 else out


def purity_trajectory(p: SystemParams, R0: BlochVector, times) -> np.ndarray:
    return purity(solve(p, R0, times))
