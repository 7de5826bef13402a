"""Brute-force oracle: fixed-step RK4 integration and a direct steady-state solve.

Nothing here uses the closed-form solution; it only needs the right-hand
side, so it also covers nonzero detuning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BlochError, BlochVector, SystemParams


class ConvergenceError(BlochError):
    pass


class SingularSystemError(BlochError):
    pass


def _rate_arrays(params):
    """Stack per-system constants so a batch integrates in one pass."""
    if isinstance(params, SystemParams):
        params = [params]
    cols = np.array(
        [(p.Gamma1, p.Gamma2, p.Omega, p.Delta, p.R3_tilde) for p in params], dtype=float
    )
    return tuple(cols[:, i] for i in range(5))


def _rhs(y, g1, g2, w, d, r3t):
    r1, r2, r3 = y[:, 0], y[:, 1], y[:, 2]
    out = np.empty_like(y)
    out[:, 0] = -g2 * r1 + d * r2 - w * r3
    out[:, 1] = -d * r1 - g2 * r2
    out[:, 2] = w * r1 - g1 * (r3 - r3t)
    return out


def bloch_rhs(p: SystemParams, R: BlochVector) -> BlochVector:
    """Time derivative of the Bloch vector (any detuning)."""
    y = np.array([[R.R1, R.R2, R.R3]])
    return BlochVector.from_array(_rhs(y, *_rate_arrays(p))[0])


def default_dt(p: SystemParams) -> float:
    """A step resolving the fastest timescale with about 100 points."""
    fastest = 1.0 / max(p.Omega, abs(p.Delta), 1.0)
    return min(p.T1, p.T2, fastest) / 100.0


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    t_max: float
    convergence_factor: int = 2
    tolerance: float = 1e-8

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be > 0, got {self.dt!r}")
        if not (self.t_max >= 0 and math.isfinite(self.t_max)):
            raise ValueError(f"t_max must be >= 0, got {self.t_max!r}")
        if self.t_max > 0 and self.dt > self.t_max:
            raise ValueError("dt must not exceed t_max")
        if int(self.convergence_factor) != self.convergence_factor or self.convergence_factor < 2:
            raise ValueError("convergence_factor must be an integer >= 2")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")

    @property
    def n_steps(self) -> int:
        # shrink the step slightly rather than overshoot t_max
        return math.ceil(self.t_max / self.dt - 1e-9) if self.t_max > 0 else 0

    @classmethod
    def for_params(cls, p: SystemParams, t_max: float, **kw) -> IntegratorConfig:
        return cls(dt=min(default_dt(p), t_max) if t_max > 0 else default_dt(p), t_max=t_max, **kw)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n, 3)
    params: SystemParams

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> BlochVector:
        return BlochVector.from_array(self.states[i])

    @property
    def final(self) -> BlochVector:
        return self.state(-1)


def rk4_fixed(y0: np.ndarray, rates: tuple, h: float, n_steps: int, stride: int = 1) -> np.ndarray:
    """Classical RK4 on a batch of states ``y0`` of shape ``(m, 3)``.

    Returns every ``stride``-th state, shape ``(n_steps // stride + 1, m, 3)``.
    """
    if n_steps % stride:
        raise ValueError("n_steps must be a multiple of stride")
    y = np.array(y0, dtype=float)
    out = np.empty((n_steps // stride + 1,) + y.shape)
    out[0] = y
    half = 0.5 * h
    for i in range(1, n_steps + 1):
        k1 = _rhs(y, *rates)
        k2 = _rhs(y + half * k1, *rates)
        k3 = _rhs(y + half * k2, *rates)
        k4 = _rhs(y + h * k3, *rates)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if i % stride == 0:
            out[i // stride] = y
    return out


def integrate_batch(params, initials, cfg: IntegratorConfig, check: bool = True):
    """Integrate many systems on the same time grid.

    Returns ``(times, states)`` with ``states`` of shape ``(n, m, 3)``. When
    ``check`` is set, the run is repeated with the step divided by
    ``cfg.convergence_factor`` and :class:`ConvergenceError` is raised if the
    two disagree by more than ``cfg.tolerance`` at any shared sample.
    """
    rates = _rate_arrays(params)
    y0 = np.array([tuple(R) for R in initials], dtype=float)
    if y0.shape[0] != rates[0].shape[0]:
        raise ValueError("need one initial state per parameter set")
    n = cfg.n_steps
    times = np.linspace(0.0, cfg.t_max, n + 1)
    if n == 0:
        return times, y0[None]
    h = cfg.t_max / n
    states = rk4_fixed(y0, rates, h, n)
    # pin the initial condition bit-for-bit
    states[0] = y0
    if check:
        f = int(cfg.convergence_factor)
        fine = rk4_fixed(y0, rates, h / f, n * f, stride=f)
        err = float(np.max(np.abs(fine - states)))
        if not err <= cfg.tolerance:
            raise ConvergenceError(
                f"step-halving check failed: max difference {err:.3e} > "
                f"tolerance {cfg.tolerance:.3e} at dt={h:.3e}"
            )
    return times, states


def integrate(p: SystemParams, R0: BlochVector, cfg: IntegratorConfig, check: bool = True) -> Trajectory:
    times, states = integrate_batch([p], [R0], cfg, check=check)
    return Trajectory(times, states[:, 0, :], p)


def steady_state(p: SystemParams) -> BlochVector:
    """Zero of the right-hand side, from a direct 3x3 linear solve."""
    g1, g2, w, d, r3t = p.Gamma1, p.Gamma2, p.Omega, p.Delta, p.R3_tilde
    A = np.array(
        [
            [-g2, d, -w],
            [-d, -g2, 0.0],
            [w, 0.0, -g1],
        ]
    )
    b = np.array([0.0, 0.0, -g1 * r3t])
    try:
        x = np.linalg.solve(A, b)  # LU with partial pivoting
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystemError("steady-state solve produced non-finite values")
    return BlochVector.from_array(x + 0.0)  # drop signed zeros
