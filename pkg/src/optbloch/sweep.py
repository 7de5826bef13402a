"""Parameter-by-time maps and time series, with grayscale binning and revival detection."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import analytic, numeric
from .core import GROUND, BlochVector, DomainError, SystemParams, interference, purity

MAP_OBSERVABLES = ("zeta", "chi", "log10_zeta", "rho11")
SERIES_COLUMNS = ("R1", "R2", "R3", "rho11", "rho22", "chi", "zeta")

#: Level of zeta regarded as "incoherent": the lightest of the 20 shades
#: on the 0..0.20 scale.
DEFAULT_REVIVAL_THRESHOLD = 0.01

#: Quantization bounds per observable, in the observable's own units.
DEFAULT_SCALES = {
    "zeta": (0.0, 0.20),
    "chi": (0.5, 1.0),
    "log10_zeta": (math.log10(0.0003), math.log10(0.30)),
    "rho11": (0.0, 1.0),
}
DEFAULT_LEVELS = 20

_RANGE_SLACK = 1e-10


@dataclass(frozen=True)
class GridAxis:
    """Evenly spaced samples in the axis's own scale.

    For ``kind="log10"`` the bounds and :meth:`coordinates` are base-10
    logarithms; :meth:`physical` returns ``10**coordinates``.
    """

    kind: str
    min: float
    max: float
    n: int

    def __post_init__(self):
        if self.kind not in ("linear", "log10"):
            raise ValueError(f"axis kind must be 'linear' or 'log10', got {self.kind!r}")
        if not (math.isfinite(self.min) and math.isfinite(self.max)) or not self.min < self.max:
            raise ValueError(f"axis needs finite min < max, got [{self.min}, {self.max}]")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"axis needs n >= 2 samples, got {self.n!r}")

    @classmethod
    def linear(cls, lo: float, hi: float, n: int) -> GridAxis:
        return cls("linear", float(lo), float(hi), int(n))

    @classmethod
    def log10(cls, lo: float, hi: float, n: int) -> GridAxis:
        return cls("log10", float(lo), float(hi), int(n))

    def coordinates(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.n)

    def physical(self) -> np.ndarray:
        c = self.coordinates()
        return 10.0**c if self.kind == "log10" else c

    def as_dict(self) -> dict:
        return {"kind": self.kind, "min": self.min, "max": self.max, "n": self.n}


@dataclass(frozen=True)
class FieldMap:
    x_axis: GridAxis
    y_axis: GridAxis
    values: np.ndarray  # (y_axis.n, x_axis.n)
    observable: str
    y_name: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.observable not in MAP_OBSERVABLES:
            raise ValueError(f"unknown observable {self.observable!r}")
        if self.values.shape != (self.y_axis.n, self.x_axis.n):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes "
                f"({self.y_axis.n}, {self.x_axis.n})"
            )
        lo, hi = {"chi": (0.5, 1.0), "zeta": (0.0, 0.25)}.get(self.observable, (None, None))
        if lo is not None:
            v = self.values
            if v.min() < lo - _RANGE_SLACK or v.max() > hi + _RANGE_SLACK:
                raise DomainError(
                    f"{self.observable} values outside [{lo}, {hi}]: "
                    f"[{v.min()!r}, {v.max()!r}] (unphysical parameters?)"
                )


def measure(states: np.ndarray, name: str) -> np.ndarray:
    """Column ``name`` computed from an ``(..., 3)`` array of Bloch vectors."""
    if name in ("R1", "R2", "R3"):
        return states[..., int(name[1]) - 1]
    if name == "chi":
        return purity(states)
    if name == "zeta":
        return interference(states)
    if name == "log10_zeta":
        with np.errstate(divide="ignore"):
            return np.log10(interference(states))
    if name == "rho11":
        return 0.5 * (1.0 + states[..., 2])
    if name == "rho22":
        return 0.5 * (1.0 - states[..., 2])
    raise ValueError(f"unknown observable {name!r}")


def _fill_rows(row_params, R0, times, observable, workers):
    out = np.empty((len(row_params), len(times)))

    def row(i):
        p = row_params[i]
        c = analytic.solve_coefficients(p, R0)
        # each worker owns one row of the buffer
        out[i] = measure(analytic.evaluate_array(c, p, R0, times), observable)

    if workers is None or workers <= 1:
        for i in range(len(row_params)):
            row(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(row, range(len(row_params))))
    return out


def sweep_omega_time(
    base: SystemParams,
    omega_axis: GridAxis,
    time_axis: GridAxis,
    observable: str = "zeta",
    R0: BlochVector = GROUND,
    workers: int = 1,
) -> FieldMap:
    """Observable over a (Rabi frequency x time) grid, one row per Omega."""
    if observable not in MAP_OBSERVABLES:
        raise ValueError(f"unknown observable {observable!r}")
    omegas = omega_axis.physical()
    rows = [base.with_(Omega=float(w)) for w in omegas]
    values = _fill_rows(rows, R0, time_axis.physical(), observable, workers)
    fixed = {k: v for k, v in base.as_dict().items() if k != "Omega"}
    fixed["R0"] = list(R0)
    return FieldMap(time_axis, omega_axis, values, observable, "Omega", fixed)


def logT2_cap(T1: float) -> float:
    """Largest admissible ``log10 T2`` for a given ``T1`` (``T2 = T1/2``)."""
    return math.log10(T1 / 2.0)


def sweep_logT2_time(
    base: SystemParams,
    logT2_axis: GridAxis,
    time_axis: GridAxis,
    observable: str = "zeta",
    R0: BlochVector = GROUND,
    workers: int = 1,
) -> FieldMap:
    """Observable over a (log10 T2 x time) grid, one row per T2."""
    if observable not in MAP_OBSERVABLES:
        raise ValueError(f"unknown observable {observable!r}")
    if logT2_axis.kind != "log10":
        raise ValueError("the T2 axis must be a log10 axis")
    cap = logT2_cap(base.T1)
    if logT2_axis.max > cap + 1e-12:
        raise DomainError(
            f"log10 T2 axis exceeds the positivity bound 2*T1 >= T2 "
            f"({logT2_axis.max!r} > {cap!r})"
        )
    rows = [base.with_(T2=float(t2)) for t2 in logT2_axis.physical()]
    values = _fill_rows(rows, R0, time_axis.physical(), observable, workers)
    fixed = {k: v for k, v in base.as_dict().items() if k != "T2"}
    fixed["R0"] = list(R0)
    return FieldMap(time_axis, logT2_axis, values, observable, "log10_T2", fixed)


def critical_log10_T2(T1: float, Omega: float) -> float:
    """``log10 T2`` on the critical-damping line ``Gamma2 = Gamma1 + 2*Omega``."""
    return -math.log10(1.0 / T1 + 2.0 * Omega)


def _uniform_times(times: np.ndarray) -> float:
    if times[0] != 0.0:
        raise ValueError("numeric time series must start at t = 0")
    steps = np.diff(times)
    h = (times[-1] - times[0]) / (len(times) - 1)
    if np.max(np.abs(steps - h)) > 1e-9 * max(h, 1.0):
        raise ValueError("numeric time series needs evenly spaced times")
    return h


def time_series(
    p: SystemParams,
    R0: BlochVector = GROUND,
    times=None,
    observables=SERIES_COLUMNS,
    backend: str = "analytic",
    tolerance: float = 1e-8,
) -> dict[str, np.ndarray]:
    """Table with a ``t`` column followed by one column per observable.

    The numeric backend accepts any detuning; it integrates on a grid that
    refines the sample spacing to at most :func:`numeric.default_dt`.
    """
    if times is None:
        times = GridAxis.linear(0.0, 10.0, 1001)
    t = times.physical() if isinstance(times, GridAxis) else np.asarray(times, dtype=float)
    for name in observables:
        if name not in SERIES_COLUMNS + ("log10_zeta",):
            raise ValueError(f"unknown column {name!r}")
    if backend == "analytic":
        states = analytic.solve(p, R0, t)
    elif backend == "numeric":
        if len(t) == 1:
            states = np.array([tuple(R0)])
        else:
            h = _uniform_times(t)
            k = max(1, math.ceil(h / numeric.default_dt(p) - 1e-9))
            cfg = numeric.IntegratorConfig(dt=h / k, t_max=float(t[-1]), tolerance=tolerance)
            traj = numeric.integrate(p, R0, cfg)
            states = traj.states[::k]
    else:
        raise ValueError(f"unknown backend {backend!r}")
    table = {"t": t}
    for name in observables:
        table[name] = measure(states, name)
    return table


@dataclass(frozen=True)
class RevivalReport:
    """Intervals in which an observable re-exceeds ``threshold`` after a drop.

    An interval whose end equals ``horizon`` had not finished when sampling
    stopped.
    """

    intervals: tuple[tuple[float, float], ...]
    threshold: float
    observable: str = "zeta"
    horizon: float = math.inf

    @property
    def persistent(self) -> bool:
        return bool(self.intervals) and self.intervals[-1][1] >= self.horizon

    @property
    def transient(self) -> tuple[tuple[float, float], ...]:
        return tuple(iv for iv in self.intervals if iv[1] < self.horizon)

    def as_dict(self) -> dict:
        return {
            "observable": self.observable,
            "threshold": self.threshold,
            "horizon": self.horizon,
            "intervals": [list(iv) for iv in self.intervals],
            "persistent": self.persistent,
        }


def _crossing(t0, t1, v0, v1, threshold, refine):
    if refine is not None:
        return brentq(lambda s: refine(s) - threshold, t0, t1, xtol=1e-14, rtol=1e-14)
    # linear interpolation between the bracketing samples
    return t0 + (threshold - v0) * (t1 - t0) / (v1 - v0)


def detect_revivals(
    times,
    values,
    threshold: float = DEFAULT_REVIVAL_THRESHOLD,
    refine=None,
    observable: str = "zeta",
) -> RevivalReport:
    """Find maximal intervals above ``threshold`` after its first downward crossing.

    ``refine``, if given, is a callable ``t -> value`` used to bisect each
    bracketed crossing; otherwise crossings are linearly interpolated.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.size == 0:
        raise ValueError("empty series")
    if t.shape != v.shape:
        raise ValueError("times and values must have the same shape")
    above = v >= threshold
    drops = np.flatnonzero(above[:-1] & ~above[1:])
    intervals = []
    if drops.size:
        i = int(drops[0]) + 1
        rises = np.flatnonzero(~above[i:-1] & above[i + 1 :]) + i + 1
        for s in rises:
            start = _crossing(t[s - 1], t[s], v[s - 1], v[s], threshold, refine)
            falls = np.flatnonzero(~above[s:])
            if falls.size:
                e = int(falls[0]) + s
                end = _crossing(t[e - 1], t[e], v[e - 1], v[e], threshold, refine)
            else:
                end = float(t[-1])
            intervals.append((float(start), float(end)))
    return RevivalReport(tuple(intervals), float(threshold), observable, float(t[-1]))


def find_revivals(
    p: SystemParams,
    R0: BlochVector = GROUND,
    t_max: float = 20.0,
    threshold: float = DEFAULT_REVIVAL_THRESHOLD,
    n: int = 20001,
    observable: str = "zeta",
) -> RevivalReport:
    """Revivals of a closed-form trajectory, crossings refined by bisection."""
    c = analytic.solve_coefficients(p, R0)
    t = np.linspace(0.0, t_max, n)
    values = measure(analytic.evaluate_array(c, p, R0, t), observable)

    def f(s):
        return float(measure(analytic.evaluate_array(c, p, R0, [s]), observable)[0])

    return detect_revivals(t, values, threshold, refine=f, observable=observable)


def quantize_grayscale(
    data,
    levels: int = DEFAULT_LEVELS,
    v_min: float | None = None,
    v_max: float | None = None,
) -> np.ndarray:
    """Bin values into shades ``0..levels``; 0 is darkest.

    Shade 0 is reached only at ``v >= v_max``; ``v <= v_min`` (and NaN, and
    ``-inf`` from a vanishing ``log10_zeta``) gives ``levels``, the lightest.
    Bin edges sit at ``v_min + k*(v_max - v_min)/levels``. Bounds default to
    the figure scale of a :class:`FieldMap`'s observable.
    """
    if isinstance(data, FieldMap):
        d_lo, d_hi = DEFAULT_SCALES[data.observable]
        values = data.values
        v_min = d_lo if v_min is None else v_min
        v_max = d_hi if v_max is None else v_max
    else:
        values = np.asarray(data, dtype=float)
    if v_min is None or v_max is None:
        raise ValueError("v_min and v_max are required for raw arrays")
    if int(levels) != levels or levels < 2:
        raise ValueError(f"levels must be an integer >= 2, got {levels!r}")
    if not v_min < v_max:
        raise ValueError(f"need v_min < v_max, got {v_min!r}, {v_max!r}")
    values = np.where(np.isnan(values), -np.inf, values)
    scaled = (values - v_min) / (v_max - v_min) * levels
    idx = np.clip(np.floor(scaled), 0, levels).astype(np.int64)
    return levels - idx


def gray_values(shades: np.ndarray, levels: int = DEFAULT_LEVELS) -> np.ndarray:
    """8-bit gray for each shade: ``round(255*k/levels)``, black is darkest."""
    return np.rint(255.0 * np.asarray(shades) / levels).astype(np.uint8)
