"""Built-in figure presets.

Axis ranges are display choices: Omega in [0, 6] and t in [0, 4] for the
Omega maps, log10 T2 from -2 up to the positivity cap log10(T1/2) for the
T2 maps, and t in [0, 10] for the time-series figures.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import GROUND, SystemParams
from .sweep import (
    DEFAULT_SCALES,
    GridAxis,
    logT2_cap,
    sweep_logT2_time,
    sweep_omega_time,
    time_series,
)


@dataclass(frozen=True)
class FigurePreset:
    name: str
    kind: str  # "omega_time" | "logT2_time" | "time_series"
    base: dict
    observable: str | None = None
    y_range: tuple[float, float] | None = None
    t_range: tuple[float, float] = (0.0, 4.0)
    curves: tuple[dict, ...] = ()
    columns: tuple[str, ...] = ()
    description: str = ""

    def params(self, **overrides) -> SystemParams:
        return SystemParams.make(**{**self.base, **overrides})

    @property
    def scale(self) -> tuple[float, float] | None:
        return DEFAULT_SCALES.get(self.observable) if self.observable else None


def _omega_map(name, r3t, observable, what):
    return FigurePreset(
        name,
        "omega_time",
        {"T1": 1.5, "T2": 0.5, "Omega": 0.0, "R3_tilde": r3t},
        observable,
        (0.0, 6.0),
        description=f"{what} vs Rabi frequency and time, T1=1.5, T2=0.5, R3~={r3t:g}",
    )


def _t2_map(name, T1, observable, what):
    return FigurePreset(
        name,
        "logT2_time",
        {"T1": T1, "T2": T1 / 2.0, "Omega": 1.0, "R3_tilde": 0.0},
        observable,
        (-2.0, logT2_cap(T1)),
        description=f"{what} vs log10 T2 and time, T1={T1:g}, Omega=1, R3~=0",
    )


def _series(name, base, curves, columns, what):
    return FigurePreset(
        name,
        "time_series",
        base,
        t_range=(0.0, 10.0),
        curves=tuple(curves),
        columns=tuple(columns),
        description=what,
    )


PRESETS: dict[str, FigurePreset] = {
    p.name: p
    for p in (
        _omega_map("fig1a", 0.0, "zeta", "zeta"),
        _omega_map("fig1b", 0.0, "chi", "chi"),
        _t2_map("fig2a", 2.5, "log10_zeta", "log10 zeta"),
        _t2_map("fig2b", 2.5, "chi", "chi"),
        _t2_map("fig3", 1e4, "log10_zeta", "log10 zeta"),
        _series(
            "fig4a",
            {"T1": 2.5, "T2": 0.5, "Omega": 1.0, "R3_tilde": 0.0},
            [{"Omega": 0.2}, {"Omega": 1.0}, {"Omega": 5.0}],
            ["rho11"],
            "rho11(t) for Omega = 0.2, 1, 5 with T1=2.5, T2=0.5",
        ),
        _series(
            "fig4b",
            {"T1": 1e4, "T2": 0.5, "Omega": 1.0, "R3_tilde": 0.0},
            [{"Omega": 0.2}, {"Omega": 1.0}, {"Omega": 5.0}],
            ["rho11"],
            "rho11(t) for Omega = 0.2, 1, 5 with T1=1e4, T2=0.5",
        ),
        _series(
            "fig4c",
            {"T1": 1e4, "T2": 0.5, "Omega": 1.0, "R3_tilde": 0.0},
            [{"T2": 0.05}, {"T2": 0.5}, {"T2": 5.0}],
            ["rho11"],
            "rho11(t) for T2 = 0.05, 0.5, 5 with T1=1e4, Omega=1",
        ),
        _omega_map("fig5a", 1.0, "zeta", "zeta"),
        _omega_map("fig5b", 1.0, "chi", "chi"),
        _series(
            "fig6",
            {"T1": 1.5, "T2": 0.5, "Omega": 1.15, "R3_tilde": 1.0},
            [{"Omega": 0.5}, {"Omega": 1.15}, {"Omega": 4.0}],
            ["chi", "zeta", "rho11"],
            "chi, zeta, rho11 for Omega = 0.5, 1.15 (~optimal), 4 with R3~=1",
        ),
    )
}


def _curve_label(overrides: dict) -> str:
    return ",".join(f"{k}={v:g}" for k, v in overrides.items())


def render(
    name: str,
    grid: int = 200,
    n_time: int = 1001,
    workers: int = 1,
    backend: str = "analytic",
    y_range: tuple[float, float] | None = None,
    t_range: tuple[float, float] | None = None,
):
    """Evaluate a preset: a FieldMap for maps, a column table for time series."""
    try:
        preset = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown figure {name!r}; choose from {sorted(PRESETS)}") from None
    t_lo, t_hi = t_range or preset.t_range
    if preset.kind == "time_series":
        axis = GridAxis.linear(t_lo, t_hi, n_time)
        table = {"t": axis.physical()}
        for overrides in preset.curves:
            tab = time_series(
                preset.params(**overrides), GROUND, axis, preset.columns, backend=backend
            )
            for col in preset.columns:
                table[f"{col}[{_curve_label(overrides)}]"] = tab[col]
        return table

    y_lo, y_hi = y_range or preset.y_range
    time_axis = GridAxis.linear(t_lo, t_hi, grid)
    base = preset.params()
    if preset.kind == "omega_time":
        return sweep_omega_time(
            base, GridAxis.linear(y_lo, y_hi, grid), time_axis, preset.observable, GROUND, workers
        )
    return sweep_logT2_time(
        base, GridAxis.log10(y_lo, y_hi, grid), time_axis, preset.observable, GROUND, workers
    )
