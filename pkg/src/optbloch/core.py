"""Domain types, Bloch-vector/density-matrix conversion and coherence measures.

All times share one arbitrary unit; rates are inverse times. Every type here
is an immutable value, so instances can be shared freely between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

#: Default slack for floating-point invariant checks.
EPS = 1e-12


class BlochError(ValueError):
    """Base class for domain errors raised by this package."""


class InvalidDensityError(BlochError):
    pass


class UnphysicalStateError(BlochError):
    pass


class DomainError(BlochError):
    pass


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class RelaxationParams:
    """Population-relaxation time ``T1`` and decoherence time ``T2``."""

    T1: float
    T2: float

    def __post_init__(self):
        for name in ("T1", "T2"):
            v = float(getattr(self, name))
            # T = inf is allowed (no relaxation channel); rate becomes 0.
            if math.isnan(v) or v <= 0.0:
                raise DomainError(f"{name} must be > 0, got {v!r}")
            object.__setattr__(self, name, v)

    @property
    def Gamma1(self) -> float:
        return 1.0 / self.T1

    @property
    def Gamma2(self) -> float:
        return 1.0 / self.T2

    @property
    def physical(self) -> bool:
        """True iff ``2*T1 >= T2`` (complete positivity of the dynamics)."""
        return 2.0 * self.T1 >= self.T2


@dataclass(frozen=True)
class DriveParams:
    """Field drive; ``phi`` is the field phase in radians."""

    Omega: float
    Delta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        omega = _finite("Omega", self.Omega)
        if omega < 0.0:
            raise DomainError(
                f"Omega must be >= 0, got {omega!r} (flip the sign of R1 instead)"
            )
        object.__setattr__(self, "Omega", omega)
        object.__setattr__(self, "Delta", _finite("Delta", self.Delta))
        object.__setattr__(self, "phi", _finite("phi", self.phi))


@dataclass(frozen=True)
class ThermalParams:
    """Field-free equilibrium population difference ``R3_tilde`` in [0, 1]."""

    R3_tilde: float

    def __post_init__(self):
        r = _finite("R3_tilde", self.R3_tilde)
        if not 0.0 <= r <= 1.0:
            raise DomainError(f"R3_tilde must lie in [0, 1], got {r!r}")
        object.__setattr__(self, "R3_tilde", r)

    @classmethod
    def from_temperature_ratio(cls, x: float) -> ThermalParams:
        """Build from ``x = hbar*omega21 / (k_B*T)``."""
        return cls(thermal_population_difference(x))


@dataclass(frozen=True)
class SystemParams:
    relaxation: RelaxationParams
    drive: DriveParams
    thermal: ThermalParams = field(default_factory=lambda: ThermalParams(0.0))

    @classmethod
    def make(
        cls,
        T1: float,
        T2: float,
        Omega: float,
        R3_tilde: float = 0.0,
        Delta: float = 0.0,
        phi: float = 0.0,
    ) -> SystemParams:
        return cls(
            RelaxationParams(T1, T2),
            DriveParams(Omega, Delta, phi),
            ThermalParams(R3_tilde),
        )

    def with_(self, **changes: float) -> SystemParams:
        """Copy with flat field overrides, e.g. ``p.with_(Omega=2.0, T2=0.1)``."""
        groups = {
            "relaxation": ("T1", "T2"),
            "drive": ("Omega", "Delta", "phi"),
            "thermal": ("R3_tilde",),
        }
        out = {}
        for group, names in groups.items():
            sub = {k: changes.pop(k) for k in names if k in changes}
            if sub:
                out[group] = replace(getattr(self, group), **sub)
        if changes:
            raise TypeError(f"unknown parameter(s): {sorted(changes)}")
        return replace(self, **out)

    def as_dict(self) -> dict[str, float]:
        return {
            "T1": self.T1,
            "T2": self.T2,
            "Omega": self.Omega,
            "Delta": self.Delta,
            "phi": self.phi,
            "R3_tilde": self.R3_tilde,
        }

    # flat accessors keep formulas readable
    T1 = property(lambda self: self.relaxation.T1)
    T2 = property(lambda self: self.relaxation.T2)
    Gamma1 = property(lambda self: self.relaxation.Gamma1)
    Gamma2 = property(lambda self: self.relaxation.Gamma2)
    Omega = property(lambda self: self.drive.Omega)
    Delta = property(lambda self: self.drive.Delta)
    phi = property(lambda self: self.drive.phi)
    R3_tilde = property(lambda self: self.thermal.R3_tilde)


@dataclass(frozen=True)
class BlochVector:
    """Rotating-frame Bloch vector ``(R1, R2, R3)``.

    Also used for time derivatives, so the unit-ball bound is not enforced on
    construction; see :meth:`is_physical`.
    """

    R1: float
    R2: float
    R3: float

    def __post_init__(self):
        for name in ("R1", "R2", "R3"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def from_array(cls, a) -> BlochVector:
        a = np.asarray(a, dtype=float)
        if a.shape != (3,):
            raise ValueError(f"expected shape (3,), got {a.shape}")
        return cls(a[0], a[1], a[2])

    def as_array(self) -> np.ndarray:
        return np.array([self.R1, self.R2, self.R3])

    def __iter__(self):
        return iter((self.R1, self.R2, self.R3))

    def norm(self) -> float:
        return math.sqrt(self.R1 * self.R1 + self.R2 * self.R2 + self.R3 * self.R3)

    def is_physical(self, eps: float = EPS) -> bool:
        return self.norm() <= 1.0 + eps


GROUND = BlochVector(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class DensityMatrix:
    """2x2 density matrix; ``rho21`` is the conjugate of ``rho12``."""

    rho11: float
    rho22: float
    rho12: complex

    def __post_init__(self):
        object.__setattr__(self, "rho11", float(self.rho11))
        object.__setattr__(self, "rho22", float(self.rho22))
        object.__setattr__(self, "rho12", complex(self.rho12))

    @property
    def rho21(self) -> complex:
        return self.rho12.conjugate()

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.rho11, self.rho12], [self.rho21, self.rho22]])

    def violations(self, eps: float = EPS) -> list[str]:
        out = []
        if abs(self.rho11 + self.rho22 - 1.0) > eps:
            out.append(f"trace {self.rho11 + self.rho22!r} != 1")
        for name in ("rho11", "rho22"):
            v = getattr(self, name)
            if v < -eps or v > 1.0 + eps:
                out.append(f"{name}={v!r} outside [0, 1]")
        if abs(self.rho12) ** 2 > self.rho11 * self.rho22 + eps:
            out.append("|rho12|^2 > rho11*rho22 (not positive semidefinite)")
        return out

    def is_valid(self, eps: float = EPS) -> bool:
        return not self.violations(eps)


def bloch_from_density(rho: DensityMatrix, eps: float = EPS) -> BlochVector:
    problems = rho.violations(eps)
    if problems:
        raise InvalidDensityError("; ".join(problems))
    return BlochVector(2.0 * rho.rho12.imag, 2.0 * rho.rho12.real, rho.rho11 - rho.rho22)


def density_from_bloch(R: BlochVector, eps: float = EPS) -> DensityMatrix:
    if not R.is_physical(eps):
        raise UnphysicalStateError(f"|R| = {R.norm()!r} exceeds 1")
    return DensityMatrix(
        0.5 * (1.0 + R.R3),
        0.5 * (1.0 - R.R3),
        complex(0.5 * R.R2, 0.5 * R.R1),
    )


def thermal_population_difference(x: float) -> float:
    """Equilibrium ``R3`` at temperature ratio ``x = hbar*omega21/(k_B*T)``.

    ``x = inf`` is zero temperature (returns 1); ``x = 0`` is infinite
    temperature (returns 0).
    """
    x = float(x)
    if math.isnan(x) or x < 0.0:
        raise DomainError(f"temperature ratio must be >= 0, got {x!r}")
    # (1 - e^-x)/(1 + e^-x) == tanh(x/2), exact at both limits
    return math.tanh(0.5 * x)


def _components(R):
    if isinstance(R, BlochVector):
        return R.R1, R.R2, R.R3
    a = np.asarray(R, dtype=float)
    return a[..., 0], a[..., 1], a[..., 2]


def purity(R):
    """``Tr[rho^2] = 1/2 + |R|^2/2``.

    Accepts a :class:`BlochVector` (returns float) or an array whose last axis
    holds ``(R1, R2, R3)`` (returns an array).
    """
    r1, r2, r3 = _components(R)
    return 0.5 + 0.5 * (r1 * r1 + r2 * r2 + r3 * r3)


def interference(R):
    """``|rho12|^2 = (R1^2 + R2^2)/4``; same input conventions as :func:`purity`."""
    r1, r2, _ = _components(R)
    return 0.25 * (r1 * r1 + r2 * r2)


def population_excited(R):
    """``rho11 = (1 + R3)/2``."""
    _, _, r3 = _components(R)
    return 0.5 * (1.0 + r3)


@dataclass(frozen=True)
class PhysicalityReport:
    T1: float
    T2: float
    R3_tilde: float
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "T1": self.T1,
            "T2": self.T2,
            "R3_tilde": self.R3_tilde,
            "physical": self.ok,
            "violations": list(self.violations),
        }


def validate_physicality(p, T2: float | None = None, R3_tilde: float | None = None):
    """Report (never raise) on the physical admissibility of a parameter set.

    Takes either a :class:`SystemParams` or raw ``(T1, T2, R3_tilde)`` values;
    the raw form exists because the typed constructors already reject
    non-positive times, which a report must still be able to describe.
    """
    if isinstance(p, SystemParams):
        T1, T2, R3_tilde = p.T1, p.T2, p.R3_tilde
    else:
        T1 = float(p)
        if T2 is None:
            raise TypeError("T2 is required with raw values")
        T2 = float(T2)
        R3_tilde = 0.0 if R3_tilde is None else float(R3_tilde)

    issues = []
    if not T1 > 0.0:
        issues.append("T1 > 0 violated")
    if not T2 > 0.0:
        issues.append("T2 > 0 violated")
    if not 2.0 * T1 >= T2:
        issues.append("2T1 >= T2 violated")
    if not 0.0 <= R3_tilde <= 1.0:
        issues.append("0 <= R3_tilde <= 1 violated")
    return PhysicalityReport(T1, T2, R3_tilde, tuple(issues))
