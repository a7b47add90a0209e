from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import ClassVar, Optional, Union


@dataclass(frozen=True)
class Constants:
    m: float = 1.0
    hbar: float = 1.0

    @staticmethod
    def from_dict(data: dict) -> "Constants":
        return Constants(m=float(data.get("m", 1.0)), hbar=float(data.get("hbar", 1.0)))

    def to_dict(self) -> dict[str, float]:
        return {"m": self.m, "hbar": self.hbar}


@dataclass(frozen=True)
class SpaceKI:
    """Isotropic singular oscillator divided by f_I = a(x^2+y^2) + b/x^2 + c/y^2 + d."""

    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 1.0
    omega: float = 1.0
    kx: float = 0.5
    ky: float = 0.5
    constants: Constants = field(default_factory=Constants)

    space: ClassVar[str] = "K_I"

    @staticmethod
    def from_dict(metric: dict, potential: dict, constants: Constants) -> "SpaceKI":
        return SpaceKI(
            alpha=float(metric.get("alpha", 0.0)),
            beta=float(metric.get("beta", 0.0)),
            gamma=float(metric.get("gamma", 0.0)),
            delta=float(metric["delta"]),
            omega=float(potential.get("omega", 0.0)),
            kx=float(potential.get("kx", 0.0)),
            ky=float(potential.get("ky", 0.0)),
            constants=constants,
        )

    def metric_dict(self) -> dict[str, float]:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma, "delta": self.delta}

    def potential_dict(self) -> dict[str, float]:
        return {"omega": self.omega, "kx": self.kx, "ky": self.ky}


@dataclass(frozen=True)
class SpaceKII:
    """Holt potential divided by f_II = a(x^2+4y^2) + b/x^2 + c*y + d."""

    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 1.0
    omega: float = 1.0
    kx: float = 0.5
    ky_lin: float = 0.0
    constants: Constants = field(default_factory=Constants)

    space: ClassVar[str] = "K_II"

    @staticmethod
    def from_dict(metric: dict, potential: dict, constants: Constants) -> "SpaceKII":
        return SpaceKII(
            alpha=float(metric.get("alpha", 0.0)),
            beta=float(metric.get("beta", 0.0)),
            gamma=float(metric.get("gamma", 0.0)),
            delta=float(metric["delta"]),
            omega=float(potential.get("omega", 0.0)),
            kx=float(potential.get("kx", 0.0)),
            ky_lin=float(potential.get("ky_lin", 0.0)),
            constants=constants,
        )

    def metric_dict(self) -> dict[str, float]:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma, "delta": self.delta}

    def potential_dict(self) -> dict[str, float]:
        return {"omega": self.omega, "kx": self.kx, "ky_lin": self.ky_lin}


@dataclass(frozen=True)
class SpaceKIII:
    """2D Coulomb problem divided by f_III = -a1/r + (b/cos^2(phi/2) + c/sin^2(phi/2))/(4r^2) + d."""

    alpha1: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 1.0
    alpha2: float = 1.0
    k1: float = 0.5
    k2: float = 0.5
    constants: Constants = field(default_factory=Constants)

    space: ClassVar[str] = "K_III"

    @staticmethod
    def from_dict(metric: dict, potential: dict, constants: Constants) -> "SpaceKIII":
        return SpaceKIII(
            alpha1=float(metric.get("alpha1", 0.0)),
            beta=float(metric.get("beta", 0.0)),
            gamma=float(metric.get("gamma", 0.0)),
            delta=float(metric["delta"]),
            alpha2=float(potential.get("alpha2", 0.0)),
            k1=float(potential.get("k1", 0.0)),
            k2=float(potential.get("k2", 0.0)),
            constants=constants,
        )

    def metric_dict(self) -> dict[str, float]:
        return {"alpha1": self.alpha1, "beta": self.beta, "gamma": self.gamma, "delta": self.delta}

    def potential_dict(self) -> dict[str, float]:
        return {"alpha2": self.alpha2, "k1": self.k1, "k2": self.k2}


SpaceSpec = Union[SpaceKI, SpaceKII, SpaceKIII]

SPACE_TYPES: dict[str, type] = {"K_I": SpaceKI, "K_II": SpaceKII, "K_III": SpaceKIII}


def space_from_dict(data: dict) -> SpaceSpec:
    space_type = SPACE_TYPES[data["space"]]
    constants = Constants.from_dict(data.get("constants", {}))
    return space_type.from_dict(data.get("metric", {}), data.get("potential", {}), constants)


def space_to_dict(spec: SpaceSpec) -> dict:
    return {
        "space": spec.space,
        "constants": spec.constants.to_dict(),
        "metric": spec.metric_dict(),
        "potential": spec.potential_dict(),
    }


@dataclass(frozen=True)
class QuantumNumbersKI:
    n_r: int
    n_phi: int

    space: ClassVar[str] = "K_I"

    @property
    def N(self) -> int:
        return self.n_r + self.n_phi + 1

    @property
    def pair(self) -> tuple[int, int]:
        return (self.n_r, self.n_phi)


@dataclass(frozen=True)
class QuantumNumbersKII:
    n_x: int
    n_y: int

    space: ClassVar[str] = "K_II"

    @property
    def N(self) -> float:
        return self.n_x + 2 * self.n_y + 1.5

    @property
    def pair(self) -> tuple[int, int]:
        return (self.n_x, self.n_y)


@dataclass(frozen=True)
class QuantumNumbersKIII:
    n_r: int
    n_phi: int

    space: ClassVar[str] = "K_III"

    @property
    def N(self) -> int:
        return 1 + self.n_phi + self.n_r

    @property
    def pair(self) -> tuple[int, int]:
        return (self.n_r, self.n_phi)


QuantumNumbers = Union[QuantumNumbersKI, QuantumNumbersKII, QuantumNumbersKIII]

_QN_TYPES: dict[str, type] = {
    "K_I": QuantumNumbersKI,
    "K_II": QuantumNumbersKII,
    "K_III": QuantumNumbersKIII,
}


def make_quantum_numbers(space: str, n1: int, n2: int) -> QuantumNumbers:
    if n1 < 0 or n2 < 0:
        raise ValueError("Quantum numbers must be nonnegative.")
    return _QN_TYPES[space](int(n1), int(n2))


@dataclass(frozen=True)
class EffectiveParams:
    E: float
    omega_tilde_sq: Optional[float] = None
    omega_tilde: Optional[float] = None
    kx_tilde_sq: Optional[float] = None
    kx_tilde: Optional[float] = None
    ky_tilde_sq: Optional[float] = None
    ky_tilde: Optional[float] = None
    lam: Optional[float] = None
    kappa: Optional[float] = None
    y_shift: Optional[float] = None


@dataclass(frozen=True)
class SolverSettings:
    scan_points: int = 2000
    tol_abs: float = 1e-12
    tol_rel: float = 1e-12
    max_iter: int = 200
    quad_points: int = 256
    series_terms_max: int = 500

    @staticmethod
    def from_dict(data: dict) -> "SolverSettings":
        defaults = SolverSettings()
        return SolverSettings(
            scan_points=int(data.get("scan_points", defaults.scan_points)),
            tol_abs=float(data.get("tol_abs", defaults.tol_abs)),
            tol_rel=float(data.get("tol_rel", defaults.tol_rel)),
            max_iter=int(data.get("max_iter", defaults.max_iter)),
            quad_points=int(data.get("quad_points", defaults.quad_points)),
            series_terms_max=int(data.get("series_terms_max", defaults.series_terms_max)),
        )

    def to_dict(self) -> dict:
        return {
            "scan_points": self.scan_points,
            "tol_abs": self.tol_abs,
            "tol_rel": self.tol_rel,
            "max_iter": self.max_iter,
            "quad_points": self.quad_points,
            "series_terms_max": self.series_terms_max,
        }


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def contains(self, E: float) -> bool:
        above = E >= self.lo if self.lo_closed else E > self.lo
        below = E <= self.hi if self.hi_closed else E < self.hi
        return above and below

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)


@dataclass(frozen=True)
class Window:
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    @staticmethod
    def from_dict(data: dict) -> "Window":
        x_lo, x_hi = (float(v) for v in data["x"])
        y_lo, y_hi = (float(v) for v in data["y"])
        return Window(x_lo, x_hi, y_lo, y_hi)

    def to_dict(self) -> dict:
        return {"x": [self.x_lo, self.x_hi], "y": [self.y_lo, self.y_hi]}


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    violations: tuple[str, ...] = ()


@dataclass(frozen=True)
class EnergyLevel:
    E: float
    qn: QuantumNumbers
    residual: float
    bracket: tuple[float, float]
    method: str

    def sort_key(self) -> tuple:
        return (self.E, self.qn.space, self.qn.pair)


@dataclass(frozen=True)
class Spectrum:
    levels: tuple[EnergyLevel, ...]
    spec: SpaceSpec
    settings: SolverSettings
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class PolynomialForm:
    coefficients: tuple[float, ...]
    declared_degree: int
    max_imag_residue: float
    sample_nodes: tuple[float, ...]


@dataclass(frozen=True)
class PolynomialRoot:
    value: float
    multiplicity: int = 1
