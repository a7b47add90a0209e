"""Separated bound-state wavefunctions and their quadrature normalization.

K_I and K_III states live on polar grids (dA = r dr dphi), K_II states on a
Cartesian grid. Normalization is always against the weight f(x, y).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError, GridMismatchError, WindowTooSmallError
from .models import EnergyLevel, SolverSettings, SpaceKI, SpaceKII, SpaceSpec, Window
from .quadrature import QuadratureRule, composite_gauss_legendre
from .spaces import effective_params, metric_on_cartesian, metric_on_polar
from .specfun import hermite, jacobi, laguerre, log_gamma

BOUNDARY_FRACTION = 1e-8
POLAR = "polar"
CARTESIAN = "cartesian"


@dataclass(frozen=True, eq=False)
class CoordinateGrid:
    kind: str
    axis1: QuadratureRule
    axis2: QuadratureRule

    def matches(self, other: "CoordinateGrid") -> bool:
        return (
            self.kind == other.kind
            and np.array_equal(self.axis1.nodes, other.axis1.nodes)
            and np.array_equal(self.axis2.nodes, other.axis2.nodes)
        )


@dataclass(frozen=True, eq=False)
class WavefunctionGrid:
    coordinates: CoordinateGrid
    values: NDArray[np.float64]
    f_weight: NDArray[np.float64]
    level: EnergyLevel
    norm_estimate: float
    scale: float = 1.0

    def jacobian(self) -> NDArray[np.float64]:
        if self.coordinates.kind == POLAR:
            return self.coordinates.axis1.nodes[:, None] * np.ones_like(self.coordinates.axis2.nodes)[None, :]
        return np.ones_like(self.values)


def make_grid(spec: SpaceSpec, window: Window, points1: int, points2: int) -> CoordinateGrid:
    if isinstance(spec, SpaceKII):
        x_lo = max(0.0, window.x_lo)
        if not window.x_hi > x_lo:
            raise DomainError("K_II grids need a window reaching x > 0.")
        return CoordinateGrid(
            CARTESIAN,
            composite_gauss_legendre(x_lo, window.x_hi, points1),
            composite_gauss_legendre(window.y_lo, window.y_hi, points2),
        )
    r_max = max(abs(window.x_lo), abs(window.x_hi), abs(window.y_lo), abs(window.y_hi))
    if not r_max > 0.0:
        raise DomainError("Polar grids need a window with a positive radius.")
    phi_max = 0.5 * math.pi if isinstance(spec, SpaceKI) else math.pi
    return CoordinateGrid(
        POLAR,
        composite_gauss_legendre(0.0, r_max, points1),
        composite_gauss_legendre(0.0, phi_max, points2),
    )


def angular_pt(n: int, a: float, b: float, u: ArrayLike):
    """Normalized Poschl-Teller state on (0, pi/2); a pairs with sin u, b with cos u."""
    if not (a > -0.5 and b > -0.5):
        raise DomainError(f"Poschl-Teller indices must exceed -1/2, got ({a}, {b})")
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr <= 0.0) | (u_arr >= 0.5 * math.pi)):
        raise DomainError("Poschl-Teller states are defined for u in (0, pi/2).")
    log_c2 = (
        math.log(2.0 * (2 * n + a + b + 1.0))
        + log_gamma(n + 1.0)
        + log_gamma(n + a + b + 1.0)
        - log_gamma(n + a + 1.0)
        - log_gamma(n + b + 1.0)
    )
    values = (
        math.exp(0.5 * log_c2)
        * np.sin(u_arr) ** (a + 0.5)
        * np.cos(u_arr) ** (b + 0.5)
        * jacobi(n, a, b, np.cos(2.0 * u_arr))
    )
    return float(values) if np.ndim(u) == 0 else values


def radial_basis(kind: str, n: int, params: Mapping[str, float], r_or_y: ArrayLike):
    if n < 0:
        raise DomainError("basis index must be nonnegative")
    x = np.asarray(r_or_y, dtype=float)
    if kind == "rho":
        values = _rho(n, params["lam"], params["s"], x)
    elif kind == "shifted_ho":
        values = _shifted_ho(
            n,
            params["omega_tilde"],
            params.get("centre", 0.0),
            params.get("m", 1.0),
            params.get("hbar", 1.0),
            x,
        )
    elif kind == "coulomb":
        values = _coulomb(
            n,
            params["lam"],
            params["alpha_tilde"],
            params.get("m", 1.0),
            params.get("hbar", 1.0),
            x,
        )
    else:
        raise ValueError(f"Unknown radial basis: {kind}")
    return float(values) if np.ndim(r_or_y) == 0 else values


def _rho(n: int, lam: float, s: float, r: NDArray[np.float64]) -> NDArray[np.float64]:
    if not lam > -1.0:
        raise DomainError(f"radial oscillator index must exceed -1, got {lam}")
    if not s > 0.0:
        raise DomainError(f"radial oscillator scale must be positive, got {s}")
    if np.any(r <= 0.0):
        raise DomainError("radial oscillator states need r > 0")
    log_norm = 0.5 * (math.log(2.0) + log_gamma(n + 1.0) + (lam + 1.0) * math.log(s) - log_gamma(n + lam + 1.0))
    z = s * r * r
    return np.exp(log_norm + (lam + 0.5) * np.log(r) - 0.5 * z) * laguerre(n, lam, z)


def _shifted_ho(
    n: int, omega_tilde: float, centre: float, m: float, hbar: float, y: NDArray[np.float64]
) -> NDArray[np.float64]:
    # The 4y^2 term doubles the oscillator frequency.
    frequency = 2.0 * omega_tilde
    if not frequency > 0.0:
        raise DomainError(f"shifted oscillator needs omega_tilde > 0, got {omega_tilde}")
    scale = math.sqrt(m * frequency / hbar)
    xi = scale * (y - centre)
    log_norm = 0.25 * math.log(m * frequency / (math.pi * hbar)) - 0.5 * (n * math.log(2.0) + log_gamma(n + 1.0))
    return math.exp(log_norm) * hermite(n, xi) * np.exp(-0.5 * xi * xi)


def _coulomb(
    n: int, lam: float, alpha_tilde: float, m: float, hbar: float, r: NDArray[np.float64]
) -> NDArray[np.float64]:
    if not lam > -0.5:
        raise DomainError(f"Coulomb index must exceed -1/2, got {lam}")
    if not alpha_tilde > 0.0:
        raise DomainError(f"Coulomb strength alpha~ must be positive, got {alpha_tilde}")
    if np.any(r <= 0.0):
        raise DomainError("Coulomb states need r > 0")
    a = hbar**2 / (m * alpha_tilde)
    nu = n + lam + 0.5
    rho = 2.0 * r / (a * nu)
    log_norm = 0.5 * (log_gamma(n + 1.0) - math.log(a) - log_gamma(n + 2.0 * lam + 1.0)) - math.log(nu)
    return np.exp(log_norm + lam * np.log(rho) - 0.5 * rho) * laguerre(n, 2.0 * lam, rho)


def separated_state(
    spec: SpaceSpec, level: EnergyLevel, axis1: NDArray[np.float64], axis2: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Unnormalized product state on the outer product of the two coordinate axes."""
    m, hbar = spec.constants.m, spec.constants.hbar
    params = effective_params(spec, level.E, level.qn)
    n1, n2 = level.qn.pair

    if isinstance(spec, SpaceKI):
        if not params.omega_tilde or params.lam is None:
            raise DomainError(f"Effective parameters undefined at E={level.E!r}.")
        s = m * params.omega_tilde / hbar
        radial = radial_basis("rho", n1, {"lam": params.lam, "s": s}, axis1) / np.sqrt(axis1)
        angular = angular_pt(n2, params.ky_tilde, params.kx_tilde, axis2)
        return radial[:, None] * angular[None, :]

    if isinstance(spec, SpaceKII):
        if not params.omega_tilde or params.kx_tilde is None or params.y_shift is None:
            raise DomainError(f"Effective parameters undefined at E={level.E!r}.")
        s = m * params.omega_tilde / hbar
        along_x = radial_basis("rho", n1, {"lam": params.kx_tilde, "s": s}, axis1)
        along_y = radial_basis(
            "shifted_ho",
            n2,
            {"omega_tilde": params.omega_tilde, "centre": -params.y_shift, "m": m, "hbar": hbar},
            axis2,
        )
        return along_x[:, None] * along_y[None, :]

    if params.lam is None:
        raise DomainError(f"Effective parameters undefined at E={level.E!r}.")
    alpha_tilde = spec.alpha2 - spec.alpha1 * level.E
    radial = radial_basis(
        "coulomb", n1, {"lam": params.lam, "alpha_tilde": alpha_tilde, "m": m, "hbar": hbar}, axis1
    )
    angular = angular_pt(n2, params.ky_tilde, params.kx_tilde, 0.5 * axis2)
    return radial[:, None] * angular[None, :]


def _weight(spec: SpaceSpec, grid: CoordinateGrid) -> NDArray[np.float64]:
    a, b = grid.axis1.nodes[:, None], grid.axis2.nodes[None, :]
    if grid.kind == POLAR:
        return metric_on_polar(spec, a, b)
    return metric_on_cartesian(spec, a, b)


def _integrate(grid: CoordinateGrid, density: NDArray[np.float64]) -> float:
    return float(grid.axis1.weights @ density @ grid.axis2.weights)


def assemble_and_normalize(
    spec: SpaceSpec,
    level: EnergyLevel,
    grid: CoordinateGrid | Window,
    settings: SolverSettings,
) -> WavefunctionGrid:
    if isinstance(grid, Window):
        grid = make_grid(spec, grid, settings.quad_points, settings.quad_points)
    psi = separated_state(spec, level, grid.axis1.nodes, grid.axis2.nodes)
    f_weight = _weight(spec, grid)
    jacobian = grid.axis1.nodes[:, None] if grid.kind == POLAR else 1.0
    density = psi * psi * f_weight * jacobian
    total = _integrate(grid, density)
    if not (total > 0.0 and math.isfinite(total)):
        raise DomainError(f"Weighted norm {total!r} is not positive; the metric fails positivity on the grid.")

    outer = grid.axis1.last_panel()
    edge_mass = abs(float(grid.axis1.weights[outer] @ density[outer, :] @ grid.axis2.weights))
    if grid.kind == CARTESIAN:
        first = slice(0, grid.axis2.panel_nodes)
        edge_mass += abs(float(grid.axis1.weights @ density[:, first] @ grid.axis2.weights[first]))
        last = grid.axis2.last_panel()
        edge_mass += abs(float(grid.axis1.weights @ density[:, last] @ grid.axis2.weights[last]))
    if edge_mass > BOUNDARY_FRACTION * total:
        raise WindowTooSmallError(
            f"{spec.space} level E={level.E!r}: {edge_mass / total:.3e} of the probability sits in the outer panel."
        )

    scale = 1.0 / math.sqrt(total)
    psi = psi * scale
    norm = _integrate(grid, psi * psi * f_weight * jacobian)
    return WavefunctionGrid(
        coordinates=grid, values=psi, f_weight=f_weight, level=level, norm_estimate=norm, scale=scale
    )


def overlap(g1: WavefunctionGrid, g2: WavefunctionGrid, spec: SpaceSpec) -> float:
    if not g1.coordinates.matches(g2.coordinates):
        raise GridMismatchError("Wavefunctions were sampled on different grids.")
    grid = g1.coordinates
    return _integrate(grid, g1.values * g2.values * _weight(spec, grid) * g1.jacobian())
