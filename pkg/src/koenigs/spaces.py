from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, SingularCoordinateError
from .models import (
    EffectiveParams,
    Interval,
    QuantumNumbers,
    SpaceKI,
    SpaceKII,
    SpaceKIII,
    SpaceSpec,
)

_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class Radicand:
    """Linear radicand a + b*E; strict radicands must stay positive."""

    name: str
    a: float
    b: float
    strict: bool = False

    def value(self, E: float) -> float:
        return self.a + self.b * E


def linear_radicands(spec: SpaceSpec) -> list[Radicand]:
    m, hbar = spec.constants.m, spec.constants.hbar
    if isinstance(spec, SpaceKI):
        return [
            Radicand("omega_tilde_sq", spec.omega**2, -2.0 * spec.alpha / m),
            Radicand("kx_tilde_sq", spec.kx**2, -2.0 * m * spec.beta / hbar**2),
            Radicand("ky_tilde_sq", spec.ky**2, -2.0 * m * spec.gamma / hbar**2),
        ]
    if isinstance(spec, SpaceKII):
        return [
            Radicand("omega_tilde_sq", spec.omega**2, -2.0 * spec.alpha / m, strict=True),
            Radicand("kx_tilde_sq", spec.kx**2, -2.0 * m * spec.beta / hbar**2),
        ]
    return [
        Radicand("kx_tilde_sq", spec.k1**2, -2.0 * m * spec.beta / hbar**2),
        Radicand("ky_tilde_sq", spec.k2**2, -2.0 * m * spec.gamma / hbar**2),
        Radicand("minus_delta_E", 0.0, -spec.delta, strict=True),
    ]


def clamp_radicand(radicand: Radicand, E: float) -> float:
    # Endpoint energies are computed as -a/b, so rounding can leave a hair below zero.
    value = radicand.value(E)
    if value < 0.0 and value >= -64.0 * _EPS * (abs(radicand.a) + abs(radicand.b * E)):
        return 0.0
    return value


def metric_value(spec: SpaceSpec, x: float, y: float) -> float:
    if isinstance(spec, SpaceKI):
        value = spec.alpha * (x * x + y * y) + spec.delta
        value += _inverse_square_term(spec.beta, x, "x")
        value += _inverse_square_term(spec.gamma, y, "y")
        return value
    if isinstance(spec, SpaceKII):
        value = spec.alpha * (x * x + 4.0 * y * y) + spec.gamma * y + spec.delta
        value += _inverse_square_term(spec.beta, x, "x")
        return value
    return _metric_kiii(spec, x, y)


def _inverse_square_term(coefficient: float, coordinate: float, name: str) -> float:
    if coefficient == 0.0:
        return 0.0
    if coordinate == 0.0:
        raise SingularCoordinateError(f"Metric is singular at {name}=0.")
    return coefficient / (coordinate * coordinate)


def _metric_kiii(spec: SpaceKIII, x: float, y: float) -> float:
    r = math.hypot(x, y)
    if r == 0.0:
        raise SingularCoordinateError("Metric is singular at r=0.")
    # r + x = 2r cos^2(phi/2) and r - x = 2r sin^2(phi/2), written without cancellation.
    if x >= 0.0:
        r_plus = r + x
        r_minus = y * y / r_plus
    else:
        r_minus = r - x
        r_plus = y * y / r_minus
    value = -spec.alpha1 / r + spec.delta
    if spec.beta != 0.0:
        if r_plus == 0.0:
            raise SingularCoordinateError("Metric is singular at cos(phi/2)=0.")
        value += spec.beta / (2.0 * r * r_plus)
    if spec.gamma != 0.0:
        if r_minus == 0.0:
            raise SingularCoordinateError("Metric is singular at sin(phi/2)=0.")
        value += spec.gamma / (2.0 * r * r_minus)
    return value


def metric_on_polar(spec: SpaceSpec, r: NDArray[np.float64], phi: NDArray[np.float64]) -> NDArray[np.float64]:
    """f on a polar grid, r and phi broadcast against each other."""
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if isinstance(spec, SpaceKIII):
        half = 0.5 * phi
        value = -spec.alpha1 / r + spec.delta
        if spec.beta != 0.0:
            value = value + spec.beta / (4.0 * r * r * np.cos(half) ** 2)
        if spec.gamma != 0.0:
            value = value + spec.gamma / (4.0 * r * r * np.sin(half) ** 2)
        return value
    return metric_on_cartesian(spec, r * np.cos(phi), r * np.sin(phi))


def metric_on_cartesian(spec: SpaceSpec, x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.float64]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if isinstance(spec, SpaceKI):
        value = spec.alpha * (x * x + y * y) + spec.delta
        if spec.beta != 0.0:
            value = value + spec.beta / (x * x)
        if spec.gamma != 0.0:
            value = value + spec.gamma / (y * y)
        return value
    if isinstance(spec, SpaceKII):
        value = spec.alpha * (x * x + 4.0 * y * y) + spec.gamma * y + spec.delta
        if spec.beta != 0.0:
            value = value + spec.beta / (x * x)
        return value
    r = np.hypot(x, y)
    return metric_on_polar(spec, r, np.arctan2(y, x))


def effective_params(spec: SpaceSpec, E: float, qn: Optional[QuantumNumbers] = None) -> EffectiveParams:
    m, hbar = spec.constants.m, spec.constants.hbar
    values = {r.name: clamp_radicand(r, E) for r in linear_radicands(spec)}

    if isinstance(spec, SpaceKI):
        omega_sq = values["omega_tilde_sq"]
        kx_sq = values["kx_tilde_sq"]
        ky_sq = values["ky_tilde_sq"]
        kx_t, ky_t = _root(kx_sq), _root(ky_sq)
        lam = None
        if qn is not None and kx_t is not None and ky_t is not None:
            lam = 2.0 * qn.n_phi + kx_t + ky_t + 1.0
        return EffectiveParams(
            E=E,
            omega_tilde_sq=omega_sq,
            omega_tilde=_root(omega_sq),
            kx_tilde_sq=kx_sq,
            kx_tilde=kx_t,
            ky_tilde_sq=ky_sq,
            ky_tilde=ky_t,
            lam=lam,
        )

    if isinstance(spec, SpaceKII):
        omega_sq = values["omega_tilde_sq"]
        kx_sq = values["kx_tilde_sq"]
        y_shift = None
        if omega_sq > 0.0:
            y_shift = (spec.ky_lin - spec.gamma * E) / (4.0 * m * omega_sq)
        return EffectiveParams(
            E=E,
            omega_tilde_sq=omega_sq,
            omega_tilde=_root(omega_sq),
            kx_tilde_sq=kx_sq,
            kx_tilde=_root(kx_sq),
            y_shift=y_shift,
        )

    k1_sq = values["kx_tilde_sq"]
    k2_sq = values["ky_tilde_sq"]
    k1_t, k2_t = _root(k1_sq), _root(k2_sq)
    kappa = None
    if spec.delta * E < 0.0:
        kappa = (spec.alpha2 - spec.alpha1 * E) / hbar * math.sqrt(-m / (2.0 * spec.delta * E))
    lam = None
    if qn is not None and k1_t is not None and k2_t is not None:
        lam = qn.n_phi + 0.5 * k1_t + 0.5 * k2_t + 0.5
    return EffectiveParams(
        E=E,
        kx_tilde_sq=k1_sq,
        kx_tilde=k1_t,
        ky_tilde_sq=k2_sq,
        ky_tilde=k2_t,
        lam=lam,
        kappa=kappa,
    )


def _root(value: float) -> Optional[float]:
    if value < 0.0:
        return None
    return math.sqrt(value)


def physical_energy_domain(spec: SpaceSpec) -> list[Interval]:
    if spec.delta == 0.0:
        raise DomainError("delta must be nonzero")
    lo, hi = -math.inf, math.inf
    lo_closed, hi_closed = False, False
    for radicand in linear_radicands(spec):
        if radicand.b == 0.0:
            if radicand.a < 0.0 or (radicand.strict and radicand.a == 0.0):
                return []
            continue
        bound = -radicand.a / radicand.b
        closed = not radicand.strict
        if radicand.b > 0.0:
            if bound > lo or (bound == lo and not closed):
                lo, lo_closed = bound, closed
        else:
            if bound < hi or (bound == hi and not closed):
                hi, hi_closed = bound, closed
    if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
        return []
    return [Interval(lo, hi, lo_closed and math.isfinite(lo), hi_closed and math.isfinite(hi))]


def in_physical_domain(spec: SpaceSpec, E: float) -> bool:
    return any(interval.contains(E) for interval in physical_energy_domain(spec))


def darboux_classify(spec: SpaceSpec) -> str:
    if isinstance(spec, SpaceKII) and spec.alpha == 0.0 and spec.beta == 0.0 and spec.delta == 0.0:
        if spec.gamma != 0.0:
            return "D_I"
    if isinstance(spec, (SpaceKI, SpaceKII)):
        if spec.beta != 0.0 and spec.alpha == 0.0 and spec.gamma == 0.0 and spec.delta == 0.0:
            return "D_II"
        if spec.alpha == 0.0 and spec.beta == 0.0 and spec.gamma == 0.0 and spec.delta != 0.0:
            return "flat"
        return "generic"
    if spec.alpha1 == 0.0 and spec.beta == 0.0 and spec.gamma == 0.0 and spec.delta != 0.0:
        return "flat"
    return "generic"
