from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from numpy.typing import NDArray

PANEL_NODES = 16


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule; nodes are grouped panel by panel, left to right."""

    nodes: NDArray[np.float64]
    weights: NDArray[np.float64]
    panel_nodes: int

    @property
    def panels(self) -> int:
        return len(self.nodes) // self.panel_nodes

    def integrate(self, values: NDArray[np.float64]) -> float:
        return float(np.dot(self.weights, values))

    def last_panel(self) -> slice:
        return slice(len(self.nodes) - self.panel_nodes, len(self.nodes))


def composite_gauss_legendre(lo: float, hi: float, points: int, panel_nodes: int = PANEL_NODES) -> QuadratureRule:
    if not hi > lo:
        raise ValueError(f"Quadrature interval is empty: [{lo}, {hi}]")
    panels = max(1, points // panel_nodes)
    x, w = leggauss(panel_nodes)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return QuadratureRule(nodes=nodes, weights=weights, panel_nodes=panel_nodes)
