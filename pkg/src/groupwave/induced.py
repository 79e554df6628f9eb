"""Covariant functions, the isometry F_s, the induced representation realized
on L2(X), the left regular m-representation, and intertwining defects.

Functions on X are stored through their section trace f o s as arrays shaped
like the X quadrature grid; the covariant extension f(s(x) k) = chi(k)^{-1}
f(s(x)) is computed on demand, so the isometry F_s is a pure reindexing plus
phase and is exact on the grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .groups import QuadratureGrid
from .measures import RelCentralSubgroup, gamma_s_inv
from .multipliers import Multiplier, Section, section_cocycle
from .states import DiscretizedState, axis_resample, StateGrid, translate

__all__ = [
    "CovariantFunction",
    "xgrid_inner",
    "xgrid_norm",
    "F_s",
    "R_chi_s",
    "left_reg_m",
    "intertwine_defect",
]


def xgrid_inner(f: np.ndarray, h: np.ndarray, grid: QuadratureGrid) -> complex:
    """Weighted L2(X, mu_X) inner product of grid functions (linear in h)."""
    return complex(np.sum(np.conj(f).ravel() * h.ravel() * grid.weights))


def xgrid_norm(f: np.ndarray, grid: QuadratureGrid) -> float:
    return float(np.sqrt(np.sum(np.abs(f).ravel() ** 2 * grid.weights)))


@dataclass(frozen=True)
class CovariantFunction:
    """A chi-covariant function on G, stored via its section trace on X.

    ``values`` holds f(s(x)) on the X grid; evaluation anywhere on G uses
    f(s(x) k) = chi(k)^{-1} f(s(x)).
    """

    values: np.ndarray
    grid: QuadratureGrid
    subgroup: RelCentralSubgroup
    section: Section

    def norm(self) -> float:
        return xgrid_norm(self.values, self.grid)

    def evaluate(self, g) -> complex:
        """Evaluate at a G-point whose X-part lies on the grid."""
        x, k = gamma_s_inv(self.subgroup, self.section, np.asarray(g, dtype=float))
        flat = self.values.reshape(self.grid.resolution)
        idx = []
        for i in range(len(self.grid.resolution)):
            ax = self.grid.axis(i)
            j = int(np.argmin(np.abs(ax - x[i])))
            if abs(ax[j] - x[i]) > 1e-9 * max(1.0, abs(x[i])):
                raise ValueError("X-part of the evaluation point is off the grid")
            idx.append(j)
        base = flat[tuple(idx)]
        return complex(np.exp(-1j * float(self.section.chi_phase(k))) * base)


def F_s(
    phi_values: np.ndarray,
    subgroup: RelCentralSubgroup,
    section: Section,
    grid: QuadratureGrid,
) -> CovariantFunction:
    """The isometry L2(X) -> covariant functions:  (F_s phi)(g) =
    chi(s(p(g))^{-1} g)^{-1} phi(p(g)).  On the grid it is the identity on
    values, so ||F_s phi|| = ||phi|| exactly."""
    values = np.asarray(phi_values, dtype=complex)
    return CovariantFunction(values=values, grid=grid, subgroup=subgroup, section=section)


def R_chi_s(
    subgroup: RelCentralSubgroup,
    section: Section,
    g,
    values: np.ndarray,
    grid: QuadratureGrid,
) -> np.ndarray:
    """(R^{chi,s}_g f)(x) = chi(c_s(g^{-1}, x)) f(g^{-1}[x]) on the X grid.

    g^{-1}[x] = p(g)^{-1} x is evaluated through band-limited interpolation;
    the phase cocycle is evaluated exactly at the grid nodes.
    """
    G = subgroup.ambient
    X = subgroup.quotient
    g = np.asarray(g, dtype=float)
    g_inv = G.inverse(g)
    x0_inv = X.inverse(subgroup.project(g))

    moved = _apply_x_translation(X, x0_inv, values, grid)
    cs = section_cocycle(
        section, np.broadcast_to(g_inv, (grid.n_nodes, G.dim)), grid.nodes
    )
    phase = np.exp(1j * np.asarray(section.chi_phase(cs))).reshape(grid.resolution)
    return phase * moved


def _apply_x_translation(X, x0, values: np.ndarray, grid: QuadratureGrid) -> np.ndarray:
    """Samples of f(x0 x) on the X grid for the implemented X charts, where
    left translation acts per-axis as x |-> scale*x + shift.

    Scale coordinates carried on geometric (log-spaced) axes transform purely
    multiplicatively; there the map becomes a uniform shift of the log
    coordinate and is applied as an FFT phase ramp.
    """
    dim = len(grid.resolution)
    ax_nodes = [grid.axis(i) for i in range(dim)]
    base = np.array([a[0] for a in ax_nodes])
    # left translation in all implemented X's is affine and separable per
    # axis: recover scale/shift from the product map itself.
    maps = []
    for ax in range(dim):
        e0 = base.copy()
        e1 = base.copy()
        e1[ax] = ax_nodes[ax][1]
        y0 = X.product(x0, e0)[ax]
        y1 = X.product(x0, e1)[ax]
        scale = (y1 - y0) / (e1[ax] - e0[ax])
        shift = y0 - scale * base[ax]
        maps.append((float(scale), float(shift)))
    offsets = []
    for i in range(dim):
        if i in grid.log_axes:
            offsets.append(float(np.log(ax_nodes[i][0])))
        else:
            offsets.append(float(ax_nodes[i][0]))
    state = DiscretizedState(
        np.asarray(values, dtype=complex).reshape(grid.resolution),
        StateGrid(
            offsets=tuple(offsets),
            spacings=tuple(grid.spacing(i) for i in range(dim)),
            counts=tuple(grid.resolution),
        ),
    )
    out = state
    for ax, (scale, shift) in enumerate(maps):
        if ax in grid.log_axes:
            if abs(shift) > 1e-10 * max(1.0, abs(scale)):
                raise ValueError("translation does not act multiplicatively on a log axis")
            if scale == 1.0:
                continue
            vec = np.zeros(dim)
            vec[ax] = -np.log(scale)  # f(scale * a): shift of u = ln a
            out = translate(out, vec)
        elif scale == 1.0:
            if shift == 0.0:
                continue
            vec = np.zeros(dim)
            vec[ax] = -shift
            out = translate(out, vec)
        else:
            out = axis_resample(out, ax, scale, shift)
    return out.samples


def left_reg_m(
    m: Multiplier, x0, values: np.ndarray, grid: QuadratureGrid
) -> np.ndarray:
    """Left regular m-representation on L2(X):

        (R^m_{x0} f)(x) = m(x0, x0^{-1} x)^{-1} f(x0^{-1} x).
    """
    X = m.base_group
    x0 = np.asarray(x0, dtype=float)
    x0_inv = X.inverse(x0)
    moved = _apply_x_translation(X, x0_inv, values, grid)
    args = X.product(np.broadcast_to(x0_inv, grid.nodes.shape), grid.nodes)
    phase = np.exp(-1j * np.asarray(m.phase(np.broadcast_to(x0, grid.nodes.shape), args)))
    return phase.reshape(grid.resolution) * moved


def intertwine_defect(
    A: Callable[[DiscretizedState], np.ndarray],
    u_left: Callable[[np.ndarray, DiscretizedState], DiscretizedState],
    u_right: Callable[[np.ndarray, np.ndarray], np.ndarray],
    g,
    test_states,
    grid: QuadratureGrid,
) -> float:
    """max over test states of  ||A U_left(g) v - U_right(g) A v|| / ||A v||.

    A maps states to X-grid functions; U_right acts on X-grid functions.
    """
    worst = 0.0
    g = np.asarray(g, dtype=float)
    for v in test_states:
        lhs = np.asarray(A(u_left(g, v)))
        rhs = np.asarray(u_right(g, np.asarray(A(v))))
        scale = max(xgrid_norm(np.asarray(A(v)), grid), 1e-300)
        worst = max(worst, xgrid_norm(lhs - rhs, grid) / scale)
    return worst
