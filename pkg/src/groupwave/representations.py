"""Discretized unitary and projective representations on sampled L2 states.

The concrete actions:

* ``wh_rep``      -- polarized Weyl-Heisenberg representation
                     (U(k,p,q) f)(x) = e^{i(k kc + p.x)} f(x + kc q)  on L2(R^n);
* ``affine_rep``  -- (U(b,a) f)(x) = a^{-n/2} f((x-b)/a), applied in the
                     frequency domain (a^{n/2} e^{i w.b} fhat(a w)) so small
                     scales stay numerically clean;
* ``exotic_rep``  -- the induced-representation display of the 3n+4
                     dimensional example on L2((0,inf) x R^n, db dp);
* ``displacement``-- the coherent-state displacement operator
                     D(q,p) = e^{-i p.q/2} e^{i p.x} f(x - q).

Non-grid translations use FFT phase ramps, dilations band-limited
resampling; states are treated as band-limited, so every action declares a
``safe_box`` of group parameters for which aliasing stays negligible for the
shipped test states.  ``analyze`` clips transform grids to this box.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .groups import GroupDescriptor, QuadratureGrid, make_affine, make_exotic, make_polarized_wh
from .multipliers import (
    Multiplier,
    Section,
    central_extension,
    conjugate,
    multiplier_from_section,
)
from .states import (
    DiscretizedState,
    axis_resample,
    fourier_plancherel,
    frequency_grid,
    inner,
    inverse_fourier_plancherel,
    modulate,
    translate,
)

__all__ = [
    "UnitaryRepSpec",
    "ProjectiveRepSpec",
    "GridSafetyError",
    "wh_rep",
    "affine_rep",
    "exotic_rep",
    "displacement",
    "projective_from_section",
    "lift_to_extension",
    "coefficient",
]


class GridSafetyError(ValueError):
    """Group parameter outside the rep's declared grid-safe box."""


@dataclass(frozen=True)
class UnitaryRepSpec:
    """A strongly continuous unitary representation acting on sampled states.

    ``action(coords, state)`` must be unitary for grid-safe coords and satisfy
    action(g, action(h, f)) = action(gh, f) up to the declared tolerance.
    ``fast_coefficients`` is an optional batched evaluator returning the
    coefficient array over a whole quadrature grid (same values as the
    node-by-node loop, used by transforms for speed).
    """

    group: GroupDescriptor
    action: Callable[[np.ndarray, DiscretizedState], DiscretizedState]
    label: str
    safe_box: tuple[tuple[float, float], ...] | None = None
    fast_coefficients: Optional[
        Callable[[DiscretizedState, DiscretizedState, QuadratureGrid], Optional[np.ndarray]]
    ] = None
    # batched evaluator of sum_g c(g) w(g) U(g) psi over a grid (same values
    # as the node loop); used by synthesis
    fast_adjoint: Optional[
        Callable[[np.ndarray, "QuadratureGrid", DiscretizedState], Optional[DiscretizedState]]
    ] = None

    def act(self, g, state: DiscretizedState) -> DiscretizedState:
        g = np.asarray(g, dtype=float)
        if self.safe_box is not None:
            for i, (lo, hi) in enumerate(self.safe_box):
                if not (lo <= g[i] <= hi):
                    raise GridSafetyError(
                        f"{self.label}: coordinate {i} = {g[i]} outside grid-safe "
                        f"range [{lo}, {hi}]"
                    )
        return self.action(g, state)


@dataclass(frozen=True)
class ProjectiveRepSpec(UnitaryRepSpec):
    """Projective representation: P(xy) = m(x, y) P(x) P(y)."""

    multiplier: Multiplier = None  # type: ignore[assignment]


def coefficient(rep: UnitaryRepSpec, psi: DiscretizedState, phi: DiscretizedState, g) -> complex:
    """c_{psi,phi}(g) = <U(g) psi, phi>; bounded by ||psi|| ||phi||."""
    return inner(rep.act(g, psi), phi)


# ---------------------------------------------------------------------------
# Weyl-Heisenberg representation
# ---------------------------------------------------------------------------


def wh_rep(k_check: float, n: int = 1, safe_momentum: float = 16.0, safe_shift: float = 12.0) -> UnitaryRepSpec:
    """U_kc(k, p, q) f(x) = e^{i(k kc + p.x)} f(x + kc q) on L2(R^n).

    kc = 0 is rejected: the representation with trivial central character has
    singleton dual orbits and is never square integrable modulo the centre.
    """
    if k_check == 0:
        raise ValueError("central parameter must be nonzero")
    if n < 1:
        raise ValueError("n must be a positive integer")
    kc = float(k_check)

    def action(g, state):
        g = np.asarray(g, dtype=float)
        k, p, q = g[0], g[1 : 1 + n], g[1 + n :]
        out = translate(state, -kc * q)
        return modulate(out, p, extra_phase=k * kc)

    def fast_coefficients(psi, phi, grid):
        # batched chirp evaluation; X-grid axes (p, q) or full chart (k, p, q)
        if n != 1 or psi.grid.dim != 1:
            return None
        if len(grid.resolution) == 2:
            p_ax, q_ax = grid.axis(0), grid.axis(1)
            k_ax = None
        elif len(grid.resolution) == 3:
            k_ax, p_ax, q_ax = grid.axis(0), grid.axis(1), grid.axis(2)
        else:
            return None
        x = psi.grid.axis(0)
        vol = psi.grid.cell_volume
        chirp = np.exp(-1j * np.outer(p_ax, x))  # (P, X)
        rows = []
        for q in q_ax:
            psi_q = translate(psi, np.array([-kc * q]))
            v = np.conj(psi_q.samples) * phi.samples * vol
            rows.append(chirp @ v)
        c_pq = np.stack(rows, axis=-1)  # (P, Q)
        if k_ax is None:
            return c_pq.ravel()
        phases = np.exp(-1j * kc * k_ax)
        return (phases[:, None, None] * c_pq[None, :, :]).ravel()

    def fast_adjoint(coeffs, grid, psi):
        if n != 1 or psi.grid.dim != 1:
            return None
        if len(grid.resolution) == 2:
            p_ax, q_ax = grid.axis(0), grid.axis(1)
            cw = (np.asarray(coeffs) * grid.weights).reshape(grid.resolution)
        elif len(grid.resolution) == 3:
            k_ax, p_ax, q_ax = grid.axis(0), grid.axis(1), grid.axis(2)
            full = (np.asarray(coeffs) * grid.weights).reshape(grid.resolution)
            phases = np.exp(1j * kc * k_ax)
            cw = np.tensordot(phases, full, axes=(0, 0))  # sum over k with e^{+ik kc}
        else:
            return None
        x = psi.grid.axis(0)
        chirp_t = np.exp(1j * np.outer(x, p_ax))  # (X, P)
        acc = np.zeros(psi.grid.counts, dtype=complex)
        for qi, q in enumerate(q_ax):
            psi_q = translate(psi, np.array([-kc * q]))
            acc += (chirp_t @ cw[:, qi]) * psi_q.samples
        return DiscretizedState(acc, psi.grid)

    return UnitaryRepSpec(
        group=make_polarized_wh(n),
        action=action,
        label=f"wh[k={kc}]",
        safe_box=((-np.inf, np.inf),)
        + ((-safe_momentum, safe_momentum),) * n
        + ((-safe_shift, safe_shift),) * n,
        fast_coefficients=fast_coefficients,
        fast_adjoint=fast_adjoint,
    )


def displacement(q, p) -> Callable[[DiscretizedState], DiscretizedState]:
    """Coherent-state displacement (D f)(x) = e^{-i p.q/2} e^{i p.x} f(x - q).

    Coincides with the section pullback of the Weyl-Heisenberg representation
    at central parameter -1 through the symmetric section.
    """
    q = np.atleast_1d(np.asarray(q, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))

    def apply(state: DiscretizedState) -> DiscretizedState:
        out = translate(state, q)
        return modulate(out, p, extra_phase=-0.5 * float(np.dot(p, q)))

    return apply


# ---------------------------------------------------------------------------
# Affine representation
# ---------------------------------------------------------------------------


def affine_rep(
    n: int = 1,
    scale_range: tuple[float, float] = (1.0 / 64.0, 64.0),
    shift_max: float = 64.0,
) -> UnitaryRepSpec:
    """(U(b, a) f)(x) = a^{-n/2} f((x - b)/a), computed in the frequency domain.

    The Fourier side is a^{n/2} e^{i w.b} fhat(a w): resampling the spectrum
    keeps the small-scale (a << 1) coefficients accurate even when the
    position-space image of the state would fall below grid resolution.
    The safe box bounds coefficient accuracy; unitarity of the action itself
    additionally needs the dilated state to stay inside band and box.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")

    def action(g, state):
        g = np.asarray(g, dtype=float)
        b, a = g[:n], g[n]
        if not a > 0:
            raise ValueError("scale coordinate must be positive")
        spec = fourier_plancherel(state)
        out = spec
        for ax in range(n):
            out = axis_resample(out, ax, a, 0.0)
        phase = np.zeros(out.grid.counts)
        meshes = out.grid.meshes()
        for ax in range(n):
            phase = phase + b[ax] * meshes[ax]
        out = out.with_samples(out.samples * (a ** (n / 2.0)) * np.exp(1j * phase))
        return inverse_fourier_plancherel(out, state.grid)

    def fast_coefficients(psi, phi, grid):
        if n != 1 or psi.grid.dim != 1 or len(grid.resolution) != 2:
            return None
        b_ax, a_ax = grid.axis(0), grid.axis(1)
        psi_hat = fourier_plancherel(psi)
        phi_hat = fourier_plancherel(phi)
        w = psi_hat.grid.axis(0)
        dvol = psi_hat.grid.cell_volume
        chirp = np.exp(-1j * np.outer(b_ax, w))  # (B, W)
        cols = []
        for a in a_ax:
            res = axis_resample(psi_hat, 0, a, 0.0)
            v = np.conj(res.samples) * phi_hat.samples * dvol * np.sqrt(a)
            cols.append(chirp @ v)
        return np.stack(cols, axis=-1).ravel()  # (B, A) raveled

    def fast_adjoint(coeffs, grid, psi):
        if n != 1 or psi.grid.dim != 1 or len(grid.resolution) != 2:
            return None
        b_ax, a_ax = grid.axis(0), grid.axis(1)
        cw = (np.asarray(coeffs) * grid.weights).reshape(grid.resolution)  # (B, A)
        psi_hat = fourier_plancherel(psi)
        w = psi_hat.grid.axis(0)
        chirp_t = np.exp(1j * np.outer(w, b_ax))  # (W, B)
        acc = np.zeros(psi_hat.grid.counts, dtype=complex)
        for ai, a in enumerate(a_ax):
            res = axis_resample(psi_hat, 0, a, 0.0)
            acc += (chirp_t @ cw[:, ai]) * (np.sqrt(a) * res.samples)
        return inverse_fourier_plancherel(
            DiscretizedState(acc, psi_hat.grid), psi.grid
        )

    return UnitaryRepSpec(
        group=make_affine(n),
        action=action,
        label=f"affine[n={n}]",
        safe_box=((-shift_max, shift_max),) * n + (scale_range,),
        fast_coefficients=fast_coefficients,
        fast_adjoint=fast_adjoint,
    )


# ---------------------------------------------------------------------------
# Exotic-group representation
# ---------------------------------------------------------------------------


def exotic_rep(
    k_vec=0.0,
    n: int = 1,
    scale_range: tuple[float, float] = (1.0 / 16.0, 16.0),
    shift_max: float = 8.0,
) -> UnitaryRepSpec:
    """(U(t,s,b,p,q,r,a) f)(bc, pc) = a^{1/2} e^{i(t + k.r)} e^{i(b bc + p.pc)}
    f(a bc, pc + q)  on L2((0, inf) x R^n, dbc dpc).

    This is the representation display of the worked example, implemented
    literally.  The s coordinate never acts (the inducing character has
    scheck = 0 on the orbit), and the restriction to T x S x R is the scalar
    e^{i(t + k.r)} by construction.  Note that for k_vec != 0 the display is
    not a homomorphism in the r-a sector; the bundled configurations use
    k_vec = 0, for which it is.  States live on a (bc > 0) x (pc in R^n)
    grid with half-cell offset from bc = 0.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    kv = np.broadcast_to(np.atleast_1d(np.asarray(k_vec, dtype=float)), (n,))
    sl_p = slice(3, 3 + n)
    sl_q = slice(3 + n, 3 + 2 * n)
    sl_r = slice(3 + 2 * n, 3 + 3 * n)
    ia = 3 + 3 * n

    def _check_grid(state):
        if state.grid.dim != n + 1:
            raise ValueError(f"state grid must be (bc, pc in R^{n})")
        if state.grid.offsets[0] <= 0:
            raise GridSafetyError("state grid touches the bc = 0 singularity")

    def action(g, state):
        _check_grid(state)
        g = np.asarray(g, dtype=float)
        t, b, a = g[0], g[2], g[ia]
        p, q, r = g[sl_p], g[sl_q], g[sl_r]
        if not a > 0:
            raise ValueError("scale coordinate must be positive")
        out = axis_resample(state, 0, a, 0.0)  # f(a bc, pc)
        out = translate(out, np.concatenate([[0.0], -q]))  # pc -> pc + q
        freq = np.concatenate([[b], p])
        phase0 = t + float(np.dot(kv, r))
        return modulate(out.with_samples(out.samples * np.sqrt(a)), freq, phase0)

    def fast_coefficients(psi, phi, grid):
        if n != 1 or psi.grid.dim != 2 or len(grid.resolution) != 4:
            return None
        # X-grid axes (p, q, b, a); state axes (bc, pc)
        p_ax, q_ax, b_ax, a_ax = (grid.axis(i) for i in range(4))
        bc = psi.grid.axis(0)
        pc = psi.grid.axis(1)
        vol = psi.grid.cell_volume
        eb = np.exp(-1j * np.outer(b_ax, bc))  # (B, bc)
        ep = np.exp(-1j * np.outer(p_ax, pc))  # (P, pc)
        out = np.empty(
            (len(p_ax), len(q_ax), len(b_ax), len(a_ax)), dtype=complex
        )
        for qi, q in enumerate(q_ax):
            psi_q = translate(psi, np.array([0.0, -q]))
            for aj, a in enumerate(a_ax):
                psi_qa = axis_resample(psi_q, 0, a, 0.0)
                h = np.conj(psi_qa.samples * np.sqrt(a)) * phi.samples * vol
                block = ep @ (eb @ h).T  # (P, B)
                out[:, qi, :, aj] = block
        return out.ravel()

    return UnitaryRepSpec(
        group=make_exotic(n),
        action=action,
        label=f"exotic[n={n}]",
        safe_box=((-np.inf, np.inf),) * 3
        + ((-32.0, 32.0),) * n
        + ((-shift_max, shift_max),) * n
        + ((-np.inf, np.inf),) * n
        + (scale_range,),
        fast_coefficients=fast_coefficients,
    )


# ---------------------------------------------------------------------------
# Section pullbacks and central-extension lifts
# ---------------------------------------------------------------------------


def projective_from_section(rep: UnitaryRepSpec, section: Section) -> ProjectiveRepSpec:
    """P_s(x) = U(s(x)): projective representation of X with multiplier m_s."""
    if section.g_group.name != rep.group.name:
        raise ValueError("section codomain does not match the representation's group")
    m = multiplier_from_section(section)

    def action(x, state):
        return rep.act(section.map(np.asarray(x, dtype=float)), state)

    def fast_coefficients(psi, phi, grid):
        if rep.fast_coefficients is None or not section.is_coordinate_section:
            return None
        return rep.fast_coefficients(psi, phi, grid)

    def fast_adjoint(coeffs, grid, psi):
        if rep.fast_adjoint is None or not section.is_coordinate_section:
            return None
        return rep.fast_adjoint(coeffs, grid, psi)

    safe_box = None
    if rep.safe_box is not None and section.coordinate_axes is not None:
        safe_box = tuple(rep.safe_box[i] for i in section.coordinate_axes)

    return ProjectiveRepSpec(
        group=section.x_group,
        action=action,
        label=f"P[{rep.label};{section.label}]",
        multiplier=m,
        fast_coefficients=fast_coefficients,
        fast_adjoint=fast_adjoint,
        safe_box=safe_box,
    )


def lift_to_extension(proj: ProjectiveRepSpec, variant: str = "standard") -> UnitaryRepSpec:
    """Lift a projective rep to a genuine rep of the central extension.

    standard: U_P(tau, x) = tau^{-1} P(x)  on X_m;
    starred : U_*P(tau, x) = tau P(x)      on X_{m*}.
    """
    if variant not in ("standard", "starred"):
        raise ValueError("variant must be 'standard' or 'starred'")
    m = proj.multiplier if variant == "standard" else conjugate(proj.multiplier)
    extension = central_extension(proj.group, m)
    sign = -1.0 if variant == "standard" else 1.0

    def action(g, state):
        g = np.asarray(g, dtype=float)
        theta, x = g[0], g[1:]
        out = proj.act(x, state)
        return out.with_samples(out.samples * np.exp(1j * sign * theta))

    return UnitaryRepSpec(
        group=extension,
        action=action,
        label=f"lift[{proj.label};{variant}]",
        safe_box=None,
    )
