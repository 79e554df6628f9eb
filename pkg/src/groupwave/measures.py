"""Relatively central subgroups, the coordinate isomorphism gamma_s,
the measure decomposition over X x K, and densities realizing the measure
class used for square-integrability modulo the subgroup.

A measure of the class is rho dmu_G with

    integral_K rho(g k) dmu_K(k) = 1   for all g,

so integrating |c|^2 against it collapses, along every K-coset, to the
quadrature of |c o s|^2 over X.  All implemented K's are abelian coordinate
subgroups with Lebesgue Haar measure on their chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .groups import GroupDescriptor, QuadratureGrid, haar_grid
from .multipliers import Section, kappa_from_section
from .states import DiscretizedState, bump_profile
from .representations import UnitaryRepSpec, coefficient

__all__ = [
    "RelCentralSubgroup",
    "RhoDensity",
    "gamma_s",
    "gamma_s_inv",
    "coord_product",
    "decompose_check",
    "make_rho",
    "translate_rho",
    "rho_validate",
    "integrate_mod_K",
    "integrate_mod_K_nested",
    "center_divergence_probe",
]


@dataclass(frozen=True)
class RelCentralSubgroup:
    """A closed normal subgroup K on which the representation acts by the
    character chi (phase given in radians), plus the quotient data."""

    ambient: GroupDescriptor
    k_group: GroupDescriptor
    quotient: GroupDescriptor
    K_embed: Callable[[np.ndarray], np.ndarray]
    K_project: Callable[[np.ndarray], np.ndarray]
    project: Callable[[np.ndarray], np.ndarray]  # p : G -> X
    chi_phase: Callable[[np.ndarray], np.ndarray]
    sections: tuple[Section, ...] = ()

    def membership_defect(self, g_coords: np.ndarray) -> float:
        g_coords = np.asarray(g_coords, dtype=float)
        back = self.K_embed(self.K_project(g_coords))
        return float(np.max(self.ambient.distance(back, g_coords)))

    def normality_defect(self, g: np.ndarray, k: np.ndarray) -> float:
        """max defect of g K g^{-1} subset K over sample pairs."""
        G = self.ambient
        conj = G.product(G.product(g, self.K_embed(k)), G.inverse(g))
        back = self.K_embed(self.K_project(conj))
        return float(np.max(G.distance(back, conj)))


def gamma_s(subgroup: RelCentralSubgroup, section: Section, x, k) -> np.ndarray:
    """gamma_s(x, k) = s(x) k in G-chart coordinates."""
    return subgroup.ambient.product(
        section.map(np.asarray(x, dtype=float)),
        subgroup.K_embed(np.asarray(k, dtype=float)),
    )


def gamma_s_inv(subgroup: RelCentralSubgroup, section: Section, g):
    """Inverse of gamma_s: g |-> (p(g), s(p(g))^{-1} g)."""
    g = np.asarray(g, dtype=float)
    G = subgroup.ambient
    x = subgroup.project(g)
    k_g = G.product(G.inverse(section.map(x)), g)
    if subgroup.membership_defect(k_g) > 1e-10:
        raise ValueError("gamma_s_inv: K-component left the subgroup")
    return x, subgroup.K_project(k_g)


def coord_product(subgroup: RelCentralSubgroup, section: Section, x, k, x2, k2):
    """Product of G in (x, k) coordinates:

        (x, k)(x', k') = (x x', kappa_s(x, x')^{-1} k_{s(x')} k')

    with k_{s(x')} = s(x')^{-1} k s(x').
    """
    G = subgroup.ambient
    X = subgroup.quotient
    K = subgroup.k_group
    x = np.asarray(x, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    kappa = kappa_from_section(section, x, x2)
    s2 = section.map(x2)
    conj = G.product(G.product(G.inverse(s2), subgroup.K_embed(np.asarray(k, float))), s2)
    if subgroup.membership_defect(conj) > 1e-10:
        raise ValueError("coord_product: conjugated element left K (K not normal?)")
    k_conj = subgroup.K_project(conj)
    k_out = K.product(K.product(K.inverse(kappa), k_conj), np.asarray(k2, float))
    return X.product(x, x2), k_out


def decompose_check(
    test_fn: Callable[[np.ndarray], np.ndarray],
    subgroup: RelCentralSubgroup,
    section: Section,
    g_grid: QuadratureGrid,
    x_grid: QuadratureGrid,
    k_grid: QuadratureGrid,
):
    """Both sides of  int_G f dmu_G = int_{X x K} f(s(x) k) dmu_X (x) mu_K.

    Returns (lhs, rhs, relative error).  ``test_fn`` must be compactly
    supported (to quadrature accuracy) inside every grid involved.
    """
    lhs = float(np.sum(np.asarray(test_fn(g_grid.nodes)) * g_grid.weights))
    xk_nodes = gamma_s(
        subgroup,
        section,
        np.repeat(x_grid.nodes, k_grid.n_nodes, axis=0),
        np.tile(k_grid.nodes, (x_grid.n_nodes, 1)),
    )
    w = np.repeat(x_grid.weights, k_grid.n_nodes) * np.tile(
        k_grid.weights, x_grid.n_nodes
    )
    rhs = float(np.sum(np.asarray(test_fn(xk_nodes)) * w))
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return lhs, rhs, abs(lhs - rhs) / scale


@dataclass(frozen=True)
class RhoDensity:
    """Density of a measure in the class: rho(g) = w(k-part of gamma_s^{-1} g)
    for a fixed reference section, with w normalized over the K-chart."""

    eval: Callable[[np.ndarray], np.ndarray]
    subgroup: RelCentralSubgroup
    label: str = "rho"


def make_rho(
    kind: str, subgroup: RelCentralSubgroup, width: float = 1.0
) -> RhoDensity:
    """Gaussian or compact-bump density on the K-fibres.

    The profile w on the K-chart R^m integrates to 1 analytically (gaussian)
    or via a fine reference quadrature (bump, whose support is compact); the
    density rho(g) = w(K-part(g)) then satisfies the coset-normalization
    identity exactly by translation invariance of Lebesgue measure.
    """
    m = subgroup.k_group.dim
    section = subgroup.sections[0]
    if kind == "gaussian":
        def profile(k):
            k = np.asarray(k, dtype=float)
            return (2.0 * np.pi * width ** 2) ** (-m / 2.0) * np.exp(
                -np.sum(k ** 2, axis=-1) / (2.0 * width ** 2)
            )
    elif kind == "bump":
        radius = 3.0 * width
        # 1-d normalization of the bump profile, computed once on a fine grid;
        # the integrand is C-infinity with compact support so the midpoint rule
        # converges faster than any power of the step.
        xs = np.linspace(-radius, radius, 1 << 14, endpoint=False) + radius / (1 << 14)
        z1 = float(np.sum(bump_profile(xs, 0.0, radius)) * (xs[1] - xs[0]))

        def profile(k):
            k = np.asarray(k, dtype=float)
            out = np.ones(k.shape[:-1])
            for i in range(m):
                out = out * bump_profile(k[..., i], 0.0, radius) / z1
            return out
    else:
        raise ValueError(f"unknown density kind {kind!r} (expected gaussian|bump)")

    G = subgroup.ambient

    def eval_rho(g):
        g = np.asarray(g, dtype=float)
        x = subgroup.project(g)
        k_g = G.product(G.inverse(section.map(x)), g)
        return profile(subgroup.K_project(k_g))

    return RhoDensity(eval=eval_rho, subgroup=subgroup, label=f"rho[{kind}]")


def translate_rho(rho: RhoDensity, g0) -> RhoDensity:
    """rho^g(g') = rho(g g'); the translated measure stays in the class."""
    g0 = np.asarray(g0, dtype=float)
    G = rho.subgroup.ambient

    def eval_translated(g):
        g = np.asarray(g, dtype=float)
        return rho.eval(G.product(np.broadcast_to(g0, g.shape), g))

    return RhoDensity(
        eval=eval_translated, subgroup=rho.subgroup, label=f"{rho.label}^g"
    )


def rho_validate(
    rho: RhoDensity,
    section: Section,
    x_samples: np.ndarray,
    k_grid: QuadratureGrid,
) -> float:
    """max over sampled x of | int_K rho(s(x) k) dmu_K - 1 |."""
    worst = 0.0
    sub = rho.subgroup
    for x in np.asarray(x_samples, dtype=float):
        nodes = gamma_s(sub, section, np.broadcast_to(x, (k_grid.n_nodes, len(x))), k_grid.nodes)
        val = float(np.sum(rho.eval(nodes) * k_grid.weights))
        worst = max(worst, abs(val - 1.0))
    return worst


def integrate_mod_K(
    f: Callable[[np.ndarray], np.ndarray], rho: RhoDensity, grid: QuadratureGrid
) -> float:
    """Quadrature of  int_G f dmu_{G,K} = int f rho dmu_G over the grid."""
    vals = np.asarray(f(grid.nodes), dtype=float)
    return float(np.sum(vals * rho.eval(grid.nodes) * grid.weights))


def integrate_mod_K_nested(
    f: Callable[[np.ndarray], np.ndarray],
    rho: RhoDensity,
    grids: Sequence[QuadratureGrid],
    rel_tol: float = 1e-3,
):
    """Nested-box version; returns (values, converged) and flags
    non-convergence (value still growing as the box doubles)."""
    values = [integrate_mod_K(f, rho, g) for g in grids]
    if len(values) < 2:
        return values, True
    last_inc = abs(values[-1] - values[-2])
    converged = last_inc <= rel_tol * max(abs(values[-1]), 1e-300)
    return values, converged


def center_divergence_probe(
    rep: UnitaryRepSpec,
    subgroup: RelCentralSubgroup,
    psi: DiscretizedState,
    phi: DiscretizedState,
    r_list: Sequence[float],
    x_grid: QuadratureGrid,
    k_resolution: int = 16,
):
    """Partial integrals of |c_{psi,phi}|^2 over X x {|k| <= R}.

    For a representation whose relatively central subgroup is noncompact the
    partial integrals grow linearly in the K-box measure, with slope equal to
    the X-side integral of |c o s|^2 -- the numerical face of "square
    integrable only modulo K, never over all of G".

    Returns (partials, slope_fit, x_integral).
    """
    section = subgroup.sections[0]
    s_nodes = section.map(x_grid.nodes)
    c_x = np.array(
        [coefficient(rep, psi, phi, g) for g in s_nodes], dtype=complex
    )
    x_integral = float(np.sum(np.abs(c_x) ** 2 * x_grid.weights))

    partials = []
    for r in r_list:
        g_grid = haar_grid(
            rep.group,
            [(-r, r)] + list(x_grid.box),
            [k_resolution] + list(x_grid.resolution),
        )
        c = None
        if rep.fast_coefficients is not None:
            c = rep.fast_coefficients(psi, phi, g_grid)
        if c is None:
            c = np.array([coefficient(rep, psi, phi, g) for g in g_grid.nodes])
        partials.append(float(np.sum(np.abs(c) ** 2 * g_grid.weights)))

    lengths = np.array([2.0 * r for r in r_list])
    partials_arr = np.array(partials)
    slope = float(np.sum(lengths * partials_arr) / np.sum(lengths ** 2))
    return partials, slope, x_integral
