"""T-valued multipliers (2-cocycles), sections of quotient maps and the
cocycles they induce, multiplier similarity, and central-extension groups.

Phases are stored in radians and compared modulo 2 pi with a wrap-aware
distance, so branch cuts never produce false failures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .groups import GroupDescriptor, random_chart_points

__all__ = [
    "Multiplier",
    "Section",
    "InconsistentSectionError",
    "wrap_phase",
    "phase_distance",
    "kappa_from_section",
    "multiplier_from_section",
    "section_cocycle",
    "check_normalization",
    "check_cocycle",
    "similar",
    "conjugate",
    "trivial_multiplier",
    "central_extension",
]

K_MEMBERSHIP_TOL = 1e-10


def wrap_phase(theta: np.ndarray) -> np.ndarray:
    """Reduce a phase (radians) to (-pi, pi]."""
    return np.angle(np.exp(1j * np.asarray(theta, dtype=float)))


def phase_distance(a, b) -> np.ndarray:
    return np.abs(wrap_phase(np.asarray(a) - np.asarray(b)))


@dataclass(frozen=True)
class Multiplier:
    """m(x1, x2) = e^{i phase(x1, x2)} on the group ``base_group``."""

    phase: Callable[[np.ndarray, np.ndarray], np.ndarray]
    base_group: GroupDescriptor
    label: str = "multiplier"

    def value(self, x1, x2) -> np.ndarray:
        return np.exp(1j * self.phase(np.asarray(x1, float), np.asarray(x2, float)))


class InconsistentSectionError(ValueError):
    """A section's derived cocycle left the embedded subgroup."""


@dataclass(frozen=True)
class Section:
    """A map X -> G splitting the projection p: G -> X, with the character
    of the subgroup K it is transverse to.

    ``map``/``projection`` are vectorized over leading axes.  ``subgroup_embed``
    and ``subgroup_project`` convert between the K-chart and the K-coordinate
    subspace of the G-chart; all implemented K's are coordinate subspaces.
    """

    label: str
    x_group: GroupDescriptor
    g_group: GroupDescriptor
    map: Callable[[np.ndarray], np.ndarray]
    projection: Callable[[np.ndarray], np.ndarray]
    subgroup_embed: Callable[[np.ndarray], np.ndarray]
    subgroup_project: Callable[[np.ndarray], np.ndarray]
    chi_phase: Callable[[np.ndarray], np.ndarray]
    # True when s places the X coordinates into the G-chart with every other
    # coordinate at its identity value; lets batched evaluators reuse X-grids.
    is_coordinate_section: bool = False
    # for coordinate sections: G-chart index of each X coordinate (used to
    # restrict grid-safety boxes of G-representations to the quotient)
    coordinate_axes: tuple[int, ...] | None = None

    def extract_k(self, g_coords: np.ndarray, context: str = "section") -> np.ndarray:
        """Project a G-point expected to lie in K onto the K-chart, verifying
        that the non-K coordinates sit at their identity values."""
        g_coords = np.asarray(g_coords, dtype=float)
        k = self.subgroup_project(g_coords)
        back = self.subgroup_embed(k)
        defect = float(np.max(self.g_group.distance(back, g_coords)))
        if defect > K_MEMBERSHIP_TOL:
            raise InconsistentSectionError(
                f"{context}: point leaves K by {defect:.3e} (section {self.label!r})"
            )
        return k


def kappa_from_section(section: Section, x1, x2) -> np.ndarray:
    """kappa_s(x1, x2) in the K-chart, from s(x1 x2) = s(x1) s(x2) kappa_s(x1, x2)."""
    G = section.g_group
    X = section.x_group
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    s12 = section.map(X.product(x1, x2))
    head = G.product(section.map(x1), section.map(x2))
    kappa_g = G.product(G.inverse(head), s12)
    return section.extract_k(kappa_g, context="kappa_s")


def multiplier_from_section(section: Section) -> Multiplier:
    """m_s(x1, x2) = chi(kappa_s(x1, x2))."""

    def phase(x1, x2):
        return np.asarray(section.chi_phase(kappa_from_section(section, x1, x2)))

    return Multiplier(
        phase=phase, base_group=section.x_group, label=f"m[{section.label}]"
    )


def section_cocycle(section: Section, g, x) -> np.ndarray:
    """c_s(g, x) = s(x)^{-1} g^{-1} s(g[x]) in the K-chart; g[x] = p(g) x."""
    G = section.g_group
    X = section.x_group
    g = np.asarray(g, dtype=float)
    x = np.asarray(x, dtype=float)
    gx = X.product(section.projection(g), x)
    val = G.product(
        G.product(G.inverse(section.map(x)), G.inverse(g)), section.map(gx)
    )
    return section.extract_k(val, context="c_s")


def check_normalization(m: Multiplier, points: np.ndarray) -> float:
    """max phase defect of m(x, e) = m(e, x) = 1."""
    e = np.broadcast_to(m.base_group.identity, points.shape)
    d1 = np.max(phase_distance(m.phase(points, e), 0.0))
    d2 = np.max(phase_distance(m.phase(e, points), 0.0))
    return float(max(d1, d2))


def check_cocycle(
    m: Multiplier,
    trials: int = 200,
    rng: np.random.Generator | None = None,
    points: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None,
) -> float:
    """max phase defect of m(x1, x2 x3) m(x2, x3) = m(x1 x2, x3) m(x1, x2)."""
    X = m.base_group
    if points is None:
        rng = rng if rng is not None else np.random.default_rng(0)
        x1 = random_chart_points(X, rng, trials)
        x2 = random_chart_points(X, rng, trials)
        x3 = random_chart_points(X, rng, trials)
    else:
        x1, x2, x3 = points
    lhs = m.phase(x1, X.product(x2, x3)) + m.phase(x2, x3)
    rhs = m.phase(X.product(x1, x2), x3) + m.phase(x1, x2)
    return float(np.max(phase_distance(lhs, rhs)))


def similar(
    m: Multiplier,
    m_prime: Multiplier,
    beta_phase: Callable[[np.ndarray], np.ndarray],
    trials: int = 200,
    rng: np.random.Generator | None = None,
) -> float:
    """max defect of m(x1,x2) = beta(x1 x2) beta(x1)^{-1} beta(x2)^{-1} m'(x1,x2)."""
    X = m.base_group
    rng = rng if rng is not None else np.random.default_rng(0)
    x1 = random_chart_points(X, rng, trials)
    x2 = random_chart_points(X, rng, trials)
    lhs = m.phase(x1, x2)
    rhs = (
        np.asarray(beta_phase(X.product(x1, x2)))
        - np.asarray(beta_phase(x1))
        - np.asarray(beta_phase(x2))
        + m_prime.phase(x1, x2)
    )
    return float(np.max(phase_distance(lhs, rhs)))


def conjugate(m: Multiplier) -> Multiplier:
    """m*(x1, x2) = m(x1, x2)^{-1}; phase negated."""
    return Multiplier(
        phase=lambda x1, x2: -np.asarray(m.phase(x1, x2)),
        base_group=m.base_group,
        label=f"{m.label}*",
    )


def trivial_multiplier(X: GroupDescriptor) -> Multiplier:
    return Multiplier(
        phase=lambda x1, x2: np.zeros(np.broadcast(np.asarray(x1)[..., 0], np.asarray(x2)[..., 0]).shape),
        base_group=X,
        label="trivial",
    )


def central_extension(X: GroupDescriptor, m: Multiplier) -> GroupDescriptor:
    """The group X_m on T x X:  (tau, x)(tau', x') = (m(x, x') tau tau', x x').

    Chart (theta, x) with theta the phase of tau; Haar density is
    haar_X / (2 pi) so that mu_T(T) = 1, and the modular function is
    Delta_X(x) (independent of theta).
    """
    dim = 1 + X.dim

    def product(g, h):
        g = np.asarray(g, dtype=float)
        h = np.asarray(h, dtype=float)
        g, h = np.broadcast_arrays(g, h)
        out = np.empty_like(g)
        out[..., 0] = wrap_phase(g[..., 0] + h[..., 0] + m.phase(g[..., 1:], h[..., 1:]))
        out[..., 1:] = X.product(g[..., 1:], h[..., 1:])
        return out

    def inverse(g):
        g = np.asarray(g, dtype=float)
        xinv = X.inverse(g[..., 1:])
        out = np.empty_like(g)
        out[..., 0] = wrap_phase(-g[..., 0] - m.phase(g[..., 1:], xinv))
        out[..., 1:] = xinv
        return out

    identity = np.concatenate([[0.0], X.identity])
    x_lower = X.domain_lower if X.domain_lower is not None else (float("nan"),) * X.dim
    x_box = X.sample_box if X.sample_box is not None else ((-3.0, 3.0),) * X.dim

    return GroupDescriptor(
        name=f"ext[{X.name};{m.label}]",
        dim=dim,
        product=product,
        inverse=inverse,
        identity=identity,
        haar_density=lambda g: np.asarray(X.haar_density(np.asarray(g)[..., 1:]))
        / (2.0 * np.pi),
        modular=lambda g: X.modular(np.asarray(g)[..., 1:]),
        domain_constraint=lambda g: X.domain_constraint(np.asarray(g)[..., 1:]),
        domain_lower=(float("nan"),) + tuple(x_lower),
        angle_axes=(0,) + tuple(a + 1 for a in X.angle_axes),
        sample_box=((-np.pi, np.pi),) + tuple(x_box),
        conventions=(
            f"central extension of T by {X.name} with multiplier {m.label}\n"
            "chart      : (theta in (-pi, pi], x); tau = e^(i theta)\n"
            "product    : (theta + theta' + phase_m(x, x') mod 2 pi, x x')\n"
            "haar       : mu_T (x) mu_X with mu_T(T) = 1\n"
            "modular    : Delta_X(x)\n"
        ),
    )
