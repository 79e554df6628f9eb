"""Bundled configurations: every object needed to verify the Gabor, wavelet
and exotic-group setups end to end (group, quotient, sections, relatively
central subgroup, representation, default state and quadrature grids, test
vectors).

All grids and vectors here are defaults tuned so the shipped verification
suites meet their tolerances; each function takes overrides.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import (
    GroupDescriptor,
    QuadratureGrid,
    haar_grid,
    make_affine,
    make_exotic,
    make_exotic_k_group,
    make_exotic_quotient,
    make_polarized_wh,
    make_standard_wh,
    make_vector_group,
    make_wh_quotient,
)
from .measures import RelCentralSubgroup
from .multipliers import Section
from .representations import (
    ProjectiveRepSpec,
    UnitaryRepSpec,
    affine_rep,
    exotic_rep,
    projective_from_section,
    wh_rep,
)
from .states import (
    DiscretizedState,
    StateGrid,
    centered_grid,
    dog_state,
    gaussian_state,
    halfline_grid,
    hermite_state,
    morlet_state,
    product_grid,
    product_state,
    random_bandlimited_state,
)

__all__ = [
    "GaborSetup",
    "AffineSetup",
    "ExoticSetup",
    "gabor_setup",
    "affine_setup",
    "exotic_setup",
    "affine_nested_grids",
]


# ---------------------------------------------------------------------------
# Gabor: Weyl-Heisenberg modulo its centre
# ---------------------------------------------------------------------------


@dataclass
class GaborSetup:
    n: int
    k_check: float
    group: GroupDescriptor
    x_group: GroupDescriptor
    k_group: GroupDescriptor
    subgroup: RelCentralSubgroup
    section: Section
    section_prime: Section
    rep: UnitaryRepSpec
    proj: ProjectiveRepSpec
    proj_prime: ProjectiveRepSpec
    state_grid: StateGrid
    x_grid: QuadratureGrid
    states: dict = field(default_factory=dict)


def gabor_setup(
    n: int = 1,
    k_check: float = -1.0,
    state_halfwidth: float = 8.0,
    state_points: int = 256,
    x_halfwidth: float = 8.0,
    x_resolution: int = 64,
) -> GaborSetup:
    group = make_polarized_wh(n)
    x_group = make_wh_quotient(n)
    k_group = make_vector_group(1, f"wh_center_n{n}", density=1.0)
    kc = float(k_check)

    def k_embed(k):
        k = np.asarray(k, dtype=float)
        out = np.zeros(k.shape[:-1] + (group.dim,))
        out[..., 0] = k[..., 0]
        return out

    def k_project(g):
        return np.asarray(g, dtype=float)[..., :1]

    def project(g):
        return np.asarray(g, dtype=float)[..., 1:]

    def chi_phase(k):
        return kc * np.asarray(k, dtype=float)[..., 0]

    def smap(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (group.dim,))
        out[..., 1:] = x
        return out

    def smap_prime(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (group.dim,))
        out[..., 0] = 0.5 * np.sum(x[..., :n] * x[..., n:], axis=-1)
        out[..., 1:] = x
        return out

    common = dict(
        x_group=x_group,
        g_group=group,
        projection=project,
        subgroup_embed=k_embed,
        subgroup_project=k_project,
        chi_phase=chi_phase,
    )
    section = Section(
        label="s0", map=smap, is_coordinate_section=True,
        coordinate_axes=tuple(range(1, 2 * n + 1)), **common
    )
    section_prime = Section(label="s_sym", map=smap_prime, **common)

    subgroup = RelCentralSubgroup(
        ambient=group,
        k_group=k_group,
        quotient=x_group,
        K_embed=k_embed,
        K_project=k_project,
        project=project,
        chi_phase=chi_phase,
        sections=(section, section_prime),
    )

    state_grid = centered_grid(state_halfwidth, state_points, dim=n)
    # grid safety: translations must stay clear of the periodic wrap of the
    # state box, modulations clear of the Nyquist band
    nyquist = np.pi / state_grid.spacings[0]
    rep = wh_rep(kc, n, safe_momentum=0.8 * nyquist, safe_shift=state_halfwidth)
    proj = projective_from_section(rep, section)
    proj_prime = projective_from_section(rep, section_prime)
    x_grid = haar_grid(
        x_group,
        [(-x_halfwidth, x_halfwidth)] * (2 * n),
        [x_resolution] * (2 * n),
    )

    states = {}
    if n == 1:
        states["gauss"] = hermite_state(state_grid, 0)
        states["hermite1"] = hermite_state(state_grid, 1)
        states["hermite2"] = hermite_state(state_grid, 2)
        states["hermite3"] = hermite_state(state_grid, 3)
        mix = hermite_state(state_grid, 0).samples + hermite_state(state_grid, 1).samples
        states["mix"] = DiscretizedState(mix / np.sqrt(2.0), state_grid)

    return GaborSetup(
        n=n,
        k_check=kc,
        group=group,
        x_group=x_group,
        k_group=k_group,
        subgroup=subgroup,
        section=section,
        section_prime=section_prime,
        rep=rep,
        proj=proj,
        proj_prime=proj_prime,
        state_grid=state_grid,
        x_grid=x_grid,
        states=states,
    )


# ---------------------------------------------------------------------------
# Affine / wavelet
# ---------------------------------------------------------------------------


@dataclass
class AffineSetup:
    n: int
    group: GroupDescriptor
    rep: UnitaryRepSpec
    state_grid: StateGrid
    x_grid: QuadratureGrid
    states: dict = field(default_factory=dict)


def affine_setup(
    state_halfwidth: float = 16.0,
    state_points: int = 512,
    b_halfwidth: float = 14.0,
    b_resolution: int = 160,
    a_range: tuple[float, float] = (1.0 / 16.0, 8.0),
    a_resolution: int = 160,
) -> AffineSetup:
    group = make_affine(1)
    rep = affine_rep(1, shift_max=state_halfwidth)
    state_grid = centered_grid(state_halfwidth, state_points, dim=1)
    # geometric ladder on the scale axis: uniform resolution per octave
    x_grid = haar_grid(
        group,
        [(-b_halfwidth, b_halfwidth), a_range],
        [b_resolution, a_resolution],
        log_axes=(1,),
    )
    rng = np.random.default_rng(2024)
    states = {
        "morlet": morlet_state(state_grid, omega0=6.0),
        "gauss": gaussian_state(state_grid),
        "dog2": dog_state(state_grid, 2),
        "dog4": dog_state(state_grid, 4),
        "gauss_mod": gaussian_state(state_grid, center=0.5, momentum=5.0),
        "gauss_mod2": gaussian_state(state_grid, center=-1.0, momentum=4.0, width=1.3),
        "gauss_mod3": gaussian_state(state_grid, center=1.5, momentum=-5.5, width=0.8),
        # band-pass random signal: reconstructible from scales inside the
        # default a-box (spectrum in 1.5 <= |w| <= 7.5)
        "signal": random_bandlimited_state(
            state_grid, rng, band_fraction=0.15, envelope_width=3.0, low_cut=1.5
        ),
    }
    return AffineSetup(
        n=1, group=group, rep=rep, state_grid=state_grid, x_grid=x_grid, states=states
    )


def affine_nested_grids(
    setup: AffineSetup,
    levels: int = 5,
    a_top: float = 6.0,
    a_floor_start: float = 0.5,
    b_halfwidth: float = 14.0,
    b_resolution: int = 128,
    base_a_resolution: int = 96,
    slab_a_resolution: int = 24,
) -> list[QuadratureGrid]:
    """Disjoint scale slabs whose unions are the nested boxes
    [a_floor / 2^j, a_top]: a base grid over [a_floor, a_top] followed by one
    octave slab per extra level, all with geometric scale ladders.  Feed to
    :func:`transforms.admissibility`, which accumulates their energies into
    nested partial integrals."""
    grids = [
        haar_grid(
            setup.group,
            [(-b_halfwidth, b_halfwidth), (a_floor_start, a_top)],
            [b_resolution, base_a_resolution],
            log_axes=(1,),
        )
    ]
    for j in range(1, levels):
        a_lo = a_floor_start / 2.0 ** j
        grids.append(
            haar_grid(
                setup.group,
                [(-b_halfwidth, b_halfwidth), (a_lo, 2.0 * a_lo)],
                [b_resolution, slab_a_resolution],
                log_axes=(1,),
            )
        )
    return grids


# ---------------------------------------------------------------------------
# Exotic group
# ---------------------------------------------------------------------------


@dataclass
class ExoticSetup:
    n: int
    k_vec: np.ndarray
    group: GroupDescriptor
    x_group: GroupDescriptor
    k_group: GroupDescriptor
    subgroup: RelCentralSubgroup
    section: Section
    section_prime: Section
    rep: UnitaryRepSpec
    proj: ProjectiveRepSpec
    state_grid: StateGrid
    x_grid: QuadratureGrid
    states: dict = field(default_factory=dict)


def exotic_setup(
    n: int = 1,
    k_vec=0.0,
    b_length: float = 8.0,
    b_points: int = 64,
    p_halfwidth: float = 8.0,
    p_points: int = 64,
    x_box: tuple = ((-7.0, 7.0), (-6.0, 6.0), (-9.0, 9.0), (0.125, 8.0)),
    x_resolution: tuple = (40, 32, 48, 48),
) -> ExoticSetup:
    if n != 1:
        raise ValueError("the bundled exotic configuration is implemented for n = 1")
    group = make_exotic(n)
    x_group = make_exotic_quotient(n)
    k_group = make_exotic_k_group(n)
    kv = np.broadcast_to(np.atleast_1d(np.asarray(k_vec, dtype=float)), (n,))

    # chart layout (t, s, b, p, q, r, a); X chart (p, q, b, a); K chart (t, s, r)
    def k_embed(k):
        k = np.asarray(k, dtype=float)
        out = np.zeros(k.shape[:-1] + (group.dim,))
        out[..., 0] = k[..., 0]
        out[..., 1] = k[..., 1]
        out[..., 5] = k[..., 2]
        out[..., 6] = 1.0
        return out

    def k_project(g):
        g = np.asarray(g, dtype=float)
        return np.stack([g[..., 0], g[..., 1], g[..., 5]], axis=-1)

    def project(g):
        g = np.asarray(g, dtype=float)
        return np.stack([g[..., 3], g[..., 4], g[..., 2], g[..., 6]], axis=-1)

    def chi_phase(k):
        k = np.asarray(k, dtype=float)
        return k[..., 0] + kv[0] * k[..., 2]

    def smap(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (group.dim,))
        out[..., 2] = x[..., 2]
        out[..., 3] = x[..., 0]
        out[..., 4] = x[..., 1]
        out[..., 6] = x[..., 3]
        return out

    def smap_prime(x):
        x = np.asarray(x, dtype=float)
        out = smap(x)
        out[..., 0] = 0.5 * x[..., 0] * x[..., 1]
        return out

    common = dict(
        x_group=x_group,
        g_group=group,
        projection=project,
        subgroup_embed=k_embed,
        subgroup_project=k_project,
        chi_phase=chi_phase,
    )
    section = Section(
        label="s0", map=smap, is_coordinate_section=True,
        coordinate_axes=(3, 4, 2, 6), **common
    )
    section_prime = Section(label="s_tw", map=smap_prime, **common)

    subgroup = RelCentralSubgroup(
        ambient=group,
        k_group=k_group,
        quotient=x_group,
        K_embed=k_embed,
        K_project=k_project,
        project=project,
        chi_phase=chi_phase,
        sections=(section, section_prime),
    )

    rep = exotic_rep(kv, n, shift_max=p_halfwidth)
    proj = projective_from_section(rep, section)

    state_grid = product_grid(
        halfline_grid(b_length, b_points), centered_grid(p_halfwidth, p_points, dim=1)
    )
    x_grid = haar_grid(
        x_group, list(x_box), list(x_resolution), log_axes=(2 * n + 1,)
    )

    def gauss(c, w):
        return lambda x: np.exp(-((x - c) ** 2) / (2.0 * w ** 2))

    def log_gauss(c, w):
        # profiles on the bcheck > 0 half-line: Gaussian in ln(bcheck), so
        # dilation overlaps decay fast on the geometric scale ladder
        return lambda x: np.exp(-((np.log(x) - np.log(c)) ** 2) / (2.0 * w ** 2))

    states = {
        "psi": product_state(state_grid, log_gauss(2.0, 0.30), gauss(0.0, 1.0)),
        "phi": product_state(state_grid, log_gauss(2.5, 0.35), gauss(0.5, 1.2)),
        "psi2": product_state(state_grid, log_gauss(1.8, 0.28), gauss(-0.4, 0.9)),
        "phi2": product_state(state_grid, log_gauss(2.2, 0.32), gauss(0.2, 1.1)),
    }

    return ExoticSetup(
        n=n,
        k_vec=kv,
        group=group,
        x_group=x_group,
        k_group=k_group,
        subgroup=subgroup,
        section=section,
        section_prime=section_prime,
        rep=rep,
        proj=proj,
        state_grid=state_grid,
        x_grid=x_grid,
        states=states,
    )
