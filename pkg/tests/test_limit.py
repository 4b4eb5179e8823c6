import numpy as np
import pytest

from zqwalk import (
    DomainError,
    StateVector,
    SymbolMatrix,
    build_model_walk,
    coined_walk,
    compare_empirical,
    compose,
    evolve,
    group_velocities,
    grover_walk_3,
    interleave_channels,
    limit_measure,
    limit_moments,
    position_distribution,
    refine_system,
    track_bands,
)
from support import random_constant_unitary, random_unimodular_spec

R = 2**-0.5


def refined(walk, grid=1024):
    return refine_system(track_bands(walk, grid))


# -- group velocities ----------------------------------------------------------


def test_velocity_of_pure_shift():
    system = refined(SymbolMatrix.shift(1), 64)
    profile = group_velocities(system)
    assert np.max(np.abs(profile.base_scale(0) - 1.0)) < 1e-12


def test_velocity_of_constant_band():
    system = refined(SymbolMatrix.identity(2), 64)
    profile = group_velocities(system)
    assert np.max(np.abs(profile.base_scale(0))) < 1e-12


def test_velocity_coined_closed_form(tracked_corpus):
    system = tracked_corpus["coined"]
    theta = 2.0 * np.pi * np.arange(system.base_grid) / system.base_grid
    want = R * np.sin(theta) / np.sqrt(1.0 - R * R * np.cos(theta) ** 2)
    profile = group_velocities(system)
    errs = [
        min(
            float(np.max(np.abs(profile.base_scale(j) - want))),
            float(np.max(np.abs(profile.base_scale(j) + want))),
        )
        for j in range(len(system.bands))
    ]
    assert max(errs) < 1e-9


def test_velocity_matches_central_differences_coined():
    # second-order stencil truncation scales as (2*pi/M)^2, so the 1e-6
    # cross-check tolerance needs the finer grid
    system = refined(coined_walk(), 4096)
    profile = group_velocities(system)
    for j, band in enumerate(system.bands):
        count = len(band.samples)
        step = 2.0 * np.pi / count
        arg = np.unwrap(np.angle(band.samples))
        periodic = arg - band.winding * 2.0 * np.pi * np.arange(count) / count
        central = (np.roll(periodic, -1) - np.roll(periodic, 1)) / (2.0 * step)
        assert np.max(np.abs(profile.h_per_band[j] - central - band.winding)) < 1e-6


def test_velocity_matches_finite_differences(tracked_corpus):
    # fourth-order stencil on the periodic part of the argument
    system = tracked_corpus["grover3"]
    profile = group_velocities(system)
    for j, band in enumerate(system.bands):
        count = len(band.samples)
        step = 2.0 * np.pi / count
        arg = np.unwrap(np.angle(band.samples))
        periodic = arg - band.winding * 2.0 * np.pi * np.arange(count) / count
        stencil = (
            -np.roll(periodic, -2)
            + 8 * np.roll(periodic, -1)
            - 8 * np.roll(periodic, 1)
            + np.roll(periodic, 2)
        ) / (12.0 * step)
        assert np.max(np.abs(profile.h_per_band[j] - stencil - band.winding)) < 1e-8


# -- limit measures --------------------------------------------------------------


def test_shift_gives_unit_atom():
    walk = SymbolMatrix.shift(1)
    mu = limit_measure(walk, StateVector.delta(0, 1, 1), refined(walk, 64))
    assert mu.atoms == ((1.0, 1.0),)
    assert mu.total_mass == pytest.approx(1.0, abs=1e-12)


def test_coined_measure_support_and_mass(tracked_corpus):
    walk = coined_walk()
    mu = limit_measure(walk, StateVector.delta(0, 1, 2), tracked_corpus["coined"])
    assert mu.atoms == ()
    assert mu.total_mass == pytest.approx(1.0, abs=1e-6)
    assert mu.max_support() <= R + 1e-9
    assert mu.mass_outside(R) < 1e-9


def test_grover_localization_atom(tracked_corpus):
    walk = grover_walk_3()
    xi = StateVector.from_channel_vector(0, [0.0, 1.0, 0.0])
    mu = limit_measure(walk, xi, tracked_corpus["grover3"])
    assert len(mu.atoms) == 1
    location, mass = mu.atoms[0]
    assert abs(location) < 1e-12
    # closed form: average of (1+cos)/(5+cos) over the circle is 1 - 2/sqrt(6)
    assert mass == pytest.approx(1.0 - 2.0 / np.sqrt(6.0), abs=1e-12)


def test_measure_requires_refined_system():
    walk = coined_walk()
    system = refined(walk, 256)
    unrefined = type(system)(system.bands, system.n, system.base_grid, False)
    with pytest.raises(DomainError):
        limit_measure(walk, StateVector.delta(0, 1, 2), unrefined)


def test_measure_rejects_non_unit_vector(tracked_corpus):
    heavy = StateVector({(0, 1): 2.0}, 2)
    with pytest.raises(DomainError):
        limit_measure(coined_walk(), heavy, tracked_corpus["coined"])


# -- moments -----------------------------------------------------------------------


def test_atom_moments():
    from zqwalk.limit import LimitMeasure

    mu = LimitMeasure(((1.0, 1.0),), (), 1.0)
    assert limit_moments(mu, 3) == 1.0
    assert limit_moments(mu, 0) == 1.0


def test_symmetric_initial_state_centers_measure(tracked_corpus):
    xi = StateVector({(0, 1): R, (0, 2): R * 1j}, 2)
    mu = limit_measure(coined_walk(), xi, tracked_corpus["coined"])
    assert abs(limit_moments(mu, 1)) < 1e-6


def test_compare_shift_walk_is_exact():
    walk = SymbolMatrix.shift(1)
    system = refined(walk, 64)
    rows = compare_empirical(walk, StateVector.delta(0, 1, 1), system, [5, 50], 2)
    assert all(row.deviation < 1e-12 for row in rows)


def test_compare_coined_decreasing(tracked_corpus):
    rows = compare_empirical(
        coined_walk(),
        StateVector.delta(0, 1, 2),
        tracked_corpus["coined"],
        [50, 200],
        2,
    )
    by_t = {(row.t, row.m): row.deviation for row in rows}
    assert by_t[(200, 1)] < by_t[(50, 1)]


# -- invariances ---------------------------------------------------------------------


def test_conjugation_leaves_moments(rng, tracked_corpus):
    walk = grover_walk_3()
    xi = StateVector.from_channel_vector(0, [0.0, 1.0, 0.0])
    mu = limit_measure(walk, xi, tracked_corpus["grover3"])
    v = random_constant_unitary(rng, 3)
    conj_walk = compose(
        SymbolMatrix.from_constant(v),
        compose(walk, SymbolMatrix.from_constant(v.conj().T)),
    )
    conj_xi = StateVector.from_channel_vector(0, v @ np.array([0.0, 1.0, 0.0]))
    conj_mu = limit_measure(conj_walk, conj_xi, refined(conj_walk))
    for m in range(1, 5):
        assert limit_moments(mu, m) == pytest.approx(
            limit_moments(conj_mu, m), abs=1e-6
        )


def test_model_walk_pushforward_consistency(rng):
    spec = random_unimodular_spec(rng, 2, winding=1)
    walk_d = build_model_walk(spec)
    walk_1 = build_model_walk(type(spec)(1, spec.lambda_coeffs))
    xi = StateVector({(0, 1): R, (0, 2): R}, 2)
    mu_d = limit_measure(walk_d, xi, refined(walk_d, 512))
    mu_1 = limit_measure(walk_1, interleave_channels(xi), refined(walk_1, 1024))
    for m in range(1, 5):
        scaled = limit_moments(mu_1, m) / 2**m
        assert limit_moments(mu_d, m) == pytest.approx(scaled, abs=1e-6)


def test_empirical_support_concentrates(tracked_corpus):
    walk = coined_walk()
    xi = StateVector.delta(0, 1, 2)
    dist = position_distribution(evolve(walk, xi, 400), time=400)
    assert dist.mass_outside((R + 0.05) * 400) < 0.02


def test_cdf_distance_diagnostic(tracked_corpus):
    from zqwalk import cdf_distance

    walk = coined_walk()
    xi = StateVector.delta(0, 1, 2)
    mu = limit_measure(walk, xi, tracked_corpus["coined"])
    dists = {}
    for t in (50, 400):
        dist = position_distribution(evolve(walk, xi, t), time=t)
        dists[t] = cdf_distance(mu, dist, t)
    assert 0 < dists[400] < dists[50] < 0.5


def test_group_velocity_rejects_kinked_argument():
    from zqwalk import Band, EigenSystem, ResolutionError

    count = 256
    theta = 2.0 * np.pi * np.arange(count) / count
    kinked = np.exp(1j * np.abs(theta - np.pi))
    system = EigenSystem((Band(1, kinked, 0, 1),), 1, count, True)
    with pytest.raises(ResolutionError, match="under-resolved"):
        group_velocities(system)


def test_coined_density_matches_arcsine_type_law(tracked_corpus):
    # independent closed form: the rescaled coined walk started at delta_0 x e_1
    # converges to density (1 - x) / (pi (1 - x^2) sqrt(1 - 2 x^2)) on |x| < r
    from scipy.integrate import quad

    mu = limit_measure(coined_walk(), StateVector.delta(0, 1, 2), tracked_corpus["coined"])
    xs = np.array([x for x, _ in mu.density_samples])
    ms = np.array([m for _, m in mu.density_samples])
    width = xs[1] - xs[0]

    def density(x):
        return (1.0 - x) / (np.pi * (1.0 - x * x) * np.sqrt(1.0 - 2.0 * x * x))

    cumulative = np.cumsum(ms)
    interior = np.abs(xs) < R - 0.02
    for x, got in zip(xs[interior], cumulative[interior]):
        want, _err = quad(density, -R + 1e-12, x + width / 2, points=[0], limit=200)
        assert abs(got - want) < 1e-3, x


def test_compare_grover_at_long_horizon(tracked_corpus):
    rows = compare_empirical(
        grover_walk_3(),
        StateVector.from_channel_vector(0, [0.0, 1.0, 0.0]),
        tracked_corpus["grover3"],
        [1600],
        2,
    )
    deviation = next(r.deviation for r in rows if r.m == 2)
    assert deviation < 0.02
