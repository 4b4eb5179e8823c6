"""Shared builders for the test suite."""

from __future__ import annotations

import numpy as np

from zqwalk import LaurentPoly, ModelWalkSpec, StateVector, lambda_coeffs_from_samples

SAMPLE_GRID = 4096


def trig_phase_samples(
    rng: np.random.Generator,
    winding: int = 0,
    harmonics: int = 3,
    amplitude: float = 0.6,
    grid: int = SAMPLE_GRID,
) -> np.ndarray:
    """Unimodular circle samples exp(i(w*theta + random trig polynomial))."""
    theta = 2.0 * np.pi * np.arange(grid) / grid
    h = np.zeros(grid)
    for f in range(1, harmonics + 1):
        a, b = rng.uniform(-amplitude, amplitude, size=2) / f
        h += a * np.cos(f * theta) + b * np.sin(f * theta)
    return np.exp(1j * (winding * theta + h))


def random_unimodular_spec(
    rng: np.random.Generator, d: int, winding: int = 0, harmonics: int = 3
) -> ModelWalkSpec:
    """A d-channel model spec whose eigenvalue function is unimodular to ~1e-11.

    The coefficients come from a random trigonometric phase, truncated at the
    standard 1e-12 threshold, so they are finitely supported and the built
    walk passes the unitarity check.
    """
    samples = trig_phase_samples(rng, winding=winding, harmonics=harmonics)
    return ModelWalkSpec(d, lambda_coeffs_from_samples(samples))


def is_rotation_symmetric(coeffs: LaurentPoly, d: int, tol: float = 0.05) -> bool:
    """Whether lambda repeats under some rotation by a d-th root of unity."""
    theta = 2.0 * np.pi * np.arange(512) / 512
    z = np.exp(1j * theta)
    base = coeffs(z)
    for c in range(1, d):
        rotated = coeffs(np.exp(2j * np.pi * c / d) * z)
        if float(np.max(np.abs(base - rotated))) < tol:
            return True
    return False


def random_local_state(
    rng: np.random.Generator, n: int, radius: int = 3
) -> StateVector:
    """Normalized random vector supported on |site| <= radius."""
    amps = {}
    for s in range(-radius, radius + 1):
        for k in range(1, n + 1):
            amps[(s, k)] = complex(rng.normal(), rng.normal())
    norm = np.sqrt(sum(abs(a) ** 2 for a in amps.values()))
    return StateVector({key: a / norm for key, a in amps.items()}, n)


def random_constant_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish random unitary from the QR of a complex Gaussian matrix."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
