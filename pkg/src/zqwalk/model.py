"""Canonical d-channel walks built from a unimodular eigenvalue function.

Given an analytic map lambda: T -> T with Fourier coefficients c(s), the
d-channel walk places c(k - l + d*s) at shift s of entry (k, l).  Interleaving
the d channels into a single lattice (the rearrangement unitary) turns it into
plain convolution by c, which is what all the algebraic identities below come
down to.  Winding-zero eigenvalue functions additionally admit a real phase
generator h with exp(i*h) = lambda, giving a continuous-time interpolation of
the walk in Fourier space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circle import winding_of_samples
from .errors import DomainError
from .laurent import LaurentPoly
from .simulate import StateVector, apply_walk
from .symbol import SymbolMatrix

UNIMODULAR_TOL = 1e-9
COEFF_TRUNCATION = 1e-12


@dataclass(frozen=True)
class ModelWalkSpec:
    """Channel count d and the Fourier coefficients of the eigenvalue function."""

    d: int
    lambda_coeffs: LaurentPoly

    def __post_init__(self):
        if self.d < 1:
            raise DomainError("channel count d must be a positive integer")

    def lambda_samples(self, grid_size: int = 256) -> np.ndarray:
        return self.lambda_coeffs.circle_samples(grid_size)

    def max_modulus_deviation(self, grid_size: int = 256) -> float:
        return float(np.max(np.abs(np.abs(self.lambda_samples(grid_size)) - 1.0)))


def lambda_coeffs_from_samples(
    samples: np.ndarray, threshold: float = COEFF_TRUNCATION
) -> LaurentPoly:
    """Fourier coefficients of circle samples, truncated below `threshold`."""
    samples = np.asarray(samples, dtype=complex)
    m = len(samples)
    c = np.fft.fft(samples) / m
    coeffs = {}
    for f in range(m):
        s = f if f <= m // 2 else f - m
        if abs(c[f]) >= threshold:
            coeffs[s] = complex(c[f])
    return LaurentPoly(coeffs)


def build_model_walk(
    spec: ModelWalkSpec, unimodular_tol: float = UNIMODULAR_TOL
) -> SymbolMatrix:
    """Assemble the d x d symbol with coefficient c(k - l + d*s) at shift s."""
    dev = spec.max_modulus_deviation()
    if dev > unimodular_tol:
        raise DomainError(
            f"lambda not unimodular: max modulus deviation {dev:.3e} "
            f"exceeds {unimodular_tol:.1e}"
        )
    d = spec.d
    c = spec.lambda_coeffs
    rows = []
    for k in range(1, d + 1):
        row = []
        for l in range(1, d + 1):
            entry: dict[int, complex] = {}
            for sigma, coeff in c.coeffs.items():
                step = sigma - k + l
                if step % d == 0:
                    entry[step // d] = coeff
            row.append(LaurentPoly(entry))
        rows.append(tuple(row))
    return SymbolMatrix(d, tuple(rows))


# ---------------------------------------------------------------------------
# rearrangement (channel interleaving)
# ---------------------------------------------------------------------------


def interleave_channels(xi: StateVector) -> StateVector:
    """Map the d-channel vector onto one lattice: (site s, channel k) -> site k + d*s."""
    d = xi.n
    amps = {(k + d * s, 1): a for (s, k), a in xi.amplitudes.items()}
    return StateVector(amps, 1)


def deinterleave_channels(xi: StateVector, d: int) -> StateVector:
    """Inverse of interleave_channels for a 1-channel vector."""
    if xi.n != 1:
        raise DomainError("deinterleave expects a 1-channel vector")
    amps = {}
    for (sigma, _k), a in xi.amplitudes.items():
        k = (sigma - 1) % d + 1
        s = (sigma - k) // d
        amps[(s, k)] = a
    return StateVector(amps, d)


def rearrangement_check(
    spec: ModelWalkSpec, test_vectors: list[StateVector]
) -> float:
    """Max l2 deviation between the d-channel walk and its interleaved 1-channel form."""
    walk_d = build_model_walk(spec)
    walk_1 = build_model_walk(ModelWalkSpec(1, spec.lambda_coeffs))
    worst = 0.0
    for xi in test_vectors:
        direct = apply_walk(walk_d, xi)
        rearranged = deinterleave_channels(
            apply_walk(walk_1, interleave_channels(xi)), spec.d
        )
        worst = max(worst, direct.distance(rearranged))
    return worst


# ---------------------------------------------------------------------------
# shift factorization and the continuous-time generator
# ---------------------------------------------------------------------------


def shift_factorization(spec: ModelWalkSpec) -> tuple[int, ModelWalkSpec]:
    """Split a 1-channel walk into a pure shift and a winding-zero remainder.

    Returns (w, residual_spec) with residual eigenvalue function
    z^(-w) * lambda(z); composing the shift S_w with the residual walk
    reproduces the original coefficients exactly.
    """
    if spec.d != 1:
        raise DomainError("shift factorization expects d = 1; interleave first")
    grid = max(256, 8 * (spec.lambda_coeffs.radius + 1))
    samples = spec.lambda_samples(grid)
    w, residual = winding_of_samples(samples)
    if residual >= 0.01:
        raise DomainError(f"winding not integral (residual {residual:.3f} turns)")
    shifted = LaurentPoly({s - w: c for s, c in spec.lambda_coeffs.coeffs.items()})
    return w, ModelWalkSpec(1, shifted)


@dataclass(frozen=True)
class CtGenerator:
    """Real phase h on a uniform circle grid with exp(i*h) = lambda."""

    h_samples: np.ndarray
    mean_value: float

    @property
    def thetas(self) -> np.ndarray:
        m = len(self.h_samples)
        return 2.0 * np.pi * np.arange(m) / m

    def symbol_samples(self, t: float) -> np.ndarray:
        """The interpolated one-parameter family exp(i*t*h) at the grid points."""
        return np.exp(1j * t * np.asarray(self.h_samples))


def ct_generator(lambda_samples: np.ndarray) -> CtGenerator:
    """Continuous argument branch of unit-modulus samples with zero winding."""
    samples = np.asarray(lambda_samples, dtype=complex)
    w, _residual = winding_of_samples(samples)
    if w != 0:
        raise DomainError(f"nonzero winding ({w}); no single-valued generator exists")
    closure = abs(
        float(np.sum(np.angle(np.roll(samples, -1) / samples)))
    )
    if closure > 0.01 * 2.0 * np.pi:
        raise DomainError("unwrapped argument does not close; winding unresolved")
    h = np.unwrap(np.angle(samples))
    return CtGenerator(h, float(np.mean(h)))
