"""Eigenvalue-branch tracking around the circle and everything built on it.

The spectrum of a unitary symbol over the circle organizes into closed
analytic loops: following each eigenvalue continuously around the base circle
permutes the eigenvalue labels, and each cycle of length d of that permutation
is one branch living on a d-fold covering circle.  This module recovers those
cycles numerically (track_bands), contracts rotation-symmetric branches to
their minimal period (refine_system), and derives the invariants that hang off
the branch structure: winding numbers, continuous-time realizability,
conjugacy of two walks, and spectral-projection weights of an initial vector.

Branch matching note: consecutive eigenvalue lists are matched by a
minimal-total-distance assignment on linearly extrapolated values rather than
on raw values.  Raw value matching cannot follow a branch through a
transversal collision (two branches meeting at the same point of the circle
with different derivatives, e.g. a double eigenvalue at an isolated z), while
the extrapolated prediction stays on the analytic branch.  Correctness is
still certified the blunt way: the tracked structure must be reproduced when
the grid is doubled, otherwise the grid keeps doubling until it is.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .circle import cluster_indices, rotation_distance, winding_of_samples
from .errors import DomainError, ResolutionError, UnitarityError
from .symbol import SymbolMatrix, verify_unitary_symbol

DEFAULT_BASE_GRID = 1024
DEFAULT_TOL = 1e-6
DEGENERACY_TOL = 1e-8
MAX_GRID = 1 << 16
WINDING_RESIDUAL = 0.01


@dataclass(frozen=True, eq=False)
class Band:
    """One tracked eigenvalue branch on its covering circle.

    samples[m] is the branch value at covering point exp(2*pi*i*m/(d*M)); the
    d covering points sitting over base point k are indices k + i*M.
    """

    d: int
    samples: np.ndarray
    winding: int
    multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(
            self, "samples", np.asarray(self.samples, dtype=complex)
        )
        if len(self.samples) % self.d != 0:
            raise DomainError("sample count must be a multiple of the covering degree")

    @property
    def base_grid(self) -> int:
        return len(self.samples) // self.d

    def values_over(self, k: int) -> np.ndarray:
        """The d branch values sitting over base grid point k."""
        m = self.base_grid
        return self.samples[[k + i * m for i in range(self.d)]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Band):
            return NotImplemented
        return (
            self.d == other.d
            and self.winding == other.winding
            and self.multiplicity == other.multiplicity
            and np.array_equal(self.samples, other.samples)
        )


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """A complete set of tracked bands for one walk symbol."""

    bands: tuple[Band, ...]
    n: int
    base_grid: int
    indecomposable: bool

    def __post_init__(self):
        total = sum(b.d * b.multiplicity for b in self.bands)
        if total != self.n:
            raise DomainError(
                f"band degrees and multiplicities sum to {total}, expected {self.n}"
            )
        for b in self.bands:
            if b.base_grid != self.base_grid:
                raise DomainError("all bands must share the system base grid")

    def __eq__(self, other) -> bool:
        if not isinstance(other, EigenSystem):
            return NotImplemented
        return (
            self.n == other.n
            and self.base_grid == other.base_grid
            and self.indecomposable == other.indecomposable
            and len(self.bands) == len(other.bands)
            and all(a == b for a, b in zip(self.bands, other.bands))
        )

    @property
    def summand_count(self) -> int:
        """Number of irreducible summands, counted with multiplicity."""
        return sum(b.multiplicity for b in self.bands)


# ---------------------------------------------------------------------------
# tracking
# ---------------------------------------------------------------------------


def _min_gap(values: np.ndarray) -> float:
    if len(values) < 2:
        return np.inf
    diff = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(diff, np.inf)
    return float(diff.min())


def _track_cycles(vals: np.ndarray) -> list[tuple[int, np.ndarray]]:
    """Track branches through the (M, n) eigenvalue lists; return (d, samples) cycles.

    The pass starts at the grid point where the spectrum is best separated, so
    the single history-free first step never straddles a collision that
    extrapolation would have been needed for.
    """
    grid, n = vals.shape
    kstar = int(np.argmax([_min_gap(vals[k]) for k in range(grid)]))
    start = vals[kstar]
    order0 = np.lexsort((start.imag, start.real, np.angle(start)))
    path_vals = np.zeros((n, grid + 1), dtype=complex)
    path_vals[:, 0] = start[order0]
    cur = path_vals[:, 0].copy()
    prev = None
    col = order0.copy()
    for j in range(1, grid + 1):
        target = vals[(kstar + j) % grid]
        predicted = cur if prev is None else 2.0 * cur - prev
        cost = np.abs(predicted[:, None] - target[None, :])
        _rows, col = linear_sum_assignment(cost)
        prev = cur
        cur = target[col]
        path_vals[:, j] = cur
    inv = np.empty(n, dtype=int)
    inv[order0] = np.arange(n)
    pi = inv[col]  # branch b continues as branch pi[b] after one loop

    cycles = []
    seen = np.zeros(n, dtype=bool)
    for b0 in range(n):
        if seen[b0]:
            continue
        cycle = [b0]
        seen[b0] = True
        b = int(pi[b0])
        while b != b0:
            cycle.append(b)
            seen[b] = True
            b = int(pi[b])
        d = len(cycle)
        seq = np.concatenate([path_vals[b, :grid] for b in cycle])
        samples = np.roll(seq, kstar)  # covering index 0 <-> base point z = 1
        cycles.append((d, _canonical_rotation(samples, grid)))
    return cycles


def _canonical_rotation(samples: np.ndarray, base_grid: int) -> np.ndarray:
    """Fix the rotation gauge: start the loop at the smallest initial argument."""
    d = len(samples) // base_grid
    if d == 1:
        return samples
    candidates = [np.roll(samples, -i * base_grid) for i in range(d)]
    keys = [
        (round(float(np.angle(c[0])), 9), round(float(c[0].real), 12)) for c in candidates
    ]
    return candidates[min(range(d), key=keys.__getitem__)]


def _merge_duplicates(
    raw: list[tuple[int, np.ndarray, int]], base_grid: int, tol: float
) -> list[tuple[int, np.ndarray, int]]:
    """Merge branches that coincide (up to rotation) into multiplicity counts."""
    out: list[tuple[int, np.ndarray, int]] = []
    for d, samples, mult in raw:
        for idx, (d0, s0, m0) in enumerate(out):
            if d0 == d and rotation_distance(s0, samples, base_grid) < tol:
                out[idx] = (d0, s0, m0 + mult)
                break
        else:
            out.append((d, samples, mult))
    return out


def _build_system(
    walk: SymbolMatrix, grid: int, degeneracy_tol: float, tol: float = DEFAULT_TOL
) -> EigenSystem:
    vals = np.linalg.eigvals(walk.grid_eval(grid))
    cycles = [(d, s, 1) for d, s in _track_cycles(vals)]
    merged = _merge_duplicates(cycles, grid, degeneracy_tol)
    bands = []
    for d, samples, mult in merged:
        w, _res = winding_of_samples(samples)
        bands.append(Band(d, samples, w, mult))
    bands.sort(key=lambda b: (b.d, -b.multiplicity, float(np.angle(b.samples[0]))))
    flag = all(_minimal_rotation_period(b, grid, tol) is None for b in bands)
    return EigenSystem(tuple(bands), walk.n, grid, indecomposable=flag)


def _systems_agree(coarse: EigenSystem, fine: EigenSystem, tol: float) -> bool:
    """Does the fine system reproduce the coarse one on the shared grid points?"""
    if sorted((b.d, b.multiplicity) for b in coarse.bands) != sorted(
        (b.d, b.multiplicity) for b in fine.bands
    ):
        return False
    remaining = list(fine.bands)
    for band in coarse.bands:
        hit = None
        for idx, other in enumerate(remaining):
            if other.d != band.d or other.multiplicity != band.multiplicity:
                continue
            if (
                rotation_distance(band.samples, other.samples[::2], coarse.base_grid)
                < tol
            ):
                hit = idx
                break
        if hit is None:
            return False
        remaining.pop(hit)
    return True


def track_bands(
    walk: SymbolMatrix,
    base_grid: int = DEFAULT_BASE_GRID,
    tol: float = DEFAULT_TOL,
    degeneracy_tol: float = DEGENERACY_TOL,
) -> EigenSystem:
    """Track the eigenvalue branches of a unitary symbol around the circle.

    Eigenvalues are computed at `base_grid` uniform points, matched between
    adjacent points (see module docstring), and composed into a permutation
    whose cycles give covering degrees.  Branches coinciding everywhere merge
    into one band with a multiplicity.  The result must be reproduced at twice
    the resolution before it is returned; the grid doubles until that holds or
    MAX_GRID is exceeded.

    Parameters
    ----------
    walk : SymbolMatrix
        Must pass the unitarity check.
    base_grid : int
        Power of two, at least 64.  The returned system lives on the first
        grid at or above this size whose structure is stable under doubling.
    tol : float
        Sample agreement tolerance for the doubling certificate.
    degeneracy_tol : float
        Branches closer than this at every point merge into one band.
    """
    if base_grid < 64 or base_grid & (base_grid - 1):
        raise DomainError("base_grid must be a power of two >= 64")
    report = verify_unitary_symbol(walk, 256, 1e-8)
    if not report.passed:
        raise UnitarityError(
            f"symbol not unitary: max deviation {report.max_deviation:.3e}"
        )
    grid = base_grid
    system = _build_system(walk, grid, degeneracy_tol, tol)
    while True:
        if 2 * grid > MAX_GRID:
            raise ResolutionError(
                f"grid resolution exceeded ({MAX_GRID}) without stable tracking"
            )
        finer = _build_system(walk, 2 * grid, degeneracy_tol, tol)
        if _systems_agree(system, finer, tol):
            return system
        grid *= 2
        system = finer


# ---------------------------------------------------------------------------
# winding numbers and refinement
# ---------------------------------------------------------------------------


def winding_numbers(system: EigenSystem) -> list[int]:
    """Winding of each band, recomputed from samples and validated.

    A closed sample loop always sums its principal argument increments to an
    exact multiple of 2*pi, so the rounding residual alone only sees
    floating-point noise; a loop stepping by close to a half turn is the real
    aliasing signal, and both trip the same error.
    """
    out = []
    for band in system.bands:
        w, residual = winding_of_samples(band.samples)
        steps = np.abs(np.angle(np.roll(band.samples, -1) / band.samples))
        if residual >= WINDING_RESIDUAL or float(steps.max()) > np.pi / 2:
            raise ResolutionError(
                "winding not integral: argument increments are under-resolved "
                f"(residual {residual:.3f} turns, max step "
                f"{float(steps.max()) / (2 * np.pi):.3f} turns)"
            )
        out.append(w)
    return out


def _minimal_rotation_period(band: Band, base_grid: int, tol: float) -> int | None:
    """Smallest divisor c < d with the rotation symmetry, or None."""
    d = band.d
    for c in range(1, d):
        if d % c:
            continue
        shifted = np.roll(band.samples, c * base_grid)
        if float(np.max(np.abs(band.samples - shifted))) < tol:
            return c
    return None


def refine_system(system: EigenSystem, tol: float = DEFAULT_TOL) -> EigenSystem:
    """Contract rotation-symmetric bands until the system is indecomposable.

    A band of degree d whose function repeats under rotation of the covering
    argument by 2*pi*c/d (minimal such divisor c) is the (d/c)-fold repeat of
    a degree-c band; it is replaced by that band with multiplied multiplicity.
    The operation is idempotent.
    """
    m = system.base_grid
    bands = [(b.d, b.samples, b.multiplicity) for b in system.bands]
    changed = True
    while changed:
        changed = False
        out = []
        for d, samples, mult in bands:
            probe = Band(d, samples, 0, mult)
            c = _minimal_rotation_period(probe, m, tol)
            if c is None:
                out.append((d, samples, mult))
            else:
                out.append((c, samples[: c * m].copy(), mult * (d // c)))
                changed = True
        bands = _merge_duplicates(out, m, DEGENERACY_TOL)
    final = []
    for d, samples, mult in bands:
        w, _res = winding_of_samples(samples)
        final.append(Band(d, samples, w, mult))
    final.sort(key=lambda b: (b.d, -b.multiplicity, float(np.angle(b.samples[0]))))
    return EigenSystem(tuple(final), system.n, m, indecomposable=True)


def total_winding(system: EigenSystem) -> int:
    """Sum of |winding| over bands, counted with multiplicity."""
    return sum(abs(w) * b.multiplicity for w, b in zip(winding_numbers(system), system.bands))


def ct_realizable(system: EigenSystem) -> bool:
    """True iff every band winding vanishes."""
    return all(w == 0 for w in winding_numbers(system))


def is_decomposable(system: EigenSystem) -> bool:
    """True iff the walk splits into more than one irreducible summand."""
    refined = system if system.indecomposable else refine_system(system)
    return refined.summand_count > 1


# ---------------------------------------------------------------------------
# conjugacy
# ---------------------------------------------------------------------------


def _match_band_sets(
    left: list[Band], right: list[Band], base_grid: int, tol: float
) -> bool:
    """Exact bipartite matching of bands by (d, multiplicity, rotation distance)."""
    if len(left) != len(right):
        return False
    if not left:
        return True
    band = left[0]
    for idx, other in enumerate(right):
        if other.d != band.d or other.multiplicity != band.multiplicity:
            continue
        if rotation_distance(band.samples, other.samples, base_grid) >= tol:
            continue
        if _match_band_sets(left[1:], right[:idx] + right[idx + 1 :], base_grid, tol):
            return True
    return False


def are_conjugate(
    w1: SymbolMatrix,
    w2: SymbolMatrix,
    tol: float = DEFAULT_TOL,
    base_grid: int = DEFAULT_BASE_GRID,
) -> bool:
    """Whether two walks share an indecomposable eigenvalue-function system.

    Systems are compared band by band, matching covering degree and
    multiplicity, with sample loops compared up to rotation of the covering
    argument by roots of unity.
    """
    if w1.n != w2.n:
        return False
    sys1 = refine_system(track_bands(w1, base_grid), tol)
    sys2 = refine_system(track_bands(w2, base_grid), tol)
    if sys1.base_grid != sys2.base_grid:
        coarse = min(sys1.base_grid, sys2.base_grid)
        sys1 = _subsample_system(sys1, coarse)
        sys2 = _subsample_system(sys2, coarse)
    return _match_band_sets(list(sys1.bands), list(sys2.bands), sys1.base_grid, tol)


def _subsample_system(system: EigenSystem, coarse: int) -> EigenSystem:
    step = system.base_grid // coarse
    if step == 1:
        return system
    bands = tuple(
        Band(b.d, b.samples[::step], b.winding, b.multiplicity) for b in system.bands
    )
    return EigenSystem(bands, system.n, coarse, system.indecomposable)


# ---------------------------------------------------------------------------
# spectral-projection weights
# ---------------------------------------------------------------------------


def band_projections(
    walk: SymbolMatrix,
    system: EigenSystem,
    xi_hat: np.ndarray,
    cluster_tol: float = DEGENERACY_TOL,
) -> list[np.ndarray]:
    """Eigenspace weights of xi_hat, per band and covering point over each z.

    Returns one (M, d_j) array per band: entry [k, i] is the squared norm of
    the projection of xi_hat(z_k) onto the eigenspace of the tracked value at
    covering index k + i*M.  Where several covering points of one band fall
    into a single degenerate cluster (an isolated self-collision), the cluster
    weight is split evenly among them, so the weights at each z always resolve
    the identity.  Clusters mixing distinct bands are an error.
    """
    m = system.base_grid
    xi_hat = np.asarray(xi_hat, dtype=complex)
    if xi_hat.shape != (m, walk.n):
        raise DomainError(f"xi_hat must have shape ({m}, {walk.n})")
    symbols = walk.grid_eval(m)
    weights = [np.zeros((m, band.d)) for band in system.bands]
    for k in range(m):
        t_mat, z_mat = scipy.linalg.schur(symbols[k], output="complex")
        evals = np.diag(t_mat)
        clusters = cluster_indices(evals, cluster_tol)
        label = np.empty(len(evals), dtype=int)
        for cid, idx in enumerate(clusters):
            label[idx] = cid
        cluster_weight = np.empty(len(clusters))
        for cid, idx in enumerate(clusters):
            overlaps = np.conj(z_mat[:, idx]).T @ xi_hat[k]
            cluster_weight[cid] = float(np.sum(np.abs(overlaps) ** 2))
        # assign each tracked covering value to its cluster
        slots: dict[int, list[tuple[int, int]]] = {}
        for j, band in enumerate(system.bands):
            for i in range(band.d):
                value = band.samples[k + i * m]
                nearest = int(np.argmin(np.abs(evals - value)))
                if abs(evals[nearest] - value) > max(10 * cluster_tol, 1e-6):
                    raise ResolutionError(
                        "tracked band value does not match the spectrum; "
                        "system and walk are out of sync"
                    )
                slots.setdefault(int(label[nearest]), []).append((j, i))
        for cid in range(len(clusters)):
            members = slots.get(cid, [])
            if not members:
                raise ResolutionError("eigenvalue cluster not covered by any band")
            bands_here = {j for j, _i in members}
            if len(bands_here) > 1:
                raise ResolutionError(
                    "eigenvalue cluster ambiguous: distinct bands collide at a "
                    "grid point within the clustering tolerance"
                )
            share = cluster_weight[cid] / len(members)
            for j, i in members:
                weights[j][k, i] = share
    return weights


def char_poly_from_bands(system: EigenSystem, k: int) -> np.ndarray:
    """Coefficients (low degree first) of prod over bands of (lambda - value) at base k."""
    poly = np.array([1.0 + 0.0j])
    for band in system.bands:
        for value in band.values_over(k):
            for _ in range(band.multiplicity):
                poly = np.convolve(poly, np.array([-value, 1.0]))
    return poly
