"""Exact-diagonalization backend for Pauli-word Hamiltonians.

Dense matrices are produced one term at a time through bit masks: for a
word with X-or-Y support ``xor_mask`` and Z-or-Y support ``phase_mask``,
column ``j`` maps to row ``j ^ xor_mask`` with amplitude
``i^{y_count} * (-1)^{popcount(j & phase_mask)}``.  Site 0 is the most
significant bit, matching the Kronecker order sigma_0 (x) sigma_1 (x) ...

Sizes up to ``DENSE_SITE_CAP`` sites go through ``numpy.linalg.eigvalsh``;
up to ``ITERATIVE_SITE_CAP`` sites a matrix-free Lanczos path computes
extremal eigenvalues only.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .pauli import Hamiltonian, PauliWord

__all__ = [
    "DENSE_SITE_CAP",
    "ITERATIVE_SITE_CAP",
    "DEGENERACY_TOL_SCALE",
    "SpectrumResult",
    "SpectraComparison",
    "GapResult",
    "GapScan",
    "to_dense",
    "matvec_operator",
    "full_spectrum",
    "extremal_eigs",
    "eigenvalues_close",
    "spectra_equal",
    "eigenvalue_multiplicities",
    "gap",
    "gap_scan",
]

DENSE_SITE_CAP = 12
ITERATIVE_SITE_CAP = 20
DEGENERACY_TOL_SCALE = 1e-8

_POPCOUNT16 = np.array([bin(v).count("1") for v in range(1 << 16)], dtype=np.int64)


def _popcount(values: np.ndarray) -> np.ndarray:
    """Vectorized popcount for non-negative int64 arrays below 2**32."""
    return _POPCOUNT16[values & 0xFFFF] + _POPCOUNT16[(values >> 16) & 0xFFFF]


def _term_masks(word: PauliWord, n_sites: int) -> tuple[int, int, int]:
    """Masks (xor_mask, phase_mask, y_count) with site 0 as the MSB."""
    xor_mask = 0
    phase_mask = 0
    y_count = 0
    for site, axis in word.factors:
        bit = 1 << (n_sites - 1 - site)
        if axis in ("X", "Y"):
            xor_mask |= bit
        if axis in ("Z", "Y"):
            phase_mask |= bit
        if axis == "Y":
            y_count += 1
    return xor_mask, phase_mask, y_count


def _is_real(h: Hamiltonian) -> bool:
    return all(
        sum(1 for _, axis in term.word.factors if axis == "Y") % 2 == 0
        for term in h.terms
    )


def to_dense(h: Hamiltonian, site_cap: int = DENSE_SITE_CAP) -> np.ndarray:
    """Dense matrix of ``h`` in the computational basis.

    Returns float64 when every word has an even number of Y factors,
    complex128 otherwise.  Guarded by ``site_cap`` because the output is
    ``2^n x 2^n``.
    """
    n = h.n_sites
    if n > site_cap:
        raise ValueError(f"dense matrix needs {n} sites > cap {site_cap}")
    dim = 1 << n
    real = _is_real(h)
    out = np.zeros((dim, dim), dtype=np.float64 if real else np.complex128)
    cols = np.arange(dim, dtype=np.int64)
    for term in h.terms:
        xor_mask, phase_mask, y_count = _term_masks(term.word, n)
        signs = 1 - 2 * (_popcount(cols & phase_mask) % 2)
        amp = term.coeff * (1j**y_count)
        if real:
            amp = amp.real
        out[cols ^ xor_mask, cols] += amp * signs
    return out


def matvec_operator(h: Hamiltonian, site_cap: int = ITERATIVE_SITE_CAP) -> LinearOperator:
    """Matrix-free LinearOperator computing ``H @ v`` from term masks."""
    n = h.n_sites
    if n > site_cap:
        raise ValueError(f"matvec operator needs {n} sites > cap {site_cap}")
    dim = 1 << n
    cols = np.arange(dim, dtype=np.int64)
    real = _is_real(h)
    compiled = []
    for term in h.terms:
        xor_mask, phase_mask, y_count = _term_masks(term.word, n)
        amp = term.coeff * (1j**y_count)
        if real:
            amp = amp.real
        signs = 1 - 2 * (_popcount(cols & phase_mask) % 2)
        compiled.append((cols ^ xor_mask, amp * signs))

    def matvec(vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec).reshape(dim)
        out = np.zeros(dim, dtype=np.result_type(vec.dtype, np.float64 if real else np.complex128))
        for rows, weights in compiled:
            out[rows] += weights * vec
        return out

    dtype = np.float64 if real else np.complex128
    return LinearOperator((dim, dim), matvec=matvec, rmatvec=matvec, dtype=dtype)


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenvalues in ascending order plus degeneracy clustering.

    ``complete`` is False for extremal subsets; ``multiplicities``
    partitions the returned eigenvalues under ``degeneracy_tol``.
    """

    eigenvalues: tuple[float, ...]
    method: str
    complete: bool
    degeneracy_tol: float
    multiplicities: tuple[tuple[float, int], ...]

    def to_dict(self) -> dict:
        return {
            "eigenvalues": list(self.eigenvalues),
            "method": self.method,
            "complete": self.complete,
            "degeneracy_tol": self.degeneracy_tol,
            "multiplicities": [[v, m] for v, m in self.multiplicities],
        }


def _make_result(
    values: np.ndarray, method: str, complete: bool, tol: float | None = None
) -> SpectrumResult:
    values = np.sort(np.asarray(values, dtype=np.float64))
    tol = _degeneracy_tol(values, tol)
    groups = tuple(eigenvalue_multiplicities(values, tol))
    return SpectrumResult(
        tuple(float(v) for v in values), method, complete, tol, groups
    )


def full_spectrum(
    h: Hamiltonian,
    site_cap: int = DENSE_SITE_CAP,
    degeneracy_tol: float | None = None,
) -> SpectrumResult:
    """All eigenvalues via dense Hermitian diagonalization."""
    mat = to_dense(h, site_cap=site_cap)
    vals = np.linalg.eigvalsh(mat)
    return _make_result(vals, "dense", True, degeneracy_tol)


def extremal_eigs(
    h: Hamiltonian,
    k: int = 6,
    site_cap: int = ITERATIVE_SITE_CAP,
    degeneracy_tol: float | None = None,
) -> SpectrumResult:
    """Lowest ``k`` eigenvalues; small systems dense, otherwise Lanczos."""
    dim = 1 << h.n_sites
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if h.n_sites <= DENSE_SITE_CAP and (dim <= 2 * k + 2 or dim <= 16):
        vals = full_spectrum(h).eigenvalues[:k]
        return _make_result(
            np.asarray(vals), "dense", len(vals) == dim, degeneracy_tol
        )
    k = min(k, dim - 2)
    op = matvec_operator(h, site_cap=site_cap)
    # Degenerate multiplets need a subspace well beyond k, and a fixed
    # start vector keeps repeated runs reproducible.
    ncv = min(dim, max(4 * k + 1, 40))
    v0 = np.random.default_rng(7).standard_normal(dim)
    try:
        vals = eigsh(op, k=k, which="SA", ncv=ncv, v0=v0, return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        raise RuntimeError(
            f"iterative eigensolver failed to converge for k={k} "
            f"on {h.n_sites} sites: {exc}"
        ) from exc
    return _make_result(vals, "lanczos", False, degeneracy_tol)


def eigenvalues_close(
    a: tuple[float, ...] | list[float] | np.ndarray,
    b: tuple[float, ...] | list[float] | np.ndarray,
    tol: float = 1e-9,
) -> bool:
    """Elementwise comparison of two eigenvalue lists after sorting."""
    va = np.sort(np.asarray(a, dtype=np.float64))
    vb = np.sort(np.asarray(b, dtype=np.float64))
    if va.shape != vb.shape:
        return False
    return bool(np.max(np.abs(va - vb), initial=0.0) <= tol)


@dataclass(frozen=True)
class SpectraComparison:
    """Outcome of comparing two full spectra elementwise."""

    equal: bool
    max_deviation: float
    tol: float

    def __bool__(self) -> bool:
        return self.equal

    def to_dict(self) -> dict:
        return {
            "equal": self.equal,
            "max_deviation": self.max_deviation,
            "tol": self.tol,
        }


def spectra_equal(
    h1: Hamiltonian,
    h2: Hamiltonian,
    tol: float = 1e-9,
    site_cap: int = DENSE_SITE_CAP,
) -> SpectraComparison:
    """Compare the full spectra of two Hamiltonians elementwise."""
    if h1.n_sites != h2.n_sites:
        raise ValueError(
            f"spectra comparison needs equal sizes, got {h1.n_sites} vs {h2.n_sites}"
        )
    va = np.asarray(full_spectrum(h1, site_cap=site_cap).eigenvalues)
    vb = np.asarray(full_spectrum(h2, site_cap=site_cap).eigenvalues)
    dev = float(np.max(np.abs(va - vb), initial=0.0))
    return SpectraComparison(dev <= tol, dev, tol)


def _degeneracy_tol(values: np.ndarray, tol: float | None) -> float:
    if tol is not None:
        return tol
    scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
    return DEGENERACY_TOL_SCALE * scale


def eigenvalue_multiplicities(
    values, tol: float | None = None
) -> list[tuple[float, int]]:
    """Cluster an ascending eigenvalue list into (level, multiplicity) pairs.

    Chain clustering: a value joins the current cluster when it sits
    within ``tol`` of the previous value, so nearly-degenerate ladders
    stay together.
    """
    arr = np.sort(np.asarray(values, dtype=np.float64))
    if arr.size == 0:
        return []
    tol = _degeneracy_tol(arr, tol)
    groups: list[tuple[float, int]] = []
    start = 0
    for i in range(1, arr.size + 1):
        if i == arr.size or arr[i] - arr[i - 1] > tol:
            chunk = arr[start:i]
            groups.append((float(np.mean(chunk)), int(chunk.size)))
            start = i
    return groups


@dataclass(frozen=True)
class GapResult:
    """Ground energy, its multiplicity and the first excitation gap."""

    ground_energy: float
    ground_multiplicity: int
    gap: float
    method: str

    def to_dict(self) -> dict:
        return {
            "ground_energy": self.ground_energy,
            "ground_multiplicity": self.ground_multiplicity,
            "gap": self.gap,
            "method": self.method,
        }


def gap(
    h: Hamiltonian,
    tol: float | None = None,
    site_cap: int = ITERATIVE_SITE_CAP,
    dense_cap: int = DENSE_SITE_CAP,
) -> GapResult:
    """Energy distance from the ground level to the first distinct level.

    Small systems are solved densely.  Larger ones use Lanczos with a
    growing eigenvalue budget until a level separated from the ground
    cluster appears.  Lowering ``dense_cap`` forces the iterative path
    earlier.
    """
    if h.n_sites <= min(dense_cap, DENSE_SITE_CAP):
        spec = full_spectrum(h)
        values = np.asarray(spec.eigenvalues)
        groups = eigenvalue_multiplicities(values, tol)
        if len(groups) < 2:
            raise ValueError("spectrum has a single level, gap undefined")
        return GapResult(groups[0][0], groups[0][1], groups[1][0] - groups[0][0], spec.method)
    k = 6
    dim = 1 << h.n_sites
    while True:
        spec = extremal_eigs(h, k=k, site_cap=site_cap)
        values = np.asarray(spec.eigenvalues)
        groups = eigenvalue_multiplicities(values, tol)
        if len(groups) >= 2:
            return GapResult(
                groups[0][0], groups[0][1], groups[1][0] - groups[0][0], spec.method
            )
        if k >= dim - 2 or k >= 64:
            raise ValueError(
                f"no distinct excited level among the lowest {k} eigenvalues"
            )
        k = min(2 * k, dim - 2)


@dataclass(frozen=True)
class GapScan:
    """Gap along an interpolation family H(s) = (1-s) H0 + s H1."""

    s_grid: tuple[float, ...]
    gaps: tuple[float, ...]
    ground_energies: tuple[float, ...] = field(default=())

    @property
    def min_gap(self) -> float:
        return min(self.gaps)

    @property
    def argmin_s(self) -> float:
        return self.s_grid[int(np.argmin(self.gaps))]

    def to_dict(self) -> dict:
        return {
            "s_grid": list(self.s_grid),
            "gaps": list(self.gaps),
            "ground_energies": list(self.ground_energies),
            "min_gap": self.min_gap,
            "argmin_s": self.argmin_s,
        }


def gap_scan(
    h0: Hamiltonian,
    h1: Hamiltonian,
    grid: int | tuple[float, ...] = 21,
    tol: float | None = None,
    site_cap: int = ITERATIVE_SITE_CAP,
    dense_cap: int = DENSE_SITE_CAP,
) -> GapScan:
    """Scan the spectral gap of (1-s) H0 + s H1 over ``s`` in [0, 1]."""
    if h0.n_sites != h1.n_sites:
        raise ValueError(
            f"endpoint Hamiltonians differ in size: {h0.n_sites} vs {h1.n_sites}"
        )
    if isinstance(grid, int):
        if grid < 2:
            raise ValueError(f"grid must have at least 2 points, got {grid}")
        points = tuple(float(s) for s in np.linspace(0.0, 1.0, grid))
    else:
        points = tuple(float(s) for s in grid)
        if any(s < 0.0 or s > 1.0 for s in points):
            raise ValueError("grid points must lie in [0, 1]")
    gaps = []
    grounds = []
    for s in points:
        terms = [
            *[(term.coeff * (1.0 - s), term.word) for term in h0.terms],
            *[(term.coeff * s, term.word) for term in h1.terms],
        ]
        h_s = Hamiltonian.from_terms(h0.n_sites, terms)
        res = gap(h_s, tol=tol, site_cap=site_cap, dense_cap=dense_cap)
        gaps.append(res.gap)
        grounds.append(res.ground_energy)
    return GapScan(points, tuple(gaps), tuple(grounds))
