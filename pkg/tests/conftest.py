"""Shared test fixtures: an independent dense oracle built from Kronecker products.

Everything here is deliberately naive.  The oracle builds operators site
by site with ``numpy.kron`` and conjugates with explicit unitaries, so it
shares no code path with the package's mask-based or symbolic routines.
"""
from __future__ import annotations

import numpy as np
import pytest

from spindual.pauli import Hamiltonian, PauliWord
from spindual.rotations import GateStep, QuarterTurns, Radians, cx, cz, rotation, swap

SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_word(word: PauliWord, n_sites: int) -> np.ndarray:
    """Dense matrix of a Pauli word, site 0 as the leftmost Kronecker factor."""
    axes = {site: axis for site, axis in word.factors}
    out = np.array([[1.0 + 0j]])
    for site in range(n_sites):
        out = np.kron(out, SIGMA[axes.get(site, "I")])
    return out


def kron_hamiltonian(h: Hamiltonian) -> np.ndarray:
    dim = 2**h.n_sites
    out = np.zeros((dim, dim), dtype=complex)
    for term in h.terms:
        out += term.coeff * kron_word(term.word, h.n_sites)
    return out


def conjugate_dense(u: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """U M U^dagger."""
    return u @ mat @ u.conj().T


def pauli_coefficient(mat: np.ndarray, word: PauliWord, n_sites: int) -> complex:
    """Coefficient of ``word`` in ``mat`` via the trace inner product."""
    basis = kron_word(word, n_sites)
    return complex(np.trace(basis.conj().T @ mat) / 2**n_sites)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


def random_word(rng: np.random.Generator, n_sites: int, max_weight: int | None = None) -> PauliWord:
    """Random nonempty word on up to ``max_weight`` of ``n_sites`` sites."""
    max_weight = min(max_weight or n_sites, n_sites)
    weight = int(rng.integers(1, max_weight + 1))
    sites = sorted(rng.choice(n_sites, size=weight, replace=False).tolist())
    axes = rng.choice(["X", "Y", "Z"], size=weight).tolist()
    return PauliWord.from_pairs(zip(sites, axes))


def random_hamiltonian(
    rng: np.random.Generator,
    n_sites: int,
    n_terms: int,
    max_weight: int | None = None,
) -> Hamiltonian:
    """Random real combination of distinct words, canonical form."""
    n_terms = min(n_terms, 4**n_sites - 1)
    words: dict[PauliWord, float] = {}
    while len(words) < n_terms:
        word = random_word(rng, n_sites, max_weight)
        words[word] = float(rng.uniform(-2.0, 2.0))
    return Hamiltonian.from_terms(n_sites, [(c, w) for w, c in words.items()])


def random_step(
    rng: np.random.Generator, n_sites: int, clifford_only: bool = False
) -> GateStep:
    """Random conjugation step valid on ``n_sites`` sites."""
    kinds = ["CZ", "CX", "SWAP", "ROTQ"] + ([] if clifford_only else ["ROTG"])
    kind = rng.choice(kinds)
    if kind in ("CZ", "CX", "SWAP"):
        i, j = rng.choice(n_sites, size=2, replace=False).tolist()
        return {"CZ": cz, "CX": cx, "SWAP": swap}[kind](int(i), int(j))
    weight = int(rng.integers(1, 3)) if n_sites > 1 else 1
    axis = random_word(rng, n_sites, max_weight=weight)
    if kind == "ROTQ":
        return rotation(axis, QuarterTurns(int(rng.integers(-4, 5))))
    return rotation(axis, Radians(float(rng.uniform(-3.0, 3.0))))


def random_script(
    rng: np.random.Generator, n_sites: int, length: int, clifford_only: bool = False
) -> list[GateStep]:
    return [random_step(rng, n_sites, clifford_only) for _ in range(length)]
