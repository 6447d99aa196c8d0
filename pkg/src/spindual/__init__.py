"""Pauli-string computer algebra and exact-diagonalization lab for spin-chain dualities."""

from .pauli import (
    AXES,
    DEFAULT_DROP_TOL,
    Hamiltonian,
    PauliWord,
    Term,
    canonicalize,
    commutes,
    hamiltonian_from_dict,
    hamiltonian_from_json,
    hamiltonian_to_dict,
    hamiltonian_to_json,
    word_multiply,
)

__version__ = "0.1.0"

__all__ = [
    "AXES",
    "DEFAULT_DROP_TOL",
    "Hamiltonian",
    "PauliWord",
    "Term",
    "canonicalize",
    "commutes",
    "hamiltonian_from_dict",
    "hamiltonian_from_json",
    "hamiltonian_to_dict",
    "hamiltonian_to_json",
    "word_multiply",
    "__version__",
]
