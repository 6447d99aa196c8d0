"""Exact algebra of sparse multi-site Pauli strings.

A word is a sorted map ``site -> axis`` with the identity represented by
absence.  Products track the power of ``i`` with integer arithmetic, so
phase bookkeeping on Clifford and quarter-turn paths never touches
floating point.  Hamiltonians are real-weighted term lists over words;
``canonicalize`` merges duplicates, drops negligible coefficients and
imposes a total order so that equal operators compare equal.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

__all__ = [
    "AXES",
    "DEFAULT_DROP_TOL",
    "PauliWord",
    "Term",
    "Hamiltonian",
    "word_multiply",
    "commutes",
    "canonicalize",
    "hamiltonian_to_dict",
    "hamiltonian_from_dict",
    "hamiltonian_to_json",
    "hamiltonian_from_json",
]

AXES = ("X", "Y", "Z")
DEFAULT_DROP_TOL = 1e-12

_RANK = {"X": 0, "Y": 1, "Z": 2}
_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)

# Site-level products a.b = i^k . c, encoded as (a, b) -> (k, c).
# c is None when the product is the identity.
_SITE_MUL = {
    ("X", "X"): (0, None),
    ("Y", "Y"): (0, None),
    ("Z", "Z"): (0, None),
    ("X", "Y"): (1, "Z"),
    ("Y", "X"): (3, "Z"),
    ("Y", "Z"): (1, "X"),
    ("Z", "Y"): (3, "X"),
    ("Z", "X"): (1, "Y"),
    ("X", "Z"): (3, "Y"),
}


@dataclass(frozen=True)
class PauliWord:
    """Product of single-site Pauli operators on distinct sites.

    ``factors`` is a tuple of ``(site, axis)`` pairs sorted by site with
    axis one of ``"X" | "Y" | "Z"``.  The empty tuple is the identity.
    """

    factors: tuple[tuple[int, str], ...] = ()

    def __post_init__(self) -> None:
        last = -1
        for site, axis in self.factors:
            if not isinstance(site, int) or site < 0:
                raise ValueError(f"bad site index {site!r}")
            if site <= last:
                raise ValueError("word factors must be sorted by site without repeats")
            if axis not in _RANK:
                raise ValueError(f"bad axis {axis!r}")
            last = site

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, str]]) -> "PauliWord":
        """Build a word from unordered ``(site, axis)`` pairs."""
        items = sorted(pairs)
        return cls(tuple((int(s), a) for s, a in items))

    @classmethod
    def from_map(cls, assignment: Mapping[int, str]) -> "PauliWord":
        return cls.from_pairs(assignment.items())

    @classmethod
    def single(cls, site: int, axis: str) -> "PauliWord":
        return cls(((site, axis),))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(site for site, _ in self.factors)

    @property
    def weight(self) -> int:
        return len(self.factors)

    @property
    def is_identity(self) -> bool:
        return not self.factors

    def axis_on(self, site: int) -> str | None:
        for s, axis in self.factors:
            if s == site:
                return axis
            if s > site:
                return None
        return None

    def max_site(self) -> int:
        return self.factors[-1][0] if self.factors else -1

    def sort_key(self) -> tuple[tuple[int, int], ...]:
        """Total order: lexicographic over (site, X<Y<Z) pairs."""
        return tuple((site, _RANK[axis]) for site, axis in self.factors)

    def __iter__(self) -> Iterator[tuple[int, str]]:
        return iter(self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "I"
        return " ".join(f"{axis}{site}" for site, axis in self.factors)


def word_multiply(a: PauliWord, b: PauliWord) -> tuple[complex, PauliWord]:
    """Multiply two words, returning ``(phase, word)`` with a.b = phase.word.

    The phase is always one of ``+1, -1, +i, -i`` and is exact.
    """
    out: list[tuple[int, str]] = []
    k = 0
    fa, fb = a.factors, b.factors
    ia = ib = 0
    while ia < len(fa) and ib < len(fb):
        sa, pa = fa[ia]
        sb, pb = fb[ib]
        if sa < sb:
            out.append((sa, pa))
            ia += 1
        elif sb < sa:
            out.append((sb, pb))
            ib += 1
        else:
            dk, prod = _SITE_MUL[(pa, pb)]
            k += dk
            if prod is not None:
                out.append((sa, prod))
            ia += 1
            ib += 1
    out.extend(fa[ia:])
    out.extend(fb[ib:])
    return _I_POW[k % 4], PauliWord(tuple(out))


def commutes(a: PauliWord, b: PauliWord) -> bool:
    """True when the words commute.

    Two words anticommute exactly when they differ on an odd number of
    shared sites, so only the overlap has to be scanned.
    """
    clashes = 0
    fa, fb = a.factors, b.factors
    ia = ib = 0
    while ia < len(fa) and ib < len(fb):
        sa, pa = fa[ia]
        sb, pb = fb[ib]
        if sa < sb:
            ia += 1
        elif sb < sa:
            ib += 1
        else:
            if pa != pb:
                clashes += 1
            ia += 1
            ib += 1
    return clashes % 2 == 0


@dataclass(frozen=True)
class Term:
    """One real-weighted Pauli word."""

    coeff: float
    word: PauliWord

    def __post_init__(self) -> None:
        coeff = self.coeff
        if isinstance(coeff, complex):
            if coeff.imag != 0.0:
                raise ValueError(f"coefficients must be real, got {coeff!r}")
            object.__setattr__(self, "coeff", coeff.real)
            coeff = coeff.real
        if not isinstance(coeff, (int, float)):
            raise ValueError(f"coefficients must be real numbers, got {coeff!r}")
        if not math.isfinite(coeff):
            raise ValueError(f"coefficients must be finite, got {coeff!r}")
        object.__setattr__(self, "coeff", float(coeff))

    def __str__(self) -> str:
        return f"{self.coeff:+g}.{self.word}"


@dataclass(frozen=True)
class Hamiltonian:
    """Real combination of Pauli words on ``n_sites`` labelled 0..n-1."""

    n_sites: int
    terms: tuple[Term, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n_sites, int) or self.n_sites < 1:
            raise ValueError(f"n_sites must be a positive integer, got {self.n_sites!r}")
        object.__setattr__(self, "terms", tuple(self.terms))
        for term in self.terms:
            if not isinstance(term, Term):
                raise ValueError(f"expected Term, got {term!r}")
            if term.word.factors and term.word.max_site() >= self.n_sites:
                raise ValueError(
                    f"term {term} uses site {term.word.max_site()} "
                    f"outside 0..{self.n_sites - 1}"
                )

    @classmethod
    def from_terms(
        cls, n_sites: int, weighted_words: Iterable[tuple[float, PauliWord]]
    ) -> "Hamiltonian":
        return canonicalize(
            cls(n_sites, tuple(Term(c, w) for c, w in weighted_words))
        )

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def coefficient(self, word: PauliWord) -> float:
        total = 0.0
        for term in self.terms:
            if term.word == word:
                total += term.coeff
        return total

    def active_sites(self) -> tuple[int, ...]:
        seen: set[int] = set()
        for term in self.terms:
            seen.update(term.word.support)
        return tuple(sorted(seen))

    def __str__(self) -> str:
        body = " ".join(str(t) for t in self.terms) or "0"
        return f"[{self.n_sites} sites] {body}"


def canonicalize(h: Hamiltonian, drop_tol: float = DEFAULT_DROP_TOL) -> Hamiltonian:
    """Merge duplicate words, drop |coeff| <= drop_tol, sort by word order."""
    acc: dict[PauliWord, float] = {}
    for term in h.terms:
        acc[term.word] = acc.get(term.word, 0.0) + term.coeff
    kept = [
        Term(coeff, word)
        for word, coeff in acc.items()
        if abs(coeff) > drop_tol
    ]
    kept.sort(key=lambda t: t.word.sort_key())
    return Hamiltonian(h.n_sites, tuple(kept))


def _word_to_wire(word: PauliWord) -> list[list[object]]:
    return [[site, axis] for site, axis in word.factors]


def _word_from_wire(pairs: object) -> PauliWord:
    if not isinstance(pairs, list):
        raise ValueError(f"word must be a list of [site, axis] pairs, got {pairs!r}")
    seen: set[int] = set()
    collected: list[tuple[int, str]] = []
    for entry in pairs:
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not isinstance(entry[0], int)
            or isinstance(entry[0], bool)
            or not isinstance(entry[1], str)
        ):
            raise ValueError(f"bad word entry {entry!r}, expected [site, axis]")
        site, axis = entry
        if site in seen:
            raise ValueError(f"site {site} repeated inside one word")
        seen.add(site)
        collected.append((site, axis))
    return PauliWord.from_pairs(collected)


def hamiltonian_to_dict(h: Hamiltonian) -> dict:
    return {
        "n_sites": h.n_sites,
        "terms": [
            {"coeff": term.coeff, "word": _word_to_wire(term.word)}
            for term in h.terms
        ],
    }


def hamiltonian_from_dict(payload: object) -> Hamiltonian:
    if not isinstance(payload, dict):
        raise ValueError("Hamiltonian payload must be an object")
    try:
        n_sites = payload["n_sites"]
        raw_terms = payload["terms"]
    except KeyError as exc:
        raise ValueError(f"Hamiltonian payload missing key {exc.args[0]!r}") from None
    if not isinstance(n_sites, int) or isinstance(n_sites, bool):
        raise ValueError(f"n_sites must be an integer, got {n_sites!r}")
    if not isinstance(raw_terms, list):
        raise ValueError("terms must be a list")
    terms = []
    for raw in raw_terms:
        if not isinstance(raw, dict) or "coeff" not in raw or "word" not in raw:
            raise ValueError(f"bad term entry {raw!r}")
        coeff = raw["coeff"]
        if isinstance(coeff, bool) or not isinstance(coeff, (int, float)):
            raise ValueError(f"term coefficient must be a real number, got {coeff!r}")
        terms.append(Term(float(coeff), _word_from_wire(raw["word"])))
    return Hamiltonian(n_sites, tuple(terms))


def hamiltonian_to_json(h: Hamiltonian, indent: int | None = None) -> str:
    return json.dumps(hamiltonian_to_dict(h), indent=indent, sort_keys=True)


def hamiltonian_from_json(text: str) -> Hamiltonian:
    return hamiltonian_from_dict(json.loads(text))
