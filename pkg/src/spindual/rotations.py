"""Conjugation engine for Pauli-word Hamiltonians.

Two kinds of steps act by conjugation H -> U H U^dagger:

* axis rotations U = exp(i eta W / ... ) generated by half a one- or
  two-site Pauli word W, where a term T either commutes with W (then it
  is untouched) or splits as cos(eta) T + i sin(eta) W.T with a real
  coefficient;
* the Clifford gates CZ, CX and SWAP, which permute Pauli words one to
  one up to a sign.

Quarter-turn angles (eta = k pi/2) run on integer sign bookkeeping, so
repeated conjugation is exact.  Generic angles take the floating
cos/sin split.  The Clifford action is stored as hand-frozen lookup
tables and, independently, as compositions of quarter-turn rotations;
the two routes are cross-checked in the test suite.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .pauli import (
    DEFAULT_DROP_TOL,
    Hamiltonian,
    PauliWord,
    Term,
    canonicalize,
    commutes,
    word_multiply,
)
from .spectra import DENSE_SITE_CAP, to_dense

__all__ = [
    "QuarterTurns",
    "Radians",
    "Angle",
    "GateStep",
    "cz",
    "cx",
    "swap",
    "rotation",
    "CZ_TABLE",
    "CX_TABLE",
    "rotate_term",
    "clifford_word_image",
    "apply_clifford",
    "apply_rotation",
    "apply_local",
    "apply_step",
    "conjugate_sequence",
    "dense_gate",
    "dense_script",
    "clifford_as_rotations",
    "hadamard_steps",
    "inverse_step",
    "inverse_script",
    "script_to_obj",
    "script_from_obj",
    "script_to_json",
    "script_from_json",
]


@dataclass(frozen=True)
class QuarterTurns:
    """Exact angle eta = k pi/2; conjugation depends only on k mod 4."""

    k: int

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or isinstance(self.k, bool):
            raise ValueError(f"quarter turns must be an integer, got {self.k!r}")

    @property
    def radians(self) -> float:
        return self.k * math.pi / 2.0


@dataclass(frozen=True)
class Radians:
    """Generic angle; conjugation takes the cos/sin split."""

    value: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"angle must be finite, got {self.value!r}")

    @property
    def radians(self) -> float:
        return self.value


Angle = QuarterTurns | Radians


_GATES = ("CZ", "CX", "SWAP", "ROT")


@dataclass(frozen=True)
class GateStep:
    """One conjugation step: a named two-site Clifford or an axis rotation.

    ``sites`` is ``(i, j)`` for Cliffords (CZ and SWAP stored with
    ``i < j``, CX as ``(control, target)``).  Rotations carry the axis
    word (support size 1 or 2) and an angle instead.
    """

    gate: str
    sites: tuple[int, int] | None = None
    axis: PauliWord | None = None
    angle: Angle | None = None

    def __post_init__(self) -> None:
        if self.gate not in _GATES:
            raise ValueError(f"unknown gate {self.gate!r}")
        if self.gate == "ROT":
            if self.sites is not None:
                raise ValueError("ROT steps carry an axis, not sites")
            if not isinstance(self.axis, PauliWord) or self.axis.weight not in (1, 2):
                raise ValueError("rotation axis must act on 1 or 2 sites")
            if not isinstance(self.angle, (QuarterTurns, Radians)):
                raise ValueError("rotation needs a QuarterTurns or Radians angle")
        else:
            if self.axis is not None or self.angle is not None:
                raise ValueError(f"{self.gate} steps carry sites only")
            sites = self.sites
            if (
                not isinstance(sites, tuple)
                or len(sites) != 2
                or not all(isinstance(s, int) and not isinstance(s, bool) for s in sites)
            ):
                raise ValueError(f"{self.gate} needs a pair of site indices")
            i, j = sites
            if i == j or i < 0 or j < 0:
                raise ValueError(f"{self.gate} needs two distinct non-negative sites")
            if self.gate in ("CZ", "SWAP") and i > j:
                object.__setattr__(self, "sites", (j, i))

    def max_site(self) -> int:
        if self.gate == "ROT":
            return self.axis.max_site()
        return max(self.sites)

    def to_dict(self) -> dict:
        if self.gate == "ROT":
            payload: dict = {
                "gate": "ROT",
                "axis": [[site, axis] for site, axis in self.axis],
            }
            if isinstance(self.angle, QuarterTurns):
                payload["quarter_turns"] = self.angle.k
            else:
                payload["angle"] = self.angle.value
            return payload
        return {"gate": self.gate, "sites": list(self.sites)}

    @classmethod
    def from_dict(cls, payload: object) -> "GateStep":
        if not isinstance(payload, dict) or "gate" not in payload:
            raise ValueError(f"gate step must be an object with a 'gate' key, got {payload!r}")
        gate = payload["gate"]
        if gate in ("CZ", "CX", "SWAP"):
            sites = payload.get("sites")
            if (
                not isinstance(sites, list)
                or len(sites) != 2
                or not all(isinstance(s, int) and not isinstance(s, bool) for s in sites)
            ):
                raise ValueError(f"{gate} step needs \"sites\": [i, j], got {sites!r}")
            return cls(gate, (sites[0], sites[1]))
        if gate == "ROT":
            axis_raw = payload.get("axis")
            if not isinstance(axis_raw, list) or not axis_raw:
                raise ValueError("ROT step needs a nonempty \"axis\" list")
            pairs = []
            for entry in axis_raw:
                if (
                    not isinstance(entry, (list, tuple))
                    or len(entry) != 2
                    or not isinstance(entry[0], int)
                    or isinstance(entry[0], bool)
                ):
                    raise ValueError(f"bad axis entry {entry!r}")
                pairs.append((entry[0], entry[1]))
            has_turns = "quarter_turns" in payload
            has_angle = "angle" in payload
            if has_turns == has_angle:
                raise ValueError("ROT step needs exactly one of quarter_turns or angle")
            if has_turns:
                turns = payload["quarter_turns"]
                if not isinstance(turns, int) or isinstance(turns, bool):
                    raise ValueError(f"quarter_turns must be an integer, got {turns!r}")
                angle: Angle = QuarterTurns(turns)
            else:
                value = payload["angle"]
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ValueError(f"angle must be a number, got {value!r}")
                angle = Radians(float(value))
            return cls("ROT", axis=PauliWord.from_pairs(pairs), angle=angle)
        raise ValueError(f"unknown gate {gate!r}")


def cz(i: int, j: int) -> GateStep:
    return GateStep("CZ", (i, j))


def cx(control: int, target: int) -> GateStep:
    return GateStep("CX", (control, target))


def swap(i: int, j: int) -> GateStep:
    return GateStep("SWAP", (i, j))


def rotation(axis: PauliWord, angle: Angle | int | float) -> GateStep:
    """Axis-rotation step; plain ints mean quarter turns, floats radians."""
    if isinstance(angle, int) and not isinstance(angle, bool):
        angle = QuarterTurns(angle)
    elif isinstance(angle, float):
        angle = Radians(angle)
    return GateStep("ROT", axis=axis, angle=angle)


# Conjugation by CZ on the ordered pair (i, j): word -> (sign, word).
# "I" marks the identity on a slot.  Frozen by hand from the gate's
# stabilizer action; cross-checked against dense matrices and against
# the rotation decomposition in the tests.
CZ_TABLE: dict[tuple[str, str], tuple[int, str, str]] = {
    ("I", "I"): (1, "I", "I"),
    ("I", "X"): (1, "Z", "X"),
    ("I", "Y"): (1, "Z", "Y"),
    ("I", "Z"): (1, "I", "Z"),
    ("X", "I"): (1, "X", "Z"),
    ("X", "X"): (1, "Y", "Y"),
    ("X", "Y"): (-1, "Y", "X"),
    ("X", "Z"): (1, "X", "I"),
    ("Y", "I"): (1, "Y", "Z"),
    ("Y", "X"): (-1, "X", "Y"),
    ("Y", "Y"): (1, "X", "X"),
    ("Y", "Z"): (1, "Y", "I"),
    ("Z", "I"): (1, "Z", "I"),
    ("Z", "X"): (1, "I", "X"),
    ("Z", "Y"): (1, "I", "Y"),
    ("Z", "Z"): (1, "Z", "Z"),
}

# Conjugation by CX on (control, target).
CX_TABLE: dict[tuple[str, str], tuple[int, str, str]] = {
    ("I", "I"): (1, "I", "I"),
    ("I", "X"): (1, "I", "X"),
    ("I", "Y"): (1, "Z", "Y"),
    ("I", "Z"): (1, "Z", "Z"),
    ("X", "I"): (1, "X", "X"),
    ("X", "X"): (1, "X", "I"),
    ("X", "Y"): (1, "Y", "Z"),
    ("X", "Z"): (-1, "Y", "Y"),
    ("Y", "I"): (1, "Y", "X"),
    ("Y", "X"): (1, "Y", "I"),
    ("Y", "Y"): (-1, "X", "Z"),
    ("Y", "Z"): (1, "X", "Y"),
    ("Z", "I"): (1, "Z", "I"),
    ("Z", "X"): (1, "Z", "X"),
    ("Z", "Y"): (1, "I", "Y"),
    ("Z", "Z"): (1, "I", "Z"),
}


def _phase_times_i(phase: complex) -> float:
    """Real value of i*phase for phase in {+i, -i}; rejects anything else."""
    value = 1j * phase
    if value.imag != 0.0:
        raise AssertionError(f"anticommuting product produced non-real weight {value!r}")
    return value.real


def rotate_term(term: Term, axis: PauliWord, angle: Angle) -> list[Term]:
    """Conjugate one term by the axis rotation; 1 or 2 output terms.

    Ground truth is U T U^dagger = cos(eta) T + i sin(eta) (axis.T) for
    anticommuting words; commuting words are fixed points.
    """
    if axis.is_identity:
        raise ValueError("rotation axis must be nonempty")
    if commutes(term.word, axis):
        return [term]
    if isinstance(angle, QuarterTurns):
        k = angle.k % 4
        if k == 0:
            return [term]
        if k == 2:
            return [Term(-term.coeff, term.word)]
        phase, product = word_multiply(axis, term.word)
        weight = _phase_times_i(phase)
        sign = 1.0 if k == 1 else -1.0
        return [Term(sign * weight * term.coeff, product)]
    eta = angle.radians
    phase, product = word_multiply(axis, term.word)
    weight = _phase_times_i(phase)
    return [
        Term(math.cos(eta) * term.coeff, term.word),
        Term(math.sin(eta) * weight * term.coeff, product),
    ]


def clifford_word_image(word: PauliWord, step: GateStep) -> tuple[int, PauliWord]:
    """Signed image of one word under a CZ/CX/SWAP step."""
    i, j = step.sites
    a = word.axis_on(i) or "I"
    b = word.axis_on(j) or "I"
    if step.gate == "SWAP":
        sign, na, nb = 1, b, a
    elif step.gate == "CZ":
        sign, na, nb = CZ_TABLE[(a, b)]
    else:
        sign, na, nb = CX_TABLE[(a, b)]
    pairs = [(s, ax) for s, ax in word.factors if s != i and s != j]
    if na != "I":
        pairs.append((i, na))
    if nb != "I":
        pairs.append((j, nb))
    return sign, PauliWord.from_pairs(pairs)


def apply_clifford(h: Hamiltonian, step: GateStep, drop_tol: float = DEFAULT_DROP_TOL) -> Hamiltonian:
    """Conjugate by one CZ/CX/SWAP step; term count is preserved."""
    if step.gate == "ROT":
        raise ValueError("apply_clifford expects a CZ/CX/SWAP step")
    _check_step_range(step, h.n_sites, index=None)
    terms = []
    for term in h.terms:
        sign, image = clifford_word_image(term.word, step)
        terms.append(Term(sign * term.coeff, image))
    return canonicalize(Hamiltonian(h.n_sites, tuple(terms)), drop_tol)


def apply_rotation(
    h: Hamiltonian,
    axis: PauliWord,
    angle: Angle,
    drop_tol: float = DEFAULT_DROP_TOL,
) -> Hamiltonian:
    """Conjugate every term by one axis rotation."""
    if axis.is_identity or axis.max_site() >= h.n_sites:
        raise ValueError(f"axis {axis} invalid for {h.n_sites} sites")
    terms: list[Term] = []
    for term in h.terms:
        terms.extend(rotate_term(term, axis, angle))
    return canonicalize(Hamiltonian(h.n_sites, tuple(terms)), drop_tol)


def apply_local(
    h: Hamiltonian,
    axis: PauliWord,
    angle: Angle,
    drop_tol: float = DEFAULT_DROP_TOL,
) -> Hamiltonian:
    """Single-site rotation convenience wrapper."""
    if axis.weight != 1:
        raise ValueError(f"local rotation needs a single-site axis, got {axis}")
    return apply_rotation(h, axis, angle, drop_tol)


def _check_step_range(step: GateStep, n_sites: int, index: int | None) -> None:
    if step.max_site() >= n_sites:
        where = "" if index is None else f"step {index}: "
        raise ValueError(
            f"{where}{step.gate} touches site {step.max_site()} "
            f"outside 0..{n_sites - 1}"
        )


def apply_step(h: Hamiltonian, step: GateStep, drop_tol: float = DEFAULT_DROP_TOL) -> Hamiltonian:
    """Conjugate by one step of either kind."""
    if step.gate == "ROT":
        return apply_rotation(h, step.axis, step.angle, drop_tol)
    return apply_clifford(h, step, drop_tol)


def conjugate_sequence(
    h: Hamiltonian,
    script: list[GateStep] | tuple[GateStep, ...],
    drop_tol: float = DEFAULT_DROP_TOL,
) -> Hamiltonian:
    """Conjugate by the steps in listed order (first listed acts first).

    Every step is range-checked before any work happens, so an invalid
    script fails fast naming the first offending step.
    """
    for index, step in enumerate(script):
        if not isinstance(step, GateStep):
            raise ValueError(f"step {index}: expected GateStep, got {step!r}")
        _check_step_range(step, h.n_sites, index)
    out = canonicalize(h, drop_tol)
    for step in script:
        out = apply_step(out, step, drop_tol)
    return out


def dense_gate(step: GateStep, n_sites: int) -> np.ndarray:
    """Exact 2^n x 2^n unitary for one step (oracle use, cap 12 sites).

    The rotation generator is half the axis word, so the unitary is
    cos(eta/2) I + i sin(eta/2) W with W the bare word matrix.  Clifford
    matrices come from their real Pauli-sum expansions and carry no
    global phase.
    """
    if n_sites > DENSE_SITE_CAP:
        raise ValueError(f"dense gate needs {n_sites} sites > cap {DENSE_SITE_CAP}")
    _check_step_range(step, n_sites, index=None)
    dim = 1 << n_sites

    def word_matrix(pairs: list[tuple[int, str]]) -> np.ndarray:
        word = PauliWord.from_pairs(pairs)
        return to_dense(Hamiltonian(n_sites, (Term(1.0, word),))).astype(complex)

    if step.gate == "ROT":
        half = step.angle.radians / 2.0
        return math.cos(half) * np.eye(dim, dtype=complex) + (
            1j * math.sin(half)
        ) * word_matrix(list(step.axis.factors))
    i, j = step.sites
    eye = np.eye(dim, dtype=complex)
    if step.gate == "CZ":
        return 0.5 * (
            eye
            + word_matrix([(i, "Z")])
            + word_matrix([(j, "Z")])
            - word_matrix([(i, "Z"), (j, "Z")])
        )
    if step.gate == "CX":
        return 0.5 * (
            eye
            + word_matrix([(j, "X")])
            + word_matrix([(i, "Z")])
            - word_matrix([(i, "Z"), (j, "X")])
        )
    return 0.5 * (
        eye
        + word_matrix([(i, "X"), (j, "X")])
        + word_matrix([(i, "Y"), (j, "Y")])
        + word_matrix([(i, "Z"), (j, "Z")])
    )


def dense_script(script: list[GateStep] | tuple[GateStep, ...], n_sites: int) -> np.ndarray:
    """Product unitary of a script; step k acts first, so U = U_last ... U_1."""
    out = np.eye(1 << n_sites, dtype=complex)
    for step in script:
        out = dense_gate(step, n_sites) @ out
    return out


def clifford_as_rotations(step: GateStep) -> list[GateStep]:
    """Quarter-turn rotation script realizing one CZ/CX/SWAP conjugation.

    Derived from the gates' exponential forms; each returned list
    contains mutually commuting rotations, so their order is free.
    """
    if step.gate == "ROT":
        raise ValueError("already a rotation")
    i, j = step.sites
    if step.gate == "CZ":
        return [
            rotation(PauliWord.single(j, "Z"), QuarterTurns(-1)),
            rotation(PauliWord.single(i, "Z"), QuarterTurns(-1)),
            rotation(PauliWord.from_pairs([(i, "Z"), (j, "Z")]), QuarterTurns(1)),
        ]
    if step.gate == "CX":
        return [
            rotation(PauliWord.single(j, "X"), QuarterTurns(-1)),
            rotation(PauliWord.single(i, "Z"), QuarterTurns(-1)),
            rotation(PauliWord.from_pairs([(i, "Z"), (j, "X")]), QuarterTurns(1)),
        ]
    return [
        rotation(PauliWord.from_pairs([(i, "X"), (j, "X")]), QuarterTurns(1)),
        rotation(PauliWord.from_pairs([(i, "Y"), (j, "Y")]), QuarterTurns(1)),
        rotation(PauliWord.from_pairs([(i, "Z"), (j, "Z")]), QuarterTurns(1)),
    ]


def hadamard_steps(site: int) -> list[GateStep]:
    """Quarter-turn pair realizing the x<->z exchange on one site."""
    return [
        rotation(PauliWord.single(site, "Y"), QuarterTurns(1)),
        rotation(PauliWord.single(site, "Z"), QuarterTurns(2)),
    ]


def inverse_step(step: GateStep) -> GateStep:
    """Inverse conjugation: Cliffords are involutions, rotations negate."""
    if step.gate != "ROT":
        return step
    if isinstance(step.angle, QuarterTurns):
        return rotation(step.axis, QuarterTurns(-step.angle.k))
    return rotation(step.axis, Radians(-step.angle.value))


def inverse_script(script: list[GateStep] | tuple[GateStep, ...]) -> list[GateStep]:
    return [inverse_step(step) for step in reversed(script)]


def script_to_obj(script: list[GateStep] | tuple[GateStep, ...]) -> list[dict]:
    return [step.to_dict() for step in script]


def script_from_obj(payload: object) -> list[GateStep]:
    if not isinstance(payload, list):
        raise ValueError("gate script must be a JSON list of steps")
    return [GateStep.from_dict(entry) for entry in payload]


def script_to_json(script: list[GateStep] | tuple[GateStep, ...], indent: int | None = None) -> str:
    return json.dumps(script_to_obj(script), indent=indent, sort_keys=True)


def script_from_json(text: str) -> list[GateStep]:
    return script_from_obj(json.loads(text))
