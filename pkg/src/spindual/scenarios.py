"""Duality scenario catalog: transform, verify, and report.

Each scenario bundles a start Hamiltonian, a gate script, and a
verification plan (explicit target term set, self-duality, decoupling
structure, gap law, or structural predicates).  ``run_scenario``
executes the plan and returns a deterministic report suitable for JSON
serialization.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .lattice import Lattice, grid_index, grid_lattice, hex_lattice, netting_roles
from .models import (
    build_cluster_1d,
    build_cluster_lattice,
    build_construction,
    build_staggered_tfim,
    build_tfim,
    build_xz,
    cluster_1d_decoupled_target,
    cluster_lattice_decoupled_target,
    cx_staircase,
    cz_all_links,
    cz_chain,
    ising_cluster_target,
    staggered_dual_target,
    tfim_dual_target,
    xz_dual_target,
)
from .pauli import (
    DEFAULT_DROP_TOL,
    Hamiltonian,
    hamiltonian_from_dict,
    hamiltonian_to_dict,
)
from .rotations import GateStep, conjugate_sequence, script_to_obj
from .spectra import (
    DENSE_SITE_CAP,
    ITERATIVE_SITE_CAP,
    full_spectrum,
    gap,
    spectra_equal,
    to_dense,
)

__all__ = [
    "SCENARIO_NAMES",
    "CheckResult",
    "ComponentPartition",
    "DualityReport",
    "TermDiff",
    "decoupling_components",
    "free_sites",
    "hex_adjacency_predicate",
    "netting_shape_predicate",
    "plaquette_shape_predicate",
    "run_scenario",
    "scenario_catalog",
    "verify_term_equality",
]

SPECTRAL_TOL = 1e-9
GAP_TOL = 1e-9


# ---------------------------------------------------------------------------
# Analysis helpers


@dataclass(frozen=True)
class TermDiff:
    """Outcome of an exact term-set comparison."""

    equal: bool
    differing: tuple[tuple[str, float, float], ...]
    max_deviation: float

    def __bool__(self) -> bool:
        return self.equal


def verify_term_equality(
    h1: Hamiltonian, h2: Hamiltonian, tol: float = DEFAULT_DROP_TOL
) -> TermDiff:
    """Exact comparison of (word, coeff) sets within the drop tolerance.

    Returns the symmetric difference as (word, left coeff, right coeff)
    rows; a missing word counts as coefficient zero.
    """
    left = {t.word: t.coeff for t in h1.terms}
    right = {t.word: t.coeff for t in h2.terms}
    rows = []
    max_dev = 0.0
    for word in sorted(set(left) | set(right), key=lambda w: w.sort_key()):
        a = left.get(word, 0.0)
        b = right.get(word, 0.0)
        dev = abs(a - b)
        max_dev = max(max_dev, dev)
        if dev > tol:
            rows.append((str(word) or "1", a, b))
    return TermDiff(not rows, tuple(rows), max_dev)


def free_sites(h: Hamiltonian) -> tuple[int, ...]:
    """Sites on which no term acts."""
    active = set(h.active_sites())
    return tuple(s for s in range(h.n_sites) if s not in active)


@dataclass(frozen=True)
class ComponentPartition:
    """Connected components of the term co-occurrence graph.

    ``components`` covers exactly the active sites; ``free`` lists sites
    absent from every term; size-1 components are the singletons.
    """

    components: tuple[tuple[int, ...], ...]
    free: tuple[int, ...]

    @property
    def singletons(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.components if len(c) == 1)

    def to_dict(self) -> dict:
        return {
            "components": [list(c) for c in self.components],
            "free_sites": list(self.free),
            "singletons": list(self.singletons),
        }


def decoupling_components(h: Hamiltonian) -> ComponentPartition:
    """Partition active sites by co-occurrence in terms."""
    parent = list(range(h.n_sites))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for term in h.terms:
        sites = term.word.support
        for a, b in zip(sites, sites[1:]):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for site in h.active_sites():
        groups.setdefault(find(site), []).append(site)
    components = tuple(sorted((tuple(sorted(g)) for g in groups.values())))
    return ComponentPartition(components, free_sites(h))


# ---------------------------------------------------------------------------
# Structural predicates for the graphical constructions


def hex_adjacency_predicate(h: Hamiltonian, lat: Lattice) -> tuple[bool, str]:
    """Every multi-site term must live on an edge of the hexagonal net."""
    vertical = 0
    for term in h.terms:
        if term.word.weight > 2:
            return False, f"term {term.word} acts on more than two sites"
        if term.word.weight == 2:
            i, j = term.word.support
            if not lat.has_edge(i, j):
                return False, f"support ({i}, {j}) is not a lattice edge"
            if abs(i - j) > 1:
                vertical += 1
    if vertical == 0:
        return False, "no term lives on a vertical link; chains never coupled"
    return True, f"all 2-site supports are edges; {vertical} vertical links used"


def _unit_squares(rows: int, cols: int) -> set[tuple[int, ...]]:
    squares = set()
    for r in range(rows - 1):
        for c in range(cols - 1):
            s = grid_index(rows, cols, r, c)
            squares.add(tuple(sorted((s, s + 1, s + cols, s + cols + 1))))
    return squares


def plaquette_shape_predicate(
    h: Hamiltonian, rows: int, cols: int
) -> tuple[bool, str]:
    """4-site terms must be monochromatic unit squares, in both colors."""
    squares = _unit_squares(rows, cols)
    colors = set()
    quads = 0
    for term in h.terms:
        if term.word.weight != 4:
            continue
        quads += 1
        axes = {axis for _, axis in term.word.factors}
        if len(axes) != 1:
            return False, f"plaquette {term.word} mixes axes"
        if tuple(term.word.support) not in squares:
            return False, f"support of {term.word} is not a unit square"
        colors.add(axes.pop())
    if quads == 0:
        return False, "no 4-site plaquette terms present"
    if colors != {"X", "Z"}:
        return False, f"only {sorted(colors)} plaquettes present, need X and Z"
    return True, f"{quads} monochromatic square plaquettes in both colors"


def netting_shape_predicate(h: Hamiltonian, n_diamonds: int) -> tuple[bool, str]:
    """Terms must be local fields or monochromatic diamond plaquettes."""
    diamonds = {
        tuple(sorted((r["v"], r["t"], r["b"], r["w"])))
        for r in netting_roles(n_diamonds)
    }
    quads = 0
    for term in h.terms:
        if term.word.weight == 1:
            continue
        if term.word.weight != 4:
            return False, f"term {term.word} is neither a field nor a plaquette"
        axes = {axis for _, axis in term.word.factors}
        if len(axes) != 1:
            return False, f"plaquette {term.word} mixes axes"
        if tuple(term.word.support) not in diamonds:
            return False, f"support of {term.word} is not a diamond"
        quads += 1
    if quads == 0:
        return False, "no plaquette terms present"
    return True, f"{quads} diamond plaquettes plus local fields"


# ---------------------------------------------------------------------------
# Report types


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class DualityReport:
    """Self-contained outcome of one scenario run."""

    scenario: str
    size: dict
    seed: int | None
    checks: tuple[CheckResult, ...]
    transformed: dict
    target: dict | None
    components: ComponentPartition
    script: list
    spectra: dict
    gap_data: dict | None
    max_deviations: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "size": self.size,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "transformed": self.transformed,
            "target": self.target,
            "components": self.components.to_dict(),
            "script": self.script,
            "spectra": self.spectra,
            "gap": self.gap_data,
            "max_deviations": self.max_deviations,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Scenario catalog


@dataclass(frozen=True)
class _Instance:
    """Prepared scenario: inputs plus the verification plan."""

    start: Hamiltonian
    script: list[GateStep]
    target: Hamiltonian | None = None
    target_is_start: bool = False
    expected_components: tuple[tuple[int, ...], ...] | None = None
    expected_free: tuple[int, ...] | None = None
    expected_gap: float | None = None
    check_even_multiplicities: bool = False
    check_order_invariance: bool = False
    predicate: tuple | None = None
    golden: str | None = None


@dataclass(frozen=True)
class _Spec:
    name: str
    summary: str
    size_kind: str  # chain | even_chain | grid | rows | diamonds
    default_size: dict
    other_sizes: tuple[str, ...]
    params: dict
    prepare: object = field(repr=False, default=None)


def _parse_size(spec: _Spec, size) -> dict:
    if size is None:
        return dict(spec.default_size)
    if isinstance(size, dict):
        parsed = dict(size)
    elif isinstance(size, int):
        key = next(iter(spec.default_size))
        parsed = {key: size}
    elif isinstance(size, str):
        text = size.strip().lower()
        if spec.size_kind == "grid":
            parts = text.split("x")
            if len(parts) != 2:
                raise ValueError(
                    f"scenario {spec.name} takes a ROWSxCOLS size, got {size!r}"
                )
            parsed = {"rows": int(parts[0]), "cols": int(parts[1])}
        else:
            key = next(iter(spec.default_size))
            parsed = {key: int(text)}
    else:
        raise ValueError(f"unsupported size {size!r}")
    if set(parsed) != set(spec.default_size):
        raise ValueError(
            f"scenario {spec.name} takes size keys {sorted(spec.default_size)}, "
            f"got {sorted(parsed)}"
        )
    for key, value in parsed.items():
        if not isinstance(value, int) or value < 1:
            raise ValueError(f"size {key} must be a positive integer, got {value!r}")
    return parsed


def _site_count(spec: _Spec, size: dict) -> int:
    if spec.size_kind in ("chain", "even_chain"):
        return size["N"]
    if spec.size_kind == "grid":
        return size["rows"] * size["cols"]
    if spec.size_kind == "rows":
        return size["rows"] * 3
    if spec.size_kind == "diamonds":
        return size["diamonds"] * 5
    raise ValueError(f"unknown size kind {spec.size_kind}")


def _merge_params(spec: _Spec, params: dict | None) -> dict:
    merged = dict(spec.params)
    if params:
        unknown = set(params) - set(merged)
        if unknown:
            raise ValueError(
                f"scenario {spec.name} takes params {sorted(merged)}, "
                f"unknown: {sorted(unknown)}"
            )
        merged.update(params)
    return merged


def _prep_ising_self_dual(size, seed, p) -> _Instance:
    n = size["N"]
    return _Instance(
        start=build_tfim(n, p["g"], p["J"]),
        script=cx_staircase(n),
        target=tfim_dual_target(n, p["g"], p["J"]),
    )


def _prep_ising_to_cluster(size, seed, p) -> _Instance:
    n = size["N"]
    return _Instance(
        start=build_tfim(n, p["g"], p["J"]),
        script=cz_chain(n),
        target=ising_cluster_target(n, p["g"], p["J"]),
        check_order_invariance=True,
    )


def _prep_staggered(size, seed, p) -> _Instance:
    n = size["N"]
    pairs = tuple((2 * k + 1, 2 * k + 2) for k in range(n // 2 - 1))
    return _Instance(
        start=build_staggered_tfim(n, p["g"], p["J"], seed=seed),
        script=cx_staircase(n),
        target=staggered_dual_target(n, p["g"], p["J"], seed=seed),
        expected_components=tuple(sorted(pairs + ((n - 1,),))),
        expected_free=(0,),
        check_even_multiplicities=True,
    )


def _prep_xz(size, seed, p) -> _Instance:
    n = size["N"]
    if seed is None:
        alphas = [p["alpha"]] * (n - 1)
        betas = [p["beta"]] * (n - 1)
    else:
        rng = np.random.default_rng(seed)
        alphas = [float(a) for a in rng.uniform(0.5, 1.5, n - 1)]
        betas = [float(b) for b in rng.uniform(0.5, 1.5, n - 1)]
    evens = tuple(range(0, n, 2))
    odds = tuple(range(1, n, 2))
    return _Instance(
        start=build_xz(n, alphas, betas),
        script=cx_staircase(n),
        target=xz_dual_target(n, alphas, betas),
        expected_components=tuple(sorted((evens, odds))),
        expected_free=(),
    )


def _prep_cluster1d_decouple(size, seed, p) -> _Instance:
    n = size["N"]
    return _Instance(
        start=build_cluster_1d(n, p["J"], p["g"], "z"),
        script=cz_chain(n),
        target=cluster_1d_decoupled_target(n, p["J"], p["g"]),
        expected_components=tuple((s,) for s in range(n)),
        expected_free=(),
        expected_gap=2.0 * math.sqrt(p["g"] ** 2 + p["J"] ** 2),
    )


def _prep_cluster1d_self_dual(size, seed, p) -> _Instance:
    n = size["N"]
    start = build_cluster_1d(n, p["J"], p["g"], "x")
    return _Instance(
        start=start,
        script=cz_chain(n),
        target=build_cluster_1d(n, p["g"], p["J"], "x"),
        target_is_start=(p["J"] == p["g"]),
    )


def _prep_cluster2d_self_dual(size, seed, p) -> _Instance:
    lat = grid_lattice(size["rows"], size["cols"])
    start = build_cluster_lattice(lat, p["J"], p["g"], "x")
    return _Instance(
        start=start,
        script=cz_all_links(lat),
        target=build_cluster_lattice(lat, p["g"], p["J"], "x"),
        target_is_start=(p["J"] == p["g"]),
    )


def _prep_cluster2d_decouple(size, seed, p) -> _Instance:
    lat = grid_lattice(size["rows"], size["cols"])
    return _Instance(
        start=build_cluster_lattice(lat, p["J"], p["g"], "z"),
        script=cz_all_links(lat),
        target=cluster_lattice_decoupled_target(lat, p["J"], p["g"]),
        expected_components=tuple((s,) for s in range(lat.n_sites)),
        expected_free=(),
        expected_gap=2.0 * math.sqrt(p["g"] ** 2 + p["J"] ** 2),
    )


def _prep_hex(size, seed, p) -> _Instance:
    rows, cols = size["rows"], size["cols"]
    start, script, target = build_construction(
        "hex_chains", rows=rows, cols=cols, g=p["g"], J=p["J"]
    )
    golden = "hex_chains_3x3.json" if (rows, cols) == (3, 3) and p == _DEFAULTS["hex_from_chains"] else None
    return _Instance(
        start=start,
        script=script,
        target=target,
        predicate=("hex_adjacency", hex_lattice(rows, cols)),
        golden=golden,
    )


def _prep_plaquette(size, seed, p) -> _Instance:
    rows = size["rows"]
    if rows < 2:
        raise ValueError(f"plaquette construction needs rows >= 2, got {rows}")
    start, script, target = build_construction(
        "plaquette_xz", rows=rows, alpha=p["alpha"], beta=p["beta"], h=p["h"]
    )
    golden = "plaquette_xz_4x3.json" if rows == 4 and p == _DEFAULTS["plaquette_from_xz"] else None
    return _Instance(
        start=start,
        script=script,
        target=target,
        predicate=("plaquette_shapes", (rows, 3)),
        golden=golden,
    )


def _prep_netting(size, seed, p) -> _Instance:
    d = size["diamonds"]
    start, script, target = build_construction(
        "netting_wire", n_diamonds=d, Jz=p["Jz"], Jx=p["Jx"], h=p["h"]
    )
    golden = "netting_wire_2.json" if d == 2 and p == _DEFAULTS["netting_to_plaquettes"] else None
    return _Instance(
        start=start,
        script=script,
        target=target,
        predicate=("netting_shapes", d),
        golden=golden,
    )


_DEFAULTS = {
    "ising_self_dual": {"g": 1.3, "J": 0.7},
    "ising_to_cluster": {"g": 1.3, "J": 0.7},
    "staggered_decouple": {"g": 1.2, "J": 0.8},
    "xz_to_two_ising": {"alpha": 1.0, "beta": 0.8},
    "cluster1d_decouple": {"J": 1.0, "g": 1.0},
    "cluster1d_self_dual": {"J": 1.0, "g": 1.0},
    "cluster2d_self_dual": {"J": 1.0, "g": 1.0},
    "cluster2d_decouple": {"J": 1.0, "g": 1.0},
    "hex_from_chains": {"g": 1.0, "J": 0.8},
    "plaquette_from_xz": {"alpha": 1.0, "beta": 0.8, "h": 0.6},
    "netting_to_plaquettes": {"Jz": 1.0, "Jx": 0.8, "h": 0.6},
}

_CATALOG: dict[str, _Spec] = {}
for _spec in (
    _Spec(
        "ising_self_dual",
        "Open Ising chain in a transverse field maps onto its dual form "
        "under the CX staircase; exact term equality plus spectra.",
        "chain",
        {"N": 6},
        ("4", "8", "10"),
        _DEFAULTS["ising_self_dual"],
        _prep_ising_self_dual,
    ),
    _Spec(
        "ising_to_cluster",
        "CZ on every link dresses the transverse fields into cluster "
        "terms; gate order is irrelevant.",
        "chain",
        {"N": 6},
        ("4", "8"),
        _DEFAULTS["ising_to_cluster"],
        _prep_ising_to_cluster,
    ),
    _Spec(
        "staggered_decouple",
        "Fields on alternating sites only: the CX staircase splits the "
        "chain into two-site blocks, frees the first site, and forces "
        "even degeneracies.",
        "even_chain",
        {"N": 6},
        ("4", "8"),
        _DEFAULTS["staggered_decouple"],
        _prep_staggered,
    ),
    _Spec(
        "xz_to_two_ising",
        "ZZ+XX chain decouples into independent even and odd sublattice "
        "chains under the CX staircase.",
        "even_chain",
        {"N": 6},
        ("4", "8"),
        _DEFAULTS["xz_to_two_ising"],
        _prep_xz,
    ),
    _Spec(
        "cluster1d_decouple",
        "Cluster chain with Z fields becomes non-interacting qubits "
        "under the CZ chain; gap is 2*sqrt(g^2+J^2) at any size.",
        "chain",
        {"N": 5},
        ("4", "6", "8"),
        _DEFAULTS["cluster1d_decouple"],
        _prep_cluster1d_decouple,
    ),
    _Spec(
        "cluster1d_self_dual",
        "Cluster chain with X fields maps onto itself with J and g "
        "exchanged under the CZ chain.",
        "chain",
        {"N": 6},
        ("4", "8"),
        _DEFAULTS["cluster1d_self_dual"],
        _prep_cluster1d_self_dual,
    ),
    _Spec(
        "cluster2d_self_dual",
        "Cluster model on an open grid with X fields is self-dual under "
        "CZ on all links.",
        "grid",
        {"rows": 2, "cols": 3},
        ("2x2", "3x3"),
        _DEFAULTS["cluster2d_self_dual"],
        _prep_cluster2d_self_dual,
    ),
    _Spec(
        "cluster2d_decouple",
        "Cluster model on an open grid with Z fields decouples into "
        "single sites under CZ on all links; size-independent gap.",
        "grid",
        {"rows": 2, "cols": 3},
        ("2x2", "3x3"),
        _DEFAULTS["cluster2d_decouple"],
        _prep_cluster2d_decouple,
    ),
    _Spec(
        "hex_from_chains",
        "Parallel Ising chains CZ-coupled on alternating vertical links "
        "land on a brick-wall hexagonal net.",
        "grid",
        {"rows": 3, "cols": 3},
        ("2x3", "3x4"),
        _DEFAULTS["hex_from_chains"],
        _prep_hex,
    ),
    _Spec(
        "plaquette_from_xz",
        "Two vertical XZ chains and a field column weave into "
        "monochromatic X and Z square plaquettes.",
        "rows",
        {"rows": 4},
        ("2", "3"),
        _DEFAULTS["plaquette_from_xz"],
        _prep_plaquette,
    ),
    _Spec(
        "netting_to_plaquettes",
        "A ferromagnetic netting wire braids into one Z and one X "
        "plaquette per diamond plus local fields.",
        "diamonds",
        {"diamonds": 2},
        ("1", "3"),
        _DEFAULTS["netting_to_plaquettes"],
        _prep_netting,
    ),
):
    _CATALOG[_spec.name] = _spec

SCENARIO_NAMES = tuple(_CATALOG)


def scenario_catalog() -> list[dict]:
    """Names, summaries, size formats and default parameters."""
    out = []
    for spec in _CATALOG.values():
        size_hint = {
            "chain": "N (chain length)",
            "even_chain": "N (even chain length)",
            "grid": "ROWSxCOLS",
            "rows": "ROWS (of a ROWSx3 grid)",
            "diamonds": "DIAMONDS",
        }[spec.size_kind]
        out.append(
            {
                "name": spec.name,
                "summary": spec.summary,
                "default_size": dict(spec.default_size),
                "size_format": size_hint,
                "other_sizes": list(spec.other_sizes),
                "params": dict(spec.params),
            }
        )
    return out


# ---------------------------------------------------------------------------
# Runner


def _load_golden(name: str) -> Hamiltonian:
    text = resources.files("spindual").joinpath("golden", name).read_text()
    return hamiltonian_from_dict(json.loads(text))


def _check_hermitian(transformed: Hamiltonian) -> CheckResult:
    if transformed.n_sites <= 8:
        mat = to_dense(transformed)
        dev = float(np.max(np.abs(mat - mat.conj().T), initial=0.0))
        return CheckResult(
            "hermitian", dev <= 1e-12, f"dense adjoint deviation {dev:.3e}"
        )
    return CheckResult(
        "hermitian", True, "real coefficients on Pauli words (type-enforced)"
    )


def _is_clifford_script(script: list[GateStep]) -> bool:
    from .rotations import QuarterTurns

    return all(
        step.gate in ("CZ", "CX", "SWAP")
        or isinstance(step.angle, QuarterTurns)
        for step in script
    )


def run_scenario(
    name: str,
    size=None,
    seed: int | None = None,
    params: dict | None = None,
) -> DualityReport:
    """Run one catalog scenario and report every check's outcome."""
    if name not in _CATALOG:
        raise ValueError(
            f"unknown scenario {name!r}; known: {', '.join(SCENARIO_NAMES)}"
        )
    spec = _CATALOG[name]
    size = _parse_size(spec, size)
    merged = _merge_params(spec, params)
    n = _site_count(spec, size)
    if n > ITERATIVE_SITE_CAP:
        raise ValueError(
            f"scenario size gives {n} sites, above the {ITERATIVE_SITE_CAP}-site cap"
        )
    inst: _Instance = spec.prepare(size, seed, merged)

    transformed = conjugate_sequence(inst.start, inst.script)
    checks: list[CheckResult] = [_check_hermitian(transformed)]
    max_devs: dict[str, float | None] = {"term_coeff": None, "spectrum": None}

    target = inst.target
    if target is not None:
        diff = verify_term_equality(transformed, target)
        max_devs["term_coeff"] = diff.max_deviation
        detail = (
            "transformed term set equals the target exactly"
            if diff.equal
            else "differs on: "
            + "; ".join(f"{w} ({a} vs {b})" for w, a, b in diff.differing[:6])
        )
        checks.append(CheckResult("term_equality", diff.equal, detail))
        if inst.target_is_start:
            self_diff = verify_term_equality(transformed, inst.start)
            checks.append(
                CheckResult(
                    "self_duality",
                    self_diff.equal,
                    "transformed equals the start Hamiltonian exactly"
                    if self_diff.equal
                    else f"{len(self_diff.differing)} terms differ from the start",
                )
            )

    if _is_clifford_script(inst.script):
        same = transformed.term_count == inst.start.term_count
        checks.append(
            CheckResult(
                "term_count_preserved",
                same,
                f"{inst.start.term_count} terms in, {transformed.term_count} out",
            )
        )

    if transformed.n_sites <= DENSE_SITE_CAP:
        cmp = spectra_equal(inst.start, transformed, tol=SPECTRAL_TOL)
        max_devs["spectrum"] = cmp.max_deviation
        checks.append(
            CheckResult(
                "spectral_equality",
                cmp.equal,
                f"max eigenvalue deviation {cmp.max_deviation:.3e} "
                f"(tol {SPECTRAL_TOL:.0e})",
            )
        )
        spectra_info = {
            "checked": True,
            "tol": SPECTRAL_TOL,
            "max_deviation": cmp.max_deviation,
        }
    else:
        spectra_info = {"checked": False, "tol": SPECTRAL_TOL, "max_deviation": None}

    partition = decoupling_components(transformed)
    if inst.expected_components is not None:
        ok = partition.components == inst.expected_components
        checks.append(
            CheckResult(
                "components_match",
                ok,
                f"components {[list(c) for c in partition.components]}",
            )
        )
    if inst.expected_free is not None:
        ok = partition.free == inst.expected_free
        checks.append(
            CheckResult(
                "free_sites_match",
                ok,
                f"free sites {list(partition.free)}, expected {list(inst.expected_free)}",
            )
        )

    gap_data = None
    if inst.expected_gap is not None:
        res = gap(transformed)
        gap_data = res.to_dict()
        gap_data["expected"] = inst.expected_gap
        dev = abs(res.gap - inst.expected_gap)
        checks.append(
            CheckResult(
                "gap_matches_analytic",
                dev <= GAP_TOL,
                f"gap {res.gap!r} vs analytic {inst.expected_gap!r} "
                f"(deviation {dev:.3e})",
            )
        )

    if inst.check_even_multiplicities:
        spectrum = full_spectrum(transformed)
        odd = [m for _, m in spectrum.multiplicities if m % 2]
        checks.append(
            CheckResult(
                "multiplicities_all_even",
                not odd,
                f"{len(spectrum.multiplicities)} levels, "
                + ("all multiplicities even" if not odd else f"odd counts {odd[:5]}"),
            )
        )

    if inst.check_order_invariance:
        rng = np.random.default_rng(0 if seed is None else seed)
        ok = True
        for _ in range(3):
            shuffled = list(inst.script)
            rng.shuffle(shuffled)
            if conjugate_sequence(inst.start, shuffled) != transformed:
                ok = False
                break
        checks.append(
            CheckResult(
                "cz_order_invariance",
                ok,
                "three random orderings give the identical term set"
                if ok
                else "a reordering changed the result",
            )
        )

    if inst.predicate is not None:
        kind, arg = inst.predicate
        if kind == "hex_adjacency":
            ok, detail = hex_adjacency_predicate(transformed, arg)
        elif kind == "plaquette_shapes":
            ok, detail = plaquette_shape_predicate(transformed, *arg)
        elif kind == "netting_shapes":
            ok, detail = netting_shape_predicate(transformed, arg)
        else:
            raise ValueError(f"unknown predicate {kind!r}")
        checks.append(CheckResult(kind, ok, detail))

    if inst.golden is not None:
        try:
            golden = _load_golden(inst.golden)
        except FileNotFoundError:
            checks.append(
                CheckResult("golden_match", False, f"golden file {inst.golden} missing")
            )
        else:
            gdiff = verify_term_equality(transformed, golden)
            checks.append(
                CheckResult(
                    "golden_match",
                    gdiff.equal,
                    "matches the stored golden term set"
                    if gdiff.equal
                    else f"{len(gdiff.differing)} terms differ from golden",
                )
            )

    return DualityReport(
        scenario=name,
        size=size,
        seed=seed,
        checks=tuple(checks),
        transformed=hamiltonian_to_dict(transformed),
        target=hamiltonian_to_dict(target) if target is not None else None,
        components=partition,
        script=script_to_obj(inst.script),
        spectra=spectra_info,
        gap_data=gap_data,
        max_deviations=max_devs,
    )
