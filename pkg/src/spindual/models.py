"""Model builders, duality targets, and gate-script generators.

Sites are 0-based everywhere.  Builders return canonical Hamiltonians;
the ``*_target`` functions build the explicit term sets that the
corresponding scripts are expected to produce, so transformations can be
verified by exact term comparison rather than spectra alone.
"""
from __future__ import annotations

import numpy as np

from .lattice import Lattice, grid_index, grid_lattice, hex_lattice, netting_roles
from .pauli import Hamiltonian, PauliWord
from .rotations import GateStep, QuarterTurns, cx, cz, rotation

__all__ = [
    "build_tfim",
    "tfim_dual_target",
    "ising_cluster_target",
    "build_staggered_tfim",
    "staggered_dual_target",
    "build_xz",
    "xz_dual_target",
    "build_cluster_1d",
    "cluster_1d_decoupled_target",
    "build_cluster_lattice",
    "cluster_lattice_decoupled_target",
    "cx_staircase",
    "cz_chain",
    "cz_all_links",
    "build_hex_construction",
    "build_plaquette_construction",
    "build_netting_construction",
    "build_construction",
    "CONSTRUCTION_NAMES",
]


def _w(*pairs) -> PauliWord:
    return PauliWord.from_pairs(pairs)


def build_tfim(N: int, g: float = 1.0, J: float = 1.0, boundary: str = "open") -> Hamiltonian:
    """Transverse-field Ising chain: -g sum X_i - J sum Z_i Z_{i+1}.

    The closed variant adds the wrap bond; at N=2 that bond coincides
    with the open one and the coefficients merge.
    """
    if N < 2:
        raise ValueError(f"chain needs N >= 2, got {N}")
    if boundary not in ("open", "closed"):
        raise ValueError(f"boundary must be open or closed, got {boundary!r}")
    terms = [(-g, _w((i, "X"))) for i in range(N)]
    terms += [(-J, _w((i, "Z"), (i + 1, "Z"))) for i in range(N - 1)]
    if boundary == "closed":
        terms.append((-J, _w((0, "Z"), (N - 1, "Z"))))
    return Hamiltonian.from_terms(N, terms)


def tfim_dual_target(N: int, g: float = 1.0, J: float = 1.0) -> Hamiltonian:
    """Image of the open chain under the CX staircase.

    Fields become ferromagnetic XX bonds and vice versa, with the
    leftover boundary terms -J Z on sites 1.. and -g X on the last site.
    """
    if N < 2:
        raise ValueError(f"chain needs N >= 2, got {N}")
    terms = [(-J, _w((i, "Z"))) for i in range(1, N)]
    terms += [(-g, _w((i, "X"), (i + 1, "X"))) for i in range(N - 1)]
    terms.append((-g, _w((N - 1, "X"))))
    return Hamiltonian.from_terms(N, terms)


def ising_cluster_target(N: int, g: float = 1.0, J: float = 1.0) -> Hamiltonian:
    """Image of the open chain under the CZ chain: cluster-dressed fields.

    Every X field picks up Z on its chain neighbors; ZZ bonds commute
    with CZ and pass through.
    """
    if N < 2:
        raise ValueError(f"chain needs N >= 2, got {N}")
    terms = [(-g, _w((0, "X"), (1, "Z")))]
    terms += [
        (-g, _w((i - 1, "Z"), (i, "X"), (i + 1, "Z"))) for i in range(1, N - 1)
    ]
    terms.append((-g, _w((N - 2, "Z"), (N - 1, "X"))))
    terms += [(-J, _w((i, "Z"), (i + 1, "Z"))) for i in range(N - 1)]
    return Hamiltonian.from_terms(N, terms)


def _staggered_couplings(
    N: int, g: float, J: float, seed: int | None
) -> tuple[list[float], list[float]]:
    """Per-term couplings; a seed draws disorder factors in [0.5, 1.5)."""
    if seed is None:
        return [g] * (N // 2), [J] * (N - 1)
    rng = np.random.default_rng(seed)
    gs = [g * float(rng.uniform(0.5, 1.5)) for _ in range(N // 2)]
    js = [J * float(rng.uniform(0.5, 1.5)) for _ in range(N - 1)]
    return gs, js


def build_staggered_tfim(
    N: int, g: float = 1.0, J: float = 1.0, seed: int | None = None
) -> Hamiltonian:
    """Ising chain with X fields on alternating sites 1, 3, ..., N-1.

    Passing a seed draws disordered per-term prefactors; the decoupling
    structure of the dual is independent of them.
    """
    if N < 2 or N % 2:
        raise ValueError(f"staggered chain needs even N >= 2, got {N}")
    gs, js = _staggered_couplings(N, g, J, seed)
    terms = [(-gs[k], _w((2 * k + 1, "X"))) for k in range(N // 2)]
    terms += [(-js[i], _w((i, "Z"), (i + 1, "Z"))) for i in range(N - 1)]
    return Hamiltonian.from_terms(N, terms)


def staggered_dual_target(
    N: int, g: float = 1.0, J: float = 1.0, seed: int | None = None
) -> Hamiltonian:
    """Image of the staggered chain under the CX staircase.

    Each ZZ bond collapses to a Z field on its right site and each X
    field opens into an XX bond one step right (the last one a lone X),
    leaving two-site blocks {2k-1, 2k} and nothing acting on site 0.
    The seed must match the one passed to the builder.
    """
    if N < 2 or N % 2:
        raise ValueError(f"staggered chain needs even N >= 2, got {N}")
    gs, js = _staggered_couplings(N, g, J, seed)
    terms = [(-js[i], _w((i + 1, "Z"))) for i in range(N - 1)]
    terms += [
        (-gs[k], _w((2 * k + 1, "X"), (2 * k + 2, "X"))) for k in range(N // 2 - 1)
    ]
    terms.append((-gs[N // 2 - 1], _w((N - 1, "X"))))
    return Hamiltonian.from_terms(N, terms)


def build_xz(N: int, alphas, betas) -> Hamiltonian:
    """XZ chain: sum alpha_i Z_i Z_{i+1} + beta_i X_i X_{i+1}."""
    if N < 2 or N % 2:
        raise ValueError(f"XZ chain needs even N >= 2, got {N}")
    alphas = list(alphas)
    betas = list(betas)
    if len(alphas) != N - 1 or len(betas) != N - 1:
        raise ValueError(
            f"need N-1={N - 1} couplings, got {len(alphas)} alphas, {len(betas)} betas"
        )
    terms = [(alphas[i], _w((i, "Z"), (i + 1, "Z"))) for i in range(N - 1)]
    terms += [(betas[i], _w((i, "X"), (i + 1, "X"))) for i in range(N - 1)]
    return Hamiltonian.from_terms(N, terms)


def xz_dual_target(N: int, alphas, betas) -> Hamiltonian:
    """Image of the XZ chain under the CX staircase: two decoupled chains.

    Each ZZ bond collapses to a Z field on its right site; each XX bond
    becomes a same-parity XX bond one site further (the last one a lone
    X), so even and odd sites never couple.
    """
    alphas = list(alphas)
    betas = list(betas)
    if len(alphas) != N - 1 or len(betas) != N - 1:
        raise ValueError("coupling arrays must have length N-1")
    terms = [(alphas[i], _w((i + 1, "Z"))) for i in range(N - 1)]
    terms += [(betas[i], _w((i, "X"), (i + 2, "X"))) for i in range(N - 2)]
    terms.append((betas[N - 2], _w((N - 2, "X"))))
    return Hamiltonian.from_terms(N, terms)


def build_cluster_1d(N: int, J: float = 1.0, g: float = 1.0, field_axis: str = "z") -> Hamiltonian:
    """Open-chain cluster Hamiltonian with a uniform local field.

    The stabilizer set is XZ at the left boundary, ZXZ in the bulk and
    ZX at the right boundary (each site's X dressed with Z on its chain
    neighbors).  ``field_axis`` selects -g Z fields (dual to decoupled
    qubits) or -g X fields (the self-dual family).
    """
    if N < 3:
        raise ValueError(f"cluster chain needs N >= 3, got {N}")
    if field_axis not in ("z", "x"):
        raise ValueError(f"field_axis must be 'z' or 'x', got {field_axis!r}")
    terms = [(-J, _w((0, "X"), (1, "Z")))]
    terms += [
        (-J, _w((i - 1, "Z"), (i, "X"), (i + 1, "Z"))) for i in range(1, N - 1)
    ]
    terms.append((-J, _w((N - 2, "Z"), (N - 1, "X"))))
    axis = field_axis.upper()
    terms += [(-g, _w((i, axis))) for i in range(N)]
    return Hamiltonian.from_terms(N, terms)


def cluster_1d_decoupled_target(N: int, J: float = 1.0, g: float = 1.0) -> Hamiltonian:
    """Non-interacting dual of the z-field cluster chain: -J X - g Z per site."""
    terms = [(-J, _w((i, "X"))) for i in range(N)]
    terms += [(-g, _w((i, "Z"))) for i in range(N)]
    return Hamiltonian.from_terms(N, terms)


def build_cluster_lattice(
    lat: Lattice, J: float = 1.0, g: float = 1.0, field_axis: str = "z"
) -> Hamiltonian:
    """Cluster Hamiltonian on any lattice: one Z-dressed X per site plus fields.

    Term at site mu is -J X_mu times Z on every neighbor, so its weight
    is degree(mu) + 1.
    """
    if field_axis not in ("z", "x"):
        raise ValueError(f"field_axis must be 'z' or 'x', got {field_axis!r}")
    axis = field_axis.upper()
    terms = []
    for mu in range(lat.n_sites):
        pairs = [(mu, "X")] + [(nu, "Z") for nu in lat.neighbors(mu)]
        terms.append((-J, PauliWord.from_pairs(pairs)))
    terms += [(-g, _w((mu, axis))) for mu in range(lat.n_sites)]
    return Hamiltonian.from_terms(lat.n_sites, terms)


def cluster_lattice_decoupled_target(lat: Lattice, J: float = 1.0, g: float = 1.0) -> Hamiltonian:
    terms = [(-J, _w((mu, "X"))) for mu in range(lat.n_sites)]
    terms += [(-g, _w((mu, "Z"))) for mu in range(lat.n_sites)]
    return Hamiltonian.from_terms(lat.n_sites, terms)


def cx_staircase(N: int) -> list[GateStep]:
    """CX conjugations along the chain, innermost gate first.

    The step on (N-2, N-1) is listed first and (0, 1) last; each step
    uses the left site as control.
    """
    if N < 2:
        raise ValueError(f"staircase needs N >= 2, got {N}")
    return [cx(i, i + 1) for i in range(N - 2, -1, -1)]


def cz_chain(N: int) -> list[GateStep]:
    """CZ on every chain link; these commute, so order is free."""
    if N < 2:
        raise ValueError(f"chain needs N >= 2, got {N}")
    return [cz(i, i + 1) for i in range(N - 1)]


def cz_all_links(lat: Lattice) -> list[GateStep]:
    """CZ on every lattice edge; commuting, listed in edge order."""
    return [cz(i, j) for i, j in lat.edges]


def build_hex_construction(
    rows: int = 3, cols: int = 3, g: float = 1.0, J: float = 1.0
) -> tuple[Hamiltonian, list[GateStep], Hamiltonian]:
    """Parallel Ising chains coupled into a brick-wall hexagonal net.

    Start: one open transverse-field Ising chain per grid row.  Script:
    CZ on the vertical links with r+c odd, so every site meets at most
    one vertical gate.  Target: ZZ bonds pass through while each X field
    is dressed with Z on its vertical partner, landing every term on an
    edge of the hexagonal net.
    """
    if rows < 2 or cols < 2:
        raise ValueError(f"need at least 2x2 chains, got {rows}x{cols}")
    n = rows * cols

    def site(r: int, c: int) -> int:
        return grid_index(rows, cols, r, c)

    start_terms = []
    for r in range(rows):
        start_terms += [(-g, _w((site(r, c), "X"))) for c in range(cols)]
        start_terms += [
            (-J, _w((site(r, c), "Z"), (site(r, c + 1), "Z"))) for c in range(cols - 1)
        ]
    start = Hamiltonian.from_terms(n, start_terms)

    script = [
        cz(site(r, c), site(r + 1, c))
        for r in range(rows - 1)
        for c in range(cols)
        if (r + c) % 2 == 1
    ]

    def partner(r: int, c: int) -> int | None:
        if r + 1 < rows and (r + c) % 2 == 1:
            return site(r + 1, c)
        if r - 1 >= 0 and (r - 1 + c) % 2 == 1:
            return site(r - 1, c)
        return None

    target_terms = []
    for r in range(rows):
        for c in range(cols):
            p = partner(r, c)
            if p is None:
                target_terms.append((-g, _w((site(r, c), "X"))))
            else:
                target_terms.append((-g, _w((site(r, c), "X"), (p, "Z"))))
        target_terms += [
            (-J, _w((site(r, c), "Z"), (site(r, c + 1), "Z"))) for c in range(cols - 1)
        ]
    target = Hamiltonian.from_terms(n, target_terms)
    return start, script, target


def build_plaquette_construction(
    rows: int = 4, alpha: float = 1.0, beta: float = 0.8, h: float = 0.6
) -> tuple[Hamiltonian, list[GateStep], Hamiltonian]:
    """Two vertical XZ chains and a field column woven into plaquettes.

    Start (rows x 3 grid): columns 0 and 2 carry vertical XZ chains
    (-alpha ZZ, -beta XX per vertical link), column 1 carries -h Z
    fields.  Script: rotate the field column Z -> X, then three CX
    columns (control 1 -> target 0, control 0 -> target 1, control 2 ->
    target 1).  The ZZ bonds of the left chain cascade into Z plaquettes
    on columns 1-2, both chains' XX bonds open into X plaquettes, and
    the fields settle as -h X on column 0.
    """
    if rows < 2:
        raise ValueError(f"need at least 2 rows, got {rows}")
    cols = 3
    n = rows * cols

    def site(r: int, c: int) -> int:
        return grid_index(rows, cols, r, c)

    start_terms = []
    for c in (0, 2):
        for r in range(rows - 1):
            start_terms.append((-alpha, _w((site(r, c), "Z"), (site(r + 1, c), "Z"))))
            start_terms.append((-beta, _w((site(r, c), "X"), (site(r + 1, c), "X"))))
    start_terms += [(-h, _w((site(r, 1), "Z"))) for r in range(rows)]
    start = Hamiltonian.from_terms(n, start_terms)

    script: list[GateStep] = []
    # Z -> +X on the field column so the CX cascade sees control-X terms.
    script += [
        rotation(PauliWord.single(site(r, 1), "Y"), QuarterTurns(-1)) for r in range(rows)
    ]
    script += [cx(site(r, 1), site(r, 0)) for r in range(rows)]
    script += [cx(site(r, 0), site(r, 1)) for r in range(rows)]
    script += [cx(site(r, 2), site(r, 1)) for r in range(rows)]

    target_terms = []
    for r in range(rows - 1):
        target_terms.append(
            (-alpha, _w(
                (site(r, 1), "Z"), (site(r, 2), "Z"),
                (site(r + 1, 1), "Z"), (site(r + 1, 2), "Z"),
            ))
        )
        target_terms.append(
            (-beta, _w(
                (site(r, 0), "X"), (site(r, 1), "X"),
                (site(r + 1, 0), "X"), (site(r + 1, 1), "X"),
            ))
        )
        target_terms.append(
            (-beta, _w(
                (site(r, 1), "X"), (site(r, 2), "X"),
                (site(r + 1, 1), "X"), (site(r + 1, 2), "X"),
            ))
        )
        target_terms.append((-alpha, _w((site(r, 2), "Z"), (site(r + 1, 2), "Z"))))
    target_terms += [(-h, _w((site(r, 0), "X"))) for r in range(rows)]
    target = Hamiltonian.from_terms(n, target_terms)
    return start, script, target


def _cx_as_cz_braid(control: int, target: int) -> list[GateStep]:
    """CX conjugation written as CZ plus local quarter turns on the target."""
    had = [
        rotation(PauliWord.single(target, "Y"), QuarterTurns(1)),
        rotation(PauliWord.single(target, "Z"), QuarterTurns(2)),
    ]
    return [*had, cz(control, target), *had]


def build_netting_construction(
    n_diamonds: int = 2, Jz: float = 1.0, Jx: float = 0.8, h: float = 0.6
) -> tuple[Hamiltonian, list[GateStep], Hamiltonian]:
    """Ferromagnetic netting wire braided into plaquettes plus fields.

    Start: per diamond, ZZ on the two left edges, XX on the two right
    edges, -h Z on the center site; ZZ bridges join consecutive
    diamonds.  Script (CZ braid with local rotations): first collapse
    every bridge with a CX onto its left diamond's right corner, then
    inside each diamond one CX from top to left corner and one from
    right to bottom corner; each CX is emitted as CZ conjugated by
    quarter-turn rotations.  Target: one Z and one X plaquette per
    diamond plus local fields only.
    """
    roles = netting_roles(n_diamonds)
    n = 5 * n_diamonds

    start_terms = []
    for d, role in enumerate(roles):
        start_terms.append((-Jz, _w((role["v"], "Z"), (role["t"], "Z"))))
        start_terms.append((-Jz, _w((role["v"], "Z"), (role["b"], "Z"))))
        start_terms.append((-Jx, _w((role["t"], "X"), (role["w"], "X"))))
        start_terms.append((-Jx, _w((role["b"], "X"), (role["w"], "X"))))
        start_terms.append((-h, _w((role["c"], "Z"))))
        if d + 1 < n_diamonds:
            start_terms.append(
                (-Jz, _w((role["w"], "Z"), (roles[d + 1]["v"], "Z")))
            )
    start = Hamiltonian.from_terms(n, start_terms)

    script: list[GateStep] = []
    for d in range(n_diamonds - 1):
        script += _cx_as_cz_braid(roles[d + 1]["v"], roles[d]["w"])
    for role in roles:
        script += _cx_as_cz_braid(role["t"], role["v"])
        script += _cx_as_cz_braid(role["w"], role["b"])

    target_terms = []
    for d, role in enumerate(roles):
        corners = sorted((role["v"], role["t"], role["b"], role["w"]))
        target_terms.append((-Jz, _w((role["v"], "Z"))))
        target_terms.append((-Jz, PauliWord.from_pairs((s, "Z") for s in corners)))
        target_terms.append((-Jx, PauliWord.from_pairs((s, "X") for s in corners)))
        target_terms.append((-Jx, _w((role["w"], "X"))))
        target_terms.append((-h, _w((role["c"], "Z"))))
        if d + 1 < n_diamonds:
            target_terms.append((-Jz, _w((role["w"], "Z"))))
    target = Hamiltonian.from_terms(n, target_terms)
    return start, script, target


CONSTRUCTION_NAMES = ("hex_chains", "plaquette_xz", "netting_wire")


def build_construction(name: str, **kwargs) -> tuple[Hamiltonian, list[GateStep], Hamiltonian]:
    """Named graphical construction: (start, script, expected target)."""
    if name == "hex_chains":
        return build_hex_construction(**kwargs)
    if name == "plaquette_xz":
        return build_plaquette_construction(**kwargs)
    if name == "netting_wire":
        return build_netting_construction(**kwargs)
    raise ValueError(f"unknown construction {name!r}")
