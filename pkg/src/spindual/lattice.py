"""Lattice geometries: chains, grids, a brick-wall hexagonal net, and netting wires.

A lattice is an undirected graph over sites 0..n-1 plus drawing
positions.  Edges are stored normalized (i < j) and sorted, so lattices
with the same parameters compare equal.  ``to_dict``/``from_dict``
round-trip through the compact parameter form, rebuilding the graph on
read.
"""
from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "Lattice",
    "chain_lattice",
    "grid_lattice",
    "hex_lattice",
    "netting_lattice",
    "grid_index",
    "netting_roles",
    "lattice_from_dict",
]


@dataclass(frozen=True)
class Lattice:
    """Undirected site graph with drawing positions.

    ``params`` holds the constructor arguments (kind-specific) so the
    JSON form stays compact; edges and positions are derived data.
    """

    kind: str
    n_sites: int
    edges: tuple[tuple[int, int], ...]
    positions: tuple[tuple[float, float], ...]
    params: tuple[tuple[str, object], ...]

    def __post_init__(self) -> None:
        for i, j in self.edges:
            if not (0 <= i < j < self.n_sites):
                raise ValueError(f"bad edge ({i}, {j}) for {self.n_sites} sites")
        if len(self.positions) != self.n_sites:
            raise ValueError("positions must cover every site")
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("duplicate edges")

    def neighbors(self, site: int) -> tuple[int, ...]:
        out = []
        for i, j in self.edges:
            if i == site:
                out.append(j)
            elif j == site:
                out.append(i)
        return tuple(sorted(out))

    def degree(self, site: int) -> int:
        return len(self.neighbors(site))

    def has_edge(self, i: int, j: int) -> bool:
        if i > j:
            i, j = j, i
        return (i, j) in set(self.edges)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **dict(self.params)}


def _normalize_edges(edges) -> tuple[tuple[int, int], ...]:
    out = {(min(i, j), max(i, j)) for i, j in edges}
    return tuple(sorted(out))


def chain_lattice(n: int, boundary: str = "open") -> Lattice:
    """Linear chain; ``closed`` adds the wrap-around edge."""
    if n < 2:
        raise ValueError(f"chain needs at least 2 sites, got {n}")
    if boundary not in ("open", "closed"):
        raise ValueError(f"chain boundary must be open or closed, got {boundary!r}")
    edges = [(i, i + 1) for i in range(n - 1)]
    if boundary == "closed" and n > 2:
        edges.append((0, n - 1))
    return Lattice(
        "chain",
        n,
        _normalize_edges(edges),
        tuple((float(i), 0.0) for i in range(n)),
        (("n", n), ("boundary", boundary)),
    )


def grid_index(rows: int, cols: int, r: int, c: int) -> int:
    """Row-major site index."""
    if not (0 <= r < rows and 0 <= c < cols):
        raise ValueError(f"({r}, {c}) outside {rows}x{cols} grid")
    return r * cols + c


def grid_lattice(rows: int, cols: int, boundary: str = "open") -> Lattice:
    """Rectangular grid with nearest-neighbor links."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ValueError(f"grid {rows}x{cols} too small")
    if boundary not in ("open", "periodic"):
        raise ValueError(f"grid boundary must be open or periodic, got {boundary!r}")
    edges = set()
    for r in range(rows):
        for c in range(cols):
            here = grid_index(rows, cols, r, c)
            if c + 1 < cols:
                edges.add((here, grid_index(rows, cols, r, c + 1)))
            if r + 1 < rows:
                edges.add((here, grid_index(rows, cols, r + 1, c)))
            if boundary == "periodic":
                if cols > 2:
                    other = grid_index(rows, cols, r, (c + 1) % cols)
                    edges.add((min(here, other), max(here, other)))
                if rows > 2:
                    other = grid_index(rows, cols, (r + 1) % rows, c)
                    edges.add((min(here, other), max(here, other)))
    positions = tuple(
        (float(c), float(-r)) for r in range(rows) for c in range(cols)
    )
    return Lattice(
        "grid",
        rows * cols,
        _normalize_edges(edges),
        positions,
        (("rows", rows), ("cols", cols), ("boundary", boundary)),
    )


def hex_lattice(rows: int, cols: int) -> Lattice:
    """Brick-wall net: all horizontal links, vertical links where r+c is odd.

    Dropping every second vertical from the square grid leaves each site
    with at most three neighbors, which is the hexagonal (honeycomb)
    connectivity drawn as bricks.
    """
    if rows < 2 or cols < 2:
        raise ValueError(f"hexagonal net needs at least 2x2, got {rows}x{cols}")
    edges = set()
    for r in range(rows):
        for c in range(cols):
            here = grid_index(rows, cols, r, c)
            if c + 1 < cols:
                edges.add((here, grid_index(rows, cols, r, c + 1)))
            if r + 1 < rows and (r + c) % 2 == 1:
                edges.add((here, grid_index(rows, cols, r + 1, c)))
    positions = tuple(
        (float(c), float(-r)) for r in range(rows) for c in range(cols)
    )
    return Lattice(
        "hexagonal",
        rows * cols,
        _normalize_edges(edges),
        positions,
        (("rows", rows), ("cols", cols)),
    )


def netting_roles(n_diamonds: int) -> list[dict[str, int]]:
    """Site roles per diamond: v (left), t (top), b (bottom), w (right), c (center)."""
    if n_diamonds < 1:
        raise ValueError("netting needs at least one diamond")
    return [
        {"v": 5 * d, "t": 5 * d + 1, "b": 5 * d + 2, "w": 5 * d + 3, "c": 5 * d + 4}
        for d in range(n_diamonds)
    ]


def netting_lattice(n_diamonds: int) -> Lattice:
    """Chain of diamonds with a field-only center site in each.

    Each diamond has corners v (left), t (top), b (bottom), w (right)
    and an isolated center c; consecutive diamonds are bridged w -> v.
    """
    roles = netting_roles(n_diamonds)
    edges = []
    positions: list[tuple[float, float]] = []
    for d, role in enumerate(roles):
        edges.extend(
            [
                (role["v"], role["t"]),
                (role["v"], role["b"]),
                (role["t"], role["w"]),
                (role["b"], role["w"]),
            ]
        )
        if d + 1 < n_diamonds:
            edges.append((role["w"], roles[d + 1]["v"]))
        x = 3.0 * d
        positions.extend(
            [(x, 0.0), (x + 1.0, 1.0), (x + 1.0, -1.0), (x + 2.0, 0.0), (x + 1.0, 0.0)]
        )
    return Lattice(
        "netting",
        5 * n_diamonds,
        _normalize_edges(edges),
        tuple(positions),
        (("diamonds", n_diamonds),),
    )


def lattice_from_dict(payload: object) -> Lattice:
    """Rebuild a lattice from its compact JSON form."""
    if not isinstance(payload, dict) or "kind" not in payload:
        raise ValueError(f"lattice payload must be an object with 'kind', got {payload!r}")
    kind = payload["kind"]
    try:
        if kind == "chain":
            return chain_lattice(payload["n"], payload.get("boundary", "open"))
        if kind == "grid":
            return grid_lattice(
                payload["rows"], payload["cols"], payload.get("boundary", "open")
            )
        if kind == "hexagonal":
            return hex_lattice(payload["rows"], payload["cols"])
        if kind == "netting":
            return netting_lattice(payload["diamonds"])
    except KeyError as exc:
        raise ValueError(f"lattice payload missing key {exc.args[0]!r}") from None
    raise ValueError(f"unknown lattice kind {kind!r}")
