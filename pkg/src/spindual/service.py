"""HTTP session service for interactive duality exploration.

Stateful in-memory sessions: create a model from the catalog, apply
gate steps one at a time, undo by replay, and query spectra within the
configured caps.  Mutations within one session are serialized by a
per-session lock; spectra above 8 sites run on a background worker pool
with job polling so they never block the gate path.
"""
from __future__ import annotations

import hashlib
import json
import os
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from .lattice import grid_lattice
from .models import (
    build_cluster_1d,
    build_cluster_lattice,
    build_staggered_tfim,
    build_tfim,
    build_xz,
)
from .pauli import (
    Hamiltonian,
    hamiltonian_from_dict,
    hamiltonian_to_dict,
    hamiltonian_to_json,
)
from .rotations import GateStep, conjugate_sequence, script_from_obj, script_to_obj
from .scenarios import (
    SCENARIO_NAMES,
    decoupling_components,
    run_scenario,
    scenario_catalog,
)
from .spectra import extremal_eigs, full_spectrum

INLINE_SITE_LIMIT = 8
SHAPES = {"X": "square", "Y": "hexagon", "Z": "circle"}


# ---------------------------------------------------------------------------
# Model catalog


def _chain_positions(n: int) -> list[list[float]]:
    return [[float(i), 0.0] for i in range(n)]


def _build_tfim_model(p: dict) -> tuple[Hamiltonian, list[list[float]]]:
    h = build_tfim(p["N"], p["g"], p["J"], p["boundary"])
    return h, _chain_positions(p["N"])


def _build_staggered_model(p: dict) -> tuple[Hamiltonian, list[list[float]]]:
    h = build_staggered_tfim(p["N"], p["g"], p["J"], seed=p["seed"])
    return h, _chain_positions(p["N"])


def _build_xz_model(p: dict) -> tuple[Hamiltonian, list[list[float]]]:
    n = p["N"]
    h = build_xz(n, [p["alpha"]] * (n - 1), [p["beta"]] * (n - 1))
    return h, _chain_positions(n)


def _build_cluster_chain_model(p: dict) -> tuple[Hamiltonian, list[list[float]]]:
    h = build_cluster_1d(p["N"], p["J"], p["g"], p["field_axis"])
    return h, _chain_positions(p["N"])


def _build_cluster_grid_model(p: dict) -> tuple[Hamiltonian, list[list[float]]]:
    lat = grid_lattice(p["rows"], p["cols"], p["boundary"])
    h = build_cluster_lattice(lat, p["J"], p["g"], p["field_axis"])
    return h, [list(pos) for pos in lat.positions]


MODELS: dict[str, dict] = {
    "tfim": {
        "summary": "Transverse-field Ising chain: -g sum X - J sum ZZ.",
        "params": {
            "N": {"type": "int", "min": 2, "default": 6},
            "g": {"type": "float", "default": 1.0},
            "J": {"type": "float", "default": 1.0},
            "boundary": {"type": "choice", "choices": ["open", "closed"],
                         "default": "open"},
        },
        "build": _build_tfim_model,
    },
    "staggered_tfim": {
        "summary": "Ising chain with X fields on alternating sites.",
        "params": {
            "N": {"type": "int", "min": 2, "even": True, "default": 6},
            "g": {"type": "float", "default": 1.0},
            "J": {"type": "float", "default": 1.0},
            "seed": {"type": "int", "default": None, "optional": True},
        },
        "build": _build_staggered_model,
    },
    "xz_chain": {
        "summary": "Uniform ZZ + XX chain.",
        "params": {
            "N": {"type": "int", "min": 2, "even": True, "default": 6},
            "alpha": {"type": "float", "default": 1.0},
            "beta": {"type": "float", "default": 0.8},
        },
        "build": _build_xz_model,
    },
    "cluster_chain": {
        "summary": "Open-chain cluster Hamiltonian with local fields.",
        "params": {
            "N": {"type": "int", "min": 3, "default": 6},
            "J": {"type": "float", "default": 1.0},
            "g": {"type": "float", "default": 1.0},
            "field_axis": {"type": "choice", "choices": ["z", "x"], "default": "z"},
        },
        "build": _build_cluster_chain_model,
    },
    "cluster_grid": {
        "summary": "Cluster Hamiltonian on a rectangular grid with local fields.",
        "params": {
            "rows": {"type": "int", "min": 1, "default": 2},
            "cols": {"type": "int", "min": 1, "default": 3},
            "J": {"type": "float", "default": 1.0},
            "g": {"type": "float", "default": 1.0},
            "field_axis": {"type": "choice", "choices": ["z", "x"], "default": "z"},
            "boundary": {"type": "choice", "choices": ["open", "periodic"],
                         "default": "open"},
        },
        "build": _build_cluster_grid_model,
    },
}


def _validate_params(name: str, given: dict) -> dict:
    schema = MODELS[name]["params"]
    unknown = set(given) - set(schema)
    if unknown:
        raise ValueError(f"unknown params for {name}: {sorted(unknown)}")
    out = {}
    for key, rule in schema.items():
        value = given.get(key, rule["default"])
        if value is None and rule.get("optional"):
            out[key] = None
            continue
        if rule["type"] == "int":
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"param {key} must be an integer, got {value!r}")
            if "min" in rule and value < rule["min"]:
                raise ValueError(f"param {key} must be >= {rule['min']}, got {value}")
            if rule.get("even") and value % 2:
                raise ValueError(f"param {key} must be even, got {value}")
        elif rule["type"] == "float":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"param {key} must be a number, got {value!r}")
            value = float(value)
        elif rule["type"] == "choice":
            if value not in rule["choices"]:
                raise ValueError(
                    f"param {key} must be one of {rule['choices']}, got {value!r}"
                )
        out[key] = value
    return out


def model_catalog() -> list[dict]:
    out = []
    for name, entry in MODELS.items():
        params = {
            key: {k: v for k, v in rule.items() if k != "build"}
            for key, rule in entry["params"].items()
        }
        out.append({"name": name, "summary": entry["summary"], "params": params})
    out.append(
        {
            "name": "custom",
            "summary": "Upload a Hamiltonian JSON directly.",
            "params": {"hamiltonian": {"type": "hamiltonian_json"}},
        }
    )
    return out


# ---------------------------------------------------------------------------
# Diagram data


def diagram_data(h: Hamiltonian, positions: list[list[float]]) -> dict:
    """Symbolic drawing data: the fixed shape convention plus connections."""
    connections = []
    site_symbols: list[list[dict]] = [[] for _ in range(h.n_sites)]
    for index, term in enumerate(h.terms):
        sites = []
        for site, axis in term.word.factors:
            sites.append({"site": site, "axis": axis, "shape": SHAPES[axis]})
            site_symbols[site].append(
                {"term": index, "axis": axis, "shape": SHAPES[axis]}
            )
        connections.append(
            {"term": index, "coeff": term.coeff, "sites": sites}
        )
    return {
        "positions": positions,
        "symbol_convention": dict(SHAPES),
        "site_symbols": site_symbols,
        "connections": connections,
    }


# ---------------------------------------------------------------------------
# Sessions


def _state_hash(h: Hamiltonian) -> str:
    return hashlib.sha256(hamiltonian_to_json(h).encode()).hexdigest()


@dataclass
class Session:
    id: str
    model: dict
    base: Hamiltonian
    positions: list[list[float]]
    current: Hamiltonian
    steps: list[GateStep] = field(default_factory=list)
    undo_stack: list[tuple[GateStep, str]] = field(default_factory=list)
    created: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def state(self) -> dict:
        partition = decoupling_components(self.current)
        return {
            "id": self.id,
            "model": self.model,
            "n_sites": self.current.n_sites,
            "hamiltonian": hamiltonian_to_dict(self.current),
            "diagram": diagram_data(self.current, self.positions),
            "components": [list(c) for c in partition.components],
            "free_sites": list(partition.free),
            "script": script_to_obj(self.steps),
            "undo_depth": len(self.undo_stack),
            "state_hash": _state_hash(self.current),
        }


class SessionStore:
    """Thread-safe session map with per-session mutation locks."""

    def __init__(self, snapshot_dir: str | None = None) -> None:
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._snapshot_dir = snapshot_dir
        if snapshot_dir:
            os.makedirs(snapshot_dir, exist_ok=True)

    def create(self, model: dict, base: Hamiltonian,
               positions: list[list[float]]) -> Session:
        session = Session(
            id=uuid.uuid4().hex[:12],
            model=model,
            base=base,
            positions=positions,
            current=base,
        )
        with self._lock:
            self._sessions[session.id] = session
        self._snapshot(session)
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        return session

    def apply_step(self, session_id: str, step: GateStep) -> Session:
        session = self.get(session_id)
        with session.lock:
            if step.max_site() >= session.current.n_sites:
                raise ValueError(
                    f"step acts on site {step.max_site()}, "
                    f"session has {session.current.n_sites} sites"
                )
            before = _state_hash(session.current)
            session.current = conjugate_sequence(session.current, [step])
            session.steps.append(step)
            session.undo_stack.append((step, before))
        self._snapshot(session)
        return session

    def undo(self, session_id: str) -> Session:
        session = self.get(session_id)
        with session.lock:
            if not session.undo_stack:
                raise ValueError("nothing to undo")
            _, expected = session.undo_stack.pop()
            session.steps.pop()
            replayed = conjugate_sequence(session.base, session.steps)
            if _state_hash(replayed) != expected:
                raise RuntimeError("replay hash mismatch; session corrupted")
            session.current = replayed
        self._snapshot(session)
        return session

    def _snapshot(self, session: Session) -> None:
        if not self._snapshot_dir:
            return
        payload = {
            "id": session.id,
            "model": session.model,
            "hamiltonian": hamiltonian_to_dict(session.current),
            "script": script_to_obj(session.steps),
        }
        path = os.path.join(self._snapshot_dir, f"{session.id}.json")
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# Spectrum jobs


class SpectrumJobs:
    """Background spectra keyed by (state hash, k); results cached."""

    def __init__(self, workers: int = 2) -> None:
        self._pool = ThreadPoolExecutor(max_workers=workers)
        self._jobs: dict[str, dict] = {}
        self._by_key: dict[tuple[str, int | None], str] = {}
        self._lock = threading.Lock()

    @staticmethod
    def compute(h: Hamiltonian, k: int | None) -> dict:
        result = extremal_eigs(h, k=k) if k is not None else full_spectrum(h)
        payload = result.to_dict()
        groups = result.multiplicities
        payload["ground_energy"] = groups[0][0] if groups else None
        payload["ground_multiplicity"] = groups[0][1] if groups else None
        payload["gap"] = groups[1][0] - groups[0][0] if len(groups) > 1 else None
        return payload

    def submit(self, h: Hamiltonian, k: int | None) -> str:
        key = (_state_hash(h), k)
        with self._lock:
            if key in self._by_key:
                return self._by_key[key]
            job_id = uuid.uuid4().hex[:12]
            self._jobs[job_id] = {"status": "pending", "result": None, "error": None}
            self._by_key[key] = job_id

        def work() -> None:
            try:
                result = self.compute(h, k)
            except Exception as exc:  # surfaced through polling
                with self._lock:
                    self._jobs[job_id].update(status="error", error=str(exc))
            else:
                with self._lock:
                    self._jobs[job_id].update(status="done", result=result)

        self._pool.submit(work)
        return job_id

    def status(self, job_id: str) -> dict:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                raise KeyError(job_id)
            return dict(job)


# ---------------------------------------------------------------------------
# Application


def create_app(
    cap_dense: int = 12,
    cap_iter: int = 20,
    snapshot_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="spindual service", version="0.1.0")
    store = SessionStore(snapshot_dir)
    jobs = SpectrumJobs()
    app.state.store = store

    def get_session(session_id: str) -> Session:
        try:
            return store.get(session_id)
        except KeyError:
            raise HTTPException(404, f"unknown session {session_id!r}") from None

    @app.get("/models")
    def models() -> list[dict]:
        return model_catalog()

    @app.get("/scenarios")
    def scenarios() -> list[dict]:
        return scenario_catalog()

    @app.post("/scenarios/{name}/run")
    def scenario_run(name: str, body: dict | None = None) -> dict:
        if name not in SCENARIO_NAMES:
            raise HTTPException(404, f"unknown scenario {name!r}")
        body = body or {}
        try:
            report = run_scenario(name, size=body.get("size"), seed=body.get("seed"))
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from None
        return report.to_dict()

    @app.post("/sessions", status_code=201)
    def create_session(body: dict) -> dict:
        if not isinstance(body, dict) or "model" not in body:
            raise HTTPException(422, "body must be {'model': name, 'params': {...}}")
        name = body["model"]
        params = body.get("params", {})
        if name == "custom":
            try:
                h = hamiltonian_from_dict(body.get("hamiltonian"))
            except ValueError as exc:
                raise HTTPException(422, str(exc)) from None
            positions = body.get("positions") or _chain_positions(h.n_sites)
            if len(positions) != h.n_sites:
                raise HTTPException(422, "positions must cover every site")
            session = store.create({"model": "custom"}, h, positions)
            return session.state()
        if name not in MODELS:
            raise HTTPException(422, f"unknown model {name!r}")
        if not isinstance(params, dict):
            raise HTTPException(422, "params must be an object")
        try:
            clean = _validate_params(name, params)
            h, positions = MODELS[name]["build"](clean)
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from None
        session = store.create({"model": name, "params": clean}, h, positions)
        return session.state()

    @app.get("/sessions/{session_id}")
    def session_state(session_id: str) -> dict:
        return get_session(session_id).state()

    @app.post("/sessions/{session_id}/gates")
    def apply_gate(session_id: str, body: dict) -> dict:
        get_session(session_id)
        try:
            steps = script_from_obj([body])
            session = store.apply_step(session_id, steps[0])
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from None
        return session.state()

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str) -> dict:
        get_session(session_id)
        try:
            session = store.undo(session_id)
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from None
        return session.state()

    @app.get("/sessions/{session_id}/spectrum")
    def spectrum(session_id: str, k: int | None = None) -> JSONResponse:
        session = get_session(session_id)
        h = session.current
        n = h.n_sites
        if k is not None and k < 1:
            raise HTTPException(422, "k must be at least 1")
        if k is None and n > cap_dense:
            raise HTTPException(
                403,
                f"full spectrum needs a dense matrix; {n} sites exceeds the "
                f"dense cap of {cap_dense}. Request the lowest eigenvalues "
                f"with ?k= (iterative, up to {cap_iter} sites).",
            )
        if n > cap_iter:
            raise HTTPException(
                403,
                f"{n} sites exceeds the iterative cap of {cap_iter}; "
                "no spectrum available at this size.",
            )
        if n <= INLINE_SITE_LIMIT:
            return JSONResponse({"status": "done", "result": jobs.compute(h, k)})
        job_id = jobs.submit(h, k)
        job = jobs.status(job_id)
        if job["status"] == "done":
            return JSONResponse({"status": "done", "result": job["result"]})
        return JSONResponse(
            {
                "status": job["status"],
                "job_id": job_id,
                "poll": f"/sessions/{session_id}/spectrum/jobs/{job_id}",
            },
            status_code=202,
        )

    @app.get("/sessions/{session_id}/spectrum/jobs/{job_id}")
    def spectrum_job(session_id: str, job_id: str) -> dict:
        get_session(session_id)
        try:
            job = jobs.status(job_id)
        except KeyError:
            raise HTTPException(404, f"unknown job {job_id!r}") from None
        out = {"status": job["status"], "job_id": job_id}
        if job["status"] == "done":
            out["result"] = job["result"]
        if job["status"] == "error":
            out["error"] = job["error"]
        return out

    return app
