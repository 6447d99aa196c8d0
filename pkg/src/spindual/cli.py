"""Command-line interface.

Commands: ``scenario list|run``, ``transform``, ``spectrum``,
``gapscan``, ``serve``.  Exit codes: 0 all checks passed, 1 a scenario
check failed, 2 usage or input error.  Machine-readable JSON goes to
stdout; status lines go to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .pauli import (
    Hamiltonian,
    hamiltonian_from_dict,
    hamiltonian_to_json,
)
from .rotations import conjugate_sequence, script_from_obj
from .scenarios import SCENARIO_NAMES, run_scenario, scenario_catalog
from .spectra import extremal_eigs, full_spectrum, gap_scan

RESULTS_ENV = "SPINDUAL_RESULTS"


class CliError(Exception):
    """Usage/input error; message printed to stderr, exit code 2."""


def _read_json(path: str) -> object:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise CliError(f"{path}: no such file") from None
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise CliError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None


def _read_hamiltonian(path: str) -> Hamiltonian:
    try:
        return hamiltonian_from_dict(_read_json(path))
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from None


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from None


def _size_tag(size: dict) -> str:
    if set(size) == {"rows", "cols"}:
        return f"{size['rows']}x{size['cols']}"
    return str(next(iter(size.values())))


def _cmd_scenario(args) -> int:
    if args.action == "list":
        for entry in scenario_catalog():
            defaults = ", ".join(f"{k}={v}" for k, v in entry["default_size"].items())
            params = ", ".join(f"{k}={v}" for k, v in entry["params"].items())
            print(f"{entry['name']}")
            print(f"    {entry['summary']}")
            print(f"    size: {entry['size_format']} (default {defaults}; "
                  f"also {', '.join(entry['other_sizes'])})")
            print(f"    params: {params}")
        return 0
    try:
        report = run_scenario(args.name, size=args.size, seed=args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    payload = report.to_json()
    sys.stdout.write(payload)
    out_dir = args.out or os.environ.get(RESULTS_ENV)
    if out_dir:
        try:
            os.makedirs(out_dir, exist_ok=True)
        except OSError as exc:
            raise CliError(f"{out_dir}: {exc.strerror or exc}") from None
        path = os.path.join(
            out_dir, f"report_{report.scenario}_{_size_tag(report.size)}.json"
        )
        _write_text(path, payload)
        print(f"report written to {path}", file=sys.stderr)
    status = "PASS" if report.passed else "FAIL"
    failed = [c.name for c in report.checks if not c.passed]
    tail = f" (failed: {', '.join(failed)})" if failed else ""
    print(f"{status} {report.scenario}{tail}", file=sys.stderr)
    return 0 if report.passed else 1


def _cmd_transform(args) -> int:
    h = _read_hamiltonian(args.hamiltonian)
    try:
        script = script_from_obj(_read_json(args.script))
        out = conjugate_sequence(h, script)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    text = hamiltonian_to_json(out, indent=2) + "\n"
    if args.out:
        _write_text(args.out, text)
        print(f"transformed Hamiltonian written to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def _spectrum_payload(result) -> dict:
    payload = result.to_dict()
    groups = result.multiplicities
    payload["ground_energy"] = groups[0][0] if groups else None
    payload["ground_multiplicity"] = groups[0][1] if groups else None
    payload["gap"] = groups[1][0] - groups[0][0] if len(groups) > 1 else None
    return payload


def _cmd_spectrum(args) -> int:
    h = _read_hamiltonian(args.hamiltonian)
    try:
        if args.k is not None:
            if args.k < 1:
                raise CliError("--k must be at least 1")
            result = extremal_eigs(h, k=args.k)
        else:
            result = full_spectrum(h)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    sys.stdout.write(json.dumps(_spectrum_payload(result), indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_gapscan(args) -> int:
    h0 = _read_hamiltonian(args.h0)
    h1 = _read_hamiltonian(args.h1)
    try:
        scan = gap_scan(h0, h1, grid=args.grid)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    sys.stdout.write(json.dumps(scan.to_dict(), indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(cap_dense=args.cap_dense, cap_iter=args.cap_iter)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spindual",
        description="Pauli-string dualities: transform, verify, diagonalize.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_scen = sub.add_parser("scenario", help="list or run verification scenarios")
    scen_sub = p_scen.add_subparsers(dest="action", required=True)
    scen_sub.add_parser("list", help="print the scenario catalog")
    p_run = scen_sub.add_parser("run", help="run one scenario and print its report")
    p_run.add_argument("name", choices=SCENARIO_NAMES, metavar="NAME",
                       help=f"one of: {', '.join(SCENARIO_NAMES)}")
    p_run.add_argument("--size", help="chain length N, ROWSxCOLS, or diamond count")
    p_run.add_argument("--seed", type=int, help="seed for disorder/orderings")
    p_run.add_argument("--out", help=f"directory for the report file "
                                     f"(default: ${RESULTS_ENV} if set)")

    p_tr = sub.add_parser("transform", help="conjugate a Hamiltonian by a gate script")
    p_tr.add_argument("--hamiltonian", required=True, help="Hamiltonian JSON file")
    p_tr.add_argument("--script", required=True, help="GateScript JSON file")
    p_tr.add_argument("--out", help="output file (default: stdout)")

    p_sp = sub.add_parser("spectrum", help="diagonalize a Hamiltonian")
    p_sp.add_argument("--hamiltonian", required=True, help="Hamiltonian JSON file")
    p_sp.add_argument("--k", type=int, help="lowest k eigenvalues (iterative path)")

    p_gs = sub.add_parser("gapscan", help="scan the gap of (1-s) H0 + s H1")
    p_gs.add_argument("--h0", required=True, help="endpoint Hamiltonian at s=0")
    p_gs.add_argument("--h1", required=True, help="endpoint Hamiltonian at s=1")
    p_gs.add_argument("--grid", type=int, default=21, help="number of s points")

    p_sv = sub.add_parser("serve", help="start the HTTP session service")
    p_sv.add_argument("--port", type=int, default=8000)
    p_sv.add_argument("--host", default="127.0.0.1")
    p_sv.add_argument("--cap-dense", type=int, default=12,
                      help="max sites for dense spectra")
    p_sv.add_argument("--cap-iter", type=int, default=20,
                      help="max sites for iterative spectra")
    return parser


_HANDLERS = {
    "scenario": _cmd_scenario,
    "transform": _cmd_transform,
    "spectrum": _cmd_spectrum,
    "gapscan": _cmd_gapscan,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
