/**
 * In-memory stand-in for the spindual HTTP service, used by the browser
 * tests. It ports the exact Pauli-conjugation rules of the backend so
 * replayed fixtures must match byte for byte (including state hashes),
 * which keeps the fake honest against the captured real responses.
 */

import { createHash } from "node:crypto";
import modelsFixture from "./fixtures/models.json";
import scenariosFixture from "./fixtures/scenarios.json";
import type { Axis, SpectrumResult } from "../src/types";

type Pair = [number, Axis];

interface FTerm {
  coeff: number;
  word: Pair[];
}

interface FHam {
  nSites: number;
  terms: FTerm[];
}

type FStep =
  | { gate: "CZ" | "CX" | "SWAP"; sites: [number, number] }
  | { gate: "ROT"; axis: Pair[]; quarterTurns?: number; angle?: number };

const DROP_TOL = 1e-12;
const DENSE_CAP = 12;
const ITER_CAP = 20;
const INLINE_LIMIT = 8;

// Single-site products a.b = i^k . c; k is the exponent of i, c null = identity.
const SITE_MUL: Record<string, [number, Axis | null]> = {
  XX: [0, null],
  YY: [0, null],
  ZZ: [0, null],
  XY: [1, "Z"],
  YX: [3, "Z"],
  YZ: [1, "X"],
  ZY: [3, "X"],
  ZX: [1, "Y"],
  XZ: [3, "Y"],
};

type PauliOrI = Axis | "I";
type TableRow = [number, PauliOrI, PauliOrI];

const CZ_TABLE: Record<string, TableRow> = {
  II: [1, "I", "I"],
  IX: [1, "Z", "X"],
  IY: [1, "Z", "Y"],
  IZ: [1, "I", "Z"],
  XI: [1, "X", "Z"],
  XX: [1, "Y", "Y"],
  XY: [-1, "Y", "X"],
  XZ: [1, "X", "I"],
  YI: [1, "Y", "Z"],
  YX: [-1, "X", "Y"],
  YY: [1, "X", "X"],
  YZ: [1, "Y", "I"],
  ZI: [1, "Z", "I"],
  ZX: [1, "I", "X"],
  ZY: [1, "I", "Y"],
  ZZ: [1, "Z", "Z"],
};

const CX_TABLE: Record<string, TableRow> = {
  II: [1, "I", "I"],
  IX: [1, "I", "X"],
  IY: [1, "Z", "Y"],
  IZ: [1, "Z", "Z"],
  XI: [1, "X", "X"],
  XX: [1, "X", "I"],
  XY: [1, "Y", "Z"],
  XZ: [-1, "Y", "Y"],
  YI: [1, "Y", "X"],
  YX: [1, "Y", "I"],
  YY: [-1, "X", "Z"],
  YZ: [1, "X", "Y"],
  ZI: [1, "Z", "I"],
  ZX: [1, "Z", "X"],
  ZY: [1, "I", "Y"],
  ZZ: [1, "I", "Z"],
};

function sortPairs(pairs: Pair[]): Pair[] {
  return [...pairs].sort((a, b) => a[0] - b[0]);
}

function axisOn(word: Pair[], site: number): PauliOrI {
  for (const [s, axis] of word) if (s === site) return axis;
  return "I";
}

/** a.b = i^k . word; returns [k mod 4, merged sorted word]. */
function wordMultiply(a: Pair[], b: Pair[]): [number, Pair[]] {
  const out: Pair[] = [];
  let k = 0;
  let ia = 0;
  let ib = 0;
  while (ia < a.length && ib < b.length) {
    const [sa, pa] = a[ia]!;
    const [sb, pb] = b[ib]!;
    if (sa < sb) {
      out.push([sa, pa]);
      ia += 1;
    } else if (sb < sa) {
      out.push([sb, pb]);
      ib += 1;
    } else {
      const [dk, prod] = SITE_MUL[pa + pb]!;
      k += dk;
      if (prod !== null) out.push([sa, prod]);
      ia += 1;
      ib += 1;
    }
  }
  out.push(...a.slice(ia), ...b.slice(ib));
  return [k % 4, out];
}

function commutes(a: Pair[], b: Pair[]): boolean {
  let clashes = 0;
  for (const [site, axis] of a) {
    const other = axisOn(b, site);
    if (other !== "I" && other !== axis) clashes += 1;
  }
  return clashes % 2 === 0;
}

function compareWords(a: Pair[], b: Pair[]): number {
  const rank = { X: 0, Y: 1, Z: 2 } as const;
  const len = Math.min(a.length, b.length);
  for (let i = 0; i < len; i += 1) {
    const [sa, pa] = a[i]!;
    const [sb, pb] = b[i]!;
    if (sa !== sb) return sa - sb;
    if (pa !== pb) return rank[pa] - rank[pb];
  }
  return a.length - b.length;
}

function canonicalize(nSites: number, raw: FTerm[]): FHam {
  const acc = new Map<string, FTerm>();
  for (const term of raw) {
    const key = JSON.stringify(term.word);
    const held = acc.get(key);
    if (held) held.coeff += term.coeff;
    else acc.set(key, { coeff: term.coeff, word: term.word });
  }
  const kept = [...acc.values()].filter((t) => Math.abs(t.coeff) > DROP_TOL);
  kept.sort((a, b) => compareWords(a.word, b.word));
  return { nSites, terms: kept };
}

function cliffordImage(word: Pair[], step: FStep & { gate: "CZ" | "CX" | "SWAP" }): [number, Pair[]] {
  const [i, j] = step.sites;
  const a = axisOn(word, i);
  const b = axisOn(word, j);
  let sign = 1;
  let na: PauliOrI;
  let nb: PauliOrI;
  if (step.gate === "SWAP") {
    [na, nb] = [b, a];
  } else {
    const table = step.gate === "CZ" ? CZ_TABLE : CX_TABLE;
    [sign, na, nb] = table[a + b]!;
  }
  const pairs: Pair[] = word.filter(([s]) => s !== i && s !== j);
  if (na !== "I") pairs.push([i, na]);
  if (nb !== "I") pairs.push([j, nb]);
  return [sign, sortPairs(pairs)];
}

/** U T U^dagger = cos(eta) T + i sin(eta) (axis.T) for anticommuting words. */
function rotateTerm(term: FTerm, axis: Pair[], step: FStep & { gate: "ROT" }): FTerm[] {
  if (commutes(term.word, axis)) return [term];
  if (step.quarterTurns !== undefined) {
    const k = ((step.quarterTurns % 4) + 4) % 4;
    if (k === 0) return [term];
    if (k === 2) return [{ coeff: -term.coeff, word: term.word }];
    const [phaseK, product] = wordMultiply(axis, term.word);
    // phase is +/-i here; weight is the real value of i*phase.
    const weight = phaseK === 3 ? 1 : -1;
    const sign = k === 1 ? 1 : -1;
    return [{ coeff: sign * weight * term.coeff, word: product }];
  }
  const eta = step.angle!;
  const [phaseK, product] = wordMultiply(axis, term.word);
  const weight = phaseK === 3 ? 1 : -1;
  return [
    { coeff: Math.cos(eta) * term.coeff, word: term.word },
    { coeff: Math.sin(eta) * weight * term.coeff, word: product },
  ];
}

function applyStep(h: FHam, step: FStep): FHam {
  if (step.gate === "ROT") {
    const axis = sortPairs(step.axis);
    const terms: FTerm[] = [];
    for (const term of h.terms) terms.push(...rotateTerm(term, axis, step));
    return canonicalize(h.nSites, terms);
  }
  const terms = h.terms.map((term) => {
    const [sign, image] = cliffordImage(term.word, step);
    return { coeff: sign * term.coeff, word: image };
  });
  return canonicalize(h.nSites, terms);
}

function conjugateSequence(h: FHam, script: FStep[]): FHam {
  let out = canonicalize(h.nSites, h.terms);
  for (const step of script) out = applyStep(out, step);
  return out;
}

function stepMaxSite(step: FStep): number {
  if (step.gate === "ROT") return Math.max(...step.axis.map(([s]) => s));
  return Math.max(...step.sites);
}

// --- Wire serialization ---------------------------------------------------

/**
 * Python repr of a float: both runtimes print shortest round-trip
 * decimals, but Python keeps a ".0" on integral floats. Exponent
 * notation edge cases (|x| < 1e-4 or >= 1e16) can disagree; session
 * coefficients in these tests never reach them.
 */
function pyFloat(x: number): string {
  if (Number.isInteger(x)) return `${x}.0`;
  return String(x);
}

/** Byte-identical mirror of the backend's canonical Hamiltonian JSON. */
function hamJson(h: FHam): string {
  const terms = h.terms
    .map((term) => {
      const pairs = term.word.map(([s, a]) => `[${s}, "${a}"]`).join(", ");
      return `{"coeff": ${pyFloat(term.coeff)}, "word": [${pairs}]}`;
    })
    .join(", ");
  return `{"n_sites": ${h.nSites}, "terms": [${terms}]}`;
}

function stateHash(h: FHam): string {
  return createHash("sha256").update(hamJson(h)).digest("hex");
}

function hamToWire(h: FHam): unknown {
  return {
    n_sites: h.nSites,
    terms: h.terms.map((t) => ({
      coeff: t.coeff,
      word: t.word.map(([s, a]) => [s, a]),
    })),
  };
}

function hamFromWire(obj: unknown): FHam {
  const data = obj as { n_sites: number; terms: { coeff: number; word: [number, Axis][] }[] };
  if (!Number.isInteger(data?.n_sites) || data.n_sites < 1 || !Array.isArray(data.terms)) {
    throw new Error("hamiltonian must be {n_sites, terms}");
  }
  const terms = data.terms.map((t) => ({
    coeff: t.coeff,
    word: sortPairs(t.word.map(([s, a]) => [s, a] as Pair)),
  }));
  return canonicalize(data.n_sites, terms);
}

const SHAPES = { X: "square", Y: "hexagon", Z: "circle" } as const;

function diagramData(h: FHam, positions: number[][]): unknown {
  const connections: unknown[] = [];
  const siteSymbols: unknown[][] = Array.from({ length: h.nSites }, () => []);
  h.terms.forEach((term, index) => {
    const sites: unknown[] = [];
    for (const [site, axis] of term.word) {
      sites.push({ site, axis, shape: SHAPES[axis] });
      siteSymbols[site]!.push({ term: index, axis, shape: SHAPES[axis] });
    }
    connections.push({ term: index, coeff: term.coeff, sites });
  });
  return {
    positions,
    symbol_convention: { X: "square", Y: "hexagon", Z: "circle" },
    site_symbols: siteSymbols,
    connections,
  };
}

function components(h: FHam): { components: number[][]; free: number[] } {
  const parent = Array.from({ length: h.nSites }, (_, i) => i);
  const find = (a: number): number => {
    while (parent[a] !== a) {
      parent[a] = parent[parent[a]!]!;
      a = parent[a]!;
    }
    return a;
  };
  const active = new Set<number>();
  for (const term of h.terms) {
    const sites = term.word.map(([s]) => s);
    for (const s of sites) active.add(s);
    for (let i = 1; i < sites.length; i += 1) {
      const ra = find(sites[i - 1]!);
      const rb = find(sites[i]!);
      if (ra !== rb) parent[rb] = ra;
    }
  }
  const groups = new Map<number, number[]>();
  for (let site = 0; site < h.nSites; site += 1) {
    if (!active.has(site)) continue;
    const root = find(site);
    const list = groups.get(root) ?? [];
    list.push(site);
    groups.set(root, list);
  }
  const comps = [...groups.values()].map((g) => [...g].sort((a, b) => a - b));
  comps.sort((a, b) => {
    const len = Math.min(a.length, b.length);
    for (let i = 0; i < len; i += 1) {
      if (a[i] !== b[i]) return a[i]! - b[i]!;
    }
    return a.length - b.length;
  });
  const free: number[] = [];
  for (let site = 0; site < h.nSites; site += 1) {
    if (!active.has(site)) free.push(site);
  }
  return { components: comps, free };
}

// --- Gate step wire parsing (mirrors script_from_obj / script_to_obj) ------

class WireError extends Error {}

function stepFromWire(obj: unknown): FStep {
  const data = obj as Record<string, unknown>;
  const gate = data?.gate;
  if (gate === "CZ" || gate === "CX" || gate === "SWAP") {
    const sites = data.sites as unknown;
    if (
      !Array.isArray(sites) ||
      sites.length !== 2 ||
      !Number.isInteger(sites[0]) ||
      !Number.isInteger(sites[1]) ||
      sites[0] === sites[1] ||
      (sites[0] as number) < 0 ||
      (sites[1] as number) < 0
    ) {
      throw new WireError(`gate ${gate} needs two distinct sites`);
    }
    let [i, j] = sites as [number, number];
    if (gate !== "CX" && i > j) [i, j] = [j, i];
    return { gate, sites: [i, j] };
  }
  if (gate === "ROT") {
    const axis = data.axis as unknown;
    if (!Array.isArray(axis) || axis.length === 0) {
      throw new WireError("ROT needs a nonempty axis");
    }
    const pairs: Pair[] = [];
    const seen = new Set<number>();
    for (const entry of axis) {
      if (
        !Array.isArray(entry) ||
        entry.length !== 2 ||
        !Number.isInteger(entry[0]) ||
        (entry[0] as number) < 0 ||
        !["X", "Y", "Z"].includes(entry[1] as string)
      ) {
        throw new WireError(`bad axis entry ${JSON.stringify(entry)}`);
      }
      if (seen.has(entry[0] as number)) {
        throw new WireError(`axis repeats site ${entry[0]}`);
      }
      seen.add(entry[0] as number);
      pairs.push([entry[0] as number, entry[1] as Axis]);
    }
    const hasK = data.quarter_turns !== undefined;
    const hasAngle = data.angle !== undefined;
    if (hasK === hasAngle) {
      throw new WireError("ROT needs exactly one of quarter_turns or angle");
    }
    if (hasK) {
      if (!Number.isInteger(data.quarter_turns)) {
        throw new WireError("quarter_turns must be an integer");
      }
      return { gate: "ROT", axis: sortPairs(pairs), quarterTurns: data.quarter_turns as number };
    }
    if (typeof data.angle !== "number" || !Number.isFinite(data.angle)) {
      throw new WireError("angle must be a finite number");
    }
    return { gate: "ROT", axis: sortPairs(pairs), angle: data.angle };
  }
  throw new WireError(`unknown gate ${JSON.stringify(gate)}`);
}

function stepToWire(step: FStep): unknown {
  if (step.gate === "ROT") {
    const axis = step.axis.map(([s, a]) => [s, a]);
    if (step.quarterTurns !== undefined) {
      return { gate: "ROT", axis, quarter_turns: step.quarterTurns };
    }
    return { gate: "ROT", axis, angle: step.angle };
  }
  return { gate: step.gate, sites: [...step.sites] };
}

// --- Model builders ---------------------------------------------------------

function chainPositions(n: number): number[][] {
  return Array.from({ length: n }, (_, i) => [i, 0]);
}

function buildTfim(n: number, g: number, J: number, boundary: string): FHam {
  const terms: FTerm[] = [];
  for (let i = 0; i < n; i += 1) terms.push({ coeff: -g, word: [[i, "X"]] });
  for (let i = 0; i + 1 < n; i += 1) {
    terms.push({ coeff: -J, word: [[i, "Z"], [i + 1, "Z"]] });
  }
  if (boundary === "closed" && n > 2) {
    terms.push({ coeff: -J, word: [[0, "Z"], [n - 1, "Z"]] });
  }
  return canonicalize(n, terms);
}

// --- Session store and HTTP facade ------------------------------------------

interface FakeSession {
  id: string;
  model: unknown;
  base: FHam;
  positions: number[][];
  current: FHam;
  steps: FStep[];
}

interface FakeJob {
  polls: number;
  result: SpectrumResult;
}

const STUB_RESULT: SpectrumResult = {
  eigenvalues: [],
  method: "dense",
  complete: true,
  degeneracy_tol: 1e-8,
  multiplicities: [],
  ground_energy: null,
  ground_multiplicity: null,
  gap: null,
};

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export class FakeService {
  private sessions = new Map<string, FakeSession>();
  private jobs = new Map<string, FakeJob>();
  private counter = 0;
  private jobCounter = 0;

  /** Canned spectrum results keyed by state hash (tests preload these). */
  readonly spectrumByHash = new Map<string, SpectrumResult>();

  /** When set, the next gate request fails once with this error. */
  failNextGate: { status: number; detail: string } | null = null;

  /** Counters the tests can assert on. */
  gateRequests = 0;
  spectrumRequests = 0;

  readonly fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = (init?.method ?? "GET").toUpperCase();
    const parsed = new URL(url, "http://fake.test");
    const path = parsed.pathname;
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    try {
      return this.route(method, path, parsed.searchParams, body);
    } catch (exc) {
      if (exc instanceof WireError) {
        return jsonResponse({ detail: exc.message }, 422);
      }
      throw exc;
    }
  };

  private route(
    method: string,
    path: string,
    query: URLSearchParams,
    body: unknown,
  ): Response {
    if (method === "GET" && path === "/models") {
      return jsonResponse(modelsFixture);
    }
    if (method === "GET" && path === "/scenarios") {
      return jsonResponse(scenariosFixture);
    }
    if (method === "POST" && path === "/sessions") {
      return this.createSession(body);
    }
    const sessionMatch = path.match(/^\/sessions\/([^/]+)(\/.*)?$/);
    if (sessionMatch) {
      const session = this.sessions.get(sessionMatch[1]!);
      if (!session) {
        return jsonResponse(
          { detail: `unknown session '${sessionMatch[1]}'` },
          404,
        );
      }
      const rest = sessionMatch[2] ?? "";
      if (method === "GET" && rest === "") {
        return jsonResponse(this.state(session));
      }
      if (method === "POST" && rest === "/gates") {
        return this.applyGate(session, body);
      }
      if (method === "POST" && rest === "/undo") {
        return this.undo(session);
      }
      if (method === "GET" && rest === "/spectrum") {
        return this.spectrum(session, query.get("k"));
      }
      const jobMatch = rest.match(/^\/spectrum\/jobs\/([^/]+)$/);
      if (method === "GET" && jobMatch) {
        return this.pollJob(jobMatch[1]!);
      }
    }
    return jsonResponse({ detail: `no route for ${method} ${path}` }, 404);
  }

  private state(session: FakeSession): unknown {
    const parts = components(session.current);
    return {
      id: session.id,
      model: session.model,
      n_sites: session.current.nSites,
      hamiltonian: hamToWire(session.current),
      diagram: diagramData(session.current, session.positions),
      components: parts.components,
      free_sites: parts.free,
      script: session.steps.map(stepToWire),
      undo_depth: session.steps.length,
      state_hash: stateHash(session.current),
    };
  }

  private createSession(body: unknown): Response {
    const data = body as Record<string, unknown>;
    if (typeof data?.model !== "string") {
      return jsonResponse({ detail: "body must be {'model': name, 'params': {...}}" }, 422);
    }
    let h: FHam;
    let positions: number[][];
    let model: unknown;
    if (data.model === "custom") {
      try {
        h = hamFromWire(data.hamiltonian);
      } catch (exc) {
        return jsonResponse({ detail: (exc as Error).message }, 422);
      }
      positions = (data.positions as number[][]) ?? chainPositions(h.nSites);
      model = { model: "custom" };
    } else if (data.model === "tfim") {
      const params = (data.params ?? {}) as Record<string, unknown>;
      const n = params.N;
      if (!Number.isInteger(n) || (n as number) < 2) {
        return jsonResponse({ detail: "parameter N must be an integer >= 2" }, 422);
      }
      const g = typeof params.g === "number" ? params.g : 1.0;
      const J = typeof params.J === "number" ? params.J : 1.0;
      const boundary =
        typeof params.boundary === "string" ? params.boundary : "open";
      h = buildTfim(n as number, g, J, boundary);
      positions = chainPositions(n as number);
      model = { model: "tfim", params: { N: n, g, J, boundary } };
    } else {
      return jsonResponse(
        { detail: `model '${data.model}' not supported by the fake service` },
        422,
      );
    }
    this.counter += 1;
    const session: FakeSession = {
      id: `fake-${this.counter}`,
      model,
      base: h,
      positions,
      current: h,
      steps: [],
    };
    this.sessions.set(session.id, session);
    return jsonResponse(this.state(session), 201);
  }

  private applyGate(session: FakeSession, body: unknown): Response {
    this.gateRequests += 1;
    if (this.failNextGate) {
      const fail = this.failNextGate;
      this.failNextGate = null;
      return jsonResponse({ detail: fail.detail }, fail.status);
    }
    const step = stepFromWire(body);
    if (stepMaxSite(step) >= session.current.nSites) {
      return jsonResponse(
        {
          detail: `step acts on site ${stepMaxSite(step)}, session has ${session.current.nSites} sites`,
        },
        422,
      );
    }
    session.current = applyStep(session.current, step);
    session.steps.push(step);
    return jsonResponse(this.state(session));
  }

  private undo(session: FakeSession): Response {
    if (session.steps.length === 0) {
      return jsonResponse({ detail: "nothing to undo" }, 422);
    }
    session.steps.pop();
    session.current = conjugateSequence(session.base, session.steps);
    return jsonResponse(this.state(session));
  }

  private spectrum(session: FakeSession, kRaw: string | null): Response {
    this.spectrumRequests += 1;
    const n = session.current.nSites;
    const k = kRaw === null ? null : Number.parseInt(kRaw, 10);
    if (k !== null && (!Number.isInteger(k) || k < 1)) {
      return jsonResponse({ detail: "k must be at least 1" }, 422);
    }
    if (k === null && n > DENSE_CAP) {
      return jsonResponse(
        {
          detail:
            `full spectrum needs a dense matrix; ${n} sites exceeds the ` +
            `dense cap of ${DENSE_CAP}. Request the lowest eigenvalues ` +
            `with ?k= (iterative, up to ${ITER_CAP} sites).`,
        },
        403,
      );
    }
    if (n > ITER_CAP) {
      return jsonResponse(
        {
          detail: `${n} sites exceeds the iterative cap of ${ITER_CAP}; no spectrum available at this size.`,
        },
        403,
      );
    }
    const result = this.resultFor(session, k);
    if (n <= INLINE_LIMIT) {
      return jsonResponse({ status: "done", result });
    }
    this.jobCounter += 1;
    const jobId = `job-${this.jobCounter}`;
    this.jobs.set(jobId, { polls: 0, result });
    return jsonResponse(
      {
        status: "pending",
        job_id: jobId,
        poll: `/sessions/${session.id}/spectrum/jobs/${jobId}`,
      },
      202,
    );
  }

  private resultFor(session: FakeSession, k: number | null): SpectrumResult {
    const canned = this.spectrumByHash.get(stateHash(session.current));
    if (canned && k === null) return canned;
    if (k !== null) {
      return {
        ...STUB_RESULT,
        method: "lanczos",
        complete: false,
        eigenvalues: Array.from({ length: k }, () => 0),
        multiplicities: [[0, k]],
        ground_energy: 0,
        ground_multiplicity: k,
      };
    }
    return STUB_RESULT;
  }

  private pollJob(jobId: string): Response {
    const job = this.jobs.get(jobId);
    if (!job) {
      return jsonResponse({ detail: `unknown job '${jobId}'` }, 404);
    }
    job.polls += 1;
    if (job.polls < 2) {
      return jsonResponse({ status: "pending", job_id: jobId });
    }
    return jsonResponse({ status: "done", job_id: jobId, result: job.result });
  }
}
