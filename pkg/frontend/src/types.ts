/** Wire types for the spindual HTTP service, validated with zod. */

import { z } from "zod";

export const AxisSchema = z.enum(["X", "Y", "Z"]);
export type Axis = z.infer<typeof AxisSchema>;

export const WordSchema = z.array(
  z.tuple([z.number().int().nonnegative(), AxisSchema]),
);
export type Word = z.infer<typeof WordSchema>;

export const TermSchema = z.object({
  coeff: z.number(),
  word: WordSchema,
});
export type Term = z.infer<typeof TermSchema>;

export const HamiltonianSchema = z.object({
  n_sites: z.number().int().positive(),
  terms: z.array(TermSchema),
});
export type WireHamiltonian = z.infer<typeof HamiltonianSchema>;

export const CliffordStepSchema = z.object({
  gate: z.enum(["CZ", "CX", "SWAP"]),
  sites: z.tuple([z.number().int().nonnegative(), z.number().int().nonnegative()]),
});
export const QuarterRotSchema = z.object({
  gate: z.literal("ROT"),
  axis: WordSchema,
  quarter_turns: z.number().int(),
});
export const AngleRotSchema = z.object({
  gate: z.literal("ROT"),
  axis: WordSchema,
  angle: z.number(),
});
export const GateStepSchema = z.union([
  CliffordStepSchema,
  QuarterRotSchema,
  AngleRotSchema,
]);
export type GateStep = z.infer<typeof GateStepSchema>;
export const GateScriptSchema = z.array(GateStepSchema);
export type GateScript = z.infer<typeof GateScriptSchema>;

export const ShapeSchema = z.enum(["square", "hexagon", "circle"]);
export type Shape = z.infer<typeof ShapeSchema>;

export const SiteSymbolSchema = z.object({
  term: z.number().int().nonnegative(),
  axis: AxisSchema,
  shape: ShapeSchema,
});
export const ConnectionSchema = z.object({
  term: z.number().int().nonnegative(),
  coeff: z.number(),
  sites: z.array(
    z.object({
      site: z.number().int().nonnegative(),
      axis: AxisSchema,
      shape: ShapeSchema,
    }),
  ),
});
export type Connection = z.infer<typeof ConnectionSchema>;

export const DiagramSchema = z.object({
  positions: z.array(z.tuple([z.number(), z.number()])),
  symbol_convention: z.object({
    X: z.literal("square"),
    Y: z.literal("hexagon"),
    Z: z.literal("circle"),
  }),
  site_symbols: z.array(z.array(SiteSymbolSchema)),
  connections: z.array(ConnectionSchema),
});
export type Diagram = z.infer<typeof DiagramSchema>;

export const SessionStateSchema = z.object({
  id: z.string(),
  model: z.record(z.string(), z.unknown()),
  n_sites: z.number().int().positive(),
  hamiltonian: HamiltonianSchema,
  diagram: DiagramSchema,
  components: z.array(z.array(z.number().int())),
  free_sites: z.array(z.number().int()),
  script: GateScriptSchema,
  undo_depth: z.number().int().nonnegative(),
  state_hash: z.string(),
});
export type SessionState = z.infer<typeof SessionStateSchema>;

export const ParamSpecSchema = z.object({
  type: z.enum(["int", "float", "choice", "hamiltonian_json"]),
  default: z.unknown().optional(),
  min: z.number().optional(),
  even: z.boolean().optional(),
  optional: z.boolean().optional(),
  choices: z.array(z.string()).optional(),
});
export type ParamSpec = z.infer<typeof ParamSpecSchema>;

export const ModelEntrySchema = z.object({
  name: z.string(),
  summary: z.string(),
  params: z.record(z.string(), ParamSpecSchema),
});
export type ModelEntry = z.infer<typeof ModelEntrySchema>;
export const ModelCatalogSchema = z.array(ModelEntrySchema);

export const SpectrumResultSchema = z.object({
  eigenvalues: z.array(z.number()),
  method: z.string(),
  complete: z.boolean(),
  degeneracy_tol: z.number(),
  multiplicities: z.array(z.tuple([z.number(), z.number().int()])),
  ground_energy: z.number().nullable(),
  ground_multiplicity: z.number().int().nullable(),
  gap: z.number().nullable(),
});
export type SpectrumResult = z.infer<typeof SpectrumResultSchema>;

export const SpectrumDoneSchema = z.object({
  status: z.literal("done"),
  result: SpectrumResultSchema,
});
export const SpectrumPendingSchema = z.object({
  status: z.literal("pending"),
  job_id: z.string(),
  poll: z.string(),
});
export const SpectrumJobSchema = z.object({
  status: z.enum(["pending", "done", "error"]),
  job_id: z.string(),
  result: SpectrumResultSchema.optional(),
  error: z.string().optional(),
});

/** Body for POST /sessions: a catalog model or a custom Hamiltonian. */
export type CreateSessionBody =
  | { model: string; params: Record<string, number | string> }
  | {
      model: "custom";
      hamiltonian: WireHamiltonian;
      positions?: [number, number][];
    };
