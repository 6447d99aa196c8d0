/** Text rendering for Pauli words, gate steps, and exported scripts. */

import type { GateScript, GateStep, Word } from "./types";

/** Renders a Pauli word as "X0 Z2"; the empty word is the identity "1". */
export function wordLabel(word: Word): string {
  if (word.length === 0) return "1";
  return word.map(([site, axis]) => `${axis}${site}`).join(" ");
}

/** Short label for one gate step, e.g. "CX(0,1)" or "R[X0 X1](0.300)". */
export function stepLabel(step: GateStep): string {
  if (step.gate !== "ROT") {
    const [i, j] = step.sites;
    return `${step.gate}(${i},${j})`;
  }
  const axis = wordLabel(step.axis);
  if ("quarter_turns" in step) {
    const k = step.quarter_turns;
    return `R[${axis}](${k >= 0 ? "+" : ""}${k}·π/2)`;
  }
  return `R[${axis}](${step.angle.toFixed(3)})`;
}

/**
 * Operator-product notation for a script.
 *
 * Scripts apply first-listed first, so as an operator product the last
 * step is written leftmost: U = s_n · ... · s_1.
 */
export function operatorProduct(script: GateScript): string {
  if (script.length === 0) return "U = 1";
  const factors = script.map(stepLabel).reverse();
  return `U = ${factors.join(" · ")}`;
}

/** Serializes a script exactly as the CLI's --script flag expects it. */
export function exportScript(script: GateScript): string {
  return JSON.stringify(script, null, 2) + "\n";
}
