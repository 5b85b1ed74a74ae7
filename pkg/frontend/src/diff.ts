/** Replan diff against the pinned comparison plan.
 *
 * Membership changes are the set difference of the two payloads'
 * selections; figure deltas are differences of two service-reported
 * numbers (no figure is derived from weights or configs locally).
 */

import {
  selectedFeatures,
  type PlanResponse,
} from "./api.js";
import { fmtSigned } from "./format.js";

export interface PlanDiff {
  added: string[];
  removed: string[];
  d_est_gross: number;
  d_est_budget: number;
  d_acquaintance: number;
  d_objective: number;
  unchanged: boolean;
}

export function diffPlans(
  pinned: PlanResponse,
  latest: PlanResponse,
): PlanDiff {
  const before = new Set(selectedFeatures(pinned));
  const after = new Set(selectedFeatures(latest));
  const added = [...after].filter((f) => !before.has(f)).sort();
  const removed = [...before].filter((f) => !after.has(f)).sort();
  const deltas = {
    d_est_gross: latest.est_gross - pinned.est_gross,
    d_est_budget: latest.est_budget - pinned.est_budget,
    d_acquaintance: latest.acquaintance - pinned.acquaintance,
    d_objective: latest.objective - pinned.objective,
  };
  const unchanged =
    added.length === 0 &&
    removed.length === 0 &&
    Object.values(deltas).every((d) => d === 0);
  return { added, removed, ...deltas, unchanged };
}

export function renderDiff(
  diff: PlanDiff,
  doc: Document = document,
): HTMLElement {
  const root = doc.createElement("div");
  root.className = "diff";

  if (diff.unchanged) {
    const note = doc.createElement("p");
    note.className = "diff-empty";
    note.textContent = "no change against pinned plan";
    root.appendChild(note);
    return root;
  }

  for (const [cls, items] of [
    ["added", diff.added],
    ["removed", diff.removed],
  ] as const) {
    const list = doc.createElement("ul");
    list.className = `diff-${cls}`;
    for (const feature of items) {
      const item = doc.createElement("li");
      item.dataset.feature = feature;
      item.textContent = feature;
      list.appendChild(item);
    }
    root.appendChild(list);
  }

  const deltas = doc.createElement("p");
  deltas.className = "diff-deltas";
  deltas.textContent =
    `gross ${fmtSigned(diff.d_est_gross)}, ` +
    `budget ${fmtSigned(diff.d_est_budget)}, ` +
    `acquaintance ${fmtSigned(diff.d_acquaintance)}, ` +
    `objective ${fmtSigned(diff.d_objective)}`;
  root.appendChild(deltas);

  return root;
}
