/** Staged what-if panel.
 *
 * The panel is a verbatim projection of one /whatif payload: the
 * toggled figures, the base-plan figures, and the deltas, each taken
 * from its own field of the payload.  In particular the delta column
 * shows `payload.deltas`, not a client-side subtraction.
 */

import type { Figures, WhatIfResponse } from "./api.js";
import { fmtFigure, fmtSigned } from "./format.js";

export const FIGURE_FIELDS: readonly (keyof Figures)[] = [
  "est_gross",
  "est_budget",
  "acquaintance",
  "objective",
];

const LABELS: Record<keyof Figures, string> = {
  est_gross: "est. gross",
  est_budget: "est. budget",
  acquaintance: "acquaintance",
  objective: "objective",
};

export interface WhatIfRow {
  field: keyof Figures;
  label: string;
  now: string;
  base: string;
  delta: string;
}

export function buildWhatIfPanel(payload: WhatIfResponse): WhatIfRow[] {
  return FIGURE_FIELDS.map((field) => ({
    field,
    label: LABELS[field],
    now: fmtFigure(payload[field]),
    base: fmtFigure(payload.base[field]),
    delta: fmtSigned(payload.deltas[field]),
  }));
}

export function renderWhatIfPanel(
  payload: WhatIfResponse,
  doc: Document = document,
): HTMLElement {
  const root = doc.createElement("aside");
  root.className = "whatif";

  const table = doc.createElement("table");
  const head = doc.createElement("tr");
  for (const title of ["", "now", "base", "delta"]) {
    const cell = doc.createElement("th");
    cell.textContent = title;
    head.appendChild(cell);
  }
  table.appendChild(head);

  for (const row of buildWhatIfPanel(payload)) {
    const tr = doc.createElement("tr");
    tr.dataset.field = row.field;

    const label = doc.createElement("td");
    label.textContent = row.label;
    tr.appendChild(label);

    for (const [col, text] of [
      ["now", row.now],
      ["base", row.base],
      ["delta", row.delta],
    ] as const) {
      const cell = doc.createElement("td");
      cell.dataset.col = col;
      cell.textContent = text;
      tr.appendChild(cell);
    }
    table.appendChild(tr);
  }

  root.appendChild(table);
  return root;
}
