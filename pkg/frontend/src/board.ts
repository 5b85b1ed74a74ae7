/** Plan board: the selected team grouped by role.
 *
 * The board is a pure projection of one PlanResponse plus the current
 * draft (for lock/exclude markers).  Totals are copied verbatim from
 * the payload; nothing here re-derives a gross, budget or
 * acquaintance number.
 */

import { ROLES, type PlanRequest, type PlanResponse, type Role } from "./api.js";
import { fmtFigure } from "./format.js";

export interface BoardMember {
  feature: string;
  role: Role;
  name: string;
  w_g: number;
  w_b: number;
  relaxed: number;
  locked: boolean;
}

export interface BoardGroup {
  role: Role;
  members: BoardMember[];
}

export interface BoardModel {
  groups: BoardGroup[];
  totals: {
    est_gross: number;
    est_budget: number;
    acquaintance: number;
    objective: number;
  };
  feasible: boolean;
  iterations: number;
  method: string;
}

export function buildBoard(
  response: PlanResponse,
  draft: PlanRequest,
): BoardModel {
  const locked = new Set(draft.locked ?? []);
  const scores = new Map(
    response.selected_scores.map((s) => [s.feature, s]),
  );
  const groups: BoardGroup[] = ROLES.map((role) => ({
    role,
    members: (response.selected[role] ?? []).map((name) => {
      const feature = `${role}:${name}`;
      const score = scores.get(feature);
      return {
        feature,
        role,
        name,
        w_g: score?.w_g ?? 0,
        w_b: score?.w_b ?? 0,
        relaxed: score?.relaxed ?? 0,
        locked: locked.has(feature),
      };
    }),
  }));
  return {
    groups,
    totals: {
      est_gross: response.est_gross,
      est_budget: response.est_budget,
      acquaintance: response.acquaintance,
      objective: response.objective,
    },
    feasible: response.feasible,
    iterations: response.iterations,
    method: response.method,
  };
}

export interface BoardCallbacks {
  onLock?: (feature: string) => void;
  onExclude?: (feature: string) => void;
}

export function renderBoard(
  model: BoardModel,
  callbacks: BoardCallbacks = {},
  doc: Document = document,
): HTMLElement {
  const root = doc.createElement("section");
  root.className = "board";

  for (const group of model.groups) {
    const box = doc.createElement("div");
    box.className = "role-group";
    box.dataset.role = group.role;

    const heading = doc.createElement("h3");
    heading.textContent = `${group.role} (${group.members.length})`;
    box.appendChild(heading);

    const list = doc.createElement("ul");
    for (const member of group.members) {
      const item = doc.createElement("li");
      item.className = member.locked ? "member pinned" : "member";
      item.dataset.feature = member.feature;

      const name = doc.createElement("span");
      name.className = "member-name";
      name.textContent = member.name;
      item.appendChild(name);

      const weight = doc.createElement("span");
      weight.className = "member-weight";
      weight.dataset.field = "w_g";
      weight.textContent = fmtFigure(member.w_g);
      item.appendChild(weight);

      const relaxed = doc.createElement("span");
      relaxed.className = "member-score";
      relaxed.dataset.field = "relaxed";
      relaxed.textContent = fmtFigure(member.relaxed);
      item.appendChild(relaxed);

      const lockBtn = doc.createElement("button");
      lockBtn.className = "lock";
      lockBtn.type = "button";
      lockBtn.textContent = member.locked ? "locked" : "lock";
      lockBtn.addEventListener("click", () =>
        callbacks.onLock?.(member.feature),
      );
      item.appendChild(lockBtn);

      const exclBtn = doc.createElement("button");
      exclBtn.className = "exclude";
      exclBtn.type = "button";
      exclBtn.textContent = "exclude";
      exclBtn.addEventListener("click", () =>
        callbacks.onExclude?.(member.feature),
      );
      item.appendChild(exclBtn);

      list.appendChild(item);
    }
    box.appendChild(list);
    root.appendChild(box);
  }

  const totals = doc.createElement("footer");
  totals.className = "totals";
  const fields: [string, number][] = [
    ["est_gross", model.totals.est_gross],
    ["est_budget", model.totals.est_budget],
    ["acquaintance", model.totals.acquaintance],
    ["objective", model.totals.objective],
  ];
  for (const [field, value] of fields) {
    const cell = doc.createElement("span");
    cell.className = "total";
    cell.dataset.field = field;
    cell.textContent = fmtFigure(value);
    totals.appendChild(cell);
  }
  const status = doc.createElement("span");
  status.className = "status";
  status.dataset.field = "status";
  status.textContent = model.feasible
    ? `${model.method}, ${model.iterations} iterations`
    : "infeasible";
  totals.appendChild(status);
  root.appendChild(totals);

  return root;
}

/** Every feature currently shown on a rendered board, sorted. */
export function boardFeatures(root: Element): string[] {
  const out: string[] = [];
  root.querySelectorAll<HTMLElement>("[data-feature]").forEach((node) => {
    if (node.dataset.feature) {
      out.push(node.dataset.feature);
    }
  });
  return out.sort();
}
