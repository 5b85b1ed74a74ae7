/** Session state for the planning client.
 *
 * The draft is the single source of truth for the next plan request;
 * what-if toggles are staged beside it and only fold into the draft on
 * an explicit apply.  A pinned comparison plan is deep-frozen so later
 * replans can diff against an immutable snapshot.
 */

import type {
  Method,
  PlanRequest,
  PlanResponse,
  Toggle,
} from "./api.js";

export interface SessionState {
  draft: PlanRequest;
  lastPlan: PlanResponse | null;
  pinned: PlanResponse | null;
  staging: Toggle[];
}

const METHODS: readonly string[] = ["bigmovie", "maxg", "maxa", "greedy"];

export class DraftError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "DraftError";
  }
}

/** Fill in every optional field so drafts compare and serialize stably. */
export function normalizeDraft(partial: PlanRequest): PlanRequest {
  return {
    budget_cap: partial.budget_cap,
    alpha: partial.alpha ?? 1.0,
    beta: partial.beta ?? 1e-4,
    theta: partial.theta ?? 0.5,
    team_cap: partial.team_cap ?? null,
    locked: [...(partial.locked ?? [])],
    excluded: [...(partial.excluded ?? [])],
    candidate_pool: partial.candidate_pool
      ? [...partial.candidate_pool]
      : null,
    method: partial.method ?? "bigmovie",
  };
}

export function newSession(budgetCap: number): SessionState {
  return {
    draft: normalizeDraft({ budget_cap: budgetCap }),
    lastPlan: null,
    pinned: null,
    staging: [],
  };
}

/** The draft rendered as the exact POST /plan body. */
export function serializeDraft(draft: PlanRequest): string {
  return JSON.stringify(normalizeDraft(draft));
}

function requireFiniteNumber(value: unknown, field: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    throw new DraftError(`${field} must be a finite number`);
  }
  return value;
}

function requireFeatureList(value: unknown, field: string): string[] {
  if (!Array.isArray(value)) {
    throw new DraftError(`${field} must be a list of "role:name" strings`);
  }
  for (const item of value) {
    if (typeof item !== "string" || !item.includes(":")) {
      throw new DraftError(`${field} entries must look like "role:name"`);
    }
  }
  return value as string[];
}

/** Parse a serialized draft back into a valid, normalized PlanRequest.
 * serializeDraft(parseDraft(s)) === s for anything serializeDraft made.
 */
export function parseDraft(text: string): PlanRequest {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new DraftError("draft is not valid JSON");
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new DraftError("draft must be a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  const draft: PlanRequest = {
    budget_cap: requireFiniteNumber(obj.budget_cap, "budget_cap"),
  };
  if (obj.alpha !== undefined) {
    draft.alpha = requireFiniteNumber(obj.alpha, "alpha");
  }
  if (obj.beta !== undefined) {
    draft.beta = requireFiniteNumber(obj.beta, "beta");
  }
  if (obj.theta !== undefined) {
    draft.theta = requireFiniteNumber(obj.theta, "theta");
  }
  if (obj.team_cap !== undefined && obj.team_cap !== null) {
    const cap = requireFiniteNumber(obj.team_cap, "team_cap");
    if (!Number.isInteger(cap) || cap < 0) {
      throw new DraftError("team_cap must be a non-negative integer");
    }
    draft.team_cap = cap;
  }
  if (obj.locked !== undefined) {
    draft.locked = requireFeatureList(obj.locked, "locked");
  }
  if (obj.excluded !== undefined) {
    draft.excluded = requireFeatureList(obj.excluded, "excluded");
  }
  if (obj.candidate_pool !== undefined && obj.candidate_pool !== null) {
    draft.candidate_pool = requireFeatureList(
      obj.candidate_pool,
      "candidate_pool",
    );
  }
  if (obj.method !== undefined) {
    if (typeof obj.method !== "string" || !METHODS.includes(obj.method)) {
      throw new DraftError(`method must be one of ${METHODS.join(", ")}`);
    }
    draft.method = obj.method as Method;
  }
  return normalizeDraft(draft);
}

function deepFreeze<T>(value: T): T {
  if (value && typeof value === "object" && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const key of Object.getOwnPropertyNames(value)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
}

/** Pin the given plan (defaults to the last one) as the frozen
 * comparison baseline for replan diffs. */
export function pinComparison(
  state: SessionState,
  plan: PlanResponse | null = null,
): SessionState {
  const target = plan ?? state.lastPlan;
  if (!target) {
    throw new DraftError("nothing to pin: no plan yet");
  }
  const snapshot = deepFreeze(
    JSON.parse(JSON.stringify(target)) as PlanResponse,
  );
  return { ...state, pinned: snapshot };
}

/** Stage a what-if flip without touching the draft.  Restaging the
 * same feature replaces its previous value; returns a new list. */
export function stageToggle(
  staging: Toggle[],
  feature: string,
  value: 0 | 1,
): Toggle[] {
  const rest = staging.filter(([spec]) => spec !== feature);
  return [...rest, [feature, value]];
}

export function clearStaging(state: SessionState): SessionState {
  return { ...state, staging: [] };
}

/** Fold staged toggles into the draft: value 1 locks the feature,
 * value 0 excludes it, each removing the feature from the opposite
 * list.  Staging is consumed; the input draft is left untouched. */
export function applyStaging(state: SessionState): SessionState {
  const draft = normalizeDraft(state.draft);
  const locked = new Set(draft.locked);
  const excluded = new Set(draft.excluded);
  for (const [feature, value] of state.staging) {
    if (value === 1) {
      excluded.delete(feature);
      locked.add(feature);
    } else {
      locked.delete(feature);
      excluded.add(feature);
    }
  }
  return {
    ...state,
    draft: {
      ...draft,
      locked: [...locked].sort(),
      excluded: [...excluded].sort(),
    },
    staging: [],
  };
}
