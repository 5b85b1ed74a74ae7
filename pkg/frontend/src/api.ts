/** Typed client for the movieplan planning service.
 *
 * Every number shown in the UI originates from a payload returned by
 * one of these calls; the client never recomputes gross, budget or
 * acquaintance figures locally.  Feature identity on the wire is the
 * `"role:name"` string.
 */

export type Role = "actor" | "actress" | "director" | "writer" | "genre";

export const ROLES: readonly Role[] = [
  "actor",
  "actress",
  "director",
  "writer",
  "genre",
];

export type Method = "bigmovie" | "maxg" | "maxa" | "greedy";

/** Body of POST /plan.  Optional fields use the service defaults. */
export interface PlanRequest {
  budget_cap: number;
  alpha?: number;
  beta?: number;
  theta?: number;
  team_cap?: number | null;
  locked?: string[];
  excluded?: string[];
  candidate_pool?: string[] | null;
  method?: Method;
}

/** Per-selected-feature detail attached to a plan. */
export interface SelectedScore {
  feature: string;
  role: Role;
  name: string;
  w_g: number;
  w_b: number;
  relaxed: number;
}

export interface PlanResponse {
  method: string;
  selected: Record<Role, string[]>;
  selected_scores: SelectedScore[];
  est_gross: number;
  est_budget: number;
  acquaintance: number;
  objective: number;
  feasible: boolean;
  iterations: number;
}

/** One staged flip: the feature and its forced value. */
export type Toggle = [feature: string, value: 0 | 1];

export interface WhatIfRequest {
  base: PlanRequest;
  toggles: Toggle[];
}

export interface Figures {
  est_gross: number;
  est_budget: number;
  acquaintance: number;
  objective: number;
}

/** POST /whatif returns the toggled figures (top level), the untouched
 * base-plan figures, and the service-computed deltas between them. */
export interface WhatIfResponse extends Figures {
  base: Figures;
  deltas: Figures;
}

export interface FeatureInfo {
  feature: string;
  role: Role;
  name: string;
  w_g: number;
  w_b: number;
}

export interface FeaturePage {
  features: FeatureInfo[];
}

export interface ModelInfo {
  n_features: number;
  block_sizes: number[];
  lambda: number;
  training_mape: Record<string, number>;
  tensor_entries: number;
  n_movies: number;
}

/** Error envelope the service uses for every non-2xx response. */
export interface ErrorBody {
  error: string;
  detail: string;
}

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly error: string,
    readonly detail: string,
  ) {
    super(`${error}: ${detail}`);
    this.name = "ServiceError";
  }

  /** 422 means the locked set cannot fit under the budget cap. */
  get isBudgetConflict(): boolean {
    return this.status === 422;
  }
}

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

async function parseError(status: number, res: Response): Promise<ServiceError> {
  try {
    const body = (await res.json()) as Partial<ErrorBody>;
    return new ServiceError(
      status,
      body.error ?? "unknown error",
      body.detail ?? "",
    );
  } catch {
    return new ServiceError(status, "unknown error", `HTTP ${status}`);
  }
}

export class MoviePlanClient {
  constructor(
    private readonly fetchImpl: FetchLike,
    readonly baseUrl: string = "",
  ) {}

  private async request<T>(
    path: string,
    init: RequestInit = {},
  ): Promise<T> {
    const res = await this.fetchImpl(this.baseUrl + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (!res.ok) {
      throw await parseError(res.status, res);
    }
    return (await res.json()) as T;
  }

  plan(req: PlanRequest, signal?: AbortSignal): Promise<PlanResponse> {
    return this.request<PlanResponse>("/plan", {
      method: "POST",
      body: JSON.stringify(req),
      signal,
    });
  }

  whatIf(req: WhatIfRequest, signal?: AbortSignal): Promise<WhatIfResponse> {
    return this.request<WhatIfResponse>("/whatif", {
      method: "POST",
      body: JSON.stringify(req),
      signal,
    });
  }

  features(params: {
    role?: Role;
    prefix?: string;
    limit?: number;
  } = {}): Promise<FeaturePage> {
    const query = new URLSearchParams();
    if (params.role !== undefined) query.set("role", params.role);
    if (params.prefix !== undefined) query.set("prefix", params.prefix);
    if (params.limit !== undefined) query.set("limit", String(params.limit));
    const qs = query.toString();
    return this.request<FeaturePage>(
      "/library/features" + (qs ? `?${qs}` : ""),
    );
  }

  modelInfo(): Promise<ModelInfo> {
    return this.request<ModelInfo>("/model/info");
  }
}

/** Flatten a plan's per-role selection into sorted `"role:name"` strings. */
export function selectedFeatures(plan: PlanResponse): string[] {
  const out: string[] = [];
  for (const role of ROLES) {
    for (const name of plan.selected[role] ?? []) {
      out.push(`${role}:${name}`);
    }
  }
  return out.sort();
}
