/** Mocked service payloads and a recording fetch stub.
 *
 * Payload shapes mirror the service wire format exactly; tests treat
 * these as ground truth the UI must reproduce.
 */

import type {
  FetchLike,
  Figures,
  PlanResponse,
  WhatIfResponse,
} from "../src/api.js";

export function planResponse(
  overrides: Partial<PlanResponse> = {},
): PlanResponse {
  const base: PlanResponse = {
    method: "bigmovie",
    selected: {
      actor: ["Alan Arkin", "Bea Arthur"],
      actress: ["Carol Kane"],
      director: ["Dee Rees"],
      writer: [],
      genre: ["Drama"],
    },
    selected_scores: [
      {
        feature: "actor:Alan Arkin",
        role: "actor",
        name: "Alan Arkin",
        w_g: 4.25,
        w_b: 1.1,
        relaxed: 1.0,
      },
      {
        feature: "actor:Bea Arthur",
        role: "actor",
        name: "Bea Arthur",
        w_g: 2.5,
        w_b: 0.9,
        relaxed: 0.9137,
      },
      {
        feature: "actress:Carol Kane",
        role: "actress",
        name: "Carol Kane",
        w_g: 3.1,
        w_b: 1.4,
        relaxed: 1.0,
      },
      {
        feature: "director:Dee Rees",
        role: "director",
        name: "Dee Rees",
        w_g: 5.0,
        w_b: 2.0,
        relaxed: 0.7741,
      },
      {
        feature: "genre:Drama",
        role: "genre",
        name: "Drama",
        w_g: 0.6,
        w_b: 0.2,
        relaxed: 1.0,
      },
    ],
    est_gross: 61.4375,
    est_budget: 28.901,
    acquaintance: 12.0,
    objective: 61.4387,
    feasible: true,
    iterations: 17,
  };
  return { ...base, ...overrides };
}

export function emptyPlanResponse(): PlanResponse {
  return planResponse({
    selected: { actor: [], actress: [], director: [], writer: [], genre: [] },
    selected_scores: [],
    est_gross: 7.25,
    est_budget: 0.0,
    acquaintance: 0.0,
    objective: 7.25,
    iterations: 3,
  });
}

const BASE_FIGURES: Figures = {
  est_gross: 61.4375,
  est_budget: 28.901,
  acquaintance: 12.0,
  objective: 61.4387,
};

export function whatifResponse(
  now: Partial<Figures> = {},
  deltas?: Partial<Figures>,
): WhatIfResponse {
  const current: Figures = { ...BASE_FIGURES, ...now };
  const computed: Figures = {
    est_gross: current.est_gross - BASE_FIGURES.est_gross,
    est_budget: current.est_budget - BASE_FIGURES.est_budget,
    acquaintance: current.acquaintance - BASE_FIGURES.acquaintance,
    objective: current.objective - BASE_FIGURES.objective,
  };
  return {
    ...current,
    base: { ...BASE_FIGURES },
    deltas: { ...computed, ...deltas },
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export interface RecordedCall {
  url: string;
  init?: RequestInit;
}

/** Wrap a handler as FetchLike and record every call it serves. */
export function stubFetch(
  handler: (url: string, init?: RequestInit) => Response | Promise<Response>,
): { fetchImpl: FetchLike; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    calls.push({ url, init });
    return handler(url, init);
  };
  return { fetchImpl, calls };
}

export function bodyOf(call: RecordedCall): unknown {
  return JSON.parse(String(call.init?.body));
}
