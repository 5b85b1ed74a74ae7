/** Single in-flight replan: a newer submission aborts and supersedes
 * any pending one, so the board only ever renders the latest answer.
 */

import type { MoviePlanClient, PlanRequest, PlanResponse } from "./api.js";

export class ReplanController {
  private generation = 0;
  private inflight: AbortController | null = null;

  constructor(private readonly client: MoviePlanClient) {}

  /** Submit the draft.  Resolves to null when a newer replan
   * superseded this one; the caller must drop null results. */
  async replan(draft: PlanRequest): Promise<PlanResponse | null> {
    const gen = ++this.generation;
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    let response: PlanResponse;
    try {
      response = await this.client.plan(draft, controller.signal);
    } catch (err) {
      if (gen !== this.generation) {
        return null;
      }
      throw err;
    }
    return gen === this.generation ? response : null;
  }
}
