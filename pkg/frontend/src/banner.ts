/** Error banners.
 *
 * A 422 from the service means the locked set cannot fit under the
 * budget cap; that gets a dedicated budget banner.  Everything else
 * (bad feature names, validation errors, server faults, network
 * failures) renders as a generic error banner.
 */

import { ServiceError } from "./api.js";

export interface Banner {
  kind: "budget" | "error";
  message: string;
}

const BUDGET_PHRASE = "locked set exceeds budget";

export function bannerFor(err: unknown): Banner {
  if (err instanceof ServiceError) {
    if (err.isBudgetConflict) {
      // the service detail usually already names the condition; only
      // prefix it when it does not
      const message = err.detail.startsWith(BUDGET_PHRASE)
        ? err.detail
        : `${BUDGET_PHRASE} — ${err.detail}`;
      return { kind: "budget", message };
    }
    return { kind: "error", message: `${err.error}: ${err.detail}` };
  }
  if (err instanceof Error) {
    return { kind: "error", message: err.message };
  }
  return { kind: "error", message: String(err) };
}

export function renderBanner(
  banner: Banner,
  doc: Document = document,
): HTMLElement {
  const node = doc.createElement("div");
  node.className = `banner banner-${banner.kind}`;
  node.setAttribute("role", "alert");
  node.textContent = banner.message;
  return node;
}
