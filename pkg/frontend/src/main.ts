/** Browser bootstrap: wires the client, session state and renderers to
 * the static shell in index.html.  All planning figures on screen come
 * from service payloads.
 */

import { MoviePlanClient, type PlanResponse } from "./api.js";
import { bannerFor, renderBanner } from "./banner.js";
import { boardFeatures, buildBoard, renderBoard } from "./board.js";
import { diffPlans, renderDiff } from "./diff.js";
import { ReplanController } from "./replan.js";
import {
  applyStaging,
  clearStaging,
  newSession,
  pinComparison,
  stageToggle,
  type SessionState,
} from "./state.js";
import { renderWhatIfPanel } from "./whatif.js";

const API_BASE =
  (import.meta as { env?: Record<string, string> }).env?.VITE_API ??
  "http://127.0.0.1:8080";

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id} in index.html`);
  }
  return node as T;
}

function start(): void {
  const client = new MoviePlanClient(
    (input, init) => fetch(input, init),
    API_BASE,
  );
  const controller = new ReplanController(client);

  let state: SessionState = newSession(50);

  const boardBox = byId<HTMLElement>("board");
  const whatifBox = byId<HTMLElement>("whatif");
  const diffBox = byId<HTMLElement>("diff");
  const bannerBox = byId<HTMLElement>("banner");
  const budgetInput = byId<HTMLInputElement>("budget");
  const lockInput = byId<HTMLInputElement>("lock-input");
  const stagingList = byId<HTMLElement>("staging");

  budgetInput.value = String(state.draft.budget_cap);

  function showError(err: unknown): void {
    bannerBox.replaceChildren(renderBanner(bannerFor(err)));
  }

  function showStaging(): void {
    stagingList.replaceChildren(
      ...state.staging.map(([feature, value]) => {
        const item = document.createElement("li");
        item.textContent = `${feature} -> ${value}`;
        return item;
      }),
    );
  }

  function showPlan(plan: PlanResponse): void {
    state = { ...state, lastPlan: plan };
    const board = renderBoard(buildBoard(plan, state.draft), {
      onLock: (feature) => {
        const locked = new Set(state.draft.locked);
        locked.add(feature);
        state = {
          ...state,
          draft: { ...state.draft, locked: [...locked].sort() },
        };
      },
      onExclude: (feature) => {
        state = { ...state, staging: stageToggle(state.staging, feature, 0) };
        showStaging();
      },
    });
    boardBox.replaceChildren(board);
    if (state.pinned) {
      diffBox.replaceChildren(renderDiff(diffPlans(state.pinned, plan)));
    }
    console.debug("board features", boardFeatures(board));
  }

  async function replan(): Promise<void> {
    bannerBox.replaceChildren();
    state = {
      ...state,
      draft: { ...state.draft, budget_cap: Number(budgetInput.value) },
    };
    try {
      const plan = await controller.replan(state.draft);
      if (plan) {
        showPlan(plan);
      }
    } catch (err) {
      showError(err);
    }
  }

  byId<HTMLButtonElement>("replan").addEventListener("click", () => {
    void replan();
  });

  byId<HTMLButtonElement>("pin").addEventListener("click", () => {
    try {
      state = pinComparison(state);
    } catch (err) {
      showError(err);
    }
  });

  byId<HTMLButtonElement>("add-lock").addEventListener("click", () => {
    const feature = lockInput.value.trim();
    if (!feature) {
      return;
    }
    const locked = new Set(state.draft.locked);
    locked.add(feature);
    state = {
      ...state,
      draft: { ...state.draft, locked: [...locked].sort() },
    };
    lockInput.value = "";
  });

  byId<HTMLButtonElement>("stage-add").addEventListener("click", () => {
    const feature = lockInput.value.trim();
    if (!feature) {
      return;
    }
    state = { ...state, staging: stageToggle(state.staging, feature, 1) };
    lockInput.value = "";
    showStaging();
  });

  byId<HTMLButtonElement>("preview").addEventListener("click", () => {
    void (async () => {
      try {
        const payload = await client.whatIf({
          base: state.draft,
          toggles: state.staging,
        });
        whatifBox.replaceChildren(renderWhatIfPanel(payload));
      } catch (err) {
        showError(err);
      }
    })();
  });

  byId<HTMLButtonElement>("apply").addEventListener("click", () => {
    state = applyStaging(state);
    showStaging();
    whatifBox.replaceChildren();
    void replan();
  });

  byId<HTMLButtonElement>("discard").addEventListener("click", () => {
    state = clearStaging(state);
    showStaging();
    whatifBox.replaceChildren();
  });
}

start();
