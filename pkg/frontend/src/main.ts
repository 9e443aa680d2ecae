// Imperative shell: owns the state, forwards DOM events to the API,
// and re-renders from scratch on every state change.

import { ApiError, Client } from "./api.js";
import { buildLiteral } from "./format.js";
import { startPolling } from "./poll.js";
import { initialState, reduce, type AppState, type Event } from "./state.js";
import { render } from "./render.js";

const apiBase = new URLSearchParams(location.search).get("api") ?? "";
const client = new Client(apiBase);
const root = document.getElementById("app")!;

let state: AppState = initialState;
let poller: { stop(): void } | null = null;

function dispatch(event: Event): void {
  state = reduce(state, event);
  root.innerHTML = render(state);
  syncArgInputs();
}

function reportError(err: unknown): void {
  if (err instanceof ApiError) {
    dispatch({
      kind: "service-error",
      code: err.code,
      message: err.message,
      revision: state.revision,
    });
  } else {
    dispatch({ kind: "offline", offline: true });
  }
}

async function refreshPanels(): Promise<void> {
  if (!state.sessionId) return;
  const sid = state.sessionId;
  try {
    for (const goal of state.watched) {
      const r = await client.query(sid, goal);
      dispatch({ kind: "verdicts-loaded", goal, verdicts: r.verdicts });
    }
    const c = await client.conflicts(sid);
    dispatch({ kind: "conflicts-loaded", conflicts: c.conflicts });
  } catch (err) {
    reportError(err);
  }
}

async function newSession(pack: string): Promise<void> {
  poller?.stop();
  try {
    const created = await client.createSession(pack);
    dispatch({ kind: "session-created", pack, sessionId: created.sessionId });
    poller = startPolling(client, created.sessionId, {
      onSession: (doc) => {
        const moved = doc.revision !== state.revision;
        dispatch({ kind: "session-loaded", doc });
        if (moved) void refreshPanels();
      },
      onOffline: (offline) => dispatch({ kind: "offline", offline }),
    });
  } catch (err) {
    reportError(err);
  }
}

function syncArgInputs(): void {
  const select = document.getElementById("evidence-predicate") as HTMLSelectElement | null;
  if (!select) return;
  select.addEventListener("change", () => {
    const holder = document.getElementById("evidence-args")!;
    const [, arityText] = select.value.split("/");
    const arity = Number(arityText ?? 0);
    holder.innerHTML = Array.from({ length: arity })
      .map(
        (_, i) =>
          `<input class="arg" list="constants" placeholder="arg ${i + 1}" required>`,
      )
      .join("");
  });
}

document.addEventListener("click", (e) => {
  const target = (e.target as HTMLElement).closest<HTMLElement>("[data-action]");
  if (!target || !state.sessionId) {
    if (target?.dataset.action === "new-session") {
      const select = document.getElementById("pack-select") as HTMLSelectElement;
      void newSession(select.value);
    }
    return;
  }
  const sid = state.sessionId;
  const action = target.dataset.action!;
  const run = async () => {
    switch (action) {
      case "new-session": {
        const select = document.getElementById("pack-select") as HTMLSelectElement;
        await newSession(select.value);
        break;
      }
      case "retract":
        await client.retract(sid, [target.dataset.literal!]);
        break;
      case "unwatch":
        dispatch({ kind: "goal-unwatched", goal: target.dataset.goal! });
        break;
      case "explain": {
        const goal = target.dataset.goal!;
        const r = await client.explain(sid, goal);
        dispatch({ kind: "explanation-loaded", goal, doc: r.explanation });
        break;
      }
      case "close-explanation":
        dispatch({ kind: "explanation-closed" });
        break;
      case "reveal":
        dispatch({ kind: "statement-revealed", label: target.dataset.label! });
        break;
      case "hints": {
        const goal = target.dataset.goal!;
        const r = await client.abduce(sid, goal, "sceptical", 2);
        dispatch({ kind: "hints-loaded", goal, answers: r.answers, truncated: r.truncated });
        break;
      }
      case "close-hints":
        dispatch({ kind: "hints-closed" });
        break;
      case "assume":
        await client.assert(sid, JSON.parse(target.dataset.literals!));
        break;
      case "accept-suggestion": {
        const conflict = state.conflicts[Number(target.dataset.index)];
        if (conflict?.suggestion) {
          await client.addPriority(sid, {
            label: conflict.suggestion.label,
            higher: conflict.suggestion.higher,
            lower: conflict.suggestion.lower,
            when: conflict.suggestion.when,
          });
        }
        break;
      }
      case "dismiss-error":
        dispatch({ kind: "error-dismissed" });
        break;
    }
  };
  void run().catch(reportError);
});

document.addEventListener("submit", (e) => {
  const form = e.target as HTMLFormElement;
  e.preventDefault();
  if (!state.sessionId) return;
  const sid = state.sessionId;
  const run = async () => {
    if (form.id === "evidence-form") {
      const select = document.getElementById("evidence-predicate") as HTMLSelectElement;
      const [predicate] = select.value.split("/");
      const args = [...form.querySelectorAll<HTMLInputElement>("input.arg")].map(
        (i) => i.value.trim(),
      );
      const negated = (document.getElementById("evidence-negated") as HTMLInputElement)
        .checked;
      if (predicate) {
        await client.assert(sid, [buildLiteral(predicate, args, negated)]);
      }
    } else if (form.id === "watch-form") {
      const input = document.getElementById("watch-goal") as HTMLInputElement;
      if (input.value.trim()) {
        dispatch({ kind: "goal-watched", goal: input.value.trim() });
        await refreshPanels();
      }
    } else if (form.classList.contains("manual-priority")) {
      const data = new FormData(form);
      await client.addPriority(sid, {
        label: String(data.get("label")),
        higher: String(data.get("higher")),
        lower: String(data.get("lower")),
      });
    }
  };
  void run().catch(reportError);
});

async function boot(): Promise<void> {
  try {
    const listed = await client.packs();
    dispatch({ kind: "packs-listed", packs: listed.packs });
  } catch (err) {
    reportError(err);
  }
}

void boot();
