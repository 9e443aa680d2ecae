// Application state and its pure transition function. Rendering is a
// pure function of this state, so a refresh at any revision reproduces
// the identical UI.

import type {
  AbduceAnswer,
  ConflictDoc,
  ExplanationDoc,
  SessionDoc,
  VerdictDoc,
} from "./api.js";

export interface AppState {
  packs: string[];
  pack: string;
  sessionId: string | null;
  revision: number;
  session: SessionDoc | null;
  watched: string[];
  verdicts: Record<string, VerdictDoc[]>;
  explanation: { goal: string; doc: ExplanationDoc } | null;
  revealed: string | null; // rule/priority label whose text is shown
  conflicts: ConflictDoc[];
  hints: { goal: string; answers: AbduceAnswer[]; truncated: boolean } | null;
  offline: boolean;
  error: { code: string; message: string; revision: number } | null;
}

export const initialState: AppState = {
  packs: [],
  pack: "",
  sessionId: null,
  revision: -1,
  session: null,
  watched: [],
  verdicts: {},
  explanation: null,
  revealed: null,
  conflicts: [],
  hints: null,
  offline: false,
  error: null,
};

export type Event =
  | { kind: "packs-listed"; packs: string[] }
  | { kind: "session-created"; pack: string; sessionId: string }
  | { kind: "session-loaded"; doc: SessionDoc }
  | { kind: "goal-watched"; goal: string }
  | { kind: "goal-unwatched"; goal: string }
  | { kind: "verdicts-loaded"; goal: string; verdicts: VerdictDoc[] }
  | { kind: "explanation-loaded"; goal: string; doc: ExplanationDoc }
  | { kind: "explanation-closed" }
  | { kind: "statement-revealed"; label: string | null }
  | { kind: "conflicts-loaded"; conflicts: ConflictDoc[] }
  | { kind: "hints-loaded"; goal: string; answers: AbduceAnswer[]; truncated: boolean }
  | { kind: "hints-closed" }
  | { kind: "offline"; offline: boolean }
  | { kind: "service-error"; code: string; message: string; revision: number }
  | { kind: "error-dismissed" };

export function reduce(state: AppState, event: Event): AppState {
  switch (event.kind) {
    case "packs-listed":
      return { ...state, packs: event.packs };
    case "session-created":
      return {
        ...initialState,
        packs: state.packs,
        watched: state.watched,
        pack: event.pack,
        sessionId: event.sessionId,
      };
    case "session-loaded": {
      const changed = event.doc.revision !== state.revision;
      return {
        ...state,
        session: event.doc,
        revision: event.doc.revision,
        // stale per-revision documents are dropped and re-fetched
        verdicts: changed ? {} : state.verdicts,
        conflicts: changed ? [] : state.conflicts,
        explanation: changed ? null : state.explanation,
        hints: changed ? null : state.hints,
      };
    }
    case "goal-watched":
      if (state.watched.includes(event.goal)) return state;
      return { ...state, watched: [...state.watched, event.goal] };
    case "goal-unwatched":
      return {
        ...state,
        watched: state.watched.filter((g) => g !== event.goal),
        verdicts: Object.fromEntries(
          Object.entries(state.verdicts).filter(([g]) => g !== event.goal),
        ),
      };
    case "verdicts-loaded":
      return {
        ...state,
        verdicts: { ...state.verdicts, [event.goal]: event.verdicts },
      };
    case "explanation-loaded":
      return {
        ...state,
        explanation: { goal: event.goal, doc: event.doc },
        revealed: null,
      };
    case "explanation-closed":
      return { ...state, explanation: null, revealed: null };
    case "statement-revealed":
      return { ...state, revealed: event.label };
    case "conflicts-loaded":
      return { ...state, conflicts: event.conflicts };
    case "hints-loaded":
      return {
        ...state,
        hints: { goal: event.goal, answers: event.answers, truncated: event.truncated },
      };
    case "hints-closed":
      return { ...state, hints: null };
    case "offline":
      return event.offline === state.offline
        ? state
        : { ...state, offline: event.offline };
    case "service-error":
      return {
        ...state,
        error: { code: event.code, message: event.message, revision: event.revision },
      };
    case "error-dismissed":
      return { ...state, error: null };
  }
}

// The badge sequence a watched goal has shown so far is what the
// analyst narrative tracks ("accepted, then rejected, then accepted").
export function badgeSequence(history: VerdictDoc[][], goal: string): string[] {
  const out: string[] = [];
  for (const snapshot of history) {
    const v = snapshot.find((d) => d.goal === goal);
    if (v) out.push(v.status);
  }
  return out;
}

export function unresolvedConflicts(state: AppState): ConflictDoc[] {
  return state.conflicts.filter((c) => c.resolution === "unresolved");
}
