// Typed client for the engine's HTTP API. The workbench never computes
// verdicts locally; everything flows through these calls.

export interface EvidencePredicate {
  name: string;
  arity: number;
  layer: string | null;
}

export interface SessionDoc {
  revision: number;
  sessionId: string;
  pack: string;
  theory: string;
  evidence: string[];
  appliedPriorities: { label: string; higher: string; lower: string; when: string[] }[];
  constants: string[];
  evidencePredicates: EvidencePredicate[];
}

export interface WitnessDoc {
  conclusion: string;
  rules: string[];
  premises: string[];
}

export interface VerdictDoc {
  goal: string;
  status: string;
  witnesses: WitnessDoc[];
  notes: string[];
}

export interface ExplanationRule {
  label: string;
  head: string;
  body: string[];
}

export interface ExplanationConflict {
  against: string;
  at: string;
  decidedBy: string[] | "undecided";
}

export interface ExplanationDoc {
  goal: string;
  status: string;
  winner: { rules: ExplanationRule[] } | null;
  conflicts: ExplanationConflict[];
  hints: { assume: string[] }[];
}

export interface SuggestionDoc {
  label: string;
  higher: string;
  lower: string;
  when: string[];
}

export interface ConflictDoc {
  ruleA: string;
  ruleB: string;
  headA: string;
  headB: string;
  unifier: Record<string, string>;
  witness: string[];
  resolution: string[] | "unresolved";
  winner: string | null;
  suggestion: SuggestionDoc | null;
}

export interface AbduceAnswer {
  assume: string[];
  status: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly span?: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseError(response: Response): Promise<never> {
  let code = "http-error";
  let message = `${response.status} ${response.statusText}`;
  let span: string | undefined;
  try {
    const body = await response.json();
    if (body && typeof body === "object") {
      code = body.code ?? code;
      message = body.message ?? message;
      span = body.span;
    }
  } catch {
    // keep the generic message when the body is not JSON
  }
  throw new ApiError(response.status, code, message, span);
}

export class Client {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (i, init) => fetch(i, init),
  ) {}

  private async get<T>(path: string, params?: Record<string, string>): Promise<T> {
    const qs = params ? "?" + new URLSearchParams(params).toString() : "";
    const response = await this.fetchImpl(`${this.base}${path}${qs}`);
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  packs(): Promise<{ packs: string[] }> {
    return this.get("/packs");
  }

  createSession(pack: string): Promise<{ sessionId: string; revision: number }> {
    return this.post("/sessions", { pack });
  }

  session(id: string): Promise<SessionDoc> {
    return this.get(`/sessions/${id}`);
  }

  assert(id: string, literals: string[]): Promise<{ revision: number }> {
    return this.post(`/sessions/${id}/evidence`, { assert: literals });
  }

  retract(id: string, literals: string[]): Promise<{ revision: number }> {
    return this.post(`/sessions/${id}/evidence`, { retract: literals });
  }

  query(id: string, goal: string): Promise<{ revision: number; verdicts: VerdictDoc[] }> {
    return this.get(`/sessions/${id}/query`, { goal });
  }

  explain(id: string, goal: string): Promise<{ revision: number; explanation: ExplanationDoc }> {
    return this.get(`/sessions/${id}/explain`, { goal });
  }

  conflicts(id: string): Promise<{ revision: number; conflicts: ConflictDoc[] }> {
    return this.get(`/sessions/${id}/conflicts`);
  }

  addPriority(
    id: string,
    priority: { label: string; higher: string; lower: string; when?: string[] },
  ): Promise<{ revision: number }> {
    return this.post(`/sessions/${id}/priorities`, priority);
  }

  abduce(
    id: string,
    goal: string,
    tier: string,
    maxSize: number,
  ): Promise<{ revision: number; truncated: boolean; answers: AbduceAnswer[] }> {
    return this.post(`/sessions/${id}/abduce`, { goal, tier, maxSize });
  }
}
