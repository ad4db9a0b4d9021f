// Typed client for the play-service HTTP API. The browser app talks to the
// backend exclusively through these calls.

export interface StepOption {
  letter: string;
  text: string;
}

export interface TerminalInfo {
  status: string;
  reason: string | null;
}

export interface StepView {
  session_id: string;
  step_index: number;
  goal: string;
  kind: string;
  level: number;
  frame_url: string;
  options: StepOption[];
  terminal: TerminalInfo | null;
}

export interface CreateSessionRequest {
  participant: string;
  kind: string;
  level: number;
  seed?: number;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

async function asJson(res: Response): Promise<StepView> {
  if (!res.ok) {
    throw new ApiError(res.status, `HTTP ${res.status}`);
  }
  return res.json();
}

export class SessionClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  createSession(req: CreateSessionRequest): Promise<StepView> {
    return this.fetchFn(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    }).then(asJson);
  }

  getStep(sessionId: string): Promise<StepView> {
    return this.fetchFn(`${this.baseUrl}/sessions/${sessionId}/step`).then(asJson);
  }

  submitChoice(
    sessionId: string,
    letter: string,
    stepIndex: number,
  ): Promise<StepView> {
    return this.fetchFn(`${this.baseUrl}/sessions/${sessionId}/choice`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ letter, step_index: stepIndex }),
    }).then(asJson);
  }

  frameUrl(view: StepView): string {
    // cache-bust per step so the browser refetches the new frame
    return `${this.baseUrl}${view.frame_url}?step=${view.step_index}`;
  }
}
