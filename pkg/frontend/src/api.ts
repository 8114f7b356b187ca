/**
 * Typed client for the codetutor REST service.
 *
 * The request surface is deliberately tiny: the only learner text that ever
 * leaves the page is the editor content, as `source`. There is no field for
 * free-form prompts, matching the server's closed request schema.
 */

export interface ExerciseSummary {
  id: string;
  title: string;
}

export interface CategoryNode {
  name: string;
  children: CategoryNode[];
  exercises: ExerciseSummary[];
}

export interface ExerciseDetail {
  id: string;
  title: string;
  description: string;
  input_examples: string[];
  output_examples: string[];
  category_path: string[];
}

export interface Usage {
  input_tokens: number;
  output_tokens: number;
  latency_ms: number;
  call_count: number;
}

export interface Verdict {
  state: "correct" | "wrong" | "error";
  reason: string;
  error_type: string | null;
  usage: Usage;
}

export interface FixLine {
  line: number;
  hint: string;
}

export interface Review {
  review_needed: boolean;
  body_markdown: string;
  fix_lines: FixLine[];
  redaction: { leaked: boolean; redactions: number };
  dropped_fix_lines: number;
  usage: Usage;
}

export interface ValidationFinding {
  kind: string;
  line: number;
  message: string;
}

/** Error body from the service: {code, message, details?}. */
export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
    public details?: unknown,
  ) {
    super(message);
    this.name = "ApiError";
  }

  /** Line-anchored findings when the server rejected the code itself. */
  findings(): ValidationFinding[] {
    const details = this.details as { findings?: ValidationFinding[] } | undefined;
    return details?.findings ?? [];
  }
}

export class TutorApi {
  constructor(private baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError("Upstream", `service unreachable: ${String(err)}`, 0);
    }
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      if (body && typeof body.code === "string") {
        throw new ApiError(body.code, body.message ?? "request failed", response.status, body.details);
      }
      const detail = body && typeof body.detail === "string" ? body.detail : "request failed";
      throw new ApiError("Upstream", detail, response.status);
    }
    return body as T;
  }

  getExercises(): Promise<CategoryNode[]> {
    return this.request<{ tree: CategoryNode[] }>("/exercises").then((body) => body.tree);
  }

  getExercise(id: string): Promise<ExerciseDetail> {
    return this.request<ExerciseDetail>(`/exercises/${encodeURIComponent(id)}`);
  }

  private post<T>(path: string, exerciseId: string, source: string, profile?: string): Promise<T> {
    const body: Record<string, string> = { exercise_id: exerciseId, source };
    if (profile) {
      body.profile = profile;
    }
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  submit(exerciseId: string, source: string, profile?: string): Promise<Verdict> {
    return this.post<Verdict>("/submissions", exerciseId, source, profile);
  }

  review(exerciseId: string, source: string, profile?: string): Promise<Review> {
    return this.post<Review>("/reviews", exerciseId, source, profile);
  }
}
