// Thin client for the annotation service's /v1 JSON endpoints.

export interface RubricFeature {
  ordinal: number;
  short_name: string;
  description: string;
}

export interface RubricPayload {
  features: RubricFeature[];
  scale_labels: Record<string, string>;
  not_applicable: string;
}

export interface AssignmentPayload {
  assignment_id: string;
  sentence_index: number;
  source_text: string;
  target_text: string;
  progress: { done: number; total: number };
  rubric: RubricPayload;
}

export interface SubmitResponse {
  revision: number;
  final_score: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: unknown,
  ) {
    super(`request failed with status ${status}`);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private campaignId: string,
  ) {}

  private url(path: string): string {
    return `${this.baseUrl}/v1/campaigns/${this.campaignId}${path}`;
  }

  /** Next blinded assignment for the judge, or null when the queue is empty. */
  async nextAssignment(judgeId: string): Promise<AssignmentPayload | null> {
    const resp = await fetch(
      this.url(`/assignments/next?judge=${encodeURIComponent(judgeId)}`),
    );
    if (resp.status === 204) return null;
    if (!resp.ok) throw new ApiError(resp.status, await resp.json().catch(() => null));
    return (await resp.json()) as AssignmentPayload;
  }

  async submit(
    assignmentId: string,
    scores: (number | null)[],
    overwrite = false,
  ): Promise<SubmitResponse> {
    const resp = await fetch(this.url("/annotations"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ assignment_id: assignmentId, scores, overwrite }),
    });
    if (!resp.ok) throw new ApiError(resp.status, await resp.json().catch(() => null));
    return (await resp.json()) as SubmitResponse;
  }
}
