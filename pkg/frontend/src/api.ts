import type {
  ApiErrorBody,
  ComposeRequest,
  ComposeResponse,
  DecisionResponse,
  DeleteResponse,
  HeuristicsResponse,
  IncidentReportRequest,
  ReportResponse,
  ThresholdResponse,
  Vocabulary,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the JSON API. The fetch implementation is
 * injectable so tests can capture requests and replay fixtures. */
export class SentinelClient {
  constructor(
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
    private readonly base = '',
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      let message = `request failed with status ${response.status}`;
      try {
        message = ((await response.json()) as ApiErrorBody).error ?? message;
      } catch {
        // leave the generic message when the body is not JSON
      }
      throw new ApiError(response.status, message);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  composePost(request: ComposeRequest): Promise<ComposeResponse> {
    return this.post('/api/v1/posts', request);
  }

  decide(postId: string, action: 'publish' | 'retract'): Promise<DecisionResponse> {
    return this.post(`/api/v1/posts/${encodeURIComponent(postId)}/decision`, {
      action,
    });
  }

  deletePost(postId: string): Promise<DeleteResponse> {
    return this.request(`/api/v1/posts/${encodeURIComponent(postId)}`, {
      method: 'DELETE',
    });
  }

  submitIncidentReport(request: IncidentReportRequest): Promise<ReportResponse> {
    return this.post('/api/v1/incident-reports', request);
  }

  heuristics(): Promise<HeuristicsResponse> {
    return this.request('/api/v1/heuristics');
  }

  vocabulary(): Promise<Vocabulary> {
    return this.request('/api/v1/vocabulary');
  }

  threshold(userId: string): Promise<ThresholdResponse> {
    return this.request(`/api/v1/users/${encodeURIComponent(userId)}/threshold`);
  }
}
