import type {
  GenerateResponse,
  HealthResponse,
  MapPayload,
  MapQuery,
  ProjectDetail,
  RecipeItemWire,
  SearchResponse,
  SummaryResponse,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

/** Thrown when the server answers with an {error_code, message} body. */
export class ApiRequestError extends Error {
  readonly errorCode: string;
  readonly status: number;

  constructor(status: number, errorCode: string, message: string) {
    super(message);
    this.name = "ApiRequestError";
    this.status = status;
    this.errorCode = errorCode;
  }
}

/** Returned (never thrown) when a request lost to a newer one on its channel. */
export const SUPERSEDED = Symbol("superseded");

function buildQuery(params: Record<string, string | number | undefined>): string {
  const search = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== undefined) search.set(key, String(value));
  }
  const text = search.toString();
  return text ? `?${text}` : "";
}

/**
 * Typed client for the explore service.
 *
 * Requests are grouped into channels ("map", "search", ...); issuing a new
 * request on a channel aborts the in-flight one, so the newest user intent
 * always wins and stale responses can never overwrite fresh state.
 */
export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;
  private readonly inflight = new Map<string, AbortController>();

  constructor(baseUrl = "", fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(
    channel: string,
    path: string,
    init: RequestInit = {},
  ): Promise<T | typeof SUPERSEDED> {
    this.inflight.get(channel)?.abort();
    const controller = new AbortController();
    this.inflight.set(channel, controller);

    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        ...init,
        signal: controller.signal,
      });
    } catch (err) {
      if (controller.signal.aborted) return SUPERSEDED;
      throw err;
    } finally {
      if (this.inflight.get(channel) === controller) {
        this.inflight.delete(channel);
      }
    }

    if (!response.ok) {
      const body = await response.json().catch(() => null);
      throw new ApiRequestError(
        response.status,
        body?.error_code ?? "http_error",
        body?.message ?? `request failed with status ${response.status}`,
      );
    }
    return (await response.json()) as T;
  }

  health(): Promise<HealthResponse | typeof SUPERSEDED> {
    return this.request("health", "/api/health");
  }

  map(query: MapQuery = {}): Promise<MapPayload | typeof SUPERSEDED> {
    return this.request("map", "/api/map" + buildQuery({ ...query }));
  }

  project(id: string): Promise<ProjectDetail | typeof SUPERSEDED> {
    return this.request("project", `/api/project/${encodeURIComponent(id)}`);
  }

  search(q: string, k = 10): Promise<SearchResponse | typeof SUPERSEDED> {
    return this.request("search", "/api/search" + buildQuery({ q, k }));
  }

  summary(query: MapQuery = {}): Promise<SummaryResponse | typeof SUPERSEDED> {
    return this.request("summary", "/api/summary" + buildQuery({ ...query }));
  }

  generate(
    items: RecipeItemWire[],
  ): Promise<GenerateResponse | typeof SUPERSEDED> {
    return this.request("generate", "/api/generate", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ items }),
    });
  }
}
