/**
 * Typed client for the compliance service HTTP API.
 *
 * Every response body is recorded verbatim in `trace`, so the UI layer can
 * prove that each displayed verdict equals a recorded service response
 * (the dashboard itself performs no compliance logic).
 */

export interface FixtureInfo {
  name: string;
  triple_count: number;
}

export interface GraphInfo {
  graph_id: string;
  version: number;
  triple_count: number;
}

export interface ViolationEntry {
  bindings: Record<string, string>;
  message: string;
}

export interface RuleResultEntry {
  id: string;
  article: string;
  modality: string;
  context: string;
  status: "compliant" | "violated" | "skipped";
  duration_us: number;
  violations: ViolationEntry[];
  error?: string;
}

export interface Report {
  graph_id: string;
  graph_version: number;
  timestamp: string;
  overall_status: "compliant" | "violated";
  rules: RuleResultEntry[];
}

export interface RuleMeta {
  id: string;
  article: string;
  modality: string;
  context: string;
  label: string;
  informational: boolean;
  alias_of: string | null;
  query: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  line?: number;
  column?: number;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ApiErrorBody,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

export interface RecordedCall {
  method: string;
  path: string;
  status: number;
  /** Raw response text, exactly as received. */
  body: string;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  readonly trace: RecordedCall[] = [];

  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(method: string, path: string, body?: string,
                        contentType = "text/turtle"): Promise<string> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = body;
      init.headers = { "content-type": contentType };
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    const text = await response.text();
    this.trace.push({ method, path, status: response.status, body: text });
    if (!response.ok) {
      let parsed: ApiErrorBody;
      try {
        parsed = JSON.parse(text) as ApiErrorBody;
      } catch {
        parsed = { code: "http_error", message: text || response.statusText };
      }
      throw new ApiError(response.status, parsed);
    }
    return text;
  }

  lastRecorded(): RecordedCall {
    if (this.trace.length === 0) throw new Error("no recorded calls");
    return this.trace[this.trace.length - 1];
  }

  async listFixtures(): Promise<FixtureInfo[]> {
    return JSON.parse(await this.request("GET", "/api/fixtures"));
  }

  async fixtureTurtle(name: string): Promise<string> {
    return this.request("GET", `/api/fixtures/${encodeURIComponent(name)}`);
  }

  async listGraphs(): Promise<GraphInfo[]> {
    return JSON.parse(await this.request("GET", "/api/graphs"));
  }

  async createGraph(turtle: string, id?: string): Promise<GraphInfo> {
    const suffix = id === undefined ? "" : `?id=${encodeURIComponent(id)}`;
    return JSON.parse(await this.request("POST", `/api/graphs${suffix}`, turtle));
  }

  async graphTurtle(graphId: string): Promise<string> {
    return this.request("GET", `/api/graphs/${encodeURIComponent(graphId)}`);
  }

  async check(graphId: string, ruleIds?: string[], infer = false):
      Promise<Report> {
    const params = new URLSearchParams();
    if (ruleIds !== undefined && ruleIds.length > 0) {
      params.set("rules", ruleIds.join(","));
    }
    if (infer) params.set("infer", "true");
    const qs = params.toString() ? `?${params.toString()}` : "";
    const path = `/api/graphs/${encodeURIComponent(graphId)}/check${qs}`;
    return JSON.parse(await this.request("POST", path));
  }

  async editFacts(graphId: string, fragment: string, mode: "add" | "remove"):
      Promise<{ version: number }> {
    const path = `/api/graphs/${encodeURIComponent(graphId)}/facts?mode=${mode}`;
    return JSON.parse(await this.request("POST", path, fragment));
  }

  async query(graphId: string, queryText: string):
      Promise<Record<string, string>[]> {
    const path = `/api/graphs/${encodeURIComponent(graphId)}/query`;
    return JSON.parse(await this.request("POST", path, queryText,
                                         "application/sparql-query"));
  }

  async rules(): Promise<RuleMeta[]> {
    return JSON.parse(await this.request("GET", "/api/rules"));
  }
}
