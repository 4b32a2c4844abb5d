/**
 * Dashboard view state: selected graph and rules, the latest report, a
 * pending what-if fragment, and an immutable history of (version, report)
 * pairs for before/after comparison and reverts.
 *
 * Invariant: the displayed report always corresponds to the displayed
 * graph version, and every verdict comes from a service response recorded
 * in the API client's trace. No state change happens optimistically; each
 * one round-trips through the API.
 */

import { ApiClient, GraphInfo, Report, RuleMeta } from "./api.js";

export interface HistoryEntry {
  readonly graphId: string;
  readonly version: number;
  readonly report: Report;
  readonly note: string;
  /** Edit that undoes the step that produced this entry, when it was an edit. */
  readonly inverse?: { fragment: string; mode: "add" | "remove" };
}

export interface EntityDetail {
  iri: string;
  outgoing: Record<string, string>[];
  incoming: Record<string, string>[];
}

export type Listener = () => void;

export class DashboardStore {
  graphs: GraphInfo[] = [];
  fixtures: { name: string; triple_count: number }[] = [];
  rulesMeta: RuleMeta[] = [];
  selectedGraph: string | null = null;
  selectedRules: string[] = [];
  report: Report | null = null;
  pendingFragment = "";
  history: HistoryEntry[] = [];
  lastError: string | null = null;

  private listeners: Listener[] = [];

  constructor(readonly api: ApiClient) {}

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  private async guarded<T>(work: () => Promise<T>): Promise<T | null> {
    try {
      const result = await work();
      this.lastError = null;
      this.emit();
      return result;
    } catch (err) {
      this.lastError = err instanceof Error ? err.message : String(err);
      this.emit();
      return null;
    }
  }

  async init(): Promise<void> {
    await this.guarded(async () => {
      this.rulesMeta = await this.api.rules();
      this.fixtures = await this.api.listFixtures();
      this.graphs = await this.api.listGraphs();
      if (this.selectedRules.length === 0) {
        this.selectedRules = this.articleRuleIds();
      }
    });
  }

  articleRuleIds(): string[] {
    return this.rulesMeta
      .filter((r) => !r.informational)
      .map((r) => r.id);
  }

  /** Register a scenario preset (fetched from the service) as a graph. */
  async loadPreset(name: string): Promise<GraphInfo | null> {
    return this.guarded(async () => {
      const turtle = await this.api.fixtureTurtle(name);
      const info = await this.api.createGraph(turtle, name);
      this.graphs = await this.api.listGraphs();
      this.selectedGraph = info.graph_id;
      this.report = null;
      return info;
    });
  }

  /** Register uploaded Turtle under the given id. */
  async loadTurtle(id: string, turtle: string): Promise<GraphInfo | null> {
    return this.guarded(async () => {
      const info = await this.api.createGraph(turtle, id);
      this.graphs = await this.api.listGraphs();
      this.selectedGraph = info.graph_id;
      this.report = null;
      return info;
    });
  }

  selectGraph(id: string): void {
    this.selectedGraph = id;
    this.report = null;
    this.emit();
  }

  setRules(ids: string[]): void {
    this.selectedRules = [...ids];
    this.emit();
  }

  /** Run the selected rules; the displayed report is the response body. */
  async runCheck(note = "check"): Promise<Report | null> {
    const graphId = this.selectedGraph;
    if (graphId === null) return null;
    return this.guarded(async () => {
      const report = await this.api.check(graphId, this.selectedRules);
      this.report = report;
      this.history = [
        ...this.history,
        Object.freeze({
          graphId,
          version: report.graph_version,
          report,
          note,
        }),
      ];
      return report;
    });
  }

  /**
   * Post a what-if edit and immediately re-check. The history entry keeps
   * the inverse edit so the auditor can revert it later.
   */
  async whatIf(fragment: string, mode: "add" | "remove"):
      Promise<Report | null> {
    const graphId = this.selectedGraph;
    if (graphId === null) return null;
    const result = await this.guarded(() =>
      this.api.editFacts(graphId, fragment, mode));
    if (result === null) return null;
    const report = await this.runCheck(`what-if ${mode}`);
    if (report !== null) {
      const last = this.history[this.history.length - 1];
      this.history = [
        ...this.history.slice(0, -1),
        Object.freeze({
          ...last,
          inverse: { fragment, mode: mode === "add" ? "remove" as const
                                                    : "add" as const },
        }),
      ];
      this.emit();
    }
    return report;
  }

  /** Post the inverse edit of a history entry and re-check. */
  async revert(entry: HistoryEntry): Promise<Report | null> {
    if (!entry.inverse) return null;
    return this.whatIf(entry.inverse.fragment, entry.inverse.mode);
  }

  /** Violation rows for the table, straight from the report entries. */
  violationRows(): {
    ruleId: string; article: string; modality: string;
    message: string; entities: [string, string][];
  }[] {
    if (this.report === null) return [];
    const rows = [];
    for (const rule of this.report.rules) {
      for (const violation of rule.violations) {
        rows.push({
          ruleId: rule.id,
          article: rule.article,
          modality: rule.modality,
          message: violation.message,
          entities: Object.entries(violation.bindings).sort(
            (a, b) => a[0].localeCompare(b[0])) as [string, string][],
        });
      }
    }
    return rows;
  }

  /** Triples mentioning the entity (both directions), via the query
   * endpoint. */
  async entityDetail(iri: string): Promise<EntityDetail | null> {
    const graphId = this.selectedGraph;
    if (graphId === null) return null;
    return this.guarded(async () => ({
      iri,
      outgoing: await this.api.query(
        graphId, `SELECT ?p ?o WHERE { <${iri}> ?p ?o . }`),
      incoming: await this.api.query(
        graphId, `SELECT ?s ?p WHERE { ?s ?p <${iri}> . }`),
    }));
  }
}
