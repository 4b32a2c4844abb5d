/**
 * Pure HTML renderers over the store's state. Nothing here computes a
 * verdict: statuses, messages and bindings are printed exactly as the
 * report carries them.
 */

import { Report, RuleMeta } from "./api.js";
import { EntityDetail, HistoryEntry } from "./state.js";
import { localName } from "./templates.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

const MODALITY_BADGE: Record<string, string> = {
  obligation: "badge-obligation",
  "permission-exception": "badge-permission",
  prohibition: "badge-prohibition",
};

export function renderGraphList(
  graphs: { graph_id: string; version: number; triple_count: number }[],
  selected: string | null,
): string {
  if (graphs.length === 0) {
    return '<p class="hint">No graphs yet. Load a preset or upload Turtle.</p>';
  }
  const items = graphs.map((g) => {
    const active = g.graph_id === selected ? " active" : "";
    return `<li class="graph-item${active}" data-graph="${escapeHtml(g.graph_id)}">
      <span class="graph-name">${escapeHtml(g.graph_id)}</span>
      <span class="graph-meta">v${g.version} &middot; ${g.triple_count} triples</span>
    </li>`;
  });
  return `<ul class="graph-list">${items.join("")}</ul>`;
}

export function renderRuleSelector(rules: RuleMeta[],
                                   selected: string[]): string {
  const rows = rules
    .filter((r) => !r.informational)
    .map((r) => {
      const checked = selected.includes(r.id) ? " checked" : "";
      return `<label class="rule-option">
        <input type="checkbox" value="${escapeHtml(r.id)}"${checked}>
        <code>${escapeHtml(r.id)}</code> ${escapeHtml(r.label)}
      </label>`;
    });
  return rows.join("");
}

export function renderReport(report: Report | null): string {
  if (report === null) {
    return '<p class="hint">Run a check to see results.</p>';
  }
  const banner =
    report.overall_status === "violated"
      ? '<div class="banner banner-violated">VIOLATED</div>'
      : '<div class="banner banner-compliant">COMPLIANT</div>';
  const meta = `<p class="report-meta">graph <code>${escapeHtml(report.graph_id)}</code>
    version ${report.graph_version} &middot; ${escapeHtml(report.timestamp)}</p>`;

  const rows: string[] = [];
  for (const rule of report.rules) {
    for (const violation of rule.violations) {
      const badgeClass = MODALITY_BADGE[rule.modality] ?? "badge-plain";
      const entities = Object.entries(violation.bindings)
        .sort((a, b) => a[0].localeCompare(b[0]))
        .map(([variable, iri]) =>
          `<a href="#" class="entity" data-iri="${escapeHtml(iri)}"
             title="${escapeHtml(iri)}">?${escapeHtml(variable)}=${
             escapeHtml(localName(iri))}</a>`)
        .join(" ");
      rows.push(`<tr>
        <td><code>${escapeHtml(rule.id)}</code></td>
        <td>${escapeHtml(rule.article)}</td>
        <td><span class="badge ${badgeClass}">${escapeHtml(rule.modality)}</span></td>
        <td>${entities}</td>
        <td class="message">${escapeHtml(violation.message)}</td>
      </tr>`);
    }
  }
  const skipped = report.rules
    .filter((r) => r.status === "skipped")
    .map((r) => `<p class="error">rule ${escapeHtml(r.id)} skipped: ${
      escapeHtml(r.error ?? "")}</p>`)
    .join("");
  const table = rows.length
    ? `<table class="violations">
        <thead><tr><th>rule</th><th>article</th><th>modality</th>
        <th>entities</th><th>message</th></tr></thead>
        <tbody>${rows.join("")}</tbody>
      </table>`
    : '<p class="hint">No violations reported.</p>';
  return banner + meta + skipped + table;
}

export function renderHistory(history: HistoryEntry[]): string {
  if (history.length === 0) {
    return '<p class="hint">No checks yet.</p>';
  }
  const items = history
    .map((entry, index) => {
      const revert = entry.inverse
        ? ` <button class="revert" data-entry="${index}">revert</button>`
        : "";
      return `<li>
        <span class="history-version">v${entry.version}</span>
        ${escapeHtml(entry.note)} &rarr;
        <strong class="${entry.report.overall_status}">${
          entry.report.overall_status}</strong>${revert}
      </li>`;
    })
    .reverse();
  return `<ol class="history" reversed>${items.join("")}</ol>`;
}

export function renderEntityDetail(detail: EntityDetail | null): string {
  if (detail === null) return "";
  const rows = (solutions: Record<string, string>[],
                shape: (s: Record<string, string>) => string[]) =>
    solutions.map((s) => `<tr>${shape(s).map(
      (cell) => `<td>${escapeHtml(cell)}</td>`).join("")}</tr>`).join("");
  return `<h3>${escapeHtml(localName(detail.iri))}</h3>
    <p class="hint"><code>${escapeHtml(detail.iri)}</code></p>
    <table class="detail">
      <tbody>
        ${rows(detail.outgoing, (s) => ["→", s["p"] ?? "", s["o"] ?? ""])}
        ${rows(detail.incoming, (s) => ["←", s["s"] ?? "", s["p"] ?? ""])}
      </tbody>
    </table>`;
}

export function renderError(message: string | null): string {
  return message === null
    ? ""
    : `<div class="banner banner-error">${escapeHtml(message)}</div>`;
}
