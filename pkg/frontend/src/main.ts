/** DOM wiring: subscribes to the store and re-renders panels on change. */

import { ApiClient } from "./api.js";
import { DashboardStore, EntityDetail } from "./state.js";
import {
  renderEntityDetail,
  renderError,
  renderGraphList,
  renderHistory,
  renderReport,
  renderRuleSelector,
} from "./render.js";
import { templatesForViolation } from "./templates.js";

const api = new ApiClient("");
const store = new DashboardStore(api);

let entityDetail: EntityDetail | null = null;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node;
}

function renderAll(): void {
  el("errors").innerHTML = renderError(store.lastError);
  el("graphs").innerHTML = renderGraphList(store.graphs, store.selectedGraph);
  el("rules").innerHTML = renderRuleSelector(store.rulesMeta,
                                             store.selectedRules);
  el("report").innerHTML = renderReport(store.report);
  el("history").innerHTML = renderHistory(store.history);
  el("detail").innerHTML = renderEntityDetail(entityDetail);
  renderPresets();
  renderTemplates();
}

function renderPresets(): void {
  const select = el("preset-select") as HTMLSelectElement;
  if (select.options.length === store.fixtures.length) return;
  select.innerHTML = store.fixtures
    .map((f) => `<option value="${f.name}">${f.name} (${f.triple_count})</option>`)
    .join("");
}

function renderTemplates(): void {
  const host = el("templates");
  const report = store.report;
  if (report === null) {
    host.innerHTML = "";
    return;
  }
  const buttons: string[] = [];
  report.rules.forEach((rule, ruleIndex) => {
    rule.violations.forEach((violation, violationIndex) => {
      templatesForViolation(rule.id, violation.bindings).forEach(
        (template, templateIndex) => {
          buttons.push(`<button class="template"
            data-rule="${ruleIndex}" data-violation="${violationIndex}"
            data-template="${templateIndex}">${template.label}</button>`);
        });
    });
  });
  host.innerHTML = buttons.join(" ");
}

async function applyTemplate(ruleIndex: number, violationIndex: number,
                             templateIndex: number): Promise<void> {
  const report = store.report;
  if (report === null) return;
  const rule = report.rules[ruleIndex];
  const violation = rule.violations[violationIndex];
  const template =
    templatesForViolation(rule.id, violation.bindings)[templateIndex];
  await store.whatIf(template.fragment, template.mode);
}

function wireEvents(): void {
  el("load-preset").addEventListener("click", () => {
    const select = el("preset-select") as HTMLSelectElement;
    void store.loadPreset(select.value);
  });

  el("upload").addEventListener("click", () => {
    const name = (el("upload-name") as HTMLInputElement).value.trim();
    const turtle = (el("upload-text") as HTMLTextAreaElement).value;
    if (name) void store.loadTurtle(name, turtle);
  });

  el("graphs").addEventListener("click", (event) => {
    const item = (event.target as HTMLElement).closest("[data-graph]");
    if (item instanceof HTMLElement && item.dataset.graph) {
      store.selectGraph(item.dataset.graph);
    }
  });

  el("rules").addEventListener("change", () => {
    const checked = Array.from(
      el("rules").querySelectorAll<HTMLInputElement>("input:checked"),
    ).map((input) => input.value);
    store.setRules(checked);
  });

  el("run-check").addEventListener("click", () => void store.runCheck());

  el("report").addEventListener("click", (event) => {
    const link = (event.target as HTMLElement).closest("[data-iri]");
    if (link instanceof HTMLElement && link.dataset.iri) {
      event.preventDefault();
      void store.entityDetail(link.dataset.iri).then((detail) => {
        entityDetail = detail;
        renderAll();
      });
    }
  });

  el("templates").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest(".template");
    if (button instanceof HTMLElement) {
      void applyTemplate(Number(button.dataset.rule),
                         Number(button.dataset.violation),
                         Number(button.dataset.template));
    }
  });

  el("apply-fragment").addEventListener("click", () => {
    const fragment = (el("fragment") as HTMLTextAreaElement).value;
    const mode = (el("fragment-mode") as HTMLSelectElement).value;
    if (fragment.trim()) {
      void store.whatIf(fragment, mode === "remove" ? "remove" : "add");
    }
  });

  el("history").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest(".revert");
    if (button instanceof HTMLElement) {
      const entry = store.history[Number(button.dataset.entry)];
      if (entry) void store.revert(entry);
    }
  });
}

store.subscribe(renderAll);
wireEvents();
void store.init();
