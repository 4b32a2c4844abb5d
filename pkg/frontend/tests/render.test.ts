import { describe, expect, it } from "vitest";

import { Report } from "../src/api.js";
import {
  escapeHtml,
  renderEntityDetail,
  renderError,
  renderGraphList,
  renderHistory,
  renderReport,
} from "../src/render.js";
import {
  localName,
  prohibitedTypingFragment,
  provisionFragment,
  templatesForViolation,
  tradeSecretFragment,
} from "../src/templates.js";

const SAMPLE_REPORT: Report = {
  graph_id: "b2g-violation",
  graph_version: 1,
  timestamp: "2026-01-01T00:00:00Z",
  overall_status: "violated",
  rules: [
    {
      id: "R-19-2a",
      article: "19(2)(a)",
      modality: "prohibition",
      context: "B2G",
      status: "violated",
      duration_us: 120,
      violations: [
        {
          bindings: {
            publicBody: "http://example.org/b2g-violation#healthAuthority",
            action:
              "http://example.org/b2g-violation#competitiveProductDevelopment1",
          },
          message: "prohibited action detected",
        },
      ],
    },
  ],
};

describe("escapeHtml", () => {
  it("neutralizes markup", () => {
    expect(escapeHtml('<b a="1">&x')).toBe("&lt;b a=&quot;1&quot;&gt;&amp;x");
  });
});

describe("renderReport", () => {
  it("shows a violated banner, modality badge and clickable entities", () => {
    const html = renderReport(SAMPLE_REPORT);
    expect(html).toContain("banner-violated");
    expect(html).toContain("badge-prohibition");
    expect(html).toContain(
      'data-iri="http://example.org/b2g-violation#healthAuthority"');
    expect(html).toContain("healthAuthority");
    expect(html).toContain("competitiveProductDevelopment1");
    expect(html).toContain("prohibited action detected");
  });

  it("shows a compliant banner without a table", () => {
    const html = renderReport({
      ...SAMPLE_REPORT,
      overall_status: "compliant",
      rules: [{ ...SAMPLE_REPORT.rules[0], status: "compliant", violations: [] }],
    });
    expect(html).toContain("banner-compliant");
    expect(html).toContain("No violations reported");
  });

  it("surfaces skipped rules with their error", () => {
    const html = renderReport({
      ...SAMPLE_REPORT,
      overall_status: "compliant",
      rules: [{
        ...SAMPLE_REPORT.rules[0],
        status: "skipped",
        violations: [],
        error: "boom",
      }],
    });
    expect(html).toContain("skipped");
    expect(html).toContain("boom");
  });
});

describe("renderGraphList", () => {
  it("marks the selected graph", () => {
    const html = renderGraphList(
      [
        { graph_id: "a", version: 1, triple_count: 51 },
        { graph_id: "b", version: 3, triple_count: 58 },
      ],
      "b",
    );
    expect(html).toContain('data-graph="a"');
    expect(html).toMatch(/graph-item active" data-graph="b"/);
    expect(html).toContain("v3");
  });
});

describe("renderHistory", () => {
  it("renders newest first with revert buttons for edits", () => {
    const html = renderHistory([
      { graphId: "g", version: 1, report: SAMPLE_REPORT, note: "check" },
      {
        graphId: "g",
        version: 2,
        report: { ...SAMPLE_REPORT, overall_status: "compliant" },
        note: "what-if add",
        inverse: { fragment: "x", mode: "remove" },
      },
    ]);
    expect(html.indexOf("v2")).toBeLessThan(html.indexOf("v1"));
    expect(html).toContain("revert");
  });
});

describe("renderEntityDetail / renderError", () => {
  it("prints both directions", () => {
    const html = renderEntityDetail({
      iri: "http://example.org/x#holder",
      outgoing: [{ p: "http://p", o: "http://o" }],
      incoming: [{ s: "http://s", p: "http://p2" }],
    });
    expect(html).toContain("holder");
    expect(html).toContain("http://p2");
  });

  it("renders nothing without an error", () => {
    expect(renderError(null)).toBe("");
    expect(renderError("nope")).toContain("nope");
  });
});

describe("what-if templates", () => {
  it("builds provision facts for the missing-obligation rules", () => {
    const holder = "http://example.org/b2c-violation#watchManufacturer";
    const templates = templatesForViolation("R-4-1", {
      holder,
      data: "http://example.org/b2c-violation#charlieHealthData",
    });
    expect(templates).toHaveLength(1);
    expect(templates[0].mode).toBe("add");
    expect(templates[0].fragment).toContain("performsLegalAction");
    expect(templates[0].fragment).toContain("DataProvision");
    expect(templates[0].fragment).toContain(holder);
    expect(templates[0].label).toContain("watchManufacturer");
  });

  it("builds a typing retraction for the prohibition rule", () => {
    const action =
      "http://example.org/b2g-violation#competitiveProductDevelopment1";
    const templates = templatesForViolation("R-19-2a", {
      publicBody: "http://example.org/b2g-violation#healthAuthority",
      action,
    });
    expect(templates).toHaveLength(1);
    expect(templates[0].mode).toBe("remove");
    expect(templates[0].fragment).toBe(prohibitedTypingFragment(action));
  });

  it("offers nothing for informational rules", () => {
    expect(templatesForViolation("CQ-1", {})).toEqual([]);
  });

  it("fragment builders emit turtle with absolute IRIs", () => {
    expect(provisionFragment("http://x/h")).toContain("<http://x/h>");
    expect(tradeSecretFragment("http://x/d")).toContain("containsTradeSecret");
    expect(localName("http://a/b#c")).toBe("c");
    expect(localName("urn:x")).toBe("urn:x");
  });
});
