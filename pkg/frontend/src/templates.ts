/**
 * Guided what-if templates, generated from rule metadata and a violation's
 * entity bindings. Auditors who need something else fall back to the raw
 * Turtle box.
 */

const DA = "https://w3id.org/def/daont#";

export interface WhatIfTemplate {
  label: string;
  mode: "add" | "remove";
  fragment: string;
}

function localName(iri: string): string {
  const cut = Math.max(iri.lastIndexOf("#"), iri.lastIndexOf("/"));
  return cut >= 0 ? iri.slice(cut + 1) : iri;
}

/** Facts asserting that the holder performed a data provision. */
export function provisionFragment(holderIri: string): string {
  const provision = `${holderIri}-provision-whatif`;
  return [
    `<${holderIri}> <${DA}performsLegalAction> <${provision}> .`,
    `<${provision}> a <${DA}DataProvision> .`,
    "",
  ].join("\n");
}

/** Fact marking the data as trade-secret-justified (Art. 8(6) exception). */
export function tradeSecretFragment(dataIri: string): string {
  return `<${dataIri}> <${DA}containsTradeSecret> <${dataIri}-secret-whatif> .\n`;
}

/** Retraction of the prohibited-action typing triple. */
export function prohibitedTypingFragment(actionIri: string): string {
  return `<${actionIri}> a <${DA}UseDataToDevelopCompetingProduct> .\n`;
}

/**
 * Templates appropriate for one violation row. Bindings come straight from
 * the report entry.
 */
export function templatesForViolation(
  ruleId: string,
  bindings: Record<string, string>,
): WhatIfTemplate[] {
  const out: WhatIfTemplate[] = [];
  const holder = bindings["holder"];
  const action = bindings["action"];
  if ((ruleId === "R-4-1" || ruleId === "R-8-6") && holder !== undefined) {
    out.push({
      label: `Assert DataProvision by ${localName(holder)}`,
      mode: "add",
      fragment: provisionFragment(holder),
    });
  }
  if (ruleId === "R-19-2a" && action !== undefined) {
    out.push({
      label: `Retract competing-product typing of ${localName(action)}`,
      mode: "remove",
      fragment: prohibitedTypingFragment(action),
    });
  }
  return out;
}

export { localName };
