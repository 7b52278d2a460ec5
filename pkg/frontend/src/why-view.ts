// Provenance panel: shows the gateway's why() chain for one object, in
// order and verbatim. Payloads are rendered as their exact JSON so nothing
// is summarized away.

import { esc } from "./html.js";
import type { LedgerEventData } from "./types.js";

export function renderWhy(objectId: string, events: LedgerEventData[]): string {
  const rows = events
    .map(
      (event) => `
      <div class="why-row" data-index="${event.index}">
        <strong>#${event.index}</strong> ${esc(event.kind)} by ${esc(event.actor)} at ${esc(event.timestamp)}
        <pre class="why-payload">${esc(JSON.stringify(event.payload))}</pre>
      </div>`,
    )
    .join("");
  return `
    <h3>Why ${esc(objectId)}?</h3>
    <div class="why-chain">${rows || "<em>no recorded events</em>"}</div>
  `;
}
