// Live ledger feed: polls the event stream with a since-index cursor and
// appends rows in index order. Reads only; polling never mutates the basis.

import type { GatewayClient } from "./api.js";
import { esc } from "./html.js";
import type { LedgerEventData } from "./types.js";

export class EventFeed {
  cursor = -1;
  version = -1;

  constructor(
    private readonly client: GatewayClient,
    private readonly container: HTMLElement,
  ) {}

  /** One poll step; returns the basis version reported by the gateway. */
  async poll(): Promise<number> {
    const page = await this.client.eventsSince(this.cursor);
    for (const event of page.events) {
      this.container.insertAdjacentHTML("beforeend", renderEventRow(event));
      this.cursor = event.index;
    }
    this.version = page.version;
    return page.version;
  }
}

export function renderEventRow(event: LedgerEventData): string {
  return `
    <div class="event-row" data-index="${event.index}">
      <strong>#${event.index}</strong>
      <span class="event-kind">${esc(event.kind)}</span>
      <span class="event-actor">${esc(event.actor)}</span>
      <span class="event-summary">${esc(summarize(event))}</span>
    </div>`;
}

function summarize(event: LedgerEventData): string {
  const p = event.payload;
  const interesting = [
    "premise_id",
    "action_id",
    "probe_id",
    "discrepancy_id",
    "evidence_id",
    "verdict",
    "risk_note",
    "reason",
  ];
  const parts: string[] = [];
  for (const key of interesting) {
    if (p[key] !== undefined && p[key] !== null) {
      parts.push(`${key}=${String(p[key])}`);
    }
  }
  return parts.join(" ");
}
