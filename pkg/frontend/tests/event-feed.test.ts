// The feed renders the ledger in index order and only ever asks the gateway
// for events past its cursor.

import { describe, expect, it } from "vitest";

import { GatewayClient } from "../src/api.js";
import { EventFeed } from "../src/event-feed.js";
import type { LedgerEventData } from "../src/types.js";

function fakeEvent(index: number, kind: string): LedgerEventData {
  return {
    index,
    kind,
    payload: { premise_id: `P000${index}` },
    actor: "expert",
    session: "S0001",
    timestamp: "2026-01-05T12:00:00+00:00",
    prev_hash: "0".repeat(64),
    hash: "f".repeat(64),
  };
}

function clientServing(pages: Record<string, LedgerEventData[]>, version: () => number) {
  const asked: number[] = [];
  const fetchFn = (async (url: RequestInfo | URL) => {
    const since = Number(new URL(String(url)).searchParams.get("since"));
    asked.push(since);
    const events = pages[String(since)] ?? [];
    return new Response(JSON.stringify({ events, head: "f".repeat(64), version: version() }), {
      status: 200,
      headers: { "Content-Type": "application/json" },
    });
  }) as typeof fetch;
  return { client: new GatewayClient("http://gateway.test", { fetchFn }), asked };
}

describe("event feed", () => {
  it("renders events in index order and advances its cursor", async () => {
    const { client, asked } = clientServing(
      {
        "-1": [fakeEvent(0, "SessionOpened"), fakeEvent(1, "PremiseCreated")],
        "1": [fakeEvent(2, "EvidenceAttached")],
      },
      () => 2,
    );
    document.body.innerHTML = `<div id="feed"></div>`;
    const container = document.getElementById("feed") as HTMLElement;
    const feed = new EventFeed(client, container);

    await feed.poll();
    await feed.poll();

    const indexes = [...container.querySelectorAll<HTMLElement>(".event-row")].map((row) =>
      Number(row.dataset.index),
    );
    expect(indexes).toEqual([0, 1, 2]);
    expect(asked).toEqual([-1, 1]);
    expect(feed.cursor).toBe(2);
    expect(feed.version).toBe(2);
    console.log("[PASS] feed renders in index order with a since-cursor");
  });
});
