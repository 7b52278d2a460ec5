// Thin fetch client for the gateway. Every mutating console action goes
// through exactly one method here, so one click is one request is one
// audited operation in the ledger.

import type {
  ActionData,
  ErrorEnvelope,
  EventPage,
  GateData,
  HealthData,
  LedgerEventData,
  SliceData,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly blockingObjects: string[];

  constructor(status: number, envelope: ErrorEnvelope) {
    super(envelope.message);
    this.name = "ApiError";
    this.code = envelope.code;
    this.status = status;
    this.blockingObjects = envelope.blocking_objects ?? [];
  }
}

export interface ClientOptions {
  actor?: string;
  expertToken?: string;
  fetchFn?: typeof fetch;
}

export class GatewayClient {
  readonly baseUrl: string;
  readonly actor: string;
  private readonly expertToken: string | null;
  private readonly fetchFn: typeof fetch;

  constructor(baseUrl: string, options: ClientOptions = {}) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.actor = options.actor ?? "expert";
    this.expertToken = options.expertToken ?? null;
    // Wrapped so the global fetch keeps its own receiver when called as a
    // method of this client (browsers reject a re-bound window.fetch).
    this.fetchFn = options.fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request(method: "GET" | "POST", path: string, body?: unknown): Promise<any> {
    const headers: Record<string, string> = { "X-Actor": this.actor };
    if (this.expertToken) {
      headers["X-Expert-Token"] = this.expertToken;
    }
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
    }
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      const envelope: ErrorEnvelope = payload?.error ?? {
        code: "unknown-error",
        message: `gateway returned ${response.status}`,
      };
      throw new ApiError(response.status, envelope);
    }
    return payload;
  }

  health(): Promise<HealthData> {
    return this.request("GET", "/health");
  }

  async compileSlice(actionId: string, maxItems?: number): Promise<SliceData> {
    const body = maxItems === undefined ? {} : { max_items: maxItems };
    const out = await this.request("POST", `/actions/${actionId}/slice`, body);
    return out.slice;
  }

  async listActions(): Promise<ActionData[]> {
    const out = await this.request("GET", "/actions");
    return out.actions;
  }

  async challengePremise(premiseId: string, reason: string): Promise<void> {
    await this.request("POST", `/premises/${premiseId}/challenge`, { reason });
  }

  async commitPremise(premiseId: string): Promise<{ applied: boolean; reason: string | null }> {
    const out = await this.request("POST", `/premises/${premiseId}/transition`, {
      target: "committed",
    });
    return out.transition;
  }

  async proposeProbe(
    premiseId: string,
    description: string,
    discrimination: number,
    cost: number,
  ): Promise<string> {
    const out = await this.request("POST", "/probes", {
      premise_id: premiseId,
      description,
      discrimination,
      cost,
    });
    return out.probe.id;
  }

  async recordProbeResult(probeId: string, passed: boolean, weight: number): Promise<string> {
    const out = await this.request("POST", `/probes/${probeId}/result`, { passed, weight });
    return out.evidence.id;
  }

  async resolveDiscrepancy(discrepancyId: string, evidenceId: string): Promise<void> {
    await this.request("POST", `/discrepancies/${discrepancyId}/resolve`, {
      resolution_evidence_id: evidenceId,
    });
  }

  async commitAction(actionId: string): Promise<{ gate: GateData; action: ActionData }> {
    return this.request("POST", `/actions/${actionId}/commit`, {});
  }

  async overrideCommit(
    actionId: string,
    riskNote: string,
  ): Promise<{ gate: GateData; action: ActionData }> {
    return this.request("POST", `/actions/${actionId}/override`, { risk_note: riskNote });
  }

  async eventsSince(index: number): Promise<EventPage> {
    return this.request("GET", `/events?since=${index}`);
  }

  async why(objectId: string): Promise<LedgerEventData[]> {
    const out = await this.request("GET", `/why/${objectId}`);
    return out.events;
  }
}
