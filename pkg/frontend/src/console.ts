// Controller for the negotiation console. One UI action dispatches exactly
// one gateway operation; nothing mutates the basis from the client side.
// Mutations do not recompile the slice behind the user's back: the event
// feed's read-only poll detects that the basis advanced past compiled_at and
// the view prompts for an explicit refresh instead.

import { ApiError, GatewayClient } from "./api.js";
import { EventFeed } from "./event-feed.js";
import { OverrideDialog } from "./override-dialog.js";
import { ProbeResultDialog } from "./probe-dialog.js";
import { gateBlocked, renderSlice } from "./slice-view.js";
import { renderWhy } from "./why-view.js";
import type { ActionData, SliceData } from "./types.js";

const SHELL = `
  <header class="console-header">
    <h1>Negotiation console</h1>
    <span class="console-status" data-role="status"></span>
    <span class="health" data-role="health"></span>
  </header>
  <main class="console-main">
    <section class="panel" data-role="slice-panel"></section>
    <div>
      <section class="panel" data-role="why-panel"><h3>Provenance</h3></section>
      <section class="panel"><h3>Ledger</h3><div data-role="event-feed"></div></section>
    </div>
  </main>
  <div data-role="override-host"></div>
  <div data-role="probe-host"></div>
`;

export class NegotiationConsole {
  slice: SliceData | null = null;
  action: ActionData | null = null;
  resolutionEvidenceId: string | null = null;

  readonly feed: EventFeed;
  readonly overrideDialog: OverrideDialog;
  readonly probeDialog: ProbeResultDialog;

  private readonly slicePanel: HTMLElement;
  private readonly whyPanel: HTMLElement;
  private readonly statusLine: HTMLElement;
  private readonly healthLine: HTMLElement;
  private inflight: Promise<void> = Promise.resolve();

  constructor(
    private readonly client: GatewayClient,
    private readonly root: HTMLElement,
    private readonly actionId: string,
  ) {
    this.root.innerHTML = SHELL;
    this.slicePanel = this.query("slice-panel");
    this.whyPanel = this.query("why-panel");
    this.statusLine = this.query("status");
    this.healthLine = this.query("health");
    this.feed = new EventFeed(client, this.query("event-feed"));
    this.overrideDialog = new OverrideDialog(this.query("override-host"));
    this.probeDialog = new ProbeResultDialog(this.query("probe-host"));
    this.root.addEventListener("click", (event) => this.onClick(event));
  }

  private query(role: string): HTMLElement {
    const el = this.root.querySelector<HTMLElement>(`[data-role="${role}"]`);
    if (!el) throw new Error(`console shell is missing role ${role}`);
    return el;
  }

  /** Resolves once every dispatched UI action has settled. */
  idle(): Promise<void> {
    return this.inflight;
  }

  async start(): Promise<void> {
    const actions = await this.client.listActions();
    this.action = actions.find((a) => a.id === this.actionId) ?? null;
    await this.refreshSlice();
    await this.pollOnce();
  }

  startPolling(intervalMs: number): number {
    return setInterval(() => void this.pollOnce().catch(() => undefined), intervalMs) as unknown as number;
  }

  async refreshSlice(): Promise<void> {
    this.slice = await this.client.compileSlice(this.actionId);
    this.renderSlicePanel();
  }

  /** Read-only poll: advances the feed cursor and the staleness marker. */
  async pollOnce(): Promise<void> {
    const version = await this.feed.poll();
    const health = await this.client.health();
    this.healthLine.textContent = `${health.events} events · version #${version}`;
    this.renderSlicePanel();
  }

  renderSlicePanel(): void {
    if (!this.slice) {
      this.slicePanel.innerHTML = "<em>no slice compiled yet</em>";
      return;
    }
    this.slicePanel.innerHTML = renderSlice(this.slice, {
      action: this.action,
      latestVersion: this.feed.version >= 0 ? this.feed.version : null,
      resolutionEvidenceId: this.resolutionEvidenceId,
    });
  }

  private status(text: string): void {
    this.statusLine.textContent = text;
  }

  private onClick(event: Event): void {
    const button = (event.target as HTMLElement).closest<HTMLElement>("button[data-act]");
    if (!button || (button as HTMLButtonElement).disabled) return;
    const act = button.dataset.act as string;
    this.enqueue(() => this.dispatch(act, button));
  }

  private enqueue(step: () => Promise<void>): void {
    this.inflight = this.inflight.then(step).catch((error) => {
      this.status(error instanceof ApiError ? `${error.code}: ${error.message}` : String(error));
    });
  }

  private async dispatch(act: string, button: HTMLElement): Promise<void> {
    const data = button.dataset;
    switch (act) {
      case "refresh":
        return this.refreshSlice();
      case "contest":
        return this.contestPremise(data.premiseId as string, button);
      case "commit-premise":
        return this.commitPremise(data.premiseId as string);
      case "approve-probe":
        return this.approveProbe(data);
      case "open-probe-result":
        this.probeDialog.open(data.probeId as string, data.description ?? "", (submission) =>
          this.recordProbeResult(submission.probeId, submission.passed, submission.weight),
        );
        return;
      case "resolve":
        return this.resolveDiscrepancy(data.discrepancyId as string);
      case "commit-action":
        return this.commitAction();
      case "open-override":
        this.openOverride((data.blocking ?? "").split(",").filter(Boolean));
        return;
      case "conservative":
        this.openConservative(data.target as string);
        return;
      case "why":
        return this.showWhy(data.objectId as string);
      default:
        this.status(`unknown action ${act}`);
    }
  }

  private async contestPremise(premiseId: string, button: HTMLElement): Promise<void> {
    const card = button.closest(".premise-card");
    const input = card?.querySelector<HTMLInputElement>('[data-role="contest-reason"]');
    const reason = input && input.value.trim() !== "" ? input.value.trim() : "contested from console";
    await this.client.challengePremise(premiseId, reason);
    this.status(`contested ${premiseId}`);
  }

  private async commitPremise(premiseId: string): Promise<void> {
    const transition = await this.client.commitPremise(premiseId);
    this.status(
      transition.applied
        ? `committed ${premiseId}`
        : `transition rejected: ${transition.reason ?? "unknown"}`,
    );
  }

  private async approveProbe(data: DOMStringMap): Promise<void> {
    const probeId = await this.client.proposeProbe(
      data.target as string,
      data.description ?? "targeted check",
      Number(data.discrimination ?? "0.8"),
      Number(data.cost ?? "0.2"),
    );
    this.status(`probe ${probeId} approved`);
  }

  private async recordProbeResult(probeId: string, passed: boolean, weight: number): Promise<void> {
    this.resolutionEvidenceId = await this.client.recordProbeResult(probeId, passed, weight);
    this.status(`probe ${probeId} ${passed ? "passed" : "failed"}; evidence ${this.resolutionEvidenceId}`);
    this.renderSlicePanel();
  }

  private async resolveDiscrepancy(discrepancyId: string): Promise<void> {
    if (!this.resolutionEvidenceId) {
      this.status("record a passing probe result before resolving");
      return;
    }
    await this.client.resolveDiscrepancy(discrepancyId, this.resolutionEvidenceId);
    this.status(`resolved ${discrepancyId} with ${this.resolutionEvidenceId}`);
  }

  private async commitAction(): Promise<void> {
    try {
      const out = await this.client.commitAction(this.actionId);
      this.status(`commit ${out.gate.verdict}; action ${out.action.status}`);
    } catch (error) {
      if (error instanceof ApiError && error.code === "override-required") {
        this.openOverride(error.blockingObjects);
        this.status(`${error.code}: ${error.message}`);
        return;
      }
      throw error;
    }
  }

  private openOverride(blocking: string[]): void {
    this.overrideDialog.open(
      {
        title: `Override gate for ${this.actionId}`,
        targetId: this.actionId,
        blocking,
        submitLabel: "Override and commit",
      },
      async ({ targetId, riskNote }) => {
        const out = await this.client.overrideCommit(targetId, riskNote);
        this.status(`override granted; action ${out.action.status}`);
      },
    );
  }

  private openConservative(premiseId: string): void {
    this.overrideDialog.open(
      {
        title: `Hold the line on ${premiseId}`,
        targetId: premiseId,
        blocking: this.slice ? this.slice.premises.filter((p) => !p.context).map((p) => p.premise_id) : [],
        submitLabel: "Contest with note",
      },
      async ({ targetId, riskNote }) => {
        await this.client.challengePremise(targetId, riskNote);
        this.status(`contested ${targetId} with risk note`);
      },
    );
  }

  private async showWhy(objectId: string): Promise<void> {
    const events = await this.client.why(objectId);
    this.whyPanel.innerHTML = renderWhy(objectId, events);
  }

  /** True when the slice's commit control may be enabled. */
  get gateAllows(): boolean {
    return this.slice !== null && !gateBlocked(this.slice);
  }
}

export function statusText(root: HTMLElement): string {
  return root.querySelector<HTMLElement>('[data-role="status"]')?.textContent ?? "";
}
