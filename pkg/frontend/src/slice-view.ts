// Renders one decision slice as an interactive view. Everything shown comes
// straight off the slice payload; the view invents no premises or options.
// Item accounting mirrors the gateway compiler: premise cards, evidence rows
// and option buttons plus the consequence line never exceed budget.max_items,
// even if a malformed slice arrives.

import { esc, fmt } from "./html.js";
import { STATUS_CLASS } from "./styles.js";
import type {
  ActionData,
  RepairOptionData,
  SliceData,
  SliceEvidence,
  SlicePremise,
} from "./types.js";

export interface SliceContext {
  action: ActionData | null;
  // Latest basis version seen by the event feed; newer than compiled_at
  // means the slice is stale and the view must prompt a refresh.
  latestVersion: number | null;
  // Evidence produced by the most recent probe result, usable to resolve.
  resolutionEvidenceId: string | null;
}

export function gateBlocked(slice: SliceData): boolean {
  return slice.consequence.dominant_premise !== null;
}

export function renderSlice(slice: SliceData, ctx: SliceContext): string {
  const blocked = gateBlocked(slice);
  const stale = ctx.latestVersion !== null && ctx.latestVersion > slice.compiled_at;

  const maxItems = slice.budget.max_items;
  const options = slice.repair_options.slice(0, 2);
  let remaining = maxItems - 1 - options.length;

  const premiseCards: string[] = [];
  for (const premise of slice.premises) {
    if (remaining <= 0) break;
    premiseCards.push(renderPremiseCard(premise));
    remaining -= 1;
  }
  const evidenceRows: string[] = [];
  for (const entry of slice.discrepant_evidence) {
    if (remaining <= 0) break;
    evidenceRows.push(renderEvidenceRow(entry, ctx.resolutionEvidenceId));
    remaining -= 1;
  }

  return `
    <div class="slice-view" data-action-id="${esc(slice.action_id)}" data-compiled-at="${slice.compiled_at}">
      <div class="slice-header">
        <h2>${esc(ctx.action ? ctx.action.description : slice.action_id)}</h2>
        <span class="slice-meta">${esc(slice.action_id)} · compiled at #${slice.compiled_at}</span>
      </div>
      ${stale ? renderStaleBanner(ctx.latestVersion as number) : ""}
      <div class="premise-list">${premiseCards.join("")}</div>
      ${evidenceRows.length ? `<div class="evidence-panel"><h3>Discrepant evidence</h3>${evidenceRows.join("")}</div>` : ""}
      <div class="consequence-panel" data-role="consequence">
        <strong>${blocked ? "If this premise flips" : "Gate passes"}</strong>
        <div>${esc(slice.consequence.text)}</div>
        ${renderConsequenceDelta(slice)}
      </div>
      <div class="repair-options">${options.map((option) => renderOption(option, blocked)).join("")}</div>
      ${blocked ? renderBlockedControls(slice) : ""}
    </div>
  `;
}

function renderStaleBanner(latestVersion: number): string {
  return `
      <div class="stale-banner" data-role="stale-banner">
        Basis advanced to #${latestVersion} since this slice was compiled.
        <button data-act="refresh">Refresh slice</button>
      </div>`;
}

function renderPremiseCard(premise: SlicePremise): string {
  const actionable = premise.status === "draft" || premise.status === "contested";
  return `
      <div class="premise-card ${STATUS_CLASS[premise.status]}" data-premise-id="${esc(premise.premise_id)}">
        <span class="status-pill ${STATUS_CLASS[premise.status]}">${esc(premise.status)}</span>
        ${premise.sensitive ? '<span class="sensitive-flag">decision-sensitive</span>' : ""}
        ${premise.context ? '<span class="context-flag">context</span>' : ""}
        <div class="premise-statement">${esc(premise.statement)} <small>(${esc(premise.premise_id)})</small></div>
        <input class="reason-input" data-role="contest-reason" placeholder="reason for contest" />
        <button data-act="contest" data-premise-id="${esc(premise.premise_id)}">Contest</button>
        <button data-act="commit-premise" data-premise-id="${esc(premise.premise_id)}" ${actionable ? "" : "disabled"}>Commit premise</button>
        <button data-act="why" data-object-id="${esc(premise.premise_id)}">Why?</button>
      </div>`;
}

function renderEvidenceRow(entry: SliceEvidence, resolutionEvidenceId: string | null): string {
  return `
      <div class="evidence-row" data-evidence-id="${esc(entry.evidence_id)}">
        <span>${esc(entry.evidence_id)} (${esc(entry.direction)}, ${esc(entry.source)}) opened ${esc(entry.discrepancy_id)} against ${esc(entry.premise_id)}</span>
        <button data-act="why" data-object-id="${esc(entry.discrepancy_id)}">Why?</button>
        <button data-act="resolve" data-discrepancy-id="${esc(entry.discrepancy_id)}" ${resolutionEvidenceId ? "" : "disabled"}
          title="${resolutionEvidenceId ? `resolve with ${esc(resolutionEvidenceId)}` : "record a passing probe result first"}">Resolve</button>
      </div>`;
}

function renderConsequenceDelta(slice: SliceData): string {
  const c = slice.consequence;
  if (c.dominant_premise === null) {
    return "";
  }
  return `
        <div class="consequence-delta">
          <span>committed → ${esc(c.if_committed ?? "no action")}</span> ·
          <span>rejected → ${esc(c.if_rejected ?? "no action")}</span>
        </div>`;
}

function renderOption(option: RepairOptionData, blocked: boolean): string {
  switch (option.kind) {
    case "investigate": {
      const probe = option.probe;
      if (!probe) {
        return optionButton("investigate", option.target, "Investigate", { probe: true });
      }
      const label = `${probe.probe_id ? "Run probe" : "Approve probe"}: ${probe.description} (d=${fmt(probe.discrimination)}, c=${fmt(probe.cost)})`;
      return optionButton(probe.probe_id ? "open-probe-result" : "approve-probe", option.target, label, {
        probe: true,
        extra: {
          "probe-id": probe.probe_id ?? "",
          description: probe.description,
          discrimination: String(probe.discrimination),
          cost: String(probe.cost),
        },
      });
    }
    case "commit-confirmation":
      return `<button data-act="commit-action" data-role="option-button" ${blocked ? "disabled" : ""}>Commit action</button>`;
    case "conservative-alternative":
      return optionButton("conservative", option.target, `Hold the line on ${option.target} (risk note required)`);
    case "reframe":
      return optionButton("why", option.target, `Reframe ${option.target}: inspect its provenance`, {
        objectData: true,
      });
    case "negotiate":
      return optionButton("why", option.target, `Negotiate ${option.target}: inspect its provenance`, {
        objectData: true,
      });
  }
}

function optionButton(
  act: string,
  target: string,
  label: string,
  opts: { probe?: boolean; objectData?: boolean; extra?: Record<string, string> } = {},
): string {
  const attrs = [`data-act="${act}"`, `data-role="option-button"`];
  attrs.push(opts.objectData ? `data-object-id="${esc(target)}"` : `data-target="${esc(target)}"`);
  if (opts.probe) {
    attrs.push('data-probe-button="1"');
  }
  for (const [key, value] of Object.entries(opts.extra ?? {})) {
    attrs.push(`data-${key}="${esc(value)}"`);
  }
  return `<button ${attrs.join(" ")}>${esc(label)}</button>`;
}

function renderBlockedControls(slice: SliceData): string {
  const blocking = slice.premises.filter((p) => !p.context).map((p) => p.premise_id);
  return `
      <div class="commit-controls">
        <button data-act="commit-action" disabled title="gate is blocked">Commit action</button>
        <button data-act="open-override" data-blocking="${esc(blocking.join(","))}">Override (logged risk)</button>
      </div>`;
}
