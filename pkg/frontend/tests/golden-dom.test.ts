// Golden DOM test over the tutoring fixture slice: the frozen render is
// compared byte-for-byte, and the view invariants (item budget, probe button,
// commit control gating, no invented content) are asserted on the live DOM.
// Regenerate the golden file after an intentional layout change with:
//
//   UPDATE_GOLDEN=1 npx vitest run tests/golden-dom.test.ts
//
// The fixture itself comes from the gateway (see fixtures/capture.py).

import { readFileSync, writeFileSync, existsSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import { describe, expect, it } from "vitest";

import { renderSlice, gateBlocked } from "../src/slice-view.js";
import type { ActionData, SliceData } from "../src/types.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const FIXTURE_PATH = join(HERE, "fixtures", "tutoring-slice.json");
const GOLDEN_PATH = join(HERE, "golden", "tutoring-slice.html");

interface Fixture {
  slice: SliceData;
  action: ActionData;
}

function loadFixture(): Fixture {
  return JSON.parse(readFileSync(FIXTURE_PATH, "utf-8"));
}

function mount(html: string): HTMLElement {
  document.body.innerHTML = `<div id="root"></div>`;
  const root = document.getElementById("root") as HTMLElement;
  root.innerHTML = html;
  return root;
}

function renderedItemCount(root: HTMLElement): number {
  const premises = root.querySelectorAll(".premise-card").length;
  const evidence = root.querySelectorAll(".evidence-row").length;
  const options = root.querySelectorAll('[data-role="option-button"]').length;
  const consequence = root.querySelectorAll('[data-role="consequence"]').length;
  return premises + evidence + options + consequence;
}

describe("tutoring fixture slice", () => {
  const { slice, action } = loadFixture();
  const html = renderSlice(slice, {
    action,
    latestVersion: slice.compiled_at,
    resolutionEvidenceId: null,
  });

  it("matches the frozen golden DOM", () => {
    if (process.env.UPDATE_GOLDEN) {
      writeFileSync(GOLDEN_PATH, html, "utf-8");
    }
    if (!existsSync(GOLDEN_PATH)) {
      throw new Error(`golden file missing; regenerate with UPDATE_GOLDEN=1 (${GOLDEN_PATH})`);
    }
    expect(html).toBe(readFileSync(GOLDEN_PATH, "utf-8"));
    console.log("[PASS] golden DOM matches the frozen render byte-for-byte");
  });

  it("renders at most budget.max_items items", () => {
    const root = mount(html);
    const count = renderedItemCount(root);
    expect(count).toBeLessThanOrEqual(slice.budget.max_items);
    expect(count).toBe(
      slice.premises.length + slice.discrepant_evidence.length + slice.repair_options.length + 1,
    );
    console.log(`[PASS] ${count} rendered items within budget ${slice.budget.max_items}`);
  });

  it("shows the probe button for the teach-back repair option", () => {
    const root = mount(html);
    const probeButton = root.querySelector<HTMLElement>("[data-probe-button]");
    expect(probeButton).not.toBeNull();
    expect(probeButton!.textContent).toContain("teach-back check");
    expect(probeButton!.dataset.probeId).toBe(slice.repair_options[0].probe!.probe_id);
    console.log("[PASS] probe button present and bound to the proposed probe");
  });

  it("shows the contested premise card with the status color class", () => {
    const root = mount(html);
    const card = root.querySelector(".premise-card.premise-contested") as HTMLElement;
    expect(card).not.toBeNull();
    expect(card.dataset.premiseId).toBe("P0002");
    expect(card.querySelector(".sensitive-flag")).not.toBeNull();
  });

  it("shows the flip consequence with both recommendations", () => {
    const root = mount(html);
    const consequence = root.querySelector('[data-role="consequence"]') as HTMLElement;
    expect(consequence.textContent).toContain(slice.consequence.text);
    expect(consequence.textContent).toContain("committed → A0001");
    expect(consequence.textContent).toContain("rejected → A0002");
  });

  it("never enables a commit control while the gate is blocked", () => {
    expect(gateBlocked(slice)).toBe(true);
    const root = mount(html);
    const commits = root.querySelectorAll<HTMLButtonElement>('[data-act="commit-action"]');
    expect(commits.length).toBeGreaterThan(0);
    for (const button of commits) {
      expect(button.disabled).toBe(true);
    }
    expect(root.querySelector('[data-act="open-override"]')).not.toBeNull();
    console.log("[PASS] commit control disabled and override entry present while blocked");
  });

  it("invents no premises or options beyond the slice payload", () => {
    const root = mount(html);
    const shownPremises = [...root.querySelectorAll<HTMLElement>(".premise-card")].map(
      (card) => card.dataset.premiseId,
    );
    expect(shownPremises).toEqual(slice.premises.map((p) => p.premise_id));
    const optionButtons = root.querySelectorAll('[data-role="option-button"]');
    expect(optionButtons.length).toBe(slice.repair_options.length);
  });
});

describe("slice view variants", () => {
  const { slice, action } = loadFixture();

  it("renders the gate-passes state with an enabled commit confirmation", () => {
    const passing: SliceData = {
      action_id: "A0001",
      premises: [],
      discrepant_evidence: [],
      consequence: {
        text: "gate passes; no uncommitted load-bearing premises",
        dominant_premise: null,
        if_committed: "A0001",
        if_rejected: "A0001",
      },
      repair_options: [
        { kind: "commit-confirmation", target: "", probe: null, risk_note_required: false },
      ],
      budget: { max_items: 7 },
      compiled_at: 30,
    };
    const root = mount(
      renderSlice(passing, { action, latestVersion: 30, resolutionEvidenceId: null }),
    );
    expect(root.textContent).toContain("Gate passes");
    const commit = root.querySelector<HTMLButtonElement>('[data-act="commit-action"]');
    expect(commit).not.toBeNull();
    expect(commit!.disabled).toBe(false);
    expect(root.querySelector('[data-act="open-override"]')).toBeNull();
    console.log("[PASS] empty-premise slice shows commit confirmation");
  });

  it("renders exactly two buttons for a two-option slice", () => {
    const twoOptions: SliceData = {
      ...slice,
      repair_options: [
        slice.repair_options[0],
        { kind: "conservative-alternative", target: "P0002", probe: null, risk_note_required: true },
      ],
    };
    const root = mount(
      renderSlice(twoOptions, { action, latestVersion: slice.compiled_at, resolutionEvidenceId: null }),
    );
    expect(root.querySelectorAll('[data-role="option-button"]').length).toBe(2);
  });

  it("prompts for a refresh when the basis advanced past compiled_at", () => {
    const fresh = renderSlice(slice, {
      action,
      latestVersion: slice.compiled_at,
      resolutionEvidenceId: null,
    });
    expect(mount(fresh).querySelector('[data-role="stale-banner"]')).toBeNull();

    const stale = renderSlice(slice, {
      action,
      latestVersion: slice.compiled_at + 3,
      resolutionEvidenceId: null,
    });
    const banner = mount(stale).querySelector('[data-role="stale-banner"]') as HTMLElement;
    expect(banner).not.toBeNull();
    expect(banner.querySelector('[data-act="refresh"]')).not.toBeNull();
    console.log("[PASS] stale slice prompts for refresh");
  });

  it("truncates defensively if a slice ever exceeds its own budget", () => {
    const oversized: SliceData = {
      ...slice,
      premises: Array.from({ length: 10 }, (_, i) => ({
        premise_id: `P90${i}`,
        statement: `filler premise ${i}`,
        status: "draft" as const,
        sensitive: false,
        context: false,
      })),
    };
    const root = mount(
      renderSlice(oversized, { action, latestVersion: null, resolutionEvidenceId: null }),
    );
    expect(renderedItemCount(root)).toBeLessThanOrEqual(oversized.budget.max_items);
  });
});
