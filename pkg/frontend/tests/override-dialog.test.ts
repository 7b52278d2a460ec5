// The override dialog must never let an empty risk note reach the gateway,
// must carry the same blocking set it showed, and must surface gateway
// error codes verbatim.

import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiError } from "../src/api.js";
import { OverrideDialog, type OverrideSubmission } from "../src/override-dialog.js";

function openDialog(onSubmit: (s: OverrideSubmission) => Promise<void>) {
  document.body.innerHTML = `<div id="host"></div>`;
  const host = document.getElementById("host") as HTMLElement;
  const dialog = new OverrideDialog(host);
  dialog.open(
    {
      title: "Override gate for A0001",
      targetId: "A0001",
      blocking: ["P0002", "P0005"],
      submitLabel: "Override and commit",
    },
    onSubmit,
  );
  return { host, dialog };
}

function noteArea(host: HTMLElement): HTMLTextAreaElement {
  return host.querySelector('[data-role="risk-note"]') as HTMLTextAreaElement;
}

function submitButton(host: HTMLElement): HTMLButtonElement {
  return host.querySelector('[data-role="dialog-submit"]') as HTMLButtonElement;
}

function typeNote(host: HTMLElement, text: string): void {
  const area = noteArea(host);
  area.value = text;
  area.dispatchEvent(new Event("input", { bubbles: true }));
}

function forceSubmit(host: HTMLElement): void {
  // Bypasses the disabled attribute to prove the second defensive layer.
  submitButton(host).dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

async function settle(): Promise<void> {
  await Promise.resolve();
  await Promise.resolve();
}

describe("override dialog", () => {
  let submissions: OverrideSubmission[];
  let handler: ReturnType<typeof vi.fn>;

  beforeEach(() => {
    submissions = [];
    handler = vi.fn(async (s: OverrideSubmission) => {
      submissions.push(s);
    });
  });

  it("refuses an empty risk note", async () => {
    const { host, dialog } = openDialog(handler);
    expect(submitButton(host).disabled).toBe(true);

    forceSubmit(host);
    await settle();
    expect(handler).not.toHaveBeenCalled();
    expect(dialog.isOpen).toBe(true);
    console.log("[PASS] empty risk note never leaves the dialog");
  });

  it("treats whitespace-only notes as empty", async () => {
    const { host } = openDialog(handler);
    typeNote(host, "   \n\t ");
    expect(submitButton(host).disabled).toBe(true);

    forceSubmit(host);
    await settle();
    expect(handler).not.toHaveBeenCalled();
  });

  it("submits a real note together with the blocking set it displayed", async () => {
    const { host, dialog } = openDialog(handler);
    const shown = [...host.querySelectorAll('[data-role="blocking-list"] li')].map(
      (li) => li.textContent,
    );
    expect(shown).toEqual(["P0002", "P0005"]);

    typeNote(host, "exam-triage mode");
    expect(submitButton(host).disabled).toBe(false);
    submitButton(host).dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await settle();

    expect(handler).toHaveBeenCalledTimes(1);
    expect(submissions[0]).toEqual({
      targetId: "A0001",
      riskNote: "exam-triage mode",
      blocking: ["P0002", "P0005"],
    });
    expect(dialog.isOpen).toBe(false);
    console.log("[PASS] submission carries the displayed blocking set");
  });

  it("surfaces gateway error codes verbatim and stays open", async () => {
    const failing = vi.fn(async () => {
      throw new ApiError(403, { code: "non-expert-actor", message: "actor desk lacks expert role" });
    });
    const { host, dialog } = openDialog(failing);
    typeNote(host, "we accept the risk");
    submitButton(host).dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await settle();

    expect(dialog.isOpen).toBe(true);
    const error = host.querySelector('[data-role="dialog-error"]') as HTMLElement;
    expect(error.textContent).toBe("non-expert-actor: actor desk lacks expert role");
    console.log("[PASS] ApiError code and message shown verbatim");
  });

  it("cancel closes without calling the gateway", async () => {
    const { host, dialog } = openDialog(handler);
    typeNote(host, "about to cancel");
    (host.querySelector('[data-role="dialog-cancel"]') as HTMLButtonElement).dispatchEvent(
      new MouseEvent("click", { bubbles: true }),
    );
    await settle();
    expect(handler).not.toHaveBeenCalled();
    expect(dialog.isOpen).toBe(false);
  });
});
