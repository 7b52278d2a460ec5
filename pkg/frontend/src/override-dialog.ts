// Risk-note dialog. Used when overriding a blocked gate and when taking the
// conservative alternative; both submit paths require a non-empty note and
// carry the full blocking set that was shown to the user. Gateway errors are
// surfaced verbatim (code and message), never rewritten.

import { ApiError } from "./api.js";
import { esc } from "./html.js";

export interface OverrideRequest {
  title: string;
  targetId: string;
  blocking: string[];
  submitLabel: string;
}

export interface OverrideSubmission {
  targetId: string;
  riskNote: string;
  blocking: string[];
}

export type OverrideHandler = (submission: OverrideSubmission) => Promise<void>;

export class OverrideDialog {
  private request: OverrideRequest | null = null;
  private onSubmit: OverrideHandler | null = null;

  constructor(private readonly host: HTMLElement) {
    this.host.classList.add("override-dialog");
    this.host.hidden = true;
    this.host.addEventListener("input", () => this.syncSubmitState());
    this.host.addEventListener("click", (event) => {
      const button = (event.target as HTMLElement).closest("button");
      if (!button) return;
      if (button.dataset.role === "dialog-cancel") this.close();
      if (button.dataset.role === "dialog-submit") void this.submit();
    });
  }

  open(request: OverrideRequest, onSubmit: OverrideHandler): void {
    this.request = request;
    this.onSubmit = onSubmit;
    this.host.innerHTML = this.render(request);
    this.host.hidden = false;
    this.syncSubmitState();
  }

  close(): void {
    this.request = null;
    this.onSubmit = null;
    this.host.innerHTML = "";
    this.host.hidden = true;
  }

  get isOpen(): boolean {
    return !this.host.hidden;
  }

  riskNote(): string {
    const area = this.host.querySelector<HTMLTextAreaElement>('[data-role="risk-note"]');
    return area ? area.value : "";
  }

  private render(request: OverrideRequest): string {
    const blockingList = request.blocking.length
      ? request.blocking.map((id) => `<li>${esc(id)}</li>`).join("")
      : "<li>(none listed)</li>";
    return `
      <h3>${esc(request.title)}</h3>
      <p>Blocking objects shown to you:</p>
      <ul data-role="blocking-list">${blockingList}</ul>
      <label>Risk note (required)
        <textarea data-role="risk-note" placeholder="why proceeding is acceptable"></textarea>
      </label>
      <div class="dialog-error" data-role="dialog-error"></div>
      <button data-role="dialog-submit" disabled>${esc(request.submitLabel)}</button>
      <button data-role="dialog-cancel">Cancel</button>
    `;
  }

  private syncSubmitState(): void {
    const submit = this.host.querySelector<HTMLButtonElement>('[data-role="dialog-submit"]');
    if (submit) {
      submit.disabled = this.riskNote().trim() === "";
    }
  }

  private async submit(): Promise<void> {
    const note = this.riskNote();
    if (!this.request || !this.onSubmit || note.trim() === "") {
      return; // empty notes never leave the dialog
    }
    try {
      await this.onSubmit({
        targetId: this.request.targetId,
        riskNote: note,
        blocking: [...this.request.blocking],
      });
      this.close();
    } catch (error) {
      const box = this.host.querySelector<HTMLElement>('[data-role="dialog-error"]');
      if (box) {
        box.textContent =
          error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
      }
    }
  }
}
