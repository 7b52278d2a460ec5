// Outcome form for a probe that has already run out of band: the expert
// reports pass or fail and an evidence weight. One submit is one gateway
// call recording the result.

import { ApiError } from "./api.js";
import { esc } from "./html.js";

export interface ProbeResultSubmission {
  probeId: string;
  passed: boolean;
  weight: number;
}

export type ProbeResultHandler = (submission: ProbeResultSubmission) => Promise<void>;

export class ProbeResultDialog {
  private probeId: string | null = null;
  private onSubmit: ProbeResultHandler | null = null;

  constructor(private readonly host: HTMLElement) {
    this.host.classList.add("probe-dialog");
    this.host.hidden = true;
    this.host.addEventListener("click", (event) => {
      const button = (event.target as HTMLElement).closest("button");
      if (!button) return;
      if (button.dataset.role === "dialog-cancel") this.close();
      if (button.dataset.role === "dialog-submit") void this.submit();
    });
  }

  open(probeId: string, description: string, onSubmit: ProbeResultHandler): void {
    this.probeId = probeId;
    this.onSubmit = onSubmit;
    this.host.innerHTML = `
      <h3>Record result: ${esc(description)}</h3>
      <label><input type="radio" name="probe-outcome" data-role="outcome-pass" checked /> passed</label>
      <label><input type="radio" name="probe-outcome" data-role="outcome-fail" /> failed</label>
      <label>Evidence weight <input type="number" data-role="probe-weight" min="0" max="1" step="0.1" value="1" /></label>
      <div class="dialog-error" data-role="dialog-error"></div>
      <button data-role="dialog-submit">Record</button>
      <button data-role="dialog-cancel">Cancel</button>
    `;
    this.host.hidden = false;
  }

  close(): void {
    this.probeId = null;
    this.onSubmit = null;
    this.host.innerHTML = "";
    this.host.hidden = true;
  }

  get isOpen(): boolean {
    return !this.host.hidden;
  }

  private async submit(): Promise<void> {
    if (!this.probeId || !this.onSubmit) return;
    const pass = this.host.querySelector<HTMLInputElement>('[data-role="outcome-pass"]');
    const weight = this.host.querySelector<HTMLInputElement>('[data-role="probe-weight"]');
    try {
      await this.onSubmit({
        probeId: this.probeId,
        passed: pass ? pass.checked : false,
        weight: weight ? Number(weight.value) : 1.0,
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
