// Fixed style constants. Golden DOM tests pin class names and the status
// color map, so changing anything here is a deliberate, visible diff.

import type { PremiseStatus } from "./types.js";

export const STATUS_COLORS: Record<PremiseStatus, string> = {
  draft: "#9aa0a6",
  contested: "#d93025",
  committed: "#188038",
  rejected: "#5f6368",
};

export const STATUS_CLASS: Record<PremiseStatus, string> = {
  draft: "premise-draft",
  contested: "premise-contested",
  committed: "premise-committed",
  rejected: "premise-rejected",
};

export const BASE_CSS = `
  body { font-family: system-ui, sans-serif; margin: 0; background: #f6f7f8; color: #202124; }
  header.console-header { padding: 12px 16px; background: #202a36; color: #fff; display: flex; gap: 12px; align-items: baseline; }
  header.console-header .health { margin-left: auto; font-size: 12px; opacity: .8; }
  main.console-main { display: grid; grid-template-columns: 3fr 2fr; gap: 16px; padding: 16px; }
  section.panel { background: #fff; border: 1px solid #dadce0; border-radius: 8px; padding: 12px; }
  .slice-header { display: flex; gap: 8px; align-items: baseline; }
  .stale-banner { background: #fef7e0; border: 1px solid #f9ab00; padding: 8px; border-radius: 6px; margin: 8px 0; }
  .premise-card { border-left: 6px solid; border-radius: 6px; padding: 8px 10px; margin: 8px 0; background: #fafafa; }
  .premise-draft { border-left-color: ${STATUS_COLORS.draft}; }
  .premise-contested { border-left-color: ${STATUS_COLORS.contested}; }
  .premise-committed { border-left-color: ${STATUS_COLORS.committed}; }
  .premise-rejected { border-left-color: ${STATUS_COLORS.rejected}; }
  .status-pill { font-size: 11px; border-radius: 10px; padding: 1px 8px; color: #fff; }
  .sensitive-flag { font-size: 11px; color: #b3261e; margin-left: 6px; }
  .evidence-row, .event-row, .why-row { font-size: 13px; padding: 4px 0; border-bottom: 1px dotted #e0e0e0; }
  .consequence-panel { background: #e8f0fe; border-radius: 6px; padding: 8px 10px; margin: 8px 0; }
  .repair-options button, .commit-controls button, .premise-card button { margin: 4px 6px 0 0; }
  button[disabled] { opacity: .5; }
  dialog.override-dialog { border: 1px solid #dadce0; border-radius: 8px; max-width: 480px; }
  dialog.override-dialog textarea { width: 100%; min-height: 70px; }
  .dialog-error { color: #b3261e; font-size: 13px; min-height: 1em; }
`;
