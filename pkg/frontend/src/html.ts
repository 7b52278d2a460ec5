// Tiny escaping helpers for template-literal rendering.

const REPLACEMENTS: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
  "'": "&#39;",
};

export function esc(value: unknown): string {
  return String(value).replace(/[&<>"']/g, (ch) => REPLACEMENTS[ch]);
}

export function fmt(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(2);
}
