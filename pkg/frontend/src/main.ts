// Browser entry point. Connection settings come from the query string:
//   index.html?gateway=http://127.0.0.1:8733&action=A0001&actor=rosa&token=tok-123

import { GatewayClient } from "./api.js";
import { NegotiationConsole } from "./console.js";
import { BASE_CSS } from "./styles.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

export function mount(root: HTMLElement): NegotiationConsole {
  const style = document.createElement("style");
  style.textContent = BASE_CSS;
  document.head.appendChild(style);

  const client = new GatewayClient(param("gateway", "http://127.0.0.1:8733"), {
    actor: param("actor", "expert"),
    expertToken: param("token", "") || undefined,
  });
  const app = new NegotiationConsole(client, root, param("action", "A0001"));
  void app.start().then(() => app.startPolling(Number(param("poll", "2000"))));
  return app;
}

if (typeof document !== "undefined" && document.getElementById("console-root")) {
  mount(document.getElementById("console-root") as HTMLElement);
}
