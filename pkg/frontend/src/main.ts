/** Browser bootstrap: wires fetch, pushState history, and DOM rendering. */

import { App, renderApp } from "./app.js";
import { replaceChildren } from "./vdom.js";

async function fetchJson(path: string): Promise<unknown> {
  const response = await fetch(path, { headers: { Accept: "application/json" } });
  if (!response.ok) {
    let reason = `${response.status}`;
    try {
      const body = (await response.json()) as { error?: string; message?: string };
      reason = body.message ?? body.error ?? reason;
    } catch {
      // non-JSON error body; keep the status code
    }
    throw new Error(reason);
  }
  return response.json();
}

const history = {
  push(path: string): void {
    window.history.pushState(null, "", path);
  },
  onPop(handler: (path: string) => void): void {
    window.addEventListener("popstate", () => handler(window.location.pathname));
  },
};

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const app = new App(fetchJson, history, () => replaceChildren(root, renderApp(app)));
void app.start(window.location.pathname);
