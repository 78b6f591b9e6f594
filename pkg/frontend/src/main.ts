/**
 * Browser entry point. The service base URL defaults to the page
 * origin; override with ?service=http://host:port when the pages are
 * served separately from the session service.
 */

import { App } from "./app.js";
import { GolapClient } from "./client.js";

function serviceBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("service");
  return fromQuery ?? window.location.origin;
}

window.addEventListener("DOMContentLoaded", () => {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  const app = new App(new GolapClient(serviceBase()));
  app.boot(root).catch((exc) => {
    const p = document.createElement("p");
    p.className = "error";
    p.textContent = `could not reach the service: ${exc instanceof Error ? exc.message : exc}`;
    root.replaceChildren(p);
  });
});
