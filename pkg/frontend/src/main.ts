// Application wiring: one form, one in-flight request, shareable ?id=
// deep links. The whole view is built here so tests and the served page
// run the same code path.

import { ApiError, resolveId } from "./api.js";
import { renderResult } from "./render.js";

export interface AppOptions {
  base?: string; // service origin; empty for same-origin deployment
}

export function mountApp(root: HTMLElement, options: AppOptions = {}): void {
  const base = options.base ?? "";
  root.replaceChildren();

  const header = document.createElement("header");
  const title = document.createElement("h1");
  title.textContent = "arxpub";
  const tagline = document.createElement("p");
  tagline.className = "tagline";
  tagline.textContent = "Find the peer-reviewed published version of an arXiv preprint.";

  const form = document.createElement("form");
  form.id = "resolve-form";
  const input = document.createElement("input");
  input.id = "id-input";
  input.name = "id";
  input.autocomplete = "off";
  input.placeholder = "arXiv id or URL, e.g. 2101.00001";
  const submit = document.createElement("button");
  submit.id = "submit-btn";
  submit.type = "submit";
  submit.textContent = "Resolve";
  submit.disabled = true;
  form.append(input, submit);

  const status = document.createElement("p");
  status.id = "status";
  status.setAttribute("role", "status");

  header.append(title, tagline, form, status);

  const results = document.createElement("main");
  results.id = "results";

  root.append(header, results);

  let inflight: AbortController | null = null;

  input.addEventListener("input", () => {
    submit.disabled = input.value.trim() === "";
  });

  async function run(rawId: string): Promise<void> {
    inflight?.abort();
    const controller = new AbortController();
    inflight = controller;
    status.textContent = `Resolving ${rawId} ...`;
    status.classList.remove("error");
    results.replaceChildren();
    try {
      const response = await resolveId(rawId, base, controller.signal);
      if (controller.signal.aborted) return;
      status.textContent = response.resolved
        ? "Published version(s) found. Pick the relevant one and copy its citation."
        : "";
      renderResult(results, response);
      const url = new URL(window.location.href);
      url.searchParams.set("id", rawId);
      window.history.replaceState(null, "", url.toString());
    } catch (error) {
      if (controller.signal.aborted) return;
      status.classList.add("error");
      if (error instanceof ApiError) {
        status.textContent = error.detail;
      } else {
        status.textContent = `Request failed: ${String(error)}`;
      }
    } finally {
      if (inflight === controller) inflight = null;
    }
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const value = input.value.trim();
    if (value) void run(value);
  });

  const deepLink = new URL(window.location.href).searchParams.get("id");
  if (deepLink) {
    input.value = deepLink;
    submit.disabled = false;
    void run(deepLink);
  }
}

const appRoot = typeof document !== "undefined" ? document.getElementById("app") : null;
if (appRoot) {
  mountApp(appRoot);
}
