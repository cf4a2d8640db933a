// DOM rendering for the result view: the preprint panel on one side,
// candidate cards grouped by database on the other. No framework, no
// innerHTML for data (everything is textContent, so served strings are
// never reinterpreted as markup).

import { Candidate, DATABASES, PreprintInfo, ResolveResponse } from "./api.js";
import { copyText, showFallbackArea } from "./clipboard.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderPreprintPanel(preprint: PreprintInfo): HTMLElement {
  const panel = el("section", "preprint-panel");
  panel.id = "preprint-panel";
  panel.appendChild(el("h2", undefined, "Preprint"));
  panel.appendChild(el("p", "title", preprint.title));
  panel.appendChild(el("p", "authors", preprint.authors.map((a) => a.full).join(", ")));

  const meta = el("dl", "meta");
  const add = (label: string, value: string) => {
    meta.appendChild(el("dt", undefined, label));
    meta.appendChild(el("dd", undefined, value));
  };
  add("First submitted", preprint.published_date);
  add("Last updated", `${preprint.updated_date} (v${preprint.latest_version})`);
  add("Categories", preprint.categories.join(", "));
  if (preprint.comment) add("Comment", preprint.comment);
  if (preprint.doi) add("DOI", preprint.doi);
  panel.appendChild(meta);

  const link = el("a", "arxiv-link", `arxiv.org/abs/${preprint.id.normalized}`);
  link.href = `https://arxiv.org/abs/${preprint.id.normalized}`;
  link.target = "_blank";
  link.rel = "noopener";
  panel.appendChild(link);
  return panel;
}

export interface Selection {
  clear(): void;
}

function renderCard(
  candidate: Candidate,
  index: number,
  onSelect: (card: HTMLElement, bibtex: string) => void,
): HTMLElement {
  const card = el("article", "candidate-card");
  card.dataset.db = candidate.source;
  card.dataset.index = String(index);

  const badgeKind = candidate.discovery.kind === "DIRECT_ARXIV_ID" ? "weak" : "strong";
  const badge = el("span", `badge ${badgeKind}`, badgeKind.toUpperCase());
  badge.title =
    badgeKind === "weak"
      ? "Linked to the arXiv id in the database; identity checks only"
      : "Found by DOI or title search; fuzzy title and author checks applied";

  const head = el("header");
  head.appendChild(el("h4", "title", candidate.title));
  head.appendChild(badge);
  card.appendChild(head);

  const where = candidate.journal ?? candidate.venue ?? "venue unknown";
  const year = candidate.year !== null ? String(candidate.year) : "year unknown";
  card.appendChild(el("p", "where", `${where}, ${year}`));

  const details = el("p", "details");
  if (candidate.doi) {
    const doiLink = el("a", "doi", candidate.doi);
    doiLink.href = `https://doi.org/${candidate.doi}`;
    doiLink.target = "_blank";
    doiLink.rel = "noopener";
    details.appendChild(doiLink);
  }
  if (candidate.citation_count !== null) {
    details.appendChild(el("span", "citations", `${candidate.citation_count} citations`));
  }
  card.appendChild(details);

  const bib = el("pre", "bibtex", candidate.bibtex);
  card.appendChild(bib);

  const copyBtn = el("button", "copy-btn", "Copy BibTeX");
  copyBtn.type = "button";
  copyBtn.addEventListener("click", (event) => {
    event.stopPropagation();
    onSelect(card, candidate.bibtex);
  });
  card.appendChild(copyBtn);

  card.addEventListener("click", () => onSelect(card, candidate.bibtex));
  return card;
}

function renderDatabaseGroup(
  key: string,
  label: string,
  candidates: Candidate[],
  errors: string[],
  onSelect: (card: HTMLElement, bibtex: string) => void,
): HTMLElement {
  const group = el("section", "db-group");
  group.dataset.db = key;
  const head = el("h3", undefined, label);
  group.appendChild(head);
  for (const message of errors) {
    group.appendChild(el("span", "error-chip", message));
  }
  if (!candidates.length) {
    group.appendChild(el("p", "empty", errors.length ? "unavailable" : "no match"));
  }
  candidates.forEach((candidate, index) => {
    group.appendChild(renderCard(candidate, index, onSelect));
  });
  return group;
}

export function renderResult(root: HTMLElement, response: ResolveResponse): void {
  root.replaceChildren();
  root.appendChild(renderPreprintPanel(response.preprint));

  const right = el("section", "candidates-panel");
  right.id = "candidates-panel";

  if (!response.resolved) {
    const banner = el("div", "banner");
    banner.id = "unresolved-banner";
    banner.appendChild(
      el("p", undefined, "No published version found. You can cite the preprint itself:"),
    );
    const bib = el("pre", "bibtex", response.preprint_bibtex);
    banner.appendChild(bib);
    const copyBtn = el("button", "copy-btn", "Copy preprint BibTeX");
    copyBtn.type = "button";
    copyBtn.addEventListener("click", () => {
      void copyAndMark(banner, copyBtn, response.preprint_bibtex);
    });
    banner.appendChild(copyBtn);
    right.appendChild(banner);
  }

  const onSelect = (card: HTMLElement, bibtex: string) => {
    for (const other of right.querySelectorAll(".candidate-card.selected")) {
      other.classList.remove("selected");
    }
    card.classList.add("selected");
    const button = card.querySelector<HTMLButtonElement>(".copy-btn");
    void copyAndMark(card, button, bibtex);
  };

  for (const { key, label } of DATABASES) {
    right.appendChild(
      renderDatabaseGroup(
        key,
        label,
        response.candidates[key] ?? [],
        response.provider_errors[key] ?? [],
        onSelect,
      ),
    );
  }
  root.appendChild(right);
}

async function copyAndMark(
  host: HTMLElement,
  button: HTMLButtonElement | null,
  text: string,
): Promise<void> {
  const result = await copyText(text);
  if (result === "fallback") {
    showFallbackArea(host, text);
    return;
  }
  if (button) {
    const original = button.textContent;
    button.textContent = "Copied!";
    button.classList.add("copied");
    setTimeout(() => {
      button.textContent = original;
      button.classList.remove("copied");
    }, 1200);
  }
}
