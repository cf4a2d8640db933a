// Typed client for the resolution service. Field names mirror the
// service JSON exactly.

export type DatabaseKey = "dblp" | "crossref_crosscite" | "semantic_scholar" | "openalex";

export const DATABASES: { key: DatabaseKey; label: string }[] = [
  { key: "dblp", label: "DBLP" },
  { key: "crossref_crosscite", label: "CrossRef/CrossCite" },
  { key: "semantic_scholar", label: "SemanticScholar" },
  { key: "openalex", label: "OpenAlex" },
];

export interface PersonName {
  full: string;
  surname: string;
  folded_surname: string;
}

export interface PreprintInfo {
  id: { raw: string; normalized: string; version: number | null };
  latest_version: number;
  title: string;
  authors: PersonName[];
  doi: string | null;
  published_date: string;
  updated_date: string;
  primary_category: string;
  categories: string[];
  comment: string | null;
  journal_ref: string | null;
  abstract: string;
}

export interface Candidate {
  source: DatabaseKey;
  discovery: { kind: "DIRECT_ARXIV_ID" | "DIRECT_DOI" | "TITLE_SEARCH"; cascade_step: number };
  title: string;
  authors: PersonName[];
  doi: string | null;
  venue: string | null;
  journal: string | null;
  year: number | null;
  publication_types: string[];
  external_ids: Record<string, string>;
  is_open_access: boolean | null;
  citation_count: number | null;
  raw_payload: string;
  bibtex: string;
}

export interface TraceEntry {
  candidate_index: number;
  outcome: "ACCEPTED" | "REJECTED";
  rule: string | null;
  detail: string;
}

export interface ResolveResponse {
  preprint: PreprintInfo;
  preprint_bibtex: string;
  candidates: Record<DatabaseKey, Candidate[]>;
  trace: TraceEntry[];
  resolved: boolean;
  timing: Record<DatabaseKey, number>;
  provider_errors: Record<DatabaseKey, string[]>;
}

export interface HealthResponse {
  version: string;
  mode: "replay" | "live";
}

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
  const response = await fetch(url, { signal });
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const detail =
      body && typeof body === "object" && "detail" in body
        ? String((body as { detail: unknown }).detail)
        : `HTTP ${response.status}`;
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

export function resolveId(id: string, base = "", signal?: AbortSignal): Promise<ResolveResponse> {
  return getJson<ResolveResponse>(`${base}/api/resolve?id=${encodeURIComponent(id)}`, signal);
}

export function health(base = ""): Promise<HealthResponse> {
  return getJson<HealthResponse>(`${base}/api/health`);
}
