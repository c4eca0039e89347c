/** Wire types and the HTTP client for the registry endpoints the form uses. */

export interface VocabEntry {
  token: string;
  iri: string;
  label: string;
}

export interface Vocabularies {
  themes: VocabEntry[];
  languages: VocabEntry[];
  countries: VocabEntry[];
  accessRights: VocabEntry[];
  licences: VocabEntry[];
}

/** The document POSTed to /registry/datasets. */
export interface DescriptionDocument {
  entityType: string;
  description: string;
  creators: string[];
  providers: string[];
  themes: string[];
  accessRights: string;
  language: string;
  locations: string[];
  keywords: string[];
}

export interface Violation {
  field: string;
  rule: string;
  message: string;
}

export interface RegisterResult {
  catalogueId: string;
  datasetId: string;
  distributionIds: string[];
  receipt: { id: string; action: string }[];
}

export interface QualityMetric {
  name: string;
  dimension: string;
  points: number;
  maxPoints: number;
  passed: boolean;
}

export interface QualityReport {
  findability: number;
  accessibility: number;
  interoperability: number;
  reusability: number;
  contextuality: number;
  total: number;
  maxTotal: number;
  rating: string;
  perMetric: QualityMetric[];
}

export type RegisterOutcome =
  | { kind: "registered"; result: RegisterResult }
  | { kind: "rejected"; violations: Violation[] }
  | { kind: "failed"; detail: string };

/** What the form needs from the registry; RegistryClient is the real one. */
export interface RegistryGateway {
  register(doc: DescriptionDocument): Promise<RegisterOutcome>;
  preview(doc: DescriptionDocument): Promise<QualityReport | null>;
}

/**
 * The registry lives on its own port; the form is served from the catalog
 * origin. `?registry=<base>` overrides, otherwise the registry is assumed
 * to share the host with the page on port 8082.
 */
export function resolveRegistryBase(location: { origin: string; search: string }): string {
  const override = new URLSearchParams(location.search).get("registry");
  if (override) {
    return override.replace(/\/+$/, "");
  }
  try {
    const url = new URL(location.origin);
    url.port = "8082";
    return url.origin;
  } catch {
    return "http://127.0.0.1:8082";
  }
}

export class RegistryClient {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  async vocabularies(): Promise<Vocabularies> {
    const response = await this.fetchImpl(`${this.base}/registry/vocabularies`);
    if (!response.ok) {
      throw new Error(`vocabulary fetch failed (${response.status})`);
    }
    return (await response.json()) as Vocabularies;
  }

  async register(doc: DescriptionDocument): Promise<RegisterOutcome> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.base}/registry/datasets`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(doc),
      });
    } catch (error) {
      return { kind: "failed", detail: `registry unreachable: ${String(error)}` };
    }
    if (response.status === 201) {
      return { kind: "registered", result: (await response.json()) as RegisterResult };
    }
    if (response.status === 422) {
      const body = (await response.json()) as { violations?: Violation[] };
      return { kind: "rejected", violations: body.violations ?? [] };
    }
    const text = await response.text();
    return { kind: "failed", detail: `registry answered ${response.status}: ${text}` };
  }

  /** Scores the graph the description would produce; nothing is published. */
  async preview(doc: DescriptionDocument): Promise<QualityReport | null> {
    try {
      const response = await this.fetchImpl(`${this.base}/mqa/preview`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(doc),
      });
      if (!response.ok) {
        return null;
      }
      return (await response.json()) as QualityReport;
    } catch {
      return null;
    }
  }
}
