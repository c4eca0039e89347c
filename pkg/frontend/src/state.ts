/** Form state and its mapping onto the registry's request document. */

import type { DescriptionDocument } from "./api.js";

// accessRights is part of the POST contract, not of the EU vocabulary
// list the registry serves (that one also carries Non-public/Sensitive,
// which the request schema does not accept)
export const ACCESS_RIGHTS_OPTIONS = ["Public", "Restricted", "Private"] as const;

export type SubmissionStatus = "idle" | "submitting" | "done" | "failed";

export interface FormState {
  entityType: string;
  description: string;
  creators: string; // raw comma-separated input
  providers: string;
  themes: string[]; // selected vocabulary tokens
  accessRights: string;
  language: string;
  locations: string[];
  keywords: string; // raw comma-separated input
  status: SubmissionStatus;
}

export function emptyState(): FormState {
  return {
    entityType: "",
    description: "",
    creators: "",
    providers: "",
    themes: [],
    accessRights: ACCESS_RIGHTS_OPTIONS[0],
    language: "English",
    locations: [],
    keywords: "",
    status: "idle",
  };
}

/** Split a comma-separated input, trimming and dropping empty entries. */
export function splitList(raw: string): string[] {
  return raw
    .split(",")
    .map((entry) => entry.trim())
    .filter((entry) => entry.length > 0);
}

export function toDocument(state: FormState): DescriptionDocument {
  return {
    entityType: state.entityType.trim(),
    description: state.description.trim(),
    creators: splitList(state.creators),
    providers: splitList(state.providers),
    themes: [...state.themes],
    accessRights: state.accessRights,
    language: state.language,
    locations: [...state.locations],
    keywords: splitList(state.keywords),
  };
}

/**
 * Populate the form from an existing description document, e.g. to
 * re-publish a dataset with small edits. Unknown keys are ignored;
 * missing keys fall back to the empty state.
 */
export function fromDocument(doc: Partial<DescriptionDocument>): FormState {
  const base = emptyState();
  const list = (value: unknown): string[] =>
    Array.isArray(value) ? value.map(String) : [];
  return {
    ...base,
    entityType: typeof doc.entityType === "string" ? doc.entityType : "",
    description: typeof doc.description === "string" ? doc.description : "",
    creators: list(doc.creators).join(", "),
    providers: list(doc.providers).join(", "),
    themes: list(doc.themes),
    accessRights: typeof doc.accessRights === "string" ? doc.accessRights : base.accessRights,
    language: typeof doc.language === "string" ? doc.language : base.language,
    locations: list(doc.locations),
    keywords: list(doc.keywords).join(", "),
  };
}

/** urn:ngsi-ld:Dataset:<slug> -> <slug>, for building catalog links. */
export function slugOf(datasetId: string): string {
  const parts = datasetId.split(":");
  return parts[parts.length - 1] ?? datasetId;
}
