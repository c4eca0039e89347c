/**
 * Client-side validation.
 *
 * Mirrors the registry's rules exactly, against the same vocabulary
 * lists the registry serves, so a submission that passes here is never
 * rejected by the server for vocabulary-membership reasons.
 */

import type { DescriptionDocument, Violation, Vocabularies } from "./api.js";
import { ACCESS_RIGHTS_OPTIONS } from "./state.js";

export const ENTITY_TYPE_PATTERN =
  /^https:\/\/smartdatamodels\.org\/dataModel\.[^/]+\/[^/]+$/;

export function validateDocument(
  doc: DescriptionDocument,
  vocab: Vocabularies,
): Violation[] {
  const violations: Violation[] = [];
  if (!ENTITY_TYPE_PATTERN.test(doc.entityType)) {
    violations.push({
      field: "entityType",
      rule: "pattern",
      message: "entityType must match https://smartdatamodels.org/dataModel.<subject>/<type>",
    });
  }
  if (doc.description.trim() === "") {
    violations.push({
      field: "description",
      rule: "non-empty",
      message: "description is required",
    });
  }
  const themeTokens = new Set(vocab.themes.map((entry) => entry.token));
  for (const token of doc.themes) {
    if (!themeTokens.has(token)) {
      violations.push({
        field: "themes",
        rule: "vocabulary",
        message: `unknown theme token '${token}'`,
      });
    }
  }
  const countryTokens = new Set(vocab.countries.map((entry) => entry.token));
  for (const token of doc.locations) {
    if (!countryTokens.has(token)) {
      violations.push({
        field: "locations",
        rule: "vocabulary",
        message: `unknown location token '${token}'`,
      });
    }
  }
  for (const keyword of doc.keywords) {
    if (keyword.trim() === "") {
      violations.push({
        field: "keywords",
        rule: "non-empty",
        message: "keywords must not contain empty entries",
      });
    }
  }
  if (!(ACCESS_RIGHTS_OPTIONS as readonly string[]).includes(doc.accessRights)) {
    violations.push({
      field: "accessRights",
      rule: "vocabulary",
      message: `unknown access rights label '${doc.accessRights}'`,
    });
  }
  const languageLabels = new Set(vocab.languages.map((entry) => entry.label));
  if (!languageLabels.has(doc.language)) {
    violations.push({
      field: "language",
      rule: "vocabulary",
      message: `unknown language label '${doc.language}'`,
    });
  }
  return violations;
}
