import { readFileSync } from "node:fs";
import { join } from "node:path";

import type { DescriptionDocument, Vocabularies } from "../src/api.js";

/** The payload GET /registry/vocabularies actually serves, captured verbatim. */
export function loadVocabularies(): Vocabularies {
  // vitest rewrites import.meta.url, so resolve from the project root
  const path = join(process.cwd(), "tests", "fixtures", "vocabularies.json");
  return JSON.parse(readFileSync(path, "utf-8")) as Vocabularies;
}

/** The bundled ParkingSpot description, the same one the CLI demo registers. */
export function parkingDocument(): DescriptionDocument {
  return {
    entityType: "https://smartdatamodels.org/dataModel.Parking/ParkingSpot",
    description: "On-street parking spot occupancy captured by the municipal sensor network of Santander.",
    creators: ["Santander City Council"],
    providers: ["Urban Mobility Department"],
    themes: ["TRAN"],
    accessRights: "Public",
    language: "English",
    locations: ["ES"],
    keywords: ["parking", "santander", "real-time"],
  };
}

/** Deterministic PRNG so the random-token tests are reproducible. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_-";

export function randomToken(rand: () => number, avoid: Set<string>): string {
  for (;;) {
    const length = 1 + Math.floor(rand() * 8);
    let token = "";
    for (let i = 0; i < length; i++) {
      token += ALPHABET[Math.floor(rand() * ALPHABET.length)];
    }
    if (!avoid.has(token)) {
      return token;
    }
  }
}
