// Literal construction/display helpers and badge mapping. Pure.

import type { EvidencePredicate } from "./api.js";

export function buildLiteral(predicate: string, args: string[], negated = false): string {
  const core = args.length ? `${predicate}(${args.join(", ")})` : predicate;
  return negated ? `neg ${core}` : core;
}

export type Badge = "accepted" | "credulous" | "rejected" | "none";

export function badgeFor(status: string): Badge {
  switch (status) {
    case "accepted-sceptically":
      return "accepted";
    case "accepted-credulously":
      return "credulous";
    case "rejected":
      return "rejected";
    default:
      return "none";
  }
}

export function badgeLabel(status: string): string {
  switch (status) {
    case "accepted-sceptically":
      return "accepted";
    case "accepted-credulously":
      return "credulous";
    case "no-argument":
      return "no argument";
    default:
      return status;
  }
}

const LAYER_ORDER = ["tactical", "operational", "strategic", "unlayered"];

export function groupByLayer(
  predicates: EvidencePredicate[],
): { layer: string; predicates: EvidencePredicate[] }[] {
  const groups = new Map<string, EvidencePredicate[]>();
  for (const p of predicates) {
    const layer = p.layer ?? "unlayered";
    const row = groups.get(layer) ?? [];
    row.push(p);
    groups.set(layer, row);
  }
  const known = LAYER_ORDER.filter((l) => groups.has(l));
  const rest = [...groups.keys()].filter((l) => !LAYER_ORDER.includes(l)).sort();
  return [...known, ...rest].map((layer) => ({
    layer,
    predicates: [...groups.get(layer)!].sort((a, b) => a.name.localeCompare(b.name)),
  }));
}

// Find the statement defining a rule or priority label inside the
// canonical theory text (used to reveal rule text behind chips).
export function findStatement(theoryText: string, label: string): string | null {
  for (const line of theoryText.split("\n")) {
    const t = line.trim();
    if (t.startsWith(`rule ${label}:`) || t.startsWith(`prefer ${label}:`)) {
      return t;
    }
  }
  return null;
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
