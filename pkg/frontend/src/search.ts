/**
 * Term search over the export's search index: prefix matches rank above
 * substring matches, then shorter terms, then lexicographic order.
 */

import { PhyloExport } from "./schema.js";

export interface SearchResult {
  term: string;
  groupIds: string[];
}

export function searchTerms(exp: PhyloExport, query: string, limit = 20): SearchResult[] {
  const q = query.trim().toLowerCase();
  if (!q) return [];
  const matches = Object.keys(exp.search_index)
    .filter((t) => t.toLowerCase().includes(q))
    .sort((a, b) => {
      const ap = a.toLowerCase().startsWith(q) ? 0 : 1;
      const bp = b.toLowerCase().startsWith(q) ? 0 : 1;
      if (ap !== bp) return ap - bp;
      if (a.length !== b.length) return a.length - b.length;
      return a < b ? -1 : 1;
    });
  return matches.slice(0, limit).map((term) => ({ term, groupIds: exp.search_index[term] }));
}

/** Terms sharing a group with the selection, sorted by frequency of use. */
export function coGroupTerms(exp: PhyloExport, term: string): string[] {
  const groupIds = new Set(exp.search_index[term] ?? []);
  const counts = new Map<string, number>();
  for (const g of exp.groups) {
    if (!groupIds.has(g.id)) continue;
    for (const t of g.terms) {
      if (t.id === term) continue;
      counts.set(t.id, (counts.get(t.id) ?? 0) + 1);
    }
  }
  const freqLast = new Map(exp.terms.map((t) => [t.id, t.freq_last]));
  return [...counts.keys()].sort((a, b) => {
    const byUse = (counts.get(b) ?? 0) - (counts.get(a) ?? 0);
    if (byUse !== 0) return byUse;
    const byFreq = (freqLast.get(b) ?? 0) - (freqLast.get(a) ?? 0);
    if (byFreq !== 0) return byFreq;
    return a < b ? -1 : 1;
  });
}
