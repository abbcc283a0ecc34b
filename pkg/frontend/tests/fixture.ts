import { PhyloExport } from "../src/schema.js";

/**
 * Hand-built two-branch export used by the interaction tests.
 *
 * Branch 0 carries "alpha" along its whole chain; branch 1 carries "beta";
 * "shared" sits in the first group of both branches (cross-branch); "duo"
 * emerges simultaneously in g0 (x=0.1) and h0 (x=0.7), barycenter 0.4.
 */
export function makeExport(overrides: Partial<PhyloExport> = {}): PhyloExport {
  const groupTerms = (ids: string[], emerging: boolean, decreasing: boolean) =>
    ids.map((id) => ({ id, emerging, decreasing }));
  const base: PhyloExport = {
    metadata: {
      level: 0.5,
      config: {},
      min_periods: 2,
      period_count: 3,
      group_count: 6,
      branch_count: 2,
      link_count: 4,
      ghost_link_count: 1,
      removed_branches: [],
      committed_levels: [0.5],
      group_warning: false,
      warnings: [],
    },
    periods: [
      { id: "T000", start: "2000-01-01", end: "2001-01-01" },
      { id: "T001", start: "2001-01-01", end: "2002-01-01" },
      { id: "T002", start: "2002-01-01", end: "2003-01-01" },
    ],
    branches: [
      {
        id: "0.0",
        label: ["alpha", "shared"],
        peak: { x: 0.2, y: 0.3 },
        elevation: 0.3,
        span: ["T000", "T002"],
      },
      {
        id: "0.1",
        label: ["beta", "shared"],
        peak: { x: 0.8, y: 0.5 },
        elevation: 0.5,
        span: ["T000", "T002"],
      },
    ],
    groups: [
      { id: "g0", branch: "0.0", period: "T000", x: 0.1, y: 0,
        terms: [...groupTerms(["alpha", "shared", "duo"], true, false)] },
      { id: "g1", branch: "0.0", period: "T001", x: 0.15, y: 1,
        terms: [...groupTerms(["alpha"], false, false)] },
      { id: "g2", branch: "0.0", period: "T002", x: 0.2, y: 2,
        terms: [...groupTerms(["alpha"], false, true)] },
      { id: "h0", branch: "0.1", period: "T000", x: 0.7, y: 0,
        terms: [...groupTerms(["beta", "shared", "duo"], true, false)] },
      { id: "h1", branch: "0.1", period: "T001", x: 0.75, y: 1,
        terms: [...groupTerms(["beta"], false, false)] },
      { id: "h2", branch: "0.1", period: "T002", x: 0.8, y: 2,
        terms: [...groupTerms(["beta"], false, true)] },
    ],
    links: [
      { parent: "g0", child: "g1", weight: 0.9 },
      { parent: "g1", child: "g2", weight: 0.9 },
      { parent: "h0", child: "h1", weight: 0.9 },
      { parent: "h1", child: "h2", weight: 0.9 },
    ],
    ghost_links: [{ parent: "g0", child: "h1", weight: 0.1, cut_level: 0.5 }],
    terms: [
      {
        id: "alpha", first_period: "T000", last_period: "T002",
        emerging_groups: ["g0"], decreasing_groups: ["g2"],
        freq_by_period: { T000: 4, T001: 4, T002: 4 }, freq_last: 4,
        cross_branch: false, group_count: 3,
        emergence: { x: 0.1, period: "T000" },
      },
      {
        id: "beta", first_period: "T000", last_period: "T002",
        emerging_groups: ["h0"], decreasing_groups: ["h2"],
        freq_by_period: { T000: 3, T001: 3, T002: 3 }, freq_last: 3,
        cross_branch: false, group_count: 3,
        emergence: { x: 0.7, period: "T000" },
      },
      {
        id: "shared", first_period: "T000", last_period: "T000",
        emerging_groups: ["g0", "h0"], decreasing_groups: ["g0", "h0"],
        freq_by_period: { T000: 2 }, freq_last: 0,
        cross_branch: true, group_count: 2,
        emergence: { x: 0.4, period: "T000" },
      },
      {
        id: "duo", first_period: "T000", last_period: "T000",
        emerging_groups: ["g0", "h0"], decreasing_groups: ["g0", "h0"],
        freq_by_period: { T000: 2 }, freq_last: 0,
        cross_branch: true, group_count: 2,
        emergence: { x: 0.4, period: "T000" },
      },
    ],
    search_index: {
      alpha: ["g0", "g1", "g2"],
      beta: ["h0", "h1", "h2"],
      shared: ["g0", "h0"],
      duo: ["g0", "h0"],
    },
  };
  return { ...base, ...overrides };
}
