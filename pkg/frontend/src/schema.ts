/**
 * Export file schema and validation.
 *
 * The viewer consumes pre-spatialized JSON exports; every semantic quantity
 * (coordinates, dynamics, labels) is already computed upstream. Validation
 * failures surface the offending key path so a user can fix or report the
 * broken file.
 */

import { z } from "zod";

const termUse = z.object({
  id: z.string(),
  emerging: z.boolean(),
  decreasing: z.boolean(),
});

const group = z.object({
  id: z.string(),
  branch: z.string(),
  period: z.string(),
  x: z.number(),
  y: z.number(),
  terms: z.array(termUse),
});

const branch = z.object({
  id: z.string(),
  label: z.array(z.string()).min(1).max(2),
  peak: z.object({ x: z.number(), y: z.number() }),
  elevation: z.number(),
  span: z.tuple([z.string(), z.string()]),
});

const link = z.object({
  parent: z.string(),
  child: z.string(),
  weight: z.number(),
});

const ghostLink = link.extend({ cut_level: z.number() });

const termEntry = z.object({
  id: z.string(),
  first_period: z.string(),
  last_period: z.string(),
  emerging_groups: z.array(z.string()),
  decreasing_groups: z.array(z.string()),
  freq_by_period: z.record(z.number()),
  freq_last: z.number(),
  cross_branch: z.boolean(),
  group_count: z.number(),
  emergence: z.object({ x: z.number(), period: z.string() }),
});

const period = z.object({
  id: z.string(),
  start: z.string(),
  end: z.string(),
});

const metadata = z.object({
  level: z.number(),
  config: z.record(z.unknown()),
  min_periods: z.number(),
  period_count: z.number(),
  group_count: z.number(),
  branch_count: z.number(),
  link_count: z.number(),
  ghost_link_count: z.number(),
  removed_branches: z.array(z.unknown()),
  committed_levels: z.array(z.number()),
  group_warning: z.boolean(),
  warnings: z.array(z.string()),
});

export const exportSchema = z.object({
  metadata,
  periods: z.array(period).min(1),
  branches: z.array(branch).min(1),
  groups: z.array(group).min(1),
  links: z.array(link),
  ghost_links: z.array(ghostLink),
  terms: z.array(termEntry),
  search_index: z.record(z.array(z.string())),
});

export type PhyloExport = z.infer<typeof exportSchema>;
export type BranchEntry = z.infer<typeof branch>;
export type GroupEntry = z.infer<typeof group>;
export type LinkEntry = z.infer<typeof link>;
export type TermEntry = z.infer<typeof termEntry>;

export class SchemaError extends Error {
  readonly path: string;

  constructor(path: string, detail: string) {
    super(`invalid export at ${path || "(root)"}: ${detail}`);
    this.path = path;
  }
}

/** Parse raw JSON data into a typed export; throws with the key path. */
export function validateExport(data: unknown): PhyloExport {
  const result = exportSchema.safeParse(data);
  if (!result.success) {
    const issue = result.error.issues[0];
    throw new SchemaError(issue.path.join("."), issue.message);
  }
  const parsed = result.data;
  const groupIds = new Set(parsed.groups.map((g) => g.id));
  const branchIds = new Set(parsed.branches.map((b) => b.id));
  for (let i = 0; i < parsed.groups.length; i++) {
    if (!branchIds.has(parsed.groups[i].branch)) {
      throw new SchemaError(`groups.${i}.branch`, `unknown branch ${parsed.groups[i].branch}`);
    }
  }
  const allLinks = [...parsed.links, ...parsed.ghost_links];
  for (let i = 0; i < allLinks.length; i++) {
    const l = allLinks[i];
    if (!groupIds.has(l.parent) || !groupIds.has(l.child)) {
      const key = i < parsed.links.length ? `links.${i}` : `ghost_links.${i - parsed.links.length}`;
      throw new SchemaError(key, "link endpoint is not a known group");
    }
  }
  return parsed;
}
