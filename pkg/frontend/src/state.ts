/** Pure editor state for one sentence's fact clusters.
 *
 * The editor mirrors the server's data model: a cluster is one fact
 * synset, each of its drafts one triple pattern over token indices, with
 * a draft-wide set of optional indices. All rules the server enforces on
 * save are validated here first, so the client never sends a rejected
 * payload. Coreferent alternatives are separate drafts in one cluster,
 * never inline groups.
 */

import type {
  ClusterPayload,
  PatternPayload,
  SentenceDetail,
  TokenView,
} from "./api.js";

export type SlotName = "subject" | "predicate" | "object";

export const SLOTS: readonly SlotName[] = ["subject", "predicate", "object"];

export interface Draft {
  subject: number[];
  predicate: number[];
  object: number[];
  optional: Set<number>;
  entityClean: boolean;
}

export interface EditorCluster {
  id: string;
  drafts: Draft[];
}

export function emptyDraft(): Draft {
  return {
    subject: [],
    predicate: [],
    object: [],
    optional: new Set(),
    entityClean: true,
  };
}

function draftFromPattern(p: PatternPayload): Draft {
  return {
    subject: [...p.subject],
    predicate: [...p.predicate],
    object: [...p.object],
    optional: new Set(p.optional),
    entityClean: p.entity_clean,
  };
}

function patternFromDraft(d: Draft): PatternPayload {
  const selected = new Set([...d.subject, ...d.predicate, ...d.object]);
  return {
    subject: [...d.subject],
    predicate: [...d.predicate],
    object: [...d.object],
    optional: [...d.optional].filter((i) => selected.has(i)).sort((a, b) => a - b),
    entity_clean: d.entityClean,
  };
}

/** Result of one token click, for the view layer to announce. */
export type ClickEffect = "added" | "marked-optional" | "removed";

export class SentenceEditor {
  sentenceId = "";
  revision = 0;
  tokens: TokenView[] = [];
  clusters: EditorCluster[] = [];
  /** Variant counts the server reported for the last saved state. */
  serverVariants = new Map<string, number>();
  dirty = false;
  activeCluster = 0;
  activeDraft = 0;
  activeSlot: SlotName = "subject";

  constructor(detail: SentenceDetail) {
    this.applyServer(detail);
  }

  /** Replace all local state with a server snapshot; clears edits. */
  applyServer(detail: SentenceDetail): void {
    this.sentenceId = detail.id;
    this.revision = detail.revision;
    this.tokens = detail.tokens;
    this.clusters = detail.clusters.map((c) => ({
      id: c.id,
      drafts: c.patterns.map(draftFromPattern),
    }));
    this.serverVariants = new Map(detail.clusters.map((c) => [c.id, c.variants]));
    this.dirty = false;
    this.activeCluster = Math.min(this.activeCluster, this.clusters.length - 1);
    if (this.activeCluster < 0) this.activeCluster = 0;
    this.activeDraft = 0;
    this.activeSlot = "subject";
  }

  get draft(): Draft | null {
    return this.clusters[this.activeCluster]?.drafts[this.activeDraft] ?? null;
  }

  private freshClusterId(): string {
    const taken = new Set(this.clusters.map((c) => c.id));
    for (let n = 1; ; n++) {
      const id = `c${n}`;
      if (!taken.has(id)) return id;
    }
  }

  addCluster(id?: string): EditorCluster {
    const cluster = { id: id ?? this.freshClusterId(), drafts: [emptyDraft()] };
    this.clusters.push(cluster);
    this.activeCluster = this.clusters.length - 1;
    this.activeDraft = 0;
    this.activeSlot = "subject";
    this.dirty = true;
    return cluster;
  }

  removeCluster(index: number): void {
    if (!this.clusters[index]) return;
    this.clusters.splice(index, 1);
    this.activeCluster = Math.max(0, Math.min(this.activeCluster, this.clusters.length - 1));
    this.activeDraft = 0;
    this.dirty = true;
  }

  addDraft(): Draft | null {
    const cluster = this.clusters[this.activeCluster];
    if (!cluster) return null;
    const draft = emptyDraft();
    cluster.drafts.push(draft);
    this.activeDraft = cluster.drafts.length - 1;
    this.activeSlot = "subject";
    this.dirty = true;
    return draft;
  }

  removeDraft(index: number): void {
    const cluster = this.clusters[this.activeCluster];
    if (!cluster || !cluster.drafts[index]) return;
    cluster.drafts.splice(index, 1);
    this.activeDraft = Math.max(0, Math.min(this.activeDraft, cluster.drafts.length - 1));
    this.dirty = true;
  }

  setActive(cluster: number, draft = 0): void {
    if (!this.clusters[cluster]?.drafts[draft]) return;
    this.activeCluster = cluster;
    this.activeDraft = draft;
  }

  setSlot(slot: SlotName): void {
    this.activeSlot = slot;
  }

  /** Click cycle per slot: absent -> selected -> optional -> absent. */
  clickToken(index: number): ClickEffect | null {
    const draft = this.draft;
    if (!draft || index < 0 || index >= this.tokens.length) return null;
    const slot = draft[this.activeSlot];
    const at = slot.indexOf(index);
    if (at < 0) {
      slot.push(index);
      this.dirty = true;
      return "added";
    }
    if (!draft.optional.has(index)) {
      draft.optional.add(index);
      this.dirty = true;
      return "marked-optional";
    }
    slot.splice(at, 1);
    // the optional mark is draft-wide; keep it while another slot still
    // holds the index
    const elsewhere = SLOTS.some((s) => draft[s].includes(index));
    if (!elsewhere) draft.optional.delete(index);
    this.dirty = true;
    return "removed";
  }

  toggleEntityClean(): void {
    const draft = this.draft;
    if (!draft) return;
    draft.entityClean = !draft.entityClean;
    this.dirty = true;
  }

  /** Everything the server would reject, as human-readable messages. */
  validate(): string[] {
    const problems: string[] = [];
    const seen = new Set<string>();
    for (const cluster of this.clusters) {
      if (seen.has(cluster.id)) problems.push(`duplicate cluster id '${cluster.id}'`);
      seen.add(cluster.id);
      if (cluster.drafts.length === 0) {
        problems.push(`cluster '${cluster.id}' has no triples`);
      }
      cluster.drafts.forEach((draft, di) => {
        const where = `cluster '${cluster.id}', triple ${di + 1}`;
        for (const slot of SLOTS) {
          const picks = draft[slot];
          if (picks.length === 0) {
            problems.push(`${where}: ${slot} is empty`);
          } else if (picks.every((i) => draft.optional.has(i))) {
            problems.push(`${where}: ${slot} has no mandatory token`);
          }
        }
      });
    }
    return problems;
  }

  payload(): ClusterPayload[] {
    return this.clusters.map((c) => ({
      id: c.id,
      patterns: c.drafts.map(patternFromDraft),
    }));
  }

  /** Local variant count for a cluster, server-idle preview. */
  variantCount(index: number): number {
    const cluster = this.clusters[index];
    if (!cluster) return 0;
    const surfaces = this.tokens.map((t) => t.surface);
    return clusterVariants(cluster, surfaces);
  }
}

/** All realizations of one slot: contiguous optional runs toggle as units. */
export function slotRealizations(
  indices: number[],
  optional: Set<number>,
  surfaces: string[]
): string[][] {
  interface Group {
    words: string[];
    toggles: boolean;
  }
  const groups: Group[] = [];
  for (const i of indices) {
    const word = surfaces[i] ?? "";
    const last = groups[groups.length - 1];
    if (optional.has(i)) {
      if (last && last.toggles) last.words.push(word);
      else groups.push({ words: [word], toggles: true });
    } else {
      if (last && !last.toggles) last.words.push(word);
      else groups.push({ words: [word], toggles: false });
    }
  }
  let out: string[][] = [[]];
  for (const group of groups) {
    if (group.toggles) {
      out = out.concat(out.map((prefix) => [...prefix, ...group.words]));
    } else {
      out = out.map((prefix) => [...prefix, ...group.words]);
    }
  }
  return out;
}

/** Distinct case-folded triples a cluster licenses, across all drafts. */
export function clusterVariants(cluster: EditorCluster, surfaces: string[]): number {
  const seen = new Set<string>();
  for (const draft of cluster.drafts) {
    for (const s of slotRealizations(draft.subject, draft.optional, surfaces)) {
      for (const p of slotRealizations(draft.predicate, draft.optional, surfaces)) {
        for (const o of slotRealizations(draft.object, draft.optional, surfaces)) {
          seen.add(
            [s, p, o].map((slot) => slot.join(" ").toLowerCase()).join("\t")
          );
        }
      }
    }
  }
  return seen.size;
}
