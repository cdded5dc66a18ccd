/** Round trip against a live service: annotate, save, reload, export,
 * then score the export with the evaluation CLI. Requires the Python
 * package to be installed (python3 -m factbench.cli).
 */

import { type ChildProcess, execFile, spawn } from "node:child_process";
import { mkdtemp, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";

import { afterAll, beforeAll, expect, test } from "vitest";

import { AnnotationApi, ApiError } from "../src/api.js";
import { SentenceEditor } from "../src/state.js";

const run = promisify(execFile);

const TAGGED = [
  "# sent_id = S1",
  "Sen.\tPROPN",
  "Mitchell\tPROPN",
  "is\tAUX",
  "confident\tADJ",
  "he\tPRON",
  "has\tVERB",
  "sufficient\tADJ",
  "votes\tNOUN",
  "to\tPART",
  "block\tVERB",
  "such\tDET",
  "a\tDET",
  "measure\tNOUN",
  "with\tADP",
  "procedural\tADJ",
  "actions\tNOUN",
  ".\tPUNCT",
  "",
].join("\n");

const port = 8300 + (process.pid % 500);
const base = `http://127.0.0.1:${port}`;
const api = new AnnotationApi(base);
let server: ChildProcess;
let workDir: string;

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 20000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${base}/sessions`);
      if (response.ok) return;
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error(`service did not come up on ${base}`);
}

beforeAll(async () => {
  workDir = await mkdtemp(join(tmpdir(), "factbench-ui-"));
  server = spawn(
    "python3",
    [
      "-m",
      "factbench.cli",
      "serve",
      "--data-dir",
      join(workDir, "sessions"),
      "--host",
      "127.0.0.1",
      "--port",
      String(port),
    ],
    { stdio: "ignore" }
  );
  await waitForService();
}, 30000);

afterAll(() => {
  server?.kill();
});

test("annotate, save, reload, export, score", async () => {
  await api.createSession("anno", TAGGED);
  const editor = new SentenceEditor(await api.getSentence("anno", "S1"));

  // first pattern: (Sen. Mitchell; is confident he has; sufficient votes)
  editor.addCluster("f2");
  editor.clickToken(0);
  editor.clickToken(1);
  editor.setSlot("predicate");
  for (const i of [2, 3, 4, 5]) editor.clickToken(i);
  editor.setSlot("object");
  editor.clickToken(6);
  editor.clickToken(7);

  // coreferent alternative as a second pattern in the same cluster
  editor.addDraft();
  editor.clickToken(4);
  editor.setSlot("predicate");
  for (const i of [2, 3, 4, 5]) editor.clickToken(i);
  editor.setSlot("object");
  editor.clickToken(6);
  editor.clickToken(7);

  // longer object with "such a" marked optional
  editor.addDraft();
  editor.clickToken(0);
  editor.clickToken(1);
  editor.setSlot("predicate");
  for (const i of [2, 3, 4, 5]) editor.clickToken(i);
  editor.setSlot("object");
  for (const i of [6, 7, 8, 9, 10, 11, 12]) editor.clickToken(i);
  editor.clickToken(10);
  editor.clickToken(11);

  expect(editor.validate()).toEqual([]);
  expect(editor.variantCount(0)).toBe(4);

  const saved = await api.putAnnotation("anno", "S1", editor.revision, editor.payload());
  const payloadBefore = editor.payload();
  editor.applyServer(saved);
  expect(editor.revision).toBe(1);
  expect(editor.dirty).toBe(false);
  // the server's expansion preview agrees with the local one
  expect(editor.serverVariants.get("f2")).toBe(4);

  // write-then-read: a fresh editor over a fresh fetch sees the same drafts
  const reloaded = new SentenceEditor(await api.getSentence("anno", "S1"));
  expect(reloaded.revision).toBe(1);
  expect(reloaded.payload()).toEqual(payloadBefore);
  expect([...reloaded.clusters[0].drafts[2].optional].sort()).toEqual([10, 11]);

  // export and score it against the one extraction the gold must license
  const gold = await api.exportGold("anno");
  expect(gold).toContain("sent\tS1\t");
  expect(gold).toContain("fact\tS1\tS1.f2\t");
  const goldPath = join(workDir, "export.tsv");
  const extractionPath = join(workDir, "extraction.tsv");
  await writeFile(goldPath, gold);
  await writeFile(
    extractionPath,
    "S1\tSen. Mitchell\tis confident he has\tsufficient votes\n"
  );

  const expanded = await run("python3", [
    "-m",
    "factbench.cli",
    "expand",
    goldPath,
    "--format",
    "json",
  ]);
  const synsets = JSON.parse(expanded.stdout).synsets;
  expect(synsets).toHaveLength(1);
  expect(synsets[0].id).toBe("S1.f2");
  expect(synsets[0].triples).toContainEqual([
    "Sen. Mitchell",
    "is confident he has",
    "sufficient votes",
  ]);

  const scored = await run("python3", [
    "-m",
    "factbench.cli",
    "score",
    goldPath,
    extractionPath,
    "--format",
    "json",
  ]);
  const report = JSON.parse(scored.stdout)[0].report;
  expect(report.tp).toBe(1);
  expect(report.fp).toBe(0);
  expect(report.fn).toBe(0);
}, 20000);

test("conflicting save is rejected, reload recovers", async () => {
  await api.createSession("conflict", TAGGED);
  const first = new SentenceEditor(await api.getSentence("conflict", "S1"));
  const second = new SentenceEditor(await api.getSentence("conflict", "S1"));

  const draftTriple = (editor: SentenceEditor, clusterId: string): void => {
    editor.addCluster(clusterId);
    editor.clickToken(0);
    editor.clickToken(1);
    editor.setSlot("predicate");
    editor.clickToken(5);
    editor.setSlot("object");
    editor.clickToken(7);
  };

  draftTriple(first, "a");
  first.applyServer(
    await api.putAnnotation("conflict", "S1", first.revision, first.payload())
  );
  expect(first.revision).toBe(1);

  // the second annotator still holds revision 0: no silent overwrite
  draftTriple(second, "b");
  let conflict: ApiError | null = null;
  try {
    await api.putAnnotation("conflict", "S1", second.revision, second.payload());
  } catch (err) {
    conflict = err as ApiError;
  }
  expect(conflict).toBeInstanceOf(ApiError);
  expect(conflict!.status).toBe(409);
  const untouched = await api.getSentence("conflict", "S1");
  expect(untouched.revision).toBe(1);
  expect(untouched.clusters.map((c) => c.id)).toEqual(["a"]);

  // recovery path the UI offers: fetch the server version, redo, save
  second.applyServer(untouched);
  draftTriple(second, "b");
  const saved = await api.putAnnotation(
    "conflict",
    "S1",
    second.revision,
    second.payload()
  );
  expect(saved.revision).toBe(2);
  expect(saved.clusters.map((c) => c.id)).toEqual(["a", "b"]);
}, 20000);
