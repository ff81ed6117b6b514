/**
 * Differential suite: the binding must reproduce direct CLI output
 * byte for byte. The CLI side runs in batch mode over a file; the
 * binding side crosses the process boundary once per call.
 */

import { rmSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { afterAll, beforeAll, expect, it } from "vitest";

import { BoundTokenizer, load } from "../src/index.js";
import { buildArtifacts, cli, generateSentences, tableSurfaces } from "./helpers.js";

const N = 1000;

let dir: string;
let tok: BoundTokenizer;
let sentences: string[];

beforeAll(() => {
  dir = buildArtifacts();
  tok = load(dir);
  sentences = generateSentences(tableSurfaces(dir), N, 7);
});

afterAll(() => {
  rmSync(dir, { recursive: true, force: true });
});

function cliBatch(args: string[], lines: string[]): string[] {
  const input = join(dir, "batch-input.txt");
  writeFileSync(input, lines.map((l) => l + "\n").join(""));
  const out = cli([...args, "--dir", dir, "--input", input]);
  const rows = out.split("\n");
  expect(rows.pop()).toBe("");
  expect(rows).toHaveLength(lines.length);
  return rows;
}

// the binding is synchronous; let the worker's RPC breathe between spawns
const breathe = () => new Promise((resolve) => setImmediate(resolve));

it(`encode parity on ${N} sentences`, async () => {
  const reference = cliBatch(["encode", "--emit", "ids"], sentences);
  for (let i = 0; i < N; i++) {
    expect(tok.encode(sentences[i]).join(" ")).toBe(reference[i]);
    if (i % 20 === 0) await breathe();
  }
});

it(`decode parity on ${N} id sequences`, async () => {
  const idLines = cliBatch(["encode", "--emit", "ids"], sentences);
  const reference = cliBatch(["decode", "--from", "ids"], idLines);
  for (let i = 0; i < N; i++) {
    const ids = idLines[i] === "" ? [] : idLines[i].split(" ").map(Number);
    expect(tok.decode(ids)).toBe(reference[i]);
    expect(reference[i]).toBe(sentences[i]);
    if (i % 20 === 0) await breathe();
  }
});

it("token stream parity on a sample", async () => {
  const sample = sentences.filter((_, i) => i % 10 === 0);
  const tokenLines = cliBatch(["encode", "--emit", "tokens"], sample);
  const reference = cliBatch(["decode", "--from", "tokens"], tokenLines);
  for (let i = 0; i < sample.length; i++) {
    expect(tok.tokenize(sample[i]).join(" ")).toBe(tokenLines[i]);
    const tokens = tokenLines[i] === "" ? [] : tokenLines[i].split(" ");
    expect(tok.detokenize(tokens)).toBe(reference[i]);
    if (i % 20 === 0) await breathe();
  }
});
