/**
 * Test fixtures: build a real artifact directory through the CLI and
 * generate deterministic sentences for differential runs.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export const PYTHON = process.env.MORPHPIECE_PYTHON ?? "python3";

/** Direct CLI invocation, the reference side of every differential test. */
export function cli(args: string[], input?: string): string {
  const res = spawnSync(PYTHON, ["-m", "morphpiece", ...args], {
    encoding: "utf-8",
    input,
    maxBuffer: 64 * 1024 * 1024,
  });
  if (res.status !== 0) {
    throw new Error(`cli ${args.join(" ")} failed (${res.status}): ${res.stderr}`);
  }
  return res.stdout;
}

const MORPHOLOGY = [
  "batting\tbat\ting:suffix",
  "disengage\tgage\tdis:prefix,en:prefix",
  "archeologists\t-\tarchaeo:prefix,logy:suffix,ist:suffix,s:suffix",
  "decompress\tcompress\tde:prefix",
  "photographers\t-\tphoto:prefix,graph:suffix,er:suffix,s:suffix",
  "investigating\tvestigate\tin:prefix,ing:suffix",
  "diligently\tdiligent\tly:suffix",
  "football\tfoot\tball:cstem",
  "output\tout\tput:stem",
  "walked\twalk\ted:suffix",
  "gardens\tgarden\ts:suffix",
  "teaching\tteach\ting:suffix",
].join("\n") + "\n";

const CORPUS_LINES = [
  "The batting order was posted near the door before the game.",
  "She walked to the river in the cold morning light.",
  "The archeologists opened the old stone door very carefully.",
  "Two photographers waited near the bridge for the train.",
  "He was investigating diligently while the others waited.",
  "The football game started after the rain stopped.",
  "Don't forget the output file when the run ends.",
  "A quiet voice said \"wait here\" and the gardens fell silent.",
  "Teaching takes patience, practice and a little luck.",
  "It costs 42 dollars, not 7, according to the receipt.",
  "The café was open but the naïve waiter had walked out.",
  "He can't decompress the archive without the right tool.",
  "Numbers like 1234 and 99 show up everywhere in the logs.",
  "The singer and the dancer shared a small stage.",
];

/** Build all four artifacts in a fresh temp directory; returns its path. */
export function buildArtifacts(): string {
  const dir = mkdtempSync(join(tmpdir(), "morphpiece-"));
  const morphology = join(dir, "morphology.tsv");
  const corpus = join(dir, "corpus.txt");
  writeFileSync(morphology, MORPHOLOGY);
  writeFileSync(corpus, CORPUS_LINES.map((l) => l + "\n").join(""));
  cli(["build-morphtable", "--dir", dir, "--source", morphology]);
  cli(["train-bpe", "--dir", dir, "--corpus", corpus, "--target-size", "380", "--backend", "numpy"]);
  cli(["build-vocab", "--dir", dir]);
  return dir;
}

export function tableSurfaces(dir: string): string[] {
  return readFileSync(join(dir, "morphtable.tsv"), "utf-8")
    .split("\n")
    .filter((line) => line.length > 0)
    .map((line) => line.split("\t")[0]);
}

// mulberry32: tiny deterministic PRNG, good enough for fixture sampling
function rng(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const FILLERS = ["the", "a", "He", "She", "was", "in", "of", "to", "and", "near", "door"];
const EXTRAS = ["café", "naïve", "don't", "it's", "...", "--", '"quoted"', "(aside)", "42", "1234", "7,000"];
const PUNCT = [".", ",", "!", "?", ";"];

/** Deterministic single-line sentences mixing morph words and BPE text. */
export function generateSentences(surfaces: string[], n: number, seed = 1): string[] {
  const next = rng(seed);
  const pick = <T>(pool: T[]): T => pool[Math.floor(next() * pool.length)];
  const sentences: string[] = [];
  for (let i = 0; i < n; i++) {
    const words: string[] = [];
    const count = 3 + Math.floor(next() * 8);
    for (let w = 0; w < count; w++) {
      const kind = next();
      if (kind < 0.4) words.push(pick(surfaces));
      else if (kind < 0.75) words.push(pick(FILLERS));
      else words.push(pick(EXTRAS));
    }
    let sentence = words[0];
    for (const word of words.slice(1)) {
      const glue = next();
      if (glue < 0.82) sentence += " " + word;
      else if (glue < 0.9) sentence += "  " + word;
      else sentence += word;
    }
    if (next() < 0.5) sentence += pick(PUNCT);
    sentences.push(sentence);
  }
  return sentences;
}
