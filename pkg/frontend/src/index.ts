/**
 * Node binding for the morphpiece tokenizer.
 *
 * Every call shells out to the `morphpiece` CLI (`python3 -m morphpiece`),
 * so results are byte-identical to the command line by construction. The
 * process carries no state between calls; a handle is just a validated
 * artifact directory plus the interpreter used to reach it.
 */

import { spawnSync } from "node:child_process";
import { existsSync } from "node:fs";
import { join } from "node:path";

/** Exit statuses of the CLI surface as error codes. */
export class MorphPieceError extends Error {
  readonly code: number;

  constructor(message: string, code: number) {
    super(message);
    this.name = new.target.name;
    this.code = code;
  }
}

/** Caller mistake: bad arguments or a closed handle (CLI exit status 1). */
export class UsageError extends MorphPieceError {
  constructor(message: string) {
    super(message, 1);
  }
}

/** Missing or unreadable artifacts, malformed data (CLI exit status 2). */
export class ArtifactError extends MorphPieceError {
  constructor(message: string) {
    super(message, 2);
  }
}

const ARTIFACT_FILES = ["morphtable.tsv", "bpe.model", "bpe.vocab", "vocab.tsv"];

export interface LoadOptions {
  /** Interpreter to run the CLI with; defaults to $MORPHPIECE_PYTHON or python3. */
  python?: string;
}

function runCli(python: string, args: string[]): string {
  const res = spawnSync(python, ["-m", "morphpiece", ...args], {
    encoding: "utf-8",
    maxBuffer: 64 * 1024 * 1024,
  });
  if (res.error) {
    throw new UsageError(`cannot run ${python}: ${res.error.message}`);
  }
  if (res.status !== 0) {
    const message = (res.stderr ?? "").trim() || `morphpiece exited with status ${res.status}`;
    if (res.status === 1) throw new UsageError(message);
    if (res.status === 2) throw new ArtifactError(message);
    throw new MorphPieceError(message, res.status ?? -1);
  }
  return res.stdout;
}

// the CLI emits exactly one output line per input document
function oneLine(stdout: string): string {
  return stdout.endsWith("\n") ? stdout.slice(0, -1) : stdout;
}

export class BoundTokenizer {
  readonly dir: string;
  private readonly python: string;
  private closed = false;

  /** @internal use {@link load} */
  constructor(dir: string, python: string) {
    this.dir = dir;
    this.python = python;
  }

  private invoke(args: string[]): string {
    if (this.closed) {
      throw new UsageError("tokenizer handle is closed");
    }
    return runCli(this.python, args);
  }

  private checkText(text: string): void {
    // line-oriented wire format: one document per line
    if (text.includes("\n") || text.includes("\r")) {
      throw new UsageError("text must be a single document without newlines");
    }
  }

  encode(text: string): number[] {
    this.checkText(text);
    const line = oneLine(
      this.invoke(["encode", "--dir", this.dir, "--emit", "ids", `--text=${text}`]),
    );
    return line === "" ? [] : line.split(" ").map(Number);
  }

  tokenize(text: string): string[] {
    this.checkText(text);
    const line = oneLine(
      this.invoke(["encode", "--dir", this.dir, "--emit", "tokens", `--text=${text}`]),
    );
    return line === "" ? [] : line.split(" ");
  }

  decode(ids: number[]): string {
    for (const id of ids) {
      if (!Number.isInteger(id) || id < 0) {
        throw new UsageError(`token ids must be non-negative integers, got ${id}`);
      }
    }
    return oneLine(
      this.invoke(["decode", "--dir", this.dir, "--from", "ids", `--text=${ids.join(" ")}`]),
    );
  }

  detokenize(tokens: string[]): string {
    for (const token of tokens) {
      if (token === "" || /\s/.test(token)) {
        throw new UsageError(`tokens must be non-empty and free of whitespace, got ${JSON.stringify(token)}`);
      }
    }
    return oneLine(
      this.invoke(["decode", "--dir", this.dir, "--from", "tokens", `--text=${tokens.join(" ")}`]),
    );
  }

  /** Invalidate the handle; further calls raise UsageError. Idempotent. */
  close(): void {
    this.closed = true;
  }
}

/**
 * Validate an artifact directory and return a handle over it.
 *
 * Checks that all four artifact files exist, then loads them once through
 * the CLI so corrupt artifacts fail here (with the CLI's line-numbered
 * message) rather than on first use.
 */
export function load(artifactDir: string, opts: LoadOptions = {}): BoundTokenizer {
  const python = opts.python ?? process.env.MORPHPIECE_PYTHON ?? "python3";
  for (const name of ARTIFACT_FILES) {
    const path = join(artifactDir, name);
    if (!existsSync(path)) {
      throw new ArtifactError(`missing artifact file: ${path}`);
    }
  }
  const handle = new BoundTokenizer(artifactDir, python);
  handle.encode("");
  return handle;
}

/** Version of the underlying tokenizer package. */
export function version(opts: LoadOptions = {}): string {
  const python = opts.python ?? process.env.MORPHPIECE_PYTHON ?? "python3";
  const out = runCli(python, ["--version"]).trim();
  const parts = out.split(" ");
  return parts[parts.length - 1];
}
