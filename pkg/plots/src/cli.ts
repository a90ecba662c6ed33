#!/usr/bin/env node
/**
 * plots --kind <cdf|heatmap|tradeoff|density|arrivals> --in <csv...> --out <png|svg>
 *
 * Options: --title <text>, --linear-y (cdf: plain reliability axis),
 * --linear-x (linear instead of log x).  Exit codes: 0 ok, 2 usage/schema.
 */

import { figureKinds, render, SchemaError } from "./index.js";

function usage(): string {
  return (
    "usage: plots --kind <k> --in <csv...> --out <file.svg|file.png> " +
    "[--title t] [--linear-y] [--linear-x]\n" +
    `kinds: ${figureKinds().join(", ")}`
  );
}

export function main(argv: string[]): number {
  let kind = "";
  let out = "";
  let title: string | undefined;
  const inputs: string[] = [];
  let linearY = false;
  let linearX = false;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    switch (arg) {
      case "--kind":
        kind = argv[++i] ?? "";
        break;
      case "--in":
        while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) {
          inputs.push(argv[++i]);
        }
        break;
      case "--out":
        out = argv[++i] ?? "";
        break;
      case "--title":
        title = argv[++i];
        break;
      case "--linear-y":
        linearY = true;
        break;
      case "--linear-x":
        linearX = true;
        break;
      case "--help":
      case "-h":
        console.log(usage());
        return 0;
      default:
        console.error(`unknown argument: ${arg}\n${usage()}`);
        return 2;
    }
  }
  if (!kind || !out || inputs.length === 0) {
    console.error(usage());
    return 2;
  }
  try {
    render({ kind, inputs, output: out, options: { title, linearY, linearX } });
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  return 0;
}

const isMain = process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (isMain) {
  process.exit(main(process.argv.slice(2)));
}
