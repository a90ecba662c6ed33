/** Public rendering API: a FigureJob in, an image file out. */

import { writeFileSync } from "node:fs";

import { readCsv, SchemaError } from "./csv.js";
import { FIGURES, FigureOptions, HEIGHT, WIDTH } from "./figures.js";
import { makeSurface } from "./surface.js";

export { SchemaError } from "./csv.js";
export type { FigureOptions } from "./figures.js";

export interface FigureJob {
  kind: string;
  inputs: string[];
  output: string;
  options?: FigureOptions;
}

export function figureKinds(): string[] {
  return Object.keys(FIGURES).sort();
}

/** Render a figure to SVG or PNG bytes (no file IO). */
export function renderBytes(job: Omit<FigureJob, "output"> & { format: "svg" | "png" }): Buffer {
  const build = FIGURES[job.kind];
  if (!build) {
    throw new SchemaError(
      `unknown figure kind '${job.kind}' (expected one of ${figureKinds().join(", ")})`
    );
  }
  const tables = job.inputs.map(readCsv);
  const surface = makeSurface(job.format, WIDTH, HEIGHT);
  build(tables, job.options ?? {}, surface);
  return surface.finalize();
}

/** Render a FigureJob to its output path; the extension picks the format. */
export function render(job: FigureJob): void {
  const lower = job.output.toLowerCase();
  let format: "svg" | "png";
  if (lower.endsWith(".svg")) {
    format = "svg";
  } else if (lower.endsWith(".png")) {
    format = "png";
  } else {
    throw new SchemaError(`output must end in .svg or .png, got ${job.output}`);
  }
  const bytes = renderBytes({ ...job, format });
  writeFileSync(job.output, bytes);
}
