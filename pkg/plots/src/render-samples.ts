/**
 * Render every checked-in sample CSV (one per simulator scenario) twice and
 * verify the bytes are identical; used by `npm run render-samples` and CI.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { createHash } from "node:crypto";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { renderBytes } from "./index.js";

const here = dirname(fileURLToPath(import.meta.url));
const samples = join(here, "..", "samples");

export const SAMPLE_JOBS: Array<{ kind: string; inputs: string[]; name: string }> = [
  { kind: "cdf", inputs: ["latency_cdf.csv"], name: "latency_cdf" },
  { kind: "tradeoff", inputs: ["frame_tradeoff.csv"], name: "frame_tradeoff" },
  { kind: "heatmap", inputs: ["simo_heatmap.csv"], name: "simo_heatmap" },
  {
    kind: "cdf",
    inputs: ["pd_lte.csv", "pd_hspa.csv", "pd_lte+hspa.csv"],
    name: "pd_interfaces",
  },
  { kind: "density", inputs: ["densification.csv"], name: "densification" },
  { kind: "cdf", inputs: ["grant_free_reliability.csv"], name: "grant_free" },
  { kind: "cdf", inputs: ["coordinated_reliability.csv"], name: "coordinated" },
  { kind: "cdf", inputs: ["grant_based_reliability.csv"], name: "grant_based" },
  { kind: "arrivals", inputs: ["minislot_arrivals.csv"], name: "minislot" },
];

function sha(buffer: Buffer): string {
  return createHash("sha256").update(buffer).digest("hex").slice(0, 16);
}

function main(): number {
  const outDir = join(here, "..", "rendered");
  mkdirSync(outDir, { recursive: true });
  let failures = 0;
  for (const job of SAMPLE_JOBS) {
    const inputs = job.inputs.map((f) => join(samples, f));
    for (const format of ["svg", "png"] as const) {
      const first = renderBytes({ kind: job.kind, inputs, format });
      const second = renderBytes({ kind: job.kind, inputs, format });
      const stable = first.equals(second);
      if (!stable) failures++;
      writeFileSync(join(outDir, `${job.name}.${format}`), first);
      console.log(
        `${job.name}.${format}: ${first.length} bytes sha=${sha(first)} ` +
          (stable ? "stable" : "UNSTABLE")
      );
    }
  }
  if (failures) {
    console.error(`${failures} unstable renders`);
    return 1;
  }
  return 0;
}

const isMain = process.argv[1] && import.meta.url.endsWith("render-samples.js");
if (isMain) {
  process.exit(main());
}
