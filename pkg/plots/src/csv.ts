/** Strict CSV reading for the simulator's result files. */

import { readFileSync } from "node:fs";

export class SchemaError extends Error {}

export interface Table {
  path: string;
  header: string[];
  rows: string[][];
}

/** Parse a simple comma-separated file (no quoting is ever emitted upstream). */
export function readCsv(path: string): Table {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${path}: empty file`);
  }
  const header = lines[0].split(",").map((cell) => cell.trim());
  const rows = lines.slice(1).map((line) => line.split(",").map((c) => c.trim()));
  return { path, header, rows };
}

/**
 * Check that every required column exists; the error names what is missing
 * so a mismatched figure kind is obvious.
 */
export function requireColumns(table: Table, required: string[]): Map<string, number> {
  const index = new Map<string, number>();
  table.header.forEach((name, i) => index.set(name, i));
  const missing = required.filter((name) => !index.has(name));
  if (missing.length > 0) {
    throw new SchemaError(
      `${table.path}: missing column(s) ${missing.join(", ")} ` +
        `(found: ${table.header.join(", ")})`
    );
  }
  return index;
}

export function numericColumn(table: Table, index: Map<string, number>, name: string): number[] {
  const col = index.get(name)!;
  return table.rows.map((row, rowIdx) => {
    const value = Number(row[col]);
    if (!Number.isFinite(value)) {
      throw new SchemaError(
        `${table.path}: row ${rowIdx + 2}, column ${name}: not a number (${row[col]})`
      );
    }
    return value;
  });
}

export function stringColumn(table: Table, index: Map<string, number>, name: string): string[] {
  const col = index.get(name)!;
  return table.rows.map((row) => row[col]);
}
