/** Axis scales, tick selection, and deterministic number formatting. */

export interface Scale {
  (value: number): number;
  readonly min: number;
  readonly max: number;
  readonly log: boolean;
}

export function makeScale(
  min: number,
  max: number,
  outLo: number,
  outHi: number,
  log = false
): Scale {
  if (log && (min <= 0 || max <= 0)) {
    throw new Error(`log scale needs positive bounds, got [${min}, ${max}]`);
  }
  if (min === max) {
    // degenerate input range: widen symmetrically
    min = log ? min / 2 : min - 1;
    max = log ? max * 2 : max + 1;
  }
  const lo = log ? Math.log10(min) : min;
  const hi = log ? Math.log10(max) : max;
  const fn = (value: number): number => {
    const v = log ? Math.log10(value) : value;
    return outLo + ((v - lo) / (hi - lo)) * (outHi - outLo);
  };
  return Object.assign(fn, { min, max, log });
}

/** 1/2/5-stepped linear ticks covering [min, max]. */
export function linearTicks(min: number, max: number, target = 6): number[] {
  const span = max - min;
  if (span <= 0) return [min];
  const rawStep = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const mult of [1, 2, 5, 10]) {
    if (mag * mult >= rawStep) {
      step = mag * mult;
      break;
    }
  }
  const ticks: number[] = [];
  let tick = Math.ceil(min / step) * step;
  for (; tick <= max + step * 1e-9; tick += step) {
    ticks.push(Math.abs(tick) < step * 1e-9 ? 0 : tick);
  }
  return ticks;
}

/** Decade ticks for log axes. */
export function logTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(min) - 1e-9); Math.pow(10, e) <= max * (1 + 1e-9); e++) {
    const value = Math.pow(10, e);
    if (value >= min * (1 - 1e-9)) ticks.push(value);
  }
  return ticks.length >= 2 ? ticks : [min, max];
}

/** Fixed-rule number formatting (no locale, no float noise). */
export function fmtNum(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1e4 || abs < 1e-3) {
    return value
      .toExponential(0)
      .replace("e", "E")
      .replace("E+", "E");
  }
  let s = value.toPrecision(4);
  if (s.includes(".")) s = s.replace(/0+$/, "").replace(/\.$/, "");
  return s;
}
