/**
 * Drawing surface with two byte-stable backends.
 *
 * The SVG backend accumulates markup with fixed numeric precision and no
 * timestamps or ids; the raster backend draws into an RGBA buffer (Bresenham
 * lines, solid fills, the built-in 5x7 font) and encodes a PNG with fixed
 * deflate settings.  Same drawing calls, same bytes, every run.
 */

import { GLYPH_H, GLYPH_W, glyphRows } from "./font5x7.js";
import { encodePng } from "./png.js";

export type Color = [number, number, number];

export type TextAnchor = "start" | "middle" | "end";

export interface Surface {
  readonly width: number;
  readonly height: number;
  line(x1: number, y1: number, x2: number, y2: number, color: Color, width?: number): void;
  polyline(points: Array<[number, number]>, color: Color, width?: number): void;
  rect(x: number, y: number, w: number, h: number, fill: Color): void;
  strokeRect(x: number, y: number, w: number, h: number, color: Color): void;
  hatchRect(x: number, y: number, w: number, h: number, color: Color, spacing?: number): void;
  text(x: number, y: number, content: string, color: Color, anchor?: TextAnchor, size?: number): void;
  marker(x: number, y: number, color: Color, shape?: "plus" | "cross" | "dot"): void;
  finalize(): Buffer;
}

const FONT_SCALE = 2; // raster glyphs: 10 x 14 px
export const CHAR_W = (GLYPH_W + 1) * FONT_SCALE;
export const CHAR_H = GLYPH_H * FONT_SCALE;

function fmt(v: number): string {
  return (Math.round(v * 100) / 100).toString();
}

function hex(color: Color): string {
  return "#" + color.map((c) => c.toString(16).padStart(2, "0")).join("");
}

class SvgSurface implements Surface {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}">`,
      `<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>`
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, color: Color, width = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${hex(color)}" stroke-width="${width}"/>`
    );
  }

  polyline(points: Array<[number, number]>, color: Color, width = 1): void {
    if (points.length < 2) return;
    const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${path}" fill="none" stroke="${hex(color)}" stroke-width="${width}"/>`
    );
  }

  rect(x: number, y: number, w: number, h: number, fill: Color): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${hex(fill)}"/>`
    );
  }

  strokeRect(x: number, y: number, w: number, h: number, color: Color): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
        `fill="none" stroke="${hex(color)}" stroke-width="1"/>`
    );
  }

  hatchRect(x: number, y: number, w: number, h: number, color: Color, spacing = 6): void {
    for (let offset = -h; offset < w; offset += spacing) {
      const x1 = Math.max(x, x + offset);
      const y1 = offset < 0 ? y - offset : y;
      const x2 = Math.min(x + w, x + offset + h);
      const y2 = y + Math.min(h, w - offset);
      if (x2 > x1) this.line(x1, y1, x2, y2, color, 1);
    }
  }

  text(x: number, y: number, content: string, color: Color, anchor: TextAnchor = "start", size = 12): void {
    const escaped = content
      .replaceAll("&", "&amp;")
      .replaceAll("<", "&lt;")
      .replaceAll(">", "&gt;");
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-family="monospace" font-size="${size}" ` +
        `fill="${hex(color)}" text-anchor="${anchor === "start" ? "start" : anchor}">${escaped}</text>`
    );
  }

  marker(x: number, y: number, color: Color, shape: "plus" | "cross" | "dot" = "plus"): void {
    const r = 3;
    if (shape === "plus") {
      this.line(x - r, y, x + r, y, color, 1);
      this.line(x, y - r, x, y + r, color, 1);
    } else if (shape === "cross") {
      this.line(x - r, y - r, x + r, y + r, color, 1);
      this.line(x - r, y + r, x + r, y - r, color, 1);
    } else {
      this.rect(x - 1.5, y - 1.5, 3, 3, color);
    }
  }

  finalize(): Buffer {
    return Buffer.from(this.parts.join("\n") + "\n</svg>\n", "utf8");
  }
}

class RasterSurface implements Surface {
  private pixels: Uint8Array;

  constructor(readonly width: number, readonly height: number) {
    this.pixels = new Uint8Array(width * height * 4).fill(255);
  }

  private put(x: number, y: number, color: Color): void {
    x = Math.round(x);
    y = Math.round(y);
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = (y * this.width + x) * 4;
    this.pixels[i] = color[0];
    this.pixels[i + 1] = color[1];
    this.pixels[i + 2] = color[2];
    this.pixels[i + 3] = 255;
  }

  line(x1: number, y1: number, x2: number, y2: number, color: Color, width = 1): void {
    let x = Math.round(x1);
    let y = Math.round(y1);
    const ex = Math.round(x2);
    const ey = Math.round(y2);
    const dx = Math.abs(ex - x);
    const dy = -Math.abs(ey - y);
    const sx = x < ex ? 1 : -1;
    const sy = y < ey ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.put(x, y, color);
      if (width > 1) {
        // thicken perpendicular-ish: good enough for 2px axes
        this.put(x + (dx < -dy ? 1 : 0), y + (dx >= -dy ? 1 : 0), color);
      }
      if (x === ex && y === ey) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  }

  polyline(points: Array<[number, number]>, color: Color, width = 1): void {
    for (let i = 1; i < points.length; i++) {
      this.line(points[i - 1][0], points[i - 1][1], points[i][0], points[i][1], color, width);
    }
  }

  rect(x: number, y: number, w: number, h: number, fill: Color): void {
    const x0 = Math.max(0, Math.round(x));
    const y0 = Math.max(0, Math.round(y));
    const x1 = Math.min(this.width, Math.round(x + w));
    const y1 = Math.min(this.height, Math.round(y + h));
    for (let yy = y0; yy < y1; yy++) {
      for (let xx = x0; xx < x1; xx++) {
        this.put(xx, yy, fill);
      }
    }
  }

  strokeRect(x: number, y: number, w: number, h: number, color: Color): void {
    this.line(x, y, x + w, y, color);
    this.line(x + w, y, x + w, y + h, color);
    this.line(x + w, y + h, x, y + h, color);
    this.line(x, y + h, x, y, color);
  }

  hatchRect(x: number, y: number, w: number, h: number, color: Color, spacing = 6): void {
    for (let offset = -h; offset < w; offset += spacing) {
      // clip the 45-degree line to the rectangle
      let t0 = 0;
      let t1 = h;
      if (offset < 0) t0 = -offset;
      if (offset + h > w) t1 = w - offset;
      if (t1 > t0) {
        this.line(x + offset + t0, y + t0, x + offset + t1, y + t1, color);
      }
    }
  }

  text(x: number, y: number, content: string, color: Color, anchor: TextAnchor = "start", _size = 12): void {
    // y is the text baseline, matching the SVG backend closely enough
    const widthPx = content.length * CHAR_W;
    let startX = Math.round(x);
    if (anchor === "middle") startX -= Math.round(widthPx / 2);
    if (anchor === "end") startX -= widthPx;
    const topY = Math.round(y) - CHAR_H + FONT_SCALE;
    for (let c = 0; c < content.length; c++) {
      const rows = glyphRows(content[c]);
      for (let gy = 0; gy < GLYPH_H; gy++) {
        for (let gx = 0; gx < GLYPH_W; gx++) {
          if (rows[gy][gx] !== " ") {
            this.rect(
              startX + c * CHAR_W + gx * FONT_SCALE,
              topY + gy * FONT_SCALE,
              FONT_SCALE,
              FONT_SCALE,
              color
            );
          }
        }
      }
    }
  }

  marker(x: number, y: number, color: Color, shape: "plus" | "cross" | "dot" = "plus"): void {
    const r = 3;
    if (shape === "plus") {
      this.line(x - r, y, x + r, y, color);
      this.line(x, y - r, x, y + r, color);
    } else if (shape === "cross") {
      this.line(x - r, y - r, x + r, y + r, color);
      this.line(x - r, y + r, x + r, y - r, color);
    } else {
      this.rect(x - 1, y - 1, 3, 3, color);
    }
  }

  finalize(): Buffer {
    return encodePng(this.width, this.height, this.pixels);
  }
}

export function makeSurface(kind: "svg" | "png", width: number, height: number): Surface {
  return kind === "svg" ? new SvgSurface(width, height) : new RasterSurface(width, height);
}
