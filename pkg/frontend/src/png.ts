/**
 * Raster renderer: stamps the scene onto an RGBA buffer and encodes a PNG
 * (8-bit RGBA, filter 0, single zlib-deflated IDAT). Text uses the 5x7
 * bitmap font; output bytes are deterministic for a given scene.
 */

import { deflateSync } from "node:zlib";
import font from "oled-font-5x7";
import { Scene, SceneItem, ClipRect } from "./scene.js";

class Raster {
  readonly w: number;
  readonly h: number;
  readonly data: Uint8ClampedArray;

  constructor(w: number, h: number) {
    this.w = w;
    this.h = h;
    this.data = new Uint8ClampedArray(w * h * 4).fill(255);
  }

  blend(x: number, y: number, rgb: [number, number, number], alpha: number): void {
    if (x < 0 || y < 0 || x >= this.w || y >= this.h || alpha <= 0) return;
    const i = (y * this.w + x) * 4;
    const a = Math.min(alpha, 1);
    this.data[i] = this.data[i] * (1 - a) + rgb[0] * a;
    this.data[i + 1] = this.data[i + 1] * (1 - a) + rgb[1] * a;
    this.data[i + 2] = this.data[i + 2] * (1 - a) + rgb[2] * a;
  }
}

function parseColor(c: string): [number, number, number] {
  if (c === "none") return [255, 255, 255];
  let hex = c.replace("#", "");
  if (hex.length === 3) hex = hex.split("").map((d) => d + d).join("");
  const v = parseInt(hex, 16);
  return [(v >> 16) & 255, (v >> 8) & 255, v & 255];
}

type Clip = ClipRect | undefined;

function inClip(x: number, y: number, clip: Clip, k: number): boolean {
  if (!clip) return true;
  return (
    x >= clip.x * k - 0.5 && x <= (clip.x + clip.w) * k + 0.5 &&
    y >= clip.y * k - 0.5 && y <= (clip.y + clip.h) * k + 0.5
  );
}

function disc(r: Raster, cx: number, cy: number, rad: number, rgb: [number, number, number], clip: Clip, k: number): void {
  const lo = Math.floor(-rad - 1);
  const hi = Math.ceil(rad + 1);
  for (let dy = lo; dy <= hi; dy++) {
    for (let dx = lo; dx <= hi; dx++) {
      const x = Math.round(cx) + dx;
      const y = Math.round(cy) + dy;
      if (!inClip(x, y, clip, k)) continue;
      const d = Math.hypot(x - cx, y - cy);
      r.blend(x, y, rgb, rad + 0.5 - d);
    }
  }
}

function stroke(
  r: Raster,
  x1: number, y1: number, x2: number, y2: number,
  width: number, rgb: [number, number, number], dash: string | undefined, clip: Clip, k: number
): void {
  const len = Math.hypot(x2 - x1, y2 - y1);
  const rad = Math.max(0.55, width / 2);
  const steps = Math.max(1, Math.ceil(len / 0.45));
  let pattern: number[] | null = null;
  if (dash) {
    pattern = dash.split(",").map((d) => Number(d) * k);
    if (pattern.some((p) => !(p > 0))) pattern = null;
  }
  const period = pattern ? pattern.reduce((a, b) => a + b, 0) : 0;
  for (let i = 0; i <= steps; i++) {
    const t = i / steps;
    if (pattern) {
      let phase = (t * len) % period;
      let on = true;
      for (const seg of pattern) {
        if (phase < seg) break;
        phase -= seg;
        on = !on;
      }
      if (!on) continue;
    }
    disc(r, x1 + (x2 - x1) * t, y1 + (y2 - y1) * t, rad, rgb, clip, k);
  }
}

const GLYPH_W = 5;
const GLYPH_H = 7;

function glyph(ch: string): number[] | null {
  const idx = font.lookup.indexOf(ch);
  if (idx < 0) return null;
  return font.fontData.slice(idx * GLYPH_W, (idx + 1) * GLYPH_W);
}

function drawText(r: Raster, item: Extract<SceneItem, { kind: "text" }>, k: number): void {
  const rgb = parseColor(item.color);
  const scale = Math.max(1, Math.round((item.size * k) / 8));
  const advance = (GLYPH_W + 1) * scale;
  const textW = item.text.length * advance - scale;
  // text-local origin: baseline start; glyph rows sit above the baseline
  let startU = 0;
  if (item.anchor === "middle") startU = -textW / 2;
  else if (item.anchor === "end") startU = -textW;
  const place = (u: number, v: number): [number, number] => {
    // rotation about the anchor point, matching the svg transform
    if (item.rotate === -90) return [item.x * k + v, item.y * k - u];
    if (item.rotate === 90) return [item.x * k - v, item.y * k + u];
    return [item.x * k + u, item.y * k + v];
  };
  for (let ci = 0; ci < item.text.length; ci++) {
    const cols = glyph(item.text[ci]) ?? glyph("?");
    if (!cols) continue;
    for (let gx = 0; gx < GLYPH_W; gx++) {
      for (let gy = 0; gy < GLYPH_H; gy++) {
        if (!((cols[gx] >> gy) & 1)) continue;
        for (let sy = 0; sy < scale; sy++) {
          for (let sx = 0; sx < scale; sx++) {
            const u = startU + ci * advance + gx * scale + sx;
            const v = (gy - GLYPH_H + 1) * scale + sy;
            const [px, py] = place(u, v);
            r.blend(Math.round(px), Math.round(py), rgb, 1);
          }
        }
      }
    }
  }
}

function drawItem(r: Raster, item: SceneItem, k: number): void {
  switch (item.kind) {
    case "line":
      stroke(r, item.x1 * k, item.y1 * k, item.x2 * k, item.y2 * k, item.width * k, parseColor(item.color), item.dash, undefined, k);
      break;
    case "polyline":
      for (let i = 1; i < item.pts.length; i++) {
        stroke(
          r,
          item.pts[i - 1][0] * k, item.pts[i - 1][1] * k,
          item.pts[i][0] * k, item.pts[i][1] * k,
          item.width * k, parseColor(item.color), item.dash, item.clip, k
        );
      }
      break;
    case "rect": {
      if (item.fill === "none") break;
      const rgb = parseColor(item.fill);
      const a = item.opacity ?? 1;
      for (let y = Math.round(item.y * k); y < Math.round((item.y + item.h) * k); y++) {
        for (let x = Math.round(item.x * k); x < Math.round((item.x + item.w) * k); x++) {
          r.blend(x, y, rgb, a);
        }
      }
      break;
    }
    case "circle":
      disc(r, item.cx * k, item.cy * k, Math.max(1, item.r * k), parseColor(item.fill), item.clip, k);
      break;
    case "text":
      drawText(r, item, k);
      break;
  }
}

// --- PNG encoding ---

const CRC_TABLE = (() => {
  const t = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let i = 0; i < 8; i++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    t[n] = c >>> 0;
  }
  return t;
})();

function crc32(buf: Buffer): number {
  let c = 0xffffffff;
  for (const b of buf) c = CRC_TABLE[(c ^ b) & 255] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Buffer): Buffer {
  const head = Buffer.alloc(4);
  head.writeUInt32BE(data.length);
  const body = Buffer.concat([Buffer.from(type, "ascii"), data]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body));
  return Buffer.concat([head, body, crc]);
}

function encodePng(r: Raster): Buffer {
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(r.w, 0);
  ihdr.writeUInt32BE(r.h, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // RGBA
  const raw = Buffer.alloc(r.h * (r.w * 4 + 1));
  for (let y = 0; y < r.h; y++) {
    const at = y * (r.w * 4 + 1);
    raw[at] = 0; // filter: none
    Buffer.from(r.data.buffer, y * r.w * 4, r.w * 4).copy(raw, at + 1);
  }
  return Buffer.concat([
    Buffer.from([137, 80, 78, 71, 13, 10, 26, 10]),
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(raw, { level: 9 })),
    chunk("IEND", Buffer.alloc(0)),
  ]);
}

/** Render at an integer oversampling factor (default 2) for legible text. */
export function renderPng(scene: Scene, scale = 2): Buffer {
  const r = new Raster(Math.round(scene.width * scale), Math.round(scene.height * scale));
  for (const item of scene.items) drawItem(r, item, scale);
  return encodePng(r);
}
