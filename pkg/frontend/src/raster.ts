/** Minimal software rasterizer: an RGBA pixel buffer with the handful of
 * primitives a line chart needs. Coordinates are integer pixels, origin
 * top-left. */

import { GLYPH_H, GLYPH_W, glyphFor, textWidth } from "./font.js";

export type Color = readonly [number, number, number, number];

export const WHITE: Color = [255, 255, 255, 255];
export const BLACK: Color = [0, 0, 0, 255];
export const GREY: Color = [200, 200, 200, 255];

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly pixels: Uint8Array; // RGBA rows, top to bottom

  constructor(width: number, height: number, background: Color = WHITE) {
    if (width < 1 || height < 1) throw new Error(`bad raster size ${width}x${height}`);
    this.width = width;
    this.height = height;
    this.pixels = new Uint8Array(width * height * 4);
    for (let i = 0; i < width * height; i++) {
      this.pixels.set(background, i * 4);
    }
  }

  set(x: number, y: number, color: Color): void {
    x = Math.round(x);
    y = Math.round(y);
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    this.pixels.set(color, (y * this.width + x) * 4);
  }

  get(x: number, y: number): Color {
    const off = (y * this.width + x) * 4;
    return [this.pixels[off], this.pixels[off + 1], this.pixels[off + 2], this.pixels[off + 3]];
  }

  fillRect(x: number, y: number, w: number, h: number, color: Color): void {
    for (let j = y; j < y + h; j++) {
      for (let i = x; i < x + w; i++) {
        this.set(i, j, color);
      }
    }
  }

  /** Bresenham segment, inclusive endpoints. */
  line(x0: number, y0: number, x1: number, y1: number, color: Color): void {
    let x = Math.round(x0);
    let y = Math.round(y0);
    const xe = Math.round(x1);
    const ye = Math.round(y1);
    const dx = Math.abs(xe - x);
    const dy = -Math.abs(ye - y);
    const sx = x < xe ? 1 : -1;
    const sy = y < ye ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.set(x, y, color);
      if (x === xe && y === ye) break;
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

  hline(x0: number, x1: number, y: number, color: Color): void {
    for (let x = Math.min(x0, x1); x <= Math.max(x0, x1); x++) this.set(x, y, color);
  }

  vline(x: number, y0: number, y1: number, color: Color): void {
    for (let y = Math.min(y0, y1); y <= Math.max(y0, y1); y++) this.set(x, y, color);
  }

  /** Filled square marker centred on (x, y). */
  marker(x: number, y: number, half: number, color: Color): void {
    this.fillRect(Math.round(x) - half, Math.round(y) - half, 2 * half + 1, 2 * half + 1, color);
  }

  text(x: number, y: number, s: string, color: Color, scale = 2): void {
    let cx = Math.round(x);
    const cy = Math.round(y);
    for (const ch of s) {
      const glyph = glyphFor(ch);
      for (let row = 0; row < GLYPH_H; row++) {
        for (let col = 0; col < GLYPH_W; col++) {
          if (glyph[row][col] === "1") {
            this.fillRect(cx + col * scale, cy + row * scale, scale, scale, color);
          }
        }
      }
      cx += (GLYPH_W + 1) * scale;
    }
  }

  textWidth(s: string, scale = 2): number {
    return textWidth(s, scale);
  }
}
