import { describe, expect, it } from "vitest";

import { PlaybackRing } from "../src/ring";

function frame(start: number, length: number): Float32Array {
  const out = new Float32Array(length);
  for (let i = 0; i < length; i++) out[i] = start + i;
  return out;
}

describe("playback ring", () => {
  it("plays pushed frames back gaplessly across uneven pull sizes", () => {
    const ring = new PlaybackRing(4096);
    ring.push(frame(0, 384));
    ring.push(frame(384, 384));
    ring.push(frame(768, 384));
    const got: number[] = [];
    const quantum = new Float32Array(128);
    for (let i = 0; i < 9; i++) {
      ring.pull(quantum);
      got.push(...quantum);
    }
    expect(got).toEqual(Array.from({ length: 1152 }, (_, i) => i));
    expect(ring.underruns).toBe(0);
  });

  it("counts underruns and zero-fills instead of glitch-hiding", () => {
    const ring = new PlaybackRing(1024);
    ring.push(frame(1, 100));
    const quantum = new Float32Array(128);
    ring.pull(quantum);
    expect(ring.underruns).toBe(1);
    expect(quantum[99]).toBe(100);
    expect(quantum[100]).toBe(0);
    expect(quantum[127]).toBe(0);
  });

  it("drops oldest on overflow and counts it", () => {
    const ring = new PlaybackRing(256);
    ring.push(frame(0, 200));
    ring.push(frame(200, 200)); // 144 oldest samples must fall out
    expect(ring.overflows).toBe(1);
    expect(ring.available).toBe(256);
    const out = new Float32Array(256);
    ring.pull(out);
    expect(out[0]).toBe(144);
    expect(out[255]).toBe(399);
  });

  it("reports buffered amount", () => {
    const ring = new PlaybackRing(512);
    expect(ring.available).toBe(0);
    ring.push(frame(0, 384));
    expect(ring.available).toBe(384);
    expect(ring.capacity).toBe(512);
  });
});
