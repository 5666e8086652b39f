/**
 * Replay honesty, end to end: a scripted explorer session records its
 * update log while streaming from a live server; replaying that log
 * through the offline renderer must reproduce the streamed audio
 * bit-exactly and the per-update friction commands exactly (at the
 * float32 width the sidecar file carries).
 */

import { spawn, spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { WebSocket } from "ws";

import { SAMPLES_PER_UPDATE } from "../src/constants";
import { RecordedSession, recordSession, writeSession } from "../src/record";
import { SocketLike } from "../src/session";

const PYTHON = process.env.PYTHON ?? "python3";
const PORT = 8900 + (process.pid % 97);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ReturnType<typeof spawn> | null = null;
let workDir: string;

function run(args: string[]): void {
  const result = spawnSync(PYTHON, ["-m", "fricative", ...args], { encoding: "utf-8" });
  if (result.status !== 0) {
    throw new Error(`fricative ${args[0]} failed: ${result.stderr}`);
  }
}

async function serverUp(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const res = await fetch(`${BASE}/presets`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error("server did not come up");
}

/** Minimal RIFF walk to the data chunk of the rendered WAV. */
function wavDataBytes(file: string): Buffer {
  const buf = fs.readFileSync(file);
  expect(buf.subarray(0, 4).toString("ascii")).toBe("RIFF");
  expect(buf.subarray(8, 12).toString("ascii")).toBe("WAVE");
  let at = 12;
  while (at + 8 <= buf.length) {
    const id = buf.subarray(at, at + 4).toString("ascii");
    const size = buf.readUInt32LE(at + 4);
    if (id === "data") {
      return buf.subarray(at + 8, at + 8 + size);
    }
    at += 8 + size + (size % 2);
  }
  throw new Error("no data chunk");
}

beforeAll(async () => {
  workDir = fs.mkdtempSync(path.join(os.tmpdir(), "fricative-replay-"));
  run(["pilot", "--out-dir", path.join(workDir, "pilot")]);
  server = spawn(PYTHON, ["-m", "fricative", "serve", "--port", String(PORT)], {
    stdio: "ignore",
  });
  await serverUp();
}, 30000);

afterAll(() => {
  server?.kill();
  fs.rmSync(workDir, { recursive: true, force: true });
});

describe("explorer session replay through the offline renderer", () => {
  let recorded: RecordedSession;

  it("records a scripted drag from the live service", async () => {
    const socket = new WebSocket(`ws://127.0.0.1:${PORT}/session`) as unknown as SocketLike;
    await new Promise<void>((resolve, reject) => {
      (socket as unknown as WebSocket).once("open", () => resolve());
      (socket as unknown as WebSocket).once("error", (err) => reject(err));
    });
    recorded = await recordSession(socket, {
      pointerSpeed: (t) => (t < 0.4 ? 250.0 : 120.0),
      updates: 125,
      preset: 2,
      frictionEnabled: true,
    });
    writeSession(path.join(workDir, "session"), recorded);
    expect(recorded.updates.length).toBe(125);
    expect(recorded.audio.length).toBe(125 * SAMPLES_PER_UPDATE);
    // the drag crossed into the fragment, so friction must have risen
    const peak = Math.max(...recorded.frames.map((f) => f.friction_N));
    expect(peak).toBeGreaterThan(0.3);
  }, 30000);

  it("reproduces the streamed audio bit-exactly", () => {
    run([
      "render",
      "--signal", path.join(workDir, "pilot", "pilot_signal.wav"),
      "--trajectory", path.join(workDir, "session", "updates.csv"),
      "--mapping", "2",
      "--rate", "48000",
      "--out", path.join(workDir, "replay"),
    ]);
    const rendered = wavDataBytes(path.join(workDir, "replay.audio.wav"));
    const streamed = fs.readFileSync(path.join(workDir, "session", "audio.f32"));
    expect(rendered.length).toBe(streamed.length);
    expect(rendered.equals(streamed)).toBe(true);
  });

  it("reproduces the streamed friction commands exactly", () => {
    const f32 = fs.readFileSync(path.join(workDir, "replay.friction.f32"));
    const rendered = new Float32Array(f32.buffer, f32.byteOffset, f32.byteLength / 4);
    recorded.frames.forEach((frame, i) => {
      const atFrameEnd = rendered[(i + 1) * SAMPLES_PER_UPDATE - 1];
      expect(Math.fround(frame.friction_N)).toBe(atFrameEnd);
    });
  });
});
