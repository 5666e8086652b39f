/**
 * Headless session recorder (node): drives the same puck simulator and
 * session client as the browser UI along a scripted pointer path, and
 * writes everything needed to replay the session offline:
 *
 *   updates.csv   update_index,dx_counts,dy_counts (the render input)
 *   audio.f32     streamed audio frames, concatenated, float32-LE
 *   frames.json   every telemetry frame as received
 *
 * Usage: node dist/record.js ws://127.0.0.1:8765 <preset> <seconds> <out-dir>
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { SESSION_RATE_HZ, SIM_STEP_S, UPDATE_INTERVAL_S } from "./constants.js";
import { PuckSimulator } from "./puck.js";
import { FrameMsg } from "./protocol.js";
import { SessionClient, SocketLike } from "./session.js";

export interface RecordedSession {
  updates: { dx: number; dy: number }[];
  frames: FrameMsg[];
  audio: Float32Array;
}

export interface RecordOptions {
  /** pointer speed in mm/s as a function of time */
  pointerSpeed: (tS: number) => number;
  updates: number;
  preset: number;
  frictionEnabled: boolean;
}

/** Run a scripted drag through a live session, lockstep per update. */
export async function recordSession(
  socket: SocketLike,
  options: RecordOptions,
): Promise<RecordedSession> {
  const client = new SessionClient(socket);
  await client.configure({
    preset: options.preset,
    friction_enabled: options.frictionEnabled,
    engine_rate: SESSION_RATE_HZ,
    signal: "pilot",
  });

  const puck = new PuckSimulator();
  let pointerMm = 0.0;
  let t = 0.0;
  const updates: { dx: number; dy: number }[] = [];
  const frames: FrameMsg[] = [];
  const audioChunks: Float32Array[] = [];

  for (let i = 0; i < options.updates; i++) {
    const dx = puck.update((substep) => {
      // pointer position at the substep start, then advance
      const at = pointerMm;
      pointerMm += options.pointerSpeed(t + substep * SIM_STEP_S) * SIM_STEP_S;
      return at;
    });
    t += UPDATE_INTERVAL_S;
    const { frame, audio } = await client.move(dx, 0);
    puck.frictionN = frame.friction_N;
    updates.push({ dx, dy: 0 });
    frames.push(frame);
    audioChunks.push(audio);
  }
  client.close();

  const total = audioChunks.reduce((n, c) => n + c.length, 0);
  const audio = new Float32Array(total);
  let at = 0;
  for (const chunk of audioChunks) {
    audio.set(chunk, at);
    at += chunk.length;
  }
  return { updates, frames, audio };
}

export function writeSession(outDir: string, recorded: RecordedSession): void {
  fs.mkdirSync(outDir, { recursive: true });
  const rows = recorded.updates.map((u, i) => `${i},${u.dx},${u.dy}`);
  fs.writeFileSync(
    path.join(outDir, "updates.csv"),
    "update_index,dx_counts,dy_counts\n" + rows.join("\n") + "\n",
  );
  fs.writeFileSync(path.join(outDir, "audio.f32"), Buffer.from(recorded.audio.buffer));
  fs.writeFileSync(path.join(outDir, "frames.json"), JSON.stringify(recorded.frames, null, 1));
}

async function main(): Promise<void> {
  const [url, presetArg, secondsArg, outDir] = process.argv.slice(2);
  if (!url || !outDir) {
    console.error("usage: record.js <ws-url> <preset> <seconds> <out-dir>");
    process.exit(2);
  }
  const { WebSocket } = await import("ws");
  const socket = new WebSocket(`${url}/session`) as unknown as SocketLike;
  await new Promise((resolve, reject) => {
    (socket as unknown as { once(ev: string, fn: (x?: unknown) => void): void }).once("open", resolve);
    (socket as unknown as { once(ev: string, fn: (x?: unknown) => void): void }).once("error", reject);
  });
  const updates = Math.round(Number(secondsArg ?? "1") / UPDATE_INTERVAL_S);
  const recorded = await recordSession(socket, {
    pointerSpeed: () => 250.0,
    updates,
    preset: Number(presetArg ?? "2"),
    frictionEnabled: true,
  });
  writeSession(outDir, recorded);
  console.log(`recorded ${recorded.updates.length} updates, ${recorded.audio.length} audio samples`);
}

const isDirectRun =
  typeof process !== "undefined" && process.argv[1]?.endsWith("record.js");
if (isDirectRun) {
  main().catch((err) => {
    console.error(err);
    process.exit(1);
  });
}
