/**
 * Wire protocol: JSON text messages plus a binary audio frame type.
 *
 * Audio frame layout: tag byte 0x01, uint32-LE sample count, then that
 * many float32-LE samples.
 */

export const AUDIO_FRAME_TAG = 0x01;

export interface ConfigMsg {
  type: "config";
  preset?: number;
  samples_per_mm?: number;
  friction_enabled: boolean;
  engine_rate: number;
  signal: string;
}

export interface MoveMsg {
  type: "move";
  seq: number;
  dx_counts: number;
  dy_counts: number;
}

export interface FrameMsg {
  type: "frame";
  seq: number;
  t_s: number;
  position_mm: number;
  speed_mm_s: number;
  friction_N: number;
}

export interface ReadyMsg {
  type: "ready";
  engine_rate: number;
  samples_per_update: number;
  samples_per_mm: number;
  fragment_width_mm: number;
  friction_enabled: boolean;
  signal_length: number;
}

export interface ErrorMsg {
  type: "error";
  reason: string;
  detail: string;
  fatal: boolean;
}

export type ServerMsg = FrameMsg | ReadyMsg | ErrorMsg;

export function parseServerMsg(text: string): ServerMsg {
  const raw = JSON.parse(text);
  if (raw.type === "frame" || raw.type === "ready" || raw.type === "error") {
    return raw as ServerMsg;
  }
  throw new Error(`unknown server message type ${raw.type}`);
}

export function decodeAudioFrame(payload: ArrayBuffer): Float32Array {
  const view = new DataView(payload);
  if (payload.byteLength < 5 || view.getUint8(0) !== AUDIO_FRAME_TAG) {
    throw new Error("not an audio frame");
  }
  const count = view.getUint32(1, true);
  if (payload.byteLength !== 5 + count * 4) {
    throw new Error(`audio frame count ${count} does not match payload size ${payload.byteLength}`);
  }
  // copy out of the 5-byte-offset view so the result is aligned
  const samples = new Float32Array(count);
  for (let i = 0; i < count; i++) {
    samples[i] = view.getFloat32(5 + i * 4, true);
  }
  return samples;
}

export function encodeAudioFrame(samples: Float32Array): ArrayBuffer {
  const out = new ArrayBuffer(5 + samples.length * 4);
  const view = new DataView(out);
  view.setUint8(0, AUDIO_FRAME_TAG);
  view.setUint32(1, samples.length, true);
  for (let i = 0; i < samples.length; i++) {
    view.setFloat32(5 + i * 4, samples[i], true);
  }
  return out;
}
