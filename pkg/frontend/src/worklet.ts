/**
 * AudioWorklet processor: consumes the playback ring on the audio
 * callback path. The network side posts Float32Array frames through
 * the port (producer); this processor pulls render quanta (consumer);
 * the ring itself lives on the audio thread, so no locking is needed.
 * Underrun totals are posted back once a second for the visible counter.
 */

import { PlaybackRing } from "./ring.js";

declare const sampleRate: number;
declare function registerProcessor(name: string, ctor: unknown): void;
declare class AudioWorkletProcessor {
  readonly port: MessagePort;
}

class RingPlayer extends AudioWorkletProcessor {
  private readonly ring = new PlaybackRing(48000); // 1 s capacity
  private framesSinceReport = 0;
  private started = false;

  constructor() {
    super();
    this.port.onmessage = (event: MessageEvent) => {
      this.ring.push(event.data as Float32Array);
    };
  }

  process(_inputs: Float32Array[][], outputs: Float32Array[][]): boolean {
    const out = outputs[0][0];
    // hold off until a small lead accumulates, then never stop pulling
    if (!this.started && this.ring.available < out.length * 4) {
      out.fill(0);
      return true;
    }
    this.started = true;
    const underrunsBefore = this.ring.underruns;
    this.ring.pull(out);
    this.framesSinceReport += out.length;
    if (this.framesSinceReport >= sampleRate) {
      this.framesSinceReport = 0;
      this.port.postMessage({
        underruns: this.ring.underruns,
        overflows: this.ring.overflows,
        buffered: this.ring.available,
      });
    }
    if (this.ring.underruns > underrunsBefore && this.ring.available === 0) {
      this.started = false; // rebuffer after a dry spell
    }
    return true;
  }
}

registerProcessor("ring-player", RingPlayer);
