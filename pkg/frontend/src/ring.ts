/**
 * Playback sample ring for gapless audio: the network side pushes
 * whole frames, the audio callback pulls fixed-size quanta. Underruns
 * are counted, never hidden; the UI shows the counter.
 */

export class PlaybackRing {
  private readonly data: Float32Array;
  private readStart = 0;
  private length = 0;
  underruns = 0;
  overflows = 0;

  constructor(capacitySamples: number) {
    this.data = new Float32Array(capacitySamples);
  }

  get available(): number {
    return this.length;
  }

  get capacity(): number {
    return this.data.length;
  }

  push(samples: Float32Array): void {
    if (samples.length > this.data.length - this.length) {
      // drop the oldest to make room; count it, an overflow is a bug
      // in pacing, not something to mask silently
      const needed = samples.length - (this.data.length - this.length);
      this.readStart = (this.readStart + needed) % this.data.length;
      this.length -= needed;
      this.overflows += 1;
    }
    let writeAt = (this.readStart + this.length) % this.data.length;
    for (let i = 0; i < samples.length; i++) {
      this.data[writeAt] = samples[i];
      writeAt = (writeAt + 1) % this.data.length;
    }
    this.length += samples.length;
  }

  /**
   * Fill `out` from the ring; zero-fills and counts one underrun if
   * there are not enough samples.
   */
  pull(out: Float32Array): void {
    const take = Math.min(out.length, this.length);
    for (let i = 0; i < take; i++) {
      out[i] = this.data[this.readStart];
      this.readStart = (this.readStart + 1) % this.data.length;
    }
    this.length -= take;
    if (take < out.length) {
      out.fill(0, take);
      this.underruns += 1;
    }
  }
}
