/**
 * Scrolling strip chart of speed, audio envelope and friction, the
 * on-screen counterpart of the engine's trace recordings.
 */

export interface ChartSample {
  speedMmS: number;
  audioEnvelope: number;
  frictionN: number;
}

export class StripChart {
  private readonly ctx: CanvasRenderingContext2D;
  private readonly samples: ChartSample[] = [];
  private readonly maxSamples: number;

  constructor(private readonly canvas: HTMLCanvasElement, historySamples = 625) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("2d canvas context unavailable");
    this.ctx = ctx;
    this.maxSamples = historySamples; // 625 updates = 5 s of history
  }

  push(sample: ChartSample): void {
    this.samples.push(sample);
    if (this.samples.length > this.maxSamples) {
      this.samples.shift();
    }
  }

  draw(): void {
    const { width, height } = this.canvas;
    const ctx = this.ctx;
    ctx.fillStyle = "#111418";
    ctx.fillRect(0, 0, width, height);
    const laneH = height / 3;
    this.drawLane(0, laneH, "#6cf", "speed mm/s", (s) => s.speedMmS / 334.0 / 2 + 0.5);
    this.drawLane(1, laneH, "#fd6", "audio env", (s) => s.audioEnvelope);
    this.drawLane(2, laneH, "#f77", "friction N", (s) => (s.frictionN - 0.14) / (0.5 - 0.14));
  }

  private drawLane(
    lane: number,
    laneH: number,
    color: string,
    label: string,
    normalize: (s: ChartSample) => number,
  ): void {
    const ctx = this.ctx;
    const top = lane * laneH;
    ctx.strokeStyle = "#333";
    ctx.strokeRect(0, top + 0.5, this.canvas.width, laneH - 1);
    ctx.fillStyle = "#888";
    ctx.font = "10px monospace";
    ctx.fillText(label, 4, top + 12);
    ctx.strokeStyle = color;
    ctx.beginPath();
    const n = this.samples.length;
    for (let i = 0; i < n; i++) {
      const x = (i / this.maxSamples) * this.canvas.width;
      const v = Math.max(0, Math.min(1, normalize(this.samples[i])));
      const y = top + (1 - v) * (laneH - 4) + 2;
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    }
    ctx.stroke();
  }
}
