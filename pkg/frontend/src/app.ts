/**
 * Explorer: drag a virtual puck across a mapped signal fragment.
 *
 * Pointer movement drives a spring-coupled puck whose local dynamics
 * use the engine's own constants and the latest friction command from
 * the server; the puck's quantized displacement streams to the session
 * endpoint at 125 Hz, and the returned audio plays back gaplessly
 * while friction shows up three ways: puck lag, a force meter, and a
 * scrolling strip chart.
 */

import { StripChart } from "./chart.js";
import {
  SESSION_RATE_HZ,
  SIM_STEP_S,
  UPDATE_INTERVAL_S,
} from "./constants.js";
import { PuckSimulator } from "./puck.js";
import { ReadyMsg } from "./protocol.js";
import { SessionClient } from "./session.js";

const PX_PER_MM_BY_PRESET: Record<number, number> = { 1: 80, 2: 12, 3: 2 };

interface Elements {
  surface: HTMLCanvasElement;
  chart: HTMLCanvasElement;
  meterFill: HTMLElement;
  meterValue: HTMLElement;
  lagValue: HTMLElement;
  scaleValue: HTMLElement;
  underrunValue: HTMLElement;
  statusValue: HTMLElement;
  conditionValue: HTMLElement;
  presetSelect: HTMLSelectElement;
  frictionToggle: HTMLInputElement;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

class Explorer {
  private readonly ui: Elements;
  private readonly puck = new PuckSimulator();
  private readonly chart: StripChart;
  private client: SessionClient | null = null;
  private ready: ReadyMsg | null = null;
  private audioCtx: AudioContext | null = null;
  private workletPort: MessagePort | null = null;
  private pointerMm: number | null = null;
  private lastSentPointerMm: number | null = null;
  private pxPerMm = 12;
  private cameraMm = 0;
  private accumulatorS = 0;
  private lastTickMs: number | null = null;
  private inFlight = false;
  private lastEnvelope = 0;
  private lastFrictionN = 0.14;
  private lastSpeed = 0;

  constructor(ui: Elements) {
    this.ui = ui;
    this.chart = new StripChart(ui.chart);
    this.bindPointer();
    this.bindControls();
    requestAnimationFrame((t) => this.tick(t));
  }

  private wsUrl(): string {
    const params = new URLSearchParams(location.search);
    const host = params.get("host") ?? location.hostname;
    const port = params.get("port") ?? location.port;
    return `ws://${host}:${port}/session`;
  }

  async connect(): Promise<void> {
    this.ui.statusValue.textContent = "connecting";
    const socket = new WebSocket(this.wsUrl());
    await new Promise<void>((resolve, reject) => {
      socket.addEventListener("open", () => resolve());
      socket.addEventListener("error", () => reject(new Error("websocket error")));
    });
    socket.addEventListener("close", () => {
      // connection loss: freeze the puck where it is and offer reconnect
      this.client = null;
      this.ready = null;
      this.ui.statusValue.textContent = "disconnected - click surface to reconnect";
    });
    this.client = new SessionClient(socket);
    await this.applyCondition();
    this.ui.statusValue.textContent = "connected";
  }

  private async applyCondition(): Promise<void> {
    if (!this.client) return;
    const preset = Number(this.ui.presetSelect.value);
    const frictionEnabled = this.ui.frictionToggle.checked;
    this.ready = await this.client.configure({
      preset,
      friction_enabled: frictionEnabled,
      engine_rate: SESSION_RATE_HZ,
      signal: "pilot",
    });
    this.puck.reset(0);
    this.puck.frictionN = 0.14;
    this.pointerMm = null;
    this.lastSentPointerMm = null;
    this.cameraMm = 0;
    this.pxPerMm = PX_PER_MM_BY_PRESET[preset] ?? 12;
    this.ui.scaleValue.textContent = `${this.pxPerMm} px/mm`;
    this.ui.conditionValue.textContent = `mapping ${preset}, friction ${frictionEnabled ? "on" : "off"}`;
    await this.initAudio();
  }

  private async initAudio(): Promise<void> {
    if (this.audioCtx) return;
    const ctx = new AudioContext({ sampleRate: SESSION_RATE_HZ });
    await ctx.audioWorklet.addModule("worklet.js");
    const node = new AudioWorkletNode(ctx, "ring-player", {
      numberOfInputs: 0,
      outputChannelCount: [1],
    });
    node.connect(ctx.destination);
    node.port.onmessage = (event) => {
      const { underruns, overflows } = event.data as { underruns: number; overflows: number };
      this.ui.underrunValue.textContent = `${underruns} underruns / ${overflows} overflows`;
    };
    this.audioCtx = ctx;
    this.workletPort = node.port;
  }

  private bindControls(): void {
    this.ui.presetSelect.addEventListener("change", () => void this.applyCondition());
    this.ui.frictionToggle.addEventListener("change", () => void this.applyCondition());
    const params = new URLSearchParams(location.search);
    const preset = params.get("preset");
    if (preset) this.ui.presetSelect.value = preset;
  }

  private bindPointer(): void {
    const surface = this.ui.surface;
    surface.addEventListener("pointerdown", (e) => {
      surface.setPointerCapture(e.pointerId);
      if (!this.client) {
        void this.connect();
        return;
      }
      void this.audioCtx?.resume();
      this.pointerMm = this.pxToMm(e.offsetX);
    });
    surface.addEventListener("pointermove", (e) => {
      if (this.pointerMm === null || !surface.hasPointerCapture(e.pointerId)) return;
      this.pointerMm = this.pxToMm(e.offsetX);
    });
    surface.addEventListener("lostpointercapture", () => {
      this.pointerMm = null;
    });
  }

  private pxToMm(px: number): number {
    return this.cameraMm + px / this.pxPerMm;
  }

  private mmToPx(mm: number): number {
    return (mm - this.cameraMm) * this.pxPerMm;
  }

  private tick(nowMs: number): void {
    requestAnimationFrame((t) => this.tick(t));
    if (this.lastTickMs !== null) {
      this.accumulatorS += Math.min(0.1, (nowMs - this.lastTickMs) / 1000);
    }
    this.lastTickMs = nowMs;
    while (this.accumulatorS >= UPDATE_INTERVAL_S) {
      this.accumulatorS -= UPDATE_INTERVAL_S;
      this.updateOnce();
    }
    this.render();
  }

  /** One 8 ms step: integrate locally, stream the counts, play audio. */
  private updateOnce(): void {
    if (!this.client || !this.ready || this.inFlight) return;
    const pointer = this.pointerMm ?? this.puck.positionMm;
    // interpolate the pointer across the 8 ms frame so the damper sees
    // a smooth velocity instead of one spike per frame
    const from = this.lastSentPointerMm ?? pointer;
    this.lastSentPointerMm = pointer;
    const dx = this.puck.update((substep) => from + ((pointer - from) * substep) / 8);
    this.inFlight = true;
    this.client
      .move(dx, 0)
      .then(({ frame, audio }) => {
        this.inFlight = false;
        this.puck.frictionN = frame.friction_N;
        this.lastFrictionN = frame.friction_N;
        this.lastSpeed = frame.speed_mm_s;
        let sumAbs = 0;
        for (let i = 0; i < audio.length; i++) sumAbs += Math.abs(audio[i]);
        this.lastEnvelope = sumAbs / audio.length;
        this.workletPort?.postMessage(audio, [audio.buffer]);
        this.chart.push({
          speedMmS: this.lastSpeed,
          audioEnvelope: this.lastEnvelope,
          frictionN: this.lastFrictionN,
        });
      })
      .catch(() => {
        this.inFlight = false;
      });
  }

  private render(): void {
    const surface = this.ui.surface;
    const ctx = surface.getContext("2d");
    if (!ctx) return;
    ctx.fillStyle = "#1a1d21";
    ctx.fillRect(0, 0, surface.width, surface.height);

    // keep the puck in view; wide mappings scroll
    const puckPx = (this.puck.positionMm - this.cameraMm) * this.pxPerMm;
    if (puckPx < 60) this.cameraMm = this.puck.positionMm - 60 / this.pxPerMm;
    if (puckPx > surface.width - 60) {
      this.cameraMm = this.puck.positionMm - (surface.width - 60) / this.pxPerMm;
    }

    // fragment extent
    if (this.ready) {
      const x0 = this.mmToPx(0);
      const x1 = this.mmToPx(this.ready.fragment_width_mm);
      ctx.fillStyle = "#23303b";
      ctx.fillRect(x0, 0, x1 - x0, surface.height);
      ctx.strokeStyle = "#3d6";
      ctx.strokeRect(x0 + 0.5, 0.5, x1 - x0 - 1, surface.height - 1);
    }

    // pointer ghost and spring
    const midY = surface.height / 2;
    if (this.pointerMm !== null) {
      const px = this.mmToPx(this.pointerMm);
      ctx.strokeStyle = "#999";
      ctx.beginPath();
      ctx.moveTo(px, midY);
      ctx.lineTo(this.mmToPx(this.puck.positionMm), midY);
      ctx.stroke();
      ctx.fillStyle = "#999";
      ctx.beginPath();
      ctx.arc(px, midY, 4, 0, Math.PI * 2);
      ctx.fill();
    }

    // the puck
    ctx.fillStyle = "#e8b84a";
    ctx.beginPath();
    ctx.arc(this.mmToPx(this.puck.positionMm), midY, 12, 0, Math.PI * 2);
    ctx.fill();

    // meter + labels
    const frac = (this.lastFrictionN - 0.14) / (1.4 - 0.14);
    this.ui.meterFill.style.width = `${Math.min(100, Math.max(0, frac * 100))}%`;
    this.ui.meterValue.textContent = `${this.lastFrictionN.toFixed(3)} N`;
    const lag = this.pointerMm === null ? 0 : this.puck.lagMm(this.pointerMm);
    this.ui.lagValue.textContent = `${lag.toFixed(2)} mm`;
    this.chart.draw();
  }
}

window.addEventListener("DOMContentLoaded", () => {
  const explorer = new Explorer({
    surface: el<HTMLCanvasElement>("surface"),
    chart: el<HTMLCanvasElement>("chart"),
    meterFill: el("meter-fill"),
    meterValue: el("meter-value"),
    lagValue: el("lag-value"),
    scaleValue: el("scale-value"),
    underrunValue: el("underrun-value"),
    statusValue: el("status-value"),
    conditionValue: el("condition-value"),
    presetSelect: el<HTMLSelectElement>("preset-select"),
    frictionToggle: el<HTMLInputElement>("friction-toggle"),
  });
  void explorer.connect().catch(() => {
    el("status-value").textContent = "server unreachable - click surface to retry";
  });
});
