/**
 * Local puck dynamics: the on-screen analog of the magnet-bearing
 * object. A spring couples the pointer to the puck (a screen cannot
 * exert force on a hand; lag substitutes), and the puck itself obeys
 * the same Coulomb-with-stiction model as the engine's simulator,
 * driven by the server's latest friction command.
 */

import {
  COUNT_MM,
  FORCE_CEIL_N,
  PUCK_MASS_KG,
  SIM_STEP_S,
  SPRING_N_PER_MM,
  SUBSTEPS_PER_UPDATE,
} from "./constants.js";

const MM_PER_M = 1000.0;

export interface PuckConfig {
  massKg: number;
  springNPerMm: number;
  /**
   * Damper on the pointer-puck relative velocity. A bare spring plus
   * Coulomb friction has no dissipation in the pointer frame: a
   * constant-speed drag rings forever instead of settling into the
   * steady glide the interaction is built around. 0.005 N s/mm puts
   * the coupling near critical damping (damping ratio ~0.8).
   */
  damperNsPerMm: number;
  forceCapN: number;
  stictionRatio: number;
}

export const DEFAULT_PUCK_CONFIG: PuckConfig = {
  massKg: PUCK_MASS_KG,
  springNPerMm: SPRING_N_PER_MM,
  damperNsPerMm: 0.005,
  forceCapN: FORCE_CEIL_N,
  stictionRatio: 1.0,
};

/** Carry-forward quantizer onto the 0.02 mm count grid, ties away from zero. */
export class DisplacementQuantizer {
  residualMm = 0.0;

  push(rawDxMm: number): number {
    const x = (this.residualMm + rawDxMm) / COUNT_MM;
    const counts = x >= 0 ? Math.floor(x + 0.5) : Math.ceil(x - 0.5);
    this.residualMm = this.residualMm + rawDxMm - counts * COUNT_MM;
    return counts;
  }
}

export class PuckSimulator {
  positionMm = 0.0;
  velocityMmS = 0.0;
  /** Latest kinetic friction command from the server, Newtons. */
  frictionN = 0.14;
  private readonly cfg: PuckConfig;
  private readonly quantizer = new DisplacementQuantizer();
  private lastPointerMm: number | null = null;

  constructor(cfg: PuckConfig = DEFAULT_PUCK_CONFIG) {
    this.cfg = cfg;
  }

  reset(positionMm = 0.0): void {
    this.positionMm = positionMm;
    this.velocityMmS = 0.0;
    this.quantizer.residualMm = 0.0;
    this.lastPointerMm = null;
  }

  /** Spring force toward the pointer, capped at the device maximum. */
  appliedForceN(pointerMm: number, pointerVelocityMmS = 0.0): number {
    const spring = this.cfg.springNPerMm * (pointerMm - this.positionMm);
    const damper = this.cfg.damperNsPerMm * (pointerVelocityMmS - this.velocityMmS);
    const raw = spring + damper;
    return Math.max(-this.cfg.forceCapN, Math.min(this.cfg.forceCapN, raw));
  }

  lagMm(pointerMm: number): number {
    return pointerMm - this.positionMm;
  }

  /** One 1 kHz integration step; same friction model as the engine simulator. */
  step(pointerMm: number): void {
    const pointerV =
      this.lastPointerMm === null ? 0.0 : (pointerMm - this.lastPointerMm) / SIM_STEP_S;
    this.lastPointerMm = pointerMm;
    const fApp = this.appliedForceN(pointerMm, pointerV);
    const v = this.velocityMmS;
    if (v === 0.0 && Math.abs(fApp) <= this.cfg.stictionRatio * this.frictionN) {
      return;
    }
    const effSign = v !== 0.0 ? Math.sign(v) : Math.sign(fApp);
    const accel = ((fApp - effSign * this.frictionN) / this.cfg.massKg) * MM_PER_M;
    let vNext = v + accel * SIM_STEP_S;
    if (v !== 0.0 && vNext !== 0.0 && Math.sign(vNext) !== Math.sign(v)) {
      vNext = 0.0;
    }
    this.velocityMmS = vNext;
    this.positionMm += vNext * SIM_STEP_S;
  }

  /**
   * Advance one 8 ms update interval (8 substeps at 1 kHz) against a
   * pointer position sampled per substep, and quantize the net travel
   * to counts with sub-count carry.
   */
  update(pointerMmPerStep: (substep: number) => number): number {
    const start = this.positionMm;
    for (let i = 0; i < SUBSTEPS_PER_UPDATE; i++) {
      this.step(pointerMmPerStep(i));
    }
    return this.quantizer.push(this.positionMm - start);
  }
}
