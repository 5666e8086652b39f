/**
 * Physical constants shared with the engine. The local puck integrator
 * must use the same numbers as the server-side simulator so that what
 * the hand feels on screen is what the pipeline renders.
 */

export const COUNT_MM = 0.02; // displacement per input count
export const UPDATE_RATE_HZ = 125;
export const UPDATE_INTERVAL_S = 0.008;
export const SIM_STEP_S = 0.001; // local integration step (1 kHz)
export const SUBSTEPS_PER_UPDATE = 8;

export const PUCK_MASS_KG = 0.1;
export const FORCE_FLOOR_N = 0.14; // device minimum kinetic friction
export const FORCE_CEIL_N = 1.4; // device maximum force

/** Pointer-coupling spring: 10 mm of lead produces 1.0 N. */
export const SPRING_N_PER_MM = 0.1;

export const SESSION_RATE_HZ = 48000; // browser sessions run at 48 kHz
export const SAMPLES_PER_UPDATE = SESSION_RATE_HZ / UPDATE_RATE_HZ;
