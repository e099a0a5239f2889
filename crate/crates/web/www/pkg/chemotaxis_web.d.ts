/* tslint:disable */
/* eslint-disable */

/**
 * Live semi-implicit simulation started from the unit state with a central stimulus.
 */
export class Simulation {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Advances by `steps` time steps; on blow-up the state is left where it failed.
     */
    advance(steps: number): void;
    chemical(): Float64Array;
    density(): Float64Array;
    constructor(d: number, chi0: number, r: number, length: number, nx: number);
    positions(): Float64Array;
    readonly dt: number;
    readonly time: number;
}

/**
 * Linear stability summary of the homogeneous state. Absent quantities are `NaN`.
 */
export class Stability {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    band_hi: number;
    band_lo: number;
    lambda_explicit: number;
    lambda_implicit: number;
    rt: number;
    readonly turing: boolean;
}

/**
 * Growth rate of the leading eigenvalue at `points` wavenumbers evenly spaced on `[0, q_max]`.
 */
export function dispersion_curve(d: number, chi0: number, r: number, q_max: number, points: number): Float64Array;

/**
 * Stationary cell density of the `modes`-term cosine truncation on `[0, length]`,
 * sampled at `points` evenly spaced positions. The spike sits at `x = 0`.
 */
export function galerkin_profile(d: number, chi0: number, r: number, modes: number, length: number, points: number): Float64Array;

export function stability(d: number, chi0: number, r: number): Stability;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_stability_band_hi: (a: number) => number;
    readonly __wbg_get_stability_band_lo: (a: number) => number;
    readonly __wbg_get_stability_lambda_explicit: (a: number) => number;
    readonly __wbg_get_stability_lambda_implicit: (a: number) => number;
    readonly __wbg_get_stability_rt: (a: number) => number;
    readonly __wbg_set_stability_band_hi: (a: number, b: number) => void;
    readonly __wbg_set_stability_band_lo: (a: number, b: number) => void;
    readonly __wbg_set_stability_lambda_explicit: (a: number, b: number) => void;
    readonly __wbg_set_stability_lambda_implicit: (a: number, b: number) => void;
    readonly __wbg_set_stability_rt: (a: number, b: number) => void;
    readonly __wbg_simulation_free: (a: number, b: number) => void;
    readonly __wbg_stability_free: (a: number, b: number) => void;
    readonly dispersion_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly galerkin_profile: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly simulation_advance: (a: number, b: number) => [number, number];
    readonly simulation_chemical: (a: number) => [number, number];
    readonly simulation_density: (a: number) => [number, number];
    readonly simulation_dt: (a: number) => number;
    readonly simulation_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly simulation_positions: (a: number) => [number, number];
    readonly simulation_time: (a: number) => number;
    readonly stability: (a: number, b: number, c: number) => [number, number, number];
    readonly stability_turing: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
