/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_stability_band_hi: (a: number) => number;
export const __wbg_get_stability_band_lo: (a: number) => number;
export const __wbg_get_stability_lambda_explicit: (a: number) => number;
export const __wbg_get_stability_lambda_implicit: (a: number) => number;
export const __wbg_get_stability_rt: (a: number) => number;
export const __wbg_set_stability_band_hi: (a: number, b: number) => void;
export const __wbg_set_stability_band_lo: (a: number, b: number) => void;
export const __wbg_set_stability_lambda_explicit: (a: number, b: number) => void;
export const __wbg_set_stability_lambda_implicit: (a: number, b: number) => void;
export const __wbg_set_stability_rt: (a: number, b: number) => void;
export const __wbg_simulation_free: (a: number, b: number) => void;
export const __wbg_stability_free: (a: number, b: number) => void;
export const dispersion_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const galerkin_profile: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const simulation_advance: (a: number, b: number) => [number, number];
export const simulation_chemical: (a: number) => [number, number];
export const simulation_density: (a: number) => [number, number];
export const simulation_dt: (a: number) => number;
export const simulation_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const simulation_positions: (a: number) => [number, number];
export const simulation_time: (a: number) => number;
export const stability: (a: number, b: number, c: number) => [number, number, number];
export const stability_turing: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
