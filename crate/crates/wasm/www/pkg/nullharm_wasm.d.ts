/* tslint:disable */
/* eslint-disable */

/**
 * Values of `Φ^ℓ_j` on an `n_theta × n_phi` grid.
 */
export function basis_map(ell: number, j: number, n_theta: number, n_phi: number): Float64Array;

/**
 * Row-major `(2ℓ+1)²` matrix `A[j,m]` with `Φ^ℓ_j = Σ_m A[j,m] Y_ℓm`.
 */
export function coefficient_table(ell: number): Float64Array;

/**
 * Values of `Σ c_j Φ^ℓ_j` on an `n_theta × n_phi` grid.
 */
export function expansion_map(ell: number, coeffs: Float64Array, n_theta: number, n_phi: number): Float64Array;

/**
 * Φ coefficients of `x ↦ f(gx)` for the rotation `g` about `axis` by `angle`.
 */
export function rotate(ell: number, coeffs: Float64Array, ax: number, ay: number, az: number, angle: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly basis_map: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly coefficient_table: (a: number) => [number, number, number, number];
    readonly expansion_map: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly rotate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
