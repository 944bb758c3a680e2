/* tslint:disable */
/* eslint-disable */

/**
 * Wigner map on an `n × n` grid centred on the state.
 */
export class WignerImage {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `[q_min, q_max, p_min, p_max]`
     */
    readonly bounds: Float64Array;
    readonly delta: number;
    readonly max: number;
    readonly min: number;
    readonly n: number;
    /**
     * Row-major, `q` outer.
     */
    readonly values: Float64Array;
}

/**
 * Interleaved `[θ0, v0, θ1, v1, ...]` over `(0, π/2)`; skipped points carry `NaN`.
 */
export function metric_curve(metric: string, z_re: number, z_im: number, m: number, points: number): Float64Array;

/**
 * `p_0 ..= p_{n_max}`.
 */
export function photon_distribution(z_re: number, z_im: number, theta: number, m: number, n_max: number): Float64Array;

export function wigner_image(z_re: number, z_im: number, theta: number, m: number, kt: number, nbar: number, half_width: number, n: number): WignerImage;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_wignerimage_free: (a: number, b: number) => void;
    readonly metric_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly photon_distribution: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly wigner_image: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly wignerimage_bounds: (a: number) => [number, number];
    readonly wignerimage_delta: (a: number) => number;
    readonly wignerimage_max: (a: number) => number;
    readonly wignerimage_min: (a: number) => number;
    readonly wignerimage_n: (a: number) => number;
    readonly wignerimage_values: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
