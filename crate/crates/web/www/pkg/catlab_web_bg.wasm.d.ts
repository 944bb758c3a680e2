/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_wignerimage_free: (a: number, b: number) => void;
export const metric_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const photon_distribution: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const wigner_image: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const wignerimage_bounds: (a: number) => [number, number];
export const wignerimage_delta: (a: number) => number;
export const wignerimage_max: (a: number) => number;
export const wignerimage_min: (a: number) => number;
export const wignerimage_n: (a: number) => number;
export const wignerimage_values: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
