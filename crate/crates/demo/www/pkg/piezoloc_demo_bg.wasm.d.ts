/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const demo_height: (a: number) => number;
export const demo_lambda: (a: number) => number;
export const demo_localize: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const demo_new: (a: number) => [number, number, number];
export const demo_noise_sd: (a: number) => number;
export const demo_pairLabels: (a: number) => [number, number];
export const demo_restResistances: (a: number) => [number, number];
export const demo_sensitivityMap: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const demo_sigma: (a: number) => number;
export const demo_simulate: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const demo_width: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_start: () => void;
