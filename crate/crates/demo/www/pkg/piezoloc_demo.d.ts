/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    height(): number;
    lambda(): number;
    /**
     * `[x, y]` estimated from a noisy simulated press.
     */
    localize(x: number, y: number, depth: number, noise_scale: number): Float64Array;
    /**
     * Builds the sensor and trains the localizer; takes a moment.
     */
    constructor(seed: number);
    noise_sd(): number;
    pairLabels(): string[];
    restResistances(): Float64Array;
    /**
     * Row-major `dr / r0` for one pair; the lattice has
     * `floor(width / step) + 1` columns.
     */
    sensitivityMap(pair: number, depth: number, step: number): Float64Array;
    sigma(): number;
    /**
     * Resistance change per pair, ohms.
     */
    simulate(x: number, y: number, depth: number): Float64Array;
    width(): number;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_height: (a: number) => number;
    readonly demo_lambda: (a: number) => number;
    readonly demo_localize: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly demo_new: (a: number) => [number, number, number];
    readonly demo_noise_sd: (a: number) => number;
    readonly demo_pairLabels: (a: number) => [number, number];
    readonly demo_restResistances: (a: number) => [number, number];
    readonly demo_sensitivityMap: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly demo_sigma: (a: number) => number;
    readonly demo_simulate: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly demo_width: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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
