/* tslint:disable */
/* eslint-disable */

/**
 * Gaussian packet on a Koch curve, advanced by Crank–Nicolson steps.
 */
export class WavePacket {
    free(): void;
    [Symbol.dispose](): void;
    advance(steps: number): void;
    /**
     * `|ψ|²` at the curve nodes.
     */
    density(): Float64Array;
    /**
     * `sigma` is a fraction of the staircase span.
     */
    constructor(level: number, sigma: number, k0: number, d_tau: number, periodic: boolean);
    staircase(): Float64Array;
    tau(): number;
    totalProbability(): number;
}

export function estimateDimension(kind: string, top_level: number): Float64Array;

export function kochStaircase(level: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_wavepacket_free: (a: number, b: number) => void;
    readonly estimateDimension: (a: number, b: number, c: number) => [number, number, number, number];
    readonly kochStaircase: (a: number) => [number, number, number, number];
    readonly wavepacket_advance: (a: number, b: number) => [number, number];
    readonly wavepacket_density: (a: number) => [number, number];
    readonly wavepacket_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly wavepacket_staircase: (a: number) => [number, number];
    readonly wavepacket_tau: (a: number) => number;
    readonly wavepacket_totalProbability: (a: number) => number;
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
