/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_wavepacket_free: (a: number, b: number) => void;
export const estimateDimension: (a: number, b: number, c: number) => [number, number, number, number];
export const kochStaircase: (a: number) => [number, number, number, number];
export const wavepacket_advance: (a: number, b: number) => [number, number];
export const wavepacket_density: (a: number) => [number, number];
export const wavepacket_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const wavepacket_staircase: (a: number) => [number, number];
export const wavepacket_tau: (a: number) => number;
export const wavepacket_totalProbability: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
