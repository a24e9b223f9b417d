/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_missiondemo_free: (a: number, b: number) => void;
export const facing_yaw: (a: number, b: number) => number;
export const missiondemo_assets: (a: number) => [number, number];
export const missiondemo_detected_asset: (a: number) => number;
export const missiondemo_distance: (a: number) => number;
export const missiondemo_effective_sample_size: (a: number) => number;
export const missiondemo_estimate: (a: number) => [number, number];
export const missiondemo_new: (a: number, b: number, c: number, d: number) => [number, number, number];
export const missiondemo_particles: (a: number) => [number, number];
export const missiondemo_path: (a: number) => [number, number];
export const missiondemo_step: (a: number, b: number) => [number, number, number];
export const missiondemo_truth: (a: number) => [number, number];
export const project_asset: (a: number, b: number, c: number) => [number, number];
export const sad_heatmap: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
export const sonar_info: () => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
