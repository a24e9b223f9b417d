/* tslint:disable */
/* eslint-disable */

/**
 * A lost-robot run on the built-in plant, advanced a few control ticks at
 * a time.
 */
export class MissionDemo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Flat `[x, y, yaw, half_length, half_width]` per asset.
     */
    assets(): Float64Array;
    /**
     * Id of the asset in the latest detection, or −1.
     */
    detected_asset(): number;
    distance(): number;
    effective_sample_size(): number;
    /**
     * `[x, y, yaw, position error, yaw error]` of the weighted mean.
     */
    estimate(): Float64Array;
    constructor(mission_id: number, use_prec: boolean, particles: number, seed: number);
    /**
     * Flat `[x, y, yaw, weight]` per particle.
     */
    particles(): Float64Array;
    /**
     * Planned path as flat `[x, y]` pairs.
     */
    path(): Float64Array;
    /**
     * Advances up to `ticks` control steps. Returns true once the mission
     * has ended.
     */
    step(ticks: number): boolean;
    /**
     * `[x, y, yaw]` of the vehicle.
     */
    truth(): Float64Array;
}

/**
 * Heading that points the sonar straight at the demo asset from `(x, y)`.
 */
export function facing_yaw(x: number, y: number): number;

/**
 * Image of the demo asset seen from a sensor pose:
 * `[u, v, rotation, range, c0u, c0v, .., c3u, c3v]`, or empty when the
 * asset centre is outside the fan.
 */
export function project_asset(x: number, y: number, yaw: number): Float64Array;

/**
 * Detector likelihood `exp(−dist)` on an `n × n` grid spanning
 * `[−extent, extent]²` around the demo asset, maximised over `yaw_steps`
 * headings. The observation is the noiseless box seen from the truth pose.
 * Row-major from the top-left (max y) corner; empty if the truth pose does
 * not see the asset.
 */
export function sad_heatmap(tx: number, ty: number, tyaw: number, n: number, extent: number, yaw_steps: number): Float64Array;

/**
 * `[beta, width, height, r_max, fov]` of the default sonar.
 */
export function sonar_info(): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_missiondemo_free: (a: number, b: number) => void;
    readonly facing_yaw: (a: number, b: number) => number;
    readonly missiondemo_assets: (a: number) => [number, number];
    readonly missiondemo_detected_asset: (a: number) => number;
    readonly missiondemo_distance: (a: number) => number;
    readonly missiondemo_effective_sample_size: (a: number) => number;
    readonly missiondemo_estimate: (a: number) => [number, number];
    readonly missiondemo_new: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly missiondemo_particles: (a: number) => [number, number];
    readonly missiondemo_path: (a: number) => [number, number];
    readonly missiondemo_step: (a: number, b: number) => [number, number, number];
    readonly missiondemo_truth: (a: number) => [number, number];
    readonly project_asset: (a: number, b: number, c: number) => [number, number];
    readonly sad_heatmap: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly sonar_info: () => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
