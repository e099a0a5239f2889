/* @ts-self-types="./chemotaxis_web.d.ts" */

/**
 * Live semi-implicit simulation started from the unit state with a central stimulus.
 */
export class Simulation {
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        SimulationFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_simulation_free(ptr, 0);
    }
    /**
     * Advances by `steps` time steps; on blow-up the state is left where it failed.
     * @param {number} steps
     */
    advance(steps) {
        const ret = wasm.simulation_advance(this.__wbg_ptr, steps);
        if (ret[1]) {
            throw takeFromExternrefTable0(ret[0]);
        }
    }
    /**
     * @returns {Float64Array}
     */
    chemical() {
        const ret = wasm.simulation_chemical(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    density() {
        const ret = wasm.simulation_density(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get dt() {
        const ret = wasm.simulation_dt(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {number} d
     * @param {number} chi0
     * @param {number} r
     * @param {number} length
     * @param {number} nx
     */
    constructor(d, chi0, r, length, nx) {
        const ret = wasm.simulation_new(d, chi0, r, length, nx);
        if (ret[2]) {
            throw takeFromExternrefTable0(ret[1]);
        }
        this.__wbg_ptr = ret[0];
        SimulationFinalization.register(this, this.__wbg_ptr, this);
        return this;
    }
    /**
     * @returns {Float64Array}
     */
    positions() {
        const ret = wasm.simulation_positions(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get time() {
        const ret = wasm.simulation_time(this.__wbg_ptr);
        return ret;
    }
}
if (Symbol.dispose) Simulation.prototype[Symbol.dispose] = Simulation.prototype.free;

/**
 * Linear stability summary of the homogeneous state. Absent quantities are `NaN`.
 */
export class Stability {
    static __wrap(ptr) {
        const obj = Object.create(Stability.prototype);
        obj.__wbg_ptr = ptr;
        StabilityFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        StabilityFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_stability_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get band_hi() {
        const ret = wasm.__wbg_get_stability_band_hi(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get band_lo() {
        const ret = wasm.__wbg_get_stability_band_lo(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get lambda_explicit() {
        const ret = wasm.__wbg_get_stability_lambda_explicit(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get lambda_implicit() {
        const ret = wasm.__wbg_get_stability_lambda_implicit(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get rt() {
        const ret = wasm.__wbg_get_stability_rt(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {number} arg0
     */
    set band_hi(arg0) {
        wasm.__wbg_set_stability_band_hi(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set band_lo(arg0) {
        wasm.__wbg_set_stability_band_lo(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set lambda_explicit(arg0) {
        wasm.__wbg_set_stability_lambda_explicit(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set lambda_implicit(arg0) {
        wasm.__wbg_set_stability_lambda_implicit(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set rt(arg0) {
        wasm.__wbg_set_stability_rt(this.__wbg_ptr, arg0);
    }
    /**
     * @returns {boolean}
     */
    get turing() {
        const ret = wasm.stability_turing(this.__wbg_ptr);
        return ret !== 0;
    }
}
if (Symbol.dispose) Stability.prototype[Symbol.dispose] = Stability.prototype.free;

/**
 * Growth rate of the leading eigenvalue at `points` wavenumbers evenly spaced on `[0, q_max]`.
 * @param {number} d
 * @param {number} chi0
 * @param {number} r
 * @param {number} q_max
 * @param {number} points
 * @returns {Float64Array}
 */
export function dispersion_curve(d, chi0, r, q_max, points) {
    const ret = wasm.dispersion_curve(d, chi0, r, q_max, points);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}

/**
 * Stationary cell density of the `modes`-term cosine truncation on `[0, length]`,
 * sampled at `points` evenly spaced positions. The spike sits at `x = 0`.
 * @param {number} d
 * @param {number} chi0
 * @param {number} r
 * @param {number} modes
 * @param {number} length
 * @param {number} points
 * @returns {Float64Array}
 */
export function galerkin_profile(d, chi0, r, modes, length, points) {
    const ret = wasm.galerkin_profile(d, chi0, r, modes, length, points);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}

/**
 * @param {number} d
 * @param {number} chi0
 * @param {number} r
 * @returns {Stability}
 */
export function stability(d, chi0, r) {
    const ret = wasm.stability(d, chi0, r);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Stability.__wrap(ret[0]);
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_generic_0000000000000001: function(arg0, arg1) {
            // Cast intrinsic for `Ref(String) -> Externref`.
            const ret = getStringFromWasm0(arg0, arg1);
            return ret;
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./chemotaxis_web_bg.js": import0,
    };
}

const SimulationFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_simulation_free(ptr, 1));
const StabilityFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_stability_free(ptr, 1));

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('chemotaxis_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
