//! C ABI for the layout-sampling pipeline.
//!
//! Other languages bind against `include/del.h` (generated by cbindgen at
//! build time). The surface follows the usual conventions: opaque handles
//! created and destroyed by this library, integer status codes, and a
//! thread-local last-error message.
//!
//! Status codes match the CLI exit codes where they overlap: 0 success,
//! 2 configuration, 3 data, 4 numeric; 1 flags invalid arguments (null
//! pointers, bad UTF-8, out-of-range indices).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use del_core::error::Error;
use del_core::features::{feature_tensor, read_features, write_features, EdgeFeatureTensor};
use del_core::graph::{parse_edge_list, parse_tudataset, Dataset};
use del_core::layout::{LayoutAlgorithm, LayoutParams};
use del_core::sampler::{sample_dataset, SampleConfig, ThreadBudget};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DelStatus {
    Ok = 0,
    InvalidArgument = 1,
    ConfigError = 2,
    DataError = 3,
    NumericError = 4,
}

/// Opaque dataset handle: a named, ordered collection of graphs.
pub struct DelDataset {
    inner: Dataset,
}

/// Opaque feature-set handle: one m x k edge-length matrix per graph.
pub struct DelFeatureSet {
    tensors: Vec<EdgeFeatureTensor>,
    graph_ids: Vec<CString>,
}

/// Sampling parameters; start from [`del_sample_params_default`] and
/// overwrite what you need.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct DelSampleParams {
    /// 0 = Fruchterman-Reingold, 1 = Kamada-Kawai, 2 = (a, r) model.
    pub algorithm: u32,
    /// Layout dimension, >= 2.
    pub dim: u32,
    /// Iteration budget per layout.
    pub iterations: u32,
    /// Layouts sampled per graph.
    pub layouts_per_graph: u32,
    /// Worker threads; 0 picks the core count.
    pub threads: u32,
    pub base_seed: u64,
    pub k_attr: f64,
    pub k_rep: f64,
    pub a_exp: f64,
    pub r_exp: f64,
    pub step_size: f64,
    pub cooling: f64,
    pub noise_scale: f64,
    pub kk_spring_k: f64,
    pub kk_tolerance: f64,
    pub init_box: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(e: &Error) -> DelStatus {
    match e {
        Error::Config(_) => DelStatus::ConfigError,
        Error::NumericDegeneracy(_) => DelStatus::NumericError,
        Error::Sampling(_) if e.is_numeric() => DelStatus::NumericError,
        _ => DelStatus::DataError,
    }
}

fn fail(e: &Error) -> DelStatus {
    set_error(&e.to_string());
    status_of(e)
}

fn invalid(message: &str) -> DelStatus {
    set_error(message);
    DelStatus::InvalidArgument
}

unsafe fn required_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, DelStatus> {
    if s.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| invalid(&format!("{what} is not valid UTF-8")))
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn del_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn del_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Fill `params` with the default configuration (FR, 2D, 50 iterations,
/// 8 layouts, seed 42).
///
/// # Safety
/// `params` must point to writable memory for one `DelSampleParams`.
#[no_mangle]
pub unsafe extern "C" fn del_sample_params_default(params: *mut DelSampleParams) -> DelStatus {
    if params.is_null() {
        return invalid("params is null");
    }
    let defaults = LayoutParams::default();
    ptr::write(
        params,
        DelSampleParams {
            algorithm: 0,
            dim: defaults.dim as u32,
            iterations: defaults.iterations as u32,
            layouts_per_graph: 8,
            threads: 0,
            base_seed: 42,
            k_attr: defaults.k_attr,
            k_rep: defaults.k_rep,
            a_exp: defaults.a_exp,
            r_exp: defaults.r_exp,
            step_size: defaults.step_size,
            cooling: defaults.cooling,
            noise_scale: defaults.noise_scale,
            kk_spring_k: defaults.kk_spring_k,
            kk_tolerance: defaults.kk_tolerance,
            init_box: defaults.init_box,
        },
    );
    DelStatus::Ok
}

fn sample_config(params: &DelSampleParams) -> Result<SampleConfig, DelStatus> {
    let algorithm = match params.algorithm {
        0 => LayoutAlgorithm::FruchtermanReingold,
        1 => LayoutAlgorithm::KamadaKawai,
        2 => LayoutAlgorithm::ArModel,
        other => {
            return Err(invalid(&format!(
                "algorithm must be 0 (fr), 1 (kk), or 2 (ar), got {other}"
            )))
        }
    };
    let cfg = SampleConfig {
        layouts_per_graph: params.layouts_per_graph as usize,
        base_seed: params.base_seed,
        layout_params: LayoutParams {
            algorithm,
            dim: params.dim as usize,
            iterations: params.iterations as usize,
            k_attr: params.k_attr,
            k_rep: params.k_rep,
            a_exp: params.a_exp,
            r_exp: params.r_exp,
            step_size: params.step_size,
            cooling: params.cooling,
            noise_scale: params.noise_scale,
            kk_spring_k: params.kk_spring_k,
            kk_tolerance: params.kk_tolerance,
            init_box: params.init_box,
        },
        thread_budget: if params.threads == 0 {
            ThreadBudget::Auto
        } else {
            ThreadBudget::Fixed(params.threads as usize)
        },
    };
    cfg.validate().map_err(|e| fail(&e))?;
    Ok(cfg)
}

/// Load a TUDataset-style directory.
///
/// # Safety
/// `dir` must be a NUL-terminated path; `out` must point to writable memory
/// for one pointer. On success `*out` owns the dataset and must be released
/// with [`del_dataset_free`].
#[no_mangle]
pub unsafe extern "C" fn del_dataset_load_tudataset(
    dir: *const c_char,
    out: *mut *mut DelDataset,
) -> DelStatus {
    if out.is_null() {
        return invalid("out is null");
    }
    let dir = match required_str(dir, "dir") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match parse_tudataset(Path::new(dir)) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(DelDataset { inner }));
            DelStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Parse one graph from an in-memory edge-list document (UTF-8, `#`
/// comments, optional `n=<int>` header) into a single-graph dataset.
///
/// # Safety
/// `text` and `graph_id` must be NUL-terminated strings; `out` as in
/// [`del_dataset_load_tudataset`].
#[no_mangle]
pub unsafe extern "C" fn del_dataset_parse_edge_list(
    text: *const c_char,
    graph_id: *const c_char,
    out: *mut *mut DelDataset,
) -> DelStatus {
    if out.is_null() {
        return invalid("out is null");
    }
    let text = match required_str(text, "text") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let graph_id = match required_str(graph_id, "graph_id") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match parse_edge_list(text, graph_id) {
        Ok(parsed) => {
            let inner = Dataset {
                name: graph_id.to_string(),
                graphs: vec![parsed.graph],
            };
            *out = Box::into_raw(Box::new(DelDataset { inner }));
            DelStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Number of graphs in the dataset; 0 if `ds` is null.
///
/// # Safety
/// `ds` must be null or a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn del_dataset_graph_count(ds: *const DelDataset) -> usize {
    if ds.is_null() {
        return 0;
    }
    (*ds).inner.graphs.len()
}

/// Release a dataset handle. Null is a no-op.
///
/// # Safety
/// `ds` must be null or a pointer obtained from a `del_dataset_*` loader,
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn del_dataset_free(ds: *mut DelDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

fn build_feature_set(tensors: Vec<EdgeFeatureTensor>) -> DelFeatureSet {
    let graph_ids = tensors
        .iter()
        .map(|t| CString::new(t.graph_id.replace('\0', " ")).unwrap_or_default())
        .collect();
    DelFeatureSet { tensors, graph_ids }
}

/// Sample layout ensembles for every graph and assemble the edge-length
/// feature matrices. Deterministic for a fixed (dataset, params) pair
/// regardless of `threads`.
///
/// # Safety
/// `ds` must be a live dataset handle, `params` readable, `out` writable.
/// On success `*out` must be released with [`del_features_free`].
#[no_mangle]
pub unsafe extern "C" fn del_compute_features(
    ds: *const DelDataset,
    params: *const DelSampleParams,
    out: *mut *mut DelFeatureSet,
) -> DelStatus {
    if ds.is_null() || params.is_null() || out.is_null() {
        return invalid("ds, params, and out must be non-null");
    }
    let cfg = match sample_config(&*params) {
        Ok(cfg) => cfg,
        Err(status) => return status,
    };
    let dataset = &(*ds).inner;
    let ensembles = match sample_dataset(dataset, &cfg) {
        Ok(e) => e,
        Err(e) => return fail(&e),
    };
    let mut tensors = Vec::with_capacity(ensembles.len());
    for (g, ens) in dataset.graphs.iter().zip(&ensembles) {
        match feature_tensor(ens, g) {
            Ok(t) => tensors.push(t),
            Err(e) => return fail(&e),
        }
    }
    *out = Box::into_raw(Box::new(build_feature_set(tensors)));
    DelStatus::Ok
}

/// Number of graphs in the feature set; 0 if `fs` is null.
///
/// # Safety
/// `fs` must be null or a live feature-set handle.
#[no_mangle]
pub unsafe extern "C" fn del_features_count(fs: *const DelFeatureSet) -> usize {
    if fs.is_null() {
        return 0;
    }
    (*fs).tensors.len()
}

/// Graph id of entry `index`, or null if out of range. The pointer stays
/// valid while the feature set is alive.
///
/// # Safety
/// `fs` must be null or a live feature-set handle.
#[no_mangle]
pub unsafe extern "C" fn del_features_graph_id(
    fs: *const DelFeatureSet,
    index: usize,
) -> *const c_char {
    if fs.is_null() {
        return ptr::null();
    }
    let ids = &(*fs).graph_ids;
    match ids.get(index) {
        Some(id) => id.as_ptr(),
        None => ptr::null(),
    }
}

/// Shape of entry `index`: edge count (rows) and layout count (columns).
///
/// # Safety
/// `fs` must be a live feature-set handle; `edges` and `layouts` must be
/// writable or null.
#[no_mangle]
pub unsafe extern "C" fn del_features_shape(
    fs: *const DelFeatureSet,
    index: usize,
    edges: *mut usize,
    layouts: *mut usize,
) -> DelStatus {
    if fs.is_null() {
        return invalid("fs is null");
    }
    let tensors = &(*fs).tensors;
    let Some(t) = tensors.get(index) else {
        return invalid("index out of range");
    };
    if !edges.is_null() {
        *edges = t.edge_count();
    }
    if !layouts.is_null() {
        *layouts = t.layout_count();
    }
    DelStatus::Ok
}

/// Endpoints of edge `edge` (canonical order, `u < v`) of entry `index`.
///
/// # Safety
/// `fs` must be a live feature-set handle; `u` and `v` must be writable.
#[no_mangle]
pub unsafe extern "C" fn del_features_edge_endpoints(
    fs: *const DelFeatureSet,
    index: usize,
    edge: usize,
    u: *mut u32,
    v: *mut u32,
) -> DelStatus {
    if fs.is_null() || u.is_null() || v.is_null() {
        return invalid("fs, u, and v must be non-null");
    }
    let tensors = &(*fs).tensors;
    let Some(t) = tensors.get(index) else {
        return invalid("index out of range");
    };
    let Some(&(eu, ev)) = t.edge_index.get(edge) else {
        return invalid("edge out of range");
    };
    *u = eu;
    *v = ev;
    DelStatus::Ok
}

/// Borrow the edge-length buffer of entry `index`: column-major, layout j's
/// lengths occupy `[j*edges, (j+1)*edges)`. Valid while the feature set is
/// alive.
///
/// # Safety
/// `fs` must be a live feature-set handle; `data` and `len` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn del_features_lengths(
    fs: *const DelFeatureSet,
    index: usize,
    data: *mut *const f64,
    len: *mut usize,
) -> DelStatus {
    if fs.is_null() || data.is_null() || len.is_null() {
        return invalid("fs, data, and len must be non-null");
    }
    let tensors = &(*fs).tensors;
    let Some(t) = tensors.get(index) else {
        return invalid("index out of range");
    };
    *data = t.values().as_ptr();
    *len = t.values().len();
    DelStatus::Ok
}

/// Write the feature set to the binary `.delf` format.
///
/// # Safety
/// `fs` must be a live feature-set handle; `path` a NUL-terminated path.
#[no_mangle]
pub unsafe extern "C" fn del_features_write(
    fs: *const DelFeatureSet,
    path: *const c_char,
) -> DelStatus {
    if fs.is_null() {
        return invalid("fs is null");
    }
    let path = match required_str(path, "path") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match write_features(Path::new(path), &(*fs).tensors) {
        Ok(()) => DelStatus::Ok,
        Err(e) => fail(&e),
    }
}

/// Read a `.delf` file into a new feature set.
///
/// # Safety
/// `path` must be a NUL-terminated path; `out` writable. On success `*out`
/// must be released with [`del_features_free`].
#[no_mangle]
pub unsafe extern "C" fn del_features_read(
    path: *const c_char,
    out: *mut *mut DelFeatureSet,
) -> DelStatus {
    if out.is_null() {
        return invalid("out is null");
    }
    let path = match required_str(path, "path") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match read_features(Path::new(path)) {
        Ok(tensors) => {
            *out = Box::into_raw(Box::new(build_feature_set(tensors)));
            DelStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Release a feature-set handle. Null is a no-op.
///
/// # Safety
/// `fs` must be null or a pointer from [`del_compute_features`] /
/// [`del_features_read`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn del_features_free(fs: *mut DelFeatureSet) {
    if !fs.is_null() {
        drop(Box::from_raw(fs));
    }
}

/// Outcome of the built-in GTW expressivity analysis.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct DelExpressivityResult {
    /// KS p-value between the two graphs' GTW distributions.
    pub ks_between_p: f64,
    /// Smaller of the two run-to-run KS p-values.
    pub ks_self_p_min: f64,
    /// 1 if the pair passes 1-WL color refinement as indistinguishable.
    pub wl_indistinguishable: u8,
    /// 1 if `ks_between_p` clears the distinguishability threshold.
    pub distinguishable: u8,
    /// 1 if both run-to-run p-values clear the stability threshold.
    pub stable: u8,
}

/// Run the Decalin/Bicyclopentyl expressivity analysis with `n_samples`
/// GTW samples per graph.
///
/// # Safety
/// `params` must be readable and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn del_builtin_expressivity(
    params: *const DelSampleParams,
    n_samples: usize,
    result: *mut DelExpressivityResult,
) -> DelStatus {
    if params.is_null() || result.is_null() {
        return invalid("params and result must be non-null");
    }
    let cfg = match sample_config(&*params) {
        Ok(cfg) => cfg,
        Err(status) => return status,
    };
    match del_core::analysis::expressivity_report(&cfg, n_samples) {
        Ok(output) => {
            let report = &output.report;
            ptr::write(
                result,
                DelExpressivityResult {
                    ks_between_p: report.ks_between_p,
                    ks_self_p_min: report
                        .graphs
                        .iter()
                        .map(|g| g.ks_self_p)
                        .fold(f64::INFINITY, f64::min),
                    wl_indistinguishable: u8::from(report.wl_indistinguishable),
                    distinguishable: u8::from(report.distinguishable),
                    stable: u8::from(report.stable),
                },
            );
            DelStatus::Ok
        }
        Err(e) => fail(&e),
    }
}
