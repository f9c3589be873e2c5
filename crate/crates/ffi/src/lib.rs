//! C ABI for `orbinv`.
//!
//! Objects are opaque heap handles created by `*_new` functions and released
//! by the matching `*_free`. Every fallible call returns an [`OrbinvStatus`];
//! on failure a description is available from [`orbinv_last_error`] on the
//! same thread. Output buffers are caller-allocated with explicit lengths.
//! Strings returned by `*_to_json` must be released with
//! [`orbinv_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use orbinv::orbit::OrbitOracle;
use orbinv::rational::{eval_g, eval_q, eval_rational_invariants, hermite_multiplier, HermiteData};
use orbinv::transforms::Transform;
use orbinv::{Complex64, Error, ExponentTable, GroupSpec, PhiMode, Signal, TransformKind};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbinvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Domain = 4,
    GroupTooLarge = 5,
    Invariant = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OrbinvComplex {
    pub re: f64,
    pub im: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbinvTransformKind {
    F = 0,
    Theta = 1,
    PhiF = 2,
    Phi = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbinvPhiMode {
    Repaired = 0,
    AsWritten = 1,
}

/// A group action in character form.
pub struct OrbinvGroup {
    inner: GroupSpec,
}

/// Minimal invariant monomials of a group.
pub struct OrbinvTable {
    inner: ExponentTable,
}

/// A configured `F`, `Θ`, `Φ_F` or `Φ`.
pub struct OrbinvTransform {
    inner: Transform,
}

/// Hermite multiplier data and the rational invariants built on it.
pub struct OrbinvHermite {
    inner: HermiteData,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> OrbinvStatus {
    match err {
        Error::DimensionMismatch { .. } => OrbinvStatus::DimensionMismatch,
        Error::Domain(_) => OrbinvStatus::Domain,
        Error::GroupTooLarge { .. } => OrbinvStatus::GroupTooLarge,
        Error::Invariant(_) => OrbinvStatus::Invariant,
        _ => OrbinvStatus::InvalidArgument,
    }
}

struct Fail(OrbinvStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type FfiResult = Result<(), Fail>;

fn guard(f: impl FnOnce() -> FfiResult) -> OrbinvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            OrbinvStatus::Ok
        }
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("panic inside orbinv".into());
            OrbinvStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(OrbinvStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn input<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a, T>(p: *mut T, len: usize, needed: usize, what: &str) -> Result<&'a mut [T], Fail> {
    if len < needed {
        return Err(Fail(
            OrbinvStatus::BufferTooSmall,
            format!("{what} holds {len} entries, {needed} needed"),
        ));
    }
    if needed == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, needed))
}

unsafe fn signal(p: *const OrbinvComplex, len: usize) -> Result<Signal, Fail> {
    let raw = input(p, len, "signal")?;
    Ok(Signal::new(raw.iter().map(|z| Complex64::new(z.re, z.im)).collect())?)
}

fn write_complex(dst: &mut [OrbinvComplex], src: &[Complex64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = OrbinvComplex { re: s.re, im: s.im };
    }
}

fn boxed<T>(out: *mut *mut T, value: T) -> FfiResult {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

fn json_string(value: &impl serde::Serialize) -> *mut c_char {
    match serde_json::to_string(value).map(CString::new) {
        Ok(Ok(c)) => c.into_raw(),
        _ => {
            set_error("JSON serialization failed".into());
            ptr::null_mut()
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn orbinv_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn orbinv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by a `*_to_json` function.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn orbinv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a group from `num_generators` orders and a row-major
/// `num_generators × dim` exponent matrix.
///
/// # Safety
/// `orders` and `exponents` must point to arrays of the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn orbinv_group_new(
    orders: *const u64,
    num_generators: usize,
    exponents: *const i64,
    dim: usize,
    out: *mut *mut OrbinvGroup,
) -> OrbinvStatus {
    guard(|| {
        let orders = input(orders, num_generators, "orders")?.to_vec();
        let flat = input(exponents, num_generators * dim, "exponents")?;
        let rows = if dim == 0 {
            vec![Vec::new(); num_generators]
        } else {
            flat.chunks_exact(dim).map(<[i64]>::to_vec).collect()
        };
        let inner = GroupSpec::new(orders, rows)?;
        boxed(out, OrbinvGroup { inner })
    })
}

/// Circular shifts of `n × m` images in Fourier coordinates.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbinv_group_shift(n: usize, m: usize, out: *mut *mut OrbinvGroup) -> OrbinvStatus {
    guard(|| {
        let inner = GroupSpec::shift(n, m)?;
        boxed(out, OrbinvGroup { inner })
    })
}

/// # Safety
/// `group` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn orbinv_group_free(group: *mut OrbinvGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Signal dimension `N`, or 0 for NULL.
///
/// # Safety
/// `group` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbinv_group_dim(group: *const OrbinvGroup) -> usize {
    group.as_ref().map_or(0, |g| g.inner.dim())
}

/// Number of generators `s`, or 0 for NULL.
///
/// # Safety
/// `group` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbinv_group_num_generators(group: *const OrbinvGroup) -> usize {
    group.as_ref().map_or(0, |g| g.inner.num_generators())
}

/// Writes `g·x` to `out`.
///
/// # Safety
/// Pointers must reference arrays of the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn orbinv_group_act(
    group: *const OrbinvGroup,
    powers: *const u64,
    num_powers: usize,
    x: *const OrbinvComplex,
    len: usize,
    out: *mut OrbinvComplex,
    out_len: usize,
) -> OrbinvStatus {
    guard(|| {
        let g = &handle(group, "group")?.inner;
        let e = g.element(input(powers, num_powers, "powers")?.to_vec())?;
        let y = g.act(&e, &signal(x, len)?)?;
        write_complex(output(out, out_len, y.len(), "out")?, y.as_slice());
        Ok(())
    })
}

/// `d_G([x], [y])` with a witness `g` such that `x ≈ g·y`; the witness buffer
/// needs one entry per generator.
///
/// # Safety
/// Pointers must reference arrays of the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn orbinv_orbit_distance(
    group: *const OrbinvGroup,
    x: *const OrbinvComplex,
    y: *const OrbinvComplex,
    len: usize,
    distance: *mut f64,
    witness: *mut u64,
    witness_len: usize,
) -> OrbinvStatus {
    guard(|| {
        let g = &handle(group, "group")?.inner;
        let d = OrbitOracle::new(g)?.distance(&signal(x, len)?, &signal(y, len)?)?;
        let dst = distance.as_mut().ok_or_else(|| null("distance"))?;
        output(witness, witness_len, d.witness.powers().len(), "witness")?.copy_from_slice(d.witness.powers());
        *dst = d.distance;
        Ok(())
    })
}

/// Exponent table with tuples up to `max_tuple_size` (1, 2 or 3).
///
/// # Safety
/// `group` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbinv_table_new(
    group: *const OrbinvGroup,
    max_tuple_size: usize,
    out: *mut *mut OrbinvTable,
) -> OrbinvStatus {
    guard(|| {
        let g = &handle(group, "group")?.inner;
        let inner = ExponentTable::build_with(g, max_tuple_size)?;
        boxed(out, OrbinvTable { inner })
    })
}

/// # Safety
/// `table` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn orbinv_table_free(table: *mut OrbinvTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Number of monomials `s`, or 0 for NULL.
///
/// # Safety
/// `table` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbinv_table_total_dim(table: *const OrbinvTable) -> usize {
    table.as_ref().map_or(0, |t| t.inner.total_dim())
}

/// JSON rendering of the table, or NULL on failure.
///
/// # Safety
/// `table` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbinv_table_to_json(table: *const OrbinvTable) -> *mut c_char {
    match table.as_ref() {
        Some(t) => json_string(&t.inner),
        None => {
            set_error("table is NULL".into());
            ptr::null_mut()
        }
    }
}

/// Transform over the group's full exponent table with uniform `β`; `Φ`
/// draws a `(2N + 1) × s` reduction from `seed`.
///
/// # Safety
/// `group` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbinv_transform_new(
    group: *const OrbinvGroup,
    kind: OrbinvTransformKind,
    mode: OrbinvPhiMode,
    seed: u64,
    out: *mut *mut OrbinvTransform,
) -> OrbinvStatus {
    guard(|| {
        let g = &handle(group, "group")?.inner;
        let kind = match kind {
            OrbinvTransformKind::F => TransformKind::F,
            OrbinvTransformKind::Theta => TransformKind::Theta,
            OrbinvTransformKind::PhiF => TransformKind::PhiF,
            OrbinvTransformKind::Phi => TransformKind::Phi,
        };
        let mode = match mode {
            OrbinvPhiMode::Repaired => PhiMode::Repaired,
            OrbinvPhiMode::AsWritten => PhiMode::AsWritten,
        };
        let inner = Transform::new(kind, ExponentTable::build(g), seed, mode)?;
        boxed(out, OrbinvTransform { inner })
    })
}

/// # Safety
/// `transform` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn orbinv_transform_free(transform: *mut OrbinvTransform) {
    if !transform.is_null() {
        drop(Box::from_raw(transform));
    }
}

/// Length of the transform's output, or 0 for NULL.
///
/// # Safety
/// `transform` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbinv_transform_output_dim(transform: *const OrbinvTransform) -> usize {
    transform.as_ref().map_or(0, |t| t.inner.output_dim())
}

/// Evaluates the transform at `x`.
///
/// # Safety
/// Pointers must reference arrays of the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn orbinv_transform_eval(
    transform: *const OrbinvTransform,
    x: *const OrbinvComplex,
    len: usize,
    out: *mut OrbinvComplex,
    out_len: usize,
) -> OrbinvStatus {
    guard(|| {
        let t = &handle(transform, "transform")?.inner;
        let v = t.eval(&signal(x, len)?)?;
        write_complex(output(out, out_len, v.values.len(), "out")?, &v.values);
        Ok(())
    })
}

/// Hermite multiplier of `[A −P]` for the group.
///
/// # Safety
/// `group` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbinv_hermite_new(group: *const OrbinvGroup, out: *mut *mut OrbinvHermite) -> OrbinvStatus {
    guard(|| {
        let g = &handle(group, "group")?.inner;
        let inner = hermite_multiplier(g)?;
        inner.check_exact()?;
        boxed(out, OrbinvHermite { inner })
    })
}

/// # Safety
/// `hermite` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn orbinv_hermite_free(hermite: *mut OrbinvHermite) {
    if !hermite.is_null() {
        drop(Box::from_raw(hermite));
    }
}

/// JSON with exact integer and rational strings, or NULL on failure.
///
/// # Safety
/// `hermite` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbinv_hermite_to_json(hermite: *const OrbinvHermite) -> *mut c_char {
    match hermite.as_ref() {
        Some(h) => json_string(&h.inner),
        None => {
            set_error("hermite is NULL".into());
            ptr::null_mut()
        }
    }
}

/// Writes the `N` components of `z^{V_n}`. A zero coordinate under a
/// negative exponent sets `*domain_ok = 0` and leaves `out` untouched.
///
/// # Safety
/// Pointers must reference arrays of the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn orbinv_hermite_eval(
    hermite: *const OrbinvHermite,
    z: *const OrbinvComplex,
    len: usize,
    out: *mut OrbinvComplex,
    out_len: usize,
    domain_ok: *mut bool,
) -> OrbinvStatus {
    guard(|| {
        let h = &handle(hermite, "hermite")?.inner;
        let flag = domain_ok.as_mut().ok_or_else(|| null("domain_ok"))?;
        let r = eval_rational_invariants(h, &signal(z, len)?)?;
        let dst = output(out, out_len, h.dim(), "out")?;
        if r.domain_ok {
            write_complex(dst, &r.values);
        }
        *flag = r.domain_ok;
        Ok(())
    })
}

/// `Q(x) = Σ sign(c_k)|x_k|²`.
///
/// # Safety
/// Pointers must reference arrays of the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn orbinv_hermite_q(
    hermite: *const OrbinvHermite,
    x: *const OrbinvComplex,
    len: usize,
    q: *mut f64,
) -> OrbinvStatus {
    guard(|| {
        let h = &handle(hermite, "hermite")?.inner;
        let dst = q.as_mut().ok_or_else(|| null("q"))?;
        *dst = eval_q(h, &signal(x, len)?)?;
        Ok(())
    })
}

/// `𝒢(x)`: writes the sign of `Q` to `sign` and `N` values to `out`.
///
/// # Safety
/// Pointers must reference arrays of the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn orbinv_hermite_g(
    hermite: *const OrbinvHermite,
    x: *const OrbinvComplex,
    len: usize,
    sign: *mut i8,
    out: *mut OrbinvComplex,
    out_len: usize,
) -> OrbinvStatus {
    guard(|| {
        let h = &handle(hermite, "hermite")?.inner;
        let s = sign.as_mut().ok_or_else(|| null("sign"))?;
        let g = eval_g(h, &signal(x, len)?)?;
        write_complex(output(out, out_len, g.values.len(), "out")?, &g.values);
        *s = g.sign;
        Ok(())
    })
}
