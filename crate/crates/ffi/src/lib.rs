//! C ABI for chainrank.
//!
//! Instances and solutions are opaque handles created by this library and
//! released with the matching `_free` function. Every fallible call returns
//! a `ChainrankStatus`; on failure `chainrank_last_error_message` describes
//! the most recent error on the calling thread. Strings returned through
//! out-parameters are owned by the caller and freed with
//! `chainrank_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chainrank::io::{parse_instance, read_instance, write_instance_string, write_solution_string, SolutionFile};
use chainrank::oracle::oracle_solve_with;
use chainrank::{solve, verify_solution, ChainError, Instance, Mode, ProblemSpec, Side, Solution, Variant};

/// Opaque validated instance.
pub struct ChainrankInstance {
    inner: Instance,
}

/// Opaque solution together with the problem it solves.
pub struct ChainrankSolution {
    inner: Solution,
    spec: ProblemSpec,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainrankStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInstance = 4,
    MissingBaseOrder = 5,
    Infeasible = 6,
    InstanceTooLarge = 7,
    Unsupported = 8,
    IoError = 9,
    BufferTooSmall = 10,
    Internal = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainrankVariant {
    Imo = 0,
    FixedBoth = 1,
    FixedStudents = 2,
    FixedQuestions = 3,
    Constrained = 4,
    Unconstrained = 5,
    Both = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainrankMode {
    Editing = 0,
    Addition = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &ChainError) -> ChainrankStatus {
    match err {
        ChainError::Parse { .. }
        | ChainError::ClauseTooWide { .. }
        | ChainError::TautologicalClause { .. } => ChainrankStatus::ParseError,
        ChainError::OutOfRangeEdge { .. }
        | ChainError::DuplicateEdge { .. }
        | ChainError::NotAPermutation { .. }
        | ChainError::EmptySide
        | ChainError::EditConflict { .. } => ChainrankStatus::InvalidInstance,
        ChainError::MissingBaseOrder(_) => ChainrankStatus::MissingBaseOrder,
        ChainError::Infeasible(_) | ChainError::NotIdeal(..) | ChainError::NotNested { .. } => {
            ChainrankStatus::Infeasible
        }
        ChainError::InstanceTooLarge { .. } | ChainError::WindowTooWide { .. } => ChainrankStatus::InstanceTooLarge,
        ChainError::InvalidConfig(_) => ChainrankStatus::Unsupported,
        ChainError::Io(_) => ChainrankStatus::IoError,
        _ => ChainrankStatus::Internal,
    }
}

/// Runs `f`, recording errors and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), (ChainrankStatus, String)>) -> ChainrankStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ChainrankStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ChainrankStatus::Internal
        }
    }
}

fn lib(err: ChainError) -> (ChainrankStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(name: &str) -> (ChainrankStatus, String) {
    (ChainrankStatus::NullArgument, format!("`{name}` is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (ChainrankStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (ChainrankStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

fn to_spec(variant: ChainrankVariant, mode: ChainrankMode, k: usize) -> ProblemSpec {
    let variant = match variant {
        ChainrankVariant::Imo => Variant::ImoRecognize,
        ChainrankVariant::FixedBoth => Variant::FixedBothCheck,
        ChainrankVariant::FixedStudents => Variant::FixedOneSide(Side::StudentsFixed),
        ChainrankVariant::FixedQuestions => Variant::FixedOneSide(Side::QuestionsFixed),
        ChainrankVariant::Constrained => Variant::ConstrainedKnear,
        ChainrankVariant::Unconstrained => Variant::UnconstrainedKnear,
        ChainrankVariant::Both => Variant::BothKnear,
    };
    let mode = match mode {
        ChainrankMode::Editing => Mode::Editing,
        ChainrankMode::Addition => Mode::Addition,
    };
    ProblemSpec::new(variant, mode, k)
}

unsafe fn give_string(text: String, out: *mut *mut c_char) -> Result<(), (ChainrankStatus, String)> {
    let c = CString::new(text).map_err(|_| (ChainrankStatus::Internal, "text contains a nul byte".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Parses an instance from the text format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chainrank_instance_from_text(
    text: *const c_char,
    out: *mut *mut ChainrankInstance,
) -> ChainrankStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = str_arg(text, "text")?;
        let inner = parse_instance(text).map_err(lib)?;
        *out = Box::into_raw(Box::new(ChainrankInstance { inner }));
        Ok(())
    })
}

/// Reads an instance file.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chainrank_instance_from_file(
    path: *const c_char,
    out: *mut *mut ChainrankInstance,
) -> ChainrankStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let path = str_arg(path, "path")?;
        let inner = read_instance(path).map_err(lib)?;
        *out = Box::into_raw(Box::new(ChainrankInstance { inner }));
        Ok(())
    })
}

/// # Safety
/// `inst` must come from this library and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn chainrank_instance_free(inst: *mut ChainrankInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of students, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn chainrank_instance_num_students(inst: *const ChainrankInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.num_students())
}

/// Number of questions, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn chainrank_instance_num_questions(inst: *const ChainrankInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.num_questions())
}

/// Writes the instance in the text format to `*out`.
///
/// # Safety
/// `inst` must be a live instance handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chainrank_instance_to_text(
    inst: *const ChainrankInstance,
    out: *mut *mut c_char,
) -> ChainrankStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        give_string(write_instance_string(&inst.inner), out)
    })
}

/// Solves with the polynomial solver of `variant`. Unconstrained editing
/// runs the exponential exact solver only when `allow_exponential` is set.
///
/// # Safety
/// `inst` must be a live instance handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chainrank_solve(
    inst: *const ChainrankInstance,
    variant: ChainrankVariant,
    mode: ChainrankMode,
    k: usize,
    allow_exponential: bool,
    out: *mut *mut ChainrankSolution,
) -> ChainrankStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        let spec = to_spec(variant, mode, k);
        let inner = solve(&inst.inner, &spec, allow_exponential).map_err(lib)?;
        *out = Box::into_raw(Box::new(ChainrankSolution { inner, spec }));
        Ok(())
    })
}

/// Solves by exhaustive enumeration of at most `cap` orderings.
///
/// # Safety
/// `inst` must be a live instance handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chainrank_oracle_solve(
    inst: *const ChainrankInstance,
    variant: ChainrankVariant,
    mode: ChainrankMode,
    k: usize,
    cap: u64,
    out: *mut *mut ChainrankSolution,
) -> ChainrankStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        let spec = to_spec(variant, mode, k);
        let inner = oracle_solve_with(&inst.inner, &spec, cap).map_err(lib)?;
        *out = Box::into_raw(Box::new(ChainrankSolution { inner, spec }));
        Ok(())
    })
}

/// # Safety
/// `sol` must come from this library and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn chainrank_solution_free(sol: *mut ChainrankSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Number of edits, or `UINT64_MAX` for a null handle.
///
/// # Safety
/// `sol` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn chainrank_solution_cost(sol: *const ChainrankSolution) -> u64 {
    sol.as_ref().map_or(u64::MAX, |s| s.inner.cost)
}

unsafe fn copy_out(src: &[usize], buf: *mut usize, len: usize, needed: *mut usize) -> Result<(), (ChainrankStatus, String)> {
    if !needed.is_null() {
        *needed = src.len();
    }
    if buf.is_null() || len < src.len() {
        return Err((
            ChainrankStatus::BufferTooSmall,
            format!("buffer holds {len} entries, {} needed", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// Copies the student order (weakest first) into `buf`. `*needed` receives
/// the required length; pass a null `buf` to query it.
///
/// # Safety
/// `buf` must be null or hold `len` writable entries; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn chainrank_solution_student_order(
    sol: *const ChainrankSolution,
    buf: *mut usize,
    len: usize,
    needed: *mut usize,
) -> ChainrankStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("sol"))?;
        copy_out(sol.inner.student_order.order(), buf, len, needed)
    })
}

/// Copies the question order (easiest first) into `buf`, as for the
/// student order.
///
/// # Safety
/// `buf` must be null or hold `len` writable entries; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn chainrank_solution_question_order(
    sol: *const ChainrankSolution,
    buf: *mut usize,
    len: usize,
    needed: *mut usize,
) -> ChainrankStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("sol"))?;
        copy_out(sol.inner.question_order.order(), buf, len, needed)
    })
}

/// Copies the added pairs as flat `student, question` entries; `len` and
/// `*needed` count entries, two per pair.
///
/// # Safety
/// `buf` must be null or hold `len` writable entries; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn chainrank_solution_additions(
    sol: *const ChainrankSolution,
    buf: *mut usize,
    len: usize,
    needed: *mut usize,
) -> ChainrankStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("sol"))?;
        let flat: Vec<usize> = sol.inner.edits.additions.iter().flat_map(|&(s, q)| [s, q]).collect();
        copy_out(&flat, buf, len, needed)
    })
}

/// Deleted pairs, laid out as for `chainrank_solution_additions`.
///
/// # Safety
/// `buf` must be null or hold `len` writable entries; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn chainrank_solution_deletions(
    sol: *const ChainrankSolution,
    buf: *mut usize,
    len: usize,
    needed: *mut usize,
) -> ChainrankStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("sol"))?;
        let flat: Vec<usize> = sol.inner.edits.deletions.iter().flat_map(|&(s, q)| [s, q]).collect();
        copy_out(&flat, buf, len, needed)
    })
}

/// Runs the independent verifier; `*passed` tells whether every check held.
///
/// # Safety
/// Both handles must be live and `passed` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chainrank_solution_verify(
    inst: *const ChainrankInstance,
    sol: *const ChainrankSolution,
    passed: *mut bool,
) -> ChainrankStatus {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        let sol = sol.as_ref().ok_or_else(|| null("sol"))?;
        if passed.is_null() {
            return Err(null("passed"));
        }
        let report = verify_solution(&inst.inner, &sol.spec, &sol.inner);
        *passed = report.passed();
        if !report.passed() {
            set_error(report.to_string());
        }
        Ok(())
    })
}

/// Writes the solution in the text format to `*out`.
///
/// # Safety
/// `sol` must be a live solution handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn chainrank_solution_to_text(
    sol: *const ChainrankSolution,
    out: *mut *mut c_char,
) -> ChainrankStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("sol"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let file = SolutionFile {
            solution: sol.inner.clone(),
            spec: Some(sol.spec),
            verified: None,
        };
        give_string(write_solution_string(&file), out)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn chainrank_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn chainrank_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn chainrank_status_name(status: ChainrankStatus) -> *const c_char {
    let name: &'static CStr = match status {
        ChainrankStatus::Ok => c"ok",
        ChainrankStatus::NullArgument => c"null argument",
        ChainrankStatus::InvalidUtf8 => c"invalid utf-8",
        ChainrankStatus::ParseError => c"parse error",
        ChainrankStatus::InvalidInstance => c"invalid instance",
        ChainrankStatus::MissingBaseOrder => c"missing base order",
        ChainrankStatus::Infeasible => c"infeasible",
        ChainrankStatus::InstanceTooLarge => c"instance too large",
        ChainrankStatus::Unsupported => c"unsupported",
        ChainrankStatus::IoError => c"io error",
        ChainrankStatus::BufferTooSmall => c"buffer too small",
        ChainrankStatus::Internal => c"internal error",
    };
    name.as_ptr()
}
