//! Hardy inequality checks: weights, quotients, verification reports, the
//! sharpness probe and the scalar facts the proofs rest on.

mod fs_check;
mod kind;
mod probe;
mod remainder;
mod report;
mod verify;

pub use fs_check::{fs_halfline_identity, fs_inequality_check, FsHalflinePoint, FsPoint, FsReport};
pub use kind::{WeightKind, ALL_KINDS};
pub use probe::{sharpness_probe, SharpnessProbe};
pub use remainder::{certify_remainder, remainder, RemainderCertificate};
pub use report::{
    reports_from_jsonl, reports_to_csv, reports_to_jsonl, Discretization, VerificationReport, CSV_COLUMNS,
    REPORT_SCHEMA,
};
pub use verify::{
    default_bumps, default_spacing, default_sphere_res, quotient, sharpness_family, suite_passes, verify,
    weight_field, FamilySpec, Quotient, TrialFunction, VerifyOptions, DEFAULT_TOL,
};
