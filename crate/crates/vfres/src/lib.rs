//! File formats, reports and the command-line front end for `vfres-core`.

pub mod input;
pub mod off;
pub mod report;
pub mod stratum;
pub mod verify;

pub use input::{parse_input, InputDocument, InputError, Prepared};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const VALIDATION: i32 = 2;
    pub const UNRESOLVED: i32 = 3;
    pub const DECREASE: i32 = 4;
}
