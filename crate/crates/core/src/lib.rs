//! Exact computations for rank-two Nichols algebras of diagonal type in
//! degrees `m α1 + 2 α2`: the index set `J`, the kernel elements `P_k` and
//! `L_n`, multiplicities, and a symmetrizer oracle to check them against.

pub mod braided;
pub mod error;
pub mod exactfield;
pub mod jset;
pub mod linalg;
pub mod oracle;
pub mod qcalc;
pub mod rootvec;
pub mod sweep;

pub use braided::{GradedElement, MultiDegree, Word};
pub use error::{Error, Result};
pub use exactfield::{parse_field_spec, Field, FieldElement, FieldError};
pub use jset::{compute_j, multiplicity, non_root_table_check, root_vector_criterion, JClass, JClassification};
pub use oracle::{verify_main, KernelReport, Oracle};
pub use qcalc::BraidingParams;
pub use rootvec::UhatBasisVector;
