pub mod acd;
pub mod error;
pub mod fields;
pub mod linalg;
pub mod report;
pub mod skew;
pub mod tlrs;

pub use acd::{AcdParams, SearchStrategy};
pub use error::{Error, Result};
pub use fields::{ArithOp, Elem, FieldTower, Gf, Level, TowerDescriptor};
pub use linalg::{schur_residual, Mat, Subspace};
pub use report::{
    acd_record, search_record, tlrs_record, AcdRecord, DistanceMode, RecordOptions, SearchInfo,
    TlrsRecord,
};
pub use skew::{
    build_h_lambda, skew_mul, sum_rank_weight, theta_rank, EvalRule, QuotientCtx, SkewPoly,
    SumRankVector, ThetaPoly,
};
pub use tlrs::{build_code, GramReport, TlrsCode, TlrsParams};
