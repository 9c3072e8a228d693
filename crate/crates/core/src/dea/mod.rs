//! Data model and envelopment LPs.

mod dataset;
pub mod models;

pub use dataset::{translate_point, Dataset};
pub use models::{
    exterior_test, membership_test, output_oriented_score, strict_dominance, HullPosition,
    MembershipResult, ScoreResult,
};

/// A five-DMU, one-input one-output instance small enough to check by hand.
pub mod fixtures {
    use super::Dataset;

    pub const A: usize = 0;
    pub const B: usize = 1;
    pub const C: usize = 2;
    pub const D: usize = 3;
    pub const E: usize = 4;

    /// `A(1,1) B(2,3) C(4,4) D(3,2) E(2,1)`; the frame is `{A, B, C}`.
    pub fn dea5() -> Dataset {
        let rows = [[1.0, 1.0], [2.0, 3.0], [4.0, 4.0], [3.0, 2.0], [2.0, 1.0]];
        Dataset::from_rows("dea5", 1, &rows.map(|r| r.to_vec())).expect("valid fixture")
    }
}
