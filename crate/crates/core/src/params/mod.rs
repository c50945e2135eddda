//! Multigraph parameters: tree decompositions, chordal analysis, folding,
//! clique and connectivity numbers, and bounds on `λ` and `rd`.

pub mod bounds;
pub mod chordal;
pub mod clique;
pub mod fold;
pub mod treedec;

pub use bounds::{lambda_bounds, param_report, rd_bounds, Bounds, ParamReport, Witness};
pub use chordal::{chordal_analysis, is_chordal, ChordalAnalysis};
pub use clique::{clique_number, kappa};
pub use fold::{fold, fold_optimal, FoldResult};
pub use treedec::{
    find_lacking_optimal, is_lacking, treewidth_exact, validate_td, TdValidation, TreeDecomposition,
};
