//! Rank-metric matrix graphs over finite fields.
pub mod canon;
pub mod classify;
pub mod fields;
pub mod geometry;
pub mod harness;
pub mod matrices;
pub mod search;

pub use canon::{hom_label, make_colouring, valid_ls, CanonError, CanonicalForm, Variant};
pub use classify::{classify, Classification, ClassifyError, MapTable, Verdict};
pub use fields::{enumerate_field_homs, Elem, Field, FieldError, FieldHom, FieldSpec};
pub use geometry::{GeometryError, Kind, MatrixGraph, MaximalSet};
pub use matrices::{distance, is_adjacent, minus_le, Mat, MatError, MatrixSpace, NormalForm};
pub use search::{
    enumerate_homs, sample_homs, search_hom, Constraints, SearchError, SearchOutcome, SearchProblem, SearchStats,
};
