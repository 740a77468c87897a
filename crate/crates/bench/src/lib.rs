//! Shared inputs for the criterion benches.

use matgraph_core::canon::CanonicalForm;
use matgraph_core::classify::MapTable;
use matgraph_core::fields::{enumerate_field_homs, Field};
use matgraph_core::matrices::{Mat, MatrixSpace, DEFAULT_STATE_CAP};
use matgraph_core::search::{Constraints, SearchProblem};

pub fn gf(q: u64) -> Field {
    Field::standard(q).expect("shipped field")
}

pub fn space(q: u64, m: usize, n: usize) -> MatrixSpace {
    MatrixSpace::new(&gf(q), m, n)
}

/// The Šemrl-type transposed form `GF(2)^{2x2} -> GF(4)^{2x2}` with `L = ω E11`.
pub fn semrl_table() -> MapTable {
    let src = space(2, 2, 2);
    let dst = space(4, 2, 2);
    let k = dst.field().clone();
    let tau = enumerate_field_homs(src.field(), &k).remove(0);
    let l = Mat::unit(&k, 2, 2, 0, 0).scale(2);
    CanonicalForm::semrl(&src, &dst, Mat::identity(&k, 2), Mat::identity(&k, 2), tau, l, true)
        .and_then(|f| f.tabulate(DEFAULT_STATE_CAP))
        .expect("valid form")
}

/// `GF(3)^{2x2} -> GF(2)^{2x2}` with 0 fixed and a distance-2 image pair.
pub fn colouring_bound_problem(symmetry_reduction: bool) -> SearchProblem {
    let c = Constraints {
        fix_zero_to_zero: true,
        require_distance2_image_pair: true,
        symmetry_reduction,
        ..Default::default()
    };
    SearchProblem::new(&space(3, 2, 2), &space(2, 2, 2))
        .expect("small spaces")
        .with_constraints(c)
}

/// `GF(4)^{2x2}` to itself with 0 fixed and a distance-2 image pair.
pub fn gf4_sampling_problem() -> SearchProblem {
    let s = space(4, 2, 2);
    let c = Constraints {
        fix_zero_to_zero: true,
        require_distance2_image_pair: true,
        ..Default::default()
    };
    SearchProblem::new(&s, &s)
        .expect("small space")
        .with_constraints(c)
        .with_budget(100_000)
}
