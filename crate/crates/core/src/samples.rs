//! Canonical example groups used by the test suites and the bundled CLI data.

use crate::grp::{desk_scale_bound, FiniteGroup};
use crate::perm::Perm;
use std::sync::Arc;

pub fn c2() -> Arc<FiniteGroup> {
    FiniteGroup::generate(
        "C2",
        2,
        vec![Perm::from_cycles(2, &[vec![1, 2]]).unwrap()],
        desk_scale_bound(),
    )
    .unwrap()
}

/// Dihedral group of order 8 as the symmetries of a square on 4 points.
pub fn d8() -> Arc<FiniteGroup> {
    FiniteGroup::generate(
        "D8",
        4,
        vec![
            Perm::from_cycles(4, &[vec![1, 2, 3, 4]]).unwrap(),
            Perm::from_cycles(4, &[vec![1, 3]]).unwrap(),
        ],
        desk_scale_bound(),
    )
    .unwrap()
}

pub fn s4() -> Arc<FiniteGroup> {
    FiniteGroup::generate(
        "S4",
        4,
        vec![
            Perm::from_cycles(4, &[vec![1, 2]]).unwrap(),
            Perm::from_cycles(4, &[vec![1, 2, 3, 4]]).unwrap(),
        ],
        desk_scale_bound(),
    )
    .unwrap()
}

/// The ambient group pinned for the worked example: the simple group of order
/// 168 in its degree-8 action on the projective line over F7. Its Sylow
/// 2-subgroups are dihedral of order 8, both Klein four subgroups of such a
/// Sylow have automizer S3, and their normalizers have order 24.
///
/// Points are labelled 1 = infinity, k+2 = k for k in F7; generators are
/// x -> x+1, x -> 2x and x -> -1/x.
pub fn example_ambient() -> Arc<FiniteGroup> {
    FiniteGroup::generate(
        "L3(2)",
        8,
        vec![
            Perm::from_cycles(8, &[vec![2, 3, 4, 5, 6, 7, 8]]).unwrap(),
            Perm::from_cycles(8, &[vec![3, 4, 6], vec![5, 8, 7]]).unwrap(),
            Perm::from_cycles(8, &[vec![1, 2], vec![3, 8], vec![4, 5], vec![6, 7]]).unwrap(),
        ],
        desk_scale_bound(),
    )
    .unwrap()
}

/// GL(2,3) in its literal action on the 8 nonzero vectors of F3^2, ordered
/// (0,1),(0,2),(1,0),(1,1),(1,2),(2,0),(2,1),(2,2). Kept as a reference group:
/// its Sylow 2-subgroup is semidihedral of order 16, not dihedral of order 8,
/// and every Klein four subgroup contains the central -I, so its fusion over
/// any D8 it contains cannot reproduce the worked example (see README).
pub fn gl23_matrix() -> Arc<FiniteGroup> {
    FiniteGroup::generate(
        "GL2(3)",
        8,
        vec![
            // [[1,1],[0,1]]
            Perm::from_cycles(8, &[vec![1, 4, 7], vec![2, 8, 5]]).unwrap(),
            // [[1,0],[1,1]]
            Perm::from_cycles(8, &[vec![3, 4, 5], vec![6, 8, 7]]).unwrap(),
            // [[2,0],[0,1]]
            Perm::from_cycles(8, &[vec![3, 6], vec![4, 7], vec![5, 8]]).unwrap(),
        ],
        desk_scale_bound(),
    )
    .unwrap()
}
