//! Exact computational algebra for centric Mackey functors over saturated
//! fusion systems: fusion-system construction, products in the centric orbit
//! category, the Mackey algebra and centric Burnside ring, transfer calculus,
//! relative projectivity and vertices, and the Green correspondence, all at
//! desk scale over explicit permutation groups.

pub mod perm;
pub mod grp;
pub mod samples;
pub mod fusion;
pub mod field;
pub mod matrix;
pub mod orbitprod;
pub mod mackey;

pub use grp::{FiniteGroup, SubgroupLattice};
pub use perm::Perm;
