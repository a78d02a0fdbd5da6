//! Exact arithmetic for finitely generated abelian groups: integer
//! matrices, Smith normal form, presented groups, homomorphisms, and
//! cohomology of cochain complexes of presented groups.

mod complex;
mod group;
mod matrix;
mod snf;

pub use complex::{check_chain_map, connecting_map, homology_at, induced_map, induced_on_homology, Complex, Homology};
pub use group::{cokernel, coordinates_in, is_exact_at, preimage_lattice, CanonicalForm, GroupHom, PresentedAbGroup};
pub use matrix::{int_vec, IntMatrix};
pub use snf::{kernel_basis, lattice_basis, smith_normal_form, solve, Snf};
