//! Objects and morphisms of the cobordism category.

pub mod morphism;
pub(crate) mod surface;
pub mod tangle;

pub use morphism::{basis_degree, basis_of_degree, cap_loops, cup_loops, saddle, Morphism, MorphismBasisElement};
pub use tangle::{all_matchings, circles, glue, glue_flat, hstack_flat, Circles, FlatTangle, Glued, Smoothing};

/// Circle decomposition of `W(a, b)`.
pub fn hom_circles(a: &FlatTangle, b: &FlatTangle) -> crate::Result<Circles> {
    circles(&Smoothing::flat(a.clone()), &Smoothing::flat(b.clone()))
}
