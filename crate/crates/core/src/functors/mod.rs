//! The category of graded p-linear data, the functors to and from
//! representations, nearby and vanishing cycles, and gluing data.

mod cycles;
mod gluing;
mod naturality;
mod object;

pub use cycles::{default_window, nearby_full, nearby_unipotent, recover_rep, vanishing, NearbyUnipotent, Vanishing};
pub use gluing::{gluing_data_extension, gluing_data_kummer, reconstruct, GluingTriple, OpenPart, Reconstructed};
pub use naturality::{naturality_object_morphism, naturality_rep_morphism, FunctorTag, NaturalityReport};
pub use object::{
    eigenvalue_multiset, fixed_data, functor_f, functor_f_with_basis, functor_g, hom_basis, intertwiner, is_morphism,
    object_isomorphism, reps_isomorphic, splitting_field, CGClass, CGObject, FixedData, ObjectIso,
};
