//! Unit F-crystals from representations of Z/d, and the extension modules `M_c`.

mod extension;
mod kummer;
mod module;
mod rep;
mod section;

pub use extension::{build_extension, sol_extension, DeltaElement, ExtensionModule, ExtensionSolutions};
pub use kummer::{build_kummer_crystal, sol_kummer, KummerCrystal, WeightData};
pub use module::FModule;
pub use rep::{frobenius_on_weights, weight_decompose, CyclicRep, RepDescriptor, WeightDecomposition};
pub use section::{Mono, Section};
