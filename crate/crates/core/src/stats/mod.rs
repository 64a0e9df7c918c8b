//! Sumsets, product and quotient sets, representation counts, energies, the
//! ratio spectrum and multiplicative doubling.

mod doubling;
mod rep;
mod spectrum;

pub use doubling::{d_exhaustive, d_upper, DoublingProfile};
pub(crate) use rep::rep_histogram;
pub use rep::{
    additive_energy, difference_set, energy, image_size, multiplicative_energy, productset, quotientset, rep_counts,
    sumset, EnergyKind, Multiset, Op,
};
pub(crate) use spectrum::{all_fibers, slice_index, slice_tau, slices_from_spectrum};
pub use spectrum::{ceil_log2, dyadic_slices, lambda_set, spectrum, SpectrumSlice};
