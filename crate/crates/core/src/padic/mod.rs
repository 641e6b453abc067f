//! Exact `p`-adic local computations: Schwartz functions, Fourier
//! transforms, Siegel–Weil sections, intertwining integrals, Whittaker
//! newform values and local zeta factors.

pub mod scalar;
pub mod schwartz;
pub mod section;
pub mod whittaker;

pub use scalar::CyclotomicScalar;
pub use schwartz::{fourier_transform, phi_level, weil_scaling, Coset, PadicBox, Polarization, SchwartzFunction, Slot, Term};
pub use section::{
    intertwining_value, k1_sl2_volume, siegel_weil_section, support_of_weil_translate, verify_sw_identity,
    InducedSectionPhi0, IntertwiningReport, SupportMatch, SupportReport, SwReport,
};
pub use whittaker::{whittaker_value, zeta_factor, Monomial, WhittakerNewform, ZetaFactor};
