//! Hochschild cochains on degree windows: coboundaries, triviality
//! verdicts with rank certificates, cup and Yoneda products, restriction
//! along a localisation and the module pairing.

mod cochain;
mod gamma;
mod pairing;
mod products;
mod system;
mod verdict;

pub use cochain::{cocycle_defects, delta, delta_at, Cochain, Difference, HochschildCochain, TupleWindow, WindowKind};
pub use gamma::{compare_with_target, gamma_verdict, OddTripleCochain, Pullback, Pushforward};
pub use pairing::{
    check_module_witness, kappa_verdict, module_coboundary_decide, module_coboundary_on_window, module_delta_at,
    realisability, ModuleCochain, ModuleTable, PairingCochain, PairingWindow, RealisabilityReport,
};
pub use products::{
    bar_basis, bar_differential, bar_differential_elem, collect, diagonal_lift, graded_centre, solberg_lift,
    tilde_elem, tilde_eval, BarElement, Cup, Lifting, Yoneda,
};
pub use verdict::{
    check_witness, coboundary_decide, coboundary_on_window, witness_window, DecideOptions, ObstructionVerdict,
    RankCertificate, Verdict, Witness, STABILITY_MARGIN,
};
