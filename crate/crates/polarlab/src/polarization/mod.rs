//! The polarization process: sample paths, the double-log value domain,
//! exact spectra, trajectories, and the bounding processes and events used
//! to reason about how fast values concentrate at the endpoints.

mod binomial;
mod dlog;
mod path;
mod process;
mod spectrum;

pub use binomial::binomial_tail;
pub use dlog::{log1mexp, DualLogValue};
pub use path::{AnomalyFn, EventParams, SamplePath};
pub use process::{
    converse_process, event_c, event_d, ln_upper_bound, rho_of_gamma, step_bec, upper_process,
    upper_process_dominates, ConverseProcess, IntervalTrajectory, ZTrajectory,
};
pub use spectrum::{
    enumerate_bec_spectrum, enumerate_exact_spectrum, enumerate_interval_spectrum, ZSpectrum,
    MAX_SPECTRUM_LEVEL,
};
