//! Secrecy capacity of a two-hop relay wiretap channel.
//!
//! A source reaches a legitimate destination through a half-duplex relay
//! while an eavesdropper overhears the relay's transmission. The crate
//! computes the secrecy capacity under amplify-and-forward (AF) and
//! decode-and-forward (DF) relaying, the genie-aided converse bound that
//! certifies the AF result, and Monte Carlo averages over Rayleigh fading.
//!
//! All rates are in bits per channel use and include the half-duplex ½.

pub mod af_secrecy;
pub mod channel_model;
pub mod cli;
pub mod converse_bound;
pub mod df_secrecy;
pub mod error;
pub mod fading_sim;
pub mod fractional_solver;
pub mod search;
pub mod verify;

pub use af_secrecy::{SecrecyResult, af_secrecy_capacity};
pub use channel_model::{
    ChannelRealization, DerivedParams, PowerBudget, Strategy, db_to_linear, derive_params, gain_domain,
};
pub use converse_bound::{BoundEvaluation, NoiseCorrelation, genie_upper_bound};
pub use df_secrecy::df_secrecy_capacity;
pub use error::{Error, Result};
pub use fading_sim::{EnsembleConfig, SweepRecord, ergodic_sweep};
pub use fractional_solver::{Branch, LambdaSolution, RatioQuadraticProblem};
