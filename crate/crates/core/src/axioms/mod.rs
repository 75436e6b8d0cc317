//! Revealed-preference axioms: GARP and SARSEU.

pub mod garp;
pub mod lp_oracle;
pub mod sarseu;

pub use garp::{check_garp, GarpOutcome, RevealedPreference};
pub use lp_oracle::{sarseu_lp_oracle, LpOracleReport, LpVerdict};
pub use sarseu::{
    check_sarseu, check_sarseu_with, default_max_pairs, DemandPair, SarseuCertificate, SarseuOptions,
    SarseuOutcome, SarseuSequence,
};
