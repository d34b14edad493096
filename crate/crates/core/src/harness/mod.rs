mod bm;
pub(crate) mod digest;
mod functional;
mod lemmas;
mod mixed;
mod report;
mod thm15;
mod tolerance;

pub use bm::{verify_bm, verify_lift_volume, verify_lp_bm};
pub use functional::{bbl_index, mean_envelope, verify_bbl, verify_pl, HYPOTHESIS_PAIRS};
pub use lemmas::{check_lemma31, check_lemma32, Condition};
pub use mixed::{s_tilde, verify_lp_minkowski, MixedConfig, STilde, STildeRow};
pub use report::{InputsDigest, VerificationReport, Verdict};
pub use thm15::{construct_h_thm15, thm15_sweep, verify_thm15, Thm15Config};
pub use tolerance::TolerancePolicy;
