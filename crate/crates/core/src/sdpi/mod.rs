//! Strong data processing inequality (SDPI) contraction coefficients.
//!
//! [`coefficients`] holds the closed forms for Dropout, DropConnect and
//! Gaussian-noise layers and their network-wide product. [`channel`] holds
//! finite channels and brute-force searches that check those closed forms
//! independently.

pub mod channel;
pub mod coefficients;

pub use channel::{
    dobrushin_coefficient, eta_kl_bruteforce, hellinger_eta_lower_bound, FiniteChannel,
    MAX_ALPHABET,
};
pub use coefficients::{
    dropconnect_eta_ub, dropout_eta, eta_product_approx, network_eta_product, noise_eta_ub,
    site_coefficients, tv_shifted_gaussians, Coefficient, EtaApprox, Tightness,
};
