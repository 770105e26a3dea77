//! Special-function kernel: modified Bessel I/K of integer order, negative
//! integer-order polylogarithms, Gauss q-numbers, log-gamma.

mod bessel;
mod gamma;
mod polylog;
mod qnum;

pub use bessel::{
    bessel_i, bessel_i_scaled, bessel_k, bessel_k_scaled, I_SERIES_MAX_X, K_SERIES_MAX_X,
    MAX_ORDER as BESSEL_MAX_ORDER,
};
pub use gamma::{log_factorial, log_gamma};
pub use polylog::{
    polylog_neg_int, polylog_neg_series, shifted_power_sum, EulerianTable, MAX_EULERIAN_ORDER,
};
pub use qnum::{log_q_factorial, q_factorial, q_number};


#[doc(hidden)]
pub mod branches {
    //! Direct access to the individual evaluation branches, for switchover tests.
    pub use super::bessel::{i_asymptotic_scaled, i_series, k01_series, k01_steed_scaled};
}
