//! Brute-force oracles and property checks.
//!
//! Every check returns a [`VerificationReport`] whose `pass` flag is exactly
//! `worst_residual <= tolerance`.

mod checks;
mod entropy;
mod optimize;
pub mod oracle;
mod random;

use serde::Serialize;
use serde_json::{Map, Value};

pub use checks::{
    check_capacity_upper_bound, check_complementary_spectra, check_covariance, check_degradability_boundary,
    check_degradable, check_factorization, check_holevo_oracle, check_ppt, check_ppt_claims, check_quantum_oracle,
    check_unruh_rate, check_werner_holevo, check_wolf_eisert_form, degrading_map, kraus_match_up_to_output_signs,
    unruh_rate_slope, DegradingMap,
};
pub use entropy::{
    coherent_information, coherent_information_kraus, holevo_quantity, holevo_quantity_for, von_neumann_entropy,
};
pub use optimize::{
    nelder_mead, optimize_coherent_information, optimize_holevo, HolevoOptimum, Minimum, NelderMeadOptions, Optimum,
};
pub use random::{random_density_matrix, random_pure_state, random_unitary, trial_rng};

/// One sub-measurement of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trial {
    pub name: String,
    pub residual: f64,
}

/// Outcome of a verification check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: Map<String, Value>,
    pub pass: bool,
    pub worst_residual: f64,
    pub trials: Vec<Trial>,
}

impl VerificationReport {
    pub(crate) fn new(check: &str, tolerance: f64) -> Self {
        let mut params = Map::new();
        params.insert("tolerance".into(), json_f64(tolerance));
        Self { check: check.into(), params, pass: true, worst_residual: 0.0, trials: Vec::new() }
    }

    pub(crate) fn param(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.params.insert(name.into(), value.into());
        self
    }

    pub(crate) fn set_param(&mut self, name: &str, value: impl Into<Value>) {
        self.params.insert(name.into(), value.into());
    }

    pub fn tolerance(&self) -> f64 {
        self.params.get("tolerance").and_then(Value::as_f64).unwrap_or(0.0)
    }

    /// Records a residual; NaN counts as a failure.
    pub(crate) fn record(&mut self, name: impl Into<String>, residual: f64) {
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        self.worst_residual = self.worst_residual.max(residual);
        self.pass = self.worst_residual <= self.tolerance();
        self.trials.push(Trial { name: name.into(), residual });
    }
}

/// JSON number for a float; non-finite values become strings.
pub(crate) fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(if x == 0.0 { 0.0 } else { x })
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(x.to_string()))
}
