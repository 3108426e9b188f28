//! Pass/fail records shared by the verification routines and the CLI.

use std::fmt;

use serde::Serialize;

use crate::series::{FormalSeries, Ring};

/// Version of the JSON layout emitted by [`CheckReport`] and the CLI.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub witness: String,
    pub lambda_order: usize,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        Self { check: check.into(), passed: true, cases: 0, failures: Vec::new() }
    }

    /// Records one case; a nonzero residual is a failure at its lowest λ-order.
    pub fn record<T: Ring + fmt::Display>(&mut self, witness: impl Into<String>, residual: &FormalSeries<T>) {
        self.cases += 1;
        if let Some(r) = residual.lowest_order() {
            self.passed = false;
            self.failures.push(Failure {
                witness: witness.into(),
                lambda_order: r,
                residual: residual.coeff(r).to_string(),
            });
        }
    }

    pub fn record_bool(&mut self, witness: impl Into<String>, ok: bool) {
        self.cases += 1;
        if !ok {
            self.passed = false;
            self.failures.push(Failure { witness: witness.into(), lambda_order: 0, residual: "false".into() });
        }
    }

    /// Lowest λ-order among the failures.
    pub fn first_failing_order(&self) -> Option<usize> {
        self.failures.iter().map(|f| f.lambda_order).min()
    }

    pub fn absorb(&mut self, other: CheckReport) {
        self.cases += other.cases;
        self.passed &= other.passed;
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "pass" } else { "FAIL" };
        write!(f, "{verdict} {} ({} cases)", self.check, self.cases)?;
        for fail in &self.failures {
            write!(f, "\n  {} at λ^{}: {}", fail.witness, fail.lambda_order, fail.residual)?;
        }
        Ok(())
    }
}
