//! Blow-up rate fitting against a catalogue of correction factors.
//!
//! A collapse with `L(t) ~ (T-t)^{1/2} / F(t)^{1/2}`-type corrections is
//! probed by evaluating, between consecutive checkpoints `i` and `i+1`,
//!
//! ```text
//! ρ_i = ln(L_i / L_{i+1}) / ln( (F_{i+1}/(T-t_{i+1})) / (F_i/(T-t_i)) )
//! ```
//!
//! so that `ρ ≡ 1/2` exactly when `L = ((T-t)/F)^{1/2}`. Candidate factors
//! `F` are `1` (pure square root), the one-parameter family
//! `ln^γ(1/(T-t))`, and the log-log factor `ln ln(1/(T-t))`. The winner
//! is the catalogue entry with the smallest root-mean-square discrepancy
//! `ε = rms(1/2 - ρ_i)` over a checkpoint window, with stabilization of
//! `ρ → 1/2` down the rows as the qualitative signature of the log-log
//! regime.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("trace has {0} checkpoints; at least 2 are required")]
    TooFewCheckpoints(usize),
}

/// Candidate correction factor F in `L ≈ ((T-t)/F)^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CorrectionForm {
    /// F = 1: the pure square-root rate.
    PureSquareRoot,
    /// F = ln^γ(1/(T-t)).
    LogPower { gamma: f64 },
    /// F = ln ln(1/(T-t)): the log-log correction.
    LogLog,
}

impl CorrectionForm {
    /// ln F at the checkpoint with the given ln(T-t) (requires T-t < 1/e
    /// for LogLog and T-t < 1 for LogPower).
    pub fn ln_f(&self, ln_tmt: f64) -> f64 {
        match *self {
            CorrectionForm::PureSquareRoot => 0.0,
            CorrectionForm::LogPower { gamma } => gamma * (-ln_tmt).ln(),
            CorrectionForm::LogLog => ((-ln_tmt).ln()).ln(),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            CorrectionForm::PureSquareRoot => "F=1".into(),
            CorrectionForm::LogPower { gamma } => format!("F=ln^{gamma}"),
            CorrectionForm::LogLog => "log-log".into(),
        }
    }
}

/// The catalogue of the reference tables: F = 1, the γ-family, and log-log.
pub fn catalogue() -> Vec<CorrectionForm> {
    let mut v = vec![CorrectionForm::PureSquareRoot];
    for gamma in [1.0, 0.6, 0.5, 0.4, 0.3, 0.25, 0.2, 0.15, 0.1] {
        v.push(CorrectionForm::LogPower { gamma });
    }
    v.push(CorrectionForm::LogLog);
    v
}

/// One checkpoint of a collapse trace, in logarithmic variables so that
/// focusing levels of 1e16 (or 1e250 for the reduced system) stay exact.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RatePoint {
    pub ln_l: f64,
    pub ln_t_minus_t: f64,
}

/// Consecutive-checkpoint exponents ρ_i for a correction form; output has
/// one entry fewer than the input.
pub fn fit_rho(points: &[RatePoint], form: CorrectionForm) -> Result<Vec<f64>, FitError> {
    if points.len() < 2 {
        return Err(FitError::TooFewCheckpoints(points.len()));
    }
    Ok(points
        .windows(2)
        .map(|w| {
            let num = w[0].ln_l - w[1].ln_l;
            let den = (form.ln_f(w[1].ln_t_minus_t) - w[1].ln_t_minus_t)
                - (form.ln_f(w[0].ln_t_minus_t) - w[0].ln_t_minus_t);
            num / den
        })
        .collect())
}

/// rms(1/2 - ρ) over the checkpoint window `[j0, j1)` of the ρ sequence.
pub fn discrepancy(rho: &[f64], j0: usize, j1: usize) -> f64 {
    let j1 = j1.min(rho.len());
    let n = j1.saturating_sub(j0);
    assert!(n > 0, "empty discrepancy window");
    let ss: f64 = rho[j0..j1].iter().map(|r| (0.5 - r) * (0.5 - r)).sum();
    (ss / n as f64).sqrt()
}

/// Absolute drift of ρ across the last `k` rows: max|ρ_i - ρ_{i-1}|.
/// A stabilized fit has both small ε and vanishing drift.
pub fn drift(rho: &[f64], k: usize) -> f64 {
    let start = rho.len().saturating_sub(k);
    rho[start.max(1) - 1..]
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max)
}

/// Full fitting report over a catalogue.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub entries: Vec<FitEntry>,
    /// Label of the ε-smallest entry over the window.
    pub best: String,
    /// true if ρ of the log-log entry stabilizes towards 1/2 down the rows
    /// (|1/2-ρ| smaller in the last row than in the first).
    pub loglog_stabilizes: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitEntry {
    pub label: String,
    pub form: CorrectionForm,
    pub rho: Vec<f64>,
    pub epsilon: f64,
    pub drift_last: f64,
}

/// Evaluate every catalogue entry on the checkpoints, with ε computed over
/// the window `[j0, j1)` of ρ rows and drift over the last `drift_rows`.
pub fn fitting_report(
    points: &[RatePoint],
    j0: usize,
    j1: usize,
    drift_rows: usize,
) -> Result<FitReport, FitError> {
    let mut entries = Vec::new();
    for form in catalogue() {
        let rho = fit_rho(points, form)?;
        let epsilon = discrepancy(&rho, j0, j1);
        let drift_last = drift(&rho, drift_rows);
        entries.push(FitEntry {
            label: form.label(),
            form,
            rho,
            epsilon,
            drift_last,
        });
    }
    let best = entries
        .iter()
        .min_by(|a, b| a.epsilon.total_cmp(&b.epsilon))
        .unwrap()
        .label
        .clone();
    let ll = entries.iter().find(|e| e.form == CorrectionForm::LogLog).unwrap();
    let loglog_stabilizes = {
        let first = (0.5 - ll.rho[0]).abs();
        let last = (0.5 - ll.rho[ll.rho.len() - 1]).abs();
        // either the deviation shrinks down the rows, or it is already at
        // the 1/2 plateau to within fitting noise
        last < first || last < 1e-3
    };
    Ok(FitReport {
        entries,
        best,
        loglog_stabilizes,
    })
}

/// Manufacture checkpoints obeying `L = ((T-t)/F)^{1/2}` exactly at the
/// focusing levels `1/L = levels[i]`; used as the fitting oracle.
pub fn manufactured_points(form: CorrectionForm, levels: &[f64]) -> Vec<RatePoint> {
    levels
        .iter()
        .map(|&level| {
            let ln_l = -(level.ln());
            // solve 2 ln L = ln(T-t) - ln F(T-t) for ln(T-t) by iteration
            let mut ln_tmt = 2.0 * ln_l;
            for _ in 0..200 {
                ln_tmt = 2.0 * ln_l + form.ln_f(ln_tmt);
            }
            RatePoint { ln_l, ln_t_minus_t: ln_tmt }
        })
        .collect()
}
