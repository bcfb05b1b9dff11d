//! Reduced adiabatic system for the log-log blow-up rate.
//!
//! Near collapse the modulation parameters obey, to leading order,
//!
//! ```text
//! b_τ = -c_ν e^{-π/√b},      a_τ = b - a²,
//! ```
//!
//! where `c_ν = 2ν₀²/M` is built from the ground-state tail amplitude ν₀
//! and the virial-type constant `M = (1/4)∫ r²Q² r^{d-1} dr`. Because `b`
//! decays only like `π²/ln²τ`, reaching focusing levels of order `1e-250`
//! requires integrating to `τ ~ 1e100` and tracking `ln L` and `ln(T-τ...)`
//! entirely in logarithmic variables; this module does both with an RK2
//! midpoint rule on a geometrically stretched step.
//!
//! The integrator exposes `L(τ)` through `ln L(τ) = -∫ a` and the remaining
//! time through a backward logsumexp of `δτ L²` plus the analytic tail
//! `L²/(2a)`, mirroring the full simulation's reconstruction so the two can
//! be compared checkpoint by checkpoint.

use serde::{Deserialize, Serialize};

/// Parameters of a reduced-system run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReducedConfig {
    /// c_ν = 2ν₀²/M from the ground-state tail (0 freezes b).
    pub c_nu: f64,
    pub b0: f64,
    /// Initial a; the adiabatic regime forgets it quickly (a → √b).
    pub a0: f64,
    pub tau_end: f64,
    /// Base step; the actual step is max(dtau, dtau/10 · τ).
    pub dtau: f64,
    /// Optional early stop once 1/L exceeds this focusing level.
    pub stop_focusing: Option<f64>,
}

impl ReducedConfig {
    pub fn standard(c_nu: f64) -> Self {
        Self {
            c_nu,
            b0: 0.5,
            a0: 0.5f64.sqrt(),
            tau_end: 1e100,
            dtau: 1e-3,
            stop_focusing: None,
        }
    }
}

/// Sampled trajectory of the reduced flow (log-spaced in τ).
#[derive(Debug, Clone)]
pub struct ReducedTrace {
    pub config: ReducedConfig,
    pub tau: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub ln_l: Vec<f64>,
    /// ln(T - t) at each sample (backward logsumexp + analytic tail).
    pub ln_t_minus_t: Vec<f64>,
}

fn b_rhs(c_nu: f64, b: f64) -> f64 {
    if b > 0.0 {
        -c_nu * (-std::f64::consts::PI / b.sqrt()).exp()
    } else {
        0.0
    }
}

/// One step of `a_τ = b - a²` with `b` frozen: the exact Riccati flow
/// `a(dt) = s (a0 + s tanh(s dt)) / (s + a0 tanh(s dt))`, `s = √b`, written
/// in Möbius form so every branch (a0 ≷ s) is covered. Returns the new `a`
/// and `∫ a dτ` over the step (the exact ln L decrement), both stable for
/// arbitrarily large `s dt`; an explicit rule would need `dt · a < 1`,
/// hopeless under the geometric τ stretching.
fn riccati_step(b: f64, a: f64, dt: f64) -> (f64, f64) {
    if b <= 0.0 {
        // a_τ = -a²: a(dt) = a/(1 + a dt), ∫ a = ln(1 + a dt)
        let denom = 1.0 + a * dt;
        return (a / denom, (a * dt).ln_1p());
    }
    let s = b.sqrt();
    let th = s * dt;
    let t = th.tanh();
    let c0 = a / s;
    let a_new = s * (c0 + t) / (1.0 + c0 * t);
    // ∫ a dτ = ln(cosh θ + c0 sinh θ) = θ + ln1p((1-c0)/2 · (e^{-2θ} - 1))
    let gm1 = 0.5 * (1.0 - c0) * (-2.0 * th).exp_m1();
    (a_new, th + gm1.ln_1p())
}

/// Integrate the reduced system with the RK2 midpoint rule, recording
/// roughly `samples_per_decade` samples per decade of τ.
pub fn run(config: &ReducedConfig, samples_per_decade: usize) -> ReducedTrace {
    let c = config.c_nu;
    let mut tau = 0.0f64;
    let mut a = config.a0;
    let mut b = config.b0;
    let mut ln_l = 0.0f64;

    let mut taus = vec![tau];
    let mut avals = vec![a];
    let mut bvals = vec![b];
    let mut lnls = vec![ln_l];
    // per-step increments kept for the backward time reconstruction
    let mut dt_ln: Vec<f64> = Vec::new(); // ln(δτ · L²) per step
    let mut step_end: Vec<usize> = Vec::new(); // steps taken at each sample

    let mut next_sample = 1e-2;
    let ratio = 10f64.powf(1.0 / samples_per_decade.max(1) as f64);
    let stop_ln_l = config.stop_focusing.map(|f| -(f.ln()));
    let mut steps = 0usize;
    while tau < config.tau_end {
        if let Some(s) = stop_ln_l {
            if ln_l <= s {
                break;
            }
        }
        let dt = config.dtau.max(config.dtau * 0.1 * tau);
        // b is slow and self-contained: RK2 midpoint
        let kb = b_rhs(c, b);
        let b_mid = (b + 0.5 * dt * kb).max(0.0);
        let b_new = (b + dt * b_rhs(c, b_mid)).max(0.0);
        // a relaxes on the fast scale 1/a: exact frozen-b Riccati step
        let (a_new, int_a) = riccati_step(b_mid, a, dt);
        ln_l -= int_a;
        a = a_new;
        b = b_new;
        tau += dt;
        dt_ln.push(dt.ln() + 2.0 * ln_l);
        steps += 1;
        if tau >= next_sample {
            taus.push(tau);
            avals.push(a);
            bvals.push(b);
            lnls.push(ln_l);
            step_end.push(steps);
            while next_sample <= tau {
                next_sample *= ratio;
            }
        }
    }
    taus.push(tau);
    avals.push(a);
    bvals.push(b);
    lnls.push(ln_l);
    step_end.push(steps);

    // ln(T - t) at each sample: logsumexp of the suffix of dt_ln plus the
    // analytic tail ln(L²/(2a)) beyond the last step, accumulated backward.
    let mut ln_tmt_at_step = vec![f64::NEG_INFINITY; steps + 1];
    let tail = 2.0 * ln_l - (2.0 * a).ln();
    let mut acc = tail;
    ln_tmt_at_step[steps] = acc;
    for j in (0..steps).rev() {
        let x = dt_ln[j];
        let (hi, lo) = if acc > x { (acc, x) } else { (x, acc) };
        acc = hi + (lo - hi).exp().ln_1p();
        ln_tmt_at_step[j] = acc;
    }
    let mut ln_tmt = Vec::with_capacity(taus.len());
    ln_tmt.push(ln_tmt_at_step[0]);
    for &s in &step_end {
        ln_tmt.push(ln_tmt_at_step[s]);
    }

    ReducedTrace {
        config: config.clone(),
        tau: taus,
        a: avals,
        b: bvals,
        ln_l: lnls,
        ln_t_minus_t: ln_tmt,
    }
}

impl ReducedTrace {
    /// ln of the log-log law `L_ll = (2π(T-t)/ln ln (1/(T-t)))^{1/2}` at
    /// sample j.
    pub fn ln_l_loglog(&self, j: usize) -> f64 {
        let ln_tmt = self.ln_t_minus_t[j];
        // divisor ln ln(1/(T-t)) = ln(-ln_tmt); its ln enters ln L.
        // Valid once T-t < 1/e.
        0.5 * ((2.0 * std::f64::consts::PI).ln() + ln_tmt - ((-ln_tmt).ln()).ln())
    }

    /// Ratio L(t)/L_ll(t) at sample j.
    pub fn loglog_ratio(&self, j: usize) -> f64 {
        (self.ln_l[j] - self.ln_l_loglog(j)).exp()
    }

    /// Index of the last sample with `1/L <= level`, i.e. the deepest sample
    /// not yet past the focusing level.
    pub fn sample_at_focusing(&self, level: f64) -> Option<usize> {
        let target = -(level.ln());
        self.ln_l.iter().rposition(|&l| l >= target)
    }
}

/// Closed-form check value: with c_ν = 0 and a(0) = √b0 the system sits at
/// the fixed point a ≡ √b0, b ≡ b0, so L(τ) = e^{-√b0 τ}.
pub fn fixed_point_ln_l(b0: f64, tau: f64) -> f64 {
    -b0.sqrt() * tau
}

/// Closed-form comparison for frozen b (c_ν = 0), general a(0):
/// a_τ = b0 - a² is a Riccati equation with solution
/// a(τ) = √b0 · tanh(√b0 τ + atanh(a0/√b0)) for |a0| < √b0.
pub fn frozen_b_a(b0: f64, a0: f64, tau: f64) -> f64 {
    let s = b0.sqrt();
    let arg = s * tau + (a0 / s).atanh();
    s * arg.tanh()
}
