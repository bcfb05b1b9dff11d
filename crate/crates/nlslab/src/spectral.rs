//! Numerically-assisted verification of Spectral Properties 1 and 2.
//!
//! The linearized operators around the ground state,
//!
//! ```text
//! L₁ = -Δ + V₁,    L₂ = -Δ + V₂,    V₁ = (2σ+1)/σ · σ... = (4/d+1) V₂,
//! ```
//!
//! act channel by channel over spherical harmonics; on the k-th channel the
//! centrifugal term `k(k+d-2)/r²` is added. Three computations feed the
//! verdicts:
//!
//! 1. **Index counting** ([`count_index`]): the Morse index of `L^{(k)}`
//!    equals the number of zeros of the solution of the radial IVP
//!    `-U'' - ((d-1)/r)U' + (V + k(k+d-2)/r²)U = 0`, `U(0)=1`, `U'(0)=0`.
//!    The `1/r²` singularity is removed by `U = r^k Ũ`; counting stops once
//!    the positivity criterion fires (L₁) or the free-region tail
//!    `C₁ + C₂ r^{2-d-2k}` stabilizes.
//! 2. **Bilinear forms** ([`bilinear_matrix`], [`harmonic_forms`]): BVP
//!    solves `L u = f` with the artificial boundary condition
//!    `u(L) + (L/(d-2+2k)) u_r(L) = 0` (matching the decaying free
//!    solution), then `K_ij = ⟨f_i, u_j⟩`.
//! 3. **Verdict assembly** ([`assemble_verdict`]): a pure decision table
//!    over indices and form signs, per Theorems 3.11-3.12 of the paper.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::ChebyshevGrid;
use crate::ground_state::GroundStateProfile;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("IVP step size collapsed at r = {0:.4}")]
    StepCollapse(f64),
    #[error("BVP solve is ill-conditioned (residual {0:.3e})")]
    IllConditioned(f64),
    #[error("tail did not stabilize within the integration domain")]
    NoTailStabilization,
}

/// Which linearized operator a computation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Operator {
    L1,
    L2,
}

impl Operator {
    pub fn potential<'a>(&self, profile: &'a GroundStateProfile) -> &'a [f64] {
        match self {
            Operator::L1 => &profile.v1_vals,
            Operator::L2 => &profile.v2_vals,
        }
    }
}

/// Tail behavior of the IVP solution in the free region.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum TailClass {
    /// k = 0: `U → C₁/r^{d-2} + C₂` with the extracted constants.
    Constant { c1: f64, c2: f64 },
    /// k > 0: `|U| ~ r^k` (measured log-log slope attached).
    PolynomialGrowth { slope: f64 },
    /// k > 0: `|U| ~ r^{2-d-k}`.
    PolynomialDecay { slope: f64 },
}

/// Why zero counting stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// Prop. 3.1 fired at r0 (L₁, d >= 3): no further zeros possible.
    CriterionSatisfied,
    /// C₂ (or the log-log slope) stabilized: solution is in the free region.
    TailStabilized,
    /// Integration reached the hard stop r = 200.
    DomainEnd,
}

/// Result of one channel's index computation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexResult {
    pub dim: u32,
    pub harmonic: u32,
    pub operator: Operator,
    pub zero_count: usize,
    /// Radii of the detected sign changes (bisection-refined).
    pub zeros: Vec<f64>,
    pub tail: TailClass,
    pub termination_radius: f64,
    pub termination: Termination,
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) integration of the 2d system y' = f(r, y)
// ---------------------------------------------------------------------------

/// One accepted step: endpoint state plus the derivative, enough for cubic
/// Hermite dense output inside the step.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub r: f64,
    pub u: f64,
    pub up: f64,
}

/// Adaptive DP(5,4) with tolerances atol=1e-12, rtol=1e-10 and a capped
/// step so no oscillation can hide inside a single step.
fn integrate<F: FnMut(f64, [f64; 2]) -> [f64; 2]>(
    mut f: F,
    r0: f64,
    r1: f64,
    y0: [f64; 2],
    max_step: f64,
) -> Result<Vec<Node>, SpectralError> {
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    // embedded 4th-order weights
    const E1: f64 = 5179.0 / 57600.0;
    const E3: f64 = 7571.0 / 16695.0;
    const E4: f64 = 393.0 / 640.0;
    const E5: f64 = -92097.0 / 339200.0;
    const E6: f64 = 187.0 / 2100.0;
    const E7: f64 = 1.0 / 40.0;
    const ATOL: f64 = 1e-12;
    const RTOL: f64 = 1e-10;

    let mut r = r0;
    let mut y = y0;
    let mut k1 = f(r, y);
    let mut h = 1e-6f64.min(max_step);
    let mut out = vec![Node { r, u: y[0], up: y[1] }];
    let add = |y: [f64; 2], h: f64, ks: &[([f64; 2], f64)]| -> [f64; 2] {
        let mut o = y;
        for (k, c) in ks {
            o[0] += h * c * k[0];
            o[1] += h * c * k[1];
        }
        o
    };
    while r < r1 {
        if h < 1e-14 {
            return Err(SpectralError::StepCollapse(r));
        }
        if r + h > r1 {
            h = r1 - r;
        }
        let k2 = f(r + 0.2 * h, add(y, h, &[(k1, A21)]));
        let k3 = f(r + 0.3 * h, add(y, h, &[(k1, A31), (k2, A32)]));
        let k4 = f(r + 0.8 * h, add(y, h, &[(k1, A41), (k2, A42), (k3, A43)]));
        let k5 = f(
            r + 8.0 / 9.0 * h,
            add(y, h, &[(k1, A51), (k2, A52), (k3, A53), (k4, A54)]),
        );
        let k6 = f(
            r + h,
            add(y, h, &[(k1, A61), (k2, A62), (k3, A63), (k4, A64), (k5, A65)]),
        );
        let y5 = add(y, h, &[(k1, B1), (k3, B3), (k4, B4), (k5, B5), (k6, B6)]);
        let k7 = f(r + h, y5);
        let y4 = add(
            y,
            h,
            &[(k1, E1), (k3, E3), (k4, E4), (k5, E5), (k6, E6), (k7, E7)],
        );
        let mut err = 0.0f64;
        for i in 0..2 {
            let sc = ATOL + RTOL * y5[i].abs().max(y[i].abs());
            err = err.max(((y5[i] - y4[i]) / sc).abs());
        }
        if err <= 1.0 {
            r += h;
            y = y5;
            k1 = k7; // FSAL
            out.push(Node { r, u: y[0], up: y[1] });
        }
        let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h = (h * fac).min(max_step);
    }
    Ok(out)
}

/// Cubic Hermite value of U inside a step.
fn hermite(a: &Node, b: &Node, r: f64) -> f64 {
    let h = b.r - a.r;
    let t = (r - a.r) / h;
    let (t2, t3) = (t * t, t * t * t);
    (2.0 * t3 - 3.0 * t2 + 1.0) * a.u
        + (t3 - 2.0 * t2 + t) * h * a.up
        + (-2.0 * t3 + 3.0 * t2) * b.u
        + (t3 - t2) * h * b.up
}

/// Derivative of the cubic Hermite interpolant inside a step.
fn hermite_deriv(a: &Node, b: &Node, r: f64) -> f64 {
    let h = b.r - a.r;
    let t = (r - a.r) / h;
    let t2 = t * t;
    ((6.0 * t2 - 6.0 * t) * a.u
        + (3.0 * t2 - 4.0 * t + 1.0) * h * a.up
        + (-6.0 * t2 + 6.0 * t) * b.u
        + (3.0 * t2 - 2.0 * t) * h * b.up)
        / h
}

/// Strict sign changes of U over the accepted nodes, each refined to 1e-10
/// in r by bisection on the Hermite interpolant.
fn sign_changes(nodes: &[Node], r_max: f64) -> Vec<f64> {
    let mut zeros = Vec::new();
    for w in nodes.windows(2) {
        if w[1].r > r_max {
            break;
        }
        if w[0].u == 0.0 {
            continue; // touching counted as no crossing
        }
        if w[0].u * w[1].u < 0.0 {
            let (mut lo, mut hi) = (w[0].r, w[1].r);
            let flo = w[0].u;
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                if flo * hermite(&w[0], &w[1], mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
    }
    zeros
}

/// Potential evaluation off the collocation nodes: barycentric in the
/// Chebyshev variable, hard zero past r = 90 where the stored values are
/// below rounding (the profile decays like e^{-2σr}).
pub struct PotentialInterp<'a> {
    grid: &'a ChebyshevGrid,
    vals: &'a [f64],
    length: f64,
}

impl<'a> PotentialInterp<'a> {
    pub fn new(grid: &'a ChebyshevGrid, vals: &'a [f64]) -> Self {
        let length = grid.length().expect("potentials live on a truncated grid");
        Self { grid, vals, length }
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r >= 0.9 * self.length {
            return 0.0;
        }
        self.grid.interp_z(self.vals, 1.0 - 2.0 * r / self.length)
    }
}

/// IVP zero count for the operator on the k-th harmonic channel.
pub fn count_index(
    d: u32,
    k: u32,
    operator: Operator,
    profile: &GroundStateProfile,
) -> Result<IndexResult, SpectralError> {
    let v = PotentialInterp::new(&profile.grid, operator.potential(profile));
    let dd = d as f64;
    let kk = k as f64;
    let coeff = dd - 1.0 + 2.0 * kk;
    // -Ũ'' - (coeff/r) Ũ' + V Ũ = 0
    let rhs = |r: f64, y: [f64; 2]| [y[1], -(coeff / r) * y[1] + v.eval(r) * y[0]];
    let eps = 1e-8;
    let v0 = v.eval(0.0);
    let y0 = [
        1.0 + v0 * eps * eps / (2.0 * (dd + 2.0 * kk)),
        v0 * eps / (dd + 2.0 * kk),
    ];
    let r_hard = 200.0;
    let nodes = integrate(rhs, eps, r_hard, y0, 1.0)?;

    let (tail, tail_radius) = classify_tail(&nodes, d, k)?;
    // Prop. 3.1 stopping rule for L1, d >= 3: product positive at r0 = 6 and
    // V+ below the Hardy bound beyond it
    let mut termination = Termination::TailStabilized;
    let mut termination_radius = tail_radius;
    if operator == Operator::L1 && d >= 3 && k == 0 {
        if let Some(pe) = positivity_evidence(&nodes, &v, d, 6.0) {
            if pe.holds {
                termination = Termination::CriterionSatisfied;
                termination_radius = 6.0;
            }
        }
    }
    // count over the full integrated range; the stopping rule only records
    // why no zero beyond it is possible, and the count must agree
    let zeros = sign_changes(&nodes, r_hard);
    Ok(IndexResult {
        dim: d,
        harmonic: k,
        operator,
        zero_count: zeros.len(),
        zeros,
        tail,
        termination_radius,
        termination,
    })
}

/// Tail classification from the integrated nodes (spec of `classify_tail`):
/// k = 0 extracts (C₁, C₂) from consecutive samples of `C₁/r^{d-2} + C₂`
/// and requires C₂ to hold still over the last 20 samples; k > 0 measures
/// the log-log slope of |U| = r^k |Ũ| and snaps it to +k or 2-d-k.
pub fn classify_tail(nodes: &[Node], d: u32, k: u32) -> Result<(TailClass, f64), SpectralError> {
    let dd = d as f64;
    let samples: Vec<&Node> = nodes.iter().filter(|n| n.r >= 120.0).collect();
    if samples.len() < 22 {
        return Err(SpectralError::NoTailStabilization);
    }
    if k == 0 {
        // U = C1/r^{d-2} + C2 gives U' = C1 (2-d) r^{1-d}; reading C1 off
        // the derivative avoids the cancellation of differencing two nearly
        // equal U values (C2 dominates by many orders in the far field)
        let mut c2s = Vec::new();
        for s in &samples {
            let p = s.r.powi(2 - dd as i32);
            let c1 = s.up * s.r / ((2.0 - dd) * p);
            let c2 = s.u - c1 * p;
            c2s.push((s.r, c1, c2));
        }
        let last = &c2s[c2s.len() - 20..];
        let (_, c1, c2) = *last.last().unwrap();
        let scale = c2.abs().max(1e-300);
        let stable = last.iter().all(|&(_, _, c)| ((c - c2) / scale).abs() < 1e-6);
        if !stable {
            return Err(SpectralError::NoTailStabilization);
        }
        Ok((TailClass::Constant { c1, c2 }, last[0].0))
    } else {
        let a = samples[0];
        let b = *samples.last().unwrap();
        // |U| = r^k |Ũ|
        let slope = ((b.u.abs().ln() + k as f64 * b.r.ln())
            - (a.u.abs().ln() + k as f64 * a.r.ln()))
            / (b.r.ln() - a.r.ln());
        let growth = k as f64;
        let decay = 2.0 - dd - k as f64;
        if (slope - growth).abs() <= (slope - decay).abs() {
            Ok((TailClass::PolynomialGrowth { slope }, a.r))
        } else {
            Ok((TailClass::PolynomialDecay { slope }, a.r))
        }
    }
}

/// Evidence pair of Prop. 3.1 at r0 (Table 7).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PositivityEvidence {
    pub r0: f64,
    /// ∂_r u(r0) · u(r0); must be positive.
    pub product: f64,
    /// min over sampled r >= r0 of (d-2)²/(4r²) - V₊(r); must be >= 0.
    pub bound_margin: f64,
    /// The quantity the reference table prints alongside:
    /// -V₁(r0) - (d-2)/(4 r0). Reported for comparison only; the
    /// proposition's own bound is the one enforced.
    pub table_bound: f64,
    pub holds: bool,
}

fn positivity_evidence(
    nodes: &[Node],
    v: &PotentialInterp,
    d: u32,
    r0: f64,
) -> Option<PositivityEvidence> {
    if d < 3 {
        return None; // the d=2 branch needs the log-weighted bound
    }
    let dd = d as f64;
    // Hermite-interpolate u, u' at r0
    let w = nodes.windows(2).find(|w| w[0].r <= r0 && r0 <= w[1].r)?;
    let u = hermite(&w[0], &w[1], r0);
    let up = hermite_deriv(&w[0], &w[1], r0);
    let product = u * up;
    let mut margin = f64::INFINITY;
    let mut r = r0;
    while r <= 200.0 {
        let vp = v.eval(r).max(0.0);
        margin = margin.min((dd - 2.0) * (dd - 2.0) / (4.0 * r * r) - vp);
        r += 0.05;
    }
    let table_bound = -v.eval(r0) - (dd - 2.0) / (4.0 * r0);
    Some(PositivityEvidence {
        r0,
        product,
        bound_margin: margin,
        table_bound,
        holds: product > 0.0 && margin >= 0.0,
    })
}

/// Prop. 3.1 evidence for the L₁ radial channel at r0 (Table 7 row).
pub fn positivity_criterion(
    d: u32,
    profile: &GroundStateProfile,
    r0: f64,
) -> Result<PositivityEvidence, SpectralError> {
    let v = PotentialInterp::new(&profile.grid, &profile.v1_vals);
    let dd = d as f64;
    let coeff = dd - 1.0;
    let rhs = |r: f64, y: [f64; 2]| [y[1], -(coeff / r) * y[1] + v.eval(r) * y[0]];
    let eps = 1e-8;
    let v0 = v.eval(0.0);
    let y0 = [1.0 + v0 * eps * eps / (2.0 * dd), v0 * eps / dd];
    let nodes = integrate(rhs, eps, 200.0, y0, 1.0)?;
    positivity_evidence(&nodes, &v, d, r0).ok_or(SpectralError::NoTailStabilization)
}

// ---------------------------------------------------------------------------
// BVP solves and bilinear forms
// ---------------------------------------------------------------------------

/// Boundary condition at the outer edge of the BVP domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OuterBc {
    /// u(L) + (L/(d-2+2k)) u_r(L) = 0: matches the decaying free solution
    /// C₂ r^{2-d-2k} exactly, emulating u(∞)=0.
    Artificial,
    /// u_r(L) = 0: the cruder condition, kept for the sensitivity check.
    NeumannAtL,
}

/// Solve `(-Δ_k + V) u = f` on the profile's grid with `u_r(0)=0` (k=0) or
/// `u(0)=0` (k>0) at the origin and the selected outer condition.
pub fn solve_operator_bvp(
    d: u32,
    k: u32,
    potential: &[f64],
    rhs: &[f64],
    grid: &ChebyshevGrid,
    bc: OuterBc,
) -> Result<Vec<f64>, SpectralError> {
    let n = grid.len();
    let dd = d as f64;
    let kk = k as f64;
    let length = grid.length().expect("BVP requires a truncated grid");
    let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let r = grid.xi[i];
        for j in 0..n {
            a[(i, j)] = -grid.d2[(i, j)];
            if i > 0 {
                a[(i, j)] += -(dd - 1.0) / r * grid.d1[(i, j)];
            }
        }
        a[(i, i)] += potential[i];
        if k > 0 && i > 0 {
            a[(i, i)] += kk * (kk + dd - 2.0) / (r * r);
        }
    }
    let mut b = nalgebra::DVector::from_column_slice(rhs);
    // origin row
    if k == 0 {
        for j in 0..n {
            a[(0, j)] = grid.d1[(0, j)];
        }
    } else {
        for j in 0..n {
            a[(0, j)] = 0.0;
        }
        a[(0, 0)] = 1.0;
    }
    b[0] = 0.0;
    // outer row (last node is r = L)
    let last = n - 1;
    match bc {
        OuterBc::Artificial => {
            let c = length / (dd - 2.0 + 2.0 * kk);
            for j in 0..n {
                a[(last, j)] = c * grid.d1[(last, j)];
            }
            a[(last, last)] += 1.0;
        }
        OuterBc::NeumannAtL => {
            for j in 0..n {
                a[(last, j)] = grid.d1[(last, j)];
            }
        }
    }
    b[last] = 0.0;
    let lu = a.clone().lu();
    let x = lu
        .solve(&b)
        .ok_or(SpectralError::IllConditioned(f64::INFINITY))?;
    // residual check in place of a condition estimate
    let res = (&a * &x - &b).amax();
    let scale = b.amax().max(1.0);
    if !res.is_finite() || res > 1e-4 * scale {
        return Err(SpectralError::IllConditioned(res / scale));
    }
    Ok(x.as_slice().to_vec())
}

/// The K/J blocks of Definition 3.4 with determinants and symmetry
/// residuals; forms are evaluated as ⟨rhs_i, u_j⟩, never by re-applying
/// the operator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BilinearFormReport {
    pub dim: u32,
    pub k11: f64,
    pub k12: f64,
    pub k21: f64,
    pub k22: f64,
    pub kk: f64,
    pub j11: f64,
    pub j12: f64,
    pub j21: f64,
    pub j22: f64,
    pub jj: f64,
    pub sym_k: f64,
    pub sym_j: f64,
}

pub fn bilinear_matrix(
    d: u32,
    profile: &GroundStateProfile,
) -> Result<BilinearFormReport, SpectralError> {
    let g = &profile.grid;
    let q = &profile.q_vals;
    let q1 = &profile.q1_vals;
    let q2 = &profile.q2_vals;
    let u1 = solve_operator_bvp(d, 0, &profile.v1_vals, q, g, OuterBc::Artificial)?;
    let u2 = solve_operator_bvp(d, 0, &profile.v1_vals, q1, g, OuterBc::Artificial)?;
    let z1 = solve_operator_bvp(d, 0, &profile.v2_vals, q1, g, OuterBc::Artificial)?;
    let z2 = solve_operator_bvp(d, 0, &profile.v2_vals, q2, g, OuterBc::Artificial)?;
    let ip = |f: &[f64], h: &[f64]| g.inner_product(f, h, d);
    let (k11, k12, k21, k22) = (ip(q, &u1), ip(q, &u2), ip(q1, &u1), ip(q1, &u2));
    let (j11, j12, j21, j22) = (ip(q1, &z1), ip(q1, &z2), ip(q2, &z1), ip(q2, &z2));
    Ok(BilinearFormReport {
        dim: d,
        k11,
        k12,
        k21,
        k22,
        kk: k11 * k22 - k12 * k21,
        j11,
        j12,
        j21,
        j22,
        jj: j11 * j22 - j12 * j21,
        sym_k: (k12 / k21 - 1.0).abs(),
        sym_j: (j12 / j21 - 1.0).abs(),
    })
}

/// Spectral Property 2 form: solve L₂Z = Q, return ⟨Q, Z⟩ (= ⟨L₂Z, Z⟩).
pub fn property2_form(
    d: u32,
    profile: &GroundStateProfile,
    bc: OuterBc,
) -> Result<f64, SpectralError> {
    let g = &profile.grid;
    let z = solve_operator_bvp(d, 0, &profile.v2_vals, &profile.q_vals, g, bc)?;
    Ok(g.inner_product(&profile.q_vals, &z, d))
}

/// Forms on the harmonic channels: K₁₁⁽¹⁾ = ⟨rQ, U⟩ with L₁⁽¹⁾U = rQ,
/// J₁₁⁽¹⁾ = ⟨Q_r, Z⟩ with L₂⁽¹⁾Z = Q_r, and K₁₁⁽²⁾ analogously on k=2
/// when the k=2 index is nonzero (d = 11, 12).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HarmonicForms {
    pub k11_1: f64,
    pub j11_1: f64,
    pub k11_2: Option<f64>,
}

pub fn harmonic_forms(
    d: u32,
    profile: &GroundStateProfile,
    need_k2: bool,
) -> Result<HarmonicForms, SpectralError> {
    let g = &profile.grid;
    let rq: Vec<f64> = g
        .xi
        .iter()
        .zip(&profile.q_vals)
        .map(|(&r, &q)| r * q)
        .collect();
    let u = solve_operator_bvp(d, 1, &profile.v1_vals, &rq, g, OuterBc::Artificial)?;
    let z = solve_operator_bvp(d, 1, &profile.v2_vals, &profile.qr_vals, g, OuterBc::Artificial)?;
    let k11_1 = g.inner_product(&rq, &u, d);
    let j11_1 = g.inner_product(&profile.qr_vals, &z, d);
    let k11_2 = if need_k2 {
        let u2 = solve_operator_bvp(d, 2, &profile.v1_vals, &rq, g, OuterBc::Artificial)?;
        Some(g.inner_product(&rq, &u2, d))
    } else {
        None
    };
    Ok(HarmonicForms { k11_1, j11_1, k11_2 })
}

// ---------------------------------------------------------------------------
// Verdict assembly
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    HoldsGeneral,
    HoldsRadialOnly,
    Indecisive,
    Incomplete,
}

/// Indices per channel, as needed by the decision table.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ChannelIndices {
    pub l1_radial: usize,
    pub l2_radial: usize,
    pub l1_k1: usize,
    pub l2_k1: usize,
    pub l1_k2: usize,
}

/// Scalar evidence feeding the decision table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictEvidence {
    pub indices: ChannelIndices,
    pub k11: f64,
    pub k22: f64,
    pub kk: f64,
    pub jj: f64,
    pub l2z: f64,
    pub k11_1: f64,
    pub k11_2: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralVerdict {
    pub property1: Verdict,
    pub property2: Verdict,
    /// Human-readable evidence chain (one clause per requirement).
    pub evidence: Vec<String>,
}

/// Pure decision table over indices and signs (Theorems 3.11-3.12).
///
/// Radial requirement, Property 1: ind(L₁)=2 with K₁₁<0, K₂₂<0, KK>0 and
/// ind(L₂)=1 with JJ<0. Property 2 swaps the L₂ radial clause for
/// ind(L₂)=1 with ⟨L₂Z,Z⟩<0. General case additionally needs k=1
/// (ind(L₁⁽¹⁾)=1 with K₁₁⁽¹⁾<0, ind(L₂⁽¹⁾)=0) and k=2 (ind(L₁⁽²⁾)=0, or a
/// negative K₁₁⁽²⁾ direction when the index is positive). A positive-index
/// channel with no exhibited negative direction downgrades the general
/// verdict to indecisive while radial evidence stands.
pub fn assemble_verdict(ev: &VerdictEvidence) -> SpectralVerdict {
    let ix = &ev.indices;
    let mut notes = Vec::new();
    let radial_l1 = ix.l1_radial == 2 && ev.k11 < 0.0 && ev.k22 < 0.0 && ev.kk > 0.0;
    notes.push(format!(
        "radial L1: ind={} K11={:+.3e} K22={:+.3e} KK={:+.3e} -> {}",
        ix.l1_radial, ev.k11, ev.k22, ev.kk,
        if radial_l1 { "ok" } else { "fail" }
    ));
    let radial_l2_p1 = ix.l2_radial == 1 && ev.jj < 0.0;
    notes.push(format!(
        "radial L2 (P1): ind={} JJ={:+.3e} -> {}",
        ix.l2_radial, ev.jj,
        if radial_l2_p1 { "ok" } else { "fail" }
    ));
    let radial_l2_p2 = ix.l2_radial == 1 && ev.l2z < 0.0;
    notes.push(format!(
        "radial L2 (P2): ind={} <L2Z,Z>={:+.3e} -> {}",
        ix.l2_radial, ev.l2z,
        if radial_l2_p2 { "ok" } else { "fail" }
    ));
    let k1_ok = ix.l1_k1 == 1 && ev.k11_1 < 0.0 && ix.l2_k1 == 0;
    notes.push(format!(
        "k=1: ind(L1)={} K11^(1)={:+.3e} ind(L2)={} -> {}",
        ix.l1_k1, ev.k11_1, ix.l2_k1,
        if k1_ok { "ok" } else { "fail" }
    ));
    let k2_ok = if ix.l1_k2 == 0 {
        true
    } else {
        // positive index needs an exhibited negative direction
        matches!(ev.k11_2, Some(v) if v < 0.0)
    };
    notes.push(format!(
        "k=2: ind(L1)={} K11^(2)={:?} -> {}",
        ix.l1_k2, ev.k11_2,
        if k2_ok { "ok" } else { "fail (no negative direction exhibited)" }
    ));

    let classify = |radial: bool| -> Verdict {
        match (radial, k1_ok && k2_ok) {
            (true, true) => Verdict::HoldsGeneral,
            (true, false) => Verdict::HoldsRadialOnly,
            (false, _) => Verdict::Indecisive,
        }
    };
    SpectralVerdict {
        property1: classify(radial_l1 && radial_l2_p1),
        property2: classify(radial_l1 && radial_l2_p2),
        evidence: notes,
    }
}

/// 3d cubic (L²-supercritical) cross-check: K₁₁ = ⟨Q, U₁⟩ with L₁U₁ = Q
/// and J₁₁ = ⟨Q₁, Z₁⟩ with L₂Z₁ = Q₁ = Q + rQ_r (σ = 1).
pub fn supercritical_crosscheck(
    profile: &GroundStateProfile,
) -> Result<(f64, f64), SpectralError> {
    let g = &profile.grid;
    let u1 = solve_operator_bvp(3, 0, &profile.v1_vals, &profile.q_vals, g, OuterBc::Artificial)?;
    let z1 = solve_operator_bvp(3, 0, &profile.v2_vals, &profile.q1_vals, g, OuterBc::Artificial)?;
    Ok((
        g.inner_product(&profile.q_vals, &u1, 3),
        g.inner_product(&profile.q1_vals, &z1, 3),
    ))
}

// ---------------------------------------------------------------------------
// Finite-difference Sturm oracle
// ---------------------------------------------------------------------------

/// Negative-eigenvalue count of the weighted finite-difference
/// discretization of `-(1/w)(w u')' + V - shift`, `w = r^{d-1+2k}`, on a
/// uniform grid (Dirichlet at L): similarity-symmetrized tridiagonal, then
/// the LDLᵀ inertia count. Independent of every spectral-collocation
/// ingredient, so it serves as the brute-force oracle for [`count_index`].
pub fn fd_negative_count(
    d: u32,
    k: u32,
    operator: Operator,
    profile: &GroundStateProfile,
    m: usize,
    length: f64,
    shift: f64,
) -> usize {
    let v = PotentialInterp::new(&profile.grid, operator.potential(profile));
    let h = length / m as f64;
    let a = (d - 1 + 2 * k) as f64;
    let n = m - 1;
    let r: Vec<f64> = (1..m).map(|i| h * i as f64).collect();
    let w: Vec<f64> = r.iter().map(|&ri| ri.powf(a)).collect();
    let wp: Vec<f64> = r.iter().map(|&ri| (ri + 0.5 * h).powf(a)).collect();
    let wm: Vec<f64> = r.iter().map(|&ri| (ri - 0.5 * h).max(1e-300).powf(a)).collect();
    let mut diag: Vec<f64> = (0..n)
        .map(|i| (wp[i] + wm[i]) / (w[i] * h * h) + v.eval(r[i]) - shift)
        .collect();
    let off: Vec<f64> = (0..n - 1)
        .map(|i| -wp[i] / (h * h * (w[i] * w[i + 1]).sqrt()))
        .collect();
    let mut negs = 0usize;
    if diag[0] < 0.0 {
        negs += 1;
    }
    for i in 1..n {
        diag[i] -= off[i - 1] * off[i - 1] / diag[i - 1];
        if diag[i] < 0.0 {
            negs += 1;
        }
    }
    negs
}

/// Bisect on [`fd_negative_count`]'s shift to locate the least eigenvalue
/// of the channel operator (used for the d=11,12 L₂⁽¹⁾ check).
pub fn fd_least_eigenvalue(
    d: u32,
    k: u32,
    operator: Operator,
    profile: &GroundStateProfile,
    m: usize,
    length: f64,
) -> f64 {
    let (mut lo, mut hi) = (-1.0f64, 0.0f64);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if fd_negative_count(d, k, operator, profile, m, length, mid) > 0 {
            // an eigenvalue lies below mid: the least one is in [lo, mid)
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_nodes(d: u32, c1: f64, c2: f64) -> Vec<Node> {
        // U = c1/r^{d-2} + c2 on a uniform sample
        (0..400)
            .map(|i| {
                let r = 100.0 + 0.25 * i as f64;
                let p = r.powi(2 - d as i32);
                Node {
                    r,
                    u: c1 * p + c2,
                    up: c1 * (2.0 - d as f64) * p / r,
                }
            })
            .collect()
    }

    #[test]
    fn tail_recovers_free_solution_constants() {
        let nodes = free_nodes(5, 3.0, 7.0);
        let (tail, _) = classify_tail(&nodes, 5, 0).unwrap();
        match tail {
            TailClass::Constant { c1, c2 } => {
                assert!((c1 - 3.0).abs() < 1e-8);
                assert!((c2 - 7.0).abs() < 1e-10);
            }
            _ => panic!("expected constant tail"),
        }
    }

    #[test]
    fn synthetic_growth_tail() {
        // U = r² in the k=2, d=11 channel: Ũ = 1, slope +k
        let nodes: Vec<Node> = (0..400)
            .map(|i| {
                let r = 100.0 + 0.25 * i as f64;
                Node { r, u: 1.0, up: 0.0 }
            })
            .collect();
        let (tail, _) = classify_tail(&nodes, 11, 2).unwrap();
        assert!(matches!(tail, TailClass::PolynomialGrowth { .. }));
    }

    #[test]
    fn zero_potential_has_no_zeros() {
        // V = 0: the IVP solution is identically 1 in exact arithmetic
        let rhs = |r: f64, y: [f64; 2]| [y[1], -(4.0 / r) * y[1]];
        let nodes = integrate(rhs, 1e-8, 200.0, [1.0, 0.0], 1.0).unwrap();
        assert!(sign_changes(&nodes, 200.0).is_empty());
        let end = nodes.last().unwrap();
        assert!((end.u - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dp_integrator_matches_harmonic_oscillator() {
        // u'' = -u, u(0)=0, u'(0)=1 -> sin; zeros at multiples of pi
        let rhs = |_r: f64, y: [f64; 2]| [y[1], -y[0]];
        let nodes = integrate(rhs, 0.0, 20.0, [0.0, 1.0], 0.5).unwrap();
        let zeros = sign_changes(&nodes, 20.0);
        assert_eq!(zeros.len(), 6);
        for (i, z) in zeros.iter().enumerate() {
            assert!((z - (i + 1) as f64 * std::f64::consts::PI).abs() < 1e-7);
        }
        let end = nodes.last().unwrap();
        assert!((end.u - 20.0f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn manufactured_bvp_solution() {
        // u* = e^{-r²}, f = -Δu* + V u* with V = 1: recover u* to 1e-7
        let g = ChebyshevGrid::truncated(257, 40.0).unwrap();
        let d = 5u32;
        let v = vec![1.0; g.len()];
        let ustar: Vec<f64> = g.xi.iter().map(|&r| (-r * r).exp()).collect();
        // -Δu* = -(u*'' + (d-1)/r u*') ; u*' = -2r e^{-r²}, u*'' = (4r²-2)e^{-r²}
        let f: Vec<f64> = g
            .xi
            .iter()
            .map(|&r| {
                let e = (-r * r).exp();
                -((4.0 * r * r - 2.0) * e) + (d as f64 - 1.0) * 2.0 * e + e
            })
            .collect();
        let u = solve_operator_bvp(d, 0, &v, &f, &g, OuterBc::Artificial).unwrap();
        let err = u
            .iter()
            .zip(&ustar)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-7, "err={err:.3e}");
    }

    #[test]
    fn verdict_decision_table() {
        let ix = ChannelIndices {
            l1_radial: 2,
            l2_radial: 1,
            l1_k1: 1,
            l2_k1: 0,
            l1_k2: 0,
        };
        let mut ev = VerdictEvidence {
            indices: ix,
            k11: -42.0,
            k22: -490.0,
            kk: 20724.0,
            jj: -121311.0,
            l2z: -107.0,
            k11_1: -338.0,
            k11_2: None,
        };
        let v = assemble_verdict(&ev);
        assert_eq!(v.property1, Verdict::HoldsGeneral);
        assert_eq!(v.property2, Verdict::HoldsGeneral);
        // injected JJ > 0 degrades to indecisive
        ev.jj = 1.0;
        let v = assemble_verdict(&ev);
        assert_eq!(v.property1, Verdict::Indecisive);
        // positive k=2 index without a negative direction: radial-only
        ev.jj = -121311.0;
        ev.indices.l1_k2 = 1;
        ev.k11_2 = Some(5.2e13);
        let v = assemble_verdict(&ev);
        assert_eq!(v.property1, Verdict::HoldsRadialOnly);
    }
}
