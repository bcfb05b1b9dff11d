//! Ground state Q of `-ΔQ + Q - Q^{1+2σ} = 0` (σ = 2/d at criticality) and
//! everything derived from it: the scaling directions Q1, Q2, the potentials
//! V1, V2, and the tail constants ν0 and c_ν.
//!
//! The solve goes through the exponentially weighted profile `P(r) = Q(r) eʳ`,
//! which stays O(1) far into the tail and lets V1, V2 be formed without ever
//! raising a denormal Q to a negative power:
//!
//! ```text
//! P_rr - 2 P_r + ((d-1)/r)(P_r - P) + P^{2σ+1} e^{-2σr} = 0
//! P_r(0) - P(0) = 0,        P(L) + (2L/(d-1)) P_r(L) = 0
//! V2 = σ P^{2σ} r (P_r/P - 1) e^{-2σr},    V1 = (2σ+1) V2
//! ```
//!
//! The Robin condition at `r = L` selects the decaying branch
//! `Q ~ ν0 e^{-r} r^{-(d-1)/2}`; it degenerates at d = 1, where the explicit
//! solution is known and a plain Dirichlet cutoff serves as a regression
//! anchor instead.
//!
//! Newton iteration is damped by a backtracking line search on the residual
//! 2-norm. Seeds come from amplitude-rescaled continuation in d starting at
//! d = 2 (a cold Gaussian seed loses the nontrivial solution for d ≥ 6).

use nalgebra::DVector;
use thiserror::Error;

use crate::grid::ChebyshevGrid;

#[derive(Debug, Error)]
pub enum GroundStateError {
    #[error("newton did not reach tol={tol:.1e}: residual {residual:.3e} after {iters} iterations")]
    NoConvergence { tol: f64, residual: f64, iters: usize },
    #[error("converged to the zero solution (max |P| = {0:.3e})")]
    ZeroSolution(f64),
    #[error("profile not positive at node {0}")]
    NotPositive(usize),
    #[error("dimension {0} outside 1..=12")]
    BadDimension(u32),
    #[error("nu0 tail window ({0}, {1}) not resolved by the grid")]
    TailWindow(f64, f64),
    #[error(transparent)]
    Grid(#[from] crate::grid::GridError),
}

/// Blow-up threshold amplitudes for the seed `A e^{-r²/d + r}`; slightly
/// above the actual thresholds so the Newton basin contains the ground state.
fn seed_amplitude(d: u32) -> f64 {
    match d {
        2 => 1.7,
        3 => 2.5,
        4 => 3.3,
        5 => 4.2,
        6 => 5.4,
        7 => 6.9,
        8 => 8.8,
        9 => 11.3,
        10 => 14.5,
        11 => 18.7,
        12 => 23.9,
        _ => 2.0,
    }
}

/// Ground state and derived fields on a truncated grid.
#[derive(Debug, Clone)]
pub struct GroundStateProfile {
    pub dim: u32,
    /// Nonlinearity exponent; 2/d at criticality, 1 for the 3d cubic check.
    pub sigma: f64,
    pub grid: ChebyshevGrid,
    /// Weighted profile P = Q eʳ.
    pub p_vals: Vec<f64>,
    pub q_vals: Vec<f64>,
    /// Q1 = (1/σ) Q + r Q_r (scaling generator applied to Q).
    pub q1_vals: Vec<f64>,
    /// Q2 = (1/σ) Q1 + r ∂_r Q1.
    pub q2_vals: Vec<f64>,
    pub qr_vals: Vec<f64>,
    /// V1 = (2σ+1) V2.
    pub v1_vals: Vec<f64>,
    /// V2 = σ Q^{2σ-1} r Q_r, formed through P.
    pub v2_vals: Vec<f64>,
    /// ‖Q‖₂² in the radial measure.
    pub mass: f64,
    /// N_c = ∫ Q² r^{d-1} dr (same integral as `mass`; kept under the name
    /// used in the blow-up literature).
    pub nc: f64,
    /// M = (1/4) ∫ r² Q² r^{d-1} dr.
    pub m_const: f64,
    /// ν0 = lim_{r→∞} eʳ r^{(d-1)/2} Q(r).
    pub nu0: f64,
    /// c_ν = 2 ν0² / M, the coefficient of ν(b) = c_ν e^{-π/√b}.
    pub c_nu: f64,
}

fn weighted_residual(
    d: u32,
    sigma: f64,
    grid: &ChebyshevGrid,
    p: &DVector<f64>,
) -> DVector<f64> {
    let n = grid.len();
    let pr = &grid.d1 * p;
    let prr = &grid.d2 * p;
    let mut f = DVector::zeros(n);
    for i in 0..n {
        let r = grid.xi[i];
        let invr = if i == 0 { 0.0 } else { 1.0 / r };
        let nl = p[i].abs().powf(2.0 * sigma) * p[i] * (-2.0 * sigma * r).exp();
        f[i] = prr[i] - 2.0 * pr[i] + (d as f64 - 1.0) * invr * (pr[i] - p[i]) + nl;
    }
    f[0] = pr[0] - p[0];
    let l = grid.length().expect("weighted solve needs a truncated grid");
    let last = n - 1;
    if d >= 2 {
        f[last] = p[last] + 2.0 * l / (d as f64 - 1.0) * pr[last];
    } else {
        f[last] = p[last];
    }
    f
}

/// Damped Newton solve of the weighted profile equation from a given seed.
/// Returns (P, final relative residual, iterations).
pub fn newton_weighted(
    d: u32,
    sigma: f64,
    grid: &ChebyshevGrid,
    seed: &[f64],
    tol: f64,
    maxit: usize,
) -> Result<(Vec<f64>, f64, usize), GroundStateError> {
    let n = grid.len();
    let mut p = DVector::from_row_slice(seed);
    let mut history: Vec<f64> = Vec::new();
    let l = grid.length().expect("weighted solve needs a truncated grid");
    for it in 0..maxit {
        let f = weighted_residual(d, sigma, grid, &p);
        let scale = p.amax().max(1.0);
        let res = f.amax() / scale;
        history.push(res);
        if res < tol {
            return finish(p, res, it);
        }
        // Spectral conditioning caps the reachable residual; stop once the
        // iteration stalls near round-off rather than looping.
        if history.len() > 6 && res > 0.9 * history[..history.len() - 1].iter().cloned().fold(f64::MAX, f64::min)
            && history.iter().cloned().fold(f64::MAX, f64::min) < 1e-7
        {
            return finish(p, res, it);
        }
        let mut jac = &grid.d2 - &(2.0 * &grid.d1);
        for i in 1..n {
            let invr = 1.0 / grid.xi[i];
            for j in 0..n {
                jac[(i, j)] += (d as f64 - 1.0) * invr * grid.d1[(i, j)];
            }
            jac[(i, i)] -= (d as f64 - 1.0) * invr;
        }
        for i in 0..n {
            let r = grid.xi[i];
            jac[(i, i)] +=
                (2.0 * sigma + 1.0) * p[i].abs().powf(2.0 * sigma) * (-2.0 * sigma * r).exp();
        }
        for j in 0..n {
            jac[(0, j)] = grid.d1[(0, j)];
        }
        jac[(0, 0)] -= 1.0;
        let last = n - 1;
        for j in 0..n {
            jac[(last, j)] = if d >= 2 {
                2.0 * l / (d as f64 - 1.0) * grid.d1[(last, j)]
            } else {
                0.0
            };
        }
        jac[(last, last)] += 1.0;
        let lu = jac.lu();
        let dp = lu
            .solve(&(-&f))
            .ok_or(GroundStateError::NoConvergence { tol, residual: res, iters: it })?;
        // backtracking line search on the residual 2-norm
        let f0 = f.norm();
        let mut lam = 1.0;
        for _ in 0..30 {
            let trial = &p + lam * &dp;
            if weighted_residual(d, sigma, grid, &trial).norm() < f0 {
                break;
            }
            lam *= 0.5;
        }
        p += lam * dp;
    }
    let res = *history.last().unwrap_or(&f64::MAX);
    Err(GroundStateError::NoConvergence { tol, residual: res, iters: maxit })
}

fn finish(
    p: DVector<f64>,
    res: f64,
    it: usize,
) -> Result<(Vec<f64>, f64, usize), GroundStateError> {
    let max = p.amax();
    if max < 1e-3 {
        return Err(GroundStateError::ZeroSolution(max));
    }
    Ok((p.as_slice().to_vec(), res, it))
}

/// Weighted profile for dimension `d` (2..=12) at criticality, by amplitude
/// continuation from d = 2. Returns P on the grid nodes.
pub fn solve_weighted_profile(
    d: u32,
    grid: &ChebyshevGrid,
    tol: f64,
) -> Result<Vec<f64>, GroundStateError> {
    if !(2..=12).contains(&d) {
        return Err(GroundStateError::BadDimension(d));
    }
    let mut p: Vec<f64> = grid
        .xi
        .iter()
        .map(|&r| seed_amplitude(2) * (-r * r / 2.0 + r).exp())
        .collect();
    let mut prev_amp = seed_amplitude(2);
    for dd in 2..=d {
        let amp = seed_amplitude(dd);
        let seed: Vec<f64> = p.iter().map(|v| v * amp / prev_amp).collect();
        let (pn, _res, _it) = newton_weighted(dd, 2.0 / dd as f64, grid, &seed, tol, 120)?;
        p = pn;
        prev_amp = amp;
    }
    Ok(p)
}

/// Q, Q1, Q2, Q_r, V1, V2 and the scalar constants from a solved P.
pub fn derive_fields(
    d: u32,
    sigma: f64,
    grid: &ChebyshevGrid,
    p: &[f64],
) -> Result<GroundStateProfile, GroundStateError> {
    if let Some(i) = p.iter().position(|&v| v <= 0.0) {
        return Err(GroundStateError::NotPositive(i));
    }
    let n = grid.len();
    let pv = DVector::from_row_slice(p);
    let pr = &grid.d1 * &pv;
    let r = &grid.xi;
    let e: Vec<f64> = r.iter().map(|&x| (-x).exp()).collect();
    let q: Vec<f64> = (0..n).map(|i| p[i] * e[i]).collect();
    let qr: Vec<f64> = (0..n).map(|i| (pr[i] - p[i]) * e[i]).collect();
    // Q1 = (1/σ) Q + r Q_r, formed in the P variable then damped by e^{-r}
    let p1: Vec<f64> = (0..n)
        .map(|i| p[i] / sigma + r[i] * (pr[i] - p[i]))
        .collect();
    let q1: Vec<f64> = (0..n).map(|i| p1[i] * e[i]).collect();
    let p1r = &grid.d1 * DVector::from_row_slice(&p1);
    let q2: Vec<f64> = (0..n)
        .map(|i| (p1[i] / sigma + r[i] * (p1r[i] - p1[i])) * e[i])
        .collect();
    let v2: Vec<f64> = (0..n)
        .map(|i| {
            sigma
                * p[i].powf(2.0 * sigma)
                * r[i]
                * (pr[i] / p[i] - 1.0)
                * (-2.0 * sigma * r[i]).exp()
        })
        .collect();
    let v1: Vec<f64> = v2.iter().map(|&v| (2.0 * sigma + 1.0) * v).collect();
    let mass = grid.quad_weighted(&q.iter().map(|&x| x * x).collect::<Vec<_>>(), d);
    let r2q2: Vec<f64> = (0..n).map(|i| r[i] * r[i] * q[i] * q[i]).collect();
    let m_const = 0.25 * grid.quad_weighted(&r2q2, d);
    // tail window scales with the domain; (40, 70) on the standard [0, 100]
    let l = grid.length().unwrap_or(100.0);
    let nu0 = fit_nu0(d, grid, p, (0.4 * l, 0.7 * l))?;
    Ok(GroundStateProfile {
        dim: d,
        sigma,
        grid: grid.clone(),
        p_vals: p.to_vec(),
        q_vals: q,
        q1_vals: q1,
        q2_vals: q2,
        qr_vals: qr,
        v1_vals: v1,
        v2_vals: v2,
        mass,
        nc: mass,
        m_const,
        nu0,
        c_nu: 2.0 * nu0 * nu0 / m_const,
    })
}

/// ν0 by fitting `log P + ((d-1)/2) log r` against a constant over a tail
/// window in r. With Q = P e^{-r}, that combination tends to log ν0.
pub fn fit_nu0(
    d: u32,
    grid: &ChebyshevGrid,
    p: &[f64],
    window: (f64, f64),
) -> Result<f64, GroundStateError> {
    let length = grid.length().unwrap_or(f64::MAX);
    if window.1 > length {
        return Err(GroundStateError::TailWindow(window.0, window.1));
    }
    let mut acc = 0.0;
    let mut count = 0usize;
    for (i, &r) in grid.xi.iter().enumerate() {
        if r >= window.0 && r <= window.1 {
            acc += p[i].ln() + (d as f64 - 1.0) / 2.0 * r.ln();
            count += 1;
        }
    }
    if count == 0 {
        return Err(GroundStateError::TailWindow(window.0, window.1));
    }
    Ok((acc / count as f64).exp())
}

/// Full profile for dimension d (2..=12) at criticality on the standard
/// ground-state grid (n nodes on [0, length]).
pub fn profile(d: u32, grid: &ChebyshevGrid) -> Result<GroundStateProfile, GroundStateError> {
    let p = solve_weighted_profile(d, grid, 1e-11)?;
    derive_fields(d, 2.0 / d as f64, grid, &p)
}

/// Profiles for every dimension 3..=dmax from a single continuation sweep:
/// one Newton solve per dimension instead of one full sweep per dimension.
pub fn profile_family(
    dmax: u32,
    grid: &ChebyshevGrid,
) -> Result<Vec<(u32, GroundStateProfile)>, GroundStateError> {
    if !(3..=12).contains(&dmax) {
        return Err(GroundStateError::BadDimension(dmax));
    }
    let mut p: Vec<f64> = grid
        .xi
        .iter()
        .map(|&r| seed_amplitude(2) * (-r * r / 2.0 + r).exp())
        .collect();
    let mut prev_amp = seed_amplitude(2);
    let mut out = Vec::new();
    for dd in 2..=dmax {
        let amp = seed_amplitude(dd);
        let seed: Vec<f64> = p.iter().map(|v| v * amp / prev_amp).collect();
        let (pn, _res, _it) = newton_weighted(dd, 2.0 / dd as f64, grid, &seed, 1e-11, 120)?;
        p = pn;
        prev_amp = amp;
        if dd >= 3 {
            out.push((dd, derive_fields(dd, 2.0 / dd as f64, grid, &p)?));
        }
    }
    Ok(out)
}

/// Ground state of the (supercritical) 3d cubic equation, σ = 1, by
/// continuation in σ from the critical d = 3 solve.
pub fn cubic_3d_profile(grid: &ChebyshevGrid) -> Result<GroundStateProfile, GroundStateError> {
    let mut p = solve_weighted_profile(3, grid, 1e-11)?;
    for sigma in [0.72, 0.78, 0.85, 0.92, 1.0] {
        let (pn, _res, _it) = newton_weighted(3, sigma, grid, &p, 1e-11, 120)?;
        p = pn;
    }
    derive_fields(3, 1.0, grid, &p)
}

/// Direct (unweighted) Newton solve of `Q'' + ((d-1)/r) Q' - Q + Q^{2σ+1} = 0`
/// with `Q'(0) = 0`, `Q(L) = 0`, from a given seed. Used to cross-check the
/// weighted route; the oscillatory round-off tail limits the reachable
/// residual, so the iteration runs to a fixed count and returns its best.
pub fn solve_direct_q(
    d: u32,
    grid: &ChebyshevGrid,
    seed: &[f64],
    maxit: usize,
) -> Vec<f64> {
    let n = grid.len();
    let sigma = 2.0 / d as f64;
    let mut q = DVector::from_row_slice(seed);
    for _ in 0..maxit {
        let qr = &grid.d1 * &q;
        let qrr = &grid.d2 * &q;
        let mut f = DVector::zeros(n);
        for i in 0..n {
            let invr = if i == 0 { 0.0 } else { 1.0 / grid.xi[i] };
            f[i] = qrr[i] + (d as f64 - 1.0) * invr * qr[i] - q[i]
                + q[i].abs().powf(2.0 * sigma) * q[i];
        }
        f[0] = qr[0];
        f[n - 1] = q[n - 1];
        if f.amax() < 1e-11 {
            break;
        }
        let mut jac = grid.d2.clone();
        for i in 1..n {
            let invr = 1.0 / grid.xi[i];
            for j in 0..n {
                jac[(i, j)] += (d as f64 - 1.0) * invr * grid.d1[(i, j)];
            }
        }
        for i in 0..n {
            jac[(i, i)] += -1.0 + (2.0 * sigma + 1.0) * q[i].abs().powf(2.0 * sigma);
        }
        for j in 0..n {
            jac[(0, j)] = grid.d1[(0, j)];
            jac[(n - 1, j)] = 0.0;
        }
        jac[(n - 1, n - 1)] = 1.0;
        match jac.lu().solve(&(-&f)) {
            Some(dq) => q += dq,
            None => break,
        }
    }
    q.as_slice().to_vec()
}

/// Table-18-style consistency number: sup distance between the direct
/// Newton solve of the Q equation (seeded from the weighted route) and the
/// weighted-route `Q = P e^{-r}` itself.
pub fn direct_q_distance(
    d: u32,
    grid: &ChebyshevGrid,
    profile: &GroundStateProfile,
) -> Result<f64, GroundStateError> {
    let q = solve_direct_q(d, grid, &profile.q_vals, 40);
    Ok(q
        .iter()
        .zip(&profile.q_vals)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Explicit d = 1 ground state `Q(x) = 3^{1/4} sech^{1/2}(2x)`.
pub fn d1_exact(x: f64) -> f64 {
    3f64.powf(0.25) / (2.0 * x).cosh().sqrt()
}

/// d = 1 regression anchor: direct Dirichlet solve of `Q'' - Q + Q⁵ = 0` on
/// `[0, length]` and the sup-norm distance to the explicit formula.
pub fn solve_d1_anchor(n: usize, length: f64) -> Result<(Vec<f64>, f64), GroundStateError> {
    let grid = ChebyshevGrid::truncated(n, length)?;
    let m = grid.len();
    let mut q = DVector::from_iterator(m, grid.xi.iter().map(|&x| 1.3 * (-x * x).exp()));
    let residual = |q: &DVector<f64>| -> DVector<f64> {
        let qr = &grid.d1 * q;
        let qrr = &grid.d2 * q;
        let mut f = DVector::zeros(m);
        for i in 0..m {
            f[i] = qrr[i] - q[i] + q[i].powi(5);
        }
        f[0] = qr[0];
        f[m - 1] = q[m - 1];
        f
    };
    for _ in 0..80 {
        let f = residual(&q);
        if f.amax() < 1e-11 {
            break;
        }
        let mut jac = grid.d2.clone();
        for i in 0..m {
            jac[(i, i)] += -1.0 + 5.0 * q[i].powi(4);
        }
        for j in 0..m {
            jac[(0, j)] = grid.d1[(0, j)];
            jac[(m - 1, j)] = 0.0;
        }
        jac[(m - 1, m - 1)] = 1.0;
        let dq = jac
            .lu()
            .solve(&(-&f))
            .ok_or(GroundStateError::NoConvergence { tol: 1e-11, residual: f.amax(), iters: 80 })?;
        let f0 = f.norm();
        let mut lam = 1.0;
        for _ in 0..30 {
            if residual(&(&q + lam * &dq)).norm() < f0 {
                break;
            }
            lam *= 0.5;
        }
        q += lam * dq;
    }
    let err = grid
        .xi
        .iter()
        .enumerate()
        .map(|(i, &x)| (q[i] - d1_exact(x)).abs())
        .fold(0.0, f64::max);
    Ok((q.as_slice().to_vec(), err))
}

/// Standard ground-state grid: 1025 nodes on [0, 100].
pub fn standard_grid() -> ChebyshevGrid {
    ChebyshevGrid::truncated(1025, 100.0).expect("static parameters")
}
