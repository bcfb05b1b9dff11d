//! Chebyshev Gauss-Lobatto collocation on the radial half-line.
//!
//! Two mapped grids are provided:
//!
//! * [`ChebyshevGrid::rational`]: the algebraic map `xi = kappa (1+z)/(1-z)`
//!   sending `[-1, 1]` onto `[0, inf)`. Half of the nodes land in `[0, kappa]`.
//!   The image of `z = 1` (`xi = inf`) is removed; deleting that row and
//!   column of the operator matrices imposes the Dirichlet condition at
//!   infinity.
//! * [`ChebyshevGrid::truncated`]: the affine map `xi = L (1-z)/2` onto the
//!   finite interval `[0, L]`, used for ground-state and boundary-value work
//!   where an artificial boundary condition is imposed at `xi = L`.
//!
//! Differentiation matrices follow the standard Gauss-Lobatto construction
//! with the negative-sum-trick diagonal (the diagonal is set so each row sums
//! to zero), which keeps round-off error in check. Quadrature is
//! Clenshaw-Curtis in `z`, transformed with the map Jacobian.
//!
//! All inner products here are radial-only: `<f, g> = int f g xi^{d-1} dxi`
//! with no angular factor `|S^{d-1}|`. Every sign and ratio consumed by the
//! verdict logic is invariant to that factor, and reference mass values
//! (e.g. `||e^{-r^2/4}||^2 = 2` in d = 4) match the bare radial integral.

use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid needs at least 8 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("map scale must be positive, got {0}")]
    BadScale(f64),
}

/// Which map produced the grid; enough to rebuild it from a run manifest.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum GridMap {
    /// `xi = kappa (1+z)/(1-z)`, node at `xi = inf` trimmed.
    Rational { kappa: f64 },
    /// `xi = length (1-z)/2` on `[0, length]`, all nodes kept.
    Truncated { length: f64 },
}

/// Mapped Gauss-Lobatto grid with differentiation matrices in `xi`.
///
/// Nodes are stored with `xi` strictly increasing and `xi[0] = 0`. For the
/// rational map the retained node count is `n` (the trimmed point at
/// `z = 1` is not stored); `d1`/`d2` act on values at the retained nodes.
#[derive(Debug, Clone)]
pub struct ChebyshevGrid {
    pub map: GridMap,
    /// Retained `z` nodes, same ordering as `xi`.
    pub z: Vec<f64>,
    /// Radial nodes, strictly increasing, `xi[0] = 0`.
    pub xi: Vec<f64>,
    /// First-derivative matrix in `xi`.
    pub d1: DMatrix<f64>,
    /// Second-derivative matrix in `xi`.
    pub d2: DMatrix<f64>,
    /// Quadrature weights for `int . dxi` (map Jacobian included).
    pub w: Vec<f64>,
    /// True when the node at `z = 1` (`xi = inf`) was removed.
    pub trim_last: bool,
}

/// Trefethen's `cheb`: order-`n` Gauss-Lobatto points `z_j = cos(j pi / n)`
/// (decreasing from 1 to -1) and the differentiation matrix acting on values
/// at those points. The diagonal uses the negative-sum trick.
pub fn cheb(n: usize) -> (DMatrix<f64>, Vec<f64>) {
    if n == 0 {
        return (DMatrix::zeros(1, 1), vec![1.0]);
    }
    let m = n + 1;
    let z: Vec<f64> = (0..m)
        .map(|j| (std::f64::consts::PI * j as f64 / n as f64).cos())
        .collect();
    let c = |j: usize| -> f64 {
        let base = if j == 0 || j == n { 2.0 } else { 1.0 };
        if j % 2 == 0 {
            base
        } else {
            -base
        }
    };
    let mut d = DMatrix::zeros(m, m);
    for i in 0..m {
        let mut diag = 0.0;
        for j in 0..m {
            if i != j {
                let v = c(i) / c(j) / (z[i] - z[j]);
                d[(i, j)] = v;
                diag -= v;
            }
        }
        d[(i, i)] = diag;
    }
    (d, z)
}

/// Clenshaw-Curtis weights for the order-`n` Gauss-Lobatto points, for
/// integration in `z` over `[-1, 1]`.
pub fn clencurt(n: usize) -> Vec<f64> {
    let m = n + 1;
    let mut w = vec![0.0; m];
    if n == 0 {
        w[0] = 2.0;
        return w;
    }
    let theta: Vec<f64> = (0..m)
        .map(|j| std::f64::consts::PI * j as f64 / n as f64)
        .collect();
    let nn = (n * n) as f64;
    let mut v = vec![1.0; n - 1];
    if n % 2 == 0 {
        w[0] = 1.0 / (nn - 1.0);
        w[n] = w[0];
        for k in 1..n / 2 {
            let kk = (4 * k * k) as f64;
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * k as f64 * theta[i + 1]).cos() / (kk - 1.0);
            }
        }
        for (i, vi) in v.iter_mut().enumerate() {
            *vi -= (n as f64 * theta[i + 1]).cos() / (nn - 1.0);
        }
    } else {
        w[0] = 1.0 / nn;
        w[n] = w[0];
        for k in 1..=(n - 1) / 2 {
            let kk = (4 * k * k) as f64;
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * k as f64 * theta[i + 1]).cos() / (kk - 1.0);
            }
        }
    }
    for i in 1..n {
        w[i] = 2.0 * v[i - 1] / n as f64;
    }
    w
}

impl ChebyshevGrid {
    /// Rationally mapped grid with `n` retained nodes and map scale `kappa`.
    ///
    /// Internally builds the order-`n` Gauss-Lobatto set (`n + 1` points)
    /// and trims the image of `z = 1`. `n = 256`, `kappa = 256` is the
    /// default configuration for time evolution.
    pub fn rational(n: usize, kappa: f64) -> Result<Self, GridError> {
        if n < 8 {
            return Err(GridError::TooFewNodes(n));
        }
        if !(kappa > 0.0) {
            return Err(GridError::BadScale(kappa));
        }
        let (d, z_full) = cheb(n);
        let m = n + 1;
        // dz/dxi = (1-z)^2 / (2 kappa); chain rule on the full set, then trim.
        let mut d1_full = DMatrix::zeros(m, m);
        for i in 0..m {
            let jac = (1.0 - z_full[i]).powi(2) / (2.0 * kappa);
            for j in 0..m {
                d1_full[(i, j)] = jac * d[(i, j)];
            }
        }
        let d2_full = &d1_full * &d1_full;
        // Retained indices n, n-1, ..., 1 give xi increasing from 0.
        let idx: Vec<usize> = (1..=n).rev().collect();
        let z: Vec<f64> = idx.iter().map(|&j| z_full[j]).collect();
        let xi: Vec<f64> = idx
            .iter()
            .map(|&j| kappa * (1.0 + z_full[j]) / (1.0 - z_full[j]))
            .collect();
        let take = |src: &DMatrix<f64>| {
            let mut out = DMatrix::zeros(n, n);
            for (a, &i) in idx.iter().enumerate() {
                for (b, &j) in idx.iter().enumerate() {
                    out[(a, b)] = src[(i, j)];
                }
            }
            out
        };
        let wz = clencurt(n);
        let w: Vec<f64> = idx
            .iter()
            .map(|&j| wz[j] * 2.0 * kappa / (1.0 - z_full[j]).powi(2))
            .collect();
        Ok(Self {
            map: GridMap::Rational { kappa },
            z,
            xi,
            d1: take(&d1_full),
            d2: take(&d2_full),
            w,
            trim_last: true,
        })
    }

    /// Affinely mapped grid with `n` nodes on `[0, length]`.
    pub fn truncated(n: usize, length: f64) -> Result<Self, GridError> {
        if n < 8 {
            return Err(GridError::TooFewNodes(n));
        }
        if !(length > 0.0) {
            return Err(GridError::BadScale(length));
        }
        let (d, z_dec) = cheb(n - 1);
        // z decreasing maps to xi increasing; keep matrix order as-is so
        // row i acts at xi[i] = length (1 - z_i) / 2.
        let scale = -2.0 / length;
        let d1 = d.map(|v| v * scale);
        let d2 = &d1 * &d1;
        let xi: Vec<f64> = z_dec.iter().map(|&z| length * (1.0 - z) / 2.0).collect();
        let w: Vec<f64> = clencurt(n - 1)
            .iter()
            .map(|&v| v * length / 2.0)
            .collect();
        Ok(Self {
            map: GridMap::Truncated { length },
            z: z_dec,
            xi,
            d1,
            d2,
            w,
            trim_last: false,
        })
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// Domain length for truncated grids; `None` for the rational map.
    pub fn length(&self) -> Option<f64> {
        match self.map {
            GridMap::Truncated { length } => Some(length),
            GridMap::Rational { .. } => None,
        }
    }

    /// `int_0^inf f xi^{d-1} dxi` by mapped Clenshaw-Curtis.
    pub fn quad_weighted(&self, f: &[f64], d: u32) -> f64 {
        assert_eq!(f.len(), self.len());
        let p = d as i32 - 1;
        self.w
            .iter()
            .zip(f)
            .zip(&self.xi)
            .map(|((&w, &fv), &x)| w * fv * x.powi(p))
            .sum()
    }

    /// Radial inner product `<f, g> = int f g xi^{d-1} dxi`.
    pub fn inner_product(&self, f: &[f64], g: &[f64], d: u32) -> f64 {
        assert_eq!(f.len(), self.len());
        assert_eq!(g.len(), self.len());
        let p = d as i32 - 1;
        self.w
            .iter()
            .zip(f.iter().zip(g))
            .zip(&self.xi)
            .map(|((&w, (&fv, &gv)), &x)| w * fv * gv * x.powi(p))
            .sum()
    }

    /// True when the integrand `f xi^{d-1}` has decayed at the last retained
    /// node (below `1e-10` of its maximum); quadrature of non-decayed data
    /// truncates mass.
    pub fn decay_resolved(&self, f: &[f64], d: u32) -> bool {
        let p = d as i32 - 1;
        let vals: Vec<f64> = f
            .iter()
            .zip(&self.xi)
            .map(|(&fv, &x)| (fv * x.powi(p)).abs())
            .collect();
        let max = vals.iter().cloned().fold(0.0, f64::max);
        max == 0.0 || vals[vals.len() - 1] <= 1e-10 * max
    }

    /// Barycentric evaluation of the interpolant through `(z[j], vals[j])` at
    /// the retained nodes. `zq` is a point in the `z` variable.
    pub fn interp_z(&self, vals: &[f64], zq: f64) -> f64 {
        barycentric(&self.z, vals, self.trim_last, zq)
    }
}

/// Barycentric Lagrange evaluation on Gauss-Lobatto nodes. `_trimmed` is
/// accepted for manifest symmetry but the weights are derived from the nodes
/// themselves: alternation by array index (any consistent ordering), with the
/// 1/2 factor applied exactly at the `z = +-1` family endpoints. A trimmed
/// set simply lacks one endpoint and loses its halving.
pub fn barycentric(z: &[f64], vals: &[f64], _trimmed: bool, zq: f64) -> f64 {
    let n = z.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..n {
        let d = zq - z[j];
        if d.abs() < 1e-14 {
            return vals[j];
        }
        let mut wj = if j % 2 == 0 { 1.0 } else { -1.0 };
        if z[j].abs() >= 1.0 - 1e-14 {
            wj *= 0.5;
        }
        let t = wj / d;
        num += t * vals[j];
        den += t;
    }
    num / den
}

/// Dense radial operator `-u'' - ((d-1)/r) u' + (k(k+d-2)/r^2) u` terms,
/// sign convention chosen by the consumer (see constructors).
#[derive(Debug, Clone)]
pub struct RadialOperator {
    pub matrix: DMatrix<f64>,
    pub dim: u32,
    pub harmonic: u32,
    /// The 1/r singularity at xi = 0 is replaced by the L'Hopital limit:
    /// the Laplacian row at the origin is `d` times the second-derivative row.
    pub origin_rule: &'static str,
}

/// Radial Laplacian `Delta_k = d_rr + ((d-1)/r) d_r - k(k+d-2)/r^2` as a
/// dense matrix on the grid. The origin row uses the L'Hopital limit
/// `lim_{r->0} ((d-1)/r) u_r = (d-1) u_rr`, i.e. row 0 equals `d` times the
/// second-derivative row (k = 0). For `k > 0` the centrifugal diagonal is
/// left as 0 at the origin; consumers of harmonic channels replace that row
/// by a boundary condition (the `r^k` substitution handles the origin).
pub fn radial_laplacian(grid: &ChebyshevGrid, d: u32, k: u32) -> RadialOperator {
    let n = grid.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        if i == 0 && grid.xi[0] == 0.0 {
            for j in 0..n {
                m[(0, j)] = d as f64 * grid.d2[(0, j)];
            }
            continue;
        }
        let invr = 1.0 / grid.xi[i];
        for j in 0..n {
            m[(i, j)] = grid.d2[(i, j)] + (d as f64 - 1.0) * invr * grid.d1[(i, j)];
        }
        if k > 0 {
            m[(i, i)] -= (k * (k + d - 2)) as f64 * invr * invr;
        }
    }
    RadialOperator {
        matrix: m,
        dim: d,
        harmonic: k,
        origin_rule: "l'hopital: origin row = d * d2 row",
    }
}

/// Chebyshev coefficients `c_k` with `f(z) = sum c_k T_k(z)` from samples on
/// the full (untrimmed) order-`n` Gauss-Lobatto set, `z` decreasing. Direct
/// O(n^2) cosine transform; callers padding a trimmed grid supply the
/// boundary value 0 for the missing node.
pub fn chebyshev_coefficients(vals: &[f64]) -> Vec<f64> {
    let m = vals.len();
    assert!(m >= 2);
    let n = m - 1;
    let mut c = vec![0.0; m];
    for (k, ck) in c.iter_mut().enumerate() {
        // endpoint z = -1 contributes cos(k pi) = (-1)^k
        let mut s = 0.5 * (vals[0] + if k % 2 == 0 { vals[n] } else { -vals[n] });
        for (j, &vj) in vals.iter().enumerate().take(n).skip(1) {
            s += vj * (std::f64::consts::PI * (k * j) as f64 / n as f64).cos();
        }
        *ck = 2.0 * s / n as f64;
    }
    c[0] *= 0.5;
    c[n] *= 0.5;
    c
}

/// Max of `|c_k|` over the trailing `frac` of the coefficient sequence; used
/// as an under-resolution flag for smooth decaying inputs.
pub fn coefficient_tail_max(c: &[f64], frac: f64) -> f64 {
    let start = ((c.len() as f64) * (1.0 - frac)).floor() as usize;
    c[start.min(c.len() - 1)..]
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
}
