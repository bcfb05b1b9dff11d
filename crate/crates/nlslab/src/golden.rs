//! Reference values from Yang, Roudenko and Zhao and the tolerance tiers
//! used to compare against them.
//!
//! Everything the acceptance gate and the `report` command diff against
//! lives here, in one place: ground-state masses, simulation parameters,
//! focusing checkpoint levels, fitted exponents, positivity products,
//! bilinear forms and channel indices. A handful of printed values in the
//! source tables are internally inconsistent (exponent-level typos in the
//! d=11,12 determinants, a duplicated row range in the d=6 checkpoint
//! table); where that happens the constants here carry the value derived
//! from the table's own per-entry data, and the doc comment on the constant
//! says so.

/// Relative tolerance tier for golden comparisons: the tables print 4-6
/// significant digits and conditioning grows with d.
pub fn tolerance(d: u32) -> f64 {
    if d <= 8 {
        0.005
    } else {
        0.02
    }
}

/// Table 1: ground-state mass ‖Q‖², threshold amplitude Ã, the run
/// amplitude A₀ and the initial mass ‖u₀‖² per dimension (d = 4..12).
pub const TABLE1: [(u32, f64, f64, f64, f64); 9] = [
    (4, 20.7129, 3.2181, 5.0, 50.0),
    (5, 112.6131, 4.1406, 6.0, 236.46),
    (6, 765.0696, 5.3231, 8.0, 1728.0),
    (7, 6236.3848, 6.8403, 10.0, 13329.0),
    (8, 59304.81, 8.7875, 15.0, 172800.0),
    (9, 644519.4793, 11.2871, 20.0, 2.0236e6),
    (10, 7880266.4892, 14.4962, 25.0, 2.3437e7),
    (11, 107056593.2682, 18.6164, 30.0, 2.7801e8),
    (12, 1586849773.5085, 23.8089, 40.0, 4.4790e9),
];

pub fn ground_state_mass(d: u32) -> Option<f64> {
    TABLE1.iter().find(|t| t.0 == d).map(|t| t.1)
}

pub fn threshold_amplitude(d: u32) -> Option<f64> {
    TABLE1.iter().find(|t| t.0 == d).map(|t| t.2)
}

/// Table 2: sup-norm conservation error ℰ of the reference runs.
pub const TABLE2_CONSERVATION: [(u32, f64); 9] = [
    (4, 6e-9),
    (5, 5e-10),
    (6, 1e-9),
    (7, 1e-9),
    (8, 1e-9),
    (9, 1e-9),
    (10, 2e-9),
    (11, 3e-10),
    (12, 9e-10),
];

/// Focusing levels 1/L at which the fitting tables place their checkpoint
/// rows, per dimension. The first d=6 level is synthesized (the printed
/// table repeats the second row's range there).
pub fn checkpoint_levels(d: u32) -> Vec<f64> {
    match d {
        4 => vec![1e4, 3e5, 7e6, 1e8, 2e9, 4e10, 6e11, 8e12, 1e14, 1e15, 2e16],
        5 => vec![2e3, 6e4, 2e6, 4e7, 7e8, 1e10, 2e11, 3e12, 5e13, 7e14, 1e16],
        6 => vec![8e2, 2e4, 7e5, 2e7, 4e8, 8e9, 1e11, 3e12, 4e13, 6e14, 9e15],
        7 => vec![2e2, 1e4, 4e5, 9e6, 2e8, 5e9, 1e11, 2e12, 3e13, 5e14, 9e15],
        8 => vec![7e3, 3e5, 8e6, 2e8, 5e9, 1e11, 2e12, 4e13, 8e14, 1e16],
        9 => vec![4e3, 2e5, 7e6, 2e8, 5e9, 1e11, 2e12, 5e13, 9e14, 2e16],
        10 => vec![3e3, 2e5, 5e6, 2e8, 4e9, 1e11, 2e12, 5e13, 9e14, 2e16],
        11 => vec![2e3, 1e5, 4e6, 1e8, 3e9, 7e10, 2e12, 4e13, 8e14, 2e16],
        12 => vec![2e3, 9e4, 3e6, 1e8, 3e9, 8e10, 2e12, 4e13, 1e15, 2e16],
        _ => vec![1e4, 1e6, 1e8, 1e10, 1e12, 1e14, 1e16],
    }
}

/// Final-row fitted exponent ρ of the log-log form per dimension
/// (Tables 3, 21-26 final rows).
pub const LOGLOG_RHO_FINAL: [(u32, f64); 9] = [
    (4, 0.4997),
    (5, 0.4997),
    (6, 0.4997),
    (7, 0.4996),
    (8, 0.4996),
    (9, 0.4996),
    (10, 0.4996),
    (11, 0.4995),
    (12, 0.4995),
];

/// d=8 final-row ρ for the uncorrected form F=1 (Table 22): 0.5014.
pub const D8_PURE_RHO_FINAL: f64 = 0.5014;

/// Window discrepancies ε = rms(1/2 - ρ) over checkpoint rows 7..9 for the
/// d=4 catalogue (Table 5) and the log-log ε for the other dimensions.
pub const D4_WINDOW_EPSILON: [(&str, f64); 6] = [
    ("F=1", 0.0017),
    ("F=ln^0.3", 7.28e-4),
    ("F=ln^0.25", 3.24e-4),
    ("F=ln^0.2", 1.06e-4),
    ("F=ln^0.15", 5.00e-4),
    ("log-log", 2.69e-4),
];

pub const LOGLOG_EPSILON: [(u32, f64); 9] = [
    (4, 2.69e-4),
    (5, 3.41e-4),
    (6, 3.71e-4),
    (7, 4.50e-4),
    (8, 4.23e-4),
    (9, 4.69e-4),
    (10, 5.43e-4),
    (11, 6.48e-4),
    (12, 6.87e-4),
];

/// Table 7: Prop. 3.1 products ∂_r u(6)·u(6) of the L₁ IVP solution, and
/// the bound quantity the table prints beside them.
pub const TABLE7_PRODUCT: [(u32, f64); 8] = [
    (5, 1.4009e-5),
    (6, 4.7096e-5),
    (7, 1.9375e-5),
    (8, 6.2832e-6),
    (9, 1.8316e-6),
    (10, 4.802e-7),
    (11, 1.0135e-7),
    (12, 6.9127e-9),
];

pub const TABLE7_BOUND: [(u32, f64); 8] = [
    (5, -0.31166),
    (6, -0.53961),
    (7, -0.82591),
    (8, -1.1703),
    (9, -1.5731),
    (10, -2.0343),
    (11, -2.5543),
    (12, -3.1335),
];

/// Tables 8-9 entries (artificial boundary condition). Fields:
/// (d, K11, K12, K22, KK, J11, J12, J22, JJ).
///
/// The KK and JJ columns for d = 11, 12 are printed as bare one-digit
/// exponents (3e16, -8e17, 3e18, -3e20) inconsistent with the table's own
/// K/J entries; the determinants here are recomputed from those entries
/// (3.0308e15, -8.3792e17, 3.4114e17, -2.6484e20).
pub const TABLE89: [(u32, f64, f64, f64, f64, f64, f64, f64, f64); 8] = [
    (5, -42.3114, 4.515, -490.2964, 20724.7444, 80.6653, -483.0279, 1388.5127, -121311.0934),
    (6, -279.0336, 23.4744, -2400.2078, 669187.6405, 611.2497, -3969.9773, 12386.6137, -8189405.1473),
    (7, -2199.9811, 294.6847, -15415.6211, 33827236.411, 5608.4168, -39096.1569, 134642.4625, -773378434.5754),
    (8, -20133.2095, 4529.9623, -119781.6837, 2391069177.0, 60626.5104, -449322.1199, 1721581.0897, -97516913089.4223),
    (9, -209271.9449, 73555.7296, -1073544.6307, 219252327433.0, 758310.8674, -5924273.2959, 25329030.7313, -15889734594779.6),
    (10, -2428264.8856, 1256378.6856, -10704624.457, 24415176279909.0, 10852351.2386, -88679869.0076, 423309818.7944, -3270212385731735.0),
    (11, -30987268.4148, 22770115.4386, -114540537.6, 3.0308e15, 176804567.641, -1500253955.9189, 7990965776.4667, -8.3792e17),
    (12, -428716358.9148, 440685490.5273, -1248715577.0, 3.4114e17, 3286852523.1216, -28762231494.6882, 171112628940.871, -2.6484e20),
];

/// The diagonal/determinant subset actually gated on (K12/J12/J22 are only
/// table-complete for d = 11, 12; elsewhere the determinant is the check).
pub fn table89_row(d: u32) -> Option<(f64, f64, f64, f64, f64)> {
    TABLE89
        .iter()
        .find(|t| t.0 == d)
        .map(|t| (t.1, t.3, t.4, t.5, t.8)) // K11, K22, KK, J11, JJ
}

/// Table 10: ⟨L₂Z, Z⟩ with L₂Z = Q, u(∞)=0 condition.
pub const TABLE10_L2Z: [(u32, f64); 10] = [
    (3, -6.7563),
    (4, -23.3181),
    (5, -107.8715),
    (6, -623.5943),
    (7, -4290.4717),
    (8, -33763.4),
    (9, -291711.0),
    (10, -2604677.0),
    (11, -20638152.0),
    (12, -33716967.0),
];

/// Tables 11-12: harmonic-channel forms K₁₁⁽¹⁾ and J₁₁⁽¹⁾.
pub const TABLE11_K11_1: [(u32, f64); 8] = [
    (5, -338.0072),
    (6, -2514.4344),
    (7, -21858.3993),
    (8, -216907.232),
    (9, -2409681.326),
    (10, -29422347.0),
    (11, -386097788.7178),
    (12, -5238134702.1673),
];

pub const TABLE12_J11_1: [(u32, f64); 8] = [
    (5, 689.5337),
    (6, 6433.9656),
    (7, 73995.9077),
    (8, 1055378.5046),
    (9, 19767639.0831),
    (10, 648419143.0),
    (11, -17491047782.0),
    (12, -69767861282.0),
];

/// Table 13: K₁₁⁽²⁾ for d = 11, 12, printed positive. Grid-converged
/// recomputation yields a negative value of much smaller magnitude at both
/// dimensions; the acceptance gate reports this discrepancy rather than
/// matching it.
pub const TABLE13_K11_2: [(u32, f64); 2] = [(11, 52218994506811.0), (12, 34912990629971056.0)];

/// Table 6 (d=5): boundary-condition sensitivity of the J forms.
pub const TABLE6_D5_ARTIFICIAL: (f64, f64) = (80.6653, 1388.5127); // J11, J22
pub const TABLE6_D5_NEUMANN: (f64, f64) = (-114.8176, -4100.538);

/// Table 19: 3d cubic (supercritical) cross-check forms.
pub const TABLE19_K11: f64 = 1.04846;
pub const TABLE19_J11: f64 = -0.662038;

/// Prop. 3.2 / Theorem 3.11 channel indices.
/// (d, ind L1 radial, ind L2 radial, ind L1 k=1, ind L2 k=1, ind L1 k=2)
pub const INDICES: [(u32, usize, usize, usize, usize, usize); 8] = [
    (5, 2, 1, 1, 0, 0),
    (6, 2, 1, 1, 0, 0),
    (7, 2, 1, 1, 0, 0),
    (8, 2, 1, 1, 0, 0),
    (9, 2, 1, 1, 0, 0),
    (10, 2, 1, 1, 0, 0),
    (11, 2, 1, 1, 1, 1),
    (12, 2, 1, 1, 1, 1),
];

/// Remark 3.13: least eigenvalue of L₂⁽¹⁾ in d = 11, 12.
pub const L2_K1_EIGENVALUE: [(u32, f64); 2] = [(11, -0.01403), (12, -0.0560)];

/// Table 18: sup distance between the directly-computed Q and the weighted
/// profile Pe^{-r} (first row), d = 5..12.
pub const TABLE18_QP: [(u32, f64); 8] = [
    (5, 4e-9),
    (6, 5e-9),
    (7, 7e-9),
    (8, 1e-8),
    (9, 3e-8),
    (10, 4e-7),
    (11, 4e-5),
    (12, 6e-3),
];

/// c_ν = 2ν₀²/M values quoted in the reduced-system discussion.
pub const C_NU: [(u32, f64); 2] = [(2, 44.8), (4, 53.11)];

pub fn lookup(table: &[(u32, f64)], d: u32) -> Option<f64> {
    table.iter().find(|t| t.0 == d).map(|t| t.1)
}
