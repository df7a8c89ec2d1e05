//! Complete positivity, positivity, and divisibility of channel families.
//!
//! A channel is CP iff its Choi matrix is positive semidefinite, and positive iff
//! it maps the Bloch ball into itself. A family is classified by testing the
//! intermediate maps `Λ(t_{k+1}, t_k)` between consecutive grid times.

use nalgebra::{Matrix2, Matrix4, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{self, AffineChannel, ChannelFamily, SINGULAR_THRESHOLD};
use crate::error::{Error, Result};
use crate::format::{ser_f64, ser_opt_f64, ser_vec_f64};
use crate::sphere;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SPHERE_POINTS: usize = 5000;
pub const DEFAULT_INTERVALS: usize = 200;

/// Normalized Choi matrix `(id ⊗ E)(|Φ⁺⟩⟨Φ⁺|)`, trace one for trace-preserving `E`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix(pub Matrix4<Complex64>);

impl ChoiMatrix {
    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (self.0 - self.0.adjoint())
            .iter()
            .fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let ev = self.0.symmetric_eigenvalues();
        let mut out = [ev[0], ev[1], ev[2], ev[3]];
        out.sort_by(f64::total_cmp);
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

fn pauli() -> [Matrix2<Complex64>; 3] {
    let (o, l, i) = (
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
    );
    [
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(l, o, o, -l),
    ]
}

/// Linear extension of the affine action to all 2×2 operators:
/// `E(I) = I + c·σ`, `E(σ_k) = Σ_j T_jk σ_j`.
fn apply_to_operator(ch: &AffineChannel, m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    let s = pauli();
    let half = Complex64::new(0.5, 0.0);
    let a0 = m.trace() * half;
    let a: Vec<Complex64> = s.iter().map(|sk| (m * sk).trace() * half).collect();
    let mut out = Matrix2::identity() * a0;
    for (j, sj) in s.iter().enumerate() {
        let mut coef = a0 * ch.translation[j];
        for (k, ak) in a.iter().enumerate() {
            coef += *ak * ch.linear[(j, k)];
        }
        out += sj * coef;
    }
    out
}

pub fn choi_matrix(ch: &AffineChannel) -> ChoiMatrix {
    let mut j = Matrix4::<Complex64>::zeros();
    for a in 0..2 {
        for b in 0..2 {
            let mut unit = Matrix2::<Complex64>::zeros();
            unit[(a, b)] = Complex64::new(1.0, 0.0);
            let block = apply_to_operator(ch, &unit) * Complex64::new(0.5, 0.0);
            j.fixed_view_mut::<2, 2>(2 * a, 2 * b).copy_from(&block);
        }
    }
    ChoiMatrix(j)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CpVerdict {
    pub cp: bool,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityVerdict {
    pub positive: bool,
    /// `max |T n + c| − 1` over the unit sphere.
    pub max_excess: f64,
}

pub fn is_cp(ch: &AffineChannel, tol: f64) -> CpVerdict {
    let min_eigenvalue = choi_matrix(ch).min_eigenvalue();
    CpVerdict {
        cp: min_eigenvalue >= -tol,
        min_eigenvalue,
    }
}

pub fn is_positive(ch: &AffineChannel, tol: f64) -> PositivityVerdict {
    is_positive_with(ch, tol, &sphere::fibonacci_sphere(DEFAULT_SPHERE_POINTS))
}

/// [`is_positive`] over a caller-provided lattice.
pub fn is_positive_with(
    ch: &AffineChannel,
    tol: f64,
    lattice: &[Vector3<f64>],
) -> PositivityVerdict {
    let best = sphere::max_affine_norm(&ch.linear, &ch.translation, lattice, 8);
    let max_excess = best.value - 1.0;
    PositivityVerdict {
        positive: max_excess <= tol,
        max_excess,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IntervalVerdict {
    #[serde(rename = "CP")]
    Cp,
    #[serde(rename = "P-not-CP")]
    PNotCp,
    #[serde(rename = "non-P")]
    NonP,
    #[serde(rename = "non-invertible")]
    NonInvertible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    #[serde(rename = "CP-divisible")]
    CpDivisible,
    #[serde(rename = "P-divisible")]
    PDivisible,
    #[serde(rename = "non-P-divisible")]
    NonPDivisible,
    #[serde(rename = "partially-undetermined")]
    PartiallyUndetermined,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::CpDivisible => "CP-divisible",
            Classification::PDivisible => "P-divisible",
            Classification::NonPDivisible => "non-P-divisible",
            Classification::PartiallyUndetermined => "partially-undetermined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalReport {
    #[serde(serialize_with = "ser_f64")]
    pub t0: f64,
    #[serde(serialize_with = "ser_f64")]
    pub t1: f64,
    pub verdict: IntervalVerdict,
    #[serde(serialize_with = "ser_opt_f64")]
    pub min_choi_eig: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub positivity_excess: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisibilityReport {
    pub classification: Classification,
    pub intervals: Vec<IntervalReport>,
    pub warnings: Vec<String>,
    /// Times where the family was found to lose invertibility.
    #[serde(serialize_with = "ser_vec_f64")]
    pub non_invertible_instants: Vec<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub worst_cp_eigenvalue: f64,
    #[serde(serialize_with = "ser_f64")]
    pub worst_positivity_excess: f64,
}

impl DivisibilityReport {
    pub fn grid(&self) -> Vec<f64> {
        let mut g: Vec<f64> = self.intervals.iter().map(|i| i.t0).collect();
        g.extend(self.intervals.last().map(|i| i.t1));
        g
    }

    pub fn count(&self, verdict: IntervalVerdict) -> usize {
        self.intervals
            .iter()
            .filter(|i| i.verdict == verdict)
            .count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub cp_tol: f64,
    pub p_tol: f64,
    pub sphere_points: usize,
    pub singular_threshold: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            cp_tol: DEFAULT_TOL,
            p_tol: DEFAULT_TOL,
            sphere_points: DEFAULT_SPHERE_POINTS,
            singular_threshold: SINGULAR_THRESHOLD,
        }
    }
}

/// `n_intervals + 1` evenly spaced times on `[0, t_max]`.
pub fn uniform_grid(t_max: f64, n_intervals: usize) -> Vec<f64> {
    (0..=n_intervals)
        .map(|k| t_max * k as f64 / n_intervals as f64)
        .collect()
}

/// Smallest singular value of `T(s)` minimized over `[a, b]`: coarse sampling, then
/// golden-section search around the best sample.
fn min_singular_on(fam: &ChannelFamily, a: f64, b: f64) -> (f64, f64) {
    let sigma = |s: f64| fam.eval(s).smallest_singular_value();
    const COARSE: usize = 8;
    let (mut best_s, mut best_v) = (a, sigma(a));
    for k in 1..=COARSE {
        let s = a + (b - a) * k as f64 / COARSE as f64;
        let v = sigma(s);
        if v < best_v {
            best_s = s;
            best_v = v;
        }
    }
    let h = (b - a) / COARSE as f64;
    let (mut lo, mut hi) = ((best_s - h).max(a), (best_s + h).min(b));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (sigma(x1), sigma(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-15 * (1.0 + hi.abs()) {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = sigma(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = sigma(x2);
        }
    }
    for (s, v) in [(x1, f1), (x2, f2)] {
        if v < best_v {
            best_s = s;
            best_v = v;
        }
    }
    (best_s, best_v)
}

struct IntervalOutcome {
    report: IntervalReport,
    instant: Option<f64>,
}

fn classify_interval(
    fam: &ChannelFamily,
    t0: f64,
    t1: f64,
    opts: &ClassifyOptions,
    lattice: &[Vector3<f64>],
) -> IntervalOutcome {
    let non_invertible = |instant| IntervalOutcome {
        report: IntervalReport {
            t0,
            t1,
            verdict: IntervalVerdict::NonInvertible,
            min_choi_eig: None,
            positivity_excess: None,
        },
        instant: Some(instant),
    };

    let (s, sigma) = min_singular_on(fam, t0, t1);
    if sigma <= opts.singular_threshold {
        return non_invertible(s);
    }
    let lambda = match channel::invert_with_threshold(&fam.eval(t0), opts.singular_threshold) {
        Ok(inv) => channel::compose(&fam.eval(t1), &inv),
        Err(_) => return non_invertible(t0),
    };
    let cp = is_cp(&lambda, opts.cp_tol);
    let pos = is_positive_with(&lambda, opts.p_tol, lattice);
    let verdict = if cp.cp {
        IntervalVerdict::Cp
    } else if pos.positive {
        IntervalVerdict::PNotCp
    } else {
        IntervalVerdict::NonP
    };
    IntervalOutcome {
        report: IntervalReport {
            t0,
            t1,
            verdict,
            min_choi_eig: Some(cp.min_eigenvalue),
            positivity_excess: Some(pos.max_excess),
        },
        instant: None,
    }
}

/// Classify a family from its intermediate maps on consecutive grid intervals.
///
/// Intervals on which `T(s)` loses invertibility are reported as non-invertible and
/// do not contribute a verdict. A single non-P interval makes the family
/// non-P-divisible; otherwise, if any interval was excluded, the result is
/// partially undetermined.
pub fn classify_family(
    fam: &ChannelFamily,
    grid: &[f64],
    opts: &ClassifyOptions,
) -> Result<DivisibilityReport> {
    if grid.len() < 3 {
        return Err(Error::InvalidGrid(format!(
            "need at least 3 grid points, got {}",
            grid.len()
        )));
    }
    if grid[0] != 0.0 {
        return Err(Error::InvalidGrid(format!(
            "grid must start at 0, got {}",
            grid[0]
        )));
    }
    crate::bloch::check_increasing(grid)?;

    let lattice = sphere::fibonacci_sphere(opts.sphere_points);
    let outcomes: Vec<IntervalOutcome> = grid
        .par_windows(2)
        .map(|w| classify_interval(fam, w[0], w[1], opts, &lattice))
        .collect();

    let mut warnings = Vec::new();
    let mut instants: Vec<f64> = Vec::new();
    for o in &outcomes {
        if let Some(s) = o.instant {
            warnings.push(format!(
                "interval [{}, {}] excluded: family is non-invertible near t = {}",
                crate::format::fmt_f64(o.report.t0),
                crate::format::fmt_f64(o.report.t1),
                crate::format::fmt_f64(s)
            ));
            // adjacent intervals share an instant at their common endpoint
            if instants.last().is_none_or(|&prev| (s - prev).abs() > 1e-9) {
                instants.push(s);
            }
        }
    }
    let intervals: Vec<IntervalReport> = outcomes.into_iter().map(|o| o.report).collect();

    let determinable: Vec<&IntervalReport> = intervals
        .iter()
        .filter(|i| i.verdict != IntervalVerdict::NonInvertible)
        .collect();
    if determinable.is_empty() {
        return Err(Error::UndeterminedClassification);
    }
    let any = |v| determinable.iter().any(|i| i.verdict == v);
    let excluded = determinable.len() < intervals.len();
    let classification = if any(IntervalVerdict::NonP) {
        Classification::NonPDivisible
    } else if excluded {
        Classification::PartiallyUndetermined
    } else if any(IntervalVerdict::PNotCp) {
        Classification::PDivisible
    } else {
        Classification::CpDivisible
    };

    let worst_cp_eigenvalue = determinable
        .iter()
        .filter_map(|i| i.min_choi_eig)
        .fold(f64::INFINITY, f64::min);
    let worst_positivity_excess = determinable
        .iter()
        .filter_map(|i| i.positivity_excess)
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(DivisibilityReport {
        classification,
        intervals,
        warnings,
        non_invertible_instants: instants,
        worst_cp_eigenvalue,
        worst_positivity_excess,
    })
}

/// `sqrt(‖T_Λ − T(t−τ)‖_F² + |c_Λ − c(t−τ)|²)`; zero for semigroups.
pub fn semigroup_deviation(fam: &ChannelFamily, tau: f64, t: f64) -> Result<f64> {
    if tau == t && tau >= 0.0 {
        return Ok(0.0);
    }
    let lambda = channel::intermediate(fam, tau, t)?;
    Ok(lambda.frobenius_diff(&fam.eval(t - tau)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{
        compose, family_collapse_shift, family_gad, family_isotropic_decay, family_spin_cosine,
    };
    use nalgebra::Matrix3;

    fn transpose_map() -> AffineChannel {
        AffineChannel::diagonal([1.0, -1.0, 1.0], [0.0; 3])
    }

    #[test]
    fn choi_spectra_of_reference_channels() {
        let id = choi_matrix(&AffineChannel::identity()).eigenvalues();
        assert!((id[3] - 1.0).abs() < 1e-12);
        assert!(id[..3].iter().all(|v| v.abs() < 1e-12));

        let dep = choi_matrix(&AffineChannel::diagonal([0.0; 3], [0.0; 3])).eigenvalues();
        assert!(dep.iter().all(|v| (v - 0.25).abs() < 1e-12));

        let tr = choi_matrix(&transpose_map()).eigenvalues();
        assert!((tr[0] + 0.5).abs() < 1e-12);
        assert!(tr[1..].iter().all(|v| (v - 0.5).abs() < 1e-12));
    }

    #[test]
    fn choi_is_hermitian_with_unit_trace() {
        let ch = AffineChannel::new(
            Matrix3::new(0.2, -0.4, 0.1, 0.3, 0.5, 0.0, -0.2, 0.1, 0.6),
            Vector3::new(0.1, 0.2, -0.3),
        );
        let j = choi_matrix(&ch);
        assert!(j.hermiticity_defect() < 1e-15);
        assert!((j.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn amplitude_damping_choi_matches_kraus_construction() {
        // Kraus: K0 = diag(1, √(1−g)), K1 = √g |0⟩⟨1|; T = diag(√(1−g), √(1−g), 1−g), c = (0,0,g)
        let g: f64 = 0.3;
        let ch =
            AffineChannel::diagonal([(1.0 - g).sqrt(), (1.0 - g).sqrt(), 1.0 - g], [0.0, 0.0, g]);
        let ev = choi_matrix(&ch).eigenvalues();
        // Choi rank two with eigenvalues g/2 and (2 − g)/2
        assert!(ev[0].abs() < 1e-12 && ev[1].abs() < 1e-12);
        assert!((ev[2] - g / 2.0).abs() < 1e-12);
        assert!((ev[3] - (2.0 - g) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn cp_and_positivity_verdicts() {
        let id = is_cp(&AffineChannel::identity(), DEFAULT_TOL);
        assert!(id.cp);
        assert!(id.min_eigenvalue.abs() < 1e-12);

        let tr = is_cp(&transpose_map(), DEFAULT_TOL);
        assert!(!tr.cp);
        assert!((tr.min_eigenvalue + 0.5).abs() < 1e-12);

        let pos = is_positive(&transpose_map(), DEFAULT_TOL);
        assert!(pos.positive);
        assert!(pos.max_excess.abs() < 1e-12);

        let stretch = is_positive(
            &AffineChannel::diagonal([1.5, 0.0, 0.0], [0.0; 3]),
            DEFAULT_TOL,
        );
        assert!(!stretch.positive);
        assert!((stretch.max_excess - 0.5).abs() < 1e-9);
    }

    #[test]
    fn gad_full_maps_are_cp() {
        let fam = family_gad(0.1, 4.0).unwrap();
        for k in 0..=100 {
            let t = 0.1 * k as f64;
            assert!(is_cp(&fam.eval(t), DEFAULT_TOL).cp, "t = {t}");
        }
    }

    #[test]
    fn cp_implies_positive_on_composed_builtins() {
        let fams = [
            family_gad(0.1, 4.0).unwrap(),
            family_gad(0.7, 1.3).unwrap(),
            family_isotropic_decay(0.4).unwrap(),
            family_collapse_shift(-0.6).unwrap(),
            family_spin_cosine(1.25),
        ];
        let lattice = sphere::fibonacci_sphere(2000);
        for (i, a) in fams.iter().enumerate() {
            for b in &fams[i..] {
                for &(ta, tb) in &[(0.3, 1.7), (2.2, 0.4), (5.0, 5.0)] {
                    let ch = compose(&a.eval(ta), &b.eval(tb));
                    if is_cp(&ch, DEFAULT_TOL).cp {
                        assert!(is_positive_with(&ch, DEFAULT_TOL, &lattice).positive);
                    }
                }
            }
        }
    }

    #[test]
    fn classify_rejects_bad_grids() {
        let fam = family_isotropic_decay(0.1).unwrap();
        let opts = ClassifyOptions::default();
        assert!(classify_family(&fam, &[0.0, 1.0], &opts).is_err());
        assert!(classify_family(&fam, &[0.5, 1.0, 2.0], &opts).is_err());
        assert!(classify_family(&fam, &[0.0, 2.0, 1.0], &opts).is_err());
    }

    #[test]
    fn isotropic_decay_is_cp_divisible() {
        let fam = family_isotropic_decay(0.1).unwrap();
        let report =
            classify_family(&fam, &uniform_grid(5.0, 50), &ClassifyOptions::default()).unwrap();
        assert_eq!(report.classification, Classification::CpDivisible);
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn gad_is_non_p_divisible() {
        let fam = family_gad(0.1, 4.0).unwrap();
        let report =
            classify_family(&fam, &uniform_grid(10.0, 200), &ClassifyOptions::default()).unwrap();
        assert_eq!(report.classification, Classification::NonPDivisible);
        assert!(report.worst_positivity_excess > 0.0);
    }

    #[test]
    fn spin_cosine_flags_non_invertible_instants() {
        let omega = 1.25;
        let fam = family_spin_cosine(omega);
        let report =
            classify_family(&fam, &uniform_grid(10.0, 200), &ClassifyOptions::default()).unwrap();
        assert_eq!(report.classification, Classification::NonPDivisible);
        assert!(report.count(IntervalVerdict::NonInvertible) > 0);
        // cos(ωt) = 0 at t = (k + ½)π/ω: 0.4π·(2k+1)/2 → 1.2566, 3.7699, 6.2832, 8.7965
        let expected: Vec<f64> = (0..4)
            .map(|k| (k as f64 + 0.5) * std::f64::consts::PI / omega)
            .collect();
        assert_eq!(report.non_invertible_instants.len(), expected.len());
        for (got, want) in report.non_invertible_instants.iter().zip(&expected) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn transpose_like_family_is_p_divisible() {
        // E(t) alternates between identity and transpose, so every step is a transpose
        let fam = ChannelFamily::from_fn("flip", vec![], |t| {
            let k = (t * 10.0).round() as i64;
            if k % 2 == 0 {
                AffineChannel::identity()
            } else {
                AffineChannel::diagonal([1.0, -1.0, 1.0], [0.0; 3])
            }
        });
        let opts = ClassifyOptions::default();
        let report = classify_family(&fam, &[0.0, 0.1, 0.2, 0.3], &opts).unwrap();
        assert_eq!(report.classification, Classification::PDivisible);
        assert_eq!(report.count(IntervalVerdict::PNotCp), 3);
    }

    #[test]
    fn all_singular_is_undetermined() {
        let fam = ChannelFamily::from_fn("zero", vec![], |_| {
            AffineChannel::diagonal([0.0; 3], [0.0; 3])
        });
        assert!(matches!(
            classify_family(&fam, &uniform_grid(1.0, 4), &ClassifyOptions::default()),
            Err(Error::UndeterminedClassification)
        ));
    }

    #[test]
    fn semigroup_deviation_examples() {
        let iso = family_isotropic_decay(0.3).unwrap();
        for &(tau, t) in &[(0.0, 1.0), (0.4, 2.5), (3.0, 7.5)] {
            assert!(semigroup_deviation(&iso, tau, t).unwrap() < 1e-10);
        }
        let gad = family_gad(0.1, 4.0).unwrap();
        assert!(semigroup_deviation(&gad, 1.0, 2.0).unwrap() > 1e-3);
        assert_eq!(semigroup_deviation(&gad, 1.3, 1.3).unwrap(), 0.0);
        assert!(semigroup_deviation(&gad, 2.0, 1.0).is_err());
    }

    #[test]
    fn report_json_has_documented_fields() {
        let fam = family_isotropic_decay(0.1).unwrap();
        let report =
            classify_family(&fam, &uniform_grid(1.0, 4), &ClassifyOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["classification"], "CP-divisible");
        let first = &v["intervals"][0];
        for key in ["t0", "t1", "verdict", "min_choi_eig", "positivity_excess"] {
            assert!(first.get(key).is_some(), "{key}");
        }
        assert_eq!(first["verdict"], "CP");
        assert!(v["warnings"].as_array().unwrap().is_empty());
        assert_eq!(report.grid(), uniform_grid(1.0, 4));
    }
}
