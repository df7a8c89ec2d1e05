//! Executable checks relating the BLP and GBLP conditions to unitality and
//! P-divisibility.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Rotation3, Unit, Vector3};
use rand::Rng;
use serde::Serialize;

use super::{blp_witness, gblp_witness, WitnessConfig, WitnessRecord};
use crate::bloch::{self, trace_distance};
use crate::channel::{AffineChannel, ChannelFamily};
use crate::divisibility::{self, Classification, ClassifyOptions, DivisibilityReport};
use crate::error::{Error, Result};

/// Largest `|c(t)|` on the grid for which a family still counts as unital.
pub const UNITAL_TOL: f64 = 1e-10;

fn check_unital(fam: &ChannelFamily, grid: &[f64]) -> Result<()> {
    let (max_translation, at) = fam.max_translation(grid);
    if max_translation > UNITAL_TOL {
        return Err(Error::NonUnitalInput {
            max_translation,
            at,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Outcome {
    pub blp: Option<WitnessRecord>,
    pub gblp: Option<WitnessRecord>,
    /// BLP record built from the GBLP one by `r₁' = p r₁`, `r₂' = q r₂`.
    pub converted_blp: Option<WitnessRecord>,
    /// The BLP record evaluated as a GBLP record at `p = ½`.
    pub reemitted_gblp: Option<WitnessRecord>,
    pub violation: Option<String>,
}

impl Theorem1Outcome {
    pub fn is_consistent(&self) -> bool {
        self.violation.is_none()
    }

    pub fn blp_non_markovian(&self) -> bool {
        self.blp.is_some() || self.converted_blp.is_some()
    }

    pub fn gblp_non_markovian(&self) -> bool {
        self.gblp.is_some() || self.reemitted_gblp.is_some()
    }

    /// Both scans, taken alone, reached the same verdict.
    pub fn direct_agreement(&self) -> bool {
        self.blp.is_some() == self.gblp.is_some()
    }
}

/// For unital families, check that a GBLP witness implies a BLP witness and back.
///
/// A GBLP record `(r₁, r₂, p)` is turned into a BLP record on the rescaled states
/// `p r₁`, `q r₂` over the same interval; its trace distance is `½|w(t)|`, so the
/// increase halves and is required to exceed `epsilon / 2`. A BLP record is
/// re-evaluated with the generalized distance at `p = ½`.
pub fn theorem1_check(fam: &ChannelFamily, cfg: &WitnessConfig) -> Result<Theorem1Outcome> {
    cfg.validate()?;
    check_unital(fam, &cfg.grid())?;
    let blp = blp_witness(fam, cfg)?;
    let gblp = gblp_witness(fam, cfg)?;
    let mut violations = Vec::new();

    let converted_blp = match &gblp {
        Some(g) => {
            let (a, b) = (g.r1.scaled(g.p), g.r2.scaled(1.0 - g.p));
            let (e1, e2) = (fam.eval(g.t1), fam.eval(g.t2));
            let rec = WitnessRecord {
                r1: a,
                r2: b,
                p: 0.5,
                t1: g.t1,
                t2: g.t2,
                d1: trace_distance(e1.apply(a), e1.apply(b)),
                d2: trace_distance(e2.apply(a), e2.apply(b)),
            };
            let valid = a.is_physical()
                && b.is_physical()
                && rec.increase() > cfg.epsilon / 2.0
                && (0.0..=1.0).contains(&rec.d1)
                && (0.0..=1.0).contains(&rec.d2);
            if valid {
                Some(rec)
            } else {
                violations.push(format!(
                    "GBLP record at p = {} on [{}, {}] does not rescale to a BLP increase (ΔD = {:e})",
                    g.p,
                    g.t1,
                    g.t2,
                    rec.increase()
                ));
                None
            }
        }
        None => None,
    };

    let reemitted_gblp = match &blp {
        Some(b) => {
            let (e1, e2) = (fam.eval(b.t1), fam.eval(b.t2));
            let d1 = bloch::generalized_distance(e1.apply(b.r1), e1.apply(b.r2), 0.5)?;
            let d2 = bloch::generalized_distance(e2.apply(b.r1), e2.apply(b.r2), 0.5)?;
            let rec = WitnessRecord {
                d1,
                d2,
                p: 0.5,
                ..*b
            };
            if rec.increase() > cfg.epsilon {
                Some(rec)
            } else {
                violations.push(format!(
                    "BLP record on [{}, {}] is not a GBLP increase at p = 1/2",
                    b.t1, b.t2
                ));
                None
            }
        }
        None => None,
    };

    let blp_nm = blp.is_some() || converted_blp.is_some();
    let gblp_nm = gblp.is_some() || reemitted_gblp.is_some();
    if blp_nm != gblp_nm {
        violations.push(format!("BLP-NM = {blp_nm} but GBLP-NM = {gblp_nm}"));
    }

    Ok(Theorem1Outcome {
        blp,
        gblp,
        converted_blp,
        reemitted_gblp,
        violation: (!violations.is_empty()).then(|| violations.join("; ")),
    })
}

/// A random unital family `T(t) = R D(t) Rᵀ`, `c = 0`.
///
/// `R` is a fixed random rotation and `D(t) = diag(e^{−g_i t}(1 − a_i + a_i cos ω_i t))`.
/// Half of the draws set every `a_i = 0`, giving monotone contractions.
pub fn random_unital_family(rng: &mut impl Rng) -> ChannelFamily {
    let axis = Vector3::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    );
    let angle = rng.random_range(0.0..PI);
    let rot = if axis.norm() > 1e-6 {
        Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle).into_inner()
    } else {
        Matrix3::identity()
    };
    let oscillating = rng.random_bool(0.5);
    let mut g = [0.0; 3];
    let mut a = [0.0; 3];
    let mut w = [0.0; 3];
    for i in 0..3 {
        g[i] = rng.random_range(0.02..0.5);
        a[i] = if oscillating {
            rng.random_range(0.1..0.9)
        } else {
            0.0
        };
        w[i] = rng.random_range(0.5..3.0);
    }
    let params = (0..3)
        .flat_map(|i| {
            [
                (format!("g{}", i + 1), g[i]),
                (format!("a{}", i + 1), a[i]),
                (format!("w{}", i + 1), w[i]),
            ]
        })
        .collect();
    ChannelFamily::from_fn("random-unital", params, move |t| {
        let d = Vector3::from_fn(|i, _| (-g[i] * t).exp() * (1.0 - a[i] + a[i] * (w[i] * t).cos()));
        AffineChannel::new(
            rot * Matrix3::from_diagonal(&d) * rot.transpose(),
            Vector3::zeros(),
        )
    })
    .with_unital_hint(true)
}

/// The joint BLP / GBLP / divisibility verdict for one family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointClassification {
    pub family: String,
    pub unital: bool,
    pub blp_non_markovian: bool,
    pub gblp_non_markovian: bool,
    pub divisibility: Classification,
    pub non_invertible_instants: Vec<f64>,
    pub blp_witness: Option<WitnessRecord>,
    pub gblp_witness: Option<WitnessRecord>,
    pub violations: Vec<String>,
}

impl JointClassification {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn label(&self) -> String {
        let nm = |b: bool| if b { "NM" } else { "M" };
        let mut s = format!(
            "{{{}, BLP-{}, GBLP-{}, {}",
            if self.unital { "unital" } else { "non-unital" },
            nm(self.blp_non_markovian),
            nm(self.gblp_non_markovian),
            self.divisibility.as_str()
        );
        if !self.non_invertible_instants.is_empty() {
            s.push_str(&format!(
                " ({} non-invertible instants)",
                self.non_invertible_instants.len()
            ));
        }
        s.push('}');
        s
    }
}

/// Joint classification plus its consistency checks, without failing on conflicts.
///
/// Checks: unital ⇒ BLP-NM = GBLP-NM; GBLP-NM ⇔ non-P-divisible (skipped when
/// the divisibility verdict is partially undetermined); BLP ≠ GBLP only for
/// non-unital, non-P-divisible, BLP-Markovian families.
pub fn joint_classification(
    fam: &ChannelFamily,
    cfg: &WitnessConfig,
    grid: &[f64],
    opts: &ClassifyOptions,
) -> Result<JointClassification> {
    cfg.validate()?;
    let (max_c, _) = fam.max_translation(&cfg.grid());
    let unital = max_c <= UNITAL_TOL;
    let blp = blp_witness(fam, cfg)?;
    let gblp = gblp_witness(fam, cfg)?;
    let report: DivisibilityReport = divisibility::classify_family(fam, grid, opts)?;

    let (blp_nm, gblp_nm) = (blp.is_some(), gblp.is_some());
    let non_p = report.classification == Classification::NonPDivisible;
    let mut violations = Vec::new();
    if unital && blp_nm != gblp_nm {
        violations.push(format!(
            "unital family but BLP-NM = {blp_nm}, GBLP-NM = {gblp_nm}"
        ));
    }
    if report.classification != Classification::PartiallyUndetermined && gblp_nm != non_p {
        violations.push(format!(
            "GBLP-NM = {gblp_nm} but divisibility is {}",
            report.classification.as_str()
        ));
    }
    if blp_nm != gblp_nm && (unital || !non_p || blp_nm) {
        violations.push(format!(
            "BLP and GBLP differ outside the non-unital, non-P-divisible, BLP-Markovian class \
             (unital = {unital}, {}, BLP-NM = {blp_nm})",
            report.classification.as_str()
        ));
    }

    Ok(JointClassification {
        family: fam.name().to_string(),
        unital,
        blp_non_markovian: blp_nm,
        gblp_non_markovian: gblp_nm,
        divisibility: report.classification,
        non_invertible_instants: report.non_invertible_instants,
        blp_witness: blp,
        gblp_witness: gblp,
        violations,
    })
}

/// [`joint_classification`] that fails with `InconsistentScan` on any conflict.
pub fn theorem2_classifier(
    fam: &ChannelFamily,
    cfg: &WitnessConfig,
    grid: &[f64],
    opts: &ClassifyOptions,
) -> Result<JointClassification> {
    let joint = joint_classification(fam, cfg, grid, opts)?;
    if joint.is_consistent() {
        Ok(joint)
    } else {
        Err(Error::InconsistentScan(format!(
            "{}: {}",
            joint.family,
            joint.violations.join("; ")
        )))
    }
}
