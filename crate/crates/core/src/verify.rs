//! Seeded verification suites: oracle equivalence, the two unital/divisibility
//! theorems, and contraction under positive maps.
//!
//! Each suite returns a [`SuiteSummary`]; a suite passes iff all its properties do.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bloch::{generalized_distance, helstrom_eigenvalue_oracle};
use crate::channel::{
    self, compose, family_collapse_shift_with_rate, family_gad, family_isotropic_decay,
    family_spin_cosine, AffineChannel, ChannelFamily,
};
use crate::divisibility::{self, uniform_grid, Classification, ClassifyOptions};
use crate::error::Result;
use crate::format::ser_f64;
use crate::witness::{
    self, random_state, random_unital_family, theorem1_check, JointClassification, WitnessConfig,
};

pub const ORACLE_TRIPLES: usize = 10_000;
pub const ORACLE_TOL: f64 = 1e-10;
pub const THEOREM1_FAMILIES: usize = 100;
pub const CONTRACTION_MAPS: usize = 50;
pub const CONTRACTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Theorem1,
    Theorem2,
    Contraction,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "oracle" => Ok(Suite::Oracle),
            "theorem1" => Ok(Suite::Theorem1),
            "theorem2" => Ok(Suite::Theorem2),
            "contraction" => Ok(Suite::Contraction),
            "all" => Ok(Suite::All),
            other => Err(format!(
                "unknown suite `{other}` (oracle, theorem1, theorem2, contraction, all)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    #[serde(serialize_with = "ser_f64")]
    pub worst_deviation: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

impl SuiteSummary {
    fn new(suite: &str, seed: u64, properties: Vec<PropertyResult>) -> Self {
        Self {
            suite: suite.to_string(),
            seed,
            passed: properties.iter().all(|p| p.passed),
            properties,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

pub fn run(suite: Suite, seed: u64) -> Result<SuiteSummary> {
    let props = match suite {
        Suite::Oracle => vec![oracle_equivalence(seed)],
        Suite::Theorem1 => theorem1_suite(seed)?,
        Suite::Theorem2 => theorem2_suite()?,
        Suite::Contraction => vec![contraction_suite(seed)?],
        Suite::All => {
            let mut v = vec![oracle_equivalence(seed)];
            v.extend(theorem1_suite(seed)?);
            v.extend(theorem2_suite()?);
            v.push(contraction_suite(seed)?);
            v
        }
    };
    let name = match suite {
        Suite::Oracle => "oracle",
        Suite::Theorem1 => "theorem1",
        Suite::Theorem2 => "theorem2",
        Suite::Contraction => "contraction",
        Suite::All => "all",
    };
    Ok(SuiteSummary::new(name, seed, props))
}

/// Largest `|closed form − eigenvalue oracle|` over seeded random triples.
pub fn oracle_max_deviation(seed: u64, n: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let (a, b) = (random_state(&mut rng), random_state(&mut rng));
        let p = rng.random_range(0.0..=1.0);
        let closed = generalized_distance(a, b, p).expect("p in range");
        let oracle = helstrom_eigenvalue_oracle(a, b, p).expect("p in range");
        worst = worst.max((closed - oracle).abs());
    }
    worst
}

fn oracle_equivalence(seed: u64) -> PropertyResult {
    let worst = oracle_max_deviation(seed, ORACLE_TRIPLES);
    PropertyResult {
        name: "oracle-equivalence".into(),
        passed: worst < ORACLE_TOL,
        worst_deviation: worst,
        detail: format!("{ORACLE_TRIPLES} random (r1, r2, p) triples, tolerance {ORACLE_TOL:e}"),
    }
}

/// Theorem-1 tallies over seeded random unital families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Theorem1Tally {
    pub families: usize,
    pub consistent: usize,
    pub direct_agreement: usize,
    pub gblp_records: usize,
    pub converted: usize,
    pub non_markovian: usize,
}

pub fn theorem1_tally(seed: u64, n: usize, cfg: &WitnessConfig) -> Result<Theorem1Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Theorem1Tally::default();
    for _ in 0..n {
        let fam = random_unital_family(&mut rng);
        let out = theorem1_check(&fam, cfg)?;
        tally.families += 1;
        tally.consistent += out.is_consistent() as usize;
        tally.direct_agreement += out.direct_agreement() as usize;
        tally.gblp_records += out.gblp.is_some() as usize;
        tally.converted += (out.gblp.is_some() && out.converted_blp.is_some()) as usize;
        tally.non_markovian += out.gblp_non_markovian() as usize;
    }
    Ok(tally)
}

fn theorem1_suite(seed: u64) -> Result<Vec<PropertyResult>> {
    let t = theorem1_tally(seed, THEOREM1_FAMILIES, &WitnessConfig::default())?;
    Ok(vec![
        PropertyResult {
            name: "theorem1-agreement".into(),
            passed: t.consistent == t.families,
            worst_deviation: (t.families - t.consistent) as f64,
            detail: format!(
                "{}/{} unital families consistent ({} non-Markovian, {} agree without conversion)",
                t.consistent, t.families, t.non_markovian, t.direct_agreement
            ),
        },
        PropertyResult {
            name: "theorem1-rescaling".into(),
            passed: t.converted == t.gblp_records,
            worst_deviation: (t.gblp_records - t.converted) as f64,
            detail: format!(
                "{}/{} GBLP records rescale to BLP records",
                t.converted, t.gblp_records
            ),
        },
    ])
}

/// Expected joint verdicts for the three reference families.
pub struct ExpectedRow {
    pub family: ChannelFamily,
    pub unital: bool,
    pub blp_nm: bool,
    pub gblp_nm: bool,
    pub divisibility: Classification,
    pub non_invertible: bool,
}

pub fn reference_rows() -> Result<Vec<ExpectedRow>> {
    Ok(vec![
        ExpectedRow {
            family: family_gad(0.1, 4.0)?,
            unital: false,
            blp_nm: false,
            gblp_nm: true,
            divisibility: Classification::NonPDivisible,
            non_invertible: false,
        },
        ExpectedRow {
            family: family_isotropic_decay(0.1)?,
            unital: true,
            blp_nm: false,
            gblp_nm: false,
            divisibility: Classification::CpDivisible,
            non_invertible: false,
        },
        ExpectedRow {
            family: family_spin_cosine(1.25),
            unital: true,
            blp_nm: true,
            gblp_nm: true,
            divisibility: Classification::NonPDivisible,
            non_invertible: true,
        },
    ])
}

impl ExpectedRow {
    pub fn matches(&self, got: &JointClassification) -> bool {
        got.unital == self.unital
            && got.blp_non_markovian == self.blp_nm
            && got.gblp_non_markovian == self.gblp_nm
            && got.divisibility == self.divisibility
            && got.non_invertible_instants.is_empty() != self.non_invertible
    }
}

fn theorem2_suite() -> Result<Vec<PropertyResult>> {
    let cfg = WitnessConfig::default();
    let grid = uniform_grid(10.0, divisibility::DEFAULT_INTERVALS);
    let opts = ClassifyOptions::default();
    let mut out = Vec::new();
    for row in reference_rows()? {
        let got = witness::joint_classification(&row.family, &cfg, &grid, &opts)?;
        let passed = row.matches(&got) && got.is_consistent();
        let mut detail = got.label();
        if !got.violations.is_empty() {
            detail.push_str(&format!(" violations: {}", got.violations.join("; ")));
        }
        out.push(PropertyResult {
            name: format!("theorem2-{}", row.family.name()),
            passed,
            worst_deviation: if passed { 0.0 } else { 1.0 },
            detail,
        });
    }
    Ok(out)
}

fn random_source_family(rng: &mut ChaCha8Rng) -> ChannelFamily {
    match rng.random_range(0..5) {
        0 => family_gad(rng.random_range(0.05..1.0), rng.random_range(0.5..6.0)).expect("valid"),
        1 => family_isotropic_decay(rng.random_range(0.05..1.0)).expect("valid"),
        2 => family_collapse_shift_with_rate(
            rng.random_range(-1.0..=1.0),
            rng.random_range(0.1..2.0),
        )
        .expect("valid"),
        3 => family_spin_cosine(rng.random_range(0.3..2.0)),
        _ => random_unital_family(rng),
    }
}

/// Intermediate maps of random families that pass the positivity test, a quarter
/// of them followed by the transpose so that P-but-not-CP steps are included.
/// Each map comes with the family value at the start of its step.
pub fn p_certified_maps(seed: u64, n: usize) -> Vec<(AffineChannel, AffineChannel)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let transpose = AffineChannel::diagonal([1.0, -1.0, 1.0], [0.0; 3]);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let fam = random_source_family(&mut rng);
        let tau = rng.random_range(0.0..8.0);
        let t = tau + rng.random_range(0.01..1.5);
        let Ok(mut lambda) = channel::intermediate(&fam, tau, t) else {
            continue;
        };
        if rng.random_bool(0.25) {
            lambda = compose(&transpose, &lambda);
        }
        if divisibility::is_positive(&lambda, divisibility::DEFAULT_TOL).positive {
            out.push((lambda, fam.eval(tau)));
        }
    }
    out
}

/// Largest generalized-distance increase across one positive step, over the default
/// scan pairs and biases, applied both to the raw pairs and to the pairs evolved to
/// the start of the step.
pub fn contraction_worst_increase(maps: &[(AffineChannel, AffineChannel)]) -> f64 {
    let cfg = WitnessConfig::default();
    let pairs = cfg.pairs();
    let mut worst = f64::NEG_INFINITY;
    for (lambda, before) in maps {
        for &(a, b) in &pairs {
            for start in [(a, b), (before.apply(a), before.apply(b))] {
                for &p in &cfg.p_grid {
                    let d0 = generalized_distance(start.0, start.1, p).expect("p in range");
                    let d1 = generalized_distance(lambda.apply(start.0), lambda.apply(start.1), p)
                        .expect("p in range");
                    worst = worst.max(d1 - d0);
                }
            }
        }
    }
    worst
}

fn contraction_suite(seed: u64) -> Result<PropertyResult> {
    let maps = p_certified_maps(seed, CONTRACTION_MAPS);
    let worst = contraction_worst_increase(&maps);
    Ok(PropertyResult {
        name: "contraction".into(),
        passed: worst <= CONTRACTION_TOL,
        worst_deviation: worst,
        detail: format!(
            "{CONTRACTION_MAPS} P-certified steps; largest distance increase {worst:e} (tolerance {CONTRACTION_TOL:e})"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        assert_eq!("oracle".parse::<Suite>().unwrap(), Suite::Oracle);
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn oracle_suite_passes() {
        let s = run(Suite::Oracle, 1).unwrap();
        assert!(s.passed);
        assert!(s.properties[0].worst_deviation < ORACLE_TOL);
    }

    #[test]
    fn certified_maps_are_deterministic_and_positive() {
        let a = p_certified_maps(5, 10);
        let b = p_certified_maps(5, 10);
        assert_eq!(a, b);
        assert!(a
            .iter()
            .all(|(m, _)| divisibility::is_positive(m, divisibility::DEFAULT_TOL).positive));
        assert!(contraction_worst_increase(&a) <= CONTRACTION_TOL);
    }

    #[test]
    fn contraction_catches_expanding_maps() {
        let stretch = AffineChannel::diagonal([1.2, 1.0, 1.0], [0.0; 3]);
        let worst = contraction_worst_increase(&[(stretch, AffineChannel::identity())]);
        assert!(worst > 0.01);
    }
}
