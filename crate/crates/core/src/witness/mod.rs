//! Witness scans for distance revivals.
//!
//! A witness is a state pair, a preparation bias `p` and two consecutive grid times
//! between which the distance of the evolved pair grows by more than `epsilon`. The
//! BLP scan uses the trace distance (`p = ½`); the GBLP scan uses the generalized
//! distance over a grid of biases.
//!
//! Scans run in parallel over `(pair, p)` but always report the first witness in
//! the sequential order pairs → p → time.

mod demos;
mod theorems;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::{self, BlochVector, DistanceSeries, HelstromVector};
use crate::channel::{self, AffineChannel, ChannelFamily};
use crate::error::{Error, Result};
use crate::format::ser_f64;

pub use demos::{false_flag_demos, Demo, FalseFlagReport};
pub use theorems::{
    joint_classification, random_unital_family, theorem1_check, theorem2_classifier,
    JointClassification, Theorem1Outcome, UNITAL_TOL,
};

pub const DEFAULT_EPSILON: f64 = 1e-9;
pub const DEFAULT_P_GRID: [f64; 7] = [0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9];
pub const SWEEP_RADII: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

/// Where the scanned state pairs come from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairSource {
    /// All 15 pairs of distinct states among `±x, ±y, ±z`.
    AxisPure,
    /// `(r n, −r n)` along each axis for every radius in [`SWEEP_RADII`].
    AntipodalSweep,
    /// The pairs plotted in the three reference figures.
    FigurePairs,
    /// Uniform pairs in the ball from a seeded generator.
    Random { n_pairs: usize, seed: u64 },
}

impl PairSource {
    pub fn pairs(&self) -> Vec<(BlochVector, BlochVector)> {
        match self {
            PairSource::AxisPure => {
                let axes = axis_states();
                let mut out = Vec::new();
                for i in 0..axes.len() {
                    for j in i + 1..axes.len() {
                        out.push((axes[i], axes[j]));
                    }
                }
                out
            }
            PairSource::AntipodalSweep => {
                let mut out = Vec::new();
                for r in SWEEP_RADII {
                    for n in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
                        let a = BlochVector::from(n).scaled(r);
                        out.push((a, a.scaled(-1.0)));
                    }
                }
                out
            }
            PairSource::FigurePairs => vec![
                (
                    BlochVector::new(1.0, 0.0, 0.0),
                    BlochVector::new(0.0, 1.0, 0.0),
                ),
                (
                    BlochVector::new(0.0, 0.0, 1.0),
                    BlochVector::new(1.0, 0.0, 0.0),
                ),
                (
                    BlochVector::new(1.0, 0.0, 0.0),
                    BlochVector::new(-1.0, 0.0, 0.0),
                ),
                (
                    BlochVector::new(0.0, 0.0, 1.0),
                    BlochVector::new(0.0, 0.0, -1.0),
                ),
            ],
            PairSource::Random { n_pairs, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*n_pairs)
                    .map(|_| (random_state(&mut rng), random_state(&mut rng)))
                    .collect()
            }
        }
    }
}

fn axis_states() -> [BlochVector; 6] {
    [
        BlochVector::new(1.0, 0.0, 0.0),
        BlochVector::new(-1.0, 0.0, 0.0),
        BlochVector::new(0.0, 1.0, 0.0),
        BlochVector::new(0.0, -1.0, 0.0),
        BlochVector::new(0.0, 0.0, 1.0),
        BlochVector::new(0.0, 0.0, -1.0),
    ]
}

/// Uniform point in the unit ball.
pub fn random_state(rng: &mut impl Rng) -> BlochVector {
    loop {
        let v = BlochVector::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        if v.norm() <= 1.0 {
            return v;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessConfig {
    pub t_max: f64,
    pub n_times: usize,
    pub pair_sources: Vec<PairSource>,
    pub p_grid: Vec<f64>,
    pub epsilon: f64,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self {
            t_max: 10.0,
            n_times: 401,
            pair_sources: vec![PairSource::AxisPure, PairSource::AntipodalSweep],
            p_grid: DEFAULT_P_GRID.to_vec(),
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl WitnessConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        if !(self.epsilon > 0.0) {
            return bad("epsilon", format!("must be > 0, got {}", self.epsilon));
        }
        if self.p_grid.is_empty() {
            return bad("p_grid", "must not be empty".into());
        }
        if let Some(p) = self.p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::ProbabilityOutOfRange(*p));
        }
        if self.n_times < 10 {
            return bad("n_times", format!("must be >= 10, got {}", self.n_times));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad(
                "t_max",
                format!("must be finite and > 0, got {}", self.t_max),
            );
        }
        if self.pair_sources.is_empty() {
            return bad("pair_sources", "must not be empty".into());
        }
        Ok(())
    }

    /// `n_times` evenly spaced times on `[0, t_max]`.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.n_times - 1;
        (0..=n).map(|k| self.t_max * k as f64 / n as f64).collect()
    }

    pub fn pairs(&self) -> Vec<(BlochVector, BlochVector)> {
        self.pair_sources
            .iter()
            .flat_map(PairSource::pairs)
            .collect()
    }

    pub fn with_p_grid(mut self, p_grid: Vec<f64>) -> Self {
        self.p_grid = p_grid;
        self
    }
}

/// Certificate of a distance increase between consecutive grid times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessRecord {
    pub r1: BlochVector,
    pub r2: BlochVector,
    #[serde(serialize_with = "ser_f64")]
    pub p: f64,
    #[serde(serialize_with = "ser_f64")]
    pub t1: f64,
    #[serde(serialize_with = "ser_f64")]
    pub t2: f64,
    #[serde(rename = "D1", serialize_with = "ser_f64")]
    pub d1: f64,
    #[serde(rename = "D2", serialize_with = "ser_f64")]
    pub d2: f64,
}

impl WitnessRecord {
    pub fn increase(&self) -> f64 {
        self.d2 - self.d1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Blp,
    Gblp,
}

/// Generalized distance `max(|w(t)|, |2p − 1|)` along a time grid.
pub fn distance_trajectory(
    fam: &ChannelFamily,
    r1: BlochVector,
    r2: BlochVector,
    p: f64,
    grid: &[f64],
) -> Result<DistanceSeries> {
    let w0 = bloch::helstrom_vector(r1, r2, p)?;
    let values = grid
        .iter()
        .map(|&t| channel::evolve_helstrom(&fam.eval(t), &w0).distance())
        .collect();
    DistanceSeries::new(grid.to_vec(), values)
}

/// Trace-distance trajectory; identical to [`distance_trajectory`] at `p = ½`.
pub fn trace_distance_trajectory(
    fam: &ChannelFamily,
    r1: BlochVector,
    r2: BlochVector,
    grid: &[f64],
) -> Result<DistanceSeries> {
    distance_trajectory(fam, r1, r2, 0.5, grid)
}

/// Family sampled once on the scan grid and shared by every `(pair, p)` job.
struct SampledFamily {
    times: Vec<f64>,
    channels: Vec<AffineChannel>,
}

impl SampledFamily {
    fn new(fam: &ChannelFamily, times: Vec<f64>) -> Self {
        let channels = times.iter().map(|&t| fam.eval(t)).collect();
        Self { times, channels }
    }

    fn distances(&self, w0: &HelstromVector) -> Vec<f64> {
        self.channels
            .iter()
            .map(|ch| channel::evolve_helstrom(ch, w0).distance())
            .collect()
    }
}

fn jobs(cfg: &WitnessConfig, mode: Mode) -> Vec<(BlochVector, BlochVector, f64)> {
    let ps: Vec<f64> = match mode {
        Mode::Blp => vec![0.5],
        Mode::Gblp => cfg.p_grid.clone(),
    };
    cfg.pairs()
        .into_iter()
        .flat_map(|(a, b)| ps.iter().map(move |&p| (a, b, p)))
        .collect()
}

fn first_increase(
    sampled: &SampledFamily,
    (r1, r2, p): (BlochVector, BlochVector, f64),
    epsilon: f64,
) -> Option<WitnessRecord> {
    let w0 = bloch::helstrom_vector(r1, r2, p).ok()?;
    let d = sampled.distances(&w0);
    (0..d.len() - 1)
        .find(|&k| d[k + 1] - d[k] > epsilon)
        .map(|k| WitnessRecord {
            r1,
            r2,
            p,
            t1: sampled.times[k],
            t2: sampled.times[k + 1],
            d1: d[k],
            d2: d[k + 1],
        })
}

/// First witness in scan order, or `None`.
pub fn scan(fam: &ChannelFamily, cfg: &WitnessConfig, mode: Mode) -> Result<Option<WitnessRecord>> {
    cfg.validate()?;
    let sampled = SampledFamily::new(fam, cfg.grid());
    Ok(jobs(cfg, mode)
        .into_par_iter()
        .find_map_first(|job| first_increase(&sampled, job, cfg.epsilon)))
}

pub fn blp_witness(fam: &ChannelFamily, cfg: &WitnessConfig) -> Result<Option<WitnessRecord>> {
    scan(fam, cfg, Mode::Blp)
}

pub fn gblp_witness(fam: &ChannelFamily, cfg: &WitnessConfig) -> Result<Option<WitnessRecord>> {
    scan(fam, cfg, Mode::Gblp)
}

/// Discrete stand-in for a non-Markovianity measure: the largest, over scanned
/// `(pair, p)`, of the summed step increases exceeding `epsilon`.
///
/// Not a canonical measure; it only orders families by total revival on the grid.
pub fn nm_measure(fam: &ChannelFamily, cfg: &WitnessConfig, mode: Mode) -> Result<f64> {
    cfg.validate()?;
    let sampled = SampledFamily::new(fam, cfg.grid());
    let eps = cfg.epsilon;
    Ok(jobs(cfg, mode)
        .into_par_iter()
        .map(|(r1, r2, p)| {
            let w0 = match bloch::helstrom_vector(r1, r2, p) {
                Ok(w) => w,
                Err(_) => return 0.0,
            };
            sampled
                .distances(&w0)
                .windows(2)
                .map(|w| w[1] - w[0])
                .filter(|&inc| inc > eps)
                .fold(0.0, |acc, inc| acc + inc)
        })
        .reduce(|| 0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{family_gad, family_isotropic_decay, family_spin_cosine};

    #[test]
    fn config_validation() {
        let ok = WitnessConfig::default();
        assert!(ok.validate().is_ok());
        assert!(WitnessConfig {
            epsilon: 0.0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(WitnessConfig {
            n_times: 9,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(ok.clone().with_p_grid(vec![]).validate().is_err());
        assert!(ok.clone().with_p_grid(vec![1.2]).validate().is_err());
    }

    #[test]
    fn default_pair_set() {
        let cfg = WitnessConfig::default();
        let pairs = cfg.pairs();
        assert_eq!(pairs.len(), 15 + 12);
        assert!(pairs
            .iter()
            .all(|(a, b)| a.is_physical() && b.is_physical()));
        let r = PairSource::Random {
            n_pairs: 5,
            seed: 9,
        };
        assert_eq!(r.pairs(), r.pairs());
    }

    #[test]
    fn gad_figure_trajectory_oscillates() {
        let fam = family_gad(0.1, 4.0).unwrap();
        let grid: Vec<f64> = (0..500).map(|k| 5.0 * k as f64 / 499.0).collect();
        let s = distance_trajectory(
            &fam,
            BlochVector::new(1.0, 0.0, 0.0),
            BlochVector::new(0.0, 1.0, 0.0),
            0.25,
            &grid,
        )
        .unwrap();
        assert!(s.increase_runs(1e-9).len() >= 3);
        assert!((s.values[0] - 0.625f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn isotropic_small_radius_is_flat() {
        let fam = family_isotropic_decay(0.1).unwrap();
        let grid: Vec<f64> = (0..100).map(|k| 0.3 * k as f64).collect();
        let a = BlochVector::new(0.0, 0.0, 0.4);
        let s = distance_trajectory(&fam, a, a.scaled(-1.0), 0.25, &grid).unwrap();
        assert!(s.values.iter().all(|&v| (v - 0.5).abs() < 1e-12));
    }

    #[test]
    fn spin_equatorial_trajectory_is_clipped_cosine() {
        let fam = family_spin_cosine(1.25);
        let grid: Vec<f64> = (0..300).map(|k| 0.03 * k as f64).collect();
        let s = distance_trajectory(
            &fam,
            BlochVector::new(1.0, 0.0, 0.0),
            BlochVector::new(-1.0, 0.0, 0.0),
            0.25,
            &grid,
        )
        .unwrap();
        for (t, d) in s.iter() {
            assert!((d - (1.25 * t).cos().abs().max(0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn blp_and_gblp_witnesses_on_reference_families() {
        let cfg = WitnessConfig::default();
        let gad = family_gad(0.1, 4.0).unwrap();
        let iso = family_isotropic_decay(0.1).unwrap();
        let spin = family_spin_cosine(1.25);

        assert!(blp_witness(&gad, &cfg).unwrap().is_none());
        let g = gblp_witness(&gad, &cfg)
            .unwrap()
            .expect("GAD has a GBLP witness");
        assert!(g.increase() > cfg.epsilon);
        assert!(g.t1 < g.t2);

        assert!(blp_witness(&iso, &cfg).unwrap().is_none());
        assert!(gblp_witness(&iso, &cfg).unwrap().is_none());

        let b = blp_witness(&spin, &cfg).unwrap().expect("spin revives");
        assert_eq!(b.p, 0.5);
        assert!(b.d2 - b.d1 > cfg.epsilon);
    }

    #[test]
    fn gad_witness_found_with_figure_bias_only() {
        let cfg = WitnessConfig {
            pair_sources: vec![PairSource::FigurePairs],
            ..WitnessConfig::default()
        }
        .with_p_grid(vec![0.25]);
        let w = gblp_witness(&family_gad(0.1, 4.0).unwrap(), &cfg)
            .unwrap()
            .unwrap();
        assert_eq!(w.p, 0.25);
    }

    #[test]
    fn gblp_at_half_equals_blp() {
        let cfg = WitnessConfig::default().with_p_grid(vec![0.5]);
        for fam in [
            family_gad(0.1, 4.0).unwrap(),
            family_spin_cosine(1.25),
            family_spin_cosine(0.3),
            family_isotropic_decay(0.2).unwrap(),
        ] {
            assert_eq!(
                blp_witness(&fam, &cfg).unwrap(),
                gblp_witness(&fam, &cfg).unwrap()
            );
        }
    }

    #[test]
    fn nm_measure_matches_witness_outcomes() {
        let cfg = WitnessConfig::default();
        let gad = family_gad(0.1, 4.0).unwrap();
        let iso = family_isotropic_decay(0.1).unwrap();
        let spin = family_spin_cosine(1.25);
        assert_eq!(nm_measure(&iso, &cfg, Mode::Blp).unwrap(), 0.0);
        assert_eq!(nm_measure(&iso, &cfg, Mode::Gblp).unwrap(), 0.0);
        assert_eq!(nm_measure(&gad, &cfg, Mode::Blp).unwrap(), 0.0);
        assert!(nm_measure(&gad, &cfg, Mode::Gblp).unwrap() > 0.0);
        assert!(nm_measure(&spin, &cfg, Mode::Blp).unwrap() > 0.0);
    }

    #[test]
    fn scan_is_deterministic_across_thread_counts() {
        let cfg = WitnessConfig {
            pair_sources: vec![
                PairSource::AxisPure,
                PairSource::Random {
                    n_pairs: 40,
                    seed: 3,
                },
            ],
            ..WitnessConfig::default()
        };
        let fam = family_gad(0.3, 2.0).unwrap();
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| gblp_witness(&fam, &cfg).unwrap());
        let parallel = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| gblp_witness(&fam, &cfg).unwrap());
        assert_eq!(serial, parallel);
    }
}
