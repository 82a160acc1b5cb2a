//! The full error-correction run: preparation, PBS encoding, fiber patching,
//! Z-measurement, feed-forward and analysis of the surviving photon.

mod fit;
mod hom;
mod sampling;

pub use fit::{cardinal_fidelity, fidelity_45, fit_malus, visibility, MalusFit};
pub use hom::{hom_coincidence, hom_scan, HomPoint};
pub use sampling::{sample_counts, sample_counts_on_stream};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{
    analyzer_point, apply_feedforward, coincidence_postselect, herald_probability, z_measure,
    DetectorId, FeedForwardRule, MeasurementBranch,
};
use crate::elements::{delay, hwp, pbs, rewire, WiringConfig};
use crate::error::{Error, Result};
use crate::state::{
    apply_element, jones_from_logical, logical_from_jones, product_state, DistinguishabilitySpec,
    Jones, LogicalBit, Path, SinglePhotonSpec, TwoPhotonState,
};

/// Angle of the half-wave plate that puts the ancilla in |0⟩.
pub const ANCILLA_HWP_DEG: f64 = 22.5;

/// Analyzer angles used when a config gives none: −90° to 90° in 10° steps.
pub fn default_thetas() -> Vec<f64> {
    (-9..=9).map(|k| f64::from(k) * 10.0).collect()
}

fn default_pair_rate() -> f64 {
    20.0
}

fn default_duration() -> f64 {
    60.0
}

/// One run of the apparatus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// HWP1 fast-axis angle in degrees; the qubit is linear at twice this.
    pub qubit_hwp_angle: f64,
    #[serde(default)]
    pub wiring: WiringConfig,
    /// Indistinguishability of the qubit and ancilla photons at the encoder,
    /// `|⟨ξ_q|ξ_a⟩|²`. This is the visibility of their two-photon
    /// interference; the wavepacket overlap fed to the state model is its
    /// square root.
    #[serde(default = "one")]
    pub overlap_v: f64,
    /// Flat-background admixture on the analyzed photon.
    #[serde(default)]
    pub imperfection_eps: f64,
    #[serde(default = "yes")]
    pub pc_enabled: bool,
    #[serde(default = "default_thetas")]
    pub thetas: Vec<f64>,
    /// Photon pairs per second.
    #[serde(default = "default_pair_rate")]
    pub pair_rate: f64,
    /// Counting time per analyzer setting, seconds.
    #[serde(default = "default_duration")]
    pub duration: f64,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            qubit_hwp_angle: 22.5,
            wiring: WiringConfig::AcBd,
            overlap_v: 1.0,
            imperfection_eps: 0.0,
            pc_enabled: true,
            thetas: default_thetas(),
            pair_rate: default_pair_rate(),
            duration: default_duration(),
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: String| {
            if ok {
                Ok(())
            } else {
                Err(Error::Validation(msg))
            }
        };
        check(
            self.qubit_hwp_angle.is_finite(),
            format!("qubit_hwp_angle {} is not finite", self.qubit_hwp_angle),
        )?;
        check(
            (0.0..=1.0).contains(&self.overlap_v),
            format!("overlap_v {} outside [0, 1]", self.overlap_v),
        )?;
        check(
            (0.0..=1.0).contains(&self.imperfection_eps),
            format!("imperfection_eps {} outside [0, 1]", self.imperfection_eps),
        )?;
        check(!self.thetas.is_empty(), "thetas is empty".into())?;
        check(
            self.thetas.iter().all(|t| t.is_finite()),
            "thetas contains a non-finite angle".into(),
        )?;
        check(
            self.pair_rate >= 0.0 && self.pair_rate.is_finite(),
            format!("pair_rate {} must be non-negative", self.pair_rate),
        )?;
        check(
            self.duration >= 0.0 && self.duration.is_finite(),
            format!("duration {} must be non-negative", self.duration),
        )
    }

    /// Linear polarization angle of the prepared qubit, degrees.
    pub fn qubit_angle_deg(&self) -> f64 {
        2.0 * self.qubit_hwp_angle
    }
}

/// Computational-basis amplitudes of the qubit HWP1 prepares from |H⟩.
pub fn qubit_from_hwp(angle_deg: f64) -> (Complex64, Complex64) {
    let h = [Complex64::new(1.0, 0.0), Complex64::default()];
    let m = hwp(angle_deg, Path::QUBIT_IN);
    let u = m.matrix();
    let jones: Jones = [
        u[(0, 0)] * h[0] + u[(0, 1)] * h[1],
        u[(1, 0)] * h[0] + u[(1, 1)] * h[1],
    ];
    logical_from_jones(jones)
}

/// Delay, PBS and coincidence post-selection on a prepared input pair.
/// Returns the subnormalized output on (A, B) and its norm.
fn encode_prepared(input: TwoPhotonState, overlap_v: f64) -> Result<(TwoPhotonState, f64)> {
    let spec = DistinguishabilitySpec::from_overlap(overlap_v.sqrt())?;
    let s = input.with_paths([Path::A, Path::B]);
    let s = delay(&s, Path::QUBIT_IN, &spec)?;
    let s = apply_element(
        &s,
        &pbs(Path::QUBIT_IN, Path::ANCILLA_IN, Path::A, Path::B)?,
    )?;
    Ok(coincidence_postselect(&s, [Path::A, Path::B]))
}

fn validate_overlap(v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Validation(format!("overlap_v {v} outside [0, 1]")))
    }
}

/// Encodes `α|0⟩ + β|1⟩` into the two-photon code on paths A and B.
///
/// The qubit photon enters the PBS at the qubit port and the ancilla |0⟩ at
/// the other; H is transmitted, so the qubit's H component leaves on A.
/// Returns the normalized post-selected state and the post-selection
/// probability. `overlap_v` is the photons' indistinguishability.
pub fn encode_qubit(
    alpha: Complex64,
    beta: Complex64,
    overlap_v: f64,
) -> Result<(TwoPhotonState, f64)> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if !((norm - 1.0).abs() <= 1e-12) {
        return Err(Error::Validation(format!(
            "qubit amplitudes have |α|²+|β|² = {norm}"
        )));
    }
    validate_overlap(overlap_v)?;
    let q = SinglePhotonSpec::prompt(Path::QUBIT_IN, jones_from_logical(alpha, beta))?;
    let a = SinglePhotonSpec::prompt(Path::ANCILLA_IN, LogicalBit::Zero.jones())?;
    let (s, p) = encode_prepared(product_state(&q, &a)?, overlap_v)?;
    Ok((s.normalized()?, p))
}

/// Z-measurement branches after feed-forward, with the post-selection
/// probability of the encoder.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub success_probability: f64,
    pub branches: Vec<MeasurementBranch>,
}

impl PipelineOutput {
    pub fn discarded_probability(&self) -> f64 {
        1.0 - self.success_probability
    }
}

/// Runs the optics for `cfg` up to (not including) the output analyzer.
pub fn measurement_branches(cfg: &ExperimentConfig) -> Result<PipelineOutput> {
    cfg.validate()?;
    let h = [Complex64::new(1.0, 0.0), Complex64::default()];
    let pair = product_state(
        &SinglePhotonSpec::prompt(Path::QUBIT_IN, h)?,
        &SinglePhotonSpec::prompt(Path::ANCILLA_IN, h)?,
    )?;
    let pair = apply_element(&pair, &hwp(cfg.qubit_hwp_angle, Path::QUBIT_IN))?;
    let pair = apply_element(&pair, &hwp(ANCILLA_HWP_DEG, Path::ANCILLA_IN))?;
    let (encoded, success_probability) = encode_prepared(pair, cfg.overlap_v)?;
    let patched = rewire(&encoded, cfg.wiring);
    let branches = z_measure(&patched, Path::D)?;
    let branches = apply_feedforward(
        &branches,
        &FeedForwardRule::bit_flip_on(Path::C),
        cfg.pc_enabled,
    );
    Ok(PipelineOutput {
        success_probability,
        branches,
    })
}

/// Fit and figures of merit for one coincidence curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    /// Fit of the analytic probabilities.
    pub fit: MalusFit,
    pub visibility: f64,
    /// Cardinal-point fidelity with respect to the input qubit.
    pub fidelity_45: f64,
    /// `(1 + V)/2` from the fitted visibility.
    pub fidelity_fit: f64,
    /// Fit of the sampled counts, when there are any.
    pub counts_fit: Option<MalusFit>,
    pub counts_visibility: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta_deg: f64,
    pub p_d1_d2: f64,
    pub p_d1_d3: f64,
    pub counts_d1_d2: Option<u64>,
    pub counts_d1_d3: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub d1_d2: CurveSummary,
    pub d1_d3: CurveSummary,
    /// Cardinal-point fidelity of the delivered photon, both heralds summed.
    pub fidelity_45: f64,
    pub success_probability: f64,
    pub discarded_probability: f64,
    pub herald_d2: f64,
    pub herald_d3: f64,
    pub seed: u64,
}

impl SweepResult {
    pub fn thetas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.theta_deg).collect()
    }

    pub fn p_d1_d2(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.p_d1_d2).collect()
    }

    pub fn p_d1_d3(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.p_d1_d3).collect()
    }
}

/// Analytic coincidence probability for one herald at one analyzer angle,
/// with the flat-background admixture applied. The flat level is the
/// curve's mean over a full period, half the herald probability.
fn curve_point(out: &PipelineOutput, herald: DetectorId, eps: f64, theta: f64) -> f64 {
    let ideal = analyzer_point(&out.branches, Path::C, herald, theta);
    let flat = herald_probability(&out.branches, herald) / 2.0;
    (1.0 - eps) * ideal + eps * flat
}

fn summarize(
    out: &PipelineOutput,
    cfg: &ExperimentConfig,
    herald: DetectorId,
    probs: &[f64],
) -> Result<CurveSummary> {
    let fit = fit_malus(&cfg.thetas, probs)?;
    let vis = visibility(&fit)?;
    let phi = cfg.qubit_angle_deg();
    let eps = cfg.imperfection_eps;
    let fid = cardinal_fidelity(
        curve_point(out, herald, eps, phi),
        curve_point(out, herald, eps, phi + 90.0),
    )?;
    Ok(CurveSummary {
        fit,
        visibility: vis,
        fidelity_45: fid,
        fidelity_fit: (1.0 + vis) / 2.0,
        counts_fit: None,
        counts_visibility: None,
    })
}

/// Probabilities and derived figures of merit; no sampling.
pub fn run_analytic(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let out = measurement_branches(cfg)?;
    let eps = cfg.imperfection_eps;
    let points: Vec<(f64, f64)> = cfg
        .thetas
        .par_iter()
        .map(|&t| {
            (
                curve_point(&out, DetectorId::D2, eps, t),
                curve_point(&out, DetectorId::D3, eps, t),
            )
        })
        .collect();
    let rows: Vec<SweepRow> = cfg
        .thetas
        .iter()
        .zip(&points)
        .map(|(&theta_deg, &(p_d1_d2, p_d1_d3))| SweepRow {
            theta_deg,
            p_d1_d2,
            p_d1_d3,
            counts_d1_d2: None,
            counts_d1_d3: None,
        })
        .collect();
    let p2: Vec<f64> = points.iter().map(|p| p.0).collect();
    let p3: Vec<f64> = points.iter().map(|p| p.1).collect();
    let phi = cfg.qubit_angle_deg();
    let delivered = |t: f64| {
        curve_point(&out, DetectorId::D2, eps, t) + curve_point(&out, DetectorId::D3, eps, t)
    };
    Ok(SweepResult {
        rows,
        d1_d2: summarize(&out, cfg, DetectorId::D2, &p2)?,
        d1_d3: summarize(&out, cfg, DetectorId::D3, &p3)?,
        fidelity_45: cardinal_fidelity(delivered(phi), delivered(phi + 90.0))?,
        success_probability: out.success_probability,
        discarded_probability: out.discarded_probability(),
        herald_d2: herald_probability(&out.branches, DetectorId::D2),
        herald_d3: herald_probability(&out.branches, DetectorId::D3),
        seed: cfg.seed,
    })
}

/// Random stream offsets of the two coincidence channels.
const STREAM_D1_D2: u64 = 0;
const STREAM_D1_D3: u64 = 1 << 32;

/// Analytic run plus Poisson counts for every analyzer setting.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let mut result = run_analytic(cfg)?;
    let c2 = sample_counts_on_stream(
        &result.p_d1_d2(),
        cfg.pair_rate,
        cfg.duration,
        cfg.seed,
        STREAM_D1_D2,
    )?;
    let c3 = sample_counts_on_stream(
        &result.p_d1_d3(),
        cfg.pair_rate,
        cfg.duration,
        cfg.seed,
        STREAM_D1_D3,
    )?;
    for (row, (a, b)) in result.rows.iter_mut().zip(c2.iter().zip(&c3)) {
        row.counts_d1_d2 = Some(*a);
        row.counts_d1_d3 = Some(*b);
    }
    for (summary, counts) in [(&mut result.d1_d2, &c2), (&mut result.d1_d3, &c3)] {
        let ys: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        summary.counts_fit = fit_malus(&cfg.thetas, &ys).ok();
        summary.counts_visibility = summary.counts_fit.and_then(|f| visibility(&f).ok());
    }
    Ok(result)
}

/// Runs several configurations in parallel, results in input order.
pub fn run_many(cfgs: &[ExperimentConfig]) -> Vec<Result<SweepResult>> {
    cfgs.par_iter().map(run_sweep).collect()
}
