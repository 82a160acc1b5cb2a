//! Detectors, coincidence post-selection and the feed-forward controller.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elements::pockels;
use crate::error::Result;
use crate::state::{
    condition_on, LogicalBit, Path, PolarizationProjector, SinglePhotonState, TwoPhotonState,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DetectorId {
    /// Behind the output analyzer.
    D1,
    /// Z-measurement, heralds |0⟩.
    D2,
    /// Z-measurement, heralds |1⟩.
    D3,
}

/// An ideal bucket detector preceded by a polarization projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSpec {
    pub id: DetectorId,
    pub projector: PolarizationProjector,
}

impl DetectorSpec {
    /// The pair of Z-measurement detectors on `path`, in the order (D2, D3).
    pub fn z_pair(path: Path) -> [DetectorSpec; 2] {
        [
            DetectorSpec {
                id: DetectorId::D2,
                projector: PolarizationProjector::logical(path, LogicalBit::Zero),
            },
            DetectorSpec {
                id: DetectorId::D3,
                projector: PolarizationProjector::logical(path, LogicalBit::One),
            },
        ]
    }

    pub fn analyzer(path: Path, theta_deg: f64) -> DetectorSpec {
        DetectorSpec {
            id: DetectorId::D1,
            projector: PolarizationProjector::linear(path, theta_deg),
        }
    }
}

/// Fires the Pockels cell on `target` when `trigger` clicks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeedForwardRule {
    pub trigger: DetectorId,
    pub target: Path,
}

impl FeedForwardRule {
    /// The rule used by the apparatus: D3 fires the cell on the output path.
    pub fn bit_flip_on(target: Path) -> Self {
        FeedForwardRule {
            trigger: DetectorId::D3,
            target,
        }
    }
}

/// One outcome of a Z-measurement, split by the temporal mode in which the
/// measured photon was found.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBranch {
    pub outcome: DetectorId,
    pub temporal: u8,
    pub probability: f64,
    pub conditional: SinglePhotonState,
}

/// Measures the photon on `path` in the computational basis.
pub fn z_measure(state: &TwoPhotonState, path: Path) -> Result<Vec<MeasurementBranch>> {
    let mut branches = Vec::new();
    for det in DetectorSpec::z_pair(path) {
        let ensemble = condition_on(state, &det.projector)?;
        branches.extend(ensemble.members.into_iter().map(|m| MeasurementBranch {
            outcome: det.id,
            temporal: m.temporal,
            probability: m.state.norm_sqr(),
            conditional: m.state,
        }));
    }
    Ok(branches)
}

/// Applies the rule's Pockels cell to every branch heralded by the trigger.
/// With the cell disconnected the branches are returned unchanged.
pub fn apply_feedforward(
    branches: &[MeasurementBranch],
    rule: &FeedForwardRule,
    pc_enabled: bool,
) -> Vec<MeasurementBranch> {
    let cell = pockels(rule.target, pc_enabled);
    branches
        .iter()
        .map(|b| {
            if pc_enabled && b.outcome == rule.trigger {
                MeasurementBranch {
                    conditional: b.conditional.apply(&cell),
                    ..b.clone()
                }
            } else {
                b.clone()
            }
        })
        .collect()
}

/// Keeps the terms with exactly one photon in each of `outputs`.
///
/// Returns the subnormalized state and its squared norm.
pub fn coincidence_postselect(state: &TwoPhotonState, outputs: [Path; 2]) -> (TwoPhotonState, f64) {
    let kept = state
        .restrict_occupancy(outputs[0], 1)
        .restrict_occupancy(outputs[1], 1);
    let p = kept.norm_sqr();
    (kept, p)
}

/// Coincidence probabilities (D1:D2) and (D1:D3) as the analyzer turns.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzerCurve {
    pub thetas: Vec<f64>,
    pub d1_d2: Vec<f64>,
    pub d1_d3: Vec<f64>,
}

/// Probability of a D1 click at `theta_deg` jointly with `herald`.
pub fn analyzer_point(
    branches: &[MeasurementBranch],
    analyzer_path: Path,
    herald: DetectorId,
    theta_deg: f64,
) -> f64 {
    let d1 = DetectorSpec::analyzer(analyzer_path, theta_deg);
    branches
        .iter()
        .filter(|b| b.outcome == herald)
        .map(|b| b.conditional.projected_probability(&d1.projector))
        .sum()
}

/// Evaluates both coincidence curves over `thetas`. Points are computed in
/// parallel; each one depends only on its own angle.
pub fn analyzer_curve(
    branches: &[MeasurementBranch],
    analyzer_path: Path,
    thetas: &[f64],
) -> AnalyzerCurve {
    let points: Vec<(f64, f64)> = thetas
        .par_iter()
        .map(|&t| {
            (
                analyzer_point(branches, analyzer_path, DetectorId::D2, t),
                analyzer_point(branches, analyzer_path, DetectorId::D3, t),
            )
        })
        .collect();
    let (d1_d2, d1_d3) = points.into_iter().unzip();
    AnalyzerCurve {
        thetas: thetas.to_vec(),
        d1_d2,
        d1_d3,
    }
}

/// Total probability carried by branches heralded by `herald`.
pub fn herald_probability(branches: &[MeasurementBranch], herald: DetectorId) -> f64 {
    branches
        .iter()
        .filter(|b| b.outcome == herald)
        .map(|b| b.probability)
        .sum()
}
