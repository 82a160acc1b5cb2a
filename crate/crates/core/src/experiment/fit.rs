//! Fixed-period Malus fits, visibility and cardinal-point fidelity.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::LogicalBit;

/// `y(θ) = offset + amplitude · cos 2(θ − phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MalusFit {
    pub offset: f64,
    pub amplitude: f64,
    pub phase_deg: f64,
}

impl MalusFit {
    pub fn eval(&self, theta_deg: f64) -> f64 {
        self.offset + self.amplitude * (2.0 * (theta_deg - self.phase_deg)).to_radians().cos()
    }
}

/// Relative singular-value floor below which the design is rank deficient.
const RANK_TOL: f64 = 1e-10;

/// Linear least squares of `values` on `{1, cos 2θ, sin 2θ}`.
pub fn fit_malus(thetas: &[f64], values: &[f64]) -> Result<MalusFit> {
    if thetas.len() != values.len() {
        return Err(Error::Fit(format!(
            "{} angles but {} values",
            thetas.len(),
            values.len()
        )));
    }
    if thetas.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 points, got {}",
            thetas.len()
        )));
    }
    if thetas.iter().chain(values).any(|x| !x.is_finite()) {
        return Err(Error::Fit("non-finite input".into()));
    }
    let design = DMatrix::from_fn(thetas.len(), 3, |i, j| {
        let two = 2.0 * thetas[i].rem_euclid(180.0).to_radians();
        match j {
            0 => 1.0,
            1 => two.cos(),
            _ => two.sin(),
        }
    });
    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > RANK_TOL * smax) {
        return Err(Error::Fit(
            "angles do not determine a sinusoid (rank-deficient design)".into(),
        ));
    }
    let coef = svd
        .solve(&DVector::from_column_slice(values), 0.0)
        .map_err(|e| Error::Fit(e.to_string()))?;
    let (offset, c, s) = (coef[0], coef[1], coef[2]);
    Ok(MalusFit {
        offset,
        amplitude: c.hypot(s),
        phase_deg: s.atan2(c).to_degrees() / 2.0,
    })
}

/// Fringe visibility `amplitude / offset`.
pub fn visibility(fit: &MalusFit) -> Result<f64> {
    if !(fit.offset > 0.0) {
        return Err(Error::Undefined(format!(
            "visibility needs a positive offset, got {}",
            fit.offset
        )));
    }
    Ok(fit.amplitude / fit.offset)
}

/// Share of counts at the expected analyzer setting among that setting and
/// its orthogonal one.
pub fn cardinal_fidelity(p_correct: f64, p_orthogonal: f64) -> Result<f64> {
    let total = p_correct + p_orthogonal;
    if !(total > 0.0) {
        return Err(Error::Undefined(
            "fidelity needs a nonzero count at one of the two settings".into(),
        ));
    }
    Ok(p_correct / total)
}

/// Cardinal-point fidelity from the analyzer at +45° and −45° for an
/// expected computational-basis state.
pub fn fidelity_45(p_plus45: f64, p_minus45: f64, expected: LogicalBit) -> Result<f64> {
    match expected {
        LogicalBit::Zero => cardinal_fidelity(p_plus45, p_minus45),
        LogicalBit::One => cardinal_fidelity(p_minus45, p_plus45),
    }
}
