//! Hong-Ou-Mandel delay scan used to align the encoder.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elements::bs5050;
use crate::error::Result;
use crate::state::{
    apply_element, joint_probability, product_state, DistinguishabilitySpec, Path, Polarization,
    PolarizationProjector, SinglePhotonSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomPoint {
    pub delay_s: f64,
    pub overlap_v: f64,
    pub p_coincidence: f64,
}

/// Coincidence probability behind a 50/50 beam splitter for two H photons
/// whose wavepackets overlap by `v`.
pub fn hom_coincidence(v: f64) -> Result<f64> {
    let spec = DistinguishabilitySpec::from_overlap(v)?;
    let (in1, in2, out1, out2) = (Path::port(0), Path::port(1), Path::port(2), Path::port(3));
    let h = [Complex64::new(1.0, 0.0), Complex64::default()];
    let first = SinglePhotonSpec::prompt(in1, h)?;
    let second = SinglePhotonSpec::new(in2, h, spec.wavepacket().to_vec())?;
    let input = product_state(&first, &second)?.with_paths([out1, out2]);
    let out = apply_element(&input, &bs5050(in1, in2, out1, out2)?)?;
    let mut p = 0.0;
    for pa in Polarization::ALL {
        for pb in Polarization::ALL {
            p += joint_probability(
                &out,
                &PolarizationProjector::pol(out1, pa),
                &PolarizationProjector::pol(out2, pb),
            )?;
        }
    }
    Ok(p)
}

/// Scans the relative delay of two Gaussian wavepackets with coherence time
/// `sigma_s`.
pub fn hom_scan(delays_s: &[f64], sigma_s: f64) -> Result<Vec<HomPoint>> {
    delays_s
        .iter()
        .map(|&tau| {
            let spec = DistinguishabilitySpec::from_delay(tau, sigma_s)?;
            Ok(HomPoint {
                delay_s: tau,
                overlap_v: spec.overlap_v,
                p_coincidence: hom_coincidence(spec.overlap_v)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dip_and_shoulders() {
        let sigma = 1e-13;
        let pts = hom_scan(&[0.0, 10.0 * sigma], sigma).unwrap();
        assert!(pts[0].p_coincidence < 1e-12);
        assert!((pts[1].p_coincidence - 0.5).abs() < 1e-6);
    }

    #[test]
    fn half_overlap_gives_three_eighths() {
        let sigma = 2.0e-13;
        let tau = sigma * (2.0 * std::f64::consts::LN_2).sqrt();
        let pt = hom_scan(&[tau], sigma).unwrap()[0];
        assert!((pt.overlap_v - 0.5).abs() < 1e-12);
        assert!((pt.p_coincidence - 0.375).abs() < 1e-12);
    }

    #[test]
    fn follows_one_minus_v_squared_over_two() {
        for v in [0.0, 0.1, 0.33, 0.922, 1.0] {
            let p = hom_coincidence(v).unwrap();
            assert!((p - (1.0 - v * v) / 2.0).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn nonpositive_sigma_is_rejected() {
        assert!(hom_scan(&[0.0], 0.0).is_err());
    }
}
