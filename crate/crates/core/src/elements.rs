//! Passive optical components as unitaries over (path, polarization) channels.
//!
//! Two-port devices (beam splitters) act on eight channels: the four input
//! channels are sent to the four output channels by a 4×4 transfer matrix
//! `T`, and the outputs are sent back by `T†`. The full matrix is therefore
//! `[[0, T†], [T, 0]]`, which is unitary whenever `T` is.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{DistinguishabilitySpec, Mode, Path, Polarization, TwoPhotonState};

/// Tolerance on `U†U = I`.
pub const UNITARY_TOL: f64 = 1e-12;

pub type Channel = (Path, Polarization);

#[derive(Debug, Clone, PartialEq)]
pub struct LinearElement {
    name: String,
    channels: Vec<Channel>,
    matrix: DMatrix<Complex64>,
}

impl LinearElement {
    /// `matrix[(i, j)]` is the amplitude for a photon in `channels[j]` to
    /// leave in `channels[i]`.
    pub fn new(
        name: impl Into<String>,
        channels: Vec<Channel>,
        matrix: DMatrix<Complex64>,
    ) -> Result<Self> {
        let name = name.into();
        let n = channels.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Validation(format!(
                "{name}: {}x{} matrix for {n} channels",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let distinct: BTreeSet<_> = channels.iter().collect();
        if distinct.len() != n {
            return Err(Error::Configuration(format!("{name}: repeated channel")));
        }
        let defect = (matrix.adjoint() * &matrix - DMatrix::identity(n, n))
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if !(defect <= UNITARY_TOL) {
            return Err(Error::Validation(format!(
                "{name}: matrix is not unitary (max deviation {defect:e})"
            )));
        }
        Ok(LinearElement {
            name,
            channels,
            matrix,
        })
    }

    pub fn identity(name: impl Into<String>, channels: Vec<Channel>) -> Self {
        let n = channels.len();
        LinearElement {
            name: name.into(),
            channels,
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn paths(&self) -> impl Iterator<Item = Path> + '_ {
        let set: BTreeSet<Path> = self.channels.iter().map(|(p, _)| *p).collect();
        set.into_iter()
    }

    fn channel_index(&self, path: Path, pol: Polarization) -> Option<usize> {
        self.channels.iter().position(|c| *c == (path, pol))
    }

    /// Where a photon in `mode` ends up. Modes outside the element's channels
    /// pass through unchanged; the temporal index is never touched.
    pub fn transfer(&self, mode: Mode) -> Vec<(Mode, Complex64)> {
        match self.channel_index(mode.path, mode.pol) {
            None => vec![(mode, Complex64::new(1.0, 0.0))],
            Some(j) => self
                .channels
                .iter()
                .enumerate()
                .filter_map(|(i, &(path, pol))| {
                    let u = self.matrix[(i, j)];
                    (u != Complex64::default()).then_some((Mode::new(path, pol, mode.temporal), u))
                })
                .collect(),
        }
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn two_port(
    name: &str,
    ports: [Path; 4],
    transfer_h: [[f64; 2]; 2],
    transfer_v: [[f64; 2]; 2],
) -> Result<LinearElement> {
    let distinct: BTreeSet<_> = ports.iter().collect();
    if distinct.len() != 4 {
        return Err(Error::Configuration(format!(
            "{name}: ports {ports:?} must be four distinct paths"
        )));
    }
    let [in1, in2, out1, out2] = ports;
    let channels: Vec<Channel> = [in1, in2, out1, out2]
        .into_iter()
        .flat_map(|p| Polarization::ALL.map(|pol| (p, pol)))
        .collect();
    let idx = |p: Path, pol: Polarization| {
        channels
            .iter()
            .position(|c| *c == (p, pol))
            .expect("channel listed above")
    };
    let mut m = DMatrix::from_element(8, 8, Complex64::default());
    for (pol, t) in [(Polarization::H, transfer_h), (Polarization::V, transfer_v)] {
        for (o, out) in [out1, out2].into_iter().enumerate() {
            for (i, inp) in [in1, in2].into_iter().enumerate() {
                let u = real(t[o][i]);
                m[(idx(out, pol), idx(inp, pol))] = u;
                m[(idx(inp, pol), idx(out, pol))] = u.conj();
            }
        }
    }
    LinearElement::new(name, channels, m)
}

/// Half-wave plate with its fast axis at `angle_deg`:
/// `[[cos 2w, sin 2w], [sin 2w, −cos 2w]]` on (H, V).
pub fn hwp(angle_deg: f64, path: Path) -> LinearElement {
    let (s, c) = (2.0 * angle_deg.to_radians()).sin_cos();
    LinearElement {
        name: format!("HWP({angle_deg}°)"),
        channels: vec![(path, Polarization::H), (path, Polarization::V)],
        matrix: DMatrix::from_row_slice(2, 2, &[real(c), real(s), real(s), real(-c)]),
    }
}

/// Polarizing beam splitter: H is transmitted (in1→out1, in2→out2), V is
/// reflected (in1→out2, in2→out1). Every transfer coefficient is +1.
pub fn pbs(in1: Path, in2: Path, out1: Path, out2: Path) -> Result<LinearElement> {
    two_port(
        "PBS",
        [in1, in2, out1, out2],
        [[1.0, 0.0], [0.0, 1.0]],
        [[0.0, 1.0], [1.0, 0.0]],
    )
}

/// Polarization-independent 50/50 beam splitter, `[[1, 1], [1, −1]]/√2`.
pub fn bs5050(in1: Path, in2: Path, out1: Path, out2: Path) -> Result<LinearElement> {
    let t = [
        [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
        [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
    ];
    two_port("BS", [in1, in2, out1, out2], t, t)
}

/// Pockels cell with its fast axis horizontal. When fired it retards V by a
/// half wave, `diag(1, −1)`, which is a bit flip in the ±45° basis.
pub fn pockels(path: Path, active: bool) -> LinearElement {
    let channels = vec![(path, Polarization::H), (path, Polarization::V)];
    if !active {
        return LinearElement::identity("PC(off)", channels);
    }
    LinearElement {
        name: "PC(on)".into(),
        channels,
        matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![real(1.0), real(-1.0)])),
    }
}

/// Delays the photon on `path` relative to the reference wavepacket.
///
/// Acts as the temporal rotation `e₀ → v·e₀ + √(1−v²)·e₁`,
/// `e₁ → −√(1−v²)·e₀ + v·e₁` on every polarization of `path`. Must be
/// applied while the path holds one photon and before any interference.
pub fn delay(
    state: &TwoPhotonState,
    path: Path,
    spec: &DistinguishabilitySpec,
) -> Result<TwoPhotonState> {
    let v = spec.overlap_v;
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Validation(format!("overlap {v} outside [0, 1]")));
    }
    if !state.paths().contains(&path) {
        return Err(Error::Configuration(format!(
            "delay on undeclared path {path}"
        )));
    }
    let [c0, c1] = spec.wavepacket();
    Ok(state.map_modes(|m| {
        if m.path != path {
            return vec![(m, real(1.0))];
        }
        let (to0, to1) = if m.temporal == 0 { (c0, c1) } else { (-c1, c0) };
        [(0u8, to0), (1u8, to1)]
            .into_iter()
            .filter(|(_, u)| *u != Complex64::default())
            .map(|(t, u)| (Mode::new(m.path, m.pol, t), u))
            .collect()
    }))
}

/// The two fiber patchings between the encoder outputs (A, B) and the
/// downstream fibers: C leads to the corrected-output analyzer and D to the
/// Z-measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum WiringConfig {
    /// A:C and B:D.
    #[default]
    #[serde(rename = "ac-bd")]
    AcBd,
    /// A:D and B:C.
    #[serde(rename = "ad-bc")]
    AdBc,
}

impl WiringConfig {
    /// Path exchange performed by the patch cords. It is an involution.
    pub fn swap(self, p: Path) -> Path {
        let pairs = match self {
            WiringConfig::AcBd => [(Path::A, Path::C), (Path::B, Path::D)],
            WiringConfig::AdBc => [(Path::A, Path::D), (Path::B, Path::C)],
        };
        for (x, y) in pairs {
            if p == x {
                return y;
            }
            if p == y {
                return x;
            }
        }
        p
    }
}

/// Patches the encoder outputs onto C and D. Amplitudes are unchanged.
pub fn rewire(state: &TwoPhotonState, w: WiringConfig) -> TwoPhotonState {
    state.relabel_paths(|p| w.swap(p))
}
