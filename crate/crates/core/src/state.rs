//! Second-quantized one- and two-photon states over labeled optical modes.
//!
//! A mode is a (path, polarization, temporal) triple. Two-photon states are
//! stored as amplitudes over canonical (sorted) pairs of modes in the
//! normalized Fock basis: for distinct modes `p < q` the basis vector is
//! `a†_p a†_q |0⟩`, and for a doubly occupied mode it is `(a†_p)² |0⟩ / √2`.
//! With that convention the squared norm of a state is the plain sum of
//! `|amplitude|²`.
//!
//! Partial distinguishability lives in the temporal index. Every photon's
//! wavepacket is expressed in a two-element orthonormal temporal basis, and
//! detectors sum over temporal outcomes incoherently.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elements::LinearElement;
use crate::error::{Error, Result};

/// Amplitudes with magnitude below this are treated as zero and dropped.
pub const ZERO_TOL: f64 = 1e-12;

/// Tolerance for unit-norm checks on inputs.
pub const NORM_TOL: f64 = 1e-12;

/// Size of the orthonormal temporal basis.
pub const TEMPORAL_DIM: usize = 2;

/// Jones vector over (H, V).
pub type Jones = [Complex64; 2];

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::H, Polarization::V];

    pub fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }
}

/// Value of a qubit in the computational basis.
///
/// `|0⟩ = (|H⟩ + |V⟩)/√2` is light polarized at +45° and
/// `|1⟩ = (|H⟩ − |V⟩)/√2` is light polarized at −45°.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogicalBit {
    Zero,
    One,
}

impl LogicalBit {
    pub fn jones(self) -> Jones {
        match self {
            LogicalBit::Zero => jones_from_logical(ONE, Complex64::new(0.0, 0.0)),
            LogicalBit::One => jones_from_logical(Complex64::new(0.0, 0.0), ONE),
        }
    }

    /// Linear polarization angle of the basis state, in degrees.
    pub fn angle_deg(self) -> f64 {
        match self {
            LogicalBit::Zero => 45.0,
            LogicalBit::One => -45.0,
        }
    }

    pub fn flipped(self) -> LogicalBit {
        match self {
            LogicalBit::Zero => LogicalBit::One,
            LogicalBit::One => LogicalBit::Zero,
        }
    }
}

/// Converts computational-basis amplitudes `α|0⟩ + β|1⟩` to a Jones vector.
pub fn jones_from_logical(alpha: Complex64, beta: Complex64) -> Jones {
    [
        (alpha + beta) * FRAC_1_SQRT_2,
        (alpha - beta) * FRAC_1_SQRT_2,
    ]
}

/// Inverse of [`jones_from_logical`].
pub fn logical_from_jones(jones: Jones) -> (Complex64, Complex64) {
    (
        (jones[0] + jones[1]) * FRAC_1_SQRT_2,
        (jones[0] - jones[1]) * FRAC_1_SQRT_2,
    )
}

/// Jones vector of linear polarization at `deg` from horizontal.
pub fn linear_jones(deg: f64) -> Jones {
    let rad = deg.rem_euclid(180.0).to_radians();
    [
        Complex64::new(rad.cos(), 0.0),
        Complex64::new(rad.sin(), 0.0),
    ]
}

fn jones_norm_sqr(j: &Jones) -> f64 {
    j[0].norm_sqr() + j[1].norm_sqr()
}

/// A spatial port. The well-known ports of the apparatus have named
/// constants; generic ports are available through [`Path::port`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(u16);

impl Path {
    pub const QUBIT_IN: Path = Path(0);
    pub const ANCILLA_IN: Path = Path(1);
    pub const A: Path = Path(2);
    pub const B: Path = Path(3);
    pub const C: Path = Path(4);
    pub const D: Path = Path(5);

    const GENERIC_BASE: u16 = 16;

    /// A generic, unnamed port.
    pub const fn port(n: u16) -> Path {
        Path(Self::GENERIC_BASE + n)
    }

    pub fn name(&self) -> Cow<'static, str> {
        match self.0 {
            0 => "qubit-in".into(),
            1 => "ancilla-in".into(),
            2 => "A".into(),
            3 => "B".into(),
            4 => "C".into(),
            5 => "D".into(),
            n if n >= Self::GENERIC_BASE => format!("port{}", n - Self::GENERIC_BASE).into(),
            n => format!("path{n}").into(),
        }
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// One optical mode. Ordering is lexicographic over (path, pol, temporal).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub path: Path,
    pub pol: Polarization,
    pub temporal: u8,
}

impl Mode {
    pub const fn new(path: Path, pol: Polarization, temporal: u8) -> Self {
        Mode {
            path,
            pol,
            temporal,
        }
    }
}

impl fmt::Debug for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}{}", self.path, self.pol, self.temporal)
    }
}

fn canonical(a: Mode, b: Mode) -> (Mode, Mode) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Preparation of a single photon: its port, polarization and wavepacket.
#[derive(Debug, Clone, PartialEq)]
pub struct SinglePhotonSpec {
    path: Path,
    jones: Jones,
    wavepacket: Vec<Complex64>,
}

impl SinglePhotonSpec {
    pub fn new(path: Path, jones: Jones, wavepacket: Vec<Complex64>) -> Result<Self> {
        let jn = jones_norm_sqr(&jones).sqrt();
        if !jn.is_finite() || (jn - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!(
                "jones vector on {path} has norm {jn}, expected 1"
            )));
        }
        if wavepacket.is_empty() || wavepacket.len() > TEMPORAL_DIM {
            return Err(Error::Validation(format!(
                "wavepacket on {path} has {} components, expected 1..={TEMPORAL_DIM}",
                wavepacket.len()
            )));
        }
        let wn = wavepacket.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !wn.is_finite() || (wn - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!(
                "wavepacket on {path} has norm {wn}, expected 1"
            )));
        }
        Ok(SinglePhotonSpec {
            path,
            jones,
            wavepacket,
        })
    }

    /// A photon in the reference wavepacket (temporal index 0).
    pub fn prompt(path: Path, jones: Jones) -> Result<Self> {
        Self::new(path, jones, vec![ONE])
    }

    pub fn path(&self) -> Path {
        self.path
    }

    pub fn jones(&self) -> Jones {
        self.jones
    }

    pub fn wavepacket(&self) -> &[Complex64] {
        &self.wavepacket
    }

    fn wavepacket_component(&self, i: usize) -> Complex64 {
        self.wavepacket.get(i).copied().unwrap_or_default()
    }
}

/// Description of how distinguishable two photons are in time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistinguishabilitySpec {
    /// Wavepacket overlap `⟨ξ₁|ξ₂⟩`, real and in `[0, 1]`.
    pub overlap_v: f64,
    /// Delay and coherence time the overlap was derived from, in seconds.
    pub delay: Option<DelaySpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelaySpec {
    pub tau_s: f64,
    pub sigma_s: f64,
}

impl DistinguishabilitySpec {
    pub fn from_overlap(v: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Validation(format!("overlap {v} outside [0, 1]")));
        }
        Ok(DistinguishabilitySpec {
            overlap_v: v,
            delay: None,
        })
    }

    /// Gaussian wavepackets: `v = exp(−τ²/(2σ²))`.
    pub fn from_delay(tau_s: f64, sigma_s: f64) -> Result<Self> {
        if !(sigma_s > 0.0) || !sigma_s.is_finite() {
            return Err(Error::Validation(format!(
                "coherence time {sigma_s} must be positive"
            )));
        }
        if !tau_s.is_finite() {
            return Err(Error::Validation(format!("delay {tau_s} is not finite")));
        }
        let v = (-(tau_s * tau_s) / (2.0 * sigma_s * sigma_s)).exp();
        Ok(DistinguishabilitySpec {
            overlap_v: v,
            delay: Some(DelaySpec { tau_s, sigma_s }),
        })
    }

    /// Components of the delayed wavepacket over the temporal basis,
    /// `v·e₀ + √(1−v²)·e₁`.
    pub fn wavepacket(&self) -> [Complex64; 2] {
        let v = self.overlap_v;
        [
            Complex64::new(v, 0.0),
            Complex64::new((1.0 - v * v).max(0.0).sqrt(), 0.0),
        ]
    }
}

/// Projector onto a polarization state on one path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationProjector {
    pub path: Path,
    pub jones: Jones,
}

impl PolarizationProjector {
    pub fn new(path: Path, jones: Jones) -> Result<Self> {
        let n = jones_norm_sqr(&jones).sqrt();
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!(
                "projector on {path} has norm {n}, expected 1"
            )));
        }
        Ok(PolarizationProjector { path, jones })
    }

    /// Linear analyzer at `deg` from horizontal.
    pub fn linear(path: Path, deg: f64) -> Self {
        PolarizationProjector {
            path,
            jones: linear_jones(deg),
        }
    }

    pub fn logical(path: Path, bit: LogicalBit) -> Self {
        PolarizationProjector {
            path,
            jones: bit.jones(),
        }
    }

    pub fn pol(path: Path, pol: Polarization) -> Self {
        let mut jones = [Complex64::default(); 2];
        jones[pol.index()] = ONE;
        PolarizationProjector { path, jones }
    }

    fn bra(&self, pol: Polarization) -> Complex64 {
        self.jones[pol.index()].conj()
    }
}

/// Subnormalized pure state of one photon.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SinglePhotonState {
    amplitudes: BTreeMap<Mode, Complex64>,
}

impl SinglePhotonState {
    pub fn from_amplitudes(iter: impl IntoIterator<Item = (Mode, Complex64)>) -> Self {
        let mut amplitudes = BTreeMap::new();
        for (m, c) in iter {
            *amplitudes.entry(m).or_default() += c;
        }
        amplitudes.retain(|_, c: &mut Complex64| c.norm() >= ZERO_TOL);
        SinglePhotonState { amplitudes }
    }

    pub fn amplitude(&self, mode: Mode) -> Complex64 {
        self.amplitudes.get(&mode).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Mode, Complex64)> + '_ {
        self.amplitudes.iter().map(|(m, c)| (*m, *c))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Probability that the photon passes `proj` and is detected on its
    /// path, summed incoherently over temporal modes.
    pub fn projected_probability(&self, proj: &PolarizationProjector) -> f64 {
        let mut per_t = [Complex64::default(); TEMPORAL_DIM];
        for (m, c) in self.iter().filter(|(m, _)| m.path == proj.path) {
            per_t[m.temporal as usize] += proj.bra(m.pol) * c;
        }
        per_t.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Probability of finding the photon on `path` at all.
    pub fn path_probability(&self, path: Path) -> f64 {
        self.iter()
            .filter(|(m, _)| m.path == path)
            .map(|(_, c)| c.norm_sqr())
            .sum()
    }

    pub fn apply(&self, element: &LinearElement) -> SinglePhotonState {
        let mut out: BTreeMap<Mode, Complex64> = BTreeMap::new();
        for (m, c) in self.iter() {
            for (k, u) in element.transfer(m) {
                *out.entry(k).or_default() += u * c;
            }
        }
        out.retain(|_, c| c.norm() >= ZERO_TOL);
        SinglePhotonState { amplitudes: out }
    }
}

/// Two-photon state over canonical unordered mode pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TwoPhotonState {
    paths: BTreeSet<Path>,
    amplitudes: BTreeMap<(Mode, Mode), Complex64>,
}

impl TwoPhotonState {
    /// Builds a state from explicit amplitudes in the normalized Fock basis.
    ///
    /// Entries naming the same unordered pair are summed. Every mode must lie
    /// on a declared path and use a temporal index below [`TEMPORAL_DIM`].
    pub fn from_amplitudes(
        paths: impl IntoIterator<Item = Path>,
        amplitudes: impl IntoIterator<Item = ((Mode, Mode), Complex64)>,
    ) -> Result<Self> {
        let paths: BTreeSet<Path> = paths.into_iter().collect();
        let mut map = BTreeMap::new();
        for ((a, b), c) in amplitudes {
            for m in [a, b] {
                if !paths.contains(&m.path) {
                    return Err(Error::Configuration(format!(
                        "mode {m:?} lies on undeclared path {}",
                        m.path
                    )));
                }
                if m.temporal as usize >= TEMPORAL_DIM {
                    return Err(Error::Validation(format!(
                        "temporal index {} out of range",
                        m.temporal
                    )));
                }
            }
            *map.entry(canonical(a, b)).or_default() += c;
        }
        map.retain(|_, c: &mut Complex64| c.norm() >= ZERO_TOL);
        Ok(TwoPhotonState {
            paths,
            amplitudes: map,
        })
    }

    /// Returns the same state with additional (empty) paths declared.
    pub fn with_paths(mut self, paths: impl IntoIterator<Item = Path>) -> Self {
        self.paths.extend(paths);
        self
    }

    pub fn paths(&self) -> &BTreeSet<Path> {
        &self.paths
    }

    /// Amplitude of the pair `{a, b}`; the argument order does not matter.
    pub fn amplitude(&self, a: Mode, b: Mode) -> Complex64 {
        self.amplitudes
            .get(&canonical(a, b))
            .copied()
            .unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((Mode, Mode), Complex64)> + '_ {
        self.amplitudes.iter().map(|(k, c)| (*k, *c))
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: f64) -> TwoPhotonState {
        TwoPhotonState {
            paths: self.paths.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(k, c)| (*k, c * factor))
                .collect(),
        }
    }

    /// Rescales to unit norm. Fails on an empty state.
    pub fn normalized(&self) -> Result<TwoPhotonState> {
        let n = self.norm_sqr().sqrt();
        if n < ZERO_TOL {
            return Err(Error::Validation("cannot normalize a zero state".into()));
        }
        Ok(self.scaled(1.0 / n))
    }

    /// Keeps only the terms with exactly `photons` photons on `path`.
    pub fn restrict_occupancy(&self, path: Path, photons: usize) -> TwoPhotonState {
        TwoPhotonState {
            paths: self.paths.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .filter(|((a, b), _)| occupancy(*a, *b, path) == photons)
                .map(|(k, c)| (*k, *c))
                .collect(),
        }
    }

    /// Renames paths. `rename` must be injective on the declared paths.
    pub fn relabel_paths(&self, rename: impl Fn(Path) -> Path) -> TwoPhotonState {
        let relabel = |m: Mode| Mode::new(rename(m.path), m.pol, m.temporal);
        TwoPhotonState {
            paths: self.paths.iter().map(|p| rename(*p)).collect(),
            amplitudes: self
                .amplitudes
                .iter()
                .map(|((a, b), c)| (canonical(relabel(*a), relabel(*b)), *c))
                .collect(),
        }
    }

    /// Applies a single-mode linear map to every creation operator.
    ///
    /// `image(m)` lists the modes `m` is sent to together with their
    /// coefficients. Terms whose modes are both mapped to themselves with
    /// coefficient one are copied through untouched.
    pub(crate) fn map_modes(&self, image: impl Fn(Mode) -> Vec<(Mode, Complex64)>) -> Self {
        let is_fixed = |m: Mode, img: &[(Mode, Complex64)]| img.len() == 1 && img[0] == (m, ONE);
        let mut direct: BTreeMap<(Mode, Mode), Complex64> = BTreeMap::new();
        // coefficients of the monomials a†_k a†_l acting on vacuum
        let mut monomials: BTreeMap<(Mode, Mode), Complex64> = BTreeMap::new();
        for (&(a, b), &c) in &self.amplitudes {
            let ia = image(a);
            let ib = if a == b { ia.clone() } else { image(b) };
            if is_fixed(a, &ia) && is_fixed(b, &ib) {
                *direct.entry((a, b)).or_default() += c;
                continue;
            }
            let weight = if a == b { c * FRAC_1_SQRT_2 } else { c };
            for &(k, u) in &ia {
                for &(l, w) in &ib {
                    *monomials.entry(canonical(k, l)).or_default() += weight * u * w;
                }
            }
        }
        for ((k, l), d) in monomials {
            let amp = if k == l { d * SQRT_2 } else { d };
            *direct.entry((k, l)).or_default() += amp;
        }
        direct.retain(|_, c| c.norm() >= ZERO_TOL);
        TwoPhotonState {
            paths: self.paths.clone(),
            amplitudes: direct,
        }
    }
}

fn occupancy(a: Mode, b: Mode, path: Path) -> usize {
    usize::from(a.path == path) + usize::from(b.path == path)
}

/// Normalized product of two single photons.
///
/// The first photon's wavepacket defines temporal basis vector `e₀`; the
/// second is expanded by Gram–Schmidt as `⟨e₀|ξ⟩·e₀ + ‖ξ − ⟨e₀|ξ⟩e₀‖·e₁`.
/// Photons on the same path are allowed (double occupation).
pub fn product_state(q: &SinglePhotonSpec, a: &SinglePhotonSpec) -> Result<TwoPhotonState> {
    let overlap: Complex64 = (0..TEMPORAL_DIM)
        .map(|i| q.wavepacket_component(i).conj() * a.wavepacket_component(i))
        .sum();
    let residual_sqr: f64 = (0..TEMPORAL_DIM)
        .map(|i| (a.wavepacket_component(i) - overlap * q.wavepacket_component(i)).norm_sqr())
        .sum();
    let a_temporal = [overlap, Complex64::new(residual_sqr.sqrt(), 0.0)];

    let mut monomials: BTreeMap<(Mode, Mode), Complex64> = BTreeMap::new();
    for pq in Polarization::ALL {
        for pa in Polarization::ALL {
            for (t, wt) in a_temporal.iter().enumerate() {
                let coeff = q.jones[pq.index()] * a.jones[pa.index()] * wt;
                if coeff == Complex64::default() {
                    continue;
                }
                let key = canonical(Mode::new(q.path, pq, 0), Mode::new(a.path, pa, t as u8));
                *monomials.entry(key).or_default() += coeff;
            }
        }
    }
    let state = TwoPhotonState {
        paths: [q.path, a.path].into_iter().collect(),
        amplitudes: monomials
            .into_iter()
            .map(|((k, l), d)| ((k, l), if k == l { d * SQRT_2 } else { d }))
            .filter(|(_, c)| c.norm() >= ZERO_TOL)
            .collect(),
    };
    if q.path == a.path {
        // bunching changes the norm of a†a†|0⟩
        state.normalized()
    } else {
        Ok(state)
    }
}

/// Applies a passive linear element to a two-photon state.
pub fn apply_element(s: &TwoPhotonState, e: &LinearElement) -> Result<TwoPhotonState> {
    if let Some(p) = e.paths().find(|p| !s.paths.contains(p)) {
        return Err(Error::Configuration(format!(
            "element {} references undeclared path {p}",
            e.name()
        )));
    }
    Ok(s.map_modes(|m| e.transfer(m)))
}

/// Probability that one photon passes `proj_a` and the other passes `proj_b`,
/// with temporal outcomes summed incoherently.
pub fn joint_probability(
    s: &TwoPhotonState,
    proj_a: &PolarizationProjector,
    proj_b: &PolarizationProjector,
) -> Result<f64> {
    if proj_a.path == proj_b.path {
        return Err(Error::Usage(format!(
            "both projectors act on path {}",
            proj_a.path
        )));
    }
    let mut amp = [[Complex64::default(); TEMPORAL_DIM]; TEMPORAL_DIM];
    for ((x, y), c) in s.iter() {
        let (ma, mb) = if x.path == proj_a.path && y.path == proj_b.path {
            (x, y)
        } else if y.path == proj_a.path && x.path == proj_b.path {
            (y, x)
        } else {
            continue;
        };
        amp[ma.temporal as usize][mb.temporal as usize] +=
            proj_a.bra(ma.pol) * proj_b.bra(mb.pol) * c;
    }
    Ok(amp.iter().flatten().map(|c| c.norm_sqr()).sum())
}

/// One member of a conditional ensemble: the unmeasured photon's
/// subnormalized state given the measured photon was found in `temporal`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMember {
    pub temporal: u8,
    pub state: SinglePhotonState,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ensemble {
    pub members: Vec<EnsembleMember>,
}

impl Ensemble {
    /// Total probability of the conditioning outcome.
    pub fn probability(&self) -> f64 {
        self.members.iter().map(|m| m.state.norm_sqr()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Projects the photon on `proj.path` and returns the conditional states of
/// the other photon, one per temporal outcome of the measured photon.
pub fn condition_on(s: &TwoPhotonState, proj: &PolarizationProjector) -> Result<Ensemble> {
    let path = proj.path;
    let mut per_t: [BTreeMap<Mode, Complex64>; TEMPORAL_DIM] = Default::default();
    for ((a, b), c) in s.iter() {
        let (measured, other) = match occupancy(a, b, path) {
            1 if a.path == path => (a, b),
            1 => (b, a),
            n => {
                return Err(Error::Structural(format!(
                    "path {path} holds {n} photons in term {a:?}{b:?}"
                )))
            }
        };
        *per_t[measured.temporal as usize].entry(other).or_default() += proj.bra(measured.pol) * c;
    }
    let members = per_t
        .into_iter()
        .enumerate()
        .filter_map(|(t, amps)| {
            let state = SinglePhotonState::from_amplitudes(amps);
            (state.norm_sqr() > ZERO_TOL * ZERO_TOL).then_some(EnsembleMember {
                temporal: t as u8,
                state,
            })
        })
        .collect();
    Ok(Ensemble { members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{bs5050, LinearElement};
    use proptest::prelude::*;

    const P1: Path = Path::port(1);
    const P2: Path = Path::port(2);

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn h() -> Jones {
        [c(1.0), c(0.0)]
    }

    #[test]
    fn logical_conversion_round_trips() {
        let (a, b) = (Complex64::new(0.6, 0.1), Complex64::new(-0.2, 0.7));
        let (a2, b2) = logical_from_jones(jones_from_logical(a, b));
        assert!((a - a2).norm() < 1e-15 && (b - b2).norm() < 1e-15);
        let zero = LogicalBit::Zero.jones();
        assert!((zero[0] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((zero[1] - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        let one = LogicalBit::One.jones();
        assert!((one[1] + c(FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn product_of_two_plus45_photons() {
        let zero = LogicalBit::Zero.jones();
        let q = SinglePhotonSpec::prompt(P1, zero).unwrap();
        let a = SinglePhotonSpec::prompt(P2, zero).unwrap();
        let s = product_state(&q, &a).unwrap();
        assert_eq!(s.len(), 4);
        for pq in Polarization::ALL {
            for pa in Polarization::ALL {
                let amp = s.amplitude(Mode::new(P1, pq, 0), Mode::new(P2, pa, 0));
                assert!((amp - c(0.5)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn orthogonal_wavepackets_never_share_temporal_index() {
        let q = SinglePhotonSpec::prompt(P1, LogicalBit::Zero.jones()).unwrap();
        let a = SinglePhotonSpec::new(P2, LogicalBit::Zero.jones(), vec![c(0.0), c(1.0)]).unwrap();
        let s = product_state(&q, &a).unwrap();
        assert_eq!(s.len(), 4);
        for ((x, y), _) in s.iter() {
            assert_eq!((x.temporal, y.temporal), (0, 1));
        }
    }

    #[test]
    fn partial_overlap_splits_by_gram_schmidt() {
        let v = 0.922;
        let q = SinglePhotonSpec::prompt(P1, h()).unwrap();
        let wp = vec![c(v), c((1.0f64 - v * v).sqrt())];
        let a = SinglePhotonSpec::new(P2, h(), wp.clone()).unwrap();
        let s = product_state(&q, &a).unwrap();
        // direct inner products with the reference wavepacket
        let same: Complex64 = wp[0] * c(1.0);
        let rest = (wp.iter().map(|x| x.norm_sqr()).sum::<f64>() - same.norm_sqr()).sqrt();
        let hh0 = s.amplitude(
            Mode::new(P1, Polarization::H, 0),
            Mode::new(P2, Polarization::H, 0),
        );
        let hh1 = s.amplitude(
            Mode::new(P1, Polarization::H, 0),
            Mode::new(P2, Polarization::H, 1),
        );
        assert!((hh0.re - 0.922).abs() < 1e-12);
        assert!((hh1.re - 0.387_190_392).abs() < 1e-6);
        assert!((hh0 - same).norm() < 1e-12 && (hh1.re - rest).abs() < 1e-12);
    }

    #[test]
    fn bunched_product_is_normalized() {
        let q = SinglePhotonSpec::prompt(P1, h()).unwrap();
        let s = product_state(&q, &q).unwrap();
        let m = Mode::new(P1, Polarization::H, 0);
        assert!((s.amplitude(m, m) - c(1.0)).norm() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let zero = [Complex64::default(); 2];
        assert!(matches!(
            SinglePhotonSpec::prompt(P1, zero),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            SinglePhotonSpec::new(P1, h(), vec![c(0.0)]),
            Err(Error::Validation(_))
        ));
        assert!(SinglePhotonSpec::prompt(P1, [c(2.0), c(0.0)]).is_err());
        assert!(SinglePhotonSpec::new(P1, h(), vec![c(0.6), c(0.0), c(0.8)]).is_err());
    }

    #[test]
    fn overlap_from_delay_is_gaussian() {
        let d = DistinguishabilitySpec::from_delay(0.0, 1e-13).unwrap();
        assert_eq!(d.overlap_v, 1.0);
        let d = DistinguishabilitySpec::from_delay(2e-13, 1e-13).unwrap();
        assert!((d.overlap_v - (-2.0f64).exp()).abs() < 1e-15);
        assert!(DistinguishabilitySpec::from_delay(1.0, 0.0).is_err());
        assert!(DistinguishabilitySpec::from_overlap(1.2).is_err());
        assert!(DistinguishabilitySpec::from_overlap(-0.1).is_err());
    }

    fn hom_input(second_temporal: u8) -> TwoPhotonState {
        let mut wp = vec![c(0.0), c(0.0)];
        wp[second_temporal as usize] = c(1.0);
        let q = SinglePhotonSpec::prompt(P1, h()).unwrap();
        let a = SinglePhotonSpec::new(P2, h(), wp).unwrap();
        product_state(&q, &a)
            .unwrap()
            .with_paths([Path::port(3), Path::port(4)])
    }

    #[test]
    fn hom_dip_for_identical_photons() {
        let bs = bs5050(P1, P2, Path::port(3), Path::port(4)).unwrap();
        let out = apply_element(&hom_input(0), &bs).unwrap();
        let ha = PolarizationProjector::pol(Path::port(3), Polarization::H);
        let hb = PolarizationProjector::pol(Path::port(4), Polarization::H);
        assert!(joint_probability(&out, &ha, &hb).unwrap() < 1e-30);
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distinguishable_photons_coincide_half_the_time() {
        let bs = bs5050(P1, P2, Path::port(3), Path::port(4)).unwrap();
        let out = apply_element(&hom_input(1), &bs).unwrap();
        let ha = PolarizationProjector::pol(Path::port(3), Polarization::H);
        let hb = PolarizationProjector::pol(Path::port(4), Polarization::H);
        assert!((joint_probability(&out, &ha, &hb).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn identity_element_is_bit_exact() {
        let s = hom_input(0);
        let id = LinearElement::identity("id", vec![(P1, Polarization::H), (P1, Polarization::V)]);
        assert_eq!(apply_element(&s, &id).unwrap(), s);
        let bunched = product_state(
            &SinglePhotonSpec::prompt(P1, h()).unwrap(),
            &SinglePhotonSpec::prompt(P1, LogicalBit::Zero.jones()).unwrap(),
        )
        .unwrap();
        assert_eq!(apply_element(&bunched, &id).unwrap(), bunched);
    }

    #[test]
    fn undeclared_path_is_a_configuration_error() {
        let bs = bs5050(P1, P2, Path::port(3), Path::port(4)).unwrap();
        let s = hom_input(0).restrict_occupancy(P1, 1);
        let bare = TwoPhotonState::from_amplitudes([P1, P2], s.iter()).unwrap();
        assert!(matches!(
            apply_element(&bare, &bs),
            Err(Error::Configuration(_))
        ));
    }

    #[test]
    fn joint_probability_rejects_shared_path() {
        let s = hom_input(0);
        let p = PolarizationProjector::pol(P1, Polarization::H);
        assert!(matches!(
            joint_probability(&s, &p, &p),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn orthogonal_projection_of_product_is_zero() {
        let s = hom_input(0);
        let va = PolarizationProjector::pol(P1, Polarization::V);
        let hb = PolarizationProjector::pol(P2, Polarization::H);
        assert_eq!(joint_probability(&s, &va, &hb).unwrap(), 0.0);
    }

    #[test]
    fn conditioning_requires_single_occupancy() {
        let bunched = product_state(
            &SinglePhotonSpec::prompt(P1, h()).unwrap(),
            &SinglePhotonSpec::prompt(P1, h()).unwrap(),
        )
        .unwrap();
        let p = PolarizationProjector::pol(P1, Polarization::H);
        assert!(matches!(
            condition_on(&bunched, &p),
            Err(Error::Structural(_))
        ));
        let empty = PolarizationProjector::pol(P2, Polarization::H);
        assert!(matches!(
            condition_on(&bunched.with_paths([P2]), &empty),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn zero_probability_outcome_gives_empty_ensemble() {
        let s = hom_input(0);
        let v = PolarizationProjector::pol(P1, Polarization::V);
        let e = condition_on(&s, &v).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.probability(), 0.0);
    }

    #[test]
    fn analyzer_probability_is_temporally_incoherent() {
        let s = SinglePhotonState::from_amplitudes([
            (Mode::new(P1, Polarization::H, 0), c(FRAC_1_SQRT_2)),
            (Mode::new(P1, Polarization::V, 1), c(FRAC_1_SQRT_2)),
        ]);
        for deg in [0.0, 17.0, 45.0, 90.0, 133.0] {
            let p = s.projected_probability(&PolarizationProjector::linear(P1, deg));
            assert!((p - 0.5).abs() < 1e-15, "{deg}: {p}");
        }
        let p = s.projected_probability(&PolarizationProjector::linear(P2, 0.0));
        assert_eq!(p, 0.0);
    }

    #[test]
    fn relabel_then_inverse_is_identity() {
        let s = hom_input(1);
        let swap = |p: Path| match p {
            P1 => P2,
            P2 => P1,
            other => other,
        };
        assert_eq!(s.relabel_paths(swap).relabel_paths(swap), s);
    }

    fn arb_amp() -> impl Strategy<Value = Complex64> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
    }

    fn arb_mode() -> impl Strategy<Value = Mode> {
        (0u16..3, any::<bool>(), 0u8..2).prop_map(|(p, v, t)| {
            Mode::new(
                Path::port(p),
                if v { Polarization::V } else { Polarization::H },
                t,
            )
        })
    }

    proptest! {
        #[test]
        fn amplitude_lookup_ignores_pair_order(
            terms in prop::collection::vec(((arb_mode(), arb_mode()), arb_amp()), 1..12)
        ) {
            let s = TwoPhotonState::from_amplitudes((0..3).map(Path::port), terms.clone()).unwrap();
            for ((a, b), _) in terms {
                prop_assert_eq!(s.amplitude(a, b), s.amplitude(b, a));
            }
        }

        #[test]
        fn occupancy_classes_partition_the_norm(
            terms in prop::collection::vec(((arb_mode(), arb_mode()), arb_amp()), 1..12),
            p in 0u16..3,
        ) {
            let s = TwoPhotonState::from_amplitudes((0..3).map(Path::port), terms).unwrap();
            let path = Path::port(p);
            let total: f64 = (0..=2).map(|n| s.restrict_occupancy(path, n).norm_sqr()).sum();
            prop_assert!((total - s.norm_sqr()).abs() < 1e-12);
        }
    }
}
