//! Test-only oracles, independent of the library's mode-mapping code.
#![allow(dead_code)]

use loqc_qec::elements::LinearElement;
use loqc_qec::state::{Mode, Path, Polarization, TwoPhotonState, TEMPORAL_DIM};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

/// Every mode on `paths`, in a fixed order.
pub fn all_modes(paths: &[Path]) -> Vec<Mode> {
    let mut modes = Vec::new();
    for &p in paths {
        for pol in Polarization::ALL {
            for t in 0..TEMPORAL_DIM as u8 {
                modes.push(Mode::new(p, pol, t));
            }
        }
    }
    modes
}

/// Two-photon Fock basis `(i, j)` with `i <= j` over mode indices.
pub fn fock_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Single-photon unitary over `modes` induced by `element`, identity on
/// modes it does not touch and diagonal in the temporal index.
pub fn full_unitary(element: &LinearElement, modes: &[Mode]) -> DMatrix<Complex64> {
    let n = modes.len();
    let mut u = DMatrix::<Complex64>::identity(n, n);
    let chan = element.channels();
    let m = element.matrix();
    for (col, mc) in modes.iter().enumerate() {
        let Some(j) = chan.iter().position(|c| *c == (mc.path, mc.pol)) else {
            continue;
        };
        for (row, mr) in modes.iter().enumerate() {
            u[(row, col)] = match chan.iter().position(|c| *c == (mr.path, mr.pol)) {
                Some(i) if mr.temporal == mc.temporal => m[(i, j)],
                _ => Complex64::default(),
            };
        }
    }
    u
}

fn perm2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    a * d + b * c
}

/// Applies `u` to a two-photon amplitude vector over `fock_pairs`, using
/// `⟨k,l|U|i,j⟩ = perm(U[{k,l},{i,j}]) / √(μ_in! μ_out!)`.
pub fn permanent_apply(u: &DMatrix<Complex64>, amps: &[Complex64]) -> Vec<Complex64> {
    let pairs = fock_pairs(u.nrows());
    let mult = |(i, j): (usize, usize)| if i == j { 2.0f64 } else { 1.0 };
    pairs
        .iter()
        .map(|&(k, l)| {
            pairs
                .iter()
                .zip(amps)
                .filter(|(_, c)| **c != Complex64::default())
                .map(|(&(i, j), c)| {
                    let p = perm2(u[(k, i)], u[(k, j)], u[(l, i)], u[(l, j)]);
                    p / (mult((i, j)) * mult((k, l))).sqrt() * c
                })
                .sum()
        })
        .collect()
}

pub fn to_dense(state: &TwoPhotonState, modes: &[Mode]) -> Vec<Complex64> {
    fock_pairs(modes.len())
        .into_iter()
        .map(|(i, j)| state.amplitude(modes[i], modes[j]))
        .collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Haar-ish random unitary from the QR decomposition of a Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    g.qr().q()
}

pub fn random_state(paths: &[Path], terms: usize, rng: &mut impl Rng) -> TwoPhotonState {
    let modes = all_modes(paths);
    let mut entries = Vec::new();
    for _ in 0..terms {
        let a = modes[rng.gen_range(0..modes.len())];
        let b = modes[rng.gen_range(0..modes.len())];
        entries.push((
            (a, b),
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
        ));
    }
    TwoPhotonState::from_amplitudes(paths.iter().copied(), entries)
        .unwrap()
        .normalized()
        .unwrap()
}

/// A random unitary element on a random nonempty subset of channels.
pub fn random_element(paths: &[Path], rng: &mut impl Rng) -> LinearElement {
    let mut channels: Vec<(Path, Polarization)> = Vec::new();
    for &p in paths {
        for pol in Polarization::ALL {
            if rng.gen_bool(0.6) {
                channels.push((p, pol));
            }
        }
    }
    if channels.is_empty() {
        channels.push((paths[0], Polarization::H));
    }
    let u = random_unitary(channels.len(), rng);
    LinearElement::new("random", channels, u).unwrap()
}
