//! Error channels on the color code and the error model they induce on
//! the two surface-code copies: closed-form marginals, the exact
//! per-face joint distribution, and samplers.

use rand::Rng;
use thiserror::Error;

use crate::colex::{FaceLabel, FaceLabeling};
use crate::contraction::SurfaceGraph;
use crate::pauli::PauliOp;

#[derive(Debug, Error, PartialEq)]
pub enum NoiseError {
    #[error("rate {0} outside [0, 1]")]
    BadRate(f64),
    #[error("no closed-form induced model for the erasure channel")]
    ErasureUnsupported,
    #[error("face with {0} qubits too large for exhaustive enumeration")]
    FaceTooLarge(usize),
}

/// Independent, identical single-qubit channel on the color code.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Channel {
    BitFlip(f64),
    PhaseFlip(f64),
    Erasure(f64),
}

impl Channel {
    pub fn rate(self) -> f64 {
        match self {
            Channel::BitFlip(p) | Channel::PhaseFlip(p) | Channel::Erasure(p) => p,
        }
    }

    pub fn check(self) -> Result<(), NoiseError> {
        let r = self.rate();
        if !(0.0..=1.0).contains(&r) || r.is_nan() {
            Err(NoiseError::BadRate(r))
        } else {
            Ok(())
        }
    }
}

/// An erasure draw: the erased positions and the Pauli the measurement
/// projected them onto. Positions drive the decoder; the Pauli is only
/// ground truth for success checking.
#[derive(Clone, Debug)]
pub struct ErasureDraw {
    pub erased: Vec<usize>,
    pub error: PauliOp,
}

#[derive(Clone, Debug)]
pub enum ChannelSample {
    Pauli(PauliOp),
    Erasure(ErasureDraw),
}

/// Draw one iid sample of the channel over `n` qubits.
pub fn sample(ch: Channel, n: usize, rng: &mut impl Rng) -> Result<ChannelSample, NoiseError> {
    ch.check()?;
    match ch {
        Channel::BitFlip(p) => {
            let mut e = PauliOp::identity(n);
            for q in 0..n {
                if rng.gen_bool(p) {
                    e.flip_x(q);
                }
            }
            Ok(ChannelSample::Pauli(e))
        }
        Channel::PhaseFlip(p) => {
            let mut e = PauliOp::identity(n);
            for q in 0..n {
                if rng.gen_bool(p) {
                    e.flip_z(q);
                }
            }
            Ok(ChannelSample::Pauli(e))
        }
        Channel::Erasure(eps) => {
            let mut erased = Vec::new();
            let mut error = PauliOp::identity(n);
            for q in 0..n {
                if rng.gen_bool(eps) {
                    erased.push(q);
                    // completely mixed state projects onto I, X, Z, Y
                    // with equal probability
                    match rng.gen_range(0..4u8) {
                        0 => {}
                        1 => error.flip_x(q),
                        2 => error.flip_z(q),
                        _ => {
                            error.flip_x(q);
                            error.flip_z(q);
                        }
                    }
                }
            }
            Ok(ChannelSample::Erasure(ErasureDraw { erased, error }))
        }
    }
}

/// Probability of an odd number of events among `t` iid Bernoulli(p)
/// trials, written as the odd-binomial sum.
pub fn odd_binomial_sum(t: usize, p: f64) -> f64 {
    let mut total = 0.0;
    let mut k = 1;
    while k <= t {
        total += binomial(t, k) * p.powi(k as i32) * (1.0 - p).powi((t - k) as i32);
        k += 2;
    }
    total
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Marginal single-qubit error rates induced on the copies, plus the
/// window bound `m*`.
#[derive(Clone, Debug)]
pub struct InducedModel {
    /// X-error rate per copy per surface edge.
    pub x_rate: [Vec<f64>; 2],
    /// Z-error rate per copy per surface edge.
    pub z_rate: [Vec<f64>; 2],
    pub m_star: usize,
}

/// Closed-form marginals for the bit-flip or phase-flip channel.
pub fn induced_marginals(
    surface: &SurfaceGraph,
    labeling: &FaceLabeling,
    ch: Channel,
) -> Result<InducedModel, NoiseError> {
    ch.check()?;
    let n_edges = surface.n_qubits();
    let mut model = InducedModel {
        x_rate: [vec![0.0; n_edges], vec![0.0; n_edges]],
        z_rate: [vec![0.0; n_edges], vec![0.0; n_edges]],
        m_star: labeling
            .labels
            .iter()
            .map(|lb| lb.m.max(lb.half_len() - lb.m))
            .max()
            .unwrap_or(0),
    };
    let p = ch.rate();
    for label in &labeling.labels {
        let l = label.half_len();
        let m = label.m;
        for j in 0..l {
            let i = j + 1;
            let edge = surface.tau_vertex[label.verts[2 * j]];
            // window length of qubits feeding the conjugate-type error
            let t = if i <= m { 2 * m - 2 * i + 1 } else { 2 * i - 2 * m - 1 };
            match ch {
                Channel::BitFlip(_) => {
                    model.x_rate[0][edge] = 2.0 * p * (1.0 - p);
                    model.z_rate[1][edge] = odd_binomial_sum(t, p);
                }
                Channel::PhaseFlip(_) => {
                    // windows mirror through the dependent-edge choices
                    let t1 = if i <= m { 2 * i - 1 } else { 2 * l - 2 * i + 1 };
                    model.x_rate[1][edge] = 2.0 * p * (1.0 - p);
                    model.z_rate[0][edge] = odd_binomial_sum(t1, p);
                }
                Channel::Erasure(_) => return Err(NoiseError::ErasureUnsupported),
            }
        }
    }
    Ok(model)
}

/// Exact per-copy error-pattern distribution for a single face, by
/// exhaustive enumeration of the physical error patterns.
///
/// For the bit-flip channel `copy1` holds X patterns and `copy2` Z
/// patterns over the face edges `e_1..e_l` (bit `j` is `e_{j+1}`); the
/// phase-flip channel mirrors the roles.
#[derive(Clone, Debug)]
pub struct FaceJointTable {
    pub half_len: usize,
    pub copy1: Vec<f64>,
    pub copy2: Vec<f64>,
}

pub fn joint_table(label: &FaceLabel, ch: Channel) -> Result<FaceJointTable, NoiseError> {
    ch.check()?;
    let l = label.half_len();
    if 2 * l > 16 {
        return Err(NoiseError::FaceTooLarge(2 * l));
    }
    let m = label.m;
    let p = ch.rate();
    let mut copy1 = vec![0.0; 1 << l];
    let mut copy2 = vec![0.0; 1 << l];

    // parity windows over zero-based boundary positions
    let window_parity = |w: u32, lo: usize, hi: usize| -> bool {
        let mut bit = false;
        for idx in lo..=hi {
            bit ^= w >> idx & 1 == 1;
        }
        bit
    };

    for w in 0u32..1 << (2 * l) {
        let weight = w.count_ones() as i32;
        let prob = p.powi(weight) * (1.0 - p).powi(2 * l as i32 - weight);
        let mut same = 0u32; // pattern on the copy carrying same-type errors
        let mut conj = 0u32; // pattern on the copy carrying conjugate errors
        for j in 0..l {
            let i = j + 1;
            if window_parity(w, 2 * j, 2 * j + 1) {
                same |= 1 << j;
            }
            let lit = match ch {
                Channel::BitFlip(_) => {
                    if i <= m {
                        window_parity(w, 2 * i - 1, 2 * m - 1)
                    } else {
                        window_parity(w, 2 * m, 2 * i - 2)
                    }
                }
                Channel::PhaseFlip(_) => {
                    if i <= m {
                        window_parity(w, 0, 2 * i - 2)
                    } else {
                        window_parity(w, 2 * i - 1, 2 * l - 1)
                    }
                }
                Channel::Erasure(_) => return Err(NoiseError::ErasureUnsupported),
            };
            if lit {
                conj |= 1 << j;
            }
        }
        match ch {
            Channel::BitFlip(_) => {
                copy1[same as usize] += prob;
                copy2[conj as usize] += prob;
            }
            Channel::PhaseFlip(_) => {
                copy2[same as usize] += prob;
                copy1[conj as usize] += prob;
            }
            Channel::Erasure(_) => unreachable!(),
        }
    }
    Ok(FaceJointTable { half_len: l, copy1, copy2 })
}

/// Probability that every edge in `subset` carries an error, i.e. the
/// subset marginal of a pattern distribution.
pub fn subset_marginal(dist: &[f64], subset: u32) -> f64 {
    dist.iter()
        .enumerate()
        .filter(|(mask, _)| *mask as u32 & subset == subset)
        .map(|(_, p)| p)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::{build_square_octagon, label_faces, Color};
    use crate::contraction::contract;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const RATES: [f64; 10] = [0.01, 0.05, 0.08, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.45];

    fn octagon_label() -> FaceLabel {
        let colex = build_square_octagon(2).unwrap();
        let labeling = label_faces(&colex, Color::R);
        labeling.labels[0].clone()
    }

    #[test]
    fn extreme_rates() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        match sample(Channel::BitFlip(0.0), 16, &mut rng).unwrap() {
            ChannelSample::Pauli(p) => assert!(p.is_identity()),
            _ => panic!(),
        }
        match sample(Channel::BitFlip(1.0), 16, &mut rng).unwrap() {
            ChannelSample::Pauli(p) => {
                assert_eq!(p.x_support().len(), 16);
                assert!(p.z_support().is_empty());
            }
            _ => panic!(),
        }
        assert_eq!(
            sample(Channel::BitFlip(1.5), 4, &mut rng).err(),
            Some(NoiseError::BadRate(1.5))
        );
    }

    #[test]
    fn empirical_marginal_matches_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 16;
        let trials = 100_000;
        let mut counts = vec![0u32; n];
        for _ in 0..trials {
            if let ChannelSample::Pauli(p) = sample(Channel::BitFlip(0.1), n, &mut rng).unwrap() {
                for q in p.x_support() {
                    counts[q] += 1;
                }
            }
        }
        let sigma = (0.1f64 * 0.9 / trials as f64).sqrt();
        for &c in &counts {
            let freq = c as f64 / trials as f64;
            assert!((freq - 0.1).abs() < 3.0 * sigma, "freq {freq}");
        }
    }

    #[test]
    fn octagon_marginals_match_stated_forms() {
        let colex = build_square_octagon(2).unwrap();
        let surface = contract(&colex, Color::R).unwrap();
        let labeling = label_faces(&colex, Color::R);
        let p = 0.13;
        let model = induced_marginals(&surface, &labeling, Channel::BitFlip(p)).unwrap();
        let tri = 3.0 * p * (1.0 - p) * (1.0 - p) + p * p * p;
        for label in &labeling.labels {
            for j in 0..4 {
                let e = surface.tau_vertex[label.verts[2 * j]];
                assert!((model.x_rate[0][e] - 2.0 * p * (1.0 - p)).abs() < 1e-15);
                let expect = if j == 0 || j == 3 { tri } else { p };
                assert!((model.z_rate[1][e] - expect).abs() < 1e-15);
                assert_eq!(model.z_rate[0][e], 0.0);
                assert_eq!(model.x_rate[1][e], 0.0);
            }
        }
        assert_eq!(model.m_star, 2);
        let zero = induced_marginals(&surface, &labeling, Channel::BitFlip(0.0)).unwrap();
        assert!(zero.x_rate[0].iter().all(|&r| r == 0.0));
        assert!(zero.z_rate[1].iter().all(|&r| r == 0.0));
        assert!(matches!(
            induced_marginals(&surface, &labeling, Channel::Erasure(0.1)),
            Err(NoiseError::ErasureUnsupported)
        ));
    }

    /// The sixteen phase-flip rows and sixteen bit-flip rows of the
    /// per-face error-probability table for l = 4, m = 2.
    #[test]
    fn octagon_error_probability_table() {
        let label = octagon_label();
        let q = 0.17;
        let one = |r: f64| r;
        let tri = |r: f64| 3.0 * r * (1.0 - r) * (1.0 - r) + r * r * r;
        let pair = |r: f64| r * (1.0 - r) * (1.0 - r) + r * r * r;

        // phase flip: Z patterns live on copy 1 (odd flat labels)
        let table = joint_table(&label, Channel::PhaseFlip(q)).unwrap();
        let z = |mask: u32| subset_marginal(&table.copy1, mask);
        let entries_z: Vec<(u32, f64)> = vec![
            (0b0001, one(q)),
            (0b0010, tri(q)),
            (0b0100, tri(q)),
            (0b1000, one(q)),
            (0b0011, pair(q)),
            (0b1100, pair(q)),
            (0b0101, q * tri(q)),
            (0b1001, q * q),
            (0b0110, tri(q) * tri(q)),
            (0b1010, q * tri(q)),
            (0b0111, tri(q) * pair(q)),
            (0b1011, q * pair(q)),
            (0b1101, q * pair(q)),
            (0b1110, tri(q) * pair(q)),
            (0b1111, pair(q) * pair(q)),
        ];
        for (mask, expect) in entries_z {
            assert!((z(mask) - expect).abs() < 1e-14, "Z mask {mask:04b}");
        }
        // X_2, X_4, X_6, X_8 all at 2q(1-q) on copy 2
        for j in 0..4 {
            let xm = subset_marginal(&table.copy2, 1 << j);
            assert!((xm - 2.0 * q * (1.0 - q)).abs() < 1e-14);
        }

        // bit flip: Z patterns live on copy 2 (even flat labels)
        let p = 0.09;
        let table = joint_table(&label, Channel::BitFlip(p)).unwrap();
        let z2 = |mask: u32| subset_marginal(&table.copy2, mask);
        let entries_p: Vec<(u32, f64)> = vec![
            (0b0001, tri(p)),
            (0b0010, one(p)),
            (0b0100, one(p)),
            (0b1000, tri(p)),
            (0b0011, pair(p)),
            (0b1100, pair(p)),
            (0b0101, p * tri(p)),
            (0b1001, tri(p) * tri(p)),
            (0b0110, p * p),
            (0b1010, p * tri(p)),
            (0b0111, p * pair(p)),
            (0b1011, pair(p) * tri(p)),
            (0b1101, pair(p) * tri(p)),
            (0b1110, p * pair(p)),
            (0b1111, pair(p) * pair(p)),
        ];
        for (mask, expect) in entries_p {
            assert!((z2(mask) - expect).abs() < 1e-14, "Z mask {mask:04b}");
        }
        for j in 0..4 {
            let xm = subset_marginal(&table.copy1, 1 << j);
            assert!((xm - 2.0 * p * (1.0 - p)).abs() < 1e-14);
        }
    }

    #[test]
    fn oversized_faces_are_rejected() {
        let label = FaceLabel {
            face: 0,
            verts: (0..18).collect(),
            m: 4,
        };
        assert!(matches!(
            joint_table(&label, Channel::BitFlip(0.1)),
            Err(NoiseError::FaceTooLarge(18))
        ));
        assert!(matches!(
            joint_table(&octagon_label(), Channel::Erasure(0.1)),
            Err(NoiseError::ErasureUnsupported)
        ));
    }

    #[test]
    fn pattern_distribution_sums_to_one() {
        let label = octagon_label();
        for ch in [Channel::BitFlip(0.2), Channel::PhaseFlip(0.07)] {
            let table = joint_table(&label, ch).unwrap();
            assert!((table.copy1.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!((table.copy2.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    /// Closed-form marginals agree with the enumerated table at every
    /// test rate, for both channels.
    #[test]
    fn closed_forms_match_enumeration() {
        let colex = build_square_octagon(2).unwrap();
        let surface = contract(&colex, Color::R).unwrap();
        let labeling = label_faces(&colex, Color::R);
        let label = &labeling.labels[0];
        for &r in &RATES {
            for ch in [Channel::BitFlip(r), Channel::PhaseFlip(r)] {
                let model = induced_marginals(&surface, &labeling, ch).unwrap();
                let table = joint_table(label, ch).unwrap();
                for j in 0..label.half_len() {
                    let e = surface.tau_vertex[label.verts[2 * j]];
                    let (same_copy, conj_copy, same_dist, conj_dist) = match ch {
                        Channel::BitFlip(_) => (0, 1, &table.copy1, &table.copy2),
                        Channel::PhaseFlip(_) => (1, 0, &table.copy2, &table.copy1),
                        Channel::Erasure(_) => unreachable!(),
                    };
                    let same_rate = subset_marginal(same_dist, 1 << j);
                    let conj_rate = subset_marginal(conj_dist, 1 << j);
                    assert!((model.x_rate[same_copy][e] - same_rate).abs() < 1e-12);
                    assert!((model.z_rate[conj_copy][e] - conj_rate).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn marginal_bounds_hold() {
        let colex = build_square_octagon(2).unwrap();
        let surface = contract(&colex, Color::R).unwrap();
        let labeling = label_faces(&colex, Color::R);
        for &p in &RATES {
            if p >= 0.5 {
                continue;
            }
            let model = induced_marginals(&surface, &labeling, Channel::BitFlip(p)).unwrap();
            let upper = odd_binomial_sum(2 * model.m_star - 1, p);
            for label in &labeling.labels {
                for j in 0..label.half_len() {
                    let e = surface.tau_vertex[label.verts[2 * j]];
                    let q = model.z_rate[1][e];
                    assert!(q >= p - 1e-15);
                    assert!(q <= upper + 1e-15);
                }
            }
        }
    }

    /// Errors induced on one copy are genuinely correlated: adjacent
    /// windows share qubits (e.g. e_1 and e_2), while windows that do
    /// not overlap factorize exactly (e.g. e_1 and e_4).
    #[test]
    fn induced_errors_are_correlated() {
        let label = octagon_label();
        let p = 0.1;
        let table = joint_table(&label, Channel::BitFlip(p)).unwrap();
        let joint_12 = subset_marginal(&table.copy2, 0b0011);
        let m1 = subset_marginal(&table.copy2, 0b0001);
        let m2 = subset_marginal(&table.copy2, 0b0010);
        assert!((joint_12 - m1 * m2).abs() > 1e-4, "expected correlation");
        // disjoint windows: joint equals the product
        let joint_14 = subset_marginal(&table.copy2, 0b1001);
        let m4 = subset_marginal(&table.copy2, 0b1000);
        assert!((joint_14 - m1 * m4).abs() < 1e-14);
    }
}
