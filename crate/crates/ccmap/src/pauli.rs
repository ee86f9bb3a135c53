//! Word-packed symplectic GF(2) representation of Pauli operators and
//! stabilizer groups, plus rank/kernel utilities.
//!
//! Phases are dropped everywhere: the maps and decoders in this crate are
//! phase-insensitive, so a Pauli is just a pair of bit-vectors (X part,
//! Z part) over the qubit set.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PauliError {
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitCountMismatch(usize, usize),
    #[error("generators {0} and {1} anticommute")]
    AnticommutingGenerators(usize, usize),
    #[error("operator anticommutes with generator {0}")]
    OutsideCentralizer(usize),
}

/// Fixed-length bit vector packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit, if any.
    pub fn leading_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Parity of the overlap `|self AND other|`.
    pub fn overlap_parity(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (w, o) in self.words.iter().zip(&other.words) {
            acc ^= w & o;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.ones().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A Pauli operator modulo phase: X support and Z support over `n` qubits.
///
/// Multiplication is componentwise XOR, so every operator is self-inverse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    n: usize,
    x: BitVec,
    z: BitVec,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        PauliOp {
            n,
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn x_on(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.x.flip(q);
        p
    }

    pub fn z_on(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.z.flip(q);
        p
    }

    pub fn y_on(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.x.flip(q);
        p.z.flip(q);
        p
    }

    pub fn from_supports(n: usize, xs: &[usize], zs: &[usize]) -> Self {
        let mut p = Self::identity(n);
        for &q in xs {
            p.x.flip(q);
        }
        for &q in zs {
            p.z.flip(q);
        }
        p
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        let mut w = 0;
        for i in 0..self.x.words.len() {
            w += (self.x.words[i] | self.z.words[i]).count_ones() as usize;
        }
        w
    }

    #[inline]
    pub fn x_bit(&self, q: usize) -> bool {
        self.x.get(q)
    }

    #[inline]
    pub fn z_bit(&self, q: usize) -> bool {
        self.z.get(q)
    }

    pub fn flip_x(&mut self, q: usize) {
        self.x.flip(q);
    }

    pub fn flip_z(&mut self, q: usize) {
        self.z.flip(q);
    }

    pub fn x_part(&self) -> &BitVec {
        &self.x
    }

    pub fn z_part(&self) -> &BitVec {
        &self.z
    }

    pub fn x_support(&self) -> Vec<usize> {
        self.x.ones().collect()
    }

    pub fn z_support(&self) -> Vec<usize> {
        self.z.ones().collect()
    }

    /// In-place product (XOR of supports).
    pub fn mul_assign(&mut self, other: &PauliOp) {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    pub fn product(&self, other: &PauliOp) -> PauliOp {
        let mut p = self.clone();
        p.mul_assign(other);
        p
    }

    /// Symplectic inner product: true iff the two operators commute.
    pub fn commutes_with(&self, other: &PauliOp) -> bool {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        !(self.x.overlap_parity(&other.z) ^ self.z.overlap_parity(&other.x))
    }

    /// The operator as a single 2n-bit vector (X bits first, then Z bits).
    pub fn symplectic_vec(&self) -> BitVec {
        let mut v = BitVec::zeros(2 * self.n);
        for i in self.x.ones() {
            v.flip(i);
        }
        for i in self.z.ones() {
            v.flip(self.n + i);
        }
        v
    }

    /// Swap the X and Z parts (conjugation by Hadamard on every qubit).
    pub fn swap_xz(&mut self, q: usize) {
        let xb = self.x.get(q);
        let zb = self.z.get(q);
        self.x.set(q, zb);
        self.z.set(q, xb);
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PauliOp {
    /// Debug text form, e.g. `X{0,3} Z{3,7}`; the identity prints as `I`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        let mut first = true;
        if !self.x.is_zero() {
            write!(f, "X{:?}", self.x)?;
            first = false;
        }
        if !self.z.is_zero() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "Z{:?}", self.z)?;
        }
        Ok(())
    }
}

/// Row-echelon GF(2) basis; rows are inserted incrementally.
#[derive(Clone, Default)]
pub struct Gf2Basis {
    rows: Vec<BitVec>, // each with a unique leading-one position
}

impl Gf2Basis {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduce `v` against the basis; returns the residual.
    pub fn reduce(&self, mut v: BitVec) -> BitVec {
        for row in &self.rows {
            let pivot = row.leading_one().unwrap();
            if v.get(pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Insert a vector; returns true if it increased the rank.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let residual = self.reduce(v);
        match residual.leading_one() {
            Some(pivot) => {
                // keep rows ordered by pivot so reduce stays a single pass
                let at = self
                    .rows
                    .partition_point(|r| r.leading_one().unwrap() < pivot);
                self.rows.insert(at, residual);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// GF(2) rank of the 2n-column symplectic matrix formed by `ops`.
pub fn rank_gf2(ops: &[PauliOp]) -> usize {
    let mut basis = Gf2Basis::new();
    for op in ops {
        basis.insert(op.symplectic_vec());
    }
    basis.rank()
}

/// A stabilizer group given by its generators.
#[derive(Clone)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliOp>,
    basis: Gf2Basis,
    rank: usize,
}

impl StabilizerGroup {
    /// Checks that all generator pairs commute.
    pub fn new(n: usize, generators: Vec<PauliOp>) -> Result<Self, PauliError> {
        for g in &generators {
            if g.n_qubits() != n {
                return Err(PauliError::QubitCountMismatch(g.n_qubits(), n));
            }
        }
        for i in 0..generators.len() {
            for j in (i + 1)..generators.len() {
                if !generators[i].commutes_with(&generators[j]) {
                    return Err(PauliError::AnticommutingGenerators(i, j));
                }
            }
        }
        let mut basis = Gf2Basis::new();
        for g in &generators {
            basis.insert(g.symplectic_vec());
        }
        let rank = basis.rank();
        Ok(StabilizerGroup {
            n,
            generators,
            basis,
            rank,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOp] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Logical qubit count `k = n - rank`.
    pub fn logical_count(&self) -> usize {
        self.n - self.rank
    }

    /// Whether `p` is a GF(2) combination of the generators.
    ///
    /// Errors if `p` anticommutes with some generator (membership is only
    /// meaningful inside the centralizer).
    pub fn in_group(&self, p: &PauliOp) -> Result<bool, PauliError> {
        if p.n_qubits() != self.n {
            return Err(PauliError::QubitCountMismatch(p.n_qubits(), self.n));
        }
        for (i, g) in self.generators.iter().enumerate() {
            if !g.commutes_with(p) {
                return Err(PauliError::OutsideCentralizer(i));
            }
        }
        Ok(self.basis.contains(&p.symplectic_vec()))
    }

    /// Membership test without the centralizer check (for callers that
    /// already know `p` commutes with everything).
    pub fn spans(&self, p: &PauliOp) -> bool {
        self.basis.contains(&p.symplectic_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Naive rank over Vec<Vec<bool>>, independent of the packed path.
    fn naive_rank(rows: Vec<Vec<bool>>) -> usize {
        let mut mat = rows;
        let mut rank = 0;
        let ncols = mat.first().map_or(0, |r| r.len());
        for col in 0..ncols {
            if let Some(pivot) = (rank..mat.len()).find(|&r| mat[r][col]) {
                mat.swap(rank, pivot);
                for r in 0..mat.len() {
                    if r != rank && mat[r][col] {
                        for c in 0..ncols {
                            let v = mat[rank][c];
                            mat[r][c] ^= v;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn to_bool_row(p: &PauliOp) -> Vec<bool> {
        let v = p.symplectic_vec();
        (0..v.len()).map(|i| v.get(i)).collect()
    }

    #[test]
    fn single_qubit_commutation() {
        let x0 = PauliOp::x_on(2, 0);
        let z0 = PauliOp::z_on(2, 0);
        assert!(!x0.commutes_with(&z0));

        // X0 Z1 vs Z0 X1: two overlaps cancel
        let a = PauliOp::from_supports(2, &[0], &[1]);
        let b = PauliOp::from_supports(2, &[1], &[0]);
        assert!(a.commutes_with(&b));

        let id = PauliOp::identity(2);
        assert!(a.commutes_with(&id));
        assert!(x0.commutes_with(&id));
    }

    #[test]
    fn self_inverse_product() {
        let p = PauliOp::from_supports(5, &[0, 3], &[3, 4]);
        assert!(p.product(&p).is_identity());
        assert_eq!(p.weight(), 3);
    }

    #[test]
    fn rank_of_duplicates() {
        let x0 = PauliOp::x_on(3, 0);
        assert_eq!(rank_gf2(&[x0.clone(), x0]), 1);
    }

    #[test]
    fn display_form() {
        let p = PauliOp::from_supports(8, &[0, 3], &[3, 7]);
        assert_eq!(format!("{p}"), "X{0,3} Z{3,7}");
        assert_eq!(format!("{}", PauliOp::identity(3)), "I");
    }

    #[test]
    fn rank_matches_naive_oracle() {
        // deterministic pseudo-random ops
        let mut state = 0x12345u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in [3usize, 9, 17, 40] {
            let ops: Vec<PauliOp> = (0..12)
                .map(|_| {
                    let mut p = PauliOp::identity(n);
                    for q in 0..n {
                        if next() % 3 == 0 {
                            p.flip_x(q);
                        }
                        if next() % 3 == 0 {
                            p.flip_z(q);
                        }
                    }
                    p
                })
                .collect();
            let rows = ops.iter().map(to_bool_row).collect();
            assert_eq!(rank_gf2(&ops), naive_rank(rows));
        }
    }

    #[test]
    fn group_membership() {
        // bit-flip repetition-code stabilizers on 3 qubits
        let g1 = PauliOp::from_supports(3, &[], &[0, 1]);
        let g2 = PauliOp::from_supports(3, &[], &[1, 2]);
        let group = StabilizerGroup::new(3, vec![g1.clone(), g2.clone()]).unwrap();
        assert_eq!(group.rank(), 2);
        assert_eq!(group.in_group(&g1), Ok(true));
        assert_eq!(group.in_group(&PauliOp::identity(3)), Ok(true));
        // Z0 Z2 is the product of the generators
        let z02 = PauliOp::from_supports(3, &[], &[0, 2]);
        assert_eq!(group.in_group(&z02), Ok(true));
        // Z0 commutes with everything but is not in the group
        assert_eq!(group.in_group(&PauliOp::z_on(3, 0)), Ok(false));
        // X0 anticommutes with g1
        assert!(group.in_group(&PauliOp::x_on(3, 0)).is_err());
    }

    #[test]
    fn anticommuting_generators_rejected() {
        let err = StabilizerGroup::new(1, vec![PauliOp::x_on(1, 0), PauliOp::z_on(1, 0)]);
        assert_eq!(err.err(), Some(PauliError::AnticommutingGenerators(0, 1)));
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOp> {
        (
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(xs, zs)| {
                let mut p = PauliOp::identity(n);
                for (q, &b) in xs.iter().enumerate() {
                    if b {
                        p.flip_x(q);
                    }
                }
                for (q, &b) in zs.iter().enumerate() {
                    if b {
                        p.flip_z(q);
                    }
                }
                p
            })
    }

    proptest! {
        // commute(PQ, R) = commute(P, R) XOR commute(Q, R)
        #[test]
        fn commutation_is_bilinear(p in arb_pauli(11), q in arb_pauli(11), r in arb_pauli(11)) {
            let pq = p.product(&q);
            let lhs = !pq.commutes_with(&r);
            let rhs = !p.commutes_with(&r) ^ !q.commutes_with(&r);
            prop_assert_eq!(lhs, rhs);
        }

        // rank is invariant under reordering and row operations
        #[test]
        fn rank_invariance(ops in proptest::collection::vec(arb_pauli(9), 1..8), seed in any::<u64>()) {
            let base = rank_gf2(&ops);
            let mut shuffled = ops.clone();
            let split = (seed as usize) % shuffled.len().max(1);
            shuffled.rotate_left(split);
            prop_assert_eq!(rank_gf2(&shuffled), base);
            if ops.len() >= 2 {
                let mut mixed = ops.clone();
                let m = mixed[1].product(&mixed[0]);
                mixed[1] = m;
                prop_assert_eq!(rank_gf2(&mixed), base);
            }
        }
    }
}
