//! Local Clifford circuits (CNOT, H, SWAP) that transform the color
//! code into the two surface-code copies, plus the phase-free tableau
//! conjugation used to verify them against the Pauli map.
//!
//! Per face the circuit is a ladder of CX fans `U_2 .. U_{2m}` and
//! `V_{2m+1} .. V_{2l-1}`, SWAPs on the pairs beyond `2m`, then H on
//! every even qubit; after it, local qubit `2i-1` (one-based) carries
//! surface edge `e_i` of copy 1 and `2i` carries `e_i` of copy 2.

use thiserror::Error;

use crate::codemap::{doubled_index, CodeMap};
use crate::colex::{Colex, FaceLabeling};
use crate::pauli::PauliOp;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Cx { control: usize, target: usize },
    H(usize),
    Swap(usize, usize),
}

/// A gate list in application order (`gates[0]` acts first).
#[derive(Clone, Debug, Default)]
pub struct CliffordCircuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("pair index {0} outside 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("gauge m = {0} outside 1..={1}")]
    BadGauge(usize, usize),
    #[error("circuit maps {kind}_{vertex} to {got} instead of {expected}")]
    Mismatch {
        vertex: usize,
        kind: char,
        got: String,
        expected: String,
    },
}

impl CliffordCircuit {
    pub fn new(n_qubits: usize) -> Self {
        CliffordCircuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) {
        let ok = match gate {
            Gate::Cx { control, target } => {
                control != target && control < self.n_qubits && target < self.n_qubits
            }
            Gate::H(q) => q < self.n_qubits,
            Gate::Swap(a, b) => a != b && a < self.n_qubits && b < self.n_qubits,
        };
        assert!(ok, "gate {gate:?} invalid on {} qubits", self.n_qubits);
        self.gates.push(gate);
    }

    pub fn extend(&mut self, other: &CliffordCircuit) {
        for &g in &other.gates {
            self.push(g);
        }
    }

    /// The same circuit on a larger register, qubit `q` renamed to
    /// `names[q]`.
    pub fn relabeled(&self, names: &[usize], n_qubits: usize) -> CliffordCircuit {
        let mut out = CliffordCircuit::new(n_qubits);
        for &g in &self.gates {
            out.push(match g {
                Gate::Cx { control, target } => Gate::Cx {
                    control: names[control],
                    target: names[target],
                },
                Gate::H(q) => Gate::H(names[q]),
                Gate::Swap(a, b) => Gate::Swap(names[a], names[b]),
            });
        }
        out
    }

    pub fn cx_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cx { .. })).count()
    }

    pub fn swap_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Swap(..))).count()
    }

    pub fn h_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::H(..))).count()
    }
}

/// Conjugate a Pauli through the circuit, phase-free.
pub fn conjugate(circuit: &CliffordCircuit, p: &PauliOp) -> PauliOp {
    assert_eq!(p.n_qubits(), circuit.n_qubits);
    let mut out = p.clone();
    for &g in &circuit.gates {
        match g {
            Gate::Cx { control, target } => {
                if out.x_bit(control) {
                    out.flip_x(target);
                }
                if out.z_bit(target) {
                    out.flip_z(control);
                }
            }
            Gate::H(q) => out.swap_xz(q),
            Gate::Swap(a, b) => {
                let (xa, za) = (out.x_bit(a), out.z_bit(a));
                let (xb, zb) = (out.x_bit(b), out.z_bit(b));
                if xa != xb {
                    out.flip_x(a);
                    out.flip_x(b);
                }
                if za != zb {
                    out.flip_z(a);
                    out.flip_z(b);
                }
            }
        }
    }
    out
}

/// Images of every `X_q` and `Z_q` under a circuit.
pub struct Tableau {
    pub x_rows: Vec<PauliOp>,
    pub z_rows: Vec<PauliOp>,
}

impl Tableau {
    pub fn from_circuit(circuit: &CliffordCircuit) -> Self {
        let n = circuit.n_qubits;
        Tableau {
            x_rows: (0..n).map(|q| conjugate(circuit, &PauliOp::x_on(n, q))).collect(),
            z_rows: (0..n).map(|q| conjugate(circuit, &PauliOp::z_on(n, q))).collect(),
        }
    }

    /// Rows must form a symplectic basis: full rank with the original
    /// commutation pattern.
    pub fn is_symplectic(&self) -> bool {
        let n = self.x_rows.len();
        let all: Vec<PauliOp> = self.x_rows.iter().chain(&self.z_rows).cloned().collect();
        if crate::pauli::rank_gf2(&all) != 2 * n {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                if self.x_rows[i].commutes_with(&self.z_rows[j]) != (i != j) {
                    return false;
                }
                if !self.x_rows[i].commutes_with(&self.x_rows[j])
                    || !self.z_rows[i].commutes_with(&self.z_rows[j])
                {
                    return false;
                }
            }
        }
        true
    }
}

/// The fan `U_{2i}` on a face register of `n_qubits` local qubits
/// (one-based pair index `i`): 2i-1 CX gates.
pub fn emit_u(i: usize, n_qubits: usize) -> Result<CliffordCircuit, CircuitError> {
    if i == 0 || 2 * i > n_qubits {
        return Err(CircuitError::IndexOutOfRange(i, n_qubits / 2));
    }
    let mut c = CliffordCircuit::new(n_qubits);
    c.push(Gate::Cx {
        control: 2 * i - 1,
        target: 2 * i - 2,
    });
    for t in (0..2 * i - 2).rev() {
        c.push(Gate::Cx {
            control: 2 * i - 2,
            target: t,
        });
    }
    Ok(c)
}

/// The fan `V_{2i+1}` on a face with `half_len` pairs: 2l-2i-1 CX gates.
pub fn emit_v(i: usize, half_len: usize) -> Result<CliffordCircuit, CircuitError> {
    if i == 0 || i >= half_len {
        return Err(CircuitError::IndexOutOfRange(i, half_len));
    }
    let l = half_len;
    let mut c = CliffordCircuit::new(2 * l);
    c.push(Gate::Cx {
        control: 2 * i,
        target: 2 * i + 1,
    });
    for t in 2 * i + 2..2 * l {
        c.push(Gate::Cx {
            control: 2 * i + 1,
            target: t,
        });
    }
    Ok(c)
}

/// Full per-face circuit for a face with `half_len` pairs and gauge `m`:
/// the U ladder, the V ladder, SWAPs beyond `2m`, then H on the even
/// qubits. Gate counts: `m^2 + (l-m)^2` CX, `l-m` SWAP, `l` H.
pub fn emit_face_circuit(half_len: usize, m: usize) -> Result<CliffordCircuit, CircuitError> {
    let l = half_len;
    if !(1..=l).contains(&m) {
        return Err(CircuitError::BadGauge(m, l));
    }
    let mut c = CliffordCircuit::new(2 * l);
    for i in (1..=m).rev() {
        c.extend(&emit_u(i, 2 * l)?);
    }
    for i in m..l {
        c.extend(&emit_v(i, l)?);
    }
    for j in m + 1..=l {
        c.push(Gate::Swap(2 * j - 2, 2 * j - 1));
    }
    for j in 1..=l {
        c.push(Gate::H(2 * j - 1));
    }
    Ok(c)
}

/// Concatenation of the per-face circuits over the whole lattice, on
/// the color-code qubit register. Faces act on disjoint qubits.
pub fn emit_lattice_circuit(
    colex: &Colex,
    labeling: &FaceLabeling,
) -> Result<CliffordCircuit, CircuitError> {
    let mut c = CliffordCircuit::new(colex.n_vertices());
    for label in &labeling.labels {
        let face = emit_face_circuit(label.half_len(), label.m)?;
        c.extend(&face.relabeled(&label.verts, colex.n_vertices()));
    }
    Ok(c)
}

/// After the lattice circuit, color qubit `v_{2i-1}` of a face carries
/// copy-1 edge `e_i` and `v_{2i}` copy-2 edge `e_i`: the permutation
/// from doubled-surface indices to color-code indices.
pub fn surface_to_colex_names(
    labeling: &FaceLabeling,
    tau_vertex: &[usize],
    n_doubled: usize,
) -> Vec<usize> {
    let mut names = vec![usize::MAX; n_doubled];
    for label in &labeling.labels {
        for j in 0..label.half_len() {
            let e = tau_vertex[label.verts[2 * j]];
            names[doubled_index(0, e)] = label.verts[2 * j];
            names[doubled_index(1, e)] = label.verts[2 * j + 1];
        }
    }
    names
}

fn relabel_pauli(p: &PauliOp, names: &[usize], n_out: usize) -> PauliOp {
    let mut out = PauliOp::identity(n_out);
    for q in p.x_support() {
        out.flip_x(names[q]);
    }
    for q in p.z_support() {
        out.flip_z(names[q]);
    }
    out
}

/// Check that the emitted lattice circuit realizes the Pauli map on
/// every single-qubit generator; reports the first mismatch.
pub fn verify_circuit(
    colex: &Colex,
    labeling: &FaceLabeling,
    tau_vertex: &[usize],
    map: &CodeMap,
) -> Result<(), CircuitError> {
    let circuit = emit_lattice_circuit(colex, labeling)?;
    verify_given_circuit(colex, labeling, tau_vertex, map, &circuit)
}

/// Same as `verify_circuit` for an externally supplied circuit.
pub fn verify_given_circuit(
    colex: &Colex,
    labeling: &FaceLabeling,
    tau_vertex: &[usize],
    map: &CodeMap,
    circuit: &CliffordCircuit,
) -> Result<(), CircuitError> {
    let n = colex.n_vertices();
    let names = surface_to_colex_names(labeling, tau_vertex, map.n_doubled());
    for v in 0..n {
        let got_x = conjugate(circuit, &PauliOp::x_on(n, v));
        let expect_x = relabel_pauli(map.x_image(v), &names, n);
        if got_x != expect_x {
            return Err(CircuitError::Mismatch {
                vertex: v,
                kind: 'X',
                got: got_x.to_string(),
                expected: expect_x.to_string(),
            });
        }
        let got_z = conjugate(circuit, &PauliOp::z_on(n, v));
        let expect_z = relabel_pauli(map.z_image(v), &names, n);
        if got_z != expect_z {
            return Err(CircuitError::Mismatch {
                vertex: v,
                kind: 'Z',
                got: got_z.to_string(),
                expected: expect_z.to_string(),
            });
        }
    }
    Ok(())
}
