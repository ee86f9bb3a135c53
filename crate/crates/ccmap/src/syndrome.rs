//! Color-code syndrome measurement and its linear-time projection onto
//! the two surface-code copies.
//!
//! Face syndromes copy across directly; vertex syndromes pick up the
//! syndromes of the neighboring faces that own a dependent boundary edge,
//! so projection touches each face a constant number of times.

use crate::colex::{Colex, FaceLabeling};
use crate::contraction::SurfaceGraph;
use crate::pauli::PauliOp;

/// One syndrome bit per face and stabilizer type on the colex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorSyndrome {
    /// `x[f]` is the outcome of `B_f^X` (sensitive to Z errors).
    pub x: Vec<bool>,
    /// `z[f]` is the outcome of `B_f^Z` (sensitive to X errors).
    pub z: Vec<bool>,
}

impl ColorSyndrome {
    pub fn is_trivial(&self) -> bool {
        !self.x.iter().chain(self.z.iter()).any(|&b| b)
    }

    pub fn xor(&self, other: &ColorSyndrome) -> ColorSyndrome {
        ColorSyndrome {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
        }
    }
}

/// Defect bits on the two surface-code copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSyndrome {
    /// Star-operator defects per copy, indexed by surface vertex.
    pub vertex: [Vec<bool>; 2],
    /// Plaquette defects per copy, indexed by surface face.
    pub plaquette: [Vec<bool>; 2],
}

impl SurfaceSyndrome {
    pub fn trivial(surface: &SurfaceGraph) -> Self {
        SurfaceSyndrome {
            vertex: [
                vec![false; surface.n_vertices],
                vec![false; surface.n_vertices],
            ],
            plaquette: [
                vec![false; surface.faces.len()],
                vec![false; surface.faces.len()],
            ],
        }
    }

    pub fn is_trivial(&self) -> bool {
        !self
            .vertex
            .iter()
            .chain(self.plaquette.iter())
            .flatten()
            .any(|&b| b)
    }
}

/// Measure every face stabilizer of the color code against `error`.
pub fn measure(colex: &Colex, error: &PauliOp) -> ColorSyndrome {
    let nf = colex.faces().len();
    let mut x = vec![false; nf];
    let mut z = vec![false; nf];
    for (f, face) in colex.faces().iter().enumerate() {
        let mut sx = false;
        let mut sz = false;
        for &v in &face.cycle {
            sx ^= error.z_bit(v);
            sz ^= error.x_bit(v);
        }
        x[f] = sx;
        z[f] = sz;
    }
    ColorSyndrome { x, z }
}

/// Precomputed source tables for the projection.
pub struct ProjectionTables {
    /// Per surface face: the colex face whose syndrome it copies.
    plaquette_source: Vec<usize>,
    /// Per surface vertex: the contracted colex face.
    vertex_source: Vec<usize>,
    /// Per surface vertex: c''-faces owning a dependent-X boundary edge.
    dx_terms: Vec<Vec<usize>>,
    /// Per surface vertex: c''-faces owning a dependent-Z boundary edge.
    dz_terms: Vec<Vec<usize>>,
}

impl ProjectionTables {
    pub fn new(colex: &Colex, surface: &SurfaceGraph, labeling: &FaceLabeling) -> Self {
        let plaquette_source = surface.cface_of_face.clone();
        let vertex_source = surface.cface_of_vertex.clone();
        let mut dx_terms = vec![Vec::new(); surface.n_vertices];
        let mut dz_terms = vec![Vec::new(); surface.n_vertices];
        for (sv, &cface) in vertex_source.iter().enumerate() {
            let cycle = &colex.faces()[cface].cycle;
            let k = cycle.len();
            for i in 0..k {
                let e = colex.edge_index(cycle[i], cycle[(i + 1) % k]).unwrap();
                if let Some(owner) = labeling.cprime_edge_owner[e] {
                    let owner_face = labeling.labels[owner].face;
                    if labeling.dx_edges[owner] == e {
                        dx_terms[sv].push(owner_face);
                    }
                    if labeling.dz_edges[owner] == e {
                        dz_terms[sv].push(owner_face);
                    }
                }
            }
        }
        ProjectionTables {
            plaquette_source,
            vertex_source,
            dx_terms,
            dz_terms,
        }
    }
}

/// Project a color-code syndrome onto defects of the two copies.
pub fn project(s: &ColorSyndrome, tables: &ProjectionTables) -> SurfaceSyndrome {
    let nf = tables.plaquette_source.len();
    let nv = tables.vertex_source.len();
    let mut out = SurfaceSyndrome {
        vertex: [vec![false; nv], vec![false; nv]],
        plaquette: [vec![false; nf], vec![false; nf]],
    };
    for (sf, &src) in tables.plaquette_source.iter().enumerate() {
        out.plaquette[0][sf] = s.z[src];
        out.plaquette[1][sf] = s.x[src];
    }
    for (sv, &src) in tables.vertex_source.iter().enumerate() {
        let mut s1 = s.x[src];
        for &t in &tables.dx_terms[sv] {
            s1 ^= s.x[t];
        }
        let mut s2 = s.z[src];
        for &t in &tables.dz_terms[sv] {
            s2 ^= s.z[t];
        }
        out.vertex[0][sv] = s1;
        out.vertex[1][sv] = s2;
    }
    out
}

/// Directly measure the surface stabilizers of both copies against a
/// doubled-system Pauli (the reference the projection must agree with).
pub fn measure_surface(surface: &SurfaceGraph, error: &PauliOp) -> SurfaceSyndrome {
    assert_eq!(error.n_qubits(), 2 * surface.n_qubits());
    let mut out = SurfaceSyndrome::trivial(surface);
    for copy in 0..2 {
        for v in 0..surface.n_vertices {
            let mut bit = false;
            for &e in &surface.vertex_star[v] {
                bit ^= error.z_bit(2 * e + copy);
            }
            out.vertex[copy][v] = bit;
        }
        for (f, boundary) in surface.faces.iter().enumerate() {
            let mut bit = false;
            for &e in boundary {
                bit ^= error.x_bit(2 * e + copy);
            }
            out.plaquette[copy][f] = bit;
        }
    }
    out
}
