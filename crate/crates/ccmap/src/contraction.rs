//! Contraction of a 2-colex: collapse every face of the chosen color
//! (with its boundary edges) to a point, producing the surface-code graph
//! shared by the two copies, together with the correspondence tables back
//! to the colex.

use thiserror::Error;

use crate::colex::{Colex, ColexError, Color};
use crate::pauli::PauliOp;

#[derive(Debug, Error)]
pub enum ContractionError {
    #[error("invalid colex: {0}")]
    InvalidColex(#[from] ColexError),
}

/// An edge of the contracted graph; parallel edges are distinct entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfaceEdge {
    pub u: usize,
    pub v: usize,
}

/// The contracted lattice. Qubits live on edges; each copy of the surface
/// code uses one instance of this graph.
#[derive(Clone)]
pub struct SurfaceGraph {
    pub contract_color: Color,
    /// One vertex per contracted face.
    pub n_vertices: usize,
    /// Edge list indexed by surface qubit id.
    pub edges: Vec<SurfaceEdge>,
    /// Face boundaries as edge-id lists, in boundary order.
    pub faces: Vec<Vec<usize>>,

    /// Colex c-face id -> surface vertex.
    pub vertex_of_cface: Vec<(usize, usize)>,
    /// Surface vertex -> colex c-face id.
    pub cface_of_vertex: Vec<usize>,
    /// Surface edge -> colex c-edge id.
    pub cedge_of_edge: Vec<usize>,
    /// Colex edge id -> surface edge (None for contracted edges).
    pub edge_of_cedge: Vec<Option<usize>>,
    /// Colex vertex -> surface edge (its unique c-colored edge).
    pub tau_vertex: Vec<usize>,
    /// Colex face id -> surface face (None for c-faces).
    pub face_of_cface: Vec<Option<usize>>,
    /// Surface face -> colex face id.
    pub cface_of_face: Vec<usize>,

    /// Per vertex: incident edges with multiplicity dropped for self-loops
    /// (a self-loop contributes nothing to the star operator).
    pub vertex_star: Vec<Vec<usize>>,
}

/// Contract all `c`-colored faces of a valid colex.
pub fn contract(colex: &Colex, c: Color) -> Result<SurfaceGraph, ContractionError> {
    colex.validate()?;

    let cfaces = colex.faces_of_color(c);
    let n_vertices = cfaces.len();
    let mut vertex_of_cface_map = vec![usize::MAX; colex.faces().len()];
    for (sv, &f) in cfaces.iter().enumerate() {
        vertex_of_cface_map[f] = sv;
    }

    // surviving edges: the c-colored ones, in colex edge order
    let cedges = colex.edges_of_color(c);
    let mut edge_of_cedge = vec![None; colex.edges().len()];
    let mut edges = Vec::with_capacity(cedges.len());
    for (se, &e) in cedges.iter().enumerate() {
        edge_of_cedge[e] = Some(se);
        let eu = colex.edges()[e].u;
        let ev = colex.edges()[e].v;
        edges.push(SurfaceEdge {
            u: vertex_of_cface_map[colex.face_at_vertex(eu, c)],
            v: vertex_of_cface_map[colex.face_at_vertex(ev, c)],
        });
    }

    let tau_vertex: Vec<usize> = (0..colex.n_vertices())
        .map(|v| edge_of_cedge[colex.edge_at_vertex(v, c)].unwrap())
        .collect();

    // the non-c faces survive; their boundaries keep only the c-edges
    let mut face_of_cface = vec![None; colex.faces().len()];
    let mut cface_of_face = Vec::new();
    let mut faces = Vec::new();
    for (fi, face) in colex.faces().iter().enumerate() {
        if face.color == c {
            continue;
        }
        let k = face.cycle.len();
        let mut boundary = Vec::new();
        for i in 0..k {
            let e = colex
                .edge_index(face.cycle[i], face.cycle[(i + 1) % k])
                .unwrap();
            if let Some(se) = edge_of_cedge[e] {
                boundary.push(se);
            }
        }
        face_of_cface[fi] = Some(faces.len());
        cface_of_face.push(fi);
        faces.push(boundary);
    }

    let mut vertex_star = vec![Vec::new(); n_vertices];
    for (se, e) in edges.iter().enumerate() {
        if e.u != e.v {
            vertex_star[e.u].push(se);
            vertex_star[e.v].push(se);
        }
    }

    let vertex_of_cface = cfaces
        .iter()
        .map(|&f| (f, vertex_of_cface_map[f]))
        .collect();

    Ok(SurfaceGraph {
        contract_color: c,
        n_vertices,
        edges,
        faces,
        vertex_of_cface,
        cface_of_vertex: cfaces,
        cedge_of_edge: cedges,
        edge_of_cedge,
        tau_vertex,
        face_of_cface,
        cface_of_face,
        vertex_star,
    })
}

impl SurfaceGraph {
    pub fn n_qubits(&self) -> usize {
        self.edges.len()
    }

    /// Star operator `A_v`: X on every edge incident on `v`.
    pub fn vertex_stabilizer(&self, v: usize) -> PauliOp {
        PauliOp::from_supports(self.n_qubits(), &self.vertex_star[v], &[])
    }

    /// Plaquette operator `B_f`: Z on the boundary of face `f`.
    pub fn face_stabilizer(&self, f: usize) -> PauliOp {
        let mut p = PauliOp::identity(self.n_qubits());
        for &e in &self.faces[f] {
            p.flip_z(e); // an edge traversed twice cancels
        }
        p
    }
}

/// Star and plaquette operators for one copy of the surface code.
pub struct SurfaceStabilizers {
    pub vertex_ops: Vec<PauliOp>,
    pub face_ops: Vec<PauliOp>,
}

pub fn surface_stabilizers(graph: &SurfaceGraph) -> SurfaceStabilizers {
    SurfaceStabilizers {
        vertex_ops: (0..graph.n_vertices)
            .map(|v| graph.vertex_stabilizer(v))
            .collect(),
        face_ops: (0..graph.faces.len())
            .map(|f| graph.face_stabilizer(f))
            .collect(),
    }
}

impl SurfaceStabilizers {
    pub fn all(&self) -> impl Iterator<Item = &PauliOp> {
        self.vertex_ops.iter().chain(self.face_ops.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::{build_hexagonal, build_square_octagon, COLORS};
    use crate::pauli::rank_gf2;

    #[test]
    fn square_octagon_contracts_to_square_torus() {
        let colex = build_square_octagon(2).unwrap();
        let g = contract(&colex, Color::R).unwrap();
        // enumeration oracle: count cells directly
        assert_eq!(g.n_vertices, 4);
        assert_eq!(g.edges.len(), 8);
        assert_eq!(g.faces.len(), 4);
        let chi = g.n_vertices as i64 - g.edges.len() as i64 + g.faces.len() as i64;
        assert_eq!(chi, 0);
        // square toric lattice: all faces 4-sided, all vertices degree 4
        for f in &g.faces {
            assert_eq!(f.len(), 4);
        }
        for v in 0..g.n_vertices {
            assert_eq!(g.vertex_star[v].len(), 4);
        }
    }

    #[test]
    fn hexagonal_contracts_to_triangular_lattice() {
        let colex = build_hexagonal(3).unwrap();
        for c in COLORS {
            let g = contract(&colex, c).unwrap();
            assert_eq!(g.edges.len(), colex.n_vertices() / 2);
            assert_eq!(g.n_vertices, 3);
            assert_eq!(g.faces.len(), 6);
            for f in &g.faces {
                assert_eq!(f.len(), 3);
            }
        }
    }

    #[test]
    fn octagon_color_contraction_has_parallel_edges() {
        let colex = build_square_octagon(2).unwrap();
        let g = contract(&colex, Color::G).unwrap();
        assert_eq!(g.edges.len(), colex.n_vertices() / 2);
        let mut pairs = std::collections::HashMap::new();
        for e in &g.edges {
            *pairs.entry((e.u.min(e.v), e.u.max(e.v))).or_insert(0usize) += 1;
        }
        assert!(pairs.values().any(|&c| c > 1), "expected parallel edges");
        let chi = g.n_vertices as i64 - g.edges.len() as i64 + g.faces.len() as i64;
        assert_eq!(chi, 0);
    }

    #[test]
    fn stabilizers_commute_and_have_torus_rank() {
        let colex = build_square_octagon(2).unwrap();
        let g = contract(&colex, Color::R).unwrap();
        let stabs = surface_stabilizers(&g);
        assert_eq!(stabs.vertex_ops.len(), 4);
        assert_eq!(stabs.face_ops.len(), 4);
        for a in stabs.all() {
            for b in stabs.all() {
                assert!(a.commutes_with(b));
            }
        }
        let all: Vec<_> = stabs.all().cloned().collect();
        assert_eq!(rank_gf2(&all), g.n_qubits() - 2); // k = 2 per copy

        // each A_v and B_f overlap on an even number of edges
        let prod_a = stabs
            .vertex_ops
            .iter()
            .fold(PauliOp::identity(g.n_qubits()), |acc, p| acc.product(p));
        assert!(prod_a.is_identity());
        let prod_b = stabs
            .face_ops
            .iter()
            .fold(PauliOp::identity(g.n_qubits()), |acc, p| acc.product(p));
        assert!(prod_b.is_identity());
    }

    #[test]
    fn tau_vertex_consistent_with_tau_edge() {
        let colex = build_square_octagon(4).unwrap();
        for c in COLORS {
            let g = contract(&colex, c).unwrap();
            for &ce in &g.cedge_of_edge {
                let e = &colex.edges()[ce];
                let se = g.edge_of_cedge[ce].unwrap();
                assert_eq!(g.tau_vertex[e.u], se);
                assert_eq!(g.tau_vertex[e.v], se);
            }
            // counts: |V| = |F_c|, |E| = n/2, |F| = |F_c'| + |F_c''|
            assert_eq!(g.n_vertices, colex.faces_of_color(c).len());
            assert_eq!(g.edges.len(), colex.n_vertices() / 2);
            let (cp, cpp) = c.others();
            assert_eq!(
                g.faces.len(),
                colex.faces_of_color(cp).len() + colex.faces_of_color(cpp).len()
            );
        }
    }

    /// The logical count splits as 4 = 2 + 2 across the copies,
    /// whichever color is contracted.
    #[test]
    fn logical_count_splits_over_the_copies() {
        for colex in [build_square_octagon(2).unwrap(), build_hexagonal(3).unwrap()] {
            let k_color = colex.n_vertices() - rank_gf2(&colex.stabilizer_generators());
            assert_eq!(k_color, 4);
            for c in COLORS {
                let g = contract(&colex, c).unwrap();
                let stabs = surface_stabilizers(&g);
                let all: Vec<_> = stabs.all().cloned().collect();
                let k_copy = g.n_qubits() - rank_gf2(&all);
                assert_eq!(k_copy, 2);
            }
        }
    }
}
