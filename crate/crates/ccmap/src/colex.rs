//! 2-colexes: trivalent, 3-face-colorable lattices on the torus, the
//! canonical per-face qubit labeling, and the two built-in families
//! (square-octagon 4.8.8 and honeycomb).
//!
//! One qubit lives on every vertex. Edges carry the color absent from the
//! two faces they separate, so each face boundary alternates the two
//! colors different from the face's own.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::pauli::PauliOp;

/// Face/edge color of a 2-colex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Color {
    R,
    G,
    B,
}

pub const COLORS: [Color; 3] = [Color::R, Color::G, Color::B];

impl Color {
    pub fn index(self) -> usize {
        match self {
            Color::R => 0,
            Color::G => 1,
            Color::B => 2,
        }
    }

    pub fn from_index(i: usize) -> Color {
        COLORS[i % 3]
    }

    /// The two colors different from `self`, in cyclic order R->G->B->R.
    pub fn others(self) -> (Color, Color) {
        let i = self.index();
        (Color::from_index(i + 1), Color::from_index(i + 2))
    }

    /// The color distinct from both arguments (they must differ).
    pub fn third(a: Color, b: Color) -> Color {
        assert_ne!(a, b);
        Color::from_index(3 - a.index() - b.index() + 3)
    }

    pub fn parse(s: &str) -> Option<Color> {
        match s {
            "r" | "R" => Some(Color::R),
            "g" | "G" => Some(Color::G),
            "b" | "B" => Some(Color::B),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Color::R => "r",
            Color::G => "g",
            Color::B => "b",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct ColexEdge {
    pub u: usize,
    pub v: usize,
    pub color: Color,
}

#[derive(Clone, Debug)]
pub struct ColexFace {
    pub color: Color,
    /// Boundary vertices in cyclic order.
    pub cycle: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColexError {
    #[error("lattice size {0} is invalid: {1}")]
    BadSize(usize, &'static str),
    #[error("vertex {0} has degree {1}, expected 3")]
    VertexDegree(usize, usize),
    #[error("vertex {0} has two incident edges of color {1}")]
    DuplicateEdgeColor(usize, Color),
    #[error("edge ({0},{1}) is a self-loop or parallel edge")]
    ParallelEdge(usize, usize),
    #[error("face {0} has odd boundary length {1}")]
    OddFace(usize, usize),
    #[error("face {0}: boundary pair ({1},{2}) is not an edge")]
    MissingBoundaryEdge(usize, usize, usize),
    #[error("face {0} of color {1} has a boundary edge of color {1}")]
    FaceEdgeColorClash(usize, Color),
    #[error("face {0}: boundary edge colors do not alternate")]
    NonAlternatingFace(usize),
    #[error("edge ({0},{1}) lies on {2} face boundaries, expected 2")]
    EdgeFaceCount(usize, usize, usize),
    #[error("edge ({0},{1}) separates two faces of the same color")]
    AdjacentFacesSameColor(usize, usize),
    #[error("edge ({0},{1}) color {2} differs from the color absent on its faces")]
    WrongEdgeColor(usize, usize, Color),
    #[error("Euler characteristic V-E+F = {0}, expected 0 on the torus")]
    EulerCharacteristic(i64),
}

/// A validated 2-colex on the torus.
#[derive(Clone, Debug)]
pub struct Colex {
    n_vertices: usize,
    edges: Vec<ColexEdge>,
    faces: Vec<ColexFace>,
    // derived tables
    vertex_edges: Vec<[usize; 3]>,
    edge_by_pair: HashMap<(usize, usize), usize>,
    edge_faces: Vec<[usize; 2]>,
    vertex_face_of_color: Vec<[usize; 3]>, // [vertex][color index] -> face id
}

impl Colex {
    /// Assemble a colex from raw data and check every invariant.
    pub fn new(
        n_vertices: usize,
        edges: Vec<ColexEdge>,
        faces: Vec<ColexFace>,
    ) -> Result<Self, ColexError> {
        validate_raw(n_vertices, &edges, &faces)?;

        let mut edge_by_pair = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            edge_by_pair.insert(key(e.u, e.v), i);
        }

        let mut vertex_edges_acc: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
        for (i, e) in edges.iter().enumerate() {
            vertex_edges_acc[e.u].push(i);
            vertex_edges_acc[e.v].push(i);
        }
        let vertex_edges: Vec<[usize; 3]> = vertex_edges_acc
            .into_iter()
            .map(|v| [v[0], v[1], v[2]])
            .collect();

        let mut edge_faces_acc: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
        for (fi, f) in faces.iter().enumerate() {
            let k = f.cycle.len();
            for i in 0..k {
                let e = edge_by_pair[&key(f.cycle[i], f.cycle[(i + 1) % k])];
                edge_faces_acc[e].push(fi);
            }
        }
        let edge_faces: Vec<[usize; 2]> = edge_faces_acc.into_iter().map(|v| [v[0], v[1]]).collect();

        let mut vertex_face_of_color = vec![[usize::MAX; 3]; n_vertices];
        for (fi, f) in faces.iter().enumerate() {
            for &v in &f.cycle {
                vertex_face_of_color[v][f.color.index()] = fi;
            }
        }

        Ok(Colex {
            n_vertices,
            edges,
            faces,
            vertex_edges,
            edge_by_pair,
            edge_faces,
            vertex_face_of_color,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[ColexEdge] {
        &self.edges
    }

    pub fn faces(&self) -> &[ColexFace] {
        &self.faces
    }

    pub fn genus(&self) -> usize {
        1
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_by_pair.get(&key(u, v)).copied()
    }

    /// The three edges incident on `v`.
    pub fn vertex_edges(&self, v: usize) -> [usize; 3] {
        self.vertex_edges[v]
    }

    /// The two faces separated by edge `e`.
    pub fn edge_faces(&self, e: usize) -> [usize; 2] {
        self.edge_faces[e]
    }

    /// The unique `color`-colored face containing vertex `v`.
    pub fn face_at_vertex(&self, v: usize, color: Color) -> usize {
        self.vertex_face_of_color[v][color.index()]
    }

    /// The unique `color`-colored edge incident on `v`.
    pub fn edge_at_vertex(&self, v: usize, color: Color) -> usize {
        *self.vertex_edges[v]
            .iter()
            .find(|&&e| self.edges[e].color == color)
            .unwrap()
    }

    pub fn faces_of_color(&self, color: Color) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&f| self.faces[f].color == color)
            .collect()
    }

    pub fn edges_of_color(&self, color: Color) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].color == color)
            .collect()
    }

    /// X-type face stabilizer `B_f^X`.
    pub fn face_x_stabilizer(&self, f: usize) -> PauliOp {
        PauliOp::from_supports(self.n_vertices, &self.faces[f].cycle, &[])
    }

    /// Z-type face stabilizer `B_f^Z`.
    pub fn face_z_stabilizer(&self, f: usize) -> PauliOp {
        PauliOp::from_supports(self.n_vertices, &[], &self.faces[f].cycle)
    }

    /// All stabilizer generators (X and Z per face).
    pub fn stabilizer_generators(&self) -> Vec<PauliOp> {
        let mut gens = Vec::with_capacity(2 * self.faces.len());
        for f in 0..self.faces.len() {
            gens.push(self.face_x_stabilizer(f));
            gens.push(self.face_z_stabilizer(f));
        }
        gens
    }

    /// Re-run the full invariant check (for lattices read from files).
    pub fn validate(&self) -> Result<(), ColexError> {
        validate_raw(self.n_vertices, &self.edges, &self.faces)
    }

    /// Default contraction color: the color of the smallest faces,
    /// ties broken in R < G < B order.
    pub fn default_contract_color(&self) -> Color {
        let mut best = (usize::MAX, Color::R);
        for c in COLORS {
            if let Some(min_size) = self
                .faces
                .iter()
                .filter(|f| f.color == c)
                .map(|f| f.cycle.len())
                .min()
            {
                if min_size < best.0 {
                    best = (min_size, c);
                }
            }
        }
        best.1
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn validate_raw(
    n_vertices: usize,
    edges: &[ColexEdge],
    faces: &[ColexFace],
) -> Result<(), ColexError> {
    // no self-loops or parallel edges
    let mut seen = HashMap::new();
    for e in edges {
        if e.u == e.v || seen.insert(key(e.u, e.v), e.color).is_some() {
            return Err(ColexError::ParallelEdge(e.u, e.v));
        }
    }

    // trivalence with three distinct edge colors per vertex
    let mut incident: Vec<Vec<Color>> = vec![Vec::new(); n_vertices];
    for e in edges {
        incident[e.u].push(e.color);
        incident[e.v].push(e.color);
    }
    for (v, colors) in incident.iter().enumerate() {
        if colors.len() != 3 {
            return Err(ColexError::VertexDegree(v, colors.len()));
        }
        for c in COLORS {
            if colors.iter().filter(|&&x| x == c).count() > 1 {
                return Err(ColexError::DuplicateEdgeColor(v, c));
            }
        }
    }

    // face boundaries: closed, alternate the two non-face colors
    let mut edge_face_colors: HashMap<(usize, usize), Vec<Color>> = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        let k = f.cycle.len();
        if k % 2 != 0 {
            return Err(ColexError::OddFace(fi, k));
        }
        let mut boundary_colors = Vec::with_capacity(k);
        for i in 0..k {
            let (a, b) = (f.cycle[i], f.cycle[(i + 1) % k]);
            let e = seen
                .get(&key(a, b))
                .ok_or(ColexError::MissingBoundaryEdge(fi, a, b))?;
            if *e == f.color {
                return Err(ColexError::FaceEdgeColorClash(fi, f.color));
            }
            boundary_colors.push(*e);
            edge_face_colors.entry(key(a, b)).or_default().push(f.color);
        }
        for i in 0..k {
            if boundary_colors[i] == boundary_colors[(i + 1) % k] {
                return Err(ColexError::NonAlternatingFace(fi));
            }
        }
    }

    // each edge separates exactly two faces of distinct colors; the edge
    // carries the color absent from both
    for e in edges {
        let fcolors = edge_face_colors
            .get(&key(e.u, e.v))
            .map(Vec::as_slice)
            .unwrap_or(&[]);
        if fcolors.len() != 2 {
            return Err(ColexError::EdgeFaceCount(e.u, e.v, fcolors.len()));
        }
        if fcolors[0] == fcolors[1] {
            return Err(ColexError::AdjacentFacesSameColor(e.u, e.v));
        }
        if Color::third(fcolors[0], fcolors[1]) != e.color {
            return Err(ColexError::WrongEdgeColor(e.u, e.v, e.color));
        }
    }

    let chi = n_vertices as i64 - edges.len() as i64 + faces.len() as i64;
    if chi != 0 {
        return Err(ColexError::EulerCharacteristic(chi));
    }
    Ok(())
}

/// 4.8.8 lattice on an `L x L` torus of unit cells: one square (color R)
/// and one octagon per cell, octagons checkerboard-colored G/B.
///
/// `L` must be even and positive so the octagon two-coloring closes.
pub fn build_square_octagon(l: usize) -> Result<Colex, ColexError> {
    if l == 0 || l % 2 != 0 {
        return Err(ColexError::BadSize(l, "square-octagon size must be even and positive"));
    }
    // per cell (x, y): vertices N=0, E=1, S=2, W=3 of the small square
    let vid = |x: usize, y: usize, k: usize| ((y % l) * l + (x % l)) * 4 + k;
    let oct_color = |x: usize, y: usize| {
        if ((x % l) + (y % l)) % 2 == 0 {
            Color::G
        } else {
            Color::B
        }
    };
    let other_oct = |c: Color| if c == Color::G { Color::B } else { Color::G };

    let mut edges = Vec::new();
    let mut faces = Vec::new();
    for y in 0..l {
        for x in 0..l {
            let [n, e, s, w] = [vid(x, y, 0), vid(x, y, 1), vid(x, y, 2), vid(x, y, 3)];
            // square edges: colored by the octagon on the far side
            edges.push(ColexEdge { u: n, v: e, color: other_oct(oct_color(x, y)) });
            edges.push(ColexEdge { u: e, v: s, color: other_oct(oct_color(x, y + l - 1)) });
            edges.push(ColexEdge { u: s, v: w, color: other_oct(oct_color(x + l - 1, y + l - 1)) });
            edges.push(ColexEdge { u: w, v: n, color: other_oct(oct_color(x + l - 1, y)) });
            // linking edges between neighboring squares
            edges.push(ColexEdge { u: e, v: vid(x + 1, y, 3), color: Color::R });
            edges.push(ColexEdge { u: n, v: vid(x, y + 1, 2), color: Color::R });

            faces.push(ColexFace { color: Color::R, cycle: vec![n, e, s, w] });
            faces.push(ColexFace {
                color: oct_color(x, y),
                cycle: vec![
                    vid(x, y, 1),
                    vid(x, y, 0),
                    vid(x, y + 1, 2),
                    vid(x, y + 1, 1),
                    vid(x + 1, y + 1, 3),
                    vid(x + 1, y + 1, 2),
                    vid(x + 1, y, 0),
                    vid(x + 1, y, 3),
                ],
            });
        }
    }
    Colex::new(4 * l * l, edges, faces)
}

/// Honeycomb lattice on an `L x L` torus of hexagons, faces colored by
/// `(i - j) mod 3`; `L` must be a positive multiple of 3.
pub fn build_hexagonal(l: usize) -> Result<Colex, ColexError> {
    if l == 0 || l % 3 != 0 {
        return Err(ColexError::BadSize(l, "hexagonal size must be a positive multiple of 3"));
    }
    // two vertices per cell: s = 0 (lower), s = 1 (upper)
    let vid = |i: usize, j: usize, s: usize| ((j % l) * l + (i % l)) * 2 + s;
    let col = |t: usize| Color::from_index(t % 3);

    let mut edges = Vec::new();
    let mut faces = Vec::new();
    for j in 0..l {
        for i in 0..l {
            let d = i + 3 * l - j; // i - j, kept nonnegative
            edges.push(ColexEdge { u: vid(i, j, 0), v: vid(i, j, 1), color: col(d + 2) });
            edges.push(ColexEdge { u: vid(i, j, 1), v: vid(i + 1, j, 0), color: col(d + 1) });
            edges.push(ColexEdge { u: vid(i, j, 1), v: vid(i, j + 1, 0), color: col(d) });
            faces.push(ColexFace {
                color: col(d),
                cycle: vec![
                    vid(i, j, 0),
                    vid(i, j, 1),
                    vid(i + 1, j, 0),
                    vid(i + 1, j + l - 1, 1),
                    vid(i + 1, j + l - 1, 0),
                    vid(i, j + l - 1, 1),
                ],
            });
        }
    }
    Colex::new(2 * l * l, edges, faces)
}

/// The canonical boundary labeling of one contracted-color face:
/// vertices `v_1 .. v_{2l}` stored zero-based, with `(v_{2i-1}, v_{2i})`
/// the `c`-colored edges and `(v_{2i}, v_{2i+1})` the `c'`-colored ones.
#[derive(Clone, Debug)]
pub struct FaceLabel {
    /// Face id in the colex (a c''-face).
    pub face: usize,
    /// `verts[k]` is `v_{k+1}` of the one-based boundary labeling.
    pub verts: Vec<usize>,
    /// The gauge choice `m_f` in `1..=half_len`.
    pub m: usize,
}

impl FaceLabel {
    pub fn half_len(&self) -> usize {
        self.verts.len() / 2
    }
}

/// The full labeling over all c''-faces plus lookup tables.
#[derive(Clone)]
pub struct FaceLabeling {
    pub contract_color: Color,
    pub cprime: Color,
    pub cdoubleprime: Color,
    pub labels: Vec<FaceLabel>,
    /// Per colex vertex: (label index, zero-based position in `verts`).
    pub vertex_slot: Vec<(usize, usize)>,
    /// Per label: colex edge id of the dependent-X edge `(v_{2m}, v_{2m+1})`.
    pub dx_edges: Vec<usize>,
    /// Per label: colex edge id of the dependent-Z edge `(v_{2l}, v_1)`.
    pub dz_edges: Vec<usize>,
    /// Per colex edge: owning label index if the edge is `c'`-colored.
    pub cprime_edge_owner: Vec<Option<usize>>,
}

/// Canonical labeling with the default gauge `m_f = floor(l_f / 2)`.
pub fn label_faces(colex: &Colex, c: Color) -> FaceLabeling {
    label_faces_with(colex, c, |_, half_len| (half_len / 2).max(1))
}

/// Canonical labeling with a caller-chosen `m_f` per face.
///
/// For each c''-face the boundary is rotated to start at the vertex with
/// the smallest global index whose next boundary edge is `c`-colored, so
/// the labeling is deterministic for a given stored face orientation.
pub fn label_faces_with(
    colex: &Colex,
    c: Color,
    m_rule: impl Fn(usize, usize) -> usize,
) -> FaceLabeling {
    let (cprime, cdoubleprime) = c.others();
    let mut labels = Vec::new();
    let mut vertex_slot = vec![(usize::MAX, usize::MAX); colex.n_vertices()];
    let mut dx_edges = Vec::new();
    let mut dz_edges = Vec::new();
    let mut cprime_edge_owner = vec![None; colex.edges().len()];

    for face in colex.faces_of_color(cdoubleprime) {
        let cycle = &colex.faces()[face].cycle;
        let k = cycle.len();
        let start = (0..k)
            .filter(|&i| {
                let e = colex.edge_index(cycle[i], cycle[(i + 1) % k]).unwrap();
                colex.edges()[e].color == c
            })
            .min_by_key(|&i| cycle[i])
            .expect("c''-face boundary must contain c-colored edges");
        let verts: Vec<usize> = (0..k).map(|i| cycle[(start + i) % k]).collect();

        let half_len = k / 2;
        let m = m_rule(face, half_len);
        assert!(
            (1..=half_len).contains(&m),
            "m_f = {m} outside 1..={half_len} for face {face}"
        );

        let idx = labels.len();
        for (pos, &v) in verts.iter().enumerate() {
            vertex_slot[v] = (idx, pos);
        }
        // dependent edges: (v_{2m}, v_{2m+1}) for X, (v_{2l}, v_1) for Z
        let dx = colex
            .edge_index(verts[2 * m - 1], verts[(2 * m) % k])
            .unwrap();
        let dz = colex.edge_index(verts[k - 1], verts[0]).unwrap();
        dx_edges.push(dx);
        dz_edges.push(dz);

        for i in 0..half_len {
            let e = colex
                .edge_index(verts[2 * i + 1], verts[(2 * i + 2) % k])
                .unwrap();
            cprime_edge_owner[e] = Some(idx);
        }

        labels.push(FaceLabel { face, verts, m });
    }

    FaceLabeling {
        contract_color: c,
        cprime,
        cdoubleprime,
        labels,
        vertex_slot,
        dx_edges,
        dz_edges,
        cprime_edge_owner,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::rank_gf2;

    #[test]
    fn square_octagon_counts_and_euler() {
        let colex = build_square_octagon(2).unwrap();
        // direct enumeration of cells
        assert_eq!(colex.n_vertices(), 16);
        assert_eq!(colex.edges().len(), 24);
        assert_eq!(colex.faces().len(), 8);
        let chi =
            colex.n_vertices() as i64 - colex.edges().len() as i64 + colex.faces().len() as i64;
        assert_eq!(chi, 0);
        assert!(colex.validate().is_ok());
    }

    #[test]
    fn square_octagon_rejects_bad_sizes() {
        assert!(matches!(build_square_octagon(0), Err(ColexError::BadSize(..))));
        assert!(matches!(build_square_octagon(3), Err(ColexError::BadSize(..))));
    }

    #[test]
    fn square_octagon_encodes_four_qubits() {
        let colex = build_square_octagon(2).unwrap();
        let n = colex.n_vertices();
        let rank = rank_gf2(&colex.stabilizer_generators());
        assert_eq!(rank, n - 4);
        // k via the CSS symplectic count 2n - 2 rank... reduced: k = n - rank
        assert_eq!(n - rank, 4);
    }

    #[test]
    fn square_octagon_trivalent_distinct_colors() {
        let colex = build_square_octagon(4).unwrap();
        for v in 0..colex.n_vertices() {
            let es = colex.vertex_edges(v);
            let mut colors: Vec<Color> = es.iter().map(|&e| colex.edges()[e].color).collect();
            colors.sort();
            colors.dedup();
            assert_eq!(colors.len(), 3);
        }
    }

    #[test]
    fn recolored_edge_reported() {
        let colex = build_square_octagon(2).unwrap();
        let mut edges = colex.edges().to_vec();
        let old = edges[0].color;
        edges[0].color = old.others().0;
        let err = Colex::new(colex.n_vertices(), edges, colex.faces().to_vec()).unwrap_err();
        assert!(matches!(
            err,
            ColexError::DuplicateEdgeColor(..) | ColexError::WrongEdgeColor(..)
        ));
    }

    #[test]
    fn parallel_edges_reported() {
        let colex = build_square_octagon(2).unwrap();
        let mut edges = colex.edges().to_vec();
        let dup = edges[0].clone();
        edges.push(dup);
        let err = Colex::new(colex.n_vertices(), edges, colex.faces().to_vec()).unwrap_err();
        assert!(matches!(err, ColexError::ParallelEdge(..)));
    }

    #[test]
    fn same_color_adjacent_faces_reported() {
        let colex = build_square_octagon(2).unwrap();
        // recolor one octagon to match its neighbors across linking edges
        let mut faces = colex.faces().to_vec();
        let oct = faces.iter().position(|f| f.color == Color::G).unwrap();
        faces[oct].color = Color::B;
        let err = Colex::new(colex.n_vertices(), colex.edges().to_vec(), faces).unwrap_err();
        assert!(matches!(
            err,
            ColexError::AdjacentFacesSameColor(..) | ColexError::FaceEdgeColorClash(..)
        ));
    }

    #[test]
    fn hexagonal_smallest_instance() {
        let colex = build_hexagonal(3).unwrap();
        assert_eq!(colex.n_vertices(), 18);
        assert_eq!(colex.edges().len(), 27);
        assert_eq!(colex.faces().len(), 9);
        for f in colex.faces() {
            assert_eq!(f.cycle.len(), 6);
        }
        let rank = rank_gf2(&colex.stabilizer_generators());
        assert_eq!(colex.n_vertices() - rank, 4);
        assert!(matches!(build_hexagonal(4), Err(ColexError::BadSize(..))));
    }

    #[test]
    fn labeling_covers_every_vertex_once() {
        for colex in [build_square_octagon(2).unwrap(), build_hexagonal(3).unwrap()] {
            for c in COLORS {
                let lab = label_faces(&colex, c);
                let mut seen = vec![false; colex.n_vertices()];
                let mut total = 0;
                for label in &lab.labels {
                    for &v in &label.verts {
                        assert!(!seen[v]);
                        seen[v] = true;
                    }
                    total += label.verts.len();
                }
                assert_eq!(total, colex.n_vertices());
                // pair structure: (v_{2i-1}, v_{2i}) is c-colored, the rest c'
                for label in &lab.labels {
                    let k = label.verts.len();
                    for i in 0..k / 2 {
                        let e = colex
                            .edge_index(label.verts[2 * i], label.verts[2 * i + 1])
                            .unwrap();
                        assert_eq!(colex.edges()[e].color, c);
                        let e2 = colex
                            .edge_index(label.verts[2 * i + 1], label.verts[(2 * i + 2) % k])
                            .unwrap();
                        assert_eq!(colex.edges()[e2].color, lab.cprime);
                    }
                }
            }
        }
    }

    #[test]
    fn default_gauge_is_two_on_octagons() {
        let colex = build_square_octagon(4).unwrap();
        let lab = label_faces(&colex, Color::R);
        assert!(!lab.labels.is_empty());
        for label in &lab.labels {
            assert_eq!(label.half_len(), 4);
            assert_eq!(label.m, 2);
        }
    }

    #[test]
    fn dependent_edges_positions() {
        let colex = build_square_octagon(2).unwrap();
        let lab = label_faces(&colex, Color::R);
        for (idx, label) in lab.labels.iter().enumerate() {
            // D_Z edge is (v_8, v_1); D_X edge is (v_4, v_5) for l=4, m=2
            let dz = colex.edge_index(label.verts[7], label.verts[0]).unwrap();
            let dx = colex.edge_index(label.verts[3], label.verts[4]).unwrap();
            assert_eq!(lab.dz_edges[idx], dz);
            assert_eq!(lab.dx_edges[idx], dx);
            assert_eq!(colex.edges()[dz].color, lab.cprime);
            assert_eq!(colex.edges()[dx].color, lab.cprime);
        }
        // exactly one D_X and one D_Z edge per c''-face
        assert_eq!(lab.dx_edges.len(), lab.labels.len());
        assert_eq!(lab.dz_edges.len(), lab.labels.len());
    }

    #[test]
    fn edge_color_census() {
        for l in [2usize, 4, 6, 8] {
            let colex = build_square_octagon(l).unwrap();
            let n = colex.n_vertices();
            for c in COLORS {
                assert_eq!(colex.edges_of_color(c).len(), n / 2);
            }
            assert_eq!(2 * colex.edges().len(), 3 * n);
        }
    }

    /// The 4l elementary hopping operators along one face boundary span
    /// a rank-(4l-2) space: one ZZ and one XX combination reproduce the
    /// face stabilizers of the other type.
    #[test]
    fn octagon_hopping_operators_have_rank_fourteen() {
        let colex = build_square_octagon(2).unwrap();
        let n = colex.n_vertices();
        let oct = colex.faces_of_color(Color::G)[0];
        let cycle = &colex.faces()[oct].cycle;
        let mut hoppers = Vec::new();
        for i in 0..cycle.len() {
            let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            hoppers.push(PauliOp::from_supports(n, &[], &[u, v]));
            hoppers.push(PauliOp::from_supports(n, &[u, v], &[]));
        }
        assert_eq!(hoppers.len(), 16);
        assert_eq!(rank_gf2(&hoppers), 14);
    }

    #[test]
    fn default_contract_color_picks_smallest_faces() {
        let colex = build_square_octagon(2).unwrap();
        assert_eq!(colex.default_contract_color(), Color::R);
        let hex = build_hexagonal(3).unwrap();
        assert_eq!(hex.default_contract_color(), Color::R);
    }
}
