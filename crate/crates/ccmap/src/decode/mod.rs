//! Decoders for the mapped surface codes and the color-code pipelines
//! built on them: exact minimum-weight perfect matching for independent
//! Pauli noise, spanning-forest peeling for erasures, and logical
//! failure classification through homology-cycle representatives.

pub mod matching;

use std::collections::VecDeque;

use thiserror::Error;

use crate::codemap::{build_map, doubled_index, CodeMap};
use crate::colex::{label_faces, Colex, Color, FaceLabeling};
use crate::contraction::{contract, SurfaceGraph};
use crate::noise::InducedModel;
use crate::pauli::{BitVec, Gf2Basis, PauliOp};
use crate::syndrome::{measure, project, ColorSyndrome, ProjectionTables, SurfaceSyndrome};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("odd defect count {0}; the torus forces even parity")]
    OddDefects(usize),
    #[error("defect at node {0} outside the erased region")]
    DefectOutsideErasure(usize),
    #[error("erased component rooted at node {0} has odd defect parity")]
    OddErasureParity(usize),
    #[error("residual syndrome nonzero after correction")]
    ResidualSyndrome,
}

/// Incidence view used by the matching and peeling decoders: the primal
/// view matches vertex defects (Z errors), the dual view matches
/// plaquette defects (X errors). Edge ids are surface qubit ids in both.
#[derive(Clone)]
pub struct DecodingGraph {
    pub n_nodes: usize,
    /// Per surface qubit: the two nodes it connects (equal for edges
    /// that cannot move a defect in this view).
    pub edge_nodes: Vec<(usize, usize)>,
    /// Per node: (neighbor, edge id), in edge-id order.
    pub adjacency: Vec<Vec<(usize, usize)>>,
}

impl DecodingGraph {
    pub fn primal(g: &SurfaceGraph) -> Self {
        let edge_nodes = g.edges.iter().map(|e| (e.u, e.v)).collect();
        Self::from_edge_nodes(g.n_vertices, edge_nodes)
    }

    pub fn dual(g: &SurfaceGraph) -> Self {
        let mut slots: Vec<Vec<usize>> = vec![Vec::new(); g.n_qubits()];
        for (f, boundary) in g.faces.iter().enumerate() {
            for &e in boundary {
                slots[e].push(f);
            }
        }
        let edge_nodes = slots
            .into_iter()
            .map(|s| {
                assert_eq!(s.len(), 2, "every edge must lie on two face slots");
                (s[0], s[1])
            })
            .collect();
        Self::from_edge_nodes(g.faces.len(), edge_nodes)
    }

    fn from_edge_nodes(n_nodes: usize, edge_nodes: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); n_nodes];
        for (e, &(u, v)) in edge_nodes.iter().enumerate() {
            if u != v {
                adjacency[u].push((v, e));
                adjacency[v].push((u, e));
            }
        }
        DecodingGraph {
            n_nodes,
            edge_nodes,
            adjacency,
        }
    }
}

const UNREACHED: i64 = i64::MAX / 4;

/// All-pairs shortest paths with predecessor links for path recovery.
/// Ties resolve to the lowest-index route, so corrections are
/// reproducible across runs.
#[derive(Clone)]
pub struct PathTables {
    pub dist: Vec<Vec<i64>>,
    prev: Vec<Vec<Option<(usize, usize)>>>, // [source][node] = (prior node, edge)
}

impl PathTables {
    pub fn unweighted(g: &DecodingGraph) -> Self {
        Self::weighted(g, &vec![1; g.edge_nodes.len()])
    }

    pub fn weighted(g: &DecodingGraph, edge_weight: &[i64]) -> Self {
        let n = g.n_nodes;
        let mut dist = vec![vec![UNREACHED; n]; n];
        let mut prev = vec![vec![None; n]; n];
        for s in 0..n {
            let d = &mut dist[s];
            let p = &mut prev[s];
            d[s] = 0;
            let mut heap = std::collections::BinaryHeap::new();
            heap.push(std::cmp::Reverse((0i64, s)));
            while let Some(std::cmp::Reverse((du, u))) = heap.pop() {
                if du > d[u] {
                    continue;
                }
                for &(v, e) in &g.adjacency[u] {
                    let nd = du + edge_weight[e];
                    if nd < d[v] {
                        d[v] = nd;
                        p[v] = Some((u, e));
                        heap.push(std::cmp::Reverse((nd, v)));
                    }
                }
            }
        }
        PathTables { dist, prev }
    }

    /// Edge ids along the stored shortest path from `s` to `t`.
    pub fn path_edges(&self, s: usize, t: usize) -> Vec<usize> {
        let mut edges = Vec::new();
        let mut cur = t;
        while cur != s {
            let (node, e) = self.prev[s][cur].expect("path must exist");
            edges.push(e);
            cur = node;
        }
        edges
    }
}

/// Complete graph over the current defects; distances come from the
/// precomputed path tables.
pub struct DefectGraph<'a> {
    pub nodes: Vec<usize>,
    tables: &'a PathTables,
}

impl<'a> DefectGraph<'a> {
    pub fn new(nodes: Vec<usize>, tables: &'a PathTables) -> Self {
        DefectGraph { nodes, tables }
    }

    pub fn distance(&self, a: usize, b: usize) -> i64 {
        self.tables.dist[self.nodes[a]][self.nodes[b]]
    }
}

/// Exact minimum-weight perfect matching of the defects; the returned
/// correction is the XOR of the shortest paths between matched pairs.
pub fn mwpm_decode(
    tables: &PathTables,
    n_edges: usize,
    defects: &[usize],
) -> Result<Vec<usize>, DecodeError> {
    if defects.len() % 2 != 0 {
        return Err(DecodeError::OddDefects(defects.len()));
    }
    if defects.is_empty() {
        return Ok(Vec::new());
    }
    let graph = DefectGraph::new(defects.to_vec(), tables);
    let pairs = matching::min_weight_perfect_matching(defects.len(), |a, b| graph.distance(a, b));
    let mut flips = vec![false; n_edges];
    for (a, b) in pairs {
        for e in tables.path_edges(defects[a], defects[b]) {
            flips[e] ^= true;
        }
    }
    Ok((0..n_edges).filter(|&e| flips[e]).collect())
}

/// Peeling decoder: build a spanning forest of the erased subgraph and
/// peel it leaf-first; a leaf edge enters the correction iff its pendant
/// node is a defect.
pub fn peel_decode(
    g: &DecodingGraph,
    erased: &[bool],
    defects: &[bool],
) -> Result<Vec<usize>, DecodeError> {
    let n = g.n_nodes;
    let mut touched = vec![false; n];
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    // spanning forest in edge-id order
    let mut forest_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut degree = vec![0usize; n];
    for (e, &(u, v)) in g.edge_nodes.iter().enumerate() {
        if !erased[e] {
            continue;
        }
        touched[u] = true;
        touched[v] = true;
        if u == v {
            continue;
        }
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            forest_adj[u].push((v, e));
            forest_adj[v].push((u, e));
            degree[u] += 1;
            degree[v] += 1;
        }
    }

    let mut defect = defects.to_vec();
    for v in 0..n {
        if defect[v] && !touched[v] {
            return Err(DecodeError::DefectOutsideErasure(v));
        }
    }

    let mut removed = vec![false; g.edge_nodes.len()];
    let mut correction = Vec::new();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    while let Some(u) = queue.pop_front() {
        if degree[u] != 1 {
            continue;
        }
        let &(v, e) = forest_adj[u]
            .iter()
            .find(|&&(_, e)| !removed[e])
            .expect("leaf must have one live edge");
        removed[e] = true;
        degree[u] -= 1;
        degree[v] -= 1;
        if defect[u] {
            correction.push(e);
            defect[u] = false;
            defect[v] ^= true;
        }
        if degree[v] == 1 {
            queue.push_back(v);
        }
    }
    if let Some(v) = (0..n).find(|&v| defect[v]) {
        return Err(DecodeError::OddErasureParity(v));
    }
    correction.sort_unstable();
    Ok(correction)
}

/// Which erasure-support rule maps color-code erasures onto the four
/// decoding instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErasureMapMode {
    /// Instance-specific supports (X images drive the bit-flip
    /// instances, Z images the phase-flip instances).
    Improved,
    /// Union of both image supports on every instance.
    Naive,
}

/// An erasure on the color code together with its image on the four
/// decoding instances (per copy: the primal instance catching Z errors
/// and the dual instance catching X errors).
#[derive(Clone, Debug)]
pub struct ErasurePattern {
    pub erased: Vec<usize>,
    pub mode: ErasureMapMode,
    /// Erased surface qubits of the copy-i primal (Z) instance.
    pub vertex_instances: [Vec<bool>; 2],
    /// Erased surface qubits of the copy-i dual (X) instance.
    pub plaquette_instances: [Vec<bool>; 2],
}

/// Everything precomputed once per lattice for repeated decoding.
pub struct DecoderContext {
    pub colex: Colex,
    pub labeling: FaceLabeling,
    pub surface: SurfaceGraph,
    pub map: CodeMap,
    pub projector: ProjectionTables,
    pub primal: DecodingGraph,
    pub dual: DecodingGraph,
    vertex_paths: [PathTables; 2],
    plaquette_paths: [PathTables; 2],
    /// Two primal and two dual homology representatives per copy,
    /// i.e. eight logical operators on the doubled system.
    pub logicals: Vec<PauliOp>,
}

impl DecoderContext {
    /// Uniform (hop-count) matching weights.
    pub fn new(colex: Colex, c: Color) -> Self {
        Self::build(colex, c, None)
    }

    /// Per-qubit matching weights `-log(r / (1 - r))` from the induced
    /// marginals.
    pub fn with_weights(colex: Colex, c: Color, model: &InducedModel) -> Self {
        Self::build(colex, c, Some(model))
    }

    fn build(colex: Colex, c: Color, model: Option<&InducedModel>) -> Self {
        let surface = contract(&colex, c).expect("colex must be valid");
        let labeling = label_faces(&colex, c);
        let map = build_map(&colex, &surface, &labeling).expect("consistent construction");
        let projector = ProjectionTables::new(&colex, &surface, &labeling);
        let primal = DecodingGraph::primal(&surface);
        let dual = DecodingGraph::dual(&surface);

        let rate_weights = |rates: &[f64]| -> Vec<i64> {
            rates
                .iter()
                .map(|&r| {
                    if r <= 0.0 {
                        UNREACHED / (surface.n_qubits() as i64 + 1)
                    } else if r >= 0.5 {
                        0
                    } else {
                        (-(r / (1.0 - r)).ln() * 1000.0).round() as i64
                    }
                })
                .collect()
        };
        let (vertex_paths, plaquette_paths) = match model {
            None => {
                let vp = PathTables::unweighted(&primal);
                let pp = PathTables::unweighted(&dual);
                ([vp.clone(), vp], [pp.clone(), pp])
            }
            Some(m) => (
                [
                    PathTables::weighted(&primal, &rate_weights(&m.z_rate[0])),
                    PathTables::weighted(&primal, &rate_weights(&m.z_rate[1])),
                ],
                [
                    PathTables::weighted(&dual, &rate_weights(&m.x_rate[0])),
                    PathTables::weighted(&dual, &rate_weights(&m.x_rate[1])),
                ],
            ),
        };

        let logicals = build_logicals(&surface, &primal, &dual);

        DecoderContext {
            colex,
            labeling,
            surface,
            map,
            projector,
            primal,
            dual,
            vertex_paths,
            plaquette_paths,
            logicals,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.colex.n_vertices()
    }

    pub fn vertex_paths(&self, copy: usize) -> &PathTables {
        &self.vertex_paths[copy]
    }

    pub fn plaquette_paths(&self, copy: usize) -> &PathTables {
        &self.plaquette_paths[copy]
    }

    /// Decode the four matching instances and lift the correction.
    pub fn decode_color(&self, s: &ColorSyndrome) -> Result<PauliOp, DecodeError> {
        let proj = project(s, &self.projector);
        self.decode_projected(&proj)
    }

    pub fn decode_projected(&self, proj: &SurfaceSyndrome) -> Result<PauliOp, DecodeError> {
        let n_edges = self.surface.n_qubits();
        let mut corr = PauliOp::identity(self.map.n_doubled());
        for copy in 0..2 {
            let defects: Vec<usize> = (0..self.primal.n_nodes)
                .filter(|&v| proj.vertex[copy][v])
                .collect();
            for e in mwpm_decode(&self.vertex_paths[copy], n_edges, &defects)? {
                corr.flip_z(doubled_index(copy, e));
            }
            let defects: Vec<usize> = (0..self.dual.n_nodes)
                .filter(|&f| proj.plaquette[copy][f])
                .collect();
            for e in mwpm_decode(&self.plaquette_paths[copy], n_edges, &defects)? {
                corr.flip_x(doubled_index(copy, e));
            }
        }
        Ok(self.map.apply_inverse(&corr))
    }

    /// Project a color-code erasure onto the four decoding instances:
    /// each instance erases the surface qubits that the images of the
    /// erased qubits can touch on it.
    pub fn map_erasure(&self, erased: &[usize], mode: ErasureMapMode) -> ErasurePattern {
        let n_edges = self.surface.n_qubits();
        let mut vert = [vec![false; n_edges], vec![false; n_edges]];
        let mut plaq = [vec![false; n_edges], vec![false; n_edges]];
        for &v in erased {
            let xi = self.map.x_image(v);
            let zi = self.map.z_image(v);
            for q in xi.x_support() {
                plaq[q % 2][q / 2] = true; // copy-1 X support
            }
            for q in xi.z_support() {
                vert[q % 2][q / 2] = true; // copy-2 Z support
            }
            for q in zi.z_support() {
                vert[q % 2][q / 2] = true; // copy-1 Z support
            }
            for q in zi.x_support() {
                plaq[q % 2][q / 2] = true; // copy-2 X support
            }
        }
        if mode == ErasureMapMode::Naive {
            // every instance of a copy sees the union of the supports
            for copy in 0..2 {
                for e in 0..n_edges {
                    let u = vert[copy][e] | plaq[copy][e];
                    vert[copy][e] = u;
                    plaq[copy][e] = u;
                }
            }
        }
        ErasurePattern {
            erased: erased.to_vec(),
            mode,
            vertex_instances: vert,
            plaquette_instances: plaq,
        }
    }

    /// Erasure decoding: map the erased positions onto each instance,
    /// peel, and lift.
    pub fn decode_erasure(
        &self,
        erased: &[usize],
        s: &ColorSyndrome,
        mode: ErasureMapMode,
    ) -> Result<PauliOp, DecodeError> {
        let proj = project(s, &self.projector);
        let pattern = self.map_erasure(erased, mode);
        let mut corr = PauliOp::identity(self.map.n_doubled());
        for copy in 0..2 {
            for e in peel_decode(
                &self.primal,
                &pattern.vertex_instances[copy],
                &proj.vertex[copy],
            )? {
                corr.flip_z(doubled_index(copy, e));
            }
            for e in peel_decode(
                &self.dual,
                &pattern.plaquette_instances[copy],
                &proj.plaquette[copy],
            )? {
                corr.flip_x(doubled_index(copy, e));
            }
        }
        Ok(self.map.apply_inverse(&corr))
    }

    /// Success iff the residual `E * E_hat` lies in the color-code
    /// stabilizer group, tested through the mapped logicals.
    pub fn classify(&self, error: &PauliOp, correction: &PauliOp) -> Result<bool, DecodeError> {
        let residual = error.product(correction);
        if !measure(&self.colex, &residual).is_trivial() {
            return Err(DecodeError::ResidualSyndrome);
        }
        let mapped = self.map.apply(&residual);
        Ok(self.logicals.iter().all(|l| l.commutes_with(&mapped)))
    }
}

/// Two independent non-contractible cycles of a graph view, as edge
/// sets: fundamental cycles of a spanning tree reduced against the face
/// space.
fn homology_representatives(
    g: &DecodingGraph,
    face_boundaries: &[Vec<usize>],
    n_edges: usize,
) -> Vec<Vec<usize>> {
    // BFS spanning forest with parent links
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.n_nodes];
    let mut seen = vec![false; g.n_nodes];
    let mut tree_edge = vec![false; n_edges];
    for root in 0..g.n_nodes {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(v, e) in &g.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, e));
                    tree_edge[e] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    let path_to_root = |mut v: usize| -> BitVec {
        let mut bits = BitVec::zeros(n_edges);
        while let Some((u, e)) = parent[v] {
            bits.flip(e);
            v = u;
        }
        bits
    };

    let mut basis = Gf2Basis::new();
    for boundary in face_boundaries {
        let mut bits = BitVec::zeros(n_edges);
        for &e in boundary {
            bits.flip(e);
        }
        basis.insert(bits);
    }

    let mut reps = Vec::new();
    for (e, &(u, v)) in g.edge_nodes.iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        let mut cycle = path_to_root(u);
        cycle.xor_assign(&path_to_root(v));
        cycle.flip(e);
        if basis.insert(cycle.clone()) {
            reps.push(cycle.ones().collect());
            if reps.len() == 2 {
                break;
            }
        }
    }
    assert_eq!(reps.len(), 2, "torus graphs carry two homology classes");
    reps
}

fn build_logicals(
    surface: &SurfaceGraph,
    primal: &DecodingGraph,
    dual: &DecodingGraph,
) -> Vec<PauliOp> {
    let n_edges = surface.n_qubits();
    let n_doubled = 2 * n_edges;
    let z_cycles = homology_representatives(primal, &surface.faces, n_edges);
    let dual_faces: Vec<Vec<usize>> = surface.vertex_star.clone();
    let x_cycles = homology_representatives(dual, &dual_faces, n_edges);

    let mut ops = Vec::with_capacity(8);
    for copy in 0..2 {
        for cycle in &z_cycles {
            let mut p = PauliOp::identity(n_doubled);
            for &e in cycle {
                p.flip_z(doubled_index(copy, e));
            }
            ops.push(p);
        }
        for cycle in &x_cycles {
            let mut p = PauliOp::identity(n_doubled);
            for &e in cycle {
                p.flip_x(doubled_index(copy, e));
            }
            ops.push(p);
        }
    }
    ops
}
