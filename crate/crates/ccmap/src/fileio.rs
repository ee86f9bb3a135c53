//! File formats: structured JSON for lattices, surface graphs and
//! decoder inputs, the plain-text circuit listing, and the CSV emitted
//! by simulation runs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuits::{CliffordCircuit, Gate};
use crate::colex::{Colex, ColexEdge, ColexError, ColexFace, Color};
use crate::contraction::SurfaceGraph;
use crate::sim::SimPoint;
use crate::syndrome::ColorSyndrome;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("unknown color {0:?}")]
    BadColor(String),
    #[error("invalid lattice: {0}")]
    BadLattice(#[from] ColexError),
    #[error("line {0}: unrecognized gate {1:?}")]
    BadGate(usize, String),
    #[error("face index {0} out of range")]
    BadFaceIndex(usize),
}

#[derive(Serialize, Deserialize)]
struct FaceFile {
    color: String,
    cycle: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct LatticeFile {
    vertices: usize,
    edges: Vec<(usize, usize, String)>,
    faces: Vec<FaceFile>,
}

pub fn lattice_to_json(colex: &Colex) -> String {
    let file = LatticeFile {
        vertices: colex.n_vertices(),
        edges: colex
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.color.to_string()))
            .collect(),
        faces: colex
            .faces()
            .iter()
            .map(|f| FaceFile {
                color: f.color.to_string(),
                cycle: f.cycle.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

pub fn lattice_from_json(text: &str) -> Result<Colex, FileError> {
    let file: LatticeFile = serde_json::from_str(text)?;
    let parse_color = |s: &str| Color::parse(s).ok_or_else(|| FileError::BadColor(s.to_string()));
    let edges = file
        .edges
        .iter()
        .map(|(u, v, c)| {
            Ok(ColexEdge {
                u: *u,
                v: *v,
                color: parse_color(c)?,
            })
        })
        .collect::<Result<Vec<_>, FileError>>()?;
    let faces = file
        .faces
        .iter()
        .map(|f| {
            Ok(ColexFace {
                color: parse_color(&f.color)?,
                cycle: f.cycle.clone(),
            })
        })
        .collect::<Result<Vec<_>, FileError>>()?;
    Ok(Colex::new(file.vertices, edges, faces)?)
}

#[derive(Serialize)]
struct SurfaceFile<'a> {
    contract_color: String,
    vertices: usize,
    edges: Vec<(usize, usize)>,
    faces: &'a [Vec<usize>],
    tau_face: &'a [(usize, usize)],
    tau_edge: Vec<(usize, usize)>,
    tau_vertex: &'a [usize],
    tau_f2f: Vec<(usize, usize)>,
}

/// Surface graph plus all correspondence tables back to the colex.
pub fn surface_to_json(g: &SurfaceGraph) -> String {
    let file = SurfaceFile {
        contract_color: g.contract_color.to_string(),
        vertices: g.n_vertices,
        edges: g.edges.iter().map(|e| (e.u, e.v)).collect(),
        faces: &g.faces,
        tau_face: &g.vertex_of_cface,
        tau_edge: g
            .cedge_of_edge
            .iter()
            .enumerate()
            .map(|(se, &ce)| (ce, se))
            .collect(),
        tau_vertex: &g.tau_vertex,
        tau_f2f: g
            .face_of_cface
            .iter()
            .enumerate()
            .filter_map(|(cf, sf)| sf.map(|sf| (cf, sf)))
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

/// Defect lists by colex face id.
#[derive(Serialize, Deserialize, Default)]
pub struct SyndromeFile {
    #[serde(default)]
    pub x: Vec<usize>,
    #[serde(default)]
    pub z: Vec<usize>,
}

pub fn syndrome_from_json(text: &str, n_faces: usize) -> Result<ColorSyndrome, FileError> {
    let file: SyndromeFile = serde_json::from_str(text)?;
    let mut s = ColorSyndrome {
        x: vec![false; n_faces],
        z: vec![false; n_faces],
    };
    for &f in &file.x {
        *s.x.get_mut(f).ok_or(FileError::BadFaceIndex(f))? = true;
    }
    for &f in &file.z {
        *s.z.get_mut(f).ok_or(FileError::BadFaceIndex(f))? = true;
    }
    Ok(s)
}

pub fn syndrome_to_json(s: &ColorSyndrome) -> String {
    let file = SyndromeFile {
        x: (0..s.x.len()).filter(|&f| s.x[f]).collect(),
        z: (0..s.z.len()).filter(|&f| s.z[f]).collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

#[derive(Serialize, Deserialize)]
pub struct ErasureFile {
    pub erased: Vec<usize>,
}

pub fn erasure_from_json(text: &str) -> Result<Vec<usize>, FileError> {
    let file: ErasureFile = serde_json::from_str(text)?;
    Ok(file.erased)
}

/// One gate per line after a `# qubits N` header.
pub fn circuit_to_text(c: &CliffordCircuit) -> String {
    let mut out = format!("# qubits {}\n", c.n_qubits);
    for g in &c.gates {
        match g {
            Gate::Cx { control, target } => out.push_str(&format!("CX {control} {target}\n")),
            Gate::H(q) => out.push_str(&format!("H {q}\n")),
            Gate::Swap(a, b) => out.push_str(&format!("SWAP {a} {b}\n")),
        }
    }
    out
}

pub fn circuit_from_text(text: &str) -> Result<CliffordCircuit, FileError> {
    let mut n_qubits = 0;
    let mut gates = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || FileError::BadGate(lineno + 1, line.to_string());
        match fields.as_slice() {
            ["#", "qubits", n] => n_qubits = n.parse().map_err(|_| bad())?,
            ["CX", c, t] => gates.push(Gate::Cx {
                control: c.parse().map_err(|_| bad())?,
                target: t.parse().map_err(|_| bad())?,
            }),
            ["H", q] => gates.push(Gate::H(q.parse().map_err(|_| bad())?)),
            ["SWAP", a, b] => gates.push(Gate::Swap(
                a.parse().map_err(|_| bad())?,
                b.parse().map_err(|_| bad())?,
            )),
            _ => return Err(bad()),
        }
    }
    let mut c = CliffordCircuit::new(n_qubits);
    for g in gates {
        c.push(g);
    }
    Ok(c)
}

pub const CSV_HEADER: &str =
    "family,L,channel,rate,trials,failures,rate_logical,ci_lo,ci_hi,seed";

pub fn points_to_csv(points: &[SimPoint]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            p.family.name(),
            p.size,
            p.channel.name(),
            p.rate,
            p.trials,
            p.failures,
            p.failure_rate,
            p.ci_lo,
            p.ci_hi,
            p.seed
        ));
    }
    out
}

/// Gnuplot-ready blocks: one indexed block per lattice size.
pub fn points_to_gnuplot(points: &[SimPoint]) -> String {
    let mut sizes: Vec<usize> = points.iter().map(|p| p.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mut out = String::from("# rate failure_rate ci_lo ci_hi\n");
    for size in sizes {
        out.push_str(&format!("# L = {size}\n"));
        for p in points.iter().filter(|p| p.size == size) {
            out.push_str(&format!(
                "{} {} {} {}\n",
                p.rate, p.failure_rate, p.ci_lo, p.ci_hi
            ));
        }
        out.push_str("\n\n");
    }
    out
}
