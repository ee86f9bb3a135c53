//! The bijective local Pauli map between a color code and two copies of
//! its contracted surface code: per-generator images, the inverse map,
//! and the invariant checks exposed to the `map-check` command.
//!
//! Doubled-system indexing: surface edge `e` of copy 1 is qubit `2e`,
//! of copy 2 is qubit `2e + 1` (copy-1 qubits carry the odd labels in
//! one-based counting).

use thiserror::Error;

use crate::colex::{Colex, FaceLabeling};
use crate::contraction::SurfaceGraph;
use crate::pauli::{rank_gf2, PauliOp, StabilizerGroup};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeMapError {
    #[error("labeling contract color {0} does not match surface graph color {1}")]
    ColorMismatch(crate::colex::Color, crate::colex::Color),
    #[error("labeling covers {0} qubits, colex has {1}")]
    CoverageMismatch(usize, usize),
    #[error("map check failed: {0}")]
    CheckFailed(String),
}

/// Qubit index of surface edge `e` on copy `copy` (0 or 1) in the
/// doubled system.
#[inline]
pub fn doubled_index(copy: usize, edge: usize) -> usize {
    2 * edge + copy
}

/// Image of one single-qubit generator, as masks over the `l` surface
/// edges `e_1..e_l` of its own face (bit `j` is `e_{j+1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalImage {
    pub c1x: u32,
    pub c1z: u32,
    pub c2x: u32,
    pub c2z: u32,
}

fn bits(range: std::ops::Range<usize>) -> u32 {
    let mut m = 0;
    for b in range {
        m |= 1 << b;
    }
    m
}

/// Closed-form images for a face with `l` edge pairs and gauge `m`.
/// Returns `(x_images, z_images)` indexed by zero-based boundary position.
pub fn face_images(l: usize, m: usize) -> (Vec<LocalImage>, Vec<LocalImage>) {
    assert!((1..=l).contains(&m));
    let mut x_imgs = Vec::with_capacity(2 * l);
    let mut z_imgs = Vec::with_capacity(2 * l);
    for pos in 0..2 * l {
        let i = pos / 2 + 1; // one-based pair index
        let j = i - 1;
        let even = pos % 2 == 1; // true for v_{2i}, false for v_{2i-1}
        let (x, z) = if i <= m {
            (
                LocalImage {
                    c1x: 1 << j,
                    c1z: 0,
                    c2x: 0,
                    c2z: bits(0..if even { i } else { i - 1 }),
                },
                LocalImage {
                    c1x: 0,
                    c1z: bits(if even { i } else { i - 1 }..m),
                    c2x: 1 << j,
                    c2z: 0,
                },
            )
        } else {
            (
                LocalImage {
                    c1x: 1 << j,
                    c1z: 0,
                    c2x: 0,
                    c2z: bits(if even { i } else { i - 1 }..l),
                },
                LocalImage {
                    c1x: 0,
                    c1z: bits(m..if even { i } else { i - 1 }),
                    c2x: 1 << j,
                    c2z: 0,
                },
            )
        };
        x_imgs.push(x);
        z_imgs.push(z);
    }
    (x_imgs, z_imgs)
}

/// The map on generators plus the cached inverse, both precomputed so
/// that applying either direction is linear in the operator weight.
#[derive(Clone)]
pub struct CodeMap {
    n: usize,
    n_doubled: usize,
    x_images: Vec<PauliOp>,
    z_images: Vec<PauliOp>,
    inv_x: Vec<PauliOp>,
    inv_z: Vec<PauliOp>,
}

/// Build the map from a colex, its contraction, and a face labeling.
pub fn build_map(
    colex: &Colex,
    surface: &SurfaceGraph,
    labeling: &FaceLabeling,
) -> Result<CodeMap, CodeMapError> {
    if labeling.contract_color != surface.contract_color {
        return Err(CodeMapError::ColorMismatch(
            labeling.contract_color,
            surface.contract_color,
        ));
    }
    let covered: usize = labeling.labels.iter().map(|lb| lb.verts.len()).sum();
    if covered != colex.n_vertices() {
        return Err(CodeMapError::CoverageMismatch(covered, colex.n_vertices()));
    }

    let n = colex.n_vertices();
    let n_doubled = 2 * surface.n_qubits();
    let mut x_images = vec![PauliOp::identity(n_doubled); n];
    let mut z_images = vec![PauliOp::identity(n_doubled); n];
    let mut inv_x = vec![PauliOp::identity(n); n_doubled];
    let mut inv_z = vec![PauliOp::identity(n); n_doubled];

    for label in &labeling.labels {
        let l = label.half_len();
        let m = label.m;
        // surface edge of the pair (v_{2i-1}, v_{2i}), zero-based index j
        let edge: Vec<usize> = (0..l)
            .map(|j| surface.tau_vertex[label.verts[2 * j]])
            .collect();

        let (x_loc, z_loc) = face_images(l, m);
        for (pos, &v) in label.verts.iter().enumerate() {
            let mut xi = PauliOp::identity(n_doubled);
            let mut zi = PauliOp::identity(n_doubled);
            for j in 0..l {
                let q1 = doubled_index(0, edge[j]);
                let q2 = doubled_index(1, edge[j]);
                if x_loc[pos].c1x >> j & 1 == 1 {
                    xi.flip_x(q1);
                }
                if x_loc[pos].c2z >> j & 1 == 1 {
                    xi.flip_z(q2);
                }
                if z_loc[pos].c1z >> j & 1 == 1 {
                    zi.flip_z(q1);
                }
                if z_loc[pos].c2x >> j & 1 == 1 {
                    zi.flip_x(q2);
                }
            }
            x_images[v] = xi;
            z_images[v] = zi;
        }

        for j in 0..l {
            let i = j + 1;
            let q1 = doubled_index(0, edge[j]);
            let q2 = doubled_index(1, edge[j]);
            // Z on either copy pulls back to the elementary hopping pair
            inv_z[q1] = PauliOp::from_supports(
                n,
                &[],
                &[label.verts[2 * j], label.verts[2 * j + 1]],
            );
            inv_z[q2] = PauliOp::from_supports(
                n,
                &[label.verts[2 * j], label.verts[2 * j + 1]],
                &[],
            );
            // X pulls back to the chain fixed by the gauge choice
            let (x1_range, x2_range) = if i <= m {
                (0..=2 * j, (2 * j + 1)..=(2 * m - 1))
            } else {
                ((2 * j + 1)..=(2 * l - 1), (2 * m)..=(2 * j))
            };
            inv_x[q1] =
                PauliOp::from_supports(n, &label.verts[x1_range], &[]);
            inv_x[q2] =
                PauliOp::from_supports(n, &[], &label.verts[x2_range]);
        }
    }

    Ok(CodeMap {
        n,
        n_doubled,
        x_images,
        z_images,
        inv_x,
        inv_z,
    })
}

impl CodeMap {
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn n_doubled(&self) -> usize {
        self.n_doubled
    }

    pub fn x_image(&self, v: usize) -> &PauliOp {
        &self.x_images[v]
    }

    pub fn z_image(&self, v: usize) -> &PauliOp {
        &self.z_images[v]
    }

    pub fn inv_x_image(&self, q: usize) -> &PauliOp {
        &self.inv_x[q]
    }

    pub fn inv_z_image(&self, q: usize) -> &PauliOp {
        &self.inv_z[q]
    }

    /// Map a color-code Pauli onto the doubled surface system.
    pub fn apply(&self, e: &PauliOp) -> PauliOp {
        assert_eq!(e.n_qubits(), self.n);
        let mut out = PauliOp::identity(self.n_doubled);
        for v in e.x_part().ones() {
            out.mul_assign(&self.x_images[v]);
        }
        for v in e.z_part().ones() {
            out.mul_assign(&self.z_images[v]);
        }
        out
    }

    /// Lift a doubled-surface Pauli back to the color code.
    pub fn apply_inverse(&self, e: &PauliOp) -> PauliOp {
        assert_eq!(e.n_qubits(), self.n_doubled);
        let mut out = PauliOp::identity(self.n);
        for q in e.x_part().ones() {
            out.mul_assign(&self.inv_x[q]);
        }
        for q in e.z_part().ones() {
            out.mul_assign(&self.inv_z[q]);
        }
        out
    }

    /// All 2n generator images, X images first.
    pub fn all_images(&self) -> Vec<PauliOp> {
        self.x_images
            .iter()
            .chain(self.z_images.iter())
            .cloned()
            .collect()
    }
}

/// Stabilizer generators of the two surface-code copies on the doubled
/// system.
pub fn doubled_stabilizers(surface: &SurfaceGraph) -> Vec<PauliOp> {
    let n_doubled = 2 * surface.n_qubits();
    let mut gens = Vec::new();
    for copy in 0..2 {
        for v in 0..surface.n_vertices {
            let mut p = PauliOp::identity(n_doubled);
            for &e in &surface.vertex_star[v] {
                p.flip_x(doubled_index(copy, e));
            }
            gens.push(p);
        }
        for f in 0..surface.faces.len() {
            let mut p = PauliOp::identity(n_doubled);
            for &e in &surface.faces[f] {
                p.flip_z(doubled_index(copy, e));
            }
            gens.push(p);
        }
    }
    gens
}

/// The invariant suite behind `map-check`. Each entry is a named check.
pub fn check_map(
    colex: &Colex,
    surface: &SurfaceGraph,
    labeling: &FaceLabeling,
    map: &CodeMap,
) -> Vec<(&'static str, Result<(), String>)> {
    let mut results = Vec::new();
    let n = colex.n_vertices();

    results.push(("invertibility (rank of images = 2n)", {
        let rank = rank_gf2(&map.all_images());
        if rank == 2 * n {
            Ok(())
        } else {
            Err(format!("rank {rank} != {}", 2 * n))
        }
    }));

    results.push(("commutation preserved on all generator pairs", {
        let gens: Vec<PauliOp> = (0..n)
            .map(|v| PauliOp::x_on(n, v))
            .chain((0..n).map(|v| PauliOp::z_on(n, v)))
            .collect();
        let images: Vec<PauliOp> = gens.iter().map(|g| map.apply(g)).collect();
        let mut bad = None;
        'outer: for a in 0..gens.len() {
            for b in (a + 1)..gens.len() {
                if gens[a].commutes_with(&gens[b]) != images[a].commutes_with(&images[b]) {
                    bad = Some((a, b));
                    break 'outer;
                }
            }
        }
        match bad {
            None => Ok(()),
            Some((a, b)) => Err(format!("pair ({a},{b}) changes commutation")),
        }
    }));

    results.push(("CSS structure preserved", {
        let mut err = None;
        for v in 0..n {
            let xi = map.x_image(v);
            let zi = map.z_image(v);
            let x_ok = xi.x_support().iter().all(|q| q % 2 == 0)
                && xi.z_support().iter().all(|q| q % 2 == 1);
            let z_ok = zi.z_support().iter().all(|q| q % 2 == 0)
                && zi.x_support().iter().all(|q| q % 2 == 1);
            if !x_ok || !z_ok {
                err = Some(format!("vertex {v} image mixes copies"));
                break;
            }
        }
        err.map_or(Ok(()), Err)
    }));

    results.push(("stabilizer images lie in the doubled stabilizer group", {
        let group = StabilizerGroup::new(map.n_doubled(), doubled_stabilizers(surface))
            .expect("surface stabilizers must commute");
        let mut err = None;
        for f in 0..colex.faces().len() {
            for stab in [colex.face_x_stabilizer(f), colex.face_z_stabilizer(f)] {
                let image = map.apply(&stab);
                match group.in_group(&image) {
                    Ok(true) => {}
                    Ok(false) => {
                        err = Some(format!("face {f} image outside the group"));
                        break;
                    }
                    Err(e) => {
                        err = Some(format!("face {f} image not in centralizer: {e}"));
                        break;
                    }
                }
            }
            if err.is_some() {
                break;
            }
        }
        err.map_or(Ok(()), Err)
    }));

    results.push(("stabilizer images match the closed forms", {
        check_stabilizer_image_forms(colex, surface, labeling, map)
    }));

    results.push(("inverse composes to the identity", {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut err = None;
        for t in 0..200 {
            let mut p = PauliOp::identity(n);
            for q in 0..n {
                if next() % 4 == 0 {
                    p.flip_x(q);
                }
                if next() % 4 == 0 {
                    p.flip_z(q);
                }
            }
            let around = map.apply_inverse(&map.apply(&p));
            if around != p {
                err = Some(format!("round trip failed on sample {t}"));
                break;
            }
        }
        err.map_or(Ok(()), Err)
    }));

    results
}

/// Exact expected images of the face stabilizers:
/// non-contracted faces map to single plaquettes, contracted faces map to
/// a star times the plaquettes owning their dependent boundary edges.
pub fn check_stabilizer_image_forms(
    colex: &Colex,
    surface: &SurfaceGraph,
    labeling: &FaceLabeling,
    map: &CodeMap,
) -> Result<(), String> {
    let n_doubled = map.n_doubled();
    for (fi, face) in colex.faces().iter().enumerate() {
        let bx = map.apply(&colex.face_x_stabilizer(fi));
        let bz = map.apply(&colex.face_z_stabilizer(fi));
        if face.color != labeling.contract_color {
            let sf = surface.face_of_cface[fi].unwrap();
            let mut expect_z1 = PauliOp::identity(n_doubled);
            let mut expect_z2 = PauliOp::identity(n_doubled);
            for &e in &surface.faces[sf] {
                expect_z1.flip_z(doubled_index(0, e));
                expect_z2.flip_z(doubled_index(1, e));
            }
            if bz != expect_z1 {
                return Err(format!("face {fi}: B^Z image is not the copy-1 plaquette"));
            }
            if bx != expect_z2 {
                return Err(format!("face {fi}: B^X image is not the copy-2 plaquette"));
            }
        } else {
            let sv = surface
                .vertex_of_cface
                .iter()
                .find(|&&(f, _)| f == fi)
                .map(|&(_, v)| v)
                .unwrap();
            let star = |copy: usize| {
                let mut p = PauliOp::identity(n_doubled);
                for &e in &surface.vertex_star[sv] {
                    p.flip_x(doubled_index(copy, e));
                }
                p
            };
            let dep_plaquettes = |copy: usize, dep_edges: &[usize]| {
                let mut p = PauliOp::identity(n_doubled);
                let k = face.cycle.len();
                for i in 0..k {
                    let e = colex
                        .edge_index(face.cycle[i], face.cycle[(i + 1) % k])
                        .unwrap();
                    if let Some(owner) = labeling.cprime_edge_owner[e] {
                        if dep_edges[owner] == e {
                            let owner_face = labeling.labels[owner].face;
                            let sf = surface.face_of_cface[owner_face].unwrap();
                            for &se in &surface.faces[sf] {
                                p.flip_z(doubled_index(copy, se));
                            }
                        }
                    }
                }
                p
            };
            let expect_x = star(0).product(&dep_plaquettes(1, &labeling.dx_edges));
            let expect_z = star(1).product(&dep_plaquettes(0, &labeling.dz_edges));
            if bx != expect_x {
                return Err(format!("contracted face {fi}: B^X image form mismatch"));
            }
            if bz != expect_z {
                return Err(format!("contracted face {fi}: B^Z image form mismatch"));
            }
        }
    }
    Ok(())
}

/// Render the map of single-qubit errors of one face in flat local labels
/// (copy-1 edge `e_i` prints as `2i-1`, copy-2 as `2i`), Table-style.
pub fn local_image_rows(l: usize, m: usize) -> Vec<(String, String, String, String)> {
    let (x_imgs, z_imgs) = face_images(l, m);
    let fmt_img = |img: &LocalImage| {
        let mut parts = Vec::new();
        let mut xs: Vec<usize> = (0..l)
            .filter(|j| img.c1x >> j & 1 == 1)
            .map(|j| 2 * j + 1)
            .chain(
                (0..l)
                    .filter(|j| img.c2x >> j & 1 == 1)
                    .map(|j| 2 * j + 2),
            )
            .collect();
        xs.sort_unstable();
        for q in xs {
            parts.push(format!("X{q}"));
        }
        let mut zs: Vec<usize> = (0..l)
            .filter(|j| img.c1z >> j & 1 == 1)
            .map(|j| 2 * j + 1)
            .chain(
                (0..l)
                    .filter(|j| img.c2z >> j & 1 == 1)
                    .map(|j| 2 * j + 2),
            )
            .collect();
        zs.sort_unstable();
        for q in zs {
            parts.push(format!("Z{q}"));
        }
        parts.join(" ")
    };
    (0..2 * l)
        .map(|pos| {
            (
                format!("X_v{}", pos + 1),
                fmt_img(&x_imgs[pos]),
                format!("Z_v{}", pos + 1),
                fmt_img(&z_imgs[pos]),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::{build_hexagonal, build_square_octagon, label_faces, Color, COLORS};
    use crate::contraction::contract;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Recursive form of the per-face images, evaluated literally.
    fn recursive_images(l: usize, m: usize) -> (Vec<LocalImage>, Vec<LocalImage>) {
        let id = LocalImage { c1x: 0, c1z: 0, c2x: 0, c2z: 0 };
        let mut z = vec![id; 2 * l];
        let mut x = vec![id; 2 * l];
        let pos = |k1: usize| k1 - 1;

        // Z family, seeded at v_1 then alternating along the boundary
        z[pos(1)] = LocalImage { c1x: 0, c1z: bits(0..m), c2x: 1, c2z: 0 };
        for k1 in 2..=2 * l {
            let j = k1.div_ceil(2);
            if k1 % 2 == 0 {
                let mut img = z[pos(k1 - 1)];
                img.c1z ^= 1 << (j - 1);
                z[pos(k1)] = img;
            } else {
                let mut img = z[pos(k1 - 1)];
                img.c2x ^= (1 << (j - 2)) | (1 << (j - 1));
                z[pos(k1)] = img;
            }
        }

        // X family, built upward to 2m and downward from 2l
        x[pos(1)] = LocalImage { c1x: 1, c1z: 0, c2x: 0, c2z: 0 };
        for k1 in 2..=2 * m {
            let j = k1.div_ceil(2);
            if k1 % 2 == 0 {
                let mut img = x[pos(k1 - 1)];
                img.c2z ^= 1 << (j - 1);
                x[pos(k1)] = img;
            } else {
                let mut img = x[pos(k1 - 1)];
                img.c1x ^= (1 << (j - 2)) | (1 << (j - 1));
                x[pos(k1)] = img;
            }
        }
        if m < l {
            x[pos(2 * l)] = LocalImage { c1x: 1 << (l - 1), c1z: 0, c2x: 0, c2z: 0 };
            for k1 in (2 * m + 1..=2 * l - 1).rev() {
                let j = k1.div_ceil(2);
                if k1 % 2 == 1 {
                    let mut img = x[pos(k1 + 1)];
                    img.c2z ^= 1 << (j - 1);
                    x[pos(k1)] = img;
                } else {
                    let mut img = x[pos(k1 + 1)];
                    img.c1x ^= (1 << (j - 1)) | (1 << j);
                    x[pos(k1)] = img;
                }
            }
        }
        (x, z)
    }

    #[test]
    fn closed_form_equals_recursion() {
        for l in [3usize, 4, 6] {
            for m in 1..=l {
                let closed = face_images(l, m);
                let rec = recursive_images(l, m);
                assert_eq!(closed, rec, "l={l} m={m}");
            }
        }
    }

    #[test]
    fn single_qubit_error_table_for_octagons() {
        // the flat-label map of single-qubit errors on a 4.8.8 face, m = 2
        let rows = local_image_rows(4, 2);
        let expected_x = [
            "X1", "X1 Z2", "X3 Z2", "X3 Z2 Z4", "X5 Z6 Z8", "X5 Z8", "X7 Z8", "X7",
        ];
        let expected_z = [
            "X2 Z1 Z3", "X2 Z3", "X4 Z3", "X4", "X6", "X6 Z5", "X8 Z5", "X8 Z5 Z7",
        ];
        for (k, row) in rows.iter().enumerate() {
            assert_eq!(row.1, expected_x[k], "X_v{}", k + 1);
            assert_eq!(row.3, expected_z[k], "Z_v{}", k + 1);
        }
    }

    fn build_all(l_so: usize) -> (crate::colex::Colex, SurfaceGraph, crate::colex::FaceLabeling, CodeMap) {
        let colex = build_square_octagon(l_so).unwrap();
        let surface = contract(&colex, Color::R).unwrap();
        let labeling = label_faces(&colex, Color::R);
        let map = build_map(&colex, &surface, &labeling).unwrap();
        (colex, surface, labeling, map)
    }

    #[test]
    fn map_is_invertible_and_checks_pass() {
        let (colex, surface, labeling, map) = build_all(2);
        for (name, result) in check_map(&colex, &surface, &labeling, &map) {
            assert!(result.is_ok(), "{name}: {result:?}");
        }
        assert_eq!(rank_gf2(&map.all_images()), 2 * colex.n_vertices());
    }

    #[test]
    fn hexagonal_map_checks_pass() {
        let colex = build_hexagonal(3).unwrap();
        for c in COLORS {
            let surface = contract(&colex, c).unwrap();
            let labeling = label_faces(&colex, c);
            let map = build_map(&colex, &surface, &labeling).unwrap();
            for (name, result) in check_map(&colex, &surface, &labeling, &map) {
                assert!(result.is_ok(), "color {c}: {name}: {result:?}");
            }
        }
    }

    #[test]
    fn mismatched_labeling_is_rejected() {
        let colex = build_square_octagon(2).unwrap();
        let surface = contract(&colex, Color::R).unwrap();
        let labeling = label_faces(&colex, Color::G);
        assert!(matches!(
            build_map(&colex, &surface, &labeling),
            Err(CodeMapError::ColorMismatch(..))
        ));
    }

    #[test]
    fn identity_maps_to_identity() {
        let (colex, _, _, map) = build_all(2);
        let id = PauliOp::identity(colex.n_vertices());
        assert!(map.apply(&id).is_identity());
        assert!(map.apply_inverse(&PauliOp::identity(map.n_doubled())).is_identity());
    }

    #[test]
    fn hopping_operator_images_are_single_plaquette_qubits() {
        let (colex, surface, labeling, map) = build_all(2);
        for label in &labeling.labels {
            let l = label.half_len();
            for j in 0..l {
                let hop = PauliOp::from_supports(
                    colex.n_vertices(),
                    &[],
                    &[label.verts[2 * j], label.verts[2 * j + 1]],
                );
                let e = surface.tau_vertex[label.verts[2 * j]];
                let expect = PauliOp::z_on(map.n_doubled(), doubled_index(0, e));
                assert_eq!(map.apply(&hop), expect);
            }
        }
    }

    #[test]
    fn inverse_matches_stated_chains() {
        let (colex, surface, labeling, map) = build_all(2);
        let label = &labeling.labels[0];
        let e3 = surface.tau_vertex[label.verts[4]]; // pair i = 3
        // copy-1 X on e_3 pulls back to X_{v_6} X_{v_7} X_{v_8} (m = 2)
        let expect = PauliOp::from_supports(
            colex.n_vertices(),
            &[label.verts[5], label.verts[6], label.verts[7]],
            &[],
        );
        assert_eq!(map.inv_x_image(doubled_index(0, e3)), &expect);
        // copy-1 Z on e_1 pulls back to Z_{v_1} Z_{v_2}
        let e1 = surface.tau_vertex[label.verts[0]];
        let expect = PauliOp::from_supports(
            colex.n_vertices(),
            &[],
            &[label.verts[0], label.verts[1]],
        );
        assert_eq!(map.inv_z_image(doubled_index(0, e1)), &expect);
        // copy-1 X on e_2 pulls back to X_{v_1} X_{v_2} X_{v_3}
        let e2 = surface.tau_vertex[label.verts[2]];
        let expect = PauliOp::from_supports(
            colex.n_vertices(),
            &[label.verts[0], label.verts[1], label.verts[2]],
            &[],
        );
        assert_eq!(map.inv_x_image(doubled_index(0, e2)), &expect);
    }

    /// Image supports stay within the surface edges of the generator's
    /// own face.
    #[test]
    fn images_are_local_to_the_face() {
        let colex = build_hexagonal(3).unwrap();
        let surface = contract(&colex, Color::R).unwrap();
        let labeling = label_faces(&colex, Color::R);
        let map = build_map(&colex, &surface, &labeling).unwrap();
        for label in &labeling.labels {
            let mut allowed = vec![false; map.n_doubled()];
            for j in 0..label.half_len() {
                let e = surface.tau_vertex[label.verts[2 * j]];
                allowed[doubled_index(0, e)] = true;
                allowed[doubled_index(1, e)] = true;
            }
            for &v in &label.verts {
                for img in [map.x_image(v), map.z_image(v)] {
                    for q in img.x_support().into_iter().chain(img.z_support()) {
                        assert!(allowed[q], "vertex {v} image leaves its face");
                    }
                }
            }
        }
    }

    #[test]
    fn roundtrip_on_random_paulis() {
        let (colex, _, _, map) = build_all(4);
        let n = colex.n_vertices();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let mut p = PauliOp::identity(n);
            for q in 0..n {
                if rng.gen_bool(0.3) {
                    p.flip_x(q);
                }
                if rng.gen_bool(0.3) {
                    p.flip_z(q);
                }
            }
            assert_eq!(map.apply_inverse(&map.apply(&p)), p);
            let mut s = PauliOp::identity(map.n_doubled());
            for q in 0..map.n_doubled() {
                if rng.gen_bool(0.3) {
                    s.flip_x(q);
                }
                if rng.gen_bool(0.3) {
                    s.flip_z(q);
                }
            }
            assert_eq!(map.apply(&map.apply_inverse(&s)), s);
        }
    }
}
