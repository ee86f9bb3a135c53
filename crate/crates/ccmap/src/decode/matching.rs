//! Maximum-weight matching in general graphs by the blossom /
//! primal-dual method (Edmonds; the O(n^3) formulation described by
//! Galil and popularized by Joris van Rantwijk's reference program).
//!
//! Exactness matters here: the decoder's output feeds threshold
//! estimates, so the duals are verified against the complementary
//! slackness conditions after every solve.

const NONE: usize = usize::MAX;

type Weight = i64;

/// Compute a maximum-weight matching of `edges` over vertices `0..n`.
/// With `max_cardinality` only maximum-cardinality matchings compete.
/// Returns `mate`, with `mate[v] == NONE` for unmatched vertices.
pub fn max_weight_matching(
    n_vertices: usize,
    edges: &[(usize, usize, Weight)],
    max_cardinality: bool,
) -> Vec<usize> {
    if edges.is_empty() {
        return vec![NONE; n_vertices];
    }
    let mut solver = Solver::new(n_vertices, edges.to_vec(), max_cardinality);
    solver.solve();
    solver.verify_optimum();
    solver.mates()
}

/// Minimum-weight perfect matching on the complete graph over `0..n`
/// (n even), weights given by the callback. Returns the matched pairs
/// sorted by the lower vertex.
pub fn min_weight_perfect_matching(
    n_vertices: usize,
    weight: impl Fn(usize, usize) -> i64,
) -> Vec<(usize, usize)> {
    assert!(n_vertices % 2 == 0, "perfect matching needs an even vertex count");
    if n_vertices == 0 {
        return Vec::new();
    }
    let mut edges = Vec::with_capacity(n_vertices * (n_vertices - 1) / 2);
    let mut max_w = 0;
    for i in 0..n_vertices {
        for j in (i + 1)..n_vertices {
            let w = weight(i, j);
            assert!(w >= 0, "weights must be nonnegative");
            max_w = max_w.max(w);
            edges.push((i, j, w));
        }
    }
    // flip weights so the maximum-weight max-cardinality matching
    // minimizes the original total
    for e in &mut edges {
        e.2 = max_w - e.2;
    }
    let mate = max_weight_matching(n_vertices, &edges, true);
    let mut pairs = Vec::with_capacity(n_vertices / 2);
    for v in 0..n_vertices {
        let w = mate[v];
        assert!(w != NONE, "matching is not perfect");
        if v < w {
            pairs.push((v, w));
        }
    }
    pairs
}

struct Solver {
    nvertex: usize,
    nedge: usize,
    edges: Vec<(usize, usize, Weight)>,
    max_cardinality: bool,
    // endpoint[p]: vertex at edge endpoint p (endpoints 2k and 2k+1
    // belong to edge k)
    endpoint: Vec<usize>,
    // neighbend[v]: remote endpoints of edges incident on v
    neighbend: Vec<Vec<usize>>,
    mate: Vec<usize>,
    label: Vec<usize>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<usize>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<usize>,
    blossombestedges: Vec<Option<Vec<usize>>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<Weight>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl Solver {
    fn new(nvertex: usize, edges: Vec<(usize, usize, Weight)>, max_cardinality: bool) -> Self {
        let nedge = edges.len();
        let mut nv = nvertex;
        for &(i, j, _) in &edges {
            assert!(i != j);
            nv = nv.max(i + 1).max(j + 1);
        }
        let max_weight = edges.iter().map(|e| e.2).max().unwrap().max(0);
        let endpoint: Vec<usize> = (0..2 * nedge)
            .map(|p| if p % 2 == 0 { edges[p / 2].0 } else { edges[p / 2].1 })
            .collect();
        let mut neighbend = vec![Vec::new(); nv];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut dualvar = vec![max_weight; nv];
        dualvar.extend(vec![0; nv]);
        Solver {
            nvertex: nv,
            nedge,
            edges,
            max_cardinality,
            endpoint,
            neighbend,
            mate: vec![NONE; nv],
            label: vec![0; 2 * nv],
            labelend: vec![NONE; 2 * nv],
            inblossom: (0..nv).collect(),
            blossomparent: vec![NONE; 2 * nv],
            blossomchilds: vec![Vec::new(); 2 * nv],
            blossombase: (0..nv).chain(std::iter::repeat_n(NONE, nv)).collect(),
            blossomendps: vec![Vec::new(); 2 * nv],
            bestedge: vec![NONE; 2 * nv],
            blossombestedges: vec![None; 2 * nv],
            unusedblossoms: (nv..2 * nv).collect(),
            dualvar,
            allowedge: vec![false; nedge],
            queue: Vec::new(),
        }
    }

    // 2 * slack of edge k (valid only outside blossoms)
    #[inline]
    fn slack(&self, k: usize) -> Weight {
        let (i, j, wt) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2 * wt
    }

    fn blossom_leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.nvertex {
            out.push(b);
        } else {
            for &t in &self.blossomchilds[b] {
                self.blossom_leaves(t, out);
            }
        }
    }

    fn leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.blossom_leaves(b, &mut out);
        out
    }

    /// Label the top-level blossom containing w, reached via remote
    /// endpoint p.
    fn assign_label(&mut self, w: usize, t: usize, p: usize) {
        let b = self.inblossom[w];
        assert!(self.label[w] == 0 && self.label[b] == 0);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;
        if t == 1 {
            let leaves = self.leaves(b);
            self.queue.extend(leaves);
        } else {
            // a T-blossom's base is the only vertex with an external mate
            let base = self.blossombase[b];
            assert!(self.mate[base] != NONE);
            let mbase = self.mate[base];
            let ep = self.endpoint[mbase];
            self.assign_label(ep, 1, mbase ^ 1);
        }
    }

    /// Trace back from v and w; returns the base of a new blossom, or
    /// NONE if the paths join at two different roots (augmenting path).
    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let mut v = v;
        let mut w = w;
        while v != NONE || w != NONE {
            if v == NONE {
                std::mem::swap(&mut v, &mut w);
            }
            let mut b = self.inblossom[v];
            if self.label[b] & 4 != 0 {
                base = self.blossombase[b];
                break;
            }
            assert_eq!(self.label[b], 1);
            path.push(b);
            self.label[b] = 5;
            assert_eq!(self.labelend[b], self.mate[self.blossombase[b]]);
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.labelend[b]];
                b = self.inblossom[v];
                assert_eq!(self.label[b], 2);
                assert!(self.labelend[b] != NONE);
                v = self.endpoint[self.labelend[b]];
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    /// Make a new blossom with the given base, containing edge k which
    /// joins two S-blossoms.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().unwrap();
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;

        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b;
            path.push(bv);
            endps.push(self.labelend[bv]);
            assert!(
                self.label[bv] == 2
                    || (self.label[bv] == 1
                        && self.labelend[bv] == self.mate[self.blossombase[bv]])
            );
            assert!(self.labelend[bv] != NONE);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b;
            path.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            assert!(
                self.label[bw] == 2
                    || (self.label[bw] == 1
                        && self.labelend[bw] == self.mate[self.blossombase[bw]])
            );
            assert!(self.labelend[bw] != NONE);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }
        self.blossomchilds[b] = path;
        self.blossomendps[b] = endps;

        assert_eq!(self.label[bb], 1);
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0;

        for v in self.leaves(b) {
            if self.label[self.inblossom[v]] == 2 {
                self.queue.push(v);
            }
            self.inblossom[v] = b;
        }

        // least-slack edges from the new blossom to other S-blossoms
        let mut bestedgeto = vec![NONE; 2 * self.nvertex];
        let childs = self.blossomchilds[b].clone();
        for bv in childs {
            let nblists: Vec<Vec<usize>> = match self.blossombestedges[bv].take() {
                Some(list) => vec![list],
                None => self
                    .leaves(bv)
                    .into_iter()
                    .map(|v| self.neighbend[v].iter().map(|p| p / 2).collect())
                    .collect(),
            };
            for nblist in nblists {
                for k in nblist {
                    let (i, j, _) = self.edges[k];
                    // j is the endpoint outside the new blossom
                    let j = if self.inblossom[j] == b { i } else { j };
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && (bestedgeto[bj] == NONE || self.slack(k) < self.slack(bestedgeto[bj]))
                    {
                        bestedgeto[bj] = k;
                    }
                }
            }
            self.blossombestedges[bv] = None;
            self.bestedge[bv] = NONE;
        }
        let best: Vec<usize> = bestedgeto.into_iter().filter(|&k| k != NONE).collect();
        self.bestedge[b] = NONE;
        for &k in &best {
            if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b]) {
                self.bestedge[b] = k;
            }
        }
        self.blossombestedges[b] = Some(best);
    }

    /// Expand a top-level blossom; during a stage its sub-blossoms must
    /// be relabeled along the alternating cycle.
    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        for s in self.blossomchilds[b].clone() {
            self.blossomparent[s] = NONE;
            if s < self.nvertex {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                for v in self.leaves(s) {
                    self.inblossom[v] = s;
                }
            }
        }
        if !endstage && self.label[b] == 2 {
            assert!(self.labelend[b] != NONE);
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
            let len = self.blossomchilds[b].len() as i64;
            let mut j = self.blossomchilds[b]
                .iter()
                .position(|&c| c == entrychild)
                .unwrap() as i64;
            let (jstep, endptrick): (i64, usize) = if j & 1 != 0 {
                j -= len;
                (1, 0)
            } else {
                (-1, 1)
            };
            let at_childs = |s: &Self, idx: i64| -> usize {
                let n = s.blossomchilds[b].len() as i64;
                s.blossomchilds[b][((idx % n + n) % n) as usize]
            };
            let at_endps = |s: &Self, idx: i64| -> usize {
                let n = s.blossomendps[b].len() as i64;
                s.blossomendps[b][((idx % n + n) % n) as usize]
            };
            let mut p = self.labelend[b];
            while j != 0 {
                // relabel the T-sub-blossom
                self.label[self.endpoint[p ^ 1]] = 0;
                let q = at_endps(self, j - endptrick as i64) ^ endptrick ^ 1;
                self.label[self.endpoint[q]] = 0;
                let ep = self.endpoint[p ^ 1];
                self.assign_label(ep, 2, p);
                // step to the next S-sub-blossom and note its endpoint
                let allow = at_endps(self, j - endptrick as i64) / 2;
                self.allowedge[allow] = true;
                j += jstep;
                p = at_endps(self, j - endptrick as i64) ^ endptrick;
                // step to the next T-sub-blossom
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            // relabel the base T-sub-blossom without recursing to its mate
            let bv = at_childs(self, j);
            self.label[self.endpoint[p ^ 1]] = 2;
            self.label[bv] = 2;
            self.labelend[self.endpoint[p ^ 1]] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;
            // continue along the blossom until back at entrychild
            j += jstep;
            while at_childs(self, j) != entrychild {
                let bv = at_childs(self, j);
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let mut v = NONE;
                for leaf in self.leaves(bv) {
                    v = leaf;
                    if self.label[leaf] != 0 {
                        break;
                    }
                }
                if v != NONE && self.label[v] != 0 {
                    assert_eq!(self.label[v], 2);
                    assert_eq!(self.inblossom[v], bv);
                    self.label[v] = 0;
                    self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = 0;
                    let le = self.labelend[v];
                    self.assign_label(v, 2, le);
                }
                j += jstep;
            }
        }
        self.label[b] = NONE;
        self.labelend[b] = NONE;
        self.blossombase[b] = NONE;
        self.bestedge[b] = NONE;
        self.blossomchilds[b].clear();
        self.blossomendps[b].clear();
        self.blossombestedges[b] = None;
        self.unusedblossoms.push(b);
    }

    /// Swap matched/unmatched edges along the path from v to the base
    /// of blossom b, rotating the blossom so v becomes the base.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }
        if t >= self.nvertex {
            self.augment_blossom(t, v);
        }
        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap();
        let len = self.blossomchilds[b].len() as i64;
        let mut j = i as i64;
        let (jstep, endptrick): (i64, usize) = if i & 1 != 0 {
            j -= len;
            (1, 0)
        } else {
            (-1, 1)
        };
        let at_childs = |s: &Self, idx: i64| -> usize {
            let n = s.blossomchilds[b].len() as i64;
            s.blossomchilds[b][((idx % n + n) % n) as usize]
        };
        let at_endps = |s: &Self, idx: i64| -> usize {
            let n = s.blossomendps[b].len() as i64;
            s.blossomendps[b][((idx % n + n) % n) as usize]
        };
        while j != 0 {
            j += jstep;
            let mut t = at_childs(self, j);
            let p = at_endps(self, j - endptrick as i64) ^ endptrick;
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p]);
            }
            j += jstep;
            t = at_childs(self, j);
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        assert_eq!(self.blossombase[b], v);
    }

    /// Augment along the path through edge k joining two S-trees.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, 2 * k + 1), (w, 2 * k)] {
            loop {
                let bs = self.inblossom[s];
                assert_eq!(self.label[bs], 1);
                assert_eq!(self.labelend[bs], self.mate[self.blossombase[bs]]);
                if bs >= self.nvertex {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                assert_eq!(self.label[bt], 2);
                assert!(self.labelend[bt] != NONE);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];
                assert_eq!(self.blossombase[bt], t);
                if bt >= self.nvertex {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn solve(&mut self) {
        for _stage in 0..self.nvertex {
            self.label = vec![0; 2 * self.nvertex];
            self.bestedge = vec![NONE; 2 * self.nvertex];
            for b in self.nvertex..2 * self.nvertex {
                self.blossombestedges[b] = None;
            }
            self.allowedge = vec![false; self.nedge];
            self.queue.clear();
            for v in 0..self.nvertex {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }
            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    assert_eq!(self.label[self.inblossom[v]], 1);
                    for p in self.neighbend[v].clone() {
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        let mut kslack = 0;
                        if !self.allowedge[k] {
                            kslack = self.slack(k);
                            if kslack <= 0 {
                                self.allowedge[k] = true;
                            }
                        }
                        if self.allowedge[k] {
                            if self.label[self.inblossom[w]] == 0 {
                                self.assign_label(w, 2, p ^ 1);
                            } else if self.label[self.inblossom[w]] == 1 {
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == 0 {
                                assert_eq!(self.label[self.inblossom[w]], 2);
                                self.label[w] = 2;
                                self.labelend[w] = p ^ 1;
                            }
                        } else if self.label[self.inblossom[w]] == 1 {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE
                                || kslack < self.slack(self.bestedge[b])
                            {
                                self.bestedge[b] = k;
                            }
                        } else if self.label[w] == 0
                            && (self.bestedge[w] == NONE
                                || kslack < self.slack(self.bestedge[w]))
                        {
                            self.bestedge[w] = k;
                        }
                    }
                    if augmented {
                        break;
                    }
                }
                if augmented {
                    break;
                }

                // no augmenting path: pump slack out of the duals
                let mut deltatype = -1;
                let mut delta = 0;
                let mut deltaedge = 0;
                let mut deltablossom = 0;
                if !self.max_cardinality {
                    deltatype = 1;
                    delta = *self.dualvar[..self.nvertex].iter().min().unwrap();
                }
                for v in 0..self.nvertex {
                    if self.label[self.inblossom[v]] == 0 && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v]);
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v];
                        }
                    }
                }
                for b in 0..2 * self.nvertex {
                    if self.blossomparent[b] == NONE
                        && self.label[b] == 1
                        && self.bestedge[b] != NONE
                    {
                        let d = self.slack(self.bestedge[b]) / 2;
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b];
                        }
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE
                        && self.blossomparent[b] == NONE
                        && self.label[b] == 2
                        && (deltatype == -1 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if deltatype == -1 {
                    // max-cardinality optimum reached
                    assert!(self.max_cardinality);
                    deltatype = 1;
                    delta = (*self.dualvar[..self.nvertex].iter().min().unwrap()).max(0);
                }

                for v in 0..self.nvertex {
                    match self.label[self.inblossom[v]] {
                        0 => {}
                        1 => self.dualvar[v] -= delta,
                        2 => self.dualvar[v] += delta,
                        _ => unreachable!(),
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            0 => {}
                            1 => self.dualvar[b] += delta,
                            2 => self.dualvar[b] -= delta,
                            _ => unreachable!(),
                        }
                    }
                }

                match deltatype {
                    1 => break,
                    2 => {
                        self.allowedge[deltaedge] = true;
                        let (mut i, j, _) = self.edges[deltaedge];
                        if self.label[self.inblossom[i]] == 0 {
                            i = j;
                        }
                        assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    4 => self.expand_blossom(deltablossom, false),
                    _ => unreachable!(),
                }
            }
            if !augmented {
                break;
            }
            for b in self.nvertex..2 * self.nvertex {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == 1
                    && self.dualvar[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
    }

    /// Complementary slackness check of the final duals.
    fn verify_optimum(&self) {
        let vdualoffset = if self.max_cardinality {
            (-self.dualvar[..self.nvertex].iter().min().unwrap()).max(0)
        } else {
            0
        };
        assert!(self.dualvar[..self.nvertex].iter().min().unwrap() + vdualoffset >= 0);
        assert!(*self.dualvar[self.nvertex..].iter().min().unwrap() >= 0);
        for k in 0..self.nedge {
            let (i, j, wt) = self.edges[k];
            let mut s = self.dualvar[i] + self.dualvar[j] - 2 * wt;
            let mut iblossoms = vec![i];
            let mut jblossoms = vec![j];
            while self.blossomparent[*iblossoms.last().unwrap()] != NONE {
                iblossoms.push(self.blossomparent[*iblossoms.last().unwrap()]);
            }
            while self.blossomparent[*jblossoms.last().unwrap()] != NONE {
                jblossoms.push(self.blossomparent[*jblossoms.last().unwrap()]);
            }
            iblossoms.reverse();
            jblossoms.reverse();
            for (&bi, &bj) in iblossoms.iter().zip(jblossoms.iter()) {
                if bi != bj {
                    break;
                }
                s += 2 * self.dualvar[bi];
            }
            assert!(s >= 0);
            if self.mate[i] / 2 == k || self.mate[j] / 2 == k {
                assert!(self.mate[i] / 2 == k && self.mate[j] / 2 == k);
                assert_eq!(s, 0);
            }
        }
        for v in 0..self.nvertex {
            assert!(self.mate[v] != NONE || self.dualvar[v] + vdualoffset == 0);
        }
        for b in self.nvertex..2 * self.nvertex {
            if self.blossombase[b] != NONE && self.dualvar[b] > 0 {
                assert!(self.blossomendps[b].len() % 2 == 1);
                for (ix, &p) in self.blossomendps[b].iter().enumerate() {
                    if ix % 2 == 1 {
                        assert_eq!(self.mate[self.endpoint[p]], p ^ 1);
                        assert_eq!(self.mate[self.endpoint[p ^ 1]], p);
                    }
                }
            }
        }
    }

    fn mates(&self) -> Vec<usize> {
        (0..self.nvertex)
            .map(|v| {
                if self.mate[v] == NONE {
                    NONE
                } else {
                    self.endpoint[self.mate[v]]
                }
            })
            .collect()
    }
}
