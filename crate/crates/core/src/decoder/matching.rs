//! Minimum-weight perfect matching of syndrome defects.
//!
//! Small defect sets are matched by branch-and-bound over pairings. Larger
//! sets go through a weighted blossom algorithm (Edmonds, in the primal-dual
//! formulation with integer duals), which is exact as well.

use super::coarse::{CoarseSyndrome, CoarseTorus, EdgeSet};
use super::DecoderError;

/// Largest defect count handled by branch-and-bound.
pub const EXACT_SEARCH_LIMIT: usize = 14;

/// Pair up the odd squares along shortest paths with minimum total length.
pub fn match_syndrome(syndrome: &CoarseSyndrome) -> Result<EdgeSet, DecoderError> {
    let torus = syndrome.flips.torus();
    let defects = syndrome.defects();
    if defects.len() % 2 == 1 {
        return Err(DecoderError::OddDefectCount(defects.len()));
    }
    let pairs = min_weight_pairing(&distance_matrix(torus, &defects));
    let mut correction = EdgeSet::empty(torus);
    for (i, j) in pairs {
        for e in torus.path(defects[i], defects[j]) {
            correction.toggle(e);
        }
    }
    Ok(correction)
}

pub fn distance_matrix(torus: CoarseTorus, defects: &[usize]) -> Vec<Vec<u64>> {
    defects
        .iter()
        .map(|&a| defects.iter().map(|&b| torus.distance(a, b) as u64).collect())
        .collect()
}

pub fn pairing_weight(weights: &[Vec<u64>], pairs: &[(usize, usize)]) -> u64 {
    pairs.iter().map(|&(i, j)| weights[i][j]).sum()
}

/// Minimum-weight perfect matching on the complete graph with symmetric
/// `weights`; the node count must be even.
pub fn min_weight_pairing(weights: &[Vec<u64>]) -> Vec<(usize, usize)> {
    if weights.len() <= EXACT_SEARCH_LIMIT {
        branch_and_bound(weights)
    } else {
        blossom_min_pairing(weights)
    }
}

pub fn branch_and_bound(weights: &[Vec<u64>]) -> Vec<(usize, usize)> {
    let n = weights.len();
    assert!(n % 2 == 0, "odd node count");
    let mut search = Search {
        weights,
        used: vec![false; n],
        current: Vec::with_capacity(n / 2),
        best: Vec::new(),
        best_cost: u64::MAX,
    };
    search.run(0);
    search.best
}

struct Search<'a> {
    weights: &'a [Vec<u64>],
    used: Vec<bool>,
    current: Vec<(usize, usize)>,
    best: Vec<(usize, usize)>,
    best_cost: u64,
}

impl Search<'_> {
    // Half the sum of each free node's cheapest edge to another free node.
    fn lower_bound(&self) -> u64 {
        let n = self.weights.len();
        let mut total = 0;
        for i in (0..n).filter(|&i| !self.used[i]) {
            let cheapest = (0..n)
                .filter(|&j| j != i && !self.used[j])
                .map(|j| self.weights[i][j])
                .min()
                .unwrap_or(0);
            total += cheapest;
        }
        total / 2
    }

    fn run(&mut self, cost: u64) {
        let Some(i) = self.used.iter().position(|&u| !u) else {
            if cost < self.best_cost {
                self.best_cost = cost;
                self.best = self.current.clone();
            }
            return;
        };
        if cost + self.lower_bound() >= self.best_cost {
            return;
        }
        let mut candidates: Vec<usize> = (i + 1..self.weights.len()).filter(|&j| !self.used[j]).collect();
        candidates.sort_by_key(|&j| (self.weights[i][j], j));
        self.used[i] = true;
        for j in candidates {
            let next = cost + self.weights[i][j];
            if next >= self.best_cost {
                break;
            }
            self.used[j] = true;
            self.current.push((i, j));
            self.run(next);
            self.current.pop();
            self.used[j] = false;
        }
        self.used[i] = false;
    }
}

/// Exact minimum-weight perfect matching through maximum-weight matching with
/// transformed weights `C - w`, restricted to maximum cardinality.
pub fn blossom_min_pairing(weights: &[Vec<u64>]) -> Vec<(usize, usize)> {
    let n = weights.len();
    assert!(n % 2 == 0, "odd node count");
    if n == 0 {
        return Vec::new();
    }
    let top = weights.iter().flatten().copied().max().unwrap_or(0) as i64 + 1;
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, top - weights[i][j] as i64));
        }
    }
    let mate = max_weight_matching(n, &edges, true);
    let mut pairs: Vec<(usize, usize)> = mate
        .iter()
        .enumerate()
        .filter_map(|(i, m)| m.filter(|&j| i < j).map(|j| (i, j)))
        .collect();
    pairs.sort();
    assert_eq!(pairs.len() * 2, n, "complete graph must have a perfect matching");
    pairs
}

const NONE: usize = usize::MAX;

/// Maximum-weight matching on a general graph with integer weights.
///
/// Returns the mate of every vertex. With `max_cardinality` the result is a
/// maximum-weight matching among the maximum-cardinality ones.
pub fn max_weight_matching(n: usize, edges: &[(usize, usize, i64)], max_cardinality: bool) -> Vec<Option<usize>> {
    if edges.is_empty() {
        return vec![None; n];
    }
    let mut m = Blossom::new(n, edges);
    m.solve(max_cardinality);
    m.mate
        .iter()
        .map(|&p| if p == NONE { None } else { Some(m.endpoint[p]) })
        .collect()
}

// Endpoint `p` of edge `p / 2` is vertex `endpoint[p]`; `p ^ 1` is the other
// end. Labels: 0 free, 1 S (outer), 2 T (inner); bit 4 marks a blossom
// visited during a scan.
struct Blossom<'a> {
    n: usize,
    edges: &'a [(usize, usize, i64)],
    endpoint: Vec<usize>,
    neighbend: Vec<Vec<usize>>,
    mate: Vec<usize>,
    label: Vec<u8>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    parent: Vec<usize>,
    childs: Vec<Vec<usize>>,
    base: Vec<usize>,
    endps: Vec<Vec<usize>>,
    bestedge: Vec<usize>,
    best_edges: Vec<Option<Vec<usize>>>,
    unused: Vec<usize>,
    dual: Vec<i64>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Blossom<'a> {
    fn new(n: usize, edges: &'a [(usize, usize, i64)]) -> Self {
        let maxweight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let mut endpoint = Vec::with_capacity(2 * edges.len());
        let mut neighbend = vec![Vec::new(); n];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            endpoint.push(i);
            endpoint.push(j);
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut dual = vec![maxweight; n];
        dual.extend(std::iter::repeat_n(0, n));
        Self {
            n,
            edges,
            endpoint,
            neighbend,
            mate: vec![NONE; n],
            label: vec![0; 2 * n],
            labelend: vec![NONE; 2 * n],
            inblossom: (0..n).collect(),
            parent: vec![NONE; 2 * n],
            childs: vec![Vec::new(); 2 * n],
            base: (0..n).chain(std::iter::repeat_n(NONE, n)).collect(),
            endps: vec![Vec::new(); 2 * n],
            bestedge: vec![NONE; 2 * n],
            best_edges: vec![None; 2 * n],
            unused: (n..2 * n).collect(),
            dual,
            allowedge: vec![false; edges.len()],
            queue: Vec::new(),
        }
    }

    fn slack(&self, k: usize) -> i64 {
        let (i, j, w) = self.edges[k];
        self.dual[i] + self.dual[j] - 2 * w
    }

    fn leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![b];
        while let Some(t) = stack.pop() {
            if t < self.n {
                out.push(t);
            } else {
                stack.extend(self.childs[t].iter().rev());
            }
        }
        out
    }

    fn assign_label(&mut self, w: usize, t: u8, p: usize) {
        let b = self.inblossom[w];
        debug_assert!(self.label[w] == 0 && self.label[b] == 0);
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
            let base = self.base[b];
            let mp = self.mate[base];
            debug_assert!(mp != NONE);
            self.assign_label(self.endpoint[mp], 1, mp ^ 1);
        }
    }

    // Trace back from v and w to find a common base (new blossom) or NONE
    // (augmenting path).
    fn scan_blossom(&mut self, mut v: usize, mut w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        while v != NONE || w != NONE {
            let mut b = self.inblossom[v];
            if self.label[b] & 4 != 0 {
                base = self.base[b];
                break;
            }
            debug_assert_eq!(self.label[b], 1);
            path.push(b);
            self.label[b] = 5;
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.labelend[b]];
                b = self.inblossom[v];
                debug_assert_eq!(self.label[b], 2);
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

    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unused.pop().expect("blossom slot");
        self.base[b] = base;
        self.parent[b] = NONE;
        self.parent[bb] = b;
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.parent[bv] = b;
            path.push(bv);
            endps.push(self.labelend[bv]);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.parent[bw] = b;
            path.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }
        debug_assert_eq!(self.label[bb], 1);
        self.childs[b] = path.clone();
        self.endps[b] = endps;
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dual[b] = 0;
        for leaf in self.leaves(b) {
            if self.label[self.inblossom[leaf]] == 2 {
                self.queue.push(leaf);
            }
            self.inblossom[leaf] = b;
        }
        let mut bestedgeto = vec![NONE; 2 * self.n];
        for &sub in &path {
            let lists: Vec<Vec<usize>> = match self.best_edges[sub].take() {
                Some(list) => vec![list],
                None => self
                    .leaves(sub)
                    .into_iter()
                    .map(|leaf| self.neighbend[leaf].iter().map(|p| p / 2).collect())
                    .collect(),
            };
            for list in lists {
                for kk in list {
                    let (mut i, mut j, _) = self.edges[kk];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && (bestedgeto[bj] == NONE || self.slack(kk) < self.slack(bestedgeto[bj]))
                    {
                        bestedgeto[bj] = kk;
                    }
                }
            }
            self.bestedge[sub] = NONE;
        }
        let list: Vec<usize> = bestedgeto.into_iter().filter(|&kk| kk != NONE).collect();
        self.bestedge[b] = NONE;
        for &kk in &list {
            if self.bestedge[b] == NONE || self.slack(kk) < self.slack(self.bestedge[b]) {
                self.bestedge[b] = kk;
            }
        }
        self.best_edges[b] = Some(list);
    }

    fn child_at(&self, b: usize, j: isize) -> usize {
        let len = self.childs[b].len() as isize;
        self.childs[b][j.rem_euclid(len) as usize]
    }

    fn endp_at(&self, b: usize, j: isize) -> usize {
        let len = self.endps[b].len() as isize;
        self.endps[b][j.rem_euclid(len) as usize]
    }

    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        for s in self.childs[b].clone() {
            self.parent[s] = NONE;
            if s < self.n {
                self.inblossom[s] = s;
            } else if endstage && self.dual[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                for leaf in self.leaves(s) {
                    self.inblossom[leaf] = s;
                }
            }
        }
        if !endstage && self.label[b] == 2 {
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
            let mut j = self.childs[b].iter().position(|&c| c == entrychild).unwrap() as isize;
            let (jstep, endptrick): (isize, usize) = if j & 1 == 1 {
                j -= self.childs[b].len() as isize;
                (1, 0)
            } else {
                (-1, 1)
            };
            let mut p = self.labelend[b];
            while j != 0 {
                self.label[self.endpoint[p ^ 1]] = 0;
                let q = self.endp_at(b, j - endptrick as isize) ^ endptrick ^ 1;
                self.label[self.endpoint[q]] = 0;
                self.assign_label(self.endpoint[p ^ 1], 2, p);
                let forward = self.endp_at(b, j - endptrick as isize) / 2;
                self.allowedge[forward] = true;
                j += jstep;
                p = self.endp_at(b, j - endptrick as isize) ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            let bv = self.child_at(b, j);
            let ep = self.endpoint[p ^ 1];
            self.label[ep] = 2;
            self.label[bv] = 2;
            self.labelend[ep] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;
            j += jstep;
            while self.child_at(b, j) != entrychild {
                let bv = self.child_at(b, j);
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let reached = self.leaves(bv).into_iter().find(|&v| self.label[v] != 0);
                if let Some(v) = reached {
                    debug_assert_eq!(self.label[v], 2);
                    self.label[v] = 0;
                    let mb = self.mate[self.base[bv]];
                    self.label[self.endpoint[mb]] = 0;
                    self.assign_label(v, 2, self.labelend[v]);
                }
                j += jstep;
            }
        }
        self.label[b] = 0;
        self.labelend[b] = NONE;
        self.childs[b] = Vec::new();
        self.endps[b] = Vec::new();
        self.base[b] = NONE;
        self.best_edges[b] = None;
        self.bestedge[b] = NONE;
        self.unused.push(b);
    }

    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.parent[t] != b {
            t = self.parent[t];
        }
        if t >= self.n {
            self.augment_blossom(t, v);
        }
        let i = self.childs[b].iter().position(|&c| c == t).unwrap();
        let mut j = i as isize;
        let (jstep, endptrick): (isize, usize) = if i & 1 == 1 {
            j -= self.childs[b].len() as isize;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let t = self.child_at(b, j);
            let p = self.endp_at(b, j - endptrick as isize) ^ endptrick;
            if t >= self.n {
                self.augment_blossom(t, self.endpoint[p]);
            }
            j += jstep;
            let t = self.child_at(b, j);
            if t >= self.n {
                self.augment_blossom(t, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        self.childs[b].rotate_left(i);
        self.endps[b].rotate_left(i);
        self.base[b] = self.base[self.childs[b][0]];
        debug_assert_eq!(self.base[b], v);
    }

    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, 2 * k + 1), (w, 2 * k)] {
            loop {
                let bs = self.inblossom[s];
                debug_assert_eq!(self.label[bs], 1);
                if bs >= self.n {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                debug_assert_eq!(self.label[bt], 2);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];
                if bt >= self.n {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn solve(&mut self, max_cardinality: bool) {
        let n = self.n;
        for _ in 0..n {
            self.label.iter_mut().for_each(|l| *l = 0);
            self.bestedge.iter_mut().for_each(|e| *e = NONE);
            for b in n..2 * n {
                self.best_edges[b] = None;
            }
            self.allowedge.iter_mut().for_each(|a| *a = false);
            self.queue.clear();
            for v in 0..n {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }
            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    debug_assert_eq!(self.label[self.inblossom[v]], 1);
                    for idx in 0..self.neighbend[v].len() {
                        let p = self.neighbend[v][idx];
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
                                self.label[w] = 2;
                                self.labelend[w] = p ^ 1;
                            }
                        } else if self.label[self.inblossom[w]] == 1 {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE || kslack < self.slack(self.bestedge[b]) {
                                self.bestedge[b] = k;
                            }
                        } else if self.label[w] == 0
                            && (self.bestedge[w] == NONE || kslack < self.slack(self.bestedge[w]))
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

                // Dual adjustment.
                let mut delta_type = 0u8;
                let mut delta = 0i64;
                let mut delta_edge = NONE;
                let mut delta_blossom = NONE;
                if !max_cardinality {
                    delta_type = 1;
                    delta = *self.dual[..n].iter().min().unwrap();
                }
                for v in 0..n {
                    if self.label[self.inblossom[v]] == 0 && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v]);
                        if delta_type == 0 || d < delta {
                            delta = d;
                            delta_type = 2;
                            delta_edge = self.bestedge[v];
                        }
                    }
                }
                for b in 0..2 * n {
                    if self.parent[b] == NONE && self.label[b] == 1 && self.bestedge[b] != NONE {
                        let kslack = self.slack(self.bestedge[b]);
                        debug_assert_eq!(kslack % 2, 0);
                        let d = kslack / 2;
                        if delta_type == 0 || d < delta {
                            delta = d;
                            delta_type = 3;
                            delta_edge = self.bestedge[b];
                        }
                    }
                }
                for b in n..2 * n {
                    if self.base[b] != NONE
                        && self.parent[b] == NONE
                        && self.label[b] == 2
                        && (delta_type == 0 || self.dual[b] < delta)
                    {
                        delta = self.dual[b];
                        delta_type = 4;
                        delta_blossom = b;
                    }
                }
                if delta_type == 0 {
                    delta_type = 1;
                    delta = (*self.dual[..n].iter().min().unwrap()).max(0);
                }
                for v in 0..n {
                    match self.label[self.inblossom[v]] {
                        1 => self.dual[v] -= delta,
                        2 => self.dual[v] += delta,
                        _ => {}
                    }
                }
                for b in n..2 * n {
                    if self.base[b] != NONE && self.parent[b] == NONE {
                        match self.label[b] {
                            1 => self.dual[b] += delta,
                            2 => self.dual[b] -= delta,
                            _ => {}
                        }
                    }
                }
                match delta_type {
                    1 => break,
                    2 => {
                        self.allowedge[delta_edge] = true;
                        let (mut i, j, _) = self.edges[delta_edge];
                        if self.label[self.inblossom[i]] == 0 {
                            i = j;
                        }
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowedge[delta_edge] = true;
                        let (i, _, _) = self.edges[delta_edge];
                        self.queue.push(i);
                    }
                    _ => self.expand_blossom(delta_blossom, false),
                }
            }
            if !augmented {
                break;
            }
            for b in n..2 * n {
                if self.parent[b] == NONE && self.base[b] != NONE && self.label[b] == 1 && self.dual[b] == 0 {
                    self.expand_blossom(b, true);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::coarse::{sample_edge_flips, syndrome_from_flips};
    use crate::seeding;
    use rand::Rng;

    // Independent oracle: enumerate every perfect matching.
    fn exhaustive(weights: &[Vec<u64>]) -> u64 {
        fn go(w: &[Vec<u64>], free: &mut Vec<usize>) -> u64 {
            if free.is_empty() {
                return 0;
            }
            let i = free.remove(0);
            let mut best = u64::MAX;
            for idx in 0..free.len() {
                let j = free.remove(idx);
                best = best.min(w[i][j] + go(w, free));
                free.insert(idx, j);
            }
            free.insert(0, i);
            best
        }
        go(weights, &mut (0..weights.len()).collect())
    }

    fn random_weights(n: usize, seed: u64) -> Vec<Vec<u64>> {
        let mut rng = seeding::rng(seed);
        let mut w = vec![vec![0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let x = rng.random_range(0..20);
                w[i][j] = x;
                w[j][i] = x;
            }
        }
        w
    }

    fn assert_perfect(pairs: &[(usize, usize)], n: usize) {
        let mut seen = vec![false; n];
        for &(i, j) in pairs {
            assert!(!seen[i] && !seen[j] && i != j);
            seen[i] = true;
            seen[j] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn empty_and_two_defects() {
        let t = CoarseTorus::new(6).unwrap();
        let s = syndrome_from_flips(&EdgeSet::empty(t));
        assert!(match_syndrome(&s).unwrap().is_empty());

        let flips = EdgeSet::from_edges(t, t.path(t.square(0, 0), t.square(2, 3)));
        let s = syndrome_from_flips(&flips);
        let c = match_syndrome(&s).unwrap();
        assert_eq!(c.len(), 5);
        assert!(syndrome_from_flips(&c).parity == s.parity);
    }

    #[test]
    fn six_defects_match_fifteen_pairings() {
        let t = CoarseTorus::new(6).unwrap();
        let mut rng = seeding::rng(17);
        for _ in 0..50 {
            let mut defects: Vec<usize> = Vec::new();
            while defects.len() < 6 {
                let s = rng.random_range(0..36);
                if !defects.contains(&s) {
                    defects.push(s);
                }
            }
            let w = distance_matrix(t, &defects);
            let pairs = branch_and_bound(&w);
            assert_perfect(&pairs, 6);
            assert_eq!(pairing_weight(&w, &pairs), exhaustive(&w));
        }
    }

    #[test]
    fn blossom_matches_exhaustive() {
        for n in [2, 4, 6, 8, 10] {
            for seed in 0..40 {
                let w = random_weights(n, seed * 31 + n as u64);
                let best = exhaustive(&w);
                let pairs = blossom_min_pairing(&w);
                assert_perfect(&pairs, n);
                assert_eq!(pairing_weight(&w, &pairs), best, "n = {n}, seed = {seed}");
                assert_eq!(pairing_weight(&w, &branch_and_bound(&w)), best);
            }
        }
    }

    #[test]
    fn blossom_matches_branch_and_bound_on_torus_syndromes() {
        let t = CoarseTorus::new(8).unwrap();
        let mut checked = 0;
        for seed in 0..400 {
            let flips = sample_edge_flips(8, 0.08, seed).unwrap();
            let defects = syndrome_from_flips(&flips).defects();
            if defects.len() > EXACT_SEARCH_LIMIT || defects.is_empty() {
                continue;
            }
            let w = distance_matrix(t, &defects);
            assert_eq!(pairing_weight(&w, &blossom_min_pairing(&w)), pairing_weight(&w, &branch_and_bound(&w)));
            checked += 1;
        }
        assert!(checked > 100);
    }

    #[test]
    fn correction_always_clears_syndrome() {
        for (m, p) in [(4, 0.1), (6, 0.2), (8, 0.15), (8, 0.4)] {
            for seed in 0..30 {
                let flips = sample_edge_flips(m, p, seed).unwrap();
                let s = syndrome_from_flips(&flips);
                let c = match_syndrome(&s).unwrap();
                let residual = flips.symmetric_difference(&c).unwrap();
                assert!(residual.boundary().iter().all(|&odd| !odd));
            }
        }
    }

    #[test]
    fn max_weight_without_cardinality() {
        // path a-b-c-d with heavy middle edge: best is the middle edge alone
        let edges = [(0, 1, 1), (1, 2, 10), (2, 3, 1)];
        let mate = max_weight_matching(4, &edges, false);
        assert_eq!(mate, vec![None, Some(2), Some(1), None]);
        let mate = max_weight_matching(4, &edges, true);
        assert_eq!(mate, vec![Some(1), Some(0), Some(3), Some(2)]);
    }
}
