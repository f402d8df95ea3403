//! Planar embedding (left-right planarity test) and augmentation to a maximal planar graph.

use std::collections::HashMap;

use super::rotation::RotationSystem;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

/// Half-edge lists with clockwise/counterclockwise links and a leftmost marker.
struct HalfEdges {
    cw: Vec<HashMap<usize, usize>>,
    ccw: Vec<HashMap<usize, usize>>,
    leftmost: Vec<Option<usize>>,
}

impl HalfEdges {
    fn new(n: usize) -> Self {
        HalfEdges { cw: vec![HashMap::new(); n], ccw: vec![HashMap::new(); n], leftmost: vec![None; n] }
    }

    fn add_only(&mut self, v: usize, w: usize) {
        self.cw[v].insert(w, w);
        self.ccw[v].insert(w, w);
        self.leftmost[v] = Some(w);
    }

    /// Inserts `w` immediately clockwise of `reference`.
    fn add_after_ccw(&mut self, v: usize, w: usize, reference: Option<usize>) {
        let Some(r) = reference.filter(|_| !self.cw[v].is_empty()) else {
            return self.add_only(v, w);
        };
        let r_cw = self.cw[v][&r];
        self.cw[v].insert(w, r_cw);
        self.ccw[v].insert(w, r);
        self.ccw[v].insert(r_cw, w);
        self.cw[v].insert(r, w);
    }

    /// Inserts `w` immediately counterclockwise of `reference`.
    fn add_after_cw(&mut self, v: usize, w: usize, reference: usize) {
        let r_ccw = self.ccw[v][&reference];
        self.cw[v].insert(w, reference);
        self.ccw[v].insert(w, r_ccw);
        self.cw[v].insert(r_ccw, w);
        self.ccw[v].insert(reference, w);
        if self.leftmost[v] == Some(reference) {
            self.leftmost[v] = Some(w);
        }
    }

    fn add_first(&mut self, v: usize, w: usize) {
        match self.leftmost[v] {
            None => self.add_only(v, w),
            Some(l) => self.add_after_cw(v, w, l),
        }
    }
}

struct LrState<'a> {
    adj: &'a [Vec<usize>],
    height: Vec<Option<usize>>,
    edges: Vec<(usize, usize)>,
    oriented: HashMap<(usize, usize), usize>,
    out: Vec<Vec<usize>>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<i64>,
    parent_edge: Vec<Option<usize>>,
    ordered: Vec<Vec<usize>>,
    refs: Vec<Option<usize>>,
    side: Vec<i64>,
    stack: Vec<ConflictPair>,
    stack_bottom: Vec<usize>,
    lowpt_edge: Vec<usize>,
    left_ref: Vec<usize>,
    right_ref: Vec<usize>,
    emb: HalfEdges,
}

impl<'a> LrState<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        LrState {
            adj,
            height: vec![None; n],
            edges: Vec::new(),
            oriented: HashMap::new(),
            out: vec![Vec::new(); n],
            lowpt: Vec::new(),
            lowpt2: Vec::new(),
            nesting: Vec::new(),
            parent_edge: vec![None; n],
            ordered: vec![Vec::new(); n],
            refs: Vec::new(),
            side: Vec::new(),
            stack: Vec::new(),
            stack_bottom: Vec::new(),
            lowpt_edge: Vec::new(),
            left_ref: vec![0; n],
            right_ref: vec![0; n],
            emb: HalfEdges::new(n),
        }
    }

    fn orient(&mut self, v: usize) {
        let e = self.parent_edge[v];
        for &w in &self.adj[v] {
            if self.oriented.contains_key(&(v, w)) || self.oriented.contains_key(&(w, v)) {
                continue;
            }
            let vw = self.edges.len();
            self.edges.push((v, w));
            self.oriented.insert((v, w), vw);
            self.out[v].push(vw);
            let hv = self.height[v].unwrap();
            self.lowpt.push(hv);
            self.lowpt2.push(hv);
            self.nesting.push(0);
            match self.height[w] {
                None => {
                    self.parent_edge[w] = Some(vw);
                    self.height[w] = Some(hv + 1);
                    self.orient(w);
                }
                Some(hw) => self.lowpt[vw] = hw,
            }
            self.nesting[vw] = 2 * self.lowpt[vw] as i64;
            if self.lowpt2[vw] < hv {
                // chordal
                self.nesting[vw] += 1;
            }
            if let Some(e) = e {
                if self.lowpt[vw] < self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                    self.lowpt[e] = self.lowpt[vw];
                } else if self.lowpt[vw] > self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
                } else {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
                }
            }
        }
    }

    fn conflicting(&self, i: &Interval, b: usize) -> bool {
        !i.is_empty() && i.high.is_some_and(|h| self.lowpt[h] > self.lowpt[b])
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        match (p.left.low, p.right.low) {
            (None, Some(r)) => self.lowpt[r],
            (Some(l), None) => self.lowpt[l],
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (None, None) => usize::MAX,
        }
    }

    fn test(&mut self, v: usize) -> bool {
        let e = self.parent_edge[v];
        let ordered = self.ordered[v].clone();
        for (k, &ei) in ordered.iter().enumerate() {
            let w = self.edges[ei].1;
            self.stack_bottom[ei] = self.stack.len();
            if self.parent_edge[w] == Some(ei) {
                if !self.test(w) {
                    return false;
                }
            } else {
                self.lowpt_edge[ei] = ei;
                self.stack.push(ConflictPair {
                    left: Interval::default(),
                    right: Interval { low: Some(ei), high: Some(ei) },
                });
            }
            if self.lowpt[ei] < self.height[v].unwrap() {
                let e = e.expect("return edge below the root");
                if k == 0 {
                    self.lowpt_edge[e] = self.lowpt_edge[ei];
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        if let Some(e) = e {
            self.remove_back_edges(e);
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::default();
        loop {
            let Some(mut q) = self.stack.pop() else { return false };
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let q_low = q.right.low.unwrap();
            if self.lowpt[q_low] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else if let Some(pl) = p.right.low {
                    self.refs[pl] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.refs[q_low] = Some(self.lowpt_edge[e]);
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last().copied() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(pl) = p.right.low {
                self.refs[pl] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else if let Some(pl) = p.left.low {
                self.refs[pl] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.edges[e].0;
        let hu = self.height[u].unwrap();
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != hu {
                break;
            }
            let p = self.stack.pop().unwrap();
            if let Some(l) = p.left.low {
                self.side[l] = -1;
            }
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high.filter(|&h| self.edges[h].1 == u) {
                p.left.high = self.refs[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.refs[l] = p.right.low;
                    self.side[l] = -1;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high.filter(|&h| self.edges[h].1 == u) {
                p.right.high = self.refs[h];
            }
            if p.right.high.is_none() {
                if let Some(r) = p.right.low {
                    self.refs[r] = p.left.low;
                    self.side[r] = -1;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < hu {
            if let Some(top) = self.stack.last() {
                let (hl, hr) = (top.left.high, top.right.high);
                self.refs[e] = match (hl, hr) {
                    (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => hl,
                    (Some(_), None) => hl,
                    _ => hr,
                };
            }
        }
    }

    fn sign(&mut self, e: usize) -> i64 {
        if let Some(r) = self.refs[e] {
            self.side[e] *= self.sign(r);
            self.refs[e] = None;
        }
        self.side[e]
    }

    fn embed(&mut self, v: usize) {
        let ordered = self.ordered[v].clone();
        for ei in ordered {
            let w = self.edges[ei].1;
            if self.parent_edge[w] == Some(ei) {
                self.emb.add_first(w, v);
                self.left_ref[v] = w;
                self.right_ref[v] = w;
                self.embed(w);
            } else if self.side[ei] == 1 {
                self.emb.add_after_ccw(w, v, Some(self.right_ref[w]));
            } else {
                self.emb.add_after_cw(w, v, self.left_ref[w]);
                self.left_ref[w] = v;
            }
        }
    }

    fn sort_by_nesting(&mut self) {
        for v in 0..self.adj.len() {
            let mut o = self.out[v].clone();
            o.sort_by_key(|&e| self.nesting[e]);
            self.ordered[v] = o;
        }
    }

    fn run(mut self) -> Option<RotationSystem> {
        let n = self.adj.len();
        let m: usize = self.adj.iter().map(Vec::len).sum::<usize>() / 2;
        if n > 2 && m > 3 * n - 6 {
            return None;
        }
        let mut roots = Vec::new();
        for v in 0..n {
            if self.height[v].is_none() {
                self.height[v] = Some(0);
                roots.push(v);
                self.orient(v);
            }
        }
        let ne = self.edges.len();
        self.refs = vec![None; ne];
        self.side = vec![1; ne];
        self.stack_bottom = vec![0; ne];
        self.lowpt_edge = vec![0; ne];
        self.sort_by_nesting();
        for &r in &roots {
            if !self.test(r) {
                return None;
            }
        }
        for e in 0..ne {
            self.nesting[e] *= self.sign(e);
        }
        self.sort_by_nesting();
        for v in 0..n {
            let mut prev = None;
            for &e in &self.ordered[v].clone() {
                let w = self.edges[e].1;
                self.emb.add_after_ccw(v, w, prev);
                prev = Some(w);
            }
        }
        for &r in &roots {
            self.embed(r);
        }
        let mut rot = vec![Vec::new(); n];
        for (v, ring) in rot.iter_mut().enumerate() {
            let Some(start) = self.emb.leftmost[v] else { continue };
            let mut cur = start;
            loop {
                ring.push(cur);
                cur = self.emb.cw[v][&cur];
                if cur == start || ring.len() > self.adj[v].len() {
                    break;
                }
            }
        }
        Some(RotationSystem::new(rot))
    }
}

/// Computes a combinatorial planar embedding of `g`, or fails with `NotPlanar`.
pub fn embed_planar(g: &Graph) -> Result<RotationSystem> {
    let adj = g.adjacency();
    let rs = LrState::new(&adj)
        .run()
        .ok_or_else(|| Error::NotPlanar(format!("graph with {} vertices and {} edges", g.n, g.edge_count())))?;
    let ok = (0..g.n).all(|v| rs.degree(v) == adj[v].len()) && rs.check_simple().is_ok() && rs.satisfies_euler();
    if !ok {
        return Err(Error::Internal("planarity test produced an inconsistent embedding".into()));
    }
    Ok(rs)
}

/// Adds edges to an embedded graph until every face is a triangle.
///
/// Components are joined first; then each face longer than three gets a chord between
/// two distinct non-adjacent vertices of its walk, scanning from the least label.
pub fn triangulate_embedding(mut rs: RotationSystem) -> Result<RotationSystem> {
    let n = rs.n();
    if n < 3 {
        return Err(Error::Precondition(format!("cannot triangulate a graph on {n} vertices")));
    }
    let comps = rs.to_graph().components();
    for pair in comps.windows(2) {
        let (a, b) = (pair[0][0], pair[1][0]);
        match rs.rotation(a).first().copied() {
            Some(x) => rs.insert_after(a, x, b),
            None => rs.push_neighbor(a, b),
        }
        match rs.rotation(b).first().copied() {
            Some(x) => rs.insert_after(b, x, a),
            None => rs.push_neighbor(b, a),
        }
    }
    while let Some(walk) = rs.faces().into_iter().find(|f| f.len() > 3) {
        let k = walk.len();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| (walk[i], i));
        let chord = order.iter().find_map(|&i| {
            let mut js: Vec<usize> = (2..k - 1).map(|d| (i + d) % k).collect();
            js.sort_by_key(|&j| (walk[j], j));
            js.into_iter().find(|&j| walk[i] != walk[j] && !rs.has_edge(walk[i], walk[j])).map(|j| (i, j))
        });
        let (i, j) = chord.ok_or_else(|| Error::Internal(format!("face {walk:?} admits no chord")))?;
        rs.add_chord(&walk, i, j);
    }
    if rs.edge_count() != 3 * n - 6 || !rs.satisfies_euler() {
        return Err(Error::Internal("augmentation did not produce a maximal planar graph".into()));
    }
    Ok(rs)
}
