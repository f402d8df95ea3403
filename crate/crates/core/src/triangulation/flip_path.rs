//! Flip paths between labeled maximal planar graphs through a canonical double wheel.
//!
//! A double wheel `W(u, v; q₁ … q_m)` has hubs `u` and `v` adjacent to every other
//! vertex and the rim path `q₁ - q₂ - … - q_m`. Any maximal planar graph is brought to
//! a prescribed double wheel in three stages: raise `u` to degree `n − 1`, reorder the
//! link of `u` by ear swaps, then raise `v` without touching edges at `u`.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{trilaterated_graph, FlipMove, Kind, StackingPlan, Triangulation};
use crate::error::{Error, Result};
use crate::graph::Edge;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleWheel {
    pub u: usize,
    pub v: usize,
    pub rim: Vec<usize>,
}

impl DoubleWheel {
    pub fn new(u: usize, v: usize, rim: Vec<usize>) -> Result<Self> {
        let n = rim.len() + 2;
        let mut seen = vec![false; n];
        for &x in rim.iter().chain([&u, &v]) {
            if x >= n || seen[x] {
                return Err(Error::Domain(format!("double wheel labels must be a permutation of 0..{n}")));
            }
            seen[x] = true;
        }
        if n < 3 {
            return Err(Error::Domain("double wheel needs n >= 3".into()));
        }
        Ok(DoubleWheel { u, v, rim })
    }

    pub fn n(&self) -> usize {
        self.rim.len() + 2
    }

    /// Hubs are the two highest-degree vertices (ties to the lower label); the rim is
    /// the remaining labels in ascending order.
    pub fn for_target(t: &Triangulation) -> Self {
        let n = t.n();
        let mut by_degree: Vec<usize> = (0..n).collect();
        by_degree.sort_by_key(|&x| (std::cmp::Reverse(t.degree(x)), x));
        let (u, v) = (by_degree[0], by_degree[1]);
        let rim = (0..n).filter(|&x| x != u && x != v).collect();
        DoubleWheel { u, v, rim }
    }

    /// Uniformly random hubs and rim order.
    pub fn shuffled<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut labels: Vec<usize> = (0..n).collect();
        labels.shuffle(rng);
        DoubleWheel { u: labels[0], v: labels[1], rim: labels[2..].to_vec() }
    }

    /// Stacks `q₁` onto the base `(u, v, q₁)` and then each `qᵢ` into `(u, v, qᵢ₋₁)`.
    pub fn stacking_plan(&self) -> StackingPlan {
        let (u, v) = (self.u, self.v);
        let base = [u, v, self.rim[0]];
        let steps = self.rim.windows(2).map(|w| (w[1], [u, v, w[0]])).collect();
        StackingPlan { base, steps }
    }

    pub fn triangulation(&self) -> Result<Triangulation> {
        trilaterated_graph(&self.stacking_plan())
    }
}

struct Walker {
    t: Triangulation,
    moves: Vec<FlipMove>,
}

impl Walker {
    fn flip(&mut self, e: Edge) -> Result<FlipMove> {
        let mv = self
            .t
            .flip_in_place(e)
            .map_err(|err| Error::Internal(format!("canonicalization hit an unflippable edge: {err}")))?;
        self.moves.push(mv);
        Ok(mv)
    }

    /// Flips until `hub` is adjacent to every other vertex, never touching `protected`.
    ///
    /// Each chosen edge joins two neighbors of `hub` and has a face apex outside the
    /// closed neighborhood; the triangle it forms with `hub` separates its apexes, so it
    /// is flippable. Link edges raise the degree; other chords reduce the number of
    /// edges among neighbors of `hub`.
    fn raise(&mut self, hub: usize, protected: Option<usize>) -> Result<()> {
        let n = self.t.n();
        while self.t.degree(hub) < n - 1 {
            let nbrs: BTreeSet<usize> = self.t.rotation(hub).iter().copied().collect();
            let outside = |w: usize| w != hub && !nbrs.contains(&w) && Some(w) != protected;
            let mut fallback = None;
            let mut chosen = None;
            for e in self.t.edges() {
                if e.contains(hub) || protected.is_some_and(|p| e.contains(p)) {
                    continue;
                }
                if !(nbrs.contains(&e.0) && nbrs.contains(&e.1)) {
                    continue;
                }
                let (b, d) = self.t.apexes(e.0, e.1)?;
                if !(outside(b) || outside(d)) || !self.t.is_flippable(e)? {
                    continue;
                }
                if b == hub || d == hub {
                    chosen = Some(e);
                    break;
                }
                fallback.get_or_insert(e);
            }
            let e = chosen
                .or(fallback)
                .ok_or_else(|| Error::Internal(format!("no degree-raising flip at vertex {hub}")))?;
            self.flip(e)?;
        }
        Ok(())
    }

    /// Link of the dominant vertex `u`, listed in rotation order starting after `v`.
    fn link_after(&self, u: usize, v: usize) -> Vec<usize> {
        let r = self.t.rotation(u);
        let i = r.iter().position(|&x| x == v).unwrap();
        (1..r.len()).map(|k| r[(i + k) % r.len()]).collect()
    }

    /// Flips chords at `x` until its only neighbors are `u`, `a` and `y`.
    fn make_ear(&mut self, u: usize, x: usize, a: usize, y: usize) -> Result<()> {
        while self.t.degree(x) > 3 {
            let z = self.t.rotation(x).iter().copied().filter(|&z| z != u && z != a && z != y).min().unwrap();
            self.flip(Edge::new(x, z))?;
        }
        Ok(())
    }

    /// Swaps `x` with its successor in the link of `u` using two flips.
    fn swap_forward(&mut self, u: usize, x: usize) -> Result<()> {
        let rs = self.t.rotation_system();
        let a = rs.pred(u, x);
        let y = rs.succ(u, x);
        let b = rs.succ(u, y);
        self.make_ear(u, x, a, y)?;
        let first = self.flip(Edge::new(u, y))?;
        let second = self.flip(Edge::new(a, x))?;
        if first.inserted != Edge::new(x, b) || second.inserted != Edge::new(u, y) {
            return Err(Error::Internal(format!("ear swap of {x} and {y} around {u} went astray")));
        }
        Ok(())
    }

    fn sort_link(&mut self, u: usize, v: usize, rim: &[usize]) -> Result<()> {
        let m = rim.len();
        if m <= 2 {
            return Ok(());
        }
        let mut rank = vec![0usize; self.t.n()];
        for (i, &q) in rim.iter().enumerate() {
            rank[q] = i;
        }
        let current = self.link_after(u, v);
        let forward: Vec<usize> = current.iter().map(|&x| rank[x]).collect();
        let backward: Vec<usize> = current.iter().rev().map(|&x| rank[x]).collect();
        if inversions(&backward) < inversions(&forward) {
            for (i, &q) in rim.iter().enumerate() {
                rank[q] = m - 1 - i;
            }
        }
        loop {
            let mut swapped = false;
            let mut link = self.link_after(u, v);
            for i in 0..m - 1 {
                if rank[link[i]] > rank[link[i + 1]] {
                    self.swap_forward(u, link[i])?;
                    link.swap(i, i + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        Ok(())
    }
}

fn inversions(xs: &[usize]) -> usize {
    (0..xs.len()).map(|i| (i + 1..xs.len()).filter(|&j| xs[i] > xs[j]).count()).sum()
}

/// Flips taking `t` to the double wheel `w`, exactly as labeled graphs.
pub fn canonicalize_to(t: &Triangulation, w: &DoubleWheel) -> Result<Vec<FlipMove>> {
    check_maximal(t)?;
    if w.n() != t.n() {
        return Err(Error::Precondition(format!("double wheel has {} vertices, graph has {}", w.n(), t.n())));
    }
    let target = w.triangulation()?;
    if t.n() < 5 {
        return if t.edges() == target.edges() {
            Ok(Vec::new())
        } else {
            Err(Error::Internal("distinct maximal planar graphs on fewer than 5 vertices".into()))
        };
    }
    let mut walker = Walker { t: t.clone(), moves: Vec::new() };
    walker.raise(w.u, None)?;
    walker.sort_link(w.u, w.v, &w.rim)?;
    walker.raise(w.v, Some(w.u))?;
    if walker.t.edges() != target.edges() {
        return Err(Error::Internal("canonicalization did not reach the double wheel".into()));
    }
    Ok(walker.moves)
}

fn check_maximal(t: &Triangulation) -> Result<()> {
    if t.kind() != Kind::Maximal {
        return Err(Error::Precondition("flip paths need maximal planar graphs".into()));
    }
    Ok(())
}

/// Replays `moves` from `t`, checking flippability and the inserted edge at each step.
pub fn replay(t: &Triangulation, moves: &[FlipMove]) -> Result<Triangulation> {
    let mut cur = t.clone();
    for mv in moves {
        cur = cur.apply_move(mv)?;
    }
    Ok(cur)
}

/// Flip path from `source` to `target` through the double wheel chosen from `target`.
pub fn flip_path(source: &Triangulation, target: &Triangulation) -> Result<Vec<FlipMove>> {
    flip_path_via(source, target, &DoubleWheel::for_target(target))
}

/// Flip path from `source` to `target` through the given double wheel.
pub fn flip_path_via(source: &Triangulation, target: &Triangulation, w: &DoubleWheel) -> Result<Vec<FlipMove>> {
    check_maximal(source)?;
    check_maximal(target)?;
    if source.n() != target.n() {
        return Err(Error::Precondition(format!("vertex counts differ: {} and {}", source.n(), target.n())));
    }
    let goal = target.edges();
    if source.edges() == goal {
        return Ok(Vec::new());
    }
    for e in source.edges() {
        if source.is_flippable(e)? {
            let (h, mv) = source.flip(e)?;
            if h.edges() == goal {
                return Ok(vec![mv]);
            }
        }
    }
    let there = canonicalize_to(source, w)?;
    let back = canonicalize_to(target, w)?;
    let mut path: Vec<FlipMove> = Vec::with_capacity(there.len() + back.len());
    for mv in there.into_iter().chain(back.iter().rev().map(FlipMove::reversed)) {
        match path.last() {
            Some(last) if last.inserted == mv.removed && last.removed == mv.inserted => {
                path.pop();
            }
            _ => path.push(mv),
        }
    }
    Ok(path)
}
