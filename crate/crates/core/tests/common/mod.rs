#![allow(dead_code)]

use katflow::graph::{Edge, Graph};
use katflow::triangulation::{trilaterated_graph, StackingPlan, Triangulation};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random stacked triangulation on `n` vertices with shuffled labels.
pub fn random_stacked<R: Rng>(n: usize, rng: &mut R) -> Triangulation {
    random_stacking_plan(n, rng).1
}

/// A random stacking plan with shuffled labels and its triangulation.
pub fn random_stacking_plan<R: Rng>(n: usize, rng: &mut R) -> (StackingPlan, Triangulation) {
    let mut plan = StackingPlan { base: [0, 1, 2], steps: Vec::new() };
    let mut t = trilaterated_graph(&plan).unwrap();
    for x in 3..n {
        let faces: Vec<[usize; 3]> = t.triangles().into_iter().filter(|f| x == 3 || *f != [0, 1, 2]).collect();
        plan.steps.push((x, faces[rng.gen_range(0..faces.len())]));
        t = trilaterated_graph(&plan).unwrap();
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let plan = StackingPlan {
        base: plan.base.map(|v| perm[v]),
        steps: plan.steps.iter().map(|&(x, f)| (perm[x], f.map(|v| perm[v]))).collect(),
    };
    let t = trilaterated_graph(&plan).unwrap();
    (plan, t)
}

pub fn random_flips<R: Rng>(t: &Triangulation, k: usize, rng: &mut R) -> Triangulation {
    let mut t = t.clone();
    for _ in 0..k {
        let cands: Vec<Edge> = t.edges().into_iter().filter(|&e| t.is_flippable(e).unwrap()).collect();
        if cands.is_empty() {
            break;
        }
        t = t.flip(cands[rng.gen_range(0..cands.len())]).unwrap().0;
    }
    t
}

/// Random labeled maximal planar graph: random stacking followed by up to 30 flips.
pub fn random_maximal<R: Rng>(n: usize, rng: &mut R) -> Triangulation {
    let k = rng.gen_range(0..=30);
    random_flips(&random_stacked(n, rng), k, rng)
}

pub fn random_cycle<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Graph::new(n, (0..n).map(|i| (order[i], order[(i + 1) % n]))).unwrap()
}

pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    Graph::new(n, (1..n).map(|v| (labels[v], labels[rng.gen_range(0..v)]))).unwrap()
}

fn connected_without(g: &Graph, removed: Option<usize>) -> bool {
    let adj = g.adjacency();
    let start = (0..g.n).find(|&v| Some(v) != removed).unwrap();
    let mut seen = vec![false; g.n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] && Some(w) != removed {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    (0..g.n).all(|v| seen[v] || Some(v) == removed)
}

pub fn is_biconnected(g: &Graph) -> bool {
    connected_without(g, None) && (0..g.n).all(|v| connected_without(g, Some(v)))
}

/// Random 2-connected planar graph: a random triangulation with edges deleted while
/// 2-connectivity survives; at least one edge is always removed.
pub fn random_biconnected<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let mut g = random_maximal(n, rng).to_graph();
    let target = rng.gen_range(1..=n);
    let mut removed = 0;
    let mut edges: Vec<Edge> = g.edges.iter().copied().collect();
    edges.shuffle(rng);
    for e in edges {
        if removed == target {
            break;
        }
        let mut h = g.clone();
        h.edges.remove(&e);
        if is_biconnected(&h) {
            g = h;
            removed += 1;
        }
    }
    assert!(removed > 0);
    g
}
