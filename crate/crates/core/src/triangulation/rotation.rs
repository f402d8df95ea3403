use std::collections::BTreeSet;

use crate::graph::{Edge, Graph};

/// Combinatorial embedding: for each vertex, its neighbors in counterclockwise order.
///
/// Faces are traced with the face on the left: the dart following `u → v` is
/// `v → w` where `w` precedes `u` in the rotation at `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    rot: Vec<Vec<usize>>,
}

impl RotationSystem {
    pub fn new(rot: Vec<Vec<usize>>) -> Self {
        RotationSystem { rot }
    }

    pub fn empty(n: usize) -> Self {
        RotationSystem { rot: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.rot.len()
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rot[a].contains(&b)
    }

    pub fn edge_count(&self) -> usize {
        self.rot.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        let mut out = BTreeSet::new();
        for (v, nbrs) in self.rot.iter().enumerate() {
            for &w in nbrs {
                if v < w {
                    out.insert(Edge(v, w));
                }
            }
        }
        out
    }

    pub fn to_graph(&self) -> Graph {
        Graph { n: self.n(), edges: self.edges() }
    }

    fn position(&self, v: usize, w: usize) -> usize {
        self.rot[v].iter().position(|&x| x == w).unwrap_or_else(|| panic!("{w} is not a neighbor of {v}"))
    }

    /// Neighbor of `v` immediately before `w` in counterclockwise order.
    pub fn pred(&self, v: usize, w: usize) -> usize {
        let r = &self.rot[v];
        r[(self.position(v, w) + r.len() - 1) % r.len()]
    }

    /// Neighbor of `v` immediately after `w` in counterclockwise order.
    pub fn succ(&self, v: usize, w: usize) -> usize {
        let r = &self.rot[v];
        r[(self.position(v, w) + 1) % r.len()]
    }

    pub fn next_dart(&self, u: usize, v: usize) -> (usize, usize) {
        (v, self.pred(v, u))
    }

    /// Vertex walk of the face to the left of dart `u → v`.
    pub fn face_of_dart(&self, u: usize, v: usize) -> Vec<usize> {
        let mut walk = vec![u];
        let (mut a, mut b) = self.next_dart(u, v);
        while (a, b) != (u, v) {
            walk.push(a);
            (a, b) = self.next_dart(a, b);
        }
        walk
    }

    /// All faces, each as a vertex walk; every dart is used exactly once.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut used: Vec<Vec<bool>> = self.rot.iter().map(|r| vec![false; r.len()]).collect();
        let mut faces = Vec::new();
        for u in 0..self.n() {
            for i in 0..self.rot[u].len() {
                if used[u][i] {
                    continue;
                }
                let v = self.rot[u][i];
                let walk = self.face_of_dart(u, v);
                let mut a = u;
                for k in 0..walk.len() {
                    let b = walk[(k + 1) % walk.len()];
                    let idx = self.position(a, b);
                    used[a][idx] = true;
                    a = b;
                }
                faces.push(walk);
            }
        }
        faces
    }

    /// Inserts `w` into the rotation at `v` immediately after `after`.
    pub(crate) fn insert_after(&mut self, v: usize, after: usize, w: usize) {
        let i = self.position(v, after);
        self.rot[v].insert(i + 1, w);
    }

    pub(crate) fn push_neighbor(&mut self, v: usize, w: usize) {
        self.rot[v].push(w);
    }

    pub(crate) fn remove_edge(&mut self, a: usize, b: usize) {
        let i = self.position(a, b);
        self.rot[a].remove(i);
        let j = self.position(b, a);
        self.rot[b].remove(j);
    }

    /// Adds a chord inside a face, between walk positions `i` and `j`.
    pub(crate) fn add_chord(&mut self, walk: &[usize], i: usize, j: usize) {
        let k = walk.len();
        let (vi, vj) = (walk[i], walk[j]);
        let (ni, nj) = (walk[(i + 1) % k], walk[(j + 1) % k]);
        self.insert_after(vi, ni, vj);
        self.insert_after(vj, nj, vi);
    }

    /// Reverses every rotation (mirror embedding).
    pub fn mirrored(&self) -> Self {
        RotationSystem { rot: self.rot.iter().map(|r| r.iter().rev().copied().collect()).collect() }
    }

    /// Rotations rotated to start at their least neighbor.
    pub(crate) fn normalized(mut self) -> Self {
        for r in &mut self.rot {
            if let Some(i) = r.iter().enumerate().min_by_key(|(_, &w)| w).map(|(i, _)| i) {
                r.rotate_left(i);
            }
        }
        self
    }

    /// Checks symmetry, simplicity and that neighbor ids are in range.
    pub(crate) fn check_simple(&self) -> Result<(), String> {
        let n = self.n();
        for (v, r) in self.rot.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &w in r {
                if w >= n {
                    return Err(format!("neighbor {w} of {v} out of range"));
                }
                if w == v {
                    return Err(format!("loop at {v}"));
                }
                if !seen.insert(w) {
                    return Err(format!("multi-edge ({v}, {w})"));
                }
                if !self.rot[w].contains(&v) {
                    return Err(format!("asymmetric rotation at ({v}, {w})"));
                }
            }
        }
        Ok(())
    }

    /// Number of connected components, counting isolated vertices.
    pub(crate) fn component_count(&self) -> usize {
        self.to_graph().components().len()
    }

    /// Checks `V − E + F = 2C`, summing Euler's formula over the components, each
    /// embedded on its own sphere.
    pub fn satisfies_euler(&self) -> bool {
        let isolated = self.rot.iter().filter(|r| r.is_empty()).count();
        let v = self.n() as i64;
        let e = self.edge_count() as i64;
        // an isolated vertex has no darts but bounds one face
        let f = self.faces().len() as i64 + isolated as i64;
        v - e + f == 2 * self.component_count() as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> RotationSystem {
        RotationSystem::new(vec![vec![1, 2], vec![2, 0], vec![0, 1]])
    }

    #[test]
    fn triangle_faces() {
        let rs = triangle();
        let faces = rs.faces();
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 3));
        assert!(rs.satisfies_euler());
    }

    #[test]
    fn path_has_one_face() {
        let rs = RotationSystem::new(vec![vec![1], vec![0, 2], vec![1]]);
        let faces = rs.faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].len(), 4);
        assert!(rs.satisfies_euler());
    }

    #[test]
    fn chord_splits_face() {
        let mut rs = RotationSystem::new(vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]]);
        assert_eq!(rs.faces().len(), 2);
        let walk = rs.face_of_dart(0, 1);
        assert_eq!(walk.len(), 4);
        let i = walk.iter().position(|&v| v == 0).unwrap();
        let j = walk.iter().position(|&v| v == 2).unwrap();
        rs.add_chord(&walk, i, j);
        rs.check_simple().unwrap();
        let faces = rs.faces();
        assert_eq!(faces.len(), 3);
        assert!(rs.satisfies_euler());
    }
}
