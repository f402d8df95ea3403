//! Labeled maximal and almost-maximal planar graphs as rotation systems, edge flips,
//! stacked (trilaterated) graphs and flip-path planning.

mod embed;
mod flip_path;
mod rotation;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub use embed::{embed_planar, triangulate_embedding};
pub use flip_path::{canonicalize_to, flip_path, flip_path_via, replay, DoubleWheel};
pub use rotation::RotationSystem;

use crate::error::{Error, Result};
use crate::graph::{connected_without, is_three_connected, Edge, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// All faces are triangles; `3n − 6` edges.
    Maximal,
    /// Exactly one quadrilateral face; `3n − 7` edges.
    AlmostMaximal,
}

#[derive(Debug, Clone)]
pub struct Triangulation {
    rs: RotationSystem,
    kind: Kind,
}

impl PartialEq for Triangulation {
    /// Labeled equality of the underlying graphs; for 3-connected planar graphs this is
    /// equality of rotation systems up to reflection.
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.n() == other.n() && self.rs.edges() == other.rs.edges()
    }
}

/// An edge flip: diagonal `a-c` of quadrilateral `(a, b, c, d)` replaced by `b-d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipMove {
    pub removed: Edge,
    pub inserted: Edge,
    pub quad: [usize; 4],
}

impl FlipMove {
    /// The flip that undoes this one.
    pub fn reversed(&self) -> FlipMove {
        let [a, b, c, d] = self.quad;
        FlipMove { removed: self.inserted, inserted: self.removed, quad: [b, c, d, a] }
    }
}

impl Triangulation {
    pub(crate) fn from_rotation_unchecked(rs: RotationSystem, kind: Kind) -> Self {
        Triangulation { rs: rs.normalized(), kind }
    }

    /// Wraps a rotation system after checking every structural invariant.
    pub fn from_rotation(rs: RotationSystem, kind: Kind) -> Result<Self> {
        let t = Triangulation::from_rotation_unchecked(rs, kind);
        t.validate()?;
        Ok(t)
    }

    /// Embeds an abstract maximal planar graph.
    ///
    /// The faces of a maximal planar graph with `n ≥ 4` are exactly its non-separating
    /// triangles; they are oriented consistently starting from the lexicographically
    /// least face.
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let n = g.n;
        if n < 3 {
            return Err(Error::InvalidTriangulation(format!("need n >= 3, got {n}")));
        }
        if g.edge_count() != 3 * n - 6 {
            return Err(Error::InvalidTriangulation(format!(
                "{} edges, a maximal planar graph on {n} vertices has {}",
                g.edge_count(),
                3 * n - 6
            )));
        }
        let adj = g.adjacency();
        let mut faces: Vec<[usize; 3]> = Vec::new();
        for e in &g.edges {
            for &c in &adj[e.1] {
                if c > e.1 && g.has_edge(e.0, c) && (n == 3 || connected_without(&adj, &[e.0, e.1, c])) {
                    faces.push([e.0, e.1, c]);
                }
            }
        }
        if n == 3 {
            faces.push(faces[0]);
        }
        if faces.len() != 2 * n - 4 {
            return Err(Error::NotPlanar(format!("found {} facial triangles, expected {}", faces.len(), 2 * n - 4)));
        }
        // orient faces so that each edge is traversed once in each direction
        let mut by_edge: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        for (i, f) in faces.iter().enumerate() {
            for k in 0..3 {
                by_edge.entry(Edge::new(f[k], f[(k + 1) % 3])).or_default().push(i);
            }
        }
        if by_edge.values().any(|v| v.len() != 2) {
            return Err(Error::NotPlanar("facial triangles do not form a closed surface".into()));
        }
        let mut oriented: Vec<Option<[usize; 3]>> = vec![None; faces.len()];
        oriented[0] = Some(faces[0]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let f = oriented[i].unwrap();
            for k in 0..3 {
                let (x, y) = (f[k], f[(k + 1) % 3]);
                for &j in &by_edge[&Edge::new(x, y)] {
                    if j == i {
                        continue;
                    }
                    // neighbor must traverse y → x
                    let g3 = faces[j];
                    let apex = g3.iter().copied().find(|&v| v != x && v != y).unwrap();
                    let want = [y, x, apex];
                    match oriented[j] {
                        None => {
                            oriented[j] = Some(want);
                            queue.push_back(j);
                        }
                        Some(o) if !same_cycle(&o, &want) => {
                            return Err(Error::NotPlanar("facial triangles are not orientable".into()))
                        }
                        _ => {}
                    }
                }
            }
        }
        // face (x → v → y) means y precedes x in the rotation at v
        let mut before: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
        for f in oriented.iter().map(|f| f.unwrap()) {
            for k in 0..3 {
                let (x, v, y) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
                before[v].insert(x, y);
            }
        }
        let mut rot = vec![Vec::new(); n];
        for v in 0..n {
            let start = adj[v][0];
            let mut cur = start;
            loop {
                rot[v].push(cur);
                cur = *before[v].get(&cur).ok_or_else(|| Error::NotPlanar(format!("rotation at {v} is broken")))?;
                if cur == start {
                    break;
                }
                if rot[v].len() > adj[v].len() {
                    return Err(Error::NotPlanar(format!("rotation at {v} is not a cycle")));
                }
            }
            if rot[v].len() != adj[v].len() {
                return Err(Error::NotPlanar(format!("vertex {v} is not a disk in the face structure")));
            }
            // `before` chains go clockwise; store counterclockwise
            rot[v].reverse();
        }
        Triangulation::from_rotation(RotationSystem::new(rot), Kind::Maximal)
    }

    pub fn n(&self) -> usize {
        self.rs.n()
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn rotation_system(&self) -> &RotationSystem {
        &self.rs
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        self.rs.rotation(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rs.degree(v)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a < self.n() && b < self.n() && self.rs.has_edge(a, b)
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.rs.edges()
    }

    pub fn edge_count(&self) -> usize {
        self.rs.edge_count()
    }

    pub fn to_graph(&self) -> Graph {
        self.rs.to_graph()
    }

    pub fn faces(&self) -> Vec<Vec<usize>> {
        self.rs.faces()
    }

    /// Triangular faces as sorted vertex triples.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out: Vec<[usize; 3]> = self
            .faces()
            .into_iter()
            .filter(|f| f.len() == 3)
            .map(|f| {
                let mut t = [f[0], f[1], f[2]];
                t.sort_unstable();
                t
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// The two face apexes across edge `a-c`: `(b, d)` with faces `(a, c, b)` and `(c, a, d)`.
    pub fn apexes(&self, a: usize, c: usize) -> Result<(usize, usize)> {
        if !self.has_edge(a, c) {
            return Err(Error::EdgeAbsent(Edge::new(a, c)));
        }
        Ok((self.rs.pred(c, a), self.rs.pred(a, c)))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let bad = |m: String| Err(Error::InvalidTriangulation(m));
        self.rs.check_simple().or_else(bad)?;
        if n < 3 {
            return bad(format!("need n >= 3, got {n}"));
        }
        let (want_edges, quads) = match self.kind {
            Kind::Maximal => (3 * n - 6, 0),
            Kind::AlmostMaximal => (3 * n - 7, 1),
        };
        if self.edge_count() != want_edges {
            return bad(format!("{} edges, expected {want_edges}", self.edge_count()));
        }
        if !self.rs.satisfies_euler() {
            return bad("Euler characteristic mismatch".into());
        }
        let faces = self.faces();
        let n_quads = faces.iter().filter(|f| f.len() == 4).count();
        if faces.iter().any(|f| f.len() != 3 && f.len() != 4) || n_quads != quads {
            return bad("face sizes do not match the triangulation kind".into());
        }
        for f in &faces {
            let distinct: BTreeSet<_> = f.iter().collect();
            if distinct.len() != f.len() {
                return bad(format!("face {f:?} repeats a vertex"));
            }
        }
        if n >= 4 {
            let adj: Vec<Vec<usize>> = (0..n).map(|v| self.rotation(v).to_vec()).collect();
            if !is_three_connected(&adj) {
                return bad("graph is not 3-connected".into());
            }
        }
        Ok(())
    }

    pub fn is_flippable(&self, e: Edge) -> Result<bool> {
        let (b, d) = self.apexes(e.0, e.1)?;
        if self.kind != Kind::Maximal || self.n() < 5 {
            return Ok(false);
        }
        Ok(b != d && !self.rs.has_edge(b, d))
    }

    /// `G⁻ = G \ e⁻`, an almost-maximal graph with quadrilateral `(a, b, c, d)`.
    pub fn remove_edge(&self, e: Edge) -> Result<Triangulation> {
        if !self.is_flippable(e)? {
            return Err(Error::NotFlippable(e));
        }
        let mut rs = self.rs.clone();
        rs.remove_edge(e.0, e.1);
        Ok(Triangulation::from_rotation_unchecked(rs, Kind::AlmostMaximal))
    }

    /// Inserts the diagonal `x-y` into the quadrilateral face of an almost-maximal graph.
    pub fn add_diagonal(&self, e: Edge) -> Result<Triangulation> {
        if self.kind != Kind::AlmostMaximal {
            return Err(Error::Precondition("add_diagonal needs an almost-maximal graph".into()));
        }
        let quad = self
            .faces()
            .into_iter()
            .find(|f| f.len() == 4)
            .ok_or_else(|| Error::Internal("almost-maximal graph without a quadrilateral".into()))?;
        let i = quad.iter().position(|&v| v == e.0);
        let j = quad.iter().position(|&v| v == e.1);
        match (i, j) {
            (Some(i), Some(j)) if (i + 2) % 4 == j => {
                let mut rs = self.rs.clone();
                rs.add_chord(&quad, i, j);
                Ok(Triangulation::from_rotation_unchecked(rs, Kind::Maximal))
            }
            _ => Err(Error::Domain(format!("{e} is not a diagonal of the quadrilateral {quad:?}"))),
        }
    }

    /// The quadrilateral face of an almost-maximal graph.
    pub fn quadrilateral(&self) -> Option<[usize; 4]> {
        self.faces().into_iter().find(|f| f.len() == 4).map(|f| [f[0], f[1], f[2], f[3]])
    }

    /// Flips `e⁻`, returning the new maximal graph and the move.
    pub fn flip(&self, e: Edge) -> Result<(Triangulation, FlipMove)> {
        let mut t = self.clone();
        let mv = t.flip_in_place(e)?;
        t.rs = t.rs.normalized();
        Ok((t, mv))
    }

    pub(crate) fn flip_in_place(&mut self, e: Edge) -> Result<FlipMove> {
        if !self.is_flippable(e)? {
            return Err(Error::NotFlippable(e));
        }
        let (a, c) = (e.0, e.1);
        let (b, d) = self.apexes(a, c)?;
        // rotation at b holds ... a, c ...; at d holds ... c, a ...
        self.rs.remove_edge(a, c);
        self.rs.insert_after(b, a, d);
        self.rs.insert_after(d, c, b);
        Ok(FlipMove { removed: e, inserted: Edge::new(b, d), quad: [a, b, c, d] })
    }

    /// Replays a move, checking that it is flippable and matches.
    pub fn apply_move(&self, mv: &FlipMove) -> Result<Triangulation> {
        let (t, got) = self.flip(mv.removed)?;
        if got.inserted != mv.inserted {
            return Err(Error::Inconsistent(format!(
                "flip of {} inserts {}, expected {}",
                mv.removed, got.inserted, mv.inserted
            )));
        }
        Ok(t)
    }
}

fn same_cycle(a: &[usize; 3], b: &[usize; 3]) -> bool {
    (0..3).any(|k| a[k] == b[0] && a[(k + 1) % 3] == b[1] && a[(k + 2) % 3] == b[2])
}

/// Order in which vertices are stacked into triangular faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackingPlan {
    /// Vertices of the initial triangle, in canonical tridisk order.
    pub base: [usize; 3],
    /// `(new_vertex, face)` in insertion order.
    pub steps: Vec<(usize, [usize; 3])>,
}

impl StackingPlan {
    pub fn n(&self) -> usize {
        3 + self.steps.len()
    }

    /// Stacks vertex 3 into (0, 1, 2) and each later vertex `i` into (0, 1, i − 1):
    /// the double wheel with hubs 0 and 1.
    pub fn fan(n: usize) -> Self {
        assert!(n >= 3, "fan plan needs n >= 3");
        let steps = (3..n).map(|i| if i == 3 { (3, [0, 1, 2]) } else { (i, [0, 1, i - 1]) }).collect();
        StackingPlan { base: [0, 1, 2], steps }
    }

    fn check(&self) -> Result<()> {
        let n = self.n();
        let mut seen = vec![false; n];
        for &v in self.base.iter().chain(self.steps.iter().map(|(v, _)| v)) {
            if v >= n || seen[v] {
                return Err(Error::Domain(format!("stacking plan uses vertex {v} twice or out of range")));
            }
            seen[v] = true;
        }
        Ok(())
    }
}

/// The stacked triangulation produced by a plan.
pub fn trilaterated_graph(plan: &StackingPlan) -> Result<Triangulation> {
    plan.check()?;
    let n = plan.n();
    let [p, q, r] = plan.base;
    let mut rs = RotationSystem::empty(n);
    rs.push_neighbor(p, q);
    rs.push_neighbor(p, r);
    rs.push_neighbor(q, r);
    rs.push_neighbor(q, p);
    rs.push_neighbor(r, p);
    rs.push_neighbor(r, q);
    let mut placed = vec![false; n];
    for v in plan.base {
        placed[v] = true;
    }
    let mut outer = plan.base;
    outer.sort_unstable();
    let mut base_used = false;
    for &(x, face) in &plan.steps {
        if face.iter().any(|&v| v >= n || !placed[v]) {
            return Err(Error::Domain(format!("face {face:?} not present when stacking {x}")));
        }
        let mut key = face;
        key.sort_unstable();
        if key == outer {
            // the base triangle bounds the outer face once its interior is used
            if base_used {
                return Err(Error::Domain(format!("face {face:?} is the outer face when stacking {x}")));
            }
            base_used = true;
        }
        let walk = rs
            .faces()
            .into_iter()
            .find(|f| {
                if f.len() != 3 {
                    return false;
                }
                let mut s = [f[0], f[1], f[2]];
                s.sort_unstable();
                s == key
            })
            .ok_or_else(|| Error::Domain(format!("face {face:?} not present when stacking {x}")))?;
        let (a, b, c) = (walk[0], walk[1], walk[2]);
        rs.insert_after(a, b, x);
        rs.insert_after(b, c, x);
        rs.insert_after(c, a, x);
        rs.push_neighbor(x, a);
        rs.push_neighbor(x, b);
        rs.push_neighbor(x, c);
        placed[x] = true;
    }
    Triangulation::from_rotation(rs, Kind::Maximal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stacking_into_outer_face_is_rejected() {
        let plan = StackingPlan { base: [0, 1, 2], steps: vec![(3, [0, 1, 2]), (4, [2, 1, 0])] };
        assert!(trilaterated_graph(&plan).is_err());
    }

    pub(crate) fn k4() -> Triangulation {
        trilaterated_graph(&StackingPlan::fan(4)).unwrap()
    }

    #[test]
    fn small_stacked_graphs() {
        let t3 = trilaterated_graph(&StackingPlan::fan(3)).unwrap();
        assert_eq!(t3.edge_count(), 3);
        assert_eq!(t3.faces().len(), 2);
        let t4 = k4();
        assert_eq!(t4.edge_count(), 6);
        assert!((0..4).all(|v| t4.degree(v) == 3));
    }

    #[test]
    fn fan_plan_is_double_wheel() {
        for n in 5..12 {
            let t = trilaterated_graph(&StackingPlan::fan(n)).unwrap();
            assert_eq!(t.degree(0), n - 1);
            assert_eq!(t.degree(1), n - 1);
            t.validate().unwrap();
        }
    }

    #[test]
    fn stacking_into_missing_face_fails() {
        let plan = StackingPlan { base: [0, 1, 2], steps: vec![(3, [0, 1, 2]), (4, [0, 1, 5])] };
        assert!(trilaterated_graph(&plan).is_err());
        // once 3 sits inside, (0, 1, 2) only bounds the outer face
        let plan = StackingPlan { base: [0, 1, 2], steps: vec![(3, [0, 1, 2]), (4, [0, 1, 2])] };
        assert!(trilaterated_graph(&plan).is_err());
    }

    #[test]
    fn k4_has_no_flippable_edges() {
        let t = k4();
        for e in t.edges() {
            assert!(!t.is_flippable(e).unwrap());
        }
    }

    #[test]
    fn double_wheel_flippability_matches_apex_adjacency() {
        let t = trilaterated_graph(&StackingPlan::fan(5)).unwrap();
        for e in t.edges() {
            let (b, d) = t.apexes(e.0, e.1).unwrap();
            assert_eq!(t.is_flippable(e).unwrap(), !t.has_edge(b, d));
        }
        // hub-hub edge: apexes 2 and 4 are not adjacent
        assert!(t.is_flippable(Edge(0, 1)).unwrap());
        // rim edge 2-3: apexes are the hubs, which are adjacent
        assert!(!t.is_flippable(Edge(2, 3)).unwrap());
    }

    #[test]
    fn absent_edge_is_domain_error() {
        let t = trilaterated_graph(&StackingPlan::fan(6)).unwrap();
        assert!(matches!(t.is_flippable(Edge(2, 5)), Err(Error::EdgeAbsent(_))));
    }

    #[test]
    fn remove_and_restore() {
        let t = trilaterated_graph(&StackingPlan::fan(6)).unwrap();
        let e = Edge(0, 1);
        assert!(t.is_flippable(e).unwrap());
        let gm = t.remove_edge(e).unwrap();
        gm.validate().unwrap();
        assert_eq!(gm.edge_count(), t.edge_count() - 1);
        assert_eq!(gm.faces().len(), t.faces().len() - 1);
        let quad = gm.quadrilateral().unwrap();
        // removing the hub-hub edge leaves both hubs on the quadrilateral
        assert!(quad.contains(&0) && quad.contains(&1));
        assert!(quad.contains(&2) && quad.contains(&5));
        let back = gm.add_diagonal(e).unwrap();
        assert_eq!(back.rotation_system(), t.rotation_system());
    }

    #[test]
    fn flip_is_an_involution() {
        let t = trilaterated_graph(&StackingPlan::fan(7)).unwrap();
        for e in t.edges() {
            if !t.is_flippable(e).unwrap() {
                continue;
            }
            let (h, mv) = t.flip(e).unwrap();
            h.validate().unwrap();
            assert_eq!(h.edge_count(), 3 * 7 - 6);
            let [a, b, c, d] = mv.quad;
            assert_eq!(mv.removed, Edge::new(a, c));
            assert_eq!(mv.inserted, Edge::new(b, d));
            let (back, mv2) = h.flip(mv.inserted).unwrap();
            assert_eq!(mv2.inserted, e);
            assert_eq!(back.rotation_system(), t.rotation_system());
        }
    }

    #[test]
    fn from_graph_reproduces_embedding() {
        let t = trilaterated_graph(&StackingPlan {
            base: [0, 1, 2],
            steps: vec![(3, [0, 1, 2]), (4, [0, 1, 3]), (5, [1, 2, 3]), (6, [0, 2, 3]), (7, [1, 3, 4])],
        })
        .unwrap();
        let g = t.to_graph();
        let u = Triangulation::from_graph(&g).unwrap();
        assert_eq!(u, t);
        let same = u.rotation_system() == t.rotation_system()
            || u.rotation_system() == &t.rotation_system().mirrored().normalized();
        assert!(same);
    }

    #[test]
    fn from_graph_rejects_nonplanar() {
        // K5 minus nothing has 10 edges but 3*5-6 = 9
        let k5 = Graph::new(5, (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b)))).unwrap();
        assert!(Triangulation::from_graph(&k5).is_err());
        // K3,3 plus three edges: 12 edges on 6 vertices, not planar
        let mut edges: Vec<(usize, usize)> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        edges.extend([(0, 1), (1, 2), (3, 4)]);
        let g = Graph::new(6, edges).unwrap();
        assert!(Triangulation::from_graph(&g).is_err());
    }
}
