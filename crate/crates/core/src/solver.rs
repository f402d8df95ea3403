//! End-to-end construction of packings for planar contact graphs.
//!
//! A trilaterated double-wheel packing is flowed across the flips of a path to the
//! target triangulation, re-normalizing the marked tridisk before each flip. Targets
//! that are not maximal are first completed to a triangulation; the extra contacts are
//! opened afterwards by a separation flow.

use log::{debug, info};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::disks::{canonical_tridisk, inner_soddy_disk, Disk, Packing, DEFAULT_CONTACT_TOL};
use crate::error::{Error, Result};
use crate::flow::{choose_marks, flip_flow, radius_floor, separation_flow, FlowOptions, FlowState};
use crate::graph::{Edge, Graph};
use crate::moebius::canonicalize_tridisk;
use crate::triangulation::{
    embed_planar, flip_path_via, triangulate_embedding, DoubleWheel, Kind, StackingPlan, Triangulation,
};

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Randomizes the seed double wheel (hubs and rim order) and hence the flip path.
    pub seed: Option<u64>,
    /// Tolerance for reading off the final contact graph.
    pub contact_tol: f64,
    /// Inversive-distance margin for edges opened by the separation flow.
    pub delta: f64,
    pub flow: FlowOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { seed: None, contact_tol: 1e-6, delta: 1e-3, flow: FlowOptions::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlipSummary {
    pub removed: Edge,
    pub inserted: Edge,
    pub marks: [usize; 3],
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub s_final: f64,
    pub event_residual: f64,
    pub min_radius: f64,
    pub min_sigma_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub contact_graph_exact: bool,
    pub max_contact_residual: f64,
    pub min_non_edge_invdist: f64,
    pub min_radius: f64,
    pub radius_floor: f64,
    pub min_sigma_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub graph: Graph,
    pub augmentation: Vec<Edge>,
    pub hubs: Option<[usize; 2]>,
    pub rim: Vec<usize>,
    pub flip_count: usize,
    pub flips: Vec<FlipSummary>,
    pub separation_steps: usize,
    pub verification: Verification,
}

/// Callback receiving `(flip index, state)` for each accepted flow step.
pub type FrameSink<'a> = &'a mut dyn FnMut(usize, &FlowState);

/// Canonical tridisk on the base triple, then one inner Soddy disk per stacking step.
pub fn trilaterated_packing(plan: &StackingPlan) -> Result<Packing> {
    let n = plan.n();
    crate::triangulation::trilaterated_graph(plan)?;
    let canon = canonical_tridisk();
    let mut disks: Vec<Option<Disk>> = vec![None; n];
    for (k, &v) in plan.base.iter().enumerate() {
        disks[v] = Some(canon.disks[k]);
    }
    for &(x, [a, b, c]) in &plan.steps {
        let get = |v: usize| disks[v].ok_or_else(|| Error::Domain(format!("vertex {v} used before placement")));
        disks[x] = Some(inner_soddy_disk(&get(a)?, &get(b)?, &get(c)?, DEFAULT_CONTACT_TOL)?);
    }
    let disks = disks.into_iter().map(|d| d.expect("every vertex is placed")).collect();
    Packing::new(disks, DEFAULT_CONTACT_TOL)
}

/// Contacts of `p`: pairs whose inversive distance is within `tol` of one.
pub fn contact_graph(p: &Packing, tol: f64) -> Result<Graph> {
    let mut edges = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let d = p.invdist(i, j);
            if d < 1.0 - tol {
                return Err(Error::NotAPacking { i, j, invdist: d });
            }
            if (d - 1.0).abs() <= tol {
                edges.push((i, j));
            }
        }
    }
    Graph::new(p.len(), edges)
}

/// Normalizes both packings on `marks` and returns their largest coordinate deviation.
pub fn normalize_and_compare(p: &Packing, q: &Packing, marks: [usize; 3]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Precondition(format!("packings have {} and {} disks", p.len(), q.len())));
    }
    let (a, _) = canonicalize_tridisk(p, marks)?;
    let (b, _) = canonicalize_tridisk(q, marks)?;
    Ok(a.max_deviation(&b))
}

/// Residual and separation statistics of `p` against `g`.
pub fn verify(p: &Packing, g: &Graph, tol: f64) -> Verification {
    let mut max_res: f64 = 0.0;
    let mut min_non = f64::INFINITY;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let d = p.invdist(i, j);
            if g.has_edge(i, j) {
                max_res = max_res.max((d - 1.0).abs());
            } else {
                min_non = min_non.min(d);
            }
        }
    }
    let exact = contact_graph(p, tol).map(|c| c == *g).unwrap_or(false);
    Verification {
        contact_graph_exact: exact,
        max_contact_residual: max_res,
        min_non_edge_invdist: min_non,
        min_radius: p.min_radius(),
        radius_floor: radius_floor(p.len()),
        min_sigma_ratio: f64::NAN,
    }
}

fn wheel_for(m: &Triangulation, seed: Option<u64>) -> DoubleWheel {
    match seed {
        Some(s) => DoubleWheel::shuffled(m.n(), &mut ChaCha8Rng::seed_from_u64(s)),
        None => DoubleWheel::for_target(m),
    }
}

/// Packing whose contact graph is the maximal planar graph `m`.
pub fn solve_maximal(m: &Triangulation, opts: &SolveOptions) -> Result<(Packing, SolveReport)> {
    solve_maximal_with(m, opts, None)
}

pub fn solve_maximal_with(
    m: &Triangulation,
    opts: &SolveOptions,
    mut frames: Option<FrameSink<'_>>,
) -> Result<(Packing, SolveReport)> {
    if m.kind() != Kind::Maximal {
        return Err(Error::Precondition("solve_maximal needs a maximal planar graph".into()));
    }
    let n = m.n();
    let wheel = wheel_for(m, opts.seed);
    let plan = wheel.stacking_plan();
    let mut graph = wheel.triangulation()?;
    let mut packing = trilaterated_packing(&plan)?;
    let path = flip_path_via(&graph, m, &wheel)?;
    info!("solving n = {n}: {} flips from double wheel with hubs ({}, {})", path.len(), wheel.u, wheel.v);

    let mut flips = Vec::with_capacity(path.len());
    let mut min_ratio = f64::INFINITY;
    for (k, mv) in path.iter().enumerate() {
        let e = mv.removed;
        let marks = choose_marks(&graph.remove_edge(e)?, e);
        let (start, _) = canonicalize_tridisk(&packing, marks)?;
        let mut hook = |s: &FlowState| {
            if let Some(f) = frames.as_mut() {
                f(k, s)
            }
        };
        let out = flip_flow(&start, &graph, e, marks, &opts.flow, Some(&mut hook)).map_err(|f| {
            log::error!("flip {k} of {} ({e}) failed: {f}", path.len());
            f.error
        })?;
        if out.mv.inserted != mv.inserted {
            return Err(Error::Internal(format!(
                "flip of {e} produced {} instead of {}",
                out.mv.inserted, mv.inserted
            )));
        }
        let t = &out.trace;
        let term = t.termination.clone().expect("completed flows record a termination");
        debug!("flip {k}: {e} -> {} in {} steps, s* = {}", mv.inserted, t.samples.len(), term.s);
        min_ratio = min_ratio.min(t.min_sigma_ratio());
        flips.push(FlipSummary {
            removed: e,
            inserted: mv.inserted,
            marks,
            accepted_steps: t.samples.len(),
            rejected_steps: t.rejected_steps,
            s_final: term.s,
            event_residual: term.event_residual,
            min_radius: t.min_radius(),
            min_sigma_ratio: t.min_sigma_ratio(),
        });
        packing = out.packing;
        graph = out.graph;
    }

    let target = m.to_graph();
    let mut verification = verify(&packing, &target, opts.contact_tol);
    verification.min_sigma_ratio = min_ratio;
    if !verification.contact_graph_exact {
        return Err(Error::Verification(format!(
            "final contact graph differs from the target (max residual {:e}, min non-edge {})",
            verification.max_contact_residual, verification.min_non_edge_invdist
        )));
    }
    let report = SolveReport {
        graph: target,
        augmentation: Vec::new(),
        hubs: Some([wheel.u, wheel.v]),
        rim: wheel.rim.clone(),
        flip_count: path.len(),
        flips,
        separation_steps: 0,
        verification,
    };
    Ok((Packing::new(packing.into_disks(), DEFAULT_CONTACT_TOL)?, report))
}

/// Packing whose contact graph is exactly the planar graph `g`.
pub fn solve_planar(g: &Graph, opts: &SolveOptions) -> Result<(Packing, SolveReport)> {
    solve_planar_with(g, opts, None)
}

pub fn solve_planar_with(
    g: &Graph,
    opts: &SolveOptions,
    frames: Option<FrameSink<'_>>,
) -> Result<(Packing, SolveReport)> {
    let n = g.n;
    if n <= 2 {
        return solve_tiny(g, opts);
    }
    let rs = embed_planar(g)?;
    if g.edge_count() == 3 * n - 6 {
        let m = Triangulation::from_graph(g)?;
        return solve_maximal_with(&m, opts, frames);
    }
    let m = Triangulation::from_rotation(triangulate_embedding(rs)?, Kind::Maximal)?;
    let augmentation: Vec<Edge> = m.edges().into_iter().filter(|e| !g.edges.contains(e)).collect();
    info!("augmented with {} edges", augmentation.len());
    let mut frames = frames;
    let (packing, mut report) = solve_maximal_with(&m, opts, frames.as_mut().map(|f| &mut **f as FrameSink<'_>))?;
    let k = report.flip_count;
    let mut hook = |s: &FlowState| {
        if let Some(f) = frames.as_mut() {
            f(k, s)
        }
    };
    let sep = separation_flow(&packing, &m, g, opts.delta, &opts.flow, Some(&mut hook))?;
    let mut verification = verify(&sep.packing, g, opts.contact_tol);
    verification.min_sigma_ratio = report.verification.min_sigma_ratio.min(sep.min_sigma_ratio);
    if !verification.contact_graph_exact {
        return Err(Error::Verification("contact graph after separation differs from the input".into()));
    }
    report.graph = g.clone();
    report.augmentation = augmentation;
    report.separation_steps = sep.steps;
    report.verification = verification;
    Ok((Packing::new(sep.packing.into_disks(), DEFAULT_CONTACT_TOL)?, report))
}

/// One or two disks: unit disks, tangent when the edge is present.
fn solve_tiny(g: &Graph, opts: &SolveOptions) -> Result<(Packing, SolveReport)> {
    let gap = if g.edge_count() == 1 { 2.0 } else { 4.0 };
    let disks: Vec<Disk> = (0..g.n).map(|i| Disk::new(gap * i as f64, 0.0, 1.0)).collect::<Result<_>>()?;
    let p = Packing::new(disks, DEFAULT_CONTACT_TOL)?;
    let verification = verify(&p, g, opts.contact_tol);
    let report = SolveReport {
        graph: g.clone(),
        augmentation: Vec::new(),
        hubs: None,
        rim: Vec::new(),
        flip_count: 0,
        flips: Vec::new(),
        separation_steps: 0,
        verification,
    };
    Ok((p, report))
}
