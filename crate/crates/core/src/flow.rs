//! Flip-flows and separation flows: predictor-corrector continuation on the set of
//! packings that hold a prescribed family of contacts.
//!
//! A flip-flow removes `e⁻ = a-c` from a maximal contact graph `G`, pins a marked
//! face, and raises `s = invdist(e⁻)` until the cross edge `e⁺ = b-d` comes into
//! contact. A separation flow opens a set of added edges while holding the rest.

use std::fmt;

use log::{debug, trace};
use nalgebra::DVector;

use crate::disks::{canonical_tridisk, Packing};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::jacobian::{assemble, columns, marked_edges, rank_certificate_of, solve_square, Column, Coord};
use crate::triangulation::{FlipMove, Kind, Triangulation};

#[derive(Debug, Clone)]
pub struct FlowOptions {
    pub initial_step: f64,
    pub min_step: f64,
    /// Upper bound on a step, relative to the current parameter value.
    pub max_step_ratio: f64,
    pub projection_tol: f64,
    pub max_newton: usize,
    pub event_tol: f64,
    pub max_event_iterations: usize,
    pub rank_tol: f64,
    pub max_steps: usize,
    /// Tolerance used to confirm the contact graph of the starting packing.
    pub contact_tol: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            initial_step: 1e-2,
            min_step: 1e-8,
            max_step_ratio: 0.5,
            projection_tol: 1e-11,
            max_newton: 20,
            event_tol: 1e-10,
            max_event_iterations: 60,
            rank_tol: 1e-9,
            max_steps: 100_000,
            contact_tol: 1e-6,
        }
    }
}

/// One accepted state along a flow.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub packing: Packing,
    /// Continuation parameter: `invdist(e⁻)` for flip-flows, the added-edge offset for
    /// separation flows.
    pub s: f64,
    /// `invdist(e⁺)`; `NaN` for separation flows.
    pub f_plus: f64,
    pub step: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub newton_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Termination {
    pub s: f64,
    pub event_residual: f64,
    pub event_iterations: usize,
}

#[derive(Debug, Clone, Default)]
pub struct FlowTrace {
    pub samples: Vec<FlowState>,
    pub rejected_steps: usize,
    pub termination: Option<Termination>,
}

impl FlowTrace {
    pub fn min_radius(&self) -> f64 {
        self.samples.iter().map(|s| s.packing.min_radius()).fold(f64::INFINITY, f64::min)
    }

    pub fn min_sigma_ratio(&self) -> f64 {
        self.samples.iter().map(|s| s.sigma_min / s.sigma_max).fold(f64::INFINITY, f64::min)
    }

    /// True if `f_plus` strictly decreases from sample to sample.
    pub fn f_plus_decreasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].f_plus < w[0].f_plus)
    }
}

/// A flow that stopped early, with everything recorded up to that point.
#[derive(Debug)]
pub struct FlowFailure {
    pub error: Error,
    pub trace: FlowTrace,
}

impl fmt::Display for FlowFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "flow aborted after {} accepted steps: {}", self.trace.samples.len(), self.error)
    }
}

impl std::error::Error for FlowFailure {}

impl From<FlowFailure> for Error {
    fn from(f: FlowFailure) -> Self {
        f.error
    }
}

#[derive(Debug, Clone)]
pub struct FlowOutcome {
    pub packing: Packing,
    /// The contact graph after the flip.
    pub graph: Triangulation,
    pub mv: FlipMove,
    pub marks: [usize; 3],
    pub trace: FlowTrace,
}

/// Lower bound on radii of unit-scale packings on `n` disks: `1 / (7n)ⁿ`.
pub fn radius_floor(n: usize) -> f64 {
    (7.0 * n as f64).powi(-(n as i32))
}

/// The triangular face of `g_minus` with the least sorted vertex triple avoiding both
/// endpoints of `e_minus`; the least face overall when every face touches one.
pub fn choose_marks(g_minus: &Triangulation, e_minus: Edge) -> [usize; 3] {
    let faces = g_minus.triangles();
    faces.iter().copied().find(|f| !f.contains(&e_minus.0) && !f.contains(&e_minus.1)).unwrap_or(faces[0])
}

/// Inversive-distance constraints `invdist(e) = base + rate · t` over free columns.
struct System {
    rows: Vec<Edge>,
    cols: Vec<Column>,
    base: Vec<f64>,
    rate: DVector<f64>,
}

impl System {
    fn target(&self, i: usize, t: f64) -> f64 {
        self.base[i] + self.rate[i] * t
    }

    fn residual(&self, p: &Packing, t: f64) -> DVector<f64> {
        DVector::from_fn(self.rows.len(), |i, _| p.invdist(self.rows[i].0, self.rows[i].1) - self.target(i, t))
    }

    fn converged(&self, r: &DVector<f64>, t: f64, tol: f64) -> bool {
        r.iter().enumerate().all(|(i, x)| x.abs() <= tol * self.target(i, t).abs().max(1.0))
    }

    fn shifted(&self, p: &Packing, dz: &DVector<f64>, scale: f64) -> Result<Packing> {
        let mut disks = p.disks().to_vec();
        for (c, &x) in self.cols.iter().zip(dz.iter()) {
            let d = &mut disks[c.vertex];
            match c.coord {
                Coord::X => d.center.x += scale * x,
                Coord::Y => d.center.y += scale * x,
                Coord::R => d.radius += scale * x,
            }
        }
        if let Some(d) = disks.iter().find(|d| !(d.radius > 0.0) || !d.center.x.is_finite() || !d.center.y.is_finite())
        {
            return Err(Error::StepFailure(format!("disk left the domain (radius {})", d.radius)));
        }
        Ok(Packing::from_disks_unchecked(disks, p.contact_tol()))
    }

    fn velocity(&self, p: &Packing) -> Result<DVector<f64>> {
        solve_square(&assemble(p, &self.rows, &self.cols), &self.rate)
    }

    fn rk4(&self, p: &Packing, h: f64) -> Result<Packing> {
        let k1 = self.velocity(p)?;
        let k2 = self.velocity(&self.shifted(p, &k1, h / 2.0)?)?;
        let k3 = self.velocity(&self.shifted(p, &k2, h / 2.0)?)?;
        let k4 = self.velocity(&self.shifted(p, &k3, h)?)?;
        let dz = (k1 + k2 * 2.0 + k3 * 2.0 + k4) / 6.0;
        self.shifted(p, &dz, h)
    }

    /// Newton projection onto the constraints at parameter `t`.
    fn project(&self, p: &Packing, t: f64, opts: &FlowOptions) -> Result<(Packing, usize)> {
        let mut cur = p.clone();
        for it in 0..=opts.max_newton {
            let r = self.residual(&cur, t);
            if self.converged(&r, t, opts.projection_tol) {
                return Ok((cur, it));
            }
            if it == opts.max_newton {
                break;
            }
            let dz = solve_square(&assemble(&cur, &self.rows, &self.cols), &r)?;
            cur = self.shifted(&cur, &dz, -1.0)?;
        }
        Err(Error::StepFailure(format!("projection did not converge in {} iterations", opts.max_newton)))
    }

    fn conditioning(&self, p: &Packing, opts: &FlowOptions) -> Result<(f64, f64)> {
        let cert = rank_certificate_of(&assemble(p, &self.rows, &self.cols), opts.rank_tol);
        if cert.ratio() < opts.rank_tol {
            return Err(Error::Singular(cert.ratio()));
        }
        Ok((cert.sigma_min, cert.sigma_max))
    }
}

fn pinned_system(g: &Graph, marks: [usize; 3], n: usize, driven: Option<Edge>) -> System {
    let pinned = marked_edges(marks);
    let rows: Vec<Edge> = g.edges.iter().copied().filter(|e| !pinned.contains(e)).collect();
    let cols = columns(n, |c| !marks.contains(&c.vertex));
    let base = rows.iter().map(|e| if Some(*e) == driven { 0.0 } else { 1.0 }).collect();
    let rate = DVector::from_fn(rows.len(), |i, _| if Some(rows[i]) == driven { 1.0 } else { 0.0 });
    System { rows, cols, base, rate }
}

/// Checks the contact graph of `p` against `g` at `tol`.
pub(crate) fn check_contacts(p: &Packing, g: &Graph, tol: f64) -> Result<()> {
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let d = p.invdist(i, j);
            let edge = g.has_edge(i, j);
            if edge && (d - 1.0).abs() > tol {
                return Err(Error::Verification(format!("edge ({i}, {j}) has inversive distance {d}")));
            }
            if !edge && d <= 1.0 + tol {
                return Err(Error::Verification(format!("non-edge ({i}, {j}) has inversive distance {d}")));
            }
        }
    }
    Ok(())
}

struct FlipContext<'a> {
    sys: System,
    e_plus: Edge,
    marks: [usize; 3],
    watched: Vec<Edge>,
    opts: &'a FlowOptions,
}

impl FlipContext<'_> {
    fn f_plus(&self, p: &Packing) -> f64 {
        p.invdist(self.e_plus.0, self.e_plus.1)
    }

    /// Membership checks other than the `e⁺` event.
    fn admissible(&self, p: &Packing) -> Result<()> {
        let tri = canonical_tridisk();
        for i in (0..p.len()).filter(|i| !self.marks.contains(i)) {
            if !tri.in_tricusp(&p.disk(i).center) {
                return Err(Error::StepFailure(format!("disk {i} left the tricusp")));
            }
        }
        for e in &self.watched {
            let d = p.invdist(e.0, e.1);
            if d <= 1.0 {
                return Err(Error::StepFailure(format!("non-edge {e} reached inversive distance {d}")));
            }
        }
        Ok(())
    }

    fn state(&self, p: Packing, s: f64, step: f64, iters: usize) -> Result<FlowState> {
        let (sigma_min, sigma_max) = self.sys.conditioning(&p, self.opts)?;
        let f_plus = self.f_plus(&p);
        Ok(FlowState { packing: p, s, f_plus, step, sigma_min, sigma_max, newton_iterations: iters })
    }

    fn advance(&self, from: &FlowState, h: f64) -> Result<(Packing, usize)> {
        let pred = self.sys.rk4(&from.packing, h)?;
        self.sys.project(&pred, from.s + h, self.opts)
    }

    /// Illinois regula falsi on `f_plus(s) − 1`, with bisection when the secant
    /// estimate falls outside the bracket.
    fn localize(&self, lo: &FlowState, hi_s: f64, hi_g: f64) -> Result<(Packing, f64, f64, usize)> {
        let (mut a, mut ga) = (lo.s, lo.f_plus - 1.0);
        let (mut b, mut gb) = (hi_s, hi_g);
        let mut side = 0i8;
        let mut best: Option<(Packing, f64, f64)> = None;
        for it in 1..=self.opts.max_event_iterations {
            let mut m = b - gb * (b - a) / (gb - ga);
            if !(m > a && m < b) {
                m = 0.5 * (a + b);
            }
            let (p, _) = self.advance(lo, m - lo.s)?;
            let g = self.f_plus(&p) - 1.0;
            trace!("event iteration {it}: s = {m}, g = {g:e}");
            if g.abs() <= self.opts.event_tol {
                return Ok((p, m, g, it));
            }
            if best.as_ref().is_none_or(|(_, _, bg)| g.abs() < bg.abs()) {
                best = Some((p, m, g));
            }
            if g > 0.0 {
                a = m;
                ga = g;
                if side == 1 {
                    gb *= 0.5;
                }
                side = 1;
            } else {
                b = m;
                gb = g;
                if side == -1 {
                    ga *= 0.5;
                }
                side = -1;
            }
        }
        let (_, s, g) = best.unwrap();
        Err(Error::StepFailure(format!("contact event not localized: best |f_plus - 1| = {:e} at s = {s}", g.abs())))
    }
}

/// Flows from a tridisk-contained packing with contact graph `g` to one whose contact
/// graph is `g` with `e_minus` flipped.
pub fn flip_flow(
    start: &Packing,
    g: &Triangulation,
    e_minus: Edge,
    marks: [usize; 3],
    opts: &FlowOptions,
    mut on_frame: Option<&mut dyn FnMut(&FlowState)>,
) -> std::result::Result<FlowOutcome, FlowFailure> {
    let mut trace = FlowTrace::default();
    let fail = |error: Error, trace: FlowTrace| FlowFailure { error, trace };
    let setup = (|| -> Result<(FlipContext<'_>, Triangulation, FlipMove)> {
        if g.kind() != Kind::Maximal {
            return Err(Error::Precondition("flip_flow needs a maximal contact graph".into()));
        }
        if g.n() != start.len() {
            return Err(Error::Precondition(format!("graph has {} vertices, packing has {}", g.n(), start.len())));
        }
        if g.n() < 5 || !g.is_flippable(e_minus)? {
            return Err(Error::NotFlippable(e_minus));
        }
        let (h, mv) = g.flip(e_minus)?;
        let g_minus = g.remove_edge(e_minus)?;
        if !g_minus.triangles().contains(&sorted(marks)) {
            return Err(Error::Precondition(format!("marks {marks:?} are not a face of G minus {e_minus}")));
        }
        let tri = canonical_tridisk();
        for (k, &m) in marks.iter().enumerate() {
            let (d, c) = (start.disk(m), &tri.disks[k]);
            if (d.center - c.center).norm() > 1e-9 || (d.radius - c.radius).abs() > 1e-9 {
                return Err(Error::Precondition(format!("marked disk {m} is not in canonical position")));
            }
        }
        check_contacts(start, &g.to_graph(), opts.contact_tol)
            .map_err(|e| Error::Precondition(format!("start packing does not realize G: {e}")))?;
        let graph = g.to_graph();
        let sys = pinned_system(&graph, marks, g.n(), Some(e_minus));
        let mut watched = Vec::new();
        for i in 0..g.n() {
            for j in i + 1..g.n() {
                let e = Edge(i, j);
                if !graph.has_edge(i, j) && e != mv.inserted {
                    watched.push(e);
                }
            }
        }
        Ok((FlipContext { sys, e_plus: mv.inserted, marks, watched, opts }, h, mv))
    })();
    let (ctx, h_graph, mv) = match setup {
        Ok(x) => x,
        Err(e) => return Err(fail(e, trace)),
    };

    let first = ctx.sys.project(start, 1.0, opts).and_then(|(p, it)| {
        ctx.admissible(&p)?;
        ctx.state(p, 1.0, 0.0, it)
    });
    let mut cur = match first {
        Ok(s) => s,
        Err(e) => return Err(fail(e, trace)),
    };
    if let Some(cb) = on_frame.as_mut() {
        cb(&cur);
    }
    trace.samples.push(cur.clone());
    if cur.f_plus <= 1.0 {
        return Err(fail(Error::Precondition(format!("{} already in contact", mv.inserted)), trace));
    }

    let mut ds = opts.initial_step;
    let mut attempts = 0usize;
    let mut last_problem = String::new();
    loop {
        attempts += 1;
        if attempts > opts.max_steps {
            return Err(fail(Error::MaxSteps(opts.max_steps), trace));
        }
        if ds < opts.min_step {
            let err = Error::StepFailure(format!(
                "step size fell below {:e} at s = {}: {last_problem}",
                opts.min_step, cur.s
            ));
            return Err(fail(err, trace));
        }
        let h = ds.min(opts.max_step_ratio * cur.s);
        let trial = ctx.advance(&cur, h).and_then(|(p, it)| {
            let g_val = ctx.f_plus(&p) - 1.0;
            if g_val >= 0.0 {
                ctx.admissible(&p)?;
            }
            Ok((p, it, g_val))
        });
        let (p, iters, g_val) = match trial {
            Ok(x) => x,
            Err(e) => {
                trace.rejected_steps += 1;
                last_problem = e.to_string();
                trace!("rejected step {h:e} at s = {}: {last_problem}", cur.s);
                ds *= 0.5;
                continue;
            }
        };
        if g_val.abs() <= opts.event_tol || g_val < 0.0 {
            let located = if g_val.abs() <= opts.event_tol {
                Ok((p, cur.s + h, g_val, 0))
            } else {
                ctx.localize(&cur, cur.s + h, g_val)
            };
            let (p, s_star, g_star, its) = match located {
                Ok(x) => x,
                Err(e) => return Err(fail(e, trace)),
            };
            debug!("contact event at s = {s_star} after {its} iterations, residual {g_star:e}");
            let finish = finish_on_h(&p, &h_graph, marks, opts).and_then(|p| {
                let s_end = p.invdist(e_minus.0, e_minus.1);
                let f_end = p.invdist(mv.inserted.0, mv.inserted.1);
                if (f_end - 1.0).abs() > opts.event_tol {
                    return Err(Error::StepFailure(format!("e+ residual {:e} after polishing", f_end - 1.0)));
                }
                let (sigma_min, sigma_max) = ctx.sys.conditioning(&p, opts)?;
                Ok(FlowState {
                    packing: p,
                    s: s_end,
                    f_plus: f_end,
                    step: s_end - cur.s,
                    sigma_min,
                    sigma_max,
                    newton_iterations: 0,
                })
            });
            let last = match finish {
                Ok(s) => s,
                Err(e) => return Err(fail(e, trace)),
            };
            if last.f_plus >= cur.f_plus {
                return Err(fail(Error::NonMonotone { s: last.s, prev: cur.f_plus, next: last.f_plus }, trace));
            }
            if let Some(cb) = on_frame.as_mut() {
                cb(&last);
            }
            trace.termination = Some(Termination { s: last.s, event_residual: g_star.abs(), event_iterations: its });
            let packing = last.packing.clone();
            trace.samples.push(last);
            return Ok(FlowOutcome { packing, graph: h_graph, mv, marks, trace });
        }
        let next = match ctx.state(p, cur.s + h, h, iters) {
            Ok(s) => s,
            Err(e) => {
                trace.rejected_steps += 1;
                last_problem = e.to_string();
                ds *= 0.5;
                continue;
            }
        };
        if next.f_plus >= cur.f_plus {
            trace.rejected_steps += 1;
            last_problem = format!("f_plus did not decrease ({} -> {})", cur.f_plus, next.f_plus);
            ds *= 0.5;
            continue;
        }
        trace!("s = {:.6}, f_plus = {:.6}, ds = {h:e}, newton = {iters}", next.s, next.f_plus);
        if iters <= 3 {
            ds *= 2.0;
        }
        cur = next;
        if let Some(cb) = on_frame.as_mut() {
            cb(&cur);
        }
        trace.samples.push(cur.clone());
    }
}

/// Newton polish onto the pinned contact constraints of `h`.
fn finish_on_h(p: &Packing, h: &Triangulation, marks: [usize; 3], opts: &FlowOptions) -> Result<Packing> {
    let sys = pinned_system(&h.to_graph(), marks, h.n(), None);
    Ok(sys.project(p, 0.0, opts)?.0)
}

/// Runs the flow that undoes `outcome`: `e⁺` is released and `e⁻` is driven back into
/// contact, with the same marks.
pub fn dual_flip_flow(outcome: &FlowOutcome, opts: &FlowOptions) -> std::result::Result<FlowOutcome, FlowFailure> {
    flip_flow(&outcome.packing, &outcome.graph, outcome.mv.inserted, outcome.marks, opts, None)
}

fn sorted(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

#[derive(Debug, Clone)]
pub struct SeparationOutcome {
    pub packing: Packing,
    pub marks: [usize; 3],
    pub steps: usize,
    pub min_radius: f64,
    pub min_sigma_ratio: f64,
}

/// Opens every edge of `m` missing from `g` to inversive distance at least `1 + delta`
/// while holding the edges of `g` in contact, with the centers of one face of `m`
/// pinned.
pub fn separation_flow(
    p: &Packing,
    m: &Triangulation,
    g: &Graph,
    delta: f64,
    opts: &FlowOptions,
    mut on_frame: Option<&mut dyn FnMut(&FlowState)>,
) -> Result<SeparationOutcome> {
    if !g.is_subgraph_of(&m.to_graph()) || m.n() != p.len() {
        return Err(Error::Precondition("graph must be a labeled subgraph of the packing's contact graph".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let marks = m.triangles()[0];
    let added: Vec<Edge> = m.edges().into_iter().filter(|e| !g.edges.contains(e)).collect();
    let min_r = p.min_radius();
    if added.is_empty() {
        return Ok(SeparationOutcome {
            packing: p.clone(),
            marks,
            steps: 0,
            min_radius: min_r,
            min_sigma_ratio: f64::NAN,
        });
    }
    let rows: Vec<Edge> = m.edges().into_iter().collect();
    let cols = columns(m.n(), |c| !(marks.contains(&c.vertex) && c.coord != Coord::R));
    let base = vec![1.0; rows.len()];
    let rate = DVector::from_fn(rows.len(), |i, _| if added.contains(&rows[i]) { 1.0 } else { 0.0 });
    let sys = System { rows, cols, base, rate };
    let non_edges: Vec<Edge> =
        (0..m.n()).flat_map(|i| (i + 1..m.n()).map(move |j| Edge(i, j))).filter(|e| !m.has_edge(e.0, e.1)).collect();

    let t_end = delta + 10.0 * opts.projection_tol;
    let (mut cur, _) = sys.project(p, 0.0, opts)?;
    let mut t = 0.0;
    let mut ds = opts.initial_step.min(delta / 4.0);
    let mut steps = 0;
    let mut min_radius = cur.min_radius();
    let mut min_ratio = f64::INFINITY;
    let mut attempts = 0;
    while t < t_end {
        attempts += 1;
        if attempts > opts.max_steps {
            return Err(Error::MaxSteps(opts.max_steps));
        }
        if ds < opts.min_step {
            return Err(Error::StepFailure(format!("separation step fell below {:e} at t = {t}", opts.min_step)));
        }
        let h = ds.min(t_end - t);
        let trial = sys.rk4(&cur, h).and_then(|q| sys.project(&q, t + h, opts)).and_then(|(q, it)| {
            if let Some(e) = non_edges.iter().find(|e| q.invdist(e.0, e.1) <= 1.0) {
                return Err(Error::StepFailure(format!("non-edge {e} came into contact")));
            }
            let (lo, hi) = sys.conditioning(&q, opts)?;
            Ok((q, it, lo, hi))
        });
        match trial {
            Ok((q, it, lo, hi)) => {
                let ratio = lo / hi;
                t += h;
                steps += 1;
                min_radius = min_radius.min(q.min_radius());
                min_ratio = min_ratio.min(ratio);
                if let Some(cb) = on_frame.as_mut() {
                    let state = FlowState {
                        packing: q.clone(),
                        s: t,
                        f_plus: f64::NAN,
                        step: h,
                        sigma_min: lo,
                        sigma_max: hi,
                        newton_iterations: it,
                    };
                    cb(&state);
                }
                cur = q;
                if it <= 3 {
                    ds *= 2.0;
                }
            }
            Err(e) => {
                trace!("separation step {h:e} rejected: {e}");
                ds *= 0.5;
            }
        }
    }
    for e in &added {
        let d = cur.invdist(e.0, e.1);
        if d < 1.0 + delta {
            return Err(Error::Verification(format!("added edge {e} only reached {d}")));
        }
    }
    for e in &g.edges {
        let d = cur.invdist(e.0, e.1);
        if (d - 1.0).abs() > opts.projection_tol {
            return Err(Error::Verification(format!("edge {e} drifted to {d}")));
        }
    }
    debug!("separation flow: {steps} steps, min radius {min_radius:e}");
    Ok(SeparationOutcome { packing: cur, marks, steps, min_radius, min_sigma_ratio: min_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{contact_graph, trilaterated_packing};
    use crate::triangulation::{trilaterated_graph, StackingPlan};

    fn fan5() -> (Triangulation, Packing) {
        let plan = StackingPlan::fan(5);
        (trilaterated_graph(&plan).unwrap(), trilaterated_packing(&plan).unwrap())
    }

    #[test]
    fn fan5_flip_reaches_h() {
        let (g, p) = fan5();
        let e = Edge(0, 3);
        let marks = choose_marks(&g.remove_edge(e).unwrap(), e);
        assert_eq!(marks, [0, 1, 2]);
        let out = flip_flow(&p, &g, e, marks, &FlowOptions::default(), None).unwrap();
        assert_eq!(out.mv.inserted, Edge(2, 4));
        let q = &out.packing;
        assert!((q.invdist(2, 4) - 1.0).abs() <= 1e-10);
        for e in out.graph.edges() {
            assert!((q.invdist(e.0, e.1) - 1.0).abs() <= 1e-11, "{e}");
        }
        assert_eq!(contact_graph(q, 1e-6).unwrap(), out.graph.to_graph());
        assert!(out.trace.f_plus_decreasing());
        assert!(out.trace.samples.windows(2).all(|w| w[1].s > w[0].s));
    }

    #[test]
    fn dual_flow_returns() {
        let (g, p) = fan5();
        let e = Edge(0, 3);
        let opts = FlowOptions::default();
        let out = flip_flow(&p, &g, e, [0, 1, 2], &opts, None).unwrap();
        let back = dual_flip_flow(&out, &opts).unwrap();
        assert_eq!(back.graph, g);
        assert!(back.packing.max_deviation(&p) <= 1e-7);
    }

    #[test]
    fn k4_has_nothing_to_flip() {
        let plan = StackingPlan::fan(4);
        let g = trilaterated_graph(&plan).unwrap();
        let p = trilaterated_packing(&plan).unwrap();
        let err = flip_flow(&p, &g, Edge(0, 3), [0, 1, 2], &FlowOptions::default(), None).unwrap_err();
        assert!(matches!(err.error, Error::NotFlippable(_)));
    }

    #[test]
    fn projection_fixes_on_manifold_points() {
        let (g, p) = fan5();
        let sys = pinned_system(&g.to_graph(), [0, 1, 2], 5, Some(Edge(0, 3)));
        let (q, _) = sys.project(&p, 1.0, &FlowOptions::default()).unwrap();
        assert!(q.max_deviation(&p) <= 1e-12);
        let r = sys.rk4(&p, 0.0).unwrap();
        assert_eq!(r.max_deviation(&p), 0.0);
    }

    #[test]
    fn separation_opens_added_edges() {
        let (m, p) = fan5();
        let g = Graph::new(5, m.edges().into_iter().filter(|e| *e != Edge(0, 3)).map(|e| (e.0, e.1))).unwrap();
        let out = separation_flow(&p, &m, &g, 1e-3, &FlowOptions::default(), None).unwrap();
        assert!(out.packing.invdist(0, 3) >= 1.001);
        assert_eq!(contact_graph(&out.packing, 1e-6).unwrap(), g);
        let same = separation_flow(&p, &m, &m.to_graph(), 1e-3, &FlowOptions::default(), None).unwrap();
        assert_eq!(same.packing.max_deviation(&p), 0.0);
    }

    #[test]
    fn radius_floor_is_tiny() {
        assert!(radius_floor(12) < 1e-20);
        assert!((radius_floor(1) - 1.0 / 7.0).abs() < 1e-16);
    }
}
