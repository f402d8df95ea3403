//! The `katflow` command line.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use log::info;

use crate::error::{Error, Result};
use crate::flow::{choose_marks, flip_flow, FlowOptions, FlowState};
use crate::graph::Edge;
use crate::io::{contact_violations, read_graph, PackingDocument};
use crate::solver::{solve_planar_with, trilaterated_packing, SolveOptions};
use crate::svg::{render_svg, SvgOptions};
use crate::triangulation::{trilaterated_graph, StackingPlan};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "katflow", version, about = "Disk packings with a prescribed planar contact graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a packing whose contact graph is the input graph.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Directory receiving one SVG per accepted flow step.
        #[arg(long)]
        frames: Option<PathBuf>,
        /// Contact tolerance on |invdist - 1|.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Randomizes the seed triangulation and hence the flip path.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check that a packing realizes a graph exactly.
    Verify {
        #[arg(long)]
        packing: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Flow a single flip on the trilaterated fan packing.
    FlowDemo {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long)]
        frames: Option<PathBuf>,
        /// Final packing as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Solve { graph, out, svg, frames, tol, seed, report } => {
            solve(&graph, &out, svg.as_deref(), frames.as_deref(), tol, seed, report.as_deref())
        }
        Command::Verify { packing, graph, tol } => verify(&packing, &graph, tol),
        Command::FlowDemo { n, frames, out } => flow_demo(n, frames.as_deref(), out.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                EXIT_BAD_INPUT
            } else {
                EXIT_FAILURE
            }
        }
    }
}

/// Installs the logger; `KATFLOW_LOG` sets the level (default `warn`).
pub fn init_logging() {
    let env = env_logger::Env::new().filter_or("KATFLOW_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

fn near_contacts(p: &crate::disks::Packing, tol: f64) -> Vec<Edge> {
    let mut out = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if (p.invdist(i, j) - 1.0).abs() <= tol {
                out.push(Edge(i, j));
            }
        }
    }
    out
}

fn frame_svg(state: &FlowState, caption: String, highlight: Vec<Edge>) -> String {
    let opts = SvgOptions {
        contacts: near_contacts(&state.packing, 1e-6),
        highlight,
        incircle: true,
        labels: true,
        caption: Some(caption),
    };
    render_svg(&state.packing, &opts)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn solve(
    graph: &Path,
    out: &Path,
    svg: Option<&Path>,
    frames: Option<&Path>,
    tol: f64,
    seed: Option<u64>,
    report: Option<&Path>,
) -> Result<i32> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!("--tol must be positive, got {tol}")));
    }
    let g = read_graph(graph)?;
    let opts = SolveOptions { seed, contact_tol: tol, ..SolveOptions::default() };
    if let Some(dir) = frames {
        fs::create_dir_all(dir)?;
    }
    let mut frame_err: Option<Error> = None;
    let mut count = 0usize;
    let mut sink = |flip: usize, state: &FlowState| {
        let Some(dir) = frames else { return };
        if frame_err.is_some() {
            return;
        }
        let caption = format!("flip {flip}  s = {:.6}  f+ = {:.6}", state.s, state.f_plus);
        let path = dir.join(format!("frame_{count:05}.svg"));
        if let Err(e) = write_text(&path, &frame_svg(state, caption, Vec::new())) {
            frame_err = Some(e);
        }
        count += 1;
    };
    let (p, rep) = solve_planar_with(&g, &opts, Some(&mut sink))?;
    if let Some(e) = frame_err {
        return Err(e);
    }
    info!("solved n = {} with {} flips", g.n, rep.flip_count);
    let doc = PackingDocument::new(&p, tol).with_provenance(&g, rep.flip_count, seed);
    doc.write(out)?;
    if let Some(path) = svg {
        let opts = SvgOptions { contacts: g.edges.iter().copied().collect(), labels: true, ..Default::default() };
        write_text(path, &render_svg(&p, &opts))?;
    }
    if let Some(path) = report {
        let mut text = serde_json::to_string_pretty(&rep)?;
        text.push('\n');
        write_text(path, &text)?;
    }
    println!(
        "solved: {} disks, {} contacts, {} flips, max contact residual {:.3e}",
        p.len(),
        doc.contacts.len(),
        rep.flip_count,
        rep.verification.max_contact_residual
    );
    Ok(EXIT_OK)
}

fn verify(packing: &Path, graph: &Path, tol: f64) -> Result<i32> {
    let doc = PackingDocument::read(packing)?;
    let g = read_graph(graph)?;
    let disks = doc.to_disks()?;
    let violations = contact_violations(&disks, &g, tol)?;
    if violations.is_empty() {
        println!("ok: contact graph matches ({} disks, {} edges, tol {tol:e})", g.n, g.edge_count());
        return Ok(EXIT_OK);
    }
    println!("verification failed: {} violated pairs", violations.len());
    for v in &violations {
        let what = if v.expected_contact { "edge not tangent" } else { "non-edge touching or overlapping" };
        println!("  {}: {what}, invdist = {:.12}", v.edge, v.invdist);
    }
    Ok(EXIT_FAILURE)
}

fn flow_demo(n: usize, frames: Option<&Path>, out: Option<&Path>) -> Result<i32> {
    if n < 5 {
        return Err(Error::Domain(format!("flow-demo needs n >= 5, got {n}")));
    }
    let plan = StackingPlan::fan(n);
    let g = trilaterated_graph(&plan)?;
    let p = trilaterated_packing(&plan)?;
    let e = Edge(0, 3);
    let marks = choose_marks(&g.remove_edge(e)?, e);
    let (a, c) = g.apexes(e.0, e.1)?;
    let e_plus = Edge::new(a, c);
    if let Some(dir) = frames {
        fs::create_dir_all(dir)?;
    }
    let mut states: Vec<FlowState> = Vec::new();
    let mut keep = |s: &FlowState| states.push(s.clone());
    let outcome = flip_flow(&p, &g, e, marks, &FlowOptions::default(), Some(&mut keep)).map_err(Error::from)?;
    if let Some(dir) = frames {
        let mut last = states.last().cloned().expect("flow records its start");
        last.packing = outcome.packing.clone();
        states.push(last);
        for (k, st) in states.iter().enumerate() {
            let caption = format!("{e} -> {e_plus}  invdist(e-) = {:.6}  invdist(e+) = {:.6}", st.s, st.f_plus);
            let path = dir.join(format!("frame_{k:05}.svg"));
            write_text(&path, &frame_svg(st, caption, vec![e, e_plus]))?;
        }
    }
    if let Some(path) = out {
        PackingDocument::new(&outcome.packing, 1e-6).with_provenance(&outcome.graph.to_graph(), 1, None).write(path)?;
    }
    println!(
        "flipped {e} -> {}: {} accepted steps, {} rejected, min radius {:.6}",
        outcome.mv.inserted,
        outcome.trace.samples.len(),
        outcome.trace.rejected_steps,
        outcome.trace.min_radius()
    );
    Ok(EXIT_OK)
}
